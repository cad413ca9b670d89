#![allow(dead_code)]

use banlab_core::{AutomataSet, Configuration, Expr, Network, UpdateSchedule};
use proptest::prelude::*;
use rand::Rng;

pub fn c(s: &str) -> Configuration {
    s.parse().unwrap()
}

pub fn w(s: &str) -> AutomataSet {
    s.parse().unwrap()
}

/// The three-automaton network used throughout the examples.
pub fn example_network() -> Network {
    Network::parse(&["1", "x1 | (x0 & !x2)", "!x1"]).unwrap()
}

pub fn swap_network() -> Network {
    Network::parse(&["x1", "x0"]).unwrap()
}

pub fn gene_pair_network() -> Network {
    Network::parse(&["1", "!x0 | x1"]).unwrap()
}

/// Network from explicit truth tables: `n` tables of `2^n` entries.
pub fn arb_network(max_n: usize) -> impl Strategy<Value = Network> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(proptest::collection::vec(any::<bool>(), 1 << n), n)
            .prop_map(|tables| Network::from_truth_tables(&tables).unwrap())
    })
}

pub fn arb_config(n: usize) -> impl Strategy<Value = Configuration> {
    (0..1u64 << n).prop_map(move |b| Configuration::new(b, n))
}

pub fn arb_set(n: usize) -> impl Strategy<Value = AutomataSet> {
    (0..1u64 << n).prop_map(AutomataSet::from_bits)
}

pub fn arb_expr(n: usize) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        any::<bool>().prop_map(Expr::Const),
        (0..n).prop_map(Expr::Var),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(Expr::not),
            proptest::collection::vec(inner.clone(), 2..4).prop_map(Expr::And),
            proptest::collection::vec(inner, 2..4).prop_map(Expr::Or),
        ]
    })
}

/// Periodic schedule with `1..=max_p` non-empty blocks over `n` automata.
pub fn arb_schedule(n: usize, max_p: usize) -> impl Strategy<Value = UpdateSchedule> {
    proptest::collection::vec(1..1u64 << n, 1..=max_p).prop_map(|bits| {
        UpdateSchedule::periodic(bits.into_iter().map(AutomataSet::from_bits).collect()).unwrap()
    })
}

pub fn random_network<R: Rng>(rng: &mut R, n: usize) -> Network {
    let tables: Vec<Vec<bool>> = (0..n)
        .map(|_| (0..1usize << n).map(|_| rng.gen()).collect())
        .collect();
    Network::from_truth_tables(&tables).unwrap()
}

/// A strict schedule: every automaton appears at most once per period.
pub fn random_strict_schedule<R: Rng>(rng: &mut R, n: usize, max_p: usize) -> UpdateSchedule {
    let p = rng.gen_range(1..=max_p);
    let mut blocks = vec![AutomataSet::EMPTY; p];
    for i in 0..n {
        // slot p means "never updated"
        let slot = rng.gen_range(0..=p);
        if slot < p {
            blocks[slot].insert(i);
        }
    }
    blocks.retain(|b| !b.is_empty());
    if blocks.is_empty() {
        blocks.push(AutomataSet::singleton(rng.gen_range(0..n)));
    }
    UpdateSchedule::periodic(blocks).unwrap()
}

/// Reflexive-transitive closure of a successor relation over `2^n` nodes.
pub fn closure(succ: &[Vec<usize>]) -> Vec<Vec<bool>> {
    let m = succ.len();
    let mut reach = vec![vec![false; m]; m];
    for (v, row) in reach.iter_mut().enumerate() {
        let mut stack = vec![v];
        row[v] = true;
        while let Some(u) = stack.pop() {
            for &t in &succ[u] {
                if !row[t] {
                    row[t] = true;
                    stack.push(t);
                }
            }
        }
    }
    reach
}
