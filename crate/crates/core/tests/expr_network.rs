mod common;

use banlab_core::expr::parse_expression;
use banlab_core::{AutomataSet, Configuration, Network};
use common::*;
use proptest::prelude::*;

fn table(e: &banlab_core::Expr, n: usize) -> Vec<bool> {
    (0..1u64 << n).map(|b| e.eval_bits(b)).collect()
}

proptest! {
    #[test]
    fn printing_then_parsing_keeps_the_truth_table(e in arb_expr(4)) {
        let text = e.to_string();
        let back = parse_expression(&text, 4).unwrap();
        prop_assert_eq!(table(&back, 4), table(&e, 4));
        let again = parse_expression(&back.to_string(), 4).unwrap();
        prop_assert_eq!(table(&again, 4), table(&e, 4));
    }

    #[test]
    fn dependency_matches_table_comparison(e in arb_expr(4), j in 0usize..4) {
        let t = table(&e, 4);
        let differs = (0..16usize).any(|b| b & (1 << j) == 0 && t[b] != t[b | (1 << j)]);
        prop_assert_eq!(e.depends_on(j, 4).unwrap().is_some(), differs);
    }

    #[test]
    fn evaluation_is_repeatable(e in arb_expr(4), b in 0u64..16) {
        let x = Configuration::new(b, 4);
        prop_assert_eq!(e.evaluate(x), e.evaluate(x));
    }

    #[test]
    fn update_only_touches_unstable_members_of_w(net in arb_network(4), seed in any::<u64>()) {
        let n = net.n();
        let x = Configuration::new(seed % (1 << n), n);
        let u = net.unstable_set(x);
        for wb in 0..1u64 << n {
            let w = AutomataSet::from_bits(wb);
            let y = net.update(x, w).unwrap();
            prop_assert_eq!(y, net.update(x, w.intersection(u)).unwrap());
            prop_assert_eq!(y, x.flip(w.intersection(u)).unwrap());
        }
    }

    #[test]
    fn overlapping_updates_agree(net in arb_network(4), seed in any::<u64>(), a in any::<u64>(), b in any::<u64>()) {
        let n = net.n();
        let mask = (1u64 << n) - 1;
        let x = Configuration::new(seed & mask, n);
        let (w1, w2) = (AutomataSet::from_bits(a & mask), AutomataSet::from_bits(b & mask));
        let (y1, y2) = (net.update(x, w1).unwrap(), net.update(x, w2).unwrap());
        for i in w1.intersection(w2).iter() {
            let fi = net.ltf(i).evaluate(x);
            prop_assert_eq!(y1.get(i), fi);
            prop_assert_eq!(y2.get(i), fi);
        }
    }

    #[test]
    fn elementary_transitions_match_subset_search(net in arb_network(4)) {
        let n = net.n();
        for x in Configuration::all(n) {
            for y in Configuration::all(n) {
                let brute = (0..1u64 << n)
                    .any(|wb| net.update(x, AutomataSet::from_bits(wb)).unwrap() == y);
                prop_assert_eq!(net.is_elementary_transition(x, y).unwrap(), brute);
            }
        }
    }

    #[test]
    fn interaction_arcs_match_table_oracle(net in arb_network(4)) {
        let n = net.n();
        let ig = net.interaction_graph().unwrap();
        let tables = net.truth_tables().unwrap();
        for (i, table) in tables.iter().enumerate() {
            for j in 0..n {
                let ignores_j = (0..1usize << n)
                    .all(|b| table[b] == table[b ^ (1 << j)]);
                prop_assert_eq!(ig.has_arc(j, i), !ignores_j);
            }
        }
    }
}

#[test]
fn example_update_table() {
    let net = example_network();
    let f1: Vec<String> = Configuration::all(3)
        .map(|x| net.update(x, w("{1}")).unwrap().to_string())
        .collect();
    assert_eq!(f1, ["000", "110", "010", "110", "001", "101", "011", "111"]);
}

#[test]
fn network_round_trips_through_tables() {
    let net = example_network();
    let back = Network::from_truth_tables(&net.truth_tables().unwrap()).unwrap();
    assert_eq!(back.truth_tables().unwrap(), net.truth_tables().unwrap());
}
