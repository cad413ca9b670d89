mod common;

use std::collections::BTreeSet;

use banlab_core::schedule::{global_function, trajectory, ScheduleClass};
use banlab_core::tgraph::{
    attractors, build_atg, build_eff_atg, build_eff_gtg, build_gtg, build_t_delta, build_t_delta_elem,
    Node,
};
use banlab_core::{Configuration, Network, UpdateSchedule};
use common::*;
use proptest::prelude::*;

fn arc_pairs(tg: &banlab_core::TransitionGraph) -> BTreeSet<(Configuration, Configuration, Option<banlab_core::AutomataSet>)> {
    tg.arcs()
        .iter()
        .map(|a| (a.source.config, a.target.config, a.label))
        .collect()
}

proptest! {
    #[test]
    fn function_view_round_trips(s in arb_schedule(4, 5)) {
        let view = s.function_view(4);
        let back = UpdateSchedule::from_function_view(&view, true).unwrap();
        prop_assert_eq!(back.function_view(4), view);
        prop_assert_eq!(back, s);
    }

    #[test]
    fn rotation_is_an_equivalence(s in arb_schedule(3, 4), a in 0usize..4, b in 0usize..4) {
        let t = s.rotate(a);
        let u = t.rotate(b);
        prop_assert!(s.rotation_equivalent(&s));
        prop_assert_eq!(s.rotation_equivalent(&t), t.rotation_equivalent(&s));
        prop_assert!(s.rotation_equivalent(&u));
    }

    #[test]
    fn rotated_trajectories_merge(net in arb_network(4), s in arb_schedule(4, 4), shift in 0usize..4, seed in any::<u64>()) {
        let n = net.n();
        prop_assume!(s.check_size(n).is_ok());
        let delta = shift % s.period();
        let rotated = s.rotate(delta);
        let x = Configuration::new(seed % (1 << n), n);
        let steps = 3 * s.period() + delta;
        let original = trajectory(&net, &s, x, steps).unwrap().configurations();
        let start = original[delta];
        let other = trajectory(&net, &rotated, start, steps - delta).unwrap().configurations();
        prop_assert_eq!(&original[delta..], &other[..]);
    }

    #[test]
    fn block_sequential_fixed_points_are_stable(net in arb_network(4), seed in any::<u64>()) {
        let n = net.n();
        let mut order: Vec<usize> = (0..n).collect();
        // deterministic shuffle from the seed
        for i in (1..n).rev() {
            order.swap(i, (seed as usize >> (i * 3)) % (i + 1));
        }
        let s = UpdateSchedule::sequential(&order).unwrap();
        prop_assert!(s.classify(n).unwrap().contains(&ScheduleClass::BlockSequential));
        let f = global_function(&net, &s).unwrap();
        for x in Configuration::all(n) {
            if f[x.index()] == x {
                prop_assert!(net.is_stable(x));
            }
        }
    }

    #[test]
    fn degrees_and_spanning_subgraphs(net in arb_network(4)) {
        let n = net.n();
        let gtg = build_gtg(&net).unwrap();
        let atg = build_atg(&net).unwrap();
        for x in Configuration::all(n) {
            let node = Node::plain(x);
            prop_assert_eq!(gtg.out_degree(node), (1 << n) - 1);
            prop_assert_eq!(atg.out_degree(node), n);
        }
        prop_assert!(arc_pairs(&atg).is_subset(&arc_pairs(&gtg)));
        let (ea, eg) = (build_eff_atg(&net).unwrap(), build_eff_gtg(&net).unwrap());
        prop_assert!(arc_pairs(&ea).is_subset(&arc_pairs(&eg)));
    }

    #[test]
    fn t_delta_contracts_elementary_paths(net in arb_network(4), s in arb_schedule(4, 3)) {
        let n = net.n();
        prop_assume!(s.check_size(n).is_ok());
        let td = build_t_delta(&net, &s).unwrap();
        let elem = build_t_delta_elem(&net, &s).unwrap();
        let p = s.period();
        let mut contracted = BTreeSet::new();
        for x in Configuration::all(n) {
            let mut frontier = vec![x];
            for t in 0..p {
                let mut next = Vec::new();
                for y in frontier {
                    for a in elem.out_arcs(Node::phased(t, y)) {
                        next.push(a.target.config);
                    }
                }
                frontier = next;
            }
            for y in frontier {
                contracted.insert((x, y));
            }
        }
        let direct: BTreeSet<_> = td.arcs().iter().map(|a| (a.source.config, a.target.config)).collect();
        prop_assert_eq!(direct, contracted);
    }

    #[test]
    fn attractors_match_closure_oracle(net in arb_network(4)) {
        let n = net.n();
        for tg in [build_eff_gtg(&net).unwrap(), build_eff_atg(&net).unwrap(), build_gtg(&net).unwrap()] {
            let succ: Vec<Vec<usize>> = Configuration::all(n)
                .map(|x| tg.out_arcs(Node::plain(x)).iter().map(|a| a.target.config.index()).collect())
                .collect();
            let reach = closure(&succ);
            let m = 1usize << n;
            let recurrent: Vec<bool> = (0..m).map(|v| (0..m).all(|u| !reach[v][u] || reach[u][v])).collect();
            let report = attractors(&tg);
            let mut oscillating = BTreeSet::new();
            for v in 0..m {
                let x = Configuration::new(v as u64, n);
                let class = (0..m).filter(|&u| reach[v][u] && reach[u][v]).count();
                prop_assert_eq!(report.is_transient(x), !recurrent[v]);
                prop_assert_eq!(report.is_stable(x), recurrent[v] && class == 1);
                if recurrent[v] && class > 1 {
                    oscillating.insert(x);
                }
            }
            let reported: BTreeSet<_> = report.oscillations.iter().flat_map(|o| o.members.clone()).collect();
            prop_assert_eq!(reported, oscillating);
        }
    }
}

#[test]
fn omitting_an_unstable_automaton_hides_instability() {
    // automaton 2 is never updated, so (1,1,1) looks fixed although f2 = 0 there
    let net = example_network();
    let s: UpdateSchedule = "{0} {1}".parse().unwrap();
    assert!(!s.classify(3).unwrap().contains(&ScheduleClass::BlockSequential));
    let f = global_function(&net, &s).unwrap();
    let fake: Vec<Configuration> = Configuration::all(3)
        .filter(|&x| f[x.index()] == x && !net.is_stable(x))
        .collect();
    assert_eq!(fake, vec![c("111")]);
    assert_eq!(net.unstable_set(c("111")), w("{2}"));
}

#[test]
fn swap_network_oscillates_in_parallel() {
    let tg = build_t_delta(&swap_network(), &UpdateSchedule::parallel(2)).unwrap();
    let report = attractors(&tg);
    assert_eq!(report.oscillations.len(), 1);
    assert_eq!(report.oscillations[0].members, vec![c("10"), c("01")]);
    assert_eq!(report.oscillations[0].period, 2);
    assert_eq!(report.stable, vec![c("00"), c("11")]);
}

#[test]
fn identity_network_graphs() {
    let id = Network::identity(3);
    let eg = build_eff_gtg(&id).unwrap();
    assert!(eg.arcs().iter().all(|a| a.is_loop()));
    assert_eq!(attractors(&eg).stable.len(), 8);
}
