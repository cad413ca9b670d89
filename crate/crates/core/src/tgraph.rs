//! Transition graphs over configurations and their limit behaviours.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::configuration::{AutomataSet, Configuration};
use crate::error::{Error, Result};
use crate::limits;
use crate::network::Network;
use crate::schedule::{global_function, reachable_sets, UpdateSchedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    Gtg,
    Atg,
    EffGtg,
    EffAtg,
    TDelta,
    TDeltaElem,
    Observed,
    Custom,
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphKind::Gtg => "gtg",
            GraphKind::Atg => "atg",
            GraphKind::EffGtg => "eff_gtg",
            GraphKind::EffAtg => "eff_atg",
            GraphKind::TDelta => "t_delta",
            GraphKind::TDeltaElem => "t_delta_elem",
            GraphKind::Observed => "observed",
            GraphKind::Custom => "custom",
        })
    }
}

/// A configuration, tagged with a schedule phase in phased graphs
/// (phase is 0 everywhere else).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Node {
    pub phase: usize,
    pub config: Configuration,
}

impl Node {
    pub fn plain(config: Configuration) -> Self {
        Node { phase: 0, config }
    }

    pub fn phased(phase: usize, config: Configuration) -> Self {
        Node { phase, config }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arc {
    pub source: Node,
    pub target: Node,
    /// Update set, or `None` for unlabelled arcs.
    pub label: Option<AutomataSet>,
}

impl Arc {
    pub fn is_loop(&self) -> bool {
        self.source == self.target
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionGraph {
    pub n: usize,
    pub kind: GraphKind,
    pub multigraph: bool,
    phased: bool,
    nodes: Vec<Node>,
    /// Sorted by (source, target, label).
    arcs: Vec<Arc>,
}

impl TransitionGraph {
    /// Builds a graph from arbitrary arcs; nodes are sorted and arcs
    /// sorted and deduplicated. Every arc endpoint must be a node.
    pub fn from_parts(
        n: usize,
        kind: GraphKind,
        multigraph: bool,
        mut nodes: Vec<Node>,
        mut arcs: Vec<Arc>,
    ) -> Result<Self> {
        nodes.sort_unstable();
        nodes.dedup();
        arcs.sort_unstable();
        arcs.dedup();
        for node in &nodes {
            if node.config.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: node.config.len(),
                });
            }
        }
        for a in &arcs {
            for end in [a.source, a.target] {
                if nodes.binary_search(&end).is_err() {
                    return Err(Error::LengthMismatch {
                        expected: n,
                        found: end.config.len(),
                    });
                }
            }
        }
        let phased = nodes.iter().any(|v| v.phase != 0);
        Ok(TransitionGraph {
            n,
            kind,
            multigraph,
            phased,
            nodes,
            arcs,
        })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn is_phased(&self) -> bool {
        self.phased
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn index_of(&self, node: Node) -> Option<usize> {
        self.nodes.binary_search(&node).ok()
    }

    /// Arcs leaving `node`.
    pub fn out_arcs(&self, node: Node) -> &[Arc] {
        let lo = self.arcs.partition_point(|a| a.source < node);
        let hi = self.arcs.partition_point(|a| a.source <= node);
        &self.arcs[lo..hi]
    }

    pub fn out_degree(&self, node: Node) -> usize {
        self.out_arcs(node).len()
    }

    pub fn has_arc(&self, source: Node, target: Node, label: Option<AutomataSet>) -> bool {
        self.arcs
            .binary_search(&Arc {
                source,
                target,
                label,
            })
            .is_ok()
    }

    /// Any arc between two plain configurations, whatever its label.
    pub fn connects(&self, x: Configuration, y: Configuration) -> bool {
        let target = Node::plain(y);
        self.out_arcs(Node::plain(x)).iter().any(|a| a.target == target)
    }

    /// CSR successor lists over node indices, loops and parallel arcs kept.
    fn adjacency(&self) -> (Vec<usize>, Vec<usize>) {
        let mut offsets = Vec::with_capacity(self.nodes.len() + 1);
        let mut targets = Vec::with_capacity(self.arcs.len());
        let mut k = 0;
        for node in &self.nodes {
            offsets.push(targets.len());
            while k < self.arcs.len() && self.arcs[k].source == *node {
                targets.push(self.index_of(self.arcs[k].target).expect("arc target is a node"));
                k += 1;
            }
        }
        offsets.push(targets.len());
        (offsets, targets)
    }
}

fn plain_nodes(n: usize) -> Vec<Node> {
    Configuration::all(n).map(Node::plain).collect()
}

/// Sorts arcs that were emitted grouped by ascending source.
fn sort_per_source(arcs: &mut [Arc]) {
    let mut start = 0;
    while start < arcs.len() {
        let source = arcs[start].source;
        let mut end = start;
        while end < arcs.len() && arcs[end].source == source {
            end += 1;
        }
        if !arcs[start..end].is_sorted() {
            arcs[start..end].sort_unstable();
        }
        start = end;
    }
}

fn assembled(n: usize, kind: GraphKind, multigraph: bool, nodes: Vec<Node>, mut arcs: Vec<Arc>) -> TransitionGraph {
    sort_per_source(&mut arcs);
    TransitionGraph {
        n,
        kind,
        multigraph,
        phased: nodes.iter().any(|v| v.phase != 0),
        nodes,
        arcs,
    }
}

/// Every elementary transition `(x, F_W(x), W)` with `W ≠ ∅`.
pub fn build_gtg(net: &Network) -> Result<TransitionGraph> {
    let n = net.n();
    limits::check_multigraph(n)?;
    net.image_table()?;
    let mut arcs = Vec::with_capacity((1usize << n) * ((1usize << n) - 1));
    for x in Configuration::all(n) {
        for w in (1..1u64 << n).map(AutomataSet::from_bits) {
            arcs.push(Arc {
                source: Node::plain(x),
                target: Node::plain(net.update_unchecked(x, w)),
                label: Some(w),
            });
        }
    }
    Ok(assembled(n, GraphKind::Gtg, true, plain_nodes(n), arcs))
}

/// Asynchronous transitions `(x, F_{i}(x), {i})`.
pub fn build_atg(net: &Network) -> Result<TransitionGraph> {
    let n = net.n();
    limits::check_exhaustive(n)?;
    net.image_table()?;
    let mut arcs = Vec::with_capacity(n << n);
    for x in Configuration::all(n) {
        let u = net.unstable_set(x);
        let arc = |i: usize, y: Configuration| Arc {
            source: Node::plain(x),
            target: Node::plain(y),
            label: Some(AutomataSet::singleton(i)),
        };
        // emitted in arc order: decreasing targets below x, loops, then targets above x
        for i in (0..n).rev().filter(|&i| u.contains(i) && x.get(i)) {
            arcs.push(arc(i, x.flip_unchecked(AutomataSet::singleton(i))));
        }
        for i in (0..n).filter(|&i| !u.contains(i)) {
            arcs.push(arc(i, x));
        }
        for i in (0..n).filter(|&i| u.contains(i) && !x.get(i)) {
            arcs.push(arc(i, x.flip_unchecked(AutomataSet::singleton(i))));
        }
    }
    Ok(assembled(n, GraphKind::Atg, true, plain_nodes(n), arcs))
}

/// Simple digraph keeping effective arcs labelled `D(x, y)` and one loop per
/// node that carries a null update, labelled with the union of null labels.
pub fn effective_version(tg: &TransitionGraph, net: &Network) -> Result<TransitionGraph> {
    if tg.phased {
        return Err(Error::Schedule(
            "effective versions are defined on plain configuration graphs".into(),
        ));
    }
    let n = tg.n;
    if net.n() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: net.n(),
        });
    }
    let mut merged: BTreeMap<(Node, Node), Option<AutomataSet>> = BTreeMap::new();
    for a in &tg.arcs {
        let x = a.source.config;
        let y = a.target.config;
        let u = net.unstable_set(x);
        if a.is_loop() {
            let null_label = match a.label {
                Some(w) if w.intersection(u).is_empty() => Some(w),
                Some(_) => continue,
                None => None,
            };
            let entry = merged.entry((a.source, a.target)).or_insert(null_label);
            if let (Some(acc), Some(w)) = (entry.as_mut(), null_label) {
                *acc = acc.union(w);
            }
        } else {
            let d = x.difference(y);
            if d.is_subset(u) {
                merged.insert((a.source, a.target), Some(d));
            }
        }
    }
    let kind = match tg.kind {
        GraphKind::Gtg => GraphKind::EffGtg,
        GraphKind::Atg => GraphKind::EffAtg,
        other => other,
    };
    let arcs = merged
        .into_iter()
        .map(|((source, target), label)| Arc {
            source,
            target,
            label,
        })
        .collect();
    Ok(TransitionGraph {
        n,
        kind,
        multigraph: false,
        phased: false,
        nodes: tg.nodes.clone(),
        arcs,
    })
}

/// Effective GTG built directly: arcs `(x, flip(x, S), S)` for `∅ ≠ S ⊆ U(x)`
/// plus the null loop labelled `V \ U(x)` when `U(x) ≠ V`.
pub fn build_eff_gtg(net: &Network) -> Result<TransitionGraph> {
    let n = net.n();
    limits::check_exhaustive(n)?;
    net.image_table()?;
    let full = AutomataSet::full(n);
    let mut arcs = Vec::new();
    for x in Configuration::all(n) {
        let u = net.unstable_set(x);
        for s in u.subsets().skip(1) {
            arcs.push(Arc {
                source: Node::plain(x),
                target: Node::plain(x.flip_unchecked(s)),
                label: Some(s),
            });
        }
        if u != full {
            arcs.push(Arc {
                source: Node::plain(x),
                target: Node::plain(x),
                label: Some(full.minus(u)),
            });
        }
    }
    Ok(assembled(n, GraphKind::EffGtg, false, plain_nodes(n), arcs))
}

/// Effective ATG built directly: one arc per unstable automaton plus the
/// null loop labelled with the stable automata.
pub fn build_eff_atg(net: &Network) -> Result<TransitionGraph> {
    let n = net.n();
    limits::check_exhaustive(n)?;
    net.image_table()?;
    let full = AutomataSet::full(n);
    let mut arcs = Vec::with_capacity((n + 1) << n);
    for x in Configuration::all(n) {
        let u = net.unstable_set(x);
        for i in u.iter() {
            let w = AutomataSet::singleton(i);
            arcs.push(Arc {
                source: Node::plain(x),
                target: Node::plain(x.flip_unchecked(w)),
                label: Some(w),
            });
        }
        if u != full {
            arcs.push(Arc {
                source: Node::plain(x),
                target: Node::plain(x),
                label: Some(full.minus(u)),
            });
        }
    }
    Ok(assembled(n, GraphKind::EffAtg, false, plain_nodes(n), arcs))
}

/// Graph of `F[δ]`: exactly one unlabelled arc out of each configuration.
pub fn build_t_delta(net: &Network, s: &UpdateSchedule) -> Result<TransitionGraph> {
    let n = net.n();
    let f = global_function(net, s)?;
    let arcs = Configuration::all(n)
        .map(|x| Arc {
            source: Node::plain(x),
            target: Node::plain(f[x.index()]),
            label: None,
        })
        .collect();
    Ok(assembled(n, GraphKind::TDelta, false, plain_nodes(n), arcs))
}

/// Phase-indexed elementary decomposition of `T_δ`: nodes `(t, x)` with
/// `x ∈ X_t`, `t < p`, arcs `((t, x), (t+1 mod p, F_{W_t}(x)), W_t)`.
pub fn build_t_delta_elem(net: &Network, s: &UpdateSchedule) -> Result<TransitionGraph> {
    if !s.is_periodic() {
        return Err(Error::NotPeriodic);
    }
    let n = net.n();
    let p = s.period();
    let reach = reachable_sets(net, s, Some(p))?;
    let mut nodes = Vec::new();
    let mut arcs = Vec::new();
    for t in 0..p {
        let w = s.blocks()[t];
        for &x in &reach.sets[t] {
            nodes.push(Node::phased(t, x));
            arcs.push(Arc {
                source: Node::phased(t, x),
                target: Node::phased((t + 1) % p, net.update_unchecked(x, w)),
                label: Some(w),
            });
        }
    }
    Ok(assembled(n, GraphKind::TDeltaElem, false, nodes, arcs))
}

/// A terminal strongly connected component with more than one member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Oscillation {
    pub members: Vec<Configuration>,
    /// Cycle length for deterministic graphs, component size otherwise.
    pub period: usize,
    pub deterministic: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct AttractorReport {
    pub stable: Vec<Configuration>,
    pub oscillations: Vec<Oscillation>,
    pub transient: Vec<Configuration>,
    pub recurrent: Vec<Configuration>,
}

impl AttractorReport {
    pub fn is_stable(&self, x: Configuration) -> bool {
        self.stable.binary_search(&x).is_ok()
    }

    pub fn is_transient(&self, x: Configuration) -> bool {
        self.transient.binary_search(&x).is_ok()
    }
}

impl fmt::Display for AttractorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |xs: &[Configuration]| {
            xs.iter().map(|x| x.tuple()).collect::<Vec<_>>().join(", ")
        };
        writeln!(f, "stable: {{{}}}", list(&self.stable))?;
        if self.oscillations.is_empty() {
            writeln!(f, "oscillations: none")?;
        }
        for o in &self.oscillations {
            writeln!(
                f,
                "oscillation: {{{}}} period {}{}",
                list(&o.members),
                o.period,
                if o.deterministic { "" } else { " (nondeterministic)" }
            )?;
        }
        writeln!(f, "transient: {{{}}}", list(&self.transient))?;
        writeln!(f, "recurrent: {{{}}}", list(&self.recurrent))
    }
}

/// Strongly connected components, iterative Tarjan. Returns the component
/// id of each node.
fn tarjan(offsets: &[usize], targets: &[usize]) -> (Vec<usize>, usize) {
    const UNSEEN: usize = usize::MAX;
    let nv = offsets.len() - 1;
    let mut index = vec![UNSEEN; nv];
    let mut low = vec![0; nv];
    let mut on_stack = vec![false; nv];
    let mut comp = vec![UNSEEN; nv];
    let mut stack = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    let mut counter = 0;
    let mut ncomp = 0;
    for root in 0..nv {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, offsets[root]));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut next)) = call.last_mut() {
            if *next < offsets[v + 1] {
                let w = targets[*next];
                *next += 1;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, offsets[w]));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp[w] = ncomp;
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }
    (comp, ncomp)
}

/// Terminal SCC analysis. Phased graphs are reported on their phase-0 slice:
/// a terminal component meeting phase 0 in one configuration is a stable
/// configuration of the composed map, otherwise an oscillation whose period
/// is the slice size.
pub fn attractors(tg: &TransitionGraph) -> AttractorReport {
    let (offsets, targets) = tg.adjacency();
    let (comp, ncomp) = tarjan(&offsets, &targets);
    let mut terminal = vec![true; ncomp];
    for v in 0..tg.nodes.len() {
        for &w in &targets[offsets[v]..offsets[v + 1]] {
            if comp[w] != comp[v] {
                terminal[comp[v]] = false;
            }
        }
    }
    let distinct_successors = |v: usize| {
        let mut ts: Vec<usize> = targets[offsets[v]..offsets[v + 1]].to_vec();
        ts.sort_unstable();
        ts.dedup();
        ts.len()
    };

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); ncomp];
    for (v, &c) in comp.iter().enumerate() {
        members[c].push(v);
    }

    let mut report = AttractorReport::default();
    let mut oscillations = Vec::new();
    for (c, vs) in members.iter().enumerate() {
        let slice: Vec<Configuration> = vs
            .iter()
            .map(|&v| tg.nodes[v])
            .filter(|node| node.phase == 0)
            .map(|node| node.config)
            .collect();
        if !terminal[c] {
            report.transient.extend(slice);
            continue;
        }
        report.recurrent.extend(slice.iter().copied());
        if slice.len() == 1 {
            report.stable.push(slice[0]);
        } else if slice.len() > 1 {
            let deterministic = vs.iter().all(|&v| distinct_successors(v) == 1);
            let mut m = slice;
            m.sort();
            oscillations.push(Oscillation {
                period: m.len(),
                members: m,
                deterministic,
            });
        }
    }
    report.stable.sort();
    report.transient.sort();
    report.recurrent.sort();
    oscillations.sort_by(|a, b| a.members.cmp(&b.members));
    report.oscillations = oscillations;
    report
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.phase, self.config)
    }
}

impl Serialize for Node {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl TransitionGraph {
    fn node_name(&self, node: Node) -> String {
        if self.phased {
            node.to_string()
        } else {
            node.config.to_string()
        }
    }

    /// Nodes in (phase, integer rendering) order; stable configurations
    /// double-circled, transient ones dashed.
    pub fn to_dot(&self) -> String {
        let report = attractors(self);
        let mut out = format!("digraph {} {{\n  node [shape=circle];\n", self.kind);
        for &node in &self.nodes {
            let mut attrs = Vec::new();
            if node.phase == 0 && report.is_stable(node.config) {
                attrs.push("shape=doublecircle");
            }
            if node.phase == 0 && report.is_transient(node.config) {
                attrs.push("style=dashed");
            }
            let name = self.node_name(node);
            if attrs.is_empty() {
                out.push_str(&format!("  \"{name}\";\n"));
            } else {
                out.push_str(&format!("  \"{name}\" [{}];\n", attrs.join(", ")));
            }
        }
        for a in &self.arcs {
            let label = a
                .label
                .map(|w| format!(" [label=\"{w}\"]"))
                .unwrap_or_default();
            out.push_str(&format!(
                "  \"{}\" -> \"{}\"{label};\n",
                self.node_name(a.source),
                self.node_name(a.target)
            ));
        }
        out.push_str("}\n");
        out
    }

    /// One arc per line: `source -> target W`.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} (n = {}, {} nodes, {} arcs)\n",
            self.kind,
            self.n,
            self.nodes.len(),
            self.arcs.len()
        );
        for a in &self.arcs {
            out.push_str(&format!("{} -> {}", self.node_name(a.source), self.node_name(a.target)));
            if let Some(w) = a.label {
                out.push_str(&format!(" {w}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let arcs: Vec<serde_json::Value> = self
            .arcs
            .iter()
            .map(|a| {
                serde_json::json!({
                    "source": self.node_name(a.source),
                    "target": self.node_name(a.target),
                    "label": a.label,
                })
            })
            .collect();
        let nodes: Vec<String> = self.nodes.iter().map(|&v| self.node_name(v)).collect();
        serde_json::json!({
            "schema": 1,
            "kind": self.kind,
            "n": self.n,
            "multigraph": self.multigraph,
            "nodes": nodes,
            "arcs": arcs,
            "report": attractors(self),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> Network {
        Network::parse(&["1", "x1 | (x0 & !x2)", "!x1"]).unwrap()
    }

    fn c(s: &str) -> Configuration {
        s.parse().unwrap()
    }

    fn w(s: &str) -> AutomataSet {
        s.parse().unwrap()
    }

    fn p(s: &str) -> Node {
        Node::plain(c(s))
    }

    #[test]
    fn degrees_and_example_arcs() {
        let net = example();
        let gtg = build_gtg(&net).unwrap();
        let atg = build_atg(&net).unwrap();
        for x in Configuration::all(3) {
            assert_eq!(gtg.out_degree(Node::plain(x)), 7);
            assert_eq!(atg.out_degree(Node::plain(x)), 3);
        }
        assert!(atg.has_arc(p("000"), p("100"), Some(w("{0}"))));
        assert!(gtg.has_arc(p("011"), p("110"), Some(w("{0,2}"))));
        let id = build_atg(&Network::identity(2)).unwrap();
        assert!(id.arcs().iter().all(Arc::is_loop));
    }

    #[test]
    fn effective_versions_agree_with_direct_builds() {
        let net = example();
        let via = effective_version(&build_gtg(&net).unwrap(), &net).unwrap();
        let direct = build_eff_gtg(&net).unwrap();
        assert_eq!(via, direct);
        assert_eq!(direct.arcs().iter().filter(|a| !a.is_loop()).count(), 12);
        assert_eq!(direct.arcs().iter().filter(|a| a.is_loop()).count(), 8);
        assert!(direct.has_arc(p("000"), p("000"), Some(w("{1}"))));
        assert!(direct.has_arc(p("101"), p("101"), Some(w("{0,1,2}"))));

        let via = effective_version(&build_atg(&net).unwrap(), &net).unwrap();
        assert_eq!(via, build_eff_atg(&net).unwrap());
    }

    #[test]
    fn effective_version_of_loops_only() {
        let id = Network::identity(2);
        let g = build_eff_atg(&id).unwrap();
        assert_eq!(effective_version(&g, &id).unwrap(), g);
    }

    #[test]
    fn t_delta_of_the_example() {
        let net = example();
        let s: UpdateSchedule = "{1} {0,2}".parse().unwrap();
        let t = build_t_delta(&net, &s).unwrap();
        for x in Configuration::all(3) {
            assert_eq!(t.out_degree(Node::plain(x)), 1);
            let want = if ["000", "001", "101"].contains(&x.to_string().as_str()) {
                c("101")
            } else {
                c("110")
            };
            assert!(t.connects(x, want), "{x}");
        }
        let e = build_t_delta_elem(&net, &s).unwrap();
        assert!(e.has_arc(Node::phased(0, c("100")), Node::phased(1, c("110")), Some(w("{1}"))));
        assert!(e.has_arc(Node::phased(1, c("110")), Node::phased(0, c("110")), Some(w("{0,2}"))));
        assert_eq!(e.node_count(), 15);
    }

    #[test]
    fn attractor_examples() {
        let net = example();
        let r = attractors(&build_eff_gtg(&net).unwrap());
        assert_eq!(r.stable, vec![c("110"), c("101")]);
        assert!(r.oscillations.is_empty());
        assert_eq!(r.transient.len(), 6);

        let swap = Network::parse(&["x1", "x0"]).unwrap();
        let r = attractors(&build_t_delta(&swap, &UpdateSchedule::parallel(2)).unwrap());
        assert_eq!(r.stable, vec![c("00"), c("11")]);
        assert_eq!(r.oscillations.len(), 1);
        assert_eq!(r.oscillations[0].members, vec![c("10"), c("01")]);
        assert_eq!(r.oscillations[0].period, 2);
        assert!(r.oscillations[0].deterministic);

        let single = TransitionGraph::from_parts(
            1,
            GraphKind::Custom,
            false,
            vec![p("0")],
            vec![Arc { source: p("0"), target: p("0"), label: None }],
        )
        .unwrap();
        assert_eq!(attractors(&single).stable, vec![c("0")]);
    }

    #[test]
    fn phased_report_uses_phase_zero() {
        let net = example();
        let s: UpdateSchedule = "{1} {0,2}".parse().unwrap();
        let r = attractors(&build_t_delta_elem(&net, &s).unwrap());
        assert_eq!(r.stable, vec![c("110"), c("101")]);
        assert_eq!(r.transient.len(), 6);
    }

    #[test]
    fn dot_and_json_exports() {
        let g = build_eff_gtg(&example()).unwrap();
        let dot = g.to_dot();
        assert!(dot.contains("\"101\" [shape=doublecircle]"));
        assert!(dot.contains("\"000\" [style=dashed]"));
        assert!(dot.contains("\"000\" -> \"101\" [label=\"{0,2}\"]"));
        assert_eq!(dot, g.to_dot());
        let json = g.to_json();
        assert_eq!(json["schema"], 1);
        assert_eq!(json["kind"], "eff_gtg");
        assert_eq!(json["arcs"].as_array().unwrap().len(), 20);
    }
}
