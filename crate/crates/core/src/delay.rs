//! Networks with activation, deactivation and signal-response delays.
//!
//! Transitions are asynchronous. Flipping automaton `i` from 0 to 1 takes
//! `d↑_i`, from 1 to 0 takes `d↓_i`, whatever the rest of the configuration.
//! The refined model separates each automaton into a protein (`x_i`) and a
//! gene (`g_i`); a protein change reaches gene `j` after `d^{i→j}`.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;

use ordered_float::OrderedFloat;
use serde::{Deserialize, Serialize};

use crate::configuration::{AutomataSet, Configuration};
use crate::error::{Error, Result};
use crate::network::Network;
use crate::tgraph::{build_eff_atg, TransitionGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Up,
    Down,
}

/// `d↑_i` or `d↓_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DelayLabel {
    pub automaton: usize,
    pub direction: Direction,
}

impl DelayLabel {
    /// The delay that applies when automaton `i` leaves its state in `x`.
    pub fn for_flip(x: Configuration, i: usize) -> Self {
        DelayLabel {
            automaton: i,
            direction: if x.get(i) { Direction::Down } else { Direction::Up },
        }
    }
}

impl fmt::Display for DelayLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrow = match self.direction {
            Direction::Up => "↑",
            Direction::Down => "↓",
        };
        write!(f, "d{arrow}{}", self.automaton)
    }
}

fn check_delay(value: f64, what: &str) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::Delay(format!("{what} must be a positive finite number, got {value}")))
    }
}

/// A network with per-automaton delays and optional per-arc response delays.
///
/// Protein delays may be left unset; operations only fail when they need one
/// that is missing.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayedNetwork {
    base: Network,
    up: Vec<Option<f64>>,
    down: Vec<Option<f64>>,
    response: BTreeMap<(usize, usize), f64>,
}

impl DelayedNetwork {
    pub fn new(base: Network) -> Self {
        let n = base.n();
        DelayedNetwork {
            base,
            up: vec![None; n],
            down: vec![None; n],
            response: BTreeMap::new(),
        }
    }

    /// Sets `d↑_i = up[i]` and `d↓_i = down[i]` for every automaton.
    pub fn with_delays(base: Network, up: &[f64], down: &[f64]) -> Result<Self> {
        let mut d = DelayedNetwork::new(base);
        let n = d.n();
        for v in [up, down] {
            if v.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: v.len(),
                });
            }
        }
        for i in 0..n {
            d.set_up(i, up[i])?;
            d.set_down(i, down[i])?;
        }
        Ok(d)
    }

    pub fn base(&self) -> &Network {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.n() {
            return Err(Error::IndexOutOfRange { index: i, n: self.n() });
        }
        Ok(())
    }

    pub fn set_up(&mut self, i: usize, value: f64) -> Result<()> {
        self.check_index(i)?;
        check_delay(value, "activation delay")?;
        self.up[i] = Some(value);
        Ok(())
    }

    pub fn set_down(&mut self, i: usize, value: f64) -> Result<()> {
        self.check_index(i)?;
        check_delay(value, "deactivation delay")?;
        self.down[i] = Some(value);
        Ok(())
    }

    /// Sets `d^{i→j}`; `(i, j)` must be an interaction-graph arc.
    pub fn set_response(&mut self, i: usize, j: usize, value: f64) -> Result<()> {
        self.check_index(i)?;
        self.check_index(j)?;
        check_delay(value, "response delay")?;
        if !self.base.interaction_graph()?.has_arc(i, j) {
            return Err(Error::Delay(format!(
                "no interaction arc ({i},{j}) to carry a response delay"
            )));
        }
        self.response.insert((i, j), value);
        Ok(())
    }

    /// Sets the same response delay on every interaction arc.
    pub fn set_uniform_response(&mut self, value: f64) -> Result<()> {
        check_delay(value, "response delay")?;
        for (i, j) in self.base.interaction_graph()?.arcs() {
            self.response.insert((i, j), value);
        }
        Ok(())
    }

    pub fn up(&self, i: usize) -> Option<f64> {
        self.up.get(i).copied().flatten()
    }

    pub fn down(&self, i: usize) -> Option<f64> {
        self.down.get(i).copied().flatten()
    }

    pub fn response(&self, i: usize, j: usize) -> Option<f64> {
        self.response.get(&(i, j)).copied()
    }

    pub fn responses(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.response
    }

    pub fn has_responses(&self) -> bool {
        !self.response.is_empty()
    }

    /// The value of `label`, or [`Error::MissingDelay`].
    pub fn delay(&self, label: DelayLabel) -> Result<f64> {
        let (v, kind) = match label.direction {
            Direction::Up => (self.up(label.automaton), "activation"),
            Direction::Down => (self.down(label.automaton), "deactivation"),
        };
        v.ok_or(Error::MissingDelay {
            kind,
            automaton: label.automaton,
        })
    }

    fn check_responses_complete(&self) -> Result<()> {
        let arcs = self.base.interaction_graph()?.arcs();
        if let Some(&(i, j)) = arcs.iter().find(|a| !self.response.contains_key(a)) {
            return Err(Error::Delay(format!(
                "response delay missing on interaction arc ({i},{j})"
            )));
        }
        Ok(())
    }
}

/// The effective asynchronous graph with each non-loop arc tagged by its delay.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayedGraph {
    pub graph: TransitionGraph,
    /// Parallel to `graph.arcs()`; `None` on loops.
    pub delays: Vec<Option<DelayLabel>>,
}

impl DelayedGraph {
    pub fn to_text(&self, dnet: Option<&DelayedNetwork>) -> String {
        let mut out = String::new();
        for (a, d) in self.graph.arcs().iter().zip(&self.delays) {
            let (x, y) = (a.source.config, a.target.config);
            match d {
                Some(label) => {
                    out.push_str(&format!("{x} -{label}-> {y}"));
                    if let Some(v) = dnet.and_then(|dn| dn.delay(*label).ok()) {
                        out.push_str(&format!(" ({v})"));
                    }
                }
                None => {
                    let w = a.label.map(|w| w.to_string()).unwrap_or_default();
                    out.push_str(&format!("{x} -{w}-> {y}"));
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let arcs: Vec<serde_json::Value> = self
            .graph
            .arcs()
            .iter()
            .zip(&self.delays)
            .map(|(a, d)| {
                serde_json::json!({
                    "source": a.source.config,
                    "target": a.target.config,
                    "label": a.label,
                    "delay": d.map(|l| l.to_string()),
                })
            })
            .collect();
        serde_json::json!({ "schema": 1, "n": self.graph.n, "arcs": arcs })
    }
}

pub fn delay_annotated_atg(dnet: &DelayedNetwork) -> Result<DelayedGraph> {
    let graph = build_eff_atg(dnet.base())?;
    let delays = graph
        .arcs()
        .iter()
        .map(|a| {
            let d = a.source.config.difference(a.target.config);
            d.iter()
                .next()
                .map(|i| DelayLabel::for_flip(a.source.config, i))
        })
        .collect();
    Ok(DelayedGraph { graph, delays })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DelayStep {
    pub from: Configuration,
    pub to: Configuration,
    pub label: DelayLabel,
    pub delay: f64,
    /// Cumulative time at which the step completes.
    pub time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DelayRun {
    pub start: Configuration,
    pub steps: Vec<DelayStep>,
    /// Whether the last configuration is stable (otherwise `max_steps` ran out).
    pub stable: bool,
}

impl DelayRun {
    pub fn last(&self) -> Configuration {
        self.steps.last().map_or(self.start, |s| s.to)
    }

    pub fn configurations(&self) -> Vec<Configuration> {
        std::iter::once(self.start)
            .chain(self.steps.iter().map(|s| s.to))
            .collect()
    }
}

impl fmt::Display for DelayRun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.start)?;
        for s in &self.steps {
            write!(f, " -{}-> {}", s.label, s.to)?;
        }
        if self.stable {
            write!(f, " (stable)")
        } else {
            write!(f, " (step bound reached)")
        }
    }
}

/// Always fires the fastest unstable automaton.
///
/// Every unstable automaton of a visited configuration must have a
/// distinct delay; a tie is an error.
pub fn deterministic_run(dnet: &DelayedNetwork, x0: Configuration, max_steps: usize) -> Result<DelayRun> {
    let net = dnet.base();
    if x0.len() != net.n() {
        return Err(Error::LengthMismatch {
            expected: net.n(),
            found: x0.len(),
        });
    }
    let mut x = x0;
    let mut time = 0.0;
    let mut steps = Vec::new();
    loop {
        let u = net.unstable_set(x);
        if u.is_empty() {
            return Ok(DelayRun {
                start: x0,
                steps,
                stable: true,
            });
        }
        if steps.len() >= max_steps {
            return Ok(DelayRun {
                start: x0,
                steps,
                stable: false,
            });
        }
        let mut timed = Vec::with_capacity(u.len());
        for i in u.iter() {
            let label = DelayLabel::for_flip(x, i);
            timed.push((dnet.delay(label)?, label));
        }
        timed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for w in timed.windows(2) {
            if w[0].0 == w[1].0 {
                let automata = timed
                    .iter()
                    .filter(|t| t.0 == w[0].0)
                    .map(|t| t.1.automaton)
                    .collect();
                return Err(Error::DelayTie {
                    config: x.to_string(),
                    automata,
                    delay: w[0].0,
                });
            }
        }
        let (delay, label) = timed[0];
        let y = x.flip_unchecked(AutomataSet::singleton(label.automaton));
        time += delay;
        steps.push(DelayStep {
            from: x,
            to: y,
            label,
            delay,
            time,
        });
        x = y;
    }
}

/// Protein states `x` and gene states `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ExtendedConfiguration {
    pub x: Configuration,
    pub g: Configuration,
}

impl ExtendedConfiguration {
    pub fn new(x: Configuration, g: Configuration) -> Result<Self> {
        if x.len() != g.len() {
            return Err(Error::LengthMismatch {
                expected: x.len(),
                found: g.len(),
            });
        }
        Ok(ExtendedConfiguration { x, g })
    }

    /// `[x; f(x)]`.
    pub fn consistent(net: &Network, x: Configuration) -> Self {
        ExtendedConfiguration {
            x,
            g: net.evaluate_all(x),
        }
    }

    pub fn is_consistent(&self, net: &Network) -> bool {
        net.evaluate_all(self.x) == self.g
    }
}

impl fmt::Display for ExtendedConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = |c: Configuration| {
            c.to_bools()
                .iter()
                .map(|&b| if b { "1" } else { "0" })
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(f, "[{}; {}]", row(self.x), row(self.g))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtendedArc {
    pub source: ExtendedConfiguration,
    pub target: ExtendedConfiguration,
    /// Null-update set on loops.
    pub label: Option<AutomataSet>,
    pub delay: Option<DelayLabel>,
}

/// The asynchronous dynamics over configurations `[x; f(x)]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtendedGraph {
    pub n: usize,
    pub nodes: Vec<ExtendedConfiguration>,
    pub arcs: Vec<ExtendedArc>,
}

impl ExtendedGraph {
    pub fn contains(&self, c: ExtendedConfiguration) -> bool {
        self.nodes.binary_search_by(|v| v.x.cmp(&c.x).then(v.g.cmp(&c.g))).is_ok()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for a in &self.arcs {
            let tag = match (a.delay, a.label) {
                (Some(d), _) => d.to_string(),
                (None, Some(w)) => w.to_string(),
                (None, None) => String::new(),
            };
            out.push_str(&format!("{} -{tag}-> {}\n", a.source, a.target));
        }
        out
    }
}

pub fn extended_graph(dnet: &DelayedNetwork) -> Result<ExtendedGraph> {
    let net = dnet.base();
    let dg = delay_annotated_atg(dnet)?;
    let ext = |x| ExtendedConfiguration::consistent(net, x);
    let nodes = Configuration::all(net.n()).map(ext).collect();
    let arcs = dg
        .graph
        .arcs()
        .iter()
        .zip(&dg.delays)
        .map(|(a, d)| ExtendedArc {
            source: ext(a.source.config),
            target: ext(a.target.config),
            label: a.label,
            delay: *d,
        })
        .collect();
    Ok(ExtendedGraph {
        n: net.n(),
        nodes,
        arcs,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Event {
    /// Protein `automaton` starts moving towards its gene's command.
    TransitionStart { automaton: usize, completes_at: f64 },
    /// A start after an earlier attempt was cancelled; the full delay applies again.
    TransitionRestart { automaton: usize, completes_at: f64 },
    /// The command was withdrawn before the protein finished changing.
    TransitionCancel { automaton: usize },
    ProteinChange { automaton: usize, value: bool },
    /// Gene `to` perceives protein `from` at `value`.
    CommandDelivery { from: usize, to: usize, value: bool },
    GeneChange { automaton: usize, value: bool },
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::TransitionStart { automaton, completes_at } => {
                write!(f, "P{automaton} starts changing (due {completes_at})")
            }
            Event::TransitionRestart { automaton, completes_at } => {
                write!(f, "P{automaton} restarts changing (due {completes_at})")
            }
            Event::TransitionCancel { automaton } => write!(f, "P{automaton} change cancelled"),
            Event::ProteinChange { automaton, value } => {
                write!(f, "P{automaton} := {}", *value as u8)
            }
            Event::CommandDelivery { from, to, value } => {
                write!(f, "G{to} perceives P{from} = {}", *value as u8)
            }
            Event::GeneChange { automaton, value } => write!(f, "G{automaton} := {}", *value as u8),
        }
    }
}

/// Everything that happens at one instant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceStep {
    pub time: f64,
    pub events: Vec<Event>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventTrace {
    pub start: ExtendedConfiguration,
    pub steps: Vec<TraceStep>,
    pub final_state: ExtendedConfiguration,
    /// Events remained beyond the horizon.
    pub truncated: bool,
}

impl EventTrace {
    pub fn events(&self) -> impl Iterator<Item = (f64, &Event)> {
        self.steps
            .iter()
            .flat_map(|s| s.events.iter().map(move |e| (s.time, e)))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let events: Vec<serde_json::Value> = self
            .events()
            .map(|(t, e)| {
                let mut v = serde_json::to_value(e).expect("events serialize");
                v["time"] = serde_json::json!(t);
                v
            })
            .collect();
        serde_json::json!({
            "schema": 1,
            "start": self.start.to_string(),
            "final": self.final_state.to_string(),
            "truncated": self.truncated,
            "events": events,
        })
    }
}

impl fmt::Display for EventTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "start {}", self.start)?;
        for s in &self.steps {
            for e in &s.events {
                writeln!(f, "t={:<10} {e}", s.time)?;
            }
        }
        write!(f, "final {}", self.final_state)?;
        if self.truncated {
            write!(f, " (horizon reached)")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
enum Pending {
    Completion { automaton: usize, token: u64 },
    Delivery { from: usize, to: usize, value: bool },
}

struct Simulator<'a> {
    dnet: &'a DelayedNetwork,
    x: Configuration,
    g: Configuration,
    perceived: Vec<Configuration>,
    /// Live completion per protein: `(token, due time)`.
    in_transition: Vec<Option<(u64, f64)>>,
    cancelled: Vec<bool>,
    targets: Vec<Vec<usize>>,
    queue: BinaryHeap<Reverse<(OrderedFloat<f64>, u64)>>,
    payload: BTreeMap<u64, Pending>,
    seq: u64,
}

impl Simulator<'_> {
    fn push(&mut self, time: f64, p: Pending) {
        self.seq += 1;
        self.queue.push(Reverse((OrderedFloat(time), self.seq)));
        self.payload.insert(self.seq, p);
    }

    fn is_live(&self, seq: u64) -> bool {
        match self.payload.get(&seq) {
            Some(Pending::Completion { automaton, token }) => {
                matches!(self.in_transition[*automaton], Some((t, _)) if t == *token)
            }
            Some(Pending::Delivery { .. }) => true,
            None => false,
        }
    }

    /// Drops cancelled completions from the front of the queue.
    fn skip_stale(&mut self) {
        while let Some(&Reverse((_, seq))) = self.queue.peek() {
            if self.is_live(seq) {
                break;
            }
            self.queue.pop();
            self.payload.remove(&seq);
        }
    }

    /// Starts, cancels or keeps protein `j`'s transition after `g_j` is set.
    fn reconcile(&mut self, j: usize, now: f64, events: &mut Vec<Event>) -> Result<()> {
        let needs_change = self.g.get(j) != self.x.get(j);
        match (needs_change, self.in_transition[j]) {
            (true, None) => {
                let d = self.dnet.delay(DelayLabel::for_flip(self.x, j))?;
                let due = now + d;
                self.seq += 1;
                let token = self.seq;
                self.in_transition[j] = Some((token, due));
                self.push(due, Pending::Completion { automaton: j, token });
                events.push(if self.cancelled[j] {
                    Event::TransitionRestart {
                        automaton: j,
                        completes_at: due,
                    }
                } else {
                    Event::TransitionStart {
                        automaton: j,
                        completes_at: due,
                    }
                });
            }
            (false, Some(_)) => {
                self.in_transition[j] = None;
                self.cancelled[j] = true;
                events.push(Event::TransitionCancel { automaton: j });
            }
            _ => {}
        }
        Ok(())
    }
}

/// Discrete-event run of the protein/gene model up to `horizon`.
///
/// A protein whose gene disagrees with it is in transition and completes
/// after its full delay, unless the gene changes back first, which cancels
/// it; a later change starts over from scratch. Each gene reads its own
/// perceived copy of the proteins, updated when a signal arrives. Two live
/// events at the same instant are an error.
pub fn event_simulation(dnet: &DelayedNetwork, start: ExtendedConfiguration, horizon: f64) -> Result<EventTrace> {
    let net = dnet.base();
    let n = net.n();
    for c in [start.x, start.g] {
        if c.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: c.len(),
            });
        }
    }
    if horizon.is_nan() || horizon < 0.0 {
        return Err(Error::Delay(format!("horizon must be non-negative, got {horizon}")));
    }
    dnet.check_responses_complete()?;
    let ig = net.interaction_graph()?;
    let mut sim = Simulator {
        dnet,
        x: start.x,
        g: start.g,
        perceived: vec![start.x; n],
        in_transition: vec![None; n],
        cancelled: vec![false; n],
        targets: (0..n).map(|i| ig.successors(i)).collect(),
        queue: BinaryHeap::new(),
        payload: BTreeMap::new(),
        seq: 0,
    };

    let mut steps = Vec::new();
    let mut events = Vec::new();
    for j in 0..n {
        sim.reconcile(j, 0.0, &mut events)?;
    }
    if !events.is_empty() {
        steps.push(TraceStep { time: 0.0, events });
    }

    let mut truncated = false;
    loop {
        sim.skip_stale();
        let Some(Reverse((OrderedFloat(now), seq))) = sim.queue.pop() else {
            break;
        };
        if now > horizon {
            truncated = true;
            break;
        }
        let pending = sim.payload.remove(&seq).expect("queued events have payloads");
        sim.skip_stale();
        if let Some(&Reverse((OrderedFloat(next), other))) = sim.queue.peek() {
            if next == now {
                let describe = |p: &Pending| match *p {
                    Pending::Completion { automaton, .. } => format!("P{automaton} completes"),
                    Pending::Delivery { from, to, .. } => format!("signal P{from} reaches G{to}"),
                };
                return Err(Error::SimultaneousEvents {
                    time: now,
                    detail: format!("{} and {}", describe(&pending), describe(&sim.payload[&other])),
                });
            }
        }

        let mut events = Vec::new();
        match pending {
            Pending::Completion { automaton: i, .. } => {
                sim.in_transition[i] = None;
                sim.cancelled[i] = false;
                sim.x = sim.x.flip_unchecked(AutomataSet::singleton(i));
                let value = sim.x.get(i);
                events.push(Event::ProteinChange { automaton: i, value });
                for j in sim.targets[i].clone() {
                    let d = dnet.response(i, j).expect("responses checked complete");
                    sim.push(now + d, Pending::Delivery { from: i, to: j, value });
                }
            }
            Pending::Delivery { from, to, value } => {
                events.push(Event::CommandDelivery { from, to, value });
                sim.perceived[to] = sim.perceived[to].with(from, value);
                let command = net.ltf(to).evaluate(sim.perceived[to]);
                if command != sim.g.get(to) {
                    sim.g = sim.g.with(to, command);
                    events.push(Event::GeneChange {
                        automaton: to,
                        value: command,
                    });
                    sim.reconcile(to, now, &mut events)?;
                }
            }
        }
        steps.push(TraceStep { time: now, events });
    }

    Ok(EventTrace {
        start,
        steps,
        final_state: ExtendedConfiguration { x: sim.x, g: sim.g },
        truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Configuration {
        s.parse().unwrap()
    }

    fn ex9(up0: f64, up1: f64) -> DelayedNetwork {
        let net = Network::parse(&["1", "!x0 | x1"]).unwrap();
        DelayedNetwork::with_delays(net, &[up0, up1], &[1.5, 2.5]).unwrap()
    }

    #[test]
    fn annotated_graph_of_example() {
        let dg = delay_annotated_atg(&ex9(1.0, 2.0)).unwrap();
        let text = dg.to_text(None);
        assert_eq!(
            text,
            "00 -d↑0-> 10\n00 -d↑1-> 01\n10 -{0,1}-> 10\n01 -{1}-> 01\n01 -d↑0-> 11\n11 -{0,1}-> 11\n"
        );
    }

    #[test]
    fn identity_has_no_delay_labels() {
        let d = DelayedNetwork::new(Network::identity(2));
        let dg = delay_annotated_atg(&d).unwrap();
        assert!(dg.graph.arcs().iter().all(|a| a.is_loop()));
        assert!(dg.delays.iter().all(Option::is_none));
    }

    #[test]
    fn fastest_transition_wins() {
        let r = deterministic_run(&ex9(1.0, 2.0), c("00"), 10).unwrap();
        assert_eq!(r.configurations(), vec![c("00"), c("10")]);
        assert!(r.stable);
        let r = deterministic_run(&ex9(2.0, 1.0), c("00"), 10).unwrap();
        assert_eq!(r.configurations(), vec![c("00"), c("01"), c("11")]);
        assert_eq!(r.steps[1].time, 3.0);
        let r = deterministic_run(&ex9(1.0, 2.0), c("11"), 10).unwrap();
        assert!(r.steps.is_empty());
    }

    #[test]
    fn ties_and_missing_delays() {
        let err = deterministic_run(&ex9(1.0, 1.0), c("00"), 10).unwrap_err();
        assert!(matches!(err, Error::DelayTie { ref automata, .. } if automata == &vec![0, 1]));
        let bare = DelayedNetwork::new(Network::parse(&["1", "1"]).unwrap());
        assert!(matches!(
            deterministic_run(&bare, c("00"), 10),
            Err(Error::MissingDelay { kind: "activation", .. })
        ));
        assert!(bare.delay(DelayLabel { automaton: 0, direction: Direction::Up }).is_err());
        let mut d = ex9(1.0, 2.0);
        assert!(d.set_up(0, 0.0).is_err());
        assert!(d.set_response(1, 0, 0.1).is_err());
    }

    #[test]
    fn extended_graph_of_example() {
        let g = extended_graph(&ex9(1.0, 2.0)).unwrap();
        let nodes: Vec<String> = g.nodes.iter().map(|v| v.to_string()).collect();
        assert_eq!(nodes, vec!["[0 0; 1 1]", "[1 0; 1 0]", "[0 1; 1 1]", "[1 1; 1 1]"]);
        let bad = ExtendedConfiguration::new(c("11"), c("10")).unwrap();
        assert!(!g.contains(bad));
    }

    fn with_response(mut d: DelayedNetwork, r: f64) -> DelayedNetwork {
        d.set_uniform_response(r).unwrap();
        d
    }

    #[test]
    fn signal_cancels_pending_activation() {
        let d = with_response(ex9(1.0, 2.0), 0.1);
        let start = ExtendedConfiguration::new(c("00"), c("11")).unwrap();
        let t = event_simulation(&d, start, 100.0).unwrap();
        assert_eq!(t.final_state.to_string(), "[1 0; 1 0]");
        let times: Vec<f64> = t.steps.iter().map(|s| s.time).collect();
        assert_eq!(times, vec![0.0, 1.0, 1.1]);
        assert!(t.steps[2].events.contains(&Event::TransitionCancel { automaton: 1 }));
        assert!(!t.truncated);
    }

    #[test]
    fn both_activations_complete() {
        let d = with_response(ex9(1.0, 0.5), 0.05);
        let start = ExtendedConfiguration::new(c("00"), c("11")).unwrap();
        let t = event_simulation(&d, start, 100.0).unwrap();
        assert_eq!(t.final_state.to_string(), "[1 1; 1 1]");
        assert!(!t.events().any(|(_, e)| matches!(e, Event::GeneChange { .. })));
    }

    #[test]
    fn stable_start_and_horizon() {
        let d = with_response(ex9(1.0, 2.0), 0.1);
        let stable = ExtendedConfiguration::consistent(d.base(), c("11"));
        assert!(event_simulation(&d, stable, 10.0).unwrap().steps.is_empty());
        let start = ExtendedConfiguration::new(c("00"), c("11")).unwrap();
        let t = event_simulation(&d, start, 0.5).unwrap();
        assert!(t.truncated);
        assert_eq!(t.final_state.x, c("00"));
    }

    #[test]
    fn simultaneous_completions_are_rejected() {
        let d = with_response(ex9(1.0, 1.0), 0.1);
        let start = ExtendedConfiguration::new(c("00"), c("11")).unwrap();
        assert!(matches!(
            event_simulation(&d, start, 10.0),
            Err(Error::SimultaneousEvents { .. })
        ));
        let no_resp = ex9(1.0, 2.0);
        assert!(matches!(event_simulation(&no_resp, start, 10.0), Err(Error::Delay(_))));
    }
}
