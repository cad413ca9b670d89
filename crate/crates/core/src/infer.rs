//! Inferring local transition functions from observed transitions.
//!
//! Every inference completes missing information the same way: a slot
//! `f_i(x)` that no observation constrains defaults to `x_i`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::configuration::{AutomataSet, Configuration};
use crate::error::{Error, Result};
use crate::limits;
use crate::network::Network;
use crate::schedule::{global_function, UpdateSchedule};
use crate::tgraph::TransitionGraph;

/// One recorded `x ⇢ y`, optionally with the update set that produced it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ObservedTransition {
    pub source: Configuration,
    pub target: Configuration,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<AutomataSet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ObservedTransition {
    pub fn pair(&self) -> (Configuration, Configuration) {
        (self.source, self.target)
    }
}

impl fmt::Display for ObservedTransition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.source, self.target)?;
        if let Some(w) = self.label {
            write!(f, " W={w}")?;
        }
        Ok(())
    }
}

/// Observed transitions over `B^n`, sorted, with exact duplicates collapsed
/// (the note of the first occurrence is kept).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservedTransitionGraph {
    pub n: usize,
    transitions: Vec<ObservedTransition>,
}

impl ObservedTransitionGraph {
    pub fn new(n: usize) -> Self {
        ObservedTransitionGraph {
            n,
            transitions: Vec::new(),
        }
    }

    pub fn from_transitions(n: usize, transitions: Vec<ObservedTransition>) -> Result<Self> {
        let mut g = ObservedTransitionGraph::new(n);
        for t in transitions {
            g.insert(t)?;
        }
        Ok(g)
    }

    /// Unlabelled transitions from `(source, target)` pairs.
    pub fn from_pairs(n: usize, pairs: &[(Configuration, Configuration)]) -> Result<Self> {
        let mut g = ObservedTransitionGraph::new(n);
        for &(x, y) in pairs {
            g.add(x, y, None)?;
        }
        Ok(g)
    }

    /// Every arc of a plain transition graph, labels kept.
    pub fn from_graph(tg: &TransitionGraph) -> Result<Self> {
        if tg.is_phased() {
            return Err(Error::Schedule(
                "phased graphs cannot be read as observations".into(),
            ));
        }
        let mut g = ObservedTransitionGraph::new(tg.n);
        for a in tg.arcs() {
            g.add(a.source.config, a.target.config, a.label)?;
        }
        Ok(g)
    }

    pub fn add(&mut self, source: Configuration, target: Configuration, label: Option<AutomataSet>) -> Result<()> {
        self.insert(ObservedTransition {
            source,
            target,
            label,
            note: None,
        })
    }

    pub fn insert(&mut self, t: ObservedTransition) -> Result<()> {
        for x in [t.source, t.target] {
            if x.len() != self.n {
                return Err(Error::LengthMismatch {
                    expected: self.n,
                    found: x.len(),
                });
            }
        }
        if let Some(i) = t.label.and_then(AutomataSet::max_index) {
            if i >= self.n {
                return Err(Error::IndexOutOfRange { index: i, n: self.n });
            }
        }
        let key = |o: &ObservedTransition| (o.source, o.target, o.label);
        match self.transitions.binary_search_by(|o| key(o).cmp(&key(&t))) {
            Ok(_) => {}
            Err(pos) => self.transitions.insert(pos, t),
        }
        Ok(())
    }

    pub fn transitions(&self) -> &[ObservedTransition] {
        &self.transitions
    }

    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    pub fn from_source(&self, x: Configuration) -> &[ObservedTransition] {
        let lo = self.transitions.partition_point(|o| o.source < x);
        let hi = self.transitions.partition_point(|o| o.source <= x);
        &self.transitions[lo..hi]
    }

    /// Distinct targets reached from `x`.
    pub fn successors(&self, x: Configuration) -> Vec<Configuration> {
        let mut ys: Vec<_> = self.from_source(x).iter().map(|o| o.target).collect();
        ys.dedup();
        ys
    }

    pub fn out_degree(&self, x: Configuration) -> usize {
        self.successors(x).len()
    }

    fn check_config_space(&self) -> Result<()> {
        limits::check_exhaustive(self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InferenceMethod {
    Deterministic,
    Asynchronous,
    Elementary,
    Schedule,
}

impl fmt::Display for InferenceMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InferenceMethod::Deterministic => "deterministic",
            InferenceMethod::Asynchronous => "asynchronous",
            InferenceMethod::Elementary => "elementary",
            InferenceMethod::Schedule => "schedule",
        })
    }
}

impl std::str::FromStr for InferenceMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "deterministic" => Ok(InferenceMethod::Deterministic),
            "asynchronous" | "async" => Ok(InferenceMethod::Asynchronous),
            "elementary" => Ok(InferenceMethod::Elementary),
            "schedule" => Ok(InferenceMethod::Schedule),
            other => Err(Error::Schedule(format!(
                "unknown mode '{other}' (expected deterministic, asynchronous, elementary or schedule)"
            ))),
        }
    }
}

/// Hypotheses a user declares about the observations.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct HypothesisMode {
    /// Every observed transition is one elementary network transition.
    pub assume_elementary: bool,
    /// Every observed transition is asynchronous (implies elementary).
    pub assume_asynchronous: bool,
    /// Every configuration has at most one observed successor.
    pub assume_deterministic: bool,
    /// Observations contain every possible behaviour.
    pub assume_complete: bool,
    /// A configuration without observed successor is stable.
    pub fixity: bool,
    /// Observations are one period of this strict schedule apart.
    pub schedule: Option<UpdateSchedule>,
}

impl HypothesisMode {
    pub fn elementary() -> Self {
        HypothesisMode {
            assume_elementary: true,
            ..Default::default()
        }
    }

    pub fn asynchronous() -> Self {
        HypothesisMode {
            assume_elementary: true,
            assume_asynchronous: true,
            ..Default::default()
        }
    }

    pub fn deterministic() -> Self {
        HypothesisMode {
            assume_deterministic: true,
            ..Default::default()
        }
    }

    pub fn with_schedule(s: UpdateSchedule) -> Self {
        HypothesisMode {
            assume_deterministic: true,
            schedule: Some(s),
            ..Default::default()
        }
    }

    pub fn for_method(method: InferenceMethod, schedule: Option<UpdateSchedule>) -> Result<Self> {
        Ok(match method {
            InferenceMethod::Deterministic => HypothesisMode::deterministic(),
            InferenceMethod::Asynchronous => HypothesisMode::asynchronous(),
            InferenceMethod::Elementary => HypothesisMode::elementary(),
            InferenceMethod::Schedule => HypothesisMode::with_schedule(
                schedule.ok_or_else(|| Error::Schedule("schedule mode needs a schedule".into()))?,
            ),
        })
    }

    /// Applies the implications between flags and rejects inconsistent ones.
    pub fn normalized(mut self) -> Result<Self> {
        if self.assume_asynchronous {
            self.assume_elementary = true;
        }
        if self.schedule.is_some() && !self.assume_deterministic {
            return Err(Error::Schedule(
                "a schedule hypothesis requires assume_deterministic".into(),
            ));
        }
        if self.assume_complete {
            self.fixity = true;
        }
        Ok(self)
    }

    /// The inference equation matching these flags.
    pub fn method(&self) -> InferenceMethod {
        if self.schedule.is_some() {
            InferenceMethod::Schedule
        } else if self.assume_asynchronous {
            InferenceMethod::Asynchronous
        } else if self.assume_elementary {
            InferenceMethod::Elementary
        } else {
            InferenceMethod::Deterministic
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Observed,
    Defaulted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConflictKind {
    /// Two observations demand opposite values of `f_i(x)`.
    Contradiction,
    /// A loop needs a stable automaton at `x` but every automaton is forced to change.
    NoStableAutomaton,
    /// The inferred network does not regenerate the observed successor.
    NotReproduced,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conflict {
    pub config: Configuration,
    pub automaton: usize,
    pub kind: ConflictKind,
    /// `(kept, rejected)` values of `f_i(x)`.
    pub values: (bool, bool),
    pub transitions: Vec<(Configuration, Configuration)>,
}

impl fmt::Display for Conflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let trans: Vec<String> = self
            .transitions
            .iter()
            .map(|(x, y)| format!("{x} -> {y}"))
            .collect();
        let what = match self.kind {
            ConflictKind::Contradiction => "contradictory observations",
            ConflictKind::NoStableAutomaton => "loop without any stable automaton",
            ConflictKind::NotReproduced => "observation not regenerated",
        };
        write!(
            f,
            "f{}({}): {what}, kept {} rejected {} [{}]",
            self.automaton,
            self.config,
            self.values.0 as u8,
            self.values.1 as u8,
            trans.join(", ")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InferenceReport {
    pub method: InferenceMethod,
    pub network: Network,
    /// `tables[i][x]`.
    pub tables: Vec<Vec<bool>>,
    /// `provenance[i][x]`.
    pub provenance: Vec<Vec<Provenance>>,
    pub conflicts: Vec<Conflict>,
}

impl InferenceReport {
    pub fn is_consistent(&self) -> bool {
        self.conflicts.is_empty()
    }

    pub fn observed_slots(&self) -> usize {
        self.provenance
            .iter()
            .flatten()
            .filter(|&&p| p == Provenance::Observed)
            .count()
    }
}

impl fmt::Display for InferenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "method: {}", self.method)?;
        for (i, e) in self.network.ltfs().iter().enumerate() {
            writeln!(f, "f{i}' = {e}")?;
        }
        let total = self.tables.len() * self.tables.first().map_or(0, Vec::len);
        writeln!(f, "observed slots: {} of {}", self.observed_slots(), total)?;
        if self.conflicts.is_empty() {
            writeln!(f, "conflicts: none")
        } else {
            writeln!(f, "conflicts: {}", self.conflicts.len())?;
            for c in &self.conflicts {
                writeln!(f, "  {c}")?;
            }
            Ok(())
        }
    }
}

/// Slot table for `f_i(x)` with the first assignment kept.
struct Slots {
    n: usize,
    value: Vec<Option<(bool, (Configuration, Configuration))>>,
    conflicts: Vec<Conflict>,
}

impl Slots {
    fn new(n: usize) -> Self {
        Slots {
            n,
            value: vec![None; n << n],
            conflicts: Vec::new(),
        }
    }

    fn get(&self, i: usize, x: Configuration) -> Option<bool> {
        self.value[(i << self.n) | x.index()].map(|(v, _)| v)
    }

    fn assign(&mut self, i: usize, x: Configuration, v: bool, by: (Configuration, Configuration)) {
        let slot = &mut self.value[(i << self.n) | x.index()];
        match *slot {
            None => *slot = Some((v, by)),
            Some((kept, first)) if kept != v => {
                let mut transitions = vec![first];
                if by != first {
                    transitions.push(by);
                }
                self.conflicts.push(Conflict {
                    config: x,
                    automaton: i,
                    kind: ConflictKind::Contradiction,
                    values: (kept, v),
                    transitions,
                });
            }
            Some(_) => {}
        }
    }

    fn finish(self, method: InferenceMethod) -> Result<InferenceReport> {
        let n = self.n;
        let mut tables = vec![vec![false; 1 << n]; n];
        let mut provenance = vec![vec![Provenance::Defaulted; 1 << n]; n];
        for i in 0..n {
            for x in Configuration::all(n) {
                match self.value[(i << n) | x.index()] {
                    Some((v, _)) => {
                        tables[i][x.index()] = v;
                        provenance[i][x.index()] = Provenance::Observed;
                    }
                    None => tables[i][x.index()] = x.get(i),
                }
            }
        }
        let network = Network::from_truth_tables(&tables)?;
        Ok(InferenceReport {
            method,
            network,
            tables,
            provenance,
            conflicts: self.conflicts,
        })
    }
}

/// `f_i(x) = F(x)_i` where `F(x)` is the only observed successor of `x`.
pub fn infer_deterministic(t: &ObservedTransitionGraph) -> Result<InferenceReport> {
    t.check_config_space()?;
    let n = t.n;
    let mut slots = Slots::new(n);
    for x in Configuration::all(n) {
        let succ = t.successors(x);
        if succ.len() > 1 {
            return Err(Error::OutDegree {
                config: x.to_string(),
                degree: succ.len(),
                max: 1,
            });
        }
        if let Some(&y) = succ.first() {
            for i in 0..n {
                slots.assign(i, x, y.get(i), (x, y));
            }
        }
    }
    slots.finish(InferenceMethod::Deterministic)
}

/// `f_i(x) = ¬x_i` iff `(x, flip(x, {i}))` is observed.
pub fn infer_asynchronous(t: &ObservedTransitionGraph) -> Result<InferenceReport> {
    for o in t.transitions() {
        let d = o.source.hamming(o.target);
        if d > 1 {
            return Err(Error::NotAsynchronous {
                from: o.source.to_string(),
                to: o.target.to_string(),
                distance: d,
            });
        }
    }
    let mut report = elementary_engine(t)?;
    report.method = InferenceMethod::Asynchronous;
    Ok(report)
}

/// `f_i(x) = ¬x_i` iff some observed `(x, y)` has `y_i ≠ x_i`.
///
/// Labelled transitions also fix `f_i(x) = y_i` for every `i ∈ W`. An
/// unlabelled loop at `x` needs at least one automaton stable at `x`;
/// when a single candidate is left it is fixed, when none is left the
/// loop is a conflict.
pub fn infer_elementary(t: &ObservedTransitionGraph) -> Result<InferenceReport> {
    elementary_engine(t)
}

fn elementary_engine(t: &ObservedTransitionGraph) -> Result<InferenceReport> {
    t.check_config_space()?;
    let n = t.n;
    let mut slots = Slots::new(n);
    for x in Configuration::all(n) {
        let out = t.from_source(x);
        let mut loops = Vec::new();
        for o in out {
            let d = x.difference(o.target);
            match o.label {
                Some(w) => {
                    for i in w.union(d).iter() {
                        slots.assign(i, x, o.target.get(i), o.pair());
                    }
                }
                None if d.is_empty() => loops.push(o.pair()),
                None => {
                    for i in d.iter() {
                        slots.assign(i, x, !x.get(i), o.pair());
                    }
                }
            }
        }
        if loops.is_empty() {
            continue;
        }
        let stable_somewhere = (0..n).any(|i| slots.get(i, x) == Some(x.get(i)));
        if stable_somewhere {
            continue;
        }
        let free: Vec<usize> = (0..n).filter(|&i| slots.get(i, x).is_none()).collect();
        match free.as_slice() {
            [] => {
                let mut transitions = loops.clone();
                transitions.extend(out.iter().filter(|o| o.target != x).map(|o| o.pair()));
                slots.conflicts.push(Conflict {
                    config: x,
                    automaton: 0,
                    kind: ConflictKind::NoStableAutomaton,
                    values: (!x.get(0), x.get(0)),
                    transitions,
                });
            }
            [only] => slots.assign(*only, x, x.get(*only), loops[0]),
            _ => {}
        }
    }
    slots.finish(InferenceMethod::Elementary)
}

/// Rebuilds `F` from `T = T_δ` for a strict periodic `δ`.
///
/// From each start `x` with successor `y`, the walk visits the intermediate
/// configurations `x^{t+1} = x^t[W_t := y]` and fixes `f_i(x^t) = y_i` for
/// `i ∈ W_t`. The result is regenerated and compared against `T`.
pub fn infer_with_schedule(t: &ObservedTransitionGraph, s: &UpdateSchedule) -> Result<InferenceReport> {
    t.check_config_space()?;
    if !s.is_periodic() {
        return Err(Error::NotPeriodic);
    }
    let n = t.n;
    s.check_size(n)?;
    if let Some((automaton, count)) = s.first_repeat(n) {
        return Err(Error::NotStrict { automaton, count });
    }
    let mut successor = Vec::with_capacity(1 << n);
    for x in Configuration::all(n) {
        match t.successors(x).as_slice() {
            [] => return Err(Error::MissingSuccessor { config: x.to_string() }),
            [y] => successor.push(*y),
            many => {
                return Err(Error::OutDegree {
                    config: x.to_string(),
                    degree: many.len(),
                    max: 1,
                })
            }
        }
    }

    let mut slots = Slots::new(n);
    for x in Configuration::all(n) {
        let y = successor[x.index()];
        let mut cur = x;
        for &w in s.blocks() {
            for i in w.iter() {
                slots.assign(i, cur, y.get(i), (x, y));
            }
            let keep = cur.bits() & !w.bits();
            cur = Configuration::new(keep | (y.bits() & w.bits()), n);
        }
    }
    let mut report = slots.finish(InferenceMethod::Schedule)?;

    let regenerated = global_function(&report.network, s)?;
    for x in Configuration::all(n) {
        let y = successor[x.index()];
        let z = regenerated[x.index()];
        for i in y.difference(z).iter() {
            report.conflicts.push(Conflict {
                config: x,
                automaton: i,
                kind: ConflictKind::NotReproduced,
                values: (z.get(i), y.get(i)),
                transitions: vec![(x, y)],
            });
        }
    }
    Ok(report)
}

/// Runs the inference selected by `mode`.
pub fn infer(t: &ObservedTransitionGraph, mode: &HypothesisMode) -> Result<InferenceReport> {
    let mode = mode.clone().normalized()?;
    match (&mode.schedule, mode.method()) {
        (Some(s), _) => infer_with_schedule(t, s),
        (None, InferenceMethod::Asynchronous) => infer_asynchronous(t),
        (None, InferenceMethod::Elementary) => infer_elementary(t),
        _ => infer_deterministic(t),
    }
}

/// Hypotheses about observations that validation can find violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Hypothesis {
    /// No network over the declared `n` automata explains the observations.
    KnownAutomata,
    /// The candidate's own dynamics cannot produce an observed change.
    NoExterior,
    /// Some transition of the candidate is missing from the observations.
    Complete,
    /// A configuration without observed successor is not stable.
    Fixity,
    /// An observed transition is not elementary (or not asynchronous).
    Elementary,
    /// An observed transition is not one period of the declared schedule.
    BreakDown,
}

impl Hypothesis {
    pub fn number(self) -> u8 {
        match self {
            Hypothesis::KnownAutomata => 5,
            Hypothesis::NoExterior => 6,
            Hypothesis::Complete => 7,
            Hypothesis::Fixity => 8,
            Hypothesis::Elementary => 9,
            Hypothesis::BreakDown => 10,
        }
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Hypothesis::KnownAutomata => "known automata",
            Hypothesis::NoExterior => "no exterior cause",
            Hypothesis::Complete => "complete observations",
            Hypothesis::Fixity => "fixity",
            Hypothesis::Elementary => "elementary transitions",
            Hypothesis::BreakDown => "schedule break-down",
        };
        write!(f, "H{} ({name})", self.number())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub hypothesis: Hypothesis,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransitionCheck {
    pub source: Configuration,
    pub target: Configuration,
    pub label: Option<AutomataSet>,
    /// `D(x, y) ⊆ U(x)` under the candidate.
    pub elementary: bool,
    pub asynchronous: bool,
    /// Number of non-empty `W` with `F_W(x) = y`.
    pub realizing_count: u64,
    /// The realizing sets in ascending order, listed when there are at most 16.
    pub realizing: Vec<AutomataSet>,
    /// For labelled transitions, whether `F_W(x) = y`.
    pub label_matches: Option<bool>,
}

const MAX_LISTED_REALIZERS: u64 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub transitions: Vec<TransitionCheck>,
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_consistent(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn violated(&self) -> BTreeSet<Hypothesis> {
        self.findings.iter().map(|f| f.hypothesis).collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.transitions {
            write!(f, "{} -> {}", c.source, c.target)?;
            if let Some(w) = c.label {
                write!(f, " W={w}")?;
            }
            if c.elementary {
                let sets: Vec<String> = c.realizing.iter().map(|w| w.to_string()).collect();
                write!(f, ": elementary, {} realizing set(s)", c.realizing_count)?;
                if !sets.is_empty() {
                    write!(f, " {}", sets.join(" "))?;
                }
            } else {
                write!(f, ": not elementary (D not within U)")?;
            }
            if c.label_matches == Some(false) {
                write!(f, ", label does not produce the target")?;
            }
            writeln!(f)?;
        }
        if self.findings.is_empty() {
            writeln!(f, "no hypothesis violated")
        } else {
            for finding in &self.findings {
                writeln!(f, "{}: {}", finding.hypothesis, finding.detail)?;
            }
            Ok(())
        }
    }
}

/// Reachability in a successor relation given as sorted adjacency lists.
fn reaches(adj: &[Vec<u64>], from: u64, to: u64) -> bool {
    if from == to {
        return true;
    }
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![from];
    seen[from as usize] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v as usize] {
            if w == to {
                return true;
            }
            if !seen[w as usize] {
                seen[w as usize] = true;
                stack.push(w);
            }
        }
    }
    false
}

/// Checks observations against a candidate network under declared hypotheses.
pub fn validate_observed(
    t: &ObservedTransitionGraph,
    candidate: &Network,
    mode: &HypothesisMode,
) -> Result<ValidationReport> {
    let mode = mode.clone().normalized()?;
    let n = t.n;
    if candidate.n() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: candidate.n(),
        });
    }
    limits::check_exhaustive(n)?;
    candidate.image_table()?;
    let full = AutomataSet::full(n);
    let mut findings = Vec::new();
    let mut checks = Vec::with_capacity(t.len());

    for o in t.transitions() {
        let (x, y) = o.pair();
        let u = candidate.unstable_set(x);
        let d = x.difference(y);
        let elementary = d.is_subset(u);
        let stable = full.minus(u);
        let (realizing_count, realizing) = if elementary {
            let count = (1u64 << stable.len()) - u64::from(d.is_empty());
            let listed = if count <= MAX_LISTED_REALIZERS {
                let mut sets: Vec<AutomataSet> = stable
                    .subsets()
                    .map(|s| d.union(s))
                    .filter(|w| !w.is_empty())
                    .collect();
                sets.sort();
                sets
            } else {
                Vec::new()
            };
            (count, listed)
        } else {
            (0, Vec::new())
        };
        let label_matches = o.label.map(|w| candidate.update_unchecked(x, w) == y);
        let asynchronous = d.len() <= 1;

        if mode.assume_elementary && !elementary {
            findings.push(Finding {
                hypothesis: Hypothesis::Elementary,
                detail: format!(
                    "{x} -> {y} changes {d} but only {u} is unstable, so no single update produces it"
                ),
            });
        }
        if mode.assume_asynchronous && !asynchronous {
            findings.push(Finding {
                hypothesis: Hypothesis::Elementary,
                detail: format!("{x} -> {y} changes {} automata at once", d.len()),
            });
        }
        if label_matches == Some(false) {
            findings.push(Finding {
                hypothesis: Hypothesis::Elementary,
                detail: format!("{o}: updating the label does not produce the target"),
            });
        }
        checks.push(TransitionCheck {
            source: x,
            target: y,
            label: o.label,
            elementary,
            asynchronous,
            realizing_count,
            realizing,
            label_matches,
        });
    }

    // Candidate dynamics: effective asynchronous or general transitions.
    let candidate_succ: Vec<Vec<u64>> = Configuration::all(n)
        .map(|x| {
            let u = candidate.unstable_set(x);
            if mode.assume_asynchronous {
                u.iter().map(|i| x.bits() ^ (1 << i)).collect()
            } else {
                u.subsets().skip(1).map(|s| x.bits() ^ s.bits()).collect()
            }
        })
        .collect();
    for o in t.transitions() {
        let (x, y) = o.pair();
        if !reaches(&candidate_succ, x.bits(), y.bits()) {
            findings.push(Finding {
                hypothesis: Hypothesis::NoExterior,
                detail: format!("{x} -> {y} is not reachable in the candidate's dynamics"),
            });
        } else if x == y && candidate.unstable_set(x) == full && n > 0 {
            findings.push(Finding {
                hypothesis: Hypothesis::NoExterior,
                detail: format!("{x} is observed to stay put but every automaton is unstable there"),
            });
        }
    }

    // Hypothesis 5: no network over n automata explains T under the mode.
    if mode.assume_deterministic && mode.schedule.is_none() {
        for x in Configuration::all(n) {
            if t.out_degree(x) > 1 {
                findings.push(Finding {
                    hypothesis: Hypothesis::KnownAutomata,
                    detail: format!("{x} has {} observed successors", t.out_degree(x)),
                });
            }
        }
    }
    if mode.assume_elementary {
        let inferred = infer_elementary(t)?;
        for c in inferred.conflicts {
            findings.push(Finding {
                hypothesis: Hypothesis::KnownAutomata,
                detail: c.to_string(),
            });
        }
    }

    if let Some(s) = &mode.schedule {
        s.check_size(n)?;
        let f = global_function(candidate, s)?;
        for o in t.transitions() {
            let (x, y) = o.pair();
            if f[x.index()] != y {
                findings.push(Finding {
                    hypothesis: Hypothesis::BreakDown,
                    detail: format!(
                        "{x} -> {y} but one period of {s} gives {}",
                        f[x.index()]
                    ),
                });
            }
        }
    }

    if mode.fixity {
        for x in Configuration::all(n) {
            if t.out_degree(x) == 0 && !candidate.is_stable(x) {
                findings.push(Finding {
                    hypothesis: Hypothesis::Fixity,
                    detail: format!(
                        "{x} has no observed successor but {} is unstable there",
                        candidate.unstable_set(x)
                    ),
                });
            }
        }
    }

    if mode.assume_complete {
        let observed_succ: Vec<Vec<u64>> = Configuration::all(n)
            .map(|x| t.successors(x).iter().map(|y| y.bits()).collect())
            .collect();
        for x in Configuration::all(n) {
            for &y in &candidate_succ[x.index()] {
                if !reaches(&observed_succ, x.bits(), y) {
                    findings.push(Finding {
                        hypothesis: Hypothesis::Complete,
                        detail: format!(
                            "{x} -> {} is possible but never observed, even along a path",
                            Configuration::new(y, n)
                        ),
                    });
                }
            }
        }
    }

    findings.sort_by_key(|f| f.hypothesis);
    Ok(ValidationReport {
        transitions: checks,
        findings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tgraph::{build_atg, build_gtg, build_t_delta};

    fn c(s: &str) -> Configuration {
        s.parse().unwrap()
    }

    fn obs(n: usize, pairs: &[(&str, &str)]) -> ObservedTransitionGraph {
        let pairs: Vec<_> = pairs.iter().map(|&(x, y)| (c(x), c(y))).collect();
        ObservedTransitionGraph::from_pairs(n, &pairs).unwrap()
    }

    fn example() -> Network {
        Network::parse(&["1", "x1 | (x0 & !x2)", "!x1"]).unwrap()
    }

    fn functions(r: &InferenceReport) -> Vec<String> {
        r.network.ltfs().iter().map(|e| e.to_string()).collect()
    }

    #[test]
    fn deterministic_recovers_parallel_dynamics() {
        let net = example();
        let t = ObservedTransitionGraph::from_graph(
            &build_t_delta(&net, &UpdateSchedule::parallel(3)).unwrap(),
        )
        .unwrap();
        let r = infer_deterministic(&t).unwrap();
        assert_eq!(r.tables, net.truth_tables().unwrap());
        assert!(r.is_consistent());
    }

    #[test]
    fn deterministic_edge_cases() {
        let r = infer_deterministic(&ObservedTransitionGraph::new(2)).unwrap();
        assert_eq!(r.tables, Network::identity(2).truth_tables().unwrap());
        let t = obs(2, &[("00", "01"), ("00", "10")]);
        assert!(matches!(infer_deterministic(&t), Err(Error::OutDegree { .. })));
    }

    #[test]
    fn elementary_examples() {
        let r = infer_elementary(&obs(2, &[("10", "11"), ("00", "01")])).unwrap();
        assert_eq!(functions(&r), vec!["x0", "1"]);
        assert!(r.is_consistent());

        let r = infer_elementary(&obs(2, &[("00", "11"), ("11", "00"), ("01", "10"), ("10", "01")]))
            .unwrap();
        assert_eq!(functions(&r), vec!["!x0", "!x1"]);
    }

    #[test]
    fn loop_against_flip_is_a_conflict_for_one_automaton() {
        let r = infer_elementary(&obs(1, &[("0", "1"), ("0", "0")])).unwrap();
        assert_eq!(r.conflicts.len(), 1);
        assert_eq!(r.conflicts[0].automaton, 0);
        assert_eq!(r.conflicts[0].config, c("0"));
    }

    #[test]
    fn labelled_contradiction() {
        let mut t = ObservedTransitionGraph::new(2);
        t.add(c("00"), c("10"), Some("{0}".parse().unwrap())).unwrap();
        t.add(c("00"), c("00"), Some("{0,1}".parse().unwrap())).unwrap();
        let r = infer_elementary(&t).unwrap();
        assert_eq!(r.conflicts.len(), 1);
        assert_eq!(r.conflicts[0].kind, ConflictKind::Contradiction);
        assert_eq!(r.conflicts[0].automaton, 0);
    }

    #[test]
    fn asynchronous_examples() {
        let mut t = ObservedTransitionGraph::new(2);
        let both: AutomataSet = "{0,1}".parse().unwrap();
        let zero: AutomataSet = "{0}".parse().unwrap();
        t.add(c("01"), c("11"), Some(zero)).unwrap();
        t.add(c("10"), c("00"), Some(zero)).unwrap();
        t.add(c("00"), c("00"), Some(both)).unwrap();
        t.add(c("11"), c("11"), Some(both)).unwrap();
        let r = infer_asynchronous(&t).unwrap();
        assert_eq!(functions(&r), vec!["x1", "x1"]);

        let r = infer_asynchronous(&obs(2, &[("00", "10"), ("10", "11")])).unwrap();
        assert_eq!(functions(&r), vec!["x0 | !x1", "x0 | x1"]);

        assert!(matches!(
            infer_asynchronous(&obs(2, &[("00", "11")])),
            Err(Error::NotAsynchronous { distance: 2, .. })
        ));
    }

    #[test]
    fn round_trips_from_full_graphs() {
        let net = example();
        let gtg = ObservedTransitionGraph::from_graph(&build_gtg(&net).unwrap()).unwrap();
        assert_eq!(infer_elementary(&gtg).unwrap().tables, net.truth_tables().unwrap());
        let atg = ObservedTransitionGraph::from_graph(&build_atg(&net).unwrap()).unwrap();
        assert_eq!(infer_asynchronous(&atg).unwrap().tables, net.truth_tables().unwrap());
    }

    #[test]
    fn schedule_round_trip() {
        let net = example();
        let s: UpdateSchedule = "{1} {0,2}".parse().unwrap();
        let t = ObservedTransitionGraph::from_graph(&build_t_delta(&net, &s).unwrap()).unwrap();
        let r = infer_with_schedule(&t, &s).unwrap();
        assert!(r.is_consistent(), "{r}");
        let again = ObservedTransitionGraph::from_graph(&build_t_delta(&r.network, &s).unwrap()).unwrap();
        assert_eq!(again, t);

        let pi = UpdateSchedule::parallel(3);
        let tp = ObservedTransitionGraph::from_graph(&build_t_delta(&net, &pi).unwrap()).unwrap();
        assert_eq!(
            infer_with_schedule(&tp, &pi).unwrap().tables,
            infer_deterministic(&tp).unwrap().tables
        );

        let not_strict: UpdateSchedule = "{0} {0,1,2}".parse().unwrap();
        assert!(matches!(
            infer_with_schedule(&t, &not_strict),
            Err(Error::NotStrict { automaton: 0, count: 2 })
        ));
        assert!(matches!(
            infer_with_schedule(&obs(3, &[]), &s),
            Err(Error::MissingSuccessor { .. })
        ));
    }

    #[test]
    fn validation_examples() {
        let t = obs(2, &[("10", "11"), ("00", "01")]);
        let cand = Network::parse(&["x0", "1"]).unwrap();
        let v = validate_observed(&t, &cand, &HypothesisMode::elementary()).unwrap();
        assert!(v.is_consistent(), "{v}");
        assert!(v.transitions.iter().all(|c| c.elementary));

        let t = obs(3, &[("000", "110")]);
        let v = validate_observed(&t, &example(), &HypothesisMode::elementary()).unwrap();
        assert!(!v.transitions[0].elementary);
        assert!(v.violated().contains(&Hypothesis::Elementary));

        let v = validate_observed(&ObservedTransitionGraph::new(3), &example(), &HypothesisMode::elementary())
            .unwrap();
        assert!(v.is_consistent());
    }

    #[test]
    fn realizing_sets() {
        let t = obs(3, &[("000", "101")]);
        let v = validate_observed(&t, &example(), &HypothesisMode::elementary()).unwrap();
        let sets: Vec<String> = v.transitions[0].realizing.iter().map(|w| w.to_string()).collect();
        assert_eq!(sets, vec!["{0,2}", "{0,1,2}"]);
    }

    #[test]
    fn observed_graph_collapses_duplicates() {
        let t = obs(2, &[("00", "01"), ("00", "01")]);
        assert_eq!(t.len(), 1);
        assert!(ObservedTransitionGraph::from_pairs(2, &[(c("000"), c("00"))]).is_err());
    }
}
