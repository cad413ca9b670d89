//! Update schedules: list and function views, classes, rotations,
//! reachable sets, composed global functions and counting.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::configuration::{AutomataSet, Configuration};
use crate::error::{Error, Result};
use crate::limits;
use crate::network::Network;

/// An ordered list of non-empty update sets, repeated forever when periodic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UpdateSchedule {
    blocks: Vec<AutomataSet>,
    periodic: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleClass {
    Parallel,
    Sequential,
    BlockSequential,
    Strict,
    /// Minimal fairness constant.
    KFair(u64),
    GeneralPeriodic,
    Finite,
}

impl fmt::Display for ScheduleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScheduleClass::Parallel => f.write_str("parallel"),
            ScheduleClass::Sequential => f.write_str("sequential"),
            ScheduleClass::BlockSequential => f.write_str("block_sequential"),
            ScheduleClass::Strict => f.write_str("strict"),
            ScheduleClass::KFair(k) => write!(f, "{k}-fair"),
            ScheduleClass::GeneralPeriodic => f.write_str("general_periodic"),
            ScheduleClass::Finite => f.write_str("finite"),
        }
    }
}

impl UpdateSchedule {
    pub fn new(blocks: Vec<AutomataSet>, periodic: bool) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Schedule("a schedule needs at least one block".into()));
        }
        if let Some(t) = blocks.iter().position(|b| b.is_empty()) {
            return Err(Error::Schedule(format!("block {t} is empty")));
        }
        Ok(UpdateSchedule { blocks, periodic })
    }

    pub fn periodic(blocks: Vec<AutomataSet>) -> Result<Self> {
        UpdateSchedule::new(blocks, true)
    }

    pub fn finite(blocks: Vec<AutomataSet>) -> Result<Self> {
        UpdateSchedule::new(blocks, false)
    }

    /// `π`: every automaton in one block.
    pub fn parallel(n: usize) -> Self {
        UpdateSchedule {
            blocks: vec![AutomataSet::full(n)],
            periodic: true,
        }
    }

    /// One automaton per block in the given order.
    pub fn sequential(order: &[usize]) -> Result<Self> {
        UpdateSchedule::periodic(order.iter().map(|&i| AutomataSet::singleton(i)).collect())
    }

    pub fn blocks(&self) -> &[AutomataSet] {
        &self.blocks
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    /// `p`, the number of blocks in the list.
    pub fn period(&self) -> usize {
        self.blocks.len()
    }

    /// `W_t`; `None` past the end of a finite schedule.
    pub fn block(&self, t: usize) -> Option<AutomataSet> {
        if self.periodic {
            Some(self.blocks[t % self.blocks.len()])
        } else {
            self.blocks.get(t).copied()
        }
    }

    /// Rejects automaton ids `>= n`.
    pub fn check_size(&self, n: usize) -> Result<()> {
        for (t, b) in self.blocks.iter().enumerate() {
            if let Some(i) = b.max_index() {
                if i >= n {
                    return Err(Error::Schedule(format!(
                        "block {t} mentions automaton {i}, network has {n}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// `δ(i) = {t | i ∈ W_t}` for `t < p`.
    pub fn function_view(&self, n: usize) -> Vec<BTreeSet<usize>> {
        let mut delta = vec![BTreeSet::new(); n];
        for (t, b) in self.blocks.iter().enumerate() {
            for i in b.iter().filter(|&i| i < n) {
                delta[i].insert(t);
            }
        }
        delta
    }

    /// Inverse of [`function_view`](Self::function_view).
    pub fn from_function_view(delta: &[BTreeSet<usize>], periodic: bool) -> Result<Self> {
        let p = delta
            .iter()
            .filter_map(|d| d.iter().next_back())
            .max()
            .map(|t| t + 1)
            .ok_or_else(|| Error::Schedule("function view updates nothing".into()))?;
        let mut blocks = vec![AutomataSet::EMPTY; p];
        for (i, times) in delta.iter().enumerate() {
            for &t in times {
                blocks[t].insert(i);
            }
        }
        UpdateSchedule::new(blocks, periodic)
    }

    /// Number of updates of each automaton per period.
    pub fn update_counts(&self, n: usize) -> Vec<usize> {
        self.function_view(n).iter().map(BTreeSet::len).collect()
    }

    pub fn is_strict(&self, n: usize) -> bool {
        self.update_counts(n).iter().all(|&c| c <= 1)
    }

    pub fn first_repeat(&self, n: usize) -> Option<(usize, usize)> {
        self.update_counts(n)
            .into_iter()
            .enumerate()
            .find(|&(_, c)| c > 1)
    }

    pub fn is_block_sequential(&self, n: usize) -> bool {
        self.update_counts(n).iter().all(|&c| c == 1)
    }

    /// Every class whose predicate holds. Fairness classes are only
    /// computed for periodic schedules.
    pub fn classify(&self, n: usize) -> Result<BTreeSet<ScheduleClass>> {
        self.check_size(n)?;
        let counts = self.update_counts(n);
        let mut classes = BTreeSet::new();
        let strict = counts.iter().all(|&c| c <= 1);
        if strict {
            classes.insert(ScheduleClass::Strict);
        }
        if !self.periodic {
            classes.insert(ScheduleClass::Finite);
            return Ok(classes);
        }
        let block_sequential = counts.iter().all(|&c| c == 1);
        if block_sequential {
            classes.insert(ScheduleClass::BlockSequential);
            if self.blocks.len() == 1 {
                classes.insert(ScheduleClass::Parallel);
            }
            if self.blocks.iter().all(|b| b.len() == 1) {
                classes.insert(ScheduleClass::Sequential);
            }
        } else {
            classes.insert(ScheduleClass::GeneralPeriodic);
        }
        if let Some(k) = self.fairness(n) {
            classes.insert(ScheduleClass::KFair(k));
        }
        Ok(classes)
    }

    /// Minimal `k` with `max |δ(i)| <= k * min |δ(j)|`; `None` if some
    /// automaton is never updated or the schedule is finite.
    pub fn fairness(&self, n: usize) -> Option<u64> {
        if !self.periodic || n == 0 {
            return None;
        }
        let counts = self.update_counts(n);
        let min = *counts.iter().min()? as u64;
        let max = *counts.iter().max()? as u64;
        (min >= 1).then(|| max.div_ceil(min))
    }

    /// `W'_t = W_{t+shift mod p}`.
    pub fn rotate(&self, shift: usize) -> Self {
        let p = self.blocks.len();
        UpdateSchedule {
            blocks: (0..p).map(|t| self.blocks[(t + shift) % p]).collect(),
            periodic: self.periodic,
        }
    }

    /// Smallest `Δ` with `other = self.rotate(Δ)`.
    pub fn rotation_offset(&self, other: &UpdateSchedule) -> Option<usize> {
        if !self.periodic || !other.periodic || self.period() != other.period() {
            return None;
        }
        (0..self.period()).find(|&d| self.rotate(d).blocks == other.blocks)
    }

    pub fn rotation_equivalent(&self, other: &UpdateSchedule) -> bool {
        self.rotation_offset(other).is_some()
    }
}

impl fmt::Display for UpdateSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.periodic {
            f.write_str("finite: ")?;
        }
        let parts: Vec<String> = self.blocks.iter().map(|b| b.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for UpdateSchedule {
    type Err = Error;

    /// `{1} {0,2}`, optionally prefixed by `periodic:` or `finite:`.
    fn from_str(s: &str) -> Result<Self> {
        let mut rest = s.trim();
        let mut periodic = true;
        if let Some(r) = rest.strip_prefix("periodic:") {
            rest = r;
        } else if let Some(r) = rest.strip_prefix("finite:") {
            rest = r;
            periodic = false;
        }
        let mut blocks = Vec::new();
        let mut rest = rest.trim_start();
        while !rest.is_empty() {
            if !rest.starts_with('{') {
                return Err(Error::Schedule(format!("expected '{{' at '{rest}'")));
            }
            let end = rest
                .find('}')
                .ok_or_else(|| Error::Schedule("unclosed '{'".into()))?;
            let block: AutomataSet = rest[..=end].parse().map_err(Error::Schedule)?;
            blocks.push(block);
            rest = rest[end + 1..].trim_start();
        }
        UpdateSchedule::new(blocks, periodic)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ScheduleRepr {
    Blocks(Vec<AutomataSet>),
    Full { periodic: bool, blocks: Vec<AutomataSet> },
}

impl Serialize for UpdateSchedule {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ScheduleRepr::Full {
            periodic: self.periodic,
            blocks: self.blocks.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for UpdateSchedule {
    /// Accepts a bare array of arrays (periodic) or `{periodic, blocks}`.
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let (blocks, periodic) = match ScheduleRepr::deserialize(deserializer)? {
            ScheduleRepr::Blocks(b) => (b, true),
            ScheduleRepr::Full { periodic, blocks } => (blocks, periodic),
        };
        UpdateSchedule::new(blocks, periodic).map_err(serde::de::Error::custom)
    }
}

/// `X_0, X_1, ...` with the eventually periodic tail when there is one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReachableSets {
    /// `sets[t] = X_t`, each sorted by integer rendering.
    pub sets: Vec<Vec<Configuration>>,
    /// `(t0, q)`: smallest `t0`, then smallest `q`, with `X_{t+q} = X_t` for all `t >= t0`.
    pub tail: Option<(usize, usize)>,
}

impl ReachableSets {
    /// `X_t` for any `t`, extrapolated through the tail.
    pub fn at(&self, t: usize) -> Option<&[Configuration]> {
        if t < self.sets.len() {
            return Some(&self.sets[t]);
        }
        let (t0, q) = self.tail?;
        let idx = t0 + (t - t0) % q;
        self.sets.get(idx).map(Vec::as_slice)
    }
}

/// `X_0 = B^n`, `X_{t+1} = F_{W_t}(X_t)`, listed up to `horizon`
/// (default `2^n * p`). For periodic schedules the tail is always found.
pub fn reachable_sets(
    net: &Network,
    s: &UpdateSchedule,
    horizon: Option<usize>,
) -> Result<ReachableSets> {
    let n = net.n();
    limits::check_exhaustive(n)?;
    s.check_size(n)?;
    net.image_table()?;
    let p = s.period();
    let horizon = horizon.unwrap_or((1usize << n).saturating_mul(p));

    let step = |set: &[u64], w: AutomataSet| -> Vec<u64> {
        let mut next: Vec<u64> = set
            .iter()
            .map(|&b| net.update_unchecked(Configuration::new(b, n), w).bits())
            .collect();
        next.sort_unstable();
        next.dedup();
        next
    };

    let mut sets: Vec<Vec<u64>> = vec![(0..1u64 << n).collect()];
    let mut tail = None;
    if s.is_periodic() {
        // Detect the first repeat of (phase, X_t); each phase slice is
        // non-increasing so this happens within 2^n * p + p steps.
        let mut seen: HashMap<(usize, Vec<u64>), usize> = HashMap::new();
        seen.insert((0, sets[0].clone()), 0);
        let (first, cycle) = loop {
            let t = sets.len() - 1;
            let next = step(&sets[t], s.blocks[t % p]);
            let key = ((t + 1) % p, next);
            if let Some(&first) = seen.get(&key) {
                sets.push(key.1);
                break (first, t + 1 - first);
            }
            seen.insert(key.clone(), t + 1);
            sets.push(key.1);
        };
        while sets.len() < first + 2 * cycle + 1 {
            let t = sets.len() - 1;
            let next = step(&sets[t], s.blocks[t % p]);
            sets.push(next);
        }
        let q = (1..=cycle)
            .filter(|q| cycle % q == 0)
            .find(|&q| (first..first + cycle).all(|t| sets[t + q] == sets[t]))
            .unwrap_or(cycle);
        let mut t0 = first;
        while t0 > 0 && sets[t0 - 1 + q] == sets[t0 - 1] {
            t0 -= 1;
        }
        tail = Some((t0, q));
    }
    while sets.len() <= horizon {
        let t = sets.len() - 1;
        match s.block(t) {
            Some(w) => {
                let next = step(&sets[t], w);
                sets.push(next);
            }
            None => break,
        }
    }
    sets.truncate(horizon + 1);
    Ok(ReachableSets {
        sets: sets
            .into_iter()
            .map(|v| v.into_iter().map(|b| Configuration::new(b, n)).collect())
            .collect(),
        tail,
    })
}

/// `F[δ] = F_{W_{p-1}} ∘ ... ∘ F_{W_0}` tabulated over `B^n`.
pub fn global_function(net: &Network, s: &UpdateSchedule) -> Result<Vec<Configuration>> {
    if !s.is_periodic() {
        return Err(Error::NotPeriodic);
    }
    let n = net.n();
    limits::check_exhaustive(n)?;
    s.check_size(n)?;
    net.image_table()?;
    Ok(Configuration::all(n)
        .map(|x| {
            s.blocks
                .iter()
                .fold(x, |y, &w| net.update_unchecked(y, w))
        })
        .collect())
}

/// An elementary path `x^0 -W_0-> x^1 -W_1-> ...`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Trajectory {
    pub start: Configuration,
    pub steps: Vec<(AutomataSet, Configuration)>,
}

impl Trajectory {
    pub fn configurations(&self) -> Vec<Configuration> {
        std::iter::once(self.start)
            .chain(self.steps.iter().map(|&(_, x)| x))
            .collect()
    }

    pub fn last(&self) -> Configuration {
        self.steps.last().map_or(self.start, |&(_, x)| x)
    }
}

impl fmt::Display for Trajectory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.start)?;
        for (w, x) in &self.steps {
            write!(f, " -{w}-> {x}")?;
        }
        Ok(())
    }
}

/// Follows `s` from `x0` for `steps` updates (fewer if a finite schedule runs out).
pub fn trajectory(
    net: &Network,
    s: &UpdateSchedule,
    x0: Configuration,
    steps: usize,
) -> Result<Trajectory> {
    s.check_size(net.n())?;
    let mut x = x0;
    let mut out = Vec::new();
    for t in 0..steps {
        let Some(w) = s.block(t) else { break };
        x = net.update(x, w)?;
        out.push((w, x));
    }
    Ok(Trajectory {
        start: x0,
        steps: out,
    })
}

/// Surjection numbers `S(n, k)` for `k = 0..=n`.
fn surjections(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for m in 0..n {
        let mut next = vec![BigUint::zero(); m + 2];
        for k in 1..=m + 1 {
            let mut v = BigUint::zero();
            if k <= m {
                v += &row[k];
            }
            v += &row[k - 1];
            next[k] = v * BigUint::from(k);
        }
        row = next;
    }
    row
}

/// `bs_n`: block-sequential schedules over `n` automata (ordered set partitions).
pub fn count_block_sequential(n: usize) -> BigUint {
    surjections(n).into_iter().skip(1).sum()
}

/// Block-sequential schedules up to rotation: `Σ_k S(n,k)/k`.
pub fn count_bs_classes(n: usize) -> BigUint {
    surjections(n)
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(k, s)| s / BigUint::from(k))
        .sum()
}

/// Every block-sequential schedule over `n` automata, as periodic schedules.
pub fn block_sequential_schedules(n: usize) -> Vec<UpdateSchedule> {
    fn extend(rest: AutomataSet, prefix: &mut Vec<AutomataSet>, out: &mut Vec<UpdateSchedule>) {
        if rest.is_empty() {
            out.push(UpdateSchedule {
                blocks: prefix.clone(),
                periodic: true,
            });
            return;
        }
        for block in rest.subsets().filter(|b| !b.is_empty()) {
            prefix.push(block);
            extend(rest.minus(block), prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        extend(AutomataSet::full(n), &mut Vec::new(), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sched(s: &str) -> UpdateSchedule {
        s.parse().unwrap()
    }

    fn example() -> Network {
        Network::parse(&["1", "x1 | (x0 & !x2)", "!x1"]).unwrap()
    }

    fn c(s: &str) -> Configuration {
        s.parse().unwrap()
    }

    #[test]
    fn classes_of_the_six_automata_schedules() {
        use ScheduleClass::*;
        let pi = sched("{0,1,2,3,4,5}");
        let want: BTreeSet<_> = [Parallel, BlockSequential, Strict, KFair(1)].into_iter().collect();
        assert_eq!(pi.classify(6).unwrap(), want);

        let fair = sched("{2,5} {0,1,4} {1,2,3} {0,1,4,5}");
        let want: BTreeSet<_> = [KFair(3), GeneralPeriodic].into_iter().collect();
        assert_eq!(fair.classify(6).unwrap(), want);

        let sigma = sched("{5} {3} {1} {0} {2} {4}");
        let want: BTreeSet<_> = [Sequential, BlockSequential, Strict, KFair(1)].into_iter().collect();
        assert_eq!(sigma.classify(6).unwrap(), want);
    }

    #[test]
    fn finite_schedules_have_no_fairness() {
        let s = sched("finite: {0} {1}");
        let classes = s.classify(2).unwrap();
        assert!(classes.contains(&ScheduleClass::Finite));
        assert!(classes.iter().all(|c| !matches!(c, ScheduleClass::KFair(_))));
    }

    #[test]
    fn rotation_examples() {
        let a = sched("{1} {0,2} {1,2}");
        assert!(a.rotation_equivalent(&sched("{0,2} {1,2} {1}")));
        assert!(a.rotation_equivalent(&sched("{1,2} {1} {0,2}")));
        assert!(!a.rotation_equivalent(&sched("{1} {1,2} {0,2}")));
    }

    #[test]
    fn text_and_json_forms() {
        let s = sched("periodic: {1} {0, 2}");
        assert_eq!(s.to_string(), "{1} {0,2}");
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(serde_json::from_str::<UpdateSchedule>(&json).unwrap(), s);
        let bare: UpdateSchedule = serde_json::from_str("[[1],[0,2]]").unwrap();
        assert_eq!(bare, s);
        assert!("{1} {}".parse::<UpdateSchedule>().is_err());
        assert!("".parse::<UpdateSchedule>().is_err());
        assert!("{1".parse::<UpdateSchedule>().is_err());
        assert_eq!(sched("finite: {0}").to_string(), "finite: {0}");
    }

    #[test]
    fn reachable_sets_of_the_example() {
        let r = reachable_sets(&example(), &sched("{1} {0,2}"), Some(20)).unwrap();
        assert_eq!(r.sets[0].len(), 8);
        let x1: Vec<_> = Configuration::all(3).filter(|&x| x != c("100")).collect();
        assert_eq!(r.sets[1], x1);
        for t in 2..=20 {
            assert_eq!(r.sets[t], vec![c("110"), c("101")], "t = {t}");
        }
        assert_eq!(r.tail, Some((2, 1)));
        assert_eq!(r.at(1000).unwrap(), &[c("110"), c("101")]);
    }

    #[test]
    fn reachable_sets_identity_and_parallel() {
        let id = Network::identity(3);
        let r = reachable_sets(&id, &sched("{0} {1,2}"), Some(5)).unwrap();
        assert!(r.sets.iter().all(|x| x.len() == 8));
        assert_eq!(r.tail, Some((0, 1)));

        let net = example();
        let r = reachable_sets(&net, &UpdateSchedule::parallel(3), Some(3)).unwrap();
        let mut image: Vec<_> = Configuration::all(3).map(|x| net.evaluate_all(x)).collect();
        image.sort();
        image.dedup();
        assert_eq!(r.sets[1], image);
    }

    #[test]
    fn global_function_and_trajectories() {
        let net = example();
        let s = sched("{1} {0,2}");
        let f = global_function(&net, &s).unwrap();
        assert_eq!(f[c("000").index()], c("101"));
        assert_eq!(f[c("111").index()], c("110"));

        let tr = trajectory(&net, &s, c("000"), 2).unwrap();
        assert_eq!(tr.to_string(), "000 -{1}-> 000 -{0,2}-> 101");
        let tr = trajectory(&net, &s, c("100"), 2).unwrap();
        assert_eq!(tr.configurations(), vec![c("100"), c("110"), c("110")]);
        let tr = trajectory(&net, &s, c("100"), 0).unwrap();
        assert_eq!(tr.configurations(), vec![c("100")]);

        assert!(global_function(&net, &sched("finite: {0}")).is_err());
    }

    #[test]
    fn finite_trajectory_stops() {
        let net = example();
        let tr = trajectory(&net, &sched("finite: {0} {1}"), c("000"), 10).unwrap();
        assert_eq!(tr.steps.len(), 2);
    }

    #[test]
    fn counts() {
        let bs: Vec<u64> = (1..=5)
            .map(|n| count_block_sequential(n).try_into().unwrap())
            .collect();
        assert_eq!(bs, vec![1, 3, 13, 75, 541]);
        assert_eq!(count_bs_classes(2), BigUint::from(2u32));
        assert_eq!(count_bs_classes(4), BigUint::from(26u32));
        for n in 1..=5 {
            assert_eq!(
                BigUint::from(block_sequential_schedules(n).len()),
                count_block_sequential(n)
            );
        }
    }
}
