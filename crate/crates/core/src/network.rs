//! Networks of Boolean automata, updates and transition legality.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::configuration::{AutomataSet, Configuration};
use crate::error::{Error, Result};
use crate::expr::{parse_expression, Expr};
use crate::limits::{self, MAX_AUTOMATA};
use crate::minimize::expression_from_table;

/// How an update set `W` relates to the unstable set `U(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransitionClass {
    /// `W ∩ U(x) = ∅` (includes `W = ∅`).
    Null,
    /// `∅ ≠ W ⊆ U(x)`.
    Effective,
    Partial,
}

impl fmt::Display for TransitionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TransitionClass::Null => "null",
            TransitionClass::Effective => "effective",
            TransitionClass::Partial => "partial",
        })
    }
}

/// A Boolean automata network: `n` local transition functions.
#[derive(Debug, Clone)]
pub struct Network {
    ltfs: Vec<Expr>,
    /// `F_V` tabulated on demand, indexed by integer rendering.
    images: OnceLock<Vec<u64>>,
}

impl PartialEq for Network {
    fn eq(&self, other: &Self) -> bool {
        self.ltfs == other.ltfs
    }
}

impl Network {
    pub fn new(ltfs: Vec<Expr>) -> Result<Self> {
        let n = ltfs.len();
        if n == 0 {
            return Err(Error::LengthMismatch { expected: 1, found: 0 });
        }
        if n > MAX_AUTOMATA {
            return Err(Error::SizeCap {
                n,
                cap: MAX_AUTOMATA,
                what: "representation",
            });
        }
        if let Some(index) = ltfs.iter().filter_map(Expr::max_var).find(|&v| v >= n) {
            return Err(Error::IndexOutOfRange { index, n });
        }
        Ok(Network {
            ltfs,
            images: OnceLock::new(),
        })
    }

    /// Parses one expression per automaton.
    pub fn parse<S: AsRef<str>>(functions: &[S]) -> Result<Self> {
        let n = functions.len();
        let ltfs = functions
            .iter()
            .map(|s| parse_expression(s.as_ref(), n))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Network::new(ltfs)
    }

    /// `f_i(x) = x_i` for every automaton.
    pub fn identity(n: usize) -> Self {
        Network::new((0..n).map(Expr::Var).collect()).expect("identity network is valid")
    }

    /// Builds a network from per-automaton truth tables of length `2^n`.
    pub fn from_truth_tables(tables: &[Vec<bool>]) -> Result<Self> {
        let n = tables.len();
        limits::check_exhaustive(n)?;
        for t in tables {
            if t.len() != 1 << n {
                return Err(Error::LengthMismatch {
                    expected: 1 << n,
                    found: t.len(),
                });
            }
        }
        let net = Network::new(tables.iter().map(|t| expression_from_table(t, n)).collect())?;
        let images = (0..1usize << n)
            .map(|b| {
                tables
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (i, t)| acc | ((t[b] as u64) << i))
            })
            .collect();
        let _ = net.images.set(images);
        Ok(net)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.ltfs.len()
    }

    pub fn ltfs(&self) -> &[Expr] {
        &self.ltfs
    }

    pub fn ltf(&self, i: usize) -> &Expr {
        &self.ltfs[i]
    }

    fn check_config(&self, x: Configuration) -> Result<()> {
        if x.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                found: x.len(),
            });
        }
        Ok(())
    }

    fn check_set(&self, w: AutomataSet) -> Result<()> {
        match w.max_index() {
            Some(i) if i >= self.n() => Err(Error::IndexOutOfRange { index: i, n: self.n() }),
            _ => Ok(()),
        }
    }

    /// `F_V` over the whole configuration space, built once.
    pub fn image_table(&self) -> Result<&[u64]> {
        if let Some(t) = self.images.get() {
            return Ok(t);
        }
        limits::check_exhaustive(self.n())?;
        let table = (0..1u64 << self.n()).map(|b| self.compute_image(b)).collect();
        Ok(self.images.get_or_init(|| table))
    }

    fn compute_image(&self, bits: u64) -> u64 {
        self.ltfs
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, f)| acc | ((f.eval_bits(bits) as u64) << i))
    }

    #[inline]
    pub(crate) fn image_bits(&self, bits: u64) -> u64 {
        match self.images.get() {
            Some(t) => t[bits as usize],
            None => self.compute_image(bits),
        }
    }

    /// `f(x) = (f_0(x), ..., f_{n-1}(x))`, i.e. `F_V(x)`.
    pub fn evaluate_all(&self, x: Configuration) -> Configuration {
        Configuration::new(self.image_bits(x.bits()), self.n())
    }

    /// `U(x) = {i | f_i(x) != x_i}`.
    pub fn unstable_set(&self, x: Configuration) -> AutomataSet {
        AutomataSet::from_bits(self.image_bits(x.bits()) ^ x.bits())
    }

    pub fn is_stable(&self, x: Configuration) -> bool {
        self.unstable_set(x).is_empty()
    }

    /// `F_W(x) = flip(x, W ∩ U(x))`.
    pub fn update(&self, x: Configuration, w: AutomataSet) -> Result<Configuration> {
        self.check_config(x)?;
        self.check_set(w)?;
        Ok(self.update_unchecked(x, w))
    }

    #[inline]
    pub(crate) fn update_unchecked(&self, x: Configuration, w: AutomataSet) -> Configuration {
        x.flip_unchecked(w.intersection(self.unstable_set(x)))
    }

    /// True iff `D(x, y) ⊆ U(x)`, i.e. some update set takes `x` to `y`.
    pub fn is_elementary_transition(&self, x: Configuration, y: Configuration) -> Result<bool> {
        self.check_config(x)?;
        self.check_config(y)?;
        Ok(x.difference(y).is_subset(self.unstable_set(x)))
    }

    pub fn classify_transition(&self, x: Configuration, w: AutomataSet) -> Result<TransitionClass> {
        self.check_config(x)?;
        self.check_set(w)?;
        let u = self.unstable_set(x);
        Ok(if w.intersection(u).is_empty() {
            TransitionClass::Null
        } else if w.is_subset(u) {
            TransitionClass::Effective
        } else {
            TransitionClass::Partial
        })
    }

    /// `A(x)`: arcs `(j, i)` such that flipping `x_j` changes `f_i(x)`.
    pub fn local_interaction_graph(&self, x: Configuration) -> Result<BTreeSet<(usize, usize)>> {
        self.check_config(x)?;
        let n = self.n();
        let fx = self.image_bits(x.bits());
        let mut arcs = BTreeSet::new();
        for j in 0..n {
            let fy = self.image_bits(x.bits() ^ (1 << j));
            for i in AutomataSet::from_bits(fx ^ fy).iter() {
                arcs.insert((j, i));
            }
        }
        Ok(arcs)
    }

    /// Global interaction graph, with one witness configuration per arc.
    pub fn interaction_graph(&self) -> Result<InteractionGraph> {
        let n = self.n();
        limits::check_exhaustive(n)?;
        let mut witnesses = BTreeMap::new();
        for (i, f) in self.ltfs.iter().enumerate() {
            for j in 0..n {
                if let Some(x) = f.depends_on(j, n)? {
                    witnesses.insert((j, i), x);
                }
            }
        }
        Ok(InteractionGraph { n, witnesses })
    }

    /// One table per automaton, indexed by integer rendering.
    pub fn truth_tables(&self) -> Result<Vec<Vec<bool>>> {
        let table = self.image_table()?;
        Ok((0..self.n())
            .map(|i| table.iter().map(|&y| (y >> i) & 1 == 1).collect())
            .collect())
    }
}

impl Serialize for Network {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let functions: Vec<String> = self.ltfs.iter().map(|e| e.to_string()).collect();
        let mut st = serializer.serialize_struct("Network", 2)?;
        st.serialize_field("n", &self.n())?;
        st.serialize_field("functions", &functions)?;
        st.end()
    }
}

impl fmt::Display for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n = {}", self.n())?;
        for (i, e) in self.ltfs.iter().enumerate() {
            writeln!(f, "f{i} = {e}")?;
        }
        Ok(())
    }
}

/// `G = (V, A)` with `(j, i) ∈ A` iff `f_i` depends on `x_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionGraph {
    pub n: usize,
    witnesses: BTreeMap<(usize, usize), Configuration>,
}

impl InteractionGraph {
    pub fn arcs(&self) -> BTreeSet<(usize, usize)> {
        self.witnesses.keys().copied().collect()
    }

    pub fn has_arc(&self, j: usize, i: usize) -> bool {
        self.witnesses.contains_key(&(j, i))
    }

    /// A configuration `x` with `f_i(x) != f_i(flip(x, {j}))`.
    pub fn witness(&self, j: usize, i: usize) -> Option<Configuration> {
        self.witnesses.get(&(j, i)).copied()
    }

    /// Targets influenced by `j`.
    pub fn successors(&self, j: usize) -> Vec<usize> {
        self.witnesses
            .keys()
            .filter(|&&(s, _)| s == j)
            .map(|&(_, t)| t)
            .collect()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph interaction {\n");
        for i in 0..self.n {
            out.push_str(&format!("  {i};\n"));
        }
        for (j, i) in self.witnesses.keys() {
            out.push_str(&format!("  {j} -> {i};\n"));
        }
        out.push_str("}\n");
        out
    }
}

impl fmt::Display for InteractionGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arcs: Vec<String> = self
            .witnesses
            .keys()
            .map(|(j, i)| format!("({j},{i})"))
            .collect();
        write!(f, "{{{}}}", arcs.join(", "))
    }
}
