//! Markov-chain dynamics where each automaton updates with probability α.

use serde::Serialize;

use crate::configuration::{AutomataSet, Configuration};
use crate::error::{Error, Result};
use crate::limits;
use crate::network::Network;
use crate::tgraph::{attractors, Arc, GraphKind, Node, TransitionGraph};

pub const ROW_SUM_TOLERANCE: f64 = 1e-12;
pub const LONG_RUN_TOLERANCE: f64 = 1e-10;
pub const LONG_RUN_MAX_STEPS: usize = 1_000_000;

/// Sparse row-stochastic matrix over `B^n`, rows indexed by integer rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix {
    n: usize,
    alpha: Option<f64>,
    rows: Vec<Vec<(u64, f64)>>,
}

/// A probability vector over `B^n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Distribution(Vec<f64>);

impl Distribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if !probs.len().is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: probs.len().next_power_of_two(),
                found: probs.len(),
            });
        }
        if let Some(&p) = probs.iter().find(|&&p| !(0.0..=1.0 + ROW_SUM_TOLERANCE).contains(&p)) {
            return Err(Error::InvalidRate(p));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > ROW_SUM_TOLERANCE {
            return Err(Error::InvalidRate(total));
        }
        Ok(Distribution(probs))
    }

    pub fn point(x: Configuration) -> Self {
        let mut v = vec![0.0; 1 << x.len()];
        v[x.index()] = 1.0;
        Distribution(v)
    }

    pub fn uniform(n: usize) -> Self {
        let size = 1usize << n;
        Distribution(vec![1.0 / size as f64; size])
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, x: Configuration) -> f64 {
        self.0[x.index()]
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn l1_distance(&self, other: &Distribution) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b).abs()).sum()
    }
}

fn check_rate(alpha: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidRate(alpha));
    }
    Ok(())
}

/// `P_{x,y} = α^{|S|} (1-α)^{|U(x)|-|S|}` for `y = flip(x, S)`, `S ⊆ U(x)`.
/// The empty `S` gives the loop at `x`.
pub fn build_alpha_matrix(net: &Network, alpha: f64) -> Result<StochasticMatrix> {
    check_rate(alpha)?;
    let n = net.n();
    limits::check_exhaustive(n)?;
    net.image_table()?;
    let rows = Configuration::all(n)
        .map(|x| {
            let u = net.unstable_set(x);
            let k = u.len() as i32;
            u.subsets()
                .map(|s| {
                    let d = s.len() as i32;
                    let p = alpha.powi(d) * (1.0 - alpha).powi(k - d);
                    (x.flip_unchecked(s).bits(), p)
                })
                .filter(|&(_, p)| p > 0.0)
                .collect()
        })
        .collect();
    Ok(StochasticMatrix {
        n,
        alpha: Some(alpha),
        rows,
    })
}

impl StochasticMatrix {
    /// A matrix from explicit rows of `(target, probability)`.
    pub fn from_rows(n: usize, rows: Vec<Vec<(Configuration, f64)>>) -> Result<Self> {
        if rows.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                found: rows.len(),
            });
        }
        let mut out = Vec::with_capacity(rows.len());
        for row in rows {
            let mut entries = Vec::with_capacity(row.len());
            let mut total = 0.0;
            for (y, p) in row {
                if y.len() != n {
                    return Err(Error::LengthMismatch {
                        expected: n,
                        found: y.len(),
                    });
                }
                check_rate(p)?;
                total += p;
                if p > 0.0 {
                    entries.push((y.bits(), p));
                }
            }
            if (total - 1.0).abs() > ROW_SUM_TOLERANCE {
                return Err(Error::InvalidRate(total));
            }
            entries.sort_by_key(|&(y, _)| y);
            out.push(entries);
        }
        Ok(StochasticMatrix {
            n,
            alpha: None,
            rows: out,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, x: Configuration) -> impl Iterator<Item = (Configuration, f64)> + '_ {
        let n = self.n;
        self.rows[x.index()]
            .iter()
            .map(move |&(y, p)| (Configuration::new(y, n), p))
    }

    pub fn get(&self, x: Configuration, y: Configuration) -> f64 {
        self.rows[x.index()]
            .iter()
            .filter(|&&(t, _)| t == y.bits())
            .map(|&(_, p)| p)
            .sum()
    }

    pub fn row_sum(&self, x: Configuration) -> f64 {
        self.rows[x.index()].iter().map(|&(_, p)| p).sum()
    }

    /// `P(x(t+1) ≠ x(t))`.
    pub fn change_probability(&self, x: Configuration) -> f64 {
        self.rows[x.index()]
            .iter()
            .filter(|&&(y, _)| y != x.bits())
            .map(|&(_, p)| p)
            .sum()
    }

    /// `μ · P`.
    pub fn step(&self, mu: &Distribution) -> Result<Distribution> {
        if mu.dimension() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: mu.dimension(),
            });
        }
        let mut next = vec![0.0; self.dimension()];
        for (x, row) in self.rows.iter().enumerate() {
            let m = mu.0[x];
            if m == 0.0 {
                continue;
            }
            for &(y, p) in row {
                next[y as usize] += m * p;
            }
        }
        Ok(Distribution(next))
    }

    /// `μ · P^t`.
    pub fn evolve(&self, mu: &Distribution, t: usize) -> Result<Distribution> {
        let mut current = mu.clone();
        if current.dimension() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: current.dimension(),
            });
        }
        for _ in 0..t {
            current = self.step(&current)?;
        }
        Ok(current)
    }

    /// Support digraph: one unlabelled arc per positive entry.
    pub fn support_graph(&self) -> TransitionGraph {
        let n = self.n;
        let nodes: Vec<Node> = Configuration::all(n).map(Node::plain).collect();
        let arcs = self
            .rows
            .iter()
            .enumerate()
            .flat_map(|(x, row)| {
                row.iter().map(move |&(y, _)| Arc {
                    source: Node::plain(Configuration::new(x as u64, n)),
                    target: Node::plain(Configuration::new(y, n)),
                    label: None,
                })
            })
            .collect();
        TransitionGraph::from_parts(n, GraphKind::Custom, false, nodes, arcs)
            .expect("support arcs stay inside B^n")
    }

    /// `[[source, target, probability], ...]` in row order.
    pub fn to_json(&self) -> serde_json::Value {
        let triplets: Vec<serde_json::Value> = self
            .rows
            .iter()
            .enumerate()
            .flat_map(|(x, row)| row.iter().map(move |&(y, p)| serde_json::json!([x, y, p])))
            .collect();
        serde_json::json!({
            "schema": 1,
            "n": self.n,
            "alpha": self.alpha,
            "entries": triplets,
        })
    }
}

/// Probability mass eventually captured by one terminal component.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentMass {
    pub members: Vec<Configuration>,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LongRun {
    pub components: Vec<ComponentMass>,
    /// Mass still on transient configurations when iteration stopped.
    pub transient_mass: f64,
    pub steps: usize,
    pub converged: bool,
}

/// Iterates `μ · P^t` until the mass left on transient configurations drops
/// below the tolerance, then reports the mass held by each terminal
/// component of the support graph.
pub fn long_run(p: &StochasticMatrix, mu: &Distribution) -> Result<LongRun> {
    long_run_with(p, mu, LONG_RUN_TOLERANCE, LONG_RUN_MAX_STEPS)
}

pub fn long_run_with(
    p: &StochasticMatrix,
    mu: &Distribution,
    tolerance: f64,
    max_steps: usize,
) -> Result<LongRun> {
    let report = attractors(&p.support_graph());
    let mut groups: Vec<Vec<Configuration>> = report.stable.iter().map(|&x| vec![x]).collect();
    groups.extend(report.oscillations.iter().map(|o| o.members.clone()));
    groups.sort();

    let transient_mass =
        |d: &Distribution| report.transient.iter().map(|&x| d.get(x)).sum::<f64>();
    let mut current = p.step(mu).map(|_| mu.clone())?;
    let mut steps = 0;
    while transient_mass(&current) > tolerance && steps < max_steps {
        current = p.step(&current)?;
        steps += 1;
    }
    let rest = transient_mass(&current);
    Ok(LongRun {
        components: groups
            .into_iter()
            .map(|members| ComponentMass {
                mass: members.iter().map(|&x| current.get(x)).sum(),
                members,
            })
            .collect(),
        transient_mass: rest,
        steps,
        converged: rest <= tolerance,
    })
}

/// `1 - (1-α)^{|U(x)|}`, the closed form of [`StochasticMatrix::change_probability`].
pub fn alpha_change_probability(alpha: f64, unstable: AutomataSet) -> f64 {
    1.0 - (1.0 - alpha).powi(unstable.len() as i32)
}
