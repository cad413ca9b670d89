//! Size caps for operations that enumerate all `2^n` configurations.

use crate::error::{Error, Result};

/// Environment variable overriding [`DEFAULT_EXHAUSTIVE_CAP`].
pub const MAX_N_ENV: &str = "BANLAB_MAX_N";

pub const DEFAULT_EXHAUSTIVE_CAP: usize = 20;

/// The full transition multigraph has `2^n (2^n - 1)` arcs, hence the lower cap.
pub const DEFAULT_MULTIGRAPH_CAP: usize = 12;

/// Configurations are stored in a `u64`.
pub const MAX_AUTOMATA: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub exhaustive: usize,
    pub multigraph: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            exhaustive: DEFAULT_EXHAUSTIVE_CAP,
            multigraph: DEFAULT_MULTIGRAPH_CAP,
        }
    }
}

impl Limits {
    /// Defaults, with the exhaustive cap taken from `BANLAB_MAX_N` when set.
    /// The multigraph cap never exceeds the exhaustive one.
    pub fn current() -> Self {
        let mut limits = Limits::default();
        if let Some(cap) = std::env::var(MAX_N_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
        {
            limits.exhaustive = cap.min(MAX_AUTOMATA - 1);
            limits.multigraph = limits.multigraph.min(limits.exhaustive);
        }
        limits
    }

    pub fn check_exhaustive(&self, n: usize) -> Result<()> {
        if n > self.exhaustive {
            return Err(Error::SizeCap {
                n,
                cap: self.exhaustive,
                what: "exhaustive",
            });
        }
        Ok(())
    }

    pub fn check_multigraph(&self, n: usize) -> Result<()> {
        if n > self.multigraph {
            return Err(Error::SizeCap {
                n,
                cap: self.multigraph,
                what: "multigraph",
            });
        }
        Ok(())
    }
}

pub(crate) fn check_exhaustive(n: usize) -> Result<()> {
    Limits::current().check_exhaustive(n)
}

pub(crate) fn check_multigraph(n: usize) -> Result<()> {
    Limits::current().check_multigraph(n)
}
