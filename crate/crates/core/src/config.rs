//! Resource caps, with environment overrides.

use std::env;

use crate::error::{Error, Result};

pub const MAX_GEOMETRIC_RANK_VAR: &str = "EQCHOW_MAX_GEOMETRIC_RANK";
pub const MAX_COUNTING_N_VAR: &str = "EQCHOW_MAX_N";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest ambient rank in which geometry is materialized.
    pub geometric_rank: usize,
    /// Largest approximation parameter N accepted by the counting layer.
    pub counting_n: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { geometric_rank: 8, counting_n: 16 }
    }
}

impl Caps {
    /// Defaults overridden by `EQCHOW_MAX_GEOMETRIC_RANK` and `EQCHOW_MAX_N` when set.
    pub fn from_env() -> Caps {
        let read = |name: &str, default: usize| {
            env::var(name).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(default)
        };
        let d = Caps::default();
        Caps {
            geometric_rank: read(MAX_GEOMETRIC_RANK_VAR, d.geometric_rank),
            counting_n: read(MAX_COUNTING_N_VAR, d.counting_n),
        }
    }

    pub fn check_geometric(&self, rank: usize) -> Result<()> {
        if rank > self.geometric_rank {
            return Err(Error::ResourceCap { what: "geometric ambient rank", value: rank, cap: self.geometric_rank });
        }
        Ok(())
    }

    pub fn check_counting(&self, n: usize) -> Result<()> {
        if n > self.counting_n {
            return Err(Error::ResourceCap { what: "N", value: n, cap: self.counting_n });
        }
        Ok(())
    }
}
