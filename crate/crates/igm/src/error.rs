//! Error types shared across the crate.

use thiserror::Error;

use crate::combin::{log10_big, BigCount};

/// Materializing a generation would overflow the configured node budget.
///
/// Carries the offending binomial so callers can report exactly which
/// clone population was too large.
#[derive(Debug, Clone, Error)]
pub struct CapacityError {
    /// Level that could not be materialized.
    pub level: usize,
    /// Node count of the base the step was applied to.
    pub base_nodes: usize,
    /// Subset size for the step, `floor(base_nodes / k)`.
    pub subset_size: usize,
    /// The clone population `C(base_nodes, subset_size)`.
    pub clone_count: BigCount,
    /// The budget that was exceeded.
    pub budget: usize,
}

impl std::fmt::Display for CapacityError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "level {} needs {} + C({}, {}) = {} + {} nodes, over budget {}",
            self.level,
            self.base_nodes,
            self.base_nodes,
            self.subset_size,
            self.base_nodes,
            display_count(&self.clone_count),
            self.budget
        )
    }
}

/// Renders a count in full decimal when short, `~10^k` otherwise.
pub(crate) fn display_count(c: &BigCount) -> String {
    let s = c.to_string();
    if s.len() <= 60 {
        s
    } else {
        format!("~10^{:.1}", log10_big(c))
    }
}

#[derive(Debug, Error)]
pub enum Error {
    /// A seed description or edge-list file could not be parsed.
    #[error("seed error: {0}")]
    Seed(String),

    /// Parse failure inside an edge-list file, with its 1-based line number.
    #[error("edge list line {line}: {msg}")]
    EdgeList { line: usize, msg: String },

    #[error(transparent)]
    Capacity(#[from] CapacityError),

    /// An exact scan was declined because its enumeration space is too
    /// large; callers should fall back to sampled mode.
    #[error("exact diameter needs {pairs} clone-pair checks, over pair budget {budget}; use sampled mode")]
    PairBudget { pairs: String, budget: u64 },

    /// A documented precondition was violated by the caller.
    #[error("contract violation: {0}")]
    Contract(String),

    /// The dense eigensolver refused or failed.
    #[error("spectral computation: {0}")]
    Spectral(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
