//! Iterated clone-growth graphs.
//!
//! Starting from a seed graph, each step adds one new node per
//! `floor(n/k)`-subset of the current nodes, adjacent to exactly that
//! subset. The library materializes generations while they fit a node
//! budget, answers structural queries about the first generation that
//! does not, and checks the measured structure of every materialized
//! level against the closed forms that are supposed to govern it.

pub mod combin;
pub mod error;
pub mod evolve;
pub mod graph;
pub mod implicit;
pub mod metrics;
pub mod seed;
pub mod verify;

pub use combin::BigCount;
pub use error::{CapacityError, Error, Result};
pub use evolve::{evolve, evolve_step, ModelParams, Trajectory, DEFAULT_NODE_BUDGET};
pub use graph::{GraphSnapshot, NodeId, NodeRef};
pub use implicit::{DiameterMode, DiameterReport, ImplicitLayer, LayerNode, DEFAULT_PAIR_BUDGET};
pub use seed::SeedSpec;
pub use verify::{run_all, CheckStatus, CheckValue, RunOptions, RunReport, TheoremCheck, TheoremId};
