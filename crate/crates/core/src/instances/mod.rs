//! Certified instance families: the four-variable worked example, resource
//! allocation over polymatroids, min-cost-flow-induced oracles, tabulated
//! oracles, and seeded random generators.

pub mod flow;
pub mod random;
pub mod rap;
pub mod remark;
pub mod submodular;
pub mod tabulated;

use std::error::Error;
use std::fmt;

use crate::point::IntPoint;

/// Errors raised while constructing instances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstanceError {
    DuplicatePoint(IntPoint),
    PointOutsideBox(IntPoint),
    /// A univariate cost table is not convex.
    NonConvexTable { index: usize, at: usize },
    /// A set function spec violates the submodular/polymatroid requirements.
    MalformedSubmodular(String),
    /// A flow network spec is inconsistent.
    MalformedNetwork(String),
    /// Random generation could not produce a certified instance within the
    /// retry budget.
    GenerationFailed(String),
}

impl fmt::Display for InstanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceError::DuplicatePoint(p) => write!(f, "duplicate table point {p}"),
            InstanceError::PointOutsideBox(p) => {
                write!(f, "table point {p} lies outside the declared box")
            }
            InstanceError::NonConvexTable { index, at } => write!(
                f,
                "cost table {index} is not convex at position {at}"
            ),
            InstanceError::MalformedSubmodular(msg) => write!(f, "malformed set function: {msg}"),
            InstanceError::MalformedNetwork(msg) => write!(f, "malformed network: {msg}"),
            InstanceError::GenerationFailed(msg) => write!(f, "generation failed: {msg}"),
        }
    }
}

impl Error for InstanceError {}
