//! Error types shared by the descent primitives and the solvers.

use std::error::Error;
use std::fmt;

use crate::point::{Direction, IntPoint};

/// Errors from the slope/steepest-direction/step-length primitives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DescentError {
    /// The base point evaluates to `+∞`.
    EvalOutsideDomain(IntPoint),
    /// A step length was requested along a direction with slope `+∞`.
    InfiniteSlope(IntPoint, Direction),
}

impl fmt::Display for DescentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DescentError::EvalOutsideDomain(x) => {
                write!(f, "point {x} is outside the effective domain")
            }
            DescentError::InfiniteSlope(x, d) => {
                write!(f, "slope at {x} in direction {d} is +inf")
            }
        }
    }
}

impl Error for DescentError {}

/// Errors from the solvers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveError {
    /// The initial point evaluates to `+∞`.
    StartOutsideDomain(IntPoint),
    /// A slope-raising sweep was requested at a point that is already locally
    /// optimal for the relevant direction family.
    NotDescending,
    /// The oracle has no finite-valued point.
    EmptyDomain,
    /// The constraint target `k` is outside the feasible range of `x(R)`.
    InfeasibleK { k: i64, reached: i64 },
    /// Malformed constraint set (empty, out of range, or not a proper subset
    /// where one is required).
    InvalidConstraint(String),
    /// A lazily checked rank oracle returned values inconsistent with a
    /// polymatroid rank function.
    InconsistentRank(String),
    Descent(DescentError),
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::StartOutsideDomain(x) => {
                write!(f, "initial point {x} is outside the effective domain")
            }
            SolveError::NotDescending => {
                write!(f, "no descent direction exists at the given point")
            }
            SolveError::EmptyDomain => write!(f, "the effective domain is empty"),
            SolveError::InfeasibleK { k, reached } => write!(
                f,
                "constraint x(R) = {k} is infeasible; no move is available beyond x(R) = {reached}"
            ),
            SolveError::InvalidConstraint(msg) => write!(f, "invalid constraint: {msg}"),
            SolveError::InconsistentRank(msg) => write!(f, "inconsistent rank oracle: {msg}"),
            SolveError::Descent(e) => write!(f, "{e}"),
        }
    }
}

impl Error for SolveError {}

impl From<DescentError> for SolveError {
    fn from(e: DescentError) -> Self {
        SolveError::Descent(e)
    }
}
