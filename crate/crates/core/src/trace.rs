//! Step-by-step records of one solver run.

use crate::point::Direction;
use crate::value::Rat;

/// One applied move of a solver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub direction: Direction,
    /// Positive step multiplier along the direction.
    pub length: i64,
    /// Slope of the move; finite by construction (infinite moves are never
    /// applied).
    pub slope: Rat,
    /// Function value at the point reached by this step. Equals the previous
    /// value plus `length * slope`.
    pub value_after: Rat,
    /// Outer iteration the step belongs to (1-based). For unit/long-step
    /// solvers this equals the step index; for the slope-ordered solvers it
    /// is the surrounding sweep.
    pub outer: usize,
}

/// The ordered list of applied steps of one run, with oracle accounting.
#[derive(Clone, Debug, Default)]
pub struct SolveTrace {
    pub steps: Vec<TraceStep>,
    /// Underlying oracle evaluations (post-memo).
    pub evals: usize,
    /// Number of outer iterations; equals `steps.len()` for solvers without
    /// an inner sweep.
    pub outer_iterations: usize,
}

impl SolveTrace {
    /// Total step length, counting multiplicities.
    pub fn total_length(&self) -> i64 {
        self.steps.iter().map(|s| s.length).sum()
    }

    /// Slopes of the applied steps, in order.
    pub fn slopes(&self) -> Vec<Rat> {
        self.steps.iter().map(|s| s.slope.clone()).collect()
    }
}
