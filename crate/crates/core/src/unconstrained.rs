//! Unconstrained minimization by steepest descent with unit and long step
//! lengths.
//!
//! Four solvers share the same primitives:
//!
//! - [`m_sd`]: unit steps along a steepest direction until no slope is
//!   negative.
//! - [`m_sd_prime`]: the restricted-choice variant that never re-increases a
//!   coordinate it has decreased (and vice versa).
//! - [`m_lsd`]: like `m_sd` but each selected direction is ridden as far as
//!   the slope stays constant.
//! - [`m_lsd2`]: outer iterations each call the slope-raising sweep
//!   [`m_inc_slope`], which applies every direction whose slope equals the
//!   current steepest slope, with a long step each. The steepest slope
//!   strictly increases per sweep.
//!
//! All choices are deterministic: candidate indices are scanned in
//! ascending order, ties resolve to the lexicographically smallest pair.

use num_traits::{Signed, Zero};

use crate::descent::{all_decs, phi, slope, steepest_direction, step_reach};
use crate::error::SolveError;
use crate::oracle::{CachedOracle, MOracle};
use crate::point::{Direction, IntPoint};
use crate::trace::{SolveTrace, TraceStep};
use crate::value::{ExtValue, Rat};

/// Outcome of an unconstrained solve.
#[derive(Clone, Debug)]
pub struct SolveResult {
    pub minimizer: IntPoint,
    pub value: Rat,
    pub trace: SolveTrace,
    /// Steepest slope at the start of each outer iteration, including the
    /// final zero; populated by [`m_lsd2`] only. Strictly increasing.
    pub phi_history: Vec<Rat>,
}

/// Internal solver state: cached oracle, current point/value, trace sink.
pub(crate) struct Run<'a> {
    pub(crate) f: CachedOracle<'a>,
    pub(crate) x: IntPoint,
    pub(crate) value: Rat,
    pub(crate) steps: Vec<TraceStep>,
}

impl<'a> Run<'a> {
    pub(crate) fn start(f: &'a dyn MOracle, x0: &IntPoint) -> Result<Self, SolveError> {
        let cached = CachedOracle::new(f);
        let value = match cached.eval(x0).finite() {
            Some(v) => v.clone(),
            None => return Err(SolveError::StartOutsideDomain(x0.clone())),
        };
        Ok(Run {
            f: cached,
            x: x0.clone(),
            value,
            steps: Vec::new(),
        })
    }

    pub(crate) fn apply(&mut self, d: Direction, length: i64, slope: &Rat, outer: usize) {
        debug_assert!(length >= 1, "applied steps have positive length");
        self.x = self.x.stepped(d, length);
        self.value += Rat::from_integer(length.into()) * slope;
        debug_assert_eq!(
            self.f.eval(&self.x),
            ExtValue::Finite(self.value.clone()),
            "step must stay on the linear segment"
        );
        self.steps.push(TraceStep {
            direction: d,
            length,
            slope: slope.clone(),
            value_after: self.value.clone(),
            outer,
        });
    }

    pub(crate) fn finish(self, outer_iterations: usize, phi_history: Vec<Rat>) -> SolveResult {
        SolveResult {
            minimizer: self.x,
            value: self.value,
            trace: SolveTrace {
                steps: self.steps,
                evals: self.f.call_count(),
                outer_iterations,
            },
            phi_history,
        }
    }
}

/// Steepest descent with unit steps. Stops at the first point where no
/// exchange move has negative slope, which is then a global minimizer.
pub fn m_sd(f: &dyn MOracle, x0: &IntPoint) -> Result<SolveResult, SolveError> {
    let n = f.dim();
    let incs: Vec<usize> = (0..n).collect();
    let decs = all_decs(n);
    let mut run = Run::start(f, x0)?;
    loop {
        let (d, s) = steepest_direction(&run.f, &run.x, &incs, &decs)?;
        match s {
            ExtValue::Finite(s) if s.is_negative() => {
                let outer = run.steps.len() + 1;
                run.apply(d, 1, &s, outer);
            }
            _ => break,
        }
    }
    let outer = run.steps.len();
    Ok(run.finish(outer, Vec::new()))
}

/// Steepest descent restricted to indices that may still move: once a
/// coordinate is decreased it is dropped from the increase side, and vice
/// versa. Equivalent to a particular tie-breaking of [`m_sd`].
pub fn m_sd_prime(f: &dyn MOracle, x0: &IntPoint) -> Result<SolveResult, SolveError> {
    let n = f.dim();
    let mut run = Run::start(f, x0)?;
    let mut inc_allowed = vec![true; n];
    let mut dec_allowed = vec![true; n];
    loop {
        let incs: Vec<usize> = (0..n).filter(|&i| inc_allowed[i]).collect();
        let decs: Vec<Option<usize>> = (0..n).filter(|&j| dec_allowed[j]).map(Some).collect();
        if incs.is_empty() || decs.is_empty() {
            break;
        }
        if incs.len() == 1 && decs == [Some(incs[0])] {
            break;
        }
        let (d, s) = steepest_direction(&run.f, &run.x, &incs, &decs)?;
        match s {
            ExtValue::Finite(s) if s.is_negative() => {
                let j = d.dec.expect("exchange direction");
                let outer = run.steps.len() + 1;
                run.apply(d, 1, &s, outer);
                inc_allowed[j] = false;
                dec_allowed[d.inc] = false;
            }
            _ => break,
        }
    }
    let outer = run.steps.len();
    Ok(run.finish(outer, Vec::new()))
}

/// Steepest descent with long steps: each selected direction is applied
/// with the full step length over which the slope stays constant.
pub fn m_lsd(f: &dyn MOracle, x0: &IntPoint) -> Result<SolveResult, SolveError> {
    let n = f.dim();
    let incs: Vec<usize> = (0..n).collect();
    let decs = all_decs(n);
    let mut run = Run::start(f, x0)?;
    loop {
        let (d, s) = steepest_direction(&run.f, &run.x, &incs, &decs)?;
        match s {
            ExtValue::Finite(s) if s.is_negative() => {
                let reach = step_reach(&run.f, &run.x, d)?;
                let outer = run.steps.len() + 1;
                run.apply(d, reach, &s, outer);
            }
            _ => break,
        }
    }
    let outer = run.steps.len();
    Ok(run.finish(outer, Vec::new()))
}

/// One slope-raising sweep shared by [`m_lsd2`] and the standalone
/// [`m_inc_slope`]. `threshold` must equal the steepest slope at the
/// starting point and be negative. Every applied update uses a distinct
/// direction.
fn inc_slope_sweep(run: &mut Run, threshold: &Rat, outer: usize) -> Result<(), SolveError> {
    let n = run.f.dim();
    for i in 0..n {
        for j in 0..n {
            if j == i {
                continue;
            }
            let d = Direction::exchange(i, j);
            if slope(&run.f, &run.x, d)? == ExtValue::Finite(threshold.clone()) {
                let reach = step_reach(&run.f, &run.x, d)?;
                debug_assert!(reach >= 1, "a matching slope admits at least the unit step");
                run.apply(d, reach, threshold, outer);
            }
        }
    }
    Ok(())
}

/// Applies every direction whose slope equals the current steepest slope,
/// in ascending `(i, j)` order with one long step each. The steepest slope
/// at the returned point is strictly larger than at the input.
pub fn m_inc_slope(f: &dyn MOracle, x: &IntPoint) -> Result<IntPoint, SolveError> {
    let mut run = Run::start(f, x)?;
    let threshold = match phi(&run.f, x)? {
        ExtValue::Finite(v) if v.is_negative() => v,
        _ => return Err(SolveError::NotDescending),
    };
    inc_slope_sweep(&mut run, &threshold, 1)?;
    Ok(run.x)
}

/// Long-step steepest descent with slope-ordered sweeps: each outer
/// iteration recomputes the steepest slope and runs one slope-raising
/// sweep. For integer-valued functions the number of outer iterations is at
/// most the absolute steepest slope at the start.
pub fn m_lsd2(f: &dyn MOracle, x0: &IntPoint) -> Result<SolveResult, SolveError> {
    let mut run = Run::start(f, x0)?;
    let mut phi_history = Vec::new();
    let mut outer = 0;
    loop {
        let current = phi(&run.f, &run.x)?;
        let threshold = current.expect_finite("phi is finite on the domain").clone();
        phi_history.push(threshold.clone());
        if threshold.is_zero() {
            break;
        }
        outer += 1;
        inc_slope_sweep(&mut run, &threshold, outer)?;
    }
    Ok(run.finish(outer, phi_history))
}

/// The restricted slope-raising sweep: a successful update on `(i, j)`
/// additionally removes `j` from the future increase side and `i` from the
/// shared decrease side.
pub fn m_inc_slope_prime(f: &dyn MOracle, x: &IntPoint) -> Result<IntPoint, SolveError> {
    let mut run = Run::start(f, x)?;
    let threshold = match phi(&run.f, x)? {
        ExtValue::Finite(v) if v.is_negative() => v,
        _ => return Err(SolveError::NotDescending),
    };
    let n = run.f.dim();
    let mut inc_allowed = vec![true; n];
    let mut dec_allowed = vec![true; n];
    for i in 0..n {
        if !inc_allowed[i] {
            continue;
        }
        // Snapshot of the admissible decrease side for this pass.
        let decs: Vec<usize> = (0..n).filter(|&j| j != i && dec_allowed[j]).collect();
        for j in decs {
            let d = Direction::exchange(i, j);
            if slope(&run.f, &run.x, d)? == ExtValue::Finite(threshold.clone()) {
                let reach = step_reach(&run.f, &run.x, d)?;
                run.apply(d, reach, &threshold, 1);
                inc_allowed[j] = false;
                dec_allowed[i] = false;
            }
        }
    }
    Ok(run.x)
}
