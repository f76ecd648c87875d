//! Real-domain solvers over exact rational points.
//!
//! A polyhedral oracle exposes, besides evaluation, the one-sided
//! directional derivative along each exchange direction and the exact reach
//! over which the function stays linear along it. Instance constructors
//! bear the burden of exactness: the finite-termination argument rests on
//! exact slope comparisons, which probing cannot provide.

use std::error::Error;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::instances::submodular::SubmodularSpec;
use crate::point::{Direction, IntPoint};
use crate::value::{ExtValue, Rat};

/// A point of `R^n` with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatPoint(Vec<Rat>);

impl RatPoint {
    pub fn new(coords: Vec<Rat>) -> Self {
        RatPoint(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        RatPoint(coords.iter().map(|&c| Rat::from_integer(c.into())).collect())
    }

    pub fn from_int_point(p: &IntPoint) -> Self {
        Self::from_ints(p.coords())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn get(&self, i: usize) -> &Rat {
        &self.0[i]
    }

    pub fn sum(&self) -> Rat {
        self.0.iter().sum()
    }

    pub fn l1_distance(&self, other: &RatPoint) -> Rat {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .sum()
    }

    /// `x + lambda * (e_inc - e_dec)`.
    pub fn stepped(&self, d: Direction, lambda: &Rat) -> RatPoint {
        let mut coords = self.0.clone();
        coords[d.inc] += lambda;
        if let Some(j) = d.dec {
            coords[j] -= lambda;
        }
        RatPoint(coords)
    }
}

impl fmt::Display for RatPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (t, c) in self.0.iter().enumerate() {
            if t > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", crate::value::format_rat(c))?;
        }
        write!(f, ")")
    }
}

/// Errors from polyhedral construction and solving.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyError {
    EvalOutsideDomain(RatPoint),
    NotDescending,
    /// The open-termination solver hit its iteration cap; reported, not a
    /// bug.
    IterationCapExceeded(usize),
    /// The proven-terminating solver hit its diagnostic cap; a bug.
    OuterCapExceeded(usize),
    MalformedBreakpoints(String),
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::EvalOutsideDomain(x) => {
                write!(f, "point {x} is outside the effective domain")
            }
            PolyError::NotDescending => {
                write!(f, "no descent direction exists at the given point")
            }
            PolyError::IterationCapExceeded(cap) => {
                write!(f, "iteration cap {cap} exceeded")
            }
            PolyError::OuterCapExceeded(cap) => {
                write!(f, "outer iteration cap {cap} exceeded unexpectedly")
            }
            PolyError::MalformedBreakpoints(msg) => write!(f, "malformed breakpoints: {msg}"),
        }
    }
}

impl Error for PolyError {}

/// Evaluation interface for a polyhedral function on `R^n`.
///
/// Contract, for `x` in the effective domain and `d` an exchange direction:
/// `eval(x + a * d) = eval(x) + a * dderiv(x, d)` for all rational
/// `0 <= a <= reach(x, d)`, `dderiv(x, d) = +∞` exactly when no positive
/// move along `d` stays in the domain, and `reach(x, d) > 0` whenever
/// `dderiv(x, d)` is finite.
pub trait PolyOracle {
    fn dim(&self) -> usize;

    fn eval(&self, x: &RatPoint) -> ExtValue;

    /// One-sided directional derivative along `+e_i - e_j`.
    fn dderiv(&self, x: &RatPoint, d: Direction) -> ExtValue;

    /// Largest `lambda` with `eval(x + lambda * d) = eval(x) + lambda *
    /// dderiv(x, d)`; zero when the derivative is `+∞`.
    fn reach(&self, x: &RatPoint, d: Direction) -> Rat;

    fn bounding_box(&self) -> (RatPoint, RatPoint);

    /// A point of the effective domain, when one is cheaply available.
    fn start_point(&self) -> Option<RatPoint> {
        None
    }

    /// Upper bound on the number of distinct directional-derivative values,
    /// when the instance can provide one; drives the diagnostic outer cap of
    /// the proven-terminating solver.
    fn slope_count_hint(&self) -> Option<usize> {
        None
    }
}

/// Default iteration cap for the solver whose termination is open.
pub const DEFAULT_PM_CAP: usize = 100_000;

/// The steepest directional derivative at `x` over all exchange directions,
/// capped at zero by the identity. Zero exactly at global minimizers.
pub fn phi_r(f: &dyn PolyOracle, x: &RatPoint) -> Result<ExtValue, PolyError> {
    if !f.eval(x).is_finite() {
        return Err(PolyError::EvalOutsideDomain(x.clone()));
    }
    let n = f.dim();
    let mut best = ExtValue::zero();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let s = f.dderiv(x, Direction::exchange(i, j));
            if s < best {
                best = s;
            }
        }
    }
    Ok(best)
}

fn steepest(f: &dyn PolyOracle, x: &RatPoint) -> (Direction, ExtValue) {
    let n = f.dim();
    let mut best: Option<(Direction, ExtValue)> = None;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let d = Direction::exchange(i, j);
            let s = f.dderiv(x, d);
            match &best {
                Some((_, s0)) if *s0 <= s => {}
                _ => best = Some((d, s)),
            }
        }
    }
    best.expect("dimension at least 2")
}

/// One applied move of a polyhedral run.
#[derive(Clone, Debug)]
pub struct PolyTraceStep {
    pub direction: Direction,
    pub length: Rat,
    pub slope: Rat,
    pub value_after: Rat,
    pub outer: usize,
}

#[derive(Clone, Debug, Default)]
pub struct PolyTrace {
    pub steps: Vec<PolyTraceStep>,
    pub evals: usize,
    pub dderiv_calls: usize,
    pub outer_iterations: usize,
}

#[derive(Clone, Debug)]
pub struct PolySolveResult {
    pub minimizer: RatPoint,
    pub value: Rat,
    pub trace: PolyTrace,
    /// Steepest slope at the start of each outer iteration (the
    /// slope-ordered solver only), ending at zero. Strictly increasing.
    pub phi_history: Vec<Rat>,
}

struct PolyRun<'a> {
    f: Counting<'a>,
    x: RatPoint,
    value: Rat,
    steps: Vec<PolyTraceStep>,
}

struct Counting<'a> {
    inner: &'a dyn PolyOracle,
    evals: std::cell::Cell<usize>,
    dderivs: std::cell::Cell<usize>,
}

impl PolyOracle for Counting<'_> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, x: &RatPoint) -> ExtValue {
        self.evals.set(self.evals.get() + 1);
        self.inner.eval(x)
    }

    fn dderiv(&self, x: &RatPoint, d: Direction) -> ExtValue {
        self.dderivs.set(self.dderivs.get() + 1);
        self.inner.dderiv(x, d)
    }

    fn reach(&self, x: &RatPoint, d: Direction) -> Rat {
        self.inner.reach(x, d)
    }

    fn bounding_box(&self) -> (RatPoint, RatPoint) {
        self.inner.bounding_box()
    }
}

impl<'a> PolyRun<'a> {
    fn start(f: &'a dyn PolyOracle, x0: &RatPoint) -> Result<Self, PolyError> {
        let counting = Counting {
            inner: f,
            evals: std::cell::Cell::new(0),
            dderivs: std::cell::Cell::new(0),
        };
        let value = match counting.eval(x0).finite() {
            Some(v) => v.clone(),
            None => return Err(PolyError::EvalOutsideDomain(x0.clone())),
        };
        Ok(PolyRun {
            f: counting,
            x: x0.clone(),
            value,
            steps: Vec::new(),
        })
    }

    fn apply(&mut self, d: Direction, length: Rat, slope: &Rat, outer: usize) {
        debug_assert!(length.is_positive(), "applied steps have positive length");
        self.x = self.x.stepped(d, &length);
        self.value += &length * slope;
        debug_assert_eq!(
            self.f.eval(&self.x),
            ExtValue::Finite(self.value.clone()),
            "step must stay on the linear segment"
        );
        self.steps.push(PolyTraceStep {
            direction: d,
            length,
            slope: slope.clone(),
            value_after: self.value.clone(),
            outer,
        });
    }

    fn finish(self, outer_iterations: usize, phi_history: Vec<Rat>) -> PolySolveResult {
        PolySolveResult {
            minimizer: self.x,
            value: self.value,
            trace: PolyTrace {
                steps: self.steps,
                evals: self.f.evals.get(),
                dderiv_calls: self.f.dderivs.get(),
                outer_iterations,
            },
            phi_history,
        }
    }
}

/// Long-step steepest descent on a polyhedral oracle. Guarded by an
/// iteration cap because finite termination of this variant is open; a cap
/// breach is reported as an error, not a bug.
pub fn pm_lsd(
    f: &dyn PolyOracle,
    x0: &RatPoint,
    cap: usize,
) -> Result<PolySolveResult, PolyError> {
    let mut run = PolyRun::start(f, x0)?;
    loop {
        let (d, s) = steepest(&run.f, &run.x);
        match s {
            ExtValue::Finite(s) if s.is_negative() => {
                if run.steps.len() >= cap {
                    return Err(PolyError::IterationCapExceeded(cap));
                }
                let length = run.f.reach(&run.x, d);
                let outer = run.steps.len() + 1;
                run.apply(d, length, &s, outer);
            }
            _ => break,
        }
    }
    let outer = run.steps.len();
    Ok(run.finish(outer, Vec::new()))
}

fn pm_sweep(run: &mut PolyRun, threshold: &Rat, outer: usize) {
    let n = run.f.dim();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let d = Direction::exchange(i, j);
            if run.f.dderiv(&run.x, d) == ExtValue::Finite(threshold.clone()) {
                let length = run.f.reach(&run.x, d);
                debug_assert!(length.is_positive());
                run.apply(d, length, threshold, outer);
            }
        }
    }
}

/// One slope-raising sweep: applies every direction whose derivative equals
/// the current steepest slope, with the exact reach each. The steepest
/// slope at the output is strictly larger.
pub fn pm_inc_slope(f: &dyn PolyOracle, x: &RatPoint) -> Result<RatPoint, PolyError> {
    let mut run = PolyRun::start(f, x)?;
    let threshold = match phi_r(f, x)? {
        ExtValue::Finite(v) if v.is_negative() => v,
        _ => return Err(PolyError::NotDescending),
    };
    pm_sweep(&mut run, &threshold, 1);
    Ok(run.x)
}

/// Slope-ordered long-step descent; terminates unconditionally because the
/// steepest slope strictly increases per sweep and takes finitely many
/// values. The cap is diagnostic only and a breach is an internal error.
pub fn pm_lsd2(
    f: &dyn PolyOracle,
    x0: &RatPoint,
    outer_cap: Option<usize>,
) -> Result<PolySolveResult, PolyError> {
    let n = f.dim();
    let cap = outer_cap.unwrap_or_else(|| {
        f.slope_count_hint()
            .map(|h| (h + 2) * n * n)
            .unwrap_or(DEFAULT_PM_CAP)
    });
    let mut run = PolyRun::start(f, x0)?;
    let mut history = Vec::new();
    let mut outer = 0;
    loop {
        let current = phi_r(&run.f, &run.x)?;
        let threshold = current.expect_finite("phi is finite on the domain").clone();
        history.push(threshold.clone());
        if threshold.is_zero() {
            break;
        }
        if outer >= cap {
            return Err(PolyError::OuterCapExceeded(cap));
        }
        outer += 1;
        pm_sweep(&mut run, &threshold, outer);
    }
    Ok(run.finish(outer, history))
}

/// A univariate convex piecewise-linear function with rational breakpoints,
/// given by strictly increasing breakpoints, one slope per piece
/// (non-decreasing), and an anchor value.
#[derive(Clone, Debug)]
pub struct PiecewiseLinear {
    breakpoints: Vec<Rat>,
    slopes: Vec<Rat>,
    anchor_t: Rat,
    anchor_value: Rat,
}

impl PiecewiseLinear {
    pub fn new(
        breakpoints: Vec<Rat>,
        slopes: Vec<Rat>,
        anchor_t: Rat,
        anchor_value: Rat,
    ) -> Result<Self, PolyError> {
        if slopes.len() != breakpoints.len() + 1 {
            return Err(PolyError::MalformedBreakpoints(
                "need exactly one slope per piece".into(),
            ));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(PolyError::MalformedBreakpoints(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        if slopes.windows(2).any(|w| w[0] > w[1]) {
            return Err(PolyError::MalformedBreakpoints(
                "slopes must be non-decreasing".into(),
            ));
        }
        // Canonical form: a breakpoint with equal slopes on both sides is
        // not a breakpoint. Reach computations rely on every stored
        // breakpoint being a genuine slope change.
        let mut kept_bps = Vec::with_capacity(breakpoints.len());
        let mut kept_slopes = vec![slopes[0].clone()];
        for (b, s) in breakpoints.into_iter().zip(slopes.into_iter().skip(1)) {
            if s == *kept_slopes.last().unwrap() {
                continue;
            }
            kept_bps.push(b);
            kept_slopes.push(s);
        }
        Ok(PiecewiseLinear {
            breakpoints: kept_bps,
            slopes: kept_slopes,
            anchor_t,
            anchor_value,
        })
    }

    /// Constant zero.
    pub fn zero() -> Self {
        PiecewiseLinear {
            breakpoints: Vec::new(),
            slopes: vec![Rat::zero()],
            anchor_t: Rat::zero(),
            anchor_value: Rat::zero(),
        }
    }

    /// Slope of the piece immediately to the right of `t`.
    pub fn right_slope(&self, t: &Rat) -> &Rat {
        let idx = self.breakpoints.iter().filter(|b| *b <= t).count();
        &self.slopes[idx]
    }

    /// Slope of the piece immediately to the left of `t`.
    pub fn left_slope(&self, t: &Rat) -> &Rat {
        let idx = self.breakpoints.iter().filter(|b| *b < t).count();
        &self.slopes[idx]
    }

    pub fn next_breakpoint_above(&self, t: &Rat) -> Option<&Rat> {
        self.breakpoints.iter().find(|b| *b > t)
    }

    pub fn prev_breakpoint_below(&self, t: &Rat) -> Option<&Rat> {
        self.breakpoints.iter().rev().find(|b| *b < t)
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        let mut pos = self.anchor_t.clone();
        let mut val = self.anchor_value.clone();
        while pos < *t {
            let stop = match self.next_breakpoint_above(&pos) {
                Some(b) if b < t => b.clone(),
                _ => t.clone(),
            };
            val += self.right_slope(&pos) * (&stop - &pos);
            pos = stop;
        }
        while pos > *t {
            let stop = match self.prev_breakpoint_below(&pos) {
                Some(b) if b > t => b.clone(),
                _ => t.clone(),
            };
            val -= self.left_slope(&pos) * (&pos - &stop);
            pos = stop;
        }
        val
    }

    pub fn breakpoints(&self) -> &[Rat] {
        &self.breakpoints
    }

    pub fn slopes(&self) -> &[Rat] {
        &self.slopes
    }

    /// Largest absolute value over an interval; attained at an endpoint or a
    /// breakpoint.
    fn max_abs_on(&self, lo: &Rat, hi: &Rat) -> Rat {
        let mut best = self.eval(lo).abs().max(self.eval(hi).abs());
        for b in &self.breakpoints {
            if b >= lo && b <= hi {
                best = best.max(self.eval(b).abs());
            }
        }
        best
    }
}

/// A separable piecewise-linear convex function plus the indicator of the
/// real base polytope of an integer-valued submodular function. All oracle
/// answers are exact: derivatives come from breakpoint arithmetic, reaches
/// combine breakpoint distances with the exchange capacity of the polytope
/// (evaluated by subset enumeration, so intended for small `n`).
pub struct PlSeparable {
    rho: SubmodularSpec,
    costs: Vec<PiecewiseLinear>,
}

pub fn pl_separable_instance(
    rho: SubmodularSpec,
    costs: Vec<PiecewiseLinear>,
) -> Result<PlSeparable, PolyError> {
    if costs.len() != rho.n() {
        return Err(PolyError::MalformedBreakpoints(format!(
            "{} cost functions for {} coordinates",
            costs.len(),
            rho.n()
        )));
    }
    Ok(PlSeparable { rho, costs })
}

impl PlSeparable {
    pub fn rho(&self) -> &SubmodularSpec {
        &self.rho
    }

    pub fn costs(&self) -> &[PiecewiseLinear] {
        &self.costs
    }

    fn subset_sums(x: &RatPoint) -> Vec<Rat> {
        let n = x.dim();
        let mut sums = vec![Rat::zero(); 1 << n];
        for mask in 1..(1u64 << n) {
            let low = mask.trailing_zeros() as usize;
            sums[mask as usize] =
                sums[(mask & (mask - 1)) as usize].clone() + x.get(low);
        }
        sums
    }

    pub fn in_base(&self, x: &RatPoint) -> bool {
        let n = self.rho.n();
        let sums = Self::subset_sums(x);
        let full = (1u64 << n) - 1;
        if sums[full as usize] != Rat::from_integer(self.rho.rho(full).into()) {
            return false;
        }
        (1..full).all(|mask| sums[mask as usize] <= Rat::from_integer(self.rho.rho(mask).into()))
    }

    /// Largest `a >= 0` with `x + a * (e_i - e_j)` still in the base
    /// polytope: `min over sets Y with i in Y, j not in Y of rho(Y) - x(Y)`.
    pub fn exchange_capacity(&self, x: &RatPoint, i: usize, j: usize) -> Rat {
        let n = self.rho.n();
        let sums = Self::subset_sums(x);
        let mut cap: Option<Rat> = None;
        for mask in 0..(1u64 << n) {
            if mask >> i & 1 == 0 || mask >> j & 1 == 1 {
                continue;
            }
            let slack = Rat::from_integer(self.rho.rho(mask).into()) - &sums[mask as usize];
            cap = Some(match cap {
                Some(c) => c.min(slack),
                None => slack,
            });
        }
        cap.expect("i and j are distinct, so a separating set exists")
    }

    /// The greedy vertex of the base polytope for the identity ordering; a
    /// convenient integral starting point.
    pub fn greedy_vertex(&self) -> RatPoint {
        RatPoint::from_int_point(&self.rho.greedy_base())
    }

    /// Least common multiple of the breakpoint denominators; the grid
    /// `(1/D) Z^n` contains a global minimizer.
    pub fn grid_denominator(&self) -> i64 {
        let mut d = BigInt::one();
        for c in &self.costs {
            for b in c.breakpoints() {
                d = d.lcm(b.denom());
            }
        }
        i64::try_from(d).expect("desk-scale denominators")
    }

    /// All points of the grid `(1/denom) Z^n` inside the base polytope.
    pub fn grid_points(&self, denom: i64) -> Vec<RatPoint> {
        let n = self.rho.n();
        let (lo, hi) = self.bounding_box();
        let scale = Rat::from_integer(denom.into());
        let lo_i: Vec<i64> = (0..n)
            .map(|i| (lo.get(i) * &scale).ceil().to_integer().try_into().unwrap())
            .collect();
        let hi_i: Vec<i64> = (0..n)
            .map(|i| (hi.get(i) * &scale).floor().to_integer().try_into().unwrap())
            .collect();
        let mut out = Vec::new();
        let mut cursor = lo_i.clone();
        'outer: loop {
            let candidate = RatPoint::new(
                cursor
                    .iter()
                    .map(|&c| Rat::new(c.into(), denom.into()))
                    .collect(),
            );
            if self.in_base(&candidate) {
                out.push(candidate);
            }
            for i in (0..n).rev() {
                if cursor[i] < hi_i[i] {
                    cursor[i] += 1;
                    continue 'outer;
                }
                cursor[i] = lo_i[i];
                if i == 0 {
                    break 'outer;
                }
            }
        }
        out
    }
}

impl PlSeparable {
    /// The restriction of the function to `Z^n`, packaged as a lattice
    /// oracle. For integral breakpoints this restriction satisfies the
    /// M-convex exchange axiom.
    pub fn integer_restriction(&self) -> PlIntegerRestriction<'_> {
        PlIntegerRestriction { inner: self }
    }
}

pub struct PlIntegerRestriction<'a> {
    inner: &'a PlSeparable,
}

impl crate::oracle::MOracle for PlIntegerRestriction<'_> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, x: &IntPoint) -> ExtValue {
        self.inner.eval(&RatPoint::from_int_point(x))
    }

    fn bounding_box(&self) -> (IntPoint, IntPoint) {
        let (lo, hi) = self.inner.bounding_box();
        let floor = |r: &Rat| -> i64 { r.floor().to_integer().try_into().unwrap() };
        let ceil = |r: &Rat| -> i64 { r.ceil().to_integer().try_into().unwrap() };
        (
            IntPoint::new(lo.coords().iter().map(ceil).collect()),
            IntPoint::new(hi.coords().iter().map(floor).collect()),
        )
    }

    fn value_bound(&self) -> BigInt {
        let (lo, hi) = self.inner.bounding_box();
        let total: Rat = (0..self.inner.dim())
            .map(|i| self.inner.costs[i].max_abs_on(lo.get(i), hi.get(i)))
            .sum();
        total.ceil().to_integer() + 1
    }

    fn witness(&self) -> Option<IntPoint> {
        Some(self.inner.rho.greedy_base())
    }
}

impl PolyOracle for PlSeparable {
    fn dim(&self) -> usize {
        self.rho.n()
    }

    fn eval(&self, x: &RatPoint) -> ExtValue {
        if !self.in_base(x) {
            return ExtValue::PlusInfinity;
        }
        let total = (0..self.dim())
            .map(|i| self.costs[i].eval(x.get(i)))
            .sum();
        ExtValue::Finite(total)
    }

    fn dderiv(&self, x: &RatPoint, d: Direction) -> ExtValue {
        let j = d.dec.expect("polyhedral directions are exchanges");
        if !self.exchange_capacity(x, d.inc, j).is_positive() {
            return ExtValue::PlusInfinity;
        }
        let up = self.costs[d.inc].right_slope(x.get(d.inc));
        let down = self.costs[j].left_slope(x.get(j));
        ExtValue::Finite(up - down)
    }

    fn reach(&self, x: &RatPoint, d: Direction) -> Rat {
        let j = d.dec.expect("polyhedral directions are exchanges");
        let cap = self.exchange_capacity(x, d.inc, j);
        if !cap.is_positive() {
            return Rat::zero();
        }
        let mut reach = cap;
        if let Some(b) = self.costs[d.inc].next_breakpoint_above(x.get(d.inc)) {
            reach = reach.min(b - x.get(d.inc));
        }
        if let Some(b) = self.costs[j].prev_breakpoint_below(x.get(j)) {
            reach = reach.min(x.get(j) - b);
        }
        reach
    }

    fn bounding_box(&self) -> (RatPoint, RatPoint) {
        let n = self.rho.n();
        let full = (1u64 << n) - 1;
        let total = self.rho.rho(full);
        let lo: Vec<Rat> = (0..n)
            .map(|i| Rat::from_integer((total - self.rho.rho(full ^ (1 << i))).into()))
            .collect();
        let hi: Vec<Rat> = (0..n)
            .map(|i| Rat::from_integer(self.rho.rho(1 << i).into()))
            .collect();
        (RatPoint::new(lo), RatPoint::new(hi))
    }

    fn start_point(&self) -> Option<RatPoint> {
        Some(self.greedy_vertex())
    }

    fn slope_count_hint(&self) -> Option<usize> {
        let count: usize = self.costs.iter().map(|c| c.slopes().len()).sum();
        Some(count * count + 1)
    }
}
