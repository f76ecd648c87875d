//! Minimization subject to a fixed partial sum `x(R) = k`, for M-convex and
//! M♮-convex oracles.
//!
//! The solvers start from an optimum of the smallest feasible slice
//! (obtained by a linear shift large enough to dominate the value range)
//! and raise `x(R)` one slice at a time; every intermediate point is an
//! optimum of its slice. Long steps are clipped at the remaining budget
//! `k - x(R)`.
//!
//! M♮ oracles are handled natively by letting the decrease index range over
//! the complement plus the null index, or equivalently through the lift to
//! an M-convex oracle in one more variable.

use num_bigint::BigInt;

use crate::descent::{slope, steepest_direction, step_reach};
use crate::error::SolveError;
use crate::instances::rap::ConvexTable;
use crate::instances::submodular::SubmodularSpec;
use crate::oracle::MOracle;
use crate::point::{complement, Direction, IntPoint};
use crate::trace::SolveTrace;
use crate::unconstrained::{m_lsd2, Run};
use crate::value::{ExtValue, Rat};

/// The side constraint `x(R) = k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSpec {
    /// Constrained index set, sorted and duplicate-free.
    pub set: Vec<usize>,
    pub k: i64,
}

impl ConstraintSpec {
    pub fn new(mut set: Vec<usize>, k: i64) -> Self {
        set.sort_unstable();
        set.dedup();
        ConstraintSpec { set, k }
    }
}

/// Outcome of a constrained solve.
#[derive(Clone, Debug)]
pub struct ConstrainedResult {
    pub optimizer: IntPoint,
    pub value: Rat,
    pub trace: SolveTrace,
    /// Smallest feasible value of `x(R)`, as reached by the initializer (or
    /// declared by the supplied starting point).
    pub k_min: i64,
    /// Constrained steepest slope at the start of each outer iteration;
    /// populated by the slope-ordered solvers only.
    pub phi_r_history: Vec<Rat>,
}

fn validate_set(set: &[usize], n: usize, allow_full: bool) -> Result<(), SolveError> {
    if set.is_empty() {
        return Err(SolveError::InvalidConstraint(
            "constraint set must be nonempty".into(),
        ));
    }
    if set.iter().any(|&i| i >= n) {
        return Err(SolveError::InvalidConstraint(format!(
            "constraint set references an index outside 0..{n}"
        )));
    }
    if set.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SolveError::InvalidConstraint(
            "constraint set must be sorted and duplicate-free".into(),
        ));
    }
    if !allow_full && set.len() == n {
        return Err(SolveError::InvalidConstraint(
            "constraint set must be a proper subset".into(),
        ));
    }
    Ok(())
}

/// The constrained steepest slope: minimum of `f'(x; i, j)` over `i` in the
/// constraint set and `j` in its complement. Not capped at zero; `+∞` when
/// no move stays in the domain. Equals `z(k+1) - z(k)` at any optimum of
/// the slice `x(R) = k`.
pub fn phi_r(f: &dyn MOracle, set: &[usize], x: &IntPoint) -> Result<ExtValue, SolveError> {
    validate_set(set, f.dim(), false)?;
    let decs: Vec<Option<usize>> = complement(f.dim(), set).into_iter().map(Some).collect();
    let (_, s) = steepest_direction(f, x, set, &decs)?;
    Ok(s)
}

/// The M♮ form: `j` additionally ranges over the null index, so the full
/// set is admissible.
pub fn phi_r_nat(f: &dyn MOracle, set: &[usize], x: &IntPoint) -> Result<ExtValue, SolveError> {
    validate_set(set, f.dim(), true)?;
    let decs = nat_decs(f.dim(), set);
    let (_, s) = steepest_direction(f, x, set, &decs)?;
    Ok(s)
}

fn nat_decs(n: usize, set: &[usize]) -> Vec<Option<usize>> {
    let mut decs: Vec<Option<usize>> = complement(n, set).into_iter().map(Some).collect();
    decs.push(None);
    decs
}

/// An oracle shifted by a linear term on the constrained coordinates:
/// `g(x) = f(x) + gamma * x(R)`. M-convexity is preserved.
struct ShiftedOracle<'a> {
    inner: &'a dyn MOracle,
    set: Vec<usize>,
    gamma: BigInt,
}

impl MOracle for ShiftedOracle<'_> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, x: &IntPoint) -> ExtValue {
        let shift = Rat::from_integer(&self.gamma * BigInt::from(x.sum_over(&self.set)));
        match self.inner.eval(x) {
            ExtValue::Finite(v) => ExtValue::Finite(v + shift),
            ExtValue::PlusInfinity => ExtValue::PlusInfinity,
        }
    }

    fn bounding_box(&self) -> (IntPoint, IntPoint) {
        self.inner.bounding_box()
    }

    fn value_bound(&self) -> BigInt {
        let (lo, hi) = self.inner.bounding_box();
        let reach: i64 = self.set.iter().map(|&i| lo[i].abs().max(hi[i].abs())).sum();
        self.inner.value_bound() + &self.gamma * BigInt::from(reach)
    }

    fn witness(&self) -> Option<IntPoint> {
        self.inner.witness()
    }
}

/// A point minimizing `f` on the smallest feasible slice, together with
/// `k_min = min x(R)` over the domain.
///
/// Obtained by minimizing `f(x) + gamma * x(R)` with
/// `gamma = 2 * value_bound + 1`: the shift dominates the value range, so
/// every optimum of the shifted function drives `x(R)` to its minimum, and
/// among those points the shift is constant.
pub fn initial_min_x_r(f: &dyn MOracle, set: &[usize]) -> Result<(IntPoint, i64), SolveError> {
    validate_set(set, f.dim(), false)?;
    let shifted = ShiftedOracle {
        inner: f,
        set: set.to_vec(),
        gamma: BigInt::from(2) * f.value_bound() + 1,
    };
    let x0 = shifted.witness().ok_or(SolveError::EmptyDomain)?;
    let result = m_lsd2(&shifted, &x0)?;
    let k_min = result.minimizer.sum_over(set);
    Ok((result.minimizer, k_min))
}

fn resolve_start(
    spec: &ConstraintSpec,
    x_init: Option<&IntPoint>,
    initializer: impl FnOnce() -> Result<(IntPoint, i64), SolveError>,
) -> Result<(IntPoint, i64), SolveError> {
    let (x0, k_min) = match x_init {
        Some(x) => (x.clone(), x.sum_over(&spec.set)),
        None => initializer()?,
    };
    if spec.k < k_min {
        return Err(SolveError::InfeasibleK {
            k: spec.k,
            reached: k_min,
        });
    }
    Ok((x0, k_min))
}

fn constrained_steps(
    f: &dyn MOracle,
    spec: &ConstraintSpec,
    x_init: Option<&IntPoint>,
    decs: &[Option<usize>],
    initializer: impl FnOnce() -> Result<(IntPoint, i64), SolveError>,
    long_steps: bool,
) -> Result<ConstrainedResult, SolveError> {
    let (x0, k_min) = resolve_start(spec, x_init, initializer)?;
    let mut run = Run::start(f, &x0)?;
    while run.x.sum_over(&spec.set) < spec.k {
        let (d, s) = steepest_direction(&run.f, &run.x, &spec.set, decs)?;
        let s = match s {
            ExtValue::Finite(s) => s,
            ExtValue::PlusInfinity => {
                return Err(SolveError::InfeasibleK {
                    k: spec.k,
                    reached: run.x.sum_over(&spec.set),
                })
            }
        };
        let length = if long_steps {
            let budget = spec.k - run.x.sum_over(&spec.set);
            step_reach(&run.f, &run.x, d)?.min(budget)
        } else {
            1
        };
        let outer = run.steps.len() + 1;
        run.apply(d, length, &s, outer);
    }
    let outer = run.steps.len();
    let result = run.finish(outer, Vec::new());
    Ok(ConstrainedResult {
        optimizer: result.minimizer,
        value: result.value,
        trace: result.trace,
        k_min,
        phi_r_history: Vec::new(),
    })
}

/// Unit-step constrained descent: from an optimum of the lowest slice,
/// `k - k_min` steepest moves from the constraint set into its complement,
/// each landing on the next slice's optimum.
pub fn const_m_sd(
    f: &dyn MOracle,
    spec: &ConstraintSpec,
    x_init: Option<&IntPoint>,
) -> Result<ConstrainedResult, SolveError> {
    validate_set(&spec.set, f.dim(), false)?;
    let decs: Vec<Option<usize>> = complement(f.dim(), &spec.set).into_iter().map(Some).collect();
    constrained_steps(f, spec, x_init, &decs, || initial_min_x_r(f, &spec.set), false)
}

/// Long-step constrained descent: step lengths are clipped at the remaining
/// budget `k - x(R)`.
pub fn const_m_lsd(
    f: &dyn MOracle,
    spec: &ConstraintSpec,
    x_init: Option<&IntPoint>,
) -> Result<ConstrainedResult, SolveError> {
    validate_set(&spec.set, f.dim(), false)?;
    let decs: Vec<Option<usize>> = complement(f.dim(), &spec.set).into_iter().map(Some).collect();
    constrained_steps(f, spec, x_init, &decs, || initial_min_x_r(f, &spec.set), true)
}

fn const_inc_sweep(
    run: &mut Run,
    set: &[usize],
    decs: &[Option<usize>],
    k: i64,
    threshold: &Rat,
    outer: usize,
) -> Result<(), SolveError> {
    for &i in set {
        for &j in decs {
            if j == Some(i) {
                continue;
            }
            if run.x.sum_over(set) == k {
                return Ok(());
            }
            let d = Direction { inc: i, dec: j };
            if slope(&run.f, &run.x, d)? == ExtValue::Finite(threshold.clone()) {
                let budget = k - run.x.sum_over(set);
                let length = step_reach(&run.f, &run.x, d)?.min(budget);
                run.apply(d, length, threshold, outer);
            }
        }
    }
    Ok(())
}

/// One budget-clipped slope-raising sweep. Starting from an optimum of a
/// slice below `k`, the output either reaches `x(R) = k` or has a strictly
/// larger constrained steepest slope.
pub fn const_m_inc_slope(
    f: &dyn MOracle,
    set: &[usize],
    k: i64,
    x: &IntPoint,
) -> Result<IntPoint, SolveError> {
    validate_set(set, f.dim(), false)?;
    let decs: Vec<Option<usize>> = complement(f.dim(), set).into_iter().map(Some).collect();
    let mut run = Run::start(f, x)?;
    let threshold = match phi_r(&run.f, set, x)? {
        ExtValue::Finite(v) => v,
        ExtValue::PlusInfinity => {
            return Err(SolveError::InfeasibleK {
                k,
                reached: x.sum_over(set),
            })
        }
    };
    const_inc_sweep(&mut run, set, &decs, k, &threshold, 1)?;
    Ok(run.x)
}

fn const_lsd2_engine(
    f: &dyn MOracle,
    spec: &ConstraintSpec,
    x_init: Option<&IntPoint>,
    decs: &[Option<usize>],
    initializer: impl FnOnce() -> Result<(IntPoint, i64), SolveError>,
) -> Result<ConstrainedResult, SolveError> {
    let (x0, k_min) = resolve_start(spec, x_init, initializer)?;
    let mut run = Run::start(f, &x0)?;
    let mut history = Vec::new();
    let mut outer = 0;
    while run.x.sum_over(&spec.set) < spec.k {
        let (_, s) = steepest_direction(&run.f, &run.x, &spec.set, decs)?;
        let threshold = match s {
            ExtValue::Finite(s) => s,
            ExtValue::PlusInfinity => {
                return Err(SolveError::InfeasibleK {
                    k: spec.k,
                    reached: run.x.sum_over(&spec.set),
                })
            }
        };
        history.push(threshold.clone());
        outer += 1;
        const_inc_sweep(&mut run, &spec.set, decs, spec.k, &threshold, outer)?;
    }
    let result = run.finish(outer, Vec::new());
    Ok(ConstrainedResult {
        optimizer: result.minimizer,
        value: result.value,
        trace: result.trace,
        k_min,
        phi_r_history: history,
    })
}

/// Constrained descent with slope-ordered sweeps: each outer iteration runs
/// one budget-clipped sweep at the current constrained steepest slope.
pub fn const_m_lsd2(
    f: &dyn MOracle,
    spec: &ConstraintSpec,
    x_init: Option<&IntPoint>,
) -> Result<ConstrainedResult, SolveError> {
    validate_set(&spec.set, f.dim(), false)?;
    let decs: Vec<Option<usize>> = complement(f.dim(), &spec.set).into_iter().map(Some).collect();
    const_lsd2_engine(f, spec, x_init, &decs, || initial_min_x_r(f, &spec.set))
}

/// The M-convex lift of an M♮-convex oracle: one extra coordinate pinned to
/// the negated total, `f~(x, t) = f(x)` when `x(N) + t = 0`, else `+∞`. The
/// extra coordinate is placed last.
pub struct LiftedOracle<'a> {
    inner: &'a dyn MOracle,
}

pub fn lift_mnat(f: &dyn MOracle) -> LiftedOracle<'_> {
    LiftedOracle { inner: f }
}

impl LiftedOracle<'_> {
    fn split(&self, x: &IntPoint) -> (IntPoint, i64) {
        let n = self.inner.dim();
        debug_assert_eq!(x.dim(), n + 1);
        (IntPoint::new(x.coords()[..n].to_vec()), x[n])
    }
}

impl MOracle for LiftedOracle<'_> {
    fn dim(&self) -> usize {
        self.inner.dim() + 1
    }

    fn eval(&self, x: &IntPoint) -> ExtValue {
        let (base, last) = self.split(x);
        if base.sum() + last != 0 {
            return ExtValue::PlusInfinity;
        }
        self.inner.eval(&base)
    }

    fn bounding_box(&self) -> (IntPoint, IntPoint) {
        let (lo, hi) = self.inner.bounding_box();
        let mut lo_c = lo.coords().to_vec();
        let mut hi_c = hi.coords().to_vec();
        lo_c.push(-hi.sum());
        hi_c.push(-lo.sum());
        (IntPoint::new(lo_c), IntPoint::new(hi_c))
    }

    fn value_bound(&self) -> BigInt {
        self.inner.value_bound()
    }

    fn witness(&self) -> Option<IntPoint> {
        let w = self.inner.witness()?;
        let mut coords = w.coords().to_vec();
        coords.push(-w.sum());
        Some(IntPoint::new(coords))
    }
}

fn mnat_initializer(f: &dyn MOracle, set: &[usize]) -> Result<(IntPoint, i64), SolveError> {
    let lifted = lift_mnat(f);
    let (xt, k_min) = initial_min_x_r(&lifted, set)?;
    let n = f.dim();
    Ok((IntPoint::new(xt.coords()[..n].to_vec()), k_min))
}

/// Long-step constrained descent on an M♮ oracle: the decrease index ranges
/// over the complement plus the null index. Values agree with solving the
/// lifted problem.
pub fn const_mnat_lsd(
    f: &dyn MOracle,
    spec: &ConstraintSpec,
    x_init: Option<&IntPoint>,
) -> Result<ConstrainedResult, SolveError> {
    validate_set(&spec.set, f.dim(), true)?;
    let decs = nat_decs(f.dim(), &spec.set);
    constrained_steps(f, spec, x_init, &decs, || mnat_initializer(f, &spec.set), true)
}

/// The slope-ordered M♮ variant.
pub fn const_mnat_lsd2(
    f: &dyn MOracle,
    spec: &ConstraintSpec,
    x_init: Option<&IntPoint>,
) -> Result<ConstrainedResult, SolveError> {
    validate_set(&spec.set, f.dim(), true)?;
    let decs = nat_decs(f.dim(), &spec.set);
    const_lsd2_engine(f, spec, x_init, &decs, || mnat_initializer(f, &spec.set))
}

/// The `R = N` specialization: every move is a pure coordinate increment.
pub fn const_mnat_lsd3(
    f: &dyn MOracle,
    k: i64,
    x_init: Option<&IntPoint>,
) -> Result<ConstrainedResult, SolveError> {
    let n = f.dim();
    let spec = ConstraintSpec::new((0..n).collect(), k);
    let decs = vec![None];
    constrained_steps(f, &spec, x_init, &decs, || mnat_initializer(f, &spec.set), true)
}

/// Incremental greedy with long steps for separable convex minimization
/// over the bases of a polymatroid: repeatedly pick the coordinate with the
/// cheapest feasible unit increment and ride it while both the increment
/// cost stays constant and the polymatroid admits it.
///
/// The rank function is trusted but spot-checked on every queried set;
/// detected violations surface as [`SolveError::InconsistentRank`].
pub fn greedy_sc(
    costs: &[ConvexTable],
    rho: &SubmodularSpec,
) -> Result<ConstrainedResult, SolveError> {
    let n = rho.n();
    if costs.len() != n {
        return Err(SolveError::InvalidConstraint(format!(
            "{} cost tables for {} coordinates",
            costs.len(),
            n
        )));
    }
    if rho.rho(0) != 0 {
        return Err(SolveError::InconsistentRank("rho(empty) != 0".into()));
    }
    let total = rho.rho_full();
    if total < 0 {
        return Err(SolveError::InconsistentRank("rho(N) < 0".into()));
    }
    for (i, table) in costs.iter().enumerate() {
        if table.range_len() < total as usize + 1 {
            return Err(SolveError::InvalidConstraint(format!(
                "cost table {i} does not cover 0..={total}"
            )));
        }
    }

    let mut x = IntPoint::zeros(n);
    let mut value: Rat = Rat::from_integer(
        costs
            .iter()
            .map(|t| BigInt::from(t.eval(0)))
            .sum::<BigInt>(),
    );
    let mut steps = Vec::new();
    while x.sum() < total {
        let mut best: Option<(usize, i64, i64)> = None; // (i, increment, capacity)
        for i in 0..n {
            let cap = saturation_capacity(rho, &x, i)?;
            if cap < 1 {
                continue;
            }
            let inc = costs[i].increment(x[i]);
            if best.as_ref().is_none_or(|&(_, b, _)| inc < b) {
                best = Some((i, inc, cap));
            }
        }
        let Some((i, inc, cap)) = best else {
            return Err(SolveError::InconsistentRank(
                "no coordinate can be raised although x(N) < rho(N)".into(),
            ));
        };
        let length = costs[i].linearity_reach(x[i]).min(cap);
        x = x.stepped(Direction::increment(i), length);
        let slope = Rat::from_integer(inc.into());
        value += Rat::from_integer(length.into()) * &slope;
        steps.push(crate::trace::TraceStep {
            direction: Direction::increment(i),
            length,
            slope,
            value_after: value.clone(),
            outer: steps.len() + 1,
        });
    }
    let outer = steps.len();
    Ok(ConstrainedResult {
        optimizer: x,
        value,
        trace: SolveTrace {
            steps,
            evals: 0,
            outer_iterations: outer,
        },
        k_min: 0,
        phi_r_history: Vec::new(),
    })
}

/// Largest `lambda` with `x + lambda * e_i` in the polymatroid:
/// `min over sets Y containing i of rho(Y) - x(Y)`.
fn saturation_capacity(
    rho: &SubmodularSpec,
    x: &IntPoint,
    i: usize,
) -> Result<i64, SolveError> {
    let n = rho.n();
    let sums = SubmodularSpec::subset_sums(x);
    let full_rank = rho.rho((1u64 << n) - 1);
    let mut cap = i64::MAX;
    for mask in 0..(1u64 << n) {
        if mask >> i & 1 == 0 {
            continue;
        }
        let r = rho.rho(mask);
        if r < 0 || r > full_rank {
            return Err(SolveError::InconsistentRank(format!(
                "rho of mask {mask} is {r}, outside [0, rho(N) = {full_rank}]"
            )));
        }
        cap = cap.min(r - sums[mask as usize]);
    }
    Ok(cap)
}
