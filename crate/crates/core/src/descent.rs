//! Slopes, steepest descent directions, and the long-step length.

use crate::error::DescentError;
use crate::oracle::MOracle;
use crate::point::{Direction, IntPoint};
use crate::value::{ExtValue, Rat};

/// The slope `f(x + e_i - e_j) - f(x)` of `f` at `x` along a direction.
///
/// Requires `f(x)` finite; the result is `+∞` exactly when the target point
/// is outside the effective domain.
pub fn slope(f: &dyn MOracle, x: &IntPoint, d: Direction) -> Result<ExtValue, DescentError> {
    let at_x = f.eval(x);
    let base = match at_x.finite() {
        Some(v) => v.clone(),
        None => return Err(DescentError::EvalOutsideDomain(x.clone())),
    };
    Ok(f.eval(&x.stepped(d, 1)).minus_finite(&base))
}

/// The slope along the identity move, zero by definition.
pub fn identity_slope() -> ExtValue {
    ExtValue::zero()
}

/// The direction minimizing the slope over `incs x decs` (pairs with
/// `inc == dec` are skipped), with ties broken by the order of the given
/// slices. The minimum slope is returned alongside and may be `+∞` when no
/// candidate move stays in the domain.
pub fn steepest_direction(
    f: &dyn MOracle,
    x: &IntPoint,
    incs: &[usize],
    decs: &[Option<usize>],
) -> Result<(Direction, ExtValue), DescentError> {
    assert!(
        !incs.is_empty() && !decs.is_empty(),
        "steepest_direction needs nonempty candidate sets"
    );
    let mut best: Option<(Direction, ExtValue)> = None;
    for &i in incs {
        for &j in decs {
            if j == Some(i) {
                continue;
            }
            let d = Direction { inc: i, dec: j };
            let s = slope(f, x, d)?;
            match &best {
                Some((_, s0)) if *s0 <= s => {}
                _ => best = Some((d, s)),
            }
        }
    }
    best.ok_or_else(|| {
        // Only reachable with incs = decs = a single shared index.
        DescentError::EvalOutsideDomain(x.clone())
    })
}

/// All proper exchange decrements `Some(0), .., Some(n-1)`.
pub fn all_decs(n: usize) -> Vec<Option<usize>> {
    (0..n).map(Some).collect()
}

/// The steepest slope of `f` at `x` over all exchange directions, capped at
/// zero by the identity move. Zero exactly at global minimizers.
pub fn phi(f: &dyn MOracle, x: &IntPoint) -> Result<ExtValue, DescentError> {
    let n = f.dim();
    let incs: Vec<usize> = (0..n).collect();
    let (_, s) = steepest_direction(f, x, &incs, &all_decs(n))?;
    Ok(s.min(identity_slope()))
}

/// The long-step length: the largest `lambda >= 0` such that
/// `f(x + lambda * d) - f(x) = lambda * slope(f, x, d)`.
///
/// The equality predicate is monotone in `lambda` (convexity of `f` along
/// the segment), so the result is found by binary search on `[1, U]` where
/// `U` is the box width along `d`. Oracle cost per call: at most
/// `ceil(log2(U)) + 2` evaluations through the memo table.
pub fn step_reach(f: &dyn MOracle, x: &IntPoint, d: Direction) -> Result<i64, DescentError> {
    let s = match slope(f, x, d)? {
        ExtValue::Finite(s) => s,
        ExtValue::PlusInfinity => return Err(DescentError::InfiniteSlope(x.clone(), d)),
    };
    let base = f.eval(x).expect_finite("step_reach base point").clone();

    let (lo, hi) = f.bounding_box();
    let mut limit = hi[d.inc] - x[d.inc];
    if let Some(j) = d.dec {
        limit = limit.min(x[j] - lo[j]);
    }
    debug_assert!(limit >= 1, "finite slope implies the unit move stays in the box");

    let linear_at = |lambda: i64| -> bool {
        let target = f.eval(&x.stepped(d, lambda));
        match target.finite() {
            Some(v) => v - &base == Rat::from_integer(lambda.into()) * &s,
            None => false,
        }
    };

    // Invariant: linear_at(lo) holds, linear_at(hi + 1) fails or hi = limit.
    let (mut lo_l, mut hi_l) = (1i64, limit);
    while lo_l < hi_l {
        let mid = lo_l + (hi_l - lo_l + 1) / 2;
        if linear_at(mid) {
            lo_l = mid;
        } else {
            hi_l = mid - 1;
        }
    }
    Ok(lo_l)
}

/// Ceiling of `log2(v + 1)`: the binary-search budget for a width-`v` box.
pub fn log2_ceil(v: i64) -> u32 {
    let m = v.max(0) as u64 + 1;
    if m <= 1 {
        0
    } else {
        64 - (m - 1).leading_zeros()
    }
}
