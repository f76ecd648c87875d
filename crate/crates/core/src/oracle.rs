//! The evaluation-oracle abstraction and the per-run memo table.

use std::cell::{Cell, RefCell};
use std::collections::HashMap;

use num_bigint::BigInt;

use crate::point::IntPoint;
use crate::value::ExtValue;

/// Evaluation interface for a function `Z^n -> R ∪ {+∞}`.
///
/// Implementations must be pure: `eval` is deterministic and side-effect
/// free, every finite-valued point lies inside `bounding_box`, and
/// `|f(x)| <= value_bound` on the effective domain.
pub trait MOracle {
    fn dim(&self) -> usize;

    fn eval(&self, x: &IntPoint) -> ExtValue;

    /// Componentwise lower/upper bounds containing the effective domain.
    fn bounding_box(&self) -> (IntPoint, IntPoint);

    /// An integer `B` with `|f(x)| <= B` for all finite-valued `x`.
    fn value_bound(&self) -> BigInt;

    /// Some point of the effective domain, or `None` if it is empty.
    ///
    /// The default scans the bounding box in lexicographic order, which is
    /// only suitable for desk-scale boxes; instance families override this
    /// with a directly constructed point.
    fn witness(&self) -> Option<IntPoint> {
        let (lo, hi) = self.bounding_box();
        box_points(&lo, &hi).find(|x| self.eval(x).is_finite())
    }
}

/// Largest coordinate width of the bounding box: the diameter proxy used to
/// cap binary searches for step lengths.
pub fn l_infinity(f: &dyn MOracle) -> i64 {
    let (lo, hi) = f.bounding_box();
    (0..f.dim()).map(|i| hi[i] - lo[i]).max().unwrap_or(0)
}

/// Number of lattice points in the box, or `None` on overflow.
pub fn box_volume(lo: &IntPoint, hi: &IntPoint) -> Option<u128> {
    let mut vol: u128 = 1;
    for i in 0..lo.dim() {
        if hi[i] < lo[i] {
            return Some(0);
        }
        let width = (hi[i] - lo[i]) as u128 + 1;
        vol = vol.checked_mul(width)?;
    }
    Some(vol)
}

/// Iterates the lattice points of `[lo, hi]` in lexicographic order.
pub fn box_points(lo: &IntPoint, hi: &IntPoint) -> BoxPoints {
    let empty = (0..lo.dim()).any(|i| hi[i] < lo[i]);
    BoxPoints {
        lo: lo.clone(),
        hi: hi.clone(),
        next: if empty { None } else { Some(lo.clone()) },
    }
}

pub struct BoxPoints {
    lo: IntPoint,
    hi: IntPoint,
    next: Option<IntPoint>,
}

impl Iterator for BoxPoints {
    type Item = IntPoint;

    fn next(&mut self) -> Option<IntPoint> {
        let current = self.next.take()?;
        let mut coords = current.coords().to_vec();
        // Odometer increment from the last coordinate.
        for i in (0..coords.len()).rev() {
            if coords[i] < self.hi[i] {
                coords[i] += 1;
                self.next = Some(IntPoint::new(coords));
                return Some(current);
            }
            coords[i] = self.lo[i];
        }
        self.next = None;
        Some(current)
    }
}

/// A memoizing wrapper around an oracle, confined to one solver run.
///
/// `call_count` reports the number of underlying oracle evaluations, i.e.
/// cache misses.
pub struct CachedOracle<'a> {
    inner: &'a dyn MOracle,
    memo: RefCell<HashMap<IntPoint, ExtValue>>,
    misses: Cell<usize>,
}

impl<'a> CachedOracle<'a> {
    pub fn new(inner: &'a dyn MOracle) -> Self {
        CachedOracle {
            inner,
            memo: RefCell::new(HashMap::new()),
            misses: Cell::new(0),
        }
    }

    pub fn call_count(&self) -> usize {
        self.misses.get()
    }
}

impl MOracle for CachedOracle<'_> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, x: &IntPoint) -> ExtValue {
        if let Some(v) = self.memo.borrow().get(x) {
            return v.clone();
        }
        let v = self.inner.eval(x);
        self.misses.set(self.misses.get() + 1);
        self.memo.borrow_mut().insert(x.clone(), v.clone());
        v
    }

    fn bounding_box(&self) -> (IntPoint, IntPoint) {
        self.inner.bounding_box()
    }

    fn value_bound(&self) -> BigInt {
        self.inner.value_bound()
    }

    fn witness(&self) -> Option<IntPoint> {
        self.inner.witness()
    }
}
