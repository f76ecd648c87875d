//! The four-variable worked instance used throughout the test suite.

use num_bigint::BigInt;

use crate::oracle::MOracle;
use crate::point::IntPoint;
use crate::value::ExtValue;

/// The function on `Z^4` with
/// `dom = {x >= 0 | sum x = 3, x1 <= 2, x2 <= 2, x3 <= 1, x4 <= 1} \ {(0,2,1,0)}`,
/// `f(x) = -x1 - x3` except the single off-formula value `f(2,0,0,1) = -1`.
///
/// The unique minimizer is `(2,0,1,0)` with value `-3`.
pub struct RemarkZ4 {
    /// Extra points carved out of the domain; `(0,2,1,0)` is always excluded.
    holes: Vec<IntPoint>,
}

pub fn remark_z4_instance() -> RemarkZ4 {
    RemarkZ4 { holes: Vec::new() }
}

/// The same table with `(1,1,1,0)` also removed from the domain. The removal
/// breaks the exchange axiom; this is the deliberately broken fixture for
/// certification tests.
pub fn remark_z4_broken() -> RemarkZ4 {
    RemarkZ4 {
        holes: vec![IntPoint::new(vec![1, 1, 1, 0])],
    }
}

impl MOracle for RemarkZ4 {
    fn dim(&self) -> usize {
        4
    }

    fn eval(&self, x: &IntPoint) -> ExtValue {
        debug_assert_eq!(x.dim(), 4);
        let caps = [2, 2, 1, 1];
        let in_dom = x.sum() == 3
            && (0..4).all(|i| x[i] >= 0 && x[i] <= caps[i])
            && x.coords() != [0, 2, 1, 0]
            && !self.holes.iter().any(|h| h == x);
        if !in_dom {
            return ExtValue::PlusInfinity;
        }
        if x.coords() == [2, 0, 0, 1] {
            ExtValue::from_int(-1)
        } else {
            ExtValue::from_int(-(x[0] + x[2]))
        }
    }

    fn bounding_box(&self) -> (IntPoint, IntPoint) {
        (IntPoint::zeros(4), IntPoint::new(vec![2, 2, 1, 1]))
    }

    fn value_bound(&self) -> BigInt {
        BigInt::from(3)
    }

    fn witness(&self) -> Option<IntPoint> {
        Some(IntPoint::new(vec![0, 1, 1, 1]))
    }
}
