//! Finite point/value tables as oracles; the backing for file-loaded
//! instances and perturbation-generated ones.

use std::collections::HashMap;

use num_bigint::BigInt;

use super::InstanceError;
use crate::oracle::MOracle;
use crate::point::IntPoint;
use crate::value::{ExtValue, Rat};

#[derive(Debug)]
pub struct TabulatedOracle {
    dim: usize,
    table: HashMap<IntPoint, Rat>,
    lo: IntPoint,
    hi: IntPoint,
    value_bound: BigInt,
}

/// Builds an oracle returning the listed value at each listed point and
/// `+∞` everywhere else.
pub fn tabulated_oracle(
    entries: Vec<(IntPoint, Rat)>,
    lo: IntPoint,
    hi: IntPoint,
    value_bound: BigInt,
) -> Result<TabulatedOracle, InstanceError> {
    let dim = lo.dim();
    let mut table = HashMap::with_capacity(entries.len());
    for (p, v) in entries {
        if p.dim() != dim || (0..dim).any(|i| p[i] < lo[i] || p[i] > hi[i]) {
            return Err(InstanceError::PointOutsideBox(p));
        }
        if table.insert(p.clone(), v).is_some() {
            return Err(InstanceError::DuplicatePoint(p));
        }
    }
    Ok(TabulatedOracle {
        dim,
        table,
        lo,
        hi,
        value_bound,
    })
}

impl TabulatedOracle {
    pub fn entries(&self) -> impl Iterator<Item = (&IntPoint, &Rat)> {
        self.table.iter()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

impl MOracle for TabulatedOracle {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &IntPoint) -> ExtValue {
        match self.table.get(x) {
            Some(v) => ExtValue::Finite(v.clone()),
            None => ExtValue::PlusInfinity,
        }
    }

    fn bounding_box(&self) -> (IntPoint, IntPoint) {
        (self.lo.clone(), self.hi.clone())
    }

    fn value_bound(&self) -> BigInt {
        self.value_bound.clone()
    }

    fn witness(&self) -> Option<IntPoint> {
        self.table.keys().min().cloned()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::rat;

    fn p(coords: &[i64]) -> IntPoint {
        IntPoint::new(coords.to_vec())
    }

    #[test]
    fn rejects_duplicates_and_out_of_box_points() {
        let err = tabulated_oracle(
            vec![(p(&[0, 1]), rat(1)), (p(&[0, 1]), rat(2))],
            p(&[0, 0]),
            p(&[1, 1]),
            2.into(),
        )
        .unwrap_err();
        assert_eq!(err, InstanceError::DuplicatePoint(p(&[0, 1])));

        let err = tabulated_oracle(
            vec![(p(&[3, 0]), rat(1))],
            p(&[0, 0]),
            p(&[1, 1]),
            1.into(),
        )
        .unwrap_err();
        assert_eq!(err, InstanceError::PointOutsideBox(p(&[3, 0])));
    }

    #[test]
    fn empty_table_has_no_witness() {
        let f = tabulated_oracle(vec![], p(&[0, 0]), p(&[1, 1]), 0.into()).unwrap();
        assert!(f.witness().is_none());
        assert_eq!(f.eval(&p(&[0, 0])), ExtValue::PlusInfinity);
    }

    #[test]
    fn witness_is_the_lexicographic_minimum() {
        let f = tabulated_oracle(
            vec![(p(&[1, 0]), rat(5)), (p(&[0, 1]), rat(7))],
            p(&[0, 0]),
            p(&[1, 1]),
            7.into(),
        )
        .unwrap();
        assert_eq!(f.witness(), Some(p(&[0, 1])));
    }
}
