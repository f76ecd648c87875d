//! Separable-convex resource allocation over a polymatroid, in both the
//! base-constrained form (an M-convex oracle) and the free form over the
//! polymatroid (an M♮-convex oracle).

use num_bigint::BigInt;

use super::submodular::SubmodularSpec;
use super::InstanceError;
use crate::oracle::MOracle;
use crate::point::IntPoint;
use crate::value::ExtValue;

/// A univariate convex function tabulated on `0..=len-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexTable {
    values: Vec<i64>,
}

impl ConvexTable {
    /// Validates convexity: increments must be non-decreasing.
    pub fn new(index: usize, values: Vec<i64>) -> Result<Self, InstanceError> {
        assert!(!values.is_empty(), "a cost table needs at least one value");
        for t in 2..values.len() {
            if values[t] - values[t - 1] < values[t - 1] - values[t - 2] {
                return Err(InstanceError::NonConvexTable { index, at: t });
            }
        }
        Ok(ConvexTable { values })
    }

    pub fn eval(&self, t: i64) -> i64 {
        self.values[t as usize]
    }

    pub fn range_len(&self) -> usize {
        self.values.len()
    }

    /// Increment `f(t+1) - f(t)`.
    pub fn increment(&self, t: i64) -> i64 {
        self.values[t as usize + 1] - self.values[t as usize]
    }

    /// Largest `lambda` with `f(t + lambda) - f(t) = lambda * increment(t)`,
    /// staying within the table range.
    pub fn linearity_reach(&self, t: i64) -> i64 {
        let inc = self.increment(t);
        let mut lambda = 1i64;
        while (t + lambda) as usize + 1 < self.values.len() && self.increment(t + lambda) == inc {
            lambda += 1;
        }
        lambda
    }

    pub fn max_abs(&self) -> i64 {
        self.values.iter().map(|v| v.abs()).max().unwrap_or(0)
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }
}

fn separable_sum(costs: &[ConvexTable], x: &IntPoint) -> i64 {
    (0..x.dim()).map(|i| costs[i].eval(x[i])).sum()
}

fn validate(
    rho: &SubmodularSpec,
    costs: &[ConvexTable],
) -> Result<(), InstanceError> {
    if !rho.is_polymatroid() {
        return Err(InstanceError::MalformedSubmodular(
            "resource allocation needs a polymatroid rank function".into(),
        ));
    }
    let needed = rho.rho_full() as usize + 1;
    for (i, table) in costs.iter().enumerate() {
        if table.range_len() < needed {
            return Err(InstanceError::NonConvexTable {
                index: i,
                at: table.range_len(),
            });
        }
    }
    Ok(())
}

fn upper_bounds(rho: &SubmodularSpec) -> IntPoint {
    let n = rho.n();
    IntPoint::new((0..n).map(|i| rho.rho(1u64 << i)).collect())
}

fn cost_bound(rho: &SubmodularSpec, costs: &[ConvexTable]) -> BigInt {
    let per_coord: i64 = costs.iter().map(|t| t.max_abs()).sum();
    BigInt::from(per_coord.max(1)) * BigInt::from(rho.n().max(1))
}

/// Sum of the coordinate costs on the bases of `P(rho)`, `+∞` elsewhere.
pub struct RapBaseOracle {
    rho: SubmodularSpec,
    costs: Vec<ConvexTable>,
}

/// Sum of the coordinate costs on all of `P(rho)`, `+∞` elsewhere.
pub struct RapPolymatroidOracle {
    rho: SubmodularSpec,
    costs: Vec<ConvexTable>,
}

/// Builds both reformulations of the same allocation problem.
pub fn rap_instance(
    rho: SubmodularSpec,
    costs: Vec<ConvexTable>,
) -> Result<(RapBaseOracle, RapPolymatroidOracle), InstanceError> {
    validate(&rho, &costs)?;
    Ok((
        RapBaseOracle {
            rho: rho.clone(),
            costs: costs.clone(),
        },
        RapPolymatroidOracle { rho, costs },
    ))
}

impl RapBaseOracle {
    pub fn rho(&self) -> &SubmodularSpec {
        &self.rho
    }

    pub fn costs(&self) -> &[ConvexTable] {
        &self.costs
    }
}

impl RapPolymatroidOracle {
    pub fn rho(&self) -> &SubmodularSpec {
        &self.rho
    }

    pub fn costs(&self) -> &[ConvexTable] {
        &self.costs
    }
}

impl MOracle for RapBaseOracle {
    fn dim(&self) -> usize {
        self.rho.n()
    }

    fn eval(&self, x: &IntPoint) -> ExtValue {
        if self.rho.in_base(x) {
            ExtValue::from_int(separable_sum(&self.costs, x))
        } else {
            ExtValue::PlusInfinity
        }
    }

    fn bounding_box(&self) -> (IntPoint, IntPoint) {
        (IntPoint::zeros(self.rho.n()), upper_bounds(&self.rho))
    }

    fn value_bound(&self) -> BigInt {
        cost_bound(&self.rho, &self.costs)
    }

    fn witness(&self) -> Option<IntPoint> {
        Some(self.rho.greedy_base())
    }
}

impl MOracle for RapPolymatroidOracle {
    fn dim(&self) -> usize {
        self.rho.n()
    }

    fn eval(&self, x: &IntPoint) -> ExtValue {
        if self.rho.in_polymatroid(x) {
            ExtValue::from_int(separable_sum(&self.costs, x))
        } else {
            ExtValue::PlusInfinity
        }
    }

    fn bounding_box(&self) -> (IntPoint, IntPoint) {
        (IntPoint::zeros(self.rho.n()), upper_bounds(&self.rho))
    }

    fn value_bound(&self) -> BigInt {
        cost_bound(&self.rho, &self.costs)
    }

    fn witness(&self) -> Option<IntPoint> {
        Some(IntPoint::zeros(self.rho.n()))
    }
}

/// The two-variable quadratic instance `rho({1}) = rho({2}) = 2`,
/// `rho(N) = 3`, `f_i(t) = t^2`: the base form has exactly the two optima
/// `(1,2)` and `(2,1)` of value 5.
pub fn quadratic_pair_instance() -> (RapBaseOracle, RapPolymatroidOracle) {
    let rho = SubmodularSpec::tabulated(2, vec![0, 2, 2, 3]).unwrap();
    let squares = ConvexTable::new(0, vec![0, 1, 4, 9]).unwrap();
    rap_instance(rho, vec![squares.clone(), squares]).unwrap()
}
