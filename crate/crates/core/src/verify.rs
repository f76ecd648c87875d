//! Brute-force ground truth: domain enumeration, exchange-axiom
//! certification, global and constrained minima, and distance to the argmin
//! set. Everything here is independent of the solvers it referees.

use std::collections::{BTreeMap, HashMap};
use std::error::Error;
use std::fmt;

use crate::oracle::{box_points, box_volume, MOracle};
use crate::point::IntPoint;
use crate::value::{ExtValue, Rat};

/// Default ceiling on the number of box lattice points an enumeration will
/// visit.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyError {
    /// The bounding box holds more lattice points than the enumeration cap.
    EnumerationTooLarge { volume: Option<u128>, cap: u128 },
    EmptyDomain,
    /// A referenced point is outside the effective domain.
    OutsideDomain(IntPoint),
}

impl fmt::Display for VerifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyError::EnumerationTooLarge { volume, cap } => match volume {
                Some(v) => write!(f, "box volume {v} exceeds the enumeration cap {cap}"),
                None => write!(f, "box volume overflows; enumeration cap {cap}"),
            },
            VerifyError::EmptyDomain => write!(f, "the effective domain is empty"),
            VerifyError::OutsideDomain(x) => {
                write!(f, "point {x} is outside the effective domain")
            }
        }
    }
}

impl Error for VerifyError {}

/// A complete listing of the effective domain, enumerated from the box.
pub struct DomainEnumeration {
    pub points: Vec<IntPoint>,
    pub values: Vec<Rat>,
    by_point: HashMap<IntPoint, Rat>,
}

impl DomainEnumeration {
    /// `f(x)` via the table; points outside the listing (including outside
    /// the box) evaluate to `+∞`.
    pub fn value_at(&self, x: &IntPoint) -> ExtValue {
        match self.by_point.get(x) {
            Some(v) => ExtValue::Finite(v.clone()),
            None => ExtValue::PlusInfinity,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn min_value(&self) -> Option<&Rat> {
        self.values.iter().min()
    }

    pub fn argmin(&self) -> Vec<IntPoint> {
        match self.min_value() {
            Some(m) => {
                let m = m.clone();
                self.points
                    .iter()
                    .zip(&self.values)
                    .filter(|(_, v)| **v == m)
                    .map(|(p, _)| p.clone())
                    .collect()
            }
            None => Vec::new(),
        }
    }
}

/// Evaluates every lattice point of the bounding box, keeping the finite
/// ones.
pub fn enumerate_domain(f: &dyn MOracle, cap: u128) -> Result<DomainEnumeration, VerifyError> {
    let (lo, hi) = f.bounding_box();
    let volume = box_volume(&lo, &hi);
    match volume {
        Some(v) if v <= cap => {}
        _ => return Err(VerifyError::EnumerationTooLarge { volume, cap }),
    }
    let mut points = Vec::new();
    let mut values = Vec::new();
    let mut by_point = HashMap::new();
    for x in box_points(&lo, &hi) {
        if let ExtValue::Finite(v) = f.eval(&x) {
            points.push(x.clone());
            values.push(v.clone());
            by_point.insert(x, v);
        }
    }
    Ok(DomainEnumeration {
        points,
        values,
        by_point,
    })
}

/// A counterexample to an exchange axiom: for `x`, `y`, and
/// `i in supp+(x - y)`, every admissible `j` fails the exchange inequality.
#[derive(Clone, Debug)]
pub struct ExchangeWitness {
    pub x: IntPoint,
    pub y: IntPoint,
    pub i: usize,
    /// Every `j` that was tried; `None` is the null index of the M♮ axiom.
    pub failed_j: Vec<Option<usize>>,
}

impl fmt::Display for ExchangeWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let js: Vec<String> = self
            .failed_j
            .iter()
            .map(|j| match j {
                Some(j) => (j + 1).to_string(),
                None => "0".to_string(),
            })
            .collect();
        write!(
            f,
            "x={}, y={}, i={}, no admissible j in {{{}}} satisfies the exchange inequality",
            self.x,
            self.y,
            self.i + 1,
            js.join(",")
        )
    }
}

#[derive(Clone, Debug)]
pub struct ExchangeReport {
    pub holds: bool,
    pub witness: Option<ExchangeWitness>,
}

fn check_exchange(
    f: &dyn MOracle,
    cap: u128,
    allow_null: bool,
) -> Result<ExchangeReport, VerifyError> {
    let dom = enumerate_domain(f, cap)?;
    for x in &dom.points {
        let fx = dom.value_at(x);
        for y in &dom.points {
            if x == y {
                continue;
            }
            let fy = dom.value_at(y);
            let lhs = &fx + &fy;
            for i in x.supp_pos(y) {
                let mut candidates: Vec<Option<usize>> =
                    x.supp_neg(y).into_iter().map(Some).collect();
                if allow_null {
                    candidates.push(None);
                }
                let ok = candidates.iter().any(|&j| {
                    let x_moved = move_point(x, i, j, -1);
                    let y_moved = move_point(y, i, j, 1);
                    let rhs = &dom.value_at(&x_moved) + &dom.value_at(&y_moved);
                    lhs >= rhs && rhs.is_finite()
                });
                if !ok {
                    return Ok(ExchangeReport {
                        holds: false,
                        witness: Some(ExchangeWitness {
                            x: x.clone(),
                            y: y.clone(),
                            i,
                            failed_j: candidates,
                        }),
                    });
                }
            }
        }
    }
    Ok(ExchangeReport {
        holds: true,
        witness: None,
    })
}

/// `x + sign * (e_i - e_j)` with `j = None` meaning the null index.
fn move_point(x: &IntPoint, i: usize, j: Option<usize>, sign: i64) -> IntPoint {
    let mut coords = x.coords().to_vec();
    coords[i] += sign;
    if let Some(j) = j {
        coords[j] -= sign;
    }
    IntPoint::new(coords)
}

/// Exhaustive check of the M-convex exchange axiom: for every pair of
/// domain points and every `i` increasing the gap, some `j` decreasing the
/// gap satisfies `f(x) + f(y) >= f(x - e_i + e_j) + f(y + e_i - e_j)`.
pub fn check_m_exc(f: &dyn MOracle, cap: u128) -> Result<ExchangeReport, VerifyError> {
    check_exchange(f, cap, false)
}

/// The M♮ form: `j` additionally ranges over the null index.
pub fn check_mnat_exc(f: &dyn MOracle, cap: u128) -> Result<ExchangeReport, VerifyError> {
    check_exchange(f, cap, true)
}

/// Whether the effective domain itself (as a 0/∞ indicator) satisfies the
/// M-convex exchange axiom, i.e. is an integral base polyhedron.
pub fn check_domain_base_polyhedron(
    f: &dyn MOracle,
    cap: u128,
) -> Result<ExchangeReport, VerifyError> {
    let dom = enumerate_domain(f, cap)?;
    let indicator = Indicator { dom: &dom, f };
    check_m_exc(&indicator, cap)
}

struct Indicator<'a> {
    dom: &'a DomainEnumeration,
    f: &'a dyn MOracle,
}

impl MOracle for Indicator<'_> {
    fn dim(&self) -> usize {
        self.f.dim()
    }

    fn eval(&self, x: &IntPoint) -> ExtValue {
        match self.dom.value_at(x) {
            ExtValue::Finite(_) => ExtValue::zero(),
            ExtValue::PlusInfinity => ExtValue::PlusInfinity,
        }
    }

    fn bounding_box(&self) -> (IntPoint, IntPoint) {
        self.f.bounding_box()
    }

    fn value_bound(&self) -> num_bigint::BigInt {
        num_bigint::BigInt::from(0)
    }
}

/// Exact global minimum value and all minimizers, by enumeration.
pub fn brute_min(f: &dyn MOracle, cap: u128) -> Result<(Rat, Vec<IntPoint>), VerifyError> {
    let dom = enumerate_domain(f, cap)?;
    match dom.min_value() {
        Some(m) => Ok((m.clone(), dom.argmin())),
        None => Err(VerifyError::EmptyDomain),
    }
}

/// Exact `ℓ1` distance from `x0` to the set of global minimizers.
pub fn tau(f: &dyn MOracle, x0: &IntPoint, cap: u128) -> Result<i64, VerifyError> {
    if !f.eval(x0).is_finite() {
        return Err(VerifyError::OutsideDomain(x0.clone()));
    }
    let (_, argmin) = brute_min(f, cap)?;
    Ok(argmin.iter().map(|y| y.l1_distance(x0)).min().unwrap())
}

/// Exact optimum of `f` restricted to the slice `x(R) = k`: the value and
/// all optimizers; `+∞` with an empty list when the slice misses the domain.
pub fn brute_constrained(
    f: &dyn MOracle,
    r: &[usize],
    k: i64,
    cap: u128,
) -> Result<(ExtValue, Vec<IntPoint>), VerifyError> {
    let profile = slice_profile(f, r, cap)?;
    Ok(match profile.get(&k) {
        Some((v, pts)) => (ExtValue::Finite(v.clone()), pts.clone()),
        None => (ExtValue::PlusInfinity, Vec::new()),
    })
}

/// Optimal value and optimizer set of every nonempty slice `x(R) = k`.
pub fn slice_profile(
    f: &dyn MOracle,
    r: &[usize],
    cap: u128,
) -> Result<BTreeMap<i64, (Rat, Vec<IntPoint>)>, VerifyError> {
    let dom = enumerate_domain(f, cap)?;
    let mut profile: BTreeMap<i64, (Rat, Vec<IntPoint>)> = BTreeMap::new();
    for (p, v) in dom.points.iter().zip(&dom.values) {
        let k = p.sum_over(r);
        match profile.get_mut(&k) {
            Some((best, pts)) => {
                if *v < *best {
                    *best = v.clone();
                    *pts = vec![p.clone()];
                } else if *v == *best {
                    pts.push(p.clone());
                }
            }
            None => {
                profile.insert(k, (v.clone(), vec![p.clone()]));
            }
        }
    }
    Ok(profile)
}

/// Whether the slice optimum `z(k)` is convex in `k` over its feasible
/// range: `z(k) - z(k-1) <= z(k+1) - z(k)` for all interior `k`. Slices are
/// expected to form a contiguous range; a gap counts as a violation.
pub fn check_z_convexity(f: &dyn MOracle, r: &[usize], cap: u128) -> Result<bool, VerifyError> {
    let profile = slice_profile(f, r, cap)?;
    let ks: Vec<i64> = profile.keys().copied().collect();
    if ks.len() <= 2 {
        return Ok(true);
    }
    let contiguous = ks.windows(2).all(|w| w[1] == w[0] + 1);
    if !contiguous {
        return Ok(false);
    }
    let zs: Vec<&Rat> = profile.values().map(|(v, _)| v).collect();
    Ok(zs
        .windows(3)
        .all(|w| w[1] - w[0] <= w[2] - w[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::rap::quadratic_pair_instance;
    use crate::instances::remark::{remark_z4_broken, remark_z4_instance};
    use crate::instances::tabulated::tabulated_oracle;
    use crate::value::rat;

    const CAP: u128 = DEFAULT_ENUMERATION_CAP;

    fn p(coords: &[i64]) -> IntPoint {
        IntPoint::new(coords.to_vec())
    }

    #[test]
    fn z4_instance_is_certified_m_convex() {
        let report = check_m_exc(&remark_z4_instance(), CAP).unwrap();
        assert!(report.holds);
        assert!(report.witness.is_none());
    }

    #[test]
    fn removing_one_point_breaks_the_axiom_with_a_witness() {
        let report = check_m_exc(&remark_z4_broken(), CAP).unwrap();
        assert!(!report.holds);
        let w = report.witness.expect("failing check carries a witness");
        assert!(!w.failed_j.is_empty());
        // The witness is a genuine violation: replay it.
        let f = remark_z4_broken();
        let lhs = &f.eval(&w.x) + &f.eval(&w.y);
        for j in &w.failed_j {
            let x_moved = move_point(&w.x, w.i, *j, -1);
            let y_moved = move_point(&w.y, w.i, *j, 1);
            let rhs = &f.eval(&x_moved) + &f.eval(&y_moved);
            assert!(!(rhs.is_finite() && lhs >= rhs));
        }
    }

    #[test]
    fn two_point_indicator_domain_is_m_convex() {
        let f = tabulated_oracle(
            vec![(p(&[1, 0]), rat(0)), (p(&[0, 1]), rat(0))],
            p(&[0, 0]),
            p(&[1, 1]),
            0.into(),
        )
        .unwrap();
        assert!(check_m_exc(&f, CAP).unwrap().holds);
    }

    #[test]
    fn mnat_axiom_holds_for_the_polymatroid_form_and_for_m_oracles() {
        let (f1, f2) = quadratic_pair_instance();
        assert!(check_mnat_exc(&f2, CAP).unwrap().holds);
        // Every M-convex function satisfies the weaker axiom.
        assert!(check_mnat_exc(&f1, CAP).unwrap().holds);
        assert!(check_mnat_exc(&remark_z4_instance(), CAP).unwrap().holds);
    }

    #[test]
    fn product_indicator_is_not_mnat_convex() {
        // f(x) = -x1 * x2 on {0,1}^2.
        let pts = vec![
            (p(&[0, 0]), rat(0)),
            (p(&[0, 1]), rat(0)),
            (p(&[1, 0]), rat(0)),
            (p(&[1, 1]), rat(-1)),
        ];
        let f = tabulated_oracle(pts, p(&[0, 0]), p(&[1, 1]), 1.into()).unwrap();
        let report = check_mnat_exc(&f, CAP).unwrap();
        assert!(!report.holds);
        assert!(report.witness.is_some());
    }

    #[test]
    fn brute_min_finds_the_unique_z4_optimum() {
        let (value, argmin) = brute_min(&remark_z4_instance(), CAP).unwrap();
        assert_eq!(value, rat(-3));
        assert_eq!(argmin, vec![p(&[2, 0, 1, 0])]);
    }

    #[test]
    fn brute_min_on_an_indicator_returns_the_whole_domain() {
        let f = tabulated_oracle(
            vec![(p(&[1, 0]), rat(0)), (p(&[0, 1]), rat(0))],
            p(&[0, 0]),
            p(&[1, 1]),
            0.into(),
        )
        .unwrap();
        let (value, argmin) = brute_min(&f, CAP).unwrap();
        assert_eq!(value, rat(0));
        assert_eq!(argmin.len(), 2);
    }

    #[test]
    fn rap_brute_min_matches_the_two_known_optima() {
        let (f1, _) = quadratic_pair_instance();
        let (value, argmin) = brute_min(&f1, CAP).unwrap();
        assert_eq!(value, rat(5));
        assert_eq!(argmin, vec![p(&[1, 2]), p(&[2, 1])]);
    }

    #[test]
    fn tau_measures_distance_to_the_argmin_set() {
        let f = remark_z4_instance();
        assert_eq!(tau(&f, &p(&[0, 2, 0, 1]), CAP).unwrap(), 6);
        assert_eq!(tau(&f, &p(&[2, 0, 1, 0]), CAP).unwrap(), 0);
        assert!(matches!(
            tau(&f, &p(&[0, 0, 0, 0]), CAP),
            Err(VerifyError::OutsideDomain(_))
        ));
    }

    #[test]
    fn constrained_slices_of_the_z4_instance() {
        let f = remark_z4_instance();
        let (z0, m0) = brute_constrained(&f, &[0], 0, CAP).unwrap();
        assert_eq!(z0, ExtValue::from_int(-1));
        assert_eq!(m0, vec![p(&[0, 1, 1, 1])]);
        let (z2, m2) = brute_constrained(&f, &[0], 2, CAP).unwrap();
        assert_eq!(z2, ExtValue::from_int(-3));
        assert_eq!(m2, vec![p(&[2, 0, 1, 0])]);
        let (z5, m5) = brute_constrained(&f, &[0], 5, CAP).unwrap();
        assert_eq!(z5, ExtValue::PlusInfinity);
        assert!(m5.is_empty());
    }

    #[test]
    fn z_profile_is_convex_for_the_z4_instance() {
        let f = remark_z4_instance();
        assert!(check_z_convexity(&f, &[0], CAP).unwrap());
        let profile = slice_profile(&f, &[0], CAP).unwrap();
        let zs: Vec<i64> = profile
            .values()
            .map(|(v, _)| v.to_integer().try_into().unwrap())
            .collect();
        assert_eq!(zs, vec![-1, -2, -3]);
    }

    #[test]
    fn two_slice_profiles_are_vacuously_convex() {
        let f = tabulated_oracle(
            vec![(p(&[1, 0]), rat(0)), (p(&[0, 1]), rat(7))],
            p(&[0, 0]),
            p(&[1, 1]),
            7.into(),
        )
        .unwrap();
        assert!(check_z_convexity(&f, &[0], CAP).unwrap());
    }

    #[test]
    fn domain_of_the_z4_instance_is_a_base_polyhedron() {
        assert!(
            check_domain_base_polyhedron(&remark_z4_instance(), CAP)
                .unwrap()
                .holds
        );
    }

    #[test]
    fn cap_is_enforced() {
        let f = remark_z4_instance();
        assert!(matches!(
            enumerate_domain(&f, 10),
            Err(VerifyError::EnumerationTooLarge { .. })
        ));
    }
}
