//! Extended objective values: an exact rational or `+∞`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Exact rational scalar used for all objective values and slopes.
pub type Rat = BigRational;

/// Builds a rational from an integer.
pub fn rat(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// A function value: finite exact rational or `+∞`.
///
/// `+∞` encodes "outside the effective domain". Comparisons are total with
/// every finite value below `+∞`. Subtracting `+∞` from `+∞` is an
/// arithmetic error and panics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtValue {
    Finite(Rat),
    PlusInfinity,
}

impl ExtValue {
    pub fn from_int(v: i64) -> Self {
        ExtValue::Finite(rat(v))
    }

    pub fn zero() -> Self {
        ExtValue::Finite(Rat::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtValue::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rat> {
        match self {
            ExtValue::Finite(v) => Some(v),
            ExtValue::PlusInfinity => None,
        }
    }

    /// Unwraps the finite value; panics on `+∞`.
    pub fn expect_finite(&self, what: &str) -> &Rat {
        match self {
            ExtValue::Finite(v) => v,
            ExtValue::PlusInfinity => panic!("expected finite value: {what}"),
        }
    }

    /// `self - rhs` where `rhs` must be finite.
    pub fn minus_finite(&self, rhs: &Rat) -> ExtValue {
        match self {
            ExtValue::Finite(v) => ExtValue::Finite(v - rhs),
            ExtValue::PlusInfinity => ExtValue::PlusInfinity,
        }
    }

    /// `self - rhs`. `+∞ - +∞` is undefined and panics.
    pub fn minus(&self, rhs: &ExtValue) -> ExtValue {
        match rhs {
            ExtValue::Finite(r) => self.minus_finite(r),
            ExtValue::PlusInfinity => match self {
                ExtValue::Finite(_) => panic!("finite minus +inf is not a value of this codomain"),
                ExtValue::PlusInfinity => panic!("+inf minus +inf is an arithmetic error"),
            },
        }
    }

    pub fn scale(&self, c: &Rat) -> ExtValue {
        match self {
            ExtValue::Finite(v) => ExtValue::Finite(v * c),
            ExtValue::PlusInfinity => ExtValue::PlusInfinity,
        }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, ExtValue::Finite(v) if v.is_negative())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtValue::Finite(v) if v.is_zero())
    }
}

impl Add for &ExtValue {
    type Output = ExtValue;

    fn add(self, rhs: &ExtValue) -> ExtValue {
        match (self, rhs) {
            (ExtValue::Finite(a), ExtValue::Finite(b)) => ExtValue::Finite(a + b),
            _ => ExtValue::PlusInfinity,
        }
    }
}

impl PartialOrd for ExtValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtValue::Finite(a), ExtValue::Finite(b)) => a.cmp(b),
            (ExtValue::Finite(_), ExtValue::PlusInfinity) => Ordering::Less,
            (ExtValue::PlusInfinity, ExtValue::Finite(_)) => Ordering::Greater,
            (ExtValue::PlusInfinity, ExtValue::PlusInfinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtValue::Finite(v) => write!(f, "{}", format_rat(v)),
            ExtValue::PlusInfinity => write!(f, "+inf"),
        }
    }
}

/// Canonical text form: integers bare, other rationals as `p/q` in lowest terms.
pub fn format_rat(v: &Rat) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Parses the canonical text form produced by [`format_rat`].
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((num, den)) => {
            let n: BigInt = num.trim().parse().ok()?;
            let d: BigInt = den.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rat::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().ok()?;
            Some(Rat::from_integer(n))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_is_total_with_infinity_on_top() {
        let a = ExtValue::from_int(-7);
        let b = ExtValue::from_int(3);
        assert!(a < b);
        assert!(b < ExtValue::PlusInfinity);
        assert!(a < ExtValue::PlusInfinity);
        assert_eq!(ExtValue::PlusInfinity, ExtValue::PlusInfinity);
    }

    #[test]
    fn arithmetic_is_exact_and_absorbing() {
        let a = ExtValue::Finite(Rat::new(BigInt::from(1), BigInt::from(3)));
        let b = ExtValue::Finite(Rat::new(BigInt::from(2), BigInt::from(3)));
        assert_eq!(&a + &b, ExtValue::from_int(1));
        assert_eq!(&a + &ExtValue::PlusInfinity, ExtValue::PlusInfinity);
        assert_eq!(
            ExtValue::PlusInfinity.minus_finite(&rat(5)),
            ExtValue::PlusInfinity
        );
        assert_eq!(b.minus(&a), ExtValue::Finite(Rat::new(1.into(), 3.into())));
    }

    #[test]
    #[should_panic(expected = "arithmetic error")]
    fn infinity_minus_infinity_panics() {
        let _ = ExtValue::PlusInfinity.minus(&ExtValue::PlusInfinity);
    }

    #[test]
    fn display_and_parse_round_trip() {
        assert_eq!(format_rat(&rat(-3)), "-3");
        assert_eq!(format_rat(&Rat::new(6.into(), 4.into())), "3/2");
        assert_eq!(parse_rat("3/2"), Some(Rat::new(3.into(), 2.into())));
        assert_eq!(parse_rat("-17"), Some(rat(-17)));
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(parse_rat("x"), None);
    }
}
