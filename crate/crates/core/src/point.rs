//! Lattice points, elementary directions, and index-set helpers.

use std::fmt;
use std::ops::Index;

/// A point of `Z^n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct IntPoint(Vec<i64>);

impl IntPoint {
    pub fn new(coords: Vec<i64>) -> Self {
        IntPoint(coords)
    }

    pub fn zeros(n: usize) -> Self {
        IntPoint(vec![0; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    /// Component sum `x(N)`.
    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Partial sum `x(R)` over an index set.
    pub fn sum_over(&self, set: &[usize]) -> i64 {
        set.iter().map(|&i| self.0[i]).sum()
    }

    pub fn l1_distance(&self, other: &IntPoint) -> i64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .sum()
    }

    /// The point `x + lambda * (e_inc - e_dec)`; `dec = None` leaves every
    /// other coordinate unchanged.
    pub fn stepped(&self, d: Direction, lambda: i64) -> IntPoint {
        let mut coords = self.0.clone();
        coords[d.inc] += lambda;
        if let Some(j) = d.dec {
            coords[j] -= lambda;
        }
        IntPoint(coords)
    }

    /// Indices where `self` exceeds `other`.
    pub fn supp_pos(&self, other: &IntPoint) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.0[i] > other.0[i]).collect()
    }

    /// Indices where `self` is below `other`.
    pub fn supp_neg(&self, other: &IntPoint) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.0[i] < other.0[i]).collect()
    }
}

impl Index<usize> for IntPoint {
    type Output = i64;

    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl fmt::Display for IntPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (t, c) in self.0.iter().enumerate() {
            if t > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// The elementary move `+e_inc - e_dec`.
///
/// `dec = None` is the null index (the move is a plain increment); it is
/// only meaningful for M♮ solvers. The two indices must differ when `dec`
/// is present.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Direction {
    pub inc: usize,
    pub dec: Option<usize>,
}

impl Direction {
    /// A proper exchange direction `+e_i - e_j`, `i != j`.
    pub fn exchange(inc: usize, dec: usize) -> Self {
        assert_ne!(inc, dec, "exchange direction needs distinct indices");
        Direction {
            inc,
            dec: Some(dec),
        }
    }

    /// The pure increment `+e_i`.
    pub fn increment(inc: usize) -> Self {
        Direction { inc, dec: None }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // 1-based indices for human output; the null index prints as 0.
        match self.dec {
            Some(j) => write!(f, "({},{})", self.inc + 1, j + 1),
            None => write!(f, "({},0)", self.inc + 1),
        }
    }
}

/// The complement `N \ set` for `N = {0, .., n-1}`; `set` must be sorted.
pub fn complement(n: usize, set: &[usize]) -> Vec<usize> {
    (0..n).filter(|i| !set.contains(i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stepped_moves_both_coordinates() {
        let x = IntPoint::new(vec![0, 2, 0, 1]);
        let y = x.stepped(Direction::exchange(0, 1), 1);
        assert_eq!(y, IntPoint::new(vec![1, 1, 0, 1]));
        let z = x.stepped(Direction::increment(2), 3);
        assert_eq!(z, IntPoint::new(vec![0, 2, 3, 1]));
    }

    #[test]
    fn supports_and_distance() {
        let x = IntPoint::new(vec![0, 2, 0, 1]);
        let y = IntPoint::new(vec![2, 0, 1, 0]);
        assert_eq!(x.supp_pos(&y), vec![1, 3]);
        assert_eq!(x.supp_neg(&y), vec![0, 2]);
        assert_eq!(x.l1_distance(&y), 6);
    }

    #[test]
    fn display_is_compact() {
        assert_eq!(IntPoint::new(vec![2, 0, 1, 0]).to_string(), "(2,0,1,0)");
        assert_eq!(Direction::exchange(0, 1).to_string(), "(1,2)");
        assert_eq!(Direction::increment(0).to_string(), "(1,0)");
    }

    #[test]
    fn complement_is_sorted() {
        assert_eq!(complement(4, &[1, 2]), vec![0, 3]);
        assert_eq!(complement(3, &[]), vec![0, 1, 2]);
    }
}
