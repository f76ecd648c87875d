//! Set-function specifications: submodular functions given either as a full
//! table over subsets or in closed structured forms.

use super::InstanceError;
use crate::point::IntPoint;

/// A set function `rho: 2^N -> Z` with `rho(empty) = 0`, queried by subset
/// bitmask (bit `i` set means element `i` is in the subset).
///
/// Tabulated specs are validated exhaustively at construction; structured
/// specs are submodular by construction.
#[derive(Clone, Debug)]
pub enum SubmodularSpec {
    Tabulated {
        n: usize,
        /// `values[mask] = rho(mask)`, length `2^n`.
        values: Vec<i64>,
    },
    /// `rho(X) = min(slope * |X|, cap)`.
    CardinalityTruncation { n: usize, slope: i64, cap: i64 },
    /// `rho(X) = sum over blocks of min(|X ∩ block|, cap_block)`.
    Partition {
        n: usize,
        blocks: Vec<Vec<usize>>,
        caps: Vec<i64>,
    },
    /// `rho(X) = total weight of the ground elements covered by X`.
    WeightedCoverage {
        n: usize,
        covers: Vec<u64>,
        weights: Vec<i64>,
    },
}

impl SubmodularSpec {
    /// Validates a full table: `rho(empty) = 0` and the diminishing-returns
    /// form of submodularity on every (set, element, element) triple.
    pub fn tabulated(n: usize, values: Vec<i64>) -> Result<Self, InstanceError> {
        assert!(n <= 20, "tabulated specs are for desk-scale n");
        if values.len() != 1 << n {
            return Err(InstanceError::MalformedSubmodular(format!(
                "table has {} entries, expected {}",
                values.len(),
                1u64 << n
            )));
        }
        if values[0] != 0 {
            return Err(InstanceError::MalformedSubmodular(
                "rho(empty) must be 0".into(),
            ));
        }
        // rho(X + i) - rho(X) >= rho(X + j + i) - rho(X + j) for i, j not in X.
        for mask in 0..(1u64 << n) {
            for i in 0..n {
                if mask >> i & 1 == 1 {
                    continue;
                }
                let gain_here = values[(mask | 1 << i) as usize] - values[mask as usize];
                for j in 0..n {
                    if j == i || mask >> j & 1 == 1 {
                        continue;
                    }
                    let bigger = mask | 1 << j;
                    let gain_there =
                        values[(bigger | 1 << i) as usize] - values[bigger as usize];
                    if gain_here < gain_there {
                        return Err(InstanceError::MalformedSubmodular(format!(
                            "submodularity fails for mask {mask}, elements {i}, {j}"
                        )));
                    }
                }
            }
        }
        Ok(SubmodularSpec::Tabulated { n, values })
    }

    /// A full table accepted without validation. Intended for exercising the
    /// lazy consistency checks of consumers.
    pub fn tabulated_unchecked(n: usize, values: Vec<i64>) -> Self {
        SubmodularSpec::Tabulated { n, values }
    }

    pub fn partition(
        n: usize,
        blocks: Vec<Vec<usize>>,
        caps: Vec<i64>,
    ) -> Result<Self, InstanceError> {
        if blocks.len() != caps.len() {
            return Err(InstanceError::MalformedSubmodular(
                "one cap per block required".into(),
            ));
        }
        let mut seen = vec![false; n];
        for block in &blocks {
            for &e in block {
                if e >= n || seen[e] {
                    return Err(InstanceError::MalformedSubmodular(
                        "blocks must partition {0..n-1}".into(),
                    ));
                }
                seen[e] = true;
            }
        }
        if caps.iter().any(|&c| c < 0) {
            return Err(InstanceError::MalformedSubmodular(
                "block caps must be non-negative".into(),
            ));
        }
        Ok(SubmodularSpec::Partition { n, blocks, caps })
    }

    pub fn weighted_coverage(
        n: usize,
        covers: Vec<u64>,
        weights: Vec<i64>,
    ) -> Result<Self, InstanceError> {
        if covers.len() != n {
            return Err(InstanceError::MalformedSubmodular(
                "one cover set per element required".into(),
            ));
        }
        if weights.iter().any(|&w| w < 0) {
            return Err(InstanceError::MalformedSubmodular(
                "coverage weights must be non-negative".into(),
            ));
        }
        let universe = weights.len();
        if covers.iter().any(|&c| c >> universe != 0) {
            return Err(InstanceError::MalformedSubmodular(
                "cover sets reference ground elements without weights".into(),
            ));
        }
        Ok(SubmodularSpec::WeightedCoverage { n, covers, weights })
    }

    pub fn n(&self) -> usize {
        match self {
            SubmodularSpec::Tabulated { n, .. }
            | SubmodularSpec::CardinalityTruncation { n, .. }
            | SubmodularSpec::Partition { n, .. }
            | SubmodularSpec::WeightedCoverage { n, .. } => *n,
        }
    }

    /// `rho` of the subset encoded by `mask`.
    pub fn rho(&self, mask: u64) -> i64 {
        match self {
            SubmodularSpec::Tabulated { values, .. } => values[mask as usize],
            SubmodularSpec::CardinalityTruncation { slope, cap, .. } => {
                (slope * mask.count_ones() as i64).min(*cap)
            }
            SubmodularSpec::Partition { blocks, caps, .. } => blocks
                .iter()
                .zip(caps)
                .map(|(block, &cap)| {
                    let inside = block.iter().filter(|&&e| mask >> e & 1 == 1).count() as i64;
                    inside.min(cap)
                })
                .sum(),
            SubmodularSpec::WeightedCoverage {
                covers, weights, ..
            } => {
                let mut covered = 0u64;
                for (e, &c) in covers.iter().enumerate() {
                    if mask >> e & 1 == 1 {
                        covered |= c;
                    }
                }
                weights
                    .iter()
                    .enumerate()
                    .filter(|&(u, _)| covered >> u & 1 == 1)
                    .map(|(_, &w)| w)
                    .sum()
            }
        }
    }

    pub fn rho_full(&self) -> i64 {
        self.rho((1u64 << self.n()) - 1)
    }

    /// Whether the spec is a polymatroid rank function: non-negative and
    /// monotone non-decreasing. Structured specs with valid parameters
    /// always are; tabulated specs are checked exhaustively.
    pub fn is_polymatroid(&self) -> bool {
        match self {
            SubmodularSpec::Tabulated { n, values } => {
                if values.iter().any(|&v| v < 0) {
                    return false;
                }
                (0..(1u64 << n)).all(|mask| {
                    (0..*n).all(|i| {
                        mask >> i & 1 == 1 || values[(mask | 1 << i) as usize] >= values[mask as usize]
                    })
                })
            }
            SubmodularSpec::CardinalityTruncation { slope, cap, .. } => *slope >= 0 && *cap >= 0,
            SubmodularSpec::Partition { .. } | SubmodularSpec::WeightedCoverage { .. } => true,
        }
    }

    /// All subset sums `x(Y)` indexed by mask, in one dynamic-programming
    /// pass.
    pub fn subset_sums(x: &IntPoint) -> Vec<i64> {
        let n = x.dim();
        let mut sums = vec![0i64; 1 << n];
        for mask in 1..(1u64 << n) {
            let low = mask.trailing_zeros() as usize;
            sums[mask as usize] = sums[(mask & (mask - 1)) as usize] + x[low];
        }
        sums
    }

    /// Whether `x` lies in the integral base polyhedron `B(rho)`.
    pub fn in_base(&self, x: &IntPoint) -> bool {
        let n = self.n();
        debug_assert_eq!(x.dim(), n);
        let sums = Self::subset_sums(x);
        let full = (1u64 << n) - 1;
        if sums[full as usize] != self.rho(full) {
            return false;
        }
        (1..full).all(|mask| sums[mask as usize] <= self.rho(mask))
    }

    /// Whether `x` lies in the integral polymatroid `P(rho)`.
    pub fn in_polymatroid(&self, x: &IntPoint) -> bool {
        let n = self.n();
        debug_assert_eq!(x.dim(), n);
        if (0..n).any(|i| x[i] < 0) {
            return false;
        }
        let sums = Self::subset_sums(x);
        (1..(1u64 << n)).all(|mask| sums[mask as usize] <= self.rho(mask))
    }

    /// The greedy vertex of `B(rho)` for the identity ordering:
    /// `x(i) = rho({0..i}) - rho({0..i-1})`.
    pub fn greedy_base(&self) -> IntPoint {
        let n = self.n();
        let mut coords = Vec::with_capacity(n);
        let mut prefix = 0u64;
        let mut prev = 0i64;
        for i in 0..n {
            prefix |= 1 << i;
            let here = self.rho(prefix);
            coords.push(here - prev);
            prev = here;
        }
        IntPoint::new(coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tabulated_validation_catches_violations() {
        // rho on n=2 with rho({1})=rho({2})=0 but rho(N)=1 is supermodular.
        let err = SubmodularSpec::tabulated(2, vec![0, 0, 0, 1]).unwrap_err();
        assert!(matches!(err, InstanceError::MalformedSubmodular(_)));

        let ok = SubmodularSpec::tabulated(2, vec![0, 2, 2, 3]).unwrap();
        assert_eq!(ok.rho(0b11), 3);
        assert!(ok.is_polymatroid());
    }

    #[test]
    fn structured_forms_agree_with_their_definitions() {
        let trunc = SubmodularSpec::CardinalityTruncation {
            n: 3,
            slope: 2,
            cap: 3,
        };
        assert_eq!(trunc.rho(0b001), 2);
        assert_eq!(trunc.rho(0b011), 3);

        let part = SubmodularSpec::partition(3, vec![vec![0, 1], vec![2]], vec![1, 1]).unwrap();
        assert_eq!(part.rho(0b011), 1);
        assert_eq!(part.rho(0b111), 2);

        let cov = SubmodularSpec::weighted_coverage(2, vec![0b01, 0b11], vec![2, 3]).unwrap();
        assert_eq!(cov.rho(0b01), 2);
        assert_eq!(cov.rho(0b10), 5);
        assert_eq!(cov.rho(0b11), 5);
    }

    #[test]
    fn membership_and_greedy_base() {
        let rho = SubmodularSpec::tabulated(2, vec![0, 2, 2, 3]).unwrap();
        assert!(rho.in_base(&IntPoint::new(vec![1, 2])));
        assert!(rho.in_base(&IntPoint::new(vec![2, 1])));
        assert!(!rho.in_base(&IntPoint::new(vec![0, 3])));
        assert!(rho.in_polymatroid(&IntPoint::new(vec![0, 0])));
        assert!(!rho.in_polymatroid(&IntPoint::new(vec![-1, 2])));
        let g = rho.greedy_base();
        assert!(rho.in_base(&g));
        assert_eq!(g, IntPoint::new(vec![2, 1]));
    }
}
