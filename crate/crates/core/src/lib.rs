//! Exact solvers for M-convex and M♮-convex function minimization on integer
//! lattice points, and for polyhedral M-convex functions on real points.
//!
//! The library is oracle-based: a function is anything implementing
//! [`MOracle`] (evaluation plus a declared bounding box and value bound).
//! Solvers move a point along directions of the form `+e_i - e_j`, either by
//! unit steps or by the longest step over which the function stays linear.
//!
//! Modules:
//!
//! - [`descent`]: slopes, steepest directions, and the long-step length.
//! - [`unconstrained`]: the four unconstrained solvers (`m_sd`, `m_sd_prime`,
//!   `m_lsd`, `m_lsd2`) and the slope-raising sweep they share.
//! - [`constrained`]: minimization subject to `x(R) = k`, the M♮ variants,
//!   and the polymatroid greedy specialization.
//! - [`polyhedral`]: real-domain solvers over exact rational points.
//! - [`verify`]: brute-force ground truth — exchange-axiom certification,
//!   global/constrained minima by enumeration, distance to the argmin set.
//! - [`instances`]: certified instance families (resource allocation,
//!   min-cost flow, tabulated, random generators).
//!
//! All arithmetic is exact: objective values are arbitrary-precision
//! rationals ([`ExtValue`]), lattice points are `i64` vectors. There is no
//! floating point anywhere on a solve path.

pub mod constrained;
pub mod descent;
pub mod error;
pub mod instances;
pub mod oracle;
pub mod point;
pub mod polyhedral;
pub mod trace;
pub mod unconstrained;
pub mod value;
pub mod verify;

pub use error::{DescentError, SolveError};
pub use oracle::{CachedOracle, MOracle};
pub use point::{Direction, IntPoint};
pub use trace::{SolveTrace, TraceStep};
pub use value::{ExtValue, Rat};
