//! Partial Steinhaus sets in dimension 3: verification, construction
//! and search.
//!
//! An m-partial Steinhaus set picks one point from each coset
//! (1/m) x + Z^3, x in the cube X_m, with no pairwise squared distance
//! equal to a sum of three integer squares. Such sets are encoded by
//! maps L : X_m -> X_m; for odd prime m = p, validity is equivalent to
//! all (p+1) p^2 associated value tables pi over GF(p) being
//! permutations, which is what the search engines exploit.
//!
//! Module map:
//! - [`gf`]: exact arithmetic in GF(p);
//! - [`lattice`]: the cube X_m, the quotient/remainder decomposition,
//!   isotropic directions, the projective conic and its representatives;
//! - [`partial_map`]: maps L, their encoded point sets, pi tables,
//!   gauge normalization and divisor restriction;
//! - [`verify`]: the pairwise-distance oracle, the permutation test and
//!   the point-set verifier, plus the pi-family identity checks;
//! - [`descent`]: sums of squares and the rational-to-integer
//!   denominator descent;
//! - [`linear`]: the affine slope ansatz as a linear system over GF(p);
//! - [`csp`]: backtracking search with forward checking over projected
//!   alldifferent constraints;
//! - [`heuristic`]: the expected-count table M_p in log space;
//! - [`fixture`]: the bundled 27-point witness for m = 3;
//! - [`io`]: map and point-set file formats.

pub mod csp;
pub mod descent;
mod error;
pub mod fixture;
pub mod gf;
pub mod heuristic;
pub mod io;
pub mod lattice;
pub mod linear;
pub mod partial_map;
pub mod verify;

pub use error::Error;
pub use gf::{FpElement, Prime};
pub use lattice::{CubePoint, IntVec3, IsoVector};
pub use partial_map::{PartialMap, RationalPoint};
pub use verify::Verdict;
