//! Affine Deligne–Lusztig varieties in the affine Grassmannian: root data,
//! extended affine Weyl groups, admissible sets, σ-conjugacy invariants and
//! the combinatorics of connected components.

#![allow(clippy::needless_range_loop)]

pub mod affine;
pub mod bruhat;
pub mod components;
pub mod error;
pub mod frobenius;
pub mod intlat;
pub mod linalg;
pub mod root_datum;
pub mod scalar;
pub mod sigma;

pub use affine::{AffRoot, ExtAffElem};
pub use bruhat::{adm_set, bruhat_leq, AdmissibleSet};
pub use error::{Error, Result};
pub use frobenius::{Frobenius, FrobeniusSpec};
pub use linalg::CoweightVec;
pub use root_datum::{Coords, DatumSpec, RootDatum, WeylElem};
pub use scalar::Exact;

/// Rational scalar used throughout.
pub type Q = num_rational::Ratio<i128>;
/// Rational vector in the fundamental coweight basis.
pub type QVec = CoweightVec<Q>;
