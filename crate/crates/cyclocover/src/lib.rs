//! Exact arithmetic for Newton polygons of cyclic covers of the projective
//! line branched at three points.
//!
//! The library has two independent routes to the Newton polygon of the
//! reduction mod `p` of the Jacobian of the curve `y^m = x^a1 (x-1)^a2`:
//!
//! * [`shimura`] computes it from the CM structure: the slope attached to
//!   each orbit of multiplication-by-`p` on `Z/mZ` is `alpha/#orbit`, where
//!   `alpha` counts orbit members in the signature set `S_1`.
//! * [`zeta`] counts points of the curve over small finite fields,
//!   reconstructs the L-polynomial through Newton's identities, and reads
//!   the polygon off the `p`-adic valuations of its coefficients.
//!
//! [`survey`] runs both batch enumerations (full tables for a given `m`,
//! supersingular and fixed-polygon searches over ranges of `m`).
//!
//! Everything is exact: integers and reduced fractions only, no floating
//! point. All values are immutable and all operations are pure, so the
//! whole crate is safe for unrestricted concurrent use.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod arith;
pub mod monodromy;
pub mod polygon;
pub mod shimura;
pub mod survey;
pub mod zeta;

pub use arith::{FrobeniusOrbit, FrobeniusOrbitPartition, Residue};
pub use monodromy::{MonodromyDatum, Signature};
pub use polygon::{IsoclinicBlock, NewtonPolygon};
pub use shimura::OrbitSlopeReport;
pub use zeta::{FiniteField, LPolynomial};

/// Slopes and other exact fractions used throughout the crate.
pub type Rational = num_rational::Ratio<i64>;
