//! Explicit semistable elliptic curves over the rationals whose `p`-division
//! fields are locally cyclic with group `GL2(F_p)`, for primes `p >= 5`,
//! together with a checker for the resulting certificates.
//!
//! The pipeline is: Tate-curve 2-torsion series ([`tate`]), a congruence
//! system and linear forms ([`target`]), a search for simultaneous prime
//! values ([`search`]), and a certificate that re-derives every claim
//! ([`certificate`]). [`pipeline::construct`] runs all of it.
//!
//! Weierstrass models ([`curve`]) are generic over a [`scalar::Scalar`]; the
//! aliases below name the instances used here.

pub mod certificate;
pub mod curve;
pub mod decimal;
pub mod padic;
pub mod pipeline;
pub mod scalar;
pub mod search;
pub mod target;
pub mod tate;

pub use certificate::{verify, Certificate, CheckReport};
pub use curve::{CurveModel, RationalCurve};
pub use padic::PadicInt;
pub use pipeline::{construct, Construction};
pub use search::SearchConfig;

/// Weierstrass models with integer coefficients.
pub type IntegerCurve = CurveModel<num_bigint::BigInt>;
/// Weierstrass models over truncated p-adic integers.
pub type PadicCurve = CurveModel<PadicInt>;
