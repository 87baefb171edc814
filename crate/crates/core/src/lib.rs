//! Two computations over prime fields, sharing one exact-arithmetic core:
//!
//! 1. Exhaustive search of the family of hyperelliptic curves
//!    y^2 = f(x), f monic squarefree of degree 2g+1 over F_p, for curves
//!    with no affine point, and location of the precise threshold prime
//!    above which none exist.
//! 2. Kloosterman sums T_p(c,d), their Weil angles, and statistical
//!    comparison of the fixed-p and fixed-(c,d) angle families against the
//!    Sato-Tate density (2/pi) sin^2 t.
//!
//! The integer side (fields, curves, enumeration) is exact u64 arithmetic
//! backed by per-prime tables. The analytic side (sums, angles, statistics)
//! is generic over the floating scalar through [`Real`]; `f64` aliases live
//! at the crate root and are what the CLI uses.

pub mod checkpoint;
pub mod curve;
pub mod enumerate;
pub mod equidist;
mod error;
pub mod field;
pub mod io;
pub mod kloosterman;
pub mod search;

pub use error::{Error, Result};

use std::fmt;

use num_traits::float::FloatConst;
use num_traits::{Float, FromPrimitive};

/// Floating-point scalar of the analytic lane: f32 or f64.
pub trait Real:
    Float + FloatConst + FromPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

pub type AngleSample64 = kloosterman::AngleSample<f64>;
pub type HorizontalFamily64 = kloosterman::HorizontalFamily<f64>;
pub type Chi2Result64 = equidist::Chi2Result<f64>;
pub type MomentReport64 = equidist::MomentReport<f64>;
pub type GofReport64 = equidist::GofReport<f64>;
pub type FamilyComparison64 = equidist::FamilyComparison<f64>;

pub use curve::{evaluate_predicate, mitkin_threshold, weil_guarantee_threshold, CurveEquation};
pub use enumerate::{enumerate_representatives, EnumerationPlan, Partition, Reduction};
pub use field::{is_squarefree, poly_gcd, primes_in_range, FieldPoly, PrimeField};
pub use search::{find_pointless, verify_precise_bound, SearchOptions, SearchReport};
