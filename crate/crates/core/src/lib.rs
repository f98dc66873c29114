//! Exact arithmetic for quasi-parabolic Siegel mass formulas over a smooth
//! projective curve over `F_q`, together with brute-force enumeration oracles
//! on `P^1` that check the formulas by counting.
//!
//! All quantities are exact rationals; nothing is computed in floating point.

pub mod arith;
pub mod divisors;
pub mod error;
pub mod field;
pub mod flags;
pub mod mass;
pub mod oracles;
pub mod zeta;

pub use arith::{Polynomial, PowerSeries, Rational};
pub use divisors::{
    fixed_determinant_count, limit_fixed_determinant, limit_unfixed, r_divisor_series, DivisorCountTable,
};
pub use error::{Error, Result};
pub use field::P1Point;
pub use flags::{FlagType, QuasiParabolicData};
pub use mass::{classical_mass, hom_inj_factor, quasi_parabolic_mass, MassFactors, MassReport};
pub use zeta::{CurveData, CurveInput};
