//! Hilbert class polynomials, norms of singular moduli and the arithmetic
//! needed to factor and test them.
//!
//! The analytic side ([`classpoly`]) is generic over a [`scalar::Real`]
//! backend; the aliases below name the instantiations used in practice.
//!
//! ```
//! use cmnorm_core::{classpoly::hilbert_class_poly, quadforms::Discriminant};
//!
//! let h = hilbert_class_poly(&Discriminant::new(-11).unwrap()).unwrap();
//! assert_eq!(h.to_string(), "x + 32768");
//! ```

pub mod analysis;
pub mod arith;
pub mod bigfloat;
pub mod classpoly;
pub mod ffcurves;
pub mod lauter_viray;
pub mod quadforms;
pub mod scalar;

use num_complex::Complex;

pub use bigfloat::BigFloat;

/// Multiprecision real used for class polynomial synthesis.
pub type Mp = BigFloat;

/// Multiprecision complex value, the type of `j(tau)` at full precision.
pub type MpComplex = Complex<BigFloat>;

/// Double precision complex value, for quick low-precision evaluation.
pub type C64 = Complex<f64>;

/// Exact rational exponent.
pub type Valuation = lauter_viray::Valuation;
