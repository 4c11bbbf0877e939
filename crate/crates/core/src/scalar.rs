//! The real scalar abstraction used by the analytic side of the crate.
//!
//! `j`-invariant evaluation is written once against [`Real`] and runs on
//! machine floats (`f32`, `f64`) for quick low-precision work and on
//! [`BigFloat`] for class polynomial synthesis.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_traits::{Float, FromPrimitive, Num};

use crate::bigfloat::BigFloat;

pub trait Real: Num + Clone + Neg<Output = Self> + PartialOrd + Debug {
    /// `v` as a value carrying `bits` of working precision. Machine floats
    /// ignore `bits`.
    fn from_int(v: i64, bits: u32) -> Self;

    fn from_bigint(v: &BigInt, bits: u32) -> Self;

    fn pi(bits: u32) -> Self;

    fn sqrt(&self) -> Self;

    fn exp(&self) -> Self;

    fn sin_cos(&self) -> (Self, Self);

    fn abs(&self) -> Self;

    fn to_f64(&self) -> f64;

    /// Nearest integer, or `None` when the value is not finite.
    fn round_to_integer(&self) -> Option<BigInt>;

    /// Significant bits this value actually carries.
    fn significant_bits(&self) -> u32;

    /// `e` with `2^(e-1) <= |self| < 2^e`, `None` for zero.
    fn magnitude_bits(&self) -> Option<i64>;

    fn is_finite(&self) -> bool;
}

macro_rules! machine_real {
    ($t:ty) => {
        impl Real for $t {
            fn from_int(v: i64, _bits: u32) -> Self {
                v as $t
            }
            fn from_bigint(v: &BigInt, _bits: u32) -> Self {
                num_traits::ToPrimitive::to_f64(v).map_or(<$t>::INFINITY, |x| x as $t)
            }
            fn pi(_bits: u32) -> Self {
                <$t as num_traits::FloatConst>::PI()
            }
            fn sqrt(&self) -> Self {
                Float::sqrt(*self)
            }
            fn exp(&self) -> Self {
                Float::exp(*self)
            }
            fn sin_cos(&self) -> (Self, Self) {
                Float::sin_cos(*self)
            }
            fn abs(&self) -> Self {
                Float::abs(*self)
            }
            fn to_f64(&self) -> f64 {
                *self as f64
            }
            fn round_to_integer(&self) -> Option<BigInt> {
                if Float::is_finite(*self) {
                    BigInt::from_f64(Float::round(*self) as f64)
                } else {
                    None
                }
            }
            fn significant_bits(&self) -> u32 {
                <$t>::MANTISSA_DIGITS
            }
            fn magnitude_bits(&self) -> Option<i64> {
                if *self == 0.0 || !Float::is_finite(*self) {
                    return None;
                }
                let (mantissa, exp, _) = Float::integer_decode(*self);
                Some(i64::from(exp) + i64::from(64 - mantissa.leading_zeros()))
            }
            fn is_finite(&self) -> bool {
                Float::is_finite(*self)
            }
        }
    };
}

machine_real!(f32);
machine_real!(f64);

impl Real for BigFloat {
    fn from_int(v: i64, bits: u32) -> Self {
        BigFloat::from_int(v, bits)
    }
    fn from_bigint(v: &BigInt, bits: u32) -> Self {
        BigFloat::from_int(v.clone(), bits)
    }
    fn pi(bits: u32) -> Self {
        BigFloat::pi(bits)
    }
    fn sqrt(&self) -> Self {
        BigFloat::sqrt(self)
    }
    fn exp(&self) -> Self {
        BigFloat::exp(self)
    }
    fn sin_cos(&self) -> (Self, Self) {
        BigFloat::sin_cos(self)
    }
    fn abs(&self) -> Self {
        BigFloat::abs(self)
    }
    fn to_f64(&self) -> f64 {
        BigFloat::to_f64(self)
    }
    fn round_to_integer(&self) -> Option<BigInt> {
        Some(self.round())
    }
    fn significant_bits(&self) -> u32 {
        self.precision()
    }
    fn magnitude_bits(&self) -> Option<i64> {
        BigFloat::magnitude_bits(self)
    }
    fn is_finite(&self) -> bool {
        true
    }
}
