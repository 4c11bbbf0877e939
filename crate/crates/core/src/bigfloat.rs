//! Binary floating point numbers with an arbitrary, per-value mantissa width.
//!
//! A [`BigFloat`] is `mantissa * 2^exponent` with a target precision in bits.
//! Arithmetic rounds the result to the larger precision of its operands
//! (round to nearest on the magnitude). Precision `0` marks an exact value;
//! exact values come out of `Zero`, `One` and integer parsing and stay exact
//! under addition, subtraction and multiplication.
//!
//! The transcendental functions (`exp`, `sin_cos`, `pi`) evaluate in fixed
//! point with guard bits and then round back to the requested precision.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};
use std::sync::Mutex;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// Precision used when an operation that cannot be exact (division, square
/// root, ...) only sees exact operands.
pub const FALLBACK_PRECISION: u32 = 64;

const GUARD_BITS: u64 = 64;

#[derive(Clone)]
pub struct BigFloat {
    mantissa: BigInt,
    exponent: i64,
    precision: u32,
}

impl BigFloat {
    /// An integer carrying `precision` bits of working precision.
    pub fn from_int(v: impl Into<BigInt>, precision: u32) -> Self {
        BigFloat { mantissa: v.into(), exponent: 0, precision }.normalized()
    }

    /// `mantissa * 2^exponent`, rounded to `precision` bits.
    pub fn from_parts(mantissa: BigInt, exponent: i64, precision: u32) -> Self {
        BigFloat { mantissa, exponent, precision }.normalized()
    }

    pub fn from_f64(v: f64, precision: u32) -> Option<Self> {
        if !v.is_finite() {
            return None;
        }
        if v == 0.0 {
            return Some(BigFloat::zero().with_precision(precision));
        }
        let bits = v.to_bits();
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (man, exp) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        let man = if v < 0.0 { -BigInt::from(man) } else { BigInt::from(man) };
        Some(Self::from_parts(man, exp, precision))
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn with_precision(mut self, precision: u32) -> Self {
        self.precision = precision;
        self.normalized()
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    /// Position of the leading bit: `|self|` lies in `[2^(m-1), 2^m)` where
    /// `m` is the returned value. `None` for zero.
    pub fn magnitude_bits(&self) -> Option<i64> {
        if self.mantissa.is_zero() {
            None
        } else {
            Some(self.exponent + self.mantissa.bits() as i64)
        }
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.sign() == Sign::Minus
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
            precision: self.precision,
        }
    }

    fn working_precision(&self, other: &Self) -> u32 {
        self.precision.max(other.precision)
    }

    fn inexact_precision(&self) -> u32 {
        if self.precision == 0 {
            FALLBACK_PRECISION
        } else {
            self.precision
        }
    }

    fn normalized(mut self) -> Self {
        if self.mantissa.is_zero() {
            self.exponent = 0;
            return self;
        }
        if self.precision > 0 {
            let bits = self.mantissa.bits();
            let prec = u64::from(self.precision);
            if bits > prec {
                let shift = bits - prec;
                self.mantissa = round_shift_right(&self.mantissa, shift);
                self.exponent += shift as i64;
            }
        }
        // strip trailing zeros so that equal values share a representation
        if let Some(tz) = self.mantissa.trailing_zeros() {
            if tz > 0 {
                self.mantissa >>= tz;
                self.exponent += tz as i64;
            }
        }
        self
    }

    /// Fixed-point image `round(self * 2^frac_bits)`.
    fn to_fixed(&self, frac_bits: u64) -> BigInt {
        let shift = self.exponent + frac_bits as i64;
        if shift >= 0 {
            &self.mantissa << (shift as u64)
        } else {
            round_shift_right(&self.mantissa, (-shift) as u64)
        }
    }

    fn from_fixed(v: BigInt, frac_bits: u64, precision: u32) -> Self {
        Self::from_parts(v, -(frac_bits as i64), precision)
    }

    /// Nearest integer, ties away from zero.
    pub fn round(&self) -> BigInt {
        self.to_fixed(0)
    }

    /// Integer part, rounded toward zero.
    pub fn trunc(&self) -> BigInt {
        if self.exponent >= 0 {
            &self.mantissa << (self.exponent as u64)
        } else {
            let shift = (-self.exponent) as u64;
            let mag = self.mantissa.magnitude() >> shift;
            BigInt::from_biguint(self.mantissa.sign(), mag)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.mantissa.is_zero() {
            return 0.0;
        }
        let bits = self.mantissa.bits();
        let shift = bits.saturating_sub(64);
        let top = (&self.mantissa >> shift).to_f64().unwrap_or(0.0);
        ldexp(top, self.exponent + shift as i64)
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "square root of a negative BigFloat");
        let prec = self.inexact_precision();
        if self.mantissa.is_zero() {
            return BigFloat::zero().with_precision(prec);
        }
        let want = 2 * (u64::from(prec) + 2);
        let bits = self.mantissa.bits();
        let mut shift = want.saturating_sub(bits) as i64;
        if (self.exponent - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let scaled = &self.mantissa << (shift as u64);
        let root = scaled.sqrt();
        Self::from_parts(root, (self.exponent - shift) / 2, prec)
    }

    pub fn exp(&self) -> Self {
        let prec = self.inexact_precision();
        if self.mantissa.is_zero() {
            return BigFloat::one().with_precision(prec);
        }
        if self.is_negative() {
            // e^-x = 1 / e^x keeps relative precision for large |x|
            let pos = (-self.clone()).with_precision(prec + 8);
            let one = BigFloat::one().with_precision(prec + 8);
            return (one / pos.exp()).with_precision(prec);
        }
        let mag = self.magnitude_bits().unwrap_or(0);
        // reduce to |y| < 2^-12, then square back
        let halvings = (mag + 12).max(0) as u64;
        let frac = u64::from(prec) + GUARD_BITS + halvings + mag.max(0) as u64;
        let y = self.to_fixed(frac) >> halvings;
        let mut sum = exp_series_fixed(&y, frac);
        for _ in 0..halvings {
            sum = (&sum * &sum) >> frac;
        }
        Self::from_fixed(sum, frac, prec)
    }

    /// `(sin x, cos x)`.
    pub fn sin_cos(&self) -> (Self, Self) {
        let prec = self.inexact_precision();
        if self.mantissa.is_zero() {
            return (
                BigFloat::zero().with_precision(prec),
                BigFloat::one().with_precision(prec),
            );
        }
        let mag = self.magnitude_bits().unwrap_or(0).max(0) as u64;
        let frac = u64::from(prec) + GUARD_BITS + 2 * mag;
        let mut x = self.to_fixed(frac);
        // reduce into [-pi, pi]
        if mag >= 2 {
            let two_pi = pi_fixed(frac) << 1u32;
            let k = round_div(&x, &two_pi);
            x -= k * two_pi;
        }
        const HALVINGS: u64 = 8;
        let y = x >> HALVINGS;
        let (mut s, mut c) = sin_cos_series_fixed(&y, frac);
        for _ in 0..HALVINGS {
            let s2 = (&s * &c) >> (frac - 1);
            let c2 = (&c * &c - &s * &s) >> frac;
            s = s2;
            c = c2;
        }
        (
            Self::from_fixed(s, frac, prec),
            Self::from_fixed(c, frac, prec),
        )
    }

    pub fn pi(precision: u32) -> Self {
        let frac = u64::from(precision) + GUARD_BITS;
        Self::from_fixed(pi_fixed(frac), frac, precision)
    }

    /// Exact three-way comparison.
    pub fn total_cmp(&self, other: &Self) -> Ordering {
        let diff = exact_sub(self, other);
        match diff.mantissa.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

fn ldexp(mut m: f64, mut e: i64) -> f64 {
    while e > 1000 {
        m *= 2f64.powi(1000);
        e -= 1000;
        if m.is_infinite() {
            return m;
        }
    }
    while e < -1000 {
        m *= 2f64.powi(-1000);
        e += 1000;
        if m == 0.0 {
            return m;
        }
    }
    m * 2f64.powi(e as i32)
}

fn round_shift_right(v: &BigInt, shift: u64) -> BigInt {
    if shift == 0 {
        return v.clone();
    }
    let half = num_bigint::BigUint::one() << (shift - 1);
    let mag = (v.magnitude() + half) >> shift;
    BigInt::from_biguint(v.sign(), mag)
}

fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    // floor(2a/b) = q gives round(a/b) = floor((q + 1) / 2)
    let q: BigInt = (a << 1u32).div_floor(b);
    (q + BigInt::one()).div_floor(&BigInt::from(2))
}

fn exact_sub(a: &BigFloat, b: &BigFloat) -> BigFloat {
    let e = a.exponent.min(b.exponent);
    let am = &a.mantissa << ((a.exponent - e) as u64);
    let bm = &b.mantissa << ((b.exponent - e) as u64);
    BigFloat { mantissa: am - bm, exponent: e, precision: 0 }
}

/// `sum_k y^k / k!` in fixed point with `frac` fractional bits.
fn exp_series_fixed(y: &BigInt, frac: u64) -> BigInt {
    let one = BigInt::one() << frac;
    let mut sum = one.clone();
    let mut term = one;
    let mut k = 1u64;
    loop {
        term = ((&term * y) >> frac) / BigInt::from(k);
        if term.is_zero() {
            break;
        }
        sum += &term;
        k += 1;
    }
    sum
}

fn sin_cos_series_fixed(y: &BigInt, frac: u64) -> (BigInt, BigInt) {
    let one = BigInt::one() << frac;
    let y2 = (y * y) >> frac;
    let mut s = y.clone();
    let mut c = one.clone();
    let mut term_s = y.clone();
    let mut term_c = one;
    let mut k = 1u64;
    loop {
        term_c = -((&term_c * &y2) >> frac) / BigInt::from((2 * k - 1) * (2 * k));
        term_s = -((&term_s * &y2) >> frac) / BigInt::from((2 * k) * (2 * k + 1));
        if term_c.is_zero() && term_s.is_zero() {
            break;
        }
        c += &term_c;
        s += &term_s;
        k += 1;
    }
    (s, c)
}

/// `atan(1/k)` in fixed point.
fn atan_inv_fixed(k: u64, frac: u64) -> BigInt {
    let k2 = BigInt::from(k * k);
    let mut power = (BigInt::one() << frac) / BigInt::from(k);
    let mut sum = power.clone();
    let mut n = 1u64;
    loop {
        power /= &k2;
        if power.is_zero() {
            break;
        }
        let term = &power / BigInt::from(2 * n + 1);
        if n % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        n += 1;
    }
    sum
}

static PI_CACHE: Mutex<Option<(u64, BigInt)>> = Mutex::new(None);

/// pi with `frac` fractional bits (Machin's formula), cached at the widest
/// precision requested so far.
fn pi_fixed(frac: u64) -> BigInt {
    let mut guard = PI_CACHE.lock().unwrap_or_else(|e| e.into_inner());
    if let Some((bits, value)) = guard.as_ref() {
        if *bits >= frac {
            return round_shift_right(value, bits - frac);
        }
    }
    let work = frac + 32;
    let value = (atan_inv_fixed(5, work) << 4u32) - (atan_inv_fixed(239, work) << 2u32);
    let out = round_shift_right(&value, 32);
    *guard = Some((work, value));
    out
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigFloat({:e} @{} bits)", self.to_f64(), self.precision)
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.total_cmp(other) == Ordering::Equal
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.total_cmp(other))
    }
}

impl Zero for BigFloat {
    fn zero() -> Self {
        BigFloat { mantissa: BigInt::zero(), exponent: 0, precision: 0 }
    }
    fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }
}

impl One for BigFloat {
    fn one() -> Self {
        BigFloat { mantissa: BigInt::one(), exponent: 0, precision: 0 }
    }
}

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(mut self) -> BigFloat {
        self.mantissa = -self.mantissa;
        self
    }
}

impl Add for BigFloat {
    type Output = BigFloat;
    fn add(self, rhs: BigFloat) -> BigFloat {
        let prec = self.working_precision(&rhs);
        if self.mantissa.is_zero() {
            return rhs.with_precision(prec);
        }
        if rhs.mantissa.is_zero() {
            return self.with_precision(prec);
        }
        if prec > 0 {
            let top_a = self.magnitude_bits().unwrap_or(0);
            let top_b = rhs.magnitude_bits().unwrap_or(0);
            let gap = i64::from(prec) + 2;
            if top_a - top_b > gap {
                return self.with_precision(prec);
            }
            if top_b - top_a > gap {
                return rhs.with_precision(prec);
            }
        }
        let e = self.exponent.min(rhs.exponent);
        let am = self.mantissa << ((self.exponent - e) as u64);
        let bm = rhs.mantissa << ((rhs.exponent - e) as u64);
        BigFloat::from_parts(am + bm, e, prec)
    }
}

impl Sub for BigFloat {
    type Output = BigFloat;
    fn sub(self, rhs: BigFloat) -> BigFloat {
        self + (-rhs)
    }
}

impl Mul for BigFloat {
    type Output = BigFloat;
    fn mul(self, rhs: BigFloat) -> BigFloat {
        let prec = self.working_precision(&rhs);
        BigFloat::from_parts(
            self.mantissa * rhs.mantissa,
            self.exponent + rhs.exponent,
            prec,
        )
    }
}

impl Div for BigFloat {
    type Output = BigFloat;
    fn div(self, rhs: BigFloat) -> BigFloat {
        assert!(!rhs.mantissa.is_zero(), "BigFloat division by zero");
        let prec = match self.working_precision(&rhs) {
            0 => FALLBACK_PRECISION,
            p => p,
        };
        if self.mantissa.is_zero() {
            return BigFloat::zero().with_precision(prec);
        }
        let want = i64::from(prec) + 2;
        let shift = (want + rhs.mantissa.bits() as i64 - self.mantissa.bits() as i64).max(0);
        let num = self.mantissa << (shift as u64);
        let q = num / rhs.mantissa;
        BigFloat::from_parts(q, self.exponent - shift - rhs.exponent, prec)
    }
}

impl Rem for BigFloat {
    type Output = BigFloat;
    /// Truncated remainder, `self - trunc(self / rhs) * rhs`.
    fn rem(self, rhs: BigFloat) -> BigFloat {
        let prec = self.working_precision(&rhs);
        let q = (self.clone() / rhs.clone()).trunc();
        let qf = BigFloat::from_int(q, 0);
        (self - qf * rhs).with_precision(prec)
    }
}

impl Num for BigFloat {
    type FromStrRadixErr = num_bigint::ParseBigIntError;

    /// Parses an integer literal; the result is exact.
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        BigInt::from_str_radix(s, radix).map(|v| BigFloat::from_int(v, 0))
    }
}
