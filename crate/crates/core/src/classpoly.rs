//! Hilbert class polynomials by the classical complex-analytic method.
//!
//! `H_D(x) = prod (x - j(tau))` over the reduced forms of discriminant `D`,
//! with each `j(tau)` evaluated from its `q`-expansion in high precision and
//! the product rounded to integers.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use log::{debug, warn};
use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::bigfloat::BigFloat;
use crate::quadforms::{class_number, reduced_forms, Discriminant, QuadError, QuadForm};
use crate::scalar::Real;

/// Doublings of the working precision allowed before giving up.
pub const MAX_RETRIES: u32 = 5;

/// Largest acceptable distance of a computed coefficient from an integer.
pub const ROUNDING_THRESHOLD: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassPolyError {
    #[error(transparent)]
    Discriminant(#[from] QuadError),
    #[error("j({form}) is not finite at {bits} bits")]
    Overflow { form: QuadForm, bits: u32 },
    #[error("coefficient of x^{degree} needs {needed} bits, the scalar carries {available}")]
    Unrepresentable { degree: usize, needed: i64, available: u32 },
    #[error("coefficient of x^{degree} is {residual} away from an integer")]
    Residual { degree: usize, residual: f64 },
    #[error("precision exhausted for {disc} after {retries} retries")]
    PrecisionExhausted { disc: i64, retries: u32 },
    #[error("cache: {0}")]
    Cache(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionBudget {
    pub mantissa_bits: u32,
    pub series_terms: usize,
}

impl PrecisionBudget {
    /// A budget at exactly `bits`, with enough series terms for every form
    /// of `d`.
    pub fn with_bits(d: &Discriminant, bits: u32) -> Self {
        let a_max = reduced_forms(d).iter().map(|f| f.a).max().unwrap_or(1);
        PrecisionBudget {
            mantissa_bits: bits.max(64),
            series_terms: terms_needed(d.abs(), a_max, bits.max(64)),
        }
    }
}

/// Series length after which `240 sigma_3(n) |q|^n` is below
/// `2^-(bits+16)`, where `|q| = exp(-pi sqrt(D) / a)`.
fn terms_needed(d: u64, a: i64, bits: u32) -> usize {
    let decay = std::f64::consts::PI * (d as f64).sqrt() / a as f64 / std::f64::consts::LN_2;
    let target = f64::from(bits) + 16.0;
    let mut n = 16usize;
    // 240 sigma_3(n) < 2^8 * n^4
    while (n as f64) * decay < target + 8.0 + 4.0 * (n as f64).log2() {
        n += 1;
    }
    n
}

pub fn precision_estimate(d: &Discriminant) -> PrecisionBudget {
    let forms = reduced_forms(d);
    let root = (d.abs() as f64).sqrt();
    let inv_a: f64 = forms.iter().map(|f| 1.0 / f.a as f64).sum();
    let bits = std::f64::consts::PI * root * inv_a / std::f64::consts::LN_2
        + 32.0 * forms.len() as f64
        + 256.0;
    PrecisionBudget::with_bits(d, bits.ceil() as u32)
}

/// `sigma_3(n)` for `n < len`.
fn sigma3_table(len: usize) -> Vec<i64> {
    let mut out = vec![0i64; len];
    for d in 1..len {
        let cube = (d as i64).pow(3);
        for m in (d..len).step_by(d) {
            out[m] += cube;
        }
    }
    out
}

fn power_of_two_mul<T: Real>(z: &Complex<T>, squarings: u32) -> Complex<T> {
    (0..squarings).fold(z.clone(), |acc, _| acc.clone() * acc)
}

/// `j((-b + i sqrt|D|) / 2a)` for a positive definite form.
pub fn j_at_form<T: Real>(form: &QuadForm, budget: &PrecisionBudget) -> Result<Complex<T>, ClassPolyError> {
    let bits = budget.mantissa_bits;
    let d = (-form.discriminant()) as u64;
    let terms = budget.series_terms.min(terms_needed(d, form.a, bits));

    let a = T::from_int(form.a, bits);
    let pi = T::pi(bits);
    // q = exp(2 pi i tau) = exp(-r) exp(-i theta)
    let r = pi.clone() * T::from_int(d as i64, bits).sqrt() / a.clone();
    let theta = pi * T::from_int(form.b, bits) / a;
    let (sin, cos) = theta.sin_cos();
    let small = (-r.clone()).exp();
    let large = r.exp();
    let q = Complex::new(small.clone() * cos.clone(), -(small * sin.clone()));
    let q_inv = Complex::new(large.clone() * cos, large * sin);

    let sigma3 = sigma3_table(terms + 1);
    let one = Complex::new(T::from_int(1, bits), T::zero());
    let mut e4_tail = Complex::new(T::zero(), T::zero());
    let mut eta_prod = one.clone();
    let mut qn = one.clone();
    for s in sigma3.iter().skip(1) {
        qn = qn * q.clone();
        e4_tail = e4_tail + qn.clone() * T::from_int(*s, bits);
        eta_prod = eta_prod * (one.clone() - qn.clone());
    }
    let e4 = one + e4_tail * T::from_int(240, bits);
    let e4_cubed = e4.clone() * e4.clone() * e4;
    let p8 = power_of_two_mul(&eta_prod, 3);
    let p24 = power_of_two_mul(&p8, 1) * p8;
    let j = e4_cubed * q_inv / p24;
    if !(j.re.is_finite() && j.im.is_finite()) {
        return Err(ClassPolyError::Overflow { form: *form, bits });
    }
    Ok(j)
}

/// The monic integer polynomial `H_D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassPolynomial {
    disc: Discriminant,
    /// `coeffs[k]` multiplies `x^k`; the last entry is 1.
    coeffs: Vec<BigInt>,
}

impl ClassPolynomial {
    pub fn disc(&self) -> Discriminant {
        self.disc
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients from the constant term up.
    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn eval_at_integer(&self, t: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * t + c)
    }

    pub fn eval_complex(&self, z: &Complex<BigFloat>) -> Complex<BigFloat> {
        let bits = z.re.precision().max(z.im.precision());
        self.coeffs.iter().rev().fold(Complex::new(BigFloat::zero(), BigFloat::zero()), |acc, c| {
            acc * z.clone() + Complex::new(BigFloat::from_int(c.clone(), bits), BigFloat::zero())
        })
    }
}

impl fmt::Display for ClassPolynomial {
    /// `x^2 - 3*x + 5` style, highest degree first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("x")?,
                (1, false) => write!(f, "{mag}*x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{mag}*x^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// A synthesized polynomial with the worst rounding residual seen.
#[derive(Debug, Clone)]
pub struct Synthesis {
    pub poly: ClassPolynomial,
    pub worst_residual: f64,
}

/// One synthesis attempt at a fixed budget, with no retries.
pub fn synthesize<T: Real>(d: &Discriminant, budget: &PrecisionBudget) -> Result<Synthesis, ClassPolyError> {
    let bits = budget.mantissa_bits;
    let zero = || Complex::new(T::zero(), T::zero());
    // ascending coefficients of the running product
    let mut acc = vec![Complex::new(T::from_int(1, bits), T::zero())];
    for form in reduced_forms(d) {
        let j = j_at_form::<T>(&form, budget)?;
        let mut next = vec![zero(); acc.len() + 1];
        for (k, c) in acc.iter().enumerate() {
            next[k + 1] = next[k + 1].clone() + c.clone();
            next[k] = next[k].clone() - c.clone() * j.clone();
        }
        acc = next;
    }

    let mut coeffs = Vec::with_capacity(acc.len());
    let mut worst = 0.0f64;
    for (degree, c) in acc.iter().enumerate() {
        if let Some(needed) = c.re.magnitude_bits() {
            let available = c.re.significant_bits();
            if needed + 2 > i64::from(available) {
                return Err(ClassPolyError::Unrepresentable { degree, needed, available });
            }
        }
        let rounded = c.re.round_to_integer().ok_or(ClassPolyError::Overflow {
            form: QuadForm::new(0, 0, 0),
            bits,
        })?;
        let off = (c.re.clone() - T::from_bigint(&rounded, bits)).abs().to_f64();
        let residual = off.max(c.im.abs().to_f64());
        if residual.is_nan() || residual >= ROUNDING_THRESHOLD {
            return Err(ClassPolyError::Residual { degree, residual });
        }
        worst = worst.max(residual);
        coeffs.push(rounded);
    }
    debug!("H_{d}: degree {} at {bits} bits, worst residual {worst:e}", coeffs.len() - 1);
    Ok(Synthesis { poly: ClassPolynomial { disc: *d, coeffs }, worst_residual: worst })
}

/// `H_D` starting from [`precision_estimate`], doubling the precision on
/// rounding trouble.
pub fn hilbert_class_poly(d: &Discriminant) -> Result<ClassPolynomial, ClassPolyError> {
    hilbert_class_poly_from(d, precision_estimate(d))
}

pub fn hilbert_class_poly_from(d: &Discriminant, start: PrecisionBudget) -> Result<ClassPolynomial, ClassPolyError> {
    let mut budget = start;
    for attempt in 0..=MAX_RETRIES {
        match synthesize::<BigFloat>(d, &budget) {
            Ok(s) => return Ok(s.poly),
            Err(e @ (ClassPolyError::Residual { .. } | ClassPolyError::Unrepresentable { .. })) => {
                warn!("H_{d} attempt {attempt} at {} bits: {e}", budget.mantissa_bits);
                budget = PrecisionBudget::with_bits(d, budget.mantissa_bits * 2);
            }
            Err(e) => return Err(e),
        }
    }
    Err(ClassPolyError::PrecisionExhausted { disc: d.value(), retries: MAX_RETRIES })
}

/// Class polynomials kept in memory and, optionally, in a directory with
/// one `hd_<|D|>.txt` file per discriminant.
///
/// File layout: `|D| h` on the first line, then the `h + 1` coefficients
/// from degree `h` down to the constant term, one per line.
#[derive(Debug, Default)]
pub struct PolyCache {
    dir: Option<PathBuf>,
    memory: Mutex<HashMap<u64, Arc<ClassPolynomial>>>,
}

impl PolyCache {
    pub fn in_memory() -> Self {
        PolyCache::default()
    }

    pub fn with_dir(dir: impl Into<PathBuf>) -> Result<Self, ClassPolyError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| ClassPolyError::Cache(format!("{}: {e}", dir.display())))?;
        Ok(PolyCache { dir: Some(dir), memory: Mutex::default() })
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn file_name(d: &Discriminant) -> String {
        format!("hd_{}.txt", d.abs())
    }

    pub fn get(&self, d: &Discriminant) -> Result<Arc<ClassPolynomial>, ClassPolyError> {
        if let Some(p) = self.memory.lock().unwrap().get(&d.abs()) {
            return Ok(Arc::clone(p));
        }
        let poly = match self.read_file(d) {
            Some(p) => p,
            None => {
                let p = hilbert_class_poly(d)?;
                self.write_file(&p)?;
                p
            }
        };
        let poly = Arc::new(poly);
        self.memory.lock().unwrap().insert(d.abs(), Arc::clone(&poly));
        Ok(poly)
    }

    fn read_file(&self, d: &Discriminant) -> Option<ClassPolynomial> {
        let path = self.dir.as_ref()?.join(Self::file_name(d));
        let text = fs::read_to_string(&path).ok()?;
        match parse_cache_file(d, &text) {
            Some(p) => Some(p),
            None => {
                warn!("ignoring malformed cache file {}", path.display());
                None
            }
        }
    }

    fn write_file(&self, poly: &ClassPolynomial) -> Result<(), ClassPolyError> {
        let Some(dir) = &self.dir else { return Ok(()) };
        let err = |e: std::io::Error| ClassPolyError::Cache(format!("{}: {e}", dir.display()));
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(err)?;
        tmp.write_all(render_cache_file(poly).as_bytes()).map_err(err)?;
        tmp.flush().map_err(err)?;
        let target = dir.join(Self::file_name(&poly.disc));
        // a concurrent writer may have won; its content is identical
        tmp.persist(&target).map_err(|e| err(e.error))?;
        Ok(())
    }
}

pub fn render_cache_file(poly: &ClassPolynomial) -> String {
    let mut out = format!("{} {}\n", poly.disc.abs(), poly.degree());
    for c in poly.coeffs.iter().rev() {
        out.push_str(&c.to_string());
        out.push('\n');
    }
    out
}

pub fn parse_cache_file(d: &Discriminant, text: &str) -> Option<ClassPolynomial> {
    if !text.ends_with('\n') {
        return None;
    }
    let mut lines = text.lines();
    let mut header = lines.next()?.split(' ');
    let abs: u64 = header.next()?.parse().ok()?;
    let h: usize = header.next()?.parse().ok()?;
    if header.next().is_some() || abs != d.abs() || h != class_number(d) {
        return None;
    }
    let mut coeffs: Vec<BigInt> = lines.map(|l| l.parse().ok()).collect::<Option<_>>()?;
    if coeffs.len() != h + 1 || !coeffs[0].is_one() {
        return None;
    }
    coeffs.reverse();
    Some(ClassPolynomial { disc: *d, coeffs })
}
