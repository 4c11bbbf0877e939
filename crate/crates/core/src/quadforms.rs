//! Discriminants of imaginary quadratic orders and their reduced binary
//! quadratic forms.

use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::arith::{is_prime, kronecker, SymbolValue};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadError {
    #[error("{0} is not a negative discriminant (must be < 0 and 0 or 1 mod 4)")]
    InvalidDiscriminant(i64),
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("{0} is not prime")]
    NotPrime(u64),
}

/// A negative discriminant `f^2 * d_K` of an imaginary quadratic order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Discriminant {
    value: i64,
    conductor: u64,
    fundamental: i64,
}

impl Discriminant {
    pub fn new(value: i64) -> Result<Self, QuadError> {
        if value >= 0 || !matches!(value.rem_euclid(4), 0 | 1) {
            return Err(QuadError::InvalidDiscriminant(value));
        }
        let d = value.unsigned_abs();
        let (core, root) = squarefree_decomposition(d);
        let (fundamental, conductor) = if core % 4 == 3 {
            (-(core as i64), root)
        } else {
            (-4 * core as i64, root / 2)
        };
        debug_assert_eq!(fundamental * (conductor * conductor) as i64, value);
        Ok(Discriminant { value, conductor, fundamental })
    }

    /// The discriminant `-d`.
    pub fn from_abs(d: u64) -> Result<Self, QuadError> {
        let value = i64::try_from(d).map_err(|_| QuadError::InvalidDiscriminant(i64::MIN))?;
        Discriminant::new(-value)
    }

    /// The order of conductor `f` in the field of discriminant `fundamental`.
    pub fn with_conductor(fundamental: i64, f: u64) -> Result<Self, QuadError> {
        let base = Discriminant::new(fundamental)?;
        if !base.is_fundamental() {
            return Err(QuadError::NotFundamental(fundamental));
        }
        Discriminant::new(fundamental * (f * f) as i64)
    }

    pub fn value(&self) -> i64 {
        self.value
    }

    /// `|value|`.
    pub fn abs(&self) -> u64 {
        self.value.unsigned_abs()
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn fundamental(&self) -> i64 {
        self.fundamental
    }

    pub fn is_fundamental(&self) -> bool {
        self.conductor == 1
    }
}

impl fmt::Display for Discriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// `n = core * root^2` with `core` squarefree.
fn squarefree_decomposition(mut n: u64) -> (u64, u64) {
    let mut core = 1;
    let mut root = 1;
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        root *= p.pow(e / 2);
        if e % 2 == 1 {
            core *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (core * n, root)
}

/// The form `a x^2 + b x y + c y^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadForm { a, b, c }
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    pub fn is_positive_definite(&self) -> bool {
        self.a > 0 && self.discriminant() < 0
    }

    pub fn is_reduced(&self) -> bool {
        let QuadForm { a, b, c } = *self;
        a > 0 && b.abs() <= a && a <= c && !(b < 0 && (b == -a || a == c))
    }

    /// The reduced form equivalent to a positive definite `self`.
    pub fn reduce(&self) -> QuadForm {
        let QuadForm { mut a, mut b, mut c } = *self;
        debug_assert!(self.is_positive_definite());
        loop {
            // translate b into (-a, a]
            if b <= -a || b > a {
                let two_a = 2 * a;
                let k = Integer::div_floor(&(a - b), &two_a);
                c += k * (a * k + b);
                b += two_a * k;
            }
            if a > c {
                std::mem::swap(&mut a, &mut c);
                b = -b;
                continue;
            }
            if a == c && b < 0 {
                b = -b;
            }
            return QuadForm { a, b, c };
        }
    }

    /// The result of acting by `[[p, q], [r, s]]`: `(x, y) -> (p x + q y, r x + s y)`.
    pub fn transform(&self, m: [[i64; 2]; 2]) -> QuadForm {
        let [[p, q], [r, s]] = m;
        let QuadForm { a, b, c } = *self;
        QuadForm {
            a: a * p * p + b * p * r + c * r * r,
            b: 2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
            c: a * q * q + b * q * s + c * s * s,
        }
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// One reduced primitive form per class, ordered by `(a, b)`.
pub fn reduced_forms(d: &Discriminant) -> Vec<QuadForm> {
    let dd = d.abs() as i64;
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= dd {
        let start = if (a + dd) % 2 == 0 { -a + 2 } else { -a + 1 };
        let mut b = start;
        while b <= a {
            let num = b * b + dd;
            if num % (4 * a) == 0 {
                let c = num / (4 * a);
                let form = QuadForm { a, b, c };
                if form.is_reduced() && form.is_primitive() {
                    out.push(form);
                }
            }
            b += 2;
        }
        a += 1;
    }
    out
}

pub fn class_number(d: &Discriminant) -> usize {
    reduced_forms(d).len()
}

/// How a rational prime decomposes in an imaginary quadratic field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

pub fn splitting(p: u64, fundamental: i64) -> Result<Splitting, QuadError> {
    let d = Discriminant::new(fundamental)?;
    if !d.is_fundamental() {
        return Err(QuadError::NotFundamental(fundamental));
    }
    if !is_prime(p) {
        return Err(QuadError::NotPrime(p));
    }
    Ok(match kronecker(fundamental, p) {
        SymbolValue::One => Splitting::Split,
        SymbolValue::Zero => Splitting::Ramified,
        SymbolValue::MinusOne => Splitting::Inert,
    })
}
