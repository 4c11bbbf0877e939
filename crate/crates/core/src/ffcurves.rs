//! Elliptic curves over `F_p` and `F_{p^2}` and a census of supersingular
//! `j`-invariants by point counting.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rayon::prelude::*;
use thiserror::Error;

use crate::arith::is_prime;

/// Largest field size [`point_count`] accepts.
pub const NAIVE_COUNT_LIMIT: u64 = 10_000;

/// Largest characteristic [`ss_census`] accepts.
pub const CENSUS_PRIME_LIMIT: u64 = 50;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("x^2 + {c1}x + {c0} is reducible over F_{p}")]
    Reducible { p: u64, c1: u64, c0: u64 },
    #[error("the curve is singular")]
    Singular,
    #[error("field of size {0} is too large for naive point counting")]
    TooLarge(u64),
    #[error("census is limited to p <= {CENSUS_PRIME_LIMIT}, got {0}")]
    CensusTooLarge(u64),
}

/// `F_p`, or `F_p[t] / (t^2 + c1 t + c0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteField {
    p: u64,
    degree: u32,
    c1: u64,
    c0: u64,
}

impl FiniteField {
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FiniteField { p, degree: 1, c1: 0, c0: 0 })
    }

    pub fn quadratic_with_modulus(p: u64, c1: u64, c0: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let (c1, c0) = (c1 % p, c0 % p);
        if (0..p).any(|x| (x * x + c1 * x + c0) % p == 0) {
            return Err(FieldError::Reducible { p, c1, c0 });
        }
        Ok(FiniteField { p, degree: 2, c1, c0 })
    }

    /// `F_{p^2}` with the first irreducible `t^2 + c1 t + c0` in `(c1, c0)` order.
    pub fn quadratic(p: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        (0..p)
            .flat_map(|c1| (0..p).map(move |c0| (c1, c0)))
            .find_map(|(c1, c0)| Self::quadratic_with_modulus(p, c1, c0).ok())
            .ok_or(FieldError::NotPrime(p))
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `(c1, c0)` of the defining polynomial; `None` for a prime field.
    pub fn modulus(&self) -> Option<(u64, u64)> {
        (self.degree == 2).then_some((self.c1, self.c0))
    }

    pub fn size(&self) -> u64 {
        self.p.pow(self.degree)
    }

    pub fn element(&self, c0: u64, c1: u64) -> FieldElement {
        let c1 = if self.degree == 1 { 0 } else { c1 % self.p };
        FieldElement { field: *self, coords: [c0 % self.p, c1] }
    }

    pub fn from_int(&self, v: i64) -> FieldElement {
        self.element(v.rem_euclid(self.p as i64) as u64, 0)
    }

    pub fn zero(&self) -> FieldElement {
        self.element(0, 0)
    }

    pub fn one(&self) -> FieldElement {
        self.element(1, 0)
    }

    /// All elements, in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.size()).map(move |i| self.from_index(i))
    }

    pub fn from_index(&self, i: u64) -> FieldElement {
        self.element(i % self.p, i / self.p)
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.degree {
            1 => write!(f, "F_{}", self.p),
            _ => {
                write!(f, "F_{}[t]/(t^2", self.p)?;
                match self.c1 {
                    0 => {}
                    1 => write!(f, " + t")?,
                    c => write!(f, " + {c}t")?,
                }
                if self.c0 != 0 {
                    write!(f, " + {}", self.c0)?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    field: FiniteField,
    /// `c0 + c1 t`
    coords: [u64; 2],
}

impl FieldElement {
    pub fn field(&self) -> FiniteField {
        self.field
    }

    pub fn coords(&self) -> [u64; 2] {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords == [0, 0]
    }

    /// The value as a residue when it lies in the prime field.
    pub fn as_prime_field(&self) -> Option<u64> {
        (self.coords[1] == 0).then_some(self.coords[0])
    }

    pub fn index(&self) -> u64 {
        self.coords[0] + self.field.p * self.coords[1]
    }

    pub fn pow(&self, mut e: u64) -> FieldElement {
        let mut acc = self.field.one();
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<FieldElement> {
        (!self.is_zero()).then(|| self.pow(self.field.size() - 2))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.coords {
            [c0, 0] => write!(f, "{c0}"),
            [0, c1] => write!(f, "{c1}*t"),
            [c0, c1] => write!(f, "{c0} + {c1}*t"),
        }
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        debug_assert_eq!(self.field, rhs.field);
        let p = self.field.p;
        let [a0, a1] = self.coords;
        let [b0, b1] = rhs.coords;
        FieldElement { field: self.field, coords: [(a0 + b0) % p, (a1 + b1) % p] }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let p = self.field.p;
        let [a0, a1] = self.coords;
        FieldElement { field: self.field, coords: [(p - a0) % p, (p - a1) % p] }
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        self + (-rhs)
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        debug_assert_eq!(self.field, rhs.field);
        let FiniteField { p, c1, c0, .. } = self.field;
        let [a0, a1] = self.coords;
        let [b0, b1] = rhs.coords;
        // t^2 = -c1 t - c0
        let hi = a1 * b1 % p;
        let lo = (a0 * b0 + hi * (p - c0)) % p;
        let mid = (a0 * b1 + a1 * b0 + hi * (p - c1)) % p;
        FieldElement { field: self.field, coords: [lo, mid] }
    }
}

/// `y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeierstrassCurve {
    pub a1: FieldElement,
    pub a2: FieldElement,
    pub a3: FieldElement,
    pub a4: FieldElement,
    pub a6: FieldElement,
}

impl WeierstrassCurve {
    pub fn new(coeffs: [FieldElement; 5]) -> Result<Self, FieldError> {
        let [a1, a2, a3, a4, a6] = coeffs;
        let curve = WeierstrassCurve { a1, a2, a3, a4, a6 };
        if curve.discriminant().is_zero() {
            return Err(FieldError::Singular);
        }
        Ok(curve)
    }

    /// `y^2 = x^3 + a x + b`.
    pub fn short(a: FieldElement, b: FieldElement) -> Result<Self, FieldError> {
        let z = a.field().zero();
        Self::new([z, z, z, a, b])
    }

    pub fn field(&self) -> FiniteField {
        self.a1.field()
    }

    fn b_invariants(&self) -> [FieldElement; 4] {
        let k = self.field();
        let c = |v: i64| k.from_int(v);
        let WeierstrassCurve { a1, a2, a3, a4, a6 } = *self;
        let b2 = a1 * a1 + c(4) * a2;
        let b4 = c(2) * a4 + a1 * a3;
        let b6 = a3 * a3 + c(4) * a6;
        let b8 = a1 * a1 * a6 + c(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        [b2, b4, b6, b8]
    }

    pub fn discriminant(&self) -> FieldElement {
        let c = |v: i64| self.field().from_int(v);
        let [b2, b4, b6, b8] = self.b_invariants();
        -(b2 * b2 * b8) - c(8) * b4 * b4 * b4 - c(27) * b6 * b6 + c(9) * b2 * b4 * b6
    }

    pub fn c4(&self) -> FieldElement {
        let [b2, b4, _, _] = self.b_invariants();
        b2 * b2 - self.field().from_int(24) * b4
    }

    /// Right hand side minus the `y`-linear part, as `(B, C)` in `y^2 + B y = C`.
    fn fiber(&self, x: FieldElement) -> (FieldElement, FieldElement) {
        let b = self.a1 * x + self.a3;
        let c = ((x + self.a2) * x + self.a4) * x + self.a6;
        (b, c)
    }
}

impl fmt::Display for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}, {}, {}] over {}", self.a1, self.a2, self.a3, self.a4, self.a6, self.field())
    }
}

/// `c4^3 / Delta`.
pub fn j_invariant(e: &WeierstrassCurve) -> Result<FieldElement, FieldError> {
    let delta_inv = e.discriminant().inv().ok_or(FieldError::Singular)?;
    let c4 = e.c4();
    Ok(c4 * c4 * c4 * delta_inv)
}

/// Number of points over the base field, the point at infinity included,
/// by trying every pair `(x, y)`.
pub fn point_count(e: &WeierstrassCurve) -> Result<u64, FieldError> {
    let k = e.field();
    if k.size() > NAIVE_COUNT_LIMIT {
        return Err(FieldError::TooLarge(k.size()));
    }
    let mut count = 1;
    for x in k.elements() {
        let (b, c) = e.fiber(x);
        count += k.elements().filter(|&y| y * y + b * y == c).count() as u64;
    }
    Ok(count)
}

/// Frobenius trace `q + 1 - #E`.
pub fn trace(e: &WeierstrassCurve) -> Result<i64, FieldError> {
    Ok(e.field().size() as i64 + 1 - point_count(e)? as i64)
}

pub fn is_supersingular(e: &WeierstrassCurve) -> Result<bool, FieldError> {
    Ok(trace(e)? % e.field().characteristic() as i64 == 0)
}

/// Point counting through a table of solution counts of `y^2 + B y = C`.
pub struct PointCounter {
    field: FiniteField,
    /// `roots[B * q + C]`
    roots: Vec<u8>,
}

impl PointCounter {
    pub fn new(field: FiniteField) -> Self {
        let q = field.size() as usize;
        let mut roots = vec![0u8; q * q];
        for b in field.elements() {
            for y in field.elements() {
                let c = y * y + b * y;
                roots[b.index() as usize * q + c.index() as usize] += 1;
            }
        }
        PointCounter { field, roots }
    }

    pub fn count(&self, e: &WeierstrassCurve) -> u64 {
        let q = self.field.size() as usize;
        1 + self
            .field
            .elements()
            .map(|x| {
                let (b, c) = e.fiber(x);
                u64::from(self.roots[b.index() as usize * q + c.index() as usize])
            })
            .sum::<u64>()
    }

    pub fn trace(&self, e: &WeierstrassCurve) -> i64 {
        self.field.size() as i64 + 1 - self.count(e) as i64
    }
}

/// Supersingular `j`-invariants in characteristic `p`, found by counting
/// points over `F_{p^2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupersingularCensus {
    pub p: u64,
    pub field: FiniteField,
    pub js: BTreeSet<FieldElement>,
    pub curves_examined: u64,
    /// `j`-values whose curves disagree on supersingularity (expected empty).
    pub mixed: BTreeSet<FieldElement>,
}

/// Which curves a census runs through.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CensusModels {
    /// Every `(a1, a2, a3, a4, a6)`.
    General,
    /// Every `y^2 = x^3 + a x + b`.
    Short,
    /// One short model per `j`.
    PerJ,
}

pub fn census_models(p: u64) -> CensusModels {
    match p {
        2 | 3 => CensusModels::General,
        5..=13 => CensusModels::Short,
        _ => CensusModels::PerJ,
    }
}

fn curves(field: FiniteField, models: CensusModels) -> Vec<WeierstrassCurve> {
    let q = field.size();
    let el = |i: u64| field.from_index(i);
    match models {
        CensusModels::General => (0..q.pow(5))
            .filter_map(|i| {
                let c = [i % q, i / q % q, i / q.pow(2) % q, i / q.pow(3) % q, i / q.pow(4)];
                WeierstrassCurve::new(c.map(el)).ok()
            })
            .collect(),
        CensusModels::Short => (0..q * q)
            .filter_map(|i| WeierstrassCurve::short(el(i % q), el(i / q)).ok())
            .collect(),
        CensusModels::PerJ => {
            let c = |v: i64| field.from_int(v);
            let mut out = vec![
                WeierstrassCurve::short(c(0), c(1)).expect("y^2 = x^3 + 1"),
                WeierstrassCurve::short(c(1), c(0)).expect("y^2 = x^3 + x"),
            ];
            for j in field.elements() {
                let k = c(1728) - j;
                if j.is_zero() || k.is_zero() {
                    continue;
                }
                // j(y^2 = x^3 + 3jk x + 2jk^2) = j
                out.push(WeierstrassCurve::short(c(3) * j * k, c(2) * j * k * k).expect("j != 0, 1728"));
            }
            out
        }
    }
}

pub fn ss_census(p: u64) -> Result<SupersingularCensus, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if p > CENSUS_PRIME_LIMIT {
        return Err(FieldError::CensusTooLarge(p));
    }
    let field = FiniteField::quadratic(p)?;
    let counter = PointCounter::new(field);
    let all = curves(field, census_models(p));
    // j -> (supersingular curves, ordinary curves)
    let buckets: BTreeMap<FieldElement, (u64, u64)> = all
        .par_iter()
        .map(|e| {
            let j = j_invariant(e).expect("curves are nonsingular");
            let ss = counter.trace(e) % p as i64 == 0;
            (j, ss)
        })
        .fold(BTreeMap::new, |mut acc: BTreeMap<FieldElement, (u64, u64)>, (j, ss)| {
            let entry = acc.entry(j).or_default();
            if ss {
                entry.0 += 1;
            } else {
                entry.1 += 1;
            }
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (j, (s, o)) in b {
                let entry = a.entry(j).or_default();
                entry.0 += s;
                entry.1 += o;
            }
            a
        });
    let js = buckets.iter().filter(|(_, c)| c.0 > 0).map(|(j, _)| *j).collect();
    let mixed = buckets.iter().filter(|(_, c)| c.0 > 0 && c.1 > 0).map(|(j, _)| *j).collect();
    Ok(SupersingularCensus { p, field, js, curves_examined: all.len() as u64, mixed })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn short(p: u64, a: i64, b: i64) -> WeierstrassCurve {
        let k = FiniteField::prime(p).unwrap();
        WeierstrassCurve::short(k.from_int(a), k.from_int(b)).unwrap()
    }

    #[test]
    fn field_construction() {
        let k = FiniteField::quadratic(2).unwrap();
        assert_eq!(k.modulus(), Some((1, 1)));
        let k = FiniteField::quadratic(5).unwrap();
        assert_eq!(k.modulus(), Some((0, 2)));
        assert_eq!(k.size(), 25);
        assert_eq!(k.to_string(), "F_5[t]/(t^2 + 2)");
        assert_eq!(FiniteField::quadratic(2).unwrap().to_string(), "F_2[t]/(t^2 + t + 1)");
        assert_eq!(FiniteField::prime(7).unwrap().to_string(), "F_7");
        assert!(FiniteField::quadratic_with_modulus(5, 0, 1).is_err());
        assert!(FiniteField::prime(9).is_err());
        for p in [2, 3, 5, 7, 11, 13] {
            let k = FiniteField::quadratic(p).unwrap();
            // the multiplicative group has order q - 1 and every nonzero element is invertible
            for x in k.elements().filter(|x| !x.is_zero()) {
                assert_eq!(x.pow(k.size() - 1), k.one());
                assert_eq!(x * x.inv().unwrap(), k.one());
            }
            // Frobenius is additive
            let (x, y) = (k.from_index(3 % k.size()), k.from_index(k.size() - 1));
            assert_eq!((x + y).pow(p), x.pow(p) + y.pow(p));
        }
    }

    #[test]
    fn j_examples() {
        let e = short(5, 1, 0);
        assert_eq!(e.c4(), FiniteField::prime(5).unwrap().from_int(-48));
        assert_eq!(e.discriminant(), FiniteField::prime(5).unwrap().from_int(-64));
        assert_eq!(j_invariant(&e).unwrap().as_prime_field(), Some(3));
        let k2 = FiniteField::prime(2).unwrap();
        let e1 = WeierstrassCurve::new([k2.zero(), k2.zero(), k2.one(), k2.zero(), k2.zero()]).unwrap();
        assert_eq!(j_invariant(&e1).unwrap().as_prime_field(), Some(0));
        assert_eq!(j_invariant(&short(5, 0, 1)).unwrap().as_prime_field(), Some(0));
        assert_eq!(WeierstrassCurve::short(k2.zero(), k2.zero()), Err(FieldError::Singular));
    }

    #[test]
    fn count_examples() {
        assert_eq!(point_count(&short(5, 0, 1)), Ok(6));
        assert_eq!(point_count(&short(5, 1, 0)), Ok(4));
        let k2 = FiniteField::prime(2).unwrap();
        let e1 = WeierstrassCurve::new([k2.zero(), k2.zero(), k2.one(), k2.zero(), k2.zero()]).unwrap();
        assert_eq!(point_count(&e1), Ok(3));
        assert_eq!(is_supersingular(&short(5, 0, 1)), Ok(true));
        assert_eq!(is_supersingular(&short(5, 1, 0)), Ok(false));
        assert_eq!(is_supersingular(&short(7, 1, 0)), Ok(true));
        let big = FiniteField::prime(10_007).unwrap();
        let e = WeierstrassCurve::short(big.one(), big.one()).unwrap();
        assert_eq!(point_count(&e), Err(FieldError::TooLarge(10_007)));
    }

    #[test]
    fn table_counts_match_naive_counts() {
        for (p, models) in [(2, CensusModels::General), (3, CensusModels::General), (5, CensusModels::Short)] {
            let k = FiniteField::quadratic(p).unwrap();
            let counter = PointCounter::new(k);
            for (i, e) in curves(k, models).iter().enumerate().step_by(7) {
                assert_eq!(counter.count(e), point_count(e).unwrap(), "{i}");
            }
        }
    }

    #[test]
    fn hasse_bound() {
        let k = FiniteField::quadratic(7).unwrap();
        let counter = PointCounter::new(k);
        for e in curves(k, CensusModels::Short) {
            let t = counter.trace(&e);
            assert!(t * t <= 4 * k.size() as i64);
        }
    }

    #[test]
    fn census_examples() {
        let single = |p: u64| {
            let c = ss_census(p).unwrap();
            assert!(c.mixed.is_empty(), "{p}");
            assert_eq!(c.js.len(), 1, "{p}: {:?}", c.js);
            c.js.iter().next().unwrap().as_prime_field().unwrap()
        };
        assert_eq!(single(2), 0);
        assert_eq!(single(3), 0);
        assert_eq!(single(5), 0);
        assert_eq!(single(7), 6);
        assert_eq!(single(13), 5);
        assert_eq!(ss_census(53), Err(FieldError::CensusTooLarge(53)));
    }

    #[test]
    fn census_sizes_follow_p_over_12() {
        // the number of supersingular j is floor(p/12) + {0, 1, 1, 2} by p mod 12
        for p in [11u64, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
            let extra = match p % 12 {
                1 => 0,
                5 | 7 => 1,
                _ => 2,
            };
            let c = ss_census(p).unwrap();
            assert_eq!(c.js.len() as u64, p / 12 + extra, "{p}");
            assert!(c.mixed.is_empty());
        }
    }
}
