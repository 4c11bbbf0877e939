//! Integer factorization: trial division, then Pollard rho with Brent's
//! cycle detection on whatever survives.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use super::montgomery::Mont128;
use super::prime::{is_prime_big, primes_up_to};

/// Pollard rho iterations allowed per composite cofactor, summed over all
/// polynomial restarts.
pub const RHO_ITERATION_BUDGET: u64 = 1 << 20;

/// A signed integer as `sign * prod p^e`, primes strictly increasing.
///
/// Zero has its own representation (`Sign::NoSign`, no factors), distinct
/// from the empty products `+1` and `-1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization {
    sign: Sign,
    factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    pub fn zero() -> Self {
        Factorization { sign: Sign::NoSign, factors: Vec::new() }
    }

    pub fn one() -> Self {
        Factorization { sign: Sign::Plus, factors: Vec::new() }
    }

    /// Builds a factorization from prime powers in any order; repeated primes
    /// are merged. Primality is checked.
    pub fn from_prime_powers(
        sign: Sign,
        powers: impl IntoIterator<Item = (BigUint, u32)>,
    ) -> Result<Self, FactorError> {
        let mut merged: BTreeMap<BigUint, u32> = BTreeMap::new();
        for (p, e) in powers {
            if e == 0 {
                continue;
            }
            if !is_prime_big(&p) {
                return Err(FactorError::NotPrime(p.to_string()));
            }
            *merged.entry(p).or_default() += e;
        }
        if sign == Sign::NoSign && !merged.is_empty() {
            return Err(FactorError::Malformed("zero cannot carry prime factors".into()));
        }
        Ok(Factorization { sign, factors: merged.into_iter().collect() })
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn is_zero(&self) -> bool {
        self.sign == Sign::NoSign
    }

    /// `±1`.
    pub fn is_unit(&self) -> bool {
        self.sign != Sign::NoSign && self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> + '_ {
        self.factors.iter().map(|(p, _)| p)
    }

    /// Exponent of `p`, zero when absent.
    pub fn exponent_of(&self, p: u64) -> u32 {
        let p = BigUint::from(p);
        self.factors
            .binary_search_by(|(q, _)| q.cmp(&p))
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn divisible_by(&self, p: u64) -> bool {
        self.is_zero() || self.exponent_of(p) > 0
    }

    pub fn abs(&self) -> Self {
        let sign = if self.sign == Sign::Minus { Sign::Plus } else { self.sign };
        Factorization { sign, factors: self.factors.clone() }
    }

    pub fn recompose(&self) -> BigInt {
        if self.is_zero() {
            return BigInt::zero();
        }
        let mag = self
            .factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e));
        BigInt::from_biguint(self.sign, mag)
    }
}

impl fmt::Display for Factorization {
    /// `2^4 * 3^3 * 5^3`; zero prints as `0`, the empty product as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::NoSign => return f.write_str("0"),
            Sign::Minus => f.write_str("-")?,
            Sign::Plus => {}
        }
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Factorization {
    type Err = FactorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(Factorization::zero());
        }
        let (sign, body) = match s.strip_prefix('-') {
            Some(rest) => (Sign::Minus, rest.trim()),
            None => (Sign::Plus, s),
        };
        if body == "1" {
            return Ok(Factorization { sign, factors: Vec::new() });
        }
        let mut powers = Vec::new();
        for term in body.split('*') {
            let term = term.trim();
            let (p, e) = match term.split_once('^') {
                Some((p, e)) => (p.trim(), e.trim()),
                None => (term, "1"),
            };
            let p = BigUint::from_str(p).map_err(|_| FactorError::Malformed(term.into()))?;
            let e = e.parse::<u32>().map_err(|_| FactorError::Malformed(term.into()))?;
            if e == 0 {
                return Err(FactorError::Malformed(term.into()));
            }
            powers.push((p, e));
        }
        let out = Factorization::from_prime_powers(sign, powers)?;
        // the textual form is canonical: strictly increasing primes
        if out.factors.len() != body.split('*').count() {
            return Err(FactorError::Malformed(format!("repeated prime in {s:?}")));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("trial division bound must be at least 2, got {0}")]
    InvalidTrialBound(u64),
    #[error("composite cofactor {cofactor} survived {budget} rho iterations")]
    Unsplit {
        partial: Factorization,
        cofactor: BigUint,
        budget: u64,
    },
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("malformed factorization: {0}")]
    Malformed(String),
}

/// A factorization plus how it was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorOutcome {
    pub factorization: Factorization,
    /// Some prime factor exceeds the trial division bound.
    pub cofactor_survived: bool,
}

pub fn factor(n: &BigInt, trial_bound: u64) -> Result<Factorization, FactorError> {
    factor_detailed(n, trial_bound).map(|o| o.factorization)
}

pub fn factor_detailed(n: &BigInt, trial_bound: u64) -> Result<FactorOutcome, FactorError> {
    if trial_bound < 2 {
        return Err(FactorError::InvalidTrialBound(trial_bound));
    }
    if n.is_zero() {
        return Ok(FactorOutcome { factorization: Factorization::zero(), cofactor_survived: false });
    }
    let sign = n.sign();
    let mut m = n.magnitude().clone();
    let mut found: BTreeMap<BigUint, u32> = BTreeMap::new();

    for p in primes_up_to(trial_bound) {
        if m.is_one() {
            break;
        }
        if let Some(small) = m.to_u64() {
            if p.saturating_mul(p) > small {
                // what is left is prime
                *found.entry(m.clone()).or_default() += 1;
                m = BigUint::one();
                break;
            }
        }
        let mut e = 0;
        loop {
            let (q, r) = m.div_rem(&BigUint::from(p));
            if !r.is_zero() {
                break;
            }
            m = q;
            e += 1;
        }
        if e > 0 {
            found.insert(BigUint::from(p), e);
        }
    }

    let mut pending = if m.is_one() { Vec::new() } else { vec![m] };
    let mut unsplit = BigUint::one();
    while let Some(c) = pending.pop() {
        if is_prime_big(&c) {
            *found.entry(c).or_default() += 1;
            continue;
        }
        match rho_split(&c) {
            Some(d) => {
                let other = &c / &d;
                pending.push(d);
                pending.push(other);
            }
            None => unsplit *= c,
        }
    }
    let bound = BigUint::from(trial_bound);
    let cofactor_survived = !unsplit.is_one() || found.keys().any(|p| *p > bound);
    let factorization = Factorization { sign, factors: found.into_iter().collect() };
    if !unsplit.is_one() {
        return Err(FactorError::Unsplit {
            partial: factorization,
            cofactor: unsplit,
            budget: RHO_ITERATION_BUDGET,
        });
    }
    Ok(FactorOutcome { factorization, cofactor_survived })
}

/// A nontrivial divisor of the composite `n`, or `None` when the iteration
/// budget runs out.
fn rho_split(n: &BigUint) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    if let Some(root) = exact_sqrt(n) {
        return Some(root);
    }
    let mut budget = RHO_ITERATION_BUDGET;
    let mut c = 1u64;
    while budget > 0 {
        let found = match n.to_u128() {
            Some(small) => brent(&Mont128Ring(Mont128::new(small)), c, &mut budget),
            None => brent(&BigRing(n.clone()), c, &mut budget),
        };
        if let Some(d) = found {
            return Some(d);
        }
        c += 1;
    }
    None
}

fn exact_sqrt(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Residue ring arithmetic needed by the rho iteration.
trait RhoRing {
    type Elem: Clone + PartialEq;
    fn elem(&self, v: u64) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn step(&self, x: &Self::Elem, c: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn diff(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn gcd_with_modulus(&self, v: &Self::Elem) -> BigUint;
    fn modulus(&self) -> BigUint;
}

struct Mont128Ring(Mont128);

impl RhoRing for Mont128Ring {
    type Elem = u128;
    fn elem(&self, v: u64) -> u128 {
        self.0.to_mont(u128::from(v))
    }
    fn one(&self) -> u128 {
        self.0.one()
    }
    fn step(&self, x: &u128, c: &u128) -> u128 {
        self.0.add(self.0.mul(*x, *x), *c)
    }
    fn mul(&self, a: &u128, b: &u128) -> u128 {
        self.0.mul(*a, *b)
    }
    fn diff(&self, a: &u128, b: &u128) -> u128 {
        self.0.sub(*a, *b)
    }
    fn gcd_with_modulus(&self, v: &u128) -> BigUint {
        BigUint::from(v.gcd(&self.0.modulus()))
    }
    fn modulus(&self) -> BigUint {
        BigUint::from(self.0.modulus())
    }
}

struct BigRing(BigUint);

impl RhoRing for BigRing {
    type Elem = BigUint;
    fn elem(&self, v: u64) -> BigUint {
        BigUint::from(v) % &self.0
    }
    fn one(&self) -> BigUint {
        BigUint::one()
    }
    fn step(&self, x: &BigUint, c: &BigUint) -> BigUint {
        (x * x + c) % &self.0
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        a * b % &self.0
    }
    fn diff(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            &self.0 - (b - a)
        }
    }
    fn gcd_with_modulus(&self, v: &BigUint) -> BigUint {
        v.gcd(&self.0)
    }
    fn modulus(&self) -> BigUint {
        self.0.clone()
    }
}

/// Brent's variant of Pollard rho with batched gcds.
fn brent<R: RhoRing>(ring: &R, c: u64, budget: &mut u64) -> Option<BigUint> {
    const BATCH: u64 = 128;
    let n = ring.modulus();
    let c = ring.elem(c);
    let mut y = ring.elem(2);
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut acc = ring.one();
    let mut g = BigUint::one();
    let mut r = 1u64;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = ring.step(&y, &c);
        }
        *budget = budget.saturating_sub(r);
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            let steps = BATCH.min(r - k);
            for _ in 0..steps {
                y = ring.step(&y, &c);
                acc = ring.mul(&acc, &ring.diff(&x, &y));
            }
            *budget = budget.saturating_sub(steps);
            g = ring.gcd_with_modulus(&acc);
            k += steps;
        }
        r *= 2;
        if *budget == 0 && g.is_one() {
            return None;
        }
    }
    if g == n {
        // the batch overshot: redo it one step at a time
        loop {
            ys = ring.step(&ys, &c);
            g = ring.gcd_with_modulus(&ring.diff(&x, &ys));
            if !g.is_one() {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fac(n: i128) -> Factorization {
        factor(&BigInt::from(n), 100).unwrap()
    }

    #[test]
    fn examples() {
        let f = fac(54000);
        assert_eq!(f.to_string(), "2^4 * 3^3 * 5^3");
        assert_eq!(f.sign(), Sign::Plus);
        let z = fac(0);
        assert!(z.is_zero());
        assert!(z.factors().is_empty());
        assert_eq!(z.to_string(), "0");
        assert_eq!(fac(884736).to_string(), "2^15 * 3^3");
        assert_eq!(fac(-884736).to_string(), "-2^15 * 3^3");
        assert_eq!(fac(1).to_string(), "1");
        assert_eq!(fac(-1).to_string(), "-1");
        assert_ne!(fac(1), Factorization::zero());
        assert_eq!(factor(&BigInt::from(10), 1), Err(FactorError::InvalidTrialBound(1)));
    }

    #[test]
    fn rho_splits_beyond_trial_bound() {
        let p = 1_000_000_007u128;
        let q = 998_244_353u128;
        let out = factor_detailed(&BigInt::from(p * q * 8), 100).unwrap();
        assert!(out.cofactor_survived);
        assert_eq!(out.factorization.to_string(), "2^3 * 998244353 * 1000000007");
        let sq = factor(&BigInt::from(p * p), 10).unwrap();
        assert_eq!(sq.exponent_of(p as u64), 2);
        // 9973 is proven prime by trial division alone but still exceeds the bound
        assert!(factor_detailed(&BigInt::from(9973 * 4), 100).unwrap().cofactor_survived);
        assert!(!factor_detailed(&BigInt::from(97 * 4), 100).unwrap().cofactor_survived);
    }

    #[test]
    fn beyond_u128_cofactor() {
        let big = (BigUint::one() << 127u32) - 1u32;
        let n = BigInt::from(big.clone() * 1_000_003u32 * 1_000_033u32);
        let f = factor(&n, 100).unwrap();
        assert_eq!(f.recompose(), n);
        assert_eq!(f.factors().len(), 3);
    }

    #[test]
    fn unsplit_cofactor_is_reported() {
        // two 62-bit primes: far beyond what 2^20 rho steps can find
        let p = 4_611_686_018_427_387_847u128;
        let q = 4_611_686_018_427_387_817u128;
        assert!(super::super::is_prime_u128(p) && super::super::is_prime_u128(q));
        match factor(&BigInt::from(p * q * 12), 100) {
            Err(FactorError::Unsplit { partial, cofactor, .. }) => {
                assert_eq!(partial.to_string(), "2^2 * 3");
                assert_eq!(cofactor, BigUint::from(p * q));
            }
            other => panic!("expected an unsplit report, got {other:?}"),
        }
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "1", "-1", "2^4 * 3^3 * 5^3", "-2^15 * 3", "7"] {
            let f: Factorization = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
        }
        assert!("4^2".parse::<Factorization>().is_err());
        assert!("2 * 2".parse::<Factorization>().is_err());
        assert!("2^x".parse::<Factorization>().is_err());
        let f: Factorization = "2^4*3^3".parse().unwrap();
        assert_eq!(f.recompose(), BigInt::from(432));
    }
}
