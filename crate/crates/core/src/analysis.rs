//! Norms of singular moduli and of `j - 1728`, their factorizations, and
//! finite-range checks of the divisibility properties these norms obey.

use std::collections::BTreeSet;
use std::fmt;

use log::{info, warn};
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{
    crt_solve, factor_detailed, is_prime, kronecker, valuation, ArithError, FactorError, Factorization,
    SymbolValue,
};
use crate::classpoly::{ClassPolyError, PolyCache};
use crate::quadforms::{splitting, Discriminant, QuadError, Splitting};

/// Largest `|D|` for which [`find_witness`] factors the norm through the
/// class polynomial; beyond it the Gross-Zagier formula is used.
pub const WITNESS_CLASS_POLY_LIMIT: u64 = 5_000;

/// The witness scan gives up past this prime.
pub const WITNESS_SEARCH_LIMIT: u64 = 1 << 40;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("{name} must be at least {min}, got {got}")]
    Bound { name: &'static str, min: u64, got: u64 },
    #[error("j - 1728 vanishes for discriminant {0}")]
    Degenerate(i64),
    #[error("the norm is zero")]
    ZeroNorm,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("the prime set is empty")]
    EmptySet,
    #[error("no witness prime below {0}")]
    SearchExhausted(u64),
    #[error("the Gross-Zagier formula needs a fundamental discriminant prime to 3, got {0}")]
    GrossZagierDomain(i64),
    #[error("Gross-Zagier exponent of {prime} for {disc} is not a nonnegative integer")]
    GrossZagierExponent { disc: i64, prime: u64 },
    #[error(transparent)]
    ClassPoly(#[from] ClassPolyError),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormTarget {
    /// `|H_D(0)|`
    J,
    /// `|H_D(1728)|`
    JMinus1728,
}

impl fmt::Display for NormTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormTarget::J => "j",
            NormTarget::JMinus1728 => "j-1728",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMethod {
    ClassPolynomial,
    GrossZagier,
}

/// A factored absolute norm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormReport {
    pub disc: Discriminant,
    pub target: NormTarget,
    pub factorization: Factorization,
    pub trial_bound: u64,
    /// A prime factor exceeded the trial bound and rho had to finish the job.
    pub rho_fallback: bool,
    pub method: NormMethod,
}

impl NormReport {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factorization.primes().map(|p| p.to_u64().expect("norm primes fit in u64"))
    }
}

fn factored_norm(
    disc: Discriminant,
    target: NormTarget,
    value: BigInt,
    trial_bound: u64,
) -> Result<NormReport, AnalysisError> {
    let out = factor_detailed(&value.magnitude().clone().into(), trial_bound)?;
    if out.cofactor_survived {
        warn!("{target} norm for {disc}: a prime factor exceeds the trial bound {trial_bound}");
    }
    Ok(NormReport {
        disc,
        target,
        factorization: out.factorization,
        trial_bound,
        rho_fallback: out.cofactor_survived,
        method: NormMethod::ClassPolynomial,
    })
}

/// `|H_D(0)|`, factored with trial division up to `max(3|D|/4, 100)`.
pub fn norm_of_singular_modulus(d: &Discriminant, cache: &PolyCache) -> Result<NormReport, AnalysisError> {
    let value = cache.get(d)?.eval_at_integer(&BigInt::zero());
    factored_norm(*d, NormTarget::J, value, (3 * d.abs() / 4).max(100))
}

/// `|H_D(1728)|`, factored with trial division up to `max(|D|, 100)`.
pub fn norm_of_j_minus_1728(d: &Discriminant, cache: &PolyCache) -> Result<NormReport, AnalysisError> {
    if d.value() == -4 {
        return Err(AnalysisError::Degenerate(-4));
    }
    let value = cache.get(d)?.eval_at_integer(&BigInt::from(1728));
    factored_norm(*d, NormTarget::JMinus1728, value, d.abs().max(100))
}

fn eps_geometric(e: i64, a: u32) -> i64 {
    (0..=a).map(|i| e.pow(i)).sum()
}

/// `sum_{b=0}^{a} b e^(a-b)`
fn eps_weighted(e: i64, a: u32) -> i64 {
    (0..=a).map(|b| i64::from(b) * e.pow(a - b)).sum()
}

fn small_factor(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut l = 2;
    while l * l <= m {
        let mut e = 0;
        while m.is_multiple_of(l) {
            m /= l;
            e += 1;
        }
        if e > 0 {
            out.push((l, e));
        }
        l += if l == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// `|H_D(0)|` from the Gross-Zagier formula for the coprime fundamental
/// discriminants `-3` and `D`:
///
/// ```text
/// |N(j)|^(8 / (w1 w2)) = prod_x F((3|D| - x^2) / 4),  F(m) = prod_{n n' = m} n^eps(n')
/// ```
pub fn gross_zagier_norm(d: &Discriminant) -> Result<NormReport, AnalysisError> {
    let dv = d.value();
    if !d.is_fundamental() || dv % 3 == 0 {
        return Err(AnalysisError::GrossZagierDomain(dv));
    }
    let w2: u64 = if dv == -4 { 4 } else { 2 };
    let big = 3 * d.abs();
    let eps = |l: u64| -> i64 {
        let sym = if l == 3 { kronecker(dv, l) } else { kronecker(-3, l) };
        i64::from(sym.as_i8())
    };
    // 8/(w1 w2) with w1 = 6; accumulate sum_x v_l(F(m)) per prime
    let mut totals = std::collections::BTreeMap::<u64, i64>::new();
    let mut x = (big % 2) as i64;
    while (x * x) < big as i64 {
        let m = (big - (x * x) as u64) / 4;
        let mult = if x == 0 { 1 } else { 2 };
        let fac = small_factor(m);
        for (i, &(l, a)) in fac.iter().enumerate() {
            let rest: i64 = fac
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i)
                .map(|(_, &(l2, a2))| eps_geometric(eps(l2), a2))
                .product();
            let v = eps_weighted(eps(l), a) * rest;
            if v != 0 {
                *totals.entry(l).or_default() += mult * v;
            }
        }
        x += 2;
    }
    let scale = 6 * w2;
    let mut powers = Vec::new();
    for (l, t) in totals {
        let num = t * scale as i64;
        if num % 8 != 0 || num < 0 {
            return Err(AnalysisError::GrossZagierExponent { disc: dv, prime: l });
        }
        if num > 0 {
            powers.push((BigUint::from(l), (num / 8) as u32));
        }
    }
    let factorization = Factorization::from_prime_powers(Sign::Plus, powers)?;
    Ok(NormReport {
        disc: *d,
        target: NormTarget::J,
        factorization,
        trial_bound: 0,
        rho_fallback: false,
        method: NormMethod::GrossZagier,
    })
}

/// The outcome of testing whether a norm is an S-unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SUnitReport {
    pub norm: NormReport,
    pub s_set: BTreeSet<u64>,
    pub is_s_unit: bool,
    pub offenders: BTreeSet<u64>,
}

pub fn s_unit_test(norm: &NormReport, s_set: &BTreeSet<u64>) -> Result<SUnitReport, AnalysisError> {
    if norm.factorization.is_zero() {
        return Err(AnalysisError::ZeroNorm);
    }
    let offenders: BTreeSet<u64> = norm.primes().filter(|p| !s_set.contains(p)).collect();
    Ok(SUnitReport {
        norm: norm.clone(),
        s_set: s_set.clone(),
        is_s_unit: offenders.is_empty(),
        offenders,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub disc: i64,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.disc, self.message)
    }
}

/// The result of a finite-range check, violations sorted by `|D|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub check: &'static str,
    pub examined: usize,
    pub violations: Vec<Violation>,
    /// Discriminants whose norms needed rho beyond the trial bound.
    pub rho_fallbacks: Vec<i64>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Every discriminant `-D` with `min <= D <= max`.
pub fn discriminants_in(min: u64, max: u64) -> Vec<Discriminant> {
    (min.max(3)..=max).filter_map(|d| Discriminant::from_abs(d).ok()).collect()
}

pub fn fundamental_discriminants_in(min: u64, max: u64) -> Vec<Discriminant> {
    discriminants_in(min, max).into_iter().filter(|d| d.is_fundamental()).collect()
}

fn require(name: &'static str, min: u64, got: u64) -> Result<(), AnalysisError> {
    if got < min {
        return Err(AnalysisError::Bound { name, min, got });
    }
    Ok(())
}

/// Runs `per_disc` over `discs` in parallel and merges in input order.
fn sweep<F>(check: &'static str, discs: &[Discriminant], per_disc: F) -> Result<CheckReport, AnalysisError>
where
    F: Fn(&Discriminant) -> Result<(Vec<String>, bool), AnalysisError> + Sync,
{
    let results: Vec<_> = discs.par_iter().map(|d| per_disc(d).map(|r| (*d, r))).collect();
    let mut report = CheckReport { check, examined: discs.len(), violations: Vec::new(), rho_fallbacks: Vec::new() };
    for r in results {
        let (d, (messages, fallback)) = r?;
        if fallback {
            report.rho_fallbacks.push(d.value());
        }
        report
            .violations
            .extend(messages.into_iter().map(|message| Violation { disc: d.value(), message }));
    }
    info!("{check}: {} discriminants, {} violations", report.examined, report.violations.len());
    Ok(report)
}

/// No prime `p = 1 mod 3` divides the norm, unless the order lies in
/// `Q(sqrt(-3))` and `p` divides its conductor.
pub fn check_mod3_obstruction(d_max: u64, cache: &PolyCache) -> Result<CheckReport, AnalysisError> {
    require("D_max", 7, d_max)?;
    sweep("mod3", &discriminants_in(3, d_max), |d| {
        let norm = norm_of_singular_modulus(d, cache)?;
        Ok((mod3_violations(&norm), norm.rho_fallback))
    })
}

pub fn mod3_violations(norm: &NormReport) -> Vec<String> {
    let d = norm.disc;
    norm.primes()
        .filter(|p| p % 3 == 1)
        .filter(|p| d.fundamental() != -3 || !d.conductor().is_multiple_of(*p))
        .map(|p| format!("{p} = 1 mod 3 divides the norm (conductor {})", d.conductor()))
        .collect()
}

/// 2, 3 and 5 divide the norm for discriminants `-3 f^2`, `2 <= f <= f_max`.
pub fn check_claim_235(f_max: u64, cache: &PolyCache) -> Result<CheckReport, AnalysisError> {
    require("f_max", 2, f_max)?;
    let discs: Vec<_> = (2..=f_max)
        .map(|f| Discriminant::with_conductor(-3, f))
        .collect::<Result<_, _>>()?;
    sweep("claim235", &discs, |d| {
        let norm = norm_of_singular_modulus(d, cache)?;
        let missing = [2, 3, 5]
            .into_iter()
            .filter(|&p| !norm.factorization.divisible_by(p))
            .map(|p| format!("{p} does not divide the norm {}", norm.factorization))
            .collect();
        Ok((missing, norm.rho_fallback))
    })
}

/// For fundamental `-D` and `p` in {2, 3, 5}: `p | N` implies `p^2 | N`.
pub fn check_square_divisibility(d_max: u64, cache: &PolyCache) -> Result<CheckReport, AnalysisError> {
    require("D_max", 7, d_max)?;
    let discs: Vec<_> = fundamental_discriminants_in(4, d_max);
    sweep("squares", &discs, |d| {
        let norm = norm_of_singular_modulus(d, cache)?;
        let bad = [2u64, 3, 5]
            .into_iter()
            .filter(|&p| norm.factorization.exponent_of(p) == 1)
            .map(|p| format!("{p} divides the norm exactly once"))
            .collect();
        Ok((bad, norm.rho_fallback))
    })
}

/// No prime `p = 1 mod 4` divides `N(j - 1728)` outside `Q(i)`; inside it
/// 2, 3 and 7 all divide.
pub fn check_j1728_obstruction(d_max: u64, cache: &PolyCache) -> Result<CheckReport, AnalysisError> {
    require("D_max", 7, d_max)?;
    let discs: Vec<_> = discriminants_in(3, d_max).into_iter().filter(|d| d.value() != -4).collect();
    sweep("j1728", &discs, |d| {
        let norm = norm_of_j_minus_1728(d, cache)?;
        let bad = if d.fundamental() == -4 {
            [2, 3, 7]
                .into_iter()
                .filter(|&p| !norm.factorization.divisible_by(p))
                .map(|p| format!("{p} does not divide N(j - 1728) = {}", norm.factorization))
                .collect()
        } else {
            norm.primes()
                .filter(|p| p % 4 == 1)
                .map(|p| format!("{p} = 1 mod 4 divides N(j - 1728)"))
                .collect()
        };
        Ok((bad, norm.rho_fallback))
    })
}

/// Primes of a norm away from the conductor never split where reduction
/// would make the curve ordinary.
pub fn deuring_violations(norm: &NormReport) -> Result<Vec<String>, AnalysisError> {
    let d = norm.disc;
    let mut out = Vec::new();
    for p in norm.primes() {
        if d.conductor().is_multiple_of(p) {
            continue;
        }
        let mut fields = match norm.target {
            NormTarget::J => vec![d.fundamental(), -3],
            NormTarget::JMinus1728 if p != 2 => vec![-4],
            NormTarget::JMinus1728 => vec![],
        };
        fields.dedup();
        for k in fields {
            if splitting(p, k)? == Splitting::Split {
                out.push(format!("{p} divides N({}) but splits in discriminant {k}", norm.target));
            }
        }
    }
    Ok(out)
}

pub fn check_deuring(d_max: u64, cache: &PolyCache) -> Result<CheckReport, AnalysisError> {
    require("D_max", 7, d_max)?;
    sweep("deuring", &discriminants_in(3, d_max), |d| {
        let mut out = Vec::new();
        let mut fallback = false;
        if d.value() != -3 {
            let n = norm_of_singular_modulus(d, cache)?;
            out.extend(deuring_violations(&n)?);
            fallback |= n.rho_fallback;
        }
        if d.value() != -4 {
            let n = norm_of_j_minus_1728(d, cache)?;
            out.extend(deuring_violations(&n)?);
            fallback |= n.rho_fallback;
        }
        Ok((out, fallback))
    })
}

/// No singular modulus other than 0 is a unit: every norm with `D != 3`
/// has a prime factor.
pub fn check_non_units(d_max: u64, cache: &PolyCache) -> Result<CheckReport, AnalysisError> {
    require("D_max", 4, d_max)?;
    sweep("non-units", &discriminants_in(4, d_max), |d| {
        let norm = norm_of_singular_modulus(d, cache)?;
        let report = s_unit_test(&norm, &BTreeSet::new())?;
        let bad = if report.is_s_unit { vec!["the norm is a unit".to_string()] } else { Vec::new() };
        Ok((bad, norm.rho_fallback))
    })
}

/// A discriminant `-q` none of whose singular moduli is an S-unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessResult {
    pub s_set: BTreeSet<u64>,
    pub q: u64,
    /// The scan ran over `q = residue mod modulus`.
    pub residue: u64,
    pub modulus: u64,
    pub splitting_log: Vec<(u64, SymbolValue)>,
    pub norm_check: SUnitReport,
}

impl WitnessResult {
    pub fn all_split(&self) -> bool {
        self.splitting_log.iter().all(|(_, s)| *s == SymbolValue::One)
    }

    /// The norm shares no prime with `S`.
    pub fn coprime(&self) -> bool {
        self.norm_check.norm.primes().all(|p| !self.s_set.contains(&p))
    }
}

/// The least prime `q = -1 mod 8` and `q = -1 mod p` for every odd `p` in
/// `S`, with the evidence that the singular moduli of discriminant `-q`
/// are not S-units.
pub fn find_witness(s_set: &BTreeSet<u64>, cache: &PolyCache) -> Result<WitnessResult, AnalysisError> {
    if s_set.is_empty() {
        return Err(AnalysisError::EmptySet);
    }
    if let Some(&p) = s_set.iter().find(|&&p| !is_prime(p)) {
        return Err(AnalysisError::NotPrime(p));
    }
    let mut congruences = vec![(-1i128, 8i128)];
    congruences.extend(s_set.iter().filter(|&&p| p != 2).map(|&p| (-1i128, i128::from(p))));
    let (residue, modulus) = crt_solve(&congruences)?;
    let (residue, modulus) = (residue as u64, modulus as u64);
    let mut q = residue;
    let mut scanned = 0u64;
    while !is_prime(q) {
        q = q.checked_add(modulus).filter(|&q| q <= WITNESS_SEARCH_LIMIT)
            .ok_or(AnalysisError::SearchExhausted(WITNESS_SEARCH_LIMIT))?;
        scanned += 1;
        if scanned.is_multiple_of(100_000) {
            info!("witness scan for {s_set:?}: {scanned} candidates, now at {q}");
        }
    }
    let qi = i64::try_from(q).map_err(|_| AnalysisError::SearchExhausted(q))?;
    let splitting_log = s_set.iter().map(|&p| (p, kronecker(-qi, p))).collect();
    let d = Discriminant::new(-qi)?;
    let norm = if q <= WITNESS_CLASS_POLY_LIMIT {
        norm_of_singular_modulus(&d, cache)?
    } else {
        gross_zagier_norm(&d)?
    };
    let norm_check = s_unit_test(&norm, s_set)?;
    Ok(WitnessResult { s_set: s_set.clone(), q, residue, modulus, splitting_log, norm_check })
}

/// `v_p` of a nonzero norm.
pub fn norm_valuation(norm: &NormReport, p: u64) -> Result<u32, AnalysisError> {
    if norm.factorization.is_zero() {
        return Err(AnalysisError::ZeroNorm);
    }
    Ok(valuation(&norm.factorization.recompose(), &BigInt::from(p))?)
}

/// `gcd` of a norm with a product of primes, as a quick coprimality probe.
pub fn gcd_with_product(norm: &NormReport, primes: &BTreeSet<u64>) -> BigInt {
    let prod: BigInt = primes.iter().map(|&p| BigInt::from(p)).product();
    norm.factorization.recompose().gcd(&prod)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc(v: i64) -> Discriminant {
        Discriminant::new(v).unwrap()
    }

    #[test]
    fn norm_examples() {
        let cache = PolyCache::in_memory();
        let n = norm_of_singular_modulus(&disc(-12), &cache).unwrap();
        assert_eq!(n.factorization.to_string(), "2^4 * 3^3 * 5^3");
        assert!(norm_of_singular_modulus(&disc(-3), &cache).unwrap().factorization.is_zero());
        let n = norm_of_singular_modulus(&disc(-300), &cache).unwrap();
        assert_eq!(n.factorization.to_string(), "2^24 * 3^30 * 5^3 * 11^6 * 17^6 * 23^6 * 29^3");
        assert!(!n.rho_fallback);

        let n = norm_of_j_minus_1728(&disc(-3), &cache).unwrap();
        assert_eq!(n.factorization.to_string(), "2^6 * 3^3");
        let n = norm_of_j_minus_1728(&disc(-16), &cache).unwrap();
        assert!([2, 3, 7].iter().all(|&p| n.factorization.divisible_by(p)));
        let n = norm_of_j_minus_1728(&disc(-7), &cache).unwrap();
        assert!(n.primes().all(|p| p % 4 != 1));
        assert_eq!(norm_of_j_minus_1728(&disc(-4), &cache), Err(AnalysisError::Degenerate(-4)));
    }

    #[test]
    fn s_unit_examples() {
        let cache = PolyCache::in_memory();
        let n = norm_of_singular_modulus(&disc(-12), &cache).unwrap();
        let r = s_unit_test(&n, &BTreeSet::from([2, 3, 5])).unwrap();
        assert!(r.is_s_unit && r.offenders.is_empty());
        let r = s_unit_test(&n, &BTreeSet::from([2, 3])).unwrap();
        assert_eq!(r.offenders, BTreeSet::from([5]));
        let zero = norm_of_singular_modulus(&disc(-3), &cache).unwrap();
        assert_eq!(s_unit_test(&zero, &BTreeSet::new()), Err(AnalysisError::ZeroNorm));
        let n = norm_of_singular_modulus(&disc(-3 * 21 * 21), &cache).unwrap();
        let split_primes: BTreeSet<u64> =
            crate::arith::primes_up_to(1_000_000).into_iter().filter(|p| p % 3 == 1).collect();
        let r = s_unit_test(&n, &split_primes).unwrap();
        assert!(BTreeSet::from([2, 3, 5, 17]).is_subset(&r.offenders));
    }

    #[test]
    fn small_checks_pass() {
        let cache = PolyCache::in_memory();
        let r = check_mod3_obstruction(48, &cache).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
        assert_eq!(r.examined, 24);
        let n = norm_of_singular_modulus(&disc(-147), &cache).unwrap();
        assert!(n.factorization.divisible_by(7) && mod3_violations(&n).is_empty());
        let n = norm_of_singular_modulus(&disc(-20), &cache).unwrap();
        assert!(n.primes().all(|p| p % 3 != 1));
        assert!(check_claim_235(7, &cache).unwrap().passed());
        let n = norm_of_singular_modulus(&disc(-147), &cache).unwrap();
        assert_eq!([2, 3, 5].map(|p| n.factorization.exponent_of(p)), [30, 9, 6]);
        assert!(check_square_divisibility(100, &cache).unwrap().passed());
        assert!(check_j1728_obstruction(100, &cache).unwrap().passed());
        assert!(check_deuring(100, &cache).unwrap().passed());
        assert!(check_non_units(100, &cache).unwrap().passed());
        assert!(check_mod3_obstruction(6, &cache).is_err());
        assert!(check_claim_235(1, &cache).is_err());
    }

    #[test]
    fn square_examples() {
        let cache = PolyCache::in_memory();
        for v in [-15, -4, -23] {
            let n = norm_of_singular_modulus(&disc(v), &cache).unwrap();
            for p in [2, 3, 5] {
                assert_ne!(n.factorization.exponent_of(p), 1, "{v} {p}");
            }
        }
        let n = norm_of_singular_modulus(&disc(-4), &cache).unwrap();
        assert_eq!(n.factorization.to_string(), "2^6 * 3^3");
    }

    #[test]
    fn detects_planted_violations() {
        let cache = PolyCache::in_memory();
        let mut n = norm_of_singular_modulus(&disc(-20), &cache).unwrap();
        n.factorization = "2^6 * 7".parse().unwrap();
        assert_eq!(mod3_violations(&n).len(), 1);
        // 13 splits in Q(sqrt(-3))
        n.factorization = "13".parse().unwrap();
        assert!(!deuring_violations(&n).unwrap().is_empty());
    }

    #[test]
    fn gross_zagier_matches_class_polynomials() {
        let cache = PolyCache::in_memory();
        for d in fundamental_discriminants_in(4, 600) {
            if d.value() % 3 == 0 {
                continue;
            }
            let direct = norm_of_singular_modulus(&d, &cache).unwrap();
            let gz = gross_zagier_norm(&d).unwrap();
            assert_eq!(direct.factorization, gz.factorization, "{d}");
        }
        assert!(gross_zagier_norm(&disc(-15)).is_err());
        assert!(gross_zagier_norm(&disc(-16)).is_err());
    }

    #[test]
    fn witness_examples() {
        let cache = PolyCache::in_memory();
        for (s, q) in [(vec![2], 7), (vec![2, 3], 23), (vec![2, 3, 5], 239), (vec![3], 23)] {
            let s: BTreeSet<u64> = s.into_iter().collect();
            let w = find_witness(&s, &cache).unwrap();
            assert_eq!(w.q, q);
            assert!(w.all_split() && w.coprime());
            assert!(!w.norm_check.is_s_unit);
            assert_eq!(gcd_with_product(&w.norm_check.norm, &s), BigInt::from(1));
        }
        assert_eq!(find_witness(&BTreeSet::new(), &cache), Err(AnalysisError::EmptySet));
        assert_eq!(find_witness(&BTreeSet::from([4]), &cache), Err(AnalysisError::NotPrime(4)));
    }
}
