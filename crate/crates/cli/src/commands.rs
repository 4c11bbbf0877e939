use std::collections::BTreeSet;

use cmnorm_core::analysis::{self, CheckReport, NormReport};
use cmnorm_core::arith::is_prime;
use cmnorm_core::classpoly::PolyCache;
use cmnorm_core::ffcurves::{self, CENSUS_PRIME_LIMIT};
use cmnorm_core::lauter_viray::{self, LvContext};
use cmnorm_core::quadforms::Discriminant;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::record::{OutputRecord, Status};
use crate::CliError;

/// Largest `D` accepted by `hilbert`.
pub const HILBERT_D_LIMIT: u64 = 200_000;
/// Largest `f` accepted by `table`, `claim235` and `conjecture`.
pub const F_LIMIT: u64 = 100;
/// Largest `D_max` accepted by the discriminant sweeps.
pub const SWEEP_D_LIMIT: u64 = 20_000;
/// Largest `3 p^(2n)` accepted by `lv-oracle`.
pub const LV_D_LIMIT: u64 = 20_000;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn within(name: &str, value: u64, min: u64, max: u64) -> Result<u64, CliError> {
    if value < min || value > max {
        return Err(usage(format!("{name} must lie in {min}..={max}, got {value}")));
    }
    Ok(value)
}

pub fn hilbert(d: u64, cache: &PolyCache) -> Result<OutputRecord, CliError> {
    within("D", d, 3, HILBERT_D_LIMIT)?;
    let disc = i64::try_from(d)
        .ok()
        .and_then(|d| Discriminant::new(-d).ok())
        .ok_or_else(|| usage(format!("-{d} is not a discriminant")))?;
    let poly = cache.get(&disc).map_err(CliError::failed)?;
    let coeffs: Vec<String> = poly.coefficients().iter().rev().map(ToString::to_string).collect();
    Ok(OutputRecord::new("hilbert", Status::Info, format!("Hilbert class polynomial of discriminant -{d}"))
        .input("D", d)
        .result(json!({
            "degree": poly.degree(),
            "polynomial": poly.to_string(),
            "coefficients": coeffs,
        })))
}

/// Norms `|N(j)|` for discriminants `-3 f^2`, `f = 1..=f_max`, in order.
pub fn table_rows(f_max: u64, cache: &PolyCache) -> Result<Vec<(u64, NormReport)>, CliError> {
    within("f_max", f_max, 1, F_LIMIT)?;
    (1..=f_max)
        .into_par_iter()
        .map(|f| {
            let d = Discriminant::with_conductor(-3, f).map_err(CliError::failed)?;
            let norm = analysis::norm_of_singular_modulus(&d, cache).map_err(CliError::failed)?;
            Ok((f, norm))
        })
        .collect()
}

pub fn table_record(f_max: u64, rows: &[(u64, NormReport)]) -> OutputRecord {
    let rows: Vec<Value> = rows
        .iter()
        .map(|(f, n)| json!({"f": f, "norm": n.factorization.to_string()}))
        .collect();
    OutputRecord::new("table", Status::Info, "norms of j at discriminants -3 f^2")
        .input("f_max", f_max)
        .result(json!({ "rows": rows }))
}

#[derive(Debug, Clone, Default)]
pub struct Bounds {
    pub d_max: Option<u64>,
    pub f_max: Option<u64>,
    pub primes: Option<Vec<u64>>,
    pub exponent: Option<u32>,
}

fn sweep_record(which: &str, bound_name: &str, bound: u64, provenance: &str, report: CheckReport) -> OutputRecord {
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| json!({"disc": v.disc, "message": v.message}))
        .collect();
    let status = if report.passed() { Status::Pass } else { Status::Fail };
    OutputRecord::new("check", status, provenance)
        .input("which", which)
        .input(bound_name, bound)
        .result(json!({
            "examined": report.examined,
            "violations": violations,
            "rho_fallbacks": report.rho_fallbacks,
        }))
}

pub fn check_mod3(b: &Bounds, cache: &PolyCache) -> Result<OutputRecord, CliError> {
    let d_max = within("d_max", b.d_max.unwrap_or(1000), 7, SWEEP_D_LIMIT)?;
    let report = analysis::check_mod3_obstruction(d_max, cache).map_err(CliError::failed)?;
    Ok(sweep_record(
        "mod3",
        "d_max",
        d_max,
        "no prime 1 mod 3 divides N(j) outside the orders of Q(sqrt(-3)), where it must divide the conductor",
        report,
    ))
}

pub fn check_claim235(b: &Bounds, cache: &PolyCache) -> Result<OutputRecord, CliError> {
    let f_max = within("f_max", b.f_max.unwrap_or(50), 2, F_LIMIT)?;
    let report = analysis::check_claim_235(f_max, cache).map_err(CliError::failed)?;
    Ok(sweep_record("claim235", "f_max", f_max, "2, 3 and 5 divide N(j) at discriminant -3 f^2 for f >= 2", report))
}

pub fn check_squares(b: &Bounds, cache: &PolyCache) -> Result<OutputRecord, CliError> {
    let d_max = within("d_max", b.d_max.unwrap_or(1500), 7, SWEEP_D_LIMIT)?;
    let report = analysis::check_square_divisibility(d_max, cache).map_err(CliError::failed)?;
    Ok(sweep_record(
        "squares",
        "d_max",
        d_max,
        "for fundamental discriminants, p in {2, 3, 5} dividing N(j) divides it to at least the second power",
        report,
    ))
}

pub fn check_j1728(b: &Bounds, cache: &PolyCache) -> Result<OutputRecord, CliError> {
    let d_max = within("d_max", b.d_max.unwrap_or(1000), 7, SWEEP_D_LIMIT)?;
    let report = analysis::check_j1728_obstruction(d_max, cache).map_err(CliError::failed)?;
    Ok(sweep_record(
        "j1728",
        "d_max",
        d_max,
        "no prime 1 mod 4 divides N(j - 1728) outside Q(i); inside Q(i), 2, 3 and 7 divide it",
        report,
    ))
}

fn prime_powers(max: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = (2..=max)
        .filter(|&p| is_prime(p))
        .flat_map(|p| (1..).map(move |n| (p, n)).take_while(move |&(p, n)| p.pow(n) <= max))
        .collect();
    out.sort_by_key(|&(p, n)| p.pow(n));
    out
}

pub fn check_conjecture(b: &Bounds, cache: &PolyCache) -> Result<OutputRecord, CliError> {
    let f_max = within("f_max", b.f_max.unwrap_or(50), 2, F_LIMIT)?;
    let outcomes: Vec<_> = prime_powers(f_max)
        .into_par_iter()
        .map(|(p, n)| lauter_viray::conjecture_check(p, n, cache))
        .collect::<Result<_, _>>()
        .map_err(CliError::failed)?;
    let entries: Vec<Value> = outcomes
        .iter()
        .map(|o| json!({"f": o.p.pow(o.n), "valuation": o.valuation, "expected": o.expected}))
        .collect();
    let violations: Vec<Value> = outcomes
        .iter()
        .filter(|o| !o.confirmed())
        .map(|o| json!({"disc": -3 * (o.p.pow(o.n) as i64).pow(2), "valuation": o.valuation, "expected": o.expected}))
        .collect();
    let status = if violations.is_empty() { Status::Pass } else { Status::Fail };
    Ok(OutputRecord::new(
        "check",
        status,
        "v_p(N(j)) at discriminant -3 p^(2n) is 4 for p = 2 and 1 for odd p",
    )
    .input("which", "conjecture")
    .input("f_max", f_max)
    .result(json!({"conductors": entries, "violations": violations})))
}

pub fn check_lv_oracle(b: &Bounds, cache: &PolyCache) -> Result<OutputRecord, CliError> {
    let primes = b.primes.clone().unwrap_or_else(|| vec![2, 5, 7]);
    let n = b.exponent.unwrap_or(2);
    if n == 0 || n % 2 == 1 {
        return Err(usage(format!("the exponent must be even and positive, got {n}")));
    }
    let mut contexts = Vec::new();
    for &p in &primes {
        if !is_prime(p) || p == 3 {
            return Err(usage(format!("lv-oracle needs primes other than 3, got {p}")));
        }
        let ctx = LvContext::new(p, n).map_err(|e| usage(e.to_string()))?;
        within("3 p^(2n)", ctx.d2.unsigned_abs(), 12, LV_D_LIMIT)?;
        contexts.push(ctx);
    }
    let rows: Vec<_> = contexts
        .into_par_iter()
        .map(|ctx| {
            let formula = lauter_viray::product_formula_valuation(&ctx)?;
            let direct = lauter_viray::conjecture_check(ctx.p, ctx.n, cache)?;
            Ok::<_, lauter_viray::LvError>((ctx, formula, direct))
        })
        .collect::<Result<_, _>>()
        .map_err(CliError::failed)?;
    let mut pairs = Vec::new();
    let mut violations = Vec::new();
    for (ctx, formula, direct) in rows {
        let entry = json!({
            "p": ctx.p,
            "n": ctx.n,
            "formula": formula.to_string(),
            "direct": direct.valuation,
            "expected": direct.expected,
        });
        if formula != (u64::from(direct.valuation)).into() || !direct.confirmed() {
            violations.push(entry.clone());
        }
        pairs.push(entry);
    }
    let status = if violations.is_empty() { Status::Pass } else { Status::Fail };
    Ok(OutputRecord::new(
        "check",
        status,
        "p divides N(j) exactly once (four times for p = 2) at discriminant -3 p^(2n), n even, via the product formula",
    )
    .input("which", "lv-oracle")
    .input("primes", primes)
    .input("exponent", n)
    .result(json!({"pairs": pairs, "violations": violations})))
}

/// The only supersingular `j` in small characteristic.
fn expected_census(p: u64) -> Option<u64> {
    match p {
        2 | 3 | 5 => Some(0),
        7 => Some(1728 % 7),
        _ => None,
    }
}

pub fn check_ss_census(b: &Bounds) -> Result<OutputRecord, CliError> {
    let primes = b.primes.clone().unwrap_or_else(|| vec![2, 3, 5, 7]);
    for &p in &primes {
        if !is_prime(p) || p > CENSUS_PRIME_LIMIT {
            return Err(usage(format!("census primes must be prime and at most {CENSUS_PRIME_LIMIT}, got {p}")));
        }
    }
    let mut census = serde_json::Map::new();
    let mut fields = serde_json::Map::new();
    let mut curves = serde_json::Map::new();
    let mut violations = Vec::new();
    for &p in &primes {
        let c = ffcurves::ss_census(p).map_err(CliError::failed)?;
        curves.insert(p.to_string(), json!(c.curves_examined));
        let js: Vec<String> = c.js.iter().map(ToString::to_string).collect();
        let mixed: Vec<String> = c.mixed.iter().map(ToString::to_string).collect();
        let expected = expected_census(p).map(|j| vec![j.to_string()]);
        if !mixed.is_empty() || expected.as_ref().is_some_and(|e| *e != js) {
            violations.push(json!({"p": p, "js": js, "mixed": mixed, "expected": expected}));
        }
        census.insert(p.to_string(), json!(js));
        fields.insert(p.to_string(), json!(c.field.to_string()));
    }
    let status = if violations.is_empty() { Status::Pass } else { Status::Fail };
    Ok(OutputRecord::new(
        "check",
        status,
        "supersingular j-invariants found by point counting over F_(p^2)",
    )
    .input("which", "ss-census")
    .input("primes", primes)
    .result(json!({"census": census, "fields": fields, "curves": curves, "violations": violations})))
}

pub fn parse_prime_set(s: &str) -> Result<BTreeSet<u64>, CliError> {
    let set = s
        .split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<u64>().ok().filter(|&p| is_prime(p)).ok_or_else(|| usage(format!("{t:?} is not a prime")))
        })
        .collect::<Result<BTreeSet<_>, _>>()?;
    if set.is_empty() {
        return Err(usage("the prime set is empty"));
    }
    Ok(set)
}

pub fn witness(s: &str, cache: &PolyCache) -> Result<OutputRecord, CliError> {
    let set = parse_prime_set(s)?;
    let w = analysis::find_witness(&set, cache).map_err(CliError::failed)?;
    let log: Vec<Value> = w.splitting_log.iter().map(|(p, s)| json!({"p": p, "symbol": s.as_i8()})).collect();
    let norm = &w.norm_check.norm;
    let ok = w.all_split() && w.coprime() && !w.norm_check.is_s_unit;
    let status = if ok { Status::Pass } else { Status::Fail };
    Ok(OutputRecord::new(
        "witness",
        status,
        "a discriminant -q with every prime of S split has no singular modulus that is an S-unit",
    )
    .input("S", set.iter().copied().collect::<Vec<_>>())
    .result(json!({
        "q": w.q,
        "scan": format!("q = {} mod {}", w.residue, w.modulus),
        "splitting": log,
        "norm": norm.factorization.to_string(),
        "method": format!("{:?}", norm.method),
        "coprime": w.coprime(),
        "s_unit": w.norm_check.is_s_unit,
    })))
}
