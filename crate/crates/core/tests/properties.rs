use std::collections::BTreeSet;
use std::sync::OnceLock;

use cmnorm_core::analysis::{self, find_witness, gcd_with_product};
use cmnorm_core::arith::{factor, is_prime_big, kronecker, primes_up_to, FactorError, Factorization, SymbolValue};
use cmnorm_core::classpoly::PolyCache;
use cmnorm_core::ffcurves::ss_census;
use cmnorm_core::quadforms::{class_number, Discriminant};
use num_bigint::{BigInt, BigUint, Sign};
use num_traits::One;
use proptest::prelude::*;
use proptest::sample::subsequence;

const GOLDEN: &str = include_str!("data/table1.txt");

fn cache() -> &'static PolyCache {
    static CACHE: OnceLock<PolyCache> = OnceLock::new();
    CACHE.get_or_init(PolyCache::in_memory)
}

fn signed(sign: Sign, n: BigUint) -> BigInt {
    BigInt::from_biguint(if n == BigUint::from(0u8) { Sign::NoSign } else { sign }, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    /// Random integers of random bit length up to 128 either factor into
    /// primes that recompose to `n`, or report a composite cofactor that
    /// rho could not split within its budget.
    #[test]
    fn factorization_recomposes(bits in 1u32..=128, raw in any::<u128>(), negative in any::<bool>()) {
        let n = BigUint::from(raw >> (128 - bits));
        let n = signed(if negative { Sign::Minus } else { Sign::Plus }, n);
        match factor(&n, 1_000) {
            Ok(fac) => {
                prop_assert_eq!(fac.recompose(), n.clone());
                prop_assert!(fac.factors().iter().all(|(p, _)| is_prime_big(p)));
            }
            Err(FactorError::Unsplit { partial, cofactor, .. }) => {
                prop_assert!(!is_prime_big(&cofactor));
                prop_assert!(cofactor > BigUint::from(1_000_000u32));
                prop_assert_eq!(partial.abs().recompose() * BigInt::from(cofactor), n.magnitude().clone().into());
            }
            Err(e) => prop_assert!(false, "{}", e),
        }
    }
}

#[test]
fn table_values_refactor_to_themselves() {
    for line in GOLDEN.lines() {
        let (f, row) = line.split_once(": ").unwrap();
        let parsed: Factorization = row.parse().unwrap();
        let again = factor(&parsed.recompose(), 1_000).unwrap();
        assert_eq!(again, parsed, "f = {f}");
        assert_eq!(again.to_string(), row);
    }
}

#[test]
fn eisenstein_degrees_are_class_numbers() {
    for f in 1..=50 {
        let d = Discriminant::with_conductor(-3, f).unwrap();
        assert_eq!(cache().get(&d).unwrap().degree(), class_number(&d), "f = {f}");
    }
}

/// Every CM curve of discriminant `-3 f^2` reduces to the unique
/// supersingular `j = 0` at 2, 3 and 5, so these primes divide `N(j)`.
#[test]
fn census_explains_small_prime_divisibility() {
    for p in [2u64, 3, 5] {
        let census = ss_census(p).unwrap();
        let js: Vec<_> = census.js.iter().map(|j| j.as_prime_field()).collect();
        assert_eq!(js, [Some(0)]);
        for f in 2..=20 {
            let d = Discriminant::with_conductor(-3, f).unwrap();
            let norm = analysis::norm_of_singular_modulus(&d, cache()).unwrap();
            assert!(norm.factorization.divisible_by(p), "{p} does not divide the norm at f = {f}");
        }
    }
}

#[test]
fn deuring_and_non_unit_sweeps() {
    let deuring = analysis::check_deuring(2000, cache()).unwrap();
    assert!(deuring.passed(), "{:?}", deuring.violations);
    let units = analysis::check_non_units(2000, cache()).unwrap();
    assert!(units.passed(), "{:?}", units.violations);
    // -3 is skipped: its norm is zero
    assert_eq!(units.examined + 1, deuring.examined);
}

fn small_primes() -> Vec<u64> {
    primes_up_to(100)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn witnesses_for_random_prime_sets(s in subsequence(small_primes(), 1..=4)) {
        let set: BTreeSet<u64> = s.into_iter().collect();
        let w = find_witness(&set, cache()).unwrap();
        let q = w.q as i64;
        prop_assert!(cmnorm_core::arith::is_prime(w.q));
        prop_assert_eq!(q.rem_euclid(8), 7);
        for &p in &set {
            prop_assert_eq!(kronecker(-q, p), SymbolValue::One);
            if p != 2 {
                prop_assert_eq!(w.q % p, p - 1);
            }
        }
        prop_assert!(w.all_split() && w.coprime());
        prop_assert!(!w.norm_check.is_s_unit);
        prop_assert!(gcd_with_product(&w.norm_check.norm, &set).is_one());
    }
}
