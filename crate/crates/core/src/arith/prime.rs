//! Miller–Rabin primality.
//!
//! The first thirteen primes as witnesses decide primality exactly below
//! [`DETERMINISTIC_MR_LIMIT`] (about 3.3e24). Above that bound 64 further
//! pseudo-random witnesses are drawn, for an error probability below 2^-128.

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::montgomery::Mont128;

/// Below this bound the fixed witness set is a proof of primality.
pub const DETERMINISTIC_MR_LIMIT: u128 = 3_317_044_064_679_887_385_961_981;

const WITNESSES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
const EXTRA_ROUNDS: usize = 64;

/// Sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    is_prime_u128(u128::from(n))
}

fn small_case(n: u128) -> Option<bool> {
    if n < 2 {
        return Some(false);
    }
    for &p in &WITNESSES {
        let p = u128::from(p);
        if n == p {
            return Some(true);
        }
        if n.is_multiple_of(p) {
            return Some(false);
        }
    }
    if n < 43 * 43 {
        return Some(true);
    }
    None
}

pub fn is_prime_u128(n: u128) -> bool {
    if let Some(answer) = small_case(n) {
        return answer;
    }
    let ctx = Mont128::new(n);
    let d = n - 1;
    let s = d.trailing_zeros();
    let odd = d >> s;
    let one = ctx.one();
    let minus_one = ctx.sub(0, one);
    let strong_probable_prime = |a: u128| {
        let mut x = ctx.pow(ctx.to_mont(a), odd);
        if x == one || x == minus_one {
            return true;
        }
        for _ in 1..s {
            x = ctx.mul(x, x);
            if x == minus_one {
                return true;
            }
            if x == one {
                return false;
            }
        }
        false
    };
    if !WITNESSES.iter().all(|&a| strong_probable_prime(u128::from(a))) {
        return false;
    }
    if n < DETERMINISTIC_MR_LIMIT {
        return true;
    }
    let mut rng = ChaCha8Rng::seed_from_u64((n as u64) ^ ((n >> 64) as u64));
    (0..EXTRA_ROUNDS).all(|_| strong_probable_prime(rng.gen_range(2..n - 1)))
}

pub fn is_prime_big(n: &BigUint) -> bool {
    if let Some(small) = n.to_u128() {
        return is_prime_u128(small);
    }
    if n.is_even() {
        return false;
    }
    for &p in &WITNESSES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let minus_one = n - 1u32;
    let s = minus_one.trailing_zeros().unwrap_or(0);
    let odd = &minus_one >> s;
    let strong_probable_prime = |a: &BigUint| {
        let mut x = a.modpow(&odd, n);
        if x == one || x == minus_one {
            return true;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == minus_one {
                return true;
            }
            if x == one {
                return false;
            }
        }
        false
    };
    if !WITNESSES.iter().all(|&a| strong_probable_prime(&BigUint::from(a))) {
        return false;
    }
    let seed = n.iter_u64_digits().fold(0u64, |acc, d| acc.rotate_left(7) ^ d);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let two = BigUint::from(2u32);
    (0..EXTRA_ROUNDS).all(|_| strong_probable_prime(&rng.gen_biguint_range(&two, &minus_one)))
}
