//! Exact integer arithmetic: residue symbols, primality, factorization,
//! valuations and the Chinese remainder theorem.

mod factor;
mod montgomery;
mod prime;
mod symbol;

pub use factor::{factor, factor_detailed, FactorError, FactorOutcome, Factorization, RHO_ITERATION_BUDGET};
pub use prime::{is_prime, is_prime_big, is_prime_u128, primes_up_to, DETERMINISTIC_MR_LIMIT};
pub use symbol::{hilbert_symbol_odd, jacobi, kronecker, SymbolValue};

use num_integer::Integer;
use num_traits::Signed;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("valuation of zero is undefined")]
    ZeroValuation,
    #[error("{0} is not a valid prime base")]
    InvalidBase(String),
    #[error("the Hilbert symbol is only implemented at odd primes, got p = {0}")]
    DyadicHilbertSymbol(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("Hilbert symbol arguments must be nonzero")]
    ZeroSymbolArgument,
    #[error("moduli must be positive, got {0}")]
    NonPositiveModulus(String),
    #[error("moduli {0} and {1} are not coprime")]
    NonCoprimeModuli(String, String),
}

/// Largest `e` with `p^e | n`.
pub fn valuation<T>(n: &T, p: &T) -> Result<u32, ArithError>
where
    T: Integer + Clone + std::fmt::Display,
{
    if n.is_zero() {
        return Err(ArithError::ZeroValuation);
    }
    if *p <= T::one() {
        return Err(ArithError::InvalidBase(p.to_string()));
    }
    let mut e = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return Ok(e);
        }
        m = q;
        e += 1;
    }
}

/// Solves a system of congruences `x = r_i (mod m_i)` with pairwise coprime
/// moduli. Returns `(x, M)` with `0 <= x < M = prod m_i`.
pub fn crt_solve<T>(congruences: &[(T, T)]) -> Result<(T, T), ArithError>
where
    T: Integer + Clone + Signed + std::fmt::Display,
{
    let mut acc = (T::zero(), T::one());
    for (residue, modulus) in congruences {
        if !modulus.is_positive() {
            return Err(ArithError::NonPositiveModulus(modulus.to_string()));
        }
        let (r1, m1) = acc;
        let egcd = m1.extended_gcd(modulus);
        if !egcd.gcd.is_one() {
            return Err(ArithError::NonCoprimeModuli(m1.to_string(), modulus.to_string()));
        }
        let m = m1.clone() * modulus.clone();
        // m1 * s = 1 (mod m2), so r1 + m1 * s * (r2 - r1) hits both residues
        let delta = (residue.clone() - r1.clone()).mod_floor(modulus);
        let s = egcd.x.mod_floor(modulus);
        let x = (r1 + m1 * ((s * delta).mod_floor(modulus))).mod_floor(&m);
        acc = (x, m);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&54000i64, &2), Ok(4));
        assert_eq!(valuation(&7i64, &2), Ok(0));
        assert_eq!(valuation(&884736i64, &3), Ok(3));
        assert_eq!(valuation(&-884736i64, &2), Ok(15));
        assert_eq!(valuation(&0i64, &2), Err(ArithError::ZeroValuation));
        assert!(valuation(&5i64, &1).is_err());
        let big = BigInt::from(2).pow(810) * BigInt::from(3);
        assert_eq!(valuation(&big, &BigInt::from(2)), Ok(810));
    }

    fn scan(congruences: &[(i64, i64)]) -> i64 {
        let m: i64 = congruences.iter().map(|c| c.1).product();
        (0..m)
            .find(|x| congruences.iter().all(|(r, md)| (x - r).rem_euclid(*md) == 0))
            .unwrap()
    }

    #[test]
    fn crt_examples() {
        let sys = [(-1i64, 3i64), (-1, 8)];
        assert_eq!(scan(&sys), 23);
        assert_eq!(crt_solve(&sys), Ok((23, 24)));
        assert_eq!(crt_solve(&[(0i64, 5i64)]), Ok((0, 5)));
        let sys = [(-1i64, 3i64), (-1, 5), (-1, 8)];
        assert_eq!(scan(&sys), 119);
        assert_eq!(crt_solve(&sys), Ok((119, 120)));
        assert!(matches!(
            crt_solve(&[(1i64, 4i64), (3, 6)]),
            Err(ArithError::NonCoprimeModuli(..))
        ));
        assert!(crt_solve(&[(1i64, 0i64)]).is_err());
        assert_eq!(crt_solve::<i64>(&[]), Ok((0, 1)));
    }

    proptest! {
        #[test]
        fn valuation_is_additive(m in 1i64..100_000, n in 1i64..100_000, pi in 0usize..6) {
            let p = [2i64, 3, 5, 7, 11, 13][pi];
            let (m, n) = (m as i128, n as i128);
            let p = p as i128;
            prop_assert_eq!(
                valuation(&(m * n), &p).unwrap(),
                valuation(&m, &p).unwrap() + valuation(&n, &p).unwrap()
            );
        }

        #[test]
        fn crt_matches_scan(r1 in -50i64..50, r2 in -50i64..50, r3 in -50i64..50) {
            let sys = [(r1, 7i64), (r2, 9), (r3, 16)];
            let (x, m) = crt_solve(&sys).unwrap();
            prop_assert_eq!(m, 1008);
            prop_assert_eq!(x, scan(&sys));
        }
    }
}
