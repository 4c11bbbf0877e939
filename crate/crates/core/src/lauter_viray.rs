//! Valuations of singular moduli norms for the orders of conductor `p^n` in
//! `Q(sqrt(-3))`, through the product formula
//!
//! ```text
//! |N(j)|^(2/3) = prod F((9 p^(2n) - x^2) / 4)
//! ```
//!
//! over `x^2 <= 9 p^(2n)`, `x^2 = 9 p^(2n) mod 4`, together with the
//! direct check against the class polynomial.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::Zero;
use thiserror::Error;

use crate::arith::{hilbert_symbol_odd, is_prime, valuation, ArithError, SymbolValue};
use crate::classpoly::{ClassPolyError, PolyCache};
use crate::quadforms::{Discriminant, QuadError};

/// An exact, possibly fractional, exponent.
pub type Valuation = Ratio<u64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LvError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("argument must be positive")]
    ZeroArgument,
    #[error("conductor {p}^{n} is too large")]
    TooLarge { p: u64, n: u32 },
    #[error("the conductor valuation formula is only available for p != 3 and even n, got p = {p}, n = {n}")]
    Unsupported { p: u64, n: u32 },
    #[error("x = {0} is outside the index set")]
    OutsideIndexSet(i64),
    #[error("total valuation {0} is not an integer")]
    NonIntegral(Valuation),
    #[error("unexpected surviving term m = {m} at p = 2")]
    UnexpectedDyadicTerm { m: u128 },
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    ClassPoly(#[from] ClassPolyError),
    #[error(transparent)]
    Quad(#[from] QuadError),
}

/// The pair of orders of discriminants `d1 = -3` and `d2 = -3 p^(2n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LvContext {
    pub p: u64,
    pub n: u32,
    pub d1: i64,
    pub d2: i64,
    /// Units in the order of discriminant `d1`.
    pub w1: u32,
    /// Units in the order of discriminant `d2`.
    pub w2: u32,
    /// Class number of `d1`.
    pub pic1: u32,
}

impl LvContext {
    pub fn new(p: u64, n: u32) -> Result<Self, LvError> {
        if !is_prime(p) {
            return Err(LvError::NotPrime(p));
        }
        if n == 0 {
            return Err(LvError::ZeroArgument);
        }
        let d2 = p
            .checked_pow(2 * n)
            .and_then(|q| q.checked_mul(9))
            .and_then(|q| i64::try_from(q).ok())
            .ok_or(LvError::TooLarge { p, n })?
            / 3;
        Ok(LvContext { p, n, d1: -3, d2: -d2, w1: 6, w2: 2, pic1: 1 })
    }

    /// `p^n`.
    pub fn conductor(&self) -> u64 {
        self.p.pow(self.n)
    }

    fn check_supported(&self) -> Result<(), LvError> {
        if self.p == 3 || self.n % 2 == 1 {
            return Err(LvError::Unsupported { p: self.p, n: self.n });
        }
        Ok(())
    }

    /// The `x` of the product formula, ascending.
    pub fn index_set(&self) -> impl Iterator<Item = i64> {
        let bound = 3 * self.conductor() as i64;
        (-bound..=bound).step_by(2)
    }
}

/// `rho(m)`: 0 when `(-3, -m)_3 = -1`, otherwise 2 or 4 as `3` does not or
/// does divide `m`.
pub fn rho(m: u64) -> Result<u8, LvError> {
    if m == 0 {
        return Err(LvError::ZeroArgument);
    }
    let m_signed = i64::try_from(m).map_err(|_| LvError::TooLarge { p: m, n: 1 })?;
    Ok(match hilbert_symbol_odd(-3, -m_signed, 3)? {
        SymbolValue::MinusOne => 0,
        _ if !m.is_multiple_of(3) => 2,
        _ => 4,
    })
}

/// Number of ideals of norm `n` in the Eisenstein integers.
pub fn ideal_count_u(n: u64) -> Result<u64, LvError> {
    if n == 0 {
        return Err(LvError::ZeroArgument);
    }
    let mut rest = n;
    let mut count = 1;
    let mut l = 2;
    while l * l <= rest {
        let mut e = 0;
        while rest.is_multiple_of(l) {
            rest /= l;
            e += 1;
        }
        if e > 0 {
            count *= local_ideal_count(l, e);
        }
        l += 1;
    }
    if rest > 1 {
        count *= local_ideal_count(rest, 1);
    }
    Ok(count)
}

fn local_ideal_count(l: u64, e: u64) -> u64 {
    match l % 3 {
        0 => 1,
        1 => e + 1,
        _ => u64::from(e.is_multiple_of(2)),
    }
}

/// `v_p(F(m))` at the conductor prime, for `m = (9 p^(2n) - x^2) / 4`.
pub fn vp_f_at_conductor(ctx: &LvContext, x: i64) -> Result<Valuation, LvError> {
    ctx.check_supported()?;
    let p = u128::from(ctx.p);
    let n = ctx.n;
    let top = 9 * p.pow(2 * n);
    let x2 = u128::from(x.unsigned_abs()).pow(2);
    if x2 > top || (top - x2) % 4 != 0 {
        return Err(LvError::OutsideIndexSet(x));
    }
    let m = (top - x2) / 4;
    if m == 0 {
        // 2/w1 * #Pic(d1)
        return Ok(Valuation::new(2 * u64::from(ctx.pic1), u64::from(ctx.w1)));
    }
    if m % p != 0 {
        return Ok(Valuation::zero());
    }
    let scale = p.pow(1 + n);
    if m % scale != 0 {
        return Ok(Valuation::zero());
    }
    let t = m / scale;
    // p never divides d1 = -3 here
    if valuation(&t, &p)? % 2 == 1 {
        return Ok(Valuation::zero());
    }
    if ctx.p == 2 {
        // the only survivor is m = 2^(2n+1), where the dyadic factor
        // epsilon_2(2^n) equals 1
        if m == 1u128 << (2 * n + 1) {
            return Ok(Valuation::from_integer(1));
        }
        return Err(LvError::UnexpectedDyadicTerm { m });
    }
    let m = u64::try_from(m).map_err(|_| LvError::TooLarge { p: ctx.p, n })?;
    let t = u64::try_from(t).map_err(|_| LvError::TooLarge { p: ctx.p, n })?;
    Ok(Valuation::from_integer(u64::from(rho(m)?) * ideal_count_u(t)?))
}

/// `v_p(|N(j)|)` for discriminant `-3 p^(2n)` from the product formula.
pub fn product_formula_valuation(ctx: &LvContext) -> Result<Valuation, LvError> {
    ctx.check_supported()?;
    let mut sum = Valuation::zero();
    for x in ctx.index_set() {
        sum += vp_f_at_conductor(ctx, x)?;
    }
    let total = sum * Valuation::new(3, 2);
    if !total.is_integer() {
        return Err(LvError::NonIntegral(total));
    }
    Ok(total)
}

/// The exponent predicted for the conductor prime: 4 at 2, 1 elsewhere.
pub fn conjectured_valuation(p: u64) -> u32 {
    if p == 2 {
        4
    } else {
        1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjectureOutcome {
    pub p: u64,
    pub n: u32,
    pub valuation: u32,
    pub expected: u32,
}

impl ConjectureOutcome {
    pub fn confirmed(&self) -> bool {
        self.valuation == self.expected
    }
}

/// Compares `v_p` of the norm of discriminant `-3 p^(2n)`, computed from
/// the class polynomial, with [`conjectured_valuation`].
pub fn conjecture_check(p: u64, n: u32, cache: &PolyCache) -> Result<ConjectureOutcome, LvError> {
    let ctx = LvContext::new(p, n)?;
    let d = Discriminant::new(ctx.d2)?;
    let norm = cache.get(&d)?.eval_at_integer(&BigInt::zero());
    let v = valuation(&norm, &BigInt::from(p))?;
    Ok(ConjectureOutcome { p, n, valuation: v, expected: conjectured_valuation(p) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;

    /// Eisenstein integers of norm `n`, divided by the six units.
    fn lattice_ideal_count(n: i64) -> u64 {
        let bound = 2 * ((n as f64).sqrt() as i64 + 1);
        let mut count = 0;
        for a in -bound..=bound {
            for b in -bound..=bound {
                if a * a + a * b + b * b == n {
                    count += 1;
                }
            }
        }
        assert_eq!(count % 6, 0);
        count / 6
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(2), Ok(2));
        assert_eq!(rho(1), Ok(0));
        assert_eq!(rho(6), Ok(4));
        assert_eq!(rho(0), Err(LvError::ZeroArgument));
        for m in 1..=10_000 {
            let r = rho(m).unwrap();
            assert!(matches!(r, 0 | 2 | 4));
            if r == 4 {
                assert_eq!(m % 3, 0);
            }
        }
    }

    #[test]
    fn ideal_count_examples() {
        assert_eq!(ideal_count_u(1), Ok(1));
        assert_eq!(ideal_count_u(7), Ok(2));
        assert_eq!(ideal_count_u(4), Ok(1));
        assert_eq!(ideal_count_u(2), Ok(0));
        for n in [1, 2, 4, 7] {
            assert_eq!(ideal_count_u(n as u64).unwrap(), lattice_ideal_count(n));
        }
        assert!(ideal_count_u(0).is_err());
    }

    #[test]
    fn ideal_count_matches_lattice() {
        for n in 1..=500 {
            assert_eq!(ideal_count_u(n as u64).unwrap(), lattice_ideal_count(n), "{n}");
        }
    }

    #[test]
    fn ideal_count_is_multiplicative() {
        for m in 1..=300u64 {
            for n in 1..=300u64 {
                if m.gcd(&n) == 1 {
                    assert_eq!(
                        ideal_count_u(m * n).unwrap(),
                        ideal_count_u(m).unwrap() * ideal_count_u(n).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn context() {
        let ctx = LvContext::new(5, 2).unwrap();
        assert_eq!((ctx.d1, ctx.d2, ctx.w1, ctx.w2, ctx.pic1), (-3, -1875, 6, 2, 1));
        assert_eq!(ctx.d2, ctx.d1 * 5i64.pow(4));
        assert_eq!(LvContext::new(4, 2), Err(LvError::NotPrime(4)));
        assert!(LvContext::new(2, 0).is_err());
        assert!(matches!(LvContext::new(1_000_003, 5), Err(LvError::TooLarge { .. })));
    }

    #[test]
    fn conductor_valuation_examples() {
        let c5 = LvContext::new(5, 2).unwrap();
        assert_eq!(vp_f_at_conductor(&c5, 75), Ok(Valuation::new(1, 3)));
        assert_eq!(vp_f_at_conductor(&c5, -75), Ok(Valuation::new(1, 3)));
        assert_eq!(vp_f_at_conductor(&c5, 1), Ok(Valuation::zero()));
        assert_eq!(vp_f_at_conductor(&c5, 0), Err(LvError::OutsideIndexSet(0)));
        assert_eq!(vp_f_at_conductor(&c5, 77), Err(LvError::OutsideIndexSet(77)));
        let c2 = LvContext::new(2, 2).unwrap();
        assert_eq!(vp_f_at_conductor(&c2, 4), Ok(Valuation::from_integer(1)));
        assert_eq!(vp_f_at_conductor(&c2, -4), Ok(Valuation::from_integer(1)));
        assert_eq!(vp_f_at_conductor(&c2, 12), Ok(Valuation::new(1, 3)));
        let c3 = LvContext::new(3, 2).unwrap();
        assert!(matches!(vp_f_at_conductor(&c3, 27), Err(LvError::Unsupported { .. })));
        let odd = LvContext::new(5, 1).unwrap();
        assert!(matches!(product_formula_valuation(&odd), Err(LvError::Unsupported { .. })));
    }

    #[test]
    fn vanishes_off_multiples_of_p() {
        for (p, n) in [(2, 2), (5, 2), (7, 2), (11, 2), (2, 4)] {
            let ctx = LvContext::new(p, n).unwrap();
            let top = 9 * (p as i64).pow(2 * n);
            for x in ctx.index_set() {
                let m = (top - x * x) / 4;
                if m != 0 && m % p as i64 != 0 {
                    assert_eq!(vp_f_at_conductor(&ctx, x), Ok(Valuation::zero()), "{p} {x}");
                }
            }
        }
    }

    #[test]
    fn product_formula_values() {
        for (p, n, v) in [(2, 2, 4), (5, 2, 1), (7, 2, 1), (11, 2, 1), (2, 4, 4), (5, 4, 1)] {
            let ctx = LvContext::new(p, n).unwrap();
            assert_eq!(product_formula_valuation(&ctx), Ok(Valuation::from_integer(v)), "{p}^{n}");
        }
    }

    #[test]
    fn conjecture_examples() {
        let cache = PolyCache::in_memory();
        for (p, n) in [(3, 1), (2, 3), (5, 1)] {
            let out = conjecture_check(p, n, &cache).unwrap();
            assert!(out.confirmed(), "{out:?}");
        }
    }
}
