use std::fmt;
use std::ops::Mul;

use super::{is_prime, ArithError};

/// A value of a quadratic residue or Hilbert symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolValue {
    MinusOne,
    Zero,
    One,
}

impl SymbolValue {
    pub fn as_i8(self) -> i8 {
        match self {
            SymbolValue::MinusOne => -1,
            SymbolValue::Zero => 0,
            SymbolValue::One => 1,
        }
    }

    pub fn from_sign(v: i64) -> Self {
        match v.signum() {
            -1 => SymbolValue::MinusOne,
            0 => SymbolValue::Zero,
            _ => SymbolValue::One,
        }
    }

    fn pow(self, e: u32) -> Self {
        match (self, e) {
            (_, 0) => SymbolValue::One,
            (SymbolValue::MinusOne, e) if e % 2 == 0 => SymbolValue::One,
            (s, _) => s,
        }
    }
}

impl Mul for SymbolValue {
    type Output = SymbolValue;
    fn mul(self, rhs: SymbolValue) -> SymbolValue {
        SymbolValue::from_sign(i64::from(self.as_i8() * rhs.as_i8()))
    }
}

impl fmt::Display for SymbolValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.as_i8())
    }
}

// (2/n) for odd n, indexed by n mod 8
const TAB2: [i8; 8] = [0, 1, 0, -1, 0, -1, 0, 1];

/// Kronecker symbol `(a/n)` for `n >= 1`.
pub fn kronecker(a: i64, n: u64) -> SymbolValue {
    assert!(n >= 1, "kronecker symbol needs n >= 1");
    let mut a = i128::from(a);
    let mut b = i128::from(n);
    if a % 2 == 0 && b % 2 == 0 {
        return SymbolValue::Zero;
    }
    let v = b.trailing_zeros();
    b >>= v;
    let mut k: i8 = if v % 2 == 0 { 1 } else { TAB2[(a & 7) as usize] };
    loop {
        if a == 0 {
            return if b == 1 { SymbolValue::from_sign(k.into()) } else { SymbolValue::Zero };
        }
        let v = a.trailing_zeros();
        a >>= v;
        if v % 2 == 1 {
            k *= TAB2[(b & 7) as usize];
        }
        // reciprocity: both congruent to 3 mod 4
        if a & b & 2 != 0 {
            k = -k;
        }
        let r = a.abs();
        a = b.rem_euclid(r);
        b = r;
    }
}

/// Jacobi symbol; `n` must be odd.
pub fn jacobi(a: i64, n: u64) -> SymbolValue {
    assert!(n % 2 == 1, "jacobi symbol needs an odd modulus");
    kronecker(a, n)
}

/// The local Hilbert symbol `(a, b)_p` at an odd prime `p`.
///
/// Writing `a = p^α u`, `b = p^β v` with `u`, `v` units, the symbol is
/// `(-1)^(αβ(p-1)/2) (u/p)^β (v/p)^α`.
pub fn hilbert_symbol_odd(a: i64, b: i64, p: u64) -> Result<SymbolValue, ArithError> {
    if p == 2 {
        return Err(ArithError::DyadicHilbertSymbol(p));
    }
    if !is_prime(p) {
        return Err(ArithError::NotPrime(p));
    }
    if a == 0 || b == 0 {
        return Err(ArithError::ZeroSymbolArgument);
    }
    let split = |mut x: i64| {
        let mut e = 0u32;
        while x % p as i64 == 0 {
            x /= p as i64;
            e += 1;
        }
        (e, x)
    };
    let (alpha, u) = split(a);
    let (beta, v) = split(b);
    let eps = u64::from(alpha) * u64::from(beta) * ((p - 1) / 2);
    let sign = if eps.is_multiple_of(2) { SymbolValue::One } else { SymbolValue::MinusOne };
    Ok(sign * kronecker(u, p).pow(beta) * kronecker(v, p).pow(alpha))
}
