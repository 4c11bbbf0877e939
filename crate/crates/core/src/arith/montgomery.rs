//! Montgomery arithmetic modulo an odd `u128`, with `R = 2^128`.

const LO: u128 = u64::MAX as u128;

/// Full 256-bit product as `(hi, lo)`.
#[inline]
pub(crate) fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    let (a1, a0) = (a >> 64, a & LO);
    let (b1, b0) = (b >> 64, b & LO);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & LO) + (p10 & LO);
    let lo = (p00 & LO) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Mont128 {
    n: u128,
    neg_inv: u128,
    r1: u128,
    r2: u128,
}

impl Mont128 {
    pub(crate) fn new(n: u128) -> Self {
        assert!(n % 2 == 1 && n > 1, "Montgomery modulus must be odd and > 1");
        // Newton iteration for n^-1 mod 2^128; n*n = 1 mod 8 seeds 3 bits
        let mut inv = n;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u128.wrapping_sub(n.wrapping_mul(inv)));
        }
        debug_assert_eq!(n.wrapping_mul(inv), 1);
        let r1 = (u128::MAX % n + 1) % n;
        let mut ctx = Mont128 { n, neg_inv: inv.wrapping_neg(), r1, r2: 0 };
        let mut r2 = r1;
        for _ in 0..128 {
            r2 = ctx.add(r2, r2);
        }
        ctx.r2 = r2;
        ctx
    }

    pub(crate) fn modulus(&self) -> u128 {
        self.n
    }

    #[inline]
    pub(crate) fn add(&self, a: u128, b: u128) -> u128 {
        let (s, o) = a.overflowing_add(b);
        if o || s >= self.n {
            s.wrapping_sub(self.n)
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn sub(&self, a: u128, b: u128) -> u128 {
        if a >= b {
            a - b
        } else {
            a.wrapping_sub(b).wrapping_add(self.n)
        }
    }

    #[inline]
    fn redc(&self, hi: u128, lo: u128) -> u128 {
        let m = lo.wrapping_mul(self.neg_inv);
        let (mh, ml) = mul_wide(m, self.n);
        let (_, carry) = lo.overflowing_add(ml);
        let (t, o1) = hi.overflowing_add(mh);
        let (t, o2) = t.overflowing_add(u128::from(carry));
        if o1 || o2 || t >= self.n {
            t.wrapping_sub(self.n)
        } else {
            t
        }
    }

    #[inline]
    pub(crate) fn mul(&self, a: u128, b: u128) -> u128 {
        let (hi, lo) = mul_wide(a, b);
        self.redc(hi, lo)
    }

    pub(crate) fn one(&self) -> u128 {
        self.r1
    }

    pub(crate) fn to_mont(self, x: u128) -> u128 {
        self.mul(x % self.n, self.r2)
    }

    #[cfg(test)]
    pub(crate) fn out_of_mont(self, x: u128) -> u128 {
        self.redc(0, x)
    }

    pub(crate) fn pow(&self, base: u128, mut e: u128) -> u128 {
        let mut acc = self.r1;
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn mul_matches_bigint(n in any::<u128>(), a in any::<u128>(), b in any::<u128>()) {
            let n = n | 1;
            prop_assume!(n > 1);
            let ctx = Mont128::new(n);
            let got = ctx.out_of_mont(ctx.mul(ctx.to_mont(a), ctx.to_mont(b)));
            let expected = BigUint::from(a) * BigUint::from(b) % BigUint::from(n);
            prop_assert_eq!(BigUint::from(got), expected);
            let (hi, lo) = mul_wide(a, b);
            prop_assert_eq!((BigUint::from(hi) << 128u32) + BigUint::from(lo), BigUint::from(a) * BigUint::from(b));
        }
    }

    #[test]
    fn extreme_modulus() {
        let n = u128::MAX;
        let ctx = Mont128::new(n);
        let a = n - 1;
        let r = ctx.out_of_mont(ctx.mul(ctx.to_mont(a), ctx.to_mont(a)));
        assert_eq!(r, 1);
        assert_eq!(ctx.out_of_mont(ctx.pow(ctx.to_mont(3), 5)), 243);
    }
}
