//! Prime fields F_q with 3 ≤ q < 2^128.
//!
//! Elements are canonical residues stored in a `u128`. The field itself is a
//! small `Copy` context that carries the modulus and, for moduli above 2^64,
//! precomputed Montgomery constants. Three multiplication paths exist:
//! native `u64` products for q < 2^32, native `u128` products for q < 2^64,
//! and a double-width product with two Montgomery reductions above that.
//! Which path runs is invisible to callers.

use std::fmt;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};

/// Number of Miller–Rabin rounds run when constructing a field.
pub const MILLER_RABIN_ROUNDS: usize = 40;

/// A residue modulo the field prime, always in `[0, q)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u128);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// The canonical residue.
    #[inline]
    pub fn value(self) -> u128 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Kind {
    Small,
    Medium,
    Large { q_neg_inv: u128, r2: u128 },
}

/// The prime field F_q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    modulus: u128,
    kind: Kind,
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.modulus)
    }
}

impl PrimeField {
    /// Builds F_q after checking that q is an odd prime.
    pub fn new(modulus: u128) -> Result<Self> {
        if modulus < 3 || modulus % 2 == 0 {
            return Err(Error::InvalidModulus(modulus));
        }
        let field = Self::new_unchecked(modulus);
        if !field.passes_miller_rabin(MILLER_RABIN_ROUNDS) {
            return Err(Error::InvalidModulus(modulus));
        }
        Ok(field)
    }

    /// Builds the arithmetic context for any odd modulus without a primality
    /// check. Inversion is only meaningful when the modulus is prime.
    fn new_unchecked(modulus: u128) -> Self {
        debug_assert!(modulus % 2 == 1 && modulus >= 3);
        let kind = if modulus < 1 << 32 {
            Kind::Small
        } else if modulus <= u64::MAX as u128 {
            Kind::Medium
        } else {
            // Newton iteration for q^{-1} mod 2^128; q·q ≡ 1 mod 8 seeds 3 bits.
            let mut inv = modulus;
            for _ in 0..7 {
                inv = inv.wrapping_mul(2u128.wrapping_sub(modulus.wrapping_mul(inv)));
            }
            debug_assert_eq!(modulus.wrapping_mul(inv), 1);
            let r1 = (u128::MAX % modulus + 1) % modulus;
            let r2 = mul_slow(r1, r1, modulus);
            Kind::Large { q_neg_inv: inv.wrapping_neg(), r2 }
        };
        PrimeField { modulus, kind }
    }

    #[inline]
    pub fn modulus(&self) -> u128 {
        self.modulus
    }

    /// Bit length of the modulus.
    pub fn bits(&self) -> u32 {
        128 - self.modulus.leading_zeros()
    }

    #[inline]
    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    #[inline]
    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// Reduces an arbitrary `u128` into the field.
    #[inline]
    pub fn elem(&self, v: u128) -> FieldElement {
        FieldElement(v % self.modulus)
    }

    /// Maps a signed integer into the field.
    pub fn from_i128(&self, v: i128) -> FieldElement {
        if v >= 0 {
            self.elem(v as u128)
        } else {
            self.neg(self.elem(v.unsigned_abs()))
        }
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let (s, overflow) = a.0.overflowing_add(b.0);
        if overflow || s >= self.modulus {
            FieldElement(s.wrapping_sub(self.modulus))
        } else {
            FieldElement(s)
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 >= b.0 {
            FieldElement(a.0 - b.0)
        } else {
            FieldElement(a.0.wrapping_sub(b.0).wrapping_add(self.modulus))
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if a.0 == 0 {
            a
        } else {
            FieldElement(self.modulus - a.0)
        }
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match self.kind {
            Kind::Small => {
                FieldElement(((a.0 as u64 * b.0 as u64) % self.modulus as u64) as u128)
            }
            Kind::Medium => FieldElement((a.0 * b.0) % self.modulus),
            Kind::Large { q_neg_inv, r2 } => {
                let (hi, lo) = mul_wide(a.0, b.0);
                let t = redc(hi, lo, self.modulus, q_neg_inv);
                let (hi, lo) = mul_wide(t, r2);
                FieldElement(redc(hi, lo, self.modulus, q_neg_inv))
            }
        }
    }

    /// `a + b·c`, the inner step of every elimination loop.
    #[inline]
    pub fn mul_add(&self, a: FieldElement, b: FieldElement, c: FieldElement) -> FieldElement {
        self.add(a, self.mul(b, c))
    }

    pub fn pow(&self, base: FieldElement, mut exp: u128) -> FieldElement {
        let mut acc = self.one();
        let mut b = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::InversionOfZero);
        }
        let (mut r0, mut r1) = (self.modulus, a.0);
        let (mut s0, mut s1) = (self.zero(), self.one());
        while r1 != 0 {
            let quo = r0 / r1;
            (r0, r1) = (r1, r0 - quo * r1);
            let t = self.sub(s0, self.mul(self.elem(quo), s1));
            (s0, s1) = (s1, t);
        }
        debug_assert_eq!(r0, 1, "modulus is not prime");
        Ok(s0)
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Uniform element drawn by rejection sampling.
    pub fn random<R: RngCore + ?Sized>(&self, rng: &mut R) -> FieldElement {
        let bits = self.bits();
        let mask = if bits == 128 { u128::MAX } else { (1u128 << bits) - 1 };
        loop {
            let v = ((rng.next_u64() as u128) << 64 | rng.next_u64() as u128) & mask;
            if v < self.modulus {
                return FieldElement(v);
            }
        }
    }

    /// Uniform nonzero element.
    pub fn random_nonzero<R: RngCore + ?Sized>(&self, rng: &mut R) -> FieldElement {
        loop {
            let v = self.random(rng);
            if !v.is_zero() {
                return v;
            }
        }
    }

    /// Square root if `a` is a square, via Tonelli–Shanks.
    pub fn sqrt(&self, a: FieldElement) -> Option<FieldElement> {
        if a.is_zero() {
            return Some(a);
        }
        let q = self.modulus;
        if self.pow(a, (q - 1) / 2) != self.one() {
            return None;
        }
        let mut s = 0;
        let mut odd = q - 1;
        while odd % 2 == 0 {
            odd /= 2;
            s += 1;
        }
        let mut z = FieldElement(2);
        while self.pow(z, (q - 1) / 2) == self.one() {
            z = self.add(z, self.one());
        }
        let mut m = s;
        let mut c = self.pow(z, odd);
        let mut t = self.pow(a, odd);
        let mut r = self.pow(a, odd.div_ceil(2));
        while t != self.one() {
            let mut i = 0;
            let mut t2 = t;
            while t2 != self.one() {
                t2 = self.mul(t2, t2);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = self.mul(b, b);
            }
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r)
    }

    fn passes_miller_rabin(&self, rounds: usize) -> bool {
        let n = self.modulus;
        const SMALL: [u128; 15] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];
        for p in SMALL {
            if n == p {
                return true;
            }
            if n % p == 0 {
                return false;
            }
        }
        let mut d = n - 1;
        let mut s = 0;
        while d % 2 == 0 {
            d /= 2;
            s += 1;
        }
        let one = self.one();
        let minus_one = FieldElement(n - 1);
        let mut rng = ChaCha20Rng::seed_from_u64(0x6d69_6c6c_6572_7261);
        let witness = |a: FieldElement| -> bool {
            let mut x = self.pow(a, d);
            if x == one || x == minus_one {
                return false;
            }
            for _ in 1..s {
                x = self.mul(x, x);
                if x == minus_one {
                    return false;
                }
            }
            true
        };
        // Fixed small bases first (deterministic for n < 3.3·10^24), then random ones.
        for (i, base) in SMALL.iter().chain([2u128].iter()).enumerate() {
            if i >= rounds {
                break;
            }
            if witness(FieldElement(*base % n)) {
                return false;
            }
        }
        for _ in SMALL.len() + 1..rounds {
            let a = FieldElement(rng.gen_range(2..n - 1));
            if witness(a) {
                return false;
            }
        }
        true
    }
}

/// Full 256-bit product of two `u128` values as `(hi, lo)`.
#[inline]
fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    const MASK: u128 = u64::MAX as u128;
    let (a1, a0) = (a >> 64, a & MASK);
    let (b1, b0) = (b >> 64, b & MASK);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & MASK) + (p10 & MASK);
    let lo = (p00 & MASK) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

/// Montgomery reduction of `T = hi·2^128 + lo < q·2^128`, returning `T·2^{-128} mod q`.
#[inline]
fn redc(hi: u128, lo: u128, q: u128, q_neg_inv: u128) -> u128 {
    let m = lo.wrapping_mul(q_neg_inv);
    let (mh, ml) = mul_wide(m, q);
    let (_, carry) = lo.overflowing_add(ml);
    let (t1, o1) = hi.overflowing_add(mh);
    let (t2, o2) = t1.overflowing_add(carry as u128);
    if o1 || o2 || t2 >= q {
        t2.wrapping_sub(q)
    } else {
        t2
    }
}

/// Double-and-add modular multiplication; used once per field for setup.
fn mul_slow(a: u128, b: u128, q: u128) -> u128 {
    let add = |x: u128, y: u128| {
        let (s, o) = x.overflowing_add(y);
        if o || s >= q {
            s.wrapping_sub(q)
        } else {
            s
        }
    };
    let mut acc = 0u128;
    for bit in (0..128).rev() {
        acc = add(acc, acc);
        if (b >> bit) & 1 == 1 {
            acc = add(acc, a);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    const Q127: u128 = (1u128 << 127) + 45;

    fn big_mul_mod(a: u128, b: u128, q: u128) -> u128 {
        let r = (BigUint::from(a) * BigUint::from(b)) % BigUint::from(q);
        r.try_into().unwrap()
    }

    #[test]
    fn inverse_examples() {
        let f7 = PrimeField::new(7).unwrap();
        assert_eq!(f7.inv(f7.elem(3)).unwrap(), f7.elem(5));
        assert_eq!(f7.inv(f7.one()).unwrap(), f7.one());
        assert_eq!(f7.inv(f7.zero()), Err(Error::InversionOfZero));
        let big = PrimeField::new(Q127).unwrap();
        assert_eq!(big.inv(big.one()).unwrap(), big.one());
    }

    #[test]
    fn rejects_composites_and_even_moduli() {
        for n in [1u128, 2, 4, 9, 15, 561, 7741 * 7753, ((1u128 << 61) - 1) * (u64::MAX as u128 - 58)] {
            assert!(PrimeField::new(n).is_err(), "{n} accepted");
        }
        for p in [3u128, 5, 31, 7741, 268_435_399, (1u128 << 61) - 1, Q127, u128::MAX - 158] {
            assert!(PrimeField::new(p).is_ok(), "{p} rejected");
        }
    }

    #[test]
    fn large_multiplication_matches_bigint() {
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        for q in [Q127, u128::MAX - 158, (1u128 << 89) - 1] {
            let f = PrimeField::new(q).unwrap();
            for _ in 0..500 {
                let a = f.random(&mut rng);
                let b = f.random(&mut rng);
                assert_eq!(f.mul(a, b).value(), big_mul_mod(a.value(), b.value(), q));
            }
            let m1 = FieldElement(q - 1);
            assert_eq!(f.mul(m1, m1), f.one());
            assert_eq!(f.add(m1, m1), FieldElement(q - 2));
        }
    }

    #[test]
    fn medium_and_small_paths_match_bigint() {
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        for q in [31u128, 7741, 4_294_967_311, (1u128 << 61) - 1] {
            let f = PrimeField::new(q).unwrap();
            for _ in 0..500 {
                let a = f.random(&mut rng);
                let b = f.random(&mut rng);
                assert_eq!(f.mul(a, b).value(), big_mul_mod(a.value(), b.value(), q));
            }
        }
    }

    #[test]
    fn sqrt_roundtrip() {
        for q in [7u128, 13, 7741, Q127] {
            let f = PrimeField::new(q).unwrap();
            let mut rng = ChaCha20Rng::seed_from_u64(9);
            for _ in 0..50 {
                let a = f.random(&mut rng);
                let sq = f.mul(a, a);
                let r = f.sqrt(sq).unwrap();
                assert_eq!(f.mul(r, r), sq);
            }
        }
        let f7 = PrimeField::new(7).unwrap();
        assert_eq!(f7.sqrt(f7.elem(3)), None);
    }

    #[test]
    fn signed_embedding() {
        let f = PrimeField::new(7741).unwrap();
        assert_eq!(f.from_i128(-1), f.elem(7740));
        assert_eq!(f.from_i128(7742), f.one());
    }
}
