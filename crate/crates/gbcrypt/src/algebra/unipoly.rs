//! Dense univariate polynomials over F_q, lowest degree first, with Euclidean
//! gcd, modular exponentiation and F_q-root extraction.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use super::field::{FieldElement, PrimeField};
use crate::error::{Error, Result};

/// Fields below this size fall back to an exhaustive scan if random splitting stalls.
const SCAN_LIMIT: u128 = 1 << 16;
/// Seed of the deterministic source used by equal-degree splitting.
const SPLIT_SEED: u64 = 0x7370_6c69_7474_6572;

#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    field: PrimeField,
    coeffs: Vec<FieldElement>,
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({self})")
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl UniPoly {
    /// Builds a polynomial from coefficients, lowest degree first.
    pub fn new(field: PrimeField, coeffs: Vec<FieldElement>) -> Self {
        let mut p = UniPoly { field, coeffs };
        p.trim();
        p
    }

    pub fn from_u128(field: PrimeField, coeffs: &[u128]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.elem(c)).collect())
    }

    pub fn from_i64(field: PrimeField, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_i128(c as i128)).collect())
    }

    pub fn zero(field: PrimeField) -> Self {
        UniPoly { field, coeffs: Vec::new() }
    }

    pub fn one(field: PrimeField) -> Self {
        Self::constant(field, field.one())
    }

    pub fn constant(field: PrimeField, c: FieldElement) -> Self {
        Self::new(field, vec![c])
    }

    /// The polynomial `x`.
    pub fn x(field: PrimeField) -> Self {
        Self::new(field, vec![field.zero(), field.one()])
    }

    /// `c·x^deg`.
    pub fn monomial(field: PrimeField, c: FieldElement, deg: usize) -> Self {
        let mut coeffs = vec![field.zero(); deg + 1];
        coeffs[deg] = c;
        Self::new(field, coeffs)
    }

    /// Monic polynomial with exactly the given roots.
    pub fn from_roots(field: PrimeField, roots: &[FieldElement]) -> Self {
        roots.iter().fold(Self::one(field), |acc, &r| {
            acc.mul(&Self::new(field, vec![field.neg(r), field.one()]))
        })
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> FieldElement {
        self.coeffs.last().copied().unwrap_or_default()
    }

    pub fn eval(&self, x: FieldElement) -> FieldElement {
        let f = self.field;
        self.coeffs.iter().rev().fold(f.zero(), |acc, &c| f.mul_add(c, acc, x))
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(f, (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(f, (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn neg(&self) -> UniPoly {
        let f = self.field;
        Self::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn scale(&self, s: FieldElement) -> UniPoly {
        let f = self.field;
        Self::new(f, self.coeffs.iter().map(|&c| f.mul(c, s)).collect())
    }

    /// Schoolbook product.
    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field);
        }
        let f = self.field;
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.mul_add(out[i + j], a, b);
            }
        }
        Self::new(f, out)
    }

    /// Quotient and remainder of Euclidean division.
    pub fn divrem(&self, divisor: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let f = self.field;
        let dd = divisor.degree().ok_or(Error::ZeroPolynomial)?;
        let Some(nd) = self.degree() else {
            return Ok((Self::zero(f), Self::zero(f)));
        };
        if nd < dd {
            return Ok((Self::zero(f), self.clone()));
        }
        let inv_lc = f.inv(divisor.leading_coeff())?;
        let mut rem = self.coeffs.clone();
        let mut quo = vec![f.zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = f.mul(rem[k + dd], inv_lc);
            if c.is_zero() {
                continue;
            }
            quo[k] = c;
            let neg = f.neg(c);
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = f.mul_add(rem[k + j], neg, d);
            }
        }
        rem.truncate(dd);
        Ok((Self::new(f, quo), Self::new(f, rem)))
    }

    pub fn rem(&self, divisor: &UniPoly) -> Result<UniPoly> {
        Ok(self.divrem(divisor)?.1)
    }

    /// Scales to leading coefficient one (zero stays zero).
    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv(self.leading_coeff()).expect("nonzero leading coefficient"))
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `base^exp mod modulus` by square-and-multiply.
    pub fn powmod(&self, mut exp: u128, modulus: &UniPoly) -> Result<UniPoly> {
        let f = self.field;
        let mut acc = Self::one(f).rem(modulus)?;
        let mut b = self.rem(modulus)?;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&b).rem(modulus)?;
            }
            exp >>= 1;
            if exp > 0 {
                b = b.mul(&b).rem(modulus)?;
            }
        }
        Ok(acc)
    }

    /// Formal derivative.
    pub fn derivative(&self) -> UniPoly {
        let f = self.field;
        Self::new(
            f,
            self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| f.mul(f.elem(i as u128), c)).collect(),
        )
    }

    /// `self(g(x))` by Horner's rule.
    pub fn compose(&self, g: &UniPoly) -> UniPoly {
        let f = self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(f), |acc, &c| acc.mul(g).add(&Self::constant(f, c)))
    }
}

/// `gcd(f, x^q − x)`: the monic product of `(x − a)` over the distinct F_q-roots `a` of `f`.
pub fn field_equation_gcd(f: &UniPoly) -> Result<UniPoly> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let field = f.field();
    if f.degree() == Some(0) {
        return Ok(UniPoly::one(field));
    }
    let xq = UniPoly::x(field).powmod(field.modulus(), f)?;
    let h = xq.sub(&UniPoly::x(field)).rem(f)?;
    Ok(f.gcd(&h))
}

/// All distinct roots of `f` in F_q, ascending.
pub fn uni_roots(f: &UniPoly) -> Result<Vec<FieldElement>> {
    let g = field_equation_gcd(f)?;
    let mut rng = ChaCha20Rng::seed_from_u64(SPLIT_SEED);
    let mut roots = Vec::new();
    split_roots(&g, &mut rng, &mut roots)?;
    roots.sort();
    Ok(roots)
}

/// Splits a squarefree product of distinct linear factors.
fn split_roots(g: &UniPoly, rng: &mut ChaCha20Rng, out: &mut Vec<FieldElement>) -> Result<()> {
    let field = g.field();
    match g.degree() {
        None | Some(0) => return Ok(()),
        Some(1) => {
            let g = g.monic();
            out.push(field.neg(g.coeff(0)));
            return Ok(());
        }
        _ => {}
    }
    let half = (field.modulus() - 1) / 2;
    let deg = g.degree().unwrap_or(0);
    for attempt in 0.. {
        if field.modulus() < SCAN_LIMIT && attempt >= 64 {
            out.extend(scan_roots(g));
            return Ok(());
        }
        let a = field.random(rng);
        let shifted = UniPoly::new(field, vec![a, field.one()]);
        let p = shifted.powmod(half, g)?.sub(&UniPoly::one(field));
        let h = g.gcd(&p);
        let hd = h.degree().unwrap_or(0);
        if hd > 0 && hd < deg {
            let (rest, _) = g.divrem(&h)?;
            split_roots(&h, rng, out)?;
            split_roots(&rest, rng, out)?;
            return Ok(());
        }
    }
    unreachable!("random splitting loop only exits by returning")
}

/// Exhaustive root scan; test oracle and small-field fallback.
pub fn scan_roots(f: &UniPoly) -> Vec<FieldElement> {
    let field = f.field();
    (0..field.modulus()).map(|v| field.elem(v)).filter(|&x| f.eval(x).is_zero()).collect()
}
