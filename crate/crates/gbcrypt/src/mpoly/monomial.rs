//! Exponent-vector monomials and the DRL / LEX term orders.

use std::cmp::Ordering;

use crate::error::{Error, Result};

/// A monomial `x_1^{a_1} ⋯ x_n^{a_n}` stored as its exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<u16>);

impl Monomial {
    pub fn new(exponents: Vec<u16>) -> Self {
        Monomial(exponents)
    }

    /// The monomial 1 in `n` variables.
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    /// `x_i^e` in `n` variables.
    pub fn var_pow(n: usize, i: usize, e: u16) -> Self {
        let mut v = vec![0; n];
        v[i] = e;
        Monomial(v)
    }

    pub fn var(n: usize, i: usize) -> Self {
        Self::var_pow(n, i, 1)
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Whether `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self / other`, if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        other.divides(self).then(|| Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    /// Whether the two monomials share no variable.
    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn is_square_free(&self) -> bool {
        self.0.iter().all(|&e| e <= 1)
    }

    /// If the monomial is `x_i^e` with `e ≥ 1`, returns `(i, e)`.
    pub fn as_pure_power(&self) -> Option<(usize, u16)> {
        let mut found = None;
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some((i, e));
            }
        }
        found
    }

    /// Variables with a nonzero exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    /// Degree reverse lexicographic.
    Drl,
    /// Lexicographic.
    Lex,
}

/// A term order over an explicit variable ordering; `vars[0]` is the greatest variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TermOrder {
    kind: OrderKind,
    vars: Vec<usize>,
}

impl TermOrder {
    /// Builds an order; `vars` must be a permutation of `0..vars.len()`.
    pub fn new(kind: OrderKind, vars: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; vars.len()];
        for &v in &vars {
            if v >= vars.len() || seen[v] {
                return Err(Error::InvalidParams("variable ordering is not a permutation".into()));
            }
            seen[v] = true;
        }
        Ok(TermOrder { kind, vars })
    }

    /// DRL with `x_0 > x_1 > … > x_{n−1}`.
    pub fn drl(n: usize) -> Self {
        TermOrder { kind: OrderKind::Drl, vars: (0..n).collect() }
    }

    /// LEX with `x_0 > x_1 > … > x_{n−1}`.
    pub fn lex(n: usize) -> Self {
        TermOrder { kind: OrderKind::Lex, vars: (0..n).collect() }
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    /// Variable indices from greatest to smallest.
    pub fn vars(&self) -> &[usize] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// The same variable ordering under another order kind.
    pub fn with_kind(&self, kind: OrderKind) -> TermOrder {
        TermOrder { kind, vars: self.vars.clone() }
    }

    /// Position of variable `v` in the ordering (0 = greatest).
    pub fn rank_of(&self, v: usize) -> usize {
        self.vars.iter().position(|&x| x == v).expect("variable in ordering")
    }

    /// The smallest variable.
    pub fn last_var(&self) -> usize {
        *self.vars.last().expect("nonempty ordering")
    }

    /// Total comparison of two monomials.
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.kind {
            OrderKind::Lex => {
                for &v in &self.vars {
                    match a.0[v].cmp(&b.0[v]) {
                        Ordering::Equal => continue,
                        other => return other,
                    }
                }
                Ordering::Equal
            }
            OrderKind::Drl => {
                let by_degree = a.degree().cmp(&b.degree());
                if by_degree != Ordering::Equal {
                    return by_degree;
                }
                for &v in self.vars.iter().rev() {
                    match a.0[v].cmp(&b.0[v]) {
                        Ordering::Equal => continue,
                        other => return other.reverse(),
                    }
                }
                Ordering::Equal
            }
        }
    }

    /// Checked comparison that rejects monomials of different lengths.
    pub fn try_compare(&self, a: &Monomial, b: &Monomial) -> Result<Ordering> {
        if a.nvars() != b.nvars() || a.nvars() != self.nvars() {
            return Err(Error::RingMismatch);
        }
        Ok(self.compare(a, b))
    }

    /// A vector whose lexicographic order equals this term order.
    pub fn key(&self, m: &Monomial) -> Vec<u16> {
        match self.kind {
            OrderKind::Lex => self.vars.iter().map(|&v| m.0[v]).collect(),
            OrderKind::Drl => {
                let mut k = Vec::with_capacity(self.vars.len() + 1);
                k.push(m.degree() as u16);
                k.extend(self.vars.iter().rev().map(|&v| u16::MAX - m.0[v]));
                k
            }
        }
    }

    /// Inverse of [`TermOrder::key`].
    pub fn unkey(&self, k: &[u16]) -> Monomial {
        let mut e = vec![0u16; self.vars.len()];
        match self.kind {
            OrderKind::Lex => {
                for (pos, &v) in self.vars.iter().enumerate() {
                    e[v] = k[pos];
                }
            }
            OrderKind::Drl => {
                for (pos, &v) in self.vars.iter().rev().enumerate() {
                    e[v] = u16::MAX - k[pos + 1];
                }
            }
        }
        Monomial(e)
    }
}

/// Ordering of two monomials under `order`, rejecting length mismatches.
pub fn compare_monomials(a: &Monomial, b: &Monomial, order: &TermOrder) -> Result<Ordering> {
    order.try_compare(a, b)
}
