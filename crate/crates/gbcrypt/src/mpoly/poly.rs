//! Sparse multivariate polynomials over a named polynomial ring.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::monomial::{Monomial, TermOrder};
use crate::algebra::{FieldElement, PrimeField, UniPoly};
use crate::error::{Error, Result};

/// Coefficient field plus variable names. Shared between polynomials via `Arc`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    field: PrimeField,
    names: Vec<String>,
}

impl Ring {
    pub fn new(field: PrimeField, names: Vec<String>) -> Arc<Ring> {
        Arc::new(Ring { field, names })
    }

    /// Ring with variables `x1, …, xn`.
    pub fn with_indexed(field: PrimeField, prefix: &str, n: usize) -> Arc<Ring> {
        Self::new(field, (1..=n).map(|i| format!("{prefix}{i}")).collect())
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

fn same_ring(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A polynomial stored as a map from monomial to nonzero coefficient.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    ring: Arc<Ring>,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({self})")
    }
}

impl MPoly {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        MPoly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &Arc<Ring>, c: FieldElement) -> Self {
        Self::term(ring, c, Monomial::one(ring.nvars()))
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, ring.field().one())
    }

    /// The variable `x_i`.
    pub fn var(ring: &Arc<Ring>, i: usize) -> Self {
        Self::term(ring, ring.field().one(), Monomial::var(ring.nvars(), i))
    }

    pub fn term(ring: &Arc<Ring>, c: FieldElement, m: Monomial) -> Self {
        let mut p = Self::zero(ring);
        p.add_term(m, c);
        p
    }

    /// Sums the given terms (repeated monomials are combined).
    pub fn from_terms(ring: &Arc<Ring>, terms: impl IntoIterator<Item = (Monomial, FieldElement)>) -> Self {
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Affine form `constant + Σ coeffs[i]·x_i`.
    pub fn linear(ring: &Arc<Ring>, coeffs: &[FieldElement], constant: FieldElement) -> Self {
        let n = ring.nvars();
        let mut p = Self::constant(ring, constant);
        for (i, &c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(n, i), c);
        }
        p
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn field(&self) -> PrimeField {
        self.ring.field()
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, FieldElement> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> FieldElement {
        self.terms.get(m).copied().unwrap_or_default()
    }

    /// Constant coefficient.
    pub fn constant_term(&self) -> FieldElement {
        self.coeff(&Monomial::one(self.nvars()))
    }

    /// Coefficient of the variable `x_i` (degree-one term).
    pub fn linear_coeff(&self, i: usize) -> FieldElement {
        self.coeff(&Monomial::var(self.nvars(), i))
    }

    /// Adds `c·m` in place.
    pub fn add_term(&mut self, m: Monomial, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        let f = self.ring.field();
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Total degree; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_constant(&self) -> bool {
        self.degree().map_or(true, |d| d == 0)
    }

    /// Degree at most one.
    pub fn is_affine(&self) -> bool {
        self.degree().map_or(true, |d| d <= 1)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn leading_term(&self, order: &TermOrder) -> Option<(&Monomial, FieldElement)> {
        self.terms.iter().max_by(|a, b| order.compare(a.0, b.0)).map(|(m, &c)| (m, c))
    }

    pub fn leading_monomial(&self, order: &TermOrder) -> Option<&Monomial> {
        self.leading_term(order).map(|(m, _)| m)
    }

    /// Terms sorted from greatest to smallest under `order`.
    pub fn sorted_terms(&self, order: &TermOrder) -> Vec<(Monomial, FieldElement)> {
        let mut t: Vec<_> = self.terms.iter().map(|(m, &c)| (m.clone(), c)).collect();
        t.sort_by(|a, b| order.compare(&b.0, &a.0));
        t
    }

    /// Scales so that the leading coefficient under `order` is one.
    pub fn monic(&self, order: &TermOrder) -> MPoly {
        match self.leading_term(order) {
            None => self.clone(),
            Some((_, c)) => self.scale(self.field().inv(c).expect("nonzero coefficient")),
        }
    }

    fn check_ring(&self, other: &MPoly) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn try_add(&self, other: &MPoly) -> Result<MPoly> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MPoly) -> Result<MPoly> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &MPoly) -> Result<MPoly> {
        self.check_ring(other)?;
        let f = self.field();
        let mut out = MPoly::zero(&self.ring);
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                out.add_term(ma.mul(mb), f.mul(ca, cb));
            }
        }
        Ok(out)
    }

    /// Addition; panics on ring mismatch (internal use with known-compatible operands).
    pub fn add(&self, other: &MPoly) -> MPoly {
        self.try_add(other).expect("ring mismatch")
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.try_sub(other).expect("ring mismatch")
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        self.try_mul(other).expect("ring mismatch")
    }

    pub fn neg(&self) -> MPoly {
        let f = self.field();
        MPoly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, &c)| (m.clone(), f.neg(c))).collect() }
    }

    pub fn scale(&self, s: FieldElement) -> MPoly {
        if s.is_zero() {
            return MPoly::zero(&self.ring);
        }
        let f = self.field();
        MPoly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, &c)| (m.clone(), f.mul(c, s))).collect() }
    }

    /// `c·t·self`.
    pub fn mul_term(&self, c: FieldElement, t: &Monomial) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(&self.ring);
        }
        let f = self.field();
        MPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, &a)| (m.mul(t), f.mul(a, c))).collect(),
        }
    }

    pub fn add_constant(&self, c: FieldElement) -> MPoly {
        let mut out = self.clone();
        out.add_term(Monomial::one(self.nvars()), c);
        out
    }

    pub fn pow(&self, e: u32) -> MPoly {
        (0..e).fold(MPoly::one(&self.ring), |acc, _| acc.mul(self))
    }

    /// Evaluates at a full point.
    pub fn eval(&self, point: &[FieldElement]) -> FieldElement {
        let f = self.field();
        let mut acc = f.zero();
        for (m, &c) in &self.terms {
            let mut t = c;
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t = f.mul(t, f.pow(point[i], e as u128));
                }
            }
            acc = f.add(acc, t);
        }
        acc
    }

    /// Replaces `x_var` by `value` (a polynomial in the same ring).
    pub fn substitute(&self, var: usize, value: &MPoly) -> MPoly {
        let n = self.nvars();
        let mut powers: Vec<MPoly> = vec![MPoly::one(&self.ring)];
        let mut out = MPoly::zero(&self.ring);
        for (m, &c) in &self.terms {
            let e = m.exponents()[var] as usize;
            if e == 0 {
                out.add_term(m.clone(), c);
                continue;
            }
            while powers.len() <= e {
                let next = powers.last().expect("nonempty").mul(value);
                powers.push(next);
            }
            let mut rest = m.exponents().to_vec();
            rest[var] = 0;
            let rest = Monomial::new(rest);
            debug_assert_eq!(rest.nvars(), n);
            for (pm, &pc) in &powers[e].terms {
                out.add_term(pm.mul(&rest), self.field().mul(c, pc));
            }
        }
        out
    }

    /// Replaces `x_var` by the constant `value`.
    pub fn substitute_value(&self, var: usize, value: FieldElement) -> MPoly {
        let f = self.field();
        let mut out = MPoly::zero(&self.ring);
        for (m, &c) in &self.terms {
            let e = m.exponents()[var];
            if e == 0 {
                out.add_term(m.clone(), c);
            } else {
                let mut rest = m.exponents().to_vec();
                rest[var] = 0;
                out.add_term(Monomial::new(rest), f.mul(c, f.pow(value, e as u128)));
            }
        }
        out
    }

    /// Evaluates variable by variable into univariate polynomials:
    /// `x_i ↦ assignment[i]`. Every variable occurring in `self` must be assigned.
    pub fn eval_uni(&self, assignment: &[Option<UniPoly>]) -> Result<UniPoly> {
        let f = self.field();
        let mut acc = UniPoly::zero(f);
        let mut cache: BTreeMap<(usize, u16), UniPoly> = BTreeMap::new();
        for (m, &c) in &self.terms {
            let mut t = UniPoly::constant(f, c);
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let base = assignment[i].as_ref().ok_or(Error::ShapeUnavailable)?;
                let p = cache.entry((i, e)).or_insert_with(|| (0..e).fold(UniPoly::one(f), |a, _| a.mul(base)));
                t = t.mul(p);
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Variables that occur with nonzero exponent, ascending.
    pub fn variables(&self) -> Vec<usize> {
        let mut used = vec![false; self.nvars()];
        for m in self.terms.keys() {
            for v in m.support() {
                used[v] = true;
            }
        }
        used.iter().enumerate().filter(|(_, &u)| u).map(|(i, _)| i).collect()
    }

    /// The terms of maximal total degree.
    pub fn top_component(&self) -> Result<MPoly> {
        let d = self.degree().ok_or(Error::ZeroPolynomial)?;
        Ok(MPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, &c)| (m.clone(), c)).collect(),
        })
    }

    /// The homogeneous component of degree `d` (possibly zero).
    pub fn homogeneous_part(&self, d: u32) -> MPoly {
        MPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, &c)| (m.clone(), c)).collect(),
        }
    }

    /// Moves the polynomial into `target`, sending variable `i` to `map[i]`.
    /// Variables mapped to `None` must not occur.
    pub fn map_ring(&self, target: &Arc<Ring>, map: &[Option<usize>]) -> Result<MPoly> {
        let n = target.nvars();
        let mut out = MPoly::zero(target);
        for (m, &c) in &self.terms {
            let mut e = vec![0u16; n];
            for (i, &a) in m.exponents().iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let j = map[i].ok_or(Error::RingMismatch)?;
                e[j] += a;
            }
            out.add_term(Monomial::new(e), c);
        }
        Ok(out)
    }

    /// Substitutes `x_i ↦ images[i]`, where every image lives in `target`.
    pub fn compose(&self, target: &Arc<Ring>, images: &[MPoly]) -> Result<MPoly> {
        if images.len() != self.nvars() || images.iter().any(|p| !same_ring(p.ring(), target)) {
            return Err(Error::RingMismatch);
        }
        let mut cache: BTreeMap<(usize, u16), MPoly> = BTreeMap::new();
        let mut out = MPoly::zero(target);
        for (m, &c) in &self.terms {
            let mut t = MPoly::constant(target, c);
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    let p = cache.entry((i, e)).or_insert_with(|| images[i].pow(e as u32));
                    t = t.mul(p);
                }
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Formats with terms sorted under `order` (greatest first).
    pub fn to_string_with(&self, order: &TermOrder) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> =
            self.sorted_terms(order).iter().map(|(m, c)| format_term(&self.ring, m, *c)).collect();
        parts.join(" + ")
    }

    /// Parses the textual form produced by `Display`.
    pub fn parse(ring: &Arc<Ring>, text: &str) -> Result<MPoly> {
        let f = ring.field();
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut out = MPoly::zero(ring);
        for raw in split_terms(text) {
            let (negative, body) = match raw.strip_prefix('-') {
                Some(rest) => (true, rest.trim()),
                None => (false, raw.trim()),
            };
            if body.is_empty() {
                return Err(Error::Parse(format!("empty term in `{text}`")));
            }
            let mut coeff = f.one();
            let mut exps = vec![0u16; ring.nvars()];
            for factor in body.split('*') {
                let factor = factor.trim();
                if factor.is_empty() {
                    return Err(Error::Parse(format!("empty factor in `{raw}`")));
                }
                if factor.chars().all(|ch| ch.is_ascii_digit()) {
                    let v: u128 = factor.parse().map_err(|_| Error::Parse(format!("bad coefficient `{factor}`")))?;
                    coeff = f.mul(coeff, f.elem(v));
                    continue;
                }
                let (name, exp) = match factor.split_once('^') {
                    Some((n, e)) => {
                        let e: u16 = e.trim().parse().map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?;
                        (n.trim(), e)
                    }
                    None => (factor, 1),
                };
                let idx = ring.index_of(name).ok_or_else(|| Error::Parse(format!("unknown variable `{name}`")))?;
                exps[idx] = exps[idx]
                    .checked_add(exp)
                    .ok_or_else(|| Error::Parse(format!("exponent overflow in `{raw}`")))?;
            }
            if negative {
                coeff = f.neg(coeff);
            }
            out.add_term(Monomial::new(exps), coeff);
        }
        Ok(out)
    }
}

/// Splits at top-level `+` and keeps a leading `-` attached to its term.
fn split_terms(text: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut start = 0;
    let bytes = text.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if (b == b'+' || b == b'-') && i > start {
            let prev = text[..i].trim_end();
            if prev.ends_with('^') || prev.ends_with('*') {
                continue;
            }
            parts.push(text[start..i].trim());
            start = if b == b'+' { i + 1 } else { i };
        }
    }
    parts.push(text[start..].trim());
    parts
}

fn format_term(ring: &Ring, m: &Monomial, c: FieldElement) -> String {
    let mut s = c.to_string();
    for (i, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => s.push_str(&format!("*{}", ring.name(i))),
            _ => s.push_str(&format!("*{}^{}", ring.name(i), e)),
        }
    }
    s
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_with(&TermOrder::drl(self.nvars())))
    }
}

/// Optional role attached to a member of a [`PolySystem`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Affine,
    Quadratic,
    BooleanBasis,
}

/// An ordered list of polynomials over one ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySystem {
    ring: Arc<Ring>,
    polys: Vec<MPoly>,
    roles: Option<Vec<Role>>,
}

impl PolySystem {
    pub fn new(ring: &Arc<Ring>, polys: Vec<MPoly>) -> Result<Self> {
        if polys.iter().any(|p| !same_ring(p.ring(), ring)) {
            return Err(Error::RingMismatch);
        }
        Ok(PolySystem { ring: ring.clone(), polys, roles: None })
    }

    /// Like [`PolySystem::new`] with one role per member.
    pub fn with_roles(ring: &Arc<Ring>, polys: Vec<MPoly>, roles: Vec<Role>) -> Result<Self> {
        if roles.len() != polys.len() {
            return Err(Error::InvalidParams("one role per polynomial required".into()));
        }
        let mut s = Self::new(ring, polys)?;
        s.roles = Some(roles);
        Ok(s)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn field(&self) -> PrimeField {
        self.ring.field()
    }

    pub fn polys(&self) -> &[MPoly] {
        &self.polys
    }

    pub fn into_polys(self) -> Vec<MPoly> {
        self.polys
    }

    pub fn roles(&self) -> Option<&[Role]> {
        self.roles.as_deref()
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// Evaluates every member at `point`.
    pub fn eval(&self, point: &[FieldElement]) -> Vec<FieldElement> {
        self.polys.iter().map(|p| p.eval(point)).collect()
    }

    /// Whether `point` is a common zero.
    pub fn vanishes_at(&self, point: &[FieldElement]) -> bool {
        self.polys.iter().all(|p| p.eval(point).is_zero())
    }

    /// Sorted leading monomials.
    pub fn leading_monomials(&self, order: &TermOrder) -> Vec<Monomial> {
        self.polys.iter().filter_map(|p| p.leading_monomial(order).cloned()).collect()
    }

    /// Concatenation of two systems over the same ring.
    pub fn concat(&self, other: &PolySystem) -> Result<PolySystem> {
        let mut polys = self.polys.clone();
        polys.extend(other.polys.iter().cloned());
        PolySystem::new(&self.ring, polys)
    }

    /// One line per member, greatest term first.
    pub fn to_text(&self, order: &TermOrder) -> String {
        self.polys.iter().map(|p| p.to_string_with(order) + "\n").collect()
    }
}

/// Gauss–Jordan elimination of affine polynomials.
///
/// Columns are the variables from greatest to smallest under `order`, then the
/// constant. The result has one member per pivot, each monic with a distinct
/// leading variable that occurs in no other member. Non-affine input is rejected.
pub fn linear_rref(ring: &Arc<Ring>, polys: &[MPoly], order: &TermOrder) -> Result<Vec<MPoly>> {
    use crate::algebra::DenseMatrix;
    let f = ring.field();
    let n = ring.nvars();
    if polys.iter().any(|p| !p.is_affine()) {
        return Err(Error::InvalidParams("linear elimination of a non-affine polynomial".into()));
    }
    let vars = order.vars();
    let mut m = DenseMatrix::zeros(f, polys.len(), n + 1);
    for (r, p) in polys.iter().enumerate() {
        for (col, &v) in vars.iter().enumerate() {
            m.set(r, col, p.linear_coeff(v));
        }
        m.set(r, n, p.constant_term());
    }
    let pivots = m.rref_in_place();
    let mut out = Vec::with_capacity(pivots.len());
    for (r, _) in pivots.iter().enumerate() {
        let mut coeffs = vec![f.zero(); n];
        for (col, &v) in vars.iter().enumerate() {
            coeffs[v] = m.get(r, col);
        }
        out.push(MPoly::linear(ring, &coeffs, m.get(r, n)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(q: u128, n: usize) -> Arc<Ring> {
        Ring::with_indexed(PrimeField::new(q).unwrap(), "x", n)
    }

    #[test]
    fn text_roundtrip() {
        let r = ring(7741, 3);
        let p = MPoly::parse(&r, "3*x1^2*x2 + 7740*x3 + 5").unwrap();
        assert_eq!(p.to_string(), "3*x1^2*x2 + 7740*x3 + 5");
        assert_eq!(MPoly::parse(&r, &p.to_string()).unwrap(), p);
        let q = MPoly::parse(&r, "x1*x2 - x3 - 1").unwrap();
        assert_eq!(q.to_string(), "1*x1*x2 + 7740*x3 + 7740");
        assert_eq!(MPoly::parse(&r, &q.to_string()).unwrap(), q);
        assert_eq!(MPoly::parse(&r, "0").unwrap(), MPoly::zero(&r));
        assert!(MPoly::parse(&r, "x4").is_err());
        assert!(MPoly::parse(&r, "x1 + + x2").is_err());
    }

    #[test]
    fn top_component_examples() {
        let r = ring(7, 2);
        let p = MPoly::parse(&r, "x1^2 + x2 + 1").unwrap();
        assert_eq!(p.top_component().unwrap(), MPoly::parse(&r, "x1^2").unwrap());
        let p = MPoly::parse(&r, "x1 + 1").unwrap();
        assert_eq!(p.top_component().unwrap(), MPoly::parse(&r, "x1").unwrap());
        let h = MPoly::parse(&r, "x1*x2 + 3*x2^2").unwrap();
        assert_eq!(h.top_component().unwrap(), h);
        assert_eq!(MPoly::zero(&r).top_component(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn substitution_and_evaluation_agree() {
        let r = ring(31, 3);
        let f = r.field();
        let p = MPoly::parse(&r, "x1^2*x2 + 4*x1*x3 + 2").unwrap();
        let v = MPoly::parse(&r, "x2 + 3*x3 + 1").unwrap();
        let s = p.substitute(0, &v);
        let pt = [f.elem(0), f.elem(5), f.elem(7)];
        let x1 = v.eval(&pt);
        assert_eq!(s.eval(&pt), p.eval(&[x1, pt[1], pt[2]]));
        assert_eq!(p.substitute_value(1, f.elem(5)).eval(&[f.elem(2), f.zero(), f.elem(7)]), p.eval(&[f.elem(2), f.elem(5), f.elem(7)]));
    }

    #[test]
    fn ring_mismatch_is_reported() {
        let a = MPoly::var(&ring(7, 2), 0);
        let b = MPoly::var(&ring(7, 3), 0);
        assert_eq!(a.try_add(&b), Err(Error::RingMismatch));
    }

    #[test]
    fn linear_rref_pivots_on_greatest_variable() {
        let r = ring(7, 2);
        let polys = vec![MPoly::parse(&r, "x1 + x2").unwrap(), MPoly::parse(&r, "x1 - x2").unwrap()];
        let out = linear_rref(&r, &polys, &TermOrder::drl(2)).unwrap();
        assert_eq!(out, vec![MPoly::var(&r, 0), MPoly::var(&r, 1)]);
    }
}
