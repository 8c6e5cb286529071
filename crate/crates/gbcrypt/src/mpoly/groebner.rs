//! Multivariate division, Buchberger's algorithm and staircase utilities.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::monomial::{Monomial, OrderKind, TermOrder};
use super::poly::{MPoly, PolySystem};
use crate::algebra::FieldElement;
use crate::budget::{Budget, Meter};
use crate::error::{Error, Result};

/// A divisor prepared for repeated use: leading monomial, inverse leading
/// coefficient and the remaining terms.
#[derive(Clone, Debug)]
struct Divisor {
    lm: Monomial,
    lc_inv: FieldElement,
    tail: Vec<(Monomial, FieldElement)>,
}

/// Reusable multivariate division by a fixed list of polynomials.
///
/// Among several divisors of a term, the one whose leading monomial is greatest
/// under DRL (with the order's variable ordering) is used, which makes the
/// remainder deterministic even when the divisors are not a Gröbner basis.
#[derive(Clone, Debug)]
pub struct Reducer {
    order: TermOrder,
    divisors: Vec<Divisor>,
    nvars: usize,
}

impl Reducer {
    pub fn new(polys: &[MPoly], order: &TermOrder) -> Self {
        let drl = order.with_kind(OrderKind::Drl);
        let mut divisors: Vec<Divisor> = polys
            .iter()
            .filter(|p| !p.is_zero())
            .map(|p| {
                let (lm, lc) = p.leading_term(order).expect("nonzero");
                let lm = lm.clone();
                let tail = p.terms().iter().filter(|(m, _)| **m != lm).map(|(m, &c)| (m.clone(), c)).collect();
                Divisor { lc_inv: p.field().inv(lc).expect("nonzero"), lm, tail }
            })
            .collect();
        divisors.sort_by(|a, b| drl.compare(&b.lm, &a.lm));
        Reducer { order: order.clone(), divisors, nvars: order.nvars() }
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    /// Leading monomials of the divisors.
    pub fn leading_monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.divisors.iter().map(|d| &d.lm)
    }

    /// Whether some divisor's leading monomial divides `m`.
    pub fn is_reducible(&self, m: &Monomial) -> bool {
        self.divisors.iter().any(|d| d.lm.divides(m))
    }

    /// Full remainder of `f`: no remaining term is divisible by a leading monomial.
    pub fn reduce(&self, f: &MPoly) -> Result<MPoly> {
        if f.nvars() != self.nvars {
            return Err(Error::RingMismatch);
        }
        let field = f.field();
        let order = &self.order;
        let mut work: BTreeMap<Vec<u16>, FieldElement> =
            f.terms().iter().map(|(m, &c)| (order.key(m), c)).collect();
        let mut rem = MPoly::zero(f.ring());
        while let Some((key, c)) = work.pop_last() {
            let m = order.unkey(&key);
            match self.divisors.iter().find(|d| d.lm.divides(&m)) {
                None => rem.add_term(m, c),
                Some(d) => {
                    let t = m.div(&d.lm).expect("divisible");
                    let factor = field.neg(field.mul(c, d.lc_inv));
                    for (tm, tc) in &d.tail {
                        let k = order.key(&tm.mul(&t));
                        let add = field.mul(factor, *tc);
                        match work.entry(k) {
                            std::collections::btree_map::Entry::Vacant(v) => {
                                v.insert(add);
                            }
                            std::collections::btree_map::Entry::Occupied(mut o) => {
                                let s = field.add(*o.get(), add);
                                if s.is_zero() {
                                    o.remove();
                                } else {
                                    *o.get_mut() = s;
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(rem)
    }
}

/// Remainder of `f` modulo `g` under `order`.
pub fn reduce(f: &MPoly, g: &PolySystem, order: &TermOrder) -> Result<MPoly> {
    if !std::sync::Arc::ptr_eq(f.ring(), g.ring()) && f.ring() != g.ring() {
        return Err(Error::RingMismatch);
    }
    Reducer::new(g.polys(), order).reduce(f)
}

/// S-polynomial of two nonzero polynomials.
pub fn s_polynomial(f: &MPoly, g: &MPoly, order: &TermOrder) -> MPoly {
    let field = f.field();
    let (lf, cf) = f.leading_term(order).expect("nonzero");
    let (lg, cg) = g.leading_term(order).expect("nonzero");
    let l = lf.lcm(lg);
    let a = f.mul_term(field.inv(cf).expect("nonzero"), &l.div(lf).expect("divisible"));
    let b = g.mul_term(field.inv(cg).expect("nonzero"), &l.div(lg).expect("divisible"));
    a.sub(&b)
}

/// Buchberger criterion check; pairs with coprime leading monomials are skipped.
pub fn is_groebner(g: &PolySystem, order: &TermOrder) -> Result<bool> {
    if g.polys().iter().any(|p| p.nvars() != order.nvars()) {
        return Err(Error::RingMismatch);
    }
    let polys: Vec<&MPoly> = g.polys().iter().filter(|p| !p.is_zero()).collect();
    let reducer = Reducer::new(g.polys(), order);
    let lms: Vec<&Monomial> = polys.iter().map(|p| p.leading_monomial(order).expect("nonzero")).collect();
    for i in 0..polys.len() {
        for j in i + 1..polys.len() {
            if lms[i].coprime(lms[j]) {
                continue;
            }
            if !reducer.reduce(&s_polynomial(polys[i], polys[j], order))?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// Reduced Gröbner basis by Buchberger's algorithm with the normal selection
/// strategy, the coprime criterion and the chain criterion.
pub fn buchberger(f: &PolySystem, order: &TermOrder, budget: &Budget) -> Result<PolySystem> {
    if f.polys().iter().any(|p| p.nvars() != order.nvars()) {
        return Err(Error::RingMismatch);
    }
    let ring = f.ring().clone();
    let mut meter = budget.meter();
    let mut basis: Vec<MPoly> = Vec::new();
    let mut lms: Vec<Monomial> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    // Seed with an inter-reduced copy of the input so the loop starts small.
    let mut inputs: Vec<MPoly> = f.polys().iter().filter(|p| !p.is_zero()).map(|p| p.monic(order)).collect();
    inputs.sort_by(|a, b| order.compare(a.leading_monomial(order).expect("nonzero"), b.leading_monomial(order).expect("nonzero")));
    for p in inputs {
        let r = Reducer::new(&basis, order).reduce(&p)?;
        if !r.is_zero() {
            add_to_basis(r.monic(order), order, &mut basis, &mut lms, &mut pairs);
        }
    }

    let mut reducer = Reducer::new(&basis, order);
    while !pairs.is_empty() {
        meter.tick(1)?;
        let best = (0..pairs.len())
            .min_by(|&a, &b| {
                order
                    .compare(&pairs[a].lcm, &pairs[b].lcm)
                    .then((pairs[a].i, pairs[a].j).cmp(&(pairs[b].i, pairs[b].j)))
            })
            .expect("nonempty");
        let pair = pairs.swap_remove(best);
        let s = s_polynomial(&basis[pair.i], &basis[pair.j], order);
        let r = reducer.reduce(&s)?;
        if !r.is_zero() {
            add_to_basis(r.monic(order), order, &mut basis, &mut lms, &mut pairs);
            reducer = Reducer::new(&basis, order);
        }
    }
    PolySystem::new(&ring, reduce_basis(basis, order)?)
}

fn add_to_basis(p: MPoly, order: &TermOrder, basis: &mut Vec<MPoly>, lms: &mut Vec<Monomial>, pairs: &mut Vec<Pair>) {
    let lm = p.leading_monomial(order).expect("nonzero").clone();
    let new = basis.len();
    // Chain criterion (Gebauer–Möller B_k): drop old pairs whose lcm is a proper
    // multiple of lcm(lm, lm_i) and lcm(lm, lm_j).
    pairs.retain(|pr| {
        !(lm.divides(&pr.lcm) && lms[pr.i].lcm(&lm) != pr.lcm && lms[pr.j].lcm(&lm) != pr.lcm)
    });
    let mut fresh: Vec<Pair> = Vec::new();
    for (i, other) in lms.iter().enumerate() {
        if other.coprime(&lm) {
            continue;
        }
        let lcm = other.lcm(&lm);
        // Keep only one pair per lcm among the new ones, and drop a new pair whose
        // lcm is a proper multiple of another new pair's lcm.
        if fresh.iter().any(|f| f.lcm.divides(&lcm)) {
            continue;
        }
        fresh.retain(|f| !lcm.divides(&f.lcm));
        fresh.push(Pair { i, j: new, lcm });
    }
    pairs.extend(fresh);
    basis.push(p);
    lms.push(lm);
}

/// Minimalizes and inter-reduces a Gröbner basis; output is monic and sorted by
/// leading monomial, greatest first.
pub fn reduce_basis(basis: Vec<MPoly>, order: &TermOrder) -> Result<Vec<MPoly>> {
    let mut polys: Vec<MPoly> = basis.into_iter().filter(|p| !p.is_zero()).map(|p| p.monic(order)).collect();
    polys.sort_by(|a, b| order.compare(a.leading_monomial(order).expect("nonzero"), b.leading_monomial(order).expect("nonzero")));
    let mut minimal: Vec<MPoly> = Vec::new();
    for p in polys {
        let lm = p.leading_monomial(order).expect("nonzero");
        if minimal.iter().any(|q| q.leading_monomial(order).expect("nonzero").divides(lm)) {
            continue;
        }
        minimal.push(p);
    }
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<MPoly> = minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, q)| q.clone()).collect();
        let reducer = Reducer::new(&others, order);
        let p = &minimal[i];
        let (lm, lc) = p.leading_term(order).expect("nonzero");
        let mut tail = p.clone();
        tail.add_term(lm.clone(), p.field().neg(lc));
        let mut r = reducer.reduce(&tail)?;
        r.add_term(lm.clone(), lc);
        out.push(r.monic(order));
    }
    out.sort_by(|a, b| order.compare(b.leading_monomial(order).expect("nonzero"), a.leading_monomial(order).expect("nonzero")));
    Ok(out)
}

/// Standard monomials of a zero-dimensional Gröbner basis, ascending under `order`.
pub fn quotient_basis(g: &PolySystem, order: &TermOrder) -> Result<Vec<Monomial>> {
    let lms = g.leading_monomials(order);
    staircase(&lms, order)
}

/// Monomials outside the monomial ideal generated by `lms`, ascending.
pub fn staircase(lms: &[Monomial], order: &TermOrder) -> Result<Vec<Monomial>> {
    let n = order.nvars();
    if lms.iter().any(Monomial::is_one) {
        return Ok(Vec::new());
    }
    let mut bounds = vec![u16::MAX; n];
    for m in lms {
        if let Some((v, e)) = m.as_pure_power() {
            bounds[v] = bounds[v].min(e);
        }
    }
    if bounds.contains(&u16::MAX) {
        return Err(Error::NotZeroDimensional);
    }
    let mut out = Vec::new();
    let mut current = vec![0u16; n];
    enumerate(0, &mut current, &bounds, lms, &mut out);
    out.sort_by(|a, b| order.compare(a, b));
    Ok(out)
}

fn enumerate(v: usize, current: &mut Vec<u16>, bounds: &[u16], lms: &[Monomial], out: &mut Vec<Monomial>) {
    if v == current.len() {
        out.push(Monomial::new(current.clone()));
        return;
    }
    for e in 0..bounds[v] {
        current[v] = e;
        let partial = Monomial::new(current.clone());
        if lms.iter().any(|m| m.divides(&partial)) {
            break;
        }
        enumerate(v + 1, current, bounds, lms, out);
    }
    current[v] = 0;
}

/// The homogeneous highest-degree component of `f`.
pub fn top_component(f: &MPoly) -> Result<MPoly> {
    f.top_component()
}

/// Small-instance test of generic coordinates for `(F^top)`.
///
/// Repeatedly computes a DRL Gröbner basis of the current top ideal, looks for a
/// variable `x_i` with some pure power `x_i^d` in the ideal, and then passes to
/// the ideal modulo `(x_i)`. Succeeds iff every variable is eliminated this way.
/// Pure powers are searched up to the degree `1 + Σ (deg g − 1)` over the
/// current basis, an upper bound for the regularity of a zero-dimensional
/// homogeneous ideal generated by that basis.
pub fn is_generic_coordinates_small(f: &PolySystem, budget: &Budget) -> Result<bool> {
    let ring = f.ring().clone();
    let n = ring.nvars();
    let order = TermOrder::drl(n);
    let mut gens: Vec<MPoly> = f.polys().iter().filter(|p| !p.is_zero()).map(|p| p.top_component()).collect::<Result<_>>()?;
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut meter: Meter = budget.meter();
    while !remaining.is_empty() {
        if gens.is_empty() {
            return Ok(false);
        }
        let gb = buchberger(&PolySystem::new(&ring, gens)?, &order, budget)?;
        let reducer = Reducer::new(gb.polys(), &order);
        let cap: u32 = 1 + gb.polys().iter().map(|g| g.degree().unwrap_or(1).saturating_sub(1)).sum::<u32>();
        let mut found = None;
        'vars: for (pos, &v) in remaining.iter().enumerate() {
            for d in 1..=cap.min(u16::MAX as u32) {
                meter.tick(1)?;
                let power = MPoly::term(&ring, ring.field().one(), Monomial::var_pow(n, v, d as u16));
                if reducer.reduce(&power)?.is_zero() {
                    found = Some(pos);
                    break 'vars;
                }
            }
        }
        let Some(pos) = found else {
            return Ok(false);
        };
        let v = remaining.remove(pos);
        gens = gb
            .polys()
            .iter()
            .map(|g| g.substitute_value(v, ring.field().zero()))
            .filter(|g| !g.is_zero())
            .collect();
    }
    Ok(true)
}

/// Compares two polynomials by leading monomial, greatest first.
pub fn by_leading_monomial_desc(order: &TermOrder) -> impl Fn(&MPoly, &MPoly) -> Ordering + '_ {
    move |a, b| match (a.leading_monomial(order), b.leading_monomial(order)) {
        (Some(x), Some(y)) => order.compare(y, x),
        (None, None) => Ordering::Equal,
        (None, _) => Ordering::Greater,
        (_, None) => Ordering::Less,
    }
}
