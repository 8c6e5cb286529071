//! Macaulay and Boolean Macaulay matrices, Gaussian elimination to row-space
//! systems, Gröbner-basis extraction, the empirical solving-degree search and
//! a small-scale degree of regularity.
//!
//! Matrices are dense; the intended scale is a few thousand columns.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::DenseMatrix;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::mpoly::groebner::by_leading_monomial_desc;
use crate::mpoly::{buchberger, is_groebner, quotient_basis, MPoly, Monomial, PolySystem, Reducer, Ring, TermOrder};

/// The row `shift · F[source]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowTag {
    pub shift: Monomial,
    pub source: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MacaulayKind {
    /// Inhomogeneous `M_{≤d}`.
    Plain,
    /// Homogeneous `M_d`.
    Homogeneous,
    /// `M^Bool_{≤d}`: remainders modulo a K-Boolean system.
    Boolean,
}

/// A Macaulay matrix with its column monomials (descending) and row tags.
#[derive(Clone, Debug)]
pub struct MacaulayMatrix {
    pub kind: MacaulayKind,
    pub degree: u32,
    pub columns: Vec<Monomial>,
    pub rows: Vec<RowTag>,
    pub matrix: DenseMatrix,
    pub ring: Arc<Ring>,
    pub order: TermOrder,
}

/// All exponent vectors in `n` variables of total degree exactly `d`.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    fn rec(n: usize, i: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if i + 1 == n {
            cur[i] = left as u16;
            out.push(Monomial::new(cur.clone()));
            cur[i] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e as u16;
            rec(n, i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Monomial::one(0));
        }
        return out;
    }
    rec(n, 0, d, &mut vec![0; n], &mut out);
    out
}

/// All monomials of total degree at most `d`.
pub fn monomials_up_to(n: usize, d: u32) -> Vec<Monomial> {
    (0..=d).flat_map(|k| monomials_of_degree(n, k)).collect()
}

/// Square-free monomials of total degree at most `d`.
pub fn square_free_up_to(n: usize, d: u32) -> Vec<Monomial> {
    let d = (d as usize).min(n);
    (0u64..1 << n)
        .filter(|mask| mask.count_ones() as usize <= d)
        .map(|mask| Monomial::new((0..n).map(|i| ((mask >> i) & 1) as u16).collect()))
        .collect()
}

fn assemble(
    kind: MacaulayKind,
    degree: u32,
    ring: &Arc<Ring>,
    order: &TermOrder,
    mut columns: Vec<Monomial>,
    rows: Vec<(RowTag, MPoly)>,
) -> Result<MacaulayMatrix> {
    columns.sort_by(|a, b| order.compare(b, a));
    let index: HashMap<&Monomial, usize> = columns.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut matrix = DenseMatrix::zeros(ring.field(), rows.len(), columns.len());
    for (r, (_, p)) in rows.iter().enumerate() {
        for (m, &c) in p.terms() {
            let col = *index.get(m).ok_or_else(|| Error::ShapeViolation(format!("monomial outside the column set in row {r}")))?;
            matrix.set(r, col, c);
        }
    }
    Ok(MacaulayMatrix {
        kind,
        degree,
        columns: columns.clone(),
        rows: rows.into_iter().map(|(t, _)| t).collect(),
        matrix,
        ring: ring.clone(),
        order: order.clone(),
    })
}

/// Inhomogeneous Macaulay matrix `M_{≤d}`: one row `s·f` for every monomial
/// `s` and `f ∈ F` with `deg(s·f) ≤ d`.
pub fn build_macaulay(f: &PolySystem, d: u32, order: &TermOrder) -> Result<MacaulayMatrix> {
    let ring = f.ring();
    let n = ring.nvars();
    let mut rows = Vec::new();
    for (i, p) in f.polys().iter().enumerate() {
        let Some(deg) = p.degree() else { continue };
        if deg > d {
            continue;
        }
        for s in monomials_up_to(n, d - deg) {
            rows.push((RowTag { shift: s.clone(), source: i }, p.mul_term(ring.field().one(), &s)));
        }
    }
    assemble(MacaulayKind::Plain, d, ring, order, monomials_up_to(n, d), rows)
}

/// Homogeneous Macaulay matrix `M_d` of a homogeneous system.
pub fn build_homogeneous_macaulay(f: &PolySystem, d: u32, order: &TermOrder) -> Result<MacaulayMatrix> {
    let ring = f.ring();
    let n = ring.nvars();
    if f.polys().iter().any(|p| !p.is_homogeneous()) {
        return Err(Error::InvalidParams("homogeneous Macaulay matrix of an inhomogeneous system".into()));
    }
    let mut rows = Vec::new();
    for (i, p) in f.polys().iter().enumerate() {
        let Some(deg) = p.degree() else { continue };
        if deg > d {
            continue;
        }
        for s in monomials_of_degree(n, d - deg) {
            rows.push((RowTag { shift: s.clone(), source: i }, p.mul_term(ring.field().one(), &s)));
        }
    }
    assemble(MacaulayKind::Homogeneous, d, ring, order, monomials_of_degree(n, d), rows)
}

/// Whether every variable's square is a leading monomial of `f_bool` and `f_bool` is a Gröbner basis.
pub fn is_k_boolean(f_bool: &PolySystem, order: &TermOrder) -> Result<bool> {
    let n = f_bool.ring().nvars();
    let lms = f_bool.leading_monomials(order);
    let squares = (0..n).all(|v| lms.contains(&Monomial::var_pow(n, v, 2)));
    Ok(squares && is_groebner(f_bool, order)?)
}

/// K-Boolean Macaulay matrix `M^Bool_{≤d}` of `F ∪ F_Bool`: square-free
/// shifts outside `LM(F_Bool)`, rows holding `t·f mod F_Bool`.
pub fn build_boolean_macaulay(f: &PolySystem, f_bool: &PolySystem, d: u32, order: &TermOrder) -> Result<MacaulayMatrix> {
    let ring = f.ring();
    if !Arc::ptr_eq(ring, f_bool.ring()) && **ring != **f_bool.ring() {
        return Err(Error::RingMismatch);
    }
    if !is_k_boolean(f_bool, order)? {
        return Err(Error::NotBoolean);
    }
    let n = ring.nvars();
    let reducer = Reducer::new(f_bool.polys(), order);
    let standard: Vec<Monomial> = square_free_up_to(n, d).into_iter().filter(|m| !reducer.is_reducible(m)).collect();
    let mut rows = Vec::new();
    for (i, p) in f.polys().iter().enumerate() {
        let Some(deg) = p.degree() else { continue };
        if deg > d {
            continue;
        }
        for t in standard.iter().filter(|t| t.degree() + deg <= d) {
            let r = reducer.reduce(&p.mul_term(ring.field().one(), t))?;
            rows.push((RowTag { shift: t.clone(), source: i }, r));
        }
    }
    assemble(MacaulayKind::Boolean, d, ring, order, standard, rows)
}

impl MacaulayMatrix {
    pub fn nrows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn ncols(&self) -> usize {
        self.matrix.cols()
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    /// The polynomial held by row `r`.
    pub fn row_poly(&self, r: usize) -> MPoly {
        row_to_poly(&self.ring, &self.columns, self.matrix.row(r))
    }
}

fn row_to_poly(ring: &Arc<Ring>, columns: &[Monomial], row: &[crate::algebra::FieldElement]) -> MPoly {
    MPoly::from_terms(ring, columns.iter().zip(row).filter(|(_, c)| !c.is_zero()).map(|(m, &c)| (m.clone(), c)))
}

/// Row space basis after Gaussian elimination, one monic polynomial per pivot.
pub fn rowspace(m: &MacaulayMatrix) -> PolySystem {
    let rref = m.matrix.rref();
    let polys = (0..rref.rank).map(|r| row_to_poly(&m.ring, &m.columns, rref.reduced.row(r))).collect();
    PolySystem::new(&m.ring, polys).expect("one ring")
}

/// Picks the members of `rows ∪ F_Bool` whose leading monomials minimally
/// generate the leading-monomial ideal, and returns them if they form a
/// Gröbner basis of the ideal spanned by `rows ∪ F_Bool`; `None` otherwise.
pub fn extract_gb(rows: &PolySystem, f_bool: Option<&PolySystem>, order: &TermOrder) -> Result<Option<PolySystem>> {
    let ring = rows.ring();
    let mut all: Vec<MPoly> = rows.polys().iter().filter(|p| !p.is_zero()).map(|p| p.monic(order)).collect();
    if let Some(b) = f_bool {
        all.extend(b.polys().iter().filter(|p| !p.is_zero()).map(|p| p.monic(order)));
    }
    let lms: Vec<Monomial> = all.iter().map(|p| p.leading_monomial(order).expect("nonzero").clone()).collect();
    let mut chosen: Vec<MPoly> = Vec::new();
    let mut chosen_lms: Vec<&Monomial> = Vec::new();
    for (i, m) in lms.iter().enumerate() {
        let minimal = lms.iter().enumerate().all(|(j, o)| j == i || !(o.divides(m) && (o != m || j < i)));
        if minimal && !chosen_lms.contains(&m) {
            chosen_lms.push(m);
            chosen.push(all[i].clone());
        }
    }
    chosen.sort_by(by_leading_monomial_desc(order));
    let g = PolySystem::new(ring, chosen)?;
    if !is_groebner(&g, order)? {
        return Ok(None);
    }
    let red = Reducer::new(g.polys(), order);
    for p in &all {
        if !red.reduce(p)?.is_zero() {
            return Ok(None);
        }
    }
    Ok(Some(g))
}

/// How the matrix at a fixed degree bound is processed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SearchMode {
    /// One Gaussian elimination of `M_{≤d}` built from the input (the
    /// textbook solving degree).
    #[default]
    Macaulay,
    /// Rebuild `M_{≤d}` from the current row space until its rank stops
    /// growing; this is the degree bound an F4-style run never exceeds
    /// (its highest working degree).
    Closure,
}

/// Outcome of a successful solving-degree search.
#[derive(Clone, Debug)]
pub struct SolvingDegree {
    pub degree: u32,
    pub gb: PolySystem,
    /// Dimensions of every matrix eliminated along the way.
    pub steps: Vec<SearchStep>,
}

/// One eliminated matrix of a solving-degree search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchStep {
    pub degree: u32,
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
}

fn eliminate_at(
    f: &PolySystem,
    f_bool: Option<&PolySystem>,
    order: &TermOrder,
    d: u32,
    meter: &mut crate::budget::Meter,
    steps: &mut Vec<SearchStep>,
) -> Result<PolySystem> {
    let m = match f_bool {
        Some(b) => build_boolean_macaulay(f, b, d, order)?,
        None => build_macaulay(f, d, order)?,
    };
    let work = (m.nrows() as u64).saturating_mul(m.ncols() as u64).saturating_mul(m.ncols().min(m.nrows()).max(1) as u64);
    meter.tick(work)?;
    let rows = rowspace(&m);
    steps.push(SearchStep { degree: d, rows: m.nrows(), cols: m.ncols(), rank: rows.len() });
    Ok(rows)
}

/// Least `d ≤ d_max` such that the row space of `M_{≤d}` (or of
/// `M^Bool_{≤d}` together with `F_Bool` when given) contains a Gröbner basis.
pub fn solving_degree_search(
    f: &PolySystem,
    f_bool: Option<&PolySystem>,
    order: &TermOrder,
    d_max: u32,
    mode: SearchMode,
    budget: &Budget,
) -> Result<SolvingDegree> {
    let mut meter = budget.meter();
    let start = f
        .polys()
        .iter()
        .chain(f_bool.map(|b| b.polys()).unwrap_or(&[]))
        .filter_map(|p| p.degree())
        .max()
        .unwrap_or(0);
    let mut steps = Vec::new();
    for d in start..=d_max {
        let mut rows = eliminate_at(f, f_bool, order, d, &mut meter, &mut steps)?;
        if mode == SearchMode::Closure {
            loop {
                let before = rows.len();
                rows = eliminate_at(&rows, f_bool, order, d, &mut meter, &mut steps)?;
                if rows.len() == before {
                    break;
                }
            }
        }
        if let Some(gb) = extract_gb(&rows, f_bool, order)? {
            return Ok(SolvingDegree { degree: d, gb, steps });
        }
    }
    Err(Error::NotFoundWithin(d_max))
}

/// Degree of regularity: the least `d` where the degree-`d` part of `(F^top)`
/// is everything; `None` when `(F^top)` is not zero-dimensional.
pub fn dreg_small(f: &PolySystem, budget: &Budget) -> Result<Option<u32>> {
    let ring = f.ring();
    let n = ring.nvars();
    let tops: Vec<MPoly> = f.polys().iter().filter(|p| !p.is_zero()).map(|p| p.top_component()).collect::<Result<_>>()?;
    let top = PolySystem::new(ring, tops)?;
    let order = TermOrder::drl(n);
    let gb = buchberger(&top, &order, budget)?;
    match quotient_basis(&gb, &order) {
        Ok(_) => {}
        Err(Error::NotZeroDimensional) => return Ok(None),
        Err(e) => return Err(e),
    }
    let mut meter = budget.meter();
    for d in 0.. {
        let full = monomials_of_degree(n, d).len();
        let m = build_homogeneous_macaulay(&top, d, &order)?;
        meter.tick((m.nrows() * m.ncols()) as u64)?;
        if m.nrows() > 0 && m.rank() == full {
            return Ok(Some(d));
        }
    }
    unreachable!("a zero-dimensional top ideal contains every monomial of large degree")
}
