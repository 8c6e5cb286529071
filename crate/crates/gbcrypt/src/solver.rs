//! Zero finding from a known DRL Gröbner basis: multiplication matrices,
//! block-companion characteristic polynomials, the structured iterative
//! eigenvalue solver, a deterministic FGLM and the two key-recovery pipelines.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::{uni_roots, DenseMatrix, FieldElement, UniPoly};
use crate::budget::{Budget, Meter};
use crate::ciminion::{self, CiminionParams, CiminionSample, Variant};
use crate::error::{Error, Result};
use crate::hydra::{self, HydraParams, HydraSamplePair, HydraWitness};
use crate::mpoly::groebner::by_leading_monomial_desc;
use crate::mpoly::{buchberger, quotient_basis, Monomial, MPoly, PolySystem, Reducer, Ring, TermOrder};

/// Matrix of `b ↦ b·f` on the quotient ring, in the `quotient_basis` ordering.
///
/// Row `i` holds the normal form of `basis[i]·f`, so normal forms compose as
/// row vectors: `NF(s·f) = NF(s)·M`.
#[derive(Clone, Debug)]
pub struct MultiplicationMatrix {
    pub matrix: DenseMatrix,
    pub basis: Vec<Monomial>,
    pub multiplier: MPoly,
}

/// Multiplication matrix of the variable `var`.
pub fn multiplication_matrix(g: &PolySystem, order: &TermOrder, var: usize) -> Result<MultiplicationMatrix> {
    multiplication_matrix_for(g, order, &MPoly::var(g.ring(), var))
}

/// Multiplication matrix of an arbitrary polynomial `f`.
pub fn multiplication_matrix_for(g: &PolySystem, order: &TermOrder, f: &MPoly) -> Result<MultiplicationMatrix> {
    let basis = quotient_basis(g, order)?;
    let index: HashMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let reducer = Reducer::new(g.polys(), order);
    let field = g.field();
    let mut matrix = DenseMatrix::zeros(field, basis.len(), basis.len());
    for (i, b) in basis.iter().enumerate() {
        let nf = reducer.reduce(&f.mul_term(field.one(), b))?;
        for (m, &c) in nf.terms() {
            let j = *index.get(m).ok_or(Error::NotZeroDimensional)?;
            matrix.set(i, j, c);
        }
    }
    Ok(MultiplicationMatrix { matrix, basis, multiplier: f.clone() })
}

/// Pure-power exponent of every variable when each leading monomial is a pure
/// power and every variable has exactly one.
fn pure_power_degrees(g: &PolySystem, order: &TermOrder) -> Option<Vec<u16>> {
    let n = order.nvars();
    let mut degrees = vec![0u16; n];
    for p in g.polys().iter().filter(|p| !p.is_zero()) {
        let (v, e) = p.leading_monomial(order)?.as_pure_power()?;
        if degrees[v] != 0 {
            return None;
        }
        degrees[v] = e;
    }
    degrees.iter().all(|&d| d > 0).then_some(degrees)
}

/// Characteristic polynomial of `M_{x_n}` for the smallest variable `x_n`,
/// computed as `det(x^{d_n}·I − Σ x^i·A_i)` over the blocks of the companion
/// structure, with a fraction-free determinant over `F_q[x]`.
pub fn block_charpoly(g: &PolySystem, order: &TermOrder) -> Result<UniPoly> {
    let degrees = pure_power_degrees(g, order)
        .ok_or_else(|| Error::ShapeViolation("leading monomials must be pure powers, one per variable".into()))?;
    let field = g.field();
    let n = order.nvars();
    let v = order.last_var();
    let d = degrees[v] as usize;
    let basis = quotient_basis(g, order)?;
    let inner: Vec<&Monomial> = basis.iter().filter(|m| m.exponents()[v] == 0).collect();
    let index: HashMap<&Monomial, usize> = inner.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let size = inner.len();
    let reducer = Reducer::new(g.polys(), order);
    // blocks[i] is A_i; entry (r, c) is the coefficient of x^i·b'_c in x^d·b'_r.
    let mut entries: Vec<Vec<Vec<FieldElement>>> = vec![vec![vec![field.zero(); d + 1]; size]; size];
    let top = Monomial::var_pow(n, v, d as u16);
    for (r, b) in inner.iter().enumerate() {
        let nf = reducer.reduce(&MPoly::term(g.ring(), field.one(), b.mul(&top)))?;
        for (m, &c) in nf.terms() {
            let i = m.exponents()[v] as usize;
            let mut rest = m.exponents().to_vec();
            rest[v] = 0;
            let col = *index.get(&Monomial::new(rest)).ok_or(Error::NotZeroDimensional)?;
            entries[r][col][i] = field.neg(c);
        }
    }
    for (r, row) in entries.iter_mut().enumerate() {
        row[r][d] = field.add(row[r][d], field.one());
    }
    let matrix: Vec<Vec<UniPoly>> =
        entries.into_iter().map(|row| row.into_iter().map(|c| UniPoly::new(field, c)).collect()).collect();
    Ok(bareiss_determinant(matrix, field))
}

/// Determinant of a square matrix over `F_q[x]` by Bareiss' fraction-free elimination.
pub fn bareiss_determinant(mut m: Vec<Vec<UniPoly>>, field: crate::algebra::PrimeField) -> UniPoly {
    let n = m.len();
    if n == 0 {
        return UniPoly::one(field);
    }
    let mut negate = false;
    let mut prev = UniPoly::one(field);
    for k in 0..n - 1 {
        let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return UniPoly::zero(field);
        };
        if p != k {
            m.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                let (quo, rem) = num.divrem(&prev).expect("previous pivot is nonzero");
                debug_assert!(rem.is_zero(), "Bareiss division is exact");
                m[i][j] = quo;
            }
            m[i][k] = UniPoly::zero(field);
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        det.neg()
    } else {
        det
    }
}

/// Knobs for [`eigen_solve`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveOptions {
    /// Cap `N` on the roots explored per iteration (ascending residues first);
    /// `None` explores every root, which makes the solver complete.
    pub max_branches: Option<usize>,
    pub budget: Budget,
}

/// Counters collected while solving.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Recursive calls, one per partial assignment explored.
    pub branches: u64,
    /// Characteristic polynomials computed.
    pub charpolys: u64,
    /// Iterations whose system lost the pure-power shape and was re-based by Buchberger.
    pub rebased: u64,
    /// Largest number of `F_q`-roots seen in a single iteration.
    pub max_roots: usize,
    /// Candidates produced before final verification.
    pub candidates: usize,
}

/// Verified common zeros, sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenSolution {
    pub solutions: Vec<Vec<FieldElement>>,
    pub stats: SolveStats,
}

/// Finds the `F_q`-zeros of a zero-dimensional DRL Gröbner basis whose leading
/// monomials are pure powers, one per variable.
///
/// Each iteration takes the characteristic polynomial of the smallest
/// remaining variable, keeps its `F_q`-roots, substitutes each root and uses
/// the affine relations that appear to eliminate the greatest variable they
/// contain. The member whose leading monomial was a power of that variable is
/// set aside (it only over-determines the rest) when the remaining members keep
/// the pure-power shape; otherwise the iteration re-bases with Buchberger.
/// Every candidate is verified on `g` and on `extras`.
pub fn eigen_solve(g: &PolySystem, order: &TermOrder, extras: Option<&PolySystem>, opts: &SolveOptions) -> Result<EigenSolution> {
    if pure_power_degrees(g, order).is_none() {
        return Err(Error::ShapeViolation("leading monomials must be pure powers, one per variable".into()));
    }
    if let Some(e) = extras {
        if e.ring().names() != g.ring().names() || e.field() != g.field() {
            return Err(Error::RingMismatch);
        }
    }
    let mut search = Search {
        ring: g.ring().clone(),
        order: order.clone(),
        opts: *opts,
        meter: opts.budget.meter(),
        stats: SolveStats::default(),
        out: Vec::new(),
    };
    let free: Vec<usize> = order.vars().to_vec();
    let n = order.nvars();
    search.descend(g.polys().to_vec(), free, vec![None; n], Vec::new())?;
    let mut stats = search.stats;
    let mut candidates = search.out;
    candidates.sort();
    candidates.dedup();
    stats.candidates = candidates.len();
    let solutions = candidates
        .into_iter()
        .filter(|pt| g.vanishes_at(pt) && extras.map_or(true, |e| e.vanishes_at(pt)))
        .collect();
    Ok(EigenSolution { solutions, stats })
}

struct Search {
    ring: Arc<Ring>,
    order: TermOrder,
    opts: SolveOptions,
    meter: Meter,
    stats: SolveStats,
    out: Vec<Vec<FieldElement>>,
}

impl Search {
    /// `free` lists the unassigned variables greatest first; `subs` records
    /// variables eliminated through affine relations, in elimination order.
    fn descend(
        &mut self,
        polys: Vec<MPoly>,
        mut free: Vec<usize>,
        point: Vec<Option<FieldElement>>,
        mut subs: Vec<(usize, MPoly)>,
    ) -> Result<()> {
        self.meter.tick(1)?;
        self.stats.branches += 1;
        let Some(mut polys) = normalize(polys) else {
            return Ok(());
        };
        let mut set_aside: Vec<usize> = Vec::new();
        while let Some(pos) = polys.iter().position(|p| p.is_affine()) {
            let rel = polys.swap_remove(pos);
            let lm = rel.leading_monomial(&self.order).expect("nonconstant").clone();
            let (u, _) = lm.as_pure_power().expect("affine leading monomial is a variable");
            let a = rel.coeff(&lm);
            let field = rel.field();
            let mut rest = rel.clone();
            rest.add_term(lm.clone(), field.neg(a));
            let expr = rest.scale(field.neg(field.inv(a)?));
            for (i, p) in polys.iter().enumerate() {
                if p.leading_monomial(&self.order).and_then(Monomial::as_pure_power).map(|(v, _)| v) == Some(u) {
                    set_aside.push(i);
                }
            }
            let substituted: Vec<MPoly> = polys.iter().map(|p| p.substitute(u, &expr)).collect();
            let kept: Vec<bool> = (0..substituted.len()).map(|i| !set_aside.contains(&i)).collect();
            set_aside.clear();
            free.retain(|&v| v != u);
            subs.push((u, expr));
            let Some(next) = normalize(substituted.clone()) else {
                return Ok(());
            };
            // Prefer the smaller system when it keeps the pure-power shape.
            let reduced: Vec<MPoly> = substituted.into_iter().zip(&kept).filter(|(_, &k)| k).map(|(p, _)| p).collect();
            polys = match normalize(reduced) {
                Some(r) if self.is_shaped(&r, &free) => r,
                _ => next,
            };
        }
        if free.is_empty() {
            self.emit(&point, &subs);
            return Ok(());
        }
        let shaped = self.is_shaped(&polys, &free);
        let (sub_ring, sub_order, to_sub, from_sub) = self.restrict(&free);
        let mut sub_polys: Vec<MPoly> = polys.iter().map(|p| p.map_ring(&sub_ring, &to_sub)).collect::<Result<_>>()?;
        if !shaped {
            self.stats.rebased += 1;
            let gb = buchberger(&PolySystem::new(&sub_ring, sub_polys)?, &sub_order, &self.opts.budget)?;
            if gb.polys().iter().any(MPoly::is_constant) {
                return Ok(());
            }
            sub_polys = gb.into_polys();
        }
        let sub_system = PolySystem::new(&sub_ring, sub_polys)?;
        let last = sub_order.last_var();
        self.stats.charpolys += 1;
        let chi = if shaped {
            block_charpoly(&sub_system, &sub_order)?
        } else {
            multiplication_matrix(&sub_system, &sub_order, last)?.matrix.charpoly()?
        };
        let roots = uni_roots(&chi)?;
        self.stats.max_roots = self.stats.max_roots.max(roots.len());
        let take = self.opts.max_branches.unwrap_or(usize::MAX);
        let v = from_sub[last];
        let base: Vec<MPoly> = sub_system
            .polys()
            .iter()
            .map(|p| p.compose(&self.ring, &from_sub.iter().map(|&w| MPoly::var(&self.ring, w)).collect::<Vec<_>>()))
            .collect::<Result<_>>()?;
        let rest: Vec<usize> = free.iter().copied().filter(|&w| w != v).collect();
        for alpha in roots.into_iter().take(take) {
            let mut next_point = point.clone();
            next_point[v] = Some(alpha);
            let next: Vec<MPoly> = base.iter().map(|p| p.substitute_value(v, alpha)).collect();
            self.descend(next, rest.clone(), next_point, subs.clone())?;
        }
        Ok(())
    }

    /// Whether the members have pure-power leading monomials covering `free` exactly once.
    fn is_shaped(&self, polys: &[MPoly], free: &[usize]) -> bool {
        if polys.len() != free.len() {
            return false;
        }
        let mut seen = Vec::with_capacity(free.len());
        for p in polys {
            match p.leading_monomial(&self.order).and_then(Monomial::as_pure_power) {
                Some((v, _)) if free.contains(&v) && !seen.contains(&v) => seen.push(v),
                _ => return false,
            }
        }
        true
    }

    /// Sub-ring on the free variables, keeping their relative order.
    fn restrict(&self, free: &[usize]) -> (Arc<Ring>, TermOrder, Vec<Option<usize>>, Vec<usize>) {
        let mut sorted = free.to_vec();
        sorted.sort_by_key(|&v| self.order.rank_of(v));
        let names = sorted.iter().map(|&v| self.ring.name(v).to_string()).collect();
        let ring = Ring::new(self.ring.field(), names);
        let mut to_sub = vec![None; self.ring.nvars()];
        for (k, &v) in sorted.iter().enumerate() {
            to_sub[v] = Some(k);
        }
        let order = TermOrder::new(self.order.kind(), (0..sorted.len()).collect()).expect("identity permutation");
        (ring, order, to_sub, sorted)
    }

    fn emit(&mut self, point: &[Option<FieldElement>], subs: &[(usize, MPoly)]) {
        let field = self.ring.field();
        let mut values: Vec<FieldElement> = point.iter().map(|v| v.unwrap_or(field.zero())).collect();
        for (u, expr) in subs.iter().rev() {
            values[*u] = expr.eval(&values);
        }
        self.out.push(values);
    }
}

/// Drops zero members; `None` when a nonzero constant makes the system inconsistent.
fn normalize(polys: Vec<MPoly>) -> Option<Vec<MPoly>> {
    let mut out = Vec::with_capacity(polys.len());
    for p in polys {
        if p.is_zero() {
            continue;
        }
        if p.is_constant() {
            return None;
        }
        out.push(p);
    }
    Some(out)
}

/// Deterministic FGLM: converts a zero-dimensional Gröbner basis under `from`
/// into the reduced Gröbner basis under `to`.
pub fn fglm(g: &PolySystem, from: &TermOrder, to: &TermOrder, budget: &Budget) -> Result<PolySystem> {
    let ring = g.ring().clone();
    let field = ring.field();
    let n = ring.nvars();
    let basis = quotient_basis(g, from)?;
    if basis.is_empty() {
        return PolySystem::new(&ring, vec![MPoly::one(&ring)]);
    }
    let dim = basis.len();
    let one_index = basis.iter().position(Monomial::is_one).ok_or(Error::NotZeroDimensional)?;
    let mults: Vec<MultiplicationMatrix> = (0..n).map(|v| multiplication_matrix(g, from, v)).collect::<Result<_>>()?;
    let mut meter = budget.meter();
    // Staircase monomials under `to` and an echelon form of their normal forms,
    // each row carrying its expression in staircase coordinates.
    let mut stairs: Vec<Monomial> = Vec::new();
    let mut echelon: Vec<(usize, Vec<FieldElement>, Vec<FieldElement>)> = Vec::new();
    let mut leading: Vec<Monomial> = Vec::new();
    let mut members: Vec<MPoly> = Vec::new();
    let mut queue: Vec<(Monomial, Vec<FieldElement>)> = Vec::new();
    let mut unit = vec![field.zero(); dim];
    unit[one_index] = field.one();
    queue.push((Monomial::one(n), unit));
    while !queue.is_empty() {
        meter.tick(1)?;
        let best = (0..queue.len()).min_by(|&a, &b| to.compare(&queue[a].0, &queue[b].0)).expect("nonempty");
        let (t, nf) = queue.swap_remove(best);
        queue.retain(|(m, _)| *m != t);
        if leading.iter().any(|l| l.divides(&t)) || stairs.contains(&t) {
            continue;
        }
        let mut residual = nf.clone();
        let mut combo = vec![field.zero(); stairs.len() + 1];
        combo[stairs.len()] = field.one();
        for (pivot, row, expr) in &echelon {
            let c = residual[*pivot];
            if c.is_zero() {
                continue;
            }
            let neg = field.neg(c);
            for (r, &e) in residual.iter_mut().zip(row) {
                *r = field.mul_add(*r, neg, e);
            }
            for (k, &e) in expr.iter().enumerate() {
                combo[k] = field.mul_add(combo[k], neg, e);
            }
        }
        match residual.iter().position(|c| !c.is_zero()) {
            None => {
                let mut poly = MPoly::term(&ring, field.one(), t.clone());
                for (k, s) in stairs.iter().enumerate() {
                    poly.add_term(s.clone(), combo[k]);
                }
                leading.push(t);
                members.push(poly);
            }
            Some(pivot) => {
                let inv = field.inv(residual[pivot])?;
                let row: Vec<FieldElement> = residual.iter().map(|&c| field.mul(c, inv)).collect();
                let expr: Vec<FieldElement> = combo.iter().map(|&c| field.mul(c, inv)).collect();
                echelon.push((pivot, row, expr));
                for e in &mut echelon {
                    e.2.resize(stairs.len() + 1, field.zero());
                }
                stairs.push(t.clone());
                for (v, m) in mults.iter().enumerate() {
                    let next = t.mul(&Monomial::var(n, v));
                    if leading.iter().any(|l| l.divides(&next)) {
                        continue;
                    }
                    let image = row_times(&nf, &m.matrix);
                    queue.push((next, image));
                }
            }
        }
    }
    members.sort_by(by_leading_monomial_desc(to));
    PolySystem::new(&ring, members)
}

/// Row vector times matrix.
fn row_times(v: &[FieldElement], m: &DenseMatrix) -> Vec<FieldElement> {
    let field = m.field();
    let mut out = vec![field.zero(); m.cols()];
    for (i, &c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (o, &e) in out.iter_mut().zip(m.row(i)) {
            *o = field.mul_add(*o, c, e);
        }
    }
    out
}

/// How a Ciminion key is recovered.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CiminionStrategy {
    /// Roots of Bariant's univariate polynomial, keys read off the inverted rounds.
    Bariant,
    /// Eigenvalue solver on the downsized Gröbner basis, keys from the linear members.
    Eigenvalue,
}

impl CiminionStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            CiminionStrategy::Bariant => "bariant",
            CiminionStrategy::Eigenvalue => "eigenvalue",
        }
    }

    /// Bariant for the standard cipher, the eigenvalue solver for the variants.
    pub fn default_for(variant: Variant) -> Self {
        match variant {
            Variant::Standard => CiminionStrategy::Bariant,
            _ => CiminionStrategy::Eigenvalue,
        }
    }
}

/// Outcome of a Ciminion key recovery.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CiminionRecovery {
    pub strategy: CiminionStrategy,
    /// Verified keys `(K1, K2)`, ascending.
    pub keys: Vec<(FieldElement, FieldElement)>,
    /// Candidates tested before verification.
    pub candidates: usize,
    pub stats: SolveStats,
}

/// Recovers `(K1, K2)` with the default strategy for the variant.
pub fn recover_ciminion_key(params: &CiminionParams, sample: &CiminionSample, opts: &SolveOptions) -> Result<CiminionRecovery> {
    recover_ciminion_key_with(params, sample, CiminionStrategy::default_for(params.variant()), opts)
}

/// Recovers `(K1, K2)`; every returned key re-encrypts to the sample.
pub fn recover_ciminion_key_with(
    params: &CiminionParams,
    sample: &CiminionSample,
    strategy: CiminionStrategy,
    opts: &SolveOptions,
) -> Result<CiminionRecovery> {
    let (candidates, stats) = match strategy {
        CiminionStrategy::Bariant => {
            let [f1, f2, f3] = ciminion::invert_rounds(params, sample)?;
            let f = f1.sub(&UniPoly::constant(params.field(), sample.nonce));
            let roots = uni_roots(&f)?;
            let stats = SolveStats { branches: 1, charpolys: 0, rebased: 0, max_roots: roots.len(), candidates: roots.len() };
            (roots.into_iter().map(|x| (f2.eval(x), f3.eval(x))).collect::<Vec<_>>(), stats)
        }
        CiminionStrategy::Eigenvalue => {
            let model = ciminion::build_model(params, sample);
            let gb = ciminion::ciminion_gb(&model)?;
            let small = ciminion::downsize(&gb)?;
            let solved = eigen_solve(&small.system, &small.order, None, opts)?;
            let mut keys = Vec::with_capacity(solved.solutions.len());
            for sol in &solved.solutions {
                let mut point: Vec<Option<FieldElement>> = vec![None; model.ring().nvars()];
                for (k, &v) in small.full_index.iter().enumerate() {
                    point[v] = Some(sol[k]);
                }
                let full = solve_linear_members(&gb, &model.order, point)?;
                keys.push((full[model.y(1)], full[model.y(2)]));
            }
            (keys, solved.stats)
        }
    };
    let count = candidates.len();
    let mut keys: Vec<(FieldElement, FieldElement)> =
        candidates.into_iter().filter(|&k| params.verify(k, sample)).collect();
    keys.sort();
    keys.dedup();
    if keys.is_empty() {
        return Err(Error::NoSolution);
    }
    Ok(CiminionRecovery { strategy, keys, candidates: count, stats })
}

/// Completes `point` through the affine members of `gb`, each solved for its leading variable.
fn solve_linear_members(gb: &PolySystem, order: &TermOrder, mut point: Vec<Option<FieldElement>>) -> Result<Vec<FieldElement>> {
    let field = gb.field();
    let mut pending: Vec<&MPoly> = gb.polys().iter().filter(|p| p.is_affine() && !p.is_constant()).collect();
    while !pending.is_empty() {
        let before = pending.len();
        pending.retain(|p| {
            let lm = p.leading_monomial(order).expect("nonconstant");
            let (pivot, _) = lm.as_pure_power().expect("affine");
            if p.variables().iter().any(|&v| v != pivot && point[v].is_none()) {
                return true;
            }
            let known: Vec<FieldElement> = point.iter().map(|v| v.unwrap_or(field.zero())).collect();
            let a = p.coeff(lm);
            let mut rest = (*p).clone();
            rest.add_term(lm.clone(), field.neg(a));
            let value = field.neg(field.div(rest.eval(&known), a).expect("leading coefficient is nonzero"));
            point[pivot] = Some(value);
            false
        });
        if pending.len() == before {
            return Err(Error::ShapeUnavailable);
        }
    }
    point.into_iter().map(|v| v.ok_or(Error::ShapeUnavailable)).collect()
}

/// Outcome of a Hydra key recovery.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HydraRecovery {
    /// Verified witnesses `(k, y, z)`, ascending by key.
    pub witnesses: Vec<HydraWitness>,
    pub candidates: usize,
    pub stats: SolveStats,
}

/// Recovers the Hydra key from the first two outputs: eigenvalue solver on the
/// quadratic Gröbner basis filtered by the four extras, then pull-back through
/// the coordinate change and the affine substitutions.
pub fn recover_hydra_key(params: &HydraParams, outputs: &HydraSamplePair, opts: &SolveOptions) -> Result<HydraRecovery> {
    let model = hydra::build_model(params, outputs);
    let reduction = hydra::reduce_model(&model)?;
    let res = &reduction.result;
    let solved = eigen_solve(&res.gb, &res.order, Some(&res.extras), opts)?;
    let mut witnesses = Vec::new();
    for hat in &solved.solutions {
        let point = reduction.lift(hat)?;
        let w = model.witness_from_point(&point);
        if model.system.vanishes_at(&point) && params.heads_sample(&w.k, &w.y, &w.z) == *outputs {
            witnesses.push(w);
        }
    }
    witnesses.sort_by_key(|w| (w.k, w.y, w.z));
    witnesses.dedup();
    if witnesses.is_empty() {
        return Err(Error::NoSolution);
    }
    Ok(HydraRecovery { witnesses, candidates: solved.solutions.len(), stats: solved.stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PrimeField;
    use crate::mpoly::is_groebner;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn sys(q: u128, n: usize, polys: &[&str]) -> PolySystem {
        let r = Ring::with_indexed(PrimeField::new(q).unwrap(), "x", n);
        PolySystem::new(&r, polys.iter().map(|p| MPoly::parse(&r, p).unwrap()).collect()).unwrap()
    }

    #[test]
    fn multiplication_matrix_examples() {
        let g = sys(7741, 1, &["x1^2 - 1"]);
        let m = multiplication_matrix(&g, &TermOrder::drl(1), 0).unwrap();
        assert_eq!(m.matrix, DenseMatrix::from_i64(g.field(), &[&[0, 1], &[1, 0]]).unwrap());
        let g = sys(7741, 2, &["x1^2 - 1", "x2^2 - x1"]);
        let m = multiplication_matrix(&g, &TermOrder::drl(2), 1).unwrap();
        assert_eq!(m.matrix.rows(), 4);
    }

    #[test]
    fn block_charpoly_examples() {
        let g = sys(7741, 1, &["x1^2 - 1"]);
        let f = g.field();
        assert_eq!(block_charpoly(&g, &TermOrder::drl(1)).unwrap(), UniPoly::from_i64(f, &[-1, 0, 1]));
        let g = sys(7741, 2, &["x1^2 - 1", "x2^2 - x1"]);
        assert_eq!(block_charpoly(&g, &TermOrder::drl(2)).unwrap(), UniPoly::from_i64(f, &[-1, 0, 0, 0, 1]));
        let bad = sys(7741, 2, &["x1*x2 - 1", "x2^2 - 1"]);
        assert!(matches!(block_charpoly(&bad, &TermOrder::drl(2)), Err(Error::ShapeViolation(_))));
    }

    #[test]
    fn eigen_solve_small_examples() {
        let g = sys(5, 2, &["x1^2 - 1", "x2^2 - x1"]);
        let f = g.field();
        let out = eigen_solve(&g, &TermOrder::drl(2), None, &SolveOptions::default()).unwrap();
        let expect: Vec<Vec<FieldElement>> =
            [(1, 1), (1, 4), (4, 2), (4, 3)].iter().map(|&(a, b)| vec![f.elem(a), f.elem(b)]).collect();
        assert_eq!(out.solutions, expect);
        // 2 is a non-residue mod 5.
        let g = sys(5, 1, &["x1^2 - 2"]);
        assert!(eigen_solve(&g, &TermOrder::drl(1), None, &SolveOptions::default()).unwrap().solutions.is_empty());
    }

    #[test]
    fn eigen_solve_uses_extras_as_filter() {
        let g = sys(7741, 2, &["x1^2 - 1", "x2^2 - 4"]);
        let extra = sys(7741, 2, &["x1 - 1"]);
        let out = eigen_solve(&g, &TermOrder::drl(2), Some(&extra), &SolveOptions::default()).unwrap();
        assert_eq!(out.solutions.len(), 2);
        assert!(out.solutions.iter().all(|s| s[0] == g.field().one()));
    }

    #[test]
    fn fglm_examples() {
        let g = sys(7741, 2, &["x1", "x2"]);
        let lex = TermOrder::lex(2);
        assert_eq!(fglm(&g, &TermOrder::drl(2), &lex, &Budget::UNLIMITED).unwrap(), g);
        let g = sys(7741, 3, &["x1 + x2 + x3", "x1*x2 + x2*x3 + x3*x1", "x1*x2*x3 - 1"]);
        let lex = TermOrder::lex(3);
        let drl = buchberger(&g, &TermOrder::drl(3), &Budget::UNLIMITED).unwrap();
        let converted = fglm(&drl, &TermOrder::drl(3), &lex, &Budget::UNLIMITED).unwrap();
        assert!(is_groebner(&converted, &lex).unwrap());
        assert_eq!(converted, buchberger(&g, &lex, &Budget::UNLIMITED).unwrap());
    }

    #[test]
    fn ciminion_standard_recovery_small() {
        let f = PrimeField::new(7741).unwrap();
        let params = CiminionParams::with_total_rounds(f, 5, b"unit", Variant::Standard).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let (keys, sample) = params.random_sample(&mut rng);
        for strategy in [CiminionStrategy::Bariant, CiminionStrategy::Eigenvalue] {
            let rec = recover_ciminion_key_with(&params, &sample, strategy, &SolveOptions::default()).unwrap();
            assert!(rec.keys.contains(&keys), "{strategy:?}");
        }
        let mut tampered = sample;
        tampered.c1 = f.add(tampered.c1, f.one());
        let rec = recover_ciminion_key(&params, &tampered, &SolveOptions::default());
        assert!(matches!(rec, Err(Error::NoSolution)) || !rec.unwrap().keys.contains(&keys));
    }

    #[test]
    fn hydra_recovery_two_rounds() {
        let f = PrimeField::new(7741).unwrap();
        let params = HydraParams::concrete(f, 2, b"unit").unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let (w, outputs) = params.random_instance(&mut rng);
        let rec = recover_hydra_key(&params, &outputs, &SolveOptions::default()).unwrap();
        assert!(rec.witnesses.contains(&w));
    }
}
