//! The Ciminion PRF on its first key pair, the Ciminion2 and "fix" variants,
//! the iterated polynomial model, its three-step DRL Gröbner basis, the LEX
//! shape-position basis by back substitution, and Bariant's univariate polynomial.
//!
//! Round `i` maps `(x, y, z)` to `A_i·(x, y, z + x·y + κ_i) + c^{(i)}` where
//! `A_i = [[0,0,1],[1,c4,c4],[0,1,1]]` and `κ_i` is the variant's key term:
//! zero for the standard cipher, `α·K1 + β·K2` in round `r_C + 1` (the first
//! round of `p_E`) for the fix, and `K1 + K2` in every round except the first
//! for Ciminion2.

use std::sync::Arc;

use rand::RngCore;

use crate::algebra::{FieldElement, PrimeField, UniPoly};
use crate::error::{Error, Result};
use crate::mpoly::{linear_rref, MPoly, Monomial, OrderKind, PolySystem, Reducer, Ring, Role, TermOrder};
use crate::seed::rng_for;

/// Per-round constants `(c1, c2, c3, c4)` with `c4 ∉ {0, 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RoundConstants {
    pub c1: FieldElement,
    pub c2: FieldElement,
    pub c3: FieldElement,
    pub c4: FieldElement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Standard,
    /// Adds `α·K1 + β·K2` to the nonlinear slot of round `r_C + 1`.
    Fix { alpha: FieldElement, beta: FieldElement },
    /// Adds `K1 + K2` to the nonlinear slot of rounds `2..=r`.
    Ciminion2,
}

impl Variant {
    /// The fix variant with the default `α = β = 1`.
    pub fn fix_default() -> Self {
        Variant::Fix { alpha: FieldElement::ONE, beta: FieldElement::ONE }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Variant::Standard => "standard",
            Variant::Fix { .. } => "fix",
            Variant::Ciminion2 => "ciminion2",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CiminionParams {
    field: PrimeField,
    r_c: usize,
    r_e: usize,
    constants: Vec<RoundConstants>,
    variant: Variant,
}

/// One nonce/plaintext/ciphertext sample under the first key pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CiminionSample {
    pub nonce: FieldElement,
    pub p1: FieldElement,
    pub p2: FieldElement,
    pub c1: FieldElement,
    pub c2: FieldElement,
}

/// Deterministic round constants for `r` rounds; `c4` is resampled until it avoids {0, 1}.
pub fn derive_constants(field: PrimeField, seed: &[u8], r: usize) -> Vec<RoundConstants> {
    let mut rng = rng_for(seed, "ciminion/round-constants");
    (0..r)
        .map(|_| {
            let c1 = field.random(&mut rng);
            let c2 = field.random(&mut rng);
            let c3 = field.random(&mut rng);
            let mut c4 = field.random(&mut rng);
            while c4.value() <= 1 {
                c4 = field.random(&mut rng);
            }
            RoundConstants { c1, c2, c3, c4 }
        })
        .collect()
}

impl CiminionParams {
    pub fn new(
        field: PrimeField,
        r_c: usize,
        r_e: usize,
        constants: Vec<RoundConstants>,
        variant: Variant,
    ) -> Result<Self> {
        if r_c < 1 || r_e < 1 {
            return Err(Error::InvalidParams("r_C and r_E must be at least 1".into()));
        }
        if constants.len() != r_c + r_e {
            return Err(Error::InvalidParams(format!(
                "expected {} round constants, got {}",
                r_c + r_e,
                constants.len()
            )));
        }
        if constants.iter().any(|c| c.c4.value() <= 1) {
            return Err(Error::InvalidParams("round constant c4 must avoid {0, 1}".into()));
        }
        if let Variant::Fix { alpha, beta } = variant {
            if alpha.is_zero() || beta.is_zero() {
                return Err(Error::InvalidParams("fix coefficients must be nonzero".into()));
            }
        }
        Ok(CiminionParams { field, r_c, r_e, constants, variant })
    }

    /// Parameters whose constants come from [`derive_constants`].
    pub fn from_seed(field: PrimeField, r_c: usize, r_e: usize, seed: &[u8], variant: Variant) -> Result<Self> {
        Self::new(field, r_c, r_e, derive_constants(field, seed, r_c + r_e), variant)
    }

    /// Splits `r` total rounds as `r_C = r − 1`, `r_E = 1`.
    pub fn with_total_rounds(field: PrimeField, r: usize, seed: &[u8], variant: Variant) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidParams("at least two rounds required".into()));
        }
        Self::from_seed(field, r - 1, 1, seed, variant)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn r_c(&self) -> usize {
        self.r_c
    }

    pub fn r_e(&self) -> usize {
        self.r_e
    }

    /// Total rounds `r = r_C + r_E`.
    pub fn rounds(&self) -> usize {
        self.r_c + self.r_e
    }

    pub fn constants(&self) -> &[RoundConstants] {
        &self.constants
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Key coefficients `(a, b)` such that round `i` (1-based) adds `a·K1 + b·K2`.
    fn key_coeffs(&self, i: usize) -> Option<(FieldElement, FieldElement)> {
        match self.variant {
            Variant::Standard => None,
            Variant::Fix { alpha, beta } => (i == self.r_c + 1).then_some((alpha, beta)),
            Variant::Ciminion2 => (i >= 2).then_some((FieldElement::ONE, FieldElement::ONE)),
        }
    }

    /// Round `i` (1-based) on a concrete state.
    pub fn round(&self, i: usize, state: [FieldElement; 3], keys: (FieldElement, FieldElement)) -> [FieldElement; 3] {
        let f = self.field;
        let c = self.constants[i - 1];
        let [x, y, z] = state;
        let mut t = f.mul_add(z, x, y);
        if let Some((a, b)) = self.key_coeffs(i) {
            t = f.add(t, f.add(f.mul(a, keys.0), f.mul(b, keys.1)));
        }
        [
            f.add(t, c.c1),
            f.add(f.add(x, f.mul(c.c4, f.add(y, t))), c.c2),
            f.add(f.add(y, t), c.c3),
        ]
    }

    /// States after each of the `r` rounds starting from `(ℵ, K1, K2)`.
    pub fn states(&self, keys: (FieldElement, FieldElement), nonce: FieldElement) -> Vec<[FieldElement; 3]> {
        let mut state = [nonce, keys.0, keys.1];
        (1..=self.rounds())
            .map(|i| {
                state = self.round(i, state, keys);
                state
            })
            .collect()
    }

    /// Encrypts one plaintext pair under the first key pair.
    pub fn encrypt(
        &self,
        keys: (FieldElement, FieldElement),
        nonce: FieldElement,
        plaintext: (FieldElement, FieldElement),
    ) -> (FieldElement, FieldElement) {
        let f = self.field;
        let out = *self.states(keys, nonce).last().expect("at least one round");
        (f.add(plaintext.0, out[0]), f.add(plaintext.1, out[1]))
    }

    /// Encrypts `plaintext.len()` pairs. Pair `j ≥ 2` uses the state
    /// `rol(S + (0, K_{2j−1}, K_{2j}))` where `S` is the previous pre-`p_E`
    /// state; `keys` must hold `2·plaintext.len()` elements.
    pub fn encrypt_blocks(
        &self,
        keys: &[FieldElement],
        nonce: FieldElement,
        plaintext: &[(FieldElement, FieldElement)],
    ) -> Result<Vec<(FieldElement, FieldElement)>> {
        if keys.len() != 2 * plaintext.len() || plaintext.is_empty() {
            return Err(Error::InvalidParams("two key elements per plaintext pair required".into()));
        }
        let f = self.field;
        let k = (keys[0], keys[1]);
        let mut state = [nonce, keys[0], keys[1]];
        for i in 1..=self.r_c {
            state = self.round(i, state, k);
        }
        let mut out = Vec::with_capacity(plaintext.len());
        for (j, &(p1, p2)) in plaintext.iter().enumerate() {
            if j > 0 {
                let s = [state[0], f.add(state[1], keys[2 * j]), f.add(state[2], keys[2 * j + 1])];
                state = rol(f, s);
            }
            let mut e = state;
            for i in self.r_c + 1..=self.rounds() {
                e = self.round(i, e, k);
            }
            out.push((f.add(p1, e[0]), f.add(p2, e[1])));
        }
        Ok(out)
    }

    /// Samples a fresh `(K1, K2, sample)` from `rng`.
    pub fn random_sample<R: RngCore>(&self, rng: &mut R) -> ((FieldElement, FieldElement), CiminionSample) {
        let f = self.field;
        let keys = (f.random(rng), f.random(rng));
        let nonce = f.random(rng);
        let (p1, p2) = (f.random(rng), f.random(rng));
        let (c1, c2) = self.encrypt(keys, nonce, (p1, p2));
        (keys, CiminionSample { nonce, p1, p2, c1, c2 })
    }

    /// Whether `keys` reproduce the sample.
    pub fn verify(&self, keys: (FieldElement, FieldElement), sample: &CiminionSample) -> bool {
        self.encrypt(keys, sample.nonce, (sample.p1, sample.p2)) == (sample.c1, sample.c2)
    }
}

/// The rolling function `(x, y, z) ↦ (z + x·y, x, y)`.
pub fn rol(f: PrimeField, s: [FieldElement; 3]) -> [FieldElement; 3] {
    [f.mul_add(s[2], s[0], s[1]), s[0], s[1]]
}

/// The iterated model: `3r` polynomials in `3r` variables ordered
/// `y1 > y2 > x^{(1)} > … > x^{(r−1)} > x`.
#[derive(Clone, Debug)]
pub struct CiminionModel {
    pub system: PolySystem,
    pub order: TermOrder,
    params: CiminionParams,
    sample: CiminionSample,
}

impl CiminionModel {
    pub fn ring(&self) -> &Arc<Ring> {
        self.system.ring()
    }

    pub fn rounds(&self) -> usize {
        self.params.rounds()
    }

    pub fn params(&self) -> &CiminionParams {
        &self.params
    }

    pub fn sample(&self) -> &CiminionSample {
        &self.sample
    }

    /// Index of `y1` (`j = 1`) or `y2` (`j = 2`).
    pub fn y(&self, j: usize) -> usize {
        j - 1
    }

    /// Index of `x_j^{(i)}` for `1 ≤ i ≤ r − 1`, `1 ≤ j ≤ 3`.
    pub fn x(&self, i: usize, j: usize) -> usize {
        2 + 3 * (i - 1) + (j - 1)
    }

    /// Index of the last variable `x`.
    pub fn x_last(&self) -> usize {
        3 * self.rounds() - 1
    }

    /// Index of the variable standing for the third component after round `i`
    /// (`x3^{(i)}`, or `x` when `i = r`).
    pub fn third(&self, i: usize) -> usize {
        if i == self.rounds() {
            self.x_last()
        } else {
            self.x(i, 3)
        }
    }

    /// The model assignment induced by the true encryption trace.
    pub fn trace(&self, keys: (FieldElement, FieldElement)) -> Vec<FieldElement> {
        let states = self.params.states(keys, self.sample.nonce);
        let mut point = vec![keys.0, keys.1];
        for s in &states[..states.len() - 1] {
            point.extend_from_slice(s);
        }
        point.push(states[states.len() - 1][2]);
        point
    }
}

fn model_ring(field: PrimeField, r: usize) -> Arc<Ring> {
    let mut names = vec!["y1".to_string(), "y2".to_string()];
    for i in 1..r {
        for j in 1..=3 {
            names.push(format!("x{j}_{i}"));
        }
    }
    names.push("x".to_string());
    Ring::new(field, names)
}

/// Builds the iterated model for one sample.
pub fn build_model(params: &CiminionParams, sample: &CiminionSample) -> CiminionModel {
    let f = params.field;
    let r = params.rounds();
    let ring = model_ring(f, r);
    let var = |i: usize| MPoly::var(&ring, i);
    let cst = |c: FieldElement| MPoly::constant(&ring, c);
    let x_idx = |i: usize, j: usize| 2 + 3 * (i - 1) + (j - 1);
    let (y1, y2) = (var(0), var(1));
    let mut polys = Vec::with_capacity(3 * r);
    for i in 1..=r {
        let input: [MPoly; 3] = if i == 1 {
            [cst(sample.nonce), y1.clone(), y2.clone()]
        } else {
            [var(x_idx(i - 1, 1)), var(x_idx(i - 1, 2)), var(x_idx(i - 1, 3))]
        };
        let output: [MPoly; 3] = if i == r {
            [cst(f.sub(sample.c1, sample.p1)), cst(f.sub(sample.c2, sample.p2)), var(3 * r - 1)]
        } else {
            [var(x_idx(i, 1)), var(x_idx(i, 2)), var(x_idx(i, 3))]
        };
        let image = symbolic_round(params, i, &input, &y1, &y2);
        for j in 0..3 {
            polys.push(image[j].sub(&output[j]));
        }
    }
    CiminionModel {
        system: PolySystem::new(&ring, polys).expect("one ring"),
        order: TermOrder::drl(3 * r),
        params: params.clone(),
        sample: *sample,
    }
}

/// Round `i` applied to polynomial inputs; `k1`, `k2` stand for the key.
fn symbolic_round(params: &CiminionParams, i: usize, u: &[MPoly; 3], k1: &MPoly, k2: &MPoly) -> [MPoly; 3] {
    let c = params.constants[i - 1];
    let mut t = u[2].add(&u[0].mul(&u[1]));
    if let Some((a, b)) = params.key_coeffs(i) {
        t = t.add(&k1.scale(a)).add(&k2.scale(b));
    }
    [
        t.add_constant(c.c1),
        u[0].add(&u[1].add(&t).scale(c.c4)).add_constant(c.c2),
        u[1].add(&t).add_constant(c.c3),
    ]
}

/// `A^{-1}·v` for `A = [[0,0,1],[1,c4,c4],[0,1,1]]`, i.e. `(v2 − c4·v3, v3 − v1, v1)`.
fn apply_a_inv(c4: FieldElement, v: &[MPoly; 3]) -> [MPoly; 3] {
    [v[1].sub(&v[2].scale(c4)), v[2].sub(&v[0]), v[0].clone()]
}

/// Three-step construction of a DRL Gröbner basis of the model.
///
/// Members are returned as the `2r + 1` linear polynomials (leading variables
/// `y1, y2, x3^{(1)}, x1^{(i)}, x2^{(i)}`, in decreasing order) followed by the
/// `r − 1` quadratics obtained from rounds `2, …, r` in that order.
pub fn ciminion_gb(model: &CiminionModel) -> Result<PolySystem> {
    let params = &model.params;
    let r = model.rounds();
    let ring = model.ring().clone();
    let order = &model.order;
    if params.constants.iter().any(|c| c.c4.value() <= 1) {
        return Err(Error::InvalidParams("round constant c4 must avoid {0, 1}".into()));
    }
    // Step 1: g^{(i)} = A_i^{-1} f^{(i)}.
    let polys = model.system.polys();
    let g: Vec<[MPoly; 3]> = (0..r)
        .map(|i| {
            let block = [polys[3 * i].clone(), polys[3 * i + 1].clone(), polys[3 * i + 2].clone()];
            apply_a_inv(params.constants[i].c4, &block)
        })
        .collect();

    // Step 2: collect the linear polynomials. The first round is combined as in
    // the proof so that its three members lead with x3^{(1)}, y1 and y2.
    let nonce = model.sample.nonce;
    let mut linear = Vec::with_capacity(2 * r + 1);
    let first_1 = if r >= 2 { g[0][0].add(&g[1][1]) } else { g[0][0].clone() };
    linear.push(first_1);
    linear.push(g[0][1].clone());
    linear.push(g[0][2].sub(&g[0][1].scale(nonce)));
    for gi in g.iter().skip(1) {
        linear.push(gi[0].clone());
        linear.push(gi[1].clone());
    }
    let linear = linear_rref(&ring, &linear, order)?;

    let mut expected: Vec<Monomial> = vec![Monomial::var(3 * r, model.y(1)), Monomial::var(3 * r, model.y(2))];
    if r >= 2 {
        expected.push(Monomial::var(3 * r, model.x(1, 3)));
    }
    for i in 1..r {
        expected.push(Monomial::var(3 * r, model.x(i, 1)));
        expected.push(Monomial::var(3 * r, model.x(i, 2)));
    }
    let mut got: Vec<Monomial> = linear.iter().filter_map(|p| p.leading_monomial(order).cloned()).collect();
    got.sort();
    expected.sort();
    if got != expected {
        return Err(Error::InvalidParams("linear layer does not have the expected leading variables".into()));
    }

    // Step 3: reduce the nonlinear members modulo the eliminated linear set.
    let reducer = Reducer::new(&linear, order);
    let mut quadratics = Vec::with_capacity(r - 1);
    for gi in g.iter().skip(1) {
        let q = reducer.reduce(&gi[2])?;
        if q.is_zero() {
            return Err(Error::InvalidParams("nonlinear member vanished modulo the linear layer".into()));
        }
        quadratics.push(q.monic(order));
    }
    let mut roles = vec![Role::Affine; linear.len()];
    roles.extend(std::iter::repeat(Role::Quadratic).take(quadratics.len()));
    let mut members = linear;
    members.extend(quadratics);
    PolySystem::with_roles(&ring, members, roles)
}

/// The quadratic part of a Ciminion Gröbner basis over its own ring.
#[derive(Clone, Debug)]
pub struct Downsized {
    /// The `r − 1` quadratics in `x3^{(2)}, …, x3^{(r−1)}, x`.
    pub system: PolySystem,
    pub order: TermOrder,
    /// `full_index[k]` is the model-ring index of downsized variable `k`.
    pub full_index: Vec<usize>,
}

/// Keeps the quadratic members and moves them to the ring of the variables they use.
pub fn downsize(gb: &PolySystem) -> Result<Downsized> {
    let quads: Vec<&MPoly> = gb.polys().iter().filter(|p| p.degree() == Some(2)).collect();
    let mut used: Vec<usize> = quads.iter().flat_map(|p| p.variables()).collect();
    used.sort_unstable();
    used.dedup();
    let ring = gb.ring();
    let sub = Ring::new(ring.field(), used.iter().map(|&v| ring.name(v).to_string()).collect());
    let mut map = vec![None; ring.nvars()];
    for (k, &v) in used.iter().enumerate() {
        map[v] = Some(k);
    }
    let polys = quads.iter().map(|p| p.map_ring(&sub, &map)).collect::<Result<Vec<_>>>()?;
    Ok(Downsized { system: PolySystem::new(&sub, polys)?, order: TermOrder::drl(used.len()), full_index: used })
}

/// Converts a univariate polynomial into the variable `var` of `ring`.
pub fn uni_to_mpoly(ring: &Arc<Ring>, var: usize, p: &UniPoly) -> MPoly {
    let n = ring.nvars();
    MPoly::from_terms(
        ring,
        p.coeffs().iter().enumerate().map(|(e, &c)| (Monomial::var_pow(n, var, e as u16), c)),
    )
}

/// Solution of the back-substitution chain: every model variable as a
/// univariate polynomial in `x`, reduced modulo the univariate `f̃`.
#[derive(Clone, Debug)]
pub struct ShapeSolution {
    pub univariate: UniPoly,
    pub coordinates: Vec<UniPoly>,
}

/// Runs the substitution chain on a basis returned by [`ciminion_gb`].
pub fn shape_solution(model: &CiminionModel, gb: &PolySystem) -> Result<ShapeSolution> {
    let f = model.params.field;
    let r = model.rounds();
    let n = 3 * r;
    let (linear, quadratics): (Vec<&MPoly>, Vec<&MPoly>) = gb.polys().iter().partition(|p| p.is_affine());
    if quadratics.len() != r - 1 {
        return Err(Error::ShapeUnavailable);
    }
    let mut known: Vec<Option<UniPoly>> = vec![None; n];
    known[model.x_last()] = Some(UniPoly::x(f));
    // Quadratic from round i determines x3^{(i−1)} once x3^{(i)}, …, x are known.
    for i in (3..=r).rev() {
        let q = quadratics[i - 2];
        let target = model.x(i - 1, 3);
        let (a, rest) = split_linear_in(q, target).ok_or(Error::ShapeUnavailable)?;
        if rest.variables().iter().any(|&v| known[v].is_none()) {
            return Err(Error::ShapeUnavailable);
        }
        let value = rest.eval_uni(&known)?.scale(f.neg(f.inv(a)?));
        known[target] = Some(value);
    }
    let last = quadratics[0];
    if last.variables().iter().any(|&v| known[v].is_none()) {
        return Err(Error::ShapeUnavailable);
    }
    let univariate = last.eval_uni(&known)?.monic();
    if univariate.degree() != Some(1 << (r - 1)) {
        return Err(Error::ShapeUnavailable);
    }
    for p in &linear {
        let lm = p.leading_monomial(&model.order).ok_or(Error::ShapeUnavailable)?;
        let (pivot, _) = lm.as_pure_power().ok_or(Error::ShapeUnavailable)?;
        let (a, rest) = split_linear_in(p, pivot).ok_or(Error::ShapeUnavailable)?;
        let value = rest.eval_uni(&known)?.scale(f.neg(f.inv(a)?));
        known[pivot] = Some(value);
    }
    let coordinates = known
        .into_iter()
        .map(|k| k.ok_or(Error::ShapeUnavailable).and_then(|p| p.rem(&univariate)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ShapeSolution { univariate, coordinates })
}

/// Writes `p = a·x_v + rest` with `a` constant and `x_v` absent from `rest`.
fn split_linear_in(p: &MPoly, v: usize) -> Option<(FieldElement, MPoly)> {
    let n = p.nvars();
    let lin = Monomial::var(n, v);
    let mut rest = MPoly::zero(p.ring());
    let mut a = None;
    for (m, &c) in p.terms() {
        if m.exponents()[v] == 0 {
            rest.add_term(m.clone(), c);
        } else if *m == lin {
            a = Some(c);
        } else {
            return None;
        }
    }
    a.map(|a| (a, rest))
}

/// LEX Gröbner basis in x-shape position: `f̃(x)` plus `v − g_v(x)` for every other variable.
pub fn lex_shape_basis(model: &CiminionModel, gb: &PolySystem) -> Result<PolySystem> {
    let sol = shape_solution(model, gb)?;
    let ring = model.ring();
    let xv = model.x_last();
    let lex = model.order.with_kind(OrderKind::Lex);
    let mut members = Vec::with_capacity(ring.nvars());
    for (v, g) in sol.coordinates.iter().enumerate() {
        if v == xv {
            continue;
        }
        members.push(MPoly::var(ring, v).sub(&uni_to_mpoly(ring, xv, g)));
    }
    members.push(uni_to_mpoly(ring, xv, &sol.univariate));
    members.sort_by(crate::mpoly::groebner::by_leading_monomial_desc(&lex));
    PolySystem::new(ring, members)
}

/// The three polynomials `(f1, f2, f3)` in `X` obtained by inverting all rounds
/// from the output state `(c1 − p1, c2 − p2, X)`; `f1(X) = ℵ`, `f2(X) = K1`,
/// `f3(X) = K2` hold at the true `X`.
pub fn invert_rounds(params: &CiminionParams, sample: &CiminionSample) -> Result<[UniPoly; 3]> {
    if params.variant != Variant::Standard {
        return Err(Error::VariantUnsupported);
    }
    let f = params.field;
    let mut w = [
        UniPoly::constant(f, f.sub(sample.c1, sample.p1)),
        UniPoly::constant(f, f.sub(sample.c2, sample.p2)),
        UniPoly::x(f),
    ];
    for i in (1..=params.rounds()).rev() {
        let c = params.constants[i - 1];
        let v = [
            w[0].sub(&UniPoly::constant(f, c.c1)),
            w[1].sub(&UniPoly::constant(f, c.c2)),
            w[2].sub(&UniPoly::constant(f, c.c3)),
        ];
        let u1 = v[1].sub(&v[2].scale(c.c4));
        let u2 = v[2].sub(&v[0]);
        let u3 = v[0].clone();
        let z = u3.sub(&u1.mul(&u2));
        w = [u1, u2, z];
    }
    Ok(w)
}

/// Bariant's univariate polynomial `f(X) = f1(X) − ℵ` of degree `2^{r−1}`.
pub fn bariant_polynomial(params: &CiminionParams, sample: &CiminionSample) -> Result<UniPoly> {
    let [f1, _, _] = invert_rounds(params, sample)?;
    Ok(f1.sub(&UniPoly::constant(params.field, sample.nonce)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::mpoly::{buchberger, is_groebner, quotient_basis};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn params(q: u128, r: usize, variant: Variant) -> CiminionParams {
        let f = PrimeField::new(q).unwrap();
        CiminionParams::with_total_rounds(f, r, b"unit", variant).unwrap()
    }

    /// Straight-line re-evaluation written independently of `round`.
    fn reference_encrypt(p: &CiminionParams, k: (u128, u128), nonce: u128, pt: (u128, u128)) -> (u128, u128) {
        let q = p.field().modulus();
        let (mut a, mut b, mut c) = (nonce % q, k.0 % q, k.1 % q);
        for (i, rc) in p.constants().iter().enumerate() {
            let key = match p.variant() {
                Variant::Standard => 0,
                Variant::Fix { alpha, beta } if i == p.r_c() => {
                    (alpha.value() * k.0 + beta.value() * k.1) % q
                }
                Variant::Fix { .. } => 0,
                Variant::Ciminion2 if i >= 1 => (k.0 + k.1) % q,
                Variant::Ciminion2 => 0,
            };
            let t = (c + a * b + key) % q;
            let (c4, c1, c2, c3) = (rc.c4.value(), rc.c1.value(), rc.c2.value(), rc.c3.value());
            let na = (t + c1) % q;
            let nb = (a + c4 * b + c4 * t + c2) % q;
            let nc = (b + t + c3) % q;
            (a, b, c) = (na, nb, nc);
        }
        ((pt.0 + a) % q, (pt.1 + b) % q)
    }

    #[test]
    fn round_check_value() {
        let f = PrimeField::new(7741).unwrap();
        let zero = f.zero();
        let rc = RoundConstants { c1: zero, c2: zero, c3: zero, c4: f.elem(2) };
        let p = CiminionParams::new(f, 1, 1, vec![rc, rc], Variant::Standard).unwrap();
        let one = f.one();
        assert_eq!(p.round(1, [one, one, one], (zero, zero)), [f.elem(2), f.elem(7), f.elem(3)]);
    }

    #[test]
    fn constants_are_deterministic_and_valid() {
        let f = PrimeField::new(31).unwrap();
        assert_eq!(derive_constants(f, b"a", 10), derive_constants(f, b"a", 10));
        assert!(derive_constants(f, b"a", 200).iter().all(|c| c.c4.value() > 1));
        let tables: std::collections::HashSet<String> =
            (0..100).map(|s| format!("{:?}", derive_constants(PrimeField::new(7741).unwrap(), &[s as u8], 4))).collect();
        assert_eq!(tables.len(), 100);
    }

    #[test]
    fn encryption_matches_reference_for_all_variants() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for variant in [Variant::Standard, Variant::fix_default(), Variant::Ciminion2] {
            let p = params(7741, 5, variant);
            for _ in 0..50 {
                let ((k1, k2), s) = p.random_sample(&mut rng);
                let expect = reference_encrypt(&p, (k1.value(), k2.value()), s.nonce.value(), (s.p1.value(), s.p2.value()));
                assert_eq!((s.c1.value(), s.c2.value()), expect);
            }
        }
    }

    #[test]
    fn multi_block_encryption_extends_single_block() {
        let p = params(7741, 4, Variant::Standard);
        let f = p.field();
        let keys: Vec<FieldElement> = (1..=4).map(|v| f.elem(v * 11)).collect();
        let pts = [(f.elem(5), f.elem(6)), (f.elem(7), f.elem(8))];
        let out = p.encrypt_blocks(&keys, f.elem(3), &pts).unwrap();
        assert_eq!(out[0], p.encrypt((keys[0], keys[1]), f.elem(3), pts[0]));
        assert_ne!(out[1], p.encrypt((keys[0], keys[1]), f.elem(3), pts[1]));
    }

    #[test]
    fn model_shape_and_trace() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        for variant in [Variant::Standard, Variant::fix_default(), Variant::Ciminion2] {
            for r in 2..=6 {
                let p = params(7741, r, variant);
                let (keys, s) = p.random_sample(&mut rng);
                let m = build_model(&p, &s);
                assert_eq!(m.system.len(), 3 * r);
                assert_eq!(m.ring().nvars(), 3 * r);
                let point = m.trace(keys);
                assert!(m.system.vanishes_at(&point));
                let mut wrong = point.clone();
                wrong[0] = p.field().add(wrong[0], p.field().one());
                assert!(!m.system.vanishes_at(&wrong));
            }
        }
    }

    #[test]
    fn gb_leading_monomials_and_membership() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let p = params(7741, 4, Variant::Standard);
        let (keys, s) = p.random_sample(&mut rng);
        let m = build_model(&p, &s);
        let gb = ciminion_gb(&m).unwrap();
        assert!(is_groebner(&gb, &m.order).unwrap());
        assert_eq!(quotient_basis(&gb, &m.order).unwrap().len(), 8);
        assert!(gb.vanishes_at(&m.trace(keys)));
        let quads: Vec<Monomial> = gb.polys()[9..].iter().map(|q| q.leading_monomial(&m.order).unwrap().clone()).collect();
        assert_eq!(quads, vec![Monomial::var_pow(12, m.x(2, 3), 2), Monomial::var_pow(12, m.x(3, 3), 2), Monomial::var_pow(12, m.x_last(), 2)]);
        // Ideal equality in both directions.
        let red_gb = Reducer::new(gb.polys(), &m.order);
        assert!(m.system.polys().iter().all(|f| red_gb.reduce(f).unwrap().is_zero()));
        let oracle = buchberger(&m.system, &m.order, &Budget::UNLIMITED).unwrap();
        let red_model = Reducer::new(oracle.polys(), &m.order);
        assert!(gb.polys().iter().all(|g| red_model.reduce(g).unwrap().is_zero()));
    }

    #[test]
    fn variants_still_yield_groebner_bases() {
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        for variant in [Variant::fix_default(), Variant::Ciminion2] {
            let p = params(7741, 5, variant);
            let (keys, s) = p.random_sample(&mut rng);
            let m = build_model(&p, &s);
            let gb = ciminion_gb(&m).unwrap();
            assert!(is_groebner(&gb, &m.order).unwrap());
            assert_eq!(quotient_basis(&gb, &m.order).unwrap().len(), 16);
            assert!(gb.vanishes_at(&m.trace(keys)));
            assert_eq!(lex_shape_basis(&m, &gb).unwrap_err(), Error::ShapeUnavailable);
            assert_eq!(bariant_polynomial(&p, &s).unwrap_err(), Error::VariantUnsupported);
        }
    }

    #[test]
    fn ciminion2_affine_parts_touch_every_remaining_variable() {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let p = params(7741, 6, Variant::Ciminion2);
        let (_, s) = p.random_sample(&mut rng);
        let m = build_model(&p, &s);
        let d = downsize(&ciminion_gb(&m).unwrap()).unwrap();
        for q in d.system.polys() {
            for v in 0..d.system.ring().nvars() {
                assert!(!q.linear_coeff(v).is_zero(), "{q} misses variable {v}");
            }
        }
    }

    #[test]
    fn downsized_solutions_lift_to_full_gb() {
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        let p = params(31, 3, Variant::Standard);
        let f = p.field();
        let (_, s) = p.random_sample(&mut rng);
        let m = build_model(&p, &s);
        let gb = ciminion_gb(&m).unwrap();
        let d = downsize(&gb).unwrap();
        assert_eq!(d.system.len(), 2);
        assert_eq!(d.full_index, vec![m.x(2, 3), m.x_last()]);
        let linear: Vec<MPoly> = gb.polys().iter().filter(|p| p.is_affine()).cloned().collect();
        for a in 0..31 {
            for b in 0..31 {
                let pt = [f.elem(a), f.elem(b)];
                if !d.system.vanishes_at(&pt) {
                    continue;
                }
                let mut full = vec![f.zero(); m.ring().nvars()];
                full[d.full_index[0]] = pt[0];
                full[d.full_index[1]] = pt[1];
                for l in &linear {
                    let (piv, _) = l.leading_monomial(&m.order).unwrap().as_pure_power().unwrap();
                    full[piv] = f.neg(l.eval(&full));
                }
                assert!(gb.vanishes_at(&full));
            }
        }
    }

    #[test]
    fn bariant_matches_lex_univariate() {
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let p = params(7741, 6, Variant::Standard);
        let (keys, s) = p.random_sample(&mut rng);
        let m = build_model(&p, &s);
        let gb = ciminion_gb(&m).unwrap();
        let bar = bariant_polynomial(&p, &s).unwrap();
        assert_eq!(bar.degree(), Some(32));
        let trace = m.trace(keys);
        assert!(bar.eval(trace[m.x_last()]).is_zero());
        let lex = lex_shape_basis(&m, &gb).unwrap();
        assert!(lex.vanishes_at(&trace));
        let sol = shape_solution(&m, &gb).unwrap();
        let (quo, rem) = bar.divrem(&sol.univariate).unwrap();
        assert!(rem.is_zero());
        assert_eq!(quo.degree(), Some(0));
    }

    #[test]
    fn lex_shape_basis_matches_buchberger_lex() {
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        let p = params(7741, 6, Variant::Standard);
        let (_, s) = p.random_sample(&mut rng);
        let m = build_model(&p, &s);
        let gb = ciminion_gb(&m).unwrap();
        let lex_order = m.order.with_kind(OrderKind::Lex);
        let ours = lex_shape_basis(&m, &gb).unwrap();
        let oracle = buchberger(&gb, &lex_order, &Budget::UNLIMITED).unwrap();
        assert_eq!(ours, oracle);
        assert!(is_groebner(&ours, &lex_order).unwrap());
    }
}
