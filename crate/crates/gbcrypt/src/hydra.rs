//! The Hydra heads and rolling function, the two-sample iterated model, the
//! Feistel-like transformation, the generic-coordinates rank test, affine
//! elimination, and the change of coordinates that turns the surviving
//! quadratics into a DRL Gröbner basis plus four extra quadratics.
//!
//! The body of Hydra is bypassed: the body state `(y, z)` is supplied directly.

use std::sync::Arc;

use rand::RngCore;

use crate::algebra::{DenseMatrix, FieldElement, PrimeField};
use crate::error::{Error, Result};
use crate::mpoly::{linear_rref, MPoly, Monomial, PolySystem, Reducer, Ring, Role, TermOrder};
use crate::seed::rng_for;

/// `M_E = circ(3, 2, 1, 1)` of the concrete instance.
pub const CONCRETE_M_E: [[i64; 4]; 4] = [[3, 2, 1, 1], [1, 3, 2, 1], [1, 1, 3, 2], [2, 1, 1, 3]];

/// `M_I` of the concrete instance.
pub const CONCRETE_M_I: [[i64; 4]; 4] = [[1, 1, 1, 1], [1, 4, 1, 1], [3, 1, 3, 1], [4, 1, 1, 2]];

/// `M_J` of the concrete instance.
pub const CONCRETE_M_J: [[i64; 8]; 8] = [
    [3, 1, 1, 1, 1, 1, 1, 1],
    [7, 3, 1, 1, 1, 1, 1, 1],
    [4, 1, 4, 1, 1, 1, 1, 1],
    [3, 1, 1, 8, 1, 1, 1, 1],
    [7, 1, 1, 1, 7, 1, 1, 1],
    [8, 1, 1, 1, 1, 5, 1, 1],
    [5, 1, 1, 1, 1, 1, 2, 1],
    [4, 1, 1, 1, 1, 1, 1, 6],
];

/// The signs `(−1)^{⌊(l−1)/4⌋}` of the head square.
const HEAD_SIGNS: [i64; 8] = [1, 1, 1, 1, -1, -1, -1, -1];
/// The signs `(−1)^{l−1}` of the first rolling factor.
const ROLL_SIGNS_A: [i64; 4] = [1, -1, 1, -1];
/// The signs `(−1)^{⌊(l−1)/2⌋}` of the second rolling factor.
const ROLL_SIGNS_B: [i64; 4] = [1, 1, -1, -1];

type State8 = [FieldElement; 8];
type State4 = [FieldElement; 4];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HydraParams {
    field: PrimeField,
    rounds: usize,
    m_e: DenseMatrix,
    m_i: DenseMatrix,
    m_j: DenseMatrix,
    m_r: DenseMatrix,
    m_j_inv: DenseMatrix,
    m_r_inv: DenseMatrix,
    head_constants: Vec<State8>,
    rolling_constant: State8,
}

/// The first two released outputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HydraSamplePair {
    pub c1: State8,
    pub c2: State8,
}

/// The hidden values behind a sample pair: key and body state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HydraWitness {
    pub k: State4,
    pub y: State4,
    pub z: State4,
}

/// Deterministic head constants `c^{(1)}, …, c^{(r)}`.
pub fn derive_head_constants(field: PrimeField, seed: &[u8], rounds: usize) -> Vec<State8> {
    let mut rng = rng_for(seed, "hydra/head-constants");
    (0..rounds).map(|_| std::array::from_fn(|_| field.random(&mut rng))).collect()
}

fn check_m_i_shape(m: &DenseMatrix) -> Result<()> {
    for r in 0..4 {
        for c in 1..4 {
            if r != c && m.get(r, c).value() != 1 {
                return Err(Error::InvalidParams("M_I must have ones off the first column and diagonal".into()));
            }
        }
    }
    Ok(())
}

impl HydraParams {
    pub fn new(
        field: PrimeField,
        rounds: usize,
        m_e: DenseMatrix,
        m_i: DenseMatrix,
        m_j: DenseMatrix,
        head_constants: Vec<State8>,
        rolling_constant: State8,
    ) -> Result<Self> {
        if field.modulus() == 2 {
            return Err(Error::InvalidParams("Hydra needs an odd characteristic".into()));
        }
        if rounds < 2 {
            return Err(Error::InvalidParams("r_H must be at least 2".into()));
        }
        if head_constants.len() != rounds {
            return Err(Error::InvalidParams(format!("expected {rounds} head constant vectors")));
        }
        for (m, n, name) in [(&m_e, 4, "M_E"), (&m_i, 4, "M_I"), (&m_j, 8, "M_J")] {
            if m.rows() != n || m.cols() != n || m.field() != field {
                return Err(Error::InvalidParams(format!("{name} must be {n}x{n} over the parameter field")));
            }
        }
        check_m_i_shape(&m_i)?;
        if !m_e.is_invertible() {
            return Err(Error::InvalidParams("M_E is singular".into()));
        }
        let m_j_inv = m_j.inverse()?;
        let m_r = DenseMatrix::block_diag(&m_i, &m_i);
        let m_r_inv = m_r.inverse()?;
        Ok(HydraParams { field, rounds, m_e, m_i, m_j, m_r, m_j_inv, m_r_inv, head_constants, rolling_constant })
    }

    /// The concrete instance matrices with seeded head constants and zero rolling constant.
    pub fn concrete(field: PrimeField, rounds: usize, seed: &[u8]) -> Result<Self> {
        let m_e = DenseMatrix::from_i64(field, &CONCRETE_M_E.iter().map(|r| &r[..]).collect::<Vec<_>>())?;
        let m_i = DenseMatrix::from_i64(field, &CONCRETE_M_I.iter().map(|r| &r[..]).collect::<Vec<_>>())?;
        let m_j = DenseMatrix::from_i64(field, &CONCRETE_M_J.iter().map(|r| &r[..]).collect::<Vec<_>>())?;
        let consts = derive_head_constants(field, seed, rounds);
        Self::new(field, rounds, m_e, m_i, m_j, consts, [field.zero(); 8])
    }

    /// Replaces the rolling constant `c_R^{(1)}`.
    pub fn with_rolling_constant(mut self, c: State8) -> Self {
        self.rolling_constant = c;
        self
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn m_e(&self) -> &DenseMatrix {
        &self.m_e
    }

    pub fn m_i(&self) -> &DenseMatrix {
        &self.m_i
    }

    pub fn m_j(&self) -> &DenseMatrix {
        &self.m_j
    }

    pub fn m_r(&self) -> &DenseMatrix {
        &self.m_r
    }

    pub fn head_constants(&self) -> &[State8] {
        &self.head_constants
    }

    pub fn rolling_constant(&self) -> &State8 {
        &self.rolling_constant
    }

    /// `K' = (K, M_E·K)`.
    pub fn key_prime(&self, k: &State4) -> State8 {
        let ek = self.m_e.mul_vec(k).expect("4x4 times 4");
        std::array::from_fn(|i| if i < 4 { k[i] } else { ek[i - 4] })
    }

    /// Head round `J_i` (1-based) for the expanded key `kp`.
    pub fn head_round(&self, i: usize, x: &State8, kp: &State8) -> State8 {
        let f = self.field;
        let s = signed_sum(f, x, &HEAD_SIGNS);
        let sq = f.mul(s, s);
        let inner: Vec<FieldElement> = x.iter().map(|&v| f.add(v, sq)).collect();
        let out = self.m_j.mul_vec(&inner).expect("8x8 times 8");
        let c = &self.head_constants[i - 1];
        std::array::from_fn(|l| f.add(f.add(out[l], kp[l]), c[l]))
    }

    /// All head states `J_1(state), J_2(J_1(state)), …`.
    pub fn head_states(&self, k: &State4, state: &State8) -> Vec<State8> {
        let kp = self.key_prime(k);
        let mut x = *state;
        (1..=self.rounds)
            .map(|i| {
                x = self.head_round(i, &x, &kp);
                x
            })
            .collect()
    }

    /// `H_K(state)`.
    pub fn heads(&self, k: &State4, state: &State8) -> State8 {
        *self.head_states(k, state).last().expect("at least two rounds")
    }

    /// `R_1(y, z) = R(y, z) + c_R^{(1)}`.
    pub fn rolling(&self, y: &State4, z: &State4) -> State8 {
        let f = self.field;
        let g_yz = f.mul(signed_sum(f, y, &ROLL_SIGNS_A), signed_sum(f, z, &ROLL_SIGNS_B));
        let g_zy = f.mul(signed_sum(f, z, &ROLL_SIGNS_A), signed_sum(f, y, &ROLL_SIGNS_B));
        let inner: Vec<FieldElement> =
            (0..8).map(|l| if l < 4 { f.add(y[l], g_yz) } else { f.add(z[l - 4], g_zy) }).collect();
        let out = self.m_r.mul_vec(&inner).expect("8x8 times 8");
        std::array::from_fn(|l| f.add(out[l], self.rolling_constant[l]))
    }

    /// The first two outputs `H_K(y, z) + (y, z)` and `H_K(R_1(y, z)) + R_1(y, z)`.
    pub fn heads_sample(&self, k: &State4, y: &State4, z: &State4) -> HydraSamplePair {
        let f = self.field;
        let s0: State8 = std::array::from_fn(|l| if l < 4 { y[l] } else { z[l - 4] });
        let s1 = self.rolling(y, z);
        let h0 = self.heads(k, &s0);
        let h1 = self.heads(k, &s1);
        HydraSamplePair {
            c1: std::array::from_fn(|l| f.add(h0[l], s0[l])),
            c2: std::array::from_fn(|l| f.add(h1[l], s1[l])),
        }
    }

    /// A uniformly random witness and its sample pair.
    pub fn random_instance<R: RngCore>(&self, rng: &mut R) -> (HydraWitness, HydraSamplePair) {
        let f = self.field;
        let w = HydraWitness {
            k: std::array::from_fn(|_| f.random(rng)),
            y: std::array::from_fn(|_| f.random(rng)),
            z: std::array::from_fn(|_| f.random(rng)),
        };
        (w, self.heads_sample(&w.k, &w.y, &w.z))
    }
}

fn signed_sum(f: PrimeField, x: &[FieldElement], signs: &[i64]) -> FieldElement {
    x.iter().zip(signs).fold(f.zero(), |acc, (&v, &s)| if s > 0 { f.add(acc, v) } else { f.sub(acc, v) })
}

fn mat_vec(m: &DenseMatrix, v: &[MPoly]) -> Vec<MPoly> {
    (0..m.rows())
        .map(|r| {
            let mut acc = MPoly::zero(v[0].ring());
            for (c, p) in v.iter().enumerate() {
                let a = m.get(r, c);
                if !a.is_zero() {
                    acc = acc.add(&p.scale(a));
                }
            }
            acc
        })
        .collect()
}

/// The iterated model over `y, z, x1^{(1..r−1)}, x2^{(0..r−1)}, k` in that
/// variable order, which is also the DRL variable order.
#[derive(Clone, Debug)]
pub struct HydraModel {
    pub system: PolySystem,
    pub order: TermOrder,
    params: HydraParams,
    outputs: HydraSamplePair,
}

impl HydraModel {
    pub fn ring(&self) -> &Arc<Ring> {
        self.system.ring()
    }

    pub fn params(&self) -> &HydraParams {
        &self.params
    }

    pub fn outputs(&self) -> &HydraSamplePair {
        &self.outputs
    }

    pub fn rounds(&self) -> usize {
        self.params.rounds
    }

    /// Index of `y_l`, `1 ≤ l ≤ 4`.
    pub fn y(&self, l: usize) -> usize {
        l - 1
    }

    /// Index of `z_l`, `1 ≤ l ≤ 4`.
    pub fn z(&self, l: usize) -> usize {
        3 + l
    }

    /// Index of `x_{1,l}^{(i)}`, `1 ≤ i ≤ r − 1`.
    pub fn x1(&self, i: usize, l: usize) -> usize {
        8 + 8 * (i - 1) + (l - 1)
    }

    /// Index of `x_{2,l}^{(i)}`, `0 ≤ i ≤ r − 1`.
    pub fn x2(&self, i: usize, l: usize) -> usize {
        8 * self.rounds() + 8 * i + (l - 1)
    }

    /// Index of `k_l`, `1 ≤ l ≤ 4`.
    pub fn k(&self, l: usize) -> usize {
        16 * self.rounds() + l - 1
    }

    /// The model point of a witness.
    pub fn witness_point(&self, w: &HydraWitness) -> Vec<FieldElement> {
        let p = &self.params;
        let r = p.rounds;
        let s0: State8 = std::array::from_fn(|l| if l < 4 { w.y[l] } else { w.z[l - 4] });
        let s1 = p.rolling(&w.y, &w.z);
        let h0 = p.head_states(&w.k, &s0);
        let h1 = p.head_states(&w.k, &s1);
        let mut pt = Vec::with_capacity(16 * r + 4);
        pt.extend_from_slice(&s0);
        for s in &h0[..r - 1] {
            pt.extend_from_slice(s);
        }
        pt.extend_from_slice(&s1);
        for s in &h1[..r - 1] {
            pt.extend_from_slice(s);
        }
        pt.extend_from_slice(&w.k);
        pt
    }

    /// Reads key and body state back from a model point.
    pub fn witness_from_point(&self, pt: &[FieldElement]) -> HydraWitness {
        HydraWitness {
            k: std::array::from_fn(|l| pt[self.k(l + 1)]),
            y: std::array::from_fn(|l| pt[self.y(l + 1)]),
            z: std::array::from_fn(|l| pt[self.z(l + 1)]),
        }
    }
}

fn model_ring(field: PrimeField, r: usize) -> Arc<Ring> {
    let mut names: Vec<String> = (1..=4).map(|l| format!("y{l}")).chain((1..=4).map(|l| format!("z{l}"))).collect();
    for i in 1..r {
        names.extend((1..=8).map(|l| format!("x1_{i}_{l}")));
    }
    for i in 0..r {
        names.extend((1..=8).map(|l| format!("x2_{i}_{l}")));
    }
    names.extend((1..=4).map(|l| format!("k{l}")));
    Ring::new(field, names)
}

/// Builds the two-sample model `{f1^{(i)}, f_R, f2^{(i)}}`.
pub fn build_model(params: &HydraParams, outputs: &HydraSamplePair) -> HydraModel {
    let f = params.field;
    let r = params.rounds;
    let ring = model_ring(f, r);
    let var = |i: usize| MPoly::var(&ring, i);
    let cst = |c: FieldElement| MPoly::constant(&ring, c);
    let block = |start: usize| -> Vec<MPoly> { (start..start + 8).map(var).collect() };
    let x1 = |i: usize| block(8 + 8 * (i - 1));
    let x2 = |i: usize| block(8 * r + 8 * i);
    let k: Vec<MPoly> = (16 * r..16 * r + 4).map(var).collect();
    let ek = mat_vec(&params.m_e, &k);
    let kp: Vec<MPoly> = k.iter().chain(ek.iter()).cloned().collect();
    let yz = block(0);

    let mut polys = Vec::with_capacity(16 * r + 8);
    for i in 1..=r {
        let input = if i == 1 { yz.clone() } else { x1(i - 1) };
        let image = symbolic_head_round(params, i, &input, &kp);
        for l in 0..8 {
            let rhs = if i == r { yz[l].sub(&cst(outputs.c1[l])) } else { x1(i)[l].neg() };
            polys.push(image[l].add(&rhs));
        }
    }
    let roll = symbolic_rolling(params, &yz[..4], &yz[4..]);
    let x20 = x2(0);
    for l in 0..8 {
        polys.push(roll[l].sub(&x20[l]));
    }
    for i in 1..=r {
        let image = symbolic_head_round(params, i, &x2(i - 1), &kp);
        for l in 0..8 {
            let rhs = if i == r { x20[l].sub(&cst(outputs.c2[l])) } else { x2(i)[l].neg() };
            polys.push(image[l].add(&rhs));
        }
    }
    HydraModel {
        system: PolySystem::new(&ring, polys).expect("one ring"),
        order: TermOrder::drl(16 * r + 4),
        params: params.clone(),
        outputs: *outputs,
    }
}

fn symbolic_head_round(params: &HydraParams, i: usize, x: &[MPoly], kp: &[MPoly]) -> Vec<MPoly> {
    let ring = x[0].ring();
    let s = x.iter().zip(HEAD_SIGNS).fold(MPoly::zero(ring), |acc, (p, sg)| if sg > 0 { acc.add(p) } else { acc.sub(p) });
    let sq = s.mul(&s);
    let inner: Vec<MPoly> = x.iter().map(|p| p.add(&sq)).collect();
    let out = mat_vec(&params.m_j, &inner);
    let c = &params.head_constants[i - 1];
    out.iter().zip(kp).enumerate().map(|(l, (o, k))| o.add(k).add_constant(c[l])).collect()
}

fn symbolic_rolling(params: &HydraParams, y: &[MPoly], z: &[MPoly]) -> Vec<MPoly> {
    let ring = y[0].ring();
    let sum = |v: &[MPoly], s: &[i64]| {
        v.iter().zip(s).fold(MPoly::zero(ring), |acc, (p, &sg)| if sg > 0 { acc.add(p) } else { acc.sub(p) })
    };
    let g_yz = sum(y, &ROLL_SIGNS_A).mul(&sum(z, &ROLL_SIGNS_B));
    let g_zy = sum(z, &ROLL_SIGNS_A).mul(&sum(y, &ROLL_SIGNS_B));
    let inner: Vec<MPoly> = (0..8).map(|l| if l < 4 { y[l].add(&g_yz) } else { z[l - 4].add(&g_zy) }).collect();
    mat_vec(&params.m_r, &inner)
        .into_iter()
        .enumerate()
        .map(|(l, p)| p.add_constant(params.rolling_constant[l]))
        .collect()
}

/// `A_n·v`: subtract the last entry from every other one.
fn apply_a(v: &[MPoly]) -> Vec<MPoly> {
    let last = v.last().expect("nonempty block");
    v.iter().enumerate().map(|(l, p)| if l + 1 == v.len() { p.clone() } else { p.sub(last) }).collect()
}

/// Positions (in the transformed system) of the `2r` head quadratics, first
/// sample rounds `1..=r` then second sample rounds `1..=r`, and of the two
/// rolling quadratics.
pub fn quadratic_positions(r: usize) -> (Vec<usize>, [usize; 2]) {
    let heads = (0..r).map(|i| 8 * i + 7).chain((0..r).map(|i| 8 * (r + 1) + 8 * i + 7)).collect();
    (heads, [8 * r + 3, 8 * r + 7])
}

/// `G = {A_8 M_J^{-1} f1^{(i)}, B M_R^{-1} f_R, A_8 M_J^{-1} f2^{(i)}}`, in model order.
pub fn transform(model: &HydraModel) -> Result<PolySystem> {
    let p = &model.params;
    let r = p.rounds;
    let polys = model.system.polys();
    let mut out = Vec::with_capacity(polys.len());
    for b in 0..2 * r + 1 {
        let blk = &polys[8 * b..8 * b + 8];
        if b == r {
            let v = mat_vec(&p.m_r_inv, blk);
            out.extend(apply_a(&v[..4]));
            out.extend(apply_a(&v[4..]));
        } else {
            out.extend(apply_a(&mat_vec(&p.m_j_inv, blk)));
        }
    }
    let roles = out.iter().map(|g| if g.degree() == Some(2) { Role::Quadratic } else { Role::Affine }).collect();
    PolySystem::with_roles(model.ring(), out, roles)
}

/// The linear form `L` with `L² = q` for a homogeneous quadratic `q`.
pub fn square_root_form(q: &MPoly) -> Result<MPoly> {
    let f = q.field();
    let n = q.nvars();
    let not_square = || Error::ShapeViolation("quadratic top component is not a square".into());
    let (v, a) = (0..n)
        .map(|v| (v, q.coeff(&Monomial::var_pow(n, v, 2))))
        .find(|(_, a)| !a.is_zero())
        .ok_or_else(not_square)?;
    let s = f.sqrt(a).ok_or_else(not_square)?;
    let half_over_s = f.inv(f.add(s, s))?;
    let mut coeffs = vec![f.zero(); n];
    for (u, c) in coeffs.iter_mut().enumerate() {
        *c = if u == v {
            s
        } else {
            let m = Monomial::var(n, v).mul(&Monomial::var(n, u));
            f.mul(q.coeff(&m), half_over_s)
        };
    }
    let l = MPoly::linear(q.ring(), &coeffs, f.zero());
    if l.mul(&l) != *q {
        return Err(not_square());
    }
    Ok(l)
}

/// Outcome of the generic-coordinates rank test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankReport {
    pub rank: usize,
    pub expected: usize,
    pub full_rank: bool,
}

/// Rank of the linear parts of the affine members together with the square
/// roots of the head quadratics; full rank `16·r + 4` certifies generic coordinates.
pub fn generic_coordinates_check(g: &PolySystem, rounds: usize) -> Result<RankReport> {
    let f = g.field();
    let n = g.ring().nvars();
    let (heads, _) = quadratic_positions(rounds);
    let mut rows: Vec<Vec<FieldElement>> = Vec::new();
    let linear_row = |p: &MPoly| (0..n).map(|v| p.linear_coeff(v)).collect::<Vec<_>>();
    for p in g.polys() {
        if p.degree() == Some(1) {
            rows.push(linear_row(p));
        }
    }
    for &h in &heads {
        let top = g.polys()[h].homogeneous_part(2);
        rows.push(linear_row(&square_root_form(&top)?));
    }
    let rank = DenseMatrix::from_rows(f, &rows)?.rank();
    let expected = 16 * rounds + 4;
    Ok(RankReport { rank, expected, full_rank: rank == expected })
}

/// The transformed system after eliminating the affine members.
#[derive(Clone, Debug)]
pub struct Elimination {
    /// `2r + 2` quadratics over the surviving variables: first-sample heads,
    /// the two rolling quadratics, second-sample heads.
    pub reduced: PolySystem,
    pub order: TermOrder,
    /// Reduced row echelon form of the affine members over the model ring.
    pub linear: Vec<MPoly>,
    /// Model indices of the surviving variables.
    pub survivors: Vec<usize>,
    pub full_ring: Arc<Ring>,
}

impl Elimination {
    /// Extends values of the surviving variables to a full model point.
    pub fn lift(&self, values: &[FieldElement]) -> Vec<FieldElement> {
        let f = self.full_ring.field();
        let mut pt = vec![f.zero(); self.full_ring.nvars()];
        for (&v, &x) in self.survivors.iter().zip(values) {
            pt[v] = x;
        }
        for l in &self.linear {
            let (piv, _) = l.leading_monomial(&TermOrder::drl(pt.len())).and_then(|m| m.as_pure_power()).expect("pivot");
            pt[piv] = f.neg(l.eval(&pt));
        }
        pt
    }

    /// Restricts a model point to the surviving variables.
    pub fn project(&self, pt: &[FieldElement]) -> Vec<FieldElement> {
        self.survivors.iter().map(|&v| pt[v]).collect()
    }
}

/// Rank of the linear parts of the affine members; `14·r + 6` when the elimination applies.
pub fn affine_rank(g: &PolySystem) -> Result<usize> {
    let n = g.ring().nvars();
    let rows: Vec<Vec<FieldElement>> = g
        .polys()
        .iter()
        .filter(|p| p.degree() == Some(1))
        .map(|p| (0..n).map(|v| p.linear_coeff(v)).collect())
        .collect();
    if rows.is_empty() {
        return Ok(0);
    }
    Ok(DenseMatrix::from_rows(g.field(), &rows)?.rank())
}

/// Eliminates the `14·r + 6` affine members from the quadratics.
pub fn eliminate_affine(g: &PolySystem, order: &TermOrder, rounds: usize) -> Result<Elimination> {
    let ring = g.ring();
    let f = ring.field();
    let n = ring.nvars();
    let affine: Vec<MPoly> = g.polys().iter().filter(|p| p.degree() == Some(1)).cloned().collect();
    let rank = affine_rank(g)?;
    if rank != 14 * rounds + 6 {
        return Err(Error::AffineRankDeficit(rank));
    }
    let linear = linear_rref(ring, &affine, order)?;
    let mut is_pivot = vec![false; n];
    for l in &linear {
        let (piv, _) = l.leading_monomial(order).and_then(|m| m.as_pure_power()).ok_or(Error::AffineRankDeficit(rank))?;
        is_pivot[piv] = true;
    }
    let survivors: Vec<usize> = order.vars().iter().copied().filter(|&v| !is_pivot[v]).collect();
    let sub = Ring::new(f, survivors.iter().map(|&v| ring.name(v).to_string()).collect());
    let mut map = vec![None; n];
    for (k, &v) in survivors.iter().enumerate() {
        map[v] = Some(k);
    }
    let reducer = Reducer::new(&linear, order);
    let (heads, rolling) = quadratic_positions(rounds);
    let picks: Vec<usize> = heads[..rounds].iter().chain(rolling.iter()).chain(heads[rounds..].iter()).copied().collect();
    let reduced = picks
        .iter()
        .map(|&i| reducer.reduce(&g.polys()[i])?.map_ring(&sub, &map))
        .collect::<Result<Vec<_>>>()?;
    Ok(Elimination {
        reduced: PolySystem::new(&sub, reduced)?,
        order: TermOrder::drl(survivors.len()),
        linear,
        survivors,
        full_ring: ring.clone(),
    })
}

/// Identifies a head quadratic by sample `j ∈ {1, 2}` and round `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HeadLabel {
    pub sample: usize,
    pub round: usize,
}

/// The linear change of coordinates `x̂ = M·x_nl`.
#[derive(Clone, Debug)]
pub struct CoordinateChange {
    /// Rows are the selected forms `L̃` over the surviving variables.
    pub matrix: DenseMatrix,
    pub inverse: DenseMatrix,
    /// The head quadratic behind each `x̂_i`.
    pub selected: Vec<HeadLabel>,
    pub hat_ring: Arc<Ring>,
}

impl CoordinateChange {
    /// `x_nl = M^{-1}·x̂`.
    pub fn pullback(&self, hat: &[FieldElement]) -> Result<Vec<FieldElement>> {
        self.inverse.mul_vec(hat)
    }

    /// `x̂ = M·x_nl`.
    pub fn push(&self, x_nl: &[FieldElement]) -> Result<Vec<FieldElement>> {
        self.matrix.mul_vec(x_nl)
    }
}

/// Greedy selection order of the head forms: `L̃_{1,3..r}`, `L̃_{2,1..r}`, `L̃_{1,1}`, `L̃_{1,2}`.
pub fn selection_order(rounds: usize) -> Vec<HeadLabel> {
    let l = |sample, round| HeadLabel { sample, round };
    (3..=rounds)
        .map(|i| l(1, i))
        .chain((1..=rounds).map(|i| l(2, i)))
        .chain([l(1, 1), l(1, 2)])
        .collect()
}

/// A quadratic DRL Gröbner basis `{x̂_i² + A_i}`, the four extra quadratics and the coordinate change.
#[derive(Clone, Debug)]
pub struct HydraGb {
    pub gb: PolySystem,
    pub extras: PolySystem,
    pub order: TermOrder,
    pub change: CoordinateChange,
}

/// Rewrites the eliminated system in new coordinates `x̂` built from the head square roots.
pub fn change_of_coordinates(elim: &Elimination, rounds: usize) -> Result<HydraGb> {
    let sub = elim.reduced.ring();
    let f = sub.field();
    let m = sub.nvars();
    if m != 2 * rounds - 2 || elim.reduced.len() != 2 * rounds + 2 {
        return Err(Error::ShapeViolation("eliminated system has unexpected size".into()));
    }
    let reduced = elim.reduced.polys();
    let head_pos = |h: HeadLabel| if h.sample == 1 { h.round - 1 } else { rounds + 2 + h.round - 1 };
    let mut rows: Vec<Vec<FieldElement>> = Vec::new();
    let mut selected = Vec::new();
    for h in selection_order(rounds) {
        if selected.len() == m {
            break;
        }
        let q = &reduced[head_pos(h)];
        let top = q.homogeneous_part(2);
        if top.is_zero() {
            continue;
        }
        let form = square_root_form(&top)?;
        let row: Vec<FieldElement> = (0..m).map(|v| form.linear_coeff(v)).collect();
        let mut trial = rows.clone();
        trial.push(row.clone());
        if DenseMatrix::from_rows(f, &trial)?.rank() == trial.len() {
            rows = trial;
            selected.push(h);
        }
    }
    if selected.len() != m {
        return Err(Error::ChangeOfCoordinatesFailed);
    }
    let matrix = DenseMatrix::from_rows(f, &rows)?;
    let inverse = matrix.inverse()?;
    let hat_ring = Ring::new(f, (1..=m).map(|i| format!("xh{i}")).collect());
    let hats: Vec<MPoly> = (0..m).map(|j| MPoly::var(&hat_ring, j)).collect();
    let images: Vec<MPoly> = (0..m)
        .map(|k| (0..m).fold(MPoly::zero(&hat_ring), |acc, j| acc.add(&hats[j].scale(inverse.get(k, j)))))
        .collect();
    let order = TermOrder::drl(m);
    let mut gb = Vec::with_capacity(m);
    for (i, &h) in selected.iter().enumerate() {
        let g = reduced[head_pos(h)].compose(&hat_ring, &images)?;
        if g.leading_term(&order) != Some((&Monomial::var_pow(m, i, 2), f.one())) {
            return Err(Error::ChangeOfCoordinatesFailed);
        }
        gb.push(g);
    }
    let mut extras = Vec::with_capacity(4);
    for (pos, q) in reduced.iter().enumerate() {
        let is_selected = selected.iter().any(|&h| head_pos(h) == pos);
        if !is_selected {
            extras.push(q.compose(&hat_ring, &images)?);
        }
    }
    Ok(HydraGb {
        gb: PolySystem::with_roles(&hat_ring, gb, vec![Role::BooleanBasis; m])?,
        extras: PolySystem::new(&hat_ring, extras)?,
        order,
        change: CoordinateChange { matrix, inverse, selected, hat_ring },
    })
}

/// The whole reduction from model to quadratic Gröbner basis.
#[derive(Clone, Debug)]
pub struct HydraReduction {
    pub transformed: PolySystem,
    pub elimination: Elimination,
    pub result: HydraGb,
}

impl HydraReduction {
    /// Maps a point in `x̂` coordinates back to a model point.
    pub fn lift(&self, hat: &[FieldElement]) -> Result<Vec<FieldElement>> {
        Ok(self.elimination.lift(&self.result.change.pullback(hat)?))
    }

    /// Maps a model point to `x̂` coordinates.
    pub fn to_hat(&self, pt: &[FieldElement]) -> Result<Vec<FieldElement>> {
        self.result.change.push(&self.elimination.project(pt))
    }
}

/// Transform, affine elimination and change of coordinates in one call.
pub fn reduce_model(model: &HydraModel) -> Result<HydraReduction> {
    let transformed = transform(model)?;
    let elimination = eliminate_affine(&transformed, &model.order, model.rounds())?;
    let result = change_of_coordinates(&elimination, model.rounds())?;
    Ok(HydraReduction { transformed, elimination, result })
}
