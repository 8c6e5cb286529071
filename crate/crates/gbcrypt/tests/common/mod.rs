//! Randomized property suites shared by the `properties` test target and the
//! acceptance harness. Each suite runs a deterministic proptest runner for a
//! requested number of cases and reports the first failure as text.

#![allow(dead_code)]

use std::sync::Arc;

use gbcrypt::algebra::{scan_roots, uni_roots, DenseMatrix, FieldElement, PrimeField, UniPoly};
use gbcrypt::mpoly::{buchberger, is_groebner, reduce, MPoly, Monomial, PolySystem, Ring, TermOrder};
use gbcrypt::solver::{block_charpoly, eigen_solve, fglm, multiplication_matrix, SolveOptions};
use gbcrypt::{Budget, Error};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// A named property runnable for a given number of cases.
pub struct Suite {
    pub name: &'static str,
    pub run: fn(u32) -> Result<(), String>,
}

/// The five core suites: reduction, row reduction, inversion, root finding, top components.
pub fn core_suites() -> Vec<Suite> {
    vec![
        Suite { name: "reduce idempotence", run: reduce_idempotence },
        Suite { name: "rref idempotence", run: rref_idempotence },
        Suite { name: "field inverse law", run: field_inverse_law },
        Suite { name: "uni_roots vs scan", run: uni_roots_vs_scan },
        Suite { name: "top_component degeneracy", run: top_component_degeneracy },
    ]
}

fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, max_shrink_iters: 256, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn check<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    runner(cases).run(&strategy, test).map_err(|e| e.to_string())
}

const PRIMES: [u128; 7] = [3, 31, 7741, (1 << 31) - 1, (1 << 61) - 1, (1 << 127) + 45, u128::MAX - 158];
const SMALL_PRIMES: [u128; 4] = [31, 101, 257, 7741];

fn field(q: u128) -> PrimeField {
    PrimeField::new(q).expect("prime")
}

/// A random polynomial with up to `terms` terms, exponents at most `max_exp`.
pub fn poly_strategy(n: usize, max_exp: u16, terms: usize, q: u128) -> impl Strategy<Value = Vec<(Vec<u16>, u128)>> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, n), 0..q), 0..=terms)
}

pub fn build_poly(ring: &Arc<Ring>, terms: &[(Vec<u16>, u128)]) -> MPoly {
    let f = ring.field();
    MPoly::from_terms(ring, terms.iter().map(|(e, c)| (Monomial::new(e.clone()), f.elem(*c))))
}

pub fn reduce_idempotence(cases: u32) -> Result<(), String> {
    let n = 3;
    let strategy = (
        poly_strategy(n, 3, 6, 31),
        prop::collection::vec(poly_strategy(n, 2, 4, 31), 1..=4),
        any::<bool>(),
    );
    check(cases, strategy, |(f, gs, lex)| {
        let ring = Ring::with_indexed(field(31), "x", n);
        let order = if lex { TermOrder::lex(n) } else { TermOrder::drl(n) };
        let g: Vec<MPoly> = gs.iter().map(|t| build_poly(&ring, t)).filter(|p| !p.is_zero()).collect();
        prop_assume!(!g.is_empty());
        let g = PolySystem::new(&ring, g).unwrap();
        let f = build_poly(&ring, &f);
        let r = reduce(&f, &g, &order).unwrap();
        prop_assert_eq!(reduce(&r, &g, &order).unwrap(), r.clone());
        let lms = g.leading_monomials(&order);
        for m in r.terms().keys() {
            prop_assert!(!lms.iter().any(|l| l.divides(m)), "remainder term {:?} is reducible", m);
        }
        Ok(())
    })
}

pub fn rref_idempotence(cases: u32) -> Result<(), String> {
    let strategy = (0..2usize, 1..=7usize, 1..=7usize, prop::collection::vec(0..7741u128, 49), any::<bool>());
    check(cases, strategy, |(qi, rows, cols, entries, sparse)| {
        let f = field([31, 7741][qi]);
        let data: Vec<Vec<FieldElement>> = (0..rows)
            .map(|r| {
                (0..cols)
                    .map(|c| {
                        let v = entries[r * 7 + c];
                        // Sparse matrices hit rank deficiencies more often.
                        if sparse && v % 3 != 0 { f.zero() } else { f.elem(v) }
                    })
                    .collect()
            })
            .collect();
        let m = DenseMatrix::from_rows(f, &data).unwrap();
        let once = m.rref();
        let twice = once.reduced.rref();
        prop_assert_eq!(&twice.reduced, &once.reduced);
        prop_assert_eq!(&twice.pivots, &once.pivots);
        prop_assert_eq!(m.transpose().rank(), once.rank);
        for (row, &p) in once.pivots.iter().enumerate() {
            prop_assert_eq!(once.reduced.get(row, p), f.one());
            for other in 0..rows {
                if other != row {
                    prop_assert!(once.reduced.get(other, p).is_zero());
                }
            }
        }
        for row in once.rank..rows {
            prop_assert!((0..cols).all(|c| once.reduced.get(row, c).is_zero()));
        }
        Ok(())
    })
}

pub fn field_inverse_law(cases: u32) -> Result<(), String> {
    check(cases, (0..PRIMES.len(), any::<u128>(), any::<u128>()), |(qi, a, b)| {
        let f = field(PRIMES[qi]);
        let (a, b) = (f.elem(a % f.modulus()), f.elem(b % f.modulus()));
        if a.is_zero() {
            prop_assert_eq!(f.inv(a), Err(Error::InversionOfZero));
        } else {
            let ai = f.inv(a).unwrap();
            prop_assert_eq!(f.mul(a, ai), f.one());
            prop_assert_eq!(f.inv(ai).unwrap(), a);
            prop_assert_eq!(f.mul(f.div(b, a).unwrap(), a), b);
            prop_assert_eq!(f.pow(a, f.modulus() - 1), f.one());
        }
        Ok(())
    })
}

pub fn uni_roots_vs_scan(cases: u32) -> Result<(), String> {
    let strategy = (0..3usize, prop::collection::vec(0..257u128, 0..6), prop::collection::vec(0..257u128, 1..7));
    check(cases, strategy, |(qi, roots, cofactor)| {
        let f = field(SMALL_PRIMES[qi]);
        let roots: Vec<FieldElement> = roots.iter().map(|&r| f.elem(r % f.modulus())).collect();
        let cof = UniPoly::new(f, cofactor.iter().map(|&c| f.elem(c % f.modulus())).collect());
        prop_assume!(!cof.is_zero());
        let p = UniPoly::from_roots(f, &roots).mul(&cof);
        prop_assert_eq!(uni_roots(&p).unwrap(), scan_roots(&p));
        Ok(())
    })
}

pub fn top_component_degeneracy(cases: u32) -> Result<(), String> {
    let n = 3;
    let strategy = (poly_strategy(n, 3, 6, 31), poly_strategy(n, 2, 5, 31), prop::collection::vec(0..31u128, n + 1));
    check(cases, strategy, |(f, q, lin)| {
        let ring = Ring::with_indexed(field(31), "x", n);
        let fl = ring.field();
        let f = build_poly(&ring, &f);
        if f.is_zero() {
            prop_assert_eq!(f.top_component(), Err(Error::ZeroPolynomial));
        } else {
            let t = f.top_component().unwrap();
            prop_assert!(t.is_homogeneous());
            prop_assert_eq!(t.degree(), f.degree());
            prop_assert_eq!(t.top_component().unwrap(), t.clone());
            let rest = f.sub(&t);
            prop_assert!(rest.is_zero() || rest.degree() < f.degree());
        }
        // Quadratic terms that cancel must leave the affine part's linear form.
        let affine = MPoly::linear(&ring, &lin[..n].iter().map(|&c| fl.elem(c)).collect::<Vec<_>>(), fl.elem(lin[n]));
        let q = build_poly(&ring, &q);
        let h = affine.add(&q).sub(&q);
        let linear_part = affine.homogeneous_part(1);
        match h.top_component() {
            Err(e) => {
                prop_assert!(affine.is_zero());
                prop_assert_eq!(e, Error::ZeroPolynomial);
            }
            Ok(t) if !linear_part.is_zero() => prop_assert_eq!(t, linear_part),
            Ok(t) => prop_assert_eq!(t, affine),
        }
        Ok(())
    })
}

/// A DRL Gröbner basis `{x_i^{d_i} + lower terms}`: coprime leading monomials
/// make it a basis whatever the tails are. With `plant`, the constants are
/// adjusted so that a random point is a common zero.
pub fn special_shape(q: u128, degrees: &[u16], seed: u64, plant: bool) -> (PolySystem, TermOrder) {
    let n = degrees.len();
    let f = field(q);
    let ring = Ring::with_indexed(f, "x", n);
    let order = TermOrder::drl(n);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let point: Vec<FieldElement> = (0..n).map(|_| f.random(&mut rng)).collect();
    let polys = degrees
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let lead = Monomial::var_pow(n, i, d);
            let mut p = MPoly::term(&ring, f.one(), lead.clone());
            for _ in 0..rng.gen_range(0..=4) {
                let e: Vec<u16> = (0..n).map(|_| rng.gen_range(0..=d)).collect();
                let m = Monomial::new(e);
                if order.compare(&m, &lead).is_lt() {
                    p.add_term(m, f.random(&mut rng));
                }
            }
            if plant {
                p = p.add_constant(f.neg(p.eval(&point)));
            }
            p
        })
        .collect();
    (PolySystem::new(&ring, polys).unwrap(), order)
}

/// Every common zero of `g` in `F_q^n`, ascending.
pub fn brute_force_zeros(g: &PolySystem) -> Vec<Vec<FieldElement>> {
    let f = g.field();
    let n = g.ring().nvars();
    let q = f.modulus();
    let total = q.pow(n as u32);
    let mut out = Vec::new();
    let mut pt = vec![f.zero(); n];
    for code in 0..total {
        let mut c = code;
        for slot in pt.iter_mut().rev() {
            *slot = f.elem(c % q);
            c /= q;
        }
        if g.vanishes_at(&pt) {
            out.push(pt.clone());
        }
    }
    out
}

fn shape_params(max_n: usize, max_deg: u16) -> impl Strategy<Value = (u128, Vec<u16>, u64, bool)> {
    (
        prop::sample::select(vec![5u128, 7, 11, 13, 17, 19, 23, 29, 31]),
        prop::collection::vec(1..=max_deg, 1..=max_n),
        any::<u64>(),
        any::<bool>(),
    )
}

/// `eigen_solve` returns exactly the brute-force zero set.
pub fn eigen_solve_vs_brute_force(cases: u32) -> Result<(), String> {
    check(cases, shape_params(4, 3), |(q, degrees, seed, plant)| {
        let (g, order) = special_shape(q, &degrees, seed, plant);
        let mut got = eigen_solve(&g, &order, None, &SolveOptions::default()).unwrap().solutions;
        got.sort();
        prop_assert_eq!(got, brute_force_zeros(&g));
        Ok(())
    })
}

/// The block companion determinant equals the characteristic polynomial of the
/// explicit multiplication matrix.
pub fn block_charpoly_vs_naive(cases: u32) -> Result<(), String> {
    check(cases, shape_params(6, 2), |(q, degrees, seed, _)| {
        let (g, order) = special_shape(q, &degrees, seed, false);
        let naive = multiplication_matrix(&g, &order, order.last_var()).unwrap().matrix.charpoly().unwrap();
        prop_assert_eq!(block_charpoly(&g, &order).unwrap(), naive);
        Ok(())
    })
}

/// DRL-to-LEX conversion keeps the zero set and yields a LEX basis.
pub fn fglm_preserves_zeros(cases: u32) -> Result<(), String> {
    check(cases, shape_params(3, 3), |(q, degrees, seed, plant)| {
        let (g, order) = special_shape(q, &degrees, seed, plant);
        let lex = TermOrder::lex(degrees.len());
        let h = fglm(&g, &order, &lex, &Budget::UNLIMITED).unwrap();
        prop_assert!(is_groebner(&h, &lex).unwrap());
        prop_assert_eq!(brute_force_zeros(&h), brute_force_zeros(&g));
        Ok(())
    })
}

/// Buchberger's output is a Gröbner basis containing every input in its ideal.
pub fn buchberger_membership(cases: u32) -> Result<(), String> {
    let n = 3;
    let strategy = (prop::collection::vec(poly_strategy(n, 2, 4, 31), 1..=3), poly_strategy(n, 1, 3, 31), any::<bool>());
    check(cases, strategy, |(fs, h, lex)| {
        let ring = Ring::with_indexed(field(31), "x", n);
        let order = if lex { TermOrder::lex(n) } else { TermOrder::drl(n) };
        let polys: Vec<MPoly> = fs.iter().map(|t| build_poly(&ring, t)).filter(|p| !p.is_zero()).collect();
        prop_assume!(!polys.is_empty());
        let f = PolySystem::new(&ring, polys).unwrap();
        let g = match buchberger(&f, &order, &Budget::ops(20_000)) {
            Ok(g) => g,
            Err(Error::BudgetExceeded) => return Err(TestCaseError::reject("budget")),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assert!(is_groebner(&g, &order).unwrap());
        let h = build_poly(&ring, &h);
        let mut combo = MPoly::zero(&ring);
        for p in f.polys() {
            prop_assert!(reduce(p, &g, &order).unwrap().is_zero());
            combo = combo.add(&p.mul(&h));
        }
        prop_assert!(reduce(&combo, &g, &order).unwrap().is_zero());
        Ok(())
    })
}

/// The solver-level suites with their default case counts.
pub fn solver_suites() -> Vec<Suite> {
    vec![
        Suite { name: "eigen_solve vs brute force", run: eigen_solve_vs_brute_force },
        Suite { name: "block_charpoly vs naive", run: block_charpoly_vs_naive },
        Suite { name: "fglm preserves zeros", run: fglm_preserves_zeros },
        Suite { name: "buchberger membership", run: buchberger_membership },
    ]
}
