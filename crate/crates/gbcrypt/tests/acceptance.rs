//! Acceptance suite: one PASS/FAIL line per criterion, with its runtime.
//!
//! Runs as a plain binary (`harness = false`). Every criterion checks the
//! library against an independent oracle or a pinned table value and also
//! enforces its runtime cap; the process exits nonzero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use gbcrypt::algebra::{PrimeField, UniPoly};
use gbcrypt::ciminion::{self, CiminionParams, Variant};
use gbcrypt::estimator::{est_ciminion, est_hydra, hilbert_dreg, EstimatorConfig};
use gbcrypt::hydra::{self, HydraParams};
use gbcrypt::macaulay::{solving_degree_search, SearchMode};
use gbcrypt::mpoly::{is_groebner, quotient_basis};
use gbcrypt::seed::rng_for;
use gbcrypt::solver::{self, SolveOptions};
use gbcrypt::Budget;
use rand::Rng;

/// Absolute tolerance for table comparisons, in bits.
const BITS_TOLERANCE: f64 = 0.05;
const SEED: &[u8] = b"acceptance";

type Outcome = Result<String, String>;
/// Name, check and runtime cap in seconds.
type Criterion = (&'static str, fn() -> Outcome, u64);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn f7741() -> PrimeField {
    PrimeField::new(7741).unwrap()
}

/// Ciminion DRL basis: Buchberger criterion and quotient dimension `2^{r−1}`.
fn criterion_1() -> Outcome {
    for q in [31u128, 7741] {
        let f = PrimeField::new(q).map_err(err)?;
        for r in 2..=12 {
            let params = CiminionParams::with_total_rounds(f, r, SEED, Variant::Standard).map_err(err)?;
            let (_, sample) = params.random_sample(&mut rng_for(SEED, &format!("c1/{q}/{r}")));
            let model = ciminion::build_model(&params, &sample);
            let gb = ciminion::ciminion_gb(&model).map_err(err)?;
            ensure(is_groebner(&gb, &model.order).map_err(err)?, || format!("q = {q}, r = {r}: not a Groebner basis"))?;
            let dim = quotient_basis(&gb, &model.order).map_err(err)?.len();
            ensure(dim == 1 << (r - 1), || format!("q = {q}, r = {r}: dimension {dim}"))?;
        }
    }
    Ok("q in {31, 7741}, r in 2..=12".into())
}

/// Bariant's polynomial is a scalar multiple of the LEX univariate.
fn criterion_2() -> Outcome {
    let f = f7741();
    for r in 2..=10 {
        let params = CiminionParams::with_total_rounds(f, r, SEED, Variant::Standard).map_err(err)?;
        let (_, sample) = params.random_sample(&mut rng_for(SEED, &format!("c2/{r}")));
        let model = ciminion::build_model(&params, &sample);
        let gb = ciminion::ciminion_gb(&model).map_err(err)?;
        let lex = ciminion::lex_shape_basis(&model, &gb).map_err(err)?;
        let x = model.x_last();
        let member = lex
            .polys()
            .iter()
            .find(|p| p.variables() == vec![x])
            .ok_or_else(|| format!("r = {r}: no univariate LEX member"))?;
        let mut assignment = vec![None; model.ring().nvars()];
        assignment[x] = Some(UniPoly::x(f));
        let univariate = member.eval_uni(&assignment).map_err(err)?;
        let bariant = ciminion::bariant_polynomial(&params, &sample).map_err(err)?;
        let (alpha, rem) = bariant.divrem(&univariate).map_err(err)?;
        ensure(rem.is_zero() && alpha.degree() == Some(0), || format!("r = {r}: not a scalar multiple"))?;
    }
    Ok("r in 2..=10, q = 7741".into())
}

/// Ciminion key recovery on generated fixtures.
fn criterion_3() -> Outcome {
    let f = f7741();
    let mut detail = Vec::new();
    for (variant, r) in [(Variant::Standard, 8), (Variant::Ciminion2, 7)] {
        let params = CiminionParams::with_total_rounds(f, r, SEED, variant).map_err(err)?;
        let (keys, sample) = params.random_sample(&mut rng_for(SEED, &format!("c3/{}", variant.name())));
        let rec = solver::recover_ciminion_key(&params, &sample, &SolveOptions::default()).map_err(err)?;
        ensure(rec.keys.contains(&keys), || format!("{} r = {r}: generating key missing", variant.name()))?;
        ensure(rec.keys.iter().all(|&k| params.verify(k, &sample)), || format!("{}: unverified candidate", variant.name()))?;
        detail.push(format!("{} r = {r}: {} verified keys via {}", variant.name(), rec.keys.len(), rec.strategy.name()));
    }
    Ok(detail.join("; "))
}

/// A random prime in `[2^27, 2^28)`.
fn random_28_bit_prime() -> u128 {
    let mut rng = rng_for(SEED, "c4/prime");
    loop {
        let c: u128 = rng.gen_range((1u128 << 27)..(1u128 << 28)) | 1;
        if PrimeField::new(c).is_ok() {
            return c;
        }
    }
}

/// Generic-coordinates rank `16r + 4` and affine rank `14r + 6`.
fn criterion_4() -> Outcome {
    let p28 = random_28_bit_prime();
    for q in [7741, p28] {
        let f = PrimeField::new(q).map_err(err)?;
        for r in 2..=8 {
            let params = HydraParams::concrete(f, r, SEED).map_err(err)?;
            let (_, outputs) = params.random_instance(&mut rng_for(SEED, &format!("c4/{q}/{r}")));
            let model = hydra::build_model(&params, &outputs);
            let g = hydra::transform(&model).map_err(err)?;
            let rep = hydra::generic_coordinates_check(&g, r).map_err(err)?;
            ensure(rep.rank == 16 * r + 4, || format!("q = {q}, r = {r}: rank {}", rep.rank))?;
            let affine = hydra::affine_rank(&g).map_err(err)?;
            ensure(affine == 14 * r + 6, || format!("q = {q}, r = {r}: affine rank {affine}"))?;
        }
    }
    Ok(format!("q in {{7741, {p28}}}, r_H in 2..=8"))
}

/// Quadratic Hydra basis after the change of coordinates.
fn criterion_5() -> Outcome {
    let f = f7741();
    let mut dims = Vec::new();
    for r in [2, 3, 4] {
        let params = HydraParams::concrete(f, r, SEED).map_err(err)?;
        let (witness, outputs) = params.random_instance(&mut rng_for(SEED, &format!("c5/{r}")));
        let model = hydra::build_model(&params, &outputs);
        let red = hydra::reduce_model(&model).map_err(err)?;
        let hg = &red.result;
        let n = 2 * r - 2;
        ensure(hg.gb.len() == n, || format!("r = {r}: {} basis members", hg.gb.len()))?;
        let mut seen = vec![false; n];
        for lm in hg.gb.leading_monomials(&hg.order) {
            match lm.as_pure_power() {
                Some((v, 2)) if !seen[v] => seen[v] = true,
                _ => return Err(format!("r = {r}: leading monomial {lm:?} is not a new square")),
            }
        }
        ensure(hg.extras.len() == 4, || format!("r = {r}: {} extras", hg.extras.len()))?;
        if r <= 3 {
            ensure(is_groebner(&hg.gb, &hg.order).map_err(err)?, || format!("r = {r}: Buchberger check failed"))?;
        }
        let dim = quotient_basis(&hg.gb, &hg.order).map_err(err)?.len();
        ensure(dim <= 1 << n, || format!("r = {r}: dimension {dim}"))?;
        let hat = red.to_hat(&model.witness_point(&witness)).map_err(err)?;
        ensure(hg.gb.vanishes_at(&hat) && hg.extras.vanishes_at(&hat), || format!("r = {r}: witness not a zero"))?;
        dims.push(format!("r_H = {r}: dim {dim}"));
    }
    Ok(dims.join(", "))
}

/// Hydra key recovery on generated fixtures.
fn criterion_6() -> Outcome {
    let f = f7741();
    let mut detail = Vec::new();
    for r in [2, 3] {
        let params = HydraParams::concrete(f, r, SEED).map_err(err)?;
        let (witness, outputs) = params.random_instance(&mut rng_for(SEED, &format!("c6/{r}")));
        let rec = solver::recover_hydra_key(&params, &outputs, &SolveOptions::default()).map_err(err)?;
        ensure(rec.witnesses.iter().any(|w| w.k == witness.k), || format!("r = {r}: generating key missing"))?;
        ensure(rec.witnesses.iter().all(|w| params.heads_sample(&w.k, &w.y, &w.z) == outputs), || format!("r = {r}: unverified witness"))?;
        detail.push(format!("r_H = {r}: {} witnesses", rec.witnesses.len()));
    }
    Ok(detail.join(", "))
}

/// Boolean and plain solving degrees of the reduced Hydra system.
fn criterion_7() -> Outcome {
    let f = f7741();
    let mut detail = Vec::new();
    for (r, expected) in [(3usize, 3u32), (4, 3)] {
        let params = HydraParams::concrete(f, r, SEED).map_err(err)?;
        let (_, outputs) = params.random_instance(&mut rng_for(SEED, &format!("c7/{r}")));
        let model = hydra::build_model(&params, &outputs);
        let red = hydra::reduce_model(&model).map_err(err)?;
        let hg = &red.result;
        let all = hg.gb.concat(&hg.extras).map_err(err)?;
        let degree = |boolean: bool, mode: SearchMode| -> Result<u32, String> {
            let found = if boolean {
                solving_degree_search(&hg.extras, Some(&hg.gb), &hg.order, 2 * r as u32 + 2, mode, &Budget::UNLIMITED)
            } else {
                solving_degree_search(&all, None, &hg.order, 2 * r as u32 + 2, mode, &Budget::UNLIMITED)
            };
            found.map(|s| s.degree).map_err(err)
        };
        let boolean = degree(true, SearchMode::Closure)?;
        let plain = degree(false, SearchMode::Closure)?;
        let strict_boolean = degree(true, SearchMode::Macaulay)?;
        let strict_plain = degree(false, SearchMode::Macaulay)?;
        ensure(boolean == expected, || format!("r = {r}: Boolean degree {boolean}, expected {expected}"))?;
        ensure(boolean <= plain && strict_boolean <= strict_plain, || format!("r = {r}: Boolean above plain"))?;
        detail.push(format!("r_H = {r}: boolean {boolean}, plain {plain} (strict {strict_boolean}/{strict_plain})"));
    }
    Ok(detail.join("; "))
}

/// Closed-form tables at ω = 2 and q = 2^127 + 45.
fn criterion_8() -> Outcome {
    let cfg = EstimatorConfig::default();
    let close = |got: f64, want: f64, what: &str| ensure((got - want).abs() <= BITS_TOLERANCE, || format!("{what}: {got:.3} vs {want}"));
    let ciminion_rows = [
        (32, 45.60, 61.09, 126.0),
        (33, 46.67, 63.09, 130.0),
        (65, 80.18, 127.09, 258.0),
        (66, 81.22, 129.09, 262.0),
        (111, 127.45, 219.09, 442.0),
        (112, 128.47, 221.09, 446.0),
    ];
    let mut worst: f64 = 0.0;
    for (r, bariant, eigen, full) in ciminion_rows {
        let rep = est_ciminion(r, &cfg).map_err(err)?;
        for (name, want) in [("bariant", bariant), ("eigenvalue", eigen), ("fully_substituted", full)] {
            let got = rep.get(name).unwrap();
            worst = worst.max((got - want).abs());
            close(got, want, &format!("Ciminion r = {r} {name}"))?;
        }
    }
    let hydra_rows = [
        (28, 22, 113.75, 107.09, 125.31),
        (29, 23, 117.81, 111.09, 130.80),
        (30, 24, 121.86, 115.09, 136.29),
        (31, 25, 125.91, 119.09, 141.77),
        (32, 26, 129.95, 123.09, 147.26),
        (33, 27, 134.00, 127.09, 152.75),
        (34, 28, 138.04, 131.09, 158.23),
        (35, 28, 142.09, 135.09, 160.24),
        (39, 32, 158.25, 151.09, 182.22),
        (45, 37, 182.46, 175.09, 211.72),
    ];
    for (r, d_reg, fglm, eigen, semi) in hydra_rows {
        ensure(hilbert_dreg(r).map_err(err)? == d_reg, || format!("Hydra r = {r}: d_reg"))?;
        let rep = est_hydra(r, &cfg).map_err(err)?;
        for (name, want) in [("term_order_conversion", fglm), ("eigenvalue", eigen), ("semi_regular", semi)] {
            let got = rep.get(name).unwrap();
            worst = worst.max((got - want).abs());
            close(got, want, &format!("Hydra r = {r} {name}"))?;
        }
    }
    let rep = est_hydra(29, &cfg).map_err(err)?;
    for (name, want) in [
        ("boolean_proven_construction", 153.89),
        ("boolean_proven_elimination", 114.0),
        ("boolean_semi_regular_construction", 123.29),
        ("boolean_semi_regular_elimination", 106.25),
    ] {
        let got = rep.get(name).unwrap();
        worst = worst.max((got - want).abs());
        close(got, want, &format!("Hydra r = 29 {name}"))?;
    }
    Ok(format!("largest deviation {worst:.3} bits"))
}

/// Eigenvalue solver and block characteristic polynomial against oracles.
fn criterion_9() -> Outcome {
    common::eigen_solve_vs_brute_force(200)?;
    common::block_charpoly_vs_naive(200)?;
    Ok("200 systems each".into())
}

/// Core property suites at 1000 cases each.
fn criterion_10() -> Outcome {
    for suite in common::core_suites() {
        (suite.run)(1000).map_err(|e| format!("{}: {e}", suite.name))?;
    }
    Ok("5 suites x 1000 cases".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("Ciminion Groebner basis", criterion_1, 60),
        ("Bariant polynomial vs LEX univariate", criterion_2, 30),
        ("Ciminion end-to-end", criterion_3, 120),
        ("Hydra rank identities", criterion_4, 60),
        ("Hydra Groebner basis extraction", criterion_5, 120),
        ("Hydra end-to-end", criterion_6, 300),
        ("Boolean solving degree", criterion_7, 600),
        ("Estimator tables", criterion_8, 1),
        ("Solver oracle equivalence", criterion_9, 120),
        ("Property suites", criterion_10, 60),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(d) if elapsed > Duration::from_secs(limit) => Err(format!("{d}; exceeded {limit} s")),
            o => o,
        };
        let secs = elapsed.as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2}: PASS  {name} [{secs:.2} s] {detail}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name} [{secs:.2} s] {reason}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
