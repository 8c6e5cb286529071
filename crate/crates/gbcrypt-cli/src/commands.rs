//! Subcommand implementations.

use gbcrypt::algebra::PrimeField;
use gbcrypt::ciminion::{self, CiminionParams, Variant};
use gbcrypt::estimator::{self, CiminionFlavor, EstimateReport, EstimatorConfig};
use gbcrypt::hydra::{self, HydraParams};
use gbcrypt::macaulay::{solving_degree_search, SearchMode};
use gbcrypt::mpoly::{is_groebner, quotient_basis};
use gbcrypt::seed::rng_for;
use gbcrypt::solver::{self, CiminionStrategy, SolveOptions};
use gbcrypt::Budget;
use serde_json::{json, Map, Value};

use crate::files::{self, dec, CiminionParamsFile, CiminionSampleFile, HydraParamsFile, HydraSampleFile, ParamsFile, SampleFile};
use crate::output::{Context, Sink};
use crate::{
    payload, AttackArgs, CipherArg, Cli, CliError, Command, EstimateArgs, ExperimentCmd, GbVerifyArgs, GenParamsArgs,
    GenSampleArgs, RankCheckArgs, SolveDegreeArgs, StrategyArg, TableArg, VariantArg,
};

/// RNG domain for keys, nonces and plaintexts drawn by the CLI.
const SAMPLE_DOMAIN: &str = "cli/sample";

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let g = &cli.global;
    let budget = g.budget_ms.map_or(Budget::UNLIMITED, Budget::millis);
    let mut sink = Sink::open(g.out.as_deref(), g.timings)?;
    match &cli.command {
        Command::Estimate(a) => estimate(a, &g.seed, &mut sink),
        Command::GenParams(a) => gen_params(a, &g.seed, &mut sink),
        Command::GenSample(a) => gen_sample(a, &g.seed, &mut sink),
        Command::Attack(a) => attack(a, &g.seed, budget, &mut sink),
        Command::Experiment(ExperimentCmd::RankCheck(a)) => rank_check(a, &g.seed, &mut sink),
        Command::Experiment(ExperimentCmd::SolveDegree(a)) => solve_degree(a, &g.seed, budget, &mut sink),
        Command::Experiment(ExperimentCmd::GbVerify(a)) => gb_verify(a, &g.seed, budget, &mut sink),
    }
}

fn variant_of(v: VariantArg) -> Variant {
    match v {
        VariantArg::Standard => Variant::Standard,
        VariantArg::Fix => Variant::fix_default(),
        VariantArg::Ciminion2 => Variant::Ciminion2,
    }
}

fn entries(rep: &EstimateReport) -> Map<String, Value> {
    rep.entries.iter().map(|e| (e.name.to_string(), json!(e.bits))).collect()
}

fn estimate(a: &EstimateArgs, seed: &str, sink: &mut Sink) -> Result<(), CliError> {
    let cfg = EstimatorConfig { q: files::parse_modulus(&a.q)?, omega: a.omega, n_roots: a.n_roots, security: a.security };
    cfg.validate()?;
    let cipher = match (a.cipher, a.table) {
        (Some(c), _) => c,
        (None, Some(TableArg::Ciminion)) => CipherArg::Ciminion,
        (None, Some(TableArg::Hydra)) => CipherArg::Hydra,
        (None, None) => return Err(CliError::Usage("--cipher or --table is required".into())),
    };
    let variant = match cipher {
        CipherArg::Ciminion => Some(variant_of(a.variant).name()),
        CipherArg::Hydra => None,
    };
    let ctx = Context { seed: seed.into(), cipher: Some(cipher_name(cipher)), q: cfg.q, variant };
    if a.min_rounds {
        return min_rounds(a, cipher, &cfg, &ctx, sink);
    }
    let rounds = &a.rounds.as_ref().ok_or_else(|| CliError::Usage("--rounds is required".into()))?.0;
    if let Some(t) = a.table {
        let text = match t {
            TableArg::Ciminion => estimator::render_ciminion_table(rounds, &cfg)?,
            TableArg::Hydra => estimator::render_hydra_table(rounds, &cfg)?,
        };
        return sink.text(&text);
    }
    for &r in rounds {
        let rep = match cipher {
            CipherArg::Ciminion => estimator::est_ciminion(r, &cfg)?,
            CipherArg::Hydra => estimator::est_hydra(r, &cfg)?,
        };
        let p = payload! {
            "omega" => rep.omega,
            "n_roots" => cfg.n_roots,
            "bits" => entries(&rep),
            "d_reg" => rep.d_reg,
            "log2_dimension" => rep.log2_dimension,
            "notes" => rep.notes,
        };
        sink.record("estimate", &ctx, Some(r), p)?;
    }
    Ok(())
}

fn min_rounds(a: &EstimateArgs, cipher: CipherArg, cfg: &EstimatorConfig, ctx: &Context, sink: &mut Sink) -> Result<(), CliError> {
    const LIMIT: usize = 400;
    let found = match cipher {
        CipherArg::Ciminion => {
            let flavor = match a.variant {
                VariantArg::Standard => CiminionFlavor::Standard,
                // Both variants block round inversion, leaving only the generic attacks.
                VariantArg::Fix | VariantArg::Ciminion2 => CiminionFlavor::Ciminion2,
            };
            estimator::min_secure_rounds(cfg, LIMIT, |r| estimator::est_ciminion(r, cfg).map(|e| estimator::ciminion_best_attack(&e, flavor)))?
        }
        CipherArg::Hydra => estimator::min_secure_rounds(cfg, LIMIT, |r| {
            estimator::est_hydra(r, cfg).map(|e| estimator::hydra_best_attack(&e, a.free_construction))
        })?,
    };
    let r_star = found.ok_or_else(|| CliError::NoSolution(format!("no round count up to {LIMIT} reaches {} bits", cfg.security)))?;
    let recommendation = match cipher {
        CipherArg::Hydra => Some(estimator::round_recommendation(r_star)?),
        CipherArg::Ciminion => None,
    };
    let p = payload! {
        "omega" => cfg.omega,
        "security" => cfg.security,
        "free_construction" => a.free_construction,
        "r_star" => r_star,
        "recommended_rounds" => recommendation,
    };
    sink.record("min_rounds", ctx, Some(r_star), p)
}

fn cipher_name(c: CipherArg) -> &'static str {
    match c {
        CipherArg::Ciminion => "ciminion",
        CipherArg::Hydra => "hydra",
    }
}

fn gen_params(a: &GenParamsArgs, seed: &str, sink: &mut Sink) -> Result<(), CliError> {
    let f = files::field_from(&a.q)?;
    let file = match a.cipher {
        CipherArg::Ciminion => {
            if a.r_e == 0 || a.r_e >= a.rounds {
                return Err(CliError::Usage("need 1 <= r_e < rounds".into()));
            }
            let p = CiminionParams::from_seed(f, a.rounds - a.r_e, a.r_e, seed.as_bytes(), variant_of(a.variant))?;
            ParamsFile::Ciminion(CiminionParamsFile::from_params(&p, seed))
        }
        CipherArg::Hydra => {
            if a.variant != VariantArg::Standard {
                return Err(CliError::Usage("--variant applies to Ciminion only".into()));
            }
            ParamsFile::Hydra(HydraParamsFile::from_params(&HydraParams::concrete(f, a.rounds, seed.as_bytes())?, seed))
        }
    };
    sink.text(&files::to_toml(&file)?)
}

enum Loaded {
    Ciminion(CiminionParams),
    Hydra(Box<HydraParams>),
}

fn load_params(path: &std::path::Path) -> Result<(Loaded, String), CliError> {
    Ok(match files::read_toml::<ParamsFile>(path)? {
        ParamsFile::Ciminion(c) => (Loaded::Ciminion(c.to_params()?), c.seed),
        ParamsFile::Hydra(h) => (Loaded::Hydra(Box::new(h.to_params()?)), h.seed),
    })
}

fn gen_sample(a: &GenSampleArgs, seed: &str, sink: &mut Sink) -> Result<(), CliError> {
    let mut rng = rng_for(seed.as_bytes(), SAMPLE_DOMAIN);
    let file = match load_params(&a.params)?.0 {
        Loaded::Ciminion(p) => {
            let (keys, s) = p.random_sample(&mut rng);
            SampleFile::Ciminion(CiminionSampleFile::new(&s, Some(keys)))
        }
        Loaded::Hydra(p) => {
            let (w, s) = p.random_instance(&mut rng);
            SampleFile::Hydra(HydraSampleFile::new(&s, Some(&w)))
        }
    };
    sink.text(&files::to_toml(&file)?)
}

/// Writes a failure record for library errors before propagating them.
fn report_failure<T>(r: gbcrypt::Result<T>, kind: &str, ctx: &Context, rounds: usize, sink: &mut Sink) -> Result<T, CliError> {
    match r {
        Ok(v) => Ok(v),
        Err(e) => {
            let err = CliError::from(e.clone());
            let status = match err {
                CliError::Budget => "budget_exceeded",
                CliError::NoSolution(_) => "no_solution",
                _ => "error",
            };
            sink.record(kind, ctx, Some(rounds), payload! { "status" => status, "error" => e.to_string() })?;
            Err(err)
        }
    }
}

fn attack(a: &AttackArgs, seed: &str, budget: Budget, sink: &mut Sink) -> Result<(), CliError> {
    let (params, params_seed) = load_params(&a.params)?;
    let sample = files::read_toml::<SampleFile>(&a.sample)?;
    let opts = SolveOptions { max_branches: a.max_branches, budget };
    match (params, sample) {
        (Loaded::Ciminion(p), SampleFile::Ciminion(s)) => {
            let f = p.field();
            let sample = s.sample(f)?;
            let secret = s.secret(f)?;
            let strategy = match a.strategy {
                Some(StrategyArg::Bariant) => CiminionStrategy::Bariant,
                Some(StrategyArg::Eigenvalue) => CiminionStrategy::Eigenvalue,
                None => CiminionStrategy::default_for(p.variant()),
            };
            let ctx = Context { seed: seed.into(), cipher: Some("ciminion"), q: f.modulus(), variant: Some(p.variant().name()) };
            let rec = report_failure(solver::recover_ciminion_key_with(&p, &sample, strategy, &opts), "attack", &ctx, p.rounds(), sink)?;
            let keys: Vec<[String; 2]> = rec.keys.iter().map(|&(a, b)| [dec(a), dec(b)]).collect();
            let pl = payload! {
                "status" => "ok",
                "params_seed" => params_seed,
                "strategy" => rec.strategy.name(),
                "keys" => keys,
                "candidates" => rec.candidates,
                "stats" => stats_json(&rec.stats),
                "secret_recovered" => secret.map(|k| rec.keys.contains(&k)),
            };
            sink.record("attack", &ctx, Some(p.rounds()), pl)
        }
        (Loaded::Hydra(p), SampleFile::Hydra(s)) => {
            if a.strategy.is_some() {
                return Err(CliError::Usage("--strategy applies to Ciminion only".into()));
            }
            let f = p.field();
            let outputs = s.sample(f)?;
            let secret = s.secret(f)?;
            let ctx = Context { seed: seed.into(), cipher: Some("hydra"), q: f.modulus(), variant: None };
            let rec = report_failure(solver::recover_hydra_key(&p, &outputs, &opts), "attack", &ctx, p.rounds(), sink)?;
            let witnesses: Vec<Value> = rec
                .witnesses
                .iter()
                .map(|w| json!({ "k": w.k.map(dec), "y": w.y.map(dec), "z": w.z.map(dec) }))
                .collect();
            let pl = payload! {
                "status" => "ok",
                "params_seed" => params_seed,
                "strategy" => "eigenvalue",
                "witnesses" => witnesses,
                "candidates" => rec.candidates,
                "stats" => stats_json(&rec.stats),
                "secret_recovered" => secret.map(|w| rec.witnesses.iter().any(|x| x.k == w.k)),
            };
            sink.record("attack", &ctx, Some(p.rounds()), pl)
        }
        _ => Err(CliError::Usage("parameter and sample files are for different ciphers".into())),
    }
}

fn stats_json(s: &solver::SolveStats) -> Value {
    json!({
        "branches": s.branches,
        "charpolys": s.charpolys,
        "rebased": s.rebased,
        "max_roots": s.max_roots,
        "candidates": s.candidates,
    })
}

fn hydra_instance(f: PrimeField, r: usize, seed: &str) -> Result<(HydraParams, hydra::HydraModel), CliError> {
    let p = HydraParams::concrete(f, r, seed.as_bytes())?;
    let (_, s) = p.random_instance(&mut rng_for(seed.as_bytes(), SAMPLE_DOMAIN));
    let model = hydra::build_model(&p, &s);
    Ok((p, model))
}

fn rank_check(a: &RankCheckArgs, seed: &str, sink: &mut Sink) -> Result<(), CliError> {
    let f = files::field_from(&a.q)?;
    let ctx = Context { seed: seed.into(), cipher: Some("hydra"), q: f.modulus(), variant: None };
    let mut all = true;
    for &r in &a.rounds.0 {
        if r < 2 {
            return Err(CliError::Usage("r_H must be at least 2".into()));
        }
        let (_, model) = hydra_instance(f, r, seed)?;
        let g = hydra::transform(&model)?;
        let rep = hydra::generic_coordinates_check(&g, r)?;
        let affine = hydra::affine_rank(&g)?;
        let pass = rep.full_rank && affine == 14 * r + 6;
        all &= pass;
        let p = payload! {
            "rank" => rep.rank,
            "expected" => rep.expected,
            "full_rank" => rep.full_rank,
            "affine_rank" => affine,
            "affine_expected" => 14 * r + 6,
            "pass" => pass,
        };
        sink.record("rank_check", &ctx, Some(r), p)?;
    }
    if all {
        Ok(())
    } else {
        Err(CliError::NoSolution("rank deficit".into()))
    }
}

fn solve_degree(a: &SolveDegreeArgs, seed: &str, budget: Budget, sink: &mut Sink) -> Result<(), CliError> {
    let f = files::field_from(&a.q)?;
    let ctx = Context { seed: seed.into(), cipher: Some("hydra"), q: f.modulus(), variant: None };
    let mode = if a.strict { SearchMode::Macaulay } else { SearchMode::Closure };
    for &r in &a.rounds.0 {
        if r < 2 {
            return Err(CliError::Usage("r_H must be at least 2".into()));
        }
        let (_, model) = hydra_instance(f, r, seed)?;
        let red = report_failure(hydra::reduce_model(&model), "solve_degree", &ctx, r, sink)?;
        let hg = &red.result;
        let found = if a.boolean {
            solving_degree_search(&hg.extras, Some(&hg.gb), &hg.order, a.d_max, mode, &budget)
        } else {
            hg.gb.concat(&hg.extras).and_then(|all| solving_degree_search(&all, None, &hg.order, a.d_max, mode, &budget))
        };
        let sd = report_failure(found, "solve_degree", &ctx, r, sink)?;
        let largest = sd.steps.iter().map(|s| (s.rows, s.cols)).max_by_key(|&(_, c)| c).unwrap_or((0, 0));
        let p = payload! {
            "status" => "ok",
            "boolean" => a.boolean,
            "mode" => if a.strict { "macaulay" } else { "closure" },
            "degree" => sd.degree,
            "eliminations" => sd.steps.len(),
            "largest_matrix" => [largest.0, largest.1],
            "gb_size" => sd.gb.len(),
        };
        sink.record("solve_degree", &ctx, Some(r), p)?;
    }
    Ok(())
}

fn gb_verify(a: &GbVerifyArgs, seed: &str, budget: Budget, sink: &mut Sink) -> Result<(), CliError> {
    let f = files::field_from(&a.q)?;
    let mut all = true;
    for &r in &a.rounds.0 {
        let (ctx, p) = if a.ciminion {
            let variant = variant_of(a.variant);
            let ctx = Context { seed: seed.into(), cipher: Some("ciminion"), q: f.modulus(), variant: Some(variant.name()) };
            let params = CiminionParams::with_total_rounds(f, r, seed.as_bytes(), variant)?;
            let (_, sample) = params.random_sample(&mut rng_for(seed.as_bytes(), SAMPLE_DOMAIN));
            let model = ciminion::build_model(&params, &sample);
            let gb = report_failure(ciminion::ciminion_gb(&model), "gb_verify", &ctx, r, sink)?;
            let groebner = is_groebner(&gb, &model.order)?;
            let dim = quotient_basis(&gb, &model.order)?.len();
            let expected = 1usize << (r - 1);
            let pass = groebner && dim == expected;
            all &= pass;
            (ctx, payload! { "groebner" => groebner, "quotient_dim" => dim, "expected_dim" => expected, "pass" => pass })
        } else {
            if a.variant != VariantArg::Standard {
                return Err(CliError::Usage("--variant applies to Ciminion only".into()));
            }
            let ctx = Context { seed: seed.into(), cipher: Some("hydra"), q: f.modulus(), variant: None };
            if r < 2 {
                return Err(CliError::Usage("r_H must be at least 2".into()));
            }
            let (_, model) = hydra_instance(f, r, seed)?;
            let red = report_failure(hydra::reduce_model(&model), "gb_verify", &ctx, r, sink)?;
            let hg = &red.result;
            let n = hg.gb.ring().nvars();
            let squares = hg.gb.len() == n
                && hg.gb.leading_monomials(&hg.order).iter().all(|m| m.as_pure_power().is_some_and(|(_, e)| e == 2));
            let groebner = is_groebner(&hg.gb, &hg.order)?;
            let dim = quotient_basis(&hg.gb, &hg.order)?.len();
            // Buchberger on gb ∪ extras gives the dimension of the actual ideal.
            let ideal_dim = report_failure(
                hg.gb.concat(&hg.extras).and_then(|s| gbcrypt::mpoly::buchberger(&s, &hg.order, &budget)),
                "gb_verify",
                &ctx,
                r,
                sink,
            )
            .and_then(|g| Ok(quotient_basis(&g, &hg.order)?.len()))?;
            let pass = squares && groebner && hg.extras.len() == 4 && dim <= 1usize << n;
            all &= pass;
            (
                ctx,
                payload! {
                    "groebner" => groebner,
                    "square_leading_monomials" => squares,
                    "extras" => hg.extras.len(),
                    "quotient_dim" => dim,
                    "ideal_quotient_dim" => ideal_dim,
                    "pass" => pass,
                },
            )
        };
        sink.record("gb_verify", &ctx, Some(r), p)?;
    }
    if all {
        Ok(())
    } else {
        Err(CliError::NoSolution("verification failed".into()))
    }
}
