//! One function per subcommand, each turning a [`RunConfig`] into a
//! [`Report`].

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

use lieconf_core::catalog::{
    build_named, build_tsv_lie, lie_jacobi_check, solve_construction, AlgebraId, ConstructionFamily,
};
use lieconf_core::der::{check_derivation, decompose, solve_graded_derivations, DerivationSpec};
use lieconf_core::lca::check_all_axioms;
use lieconf_core::repr::{
    build_graded, build_rank1, check_module_axioms, classify_graded, classify_rank1, reducibility_witness,
    relations_oracle, BitSeq, Classification, ClassifyOptions, GradedBase, ModuleKind, ModuleSpec, Window,
};
use lieconf_core::suite::{expected_extension, run_all};
use lieconf_core::{poly, AlgebraSpec, Var};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{ConfigError, Param, RunConfig};
use crate::report::{Record, Report, Status};

fn config_map(cfg: &RunConfig, keys: &[&str]) -> BTreeMap<String, String> {
    let opt = |v: Option<i64>| v.map_or("default".to_string(), |v| v.to_string());
    let mut m = BTreeMap::new();
    for &k in keys {
        let v = match k {
            "algebra" => cfg.algebra.to_string(),
            "a" => cfg.a.to_string(),
            "b" => cfg.b.to_string(),
            "a-prime" => cfg.a_prime.to_string(),
            "b-prime" => cfg.b_prime.to_string(),
            "window" => opt(cfg.window),
            "gen-bound" => opt(cfg.gen_bound),
            "degree" => opt(cfg.degree.map(i64::from)),
            "witness-degree" => opt(cfg.witness_degree.map(i64::from)),
            "seed" => cfg.seed.to_string(),
            "kind" => cfg.kind.to_string(),
            "alpha" => cfg.alpha.to_string(),
            "beta" => cfg.beta.to_string(),
            "c" => cfg.c.to_string(),
            "d0" => cfg.d0.to_string(),
            "bits" => cfg.bits.clone().unwrap_or_else(|| "seeded".into()),
            "module-file" => path_label(cfg.module_file.as_deref()),
            "derivation-file" => path_label(cfg.derivation_file.as_deref()),
            "grid" => cfg
                .grid
                .iter()
                .map(|(a, b)| format!("({a},{b})"))
                .collect::<Vec<_>>()
                .join(" "),
            "der-degrees" => format!("{:?}", cfg.der_degrees),
            other => unreachable!("unknown config key {other}"),
        };
        m.insert(k.to_string(), v);
    }
    m
}

fn path_label(p: Option<&Path>) -> String {
    p.map_or("none".into(), |p| p.display().to_string())
}

fn read(field: &'static str, p: &Path) -> Result<String, ConfigError> {
    fs::read_to_string(p).map_err(|e| ConfigError::field(field, format!("{}: {e}", p.display())))
}

fn family_params(cfg: &RunConfig) -> ConstructionFamily {
    ConstructionFamily {
        a: cfg.a.poly(),
        a_prime: cfg.a_prime.poly(),
        b: cfg.b.poly(),
        b_prime: cfg.b_prime.poly(),
    }
}

fn algebra(cfg: &RunConfig) -> Result<AlgebraSpec, ConfigError> {
    build_named(cfg.algebra, &family_params(cfg)).map_err(|e| ConfigError::field("algebra", e))
}

fn module_window(cfg: &RunConfig) -> Window {
    Window {
        n: cfg.window.unwrap_or(3),
        k: cfg.gen_bound.unwrap_or(2),
    }
}

pub fn verify_axioms(cfg: &RunConfig) -> Result<Report, ConfigError> {
    let mut report = Report::new(
        "verify-axioms",
        "skew-symmetry and Jacobi hold identically for the chosen algebra and parameters",
        config_map(cfg, &["algebra", "a", "b", "a-prime", "b-prime", "window"]),
    );
    if cfg.algebra == AlgebraId::Tsv {
        let n = cfg.window.unwrap_or(5);
        let start = Instant::now();
        let rep = lie_jacobi_check(&build_tsv_lie(), n);
        let samples = rep
            .antisymmetry_failures
            .iter()
            .map(|(u, v)| format!("antisymmetry fails at [{u}, {v}]"))
            .chain(rep.jacobi_failures.iter().map(|t| format!("Jacobi fails at {t:?}")));
        report.push(
            Record::new("tsv", "anti-symmetry and Jacobi on every index triple in the window")
                .input("window", n)
                .input("pairs", rep.pairs_checked)
                .input("triples", rep.triples_checked)
                .status(Status::residual(rep.all_zero()))
                .samples(samples)
                .timed(start),
        );
        return Ok(report);
    }
    let alg = algebra(cfg)?;
    let start = Instant::now();
    match check_all_axioms(&alg) {
        Ok(rep) => {
            for r in &rep.skew {
                report.push(
                    Record::new(format!("skew {}{}", r.pair.0, r.pair.1), "skew-symmetry residual")
                        .status(Status::residual(r.residual.is_zero()))
                        .samples((!r.residual.is_zero()).then(|| r.residual.to_string())),
                );
            }
            for r in &rep.jacobi {
                let [x, y, z] = r.triple;
                report.push(
                    Record::new(format!("jacobi {x}{y}{z}"), "Jacobi residual over every ordering")
                        .input("orderings", r.orderings_checked)
                        .status(Status::residual(r.residual.is_zero()))
                        .samples((!r.residual.is_zero()).then(|| r.residual.to_string())),
                );
            }
            if let Some(last) = report.records.last_mut() {
                last.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
            }
        }
        Err(e) => report.push(Record::error("axioms", "axiom check", e)),
    }
    Ok(report)
}

pub fn solve_construction_cmd(_cfg: &RunConfig) -> Result<Report, ConfigError> {
    let mut report = Report::new(
        "solve-construction",
        "the construction family is a conformal algebra exactly when a' = a/2 + 1 and b' = b/2",
        BTreeMap::new(),
    );
    let start = Instant::now();
    let sol = match solve_construction() {
        Ok(sol) => sol,
        Err(e) => {
            report.push(Record::error("solver", "linear solve of the (L,Y,Y) coefficient system", e));
            return Ok(report);
        }
    };
    report.push(
        Record::new("solution", "unique solution of the (L,Y,Y) coefficient system")
            .input("equations", sol.equations.len())
            .status(Status::Info)
            .samples([format!("a' = {}", sol.a_prime), format!("b' = {}", sol.b_prime)])
            .timed(start),
    );
    let agree = sol.a_prime == poly("a/2 + 1") && sol.b_prime == poly("b/2");
    report.push(
        Record::new("expected", "solution equals a' = a/2 + 1, b' = b/2").status(Status::expected(agree)),
    );
    let subs = [
        (Var::new("a'"), sol.a_prime.clone()),
        (Var::new("b'"), sol.b_prime.clone()),
    ];
    for eq in &sol.equations {
        let back = eq.equation.substitute_all(&subs);
        report.push(
            Record::new(format!("coefficient {}", eq.monomial), "coefficient equation vanishes at the solution")
                .input("equation", &eq.equation)
                .status(Status::residual(back.is_zero()))
                .samples((!back.is_zero()).then(|| back.to_string())),
        );
    }
    Ok(report)
}

fn build_module(cfg: &RunConfig, alg: &AlgebraSpec, w: Window) -> Result<ModuleSpec, ConfigError> {
    if let Some(p) = &cfg.module_file {
        return ModuleSpec::from_text(&read("module-file", p)?).map_err(|e| ConfigError::field("module-file", e));
    }
    let base = match cfg.kind {
        ModuleKind::RankOne => {
            return Ok(build_rank1(alg, cfg.alpha.poly(), cfg.beta.poly(), cfg.c.poly(), cfg.d0.poly()));
        }
        ModuleKind::Vab => GradedBase::Vab { alpha: cfg.alpha.poly() },
        ModuleKind::VAb => GradedBase::VAb { bits: bits(cfg, w)? },
    };
    build_graded(alg, base, cfg.beta.poly(), cfg.d0.poly(), w).map_err(|e| ConfigError::field("bits", e))
}

fn bits(cfg: &RunConfig, w: Window) -> Result<BitSeq, ConfigError> {
    let lo = -w.n - w.k;
    match &cfg.bits {
        Some(s) => BitSeq::parse(cfg.bits_start.unwrap_or(lo), s).map_err(|e| ConfigError::field("bits", e)),
        None => Ok(BitSeq::random(&mut ChaCha8Rng::seed_from_u64(cfg.seed), lo, -lo)),
    }
}

pub fn check_module(cfg: &RunConfig) -> Result<Report, ConfigError> {
    let w = module_window(cfg);
    let mut report = Report::new(
        "check-module",
        format!(
            "the module satisfies every module axiom for generators |i| <= {} on basis |m| <= {}",
            w.k, w.n
        ),
        config_map(
            cfg,
            &[
                "algebra", "a", "b", "kind", "alpha", "beta", "c", "d0", "bits", "module-file", "window", "gen-bound",
                "witness-degree", "seed",
            ],
        ),
    );
    let alg = algebra(cfg)?;
    let module = build_module(cfg, &alg, w)?;
    report.push(
        Record::new("module", "module document")
            .status(Status::Info)
            .samples(module.to_text().lines().map(str::to_string)),
    );
    let start = Instant::now();
    let axioms = check_module_axioms(&alg, &module, w);
    let axioms_zero = match &axioms {
        Ok(rep) => {
            report.push(
                Record::new("axioms", "module axiom residuals over the window")
                    .input("checked", rep.checked)
                    .status(Status::residual(rep.all_zero()))
                    .samples(rep.nonzero.iter().map(|r| {
                        format!("({},{}) i={} j={} m={}: {}", r.pair.0, r.pair.1, r.i, r.j, r.m, r.residual)
                    }))
                    .timed(start),
            );
            Some(rep.all_zero())
        }
        Err(e) => {
            report.push(Record::error("axioms", "module axiom residuals over the window", e));
            None
        }
    };
    if cfg.algebra == AlgebraId::Csv {
        let start = Instant::now();
        match relations_oracle(&cfg.a.poly(), &cfg.b.poly(), &module, w) {
            Ok(rep) => {
                report.push(
                    Record::new("oracle", "hand-expanded relations LM, LY, YY, MY, MM")
                        .input("checked", rep.checked)
                        .status(Status::residual(rep.all_zero()))
                        .samples(
                            rep.nonzero
                                .iter()
                                .map(|(rel, i, j, m, p)| format!("{rel} i={i} j={j} m={m}: {p}")),
                        )
                        .timed(start),
                );
                if let Some(z) = axioms_zero {
                    report.push(
                        Record::new("agreement", "axiom checker and relation oracle reach the same verdict")
                            .status(Status::expected(z == rep.all_zero())),
                    );
                }
            }
            Err(e) => report.push(Record::error("oracle", "hand-expanded relations", e)),
        }
    }
    if let (Some(k), ModuleKind::RankOne) = (cfg.witness_degree, module.kind) {
        let start = Instant::now();
        let rec = Record::new(
            "witness",
            "search for monic q(d) whose multiples form a proper submodule",
        )
        .input("max-degree", k)
        .input("gen-bound", w.k);
        report.push(match reducibility_witness(&alg, &module, k, w.k) {
            Ok(out) => rec.status(Status::Info).samples([format!("{out:?}")]).timed(start),
            Err(e) => rec.status(Status::Error).samples([e]),
        });
    }
    Ok(report)
}

fn describe(c: &Classification) -> Vec<String> {
    let mut out: Vec<String> = c
        .outcomes
        .iter()
        .enumerate()
        .map(|(k, o)| {
            let shapes: Vec<String> = o.shapes.iter().map(|(f, s)| format!("{f}:{s}")).collect();
            let mut line = format!("branch {k}: {}", shapes.join(" "));
            if !o.nonzero.is_empty() {
                let nz: Vec<String> = o.nonzero.iter().map(|p| p.to_string()).collect();
                line.push_str(&format!("; assuming nonzero {}", nz.join(", ")));
            }
            if !o.conditions.is_empty() {
                let cs: Vec<String> = o.conditions.iter().map(|p| p.to_string()).collect();
                line.push_str(&format!("; conditions {}", cs.join(", ")));
            }
            line
        })
        .collect();
    out.extend(
        c.steps
            .iter()
            .map(|s| format!("step {}: {} relations, {} equations, {} branches", s.label, s.relations, s.equations, s.branches)),
    );
    out
}

pub fn classify(cfg: &RunConfig) -> Result<Report, ConfigError> {
    let chv = match cfg.algebra {
        AlgebraId::Csv => false,
        AlgebraId::Chv => true,
        other => return Err(ConfigError::field("algebra", format!("classification needs csv or chv, got {other}"))),
    };
    let opts = ClassifyOptions {
        degree: cfg.degree.unwrap_or(6),
        window: module_window(cfg),
    };
    let mut report = Report::new(
        "classify",
        format!(
            "extensions of {} modules found by exact elimination agree with the classification, for unknowns of degree <= {} on generators |i| <= {} and basis |m| <= {}",
            cfg.kind, opts.degree, opts.window.k, opts.window.n
        ),
        config_map(cfg, &["algebra", "kind", "alpha", "bits", "grid", "window", "gen-bound", "degree", "seed"]),
    );
    let base = match cfg.kind {
        ModuleKind::RankOne => None,
        ModuleKind::Vab => Some(GradedBase::Vab { alpha: cfg.alpha.poly() }),
        ModuleKind::VAb => Some(GradedBase::VAb {
            bits: bits(cfg, opts.window)?,
        }),
    };
    for (a, b) in &cfg.grid {
        let (ap, bp) = (a.poly(), b.poly());
        let alg = build_named(cfg.algebra, &ConstructionFamily { a: ap.clone(), b: bp.clone(), ..ConstructionFamily::symbolic() })
            .map_err(|e| ConfigError::field("algebra", e))?;
        let id = format!("{}({a},{b})", cfg.algebra);
        let statement = "family carrying a nonzero extension";
        if matches!(a, Param::Sym(_)) || matches!(b, Param::Sym(_)) {
            report.push(Record::error(id, statement, "grid points must be numeric"));
            continue;
        }
        let expected = expected_extension(chv, &ap, &bp);
        let start = Instant::now();
        let res = match &base {
            None => classify_rank1(&alg, &opts),
            Some(base) => classify_graded(&alg, base.clone(), &opts),
        };
        let rec = Record::new(id, statement).input(
            "expected",
            expected.map_or("none".to_string(), |f| f.to_string()),
        );
        report.push(match res {
            Ok(c) => {
                let found: Vec<String> = c.extension_families().iter().map(|f| f.to_string()).collect();
                rec.input("found", if found.is_empty() { "none".into() } else { found.join(",") })
                    .status(Status::expected(c.matches(expected)))
                    .samples(describe(&c))
                    .timed(start)
            }
            Err(e) => rec.status(Status::Error).samples([e]),
        });
    }
    Ok(report)
}

pub fn derivations(cfg: &RunConfig) -> Result<Report, ConfigError> {
    let n = cfg.window.unwrap_or(2);
    let d = cfg.degree.unwrap_or(4);
    let mut report = Report::new(
        "derivations",
        format!(
            "graded derivations modulo inner ones, for images of degree < {d} on generators |i| <= {n}"
        ),
        config_map(cfg, &["algebra", "a", "b", "window", "degree", "der-degrees", "derivation-file"]),
    );
    let alg = algebra(cfg)?;
    let expected = match (cfg.algebra, &cfg.a) {
        (AlgebraId::Csv | AlgebraId::Chv, Param::Value(a)) => Some(i64::from(a.is_one())),
        _ => None,
    };
    for &c in &cfg.der_degrees {
        let start = Instant::now();
        let rec = Record::new(format!("degree {c}"), "dimension of outer derivations of degree c")
            .input("c", c);
        report.push(match solve_graded_derivations(&alg, c, d, n) {
            Ok(s) => {
                let rec = rec
                    .input("solutions", s.solution_dim())
                    .input("inner", s.inner_dim)
                    .input("outer", s.quotient_dim())
                    .input("equations", s.equations);
                let rec = match expected {
                    Some(e) => rec
                        .input("expected-outer", e)
                        .status(Status::expected(s.quotient_dim() == e && s.inner_contained)),
                    None => rec.status(if s.inner_contained { Status::Info } else { Status::Mismatch }),
                };
                rec.timed(start)
            }
            Err(e) => rec.status(Status::Error).samples([e]),
        });
    }
    if let Some(p) = &cfg.derivation_file {
        let der = DerivationSpec::from_text(&read("derivation-file", p)?)
            .map_err(|e| ConfigError::field("derivation-file", e))?;
        let start = Instant::now();
        let leibniz = match check_derivation(&alg, &der, n) {
            Ok(rep) => {
                report.push(
                    Record::new("leibniz", "Leibniz residuals of the given map")
                        .input("checked", rep.checked)
                        .status(Status::residual(rep.all_zero()))
                        .samples(rep.nonzero.iter().map(|r| format!("({}, {}): {}", r.pair.0, r.pair.1, r.residual)))
                        .timed(start),
                );
                rep.all_zero()
            }
            Err(e) => {
                report.push(Record::error("leibniz", "Leibniz residuals of the given map", e));
                false
            }
        };
        if let (true, Some(c)) = (leibniz, der.degree) {
            let start = Instant::now();
            let rec = Record::new("decomposition", "the map equals ad(x) + q d_vec(delta_c)");
            report.push(match decompose(&alg, &der, c, d, n) {
                Ok(dec) => rec
                    .status(Status::Info)
                    .samples([
                        format!("x = {}", dec.x),
                        format!("q = {}", dec.q.map_or("none".into(), |q| q.to_string())),
                    ])
                    .timed(start),
                Err(e) => rec.status(Status::Error).samples([e]),
            });
        }
    }
    Ok(report)
}

pub fn paper_suite(cfg: &RunConfig) -> Result<Report, ConfigError> {
    let mut report = Report::new(
        "paper-suite",
        "every acceptance criterion at its fixed configuration",
        config_map(cfg, &["seed"]),
    );
    for r in run_all(cfg.seed) {
        let mut rec = Record::new(format!("criterion {}", r.id), r.title)
            .input("budget-s", r.budget.as_secs())
            .status(Status::expected(r.passed))
            .samples(&r.details);
        rec.elapsed_ms = r.elapsed.as_secs_f64() * 1e3;
        report.push(rec);
    }
    Ok(report)
}
