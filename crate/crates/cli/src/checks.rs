use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::path::Path;

use affine_verma::affine_weights::{check_admissible, embedding_pairings, embedding_weight};
use affine_verma::conformal::{
    expected_conformal_scalar, solve_level_equation, verify_conformal_equality, verify_quadratic_relation,
    verify_quadratic_relation_with,
};
use affine_verma::embedding::{verify_membership_certificate, verify_zero_mode_relations, SymmetrizedReading};
use affine_verma::rational::{int, to_string};
use affine_verma::singular::{build_vb, check_singular, evaluate, vd_families, verify_appendix};
use affine_verma::triality::verify_triality;
use affine_verma::{build_algebra, embedding_level, LieType, Result, VermaModule};
use clap::ValueEnum;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Singular,
    Embedding,
    Conformal,
    Admissible,
    Triality,
    Appendix,
    All,
}

pub struct RunConfig {
    pub check: CheckKind,
    pub ranks: RangeInclusive<usize>,
    pub ty: Option<LieType>,
    pub mode_bound: i64,
    pub strict: bool,
    pub corrupt_vd: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub check: String,
    pub l: usize,
    pub pass: bool,
    pub detail: String,
    pub report: Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Summary {
    pub command: String,
    pub ranks: [usize; 2],
    pub mode_bound: i64,
    pub strict: bool,
    pub pass: bool,
    pub checks: Vec<CheckResult>,
}

#[derive(Debug, Clone, Copy)]
enum Task {
    Singular(LieType),
    Embedding,
    Conformal,
    Admissible(LieType),
    Appendix,
    Triality,
}

impl Task {
    fn name(self) -> String {
        match self {
            Task::Singular(t) => format!("singular-{t}"),
            Task::Embedding => "embedding".into(),
            Task::Conformal => "conformal".into(),
            Task::Admissible(LieType::D) => "admissible".into(),
            Task::Admissible(t) => format!("admissible-{t}"),
            Task::Appendix => "appendix".into(),
            Task::Triality => "triality".into(),
        }
    }
}

fn tasks(config: &RunConfig, l: usize) -> Vec<Task> {
    let types: Vec<LieType> = match config.ty {
        Some(t) => vec![t],
        None => vec![LieType::B, LieType::D],
    };
    let adm = config.ty.unwrap_or(LieType::D);
    match config.check {
        CheckKind::Singular => types.into_iter().map(Task::Singular).collect(),
        CheckKind::Embedding => vec![Task::Embedding],
        CheckKind::Conformal => vec![Task::Conformal],
        CheckKind::Admissible => vec![Task::Admissible(adm)],
        CheckKind::Appendix => vec![Task::Appendix],
        CheckKind::Triality => vec![Task::Triality],
        CheckKind::All => {
            let mut t: Vec<Task> = types.into_iter().map(Task::Singular).collect();
            t.extend([Task::Embedding, Task::Conformal, Task::Admissible(adm), Task::Appendix]);
            if l == 4 {
                t.push(Task::Triality);
            }
            t
        }
    }
}

fn module(ty: LieType, l: usize) -> Result<VermaModule> {
    Ok(VermaModule::new(build_algebra(ty, l)?, embedding_level(l)))
}

fn value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn run_task(task: Task, l: usize, config: &RunConfig) -> Result<(bool, String, Value)> {
    match task {
        Task::Singular(ty) => {
            let m = module(ty, l)?;
            let (name, v) = match ty {
                LieType::B => ("v_B", build_vb(&m)?),
                LieType::D => {
                    let mut fams = vd_families(m.algebra());
                    if config.corrupt_vd {
                        let mid = fams.len() / 2;
                        let f = &mut fams[mid];
                        f.word = std::mem::take(&mut f.word).scale(&int(2));
                    }
                    ("v_D", evaluate(&m, &fams)?)
                }
            };
            let r = check_singular(&m, name, &v, config.strict)?;
            let failing: Vec<&str> = r
                .checks
                .iter()
                .filter(|c| !c.residual.is_empty())
                .map(|c| c.generator.as_str())
                .collect();
            let detail = if r.pass {
                format!("{} terms, {} operators annihilate", r.terms, r.checks.len())
            } else {
                format!("nonzero under {}", failing.join(", "))
            };
            Ok((r.pass, detail, value(&r)))
        }
        Task::Embedding => {
            let b = module(LieType::B, l)?;
            let d = module(LieType::D, l)?;
            let rel = verify_zero_mode_relations(&b, SymmetrizedReading::Corrected)?;
            let cert = verify_membership_certificate(&b, &d)?;
            let rel_ok = rel.iter().all(|r| r.holds && r.grade_ok);
            let pass = rel_ok && cert.equals_embedded_vd && cert.grade_ok;
            let detail = format!(
                "{}/{} zero-mode relations, certificate {}",
                rel.iter().filter(|r| r.holds && r.grade_ok).count(),
                rel.len(),
                if cert.equals_embedded_vd { "equals ι(v_D)" } else { "differs from ι(v_D)" }
            );
            Ok((pass, detail, json!({ "zero_mode_relations": rel, "certificate": cert })))
        }
        Task::Conformal => {
            let b = module(LieType::B, l)?;
            let k = embedding_level(l);
            let quad = verify_quadratic_relation(&b)?;
            let control = verify_quadratic_relation_with(&b, &int(2 * l as i64))?;
            let conf = verify_conformal_equality(l, &k)?;
            let roots = solve_level_equation(l)?;
            let roots_ok = roots == vec![k.clone(), int(0)];
            let scalar_ok = match (&quad.scalar, &conf.scalar) {
                (Some(s), Some(t)) => expected_conformal_scalar(l, s) == *t,
                _ => false,
            };
            let pass = quad.pass && !control.pass && conf.pass && scalar_ok && roots_ok;
            let detail = format!(
                "s = {}, s' = {}, c = {}",
                quad.scalar.as_ref().map(to_string).unwrap_or_else(|| "none".into()),
                conf.scalar.as_ref().map(to_string).unwrap_or_else(|| "none".into()),
                to_string(&conf.c_b)
            );
            Ok((
                pass,
                detail,
                json!({
                    "quadratic_relation": quad,
                    "perturbed_control_passes": control.pass,
                    "conformal_equality": conf,
                    "level_equation_roots": roots.iter().map(to_string).collect::<Vec<_>>(),
                }),
            ))
        }
        Task::Admissible(ty) => {
            let g = build_algebra(ty, l)?;
            let report = check_admissible(&g, &embedding_weight(&g), config.mode_bound);
            let pairings = embedding_pairings(&g);
            let pairings_ok = ty != LieType::D || pairings.matches_expected();
            let pass = report.admissible && pairings_ok;
            let detail = format!(
                "α_0∨ pairing {}, (2δ-θ)∨ pairing {}, {}",
                to_string(&pairings.affine_simple),
                to_string(&pairings.two_delta_minus_theta),
                if report.admissible { "admissible" } else { "not admissible" }
            );
            Ok((pass, detail, json!({ "pairings": pairings, "admissibility": report })))
        }
        Task::Appendix => {
            let d = module(LieType::D, l)?;
            let v = verify_appendix(&d)?;
            let held = v.iter().filter(|r| r.holds).count();
            Ok((held == v.len(), format!("{held}/{} relations hold", v.len()), json!({ "relations": v })))
        }
        Task::Triality => {
            let r = verify_triality(&module(LieType::D, 4)?)?;
            let detail = format!(
                "π'(v) = {} v, π''(v) = {} v",
                r.pi_prime_vd_scalar.as_ref().map(to_string).unwrap_or_else(|| "?".into()),
                r.pi_double_prime_vd_scalar.as_ref().map(to_string).unwrap_or_else(|| "?".into())
            );
            Ok((r.pass, detail, value(&r)))
        }
    }
}

pub fn run(config: &RunConfig) -> Summary {
    let jobs: Vec<(usize, Task)> = config
        .ranks
        .clone()
        .flat_map(|l| tasks(config, l).into_iter().map(move |t| (l, t)))
        .collect();
    let checks: Vec<CheckResult> = jobs
        .par_iter()
        .map(|&(l, task)| {
            let (pass, detail, report) = run_task(task, l, config)
                .unwrap_or_else(|e| (false, format!("error: {e}"), json!({ "error": e.to_string() })));
            CheckResult {
                check: task.name(),
                l,
                pass,
                detail,
                report,
            }
        })
        .collect();
    Summary {
        command: format!("{:?}", config.check).to_lowercase(),
        ranks: [*config.ranks.start(), *config.ranks.end()],
        mode_bound: config.mode_bound,
        strict: config.strict,
        pass: checks.iter().all(|c| c.pass),
        checks,
    }
}

/// Reads a `verify` summary into per-check verdicts, combined over ranks.
pub fn load_verdicts(path: &Path) -> std::result::Result<BTreeMap<String, bool>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let summary: Summary = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut out = BTreeMap::new();
    for c in summary.checks {
        *out.entry(c.check).or_insert(true) &= c.pass;
    }
    Ok(out)
}
