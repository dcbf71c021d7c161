use std::path::PathBuf;

use nevlab_core::fermat::{
    corollary_with_map, degeneracy_subspace, fermat_membership, power_sum, FermatInstance, FermatKind,
    SubspaceEquation, SubspaceReport, Verdict,
};
use nevlab_core::nevanlinna::{
    defect_estimate, defect_relation, fmt_check, nevanlinna_profile, ramification_check, smt_check, Divisor,
    NevanlinnaProfile, QuadratureConfig, RadiusGrid, DEFAULT_FIT_RADIUS,
};
use nevlab_core::wronskian::{fujimoto_witness, generalized_wronskian, is_linearly_independent, Independence, OperatorFamily};
use nevlab_core::{CycloNumber, Error as CoreError};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::instance::{read_input, Expectation, Instance, InputError, KindSpec, LoadedFile, Task};

pub const MIN_SAMPLES: usize = 1000;

#[derive(Clone, Debug)]
pub struct RunConfig {
    /// `None` runs every task each instance declares.
    pub task: Option<Task>,
    pub field_order: Option<u32>,
    pub radii: RadiusGrid,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub input: PathBuf,
    pub out: PathBuf,
    /// Worker threads; 0 lets the pool decide.
    pub jobs: usize,
}

impl RunConfig {
    pub fn new(input: PathBuf, out: PathBuf) -> Self {
        RunConfig {
            task: None,
            field_order: None,
            radii: RadiusGrid::default(),
            samples: 100_000,
            seed: 0,
            tol: 1e-6,
            input,
            out,
            jobs: 0,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.samples < MIN_SAMPLES {
            return Err(format!("--samples must be at least {MIN_SAMPLES}"));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err("--tol must be a positive number".into());
        }
        if self.field_order == Some(0) {
            return Err("--field-order must be positive".into());
        }
        Ok(())
    }

    pub fn quadrature(&self) -> QuadratureConfig {
        QuadratureConfig {
            samples: self.samples,
            seed: self.seed,
            ..QuadratureConfig::default()
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("instance name `{0}` appears in more than one file")]
    DuplicateName(String),
    #[error("writing {path}: {message}")]
    Output { path: PathBuf, message: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct TaskRecord {
    pub instance: String,
    pub source: String,
    pub task: Task,
    pub status: Status,
    /// `pass`, `fail` or `not-applicable`; absent when the task raised an error.
    pub verdict: Option<String>,
    pub error_kind: Option<String>,
    pub diagnostic: Option<String>,
    pub details: Value,
}

#[derive(Clone, Debug)]
pub struct ProfileRecord {
    pub instance: String,
    pub source: String,
    pub labels: Vec<String>,
    pub result: Result<NevanlinnaProfile, CoreError>,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub files: Vec<LoadedFile>,
    pub records: Vec<TaskRecord>,
    pub profiles: Vec<ProfileRecord>,
}

impl RunOutput {
    pub fn count(&self, status: Status) -> usize {
        self.records.iter().filter(|r| r.status == status).count()
    }

    /// 0 when nothing failed, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.count(Status::Fail) == 0 {
            0
        } else {
            2
        }
    }
}

/// What a task observed, compared field by field against an expectation.
#[derive(Clone, Debug, Default, PartialEq)]
struct Observed {
    dimension: Option<usize>,
    rank: Option<usize>,
    independent: Option<bool>,
    vanished: Option<bool>,
    witness: Option<Vec<String>>,
    partition: Option<Vec<Vec<usize>>>,
    equations: Option<Vec<String>>,
    mu: Option<String>,
    excluded: Option<bool>,
}

struct Outcome {
    verdict: Verdict,
    observed: Observed,
    details: Value,
}

fn pass_if(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn verdict_name(v: &Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::NotApplicable(_) => "not-applicable",
    }
}

fn words(family: &OperatorFamily) -> Vec<String> {
    family.words().iter().map(|w| w.to_string()).collect()
}

pub fn render_equation(e: &SubspaceEquation) -> String {
    match e {
        SubspaceEquation::Proportional {
            index,
            ratio,
            representative,
        } => {
            let r = ratio.to_string();
            if r.contains(' ') {
                format!("w{index} = ({r}) * w{representative}")
            } else {
                format!("w{index} = {r} * w{representative}")
            }
        }
        SubspaceEquation::Vanishing { index } => format!("w{index} = 0"),
    }
}

fn numbers(xs: &[CycloNumber]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

fn all_divisors(inst: &Instance) -> Vec<Divisor> {
    inst.divisors.iter().chain(&inst.hyperplanes).cloned().collect()
}

fn divisor_labels(inst: &Instance) -> Vec<String> {
    let d = (1..=inst.divisors.len()).map(|i| format!("D{i}"));
    let h = (1..=inst.hyperplanes.len()).map(|i| format!("H{i}"));
    d.chain(h).collect()
}

fn fermat_instance(inst: &Instance, kind: FermatKind) -> Result<FermatInstance, CoreError> {
    let d = inst.spec.d.expect("validated at load");
    FermatInstance::new(inst.map.p(), inst.map.n(), d, kind)
}

fn subspace_outcome(report: SubspaceReport, rank: usize) -> Outcome {
    let equations: Vec<String> = report.equations.iter().map(render_equation).collect();
    let partition: Vec<Vec<usize>> = report.partition.classes.iter().map(|c| c.members.clone()).collect();
    let mu = report.extension.as_ref().map(ToString::to_string);
    let details = json!({
        "dimension": report.dimension,
        "bound": report.bound,
        "partition": partition,
        "ratios": report.partition.classes.iter().map(|c| numbers(&c.ratios)).collect::<Vec<_>>(),
        "zero_components": report.zero_components,
        "equations": equations,
        "b_sums": numbers(&report.b_sums),
        "b_sums_vanish": report.b_sums_vanish,
        "classes_at_least_two": report.classes_at_least_two,
        "extension": mu,
        "removed_equation": report.removed_equation.as_ref().map(render_equation),
        "degree_threshold": report.instance.degree_threshold(),
        "rank": rank,
        "reason": match &report.verdict { Verdict::NotApplicable(r) => Some(r.clone()), _ => None },
    });
    // a passing compact subspace also needs its b_r sums to cancel
    let verdict = match report.verdict {
        Verdict::Pass if report.instance.kind == FermatKind::Compact && !report.b_sums_vanish => Verdict::Fail,
        v => v,
    };
    Outcome {
        verdict,
        observed: Observed {
            dimension: Some(report.dimension),
            rank: Some(rank),
            partition: Some(partition),
            equations: Some(equations),
            mu,
            ..Observed::default()
        },
        details,
    }
}

fn execute(inst: &Instance, task: Task, cfg: &RunConfig) -> Result<Outcome, CoreError> {
    let f = &inst.map;
    let quad = cfg.quadrature();
    let grid = &cfg.radii;
    let rank = f.generic_rank();
    match task {
        Task::Wronskian => match &inst.family {
            Some(family) => {
                let w = generalized_wronskian(family, f.components())?;
                Ok(Outcome {
                    verdict: Verdict::Pass,
                    observed: Observed {
                        vanished: Some(w.vanished),
                        ..Observed::default()
                    },
                    details: json!({ "family": words(family), "value": w.value.to_string(), "vanished": w.vanished }),
                })
            }
            None => {
                let w = fujimoto_witness(f)?;
                let order_one = w.family.order_one_count();
                Ok(Outcome {
                    verdict: pass_if(!w.vanished && order_one >= rank && w.family.is_admissible()),
                    observed: Observed {
                        rank: Some(rank),
                        witness: Some(words(&w.family)),
                        vanished: Some(w.vanished),
                        ..Observed::default()
                    },
                    details: json!({
                        "witness": words(&w.family),
                        "order_one": order_one,
                        "rank": rank,
                        "value": w.value.to_string(),
                    }),
                })
            }
        },
        Task::Independence => {
            let decision = is_linearly_independent(f.components())?;
            let (observed, details) = match &decision {
                Independence::Independent { witness } => (
                    Observed {
                        independent: Some(true),
                        witness: Some(words(&witness.family)),
                        ..Observed::default()
                    },
                    json!({ "independent": true, "witness": words(&witness.family), "value": witness.value.to_string() }),
                ),
                Independence::Dependent { kernel } => (
                    Observed {
                        independent: Some(false),
                        ..Observed::default()
                    },
                    json!({ "independent": false, "kernel": numbers(kernel) }),
                ),
            };
            Ok(Outcome {
                verdict: Verdict::Pass,
                observed,
                details,
            })
        }
        Task::Fmt => {
            let labels = divisor_labels(inst);
            let mut all_pass = true;
            let mut per = Vec::new();
            for (label, divisor) in labels.iter().zip(all_divisors(inst)) {
                let r = fmt_check(f, &divisor, grid, &quad)?;
                all_pass &= r.passes(cfg.tol);
                per.push(json!({
                    "divisor": label,
                    "residual": r.residual,
                    "variation": r.variation,
                    "max_counting_excess": r.max_counting_excess,
                    "quadrature_error": r.quadrature_error,
                    "counting_method": format!("{:?}", r.counting_method).to_lowercase(),
                    "passes": r.passes(cfg.tol),
                }));
            }
            Ok(Outcome {
                verdict: pass_if(all_pass),
                observed: Observed::default(),
                details: json!({ "divisors": per }),
            })
        }
        Task::Smt => {
            let r = smt_check(f, &inst.hyperplanes, grid, DEFAULT_FIT_RADIUS, cfg.tol, &quad)?;
            Ok(Outcome {
                verdict: pass_if(r.holds),
                observed: Observed {
                    rank: Some(r.rank),
                    ..Observed::default()
                },
                details: json!({
                    "rank": r.rank,
                    "truncation_level": r.truncation_level,
                    "slack": r.slack,
                    "fit_radius": r.fit_radius,
                    "fitted_c": r.fitted_c,
                    "untruncated_caveat": r.untruncated_caveat,
                }),
            })
        }
        Task::Defect => {
            let labels = divisor_labels(inst);
            let mut per = Vec::new();
            for (label, divisor) in labels.iter().zip(all_divisors(inst)) {
                let e = defect_estimate(f, &divisor, inst.spec.truncation, grid, &quad)?;
                per.push(json!({ "divisor": label, "defect": e.value, "tail_ratios": e.tail_ratios }));
            }
            let relation = if inst.hyperplanes.len() >= f.n() + 2 {
                Some(defect_relation(f, &inst.hyperplanes, grid, cfg.tol, &quad)?)
            } else {
                None
            };
            Ok(Outcome {
                verdict: pass_if(relation.as_ref().is_none_or(|r| r.holds)),
                observed: Observed::default(),
                details: json!({
                    "estimates": per,
                    "convention": "1 - max over the last three radii of N/(dT)",
                    "relation": relation.map(|r| json!({
                        "truncation": r.truncation,
                        "defects": r.defects,
                        "sum": r.sum,
                        "bound": r.bound,
                        "holds": r.holds,
                    })),
                }),
            })
        }
        Task::Ramification => {
            let mus = inst.mus.as_ref().expect("validated at load");
            let r = ramification_check(f, &inst.hyperplanes, mus, cfg.seed)?;
            Ok(Outcome {
                verdict: pass_if(r.holds),
                observed: Observed {
                    rank: Some(rank),
                    ..Observed::default()
                },
                details: json!({
                    "kappa": r.kappa,
                    "supplied": r.supplied.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "observed": r.observed.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "terms": r.terms,
                    "sum": r.sum,
                    "bound": r.bound,
                }),
            })
        }
        Task::FermatCompact => {
            let fi = fermat_instance(inst, FermatKind::Compact)?;
            Ok(subspace_outcome(degeneracy_subspace(f, &fi)?, rank))
        }
        Task::FermatLogarithmic => {
            let fi = fermat_instance(inst, FermatKind::Logarithmic)?;
            Ok(subspace_outcome(degeneracy_subspace(f, &fi)?, rank))
        }
        Task::Corollary => {
            let kind = match inst.spec.kind.expect("validated at load") {
                KindSpec::Compact => FermatKind::Compact,
                KindSpec::Logarithmic => FermatKind::Logarithmic,
            };
            let fi = fermat_instance(inst, kind)?;
            let report = corollary_with_map(f, &fi)?;
            // an excluded configuration realised by a maximal-rank map would contradict the corollary
            let realised = f.is_maximal_rank()
                && match kind {
                    FermatKind::Compact => fermat_membership(f, fi.d),
                    FermatKind::Logarithmic => power_sum(f, fi.d).as_constant().is_some_and(|c| !c.is_zero()),
                };
            let rank_ok = report.rank_check.is_none_or(|c| c.holds);
            Ok(Outcome {
                verdict: pass_if(rank_ok && !(report.excluded && realised)),
                observed: Observed {
                    rank: Some(rank),
                    excluded: Some(report.excluded),
                    dimension: report.rank_check.map(|c| c.dimension),
                    ..Observed::default()
                },
                details: json!({
                    "kappa": report.kappa,
                    "degree_threshold": report.degree_threshold,
                    "degree_hypothesis": report.degree_hypothesis,
                    "dimension_threshold": report.dimension_threshold,
                    "excluded": report.excluded,
                    "rank_check": report.rank_check.map(|c| json!({
                        "rank": c.rank,
                        "dimension": c.dimension,
                        "holds": c.holds,
                    })),
                }),
            })
        }
    }
}

/// Mismatches between an expectation and what the task observed.
fn mismatches(expect: &Expectation, verdict: &Verdict, seen: &Observed) -> Vec<String> {
    let mut out = Vec::new();
    let wanted = expect.verdict.as_deref().unwrap_or("pass");
    if wanted != verdict_name(verdict) {
        out.push(format!("verdict {} (expected {wanted})", verdict_name(verdict)));
    }
    fn cmp<T: PartialEq + std::fmt::Debug>(out: &mut Vec<String>, name: &str, want: &Option<T>, got: &Option<T>) {
        if let Some(w) = want {
            if got.as_ref() != Some(w) {
                out.push(format!("{name} {got:?} (expected {w:?})"));
            }
        }
    }
    cmp(&mut out, "dimension", &expect.dimension, &seen.dimension);
    cmp(&mut out, "rank", &expect.rank, &seen.rank);
    cmp(&mut out, "independent", &expect.independent, &seen.independent);
    cmp(&mut out, "vanished", &expect.vanished, &seen.vanished);
    cmp(&mut out, "witness", &expect.witness, &seen.witness);
    cmp(&mut out, "partition", &expect.partition, &seen.partition);
    cmp(&mut out, "equations", &expect.equations, &seen.equations);
    cmp(&mut out, "mu", &expect.mu, &seen.mu);
    cmp(&mut out, "excluded", &expect.excluded, &seen.excluded);
    out
}

fn record(inst: &Instance, task: Task, result: Result<Outcome, CoreError>) -> TaskRecord {
    let expect = inst.spec.expect.get(&task);
    let source = inst
        .source
        .file_name()
        .map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    let mut rec = TaskRecord {
        instance: inst.name().to_string(),
        source,
        task,
        status: Status::Fail,
        verdict: None,
        error_kind: None,
        diagnostic: None,
        details: Value::Null,
    };
    match result {
        Err(e) => {
            rec.error_kind = Some(e.kind().to_string());
            match expect.and_then(|x| x.error.as_deref()) {
                Some(kind) if kind == e.kind() => {
                    rec.status = Status::Pass;
                    rec.diagnostic = Some(format!("expected error: {e}"));
                }
                Some(kind) => rec.diagnostic = Some(format!("{e} (expected error {kind})")),
                None => rec.diagnostic = Some(e.to_string()),
            }
        }
        Ok(outcome) => {
            rec.verdict = Some(verdict_name(&outcome.verdict).to_string());
            rec.details = outcome.details;
            match expect {
                Some(x) if x.error.is_some() => {
                    rec.diagnostic = Some(format!("expected error {} but the task completed", x.error.as_deref().unwrap_or("")));
                }
                Some(x) => {
                    let bad = mismatches(x, &outcome.verdict, &outcome.observed);
                    if bad.is_empty() {
                        rec.status = Status::Pass;
                    } else {
                        rec.diagnostic = Some(bad.join("; "));
                    }
                }
                None => match &outcome.verdict {
                    Verdict::Pass => rec.status = Status::Pass,
                    Verdict::Fail => rec.diagnostic = Some(format!("{task} check failed")),
                    Verdict::NotApplicable(reason) => {
                        rec.status = Status::Skipped;
                        rec.diagnostic = Some(reason.clone());
                    }
                },
            }
        }
    }
    rec
}

pub fn run_instance_task(inst: &Instance, task: Task, cfg: &RunConfig) -> TaskRecord {
    record(inst, task, execute(inst, task, cfg))
}

fn profile_truncation(inst: &Instance) -> Option<u32> {
    inst.spec.truncation.or_else(|| {
        inst.spec.tasks.contains(&Task::Smt).then(|| {
            let n = inst.map.n();
            (n + 1 - inst.map.generic_rank().min(n)) as u32
        })
    })
}

fn profile(inst: &Instance, cfg: &RunConfig) -> ProfileRecord {
    let source = inst
        .source
        .file_name()
        .map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    ProfileRecord {
        instance: inst.name().to_string(),
        source,
        labels: divisor_labels(inst),
        result: nevanlinna_profile(
            &inst.map,
            &all_divisors(inst),
            profile_truncation(inst),
            &cfg.radii,
            &cfg.quadrature(),
        ),
    }
}

/// Loads the input, runs every selected (instance, task) pair on a worker
/// pool and returns records in input order.
pub fn execute_run(cfg: &RunConfig) -> Result<RunOutput, RunError> {
    cfg.validate().map_err(RunError::Config)?;
    let files = read_input(&cfg.input, cfg.field_order)?;
    let mut names = std::collections::BTreeSet::new();
    for inst in files.iter().flat_map(|f| &f.instances) {
        if !names.insert(inst.name()) {
            return Err(RunError::DuplicateName(inst.name().to_string()));
        }
    }
    let instances: Vec<&Instance> = files.iter().flat_map(|f| &f.instances).collect();
    let selected = |t: &Task| cfg.task.is_none_or(|only| only == *t);
    let jobs: Vec<(&Instance, Task)> = instances
        .iter()
        .flat_map(|inst| inst.spec.tasks.iter().filter(|t| selected(t)).map(move |t| (*inst, *t)))
        .collect();
    let profiled: Vec<&Instance> = instances
        .iter()
        .copied()
        .filter(|inst| inst.spec.tasks.iter().any(|t| selected(t) && t.needs_profile()))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| RunError::Config(e.to_string()))?;
    let (records, profiles) = pool.install(|| {
        rayon::join(
            || jobs.par_iter().map(|(inst, task)| run_instance_task(inst, *task, cfg)).collect::<Vec<_>>(),
            || profiled.par_iter().map(|inst| profile(inst, cfg)).collect::<Vec<_>>(),
        )
    });
    Ok(RunOutput {
        files,
        records,
        profiles,
    })
}
