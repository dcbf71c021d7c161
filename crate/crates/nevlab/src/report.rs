//! Run artifacts: `verdicts.json`, one `<instance>.profile.csv` per profiled
//! instance and a plain-text `summary.txt`. Nothing time- or host-dependent
//! is written, so identical configurations give identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use nevlab_core::nevanlinna::{NevanlinnaProfile, QuadratureMethod};
use serde_json::{json, Value};

use crate::instance::SCHEMA_VERSION;
use crate::run::{ProfileRecord, RunConfig, RunError, RunOutput, Status};

pub const VERDICTS_FILE: &str = "verdicts.json";
pub const SUMMARY_FILE: &str = "summary.txt";

fn output_error(path: &Path, e: impl std::fmt::Display) -> RunError {
    RunError::Output {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

pub fn profile_file_name(instance: &str) -> String {
    let safe: String = instance
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect();
    format!("{safe}.profile.csv")
}

fn config_json(cfg: &RunConfig, output: &RunOutput) -> Value {
    json!({
        "task": cfg.task.map_or("all", |t| t.as_str()),
        "field_order": cfg.field_order,
        "conductors": output.files.iter().map(|f| json!({
            "file": f.path.file_name().map(|s| s.to_string_lossy().into_owned()),
            "conductor": f.conductor,
        })).collect::<Vec<_>>(),
        "radii": cfg.radii.radii(),
        "samples": cfg.samples,
        "seed": cfg.seed,
        "tol": cfg.tol,
    })
}

fn method_name(m: QuadratureMethod) -> &'static str {
    match m {
        QuadratureMethod::Trapezoid => "trapezoid",
        QuadratureMethod::MonteCarlo => "monte-carlo",
    }
}

fn profile_json(p: &ProfileRecord) -> Value {
    match &p.result {
        Ok(prof) => json!({
            "instance": p.instance,
            "file": profile_file_name(&p.instance),
            "quadrature": {
                "method": method_name(prof.quadrature.method),
                "points": prof.quadrature.points,
                "seed": prof.quadrature.seed,
                "error_estimate": prof.quadrature.error_estimate,
                "rejected": prof.quadrature.rejected,
            },
            "defect_convention": "1 - limsup N/(dT), estimated by the max over the last three radii",
        }),
        Err(e) => json!({
            "instance": p.instance,
            "file": Value::Null,
            "error_kind": e.kind(),
            "diagnostic": e.to_string(),
        }),
    }
}

pub fn verdicts_json(cfg: &RunConfig, output: &RunOutput) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "config": config_json(cfg, output),
        "results": output.records,
        "profiles": output.profiles.iter().map(profile_json).collect::<Vec<_>>(),
        "totals": {
            "pass": output.count(Status::Pass),
            "fail": output.count(Status::Fail),
            "skipped": output.count(Status::Skipped),
        },
    })
}

/// Columns: r, T, then m_i, N_i, Ntrunc_i, residual_i per divisor, then
/// slack when the divisors form a hyperplane family with q ≥ n + 2.
pub fn profile_csv(labels: &[String], profile: &NevanlinnaProfile) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["r".to_string(), "T".to_string()];
    for l in labels {
        for col in ["m", "N", "Ntrunc", "residual"] {
            header.push(format!("{col}_{l}"));
        }
    }
    if profile.slack.is_some() {
        header.push("slack".into());
    }
    w.write_record(&header)?;
    for (i, r) in profile.radii.iter().enumerate() {
        let mut row = vec![r.to_string(), profile.order[i].to_string()];
        for d in &profile.divisors {
            row.push(d.proximity[i].to_string());
            row.push(d.counting[i].to_string());
            row.push(d.truncated[i].to_string());
            row.push(d.residual[i].to_string());
        }
        if let Some(s) = &profile.slack {
            row.push(s[i].to_string());
        }
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv of ASCII fields"))
}

pub fn summary_text(cfg: &RunConfig, output: &RunOutput) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "nevlab run: task={} seed={} samples={}", cfg.task.map_or("all", |t| t.as_str()), cfg.seed, cfg.samples);
    let width = output.records.iter().map(|r| r.instance.len()).max().unwrap_or(0);
    for r in &output.records {
        let status = match r.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        let what = r
            .verdict
            .clone()
            .or_else(|| r.error_kind.as_ref().map(|k| format!("error:{k}")))
            .unwrap_or_default();
        let _ = write!(s, "{status}  {:<width$}  {:<18}  {what}", r.instance, r.task.as_str());
        if let Some(d) = &r.diagnostic {
            let _ = write!(s, "  ({d})");
        }
        s.push('\n');
    }
    for p in &output.profiles {
        if let Err(e) = &p.result {
            let _ = writeln!(s, "note  profile of {} not written: {e}", p.instance);
        }
    }
    let _ = writeln!(
        s,
        "total: {} pass, {} fail, {} skipped",
        output.count(Status::Pass),
        output.count(Status::Fail),
        output.count(Status::Skipped)
    );
    s
}

/// Writes every artifact into `cfg.out` and returns their paths.
pub fn write_artifacts(cfg: &RunConfig, output: &RunOutput) -> Result<Vec<PathBuf>, RunError> {
    fs::create_dir_all(&cfg.out).map_err(|e| output_error(&cfg.out, e))?;
    let mut written = Vec::new();
    let mut put = |name: &str, contents: &str| -> Result<(), RunError> {
        let path = cfg.out.join(name);
        fs::write(&path, contents).map_err(|e| output_error(&path, e))?;
        written.push(path);
        Ok(())
    };
    let mut json = serde_json::to_string_pretty(&verdicts_json(cfg, output)).expect("json values serialize");
    json.push('\n');
    put(VERDICTS_FILE, &json)?;
    for p in &output.profiles {
        if let Ok(prof) = &p.result {
            let name = profile_file_name(&p.instance);
            let csv = profile_csv(&p.labels, prof).map_err(|e| output_error(&cfg.out.join(&name), e))?;
            put(&name, &csv)?;
        }
    }
    put(SUMMARY_FILE, &summary_text(cfg, output))?;
    Ok(written)
}
