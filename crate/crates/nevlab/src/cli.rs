use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use nevlab_core::nevanlinna::RadiusGrid;

use crate::instance::Task;
use crate::report::write_artifacts;
use crate::run::{execute_run, RunConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TaskArg {
    Wronskian,
    Independence,
    Fmt,
    Smt,
    Defect,
    Ramification,
    FermatCompact,
    FermatLogarithmic,
    Corollary,
    All,
}

impl TaskArg {
    fn task(self) -> Option<Task> {
        match self {
            TaskArg::Wronskian => Some(Task::Wronskian),
            TaskArg::Independence => Some(Task::Independence),
            TaskArg::Fmt => Some(Task::Fmt),
            TaskArg::Smt => Some(Task::Smt),
            TaskArg::Defect => Some(Task::Defect),
            TaskArg::Ramification => Some(Task::Ramification),
            TaskArg::FermatCompact => Some(Task::FermatCompact),
            TaskArg::FermatLogarithmic => Some(Task::FermatLogarithmic),
            TaskArg::Corollary => Some(Task::Corollary),
            TaskArg::All => None,
        }
    }
}

/// Runs verification tasks over instance files and writes verdicts.json,
/// per-instance profile CSVs and summary.txt.
#[derive(Debug, Parser)]
#[command(name = "nevlab", version, about)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = TaskArg::All)]
    pub task: TaskArg,
    /// Instance file, or a directory whose *.toml files are read in name order.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value = "nevlab-out")]
    pub out: PathBuf,
    /// Comma-separated, strictly increasing radii above 1.
    #[arg(long, default_value = "2,4,8,16,32", value_parser = parse_radii)]
    pub radii: RadiusGrid,
    /// Monte Carlo sample count for p ≥ 2.
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Conductor N of Q(ζ_N) for files that do not declare one [default: 4].
    #[arg(long)]
    pub field_order: Option<u32>,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

pub fn parse_radii(text: &str) -> Result<RadiusGrid, String> {
    let radii = text
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("`{}` is not a number", t.trim())))
        .collect::<Result<Vec<_>, _>>()?;
    RadiusGrid::new(radii).map_err(|e| e.to_string())
}

impl Cli {
    pub fn config(&self) -> RunConfig {
        RunConfig {
            task: self.task.task(),
            field_order: self.field_order,
            radii: self.radii.clone(),
            samples: self.samples,
            seed: self.seed,
            tol: self.tol,
            input: self.input.clone(),
            out: self.out.clone(),
            jobs: self.jobs,
        }
    }
}

/// Exit codes: 0 all checks pass, 2 some check failed, 1 usage or input error.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let cfg = cli.config();
    let output = match execute_run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 1;
        }
    };
    if let Err(e) = write_artifacts(&cfg, &output) {
        let _ = writeln!(stderr, "error: {e}");
        return 1;
    }
    let _ = stdout.write_all(crate::report::summary_text(&cfg, &output).as_bytes());
    output.exit_code()
}
