//! Instance files: a TOML document holding one or more map instances with
//! exact coefficient strings, the tasks to run on them and, optionally, the
//! outcomes they are expected to produce.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use nevlab_core::nevanlinna::{Divisor, Multiplicity};
use nevlab_core::wronskian::OperatorFamily;
use nevlab_core::{CycloField, CycloNumber, MultiPoly, ProjectiveMap};
use serde::{Deserialize, Serialize};
use toml::Spanned;

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_CONDUCTOR: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Wronskian,
    Independence,
    Fmt,
    Smt,
    Defect,
    Ramification,
    FermatCompact,
    FermatLogarithmic,
    Corollary,
}

impl Task {
    pub const ALL: [Task; 9] = [
        Task::Wronskian,
        Task::Independence,
        Task::Fmt,
        Task::Smt,
        Task::Defect,
        Task::Ramification,
        Task::FermatCompact,
        Task::FermatLogarithmic,
        Task::Corollary,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Task::Wronskian => "wronskian",
            Task::Independence => "independence",
            Task::Fmt => "fmt",
            Task::Smt => "smt",
            Task::Defect => "defect",
            Task::Ramification => "ramification",
            Task::FermatCompact => "fermat-compact",
            Task::FermatLogarithmic => "fermat-logarithmic",
            Task::Corollary => "corollary",
        }
    }

    /// Tasks whose runs also emit a Nevanlinna profile.
    pub fn needs_profile(self) -> bool {
        matches!(self, Task::Fmt | Task::Smt | Task::Defect)
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindSpec {
    Compact,
    Logarithmic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub exp: Spanned<Vec<u32>>,
    pub coeff: Spanned<String>,
}

/// `"inf"` or a positive integer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MuSpec {
    Finite(u32),
    Named(String),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    /// `pass`, `fail` or `not-applicable`; `pass` when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    /// Error kind the task must raise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub independent: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vanished: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equations: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub excluded: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub name: Spanned<String>,
    pub tasks: Vec<Task>,
    pub p: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<KindSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<u32>,
    pub components: Spanned<Vec<Vec<Term>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub divisors: Vec<Spanned<Vec<Term>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hyperplanes: Vec<Spanned<Vec<Spanned<String>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mus: Option<Spanned<Vec<MuSpec>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Spanned<Vec<String>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub expect: BTreeMap<Task, Expectation>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conductor: Option<u32>,
    #[serde(rename = "instance")]
    pub instances: Vec<InstanceSpec>,
}

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}:{column}: {message} (near `{token}`)")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        token: String,
        message: String,
    },

    #[error("{path}: file declares conductor {file} but --field-order is {flag}")]
    ConductorConflict { path: PathBuf, file: u32, flag: u32 },
}

/// A validated instance with its exact objects built.
#[derive(Clone, Debug)]
pub struct Instance {
    pub source: PathBuf,
    pub spec: InstanceSpec,
    pub map: ProjectiveMap,
    pub divisors: Vec<Divisor>,
    pub hyperplanes: Vec<Divisor>,
    pub mus: Option<Vec<Multiplicity>>,
    pub family: Option<OperatorFamily>,
}

impl Instance {
    pub fn name(&self) -> &str {
        self.spec.name.get_ref()
    }

    pub fn field(&self) -> &Arc<CycloField> {
        self.map.field()
    }
}

#[derive(Clone, Debug)]
pub struct LoadedFile {
    pub path: PathBuf,
    pub text: String,
    pub document: InstanceFile,
    pub conductor: u32,
    pub instances: Vec<Instance>,
}

struct Locator<'a> {
    path: &'a Path,
    text: &'a str,
}

impl Locator<'_> {
    fn error(&self, span: Range<usize>, message: impl Into<String>) -> InputError {
        let start = span.start.min(self.text.len());
        let end = span.end.clamp(start, self.text.len());
        let (line, column) = line_column(self.text, start);
        let mut token: String = self.text[start..end].lines().next().unwrap_or("").to_string();
        if token.chars().count() > 40 {
            token = token.chars().take(40).collect::<String>() + "…";
        }
        InputError::Parse {
            path: self.path.to_path_buf(),
            line,
            column,
            token,
            message: message.into(),
        }
    }

    fn spanned_error<T>(&self, at: &Spanned<T>, message: impl Into<String>) -> InputError {
        self.error(at.span(), message)
    }
}

/// 1-based line and column (in characters) of a byte offset.
pub fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let line_start = before.rfind('\n').map_or(0, |i| i + 1);
    (line, before[line_start..].chars().count() + 1)
}

pub fn parse_document(path: &Path, text: &str) -> Result<InstanceFile, InputError> {
    let loc = Locator { path, text };
    let document: InstanceFile = toml::from_str(text).map_err(|e| {
        let span = e.span().unwrap_or(0..0);
        loc.error(span, e.message().trim_end().to_string())
    })?;
    if document.schema_version != SCHEMA_VERSION {
        return Err(loc.error(
            0..0,
            format!("unsupported schema_version {}", document.schema_version),
        ));
    }
    Ok(document)
}

/// Canonical text form; parsing it back yields an equal document.
pub fn to_canonical(document: &InstanceFile) -> String {
    toml::to_string(document).expect("instance documents always serialize")
}

pub fn read_file(path: &Path, field_order: Option<u32>) -> Result<LoadedFile, InputError> {
    let text = std::fs::read_to_string(path).map_err(|source| InputError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    load_text(path, text, field_order)
}

/// Parses and validates a document. The file's conductor wins; the flag
/// supplies the default and must agree when both are present.
pub fn load_text(path: &Path, text: String, field_order: Option<u32>) -> Result<LoadedFile, InputError> {
    let document = parse_document(path, &text)?;
    let conductor = match (document.conductor, field_order) {
        (Some(file), Some(flag)) if file != flag => {
            return Err(InputError::ConductorConflict {
                path: path.to_path_buf(),
                file,
                flag,
            })
        }
        (Some(c), _) | (None, Some(c)) => c,
        (None, None) => DEFAULT_CONDUCTOR,
    };
    let loc = Locator { path, text: &text };
    let field = CycloField::new(conductor).map_err(|e| loc.error(0..0, e.to_string()))?;
    let mut seen = std::collections::BTreeSet::new();
    let mut instances = Vec::with_capacity(document.instances.len());
    for spec in &document.instances {
        if !seen.insert(spec.name.get_ref().clone()) {
            return Err(loc.spanned_error(&spec.name, "duplicate instance name"));
        }
        instances.push(build_instance(&loc, &field, spec)?);
    }
    Ok(LoadedFile {
        path: path.to_path_buf(),
        document,
        conductor,
        instances,
        text,
    })
}

/// Reads one file, or every `*.toml` of a directory in name order.
pub fn read_input(path: &Path, field_order: Option<u32>) -> Result<Vec<LoadedFile>, InputError> {
    if path.is_dir() {
        let entries = std::fs::read_dir(path).map_err(|source| InputError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut files = Vec::new();
        for entry in entries {
            let entry = entry.map_err(|source| InputError::Io {
                path: path.to_path_buf(),
                source,
            })?;
            let p = entry.path();
            if p.extension().is_some_and(|e| e == "toml") && p.is_file() {
                files.push(p);
            }
        }
        files.sort();
        files.iter().map(|p| read_file(p, field_order)).collect()
    } else {
        Ok(vec![read_file(path, field_order)?])
    }
}

fn parse_coeff(loc: &Locator<'_>, field: &Arc<CycloField>, text: &Spanned<String>) -> Result<CycloNumber, InputError> {
    CycloNumber::parse(field, text.get_ref()).map_err(|e| {
        let span = text.span();
        let message = e.to_string();
        match e {
            nevlab_core::Error::CoefficientParse { column, token, .. } => {
                // the span covers the quotes; point inside the string
                let inner_start = span.start + 1;
                let inner = loc.text.get(inner_start..span.end.saturating_sub(1)).unwrap_or("");
                let offset = inner
                    .char_indices()
                    .nth(column.saturating_sub(1))
                    .map_or(inner.len(), |(i, _)| i);
                let at = inner_start + offset;
                loc.error(at..at + token.len(), message)
            }
            _ => loc.error(span, message),
        }
    })
}

fn parse_poly(
    loc: &Locator<'_>,
    field: &Arc<CycloField>,
    nvars: usize,
    terms: &[Term],
) -> Result<MultiPoly, InputError> {
    let mut pairs = Vec::with_capacity(terms.len());
    for term in terms {
        if term.exp.get_ref().len() != nvars {
            return Err(loc.spanned_error(
                &term.exp,
                format!("exponent vector needs {nvars} entries, found {}", term.exp.get_ref().len()),
            ));
        }
        pairs.push((term.exp.get_ref().clone(), parse_coeff(loc, field, &term.coeff)?));
    }
    MultiPoly::from_terms(field, nvars, pairs).map_err(|e| loc.error(0..0, e.to_string()))
}

fn build_instance(loc: &Locator<'_>, field: &Arc<CycloField>, spec: &InstanceSpec) -> Result<Instance, InputError> {
    let name_err = |message: String| loc.spanned_error(&spec.name, message);
    if spec.tasks.is_empty() {
        return Err(name_err("instance declares no tasks".into()));
    }
    if spec.p == 0 {
        return Err(name_err("p must be at least 1".into()));
    }
    let raw = spec.components.get_ref();
    if raw.is_empty() {
        return Err(loc.spanned_error(&spec.components, "component list is empty"));
    }
    let n = raw.len() - 1;
    if let Some(declared) = spec.n {
        if declared != n {
            return Err(loc.spanned_error(
                &spec.components,
                format!("n = {declared} but {} components were given", raw.len()),
            ));
        }
    }
    let components = raw
        .iter()
        .map(|terms| parse_poly(loc, field, spec.p, terms))
        .collect::<Result<Vec<_>, _>>()?;
    let map = ProjectiveMap::new(components).map_err(|e| loc.spanned_error(&spec.components, e.to_string()))?;

    let divisors = spec
        .divisors
        .iter()
        .map(|terms| {
            let poly = parse_poly(loc, field, n + 1, terms.get_ref())?;
            Divisor::new(poly).map_err(|e| loc.spanned_error(terms, e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let hyperplanes = spec
        .hyperplanes
        .iter()
        .map(|coeffs| {
            if coeffs.get_ref().len() != n + 1 {
                return Err(loc.spanned_error(coeffs, format!("hyperplane needs {} coefficients", n + 1)));
            }
            let values = coeffs
                .get_ref()
                .iter()
                .map(|c| parse_coeff(loc, field, c))
                .collect::<Result<Vec<_>, _>>()?;
            Divisor::hyperplane(field, &values).map_err(|e| loc.spanned_error(coeffs, e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mus = spec
        .mus
        .as_ref()
        .map(|mus| {
            mus.get_ref()
                .iter()
                .map(|m| match m {
                    MuSpec::Finite(k) if *k >= 1 => Ok(Multiplicity::Finite(*k)),
                    MuSpec::Named(s) if s == "inf" => Ok(Multiplicity::Infinite),
                    _ => Err(loc.spanned_error(mus, "multiplicities are positive integers or \"inf\"")),
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .transpose()?;

    let family = spec
        .family
        .as_ref()
        .map(|words| {
            let words_ref: Vec<&str> = words.get_ref().iter().map(String::as_str).collect();
            OperatorFamily::parse(&words_ref, spec.p).map_err(|e| loc.spanned_error(words, e.to_string()))
        })
        .transpose()?;

    for (task, exp) in &spec.expect {
        if !spec.tasks.contains(task) {
            return Err(name_err(format!("expectation for undeclared task `{task}`")));
        }
        if let Some(v) = &exp.verdict {
            if !matches!(v.as_str(), "pass" | "fail" | "not-applicable") {
                return Err(name_err(format!("unknown expected verdict `{v}`")));
            }
        }
    }
    for task in &spec.tasks {
        let missing = match task {
            Task::Smt | Task::Ramification if spec.hyperplanes.is_empty() => Some("hyperplanes"),
            Task::Ramification if spec.mus.is_none() => Some("mus"),
            Task::Fmt | Task::Defect if spec.divisors.is_empty() && spec.hyperplanes.is_empty() => {
                Some("divisors or hyperplanes")
            }
            Task::FermatCompact | Task::FermatLogarithmic | Task::Corollary if spec.d.is_none() => Some("d"),
            Task::Corollary if spec.kind.is_none() => Some("kind"),
            _ => None,
        };
        if let Some(what) = missing {
            return Err(name_err(format!("task `{task}` requires `{what}`")));
        }
    }

    Ok(Instance {
        source: loc.path.to_path_buf(),
        spec: spec.clone(),
        map,
        divisors,
        hyperplanes,
        mus,
        family,
    })
}
