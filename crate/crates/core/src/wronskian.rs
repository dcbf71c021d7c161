//! Generalized Wronskians indexed by families of derivative words, full-set
//! enumeration, and the linear-independence decision with a rank oracle.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use crate::algebra::linalg;
use crate::algebra::{poly_diff, CycloNumber, DiffWord, MultiPoly, ProjectiveMap};
use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    Admissible,
    Full,
}

/// Rows of a generalized Wronskian: distinct words sorted by (length, lex).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorFamily {
    words: Vec<DiffWord>,
    kind: FamilyKind,
}

impl OperatorFamily {
    /// A subword-closed word set.
    pub fn full(mut words: Vec<DiffWord>) -> Result<Self> {
        words.sort();
        check_distinct(&words)?;
        let set: BTreeSet<&DiffWord> = words.iter().collect();
        for w in &words {
            if w.one_letter_deletions().iter().any(|d| !set.contains(d)) {
                return Err(Error::InvalidFamily(format!("`{w}` has a subword outside the family")));
            }
        }
        if words.is_empty() {
            return Err(Error::InvalidFamily("empty family".into()));
        }
        Ok(OperatorFamily {
            words,
            kind: FamilyKind::Full,
        })
    }

    /// Words in the given row order; row s must have order at most s.
    pub fn admissible(words: Vec<DiffWord>) -> Result<Self> {
        let mut sorted = words.clone();
        sorted.sort();
        check_distinct(&sorted)?;
        let family = OperatorFamily {
            words,
            kind: FamilyKind::Admissible,
        };
        if !family.is_admissible() {
            return Err(Error::InvalidFamily("row s must have order at most s, row 0 empty".into()));
        }
        Ok(family)
    }

    /// Parses compact words ("", "1", "12", …); the result is a full set if
    /// the words are subword-closed and admissible otherwise.
    pub fn parse(words: &[&str], nvars: usize) -> Result<Self> {
        let parsed = words
            .iter()
            .map(|w| DiffWord::parse(w, nvars))
            .collect::<Result<Vec<_>>>()?;
        Self::full(parsed.clone()).or_else(|_| Self::admissible(parsed))
    }

    pub fn words(&self) -> &[DiffWord] {
        &self.words
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn order_one_count(&self) -> usize {
        self.words.iter().filter(|w| w.order() == 1).count()
    }

    pub fn total_order(&self) -> usize {
        self.words.iter().map(DiffWord::order).sum()
    }

    pub fn is_admissible(&self) -> bool {
        self.words.first().is_some_and(|w| w.order() == 0)
            && self.words.iter().enumerate().all(|(s, w)| w.order() <= s)
    }
}

fn check_distinct(sorted: &[DiffWord]) -> Result<()> {
    match sorted.windows(2).find(|w| w[0] == w[1]) {
        Some(w) => Err(Error::InvalidFamily(format!("repeated word `{}`", w[0]))),
        None => Ok(()),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WronskianResult {
    pub value: MultiPoly,
    pub family: OperatorFamily,
    pub vanished: bool,
}

/// All subword-closed sets of `size` words over {1..p}, ordered by total
/// order and then lexicographically.
pub fn enumerate_full_sets(p: usize, size: usize) -> Result<Vec<OperatorFamily>> {
    enumerate_full_sets_with_budget(p, size, DEFAULT_BUDGET)
}

pub fn enumerate_full_sets_with_budget(p: usize, size: usize, budget: usize) -> Result<Vec<OperatorFamily>> {
    if p == 0 || size == 0 {
        return Err(Error::InvalidFamily(format!("need p ≥ 1 and size ≥ 1, got p={p}, size={size}")));
    }
    // grow order ideals one addable word at a time
    let mut level: BTreeSet<Vec<DiffWord>> = BTreeSet::new();
    level.insert(alloc::vec![DiffWord::identity()]);
    for _ in 1..size {
        let mut next = BTreeSet::new();
        for set in &level {
            for candidate in addable_words(set, p) {
                let mut grown = set.clone();
                let pos = grown.partition_point(|w| *w < candidate);
                grown.insert(pos, candidate);
                next.insert(grown);
                if next.len() > budget {
                    return Err(Error::EnumerationBudget { budget });
                }
            }
        }
        level = next;
    }
    let mut families: Vec<OperatorFamily> = level
        .into_iter()
        .map(|words| OperatorFamily {
            words,
            kind: FamilyKind::Full,
        })
        .collect();
    families.sort_by(|a, b| a.total_order().cmp(&b.total_order()).then_with(|| a.words.cmp(&b.words)));
    Ok(families)
}

fn addable_words(set: &[DiffWord], p: usize) -> BTreeSet<DiffWord> {
    let members: BTreeSet<&DiffWord> = set.iter().collect();
    let mut out = BTreeSet::new();
    for w in set {
        for letter in 1..=p {
            let c = w.extended(letter);
            if !members.contains(&c) && c.one_letter_deletions().iter().all(|d| members.contains(d)) {
                out.insert(c);
            }
        }
    }
    out
}

fn shared_nvars(fs: &[MultiPoly]) -> Result<usize> {
    let first = fs.first().ok_or_else(|| Error::InvalidFamily("no functions".into()))?;
    for f in fs {
        if f.nvars() != first.nvars() {
            return Err(Error::VariableMismatch {
                expected: first.nvars(),
                found: f.nvars(),
            });
        }
    }
    Ok(first.nvars())
}

/// det(Δ^{word_s} f_j).
pub fn generalized_wronskian(family: &OperatorFamily, fs: &[MultiPoly]) -> Result<WronskianResult> {
    if family.len() != fs.len() {
        return Err(Error::FamilySizeMismatch {
            expected: fs.len(),
            found: family.len(),
        });
    }
    shared_nvars(fs)?;
    let matrix = family
        .words
        .iter()
        .map(|w| fs.iter().map(|f| poly_diff(f, w)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let value = linalg::determinant(matrix);
    Ok(WronskianResult {
        vanished: value.is_zero(),
        value,
        family: family.clone(),
    })
}

/// Coefficient matrix with one row per monomial and one column per function.
pub fn coefficient_matrix(fs: &[MultiPoly]) -> Vec<Vec<CycloNumber>> {
    let Some(first) = fs.first() else {
        return Vec::new();
    };
    let zero = CycloNumber::zero(first.field());
    let mut rows: BTreeMap<Vec<u32>, Vec<CycloNumber>> = BTreeMap::new();
    for (j, f) in fs.iter().enumerate() {
        for (e, c) in f.terms() {
            rows.entry(e.clone()).or_insert_with(|| alloc::vec![zero.clone(); fs.len()])[j] = c.clone();
        }
    }
    rows.into_values().collect()
}

#[derive(Clone, Debug, PartialEq)]
pub enum Independence {
    Independent { witness: WronskianResult },
    /// Nonzero (a_j) with Σ a_j f_j = 0.
    Dependent { kernel: Vec<CycloNumber> },
}

impl Independence {
    pub fn is_independent(&self) -> bool {
        matches!(self, Independence::Independent { .. })
    }
}

/// First nonvanishing geometric generalized Wronskian, if any.
pub fn first_nonvanishing_wronskian(fs: &[MultiPoly], budget: usize) -> Result<Option<WronskianResult>> {
    let p = shared_nvars(fs)?;
    for family in enumerate_full_sets_with_budget(p.max(1), fs.len(), budget)? {
        let w = generalized_wronskian(&family, fs)?;
        if !w.vanished {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Decides linear independence over C through full-set Wronskians and
/// cross-checks against the rank of the coefficient matrix.
pub fn is_linearly_independent(fs: &[MultiPoly]) -> Result<Independence> {
    is_linearly_independent_with_budget(fs, DEFAULT_BUDGET)
}

pub fn is_linearly_independent_with_budget(fs: &[MultiPoly], budget: usize) -> Result<Independence> {
    let p = shared_nvars(fs)?;
    if p == 0 {
        return Err(Error::InvalidFamily("functions need at least one variable".into()));
    }
    let coeffs = coefficient_matrix(fs);
    let zero = CycloNumber::zero(fs[0].field());
    let oracle_rank = linalg::rank(&coeffs);
    let wronskian = match first_nonvanishing_wronskian(fs, budget) {
        Ok(w) => w,
        Err(Error::EnumerationBudget { budget }) if oracle_rank == fs.len() => {
            return Err(Error::Inconsistency(format!(
                "budget {budget} exhausted before a nonzero Wronskian for an independent family"
            )));
        }
        Err(e) => return Err(e),
    };
    match (wronskian, oracle_rank == fs.len()) {
        (Some(witness), true) => Ok(Independence::Independent { witness }),
        (None, false) => {
            let kernel = linalg::kernel_basis(&coeffs, fs.len(), &zero)
                .into_iter()
                .next()
                .expect("rank deficiency gives a kernel vector");
            Ok(Independence::Dependent { kernel })
        }
        (Some(w), false) => Err(Error::Inconsistency(format!(
            "Wronskian over {:?} is nonzero but the coefficient rank is {oracle_rank}",
            w.family.words
        ))),
        (None, true) => Err(Error::Inconsistency(
            "every full-set Wronskian vanishes but the coefficient matrix has full rank".into(),
        )),
    }
}

/// A full (hence admissible) family with at least s order-one words whose
/// Wronskian of the components is nonzero, s being the generic rank.
pub fn fujimoto_witness(f: &ProjectiveMap) -> Result<WronskianResult> {
    fujimoto_witness_with_budget(f, DEFAULT_BUDGET)
}

pub fn fujimoto_witness_with_budget(f: &ProjectiveMap, budget: usize) -> Result<WronskianResult> {
    let fs = f.components();
    if !is_linearly_independent_with_budget(fs, budget)?.is_independent() {
        return Err(Error::LinearlyDegenerate);
    }
    let s = f.generic_rank();
    for family in enumerate_full_sets_with_budget(f.p().max(1), fs.len(), budget)? {
        if family.order_one_count() < s {
            continue;
        }
        let w = generalized_wronskian(&family, fs)?;
        if !w.vanished {
            return Ok(w);
        }
    }
    Err(Error::TheoremViolation(format!(
        "no nonvanishing full set with {s} order-one operators"
    )))
}
