//! Holomorphic maps C^p → CP^n given by polynomial reduced representations.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use itertools::Itertools;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::cyclo::{CycloField, CycloNumber};
use super::linalg;
use super::poly::{ComplexPoint, MultiPoly, NumericPoly};
use super::upoly::UniPoly;
use crate::error::{Error, Result};

/// Seed used when a caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x005e_ed0f_5a17;

const REDUCED_LINES: usize = 8;
const LINE_RANGE: i64 = 1000;
const RANK_POINTS: usize = 3;
const GRID_HALF_WIDTH: i64 = 500_000;
/// Jacobians with both sides at most this large also get exact minors.
const EXACT_MINOR_CAP: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankMethod {
    ExactMinors,
    Randomized,
    /// Both paths ran and agreed.
    Both,
    /// Inherited from another map without recomputation.
    Inherited,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankResult {
    pub rank: usize,
    pub method: RankMethod,
    /// Schwartz–Zippel bound on the probability that the randomized path
    /// under-reports; 0 when only exact minors were used.
    pub failure_bound: f64,
}

#[derive(Clone, Debug)]
pub struct ProjectiveMap {
    field: Arc<CycloField>,
    p: usize,
    components: Vec<MultiPoly>,
    numeric: Vec<NumericPoly>,
    rank: RankResult,
}

impl PartialEq for ProjectiveMap {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components
    }
}

impl ProjectiveMap {
    pub fn new(components: Vec<MultiPoly>) -> Result<Self> {
        Self::with_seed(components, DEFAULT_SEED)
    }

    /// Validates the representation and computes the generic rank; `seed`
    /// drives the reducedness lines and the randomized rank points.
    pub fn with_seed(components: Vec<MultiPoly>, seed: u64) -> Result<Self> {
        let (field, p) = validate_components(&components)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        check_reduced(&components, &mut rng)?;
        let rank = rank_of_components(&components, &mut rng)?;
        Ok(Self::assemble(field, p, components, rank))
    }

    /// Skips the reducedness check and rank computation; the caller vouches
    /// for both.
    pub(crate) fn from_parts_unchecked(components: Vec<MultiPoly>, rank: RankResult) -> Self {
        let field = Arc::clone(components[0].field());
        let p = components[0].nvars();
        Self::assemble(field, p, components, rank)
    }

    fn assemble(field: Arc<CycloField>, p: usize, components: Vec<MultiPoly>, rank: RankResult) -> Self {
        let numeric = components.iter().map(MultiPoly::numeric).collect();
        ProjectiveMap {
            field,
            p,
            components,
            numeric,
            rank,
        }
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    /// Domain dimension.
    pub fn p(&self) -> usize {
        self.p
    }

    /// Target dimension.
    pub fn n(&self) -> usize {
        self.components.len() - 1
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.components
    }

    pub fn generic_rank(&self) -> usize {
        self.rank.rank
    }

    pub fn rank_info(&self) -> &RankResult {
        &self.rank
    }

    pub fn is_maximal_rank(&self) -> bool {
        self.rank.rank == self.p.min(self.n())
    }

    /// Largest total degree among the components.
    pub fn degree(&self) -> u32 {
        self.components
            .iter()
            .filter_map(|c| c.total_degree().finite())
            .max()
            .unwrap_or(0)
    }

    /// Component values at `z` in the standard embedding.
    pub fn eval(&self, z: &[Complex64]) -> Vec<Complex64> {
        self.numeric.iter().map(|f| f.eval(z)).collect()
    }

    pub fn eval_point(&self, z: &ComplexPoint) -> Vec<Complex64> {
        self.eval(z.coords())
    }

    pub fn numeric_components(&self) -> &[NumericPoly] {
        &self.numeric
    }
}

fn validate_components(components: &[MultiPoly]) -> Result<(Arc<CycloField>, usize)> {
    let first = components.first().ok_or(Error::EmptyMap)?;
    let (field, p) = (Arc::clone(first.field()), first.nvars());
    for c in components {
        if c.nvars() != p {
            return Err(Error::VariableMismatch {
                expected: p,
                found: c.nvars(),
            });
        }
        if c.field().order() != field.order() {
            return Err(Error::FieldMismatch {
                left: field.order(),
                right: c.field().order(),
            });
        }
    }
    if components.iter().all(MultiPoly::is_zero) {
        return Err(Error::ZeroMap);
    }
    Ok((field, p))
}

fn random_rational_vector(field: &Arc<CycloField>, len: usize, half: i64, rng: &mut ChaCha8Rng) -> Vec<CycloNumber> {
    (0..len)
        .map(|_| CycloNumber::from_integer(field, rng.random_range(-half..=half)))
        .collect()
}

/// Probabilistic coprimality test: the components restricted to random
/// lines a + t·b must have trivial univariate gcd on every line.
pub fn check_reduced(components: &[MultiPoly], rng: &mut ChaCha8Rng) -> Result<()> {
    let (field, p) = validate_components(components)?;
    let nonzero: Vec<&MultiPoly> = components.iter().filter(|c| !c.is_zero()).collect();
    for line in 0..REDUCED_LINES {
        let base = random_rational_vector(&field, p, LINE_RANGE, rng);
        let mut dir = random_rational_vector(&field, p, LINE_RANGE, rng);
        if dir.iter().all(CycloNumber::is_zero) && p > 0 {
            dir[0] = CycloNumber::one(&field);
        }
        let mut g: Option<UniPoly> = None;
        for c in &nonzero {
            let u = c
                .restrict_to_line(&base, &dir)
                .to_univariate()
                .expect("line restriction has one variable");
            g = Some(match g {
                None => u.monic(),
                Some(acc) => acc.gcd(&u),
            });
            if g.as_ref().is_some_and(|x| x.degree().finite() == Some(0)) {
                break;
            }
        }
        if let Some(g) = g {
            if g.degree().finite().is_some_and(|d| d > 0) {
                return Err(Error::NotReduced { line });
            }
        }
    }
    Ok(())
}

/// Numerators f_k ∂_j f_i − f_i ∂_j f_k of the Jacobian of the chart
/// f_k ≠ 0, with k the first nonzero component; rows i ≠ k, columns j.
pub fn jacobian_numerators(components: &[MultiPoly]) -> Vec<Vec<MultiPoly>> {
    let Some(k) = components.iter().position(|c| !c.is_zero()) else {
        return Vec::new();
    };
    let p = components[k].nvars();
    let fk = &components[k];
    let dk: Vec<MultiPoly> = (0..p).map(|j| fk.partial(j)).collect();
    components
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != k)
        .map(|(_, fi)| {
            (0..p)
                .map(|j| &(fk * &fi.partial(j)) - &(fi * &dk[j]))
                .collect()
        })
        .collect()
}

/// Generic rank of the Jacobian via exact minors (small cases) and exact
/// evaluation at random integer grid points; the two must agree.
pub fn generic_rank(components: &[MultiPoly], seed: u64) -> Result<RankResult> {
    validate_components(components)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rank_of_components(components, &mut rng)
}

fn rank_of_components(components: &[MultiPoly], rng: &mut ChaCha8Rng) -> Result<RankResult> {
    let jac = jacobian_numerators(components);
    let rows = jac.len();
    let p = components[0].nvars();
    let field = Arc::clone(components[0].field());
    if rows == 0 || p == 0 || jac.iter().flatten().all(MultiPoly::is_zero) {
        return Ok(RankResult {
            rank: 0,
            method: RankMethod::ExactMinors,
            failure_bound: 0.0,
        });
    }

    let (random_rank, failure_bound) = randomized_rank(&jac, &field, p, rng);
    if rows > EXACT_MINOR_CAP || p > EXACT_MINOR_CAP {
        return Ok(RankResult {
            rank: random_rank,
            method: RankMethod::Randomized,
            failure_bound,
        });
    }
    let exact = exact_minor_rank(&jac);
    if exact != random_rank {
        return Err(Error::Inconsistency(format!(
            "exact minors give rank {exact}, random evaluation gives {random_rank}"
        )));
    }
    Ok(RankResult {
        rank: exact,
        method: RankMethod::Both,
        failure_bound: 0.0,
    })
}

fn exact_minor_rank(jac: &[Vec<MultiPoly>]) -> usize {
    let rows = jac.len();
    let cols = jac[0].len();
    for size in (1..=rows.min(cols)).rev() {
        for rs in (0..rows).combinations(size) {
            for cs in (0..cols).combinations(size) {
                let minor: Vec<Vec<MultiPoly>> = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| jac[i][j].clone()).collect())
                    .collect();
                if !linalg::determinant(minor).is_zero() {
                    return size;
                }
            }
        }
    }
    0
}

fn randomized_rank(jac: &[Vec<MultiPoly>], field: &Arc<CycloField>, p: usize, rng: &mut ChaCha8Rng) -> (usize, f64) {
    let mut best = 0;
    for _ in 0..RANK_POINTS {
        let point = random_rational_vector(field, p, GRID_HALF_WIDTH, rng);
        let m: Vec<Vec<CycloNumber>> = jac
            .iter()
            .map(|row| row.iter().map(|e| e.eval_exact(&point)).collect())
            .collect();
        best = best.max(linalg::rank(&m));
    }
    // a nonzero minor of size r has degree ≤ r · (max entry degree)
    let entry_deg = jac
        .iter()
        .flatten()
        .filter_map(|e| e.total_degree().finite())
        .max()
        .unwrap_or(0) as f64;
    let minor_deg = (best.max(1) as f64) * entry_deg;
    let grid = (2 * GRID_HALF_WIDTH + 1) as f64;
    let single = (minor_deg / grid).min(1.0);
    (best, libm::pow(single, RANK_POINTS as f64))
}

/// An integer-coefficient random invertible linear change of coordinates
/// of C^p, as substitutions z_i ↦ Σ a_ij z_j.
pub fn random_linear_substitution(field: &Arc<CycloField>, p: usize, seed: u64) -> Vec<MultiPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let a: Vec<Vec<CycloNumber>> = (0..p).map(|_| random_rational_vector(field, p, 5, &mut rng)).collect();
        if linalg::rank(&a) < p {
            continue;
        }
        return a
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .fold(MultiPoly::zero(field, p), |acc, (j, c)| {
                        &acc + &MultiPoly::variable(field, p, j).scale(c)
                    })
            })
            .collect();
    }
}
