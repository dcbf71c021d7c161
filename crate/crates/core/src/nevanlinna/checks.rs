use alloc::string::ToString;
use alloc::vec::Vec;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::functionals::{counting_exact_1d, counting_jensen, order_function, proximity, CountingFunction};
use super::quadrature::QuadratureConfig;
use super::{Divisor, Multiplicity, RadiusGrid};
use crate::algebra::{linalg, CycloNumber, ProjectiveMap};
use crate::error::{Error, Result};
use crate::fermat::kappa;
use crate::wronskian::is_linearly_independent;

/// Radii up to this value fit the SMT constant by default.
pub const DEFAULT_FIT_RADIUS: f64 = 4.0;

/// Exact root counting needs p = 1; otherwise Jensen's formula (untruncated).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountingMethod {
    Exact,
    Jensen,
}

/// Evaluates N^[m](r, D) on a grid by the method suited to p.
struct Counter {
    exact: Option<CountingFunction>,
}

impl Counter {
    fn new(f: &ProjectiveMap, divisor: &Divisor, truncation: Option<u32>) -> Result<Self> {
        let exact = if f.p() == 1 {
            Some(counting_exact_1d(f, divisor, truncation)?)
        } else {
            divisor.pullback(f)?;
            None
        };
        Ok(Counter { exact })
    }

    fn method(&self) -> CountingMethod {
        if self.exact.is_some() {
            CountingMethod::Exact
        } else {
            CountingMethod::Jensen
        }
    }

    /// (value, quadrature error)
    fn at(&self, f: &ProjectiveMap, divisor: &Divisor, r: f64, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
        match &self.exact {
            Some(n) => Ok((n.at(r), 0.0)),
            None => counting_jensen(f, divisor, r, cfg).map(|e| (e.value, e.error)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FmtReport {
    pub radii: Vec<f64>,
    pub order: Vec<f64>,
    pub proximity: Vec<f64>,
    pub counting: Vec<f64>,
    /// ρ(r) = m + N − d·T
    pub residual: Vec<f64>,
    /// max_i |ρ(r_i) − ρ(r_1)|
    pub variation: f64,
    /// max_i (N − d·T)(r_i); bounded above for every map.
    pub max_counting_excess: f64,
    /// Largest combined quadrature error of a residual.
    pub quadrature_error: f64,
    pub counting_method: CountingMethod,
}

impl FmtReport {
    /// Grid-constancy of ρ within `tol` or ten quadrature errors.
    pub fn passes(&self, tol: f64) -> bool {
        self.variation <= tol.max(10.0 * self.quadrature_error)
    }
}

pub fn fmt_check(f: &ProjectiveMap, divisor: &Divisor, grid: &RadiusGrid, cfg: &QuadratureConfig) -> Result<FmtReport> {
    let counter = Counter::new(f, divisor, None)?;
    let d = divisor.degree() as f64;
    let mut report = FmtReport {
        radii: grid.radii().to_vec(),
        order: Vec::new(),
        proximity: Vec::new(),
        counting: Vec::new(),
        residual: Vec::new(),
        variation: 0.0,
        max_counting_excess: f64::NEG_INFINITY,
        quadrature_error: 0.0,
        counting_method: counter.method(),
    };
    for &r in grid.radii() {
        let t = order_function(f, r, cfg)?;
        let m = proximity(f, divisor, r, cfg)?;
        let (n, n_err) = counter.at(f, divisor, r, cfg)?;
        let rho = m.value + n - d * t.value;
        report.order.push(t.value);
        report.proximity.push(m.value);
        report.counting.push(n);
        report.residual.push(rho);
        report.max_counting_excess = report.max_counting_excess.max(n - d * t.value);
        report.quadrature_error = report.quadrature_error.max(m.error + n_err + d * t.error);
    }
    let rho0 = report.residual[0];
    report.variation = report.residual.iter().map(|x| (x - rho0).abs()).fold(0.0, f64::max);
    Ok(report)
}

/// Every n+1 of the hyperplanes are linearly independent.
pub fn general_position(hyperplanes: &[Divisor]) -> Result<()> {
    let vectors = hyperplanes
        .iter()
        .map(|h| h.hyperplane_coefficients().ok_or(Error::NotHyperplane))
        .collect::<Result<Vec<Vec<CycloNumber>>>>()?;
    let Some(first) = vectors.first() else {
        return Ok(());
    };
    let n1 = first.len();
    if vectors.iter().any(|v| v.len() != n1) {
        return Err(Error::Dimension("hyperplanes live in different projective spaces"));
    }
    for subset in (0..vectors.len()).combinations(n1) {
        let m: Vec<Vec<CycloNumber>> = subset.iter().map(|&i| vectors[i].clone()).collect();
        if linalg::determinant(m).is_zero() {
            return Err(Error::GeneralPosition);
        }
    }
    Ok(())
}

/// Shared preconditions: q ≥ n+2 hyperplanes in general position and a
/// linearly nondegenerate map.
fn validate_hyperplane_family(f: &ProjectiveMap, hyperplanes: &[Divisor]) -> Result<()> {
    let n = f.n();
    if hyperplanes.len() < n + 2 {
        return Err(Error::TooFewHyperplanes {
            needed: n + 2,
            found: hyperplanes.len(),
        });
    }
    if hyperplanes.iter().any(|h| h.ambient_coords() != n + 1) {
        return Err(Error::Dimension("hyperplane and map targets differ"));
    }
    general_position(hyperplanes)?;
    if !is_linearly_independent(f.components())?.is_independent() {
        return Err(Error::LinearlyDegenerate);
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SmtReport {
    pub rank: usize,
    /// n + 1 − s
    pub truncation_level: u32,
    pub radii: Vec<f64>,
    pub order: Vec<f64>,
    /// Per hyperplane, per radius.
    pub counting: Vec<Vec<f64>>,
    /// Σ N^[n+1−s] − (q − n − 1)·T
    pub slack: Vec<f64>,
    pub fit_radius: f64,
    pub fitted_c: f64,
    /// slack ≥ −C − tol beyond the fit range
    pub holds: bool,
    /// p ≥ 2 uses the untruncated N, an upper bound for N^[m].
    pub untruncated_caveat: bool,
}

pub fn smt_check(
    f: &ProjectiveMap,
    hyperplanes: &[Divisor],
    grid: &RadiusGrid,
    fit_radius: f64,
    tol: f64,
    cfg: &QuadratureConfig,
) -> Result<SmtReport> {
    validate_hyperplane_family(f, hyperplanes)?;
    let n = f.n();
    let s = f.generic_rank();
    let level = (n + 1 - s.min(n)) as u32;
    let counters = hyperplanes
        .iter()
        .map(|h| Counter::new(f, h, Some(level)))
        .collect::<Result<Vec<_>>>()?;
    let excess = (hyperplanes.len() - n - 1) as f64;
    let mut order = Vec::new();
    let mut counting = alloc::vec![Vec::new(); hyperplanes.len()];
    let mut slack = Vec::new();
    for &r in grid.radii() {
        let t = order_function(f, r, cfg)?.value;
        let mut total = 0.0;
        for (i, (c, h)) in counters.iter().zip(hyperplanes).enumerate() {
            let (v, _) = c.at(f, h, r, cfg)?;
            counting[i].push(v);
            total += v;
        }
        order.push(t);
        slack.push(total - excess * t);
    }
    let radii = grid.radii();
    let fit_end = radii.iter().filter(|&&r| r <= fit_radius).count().max(1);
    let fitted_c = slack[..fit_end].iter().fold(0.0f64, |c, &x| c.max(-x));
    let holds = slack[fit_end..].iter().all(|&x| x >= -fitted_c - tol);
    Ok(SmtReport {
        rank: s,
        truncation_level: level,
        radii: radii.to_vec(),
        order,
        counting,
        slack,
        fit_radius,
        fitted_c,
        holds,
        untruncated_caveat: f.p() != 1,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DefectEstimate {
    /// 1 − max over the last three radii of N^[m]/(d·T), clamped to [0, 1].
    pub value: f64,
    pub tail_ratios: Vec<f64>,
    pub counting_method: CountingMethod,
}

pub fn defect_estimate(
    f: &ProjectiveMap,
    divisor: &Divisor,
    truncation: Option<u32>,
    grid: &RadiusGrid,
    cfg: &QuadratureConfig,
) -> Result<DefectEstimate> {
    let counter = Counter::new(f, divisor, truncation)?;
    let d = divisor.degree() as f64;
    let radii = grid.radii();
    let tail = &radii[radii.len().saturating_sub(3)..];
    let mut ratios = Vec::with_capacity(tail.len());
    for &r in tail {
        let t = order_function(f, r, cfg)?.value;
        if !(t > 0.0) {
            return Err(Error::DegenerateOrder);
        }
        let (n, _) = counter.at(f, divisor, r, cfg)?;
        ratios.push(n / (d * t));
    }
    let worst = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(DefectEstimate {
        value: (1.0 - worst).clamp(0.0, 1.0),
        tail_ratios: ratios,
        counting_method: counter.method(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DefectRelationReport {
    /// κ(s, n)
    pub truncation: u32,
    pub defects: Vec<f64>,
    pub sum: f64,
    /// n + 1
    pub bound: f64,
    pub holds: bool,
}

/// Σ δ^[κ(s,n)](H_i) ≤ n + 1 with the estimated defects.
pub fn defect_relation(
    f: &ProjectiveMap,
    hyperplanes: &[Divisor],
    grid: &RadiusGrid,
    tol: f64,
    cfg: &QuadratureConfig,
) -> Result<DefectRelationReport> {
    validate_hyperplane_family(f, hyperplanes)?;
    let n = f.n();
    let truncation = kappa(f.generic_rank().max(1), n) as u32;
    let defects = hyperplanes
        .iter()
        .map(|h| defect_estimate(f, h, Some(truncation), grid, cfg).map(|d| d.value))
        .collect::<Result<Vec<_>>>()?;
    let sum: f64 = defects.iter().sum();
    let bound = (n + 1) as f64;
    Ok(DefectRelationReport {
        truncation,
        defects,
        sum,
        bound,
        holds: sum <= bound + tol,
    })
}

const RAMIFICATION_LINES: usize = 3;

/// Smallest multiplicity of a component of f*D. Exact for p = 1; for p ≥ 2
/// it is read off the restriction of Q∘f to random rational lines.
pub fn observed_multiplicity(f: &ProjectiveMap, divisor: &Divisor, seed: u64) -> Result<Multiplicity> {
    let pulled = divisor.pullback(f)?;
    let field = f.field();
    let lines: Vec<_> = if f.p() == 1 {
        alloc::vec![pulled.to_univariate().expect("one variable")]
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = || -> Vec<CycloNumber> {
            (0..f.p())
                .map(|_| CycloNumber::from_integer(field, rng.random_range(-1000..=1000)))
                .collect()
        };
        (0..RAMIFICATION_LINES)
            .map(|_| {
                let (base, dir) = (draw(), draw());
                pulled
                    .restrict_to_line(&base, &dir)
                    .to_univariate()
                    .expect("one variable")
            })
            .collect()
    };
    let mut best = Multiplicity::Infinite;
    for u in lines {
        if let Some(&(_, m)) = u.squarefree_decomposition().first() {
            best = best.min(Multiplicity::Finite(m));
        }
    }
    Ok(best)
}

/// Σ (1 − κ/μ_i), an omitted hyperplane contributing 1.
pub fn ramification_sum(mus: &[Multiplicity], kappa: u32) -> f64 {
    mus.iter()
        .map(|m| match m {
            Multiplicity::Infinite => 1.0,
            Multiplicity::Finite(mu) => 1.0 - kappa as f64 / *mu as f64,
        })
        .sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct RamificationReport {
    pub kappa: u32,
    pub supplied: Vec<Multiplicity>,
    pub observed: Vec<Multiplicity>,
    pub terms: Vec<f64>,
    pub sum: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Verifies each supplied μ_i against the observed multiplicity, then
/// evaluates Σ (1 − κ(s,n)/μ_i) ≤ n + 1.
pub fn ramification_check(
    f: &ProjectiveMap,
    hyperplanes: &[Divisor],
    mus: &[Multiplicity],
    seed: u64,
) -> Result<RamificationReport> {
    if mus.len() != hyperplanes.len() {
        return Err(Error::Dimension("one multiplicity per hyperplane"));
    }
    validate_hyperplane_family(f, hyperplanes)?;
    let mut observed = Vec::with_capacity(mus.len());
    for (index, (h, &mu)) in hyperplanes.iter().zip(mus).enumerate() {
        let seen = observed_multiplicity(f, h, seed.wrapping_add(index as u64))?;
        if mu > seen {
            return Err(Error::RamificationMismatch {
                index,
                supplied: mu.to_string(),
                observed: seen.to_string(),
            });
        }
        observed.push(seen);
    }
    let k = kappa(f.generic_rank().max(1), f.n()) as u32;
    let terms: Vec<f64> = mus.iter().map(|m| ramification_sum(core::slice::from_ref(m), k)).collect();
    let sum = terms.iter().sum();
    let bound = (f.n() + 1) as f64;
    Ok(RamificationReport {
        kappa: k,
        supplied: mus.to_vec(),
        observed,
        terms,
        sum,
        bound,
        holds: sum <= bound,
    })
}
