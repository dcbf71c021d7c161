use alloc::vec::Vec;

use super::checks::CountingMethod;
use super::functionals::{counting_exact_1d, counting_jensen, order_function, proximity};
use super::quadrature::{QuadratureConfig, QuadratureMethod};
use super::{Divisor, RadiusGrid};
use crate::algebra::ProjectiveMap;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureMeta {
    pub method: QuadratureMethod,
    /// Largest node count or accepted sample count used.
    pub points: usize,
    pub seed: u64,
    /// Largest error estimate over every average taken.
    pub error_estimate: f64,
    pub rejected: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DivisorProfile {
    pub degree: u32,
    pub proximity: Vec<f64>,
    pub counting: Vec<f64>,
    /// N^[m]; equals `counting` (an upper bound) when p ≥ 2.
    pub truncated: Vec<f64>,
    pub truncation: Option<u32>,
    /// m + N − d·T
    pub residual: Vec<f64>,
    pub counting_method: CountingMethod,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NevanlinnaProfile {
    pub radii: Vec<f64>,
    pub order: Vec<f64>,
    pub divisors: Vec<DivisorProfile>,
    /// Σ N^[m] − (q − n − 1)·T, present for q ≥ n + 2 hyperplanes.
    pub slack: Option<Vec<f64>>,
    pub quadrature: QuadratureMeta,
}

/// T, m, N and N^[m] for each divisor on every radius of the grid.
pub fn nevanlinna_profile(
    f: &ProjectiveMap,
    divisors: &[Divisor],
    truncation: Option<u32>,
    grid: &RadiusGrid,
    cfg: &QuadratureConfig,
) -> Result<NevanlinnaProfile> {
    let radii = grid.radii().to_vec();
    let mut meta = QuadratureMeta {
        method: if f.p() == 1 {
            QuadratureMethod::Trapezoid
        } else {
            QuadratureMethod::MonteCarlo
        },
        points: 0,
        seed: cfg.seed,
        error_estimate: 0.0,
        rejected: 0,
    };
    let mut note = |e: &super::Estimate| {
        meta.points = meta.points.max(e.points);
        meta.error_estimate = meta.error_estimate.max(e.error);
        meta.rejected += e.rejected;
    };

    let mut order = Vec::with_capacity(radii.len());
    for &r in &radii {
        let t = order_function(f, r, cfg)?;
        note(&t);
        order.push(t.value);
    }

    let mut profiles = Vec::with_capacity(divisors.len());
    for divisor in divisors {
        let d = divisor.degree() as f64;
        let exact = if f.p() == 1 {
            Some(counting_exact_1d(f, divisor, None)?)
        } else {
            None
        };
        let mut prof = DivisorProfile {
            degree: divisor.degree(),
            proximity: Vec::new(),
            counting: Vec::new(),
            truncated: Vec::new(),
            truncation,
            residual: Vec::new(),
            counting_method: if exact.is_some() {
                CountingMethod::Exact
            } else {
                CountingMethod::Jensen
            },
        };
        for (i, &r) in radii.iter().enumerate() {
            let m = proximity(f, divisor, r, cfg)?;
            note(&m);
            let (n, nt) = match &exact {
                Some(c) => (c.at(r), c.with_truncation(truncation).at(r)),
                None => {
                    let e = counting_jensen(f, divisor, r, cfg)?;
                    note(&e);
                    (e.value, e.value)
                }
            };
            prof.proximity.push(m.value);
            prof.counting.push(n);
            prof.truncated.push(nt);
            prof.residual.push(m.value + n - d * order[i]);
        }
        profiles.push(prof);
    }

    let n = f.n();
    let q = divisors.len();
    let slack = (q >= n + 2 && divisors.iter().all(Divisor::is_hyperplane)).then(|| {
        let excess = (q - n - 1) as f64;
        (0..radii.len())
            .map(|i| profiles.iter().map(|p| p.truncated[i]).sum::<f64>() - excess * order[i])
            .collect()
    });

    Ok(NevanlinnaProfile {
        radii,
        order,
        divisors: profiles,
        slack,
        quadrature: meta,
    })
}
