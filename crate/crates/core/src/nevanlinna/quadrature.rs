//! Averages over spheres ‖z‖ = r in C^p against the normalized invariant
//! measure: an adaptive trapezoid rule on the circle for p = 1 and Monte
//! Carlo over Gaussian-normalized points for p ≥ 2.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Arguments of logarithms closer to zero than this are treated as singular.
pub const SINGULAR_EPS: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureConfig {
    /// Starting node count of the circle rule.
    pub circle_nodes: usize,
    pub max_circle_nodes: usize,
    /// Target error estimate of the circle rule.
    pub circle_tol: f64,
    pub samples: usize,
    pub seed: u64,
    /// Largest tolerated fraction of rejected samples.
    pub max_reject_fraction: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            circle_nodes: 4096,
            max_circle_nodes: 1 << 20,
            circle_tol: 1e-10,
            samples: 100_000,
            seed: 0,
            max_reject_fraction: 1e-3,
        }
    }
}

impl QuadratureConfig {
    /// A fixed-size circle rule with no refinement.
    pub fn fixed_circle(nodes: usize) -> Self {
        QuadratureConfig {
            circle_nodes: nodes,
            max_circle_nodes: nodes,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.circle_nodes < 2 || !self.circle_nodes.is_power_of_two() {
            return Err(Error::InvalidQuadrature("circle node count must be a power of two ≥ 2"));
        }
        if self.max_circle_nodes < self.circle_nodes {
            return Err(Error::InvalidQuadrature("node cap below starting node count"));
        }
        if self.samples < 2 {
            return Err(Error::InvalidQuadrature("need at least two samples"));
        }
        if !(self.circle_tol > 0.0) || !(0.0..1.0).contains(&self.max_reject_fraction) {
            return Err(Error::InvalidQuadrature("tolerances out of range"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadratureMethod {
    Trapezoid,
    MonteCarlo,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// Trapezoid: |Q_K − Q_{K/2}|. Monte Carlo: standard error.
    pub error: f64,
    pub method: QuadratureMethod,
    /// Nodes (trapezoid) or accepted samples (Monte Carlo).
    pub points: usize,
    pub rejected: usize,
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// ln x, or NaN when x is within [`SINGULAR_EPS`] of zero so the sample
/// is rejected.
pub fn guarded_ln(x: f64) -> f64 {
    if x < SINGULAR_EPS {
        f64::NAN
    } else {
        libm::log(x)
    }
}

/// Average of `g` over the sphere of radius `r` in C^p. Non-finite values
/// of `g` count as rejections.
pub fn sphere_average<G>(g: G, p: usize, r: f64, cfg: &QuadratureConfig) -> Result<Estimate>
where
    G: Fn(&[Complex64]) -> f64,
{
    cfg.validate()?;
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidRadii("radius must be positive and finite"));
    }
    match p {
        0 => Err(Error::InvalidQuadrature("sphere in C^0")),
        1 => circle_average(&g, r, cfg),
        _ => monte_carlo_average(&g, p, r, cfg),
    }
}

/// Trapezoid rule with nodes θ_k = 2π(k + ½)/K; returns (mean, accepted).
fn circle_rule<G>(g: &G, r: f64, k: usize, stride: usize, offset: usize) -> (f64, usize, usize)
where
    G: Fn(&[Complex64]) -> f64,
{
    let mut acc = CompensatedSum::default();
    let mut accepted = 0;
    let mut rejected = 0;
    let mut i = offset;
    while i < k {
        let theta = 2.0 * core::f64::consts::PI * (i as f64 + 0.5) / k as f64;
        let v = g(&[Complex64::from_polar(r, theta)]);
        if v.is_finite() {
            acc.add(v);
            accepted += 1;
        } else {
            rejected += 1;
        }
        i += stride;
    }
    let mean = if accepted > 0 { acc.value() / accepted as f64 } else { f64::NAN };
    (mean, accepted, rejected)
}

fn circle_average<G>(g: &G, r: f64, cfg: &QuadratureConfig) -> Result<Estimate>
where
    G: Fn(&[Complex64]) -> f64,
{
    let mut k = cfg.circle_nodes;
    loop {
        let (full, accepted, rejected) = circle_rule(g, r, k, 1, 0);
        check_rejections(rejected, k, cfg)?;
        let (half, _, _) = circle_rule(g, r, k, 2, 0);
        let error = (full - half).abs();
        if error <= cfg.circle_tol || 2 * k > cfg.max_circle_nodes {
            return Ok(Estimate {
                value: full,
                error,
                method: QuadratureMethod::Trapezoid,
                points: accepted,
                rejected,
            });
        }
        k *= 2;
    }
}

fn check_rejections(rejected: usize, total: usize, cfg: &QuadratureConfig) -> Result<()> {
    if rejected as f64 > cfg.max_reject_fraction * total as f64 {
        Err(Error::Singularity { rejected, total })
    } else {
        Ok(())
    }
}

/// Uniform point on the unit sphere of C^p from 2p standard normals.
pub fn unit_sphere_point(rng: &mut ChaCha8Rng, p: usize, out: &mut Vec<Complex64>) {
    loop {
        out.clear();
        let mut norm2 = 0.0;
        for _ in 0..p {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            norm2 += re * re + im * im;
            out.push(Complex64::new(re, im));
        }
        if norm2 > 0.0 {
            let s = 1.0 / libm::sqrt(norm2);
            for z in out.iter_mut() {
                *z *= s;
            }
            return;
        }
    }
}

fn monte_carlo_average<G>(g: &G, p: usize, r: f64, cfg: &QuadratureConfig) -> Result<Estimate>
where
    G: Fn(&[Complex64]) -> f64,
{
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let max_rejected = (cfg.max_reject_fraction * cfg.samples as f64) as usize;
    let mut sum = CompensatedSum::default();
    let mut sum_sq = CompensatedSum::default();
    let mut point = Vec::with_capacity(p);
    let mut accepted = 0;
    let mut rejected = 0;
    while accepted < cfg.samples {
        unit_sphere_point(&mut rng, p, &mut point);
        for z in point.iter_mut() {
            *z *= r;
        }
        let v = g(&point);
        if v.is_finite() {
            sum.add(v);
            sum_sq.add(v * v);
            accepted += 1;
        } else {
            rejected += 1;
            if rejected > max_rejected {
                return Err(Error::Singularity {
                    rejected,
                    total: accepted + rejected,
                });
            }
        }
    }
    let n = accepted as f64;
    let mean = sum.value() / n;
    let var = ((sum_sq.value() - n * mean * mean) / (n - 1.0)).max(0.0);
    Ok(Estimate {
        value: mean,
        error: libm::sqrt(var / n),
        method: QuadratureMethod::MonteCarlo,
        points: accepted,
        rejected,
    })
}
