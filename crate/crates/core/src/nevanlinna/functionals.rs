use alloc::vec::Vec;

use num_complex::Complex64;

use super::quadrature::{guarded_ln, sphere_average, Estimate, QuadratureConfig};
use super::{Divisor, Multiplicity};
use crate::algebra::{ProjectiveMap, Root};
use crate::error::{Error, Result};

fn log_max_norm(values: &[Complex64]) -> f64 {
    guarded_ln(values.iter().map(|v| v.norm()).fold(0.0, f64::max))
}

/// T_f(r): average of log max_i |f_i| over the sphere of radius r.
pub fn order_function(f: &ProjectiveMap, r: f64, cfg: &QuadratureConfig) -> Result<Estimate> {
    sphere_average(|z| log_max_norm(&f.eval(z)), f.p(), r, cfg)
}

/// m_f(r, D): average of log(‖f‖^d ‖Q‖ / |Q(f)|).
pub fn proximity(f: &ProjectiveMap, divisor: &Divisor, r: f64, cfg: &QuadratureConfig) -> Result<Estimate> {
    divisor.pullback(f)?;
    let q = divisor.poly().numeric();
    let d = divisor.degree() as f64;
    let log_q_norm = libm::log(divisor.coefficient_norm());
    sphere_average(
        |z| {
            let values = f.eval(z);
            d * log_max_norm(&values) + log_q_norm - guarded_ln(q.eval(&values).norm())
        },
        f.p(),
        r,
        cfg,
    )
}

/// Zeros of Q ∘ f for p = 1 with the N^[m] evaluator.
#[derive(Clone, Debug, PartialEq)]
pub struct CountingFunction {
    zeros: Vec<Root>,
    /// None means untruncated.
    truncation: Option<u32>,
}

impl CountingFunction {
    pub fn zeros(&self) -> &[Root] {
        &self.zeros
    }

    pub fn truncation(&self) -> Option<u32> {
        self.truncation
    }

    pub fn with_truncation(&self, truncation: Option<u32>) -> Self {
        CountingFunction {
            zeros: self.zeros.clone(),
            truncation,
        }
    }

    fn weight(&self, root: &Root) -> u32 {
        match self.truncation {
            Some(m) => m.min(root.multiplicity),
            None => root.multiplicity,
        }
    }

    /// ∫_1^r n^[m](t)/t dt with n^[m] piecewise constant.
    pub fn at(&self, r: f64) -> f64 {
        let mut inner_weight: u64 = 0;
        let mut outer = 0.0;
        for root in &self.zeros {
            let a = root.location.norm();
            if a >= r {
                continue;
            }
            let w = self.weight(root);
            if a <= 1.0 {
                inner_weight += u64::from(w);
            } else {
                outer += f64::from(w) * libm::log(r / a);
            }
        }
        inner_weight as f64 * libm::log(r) + outer
    }

    /// Smallest multiplicity among the zeros, `Infinite` when there are none.
    pub fn min_multiplicity(&self) -> Multiplicity {
        self.zeros
            .iter()
            .map(|z| z.multiplicity)
            .min()
            .map_or(Multiplicity::Infinite, Multiplicity::Finite)
    }
}

/// Exact zeros of Q ∘ f (squarefree decomposition plus isolated roots).
pub fn counting_exact_1d(f: &ProjectiveMap, divisor: &Divisor, truncation: Option<u32>) -> Result<CountingFunction> {
    if f.p() != 1 {
        return Err(Error::RequiresOneVariable { p: f.p() });
    }
    let pulled = divisor.pullback(f)?;
    let uni = pulled.to_univariate().expect("one variable");
    let zeros = if uni.degree().finite() == Some(0) {
        Vec::new()
    } else {
        uni.roots()?
    };
    Ok(CountingFunction { zeros, truncation })
}

/// Untruncated N_f(r, D) through Jensen's formula: the sphere average of
/// log|Q∘f(r·u)| − log|Q∘f(u)| over unit vectors u.
pub fn counting_jensen(f: &ProjectiveMap, divisor: &Divisor, r: f64, cfg: &QuadratureConfig) -> Result<Estimate> {
    let pulled = divisor.pullback(f)?.numeric();
    sphere_average(
        |u| {
            let scaled: Vec<Complex64> = u.iter().map(|x| x * r).collect();
            guarded_ln(pulled.eval(&scaled).norm()) - guarded_ln(pulled.eval(u).norm())
        },
        f.p(),
        1.0,
        cfg,
    )
}
