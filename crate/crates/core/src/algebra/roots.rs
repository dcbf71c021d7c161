//! Simultaneous root finding (Aberth–Ehrlich) for squarefree polynomials
//! with complex coefficients, followed by disc-based isolation.

use alloc::vec::Vec;

use num_complex::Complex64;

const MAX_ITERS: usize = 500;

fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Roots of a squarefree polynomial (lowest coefficient first) together
/// with radii of pairwise disjoint discs, each containing exactly one root.
/// Returns `None` when the discs cannot be separated.
pub fn isolate_simple_roots(coeffs: &[Complex64]) -> Option<Vec<(Complex64, f64)>> {
    let deg = coeffs.len().checked_sub(1)?;
    if deg == 0 {
        return Some(Vec::new());
    }
    let lead = coeffs[deg];
    if lead.norm() == 0.0 {
        return None;
    }
    if deg == 1 {
        let r = -coeffs[0] / lead;
        return Some(alloc::vec![(r, 0.0)]);
    }
    // Cauchy bound for the initial circle
    let bound = 1.0
        + coeffs[..deg]
            .iter()
            .map(|c| (c / lead).norm())
            .fold(0.0, f64::max);
    let mean = -coeffs[deg - 1] / (lead * deg as f64);
    let radius = bound;
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| {
            let theta = 2.0 * core::f64::consts::PI * (k as f64 + 0.25) / deg as f64 + 0.4;
            mean + Complex64::from_polar(0.5 * radius, theta)
        })
        .collect();

    for _ in 0..MAX_ITERS {
        let mut max_step: f64 = 0.0;
        for i in 0..deg {
            let (p, dp) = eval_with_derivative(coeffs, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..deg)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.re.is_finite() && step.im.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }

    // a few Newton polishing steps
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval_with_derivative(coeffs, *zi);
            if dp.norm() == 0.0 || p.norm() == 0.0 {
                break;
            }
            let next = *zi - p / dp;
            if next.re.is_finite() && next.im.is_finite() {
                *zi = next;
            }
        }
    }

    // |p/p'|·deg bounds the distance to the nearest root
    let radii: Vec<f64> = z
        .iter()
        .map(|&zi| {
            let (p, dp) = eval_with_derivative(coeffs, zi);
            let rounding = 8.0 * f64::EPSILON * deg as f64 * coeffs.iter().map(|c| c.norm()).sum::<f64>()
                * libm::pow(1.0 + zi.norm(), deg as f64);
            if dp.norm() == 0.0 {
                f64::INFINITY
            } else {
                deg as f64 * (p.norm() + rounding) / dp.norm()
            }
        })
        .collect();
    for i in 0..deg {
        if !radii[i].is_finite() {
            return None;
        }
        for j in i + 1..deg {
            if (z[i] - z[j]).norm() <= radii[i] + radii[j] {
                return None;
            }
        }
    }
    Some(z.into_iter().zip(radii).collect())
}
