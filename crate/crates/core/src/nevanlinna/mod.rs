//! Nevanlinna functionals of polynomial maps over radius grids and checks of
//! the first and second main theorems, defects and ramification.

mod checks;
mod functionals;
mod profile;
pub mod quadrature;

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{CycloField, CycloNumber, MultiPoly, ProjectiveMap};
use crate::error::{Error, Result};

pub use checks::{
    defect_estimate, defect_relation, fmt_check, general_position, observed_multiplicity, ramification_check,
    ramification_sum, smt_check, CountingMethod, DefectEstimate, DefectRelationReport, FmtReport,
    RamificationReport, SmtReport, DEFAULT_FIT_RADIUS,
};
pub use functionals::{counting_exact_1d, counting_jensen, order_function, proximity, CountingFunction};
pub use profile::{nevanlinna_profile, DivisorProfile, NevanlinnaProfile, QuadratureMeta};
pub use quadrature::{sphere_average, Estimate, QuadratureConfig, QuadratureMethod};

/// A hypersurface {Q = 0} of CP^n, Q homogeneous of degree ≥ 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Divisor {
    poly: MultiPoly,
    degree: u32,
}

impl Divisor {
    pub fn new(poly: MultiPoly) -> Result<Self> {
        match poly.homogeneous_degree() {
            Some(degree) if degree >= 1 && !poly.is_zero() => Ok(Divisor { poly, degree }),
            _ => Err(Error::NotHomogeneous),
        }
    }

    /// The hyperplane Σ a_i ω_i = 0.
    pub fn hyperplane(field: &Arc<CycloField>, coeffs: &[CycloNumber]) -> Result<Self> {
        let n1 = coeffs.len();
        let poly = coeffs
            .iter()
            .enumerate()
            .fold(MultiPoly::zero(field, n1), |acc, (i, a)| {
                &acc + &MultiPoly::variable(field, n1, i).scale(a)
            });
        Self::new(poly)
    }

    /// The coordinate hyperplane ω_i = 0 in CP^n.
    pub fn coordinate(field: &Arc<CycloField>, n: usize, i: usize) -> Self {
        let mut coeffs = vec![CycloNumber::zero(field); n + 1];
        coeffs[i] = CycloNumber::one(field);
        Self::hyperplane(field, &coeffs).expect("coordinate form is linear")
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Number of homogeneous coordinates, n + 1.
    pub fn ambient_coords(&self) -> usize {
        self.poly.nvars()
    }

    pub fn is_hyperplane(&self) -> bool {
        self.degree == 1
    }

    /// Coefficient vector (a_0, …, a_n) of a hyperplane.
    pub fn hyperplane_coefficients(&self) -> Option<Vec<CycloNumber>> {
        self.is_hyperplane().then(|| {
            let n1 = self.poly.nvars();
            (0..n1)
                .map(|i| {
                    let mut e = vec![0; n1];
                    e[i] = 1;
                    self.poly.coefficient(&e)
                })
                .collect()
        })
    }

    /// ‖Q‖_max, the largest coefficient modulus.
    pub fn coefficient_norm(&self) -> f64 {
        self.poly.max_coefficient_norm()
    }

    /// Q ∘ f, or a containment error when it vanishes identically.
    pub fn pullback(&self, f: &ProjectiveMap) -> Result<MultiPoly> {
        if self.ambient_coords() != f.components().len() {
            return Err(Error::VariableMismatch {
                expected: f.components().len(),
                found: self.ambient_coords(),
            });
        }
        let p = self.poly.compose(f.components())?;
        if p.is_zero() {
            Err(Error::Containment)
        } else {
            Ok(p)
        }
    }
}

/// Minimum pullback multiplicity of a divisor; `Infinite` when omitted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Multiplicity {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Finite(m) => write!(f, "{m}"),
            Multiplicity::Infinite => f.write_str("inf"),
        }
    }
}

/// Strictly increasing radii, all greater than one.
#[derive(Clone, Debug, PartialEq)]
pub struct RadiusGrid(Vec<f64>);

impl RadiusGrid {
    pub fn new(radii: Vec<f64>) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::InvalidRadii("empty radius grid"));
        }
        if radii.iter().any(|r| !r.is_finite() || *r <= 1.0) {
            return Err(Error::InvalidRadii("radii must be finite and greater than 1"));
        }
        if radii.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidRadii("radii must be strictly increasing"));
        }
        Ok(RadiusGrid(radii))
    }

    pub fn radii(&self) -> &[f64] {
        &self.0
    }
}

impl Default for RadiusGrid {
    fn default() -> Self {
        RadiusGrid(vec![2.0, 4.0, 8.0, 16.0, 32.0])
    }
}
