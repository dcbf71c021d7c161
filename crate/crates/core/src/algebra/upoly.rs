//! Dense univariate polynomials over Q(ζ_N): Euclidean gcd, Yun squarefree
//! decomposition, and certified numerical isolation of the roots.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::cyclo::{CycloField, CycloNumber, Rational};
use super::poly::Degree;
use super::roots;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly {
    field: Arc<CycloField>,
    /// Lowest degree first, no trailing zeros; empty for the zero polynomial.
    coeffs: Vec<CycloNumber>,
}

/// A root with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub location: Complex64,
    pub multiplicity: u32,
    /// Radius of a disc around `location` certified to contain exactly this root.
    pub radius: f64,
}

impl UniPoly {
    pub fn new(field: &Arc<CycloField>, mut coeffs: Vec<CycloNumber>) -> Self {
        while coeffs.last().is_some_and(CycloNumber::is_zero) {
            coeffs.pop();
        }
        UniPoly {
            field: Arc::clone(field),
            coeffs,
        }
    }

    pub fn zero(field: &Arc<CycloField>) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn one(field: &Arc<CycloField>) -> Self {
        Self::new(field, vec![CycloNumber::one(field)])
    }

    pub fn coeffs(&self) -> &[CycloNumber] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n as u32 - 1),
        }
    }

    fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Option<&CycloNumber> {
        self.coeffs.last()
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale(&Rational::from_integer((k as i64).into())))
            .collect();
        Self::new(&self.field, c)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let inv = l.inv().expect("leading coefficient is nonzero");
                Self::new(&self.field, self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = CycloNumber::zero(&self.field);
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).unwrap_or(&zero);
                let b = other.coeffs.get(i).unwrap_or(&zero);
                a - b
            })
            .collect();
        Self::new(&self.field, c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.field);
        }
        let mut c = vec![CycloNumber::zero(&self.field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        Self::new(&self.field, c)
    }

    pub fn divrem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let lead = divisor.leading().ok_or(Error::DivisionByZero)?;
        let inv = lead.inv()?;
        let dn = divisor.deg();
        if self.coeffs.len() < divisor.coeffs.len() {
            return Ok((Self::zero(&self.field), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![CycloNumber::zero(&self.field); self.coeffs.len() - dn];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dn] * &inv;
            if c.is_zero() {
                continue;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] = &rem[k + i] - &(&c * d);
            }
            quot[k] = c;
        }
        rem.truncate(dn);
        Ok((Self::new(&self.field, quot), Self::new(&self.field, rem)))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("divisor is nonzero");
            a = core::mem::replace(&mut b, r.monic());
        }
        a.monic()
    }

    fn exact_quotient(&self, divisor: &Self) -> Self {
        let (q, r) = self.divrem(divisor).expect("divisor is nonzero");
        debug_assert!(r.is_zero(), "inexact polynomial quotient");
        q
    }

    /// Multiplicity of the root 0.
    pub fn trailing_zeros(&self) -> u32 {
        self.coeffs.iter().take_while(|c| c.is_zero()).count() as u32
    }

    /// Divides out z^k.
    pub fn shift_down(&self, k: u32) -> Self {
        Self::new(&self.field, self.coeffs[k as usize..].to_vec())
    }

    /// Yun's algorithm: pairs (a_i, i) with self = c · Π a_i^i, each a_i
    /// monic, squarefree, pairwise coprime and non-constant.
    pub fn squarefree_decomposition(&self) -> Vec<(UniPoly, u32)> {
        let mut out = Vec::new();
        if self.deg() == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.exact_quotient(&a0);
        let c = df.exact_quotient(&a0);
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while b.deg() > 0 {
            let a = b.gcd(&d);
            let b_next = b.exact_quotient(&a);
            let c = d.exact_quotient(&a);
            d = c.sub(&b_next.derivative());
            if a.deg() > 0 {
                out.push((a, i));
            }
            b = b_next;
            i += 1;
        }
        out
    }

    pub fn to_complex_coeffs(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(CycloNumber::to_complex).collect()
    }

    /// All roots with multiplicities. The root 0 is detected exactly and
    /// reported at the origin with radius 0.
    pub fn roots(&self) -> Result<Vec<Root>> {
        if self.is_zero() {
            return Err(Error::Inconsistency("roots of the zero polynomial".into()));
        }
        let mut out = Vec::new();
        let z0 = self.trailing_zeros();
        if z0 > 0 {
            out.push(Root {
                location: Complex64::new(0.0, 0.0),
                multiplicity: z0,
                radius: 0.0,
            });
        }
        let rest = self.shift_down(z0);
        for (factor, mult) in rest.squarefree_decomposition() {
            let coeffs = factor.to_complex_coeffs();
            let found = roots::isolate_simple_roots(&coeffs)
                .ok_or(Error::RootIsolation { degree: factor.deg() })?;
            out.extend(found.into_iter().map(|(location, radius)| Root {
                location,
                multiplicity: mult,
                radius,
            }));
        }
        Ok(out)
    }
}
