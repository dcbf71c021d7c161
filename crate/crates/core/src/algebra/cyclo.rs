//! Exact arithmetic in cyclotomic fields Q(ζ_N).
//!
//! Elements are stored in the power basis `1, ζ, …, ζ^{φ(N)-1}` as residues
//! modulo the N-th cyclotomic polynomial Φ_N. Every constructor and operation
//! returns the canonical reduced residue, so structural equality is field
//! equality.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational numbers.
pub type Rational = BigRational;

/// Integer coefficients of Φ_N, lowest degree first.
pub fn cyclotomic_polynomial(order: u32) -> Vec<BigInt> {
    assert!(order >= 1, "cyclotomic polynomial of order 0");
    // x^N - 1 divided by Φ_d for every proper divisor d of N
    let mut poly = vec![BigInt::zero(); order as usize + 1];
    poly[0] = -BigInt::one();
    poly[order as usize] = BigInt::one();
    for d in 1..order {
        if order.is_multiple_of(d) {
            let phi_d = cyclotomic_polynomial(d);
            poly = exact_monic_div(&poly, &phi_d);
        }
    }
    poly
}

fn exact_monic_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - dn];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (i, di) in den.iter().enumerate() {
            rem[k + i] -= &c * di;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// The field Q(ζ_N) for a fixed conductor N.
#[derive(Debug, PartialEq, Eq)]
pub struct CycloField {
    order: u32,
    modulus: Vec<Rational>,
}

impl CycloField {
    pub fn new(order: u32) -> Result<Arc<Self>> {
        if order == 0 {
            return Err(Error::InvalidConductor);
        }
        let modulus = cyclotomic_polynomial(order)
            .into_iter()
            .map(Rational::from_integer)
            .collect();
        Ok(Arc::new(CycloField { order, modulus }))
    }

    /// Conductor N.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Degree φ(N) of the extension over Q.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[Rational] {
        &self.modulus
    }

    /// Complex embedding of ζ_N^k sending ζ_N to e^{2πi/N}.
    pub fn zeta_embedding(&self, k: u64) -> Complex64 {
        let n = self.order as u64;
        let theta = 2.0 * core::f64::consts::PI * ((k % n) as f64) / (n as f64);
        Complex64::new(libm::cos(theta), libm::sin(theta))
    }

    fn reduce(&self, mut coeffs: Vec<Rational>) -> Vec<Rational> {
        let deg = self.degree();
        while coeffs.len() > deg {
            let top = coeffs.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let shift = coeffs.len() - deg;
            for (i, m) in self.modulus[..deg].iter().enumerate() {
                coeffs[shift + i] -= &top * m;
            }
        }
        coeffs.resize(deg, Rational::zero());
        coeffs
    }
}

/// An element of Q(ζ_N).
#[derive(Clone)]
pub struct CycloNumber {
    field: Arc<CycloField>,
    coeffs: Vec<Rational>,
}

impl PartialEq for CycloNumber {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.coeffs == other.coeffs
    }
}

impl Eq for CycloNumber {}

impl fmt::Debug for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloNumber[N={}]({})", self.field.order, self)
    }
}

impl CycloNumber {
    pub fn zero(field: &Arc<CycloField>) -> Self {
        CycloNumber {
            field: Arc::clone(field),
            coeffs: vec![Rational::zero(); field.degree()],
        }
    }

    pub fn one(field: &Arc<CycloField>) -> Self {
        Self::from_rational(field, Rational::one())
    }

    pub fn from_rational(field: &Arc<CycloField>, q: Rational) -> Self {
        let mut z = Self::zero(field);
        z.coeffs[0] = q;
        z
    }

    pub fn from_integer(field: &Arc<CycloField>, n: i64) -> Self {
        Self::from_rational(field, Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(field: &Arc<CycloField>, num: i64, den: i64) -> Self {
        Self::from_rational(
            field,
            Rational::new(BigInt::from(num), BigInt::from(den)),
        )
    }

    /// Reduces an arbitrary power-basis vector modulo Φ_N.
    pub fn from_coeffs(field: &Arc<CycloField>, coeffs: Vec<Rational>) -> Self {
        CycloNumber {
            field: Arc::clone(field),
            coeffs: field.reduce(coeffs),
        }
    }

    /// ζ_N^k for any integer k.
    pub fn zeta_power(field: &Arc<CycloField>, k: i64) -> Self {
        let n = field.order as i64;
        let k = k.rem_euclid(n) as usize;
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = Rational::one();
        Self::from_coeffs(field, coeffs)
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in Q.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn check_field(&self, other: &Self) {
        assert!(
            self.field.order == other.field.order,
            "mixing Q(zeta_{}) and Q(zeta_{})",
            self.field.order,
            other.field.order
        );
    }

    pub fn try_same_field(&self, other: &Self) -> Result<()> {
        if self.field.order == other.field.order {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.field.order,
                right: other.field.order,
            })
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        CycloNumber {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against Φ_N.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(&self.field, q.recip()));
        }
        let a = trim(self.coeffs.clone());
        let m = self.field.modulus.clone();
        // s*a + t*m = g with g a nonzero constant since Φ_N is irreducible
        let (g, s) = half_xgcd(m, a);
        debug_assert_eq!(g.len(), 1);
        let g0 = g[0].recip();
        let s: Vec<Rational> = s.into_iter().map(|c| c * &g0).collect();
        Ok(Self::from_coeffs(&self.field, s))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_same_field(other)?;
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Image under the embedding ζ_N ↦ e^{2πi/N}.
    pub fn to_complex(&self) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| self.field.zeta_embedding(k as u64) * rational_to_f64(c))
            .sum()
    }

    /// Same as [`to_complex`](Self::to_complex) but with a caller-supplied
    /// approximation of ζ_N.
    pub fn to_complex_with_root(&self, root: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut pw = Complex64::new(1.0, 0.0);
        for c in &self.coeffs {
            if !c.is_zero() {
                acc += pw * rational_to_f64(c);
            }
            pw *= root;
        }
        acc
    }

    /// Sum of absolute values of the power-basis coordinates.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| rational_to_f64(c).abs()).sum()
    }

    /// Parses the exact coefficient syntax, e.g. `3/7`, `-z14^3`,
    /// `1/2 + 3*z4`. Floating literals are rejected.
    pub fn parse(field: &Arc<CycloField>, text: &str) -> Result<Self> {
        super::coeff_parse::parse(field, text)
    }
}

pub(crate) fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // only reached for magnitudes outside the f64 range
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.len() > 1 && v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn qpoly_divrem(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let dn = den.len() - 1;
    if num.len() <= dn {
        return (vec![Rational::zero()], trim(num.to_vec()));
    }
    let lead_inv = den[dn].recip();
    let mut rem = num.to_vec();
    let mut quot = vec![Rational::zero(); num.len() - dn];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + dn] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for (i, di) in den.iter().enumerate() {
            rem[k + i] -= &c * di;
        }
        quot[k] = c;
    }
    rem.truncate(dn.max(1));
    (trim(quot), trim(rem))
}

fn qpoly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn qpoly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

fn is_zero_poly(p: &[Rational]) -> bool {
    p.iter().all(Zero::is_zero)
}

/// Returns (g, s) with s·b ≡ g (mod a).
fn half_xgcd(a: Vec<Rational>, b: Vec<Rational>) -> (Vec<Rational>, Vec<Rational>) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (vec![Rational::zero()], vec![Rational::one()]);
    while !is_zero_poly(&r1) {
        let (q, r) = qpoly_divrem(&r0, &r1);
        let s2 = qpoly_sub(&s0, &qpoly_mul(&q, &s1));
        r0 = core::mem::replace(&mut r1, r);
        s0 = core::mem::replace(&mut s1, s2);
    }
    (r0, s0)
}

impl Add for &CycloNumber {
    type Output = CycloNumber;
    fn add(self, rhs: &CycloNumber) -> CycloNumber {
        self.check_field(rhs);
        CycloNumber {
            field: Arc::clone(&self.field),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CycloNumber {
    type Output = CycloNumber;
    fn sub(self, rhs: &CycloNumber) -> CycloNumber {
        self.check_field(rhs);
        CycloNumber {
            field: Arc::clone(&self.field),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &CycloNumber {
    type Output = CycloNumber;
    fn mul(self, rhs: &CycloNumber) -> CycloNumber {
        self.check_field(rhs);
        if let Some(q) = rhs.as_rational() {
            return self.scale(q);
        }
        if let Some(q) = self.as_rational() {
            return rhs.scale(q);
        }
        let deg = self.field.degree();
        let mut prod = vec![Rational::zero(); 2 * deg - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        CycloNumber::from_coeffs(&self.field, prod)
    }
}

impl Neg for &CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CycloNumber {
            type Output = CycloNumber;
            fn $m(self, rhs: CycloNumber) -> CycloNumber {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        -&self
    }
}

pub(crate) fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        alloc::format!("{}", q.numer())
    } else {
        alloc::format!("{}/{}", q.numer(), q.denom())
    }
}

/// Canonical text form, accepted back by [`CycloNumber::parse`].
impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.field.order;
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            if first {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            first = false;
            if k == 0 {
                f.write_str(&fmt_rational(&mag))?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{}*", fmt_rational(&mag))?;
            }
            if k == 1 {
                write!(f, "z{n}")?;
            } else {
                write!(f, "z{n}^{k}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Integer d-th root of a rational, when it exists exactly.
pub fn rational_nth_root(q: &Rational, d: u32) -> Option<Rational> {
    if d == 0 {
        return None;
    }
    if q.is_negative() && d.is_even() {
        return None;
    }
    let root_of = |x: &BigInt| -> Option<BigInt> {
        let r = x.nth_root(d);
        if num_traits::pow(r.clone(), d as usize) == *x {
            Some(r)
        } else {
            None
        }
    };
    let num = root_of(q.numer())?;
    let den = root_of(q.denom())?;
    Some(Rational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(n: u32) -> Arc<CycloField> {
        CycloField::new(n).unwrap()
    }

    #[test]
    fn cyclotomic_polynomials_small() {
        let as_i64 = |n| -> Vec<i64> {
            cyclotomic_polynomial(n)
                .iter()
                .map(|c| c.to_i64().unwrap())
                .collect()
        };
        assert_eq!(as_i64(1), vec![-1, 1]);
        assert_eq!(as_i64(2), vec![1, 1]);
        assert_eq!(as_i64(4), vec![1, 0, 1]);
        assert_eq!(as_i64(6), vec![1, -1, 1]);
        assert_eq!(as_i64(14), vec![1, -1, 1, -1, 1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(18).len(), 7);
    }

    #[test]
    fn gaussian_product() {
        let k = field(4);
        let z = CycloNumber::zeta_power(&k, 1);
        let one = CycloNumber::one(&k);
        let p = &(&one + &z) * &(&one - &z);
        assert_eq!(p, CycloNumber::from_integer(&k, 2));
    }

    #[test]
    fn zeta14_to_the_seventh_is_minus_one() {
        let k = field(14);
        let z = CycloNumber::zeta_power(&k, 1);
        assert_eq!(z.pow(7), CycloNumber::from_integer(&k, -1));
        assert_eq!(z.pow(14), CycloNumber::one(&k));
    }

    #[test]
    fn rational_field_sum() {
        let k = field(1);
        let a = CycloNumber::from_ratio(&k, 3, 7);
        let b = CycloNumber::from_ratio(&k, 4, 7);
        assert!((&a + &b).is_one());
    }

    #[test]
    fn inverse_and_division() {
        let k = field(8);
        let z = CycloNumber::zeta_power(&k, 1);
        let a = &CycloNumber::from_integer(&k, 3) + &z.pow(3);
        let inv = a.inv().unwrap();
        assert!((&a * &inv).is_one());
        assert_eq!(
            CycloNumber::one(&k).try_div(&CycloNumber::zero(&k)),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn embedding_matches_unit_circle() {
        let k = field(4);
        let z = CycloNumber::zeta_power(&k, 1).to_complex();
        assert!((z - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn display_is_canonical() {
        let k = field(14);
        let z = CycloNumber::zeta_power(&k, 3);
        assert_eq!(alloc::format!("{}", z), "z14^3");
        let w = &CycloNumber::from_ratio(&k, -3, 7) - &z.scale(&Rational::from_integer(2.into()));
        assert_eq!(alloc::format!("{}", w), "-3/7 - 2*z14^3");
        assert_eq!(alloc::format!("{}", CycloNumber::zero(&k)), "0");
    }

    #[test]
    fn nth_roots() {
        let q = Rational::from_integer(BigInt::from(-512));
        assert_eq!(rational_nth_root(&q, 9), Some(Rational::from_integer(BigInt::from(-2))));
        assert_eq!(rational_nth_root(&q, 2), None);
        let q = Rational::new(BigInt::from(8), BigInt::from(27));
        assert_eq!(rational_nth_root(&q, 3), Some(Rational::new(2.into(), 3.into())));
        assert_eq!(rational_nth_root(&Rational::from_integer(5.into()), 3), None);
    }
}
