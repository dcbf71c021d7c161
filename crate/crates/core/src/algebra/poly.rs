//! Sparse multivariate polynomials over Q(ζ_N).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::cyclo::{CycloField, CycloNumber, Rational};
use super::linalg::ExactRing;
use super::upoly::UniPoly;
use crate::error::{Error, Result};

/// Total degree with a distinct value for the zero polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Degree {
    NegInfinity,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::NegInfinity => None,
        }
    }
}

/// Exponent vector (α_1, …, α_p).
pub type Exponents = Vec<u32>;

#[derive(Clone)]
pub struct MultiPoly {
    field: Arc<CycloField>,
    nvars: usize,
    terms: BTreeMap<Exponents, CycloNumber>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars
            && self.field.order() == other.field.order()
            && self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[p={}]({})", self.nvars, self)
    }
}

impl MultiPoly {
    pub fn zero(field: &Arc<CycloField>, nvars: usize) -> Self {
        MultiPoly {
            field: Arc::clone(field),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &Arc<CycloField>, nvars: usize, c: CycloNumber) -> Self {
        debug_assert_eq!(field.order(), c.field().order());
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn one(field: &Arc<CycloField>, nvars: usize) -> Self {
        Self::constant(field, nvars, CycloNumber::one(field))
    }

    /// The coordinate function z_{var+1} (zero-based index).
    pub fn variable(field: &Arc<CycloField>, nvars: usize, var: usize) -> Self {
        assert!(var < nvars, "variable index out of range");
        let mut e = vec![0; nvars];
        e[var] = 1;
        Self::monomial(nvars, e, CycloNumber::one(field))
    }

    pub fn monomial(nvars: usize, exponents: Exponents, c: CycloNumber) -> Self {
        assert_eq!(exponents.len(), nvars, "exponent vector length");
        let mut p = MultiPoly {
            field: Arc::clone(c.field()),
            nvars,
            terms: BTreeMap::new(),
        };
        if !c.is_zero() {
            p.terms.insert(exponents, c);
        }
        p
    }

    /// Builds a polynomial from (exponents, coefficient) pairs, summing repeats.
    pub fn from_terms<I>(field: &Arc<CycloField>, nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponents, CycloNumber)>,
    {
        let mut p = Self::zero(field, nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::VariableMismatch {
                    expected: nvars,
                    found: e.len(),
                });
            }
            c.try_same_field(&CycloNumber::zero(field))?;
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Exponents, c: CycloNumber) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing lexicographic order of exponents.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &CycloNumber)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &[u32]) -> CycloNumber {
        self.terms
            .get(e)
            .cloned()
            .unwrap_or_else(|| CycloNumber::zero(&self.field))
    }

    pub fn total_degree(&self) -> Degree {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .map_or(Degree::NegInfinity, Degree::Finite)
    }

    /// Largest exponent of each variable.
    pub fn partial_degrees(&self) -> Vec<u32> {
        let mut out = vec![0; self.nvars];
        for e in self.terms.keys() {
            for (o, x) in out.iter_mut().zip(e) {
                *o = (*o).max(*x);
            }
        }
        out
    }

    /// Degree of homogeneity, or `None` for the zero or an inhomogeneous polynomial.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// The constant value, if the polynomial has no non-constant terms.
    pub fn as_constant(&self) -> Option<CycloNumber> {
        match self.terms.len() {
            0 => Some(CycloNumber::zero(&self.field)),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Lexicographically largest term.
    pub fn leading_term(&self) -> Option<(&Exponents, &CycloNumber)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &CycloNumber) -> Self {
        if c.is_zero() {
            return Self::zero(&self.field, self.nvars);
        }
        MultiPoly {
            field: Arc::clone(&self.field),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.scale(&CycloNumber::from_rational(&self.field, q.clone()))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field, self.nvars);
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

    /// ∂/∂z_{var+1}.
    pub fn partial(&self, var: usize) -> Self {
        let mut out = Self::zero(&self.field, self.nvars);
        for (e, c) in &self.terms {
            let k = e[var];
            if k == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[var] = k - 1;
            out.add_term(e2, c.scale(&Rational::from_integer(k.into())));
        }
        out
    }

    /// Iterated partial derivative ∂^{|α|} / ∂z^α.
    pub fn derivative(&self, alpha: &[u32]) -> Self {
        assert_eq!(alpha.len(), self.nvars, "multi-index length");
        let mut out = Self::zero(&self.field, self.nvars);
        'terms: for (e, c) in &self.terms {
            let mut factor = Rational::from_integer(1.into());
            let mut e2 = e.clone();
            for (i, &a) in alpha.iter().enumerate() {
                if e[i] < a {
                    continue 'terms;
                }
                for j in 0..a {
                    factor *= Rational::from_integer((e[i] - j).into());
                }
                e2[i] = e[i] - a;
            }
            out.add_term(e2, c.scale(&factor));
        }
        out
    }

    /// Substitutes `subs[i]` for z_{i+1}; result lives in the substitutes' ring.
    pub fn compose(&self, subs: &[MultiPoly]) -> Result<Self> {
        if subs.len() != self.nvars {
            return Err(Error::VariableMismatch {
                expected: self.nvars,
                found: subs.len(),
            });
        }
        let target_vars = match subs.first() {
            Some(s) => s.nvars,
            None => 0,
        };
        if let Some(bad) = subs.iter().find(|s| s.nvars != target_vars) {
            return Err(Error::VariableMismatch {
                expected: target_vars,
                found: bad.nvars,
            });
        }
        let maxdeg = self.partial_degrees();
        let powers: Vec<Vec<MultiPoly>> = subs
            .iter()
            .zip(&maxdeg)
            .map(|(s, &m)| {
                let mut v = Vec::with_capacity(m as usize + 1);
                v.push(Self::one(&self.field, target_vars));
                for k in 1..=m as usize {
                    let next = &v[k - 1] * s;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = Self::zero(&self.field, target_vars);
        for (e, c) in &self.terms {
            let mut t = Self::constant(&self.field, target_vars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = &t * &powers[i][k as usize];
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Exact value at a point of the coefficient field.
    pub fn eval_exact(&self, point: &[CycloNumber]) -> CycloNumber {
        assert_eq!(point.len(), self.nvars, "point dimension");
        let mut acc = CycloNumber::zero(&self.field);
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t = &t * &x.pow(k as u64);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Numerical value at a complex point with an a-priori rounding bound.
    pub fn eval(&self, z: &ComplexPoint) -> (Complex64, f64) {
        self.eval_with_root(z, None)
    }

    /// Like [`eval`](Self::eval), optionally using an approximation of ζ_N
    /// whose error `delta` is folded into the bound.
    pub fn eval_with_root(&self, z: &ComplexPoint, root: Option<(Complex64, f64)>) -> (Complex64, f64) {
        assert_eq!(z.dim(), self.nvars, "point dimension");
        let eps = f64::EPSILON;
        let mut value = Complex64::new(0.0, 0.0);
        let mut bound = 0.0;
        for (e, c) in &self.terms {
            let coef = match root {
                Some((w, _)) => c.to_complex_with_root(w),
                None => c.to_complex(),
            };
            let mut mono = Complex64::new(1.0, 0.0);
            let mut mono_abs = 1.0;
            for (x, &k) in z.coords().iter().zip(e) {
                for _ in 0..k {
                    mono *= x;
                }
                mono_abs *= libm::pow(x.norm(), k as f64);
            }
            value += coef * mono;
            let deg: u32 = e.iter().sum();
            let weight = c.l1_norm() * mono_abs;
            let ops = (deg as usize + self.field.degree() + self.terms.len() + 2) as f64;
            bound += weight * 4.0 * ops * eps;
            if let Some((_, delta)) = root {
                // |w^k - ζ^k| <= k·δ to first order
                let root_err: f64 = c
                    .coeffs()
                    .iter()
                    .enumerate()
                    .map(|(k, q)| super::cyclo::rational_to_f64(q).abs() * k as f64 * delta)
                    .sum();
                bound += root_err * mono_abs;
            }
        }
        (value, bound)
    }

    /// Floating-point copy for fast repeated evaluation.
    pub fn numeric(&self) -> NumericPoly {
        NumericPoly::new(self)
    }

    /// Exact quotient when `divisor` divides `self`; lex-order division.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        let (lead_e, lead_c) = divisor.leading_term()?;
        let lead_inv = lead_c.inv().ok()?;
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.field, self.nvars);
        while let Some((e, c)) = rem.leading_term() {
            if e.iter().zip(lead_e).any(|(a, b)| a < b) {
                return None;
            }
            let qe: Exponents = e.iter().zip(lead_e).map(|(a, b)| a - b).collect();
            let qc = c * &lead_inv;
            let t = Self::monomial(self.nvars, qe, qc);
            rem = &rem - &(&t * divisor);
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// Univariate view of a polynomial in one variable.
    pub fn to_univariate(&self) -> Option<UniPoly> {
        if self.nvars != 1 {
            return None;
        }
        let deg = self.total_degree().finite().unwrap_or(0) as usize;
        let mut coeffs = vec![CycloNumber::zero(&self.field); deg + 1];
        for (e, c) in &self.terms {
            coeffs[e[0] as usize] = c.clone();
        }
        Some(UniPoly::new(&self.field, coeffs))
    }

    /// Restriction to the line t ↦ base + t·dir (one-variable result).
    pub fn restrict_to_line(&self, base: &[CycloNumber], dir: &[CycloNumber]) -> MultiPoly {
        let subs: Vec<MultiPoly> = base
            .iter()
            .zip(dir)
            .map(|(b, d)| {
                let mut p = Self::constant(&self.field, 1, b.clone());
                p.add_term(vec![1], d.clone());
                p
            })
            .collect();
        self.compose(&subs).expect("line has matching dimension")
    }

    /// Max absolute value of the coefficients under the standard embedding.
    pub fn max_coefficient_norm(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.to_complex().norm())
            .fold(0.0, f64::max)
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "adding polynomials in different rings");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "subtracting polynomials in different rings");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "multiplying polynomials in different rings");
        let mut out = MultiPoly::zero(&self.field, self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            field: Arc::clone(&self.field),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl ExactRing for MultiPoly {
    fn zero_like(&self) -> Self {
        MultiPoly::zero(&self.field, self.nvars)
    }
    fn one_like(&self) -> Self {
        MultiPoly::one(&self.field, self.nvars)
    }
    fn is_zero(&self) -> bool {
        MultiPoly::is_zero(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn div_exact(&self, other: &Self) -> Option<Self> {
        MultiPoly::div_exact(self, other)
    }
}

/// Human-readable form with variables `x1, …, xp`, highest terms first.
impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, k) })
                .collect();
            let (negative, body) = match c.as_rational() {
                Some(q) => {
                    let neg = q < &Rational::from_integer(0.into());
                    let mag = if neg { -q.clone() } else { q.clone() };
                    let is_one = mag == Rational::from_integer(1.into());
                    let s = super::cyclo::fmt_rational(&mag);
                    (neg, if mono.is_empty() { s } else if is_one { String::new() } else { format!("{s}*") })
                }
                None => (false, if mono.is_empty() { format!("({c})") } else { format!("({c})*") }),
            };
            match (first, negative) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            write!(f, "{}{}", body, mono.join("*"))?;
        }
        Ok(())
    }
}

/// A point of C^p with finite coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPoint(Vec<Complex64>);

impl ComplexPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
            Ok(ComplexPoint(coords))
        } else {
            Err(Error::NonFinitePoint)
        }
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }
}

/// Floating-point image of a [`MultiPoly`] under the standard embedding.
#[derive(Clone, Debug)]
pub struct NumericPoly {
    nvars: usize,
    dense: Option<Vec<Complex64>>,
    terms: Vec<(Exponents, Complex64)>,
    max_exp: Vec<u32>,
}

impl NumericPoly {
    fn new(p: &MultiPoly) -> Self {
        let terms: Vec<(Exponents, Complex64)> = p
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), c.to_complex()))
            .collect();
        let dense = (p.nvars == 1).then(|| {
            let deg = p.total_degree().finite().unwrap_or(0) as usize;
            let mut v = vec![Complex64::new(0.0, 0.0); deg + 1];
            for (e, c) in &terms {
                v[e[0] as usize] = *c;
            }
            v
        });
        NumericPoly {
            nvars: p.nvars,
            dense,
            terms,
            max_exp: p.partial_degrees(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        debug_assert_eq!(z.len(), self.nvars);
        if let Some(d) = &self.dense {
            return d.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z[0] + c);
        }
        let powers: Vec<Vec<Complex64>> = z
            .iter()
            .zip(&self.max_exp)
            .map(|(x, &m)| {
                let mut v = Vec::with_capacity(m as usize + 1);
                let mut acc = Complex64::new(1.0, 0.0);
                v.push(acc);
                for _ in 0..m {
                    acc *= x;
                    v.push(acc);
                }
                v
            })
            .collect();
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .enumerate()
                    .fold(*c, |acc, (i, &k)| acc * powers[i][k as usize])
            })
            .sum()
    }
}
