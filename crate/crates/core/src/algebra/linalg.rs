//! Exact linear algebra: determinants over integral domains and
//! row reduction over the coefficient field.

use alloc::vec::Vec;

use super::cyclo::CycloNumber;

/// Minimal exact-ring interface shared by field elements and polynomials.
pub trait ExactRing: Clone + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// Quotient when `other` divides `self` exactly.
    fn div_exact(&self, other: &Self) -> Option<Self>;
}

impl ExactRing for CycloNumber {
    fn zero_like(&self) -> Self {
        CycloNumber::zero(self.field())
    }
    fn one_like(&self) -> Self {
        CycloNumber::one(self.field())
    }
    fn is_zero(&self) -> bool {
        CycloNumber::is_zero(self)
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
        self.try_div(other).ok()
    }
}

fn check_square<T>(m: &[Vec<T>]) {
    assert!(m.iter().all(|row| row.len() == m.len()), "matrix is not square");
}

/// Fraction-free (Bareiss) elimination with row pivoting.
///
/// Every intermediate division is exact in an integral domain.
pub fn det_bareiss<T: ExactRing>(mut m: Vec<Vec<T>>) -> T {
    check_square(&m);
    let n = m.len();
    assert!(n > 0, "determinant of an empty matrix");
    let mut negate = false;
    let mut prev = m[0][0].one_like();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return m[0][0].zero_like(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul_ref(&m[i][j]).sub_ref(&m[i][k].mul_ref(&m[k][j]));
                m[i][j] = num
                    .div_exact(&prev)
                    .expect("Bareiss quotient must be exact");
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        det.neg_ref()
    } else {
        det
    }
}

/// Laplace expansion along the sparsest row, recursively.
pub fn det_cofactor<T: ExactRing>(m: &[Vec<T>]) -> T {
    check_square(m);
    let n = m.len();
    assert!(n > 0, "determinant of an empty matrix");
    if n == 1 {
        return m[0][0].clone();
    }
    let row = (0..n)
        .max_by_key(|&i| (m[i].iter().filter(|x| x.is_zero()).count(), usize::MAX - i))
        .unwrap();
    let mut acc = m[0][0].zero_like();
    for col in 0..n {
        let entry = &m[row][col];
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<T>> = (0..n)
            .filter(|&i| i != row)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != col)
                    .map(|j| m[i][j].clone())
                    .collect()
            })
            .collect();
        let term = entry.mul_ref(&det_cofactor(&minor));
        acc = if (row + col) % 2 == 0 {
            acc.add_ref(&term)
        } else {
            acc.sub_ref(&term)
        };
    }
    acc
}

/// Determinant; cofactor expansion when at least half the entries vanish,
/// Bareiss elimination otherwise.
pub fn determinant<T: ExactRing>(m: Vec<Vec<T>>) -> T {
    let n = m.len();
    let zeros = m.iter().flatten().filter(|x| x.is_zero()).count();
    if n <= 2 || 2 * zeros >= n * n {
        det_cofactor(&m)
    } else {
        det_bareiss(m)
    }
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut [Vec<CycloNumber>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x = &*x - &(&factor * p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<CycloNumber>]) -> usize {
    let mut work = m.to_vec();
    rref(&mut work).len()
}

/// Basis of the right kernel {x : M x = 0}; each basis vector has a single
/// free coordinate equal to one.
pub fn kernel_basis(m: &[Vec<CycloNumber>], cols: usize, zero: &CycloNumber) -> Vec<Vec<CycloNumber>> {
    let mut work = m.to_vec();
    let pivots = rref(&mut work);
    let one = zero.one_like();
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = alloc::vec![zero.clone(); cols];
        v[free] = one.clone();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -&work[row][free];
        }
        basis.push(v);
    }
    basis
}
