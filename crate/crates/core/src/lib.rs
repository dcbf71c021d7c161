#![no_std]
// Parameter checks are written `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
//! Exact and numerical machinery for value distribution of polynomial maps
//! C^p → CP^n: cyclotomic polynomial algebra, generalized Wronskians,
//! Nevanlinna functionals with their main-theorem checks, and the Fermat
//! degeneracy pipeline.

extern crate alloc;

pub mod algebra;
pub mod error;
pub mod fermat;
pub mod nevanlinna;
pub mod wronskian;

pub use algebra::{ComplexPoint, CycloField, CycloNumber, DiffWord, MultiPoly, ProjectiveMap, Rational};
pub use error::{Error, Result};
