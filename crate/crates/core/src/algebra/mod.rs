//! Exact arithmetic over cyclotomic fields, sparse multivariate polynomials,
//! and polynomial maps into projective space.

mod coeff_parse;
pub mod cyclo;
pub mod diff;
pub mod linalg;
pub mod map;
pub mod poly;
pub mod roots;
pub mod upoly;

pub use coeff_parse::zeta_in_field;
pub use cyclo::{cyclotomic_polynomial, rational_nth_root, CycloField, CycloNumber, Rational};
pub use diff::{poly_diff, DiffWord};
pub use map::{generic_rank, ProjectiveMap, RankMethod, RankResult};
pub use poly::{ComplexPoint, Degree, Exponents, MultiPoly, NumericPoly};
pub use upoly::{Root, UniPoly};
