#![allow(dead_code)]

use std::sync::Arc;

use nevlab_core::{CycloField, CycloNumber, MultiPoly, ProjectiveMap};
use proptest::prelude::*;

pub fn field(order: u32) -> Arc<CycloField> {
    CycloField::new(order).unwrap()
}

/// Σ (a_k / b_k)·ζ^k over the basis powers of the field.
pub fn element(k: &Arc<CycloField>, raw: &[(i64, i64)]) -> CycloNumber {
    raw.iter()
        .take(k.degree())
        .enumerate()
        .fold(CycloNumber::zero(k), |acc, (i, &(a, b))| {
            &acc + &(&CycloNumber::from_ratio(k, a, b) * &CycloNumber::zeta_power(k, i as i64))
        })
}

pub fn cyclo(k: Arc<CycloField>) -> impl Strategy<Value = CycloNumber> {
    let deg = k.degree();
    prop::collection::vec((-20i64..=20, 1i64..=9), deg).prop_map(move |raw| element(&k, &raw))
}

pub fn nonzero_cyclo(k: Arc<CycloField>) -> impl Strategy<Value = CycloNumber> {
    cyclo(k).prop_filter("nonzero", |c| !c.is_zero())
}

fn exponent(nvars: usize, max_deg: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..=max_deg, nvars).prop_filter("total degree", move |e| e.iter().sum::<u32>() <= max_deg)
}

/// Polynomials with up to `max_terms` terms of total degree ≤ `max_deg`.
pub fn poly(k: Arc<CycloField>, nvars: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((exponent(nvars, max_deg), cyclo(k.clone())), 1..=max_terms)
        .prop_map(move |terms| MultiPoly::from_terms(&k, nvars, terms).unwrap())
}

pub fn nonzero_poly(k: Arc<CycloField>, nvars: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    poly(k, nvars, max_deg, max_terms).prop_filter("nonzero", |p| !p.is_zero())
}

pub fn int(k: &Arc<CycloField>, n: i64) -> CycloNumber {
    CycloNumber::from_integer(k, n)
}

pub fn var(k: &Arc<CycloField>, nvars: usize, i: usize) -> MultiPoly {
    MultiPoly::variable(k, nvars, i)
}

pub fn constant(k: &Arc<CycloField>, nvars: usize, n: i64) -> MultiPoly {
    MultiPoly::constant(k, nvars, int(k, n))
}

/// A reduced map: the constant 1 first, then the given components.
pub fn map_with_one(k: &Arc<CycloField>, nvars: usize, rest: Vec<MultiPoly>) -> ProjectiveMap {
    let mut components = vec![MultiPoly::one(k, nvars)];
    components.extend(rest);
    ProjectiveMap::new(components).unwrap()
}
