//! Degeneracy of maps into, or omitting, the Fermat hypersurface
//! Σ ω_i^d = 0: power maps, power relations, ratio partitions, the cut-out
//! linear subspace, and the arithmetic of the nonexistence corollaries.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::One;

use crate::algebra::linalg;
use crate::algebra::map::{RankMethod, RankResult};
use crate::algebra::{rational_nth_root, CycloNumber, MultiPoly, ProjectiveMap, Rational};
use crate::error::{Error, Result};
use crate::wronskian::coefficient_matrix;

/// κ(p, n) = max{n + 1 − p, 1}.
pub fn kappa(p: usize, n: usize) -> usize {
    (n + 1).saturating_sub(p).max(1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FermatKind {
    /// f(C^p) ⊂ F
    Compact,
    /// f(C^p) ∩ F = ∅
    Logarithmic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FermatInstance {
    pub p: usize,
    pub n: usize,
    pub d: u32,
    pub kind: FermatKind,
}

impl FermatInstance {
    pub fn new(p: usize, n: usize, d: u32, kind: FermatKind) -> Result<Self> {
        if p < 1 || n < 2 || d < 1 {
            return Err(Error::Dimension("need p ≥ 1, n ≥ 2 and d ≥ 1"));
        }
        Ok(FermatInstance { p, n, d, kind })
    }

    /// κ entering the degree hypothesis: κ(p, n−1) compact, κ(p, n) logarithmic.
    pub fn kappa(&self) -> usize {
        match self.kind {
            FermatKind::Compact => kappa(self.p, self.n - 1),
            FermatKind::Logarithmic => kappa(self.p, self.n),
        }
    }

    /// (n + 1)·κ; the hypothesis is d strictly above it.
    pub fn degree_threshold(&self) -> usize {
        (self.n + 1) * self.kappa()
    }

    pub fn degree_hypothesis(&self) -> bool {
        self.d as usize > self.degree_threshold()
    }

    /// ⌊(n−1)/2⌋ compact, ⌊n/2⌋ logarithmic.
    pub fn dimension_bound(&self) -> usize {
        match self.kind {
            FermatKind::Compact => (self.n - 1) / 2,
            FermatKind::Logarithmic => self.n / 2,
        }
    }
}

/// Σ f_i^d.
pub fn power_sum(f: &ProjectiveMap, d: u32) -> MultiPoly {
    f.components()
        .iter()
        .fold(MultiPoly::zero(f.field(), f.p()), |acc, c| &acc + &c.pow(d))
}

pub fn fermat_membership(f: &ProjectiveMap, d: u32) -> bool {
    power_sum(f, d).is_zero()
}

#[derive(Clone, Debug, PartialEq)]
pub struct PowerMap {
    pub map: ProjectiveMap,
    /// p = 1 only: every zero of every g_i has multiplicity divisible by d.
    pub multiples_of_d: Option<bool>,
}

/// g = [f_0^d : … : f_n^d].
pub fn power_map(f: &ProjectiveMap, d: u32) -> Result<PowerMap> {
    if d == 0 {
        return Err(Error::Dimension("power map needs d ≥ 1"));
    }
    let components: Vec<MultiPoly> = f.components().iter().map(|c| c.pow(d)).collect();
    let multiples_of_d = (f.p() == 1).then(|| {
        components.iter().filter(|g| !g.is_zero()).all(|g| {
            let u = g.to_univariate().expect("one variable");
            let origin = u.trailing_zeros();
            origin % d == 0
                && u.shift_down(origin)
                    .squarefree_decomposition()
                    .iter()
                    .all(|(_, m)| m % d == 0)
        })
    });
    // π is a finite branched cover, so rank and coprimality carry over
    let rank = RankResult {
        method: RankMethod::Inherited,
        ..*f.rank_info()
    };
    Ok(PowerMap {
        map: ProjectiveMap::from_parts_unchecked(components, rank),
        multiples_of_d,
    })
}

/// Basis of {a : Σ a_i f_i^d = 0}, each vector with one free coordinate 1.
pub fn find_power_relations(f: &ProjectiveMap, d: u32) -> Vec<Vec<CycloNumber>> {
    let powers: Vec<MultiPoly> = f.components().iter().map(|c| c.pow(d)).collect();
    let m = coefficient_matrix(&powers);
    linalg::kernel_basis(&m, powers.len(), &CycloNumber::zero(f.field()))
}

/// c with g = c·f, when one exists.
fn proportionality(f: &MultiPoly, g: &MultiPoly) -> Option<CycloNumber> {
    let (ef, cf) = f.leading_term()?;
    let (eg, cg) = g.leading_term()?;
    if ef != eg || f.num_terms() != g.num_terms() {
        return None;
    }
    let c = cg.try_div(cf).ok()?;
    (f.scale(&c) == *g).then_some(c)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatioClass {
    /// Least index of the class.
    pub representative: usize,
    pub members: Vec<usize>,
    /// ℓ_j with f_j = ℓ_j·f_representative, parallel to `members`.
    pub ratios: Vec<CycloNumber>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatioPartition {
    pub classes: Vec<RatioClass>,
}

impl RatioPartition {
    pub fn ratio(&self, index: usize) -> Option<&CycloNumber> {
        self.classes.iter().find_map(|c| {
            c.members
                .iter()
                .position(|&j| j == index)
                .map(|k| &c.ratios[k])
        })
    }
}

/// Classes of i ~ j ⇔ f_i/f_j constant, over the given (nonzero) indices.
pub fn ratio_partition_of(components: &[MultiPoly], indices: &[usize]) -> Result<RatioPartition> {
    let mut classes: Vec<RatioClass> = Vec::new();
    for &j in indices {
        let fj = &components[j];
        if fj.is_zero() {
            return Err(Error::Dimension("ratio partition of a zero component"));
        }
        let found = classes
            .iter_mut()
            .find_map(|c| proportionality(&components[c.representative], fj).map(|l| (c, l)));
        match found {
            Some((class, l)) => {
                class.members.push(j);
                class.ratios.push(l);
            }
            None => classes.push(RatioClass {
                representative: j,
                members: alloc::vec![j],
                ratios: alloc::vec![CycloNumber::one(fj.field())],
            }),
        }
    }
    Ok(RatioPartition { classes })
}

/// Ratio partition of all components; zero components are an error here.
pub fn ratio_partition(f: &ProjectiveMap) -> Result<RatioPartition> {
    let indices: Vec<usize> = (0..f.components().len()).collect();
    ratio_partition_of(f.components(), &indices)
}

#[derive(Clone, Debug, PartialEq)]
pub enum SubspaceEquation {
    /// ω_index = ratio · ω_representative
    Proportional {
        index: usize,
        ratio: CycloNumber,
        representative: usize,
    },
    /// ω_index = 0
    Vanishing { index: usize },
}

impl SubspaceEquation {
    pub fn involves(&self, i: usize) -> bool {
        match self {
            SubspaceEquation::Proportional {
                index, representative, ..
            } => *index == i || *representative == i,
            SubspaceEquation::Vanishing { index } => *index == i,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceReport {
    pub instance: FermatInstance,
    pub partition: RatioPartition,
    pub zero_components: Vec<usize>,
    pub equations: Vec<SubspaceEquation>,
    /// Projective dimension of the subspace of CP^n cut out by `equations`.
    pub dimension: usize,
    pub bound: usize,
    /// Σ_{j∈I_r} ℓ_j^d per class.
    pub b_sums: Vec<CycloNumber>,
    pub b_sums_vanish: bool,
    pub classes_at_least_two: bool,
    /// Logarithmic kind: the appended constant μ with μ^d = −c.
    pub extension: Option<CycloNumber>,
    /// Logarithmic kind: the dropped equation involving ω_{n+1}.
    pub removed_equation: Option<SubspaceEquation>,
    pub verdict: Verdict,
}

/// Partition, zero components, equations and per-class b sums.
type Cut = (RatioPartition, Vec<usize>, Vec<SubspaceEquation>, Vec<CycloNumber>);

fn cut_subspace(components: &[MultiPoly], d: u32) -> Result<Cut> {
    let zero_components: Vec<usize> = (0..components.len()).filter(|&i| components[i].is_zero()).collect();
    let nonzero: Vec<usize> = (0..components.len()).filter(|&i| !components[i].is_zero()).collect();
    let partition = ratio_partition_of(components, &nonzero)?;
    let mut equations: Vec<SubspaceEquation> = zero_components
        .iter()
        .map(|&index| SubspaceEquation::Vanishing { index })
        .collect();
    let mut b_sums = Vec::with_capacity(partition.classes.len());
    for class in &partition.classes {
        let field = components[class.representative].field();
        let mut b = CycloNumber::zero(field);
        for (&j, l) in class.members.iter().zip(&class.ratios) {
            b = &b + &l.pow(u64::from(d));
            if j != class.representative {
                equations.push(SubspaceEquation::Proportional {
                    index: j,
                    ratio: l.clone(),
                    representative: class.representative,
                });
            }
        }
        b_sums.push(b);
    }
    equations.sort_by_key(|e| match e {
        SubspaceEquation::Proportional { index, .. } | SubspaceEquation::Vanishing { index } => *index,
    });
    Ok((partition, zero_components, equations, b_sums))
}

fn check_instance(f: &ProjectiveMap, instance: &FermatInstance) -> Result<()> {
    if f.p() != instance.p || f.n() != instance.n {
        return Err(Error::Dimension("instance p, n differ from the map"));
    }
    Ok(())
}

fn precondition_failure(f: &ProjectiveMap, instance: &FermatInstance) -> Option<String> {
    if !instance.degree_hypothesis() {
        return Some(format!(
            "degree hypothesis fails: d = {} ≤ (n+1)κ = {}",
            instance.d,
            instance.degree_threshold()
        ));
    }
    if !f.is_maximal_rank() {
        return Some(format!(
            "map has rank {} below min(p, n) = {}",
            f.generic_rank(),
            f.p().min(f.n())
        ));
    }
    None
}

/// Partition, equations ω_j = ℓ_j ω_{i_r} (plus ω_i = 0 for vanishing
/// components), subspace dimension and the verdict against the bound.
pub fn degeneracy_subspace(f: &ProjectiveMap, instance: &FermatInstance) -> Result<SubspaceReport> {
    check_instance(f, instance)?;
    match instance.kind {
        FermatKind::Compact => compact_subspace(f, instance),
        FermatKind::Logarithmic => logarithmic_subspace(f, instance),
    }
}

fn compact_subspace(f: &ProjectiveMap, instance: &FermatInstance) -> Result<SubspaceReport> {
    let (partition, zero_components, equations, b_sums) = cut_subspace(f.components(), instance.d)?;
    let dimension = instance.n - equations.len();
    let bound = instance.dimension_bound();
    let verdict = if !fermat_membership(f, instance.d) {
        Verdict::NotApplicable("map does not lie in the Fermat hypersurface".into())
    } else if let Some(reason) = precondition_failure(f, instance) {
        Verdict::NotApplicable(reason)
    } else if dimension <= bound {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(SubspaceReport {
        instance: *instance,
        b_sums_vanish: b_sums.iter().all(CycloNumber::is_zero),
        classes_at_least_two: partition.classes.iter().all(|c| c.members.len() >= 2),
        partition,
        zero_components,
        equations,
        dimension,
        bound,
        b_sums,
        extension: None,
        removed_equation: None,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct LogarithmicExtension {
    /// [f_0 : … : f_n : μ]
    pub map: ProjectiveMap,
    /// The constant value c of Σ f_i^d.
    pub power_sum: CycloNumber,
    pub mu: CycloNumber,
}

/// Some μ with μ^d = −c of the form ρ·ζ_N^k, ρ rational.
pub fn dth_root_of_negative(c: &CycloNumber, d: u32) -> Result<CycloNumber> {
    let field = c.field();
    let target = -c;
    let order = i64::from(field.order());
    for k in 0..order {
        // ρ^d = −c·ζ^{−dk}
        let shifted = &target * &CycloNumber::zeta_power(field, -(k * i64::from(d)));
        let Some(q) = shifted.as_rational() else {
            continue;
        };
        if let Some(rho) = rational_nth_root(q, d) {
            return Ok(&CycloNumber::from_rational(field, rho) * &CycloNumber::zeta_power(field, k));
        }
    }
    Err(Error::NoRoot { degree: d })
}

/// Appends the constant μ, μ^d = −c, when Σ f_i^d is a nonzero constant c.
pub fn logarithmic_extend(f: &ProjectiveMap, d: u32) -> Result<LogarithmicExtension> {
    let sum = power_sum(f, d);
    let c = match sum.as_constant() {
        Some(c) if !c.is_zero() => c,
        _ => return Err(Error::NonConstantPowerSum),
    };
    let mu = dth_root_of_negative(&c, d)?;
    let mut components = f.components().to_vec();
    components.push(MultiPoly::constant(f.field(), f.p(), mu.clone()));
    let map = ProjectiveMap::new(components)?;
    debug_assert!(fermat_membership(&map, d));
    Ok(LogarithmicExtension {
        map,
        power_sum: c,
        mu,
    })
}

fn logarithmic_subspace(f: &ProjectiveMap, instance: &FermatInstance) -> Result<SubspaceReport> {
    let ext = logarithmic_extend(f, instance.d)?;
    let (partition, zero_components, mut equations, b_sums) = cut_subspace(ext.map.components(), instance.d)?;
    let last = instance.n + 1;
    let removed_equation = equations
        .iter()
        .position(|e| e.involves(last))
        .map(|i| equations.remove(i));
    let dimension = instance.n - equations.len();
    let bound = instance.dimension_bound();
    let verdict = if let Some(reason) = precondition_failure(f, instance) {
        Verdict::NotApplicable(reason)
    } else if dimension <= bound {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(SubspaceReport {
        instance: *instance,
        b_sums_vanish: b_sums.iter().all(CycloNumber::is_zero),
        classes_at_least_two: partition.classes.iter().all(|c| c.members.len() >= 2),
        partition,
        zero_components,
        equations,
        dimension,
        bound,
        b_sums,
        extension: Some(ext.mu),
        removed_equation,
        verdict,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankCheck {
    pub rank: usize,
    pub dimension: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorollaryReport {
    pub instance: FermatInstance,
    pub kappa: usize,
    pub degree_threshold: usize,
    pub degree_hypothesis: bool,
    /// ⌊(n−1)/2⌋ compact, ⌊n/2⌋ logarithmic
    pub dimension_threshold: usize,
    /// No maximal-rank map exists: hypothesis holds and p exceeds the threshold.
    pub excluded: bool,
    pub rank_check: Option<RankCheck>,
}

pub fn corollary_verdict(instance: &FermatInstance) -> CorollaryReport {
    let degree_hypothesis = instance.degree_hypothesis();
    let dimension_threshold = instance.dimension_bound();
    CorollaryReport {
        instance: *instance,
        kappa: instance.kappa(),
        degree_threshold: instance.degree_threshold(),
        degree_hypothesis,
        dimension_threshold,
        excluded: degree_hypothesis && instance.p > dimension_threshold,
        rank_check: None,
    }
}

/// Corollary verdict plus rank(f) ≤ dim for a map passing the subspace check.
pub fn corollary_with_map(f: &ProjectiveMap, instance: &FermatInstance) -> Result<CorollaryReport> {
    let mut report = corollary_verdict(instance);
    let subspace = degeneracy_subspace(f, instance)?;
    if subspace.verdict == Verdict::Pass {
        let rank = f.generic_rank();
        report.rank_check = Some(RankCheck {
            rank,
            dimension: subspace.dimension,
            holds: rank <= subspace.dimension,
        });
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProofTrace {
    pub gamma: usize,
    pub s: usize,
    pub d: u32,
    /// max{γ − s − 1, 1}
    pub d_i: usize,
    /// Σ_{i∈I} (1 − d_I/d) = γ(1 − d_I/d)
    pub lhs: Rational,
    /// γ − 1
    pub threshold: usize,
    /// lhs exceeds the threshold, so the ramification inequality fails.
    pub contradiction: bool,
    /// |I| = 2 ends the claim at once.
    pub claim_terminates: bool,
    /// γ·d_I
    pub gamma_d_i: usize,
    /// (n + 1)(n − p), negative when p > n
    pub chain_bound: i64,
    /// γ·d_I < (n + 1)(n − p)
    pub chain_strict: bool,
}

pub fn proof_trace(gamma: usize, s: usize, d: u32, n: usize, p: usize) -> Result<ProofTrace> {
    if gamma < 2 || gamma > n + 1 || s < 1 || d < 1 {
        return Err(Error::Dimension("need 2 ≤ γ ≤ n+1, s ≥ 1 and d ≥ 1"));
    }
    let d_i = (gamma as i64 - s as i64 - 1).max(1) as usize;
    let d_big = Rational::from_integer(d.into());
    let lhs = Rational::from_integer(gamma.into()) * (Rational::one() - Rational::from_integer(d_i.into()) / d_big);
    let threshold = gamma - 1;
    let gamma_d_i = gamma * d_i;
    let chain_bound = (n as i64 + 1) * (n as i64 - p as i64);
    Ok(ProofTrace {
        gamma,
        s,
        d,
        d_i,
        contradiction: lhs > Rational::from_integer(threshold.into()),
        lhs,
        threshold,
        claim_terminates: gamma == 2,
        gamma_d_i,
        chain_bound,
        chain_strict: (gamma_d_i as i64) < chain_bound,
    })
}
