//! Spherical harmonics `H_k = Ker_k Δ`, generalized harmonics
//! `H̃_k = Ker_k(Δ R² Δ)`, the socle `H⁰_k = H_k ∩ R² P_{k−2}`, and the
//! Fischer decompositions of `P_k`, including the exceptional
//! superdimensions `M ∈ {0, −2, −4, …}`.
//!
//! Every space here is computed as an exact kernel or image; closed-form
//! dimension counts only appear in tests.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::exactla::{operator_matrix, Ambient, Subspace};
use crate::operators::Operator;
use crate::scalar::Scalar;
use crate::superpoly::{monomial_count, SuperSignature};

/// `M ∈ −2N₀` (zero included).
pub fn is_exceptional(superdimension: i64) -> bool {
    superdimension <= 0 && superdimension % 2 == 0
}

/// `I_M = {k ∈ N₀ : 2 − M/2 ≤ k ≤ 2 − M}` for exceptional `M`, else empty.
pub fn exceptional_indices(superdimension: i64) -> BTreeSet<usize> {
    if !is_exceptional(superdimension) {
        return BTreeSet::new();
    }
    let lo = 2 - superdimension / 2;
    let hi = 2 - superdimension;
    (lo as usize..=hi as usize).collect()
}

/// `N_k = {k, k−2, …}` in descending order.
pub fn parity_chain(k: usize) -> Vec<usize> {
    (0..=k / 2).map(|j| k - 2 * j).collect()
}

pub fn harmonic_space<S: Scalar>(sig: SuperSignature, k: usize) -> Subspace<S> {
    kernel_of(&Operator::Laplacian, sig, k)
}

pub fn generalized_harmonic_space<S: Scalar>(sig: SuperSignature, k: usize) -> Subspace<S> {
    kernel_of(&Operator::delta_r2_delta(), sig, k)
}

pub(crate) fn kernel_of<S: Scalar>(op: &Operator, sig: SuperSignature, k: usize) -> Subspace<S> {
    let a = operator_matrix::<S>(op, sig, k);
    Subspace::kernel(Ambient::homogeneous(sig, k), &a).expect("matrix matches its ambient")
}

/// `R² P_{k−2}` inside `P_k`.
pub fn rsquare_image<S: Scalar>(sig: SuperSignature, k: usize) -> Subspace<S> {
    let amb = Ambient::homogeneous(sig, k);
    if k < 2 {
        return Subspace::zero(amb);
    }
    let a = operator_matrix::<S>(&Operator::RsquareMul, sig, k - 2);
    Subspace::image(amb, &a).expect("matrix matches its ambient")
}

pub fn socle_space<S: Scalar>(sig: SuperSignature, k: usize) -> Subspace<S> {
    harmonic_space::<S>(sig, k)
        .intersect(&rsquare_image(sig, k))
        .expect("same ambient")
}

/// `R^e · U` for even `e`.
pub fn r_power_image<S: Scalar>(u: &Subspace<S>, e: usize) -> Subspace<S> {
    assert!(e.is_multiple_of(2));
    (0..e / 2).fold(u.clone(), |acc, _| {
        acc.map(&Operator::RsquareMul).expect("homogeneous ambient")
    })
}

/// Which decomposition rule governs `P_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FischerRule {
    /// `M ∉ −2N₀`: `P_k = ⊕ R^{2j} H_{k−2j}`.
    Regular,
    /// `m = 0`: the Grassmann algebra under `sp(2n)`.
    Fermionic,
    /// `M ∈ −2N₀`, `m ≥ 1`: generalized harmonics at exceptional starts.
    Exceptional,
}

impl FischerRule {
    pub fn for_signature(sig: SuperSignature) -> Self {
        if sig.m() == 0 {
            FischerRule::Fermionic
        } else if is_exceptional(sig.superdimension()) {
            FischerRule::Exceptional
        } else {
            FischerRule::Regular
        }
    }
}

/// `N_k` split into exceptional starts `J̃_k`, suppressed indices `J⁰_k`
/// and ordinary starts `J_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FischerIndexSets {
    pub k: usize,
    pub chain: Vec<usize>,
    pub tilde: Vec<usize>,
    pub suppressed: Vec<usize>,
    pub ordinary: Vec<usize>,
}

impl FischerIndexSets {
    /// `J̃_k = N_k ∩ I_M`, `J⁰_k = {2 − M − ℓ : ℓ ∈ J̃_k}`,
    /// `J_k = N_k \ (J̃_k ∪ J⁰_k)`. With `I_M = ∅` this is the regular
    /// rule.
    pub fn exceptional_rule(superdimension: i64, k: usize) -> Self {
        let chain = parity_chain(k);
        let im = exceptional_indices(superdimension);
        let tilde: Vec<usize> = chain.iter().copied().filter(|l| im.contains(l)).collect();
        let mirror: BTreeSet<usize> = tilde
            .iter()
            .map(|&l| (2 - superdimension - l as i64) as usize)
            .collect();
        let suppressed = chain
            .iter()
            .copied()
            .filter(|l| mirror.contains(l))
            .collect();
        let ordinary = chain
            .iter()
            .copied()
            .filter(|l| !im.contains(l) && !mirror.contains(l))
            .collect();
        FischerIndexSets {
            k,
            chain,
            tilde,
            suppressed,
            ordinary,
        }
    }

    /// Purely fermionic rule on `Λ(θ_1..θ_2n)`: `R^{k−ℓ} H_ℓ` with
    /// `ℓ ∈ N_k`, `ℓ ≤ 2n − k`; everything else in `N_k` is suppressed.
    pub fn fermionic_rule(n: usize, k: usize) -> Self {
        let chain = parity_chain(k);
        let bound = (2 * n) as i64 - k as i64;
        let (ordinary, suppressed) = chain.iter().copied().partition(|&l| l as i64 <= bound);
        FischerIndexSets {
            k,
            chain,
            tilde: Vec::new(),
            suppressed,
            ordinary,
        }
    }

    pub fn for_signature(sig: SuperSignature, k: usize) -> Self {
        match FischerRule::for_signature(sig) {
            FischerRule::Fermionic => Self::fermionic_rule(sig.n(), k),
            _ => Self::exceptional_rule(sig.superdimension(), k),
        }
    }
}

pub fn fischer_index_sets(sig: SuperSignature, k: usize) -> FischerIndexSets {
    FischerIndexSets::for_signature(sig, k)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SpaceKind {
    /// `H_ℓ = Ker Δ`
    #[serde(rename = "H")]
    Harmonic,
    /// `H̃_ℓ = Ker Δ R² Δ`
    #[serde(rename = "Ht")]
    Generalized,
}

impl SpaceKind {
    pub fn symbol(&self) -> &'static str {
        match self {
            SpaceKind::Harmonic => "H",
            SpaceKind::Generalized => "H~",
        }
    }

    pub fn space<S: Scalar>(&self, sig: SuperSignature, k: usize) -> Subspace<S> {
        match self {
            SpaceKind::Harmonic => harmonic_space(sig, k),
            SpaceKind::Generalized => generalized_harmonic_space(sig, k),
        }
    }
}

/// One summand `R^{r_power} K_ℓ` of a decomposition of `P_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summand {
    pub kind: SpaceKind,
    pub degree: usize,
    pub r_power: usize,
    pub dim: usize,
    /// `dim K_ℓ`; equal to `dim` when `R^{r_power}·` is injective on it.
    pub source_dim: usize,
    pub trivial: bool,
}

impl Summand {
    pub fn describe(&self) -> String {
        let r = match self.r_power {
            0 => String::new(),
            2 => "R^2 ".to_string(),
            e => format!("R^{e} "),
        };
        format!("{r}{}_{}", self.kind.symbol(), self.degree)
    }
}

/// An index `ℓ ∈ N_k` left out of the decomposition, with a check that
/// `R^{k−ℓ} H_ℓ` lies inside the retained summands.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuppressedSummand {
    pub degree: usize,
    pub r_power: usize,
    pub dim: usize,
    pub absorbed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub signature: SuperSignature,
    pub superdimension: i64,
    pub k: usize,
    pub rule: FischerRule,
    pub exceptional_indices: Vec<usize>,
    pub index_sets: FischerIndexSets,
    /// Summands in descending `ℓ` order.
    pub summands: Vec<Summand>,
    pub suppressed: Vec<SuppressedSummand>,
    pub ambient_dim: usize,
    pub total_dim: usize,
    pub span_dim: usize,
    pub verified: bool,
    pub failure_witness: Option<String>,
    pub notes: Vec<String>,
}

struct Assembled<S: Scalar> {
    summands: Vec<Summand>,
    spaces: Vec<Subspace<S>>,
}

fn assemble<S: Scalar>(sig: SuperSignature, k: usize, sets: &FischerIndexSets) -> Assembled<S> {
    let mut summands = Vec::new();
    let mut spaces = Vec::new();
    for &l in &sets.chain {
        let kind = if sets.tilde.contains(&l) {
            SpaceKind::Generalized
        } else if sets.ordinary.contains(&l) {
            SpaceKind::Harmonic
        } else {
            continue;
        };
        let source = kind.space::<S>(sig, l);
        let image = r_power_image(&source, k - l);
        summands.push(Summand {
            kind,
            degree: l,
            r_power: k - l,
            dim: image.dim(),
            source_dim: source.dim(),
            trivial: image.is_zero(),
        });
        spaces.push(image);
    }
    Assembled { summands, spaces }
}

/// Builds every summand as a subspace of `P_k` and checks that they are
/// independent and span `P_k`.
pub fn fischer_decomposition<S: Scalar>(sig: SuperSignature, k: usize) -> DecompositionReport {
    let rule = FischerRule::for_signature(sig);
    let sets = fischer_index_sets(sig, k);
    let amb = Ambient::homogeneous(sig, k);
    let Assembled { summands, spaces } = assemble::<S>(sig, k, &sets);

    let total = spaces
        .iter()
        .try_fold(Subspace::zero(amb), |acc, s| acc.sum(s))
        .expect("same ambient");
    let total_dim: usize = summands.iter().map(|s| s.dim).sum();
    let mut failure = None;
    if let Some(s) = summands.iter().find(|s| s.dim != s.source_dim) {
        failure = Some(format!(
            "R^{}· is not injective on {}_{}",
            s.r_power,
            s.kind.symbol(),
            s.degree
        ));
    } else if total.dim() != total_dim {
        failure = Some(format!(
            "summands overlap: span has dim {} < {}",
            total.dim(),
            total_dim
        ));
    } else if total.dim() != amb.dim() {
        failure = Some(format!(
            "summands span dim {} of dim P_k = {}",
            total.dim(),
            amb.dim()
        ));
    }

    let suppressed = sets
        .suppressed
        .iter()
        .map(|&l| {
            let image = r_power_image(&harmonic_space::<S>(sig, l), k - l);
            let absorbed = image.is_subspace_of(&total).expect("same ambient");
            SuppressedSummand {
                degree: l,
                r_power: k - l,
                dim: image.dim(),
                absorbed,
            }
        })
        .collect();

    let mut notes = Vec::new();
    if rule == FischerRule::Fermionic {
        notes.push(fermionic_cross_check::<S>(sig, k));
    }

    DecompositionReport {
        signature: sig,
        superdimension: sig.superdimension(),
        k,
        rule,
        exceptional_indices: exceptional_indices(sig.superdimension())
            .into_iter()
            .collect(),
        index_sets: sets,
        summands,
        suppressed,
        ambient_dim: amb.dim(),
        total_dim,
        span_dim: total.dim(),
        verified: failure.is_none(),
        failure_witness: failure,
        notes,
    }
}

/// For `m = 0`, also evaluates the exceptional-rule index sets literally and
/// says whether they would balance too.
fn fermionic_cross_check<S: Scalar>(sig: SuperSignature, k: usize) -> String {
    let literal = FischerIndexSets::exceptional_rule(sig.superdimension(), k);
    let Assembled { summands, spaces } = assemble::<S>(sig, k, &literal);
    let amb = Ambient::homogeneous(sig, k);
    let span = spaces
        .iter()
        .try_fold(Subspace::zero(amb), |acc, s| acc.sum(s))
        .expect("same ambient");
    let total: usize = summands.iter().map(|s| s.dim).sum();
    let balanced = span.dim() == total && total == amb.dim();
    let listing: Vec<String> = summands
        .iter()
        .map(|s| format!("{} (dim {})", s.describe(), s.dim))
        .collect();
    format!(
        "m = 0: exceptional-rule index sets [{}] {}",
        listing.join(", "),
        if balanced {
            "also decompose P_k"
        } else {
            "do NOT decompose P_k"
        }
    )
}

/// Result of checking the composition series `H⁰_k ⊂ H_k ⊂ H̃_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompositionReport {
    pub signature: SuperSignature,
    pub k: usize,
    pub exceptional_degree: bool,
    pub dim_socle: usize,
    pub dim_harmonic: usize,
    pub dim_generalized: usize,
    /// `dim H_{2−M−k}` at exceptional degrees.
    pub dim_mirror: Option<usize>,
    /// `dim H_k − dim H⁰_k`, reported as data.
    pub dim_middle_quotient: usize,
    pub checks: Vec<Check>,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool) -> Self {
        Check {
            name: name.into(),
            passed,
        }
    }
}

/// Off `I_M`: `H̃_k = H_k` and `H⁰_k = 0`. On `I_M`:
/// `H⁰_k = R^{2k+M−2} H_{2−M−k}`, strict inclusions `H⁰_k ⊂ H_k ⊂ H̃_k`
/// with `H⁰_k ≠ 0`, and `dim H⁰_k = dim H̃_k − dim H_k = dim H_{2−M−k}`.
pub fn verify_composition_series<S: Scalar>(sig: SuperSignature, k: usize) -> CompositionReport {
    let big_m = sig.superdimension();
    let exceptional_degree = exceptional_indices(big_m).contains(&k);
    let h = harmonic_space::<S>(sig, k);
    let ht = generalized_harmonic_space::<S>(sig, k);
    let h0 = socle_space::<S>(sig, k);
    let mut checks = Vec::new();
    let mut dim_mirror = None;
    if !exceptional_degree {
        checks.push(Check::new("H~_k = H_k", ht == h));
        checks.push(Check::new("H0_k = 0", h0.is_zero()));
    } else {
        let mirror = (2 - big_m - k as i64) as usize;
        let power = (2 * k as i64 + big_m - 2) as usize;
        let hm = harmonic_space::<S>(sig, mirror);
        let lifted = r_power_image(&hm, power);
        dim_mirror = Some(hm.dim());
        checks.push(Check::new(
            format!("H0_k = R^{power} H_{mirror}"),
            h0 == lifted,
        ));
        checks.push(Check::new("H0_k != 0", !h0.is_zero()));
        checks.push(Check::new(
            "H0_k strictly inside H_k",
            h0.is_subspace_of(&h).expect("same ambient") && h0.dim() < h.dim(),
        ));
        checks.push(Check::new(
            "H_k strictly inside H~_k",
            h.is_subspace_of(&ht).expect("same ambient") && h.dim() < ht.dim(),
        ));
        checks.push(Check::new(
            "dim H0_k = dim H~_k - dim H_k",
            h0.dim() + h.dim() == ht.dim(),
        ));
        checks.push(Check::new(
            format!("dim H0_k = dim H_{mirror}"),
            h0.dim() == hm.dim(),
        ));
    }
    let verified = checks.iter().all(|c| c.passed);
    CompositionReport {
        signature: sig,
        k,
        exceptional_degree,
        dim_socle: h0.dim(),
        dim_harmonic: h.dim(),
        dim_generalized: ht.dim(),
        dim_mirror,
        dim_middle_quotient: h.dim() - h0.dim(),
        checks,
        verified,
    }
}

/// `dim P_k` (re-exported for reports).
pub fn dim_polynomials(sig: SuperSignature, k: usize) -> usize {
    monomial_count(&sig, k)
}
