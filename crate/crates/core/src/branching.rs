//! Branching of `H_k` and `H̃_k` from `osp(m|2n)` to `osp(m−1|2n)`.
//!
//! The argument is transported through the CK extension: `H_k` is the CK
//! image of `P̲_k ⊕ P̲_{k−1} ⊕ 0`, and `H̃_k` (at an exceptional degree) the
//! image of `P̲_k ⊕ P̲_{k−1} ⊕ Ker_{k−2}(Δ R²)`. Reports certify the
//! dimension identities and these subspace identities exactly.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::ck::{ck_extend, CkData};
use crate::error::{Error, Result};
use crate::exactla::{Ambient, Subspace};
use crate::harmonics::{
    exceptional_indices, fischer_decomposition, generalized_harmonic_space, harmonic_space,
    is_exceptional, kernel_of, r_power_image, Check, SpaceKind,
};
use crate::operators::{rsquare_pow_mul, Operator, OspGenerator};
use crate::scalar::Scalar;
use crate::superpoly::{monomial_basis, SuperPolynomial, SuperSignature};

/// `B̃_k = {0..k} ∩ I_{M−1}`, `B⁰_k = {3 − M − ℓ : ℓ ∈ B̃_k}`,
/// `B_k = {0..k} \ (B̃_k ∪ B⁰_k)`, all ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchingIndexSets {
    pub k: usize,
    pub tilde: Vec<usize>,
    pub suppressed: Vec<usize>,
    pub ordinary: Vec<usize>,
}

impl BranchingIndexSets {
    pub fn new(superdimension: i64, k: usize) -> Self {
        let im = exceptional_indices(superdimension - 1);
        let tilde: Vec<usize> = (0..=k).filter(|l| im.contains(l)).collect();
        let mirror: Vec<usize> = tilde
            .iter()
            .map(|&l| 3 - superdimension - l as i64)
            .filter(|&v| v >= 0)
            .map(|v| v as usize)
            .collect();
        let suppressed = (0..=k).filter(|l| mirror.contains(l)).collect();
        let ordinary = (0..=k)
            .filter(|l| !im.contains(l) && !mirror.contains(l))
            .collect();
        BranchingIndexSets {
            k,
            tilde,
            suppressed,
            ordinary,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchingMode {
    /// `H_k ≅ ⊕_{ℓ ≤ k} H̲_ℓ`
    Classical,
    /// `H_k ≅ ⊕_{B̃_k} H̲̃_ℓ ⊕ ⊕_{B_k} H̲_ℓ`
    Harmonic,
    /// `H̃_k ≅ ⊕_{ℓ ≤ 2−M−k} 2 H̲_ℓ ⊕ ⊕_{3−M−k ≤ ℓ ≤ k} H̲_ℓ`
    Generalized,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchSummand {
    pub kind: SpaceKind,
    pub degree: usize,
    pub multiplicity: usize,
    pub dim: usize,
}

impl BranchSummand {
    pub fn describe(&self) -> String {
        let mult = if self.multiplicity == 1 {
            String::new()
        } else {
            format!("{} ", self.multiplicity)
        };
        format!("{mult}{}_{}", self.kind.symbol(), self.degree)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchingReport {
    pub signature: SuperSignature,
    pub hyperplane: SuperSignature,
    pub k: usize,
    pub mode: BranchingMode,
    pub index_sets: Option<BranchingIndexSets>,
    pub summands: Vec<BranchSummand>,
    pub lhs_dim: usize,
    pub rhs_dim: usize,
    pub checks: Vec<Check>,
    pub verified: bool,
    pub notes: Vec<String>,
}

impl BranchingReport {
    fn finish(mut self) -> Self {
        self.rhs_dim = self.summands.iter().map(|s| s.multiplicity * s.dim).sum();
        self.checks
            .insert(0, Check::new("dim identity", self.lhs_dim == self.rhs_dim));
        self.verified = self.checks.iter().all(|c| c.passed);
        self
    }
}

fn require_bosonic(sig: SuperSignature) -> Result<SuperSignature> {
    sig.hyperplane()
}

/// Span of `CK(p, 0, 0)`, `CK(0, q, 0)` and `CK(0, 0, r)` over the given
/// polynomials, as a subspace of `P_k`.
fn ck_span<S: Scalar>(
    sig: SuperSignature,
    k: usize,
    traces: &[SuperPolynomial<S>],
    normals: &[SuperPolynomial<S>],
    laplacians: &[SuperPolynomial<S>],
) -> Subspace<S> {
    let mut images = Vec::new();
    let zero = CkData::zero(sig, k).expect("m >= 1");
    for p in traces {
        images.push(ck_extend(&CkData {
            trace: p.clone(),
            ..zero.clone()
        }));
    }
    for q in normals {
        images.push(ck_extend(&CkData {
            normal_trace: q.clone(),
            ..zero.clone()
        }));
    }
    for r in laplacians {
        images.push(ck_extend(&CkData {
            laplacian: r.clone(),
            ..zero.clone()
        }));
    }
    Subspace::from_polynomials(sig, k, &images).expect("CK output is homogeneous")
}

fn monomials_of<S: Scalar>(sig: SuperSignature, k: Option<usize>) -> Vec<SuperPolynomial<S>> {
    match k {
        None => Vec::new(),
        Some(k) => monomial_basis(&sig, k)
            .into_iter()
            .map(|m| SuperPolynomial::monomial(sig, m))
            .collect(),
    }
}

/// `H_k ≅ ⊕_{ℓ=0}^k H̲_ℓ`, valid when `M − 1 ∉ −2N₀`.
pub fn branch_classical<S: Scalar>(sig: SuperSignature, k: usize) -> Result<BranchingReport> {
    let under = require_bosonic(sig)?;
    if is_exceptional(sig.superdimension() - 1) {
        return Err(Error::Precondition(format!(
            "M - 1 = {} is exceptional; use branch_harmonic",
            sig.superdimension() - 1
        )));
    }
    let summands = (0..=k)
        .map(|l| BranchSummand {
            kind: SpaceKind::Harmonic,
            degree: l,
            multiplicity: 1,
            dim: harmonic_space::<S>(under, l).dim(),
        })
        .collect();
    Ok(BranchingReport {
        signature: sig,
        hyperplane: under,
        k,
        mode: BranchingMode::Classical,
        index_sets: None,
        summands,
        lhs_dim: harmonic_space::<S>(sig, k).dim(),
        rhs_dim: 0,
        checks: Vec::new(),
        verified: false,
        notes: Vec::new(),
    }
    .finish())
}

/// `H_k ≅ ⊕_{ℓ ∈ B̃_k} H̲̃_ℓ ⊕ ⊕_{ℓ ∈ B_k} H̲_ℓ`, checked by dimensions, by
/// `H_k = CK(P̲_k ⊕ P̲_{k−1} ⊕ 0)`, and by matching the summands against the
/// Fischer decompositions of `P̲_k` and `P̲_{k−1}`.
pub fn branch_harmonic<S: Scalar>(sig: SuperSignature, k: usize) -> Result<BranchingReport> {
    let under = require_bosonic(sig)?;
    let sets = BranchingIndexSets::new(sig.superdimension(), k);
    let mut summands = Vec::new();
    for l in 0..=k {
        let kind = if sets.tilde.contains(&l) {
            SpaceKind::Generalized
        } else if sets.ordinary.contains(&l) {
            SpaceKind::Harmonic
        } else {
            continue;
        };
        summands.push(BranchSummand {
            kind,
            degree: l,
            multiplicity: 1,
            dim: kind.space::<S>(under, l).dim(),
        });
    }

    let h = harmonic_space::<S>(sig, k);
    let mut checks = Vec::new();
    let dim_under = |d: Option<usize>| d.map_or(0, |d| crate::superpoly::monomial_count(&under, d));
    checks.push(Check::new(
        "dim H_k = dim P_k(hyperplane) + dim P_k-1(hyperplane)",
        h.dim() == dim_under(Some(k)) + dim_under(k.checked_sub(1)),
    ));
    let span = ck_span(
        sig,
        k,
        &monomials_of::<S>(under, Some(k)),
        &monomials_of::<S>(under, k.checked_sub(1)),
        &[],
    );
    checks.push(Check::new("H_k = CK(P_k ⊕ P_k-1 ⊕ 0)", span == h));

    // Fischer summands of P̲_k and P̲_{k−1}, with R̲-powers forgotten
    let mut fischer: BTreeMap<(SpaceKind, usize), usize> = BTreeMap::new();
    let mut fischer_ok = true;
    for d in std::iter::once(k).chain(k.checked_sub(1)) {
        let report = fischer_decomposition::<S>(under, d);
        fischer_ok &= report.verified;
        for s in report.summands.iter().filter(|s| s.dim > 0) {
            *fischer.entry((s.kind, s.degree)).or_default() += s.dim;
        }
    }
    let ours: BTreeMap<(SpaceKind, usize), usize> = summands
        .iter()
        .filter(|s| s.dim > 0)
        .map(|s| ((s.kind, s.degree), s.dim))
        .collect();
    checks.push(Check::new(
        "hyperplane Fischer decompositions verify",
        fischer_ok,
    ));
    checks.push(Check::new(
        "summands match hyperplane Fischer summands",
        fischer == ours,
    ));

    let mut notes = Vec::new();
    if under.m() == 0 && !sets.tilde.is_empty() {
        notes.push(format!(
            "hyperplane {under} is purely fermionic; H~ there is the literal kernel of ΔR²Δ"
        ));
    }
    let mode = if exceptional_indices(sig.superdimension() - 1).is_empty() {
        BranchingMode::Classical
    } else {
        BranchingMode::Harmonic
    };
    Ok(BranchingReport {
        signature: sig,
        hyperplane: under,
        k,
        mode,
        index_sets: Some(sets),
        summands,
        lhs_dim: h.dim(),
        rhs_dim: 0,
        checks,
        verified: false,
        notes,
    }
    .finish())
}

/// `Ker_{k−2}(Δ R²)`.
pub fn delta_r2_kernel<S: Scalar>(sig: SuperSignature, k: usize) -> Subspace<S> {
    kernel_of(&Operator::delta_r2(), sig, k)
}

/// For `M ∈ −2N₀`, `k ∈ I_M`:
/// `H̃_k ≅ ⊕_{ℓ=0}^{2−M−k} 2 H̲_ℓ ⊕ ⊕_{ℓ=3−M−k}^{k} H̲_ℓ`.
pub fn branch_generalized<S: Scalar>(sig: SuperSignature, k: usize) -> Result<BranchingReport> {
    let under = require_bosonic(sig)?;
    let big_m = sig.superdimension();
    if !exceptional_indices(big_m).contains(&k) {
        return Err(Error::Precondition(format!(
            "k = {k} is not an exceptional degree for M = {big_m}"
        )));
    }
    let mirror = (2 - big_m - k as i64) as usize;
    let summands = (0..=k)
        .map(|l| BranchSummand {
            kind: SpaceKind::Harmonic,
            degree: l,
            multiplicity: if l <= mirror { 2 } else { 1 },
            dim: harmonic_space::<S>(under, l).dim(),
        })
        .collect();

    let ht = generalized_harmonic_space::<S>(sig, k);
    let hm = harmonic_space::<S>(sig, mirror);
    let mut checks = Vec::new();
    let dim_under = |d: usize| crate::superpoly::monomial_count(&under, d);
    checks.push(Check::new(
        format!("dim H~_k = dim P_k(hyperplane) + dim P_k-1(hyperplane) + dim H_{mirror}"),
        ht.dim() == dim_under(k) + dim_under(k - 1) + hm.dim(),
    ));
    let kernel = delta_r2_kernel::<S>(sig, k - 2);
    let power = (2 * k as i64 + big_m - 4) as usize;
    checks.push(Check::new(
        format!("Ker_k-2(ΔR²) = R^{power} H_{mirror}"),
        kernel == r_power_image(&hm, power),
    ));
    let span = ck_span(
        sig,
        k,
        &monomials_of::<S>(under, Some(k)),
        &monomials_of::<S>(under, Some(k - 1)),
        &kernel.polynomials(),
    );
    checks.push(Check::new(
        "H~_k = CK(P_k ⊕ P_k-1 ⊕ Ker_k-2(ΔR²))",
        span == ht,
    ));

    Ok(BranchingReport {
        signature: sig,
        hyperplane: under,
        k,
        mode: BranchingMode::Generalized,
        index_sets: None,
        summands,
        lhs_dim: ht.dim(),
        rhs_dim: 0,
        checks,
        verified: false,
        notes: Vec::new(),
    }
    .finish())
}

/// Generators of `osp(m−1|2n)` inside `osp(m|2n)`: all `L_{ab}` avoiding
/// the coordinate `x_m`.
pub fn restricted_generators<S: Scalar>(sig: SuperSignature) -> Vec<OspGenerator<S>> {
    let dim = sig.m() + sig.odd_count();
    let skip = sig.m();
    let mut out = Vec::new();
    for a in (1..=dim).filter(|&a| a != skip) {
        for b in (a..=dim).filter(|&b| b != skip) {
            out.push(OspGenerator::new(sig, a, b).expect("indices in range"));
        }
    }
    out
}

/// Whether every generator maps `u` into itself.
pub fn is_stable<S: Scalar>(u: &Subspace<S>, generators: &[OspGenerator<S>]) -> bool {
    u.polynomials().iter().all(|p| {
        generators.iter().all(|g| {
            u.contains_polynomial(&g.apply(p))
                .expect("generator preserves degree")
        })
    })
}

/// Optional deep check for [`branch_harmonic`]: each summand's CK image
/// `CK(R̲^{k−ℓ} K̲_ℓ, 0, 0)` or `CK(0, R̲^{k−1−ℓ} K̲_ℓ, 0)` has the summand's
/// dimension, is `osp(m−1|2n)`-stable, and together they span `H_k`.
pub fn branch_harmonic_deep_check<S: Scalar>(sig: SuperSignature, k: usize) -> Result<Vec<Check>> {
    let report = branch_harmonic::<S>(sig, k)?;
    let under = report.hyperplane;
    let generators = restricted_generators::<S>(sig);
    let amb = Ambient::homogeneous(sig, k);
    let mut total = Subspace::zero(amb);
    let mut checks = Vec::new();
    for s in &report.summands {
        let lifted: Vec<_> = s
            .kind
            .space::<S>(under, s.degree)
            .polynomials()
            .iter()
            .map(|p| rsquare_pow_mul(p, (k - s.degree) / 2))
            .collect();
        let image = if (k - s.degree).is_multiple_of(2) {
            ck_span(sig, k, &lifted, &[], &[])
        } else {
            ck_span(sig, k, &[], &lifted, &[])
        };
        checks.push(Check::new(
            format!(
                "CK image of {} has dim {} and is stable",
                s.describe(),
                s.dim
            ),
            image.dim() == s.dim && is_stable(&image, &generators),
        ));
        total = total.sum(&image)?;
    }
    checks.push(Check::new(
        "CK images span H_k",
        total == harmonic_space::<S>(sig, k),
    ));
    Ok(checks)
}
