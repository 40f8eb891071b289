//! Gelfand-Tsetlin bases of `H_k` and `H̃_k` along the chain
//! `osp(m|2n) ⊃ osp(m−1|2n) ⊃ … ⊃ osp(0|2n) ⊃ … ⊃ osp(0|0)`.
//!
//! Bosonic levels are peeled off by CK extension of branching data; the
//! purely fermionic tail uses the recursion
//! `H_k(n) = H_k(n−1) ⊕ θ_{2n−1}H_{k−1}(n−1) ⊕ θ_{2n}H_{k−1}(n−1) ⊕ Θ_{n,k}H_{k−2}(n−1)`.
//! Each element carries the full chain of records that produced it.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, RwLock};

use serde::{Serialize, Serializer};

use crate::ck::{ck_data, ck_extend, CkData};
use crate::harmonics::{
    exceptional_indices, generalized_harmonic_space, is_exceptional, parity_chain, Check,
    FischerIndexSets, SpaceKind,
};
use crate::operators::{laplacian, r_power_mul, rsquare_pow_mul, Operator};
use crate::scalar::Scalar;
use crate::superpoly::{SuperPolynomial, SuperSignature};

/// Which construction produced an element at one level of the chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BranchKind {
    /// `CK(R̲^{k−ℓ}h, 0, 0)`, `h ∈ H̲_ℓ`
    OrdinaryA1,
    /// `CK(0, R̲^{k−1−ℓ}h, 0)`, `h ∈ H̲_ℓ`
    OrdinaryA2,
    /// `CK(0, 0, R^{2k+M−4}h)`, `h ∈ H_{2−M−k}`
    GeneralizedA3,
    /// as `OrdinaryA1`, exceptional hyperplane, `ℓ ∈ J̲_k`
    OrdinaryB3,
    /// as `OrdinaryA2`, exceptional hyperplane, `ℓ ∈ J̲_{k−1}`
    OrdinaryB4,
    /// `CK(R̲^{k−ℓ}h, 0, 0)`, `h ∈ H̲̃_ℓ`, `ℓ ∈ J̲̃_k`
    TildeB5,
    /// `CK(0, R̲^{k−1−ℓ}h, 0)`, `h ∈ H̲̃_ℓ`, `ℓ ∈ J̲̃_{k−1}`
    TildeB6,
    /// fermionic summand 0..=3: `1`, `θ_{2n−1}`, `θ_{2n}`, `Θ_{n,k}` times lower
    Fermionic(u8),
    /// row `ν` of the reduced kernel basis; no recursion available
    Direct(usize),
}

impl BranchKind {
    pub fn name(&self) -> String {
        match self {
            BranchKind::OrdinaryA1 => "ordinary-a1".into(),
            BranchKind::OrdinaryA2 => "ordinary-a2".into(),
            BranchKind::GeneralizedA3 => "generalized-a3".into(),
            BranchKind::OrdinaryB3 => "ordinary-b3".into(),
            BranchKind::OrdinaryB4 => "ordinary-b4".into(),
            BranchKind::TildeB5 => "tilde-b5".into(),
            BranchKind::TildeB6 => "tilde-b6".into(),
            BranchKind::Fermionic(i) => format!("fermionic-{i}"),
            BranchKind::Direct(nu) => format!("direct-{nu}"),
        }
    }

    fn code(&self) -> String {
        match self {
            BranchKind::OrdinaryA1 => "a1".into(),
            BranchKind::OrdinaryA2 => "a2".into(),
            BranchKind::GeneralizedA3 => "a3".into(),
            BranchKind::OrdinaryB3 => "b3".into(),
            BranchKind::OrdinaryB4 => "b4".into(),
            BranchKind::TildeB5 => "b5".into(),
            BranchKind::TildeB6 => "b6".into(),
            BranchKind::Fermionic(i) => format!("f{i}"),
            BranchKind::Direct(nu) => format!("d{nu}"),
        }
    }
}

impl Serialize for BranchKind {
    fn serialize<Z: Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        s.serialize_str(&self.name())
    }
}

/// One step of a label. `level` is `m` on bosonic levels and `n` on
/// fermionic ones; `degree` is the degree of the lower space used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LabelRecord {
    pub level: usize,
    pub kind: BranchKind,
    pub degree: usize,
}

impl fmt::Display for LabelRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{},{}]", self.kind.code(), self.level, self.degree)
    }
}

/// Full provenance of a basis element, top level first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct GtLabel {
    pub chain: Vec<LabelRecord>,
}

impl GtLabel {
    fn prepend(record: LabelRecord, tail: &GtLabel) -> Self {
        let mut chain = Vec::with_capacity(tail.chain.len() + 1);
        chain.push(record);
        chain.extend_from_slice(&tail.chain);
        GtLabel { chain }
    }

    pub fn head(&self) -> Option<&LabelRecord> {
        self.chain.first()
    }

    pub fn tail(&self) -> GtLabel {
        GtLabel {
            chain: self.chain.iter().skip(1).copied().collect(),
        }
    }
}

impl fmt::Display for GtLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.chain.is_empty() {
            return write!(f, "[]");
        }
        for (i, r) in self.chain.iter().enumerate() {
            if i > 0 {
                write!(f, ">")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GtElement<S: Scalar> {
    pub label: GtLabel,
    pub polynomial: SuperPolynomial<S>,
}

/// `H̃_k` is only distinct from `H_k` at exceptional degrees.
pub fn effective_target(sig: SuperSignature, k: usize, target: SpaceKind) -> SpaceKind {
    match target {
        SpaceKind::Generalized if exceptional_indices(sig.superdimension()).contains(&k) => {
            SpaceKind::Generalized
        }
        _ => SpaceKind::Harmonic,
    }
}

/// `Θ_{n,k} = θ_1θ_2 + … + θ_{2n−3}θ_{2n−2} + (k − n − 1) θ_{2n−1}θ_{2n}`.
pub fn theta_nk<S: Scalar>(n: usize, k: usize) -> SuperPolynomial<S> {
    let sig = SuperSignature::new(0, n).expect("n fits");
    let pair = |j: usize| {
        let a = SuperPolynomial::theta(sig, 2 * j - 1).expect("in range");
        let b = SuperPolynomial::theta(sig, 2 * j).expect("in range");
        &a * &b
    };
    let mut acc = SuperPolynomial::zero(sig);
    for j in 1..n {
        acc = &acc + &pair(j);
    }
    let c = S::from_i64(k as i64 - n as i64 - 1);
    &acc + &pair(n).scale(&c)
}

type Key = (SuperSignature, usize, SpaceKind);
type Basis<S> = Arc<Vec<GtElement<S>>>;

/// Memoizing builder; lower levels are shared between requests.
pub struct GtBuilder<S: Scalar> {
    cache: RwLock<HashMap<Key, Basis<S>>>,
}

impl<S: Scalar> Default for GtBuilder<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> GtBuilder<S> {
    pub fn new() -> Self {
        GtBuilder {
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn basis(&self, sig: SuperSignature, k: usize, target: SpaceKind) -> Basis<S> {
        let key = (sig, k, effective_target(sig, k, target));
        if let Some(b) = self.cache.read().expect("cache lock").get(&key) {
            return b.clone();
        }
        let built = Arc::new(self.build(key));
        self.cache
            .write()
            .expect("cache lock")
            .entry(key)
            .or_insert(built)
            .clone()
    }

    fn build(&self, (sig, k, target): Key) -> Vec<GtElement<S>> {
        if sig.m() == 0 {
            return match target {
                SpaceKind::Harmonic => self.fermionic(sig, k),
                SpaceKind::Generalized => direct_kernel(sig, k),
            };
        }
        let big_m = sig.superdimension();
        let mut out = Vec::new();
        if is_exceptional(big_m - 1) {
            let at_k = FischerIndexSets::exceptional_rule(big_m - 1, k);
            let at_k1 = k
                .checked_sub(1)
                .map(|d| FischerIndexSets::exceptional_rule(big_m - 1, d));
            let empty = Vec::new();
            let (ord1, tilde1) = at_k1
                .as_ref()
                .map_or((&empty, &empty), |s| (&s.ordinary, &s.tilde));
            self.extend_slot(
                &mut out,
                sig,
                k,
                &at_k.ordinary,
                SpaceKind::Harmonic,
                BranchKind::OrdinaryB3,
            );
            self.extend_slot(
                &mut out,
                sig,
                k,
                ord1,
                SpaceKind::Harmonic,
                BranchKind::OrdinaryB4,
            );
            self.extend_slot(
                &mut out,
                sig,
                k,
                &at_k.tilde,
                SpaceKind::Generalized,
                BranchKind::TildeB5,
            );
            self.extend_slot(
                &mut out,
                sig,
                k,
                tilde1,
                SpaceKind::Generalized,
                BranchKind::TildeB6,
            );
        } else {
            let chain = parity_chain(k);
            self.extend_slot(
                &mut out,
                sig,
                k,
                &chain,
                SpaceKind::Harmonic,
                BranchKind::OrdinaryA1,
            );
            if k >= 1 {
                let chain = parity_chain(k - 1);
                self.extend_slot(
                    &mut out,
                    sig,
                    k,
                    &chain,
                    SpaceKind::Harmonic,
                    BranchKind::OrdinaryA2,
                );
            }
        }
        if target == SpaceKind::Generalized {
            let d = (2 - big_m - k as i64) as usize;
            let e = (2 * k as i64 + big_m - 4) as usize;
            let zero = CkData::zero(sig, k).expect("m >= 1");
            for h in self.basis(sig, d, SpaceKind::Harmonic).iter() {
                let data = CkData {
                    laplacian: r_power_mul(&h.polynomial, e),
                    ..zero.clone()
                };
                out.push(GtElement {
                    label: GtLabel::prepend(
                        LabelRecord {
                            level: sig.m(),
                            kind: BranchKind::GeneralizedA3,
                            degree: d,
                        },
                        &h.label,
                    ),
                    polynomial: ck_extend(&data),
                });
            }
        }
        out
    }

    /// CK images of `R̲^{…} h` for `h` in the hyperplane bases of degrees
    /// `degrees` (descending), placed in the trace or normal slot.
    fn extend_slot(
        &self,
        out: &mut Vec<GtElement<S>>,
        sig: SuperSignature,
        k: usize,
        degrees: &[usize],
        lower: SpaceKind,
        kind: BranchKind,
    ) {
        if degrees.is_empty() {
            return;
        }
        let under = sig.hyperplane().expect("m >= 1");
        let normal = matches!(
            kind,
            BranchKind::OrdinaryA2 | BranchKind::OrdinaryB4 | BranchKind::TildeB6
        );
        let top = if normal { k - 1 } else { k };
        let zero = CkData::zero(sig, k).expect("m >= 1");
        let mut degrees = degrees.to_vec();
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        for l in degrees {
            for h in self.basis(under, l, lower).iter() {
                let lifted = rsquare_pow_mul(&h.polynomial, (top - l) / 2);
                let data = if normal {
                    CkData {
                        normal_trace: lifted,
                        ..zero.clone()
                    }
                } else {
                    CkData {
                        trace: lifted,
                        ..zero.clone()
                    }
                };
                out.push(GtElement {
                    label: GtLabel::prepend(
                        LabelRecord {
                            level: sig.m(),
                            kind,
                            degree: l,
                        },
                        &h.label,
                    ),
                    polynomial: ck_extend(&data),
                });
            }
        }
    }

    fn fermionic(&self, sig: SuperSignature, k: usize) -> Vec<GtElement<S>> {
        let n = sig.n();
        if n == 0 {
            return if k == 0 {
                vec![GtElement {
                    label: GtLabel::default(),
                    polynomial: SuperPolynomial::one(sig),
                }]
            } else {
                Vec::new()
            };
        }
        if k > n {
            return Vec::new();
        }
        let lower = SuperSignature::new(0, n - 1).expect("smaller");
        let factors: [(u8, Option<usize>, SuperPolynomial<S>); 4] = [
            (0, Some(k), SuperPolynomial::one(sig)),
            (
                1,
                k.checked_sub(1),
                SuperPolynomial::theta(sig, 2 * n - 1).expect("in range"),
            ),
            (
                2,
                k.checked_sub(1),
                SuperPolynomial::theta(sig, 2 * n).expect("in range"),
            ),
            (3, k.checked_sub(2), theta_nk(n, k)),
        ];
        let mut out = Vec::new();
        for (i, degree, factor) in factors {
            let Some(d) = degree else { continue };
            for h in self.basis(lower, d, SpaceKind::Harmonic).iter() {
                let widened = h.polynomial.widen(sig).expect("more odd variables");
                out.push(GtElement {
                    label: GtLabel::prepend(
                        LabelRecord {
                            level: n,
                            kind: BranchKind::Fermionic(i),
                            degree: d,
                        },
                        &h.label,
                    ),
                    polynomial: &factor * &widened,
                });
            }
        }
        out
    }
}

fn direct_kernel<S: Scalar>(sig: SuperSignature, k: usize) -> Vec<GtElement<S>> {
    generalized_harmonic_space::<S>(sig, k)
        .polynomials()
        .into_iter()
        .enumerate()
        .map(|(nu, p)| GtElement {
            label: GtLabel {
                chain: vec![LabelRecord {
                    level: sig.n(),
                    kind: BranchKind::Direct(nu),
                    degree: k,
                }],
            },
            polynomial: p,
        })
        .collect()
}

/// GT basis of `H_k` (or of `H̃_k` when `target` is generalized and `k` is an
/// exceptional degree).
pub fn gt_basis<S: Scalar>(sig: SuperSignature, k: usize, target: SpaceKind) -> Vec<GtElement<S>> {
    GtBuilder::new().basis(sig, k, target).as_ref().clone()
}

/// GT basis of `H_k(R^{0|2n})` from the fermionic recursion; empty for
/// `k > n`.
pub fn fermionic_harmonic_basis<S: Scalar>(n: usize, k: usize) -> Vec<GtElement<S>> {
    let sig = SuperSignature::new(0, n).expect("n fits");
    gt_basis(sig, k, SpaceKind::Harmonic)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GtVerification {
    pub signature: SuperSignature,
    pub k: usize,
    pub target: SpaceKind,
    pub size: usize,
    pub expected_dim: usize,
    pub checks: Vec<Check>,
    pub verified: bool,
    /// `(n, degree)` pairs on the fermionic level where `H̃` was taken as a
    /// raw kernel basis.
    pub direct_kernel: Vec<(usize, usize)>,
    pub failure_witness: Option<String>,
}

/// Cardinality, exact independence, annihilation, label uniqueness and
/// level-by-level provenance of [`gt_basis`].
pub fn verify_gt_basis<S: Scalar>(
    sig: SuperSignature,
    k: usize,
    target: SpaceKind,
) -> GtVerification {
    let builder = GtBuilder::<S>::new();
    verify_with(&builder, sig, k, target)
}

pub fn verify_with<S: Scalar>(
    builder: &GtBuilder<S>,
    sig: SuperSignature,
    k: usize,
    target: SpaceKind,
) -> GtVerification {
    let target = effective_target(sig, k, target);
    let basis = builder.basis(sig, k, target);
    let space = target.space::<S>(sig, k);
    let polys: Vec<_> = basis.iter().map(|e| e.polynomial.clone()).collect();
    let span = crate::exactla::Subspace::from_polynomials(sig, k, &polys).expect("homogeneous");
    let op = match target {
        SpaceKind::Harmonic => Operator::Laplacian,
        SpaceKind::Generalized => Operator::delta_r2_delta(),
    };
    let mut witness = None;
    let annihilated = basis.iter().all(|e| {
        let ok = op.apply(&e.polynomial).is_zero();
        if !ok && witness.is_none() {
            witness = Some(format!("{} is not annihilated", e.label));
        }
        ok
    });
    let labels: HashSet<&GtLabel> = basis.iter().map(|e| &e.label).collect();
    let compatible = basis.iter().all(|e| {
        let ok = provenance_ok(builder, sig, k, e);
        if !ok && witness.is_none() {
            witness = Some(format!("{} does not match its lower element", e.label));
        }
        ok
    });
    let checks = vec![
        Check::new("cardinality equals dimension", basis.len() == space.dim()),
        Check::new("linearly independent", span.dim() == basis.len()),
        Check::new("annihilated by the defining operator", annihilated),
        Check::new("labels distinct", labels.len() == basis.len()),
        Check::new("level compatibility", compatible),
    ];
    let direct: BTreeSet<(usize, usize)> = basis
        .iter()
        .flat_map(|e| e.label.chain.iter())
        .filter(|r| matches!(r.kind, BranchKind::Direct(_)))
        .map(|r| (r.level, r.degree))
        .collect();
    GtVerification {
        signature: sig,
        k,
        target,
        size: basis.len(),
        expected_dim: space.dim(),
        verified: checks.iter().all(|c| c.passed),
        checks,
        direct_kernel: direct.into_iter().collect(),
        failure_witness: witness,
    }
}

fn find_lower<S: Scalar>(
    builder: &GtBuilder<S>,
    sig: SuperSignature,
    k: usize,
    target: SpaceKind,
    tail: &GtLabel,
) -> Option<SuperPolynomial<S>> {
    builder
        .basis(sig, k, target)
        .iter()
        .find(|e| &e.label == tail)
        .map(|e| e.polynomial.clone())
}

fn provenance_ok<S: Scalar>(
    builder: &GtBuilder<S>,
    sig: SuperSignature,
    k: usize,
    e: &GtElement<S>,
) -> bool {
    let Some(head) = e.label.head() else {
        return sig.n() == 0 && k == 0 && e.polynomial == SuperPolynomial::one(sig);
    };
    let tail = e.label.tail();
    let l = head.degree;
    if sig.m() == 0 {
        let n = sig.n();
        return match head.kind {
            BranchKind::Direct(nu) => {
                generalized_harmonic_space::<S>(sig, k)
                    .polynomials()
                    .get(nu)
                    == Some(&e.polynomial)
            }
            BranchKind::Fermionic(i) if n >= 1 => {
                let lower = SuperSignature::new(0, n - 1).expect("smaller");
                let Some(h) = find_lower(builder, lower, l, SpaceKind::Harmonic, &tail) else {
                    return false;
                };
                let factor = match i {
                    0 => SuperPolynomial::one(sig),
                    1 => SuperPolynomial::theta(sig, 2 * n - 1).expect("in range"),
                    2 => SuperPolynomial::theta(sig, 2 * n).expect("in range"),
                    _ => theta_nk(n, k),
                };
                e.polynomial == &factor * &h.widen(sig).expect("more odd variables")
            }
            _ => false,
        };
    }
    let Ok(data) = ck_data(&e.polynomial, k) else {
        return false;
    };
    let under = sig.hyperplane().expect("m >= 1");
    let (lower_sig, lower_target) = match head.kind {
        BranchKind::GeneralizedA3 => (sig, SpaceKind::Harmonic),
        BranchKind::TildeB5 | BranchKind::TildeB6 => (under, SpaceKind::Generalized),
        _ => (under, SpaceKind::Harmonic),
    };
    let Some(h) = find_lower(builder, lower_sig, l, lower_target, &tail) else {
        return false;
    };
    match head.kind {
        BranchKind::OrdinaryA1 | BranchKind::OrdinaryB3 | BranchKind::TildeB5 => {
            data.trace == rsquare_pow_mul(&h, (k - l) / 2)
                && data.normal_trace.is_zero()
                && data.laplacian.is_zero()
        }
        BranchKind::OrdinaryA2 | BranchKind::OrdinaryB4 | BranchKind::TildeB6 => {
            data.trace.is_zero()
                && data.normal_trace == rsquare_pow_mul(&h, (k - 1 - l) / 2)
                && data.laplacian.is_zero()
        }
        BranchKind::GeneralizedA3 => {
            let e = (2 * k as i64 + sig.superdimension() - 4) as usize;
            data.trace.is_zero()
                && data.normal_trace.is_zero()
                && data.laplacian == r_power_mul(&h, e)
                && laplacian(&h).is_zero()
        }
        _ => false,
    }
}
