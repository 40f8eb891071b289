//! The invariant operators `Δ`, `R²·`, `𝔼`, the CK kernels `Ξ_ℓ`, and
//! commutator checks for the hidden `sl(2)` and the `osp(m|2n)` action.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::superpoly::{monomial_basis, SuperPolynomial, SuperSignature};

/// Super Laplacian `Σ ∂²_{x_j} − 4 Σ ∂_{θ_{2j−1}} ∂_{θ_{2j}}`.
pub fn laplacian<S: Scalar>(p: &SuperPolynomial<S>) -> SuperPolynomial<S> {
    let sig = p.signature();
    let mut acc = SuperPolynomial::zero(sig);
    for j in 1..=sig.m() {
        let d = p
            .d_bosonic(j)
            .and_then(|q| q.d_bosonic(j))
            .expect("j in range");
        acc = &acc + &d;
    }
    let four = S::from_i64(4);
    for j in 1..=sig.n() {
        let d = p
            .d_fermionic(2 * j)
            .and_then(|q| q.d_fermionic(2 * j - 1))
            .expect("j in range");
        acc = &acc - &d.scale(&four);
    }
    acc
}

/// `R² = Σ x_j² − Σ θ_{2j−1} θ_{2j}`.
pub fn rsquare<S: Scalar>(sig: SuperSignature) -> SuperPolynomial<S> {
    let mut acc = SuperPolynomial::zero(sig);
    for j in 1..=sig.m() {
        let x = SuperPolynomial::x(sig, j).expect("j in range");
        acc = &acc + &(&x * &x);
    }
    for j in 1..=sig.n() {
        let a = SuperPolynomial::theta(sig, 2 * j - 1).expect("j in range");
        let b = SuperPolynomial::theta(sig, 2 * j).expect("j in range");
        acc = &acc - &(&a * &b);
    }
    acc
}

pub fn rsquare_mul<S: Scalar>(p: &SuperPolynomial<S>) -> SuperPolynomial<S> {
    &rsquare(p.signature()) * p
}

/// Multiplication by `R^{2j}`.
pub fn rsquare_pow_mul<S: Scalar>(p: &SuperPolynomial<S>, j: usize) -> SuperPolynomial<S> {
    if j == 0 || p.is_zero() {
        return p.clone();
    }
    &rsquare::<S>(p.signature()).pow(j) * p
}

/// Multiplication by `R^e` for an even exponent `e`.
pub fn r_power_mul<S: Scalar>(p: &SuperPolynomial<S>, e: usize) -> SuperPolynomial<S> {
    assert!(e.is_multiple_of(2), "R^{e} is not a polynomial");
    rsquare_pow_mul(p, e / 2)
}

/// Super Euler operator `Σ x_j ∂_{x_j} + Σ θ_j ∂_{θ_j}`.
pub fn euler<S: Scalar>(p: &SuperPolynomial<S>) -> SuperPolynomial<S> {
    let sig = p.signature();
    let mut acc = SuperPolynomial::zero(sig);
    for j in 1..=sig.m() {
        let x = SuperPolynomial::x(sig, j).expect("j in range");
        acc = &acc + &(&x * &p.d_bosonic(j).expect("j in range"));
    }
    for j in 1..=sig.odd_count() {
        let t = SuperPolynomial::theta(sig, j).expect("j in range");
        acc = &acc + &(&t * &p.d_fermionic(j).expect("j in range"));
    }
    acc
}

/// `Ξ_ℓ = Σ_j x_m^{2j+ℓ} / (2j+ℓ)! · (−Δ̲)^j`, taking a polynomial on the
/// hyperplane `R^{m−1|2n}` to `R^{m|2n}`. The series stops at the first
/// vanishing power of `Δ̲`, which always happens since `Δ̲` lowers degree.
pub fn xi<S: Scalar>(ell: usize, p: &SuperPolynomial<S>) -> SuperPolynomial<S> {
    let sig = p.signature().extended();
    let xm = SuperPolynomial::x(sig, sig.m()).expect("m >= 1");
    let mut acc = SuperPolynomial::zero(sig);
    let mut current = p.clone();
    let mut j = 0;
    while !current.is_zero() {
        let e = 2 * j + ell;
        let coeff = S::one() / S::factorial(e);
        acc = &acc + &(&xm.pow(e) * &current.embed()).scale(&coeff);
        current = -&laplacian(&current);
        j += 1;
    }
    acc
}

/// A linear operator on superpolynomials, applied functionally.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Operator {
    Laplacian,
    RsquareMul,
    Euler,
    /// `Ξ_ℓ`; maps `R^{m−1|2n}` to `R^{m|2n}`.
    Xi(usize),
    /// Composition `A_1 ∘ A_2 ∘ … ∘ A_r`; the last entry acts first.
    Chain(Vec<Operator>),
}

impl Operator {
    /// `Δ R² Δ`, whose kernel defines generalized harmonics.
    pub fn delta_r2_delta() -> Self {
        Operator::Chain(vec![
            Operator::Laplacian,
            Operator::RsquareMul,
            Operator::Laplacian,
        ])
    }

    /// `Δ R²`.
    pub fn delta_r2() -> Self {
        Operator::Chain(vec![Operator::Laplacian, Operator::RsquareMul])
    }

    pub fn degree_shift(&self) -> i64 {
        match self {
            Operator::Laplacian => -2,
            Operator::RsquareMul => 2,
            Operator::Euler => 0,
            Operator::Xi(l) => *l as i64,
            Operator::Chain(ops) => ops.iter().map(Operator::degree_shift).sum(),
        }
    }

    /// Signature of the output for an input on `sig`.
    pub fn output_signature(&self, sig: SuperSignature) -> SuperSignature {
        match self {
            Operator::Xi(_) => sig.extended(),
            Operator::Chain(ops) => ops.iter().rev().fold(sig, |s, op| op.output_signature(s)),
            _ => sig,
        }
    }

    pub fn apply<S: Scalar>(&self, p: &SuperPolynomial<S>) -> SuperPolynomial<S> {
        match self {
            Operator::Laplacian => laplacian(p),
            Operator::RsquareMul => rsquare_mul(p),
            Operator::Euler => euler(p),
            Operator::Xi(l) => xi(*l, p),
            Operator::Chain(ops) => ops.iter().rev().fold(p.clone(), |q, op| op.apply(&q)),
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operator::Laplacian => f.write_str("laplacian"),
            Operator::RsquareMul => f.write_str("rsquare_mul"),
            Operator::Euler => f.write_str("euler"),
            Operator::Xi(l) => write!(f, "xi({l})"),
            Operator::Chain(ops) => {
                for (i, op) in ops.iter().enumerate() {
                    if i > 0 {
                        f.write_str("∘")?;
                    }
                    write!(f, "{op}")?;
                }
                Ok(())
            }
        }
    }
}

/// `[A, B] p = A(B p) − B(A p)`; every named operator is even, so the
/// graded commutator is the plain one.
pub fn commutator<S: Scalar>(
    a: &Operator,
    b: &Operator,
    p: &SuperPolynomial<S>,
) -> SuperPolynomial<S> {
    &a.apply(&b.apply(p)) - &b.apply(&a.apply(p))
}

/// The three defining relations of the `sl(2)` spanned by `Δ/2`, `R²/2`
/// and `𝔼 + M/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sl2Relation {
    /// `[Δ/2, R²/2] = 𝔼 + M/2`
    LaplacianRsquare,
    /// `[Δ/2, 𝔼 + M/2] = Δ`
    LaplacianEuler,
    /// `[R²/2, 𝔼 + M/2] = −R²`
    RsquareEuler,
}

impl Sl2Relation {
    pub const ALL: [Sl2Relation; 3] = [
        Sl2Relation::LaplacianRsquare,
        Sl2Relation::LaplacianEuler,
        Sl2Relation::RsquareEuler,
    ];

    /// Left and right hand sides of the relation applied to `p`.
    pub fn sides<S: Scalar>(
        &self,
        p: &SuperPolynomial<S>,
    ) -> (SuperPolynomial<S>, SuperPolynomial<S>) {
        let half = S::from_ratio(1, 2);
        let quarter = S::from_ratio(1, 4);
        let m_half = S::from_ratio(p.signature().superdimension(), 2);
        let h = |q: &SuperPolynomial<S>| &euler(q) + &q.scale(&m_half);
        match self {
            Sl2Relation::LaplacianRsquare => {
                let lhs =
                    commutator(&Operator::Laplacian, &Operator::RsquareMul, p).scale(&quarter);
                (lhs, h(p))
            }
            Sl2Relation::LaplacianEuler => {
                let lhs = (&laplacian(&h(p)) - &h(&laplacian(p))).scale(&half);
                (lhs, laplacian(p))
            }
            Sl2Relation::RsquareEuler => {
                let lhs = (&rsquare_mul(&h(p)) - &h(&rsquare_mul(p))).scale(&half);
                (lhs, -&rsquare_mul(p))
            }
        }
    }
}

impl fmt::Display for Sl2Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sl2Relation::LaplacianRsquare => "[Δ/2, R²/2] = 𝔼 + M/2",
            Sl2Relation::LaplacianEuler => "[Δ/2, 𝔼 + M/2] = Δ",
            Sl2Relation::RsquareEuler => "[R²/2, 𝔼 + M/2] = −R²",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommutatorVerdict {
    pub holds: bool,
    /// First basis monomial of `P_k` on which the identity fails.
    pub witness: Option<String>,
    pub checked: usize,
}

/// Check one `sl(2)` relation on every monomial of `P_k`.
pub fn check_sl2<S: Scalar>(sig: SuperSignature, k: usize, rel: Sl2Relation) -> CommutatorVerdict {
    let basis = monomial_basis(&sig, k);
    let checked = basis.len();
    for mono in basis {
        let p = SuperPolynomial::<S>::monomial(sig, mono.clone());
        let (lhs, rhs) = rel.sides(&p);
        if lhs != rhs {
            return CommutatorVerdict {
                holds: false,
                witness: Some(mono.to_string()),
                checked,
            };
        }
    }
    CommutatorVerdict {
        holds: true,
        witness: None,
        checked,
    }
}

/// A superderivation `L_{ab} = X♭_a ∂_b − (−1)^{|a||b|} X♭_b ∂_a` of the
/// polynomial ring, where `X♭_a = Σ_c g_{ac} X_c` lowers the index with the
/// block metric `E_m ⊕ J_{2n}`. Indices are one-based over
/// `(x_1..x_m, θ_1..θ_2n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OspGenerator<S: Scalar> {
    sig: SuperSignature,
    a: usize,
    b: usize,
    /// `(c, i, j)` stands for `c · X_i ∂_j`, zero-based coordinates.
    terms: Vec<(S, usize, usize)>,
}

impl<S: Scalar> OspGenerator<S> {
    pub fn new(sig: SuperSignature, a: usize, b: usize) -> Result<Self> {
        let dim = sig.m() + sig.odd_count();
        for idx in [a, b] {
            if idx == 0 || idx > dim {
                return Err(Error::IndexOutOfRange {
                    kind: "coordinate",
                    index: idx,
                    max: dim,
                });
            }
        }
        let (a0, b0) = (a - 1, b - 1);
        let parity = |i: usize| usize::from(i >= sig.m());
        let sign = if parity(a0) * parity(b0) == 1 {
            S::one()
        } else {
            -S::one()
        };
        let mut terms = Vec::new();
        for (c, i) in lowered::<S>(sig, a0) {
            terms.push((c, i, b0));
        }
        for (c, i) in lowered::<S>(sig, b0) {
            terms.push((c * sign.clone(), i, a0));
        }
        Ok(OspGenerator { sig, a, b, terms })
    }

    pub fn indices(&self) -> (usize, usize) {
        (self.a, self.b)
    }

    /// `0` for even, `1` for odd derivations.
    pub fn parity(&self) -> usize {
        let m = self.sig.m();
        (usize::from(self.a > m) + usize::from(self.b > m)) % 2
    }

    pub fn apply(&self, p: &SuperPolynomial<S>) -> SuperPolynomial<S> {
        let mut acc = SuperPolynomial::zero(self.sig);
        for (c, i, j) in &self.terms {
            let d = p.d_coordinate(*j);
            if d.is_zero() {
                continue;
            }
            let x = coordinate::<S>(self.sig, *i);
            acc = &acc + &(&x * &d).scale(c);
        }
        acc
    }
}

/// `X♭_a` as `(coefficient, zero-based coordinate)` pairs.
fn lowered<S: Scalar>(sig: SuperSignature, a: usize) -> Vec<(S, usize)> {
    let m = sig.m();
    if a < m {
        return vec![(S::one(), a)];
    }
    // J_{2n} pairs (2j−1, 2j) with entries −1/2 above and +1/2 below the diagonal
    let local = a - m;
    if local.is_multiple_of(2) {
        vec![(S::from_ratio(-1, 2), a + 1)]
    } else {
        vec![(S::from_ratio(1, 2), a - 1)]
    }
}

fn coordinate<S: Scalar>(sig: SuperSignature, i: usize) -> SuperPolynomial<S> {
    if i < sig.m() {
        SuperPolynomial::x(sig, i + 1).expect("index in range")
    } else {
        SuperPolynomial::theta(sig, i - sig.m() + 1).expect("index in range")
    }
}

/// All generators `L_{ab}` with `a ≤ b`.
pub fn osp_generators<S: Scalar>(sig: SuperSignature) -> Vec<OspGenerator<S>> {
    let dim = sig.m() + sig.odd_count();
    let mut out = Vec::new();
    for a in 1..=dim {
        for b in a..=dim {
            out.push(OspGenerator::new(sig, a, b).expect("indices in range"));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvarianceVerdict {
    pub holds: bool,
    /// `(a, b, operator, monomial)` of the first failure.
    pub witness: Option<(usize, usize, String, String)>,
    pub generators: usize,
}

/// Every `L_{ab}` graded-commutes with `Δ`, `R²·` and `𝔼` on `P_k`.
pub fn invariance_check<S: Scalar>(sig: SuperSignature, k: usize) -> InvarianceVerdict {
    let gens = osp_generators::<S>(sig);
    let basis = monomial_basis(&sig, k);
    let ops = [Operator::Laplacian, Operator::RsquareMul, Operator::Euler];
    for g in &gens {
        for mono in &basis {
            let p = SuperPolynomial::<S>::monomial(sig, mono.clone());
            for op in &ops {
                let lhs = g.apply(&op.apply(&p));
                let rhs = op.apply(&g.apply(&p));
                if lhs != rhs {
                    let (a, b) = g.indices();
                    return InvarianceVerdict {
                        holds: false,
                        witness: Some((a, b, op.to_string(), mono.to_string())),
                        generators: gens.len(),
                    };
                }
            }
        }
    }
    InvarianceVerdict {
        holds: true,
        witness: None,
        generators: gens.len(),
    }
}
