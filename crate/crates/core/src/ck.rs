//! Cauchy-Kovalevskaya extension: a degree-`k` polynomial is determined by
//! its Laplacian and its two traces on the hyperplane `x_m = 0`.
//!
//! [`ck_extend`] evaluates the closed form `Σ_ℓ Ξ_ℓ p_{k−ℓ}`;
//! [`ck_extend_recursive`] solves the coefficient recursion in the
//! `x_m^j / j!` expansion. The two are independent routes and must agree.

use crate::error::{Error, Result};
use crate::operators::{laplacian, xi};
use crate::scalar::Scalar;
use crate::superpoly::{SuperPolynomial, SuperSignature};

/// Initial data `(p_k, p_{k−1}, P_{k−2})`: the traces of `Q` and `∂_{x_m} Q`
/// on `R^{m−1|2n}` and `Δ Q` on `R^{m|2n}`. Components of negative degree
/// are the zero polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CkData<S: Scalar> {
    pub degree: usize,
    pub trace: SuperPolynomial<S>,
    pub normal_trace: SuperPolynomial<S>,
    pub laplacian: SuperPolynomial<S>,
}

impl<S: Scalar> CkData<S> {
    /// Validates signatures and degrees.
    pub fn new(
        sig: SuperSignature,
        degree: usize,
        trace: SuperPolynomial<S>,
        normal_trace: SuperPolynomial<S>,
        laplacian: SuperPolynomial<S>,
    ) -> Result<Self> {
        let under = sig.hyperplane()?;
        let checks = [
            (&trace, under, Some(degree)),
            (&normal_trace, under, degree.checked_sub(1)),
            (&laplacian, sig, degree.checked_sub(2)),
        ];
        for (p, expected_sig, deg) in checks {
            if p.signature() != expected_sig {
                return Err(Error::SignatureMismatch {
                    left: p.signature(),
                    right: expected_sig,
                });
            }
            match deg {
                Some(d) if !p.is_homogeneous_of(d) => return Err(Error::NotHomogeneous(d)),
                None if !p.is_zero() => {
                    return Err(Error::Precondition(format!(
                        "degree-{degree} data needs zero components below degree 0"
                    )))
                }
                _ => {}
            }
        }
        Ok(CkData {
            degree,
            trace,
            normal_trace,
            laplacian,
        })
    }

    pub fn zero(sig: SuperSignature, degree: usize) -> Result<Self> {
        let under = sig.hyperplane()?;
        Ok(CkData {
            degree,
            trace: SuperPolynomial::zero(under),
            normal_trace: SuperPolynomial::zero(under),
            laplacian: SuperPolynomial::zero(sig),
        })
    }

    pub fn signature(&self) -> SuperSignature {
        self.laplacian.signature()
    }

    /// `p_{k−2−ℓ} = (∂^ℓ_{x_m} P_{k−2})|_{x_m=0}` for `ℓ = 0..k−2`.
    fn laplacian_traces(&self) -> Vec<SuperPolynomial<S>> {
        let sig = self.signature();
        let mut out = Vec::new();
        let mut d = self.laplacian.clone();
        for _ in 0..self.degree.saturating_sub(1) {
            out.push(d.restrict_hyperplane().expect("m >= 1"));
            d = d.d_bosonic(sig.m()).expect("m >= 1");
        }
        out
    }
}

/// The unique `Q ∈ P_k` with `ΔQ = P_{k−2}`, `Q|_{x_m=0} = p_k`,
/// `∂_{x_m}Q|_{x_m=0} = p_{k−1}`.
pub fn ck_extend<S: Scalar>(data: &CkData<S>) -> SuperPolynomial<S> {
    let mut acc = xi(0, &data.trace);
    acc = &acc + &xi(1, &data.normal_trace);
    for (i, p) in data.laplacian_traces().iter().enumerate() {
        if !p.is_zero() {
            acc = &acc + &xi(i + 2, p);
        }
    }
    acc
}

/// Same result via `q_k = p_k`, `q_{k−1} = p_{k−1}`,
/// `q_{k−2−j} = −Δ̲ q_{k−j} + p_{k−2−j}` and `Q = Σ_j x_m^j/j! q_{k−j}`.
pub fn ck_extend_recursive<S: Scalar>(data: &CkData<S>) -> SuperPolynomial<S> {
    let sig = data.signature();
    let k = data.degree;
    let sources = data.laplacian_traces();
    let mut q = Vec::with_capacity(k + 1);
    q.push(data.trace.clone());
    if k >= 1 {
        q.push(data.normal_trace.clone());
    }
    for j in 0..k.saturating_sub(1) {
        let next = &sources[j] - &laplacian(&q[j]);
        q.push(next);
    }
    SuperPolynomial::from_xm_coefficients(sig, &q).expect("m >= 1")
}

/// `(Q|_{x_m=0}, ∂_{x_m}Q|_{x_m=0}, ΔQ)`.
pub fn ck_data<S: Scalar>(q: &SuperPolynomial<S>, k: usize) -> Result<CkData<S>> {
    let sig = q.signature();
    if sig.m() == 0 {
        return Err(Error::NoBosonicVariable);
    }
    if !q.is_homogeneous_of(k) {
        return Err(Error::NotHomogeneous(k));
    }
    Ok(CkData {
        degree: k,
        trace: q.restrict_hyperplane()?,
        normal_trace: q.d_bosonic(sig.m())?.restrict_hyperplane()?,
        laplacian: laplacian(q),
    })
}
