//! Sparse exact polynomials on the superspace `R^{m|2n}`.
//!
//! The ring is `R[x_1..x_m] ⊗ Λ(θ_1..θ_2n)`. A monomial stores the bosonic
//! exponent vector and the set of odd variables as a bitmask (bit `j-1` for
//! `θ_j`). The canonical word of a monomial lists the odd factors in
//! ascending index order; every sign produced by reordering is folded into
//! the coefficient at multiplication time.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// The pair `(m, n)`: `m` commuting and `2n` anticommuting coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SuperSignature {
    m: usize,
    n: usize,
}

impl SuperSignature {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if 2 * n > 64 {
            return Err(Error::TooManyOddVariables(2 * n));
        }
        Ok(SuperSignature { m, n })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of anticommuting variables, `2n`.
    pub fn odd_count(&self) -> usize {
        2 * self.n
    }

    /// The superdimension `M = m - 2n`.
    pub fn superdimension(&self) -> i64 {
        self.m as i64 - 2 * self.n as i64
    }

    /// Signature of the hyperplane `x_m = 0`, i.e. `(m-1, n)`.
    pub fn hyperplane(&self) -> Result<Self> {
        if self.m == 0 {
            return Err(Error::NoBosonicVariable);
        }
        Ok(SuperSignature {
            m: self.m - 1,
            n: self.n,
        })
    }

    /// Signature `(m+1, n)` into which this one embeds as `x_{m+1} = 0`.
    pub fn extended(&self) -> Self {
        SuperSignature {
            m: self.m + 1,
            n: self.n,
        }
    }
}

impl fmt::Display for SuperSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R^{{{}|{}}}", self.m, 2 * self.n)
    }
}

/// `x^α θ_S` with `S` kept as an ascending set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SuperMonomial {
    exps: Vec<u32>,
    odd: u64,
}

impl SuperMonomial {
    pub fn new(exps: Vec<u32>, odd: u64) -> Self {
        SuperMonomial { exps, odd }
    }

    pub fn one(sig: &SuperSignature) -> Self {
        SuperMonomial {
            exps: vec![0; sig.m],
            odd: 0,
        }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    /// Bitmask of the odd variables present (bit `j-1` is `θ_j`).
    pub fn odd_mask(&self) -> u64 {
        self.odd
    }

    pub fn odd_degree(&self) -> usize {
        self.odd.count_ones() as usize
    }

    pub fn degree(&self) -> usize {
        self.exps.iter().map(|&e| e as usize).sum::<usize>() + self.odd_degree()
    }

    /// Fermionic parity of the monomial.
    pub fn parity(&self) -> usize {
        self.odd_degree() % 2
    }

    pub fn conforms_to(&self, sig: &SuperSignature) -> bool {
        self.exps.len() == sig.m && (sig.odd_count() == 64 || self.odd >> sig.odd_count() == 0)
    }

    /// Product of two monomials with its sign, or `None` when an odd
    /// variable repeats.
    pub fn mul(&self, other: &SuperMonomial) -> Option<(bool, SuperMonomial)> {
        if self.odd & other.odd != 0 {
            return None;
        }
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a + b)
            .collect();
        let negative = merge_parity(self.odd, other.odd) == 1;
        Some((
            negative,
            SuperMonomial {
                exps,
                odd: self.odd | other.odd,
            },
        ))
    }
}

impl Ord for SuperMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.cmp(&other.exps))
            .then_with(|| self.odd.cmp(&other.odd))
    }
}

impl PartialOrd for SuperMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SuperMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            Ok(())
        };
        for (j, &e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => {
                    sep(f)?;
                    write!(f, "x{}", j + 1)?;
                }
                _ => {
                    sep(f)?;
                    write!(f, "x{}^{}", j + 1, e)?;
                }
            }
        }
        for j in odd_indices(self.odd) {
            sep(f)?;
            write!(f, "t{}", j)?;
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Parity of the permutation that sorts the word `left ++ right` of two
/// disjoint ascending odd sets: the number of pairs `i ∈ left`, `j ∈ right`
/// with `i > j`, mod 2.
fn merge_parity(left: u64, right: u64) -> u32 {
    let mut inversions = 0u32;
    let mut rest = right;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        let above = if j >= 63 { 0 } else { left >> (j + 1) };
        inversions += above.count_ones();
    }
    inversions & 1
}

/// One-based indices of the odd variables in a mask, ascending.
pub fn odd_indices(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |b| mask >> b & 1 == 1).map(|b| b + 1)
}

/// A finite sum of monomials with nonzero exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperPolynomial<S: Scalar> {
    sig: SuperSignature,
    terms: BTreeMap<SuperMonomial, S>,
}

impl<S: Scalar> SuperPolynomial<S> {
    pub fn zero(sig: SuperSignature) -> Self {
        SuperPolynomial {
            sig,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(sig: SuperSignature) -> Self {
        Self::constant(sig, S::one())
    }

    pub fn constant(sig: SuperSignature, c: S) -> Self {
        Self::term(sig, SuperMonomial::one(&sig), c)
    }

    /// `c · mono`. Panics if `mono` does not belong to `sig`.
    pub fn term(sig: SuperSignature, mono: SuperMonomial, c: S) -> Self {
        assert!(mono.conforms_to(&sig), "monomial {mono} outside {sig}");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mono, c);
        }
        SuperPolynomial { sig, terms }
    }

    pub fn monomial(sig: SuperSignature, mono: SuperMonomial) -> Self {
        Self::term(sig, mono, S::one())
    }

    /// The commuting coordinate `x_j`, `1 ≤ j ≤ m`.
    pub fn x(sig: SuperSignature, j: usize) -> Result<Self> {
        check_index("bosonic", j, sig.m)?;
        let mut exps = vec![0; sig.m];
        exps[j - 1] = 1;
        Ok(Self::monomial(sig, SuperMonomial::new(exps, 0)))
    }

    /// The anticommuting coordinate `θ_j`, `1 ≤ j ≤ 2n`.
    pub fn theta(sig: SuperSignature, j: usize) -> Result<Self> {
        check_index("fermionic", j, sig.odd_count())?;
        Ok(Self::monomial(
            sig,
            SuperMonomial::new(vec![0; sig.m], 1 << (j - 1)),
        ))
    }

    pub fn signature(&self) -> SuperSignature {
        self.sig
    }

    pub fn terms(&self) -> &BTreeMap<SuperMonomial, S> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, mono: &SuperMonomial) -> S {
        self.terms.get(mono).cloned().unwrap_or_else(S::zero)
    }

    /// The degree when every monomial shares it; `None` for zero or mixed.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|m| m.degree());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// Zero counts as homogeneous of every degree.
    pub fn is_homogeneous_of(&self, k: usize) -> bool {
        self.terms.keys().all(|m| m.degree() == k)
    }

    /// `Some(0)` or `Some(1)` when all terms share a fermionic parity.
    pub fn parity(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|m| m.parity());
        match it.next() {
            None => Some(0),
            Some(p) => it.all(|q| q == p).then_some(p),
        }
    }

    fn same_signature(&self, other: &Self) -> Result<()> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch {
                left: self.sig,
                right: other.sig,
            });
        }
        Ok(())
    }

    fn insert(terms: &mut BTreeMap<SuperMonomial, S>, mono: SuperMonomial, c: S) {
        use std::collections::btree_map::Entry;
        match terms.entry(mono) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_signature(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            Self::insert(&mut terms, m.clone(), c.clone());
        }
        Ok(SuperPolynomial {
            sig: self.sig,
            terms,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_signature(other)?;
        let mut terms = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some((neg, prod)) = a.mul(b) {
                    let c = ca.clone() * cb.clone();
                    Self::insert(&mut terms, prod, if neg { -c } else { c });
                }
            }
        }
        Ok(SuperPolynomial {
            sig: self.sig,
            terms,
        })
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.sig);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, v)| (m.clone(), v.clone() * c.clone()))
            .collect();
        SuperPolynomial {
            sig: self.sig,
            terms,
        }
    }

    /// `self^e` for a non-negative power.
    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(self.sig), |acc, _| &acc * self)
    }

    /// `∂/∂x_j`.
    pub fn d_bosonic(&self, j: usize) -> Result<Self> {
        check_index("bosonic", j, self.sig.m)?;
        let mut terms = BTreeMap::new();
        for (mono, c) in &self.terms {
            let e = mono.exps[j - 1];
            if e == 0 {
                continue;
            }
            let mut exps = mono.exps.clone();
            exps[j - 1] -= 1;
            Self::insert(
                &mut terms,
                SuperMonomial {
                    exps,
                    odd: mono.odd,
                },
                c.clone() * S::from_i64(e as i64),
            );
        }
        Ok(SuperPolynomial {
            sig: self.sig,
            terms,
        })
    }

    /// Left derivative `∂/∂θ_j`: move `θ_j` to the front of the canonical
    /// word, then strip it.
    pub fn d_fermionic(&self, j: usize) -> Result<Self> {
        check_index("fermionic", j, self.sig.odd_count())?;
        let bit = 1u64 << (j - 1);
        let mut terms = BTreeMap::new();
        for (mono, c) in &self.terms {
            if mono.odd & bit == 0 {
                continue;
            }
            let before = (mono.odd & (bit - 1)).count_ones();
            let c = if before % 2 == 1 {
                -c.clone()
            } else {
                c.clone()
            };
            Self::insert(
                &mut terms,
                SuperMonomial {
                    exps: mono.exps.clone(),
                    odd: mono.odd & !bit,
                },
                c,
            );
        }
        Ok(SuperPolynomial {
            sig: self.sig,
            terms,
        })
    }

    /// Derivative in the global coordinate `X_i` (`x_1..x_m, θ_1..θ_2n`),
    /// zero-based.
    pub(crate) fn d_coordinate(&self, i: usize) -> Self {
        if i < self.sig.m {
            self.d_bosonic(i + 1).expect("index checked")
        } else {
            self.d_fermionic(i - self.sig.m + 1).expect("index checked")
        }
    }

    /// `(·)|_{x_m = 0}` as a polynomial on `R^{m-1|2n}`.
    pub fn restrict_hyperplane(&self) -> Result<Self> {
        let sig = self.sig.hyperplane()?;
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exps[sig.m] == 0)
            .map(|(m, c)| {
                let mut exps = m.exps.clone();
                exps.pop();
                (SuperMonomial { exps, odd: m.odd }, c.clone())
            })
            .collect();
        Ok(SuperPolynomial { sig, terms })
    }

    /// The same polynomial viewed on `R^{m+1|2n}` (independent of `x_{m+1}`).
    pub fn embed(&self) -> Self {
        let sig = self.sig.extended();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut exps = m.exps.clone();
                exps.push(0);
                (SuperMonomial { exps, odd: m.odd }, c.clone())
            })
            .collect();
        SuperPolynomial { sig, terms }
    }

    /// Reinterpret in a signature with the same `m` and at least as many odd
    /// variables.
    pub fn widen(&self, sig: SuperSignature) -> Result<Self> {
        if sig.m != self.sig.m || sig.n < self.sig.n {
            return Err(Error::SignatureMismatch {
                left: self.sig,
                right: sig,
            });
        }
        Ok(SuperPolynomial {
            sig,
            terms: self.terms.clone(),
        })
    }

    /// The expansion `p = Σ_j x_m^j / j! · q_{k-j}`; entry `j` of the result
    /// is `q_{k-j}` on `R^{m-1|2n}`.
    pub fn xm_coefficients(&self, k: usize) -> Result<Vec<Self>> {
        let under = self.sig.hyperplane()?;
        if !self.is_homogeneous_of(k) {
            return Err(Error::NotHomogeneous(k));
        }
        let mut out = vec![BTreeMap::new(); k + 1];
        for (mono, c) in &self.terms {
            let mut exps = mono.exps.clone();
            let j = exps.pop().expect("m >= 1") as usize;
            out[j].insert(
                SuperMonomial {
                    exps,
                    odd: mono.odd,
                },
                c.clone() * S::factorial(j),
            );
        }
        Ok(out
            .into_iter()
            .map(|terms| SuperPolynomial { sig: under, terms })
            .collect())
    }

    /// Inverse of [`Self::xm_coefficients`].
    pub fn from_xm_coefficients(sig: SuperSignature, coeffs: &[Self]) -> Result<Self> {
        let under = sig.hyperplane()?;
        let xm = Self::x(sig, sig.m)?;
        let mut acc = Self::zero(sig);
        for (j, q) in coeffs.iter().enumerate() {
            if q.sig != under {
                return Err(Error::SignatureMismatch {
                    left: q.sig,
                    right: under,
                });
            }
            if q.is_zero() {
                continue;
            }
            let lifted = &xm.pow(j) * &q.embed();
            acc = &acc + &lifted.scale(&(S::one() / S::factorial(j)));
        }
        Ok(acc)
    }

    /// Parse the text form, e.g. `3/2*x1^2 x3 t1 t4 - t2 t3`.
    pub fn parse(sig: SuperSignature, text: &str) -> Result<Self> {
        Parser {
            sig,
            src: text.as_bytes(),
            pos: 0,
        }
        .poly()
    }
}

fn check_index(kind: &'static str, index: usize, max: usize) -> Result<()> {
    if index == 0 || index > max {
        return Err(Error::IndexOutOfRange { kind, index, max });
    }
    Ok(())
}

impl<S: Scalar> fmt::Display for SuperPolynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (mono, c)) in self.terms.iter().enumerate() {
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if mono.degree() == 0 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{a}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl<S: Scalar> Neg for &SuperPolynomial<S> {
    type Output = SuperPolynomial<S>;

    fn neg(self) -> SuperPolynomial<S> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), -c.clone()))
            .collect();
        SuperPolynomial {
            sig: self.sig,
            terms,
        }
    }
}

/// Panics on signature mismatch; use [`SuperPolynomial::checked_add`] for
/// untrusted operands.
impl<S: Scalar> Add for &SuperPolynomial<S> {
    type Output = SuperPolynomial<S>;

    fn add(self, rhs: Self) -> SuperPolynomial<S> {
        self.checked_add(rhs).expect("signature mismatch in +")
    }
}

impl<S: Scalar> Sub for &SuperPolynomial<S> {
    type Output = SuperPolynomial<S>;

    fn sub(self, rhs: Self) -> SuperPolynomial<S> {
        self.checked_sub(rhs).expect("signature mismatch in -")
    }
}

impl<S: Scalar> Mul for &SuperPolynomial<S> {
    type Output = SuperPolynomial<S>;

    fn mul(self, rhs: Self) -> SuperPolynomial<S> {
        self.checked_mul(rhs).expect("signature mismatch in *")
    }
}

/// All degree-`k` monomials of `sig` in canonical order.
pub fn monomial_basis(sig: &SuperSignature, k: usize) -> Vec<SuperMonomial> {
    let odd_count = sig.odd_count();
    let mut out = Vec::new();
    for f in 0..=k.min(odd_count) {
        let masks = subsets_of_size(odd_count, f);
        for exps in compositions(k - f, sig.m) {
            for &mask in &masks {
                out.push(SuperMonomial {
                    exps: exps.clone(),
                    odd: mask,
                });
            }
        }
    }
    out.sort();
    out
}

/// Number of degree-`k` monomials, by the binomial sum.
pub fn monomial_count(sig: &SuperSignature, k: usize) -> usize {
    let odd_count = sig.odd_count();
    (0..=k.min(odd_count))
        .map(|f| {
            let bosonic = if sig.m == 0 {
                usize::from(k == f)
            } else {
                binomial(k - f + sig.m - 1, sig.m - 1)
            };
            binomial(odd_count, f) * bosonic
        })
        .sum()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

fn subsets_of_size(universe: usize, size: usize) -> Vec<u64> {
    fn rec(start: usize, universe: usize, left: usize, mask: u64, out: &mut Vec<u64>) {
        if left == 0 {
            out.push(mask);
            return;
        }
        for b in start..universe {
            rec(b + 1, universe, left - 1, mask | 1 << b, out);
        }
    }
    let mut out = Vec::new();
    rec(0, universe, size, 0, &mut out);
    out
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first as u32);
            out.push(rest);
        }
    }
    out
}

/// Ordered monomial basis of `P_k` with reverse lookup.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    sig: SuperSignature,
    degree: usize,
    monomials: Vec<SuperMonomial>,
    index: HashMap<SuperMonomial, usize>,
}

impl MonomialBasis {
    pub fn new(sig: SuperSignature, degree: usize) -> Self {
        let monomials = monomial_basis(&sig, degree);
        let index = monomials
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        MonomialBasis {
            sig,
            degree,
            monomials,
            index,
        }
    }

    pub fn signature(&self) -> SuperSignature {
        self.sig
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[SuperMonomial] {
        &self.monomials
    }

    pub fn index_of(&self, mono: &SuperMonomial) -> Option<usize> {
        self.index.get(mono).copied()
    }

    /// Coordinates of a degree-`k` polynomial, sorted by position.
    pub fn coordinates<S: Scalar>(&self, p: &SuperPolynomial<S>) -> Result<Vec<(usize, S)>> {
        if p.sig != self.sig {
            return Err(Error::SignatureMismatch {
                left: p.sig,
                right: self.sig,
            });
        }
        let mut v = p
            .terms
            .iter()
            .map(|(m, c)| {
                self.index_of(m)
                    .map(|i| (i, c.clone()))
                    .ok_or(Error::NotHomogeneous(self.degree))
            })
            .collect::<Result<Vec<_>>>()?;
        v.sort_by_key(|(i, _)| *i);
        Ok(v)
    }

    pub fn polynomial<S: Scalar>(&self, coords: &[(usize, S)]) -> SuperPolynomial<S> {
        let terms = coords
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.monomials[*i].clone(), c.clone()))
            .collect();
        SuperPolynomial {
            sig: self.sig,
            terms,
        }
    }
}

struct Parser<'a> {
    sig: SuperSignature,
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn int(&mut self) -> Result<&'a str> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits"))
    }

    fn small_int(&mut self) -> Result<usize> {
        let s = self.int()?;
        match s.parse() {
            Ok(v) => Ok(v),
            Err(_) => self.err(format!("integer {s} too large")),
        }
    }

    fn poly<S: Scalar>(mut self) -> Result<SuperPolynomial<S>> {
        let mut acc = SuperPolynomial::zero(self.sig);
        let mut negative = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            Some(_) => false,
            None => return self.err("empty polynomial"),
        };
        loop {
            let t = self.term::<S>()?;
            acc = &acc + &if negative { -&t } else { t };
            match self.peek() {
                None => return Ok(acc),
                Some(b'+') => negative = false,
                Some(b'-') => negative = true,
                Some(c) => return self.err(format!("unexpected '{}'", c as char)),
            }
            self.pos += 1;
        }
    }

    fn term<S: Scalar>(&mut self) -> Result<SuperPolynomial<S>> {
        let mut coef = S::one();
        let mut need_factor = false;
        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            let num = self.int()?;
            let mut text = num.to_string();
            if self.src.get(self.pos) == Some(&b'/') {
                self.pos += 1;
                let den = self.int()?;
                if den.bytes().all(|b| b == b'0') {
                    return self.err("zero denominator");
                }
                text = format!("{num}/{den}");
            }
            coef = match text.parse::<S>() {
                Ok(c) => c,
                Err(_) => return self.err(format!("bad rational {text}")),
            };
            if self.peek() == Some(b'*') {
                self.pos += 1;
                need_factor = true;
            }
        } else {
            need_factor = true;
        }
        let mut acc = SuperPolynomial::constant(self.sig, coef);
        let mut factors = 0;
        while let Some(c @ (b'x' | b't')) = self.peek() {
            self.pos += 1;
            let j = self.small_int()?;
            let f = if c == b'x' {
                let mut v = SuperPolynomial::x(self.sig, j)?;
                if self.src.get(self.pos) == Some(&b'^') {
                    self.pos += 1;
                    let e = self.small_int()?;
                    v = v.pow(e);
                }
                v
            } else {
                SuperPolynomial::theta(self.sig, j)?
            };
            acc = &acc * &f;
            factors += 1;
        }
        if need_factor && factors == 0 {
            return self.err("expected factor");
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type P = SuperPolynomial<BigRational>;

    fn sig(m: usize, n: usize) -> SuperSignature {
        SuperSignature::new(m, n).unwrap()
    }

    fn p(s: SuperSignature, t: &str) -> P {
        P::parse(s, t).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    #[test]
    fn test_superdimension() {
        assert_eq!(sig(2, 3).superdimension(), -4);
        assert_eq!(sig(3, 0).superdimension(), 3);
        assert!(SuperSignature::new(0, 33).is_err());
    }

    #[test]
    fn test_theta_squares_to_zero() {
        let s = sig(0, 1);
        let t1 = P::theta(s, 1).unwrap();
        assert!((&t1 * &t1).is_zero());
    }

    #[test]
    fn test_anticommutation() {
        let s = sig(0, 1);
        let t1 = P::theta(s, 1).unwrap();
        let t2 = P::theta(s, 2).unwrap();
        assert_eq!(&t2 * &t1, -&(&t1 * &t2));
        assert_eq!((&t2 * &t1).to_string(), "-t1 t2");
    }

    #[test]
    fn test_square_of_mixed() {
        let s = sig(1, 1);
        let a = p(s, "x1 + t1 t2");
        assert_eq!(&a * &a, p(s, "x1^2 + 2*x1 t1 t2"));
    }

    #[test]
    fn test_add_scale() {
        let s = sig(2, 1);
        let t = p(s, "t1 t2");
        assert!((&t + &t.scale(&q(-1, 1))).is_zero());
        assert_eq!(p(s, "2*x1").scale(&q(1, 2)), p(s, "x1"));
        assert_eq!(&p(s, "x1") + &p(s, "x2"), p(s, "x1 + x2"));
    }

    #[test]
    fn test_signature_mismatch() {
        let a = P::one(sig(1, 0));
        let b = P::one(sig(0, 1));
        assert!(matches!(
            a.checked_add(&b),
            Err(Error::SignatureMismatch { .. })
        ));
        assert!(a.checked_mul(&b).is_err());
    }

    #[test]
    fn test_d_bosonic() {
        let s = sig(2, 1);
        assert_eq!(p(s, "x1^3").d_bosonic(1).unwrap(), p(s, "3*x1^2"));
        assert!(p(s, "t1").d_bosonic(1).unwrap().is_zero());
        assert_eq!(p(s, "x1 x2 t1").d_bosonic(2).unwrap(), p(s, "x1 t1"));
        assert!(p(s, "x1").d_bosonic(3).is_err());
        assert!(p(s, "x1").d_bosonic(0).is_err());
    }

    #[test]
    fn test_d_fermionic() {
        let s = sig(1, 1);
        assert_eq!(p(s, "t1 t2").d_fermionic(1).unwrap(), p(s, "t2"));
        assert_eq!(p(s, "t1 t2").d_fermionic(2).unwrap(), p(s, "-t1"));
        assert!(p(s, "x1").d_fermionic(1).unwrap().is_zero());
        assert!(p(s, "x1").d_fermionic(3).is_err());
    }

    #[test]
    fn test_monomial_basis_examples() {
        let b = monomial_basis(&sig(0, 1), 1);
        assert_eq!(b.len(), 2);
        assert_eq!(b[0].to_string(), "t1");
        assert_eq!(b[1].to_string(), "t2");
        assert_eq!(monomial_basis(&sig(2, 3), 2).len(), 30);
        assert!(monomial_basis(&sig(0, 1), 3).is_empty());
        assert_eq!(monomial_basis(&sig(0, 0), 0).len(), 1);
        assert!(monomial_basis(&sig(0, 0), 1).is_empty());
    }

    #[test]
    fn test_monomial_count_matches_enumeration() {
        for m in 0..4 {
            for n in 0..4 {
                for k in 0..7 {
                    let s = sig(m, n);
                    assert_eq!(
                        monomial_basis(&s, k).len(),
                        monomial_count(&s, k),
                        "{s} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn test_restrict_hyperplane() {
        let s = sig(2, 1);
        let u = sig(1, 1);
        assert_eq!(p(s, "x2^2 + x1").restrict_hyperplane().unwrap(), p(u, "x1"));
        assert_eq!(p(s, "t1 t2").restrict_hyperplane().unwrap(), p(u, "t1 t2"));
        assert!(p(s, "x2 t1").restrict_hyperplane().unwrap().is_zero());
        assert_eq!(
            P::one(sig(0, 1)).restrict_hyperplane(),
            Err(Error::NoBosonicVariable)
        );
    }

    #[test]
    fn test_embed() {
        let u = sig(1, 1);
        assert_eq!(P::one(u).embed(), P::one(sig(2, 1)));
        let a = p(u, "x1 t1");
        assert_eq!(a.embed(), p(sig(2, 1), "x1 t1"));
        assert_eq!(a.embed().restrict_hyperplane().unwrap(), a);
    }

    #[test]
    fn test_xm_coefficients() {
        let s = sig(2, 1);
        let u = sig(1, 1);
        let c = p(s, "x2 t1").xm_coefficients(2).unwrap();
        assert_eq!(c.len(), 3);
        assert!(c[0].is_zero());
        assert_eq!(c[1], p(u, "t1"));
        assert!(c[2].is_zero());
        let c = p(s, "x2^2").xm_coefficients(2).unwrap();
        assert_eq!(c[2], P::constant(u, q(2, 1)));
        let c = p(s, "x1^2").xm_coefficients(2).unwrap();
        assert_eq!(c[0], p(u, "x1^2"));
        assert!(c[1].is_zero() && c[2].is_zero());
        assert_eq!(
            p(s, "x1^2 + x1").xm_coefficients(2),
            Err(Error::NotHomogeneous(2))
        );
    }

    #[test]
    fn test_xm_round_trip_on_basis() {
        let s = sig(2, 2);
        for k in 0..5 {
            for mono in monomial_basis(&s, k) {
                let a = P::monomial(s, mono);
                let c = a.xm_coefficients(k).unwrap();
                assert_eq!(P::from_xm_coefficients(s, &c).unwrap(), a);
            }
        }
    }

    #[test]
    fn test_parse_display() {
        let s = sig(3, 2);
        let a = p(s, "3/2*x1^2 x3 t1 t4 - t2 t3");
        assert_eq!(a.len(), 2);
        assert_eq!(P::parse(s, &a.to_string()).unwrap(), a);
        // out-of-order odd factors fold their sign into the coefficient
        assert_eq!(p(s, "t4 t1"), p(s, "-t1 t4"));
        assert!(p(s, "t1 t1").is_zero());
        assert_eq!(p(s, "0").to_string(), "0");
        assert_eq!(p(s, "-2 + x1").to_string(), "-2 + x1");
        assert!(P::parse(s, "x4").is_err());
        assert!(P::parse(s, "2*").is_err());
        assert!(P::parse(s, "1/0").is_err());
        assert!(P::parse(s, "x1 +").is_err());
        assert!(P::parse(s, "").is_err());
    }

    #[test]
    fn test_merge_parity() {
        // θ2 · θ1: one inversion
        assert_eq!(merge_parity(0b10, 0b01), 1);
        // θ1θ3 · θ2: one inversion
        assert_eq!(merge_parity(0b101, 0b010), 1);
        // θ2θ3 · θ1: two inversions
        assert_eq!(merge_parity(0b110, 0b001), 0);
    }
}
