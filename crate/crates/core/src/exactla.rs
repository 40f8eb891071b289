//! Exact linear algebra over ordered monomial bases.
//!
//! Matrices are sparse by rows. Elimination splits the column set into the
//! connected components of the row/column incidence graph and runs dense
//! Gauss-Jordan on each block; the invariant operators preserve fine
//! gradings of `P_k`, so the blocks stay small. The union of the blocks'
//! reduced rows, sorted by pivot, is the reduced row echelon form of the
//! whole matrix, so results do not depend on the splitting.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::Operator;
use crate::scalar::Scalar;
use crate::superpoly::{MonomialBasis, SuperPolynomial, SuperSignature};

/// Sparse vector: `(column, value)` pairs, columns strictly increasing,
/// values nonzero.
pub type SparseVec<S> = Vec<(usize, S)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix<S: Scalar> {
    nrows: usize,
    ncols: usize,
    rows: Vec<SparseVec<S>>,
}

impl<S: Scalar> RationalMatrix<S> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        RationalMatrix {
            nrows,
            ncols,
            rows: vec![Vec::new(); nrows],
        }
    }

    pub fn from_dense(rows: &[Vec<S>]) -> Self {
        let ncols = rows.first().map_or(0, Vec::len);
        let rows: Vec<_> = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), ncols, "ragged matrix");
                r.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(j, v)| (j, v.clone()))
                    .collect()
            })
            .collect();
        RationalMatrix {
            nrows: rows.len(),
            ncols,
            rows,
        }
    }

    pub fn from_sparse_rows(ncols: usize, rows: Vec<SparseVec<S>>) -> Self {
        for r in &rows {
            debug_assert!(r.windows(2).all(|w| w[0].0 < w[1].0));
            debug_assert!(r.iter().all(|(j, v)| *j < ncols && !v.is_zero()));
        }
        RationalMatrix {
            nrows: rows.len(),
            ncols,
            rows,
        }
    }

    /// Matrix whose columns are the given vectors of length `nrows`.
    pub fn from_columns(nrows: usize, cols: &[SparseVec<S>]) -> Self {
        let mut rows = vec![Vec::new(); nrows];
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col {
                rows[*i].push((j, v.clone()));
            }
        }
        RationalMatrix {
            nrows,
            ncols: cols.len(),
            rows,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[SparseVec<S>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> S {
        self.rows[i]
            .binary_search_by_key(&j, |(c, _)| *c)
            .map(|p| self.rows[i][p].1.clone())
            .unwrap_or_else(|_| S::zero())
    }

    pub fn transpose(&self) -> Self {
        let mut rows = vec![Vec::new(); self.ncols];
        for (i, r) in self.rows.iter().enumerate() {
            for (j, v) in r {
                rows[*j].push((i, v.clone()));
            }
        }
        RationalMatrix {
            nrows: self.ncols,
            ncols: self.nrows,
            rows,
        }
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.ncols);
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .fold(S::zero(), |acc, (j, a)| acc + a.clone() * v[*j].clone())
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        rref_rows(self.rows.clone(), self.ncols).len()
    }
}

/// Matrix of `op: P_k → P_{k+shift}` with respect to the canonical bases;
/// column `j` is the image of the `j`-th monomial of `P_k`.
pub fn operator_matrix<S: Scalar>(
    op: &Operator,
    sig: SuperSignature,
    k: usize,
) -> RationalMatrix<S> {
    let target_degree = k as i64 + op.degree_shift();
    let source = MonomialBasis::new(sig, k);
    let out_sig = op.output_signature(sig);
    if target_degree < 0 {
        return RationalMatrix::zeros(0, source.len());
    }
    let target = MonomialBasis::new(out_sig, target_degree as usize);
    let cols: Vec<SparseVec<S>> = source
        .monomials()
        .iter()
        .map(|mono| {
            let image = op.apply(&SuperPolynomial::<S>::monomial(sig, mono.clone()));
            target
                .coordinates(&image)
                .expect("operator respects its degree shift")
        })
        .collect();
    RationalMatrix::from_columns(target.len(), &cols)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// A block of the incidence graph: its (ascending) global columns and the
/// rows supported on them.
struct Block<S> {
    cols: Vec<usize>,
    rows: Vec<Vec<S>>,
}

fn blocks<S: Scalar>(rows: &[SparseVec<S>], ncols: usize) -> Vec<Block<S>> {
    let mut uf = UnionFind::new(ncols);
    for r in rows {
        for w in r.windows(2) {
            uf.union(w[0].0, w[1].0);
        }
    }
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for c in 0..ncols {
        by_root.entry(uf.find(c)).or_default().push(c);
    }
    let mut local = vec![0usize; ncols];
    let mut block_of_root = BTreeMap::new();
    let mut out: Vec<Block<S>> = Vec::new();
    for (root, cols) in by_root {
        for (i, &c) in cols.iter().enumerate() {
            local[c] = i;
        }
        block_of_root.insert(root, out.len());
        out.push(Block {
            cols,
            rows: Vec::new(),
        });
    }
    for r in rows {
        let Some((c0, _)) = r.first() else { continue };
        let b = block_of_root[&uf.find(*c0)];
        let width = out[b].cols.len();
        let mut dense = vec![S::zero(); width];
        for (c, v) in r {
            dense[local[*c]] = v.clone();
        }
        out[b].rows.push(dense);
    }
    out
}

/// Dense Gauss-Jordan; returns the nonzero reduced rows and their pivots.
fn gauss_jordan<S: Scalar>(mut rows: Vec<Vec<S>>, width: usize) -> (Vec<Vec<S>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = S::one() / rows[r][c].clone();
        for v in rows[r].iter_mut().skip(c) {
            if !v.is_zero() {
                *v = v.clone() * inv.clone();
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (j, pv) in pivot_row.iter().enumerate().skip(c) {
                if !pv.is_zero() {
                    row[j] = row[j].clone() - f.clone() * pv.clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Reduced row echelon form of the span of `rows`; zero rows dropped,
/// pivots leftmost, rows sorted by pivot column.
pub fn rref_rows<S: Scalar>(rows: Vec<SparseVec<S>>, ncols: usize) -> Vec<SparseVec<S>> {
    let mut out = Vec::new();
    for block in blocks(&rows, ncols) {
        if block.rows.is_empty() {
            continue;
        }
        let (reduced, _) = gauss_jordan(block.rows, block.cols.len());
        for row in reduced {
            out.push(to_sparse(&row, &block.cols));
        }
    }
    out.sort_by_key(|r| r[0].0);
    out
}

fn to_sparse<S: Scalar>(dense: &[S], cols: &[usize]) -> SparseVec<S> {
    dense
        .iter()
        .zip(cols)
        .filter(|(v, _)| !v.is_zero())
        .map(|(v, c)| (*c, v.clone()))
        .collect()
}

/// Canonical basis of the null space `{v : A v = 0}`.
pub fn kernel_rows<S: Scalar>(a: &RationalMatrix<S>) -> Vec<SparseVec<S>> {
    let mut basis = Vec::new();
    for block in blocks(&a.rows, a.ncols) {
        let width = block.cols.len();
        let (reduced, pivots) = gauss_jordan(block.rows, width);
        let mut is_pivot = vec![false; width];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for f in (0..width).filter(|&f| !is_pivot[f]) {
            let mut v = vec![S::zero(); width];
            v[f] = S::one();
            for (row, &p) in reduced.iter().zip(&pivots) {
                if !row[f].is_zero() {
                    v[p] = -row[f].clone();
                }
            }
            basis.push(to_sparse(&v, &block.cols));
        }
    }
    rref_rows(basis, a.ncols)
}

/// Where a subspace lives: plain coordinates, or `P_k` of a signature with
/// its canonical monomial basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Ambient {
    Coordinates(usize),
    Homogeneous {
        signature: SuperSignature,
        degree: usize,
        dim: usize,
    },
}

impl Ambient {
    pub fn homogeneous(sig: SuperSignature, degree: usize) -> Self {
        Ambient::Homogeneous {
            signature: sig,
            degree,
            dim: crate::superpoly::monomial_count(&sig, degree),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Ambient::Coordinates(d) => *d,
            Ambient::Homogeneous { dim, .. } => *dim,
        }
    }
}

/// A subspace stored by its canonical reduced row echelon basis, so two
/// subspaces of the same ambient are equal iff their rows are identical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace<S: Scalar> {
    ambient: Ambient,
    rows: Vec<SparseVec<S>>,
}

impl<S: Scalar> Subspace<S> {
    pub fn zero(ambient: Ambient) -> Self {
        Subspace {
            ambient,
            rows: Vec::new(),
        }
    }

    pub fn full(ambient: Ambient) -> Self {
        let rows = (0..ambient.dim()).map(|i| vec![(i, S::one())]).collect();
        Subspace { ambient, rows }
    }

    /// Span of arbitrary vectors.
    pub fn span(ambient: Ambient, vectors: Vec<SparseVec<S>>) -> Self {
        Subspace {
            ambient,
            rows: rref_rows(vectors, ambient.dim()),
        }
    }

    pub fn kernel(ambient: Ambient, a: &RationalMatrix<S>) -> Result<Self> {
        if a.ncols != ambient.dim() {
            return Err(Error::DimensionMismatch {
                expected: ambient.dim(),
                got: a.ncols,
            });
        }
        Ok(Subspace {
            ambient,
            rows: kernel_rows(a),
        })
    }

    /// Column space of `a`.
    pub fn image(ambient: Ambient, a: &RationalMatrix<S>) -> Result<Self> {
        if a.nrows != ambient.dim() {
            return Err(Error::DimensionMismatch {
                expected: ambient.dim(),
                got: a.nrows,
            });
        }
        Ok(Subspace::span(ambient, a.transpose().rows))
    }

    /// Span of degree-`k` polynomials in `P_k`.
    pub fn from_polynomials(
        sig: SuperSignature,
        k: usize,
        polys: &[SuperPolynomial<S>],
    ) -> Result<Self> {
        let basis = MonomialBasis::new(sig, k);
        let vectors = polys
            .iter()
            .map(|p| basis.coordinates(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Subspace::span(Ambient::homogeneous(sig, k), vectors))
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn rows(&self) -> &[SparseVec<S>] {
        &self.rows
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    fn same_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch);
        }
        Ok(())
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.same_ambient(other)?;
        let rows = self.rows.iter().chain(&other.rows).cloned().collect();
        Ok(Subspace::span(self.ambient, rows))
    }

    /// Zassenhaus: reduce `[u | u]` and `[v | 0]`; rows with a zero left half
    /// span the intersection.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.same_ambient(other)?;
        let d = self.ambient.dim();
        let mut rows: Vec<SparseVec<S>> = Vec::with_capacity(self.dim() + other.dim());
        for u in &self.rows {
            let mut r = u.clone();
            r.extend(u.iter().map(|(j, v)| (j + d, v.clone())));
            rows.push(r);
        }
        rows.extend(other.rows.iter().cloned());
        let meet = rref_rows(rows, 2 * d)
            .into_iter()
            .filter(|r| r[0].0 >= d)
            .map(|r| r.into_iter().map(|(j, v)| (j - d, v)).collect())
            .collect();
        Ok(Subspace::span(self.ambient, meet))
    }

    /// Remainder of `v` after reduction by the echelon rows.
    fn reduce(&self, v: &SparseVec<S>) -> BTreeMap<usize, S> {
        let mut acc: BTreeMap<usize, S> = v.iter().cloned().collect();
        for row in &self.rows {
            let pivot = row[0].0;
            let Some(f) = acc.get(&pivot).cloned() else {
                continue;
            };
            for (j, a) in row {
                let nv = acc.get(j).cloned().unwrap_or_else(S::zero) - f.clone() * a.clone();
                if nv.is_zero() {
                    acc.remove(j);
                } else {
                    acc.insert(*j, nv);
                }
            }
        }
        acc
    }

    pub fn contains(&self, v: &SparseVec<S>) -> bool {
        self.reduce(v).is_empty()
    }

    pub fn contains_dense(&self, v: &[S]) -> Result<bool> {
        if v.len() != self.ambient.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient.dim(),
                got: v.len(),
            });
        }
        let sparse = v
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i, x.clone()))
            .collect();
        Ok(self.contains(&sparse))
    }

    pub fn is_subspace_of(&self, other: &Self) -> Result<bool> {
        self.same_ambient(other)?;
        Ok(self.rows.iter().all(|r| other.contains(r)))
    }

    /// Basis rows as polynomials (homogeneous ambients only).
    pub fn polynomials(&self) -> Vec<SuperPolynomial<S>> {
        let Ambient::Homogeneous {
            signature, degree, ..
        } = self.ambient
        else {
            panic!("polynomials() on a coordinate subspace");
        };
        let basis = MonomialBasis::new(signature, degree);
        self.rows.iter().map(|r| basis.polynomial(r)).collect()
    }

    pub fn contains_polynomial(&self, p: &SuperPolynomial<S>) -> Result<bool> {
        let Ambient::Homogeneous {
            signature, degree, ..
        } = self.ambient
        else {
            return Err(Error::AmbientMismatch);
        };
        let v = MonomialBasis::new(signature, degree).coordinates(p)?;
        Ok(self.contains(&v))
    }

    /// Image of the subspace under `op`, in `P_{k + shift}`.
    pub fn map(&self, op: &Operator) -> Result<Self> {
        let Ambient::Homogeneous {
            signature, degree, ..
        } = self.ambient
        else {
            return Err(Error::AmbientMismatch);
        };
        let shift = degree as i64 + op.degree_shift();
        if shift < 0 {
            return Err(Error::Precondition(format!(
                "{op} lowers degree {degree} below zero"
            )));
        }
        let images: Vec<_> = self.polynomials().iter().map(|p| op.apply(p)).collect();
        Subspace::from_polynomials(op.output_signature(signature), shift as usize, &images)
    }
}
