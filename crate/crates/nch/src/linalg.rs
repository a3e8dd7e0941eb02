//! Exact sparse linear algebra over [`Scalar`].
//!
//! Vectors are sorted `(index, coefficient)` lists; matrices are stored
//! column-major (column `j` is the image of basis vector `j`).  Rank,
//! kernel and solving all go through one incremental reduced-echelon
//! structure with deterministic lowest-index pivoting, so results are
//! reproducible across runs.

use crate::scalar::Scalar;
use std::collections::BTreeMap;

/// Sparse vector: strictly increasing indices, no zero coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SparseVec {
    pub entries: Vec<(usize, Scalar)>,
}

impl SparseVec {
    pub fn zero() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(index: usize) -> Self {
        SparseVec { entries: vec![(index, Scalar::one())] }
    }

    pub fn single(index: usize, c: Scalar) -> Self {
        if c.is_zero() {
            SparseVec::zero()
        } else {
            SparseVec { entries: vec![(index, c)] }
        }
    }

    /// Build from unsorted, possibly repeated entries.
    pub fn collect(entries: impl IntoIterator<Item = (usize, Scalar)>) -> Self {
        let mut map: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (i, c) in entries {
            if c.is_zero() {
                continue;
            }
            match map.get_mut(&i) {
                Some(acc) => {
                    *acc += &c;
                    if acc.is_zero() {
                        map.remove(&i);
                    }
                }
                None => {
                    map.insert(i, c);
                }
            }
        }
        SparseVec { entries: map.into_iter().collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: usize) -> Scalar {
        match self.entries.binary_search_by_key(&index, |e| e.0) {
            Ok(k) => self.entries[k].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    pub fn leading(&self) -> Option<usize> {
        self.entries.first().map(|e| e.0)
    }

    /// `self + c * other`, merged in one pass.
    pub fn add_scaled(&self, other: &SparseVec, c: &Scalar) -> SparseVec {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() || j < other.entries.len() {
            let pick_left = match (self.entries.get(i), other.entries.get(j)) {
                (Some(a), Some(b)) => {
                    if a.0 == b.0 {
                        let v = &a.1 + &(c * &b.1);
                        if !v.is_zero() {
                            out.push((a.0, v));
                        }
                        i += 1;
                        j += 1;
                        continue;
                    }
                    a.0 < b.0
                }
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => break,
            };
            if pick_left {
                out.push(self.entries[i].clone());
                i += 1;
            } else {
                let v = c * &other.entries[j].1;
                if !v.is_zero() {
                    out.push((other.entries[j].0, v));
                }
                j += 1;
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        self.add_scaled(other, &Scalar::one())
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        self.add_scaled(other, &-Scalar::one())
    }

    pub fn scale(&self, c: &Scalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::zero();
        }
        SparseVec {
            entries: self.entries.iter().map(|(i, v)| (*i, c * v)).collect(),
        }
    }

    pub fn neg(&self) -> SparseVec {
        self.scale(&-Scalar::one())
    }

    pub fn dot(&self, other: &SparseVec) -> Scalar {
        let mut acc = Scalar::zero();
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() && j < other.entries.len() {
            let (a, b) = (&self.entries[i], &other.entries[j]);
            if a.0 == b.0 {
                acc += &(&a.1 * &b.1);
                i += 1;
                j += 1;
            } else if a.0 < b.0 {
                i += 1;
            } else {
                j += 1;
            }
        }
        acc
    }

    /// Remap indices; `f` must be strictly increasing on the support.
    pub fn map_indices(&self, f: impl Fn(usize) -> usize) -> SparseVec {
        SparseVec {
            entries: self.entries.iter().map(|(i, c)| (f(*i), c.clone())).collect(),
        }
    }
}

/// Column-major sparse matrix.
#[derive(Clone, PartialEq, Debug)]
pub struct SparseMat {
    pub nrows: usize,
    pub cols: Vec<SparseVec>,
}

impl SparseMat {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        SparseMat { nrows, cols: vec![SparseVec::zero(); ncols] }
    }

    pub fn identity(n: usize) -> Self {
        SparseMat { nrows: n, cols: (0..n).map(SparseVec::unit).collect() }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn from_columns(nrows: usize, cols: Vec<SparseVec>) -> Self {
        SparseMat { nrows, cols }
    }

    pub fn from_fn(nrows: usize, ncols: usize, f: impl Fn(usize) -> SparseVec) -> Self {
        SparseMat { nrows, cols: (0..ncols).map(f).collect() }
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc = SparseVec::zero();
        for (j, c) in &v.entries {
            acc = acc.add_scaled(&self.cols[*j], c);
        }
        acc
    }

    /// Matrix product `self * other` (apply `other` first).
    pub fn compose(&self, other: &SparseMat) -> SparseMat {
        assert_eq!(self.ncols(), other.nrows, "composition shape mismatch");
        SparseMat {
            nrows: self.nrows,
            cols: other.cols.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn add(&self, other: &SparseMat) -> SparseMat {
        assert_eq!(self.nrows, other.nrows);
        assert_eq!(self.ncols(), other.ncols());
        SparseMat {
            nrows: self.nrows,
            cols: self
                .cols
                .iter()
                .zip(&other.cols)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &SparseMat) -> SparseMat {
        assert_eq!(self.nrows, other.nrows);
        assert_eq!(self.ncols(), other.ncols());
        SparseMat {
            nrows: self.nrows,
            cols: self
                .cols
                .iter()
                .zip(&other.cols)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> SparseMat {
        SparseMat {
            nrows: self.nrows,
            cols: self.cols.iter().map(|v| v.scale(c)).collect(),
        }
    }

    pub fn neg(&self) -> SparseMat {
        self.scale(&-Scalar::one())
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_zero())
    }

    pub fn transpose(&self) -> SparseMat {
        let mut rows: Vec<SparseVec> = vec![SparseVec::zero(); self.nrows];
        for (j, col) in self.cols.iter().enumerate() {
            for (i, c) in &col.entries {
                rows[*i].entries.push((j, c.clone()));
            }
        }
        SparseMat { nrows: self.ncols(), cols: rows }
    }

    /// Matrix power by repeated application (degree-preserving operators).
    pub fn pow(&self, e: usize) -> SparseMat {
        assert_eq!(self.nrows, self.ncols());
        let mut acc = SparseMat::identity(self.nrows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = base.compose(&acc);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.entries.len()).sum()
    }

    /// First column index where the two matrices differ, with the diff.
    pub fn first_difference(&self, other: &SparseMat) -> Option<(usize, SparseVec)> {
        for (j, (a, b)) in self.cols.iter().zip(&other.cols).enumerate() {
            let d = a.sub(b);
            if !d.is_zero() {
                return Some((j, d));
            }
        }
        None
    }
}

/// Incremental reduced row echelon form with certificate tracking.
///
/// Rows are vectors in the ambient space; each has a unique pivot (its
/// leading index), normalized to 1, and pivot columns are eliminated from
/// all other rows.  Insertion order is caller-controlled, pivot choice is
/// the leading index, so the result is deterministic.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<(SparseVec, SparseVec)>,
    pivot_of: BTreeMap<usize, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.iter().map(|(v, _)| v)
    }

    /// Reduce `v` against the echelon rows; returns (residue, certificate)
    /// where `v = residue + sum(cert_k * inserted_k)` over original inserts.
    pub fn reduce_with_certificate(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut cur = v.clone();
        let mut cert = SparseVec::zero();
        let mut i = 0;
        while i < cur.entries.len() {
            let col = cur.entries[i].0;
            if let Some(&r) = self.pivot_of.get(&col) {
                let c = cur.entries[i].1.clone();
                cur = cur.add_scaled(&self.rows[r].0, &-c.clone());
                cert = cert.add_scaled(&self.rows[r].1, &c);
            } else {
                i += 1;
            }
        }
        (cur, cert)
    }

    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        self.reduce_with_certificate(v).0
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Insert a vector with an external tag vector (for certificates).
    /// Returns the pivot column if the vector increased the rank.
    pub fn insert_tagged(&mut self, v: SparseVec, tag: SparseVec) -> Option<usize> {
        let (mut r, cert) = self.reduce_with_certificate(&v);
        if r.is_zero() {
            return None;
        }
        // tag of the residue: original tag minus what the reduction used
        let mut rtag = tag.sub(&cert);
        let pivot = r.entries[0].0;
        let lead = r.entries[0].1.clone();
        let inv = lead.inv().expect("nonzero pivot");
        r = r.scale(&inv);
        rtag = rtag.scale(&inv);
        // eliminate the new pivot from existing rows
        for k in 0..self.rows.len() {
            let c = self.rows[k].0.get(pivot);
            if !c.is_zero() {
                let nc = -c;
                self.rows[k].0 = self.rows[k].0.add_scaled(&r, &nc);
                self.rows[k].1 = self.rows[k].1.add_scaled(&rtag, &nc);
            }
        }
        self.pivot_of.insert(pivot, self.rows.len());
        self.rows.push((r, rtag));
        Some(pivot)
    }

    pub fn insert(&mut self, v: SparseVec) -> Option<usize> {
        self.insert_tagged(v, SparseVec::zero())
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.pivot_of.keys().copied().collect()
    }
}

/// Rank of a matrix (row rank of the column span).
pub fn rank(mat: &SparseMat) -> usize {
    let mut ech = Echelon::new();
    for col in &mat.cols {
        ech.insert(col.clone());
    }
    ech.rank()
}

/// Rank computed after reversing the insertion order and flipping indices;
/// used for the pivot-independence property check.
pub fn rank_reversed(mat: &SparseMat) -> usize {
    let n = mat.nrows;
    let mut ech = Echelon::new();
    for col in mat.cols.iter().rev() {
        let mut e: Vec<(usize, Scalar)> = col
            .entries
            .iter()
            .map(|(i, c)| (n - 1 - *i, c.clone()))
            .collect();
        e.reverse();
        ech.insert(SparseVec { entries: e });
    }
    ech.rank()
}

/// Basis of the kernel `{v : M v = 0}` via certificate tracking.
pub fn kernel_basis(mat: &SparseMat) -> Vec<SparseVec> {
    let mut ech = Echelon::new();
    let mut kernel = Vec::new();
    for (j, col) in mat.cols.iter().enumerate() {
        let (r, cert) = ech.reduce_with_certificate(col);
        if r.is_zero() {
            // col_j = sum cert_k col_k  =>  e_j - cert  is in the kernel
            kernel.push(SparseVec::unit(j).sub(&cert));
        } else {
            ech.insert_tagged(col.clone(), SparseVec::unit(j));
        }
    }
    kernel
}

/// Echelon of the column span (image) of a matrix.
pub fn image_echelon(mat: &SparseMat) -> Echelon {
    let mut ech = Echelon::new();
    for col in &mat.cols {
        ech.insert(col.clone());
    }
    ech
}

/// Solve `M x = b`; returns any solution.
pub fn solve(mat: &SparseMat, b: &SparseVec) -> Option<SparseVec> {
    let mut ech = Echelon::new();
    for (j, col) in mat.cols.iter().enumerate() {
        ech.insert_tagged(col.clone(), SparseVec::unit(j));
    }
    let (r, cert) = ech.reduce_with_certificate(b);
    if r.is_zero() {
        Some(cert)
    } else {
        None
    }
}

/// A quotient `Q^d / U` presented by echelon of U plus a complement basis
/// of standard basis vectors at the non-pivot indices.
#[derive(Clone, Debug)]
pub struct QuotientSpace {
    pub ambient_dim: usize,
    sub: Echelon,
    pub rep_indices: Vec<usize>,
    coord_of: BTreeMap<usize, usize>,
}

impl QuotientSpace {
    pub fn new(ambient_dim: usize, spanning: impl IntoIterator<Item = SparseVec>) -> Self {
        let mut sub = Echelon::new();
        for v in spanning {
            sub.insert(v);
        }
        let pivots: std::collections::BTreeSet<usize> = sub.pivot_of.keys().copied().collect();
        let rep_indices: Vec<usize> = (0..ambient_dim).filter(|i| !pivots.contains(i)).collect();
        let coord_of = rep_indices
            .iter()
            .enumerate()
            .map(|(k, i)| (*i, k))
            .collect();
        QuotientSpace { ambient_dim, sub, rep_indices, coord_of }
    }

    pub fn dim(&self) -> usize {
        self.rep_indices.len()
    }

    /// Coordinates of the class of `v` in the complement basis.
    pub fn project(&self, v: &SparseVec) -> SparseVec {
        let r = self.sub.reduce(v);
        SparseVec {
            entries: r
                .entries
                .iter()
                .map(|(i, c)| (self.coord_of[i], c.clone()))
                .collect(),
        }
    }

    /// Ambient representative of quotient coordinates.
    pub fn lift(&self, q: &SparseVec) -> SparseVec {
        SparseVec {
            entries: q
                .entries
                .iter()
                .map(|(k, c)| (self.rep_indices[*k], c.clone()))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> SparseMat {
        let nrows = rows.len();
        let ncols = rows[0].len();
        SparseMat::from_fn(nrows, ncols, |j| {
            SparseVec::collect(
                (0..nrows).map(|i| (i, Scalar::from_int(rows[i][j]))),
            )
        })
    }

    #[test]
    fn rank_and_kernel() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&m), 2);
        assert_eq!(rank_reversed(&m), 2);
        let ker = kernel_basis(&m);
        assert_eq!(ker.len(), 1);
        assert!(m.apply(&ker[0]).is_zero());
    }

    #[test]
    fn solve_system() {
        let m = mat(&[&[2, 0], &[1, 1]]);
        let b = SparseVec::collect(vec![(0, Scalar::from_int(4)), (1, Scalar::from_int(5))]);
        let x = solve(&m, &b).unwrap();
        assert_eq!(m.apply(&x), b);
        let inconsistent = mat(&[&[1, 1], &[2, 2]]);
        let b2 = SparseVec::collect(vec![(1, Scalar::one())]);
        assert!(solve(&inconsistent, &b2).is_none());
    }

    #[test]
    fn quotient_space() {
        // Q^3 / span{(1,1,0)}
        let u = SparseVec::collect(vec![(0, Scalar::one()), (1, Scalar::one())]);
        let q = QuotientSpace::new(3, vec![u]);
        assert_eq!(q.dim(), 2);
        // e0 and -e1 agree in the quotient
        let a = q.project(&SparseVec::unit(0));
        let b = q.project(&SparseVec::unit(1)).neg();
        assert_eq!(a, b);
    }

    #[test]
    fn matrix_algebra() {
        let m = mat(&[&[0, 1], &[1, 0]]);
        assert_eq!(m.pow(2), SparseMat::identity(2));
        assert!(m.compose(&m).sub(&SparseMat::identity(2)).is_zero());
    }
}
