//! Square matrices over a ring (algebra elements or operator models),
//! with exact inversion over finite-dimensional algebras via the regular
//! representation.

use crate::algebra::AlgebraElement;
use crate::error::{NchError, Result};
use crate::linalg::{solve, SparseMat, SparseVec};
use crate::ring::Ring;
use crate::scalar::Scalar;

/// r x r matrix over a ring T, row-major.
#[derive(Clone, PartialEq, Debug)]
pub struct RingMatrix<T: Ring> {
    pub size: usize,
    pub entries: Vec<T>,
}

impl<T: Ring> RingMatrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let size = rows.len();
        assert!(rows.iter().all(|r| r.len() == size), "matrix must be square");
        RingMatrix { size, entries: rows.into_iter().flatten().collect() }
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.size + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.entries[i * self.size + j] = v;
    }

    pub fn zero_like(sample: &T, size: usize) -> Self {
        RingMatrix { size, entries: vec![sample.zero_like(); size * size] }
    }

    pub fn identity_like(sample: &T, size: usize) -> Self {
        let mut m = Self::zero_like(sample, size);
        for i in 0..size {
            m.set(i, i, sample.one_like());
        }
        m
    }

    pub fn diag(entries: Vec<T>) -> Self {
        let size = entries.len();
        let sample = entries[0].clone();
        let mut m = Self::zero_like(&sample, size);
        for (i, e) in entries.into_iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.size, other.size, "size mismatch");
        let n = self.size;
        let sample = &self.entries[0];
        let mut out = Self::zero_like(sample, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = sample.zero_like();
                for k in 0..n {
                    acc = acc.add(&self.at(i, k).mul(other.at(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.size, other.size);
        RingMatrix {
            size: self.size,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.size, other.size);
        RingMatrix {
            size: self.size,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        RingMatrix { size: self.size, entries: self.entries.iter().map(|a| a.neg()).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        RingMatrix { size: self.size, entries: self.entries.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_idempotent(&self) -> bool {
        self.mul(self) == *self
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::identity_like(&self.entries[0], self.size);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Assemble a 2r x 2r block matrix from four r x r blocks.
    pub fn block2(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let r = a.size;
        assert!(b.size == r && c.size == r && d.size == r);
        let sample = &a.entries[0];
        let mut m = Self::zero_like(sample, 2 * r);
        for i in 0..r {
            for j in 0..r {
                m.set(i, j, a.at(i, j).clone());
                m.set(i, j + r, b.at(i, j).clone());
                m.set(i + r, j, c.at(i, j).clone());
                m.set(i + r, j + r, d.at(i, j).clone());
            }
        }
        m
    }

    /// Sum of diagonal entries.
    pub fn trace(&self) -> T {
        let mut acc = self.entries[0].zero_like();
        for i in 0..self.size {
            acc = acc.add(self.at(i, i));
        }
        acc
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> RingMatrix<U> {
        RingMatrix { size: self.size, entries: self.entries.iter().map(f).collect() }
    }
}

impl<T: Ring> Ring for RingMatrix<T> {
    fn zero_like(&self) -> Self {
        Self::zero_like(&self.entries[0], self.size)
    }
    fn one_like(&self) -> Self {
        Self::identity_like(&self.entries[0], self.size)
    }
    fn add(&self, other: &Self) -> Self {
        RingMatrix::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        RingMatrix::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        RingMatrix::mul(self, other)
    }
    fn neg(&self) -> Self {
        RingMatrix::neg(self)
    }
    fn scale(&self, c: &Scalar) -> Self {
        RingMatrix::scale(self, c)
    }
    fn is_zero(&self) -> bool {
        RingMatrix::is_zero(self)
    }
}

/// Matrices with entries in a finite-dimensional algebra.
pub type MatrixOverAlgebra = RingMatrix<AlgebraElement>;

impl MatrixOverAlgebra {
    /// Exact inverse via the left regular representation on A^r, solved
    /// column by column; fails cleanly when no inverse exists.
    pub fn inverse(&self) -> Result<MatrixOverAlgebra> {
        let alg = &self.entries[0].algebra;
        if !alg.unital {
            return Err(NchError::InvalidAlgebra("inverse needs a unital algebra".into()));
        }
        let r = self.size;
        let d = alg.dim;
        let n = r * d;
        // coordinates of column vectors in A^r: block p holds component p
        let lmul = SparseMat::from_fn(n, n, |col| {
            let (q, b) = (col / d, col % d);
            let mut out = SparseVec::zero();
            for p in 0..r {
                let prod = alg.multiply(&self.at(p, q).coords, &SparseVec::unit(b));
                out = out.add(&prod.map_indices(|k| p * d + k));
            }
            out
        });
        let mut inv = Self::zero_like(&self.entries[0], r);
        for j in 0..r {
            // solve M x = e_j (unit of A in block j)
            let rhs = SparseVec::unit(j * d);
            let x = solve(&lmul, &rhs).ok_or(NchError::Singular)?;
            for p in 0..r {
                let coords = SparseVec {
                    entries: x
                        .entries
                        .iter()
                        .filter(|(k, _)| k / d == p)
                        .map(|(k, c)| (k % d, c.clone()))
                        .collect(),
                };
                inv.set(p, j, alg.element(coords));
            }
        }
        // left inverse; verify it is two-sided
        let id = Self::identity_like(&self.entries[0], r);
        if inv.mul(self) != id || self.mul(&inv) != id {
            return Err(NchError::Singular);
        }
        Ok(inv)
    }

    pub fn scalar_diag(alg: &crate::algebra::FinDimAlgebra, values: &[Scalar]) -> Self {
        Self::diag(
            values
                .iter()
                .map(|c| alg.one_element().scale(c))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{algebra_c, algebra_dual};

    #[test]
    fn invert_scalar_diag() {
        let c = algebra_c();
        let m = MatrixOverAlgebra::scalar_diag(&c, &[Scalar::from_int(2), Scalar::ratio(1, 2)]);
        let inv = m.inverse().unwrap();
        assert_eq!(
            inv,
            MatrixOverAlgebra::scalar_diag(&c, &[Scalar::ratio(1, 2), Scalar::from_int(2)])
        );
    }

    #[test]
    fn idempotent_check() {
        let c = algebra_c();
        let e = MatrixOverAlgebra::scalar_diag(&c, &[Scalar::one(), Scalar::zero()]);
        assert!(e.is_idempotent());
        let x = MatrixOverAlgebra::scalar_diag(&c, &[Scalar::from_int(2), Scalar::zero()]);
        assert!(!x.is_idempotent());
    }

    #[test]
    fn invert_one_plus_eps() {
        let dual = algebra_dual();
        let one_plus = dual.element(SparseVec::collect(vec![
            (0, Scalar::one()),
            (1, Scalar::one()),
        ]));
        let m = RingMatrix::from_rows(vec![vec![one_plus]]);
        let inv = m.inverse().unwrap();
        // (1+eps)^{-1} = 1 - eps
        assert_eq!(inv.at(0, 0).coords.get(1), Scalar::from_int(-1));
    }

    #[test]
    fn singular_detected() {
        let c = algebra_c();
        let m = MatrixOverAlgebra::scalar_diag(&c, &[Scalar::one(), Scalar::zero()]);
        assert!(matches!(m.inverse(), Err(NchError::Singular)));
    }
}
