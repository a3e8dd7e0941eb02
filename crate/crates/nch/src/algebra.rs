//! Finite-dimensional associative algebras over exact scalars, given by
//! sparse structure constants, plus the constructions every other module
//! consumes: unitalization, ideal quotients, matrix algebras, direct sums
//! and square-zero extensions.
//!
//! Convention: in a unital algebra the unit is always basis vector 0, so
//! the reduced space has the canonical basis 1..dim-1.  Constructions
//! that produce a unit elsewhere rotate the basis accordingly.

use crate::error::{NchError, Result};
use crate::linalg::{solve, Echelon, QuotientSpace, SparseMat, SparseVec};
use crate::ring::Ring;
use crate::scalar::Scalar;
use serde::Deserialize;
use std::fmt;
use std::sync::Arc;

/// Structure-constant data; wrapped in `Arc` and shared by elements.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraData {
    pub name: String,
    pub dim: usize,
    pub basis_labels: Vec<String>,
    pub unital: bool,
    /// `products[i][j]` = coordinates of `e_i * e_j`.
    pub products: Vec<Vec<SparseVec>>,
}

pub type FinDimAlgebra = Arc<AlgebraData>;

/// Report produced by `validate`; empty defect lists mean the algebra
/// satisfies associativity and (when flagged) the unit laws.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    /// Triples `(i, j, k)` with `(e_i e_j) e_k != e_i (e_j e_k)`.
    pub assoc_defects: Vec<(usize, usize, usize)>,
    /// Basis indices `i` with `1*e_i != e_i` or `e_i*1 != e_i`.
    pub unit_defects: Vec<usize>,
    /// Out-of-range indices in the structure table.
    pub index_defects: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.assoc_defects.is_empty()
            && self.unit_defects.is_empty()
            && self.index_defects.is_empty()
    }
}

impl AlgebraData {
    pub fn product_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.products[i][j]
    }

    /// Product of coordinate vectors.
    pub fn multiply(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut acc = SparseVec::zero();
        for (i, ci) in &a.entries {
            for (j, cj) in &b.entries {
                acc = acc.add_scaled(&self.products[*i][*j], &(ci * cj));
            }
        }
        acc
    }

    pub fn unit_vec(&self) -> SparseVec {
        assert!(self.unital, "algebra has no unit");
        SparseVec::unit(0)
    }

    pub fn element(self: &Arc<Self>, coords: SparseVec) -> AlgebraElement {
        AlgebraElement { algebra: Arc::clone(self), coords }
    }

    pub fn basis_element(self: &Arc<Self>, i: usize) -> AlgebraElement {
        assert!(i < self.dim);
        self.element(SparseVec::unit(i))
    }

    pub fn zero_element(self: &Arc<Self>) -> AlgebraElement {
        self.element(SparseVec::zero())
    }

    pub fn one_element(self: &Arc<Self>) -> AlgebraElement {
        assert!(self.unital, "algebra has no unit");
        self.element(SparseVec::unit(0))
    }
}

pub fn validate(alg: &AlgebraData) -> ValidationReport {
    let mut report = ValidationReport::default();
    let d = alg.dim;
    if alg.products.len() != d || alg.products.iter().any(|row| row.len() != d) {
        report
            .index_defects
            .push("structure table shape differs from dim".to_string());
        return report;
    }
    for i in 0..d {
        for j in 0..d {
            if alg.products[i][j].entries.iter().any(|(k, _)| *k >= d) {
                report
                    .index_defects
                    .push(format!("product e_{i} e_{j} has out-of-range index"));
            }
        }
    }
    if !report.index_defects.is_empty() {
        return report;
    }
    for i in 0..d {
        for j in 0..d {
            let eij = &alg.products[i][j];
            for k in 0..d {
                // (e_i e_j) e_k vs e_i (e_j e_k)
                let left = alg.multiply(eij, &SparseVec::unit(k));
                let right = alg.multiply(&SparseVec::unit(i), &alg.products[j][k]);
                if left != right {
                    report.assoc_defects.push((i, j, k));
                }
            }
        }
    }
    if alg.unital {
        for i in 0..d {
            let e = SparseVec::unit(i);
            if alg.products[0][i] != e || alg.products[i][0] != e {
                report.unit_defects.push(i);
            }
        }
    }
    report
}

fn build(
    name: impl Into<String>,
    basis_labels: Vec<String>,
    unital: bool,
    products: Vec<Vec<SparseVec>>,
) -> FinDimAlgebra {
    let dim = basis_labels.len();
    Arc::new(AlgebraData { name: name.into(), dim, basis_labels, unital, products })
}

/// Structure table from a closure on basis pairs.
fn table(dim: usize, f: impl Fn(usize, usize) -> SparseVec) -> Vec<Vec<SparseVec>> {
    (0..dim).map(|i| (0..dim).map(|j| f(i, j)).collect()).collect()
}

// ---------------------------------------------------------------------
// Built-in algebras
// ---------------------------------------------------------------------

/// The ground field as a 1-dimensional algebra.
pub fn algebra_c() -> FinDimAlgebra {
    build("C", vec!["1".into()], true, table(1, |_, _| SparseVec::unit(0)))
}

/// C + C with unit-first basis {1, s}, s^2 = s.
pub fn algebra_c2() -> FinDimAlgebra {
    build(
        "C2",
        vec!["1".into(), "s".into()],
        true,
        table(2, |i, j| {
            if i == 0 {
                SparseVec::unit(j)
            } else if j == 0 {
                SparseVec::unit(i)
            } else {
                SparseVec::unit(1)
            }
        }),
    )
}

/// Dual numbers C[eps]/(eps^2).
pub fn algebra_dual() -> FinDimAlgebra {
    build(
        "dual",
        vec!["1".into(), "eps".into()],
        true,
        table(2, |i, j| {
            if i == 0 {
                SparseVec::unit(j)
            } else if j == 0 {
                SparseVec::unit(i)
            } else {
                SparseVec::zero()
            }
        }),
    )
}

/// 2x2 matrices with unit-first basis {1, e11, e12, e21}; e22 = 1 - e11.
pub fn algebra_m2() -> FinDimAlgebra {
    matrix_algebra(&algebra_c(), 2)
}

/// Upper-triangular 2x2 matrices, basis {1, e11, e12}; e22 = 1 - e11.
pub fn algebra_upper2() -> FinDimAlgebra {
    build(
        "upper2",
        vec!["1".into(), "e11".into(), "e12".into()],
        true,
        table(3, |i, j| match (i, j) {
            (0, k) | (k, 0) => SparseVec::unit(k),
            (1, 1) => SparseVec::unit(1),
            (1, 2) => SparseVec::unit(2),
            _ => SparseVec::zero(),
        }),
    )
}

/// Strictly upper-triangular 2x2 matrices: one nilpotent generator.
pub fn algebra_strict_upper2() -> FinDimAlgebra {
    build(
        "strict_upper2",
        vec!["n".into()],
        false,
        table(1, |_, _| SparseVec::zero()),
    )
}

pub fn builtin(name: &str) -> Option<FinDimAlgebra> {
    match name {
        "C" => Some(algebra_c()),
        "C2" => Some(algebra_c2()),
        "dual" => Some(algebra_dual()),
        "M2" => Some(algebra_m2()),
        "upper2" => Some(algebra_upper2()),
        "strict_upper2" => Some(algebra_strict_upper2()),
        _ => None,
    }
}

pub const BUILTIN_NAMES: &[&str] = &["C", "C2", "dual", "M2", "upper2", "strict_upper2"];

// ---------------------------------------------------------------------
// Constructions
// ---------------------------------------------------------------------

/// Adjoin a unit as new basis vector 0.
pub fn unitalize(a: &FinDimAlgebra) -> FinDimAlgebra {
    let d = a.dim;
    let mut labels = vec!["1".to_string()];
    labels.extend(a.basis_labels.iter().map(|l| format!("{}~", l)));
    build(
        format!("{}~", a.name),
        labels,
        true,
        table(d + 1, |i, j| {
            if i == 0 {
                SparseVec::unit(j)
            } else if j == 0 {
                SparseVec::unit(i)
            } else {
                a.products[i - 1][j - 1].map_indices(|k| k + 1)
            }
        }),
    )
}

/// Rewrite an algebra in a new basis (columns = new basis in old coords).
pub fn change_basis(
    a: &FinDimAlgebra,
    new_basis: &[SparseVec],
    name: impl Into<String>,
    labels: Vec<String>,
    unital: bool,
) -> Result<FinDimAlgebra> {
    let d = a.dim;
    if new_basis.len() != d {
        return Err(NchError::SizeMismatch("basis size != dim".into()));
    }
    let p = SparseMat::from_columns(d, new_basis.to_vec());
    // old coords -> new coords by solving P x = v
    let to_new = |v: &SparseVec| -> Result<SparseVec> {
        solve(&p, v).ok_or_else(|| NchError::InvalidAlgebra("basis does not span".into()))
    };
    let mut products = Vec::with_capacity(d);
    for i in 0..d {
        let mut row = Vec::with_capacity(d);
        for j in 0..d {
            let prod_old = a.multiply(&new_basis[i], &new_basis[j]);
            row.push(to_new(&prod_old)?);
        }
        products.push(row);
    }
    Ok(build(name, labels, unital, products))
}

/// Rotate the basis of a unital-in-disguise algebra so the given unit
/// vector becomes basis vector 0.
pub fn normalize_unit(a: &FinDimAlgebra, unit: &SparseVec, name: &str) -> Result<FinDimAlgebra> {
    let d = a.dim;
    let mut ech = Echelon::new();
    let mut new_basis = vec![unit.clone()];
    ech.insert(unit.clone());
    for i in 0..d {
        if ech.rank() == d {
            break;
        }
        if ech.insert(SparseVec::unit(i)).is_some() {
            new_basis.push(SparseVec::unit(i));
        }
    }
    if new_basis.len() != d {
        return Err(NchError::InvalidAlgebra("unit vector is zero".into()));
    }
    let mut labels = vec!["1".to_string()];
    labels.extend((1..d).map(|k| format!("b{}", k)));
    change_basis(a, &new_basis, name, labels, true)
}

/// Matrix algebra M_r(A); unital when A is (basis rotated unit-first).
pub fn matrix_algebra(a: &FinDimAlgebra, r: usize) -> FinDimAlgebra {
    let d = a.dim;
    let dim = r * r * d;
    let idx = |p: usize, q: usize, i: usize| (p * r + q) * d + i;
    let products = table(dim, |x, y| {
        let (pq, i) = (x / d, x % d);
        let (p, q) = (pq / r, pq % r);
        let (rs, j) = (y / d, y % d);
        let (rr, s) = (rs / r, rs % r);
        if q != rr {
            SparseVec::zero()
        } else {
            a.products[i][j].map_indices(|k| idx(p, s, k))
        }
    });
    let mut labels = Vec::with_capacity(dim);
    for p in 0..r {
        for q in 0..r {
            for i in 0..d {
                labels.push(format!("E{}{}*{}", p + 1, q + 1, a.basis_labels[i]));
            }
        }
    }
    let raw = build(format!("M{}({})", r, a.name), labels, false, products);
    if a.unital {
        let unit = SparseVec::collect((0..r).map(|p| (idx(p, p, 0), Scalar::one())));
        normalize_unit(&raw, &unit, &format!("M{}({})", r, a.name))
            .expect("matrix algebra unit rotation")
    } else {
        raw
    }
}

/// Direct sum A + B; unital (unit-first) when both are.
pub fn direct_sum(a: &FinDimAlgebra, b: &FinDimAlgebra) -> FinDimAlgebra {
    direct_sum_with_embeddings(a, b).0
}

/// Direct sum together with the block embeddings into the final basis
/// (columns = images of the summand basis vectors).
pub fn direct_sum_with_embeddings(
    a: &FinDimAlgebra,
    b: &FinDimAlgebra,
) -> (FinDimAlgebra, SparseMat, SparseMat) {
    let (da, db) = (a.dim, b.dim);
    let dim = da + db;
    let products = table(dim, |i, j| {
        if i < da && j < da {
            a.products[i][j].clone()
        } else if i >= da && j >= da {
            b.products[i - da][j - da].map_indices(|k| k + da)
        } else {
            SparseVec::zero()
        }
    });
    let mut labels: Vec<String> = a.basis_labels.iter().map(|l| format!("l.{}", l)).collect();
    labels.extend(b.basis_labels.iter().map(|l| format!("r.{}", l)));
    let name = format!("{}(+){}", a.name, b.name);
    let raw = build(name.clone(), labels, false, products);
    if a.unital && b.unital {
        let unit = SparseVec::collect(vec![(0, Scalar::one()), (da, Scalar::one())]);
        let mut ech = Echelon::new();
        let mut new_basis = vec![unit.clone()];
        ech.insert(unit);
        for i in 0..dim {
            if ech.rank() == dim {
                break;
            }
            if ech.insert(SparseVec::unit(i)).is_some() {
                new_basis.push(SparseVec::unit(i));
            }
        }
        let mut lbl = vec!["1".to_string()];
        lbl.extend((1..dim).map(|k| format!("b{}", k)));
        let alg = change_basis(&raw, &new_basis, &name, lbl, true)
            .expect("direct sum unit rotation");
        // express old basis vectors in the new one
        let basis_mat = SparseMat::from_columns(dim, new_basis);
        let old_to_new = |i: usize| {
            solve(&basis_mat, &SparseVec::unit(i)).expect("basis change invertible")
        };
        let left = SparseMat::from_fn(dim, da, |j| old_to_new(j));
        let right = SparseMat::from_fn(dim, db, |j| old_to_new(da + j));
        (alg, left, right)
    } else {
        let left = SparseMat::from_fn(dim, da, SparseVec::unit);
        let right = SparseMat::from_fn(dim, db, |j| SparseVec::unit(da + j));
        (raw, left, right)
    }
}

/// A bimodule over A given by per-basis left/right action matrices on the
/// module coordinate space.
#[derive(Clone, Debug)]
pub struct Bimodule {
    pub dim: usize,
    /// `left[i]`: matrix of `m -> e_i . m`.
    pub left: Vec<SparseMat>,
    /// `right[i]`: matrix of `m -> m . e_i`.
    pub right: Vec<SparseMat>,
}

impl Bimodule {
    /// The algebra acting on itself by multiplication.
    pub fn regular(a: &FinDimAlgebra) -> Bimodule {
        let d = a.dim;
        let left = (0..d)
            .map(|i| SparseMat::from_fn(d, d, |j| a.products[i][j].clone()))
            .collect();
        let right = (0..d)
            .map(|i| SparseMat::from_fn(d, d, |j| a.products[j][i].clone()))
            .collect();
        Bimodule { dim: d, left, right }
    }

    pub fn verify(&self, a: &FinDimAlgebra) -> Result<()> {
        let d = a.dim;
        if self.left.len() != d || self.right.len() != d {
            return Err(NchError::SizeMismatch("action tables != dim".into()));
        }
        for i in 0..d {
            for j in 0..d {
                // e_i.(e_j.m) = (e_i e_j).m
                let lhs = self.left[i].compose(&self.left[j]);
                let mut rhs = SparseMat::zero(self.dim, self.dim);
                for (k, c) in &a.products[i][j].entries {
                    rhs = rhs.add(&self.left[*k].scale(c));
                }
                if lhs != rhs {
                    return Err(NchError::BimoduleAxiom(format!(
                        "left action not multiplicative at ({i},{j})"
                    )));
                }
                // (m.e_i).e_j = m.(e_i e_j)
                let lhs = self.right[j].compose(&self.right[i]);
                let mut rhs = SparseMat::zero(self.dim, self.dim);
                for (k, c) in &a.products[i][j].entries {
                    rhs = rhs.add(&self.right[*k].scale(c));
                }
                if lhs != rhs {
                    return Err(NchError::BimoduleAxiom(format!(
                        "right action not multiplicative at ({i},{j})"
                    )));
                }
                // (e_i.m).e_j = e_i.(m.e_j)
                if self.right[j].compose(&self.left[i]) != self.left[i].compose(&self.right[j]) {
                    return Err(NchError::BimoduleAxiom(format!(
                        "left/right actions do not commute at ({i},{j})"
                    )));
                }
            }
        }
        if a.unital {
            let id = SparseMat::identity(self.dim);
            if self.left[0] != id || self.right[0] != id {
                return Err(NchError::BimoduleAxiom("unit must act as identity".into()));
            }
        }
        Ok(())
    }
}

/// Square-zero extension A + M with product (a,m)(a',m') = (aa', am'+ma').
pub fn square_zero_extension(a: &FinDimAlgebra, m: &Bimodule) -> Result<FinDimAlgebra> {
    m.verify(a)?;
    let (da, dm) = (a.dim, m.dim);
    let dim = da + dm;
    let products = table(dim, |i, j| {
        match (i < da, j < da) {
            (true, true) => a.products[i][j].clone(),
            (true, false) => m.left[i]
                .apply(&SparseVec::unit(j - da))
                .map_indices(|k| k + da),
            (false, true) => m.right[j]
                .apply(&SparseVec::unit(i - da))
                .map_indices(|k| k + da),
            (false, false) => SparseVec::zero(),
        }
    });
    let mut labels = a.basis_labels.clone();
    labels.extend((0..dm).map(|k| format!("m{}", k)));
    Ok(build(
        format!("{}|x|M", a.name),
        labels,
        a.unital,
        products,
    ))
}

/// Close a spanning set under two-sided multiplication; error if the
/// closure strictly enlarges the original span.
pub fn verify_ideal(a: &FinDimAlgebra, span: &[SparseVec]) -> Result<Echelon> {
    let mut ech = Echelon::new();
    for v in span {
        ech.insert(v.clone());
    }
    let original_rank = ech.rank();
    let mut frontier: Vec<SparseVec> = ech.rows().cloned().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for v in &frontier {
            for i in 0..a.dim {
                for w in [
                    a.multiply(&SparseVec::unit(i), v),
                    a.multiply(v, &SparseVec::unit(i)),
                ] {
                    if ech.insert(w.clone()).is_some() {
                        next.push(w);
                    }
                }
            }
        }
        frontier = next;
    }
    if ech.rank() != original_rank {
        return Err(NchError::NonIdeal);
    }
    Ok(ech)
}

/// Quotient A / span(ideal).  The result is unital with unit-first basis
/// when A is unital and the unit survives.
pub fn quotient_by_ideal(a: &FinDimAlgebra, span: &[SparseVec]) -> Result<FinDimAlgebra> {
    let ideal = verify_ideal(a, span)?;
    let q = QuotientSpace::new(a.dim, ideal.rows().cloned());
    let dim = q.dim();
    if dim == 0 {
        return Err(NchError::InvalidAlgebra("quotient is the zero algebra".into()));
    }
    let products = table(dim, |i, j| {
        let xi = q.lift(&SparseVec::unit(i));
        let xj = q.lift(&SparseVec::unit(j));
        q.project(&a.multiply(&xi, &xj))
    });
    let labels = q
        .rep_indices
        .iter()
        .map(|i| format!("[{}]", a.basis_labels[*i]))
        .collect();
    let name = format!("{}/I", a.name);
    let raw = build(name.clone(), labels, false, products);
    if a.unital {
        let unit_class = q.project(&SparseVec::unit(0));
        if unit_class.is_zero() {
            return Err(NchError::InvalidAlgebra("unit lies in the ideal".into()));
        }
        normalize_unit(&raw, &unit_class, &name)
    } else {
        Ok(raw)
    }
}

/// An extension 0 -> I -> R -> A -> 0 with explicit projection and a
/// based linear section.
#[derive(Clone)]
pub struct Extension {
    pub r: FinDimAlgebra,
    /// Echelon of the ideal span inside R.
    pub ideal: Echelon,
    pub ideal_dim: usize,
    pub quotient: FinDimAlgebra,
    /// R coordinates -> quotient coordinates.
    project_mat: SparseMat,
    /// Quotient coordinates -> R coordinates, a linear section; based
    /// (unit goes to unit) when both algebras are unital.
    lift_mat: SparseMat,
}

impl Extension {
    pub fn new(r: &FinDimAlgebra, ideal_span: &[SparseVec]) -> Result<Extension> {
        let ideal = verify_ideal(r, ideal_span)?;
        let ideal_dim = ideal.rank();
        let q = QuotientSpace::new(r.dim, ideal.rows().cloned());
        let raw_dim = q.dim();
        if raw_dim == 0 {
            return Err(NchError::InvalidAlgebra("quotient is the zero algebra".into()));
        }
        // raw quotient algebra on the complement basis
        let raw_products = table(raw_dim, |i, j| {
            let xi = q.lift(&SparseVec::unit(i));
            let xj = q.lift(&SparseVec::unit(j));
            q.project(&r.multiply(&xi, &xj))
        });
        let raw_labels = q
            .rep_indices
            .iter()
            .map(|i| format!("[{}]", r.basis_labels[*i]))
            .collect();
        let name = format!("{}/I", r.name);
        let raw = build(name.clone(), raw_labels, false, raw_products);
        let (quotient, to_raw) = if r.unital {
            let unit_class = q.project(&SparseVec::unit(0));
            if unit_class.is_zero() {
                return Err(NchError::InvalidAlgebra("unit lies in the ideal".into()));
            }
            // unit-first basis in raw coordinates
            let mut ech = Echelon::new();
            let mut new_basis = vec![unit_class.clone()];
            ech.insert(unit_class);
            for i in 0..raw_dim {
                if ech.rank() == raw_dim {
                    break;
                }
                if ech.insert(SparseVec::unit(i)).is_some() {
                    new_basis.push(SparseVec::unit(i));
                }
            }
            let mut labels = vec!["1".to_string()];
            labels.extend((1..raw_dim).map(|k| format!("b{}", k)));
            let alg = change_basis(&raw, &new_basis, name, labels, true)?;
            (alg, SparseMat::from_columns(raw_dim, new_basis))
        } else {
            (raw, SparseMat::identity(raw_dim))
        };
        // projection: R -> raw -> new coords (solve to_raw * x = raw(v))
        let project_cols: Vec<SparseVec> = (0..r.dim)
            .map(|i| {
                let raw_coords = q.project(&SparseVec::unit(i));
                solve(&to_raw, &raw_coords).expect("basis change is invertible")
            })
            .collect();
        let project_mat = SparseMat::from_columns(quotient.dim, project_cols);
        // section: new coords -> raw -> ambient, then correct the unit
        let mut lift_cols: Vec<SparseVec> = (0..quotient.dim)
            .map(|j| q.lift(&to_raw.apply(&SparseVec::unit(j))))
            .collect();
        if r.unital {
            // force lift(1_A) = 1_R; stays a section since they agree mod I
            lift_cols[0] = SparseVec::unit(0);
        }
        let lift_mat = SparseMat::from_columns(r.dim, lift_cols);
        Ok(Extension {
            r: r.clone(),
            ideal,
            ideal_dim,
            quotient,
            project_mat,
            lift_mat,
        })
    }

    pub fn project(&self, v: &SparseVec) -> SparseVec {
        self.project_mat.apply(v)
    }

    pub fn lift(&self, v: &SparseVec) -> SparseVec {
        self.lift_mat.apply(v)
    }

    pub fn in_ideal(&self, v: &SparseVec) -> bool {
        self.ideal.contains(v)
    }

    /// Basis vectors of the ideal.
    pub fn ideal_basis(&self) -> Vec<SparseVec> {
        self.ideal.rows().cloned().collect()
    }

    /// Echelon of I^k (span of k-fold products), k >= 1.
    pub fn ideal_power(&self, k: usize) -> Echelon {
        let mut cur: Vec<SparseVec> = self.ideal_basis();
        for _ in 1..k {
            let mut next = Echelon::new();
            for v in &cur {
                for w in self.ideal_basis() {
                    next.insert(self.r.multiply(v, &w));
                }
            }
            cur = next.rows().cloned().collect();
        }
        let mut ech = Echelon::new();
        for v in cur {
            ech.insert(v);
        }
        ech
    }
}

// ---------------------------------------------------------------------
// Elements and matrices over an algebra
// ---------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct AlgebraElement {
    pub algebra: FinDimAlgebra,
    pub coords: SparseVec,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) && self.coords == other.coords
    }
}

impl AlgebraElement {
    pub fn get(&self, i: usize) -> Scalar {
        self.coords.get(i)
    }

    /// Exact inverse using the left regular representation, when it exists.
    pub fn inverse(&self) -> Result<AlgebraElement> {
        let a = &self.algebra;
        if !a.unital {
            return Err(NchError::InvalidAlgebra("inverse needs a unital algebra".into()));
        }
        let d = a.dim;
        let lmul = SparseMat::from_fn(d, d, |j| a.multiply(&self.coords, &SparseVec::unit(j)));
        let x = solve(&lmul, &SparseVec::unit(0)).ok_or(NchError::Singular)?;
        // left inverse is two-sided in a finite-dimensional algebra; verify
        let check = a.multiply(&x, &self.coords);
        if check != SparseVec::unit(0) {
            return Err(NchError::Singular);
        }
        Ok(a.element(x))
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coords
            .entries
            .iter()
            .map(|(i, c)| {
                if c.is_one() {
                    self.algebra.basis_labels[*i].clone()
                } else {
                    format!("({}) {}", c, self.algebra.basis_labels[*i])
                }
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Ring for AlgebraElement {
    fn zero_like(&self) -> Self {
        self.algebra.zero_element()
    }
    fn one_like(&self) -> Self {
        self.algebra.one_element()
    }
    fn add(&self, other: &Self) -> Self {
        assert!(Arc::ptr_eq(&self.algebra, &other.algebra), "mixed algebras");
        self.algebra.element(self.coords.add(&other.coords))
    }
    fn sub(&self, other: &Self) -> Self {
        assert!(Arc::ptr_eq(&self.algebra, &other.algebra), "mixed algebras");
        self.algebra.element(self.coords.sub(&other.coords))
    }
    fn mul(&self, other: &Self) -> Self {
        assert!(Arc::ptr_eq(&self.algebra, &other.algebra), "mixed algebras");
        self.algebra.element(self.algebra.multiply(&self.coords, &other.coords))
    }
    fn neg(&self) -> Self {
        self.algebra.element(self.coords.neg())
    }
    fn scale(&self, c: &Scalar) -> Self {
        self.algebra.element(self.coords.scale(c))
    }
    fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }
}

// ---------------------------------------------------------------------
// JSON loading
// ---------------------------------------------------------------------

#[derive(Deserialize)]
struct AlgebraFile {
    name: String,
    dim: usize,
    unital: bool,
    #[serde(default)]
    basis: Vec<String>,
    structure: Vec<(usize, usize, usize, String)>,
    #[serde(default)]
    ideal: Option<Vec<serde_json::Value>>,
}

/// Parsed contents of an algebra definition file.
pub struct LoadedAlgebra {
    pub algebra: FinDimAlgebra,
    /// Optional ideal span (basis indices or coordinate vectors).
    pub ideal: Option<Vec<SparseVec>>,
}

pub fn parse_algebra_json(text: &str) -> Result<LoadedAlgebra> {
    let file: AlgebraFile =
        serde_json::from_str(text).map_err(|e| NchError::Parse(e.to_string()))?;
    if file.dim == 0 {
        return Err(NchError::Parse("dim must be positive".into()));
    }
    let labels = if file.basis.is_empty() {
        (0..file.dim).map(|i| format!("e{}", i)).collect()
    } else if file.basis.len() == file.dim {
        file.basis.clone()
    } else {
        return Err(NchError::Parse("basis labels length != dim".into()));
    };
    let mut products = table(file.dim, |_, _| SparseVec::zero());
    for (i, j, k, c) in &file.structure {
        if *i >= file.dim || *j >= file.dim || *k >= file.dim {
            return Err(NchError::Parse(format!(
                "structure index ({i},{j},{k}) out of range"
            )));
        }
        let val: Scalar = c
            .parse()
            .map_err(|e: crate::scalar::ScalarParseError| NchError::Parse(e.to_string()))?;
        products[*i][*j] = products[*i][*j].add(&SparseVec::single(*k, val));
    }
    let alg = build(file.name, labels, file.unital, products);
    let report = validate(&alg);
    if !report.is_valid() {
        return Err(NchError::InvalidAlgebra(format!(
            "{} associativity defects, {} unit defects, {} index defects",
            report.assoc_defects.len(),
            report.unit_defects.len(),
            report.index_defects.len()
        )));
    }
    let ideal = match file.ideal {
        None => None,
        Some(items) => {
            let mut span = Vec::new();
            for item in items {
                match item {
                    serde_json::Value::Number(n) => {
                        let idx = n
                            .as_u64()
                            .ok_or_else(|| NchError::Parse("bad ideal index".into()))?
                            as usize;
                        if idx >= alg.dim {
                            return Err(NchError::Parse("ideal index out of range".into()));
                        }
                        span.push(SparseVec::unit(idx));
                    }
                    serde_json::Value::Array(coords) => {
                        let mut v = SparseVec::zero();
                        for (i, c) in coords.iter().enumerate() {
                            let s: Scalar = c
                                .as_str()
                                .ok_or_else(|| NchError::Parse("ideal coord must be string".into()))?
                                .parse()
                                .map_err(|e: crate::scalar::ScalarParseError| {
                                    NchError::Parse(e.to_string())
                                })?;
                            v = v.add(&SparseVec::single(i, s));
                        }
                        span.push(v);
                    }
                    _ => return Err(NchError::Parse("ideal entries: index or vector".into())),
                }
            }
            Some(span)
        }
    };
    Ok(LoadedAlgebra { algebra: alg, ideal })
}

/// Resolve a built-in name or a JSON file path.
pub fn load_algebra(source: &str) -> Result<LoadedAlgebra> {
    if let Some(a) = builtin(source) {
        return Ok(LoadedAlgebra { algebra: a, ideal: None });
    }
    let text = std::fs::read_to_string(source)?;
    parse_algebra_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_validate() {
        for name in BUILTIN_NAMES {
            let a = builtin(name).unwrap();
            let report = validate(&a);
            assert!(report.is_valid(), "{name} failed validation: {report:?}");
        }
    }

    #[test]
    fn m2_dims_and_unit() {
        let m2 = algebra_m2();
        assert_eq!(m2.dim, 4);
        assert!(m2.unital);
        // unit acts as identity (validated), and M2 is not commutative
        let a = m2.basis_element(2);
        let b = m2.basis_element(3);
        assert_ne!(a.mul(&b), b.mul(&a));
    }

    #[test]
    fn tampered_associativity_detected() {
        // e0*e0 = e1, e0*e1 = e0, everything else zero: not associative
        let alg = build(
            "bad",
            vec!["a".into(), "b".into()],
            false,
            table(2, |i, j| match (i, j) {
                (0, 0) => SparseVec::unit(1),
                (0, 1) => SparseVec::unit(0),
                _ => SparseVec::zero(),
            }),
        );
        let report = validate(&alg);
        assert!(!report.assoc_defects.is_empty());
    }

    #[test]
    fn unitalize_strict_upper() {
        let a = unitalize(&algebra_strict_upper2());
        assert_eq!(a.dim, 2);
        assert!(validate(&a).is_valid());
        let n = a.basis_element(1);
        assert!(n.mul(&n).is_zero());
    }

    #[test]
    fn square_zero_c_by_c() {
        let c = algebra_c();
        let m = Bimodule::regular(&c);
        let ext = square_zero_extension(&c, &m).unwrap();
        assert_eq!(ext.dim, 2);
        assert!(validate(&ext).is_valid());
        let eps = ext.basis_element(1);
        assert!(eps.mul(&eps).is_zero());
    }

    #[test]
    fn quotient_upper2_by_strict() {
        let r = algebra_upper2();
        let span = vec![SparseVec::unit(2)];
        let q = quotient_by_ideal(&r, &span).unwrap();
        assert_eq!(q.dim, 2);
        assert!(q.unital);
        assert!(validate(&q).is_valid());
    }

    #[test]
    fn non_ideal_rejected() {
        let m2 = algebra_m2();
        // span{e12} is not an ideal in M2
        let err = quotient_by_ideal(&m2, &[SparseVec::unit(2)]);
        assert!(matches!(err, Err(NchError::NonIdeal)));
    }

    #[test]
    fn inverse_over_dual_numbers() {
        let d = algebra_dual();
        let x = d.element(SparseVec::collect(vec![
            (0, Scalar::one()),
            (1, Scalar::one()),
        ])); // 1 + eps
        let inv = x.inverse().unwrap();
        assert_eq!(inv.coords.get(0), Scalar::one());
        assert_eq!(inv.coords.get(1), Scalar::from_int(-1));
        assert!(d.basis_element(1).inverse().is_err());
    }

    #[test]
    fn json_roundtrip() {
        let text = r#"{
            "name": "dual-json",
            "dim": 2,
            "unital": true,
            "basis": ["1", "eps"],
            "structure": [[0,0,0,"1"],[0,1,1,"1"],[1,0,1,"1"]]
        }"#;
        let loaded = parse_algebra_json(text).unwrap();
        assert_eq!(loaded.algebra.dim, 2);
        assert!(validate(&loaded.algebra).is_valid());
    }
}
