//! Constructive matrix K-theory: idempotent lifting, the Whitehead and
//! Milnor-patching factorizations, the connecting homomorphism, Chern
//! characters and both higher-trace index theorems.

use crate::algebra::{AlgebraElement, Extension, FinDimAlgebra};
use crate::error::{NchError, Result};
use crate::homology::{connes_complex, CyclicBasis};
use crate::linalg::SparseVec;
use crate::matrix::{MatrixOverAlgebra, RingMatrix};
use crate::poly::Poly;
use crate::ring::Ring;
use crate::scalar::{sign, Scalar};

// ---------------------------------------------------------------------
// Idempotent lifting polynomial
// ---------------------------------------------------------------------

/// f_n(x) = ((2n+1)!/(n!)^2) * integral_0^x t^n (1-t)^n dt: the unique
/// polynomial of degree <= 2n+1 that is idempotent mod (x - x^2)^(n+1)
/// with f_n(0) = 0, f_n(1) = 1.
pub fn lifting_polynomial(n: usize) -> Poly {
    let t_minus_t2 = Poly::from_coeffs(vec![Scalar::zero(), Scalar::one(), Scalar::from_int(-1)]);
    let pow = t_minus_t2.pow(n);
    let integral = pow.integral();
    let norm = &Scalar::factorial(2 * n as u64 + 1)
        / &(&Scalar::factorial(n as u64) * &Scalar::factorial(n as u64));
    integral.scale(&norm)
}

/// The Chinese-remainder characterization of f_n, checked as a property:
/// f_n(0) = 0, f_n(1) = 1, f_n = x mod x(1-x), deg <= 2n+1, and
/// f_n^2 - f_n = 0 mod (x - x^2)^(n+1).
pub fn lifting_polynomial_properties(n: usize) -> bool {
    let f = lifting_polynomial(n);
    let x_minus_x2 =
        Poly::from_coeffs(vec![Scalar::zero(), Scalar::one(), Scalar::from_int(-1)]);
    if !f.eval(&Scalar::zero()).is_zero() || !f.eval(&Scalar::one()).is_one() {
        return false;
    }
    if f.degree() > 2 * n + 1 {
        return false;
    }
    let (_, r) = f.sub(&Poly::x()).divrem(&x_minus_x2);
    if !r.is_zero() {
        return false;
    }
    let (_, r) = f.mul(&f).sub(&f).divrem(&x_minus_x2.pow(n + 1));
    r.is_zero()
}

// ---------------------------------------------------------------------
// Whitehead / magic factorizations
// ---------------------------------------------------------------------

fn upper<T: Ring>(phi: &RingMatrix<T>) -> RingMatrix<T> {
    let id = RingMatrix::identity_like(&phi.entries[0], phi.size);
    let zero = RingMatrix::zero_like(&phi.entries[0], phi.size);
    RingMatrix::block2(&id, phi, &zero, &id)
}

fn lower<T: Ring>(phi: &RingMatrix<T>) -> RingMatrix<T> {
    let id = RingMatrix::identity_like(&phi.entries[0], phi.size);
    let zero = RingMatrix::zero_like(&phi.entries[0], phi.size);
    RingMatrix::block2(&id, &zero, phi, &id)
}

fn rotation<T: Ring>(sample: &T, r: usize) -> RingMatrix<T> {
    let id = RingMatrix::identity_like(sample, r);
    let zero = RingMatrix::zero_like(sample, r);
    RingMatrix::block2(&zero, &id.neg(), &id, &zero)
}

/// The four factors of diag(phi, phi^{-1}):
/// [1, phi; 0, 1] [1, 0; -phi^{-1}, 1] [1, phi; 0, 1] [0, -1; 1, 0].
pub struct WhiteheadFactors<T: Ring> {
    pub factors: [RingMatrix<T>; 4],
}

impl<T: Ring> WhiteheadFactors<T> {
    pub fn product(&self) -> RingMatrix<T> {
        self.factors[0]
            .mul(&self.factors[1])
            .mul(&self.factors[2])
            .mul(&self.factors[3])
    }
}

pub fn whitehead_factors<T: Ring>(
    phi: &RingMatrix<T>,
    phi_inv: &RingMatrix<T>,
) -> Result<WhiteheadFactors<T>> {
    let id = RingMatrix::identity_like(&phi.entries[0], phi.size);
    if phi.mul(phi_inv) != id || phi_inv.mul(phi) != id {
        return Err(NchError::LiftCondition("phi_inv is not an inverse".into()));
    }
    Ok(WhiteheadFactors {
        factors: [
            upper(phi),
            lower(&phi_inv.neg()),
            upper(phi),
            rotation(&phi.entries[0], phi.size),
        ],
    })
}

/// diag([x,y], 1) = diag(x, x^{-1}) diag(y, y^{-1}) diag((yx)^{-1}, yx),
/// the commutator embedding behind the Whitehead lemma.
pub fn commutator_embedding<T: Ring>(
    x: &RingMatrix<T>,
    x_inv: &RingMatrix<T>,
    y: &RingMatrix<T>,
    y_inv: &RingMatrix<T>,
) -> (RingMatrix<T>, [RingMatrix<T>; 3]) {
    let r = x.size;
    let sample = &x.entries[0];
    let zero = RingMatrix::zero_like(sample, r);
    let commutator = x.mul(y).mul(x_inv).mul(y_inv);
    let id = RingMatrix::identity_like(sample, r);
    let lhs = RingMatrix::block2(&commutator, &zero, &zero, &id);
    let yx = y.mul(x);
    let yx_inv = x_inv.mul(y_inv);
    let f1 = RingMatrix::block2(x, &zero, &zero, x_inv);
    let f2 = RingMatrix::block2(y, &zero, &zero, y_inv);
    let f3 = RingMatrix::block2(&yx_inv, &zero, &zero, &yx);
    (lhs, [f1, f2, f3])
}

// ---------------------------------------------------------------------
// Milnor patching and the connecting idempotent
// ---------------------------------------------------------------------

pub struct MilnorPatch<T: Ring> {
    pub omega: RingMatrix<T>,
    pub omega_inv: RingMatrix<T>,
    /// e = (p; 1-qp) (qtilde, 1-qp) with qtilde = (1 + (1-qp)) q.
    pub idempotent: RingMatrix<T>,
    pub qtilde: RingMatrix<T>,
    pub x: RingMatrix<T>,
}

/// Patch lifts p, q of an invertible element and its inverse mod the
/// ideal into an exactly idempotent 2r x 2r matrix plus the invertible
/// omega from the magic factorization.
pub fn milnor_patch<T: Ring>(
    p: &RingMatrix<T>,
    q: &RingMatrix<T>,
    in_ideal: &dyn Fn(&T) -> bool,
) -> Result<MilnorPatch<T>> {
    let id = RingMatrix::identity_like(&p.entries[0], p.size);
    let x = id.sub(&q.mul(p)); // 1 - qp
    let y = id.sub(&p.mul(q)); // 1 - pq
    for m in [&x, &y] {
        if !m.entries.iter().all(|v| in_ideal(v)) {
            return Err(NchError::LiftCondition(
                "q p and p q must be 1 modulo the ideal".into(),
            ));
        }
    }
    let omega = upper(p)
        .mul(&lower(&q.neg()))
        .mul(&upper(p))
        .mul(&rotation(&p.entries[0], p.size));
    // inverse of each factor in reverse order
    let rot_inv = {
        let idr = RingMatrix::identity_like(&p.entries[0], p.size);
        let zero = RingMatrix::zero_like(&p.entries[0], p.size);
        RingMatrix::block2(&zero, &idr, &idr.neg(), &zero)
    };
    let omega_inv = rot_inv
        .mul(&upper(&p.neg()))
        .mul(&lower(q))
        .mul(&upper(&p.neg()));
    let qtilde = id.add(&x).mul(q);
    // e = column(p, x) * row(qtilde, x)
    let e = RingMatrix::block2(
        &p.mul(&qtilde),
        &p.mul(&x),
        &x.mul(&qtilde),
        &x.mul(&x),
    );
    Ok(MilnorPatch { omega, omega_inv, idempotent: e, qtilde, x })
}

pub struct ConnectingData<T: Ring> {
    pub x: RingMatrix<T>,
    pub y: RingMatrix<T>,
    pub q_n: RingMatrix<T>,
    pub e_n: RingMatrix<T>,
    pub t: RingMatrix<T>,
    pub t_inv: RingMatrix<T>,
}

/// The explicit idempotent representing the connecting homomorphism:
/// with x = 1-qp, y = 1-pq and q_n = (1 + x + ... + x^(2n-1)) q,
/// e_n = (p; x^n)(q_n, x^n) and T e_0 T^{-1} = e_n.
pub fn connecting_idempotent<T: Ring>(
    p: &RingMatrix<T>,
    q: &RingMatrix<T>,
    n: usize,
) -> Result<ConnectingData<T>> {
    if n == 0 {
        return Err(NchError::LevelBelowPower { n: 0, m: 1 });
    }
    let id = RingMatrix::identity_like(&p.entries[0], p.size);
    let x = id.sub(&q.mul(p));
    let y = id.sub(&p.mul(q));
    let mut geom = id.clone();
    let mut xp = id.clone();
    for _ in 1..2 * n {
        xp = xp.mul(&x);
        geom = geom.add(&xp);
    }
    let q_n = geom.mul(q);
    let xn = x.pow(n);
    let yn = y.pow(n);
    let e_n = RingMatrix::block2(
        &id.sub(&y.pow(2 * n)),
        &p.mul(&xn),
        &xn.mul(&q_n),
        &xn.mul(&xn),
    );
    let t = RingMatrix::block2(p, &yn.neg(), &xn, &q_n);
    let t_inv = RingMatrix::block2(&q_n, &xn, &yn.neg(), p);
    Ok(ConnectingData { x, y, q_n, e_n, t, t_inv })
}

impl<T: Ring> ConnectingData<T> {
    /// All identities the construction promises, as exact checks.
    pub fn verify(&self, p: &RingMatrix<T>, q: &RingMatrix<T>, n: usize) -> Vec<(String, bool)> {
        let id = RingMatrix::identity_like(&p.entries[0], p.size);
        let id2 = RingMatrix::identity_like(&p.entries[0], 2 * p.size);
        let mut checks = Vec::new();
        checks.push((
            "q_n p = 1 - x^(2n)".into(),
            self.q_n.mul(p) == id.sub(&self.x.pow(2 * n)),
        ));
        checks.push((
            "p q_n = 1 - y^(2n)".into(),
            p.mul(&self.q_n) == id.sub(&self.y.pow(2 * n)),
        ));
        checks.push(("e_n idempotent".into(), self.e_n.is_idempotent()));
        checks.push((
            "T T^{-1} = 1".into(),
            self.t.mul(&self.t_inv) == id2 && self.t_inv.mul(&self.t) == id2,
        ));
        let e0 = {
            let zero = RingMatrix::zero_like(&p.entries[0], p.size);
            RingMatrix::block2(&id, &zero, &zero, &zero)
        };
        checks.push((
            "T e_0 T^{-1} = e_n".into(),
            self.t.mul(&e0).mul(&self.t_inv) == self.e_n,
        ));
        let mut ok = true;
        for i in 1..=3usize {
            ok &= self.x.pow(i).mul(q) == q.mul(&self.y.pow(i));
        }
        checks.push(("x^i q = q y^i (i <= 3)".into(), ok));
        checks
    }
}

// ---------------------------------------------------------------------
// K-classes and Chern characters over finite-dimensional algebras
// ---------------------------------------------------------------------

pub enum KClass {
    Idempotent(MatrixOverAlgebra),
    Invertible {
        u: MatrixOverAlgebra,
        u_inv: MatrixOverAlgebra,
    },
}

impl KClass {
    pub fn verify(&self) -> Result<()> {
        match self {
            KClass::Idempotent(e) => {
                if e.is_idempotent() {
                    Ok(())
                } else {
                    Err(NchError::LiftCondition("matrix is not idempotent".into()))
                }
            }
            KClass::Invertible { u, u_inv } => {
                let id = RingMatrix::identity_like(&u.entries[0], u.size);
                if u.mul(u_inv) == id && u_inv.mul(u) == id {
                    Ok(())
                } else {
                    Err(NchError::LiftCondition("u u^{-1} != 1".into()))
                }
            }
        }
    }

    pub fn algebra(&self) -> FinDimAlgebra {
        match self {
            KClass::Idempotent(e) => e.entries[0].algebra.clone(),
            KClass::Invertible { u, .. } => u.entries[0].algebra.clone(),
        }
    }
}

/// Generalized trace of a tensor power of a matrix: the chain
/// sum over index loops of m_{i_0 i_1} (x) m_{i_1 i_2} (x) ... (x)
/// m_{i_k i_0}, in plain A^(x)(k+1) coordinates.
fn matrix_tensor_trace(entries: &[&MatrixOverAlgebra]) -> SparseVec {
    let r = entries[0].size;
    let d = entries[0].entries[0].algebra.dim;
    let k = entries.len();
    let mut acc: Vec<(usize, Scalar)> = Vec::new();
    // iterate over index loops i_0, ..., i_{k-1}
    let total = r.pow(k as u32);
    for loop_code in 0..total {
        let mut idx = vec![0usize; k];
        let mut c = loop_code;
        for slot in (0..k).rev() {
            idx[slot] = c % r;
            c /= r;
        }
        // tensor product of the k entries around the loop
        let mut partial: Vec<(usize, Scalar)> = vec![(0, Scalar::one())];
        for slot in 0..k {
            let m = entries[slot].at(idx[slot], idx[(slot + 1) % k]);
            if m.coords.is_zero() {
                partial.clear();
                break;
            }
            let mut next = Vec::with_capacity(partial.len() * m.coords.entries.len());
            for (code, coeff) in &partial {
                for (i, ci) in &m.coords.entries {
                    next.push((code * d + i, coeff * ci));
                }
            }
            partial = next;
        }
        acc.extend(partial);
    }
    SparseVec::collect(acc)
}

/// A cyclic cycle: coordinates in the C^lambda basis at its degree.
pub struct CyclicCycle {
    pub degree: usize,
    pub class: SparseVec,
    pub basis: CyclicBasis,
    /// b applied to the class (must be zero for a cycle).
    pub boundary_is_zero: bool,
}

/// Even Chern character Ch_(2n)[e] = ((2n)!/n!) [tr (e)_(2n+1)].
pub fn chern_character_even(e: &MatrixOverAlgebra, n: usize) -> Result<CyclicCycle> {
    let algebra = e.entries[0].algebra.clone();
    let k = 2 * n + 1;
    let refs: Vec<&MatrixOverAlgebra> = std::iter::repeat(e).take(k).collect();
    let plain = matrix_tensor_trace(&refs);
    let factor = &Scalar::factorial(2 * n as u64) / &Scalar::factorial(n as u64);
    let model = connes_complex(&algebra, 2 * n)?;
    let basis = CyclicBasis::new(algebra.dim, 2 * n);
    let class = basis.project_plain(&plain).scale(&factor);
    let boundary_is_zero = if 2 * n >= 1 {
        model.complex.diffs[2 * n].apply(&class).is_zero()
    } else {
        true
    };
    Ok(CyclicCycle { degree: 2 * n, class, basis, boundary_is_zero })
}

/// Odd Chern character Ch_(2n-1)[u] = (n-1)! [tr (u^{-1}-1, u-1)_(2n)].
pub fn chern_character_odd(
    u: &MatrixOverAlgebra,
    u_inv: &MatrixOverAlgebra,
    n: usize,
) -> Result<CyclicCycle> {
    if n == 0 {
        return Err(NchError::LevelBelowPower { n: 0, m: 1 });
    }
    let algebra = u.entries[0].algebra.clone();
    let id = RingMatrix::identity_like(&u.entries[0], u.size);
    let a = u_inv.sub(&id);
    let b = u.sub(&id);
    let mut refs: Vec<&MatrixOverAlgebra> = Vec::with_capacity(2 * n);
    for _ in 0..n {
        refs.push(&a);
        refs.push(&b);
    }
    let plain = matrix_tensor_trace(&refs);
    // (u^{-1}-1, u-1)_{2n} lives in C^lambda_{2n-1}
    let degree = 2 * n - 1;
    let model = connes_complex(&algebra, degree)?;
    let basis = CyclicBasis::new(algebra.dim, degree);
    let class = basis
        .project_plain(&plain)
        .scale(&Scalar::factorial(n as u64 - 1));
    let boundary_is_zero = model.complex.diffs[degree].apply(&class).is_zero();
    Ok(CyclicCycle { degree, class, basis, boundary_is_zero })
}

// ---------------------------------------------------------------------
// Even higher traces and the even index theorem
// ---------------------------------------------------------------------

/// An even higher trace: extension A = R/I with a trace on R/I^(m+1),
/// here given as a functional on R vanishing on [R,R] and on I^(m+1).
pub struct EvenHigherTrace {
    pub ext: Extension,
    pub power: usize,
    pub tau: SparseVec,
}

impl EvenHigherTrace {
    pub fn new(ext: Extension, power: usize, tau: SparseVec) -> Result<Self> {
        let r = &ext.r;
        // trace condition on a spanning set of the commutator space
        for i in 0..r.dim {
            for j in 0..r.dim {
                let comm = r
                    .multiply(&SparseVec::unit(i), &SparseVec::unit(j))
                    .sub(&r.multiply(&SparseVec::unit(j), &SparseVec::unit(i)));
                if !comm.dot(&tau).is_zero() {
                    return Err(NchError::LiftCondition(format!(
                        "tau is not a trace: fails on [e_{i}, e_{j}]"
                    )));
                }
            }
        }
        let high = ext.ideal_power(power + 1);
        for v in high.rows() {
            if !v.dot(&tau).is_zero() {
                return Err(NchError::LiftCondition(
                    "tau does not vanish on I^(m+1)".into(),
                ));
            }
        }
        Ok(EvenHigherTrace { ext, power, tau })
    }

    /// tau applied to the matrix trace of a matrix over R.
    pub fn tau_matrix(&self, m: &RingMatrix<AlgebraElement>) -> Scalar {
        m.trace().coords.dot(&self.tau)
    }

    /// Entrywise based lift of a matrix over A = R/I into M_r(R).
    /// `variant` selects between the canonical section and a perturbed
    /// one (for lift-independence tests).
    pub fn lift_matrix(
        &self,
        e: &MatrixOverAlgebra,
        variant: usize,
    ) -> RingMatrix<AlgebraElement> {
        let r_alg = &self.ext.r;
        let perturb: Option<SparseVec> = if variant == 0 {
            None
        } else {
            self.ext.ideal_basis().into_iter().next()
        };
        e.map(|entry| {
            let mut lifted = self.ext.lift(&entry.coords);
            if let Some(w) = &perturb {
                // add w * (sum of non-unit coordinates): still a section,
                // still based
                let mut weight = Scalar::zero();
                for (i, c) in &entry.coords.entries {
                    if *i != 0 {
                        weight += c;
                    }
                }
                lifted = lifted.add_scaled(w, &weight);
            }
            r_alg.element(lifted)
        })
    }
}

/// Report of one index computation: the two routes and their agreement.
#[derive(Clone, Debug, serde::Serialize)]
pub struct IndexReport {
    pub direct: String,
    pub paired: String,
    pub equal: bool,
}

/// Direct even index: ind_tau[e] = tau~(f_n(rho~(e))), equivalently the
/// exact t-integral ((2n+1)!/(n!)^2) int tau~(F(tF - t^2 F^2)^n) dt.
pub fn even_index_direct(
    ht: &EvenHigherTrace,
    e: &MatrixOverAlgebra,
    n: usize,
    lift_variant: usize,
) -> Result<Scalar> {
    if n < ht.power {
        return Err(NchError::LevelBelowPower { n, m: ht.power });
    }
    let f = ht.lift_matrix(e, lift_variant);
    // route 1: lifting polynomial
    let fn_poly = lifting_polynomial(n);
    let mut horner = RingMatrix::zero_like(&f.entries[0], f.size);
    for c in fn_poly.coeffs.iter().rev() {
        horner = f.mul(&horner);
        if !c.is_zero() {
            horner = horner.add(&RingMatrix::identity_like(&f.entries[0], f.size).scale(c));
        }
    }
    let via_poly = ht.tau_matrix(&horner);
    // route 2: exact t-integral of F(tF - t^2 F^2)^n
    let f2 = f.mul(&f);
    // (tF - t^2 F^2)^n as polynomial in t with matrix coefficients
    let mut tpoly: Vec<RingMatrix<AlgebraElement>> =
        vec![RingMatrix::identity_like(&f.entries[0], f.size)];
    for _ in 0..n {
        let mut next =
            vec![RingMatrix::zero_like(&f.entries[0], f.size); tpoly.len() + 2];
        for (k, m) in tpoly.iter().enumerate() {
            next[k + 1] = next[k + 1].add(&m.mul(&f));
            next[k + 2] = next[k + 2].sub(&m.mul(&f2));
        }
        tpoly = next;
    }
    let mut integral = Scalar::zero();
    for (k, m) in tpoly.iter().enumerate() {
        let v = ht.tau_matrix(&f.mul(m));
        integral += &(&v / &Scalar::from_int((k + 1) as i64));
    }
    let norm = &Scalar::factorial(2 * n as u64 + 1)
        / &(&Scalar::factorial(n as u64) * &Scalar::factorial(n as u64));
    let via_integral = &integral * &norm;
    if via_poly != via_integral {
        return Err(NchError::Other(
            "internal: lifting-polynomial and t-integral routes disagree".into(),
        ));
    }
    Ok(via_poly)
}

/// Pairing route: < cs_(2n+1)(tau, rho), ((2n)!/n!) tr (e)_(2n+1) >.
/// Evaluated without building tables: for each index loop of e and each
/// cyclic rotation, integrate tau(rho(x_0) w_t(x_1,x_2)...w_t(..)) in t.
pub fn even_index_paired(
    ht: &EvenHigherTrace,
    e: &MatrixOverAlgebra,
    n: usize,
    lift_variant: usize,
) -> Result<Scalar> {
    if n < ht.power {
        return Err(NchError::LevelBelowPower { n, m: ht.power });
    }
    let r_alg = &ht.ext.r;
    let a_alg = e.entries[0].algebra.clone();
    let r = e.size;
    let k = 2 * n + 1;
    // rho on A-coordinates (same lift as the direct route)
    let lift_of = |coords: &SparseVec| -> SparseVec {
        let dummy = a_alg.element(coords.clone());
        let m = RingMatrix::from_rows(vec![vec![dummy]]);
        ht.lift_matrix(&m, lift_variant).entries[0].coords.clone()
    };
    // omega_t(a, b) = t rho(ab) - t^2 rho(a) rho(b), a polynomial in t
    let omega_t = |a: &SparseVec, b: &SparseVec| -> Vec<SparseVec> {
        let ab = a_alg.multiply(a, b);
        let first = lift_of(&ab);
        let second = r_alg.multiply(&lift_of(a), &lift_of(b));
        vec![SparseVec::zero(), first, second.neg()]
    };
    // polynomial-in-t product of R-valued coefficients
    let polymul = |x: &[SparseVec], y: &[SparseVec]| -> Vec<SparseVec> {
        let mut out = vec![SparseVec::zero(); x.len() + y.len() - 1];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                out[i + j] = out[i + j].add(&r_alg.multiply(xi, yj));
            }
        }
        out
    };
    let g_value = |args: &[&SparseVec]| -> Scalar {
        // (1/n!) int tau( rho(x_0) prod omega_t(x_{2i-1}, x_{2i}) ) dt
        let mut acc = vec![lift_of(args[0])];
        for i in 0..n {
            let w = omega_t(args[2 * i + 1], args[2 * i + 2]);
            acc = polymul(&acc, &w);
        }
        let mut integral = Scalar::zero();
        for (kk, coeff) in acc.iter().enumerate() {
            integral += &(&coeff.dot(&ht.tau) / &Scalar::from_int((kk + 1) as i64));
        }
        &integral / &Scalar::factorial(n as u64)
    };
    // sum over index loops and cyclic rotations (lambda sign is +1 in
    // even cochain degree 2n)
    let mut total = Scalar::zero();
    let loops = r.pow(k as u32);
    for code in 0..loops {
        let mut idx = vec![0usize; k];
        let mut c = code;
        for slot in (0..k).rev() {
            idx[slot] = c % r;
            c /= r;
        }
        let entries: Vec<&SparseVec> = (0..k)
            .map(|slot| &e.at(idx[slot], idx[(slot + 1) % k]).coords)
            .collect();
        for rot in 0..k {
            let rotated: Vec<&SparseVec> =
                (0..k).map(|s| entries[(s + k - rot) % k]).collect();
            total += &g_value(&rotated);
        }
    }
    let factor = &Scalar::factorial(2 * n as u64) / &Scalar::factorial(n as u64);
    Ok(&total * &factor)
}

/// Full even index theorem check: direct = paired, lift independence,
/// and n-stability.
pub fn even_index_theorem(
    ht: &EvenHigherTrace,
    e: &MatrixOverAlgebra,
    n: usize,
) -> Result<(Scalar, Vec<(String, bool)>)> {
    let direct = even_index_direct(ht, e, n, 0)?;
    let paired = even_index_paired(ht, e, n, 0)?;
    let mut checks = vec![("direct = paired".to_string(), direct == paired)];
    let direct2 = even_index_direct(ht, e, n, 1)?;
    checks.push(("lift independence".into(), direct == direct2));
    let stable = even_index_direct(ht, e, n + 1, 0)?;
    checks.push(("n-stability".into(), direct == stable));
    Ok((direct, checks))
}

// ---------------------------------------------------------------------
// Odd index: direct trace formula, generic over the operator ring
// ---------------------------------------------------------------------

/// ind_tau[u] = tau~((1 - qp)^n - (1 - pq)^n) for lifts p, q of u, u^{-1}.
pub fn odd_index_direct<T: Ring>(
    tau: &dyn Fn(&T) -> Scalar,
    p: &RingMatrix<T>,
    q: &RingMatrix<T>,
    n: usize,
) -> Scalar {
    let id = RingMatrix::identity_like(&p.entries[0], p.size);
    let x = id.sub(&q.mul(p));
    let y = id.sub(&p.mul(q));
    let diff = x.pow(n).sub(&y.pow(n));
    tau(&diff.trace())
}

/// Odd pairing < ch_(2n)(tau, rho), (n-1)! tr (u^{-1}-1, u-1)_(2n) > for
/// 1 x 1 classes: the arguments alternate a = u^{-1}-1, b = u-1, the
/// curvature omega(x,y) = rho(xy) - rho(x) rho(y) is multiplied out in
/// the operator ring, and the cyclic norm is applied with the lambda
/// sign (-1)^(2n-1) per rotation.  The caller supplies a and b together
/// with the symbol product composed with rho (see the toeplitz module
/// for the concrete instantiation).
pub fn odd_pairing_rank_one<S: Clone, T: Ring>(
    mul: &dyn Fn(&S, &S) -> S,
    rho: &dyn Fn(&S) -> T,
    tau: &dyn Fn(&T) -> Scalar,
    a: &S,
    b: &S,
    n: usize,
) -> Scalar {
    assert!(n >= 1);
    let args: Vec<&S> = (0..2 * n).map(|i| if i % 2 == 0 { a } else { b }).collect();
    let omega = |x: &S, y: &S| -> T {
        let xy = mul(x, y);
        rho(&xy).sub(&rho(x).mul(&rho(y)))
    };
    let eval = |args: &[&S]| -> Scalar {
        let mut acc: Option<T> = None;
        for i in 0..n {
            let w = omega(args[2 * i], args[2 * i + 1]);
            acc = Some(match acc {
                None => w,
                Some(cur) => cur.mul(&w),
            });
        }
        tau(&acc.expect("n >= 1"))
    };
    let mut total = Scalar::zero();
    let k = 2 * n;
    for rot in 0..k {
        let rotated: Vec<&S> = (0..k).map(|s| args[(s + k - rot) % k]).collect();
        let s = sign(rot as i64); // lambda sign (-1)^((2n-1) rot)
        total += &(&s * &eval(&rotated));
    }
    &(&total / &Scalar::factorial(n as u64)) * &Scalar::factorial(n as u64 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{algebra_c, algebra_dual, algebra_upper2, Extension};

    #[test]
    fn lifting_polynomials() {
        assert_eq!(lifting_polynomial(0), Poly::x());
        // f_1 = 3x^2 - 2x^3
        let f1 = lifting_polynomial(1);
        assert_eq!(
            f1,
            Poly::from_coeffs(vec![
                Scalar::zero(),
                Scalar::zero(),
                Scalar::from_int(3),
                Scalar::from_int(-2),
            ])
        );
        for n in 0..=3 {
            assert!(lifting_polynomial_properties(n), "CRT property at n={n}");
        }
    }

    #[test]
    fn whitehead_product_is_diagonal() {
        let c = algebra_c();
        let two = MatrixOverAlgebra::scalar_diag(&c, &[Scalar::from_int(2)]);
        let half = MatrixOverAlgebra::scalar_diag(&c, &[Scalar::ratio(1, 2)]);
        let w = whitehead_factors(&two, &half).unwrap();
        let expect = RingMatrix::block2(
            &two,
            &RingMatrix::zero_like(&two.entries[0], 1),
            &RingMatrix::zero_like(&two.entries[0], 1),
            &half,
        );
        assert_eq!(w.product(), expect);
        // identity input: product is the identity
        let id = MatrixOverAlgebra::scalar_diag(&c, &[Scalar::one()]);
        let w = whitehead_factors(&id, &id).unwrap();
        assert_eq!(w.product(), RingMatrix::identity_like(&id.entries[0], 2));
    }

    #[test]
    fn whitehead_over_dual_numbers() {
        let d = algebra_dual();
        let one_plus = d.element(SparseVec::collect(vec![
            (0, Scalar::one()),
            (1, Scalar::one()),
        ]));
        let m = RingMatrix::from_rows(vec![vec![one_plus]]);
        let m_inv = m.inverse().unwrap();
        let w = whitehead_factors(&m, &m_inv).unwrap();
        let expect = RingMatrix::block2(
            &m,
            &RingMatrix::zero_like(&m.entries[0], 1),
            &RingMatrix::zero_like(&m.entries[0], 1),
            &m_inv,
        );
        assert_eq!(w.product(), expect);
    }

    #[test]
    fn commutator_embedding_identity() {
        let c = algebra_c();
        let x = MatrixOverAlgebra::scalar_diag(&c, &[Scalar::from_int(3)]);
        let x_inv = MatrixOverAlgebra::scalar_diag(&c, &[Scalar::ratio(1, 3)]);
        let y = MatrixOverAlgebra::scalar_diag(&c, &[Scalar::from_int(5)]);
        let y_inv = MatrixOverAlgebra::scalar_diag(&c, &[Scalar::ratio(1, 5)]);
        let (lhs, factors) = commutator_embedding(&x, &x_inv, &y, &y_inv);
        assert_eq!(lhs, factors[0].mul(&factors[1]).mul(&factors[2]));
    }

    #[test]
    fn milnor_patch_trivial_ideal() {
        let c = algebra_c();
        let p = MatrixOverAlgebra::scalar_diag(&c, &[Scalar::from_int(2)]);
        let q = MatrixOverAlgebra::scalar_diag(&c, &[Scalar::ratio(1, 2)]);
        let patch = milnor_patch(&p, &q, &|v| v.is_zero()).unwrap();
        assert!(patch.idempotent.is_idempotent());
        let id2 = RingMatrix::identity_like(&p.entries[0], 2);
        assert_eq!(patch.omega.mul(&patch.omega_inv), id2);
        // e = diag(1, 0) exactly when qp = 1
        let e0 = RingMatrix::block2(
            &RingMatrix::identity_like(&p.entries[0], 1),
            &RingMatrix::zero_like(&p.entries[0], 1),
            &RingMatrix::zero_like(&p.entries[0], 1),
            &RingMatrix::zero_like(&p.entries[0], 1),
        );
        assert_eq!(patch.idempotent, e0);
    }

    #[test]
    fn milnor_patch_dual_numbers() {
        let d = algebra_dual();
        let one_plus = d.element(SparseVec::collect(vec![
            (0, Scalar::one()),
            (1, Scalar::one()),
        ]));
        let one_minus = d.element(SparseVec::collect(vec![
            (0, Scalar::one()),
            (1, Scalar::from_int(-1)),
        ]));
        let p = RingMatrix::from_rows(vec![vec![one_plus]]);
        let q = RingMatrix::from_rows(vec![vec![one_minus]]);
        let in_ideal = |v: &AlgebraElement| v.coords.get(0).is_zero();
        let patch = milnor_patch(&p, &q, &|v| in_ideal(v)).unwrap();
        assert!(patch.idempotent.is_idempotent());
        let id2 = RingMatrix::identity_like(&p.entries[0], 2);
        assert_eq!(patch.omega.mul(&patch.omega_inv), id2);
        assert_eq!(patch.omega_inv.mul(&patch.omega), id2);
        // qtilde p - 1 lies in I^2 = 0, i.e. qtilde p = 1
        let qp = patch.qtilde.mul(&p);
        assert_eq!(qp, RingMatrix::identity_like(&p.entries[0], 1));
    }

    #[test]
    fn connecting_idempotent_commuting_lifts() {
        let c = algebra_c();
        let p = MatrixOverAlgebra::scalar_diag(&c, &[Scalar::from_int(2)]);
        let q = MatrixOverAlgebra::scalar_diag(&c, &[Scalar::ratio(1, 2)]);
        let data = connecting_idempotent(&p, &q, 1).unwrap();
        for (name, ok) in data.verify(&p, &q, 1) {
            assert!(ok, "{name}");
        }
        // commuting exact lifts: e_n = e_0
        let e0 = RingMatrix::block2(
            &RingMatrix::identity_like(&p.entries[0], 1),
            &RingMatrix::zero_like(&p.entries[0], 1),
            &RingMatrix::zero_like(&p.entries[0], 1),
            &RingMatrix::zero_like(&p.entries[0], 1),
        );
        assert_eq!(data.e_n, e0);
    }

    #[test]
    fn chern_characters_are_cycles() {
        let c = algebra_c();
        let e = MatrixOverAlgebra::scalar_diag(&c, &[Scalar::one(), Scalar::zero()]);
        let ch0 = chern_character_even(&e, 0).unwrap();
        assert!(ch0.boundary_is_zero);
        // Ch_0[e] = tr(e) = 1 in C^lambda_0(C) = C
        assert_eq!(ch0.class, SparseVec::unit(0));
        let ch2 = chern_character_even(&e, 1).unwrap();
        assert!(ch2.boundary_is_zero);
    }

    #[test]
    fn even_chern_cycle_over_m2_entries() {
        // an idempotent with genuinely non-commuting entries:
        // e = [[1, x], [0, 0]] over upper2 is idempotent
        let a = algebra_upper2();
        let one = a.one_element();
        let x = a.basis_element(2);
        let zero = a.zero_element();
        let e = RingMatrix::from_rows(vec![vec![one, x], vec![zero.clone(), zero]]);
        assert!(e.is_idempotent());
        let ch = chern_character_even(&e, 1).unwrap();
        assert!(ch.boundary_is_zero, "b Ch_2[e] must vanish");
    }

    #[test]
    fn even_index_trivial_extension() {
        // I = 0, R = A = C^2-like: tau = evaluation; ind = tau(e)
        let a = crate::algebra::algebra_c2();
        let ext = Extension::new(&a, &[]).unwrap();
        // trace functional: tau(1) = 2, tau(s) = 1 (eigenvalue sums)
        let tau = SparseVec::collect(vec![
            (0, Scalar::from_int(2)),
            (1, Scalar::one()),
        ]);
        let ht = EvenHigherTrace::new(ext, 0, tau).unwrap();
        let e = RingMatrix::from_rows(vec![vec![ht.ext.quotient.basis_element(1)]]);
        assert!(e.is_idempotent());
        let (ind, checks) = even_index_theorem(&ht, &e, 1).unwrap();
        for (name, ok) in checks {
            assert!(ok, "{name}");
        }
        assert_eq!(ind, Scalar::one());
    }

    #[test]
    fn even_index_nilpotent_extension_dual() {
        // R = dual numbers, I = (eps), m = 1, e = 1 in C
        let r = algebra_dual();
        let ext = Extension::new(&r, &[SparseVec::unit(1)]).unwrap();
        assert_eq!(ext.quotient.dim, 1);
        // tau(x + y eps) = x + 3y: a trace since R is commutative;
        // vanishes on I^2 = 0
        let tau = SparseVec::collect(vec![
            (0, Scalar::one()),
            (1, Scalar::from_int(3)),
        ]);
        let ht = EvenHigherTrace::new(ext, 1, tau).unwrap();
        let e = RingMatrix::from_rows(vec![vec![ht.ext.quotient.one_element()]]);
        let (ind, checks) = even_index_theorem(&ht, &e, 1).unwrap();
        for (name, ok) in checks {
            assert!(ok, "{name}");
        }
        // f_1(lift of 1) = 1 exactly, so ind = tau(1) = 1
        assert_eq!(ind, Scalar::one());
    }
}
