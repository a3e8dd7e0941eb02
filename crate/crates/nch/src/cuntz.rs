//! The Cuntz algebra QA realized as noncommutative forms with the
//! Fedosov product, the mu identification on generators, and the
//! dihedral subalgebra generated by the two involutions over the
//! unitalized ground field, with exact truncated series for L and W_t.

use crate::algebra::{unitalize, FinDimAlgebra};
use crate::error::{NchError, Result};
use crate::forms::{Convention, FormsCtx, GradedChain, OpKind, Overflow};
use crate::linalg::{Echelon, SparseVec};
use crate::poly::{binomial_poly, Poly};
use crate::scalar::Scalar;

/// Q-algebra context: reduced forms of a unital algebra with the Fedosov
/// product, elements read through mu: p(a_0) q(a_1)...q(a_n) <->
/// a_0 da_1 ... da_n.
pub struct CuntzCtx {
    pub forms: FormsCtx,
}

impl CuntzCtx {
    pub fn new(algebra: &FinDimAlgebra, n_max: usize) -> Result<Self> {
        Ok(CuntzCtx { forms: FormsCtx::new(algebra, Convention::Reduced, n_max)? })
    }

    pub fn truncation(&self) -> usize {
        self.forms.n_max
    }

    /// Even generator p(a): the degree-0 form a.
    pub fn p_of(&self, coords: &SparseVec) -> GradedChain {
        GradedChain::single(self.truncation(), 0, coords.clone())
    }

    /// Odd generator q(a) = da.
    pub fn q_of(&self, coords: &SparseVec) -> Result<GradedChain> {
        let a = self.p_of(coords);
        self.forms.apply(OpKind::D, &a)
    }

    /// iota(a) = p(a) + q(a) = a + da.
    pub fn iota(&self, coords: &SparseVec) -> Result<GradedChain> {
        Ok(self.p_of(coords).add(&self.q_of(coords)?))
    }

    /// Multiplication in QA = (Omega A, Fedosov).
    pub fn multiply(&self, x: &GradedChain, y: &GradedChain) -> Result<GradedChain> {
        self.forms.fedosov(x, y, Overflow::Strict)
    }

    /// Multiplication mod degrees beyond the truncation (for series).
    pub fn multiply_mod(&self, x: &GradedChain, y: &GradedChain) -> Result<GradedChain> {
        self.forms.fedosov(x, y, Overflow::Truncate)
    }

    pub fn one(&self) -> GradedChain {
        self.forms.fedosov_one()
    }

    /// Canonical automorphism gamma: negate odd form degrees.
    pub fn gamma(&self, x: &GradedChain) -> GradedChain {
        let mut out = GradedChain::zero(x.truncation);
        for (deg, v) in &x.parts {
            let s = if deg % 2 == 0 { v.clone() } else { v.neg() };
            out = out.add(&GradedChain::single(x.truncation, *deg, s));
        }
        out
    }

    /// Folding map: project to degree 0 (sets q = 0).
    pub fn fold(&self, x: &GradedChain) -> SparseVec {
        x.part(0)
    }

    /// Verify the generator relations on all basis pairs:
    /// p(a b) = p(a) p(b) + q(a) q(b) and
    /// q(a b) = p(a) q(b) + q(a) p(b), plus p(1) = 1, q(1) = 0, and
    /// multiplicativity of the folding map.
    pub fn verify_generator_relations(&self) -> Result<Vec<(String, bool)>> {
        let alg = &self.forms.algebra;
        let mut checks = Vec::new();
        let one_ok =
            self.p_of(&SparseVec::unit(0)) == self.one() && self.q_of(&SparseVec::unit(0))?.is_zero();
        checks.push(("p(1) = 1 and q(1) = 0".to_string(), one_ok));
        let mut p_rel = true;
        let mut q_rel = true;
        let mut fold_hom = true;
        for i in 0..alg.dim {
            let a = SparseVec::unit(i);
            for j in 0..alg.dim {
                let b = SparseVec::unit(j);
                let ab = alg.multiply(&a, &b);
                let pa = self.p_of(&a);
                let pb = self.p_of(&b);
                let qa = self.q_of(&a)?;
                let qb = self.q_of(&b)?;
                let lhs_p = self.p_of(&ab);
                let rhs_p = self.multiply(&pa, &pb)?.add(&self.multiply(&qa, &qb)?);
                // compare in degrees 0..=1 (relations are exact in low
                // degree; higher corrections cancel identically)
                p_rel &= lhs_p == rhs_p;
                let lhs_q = self.q_of(&ab)?;
                let rhs_q = self.multiply(&pa, &qb)?.add(&self.multiply(&qa, &pb)?);
                q_rel &= lhs_q == rhs_q;
                let x = self.iota(&a)?;
                let y = self.iota(&b)?;
                let folded = self.fold(&self.multiply(&x, &y)?);
                fold_hom &= folded == ab;
            }
        }
        checks.push(("p(ab) = p(a)p(b) + q(a)q(b)".to_string(), p_rel));
        checks.push(("q(ab) = p(a)q(b) + q(a)p(b)".to_string(), q_rel));
        checks.push(("folding map is multiplicative".to_string(), fold_hom));
        Ok(checks)
    }
}

// ---------------------------------------------------------------------
// Series with a formal parameter t
// ---------------------------------------------------------------------

/// Polynomial in t with graded-chain coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct TSeries {
    pub coeffs: Vec<GradedChain>,
}

impl TSeries {
    pub fn constant(x: GradedChain) -> Self {
        TSeries { coeffs: vec![x] }
    }

    pub fn coeff(&self, k: usize) -> GradedChain {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| GradedChain::zero(0))
    }

    pub fn add(&self, other: &TSeries) -> TSeries {
        let n = self.coeffs.len().max(other.coeffs.len());
        let trunc = self
            .coeffs
            .first()
            .or(other.coeffs.first())
            .map(|c| c.truncation)
            .unwrap_or(0);
        TSeries {
            coeffs: (0..n)
                .map(|k| {
                    let a = self
                        .coeffs
                        .get(k)
                        .cloned()
                        .unwrap_or_else(|| GradedChain::zero(trunc));
                    let b = other
                        .coeffs
                        .get(k)
                        .cloned()
                        .unwrap_or_else(|| GradedChain::zero(trunc));
                    a.add(&b)
                })
                .collect(),
        }
    }

    /// Substitute t -> -t.
    pub fn negate_t(&self) -> TSeries {
        TSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 0 { c.clone() } else { c.scale(&-Scalar::one()) })
                .collect(),
        }
    }

    /// Apply gamma coefficientwise.
    pub fn gamma(&self, ctx: &CuntzCtx) -> TSeries {
        TSeries { coeffs: self.coeffs.iter().map(|c| ctx.gamma(c)).collect() }
    }

    /// Evaluate at a rational t.
    pub fn eval(&self, t: &Scalar) -> GradedChain {
        let trunc = self.coeffs.first().map(|c| c.truncation).unwrap_or(0);
        let mut acc = GradedChain::zero(trunc);
        let mut power = Scalar::one();
        for c in &self.coeffs {
            acc = acc.add(&c.scale(&power));
            power = &power * t;
        }
        acc
    }
}

// ---------------------------------------------------------------------
// The dihedral subalgebra of Q(C-tilde)
// ---------------------------------------------------------------------

/// Generators and exact truncated series for the dihedral subalgebra:
/// f = 2u - 1 with u the image of the adjoined idempotent in the
/// unitalization of the ground field.
pub struct DihedralCtx {
    pub ctx: CuntzCtx,
    pub f: GradedChain,
    pub p_f: GradedChain,
    pub q_f: GradedChain,
}

impl DihedralCtx {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 2 {
            return Err(NchError::TruncationOverflow(n_max));
        }
        // C-tilde = unitalization of C: basis {1, e}, e^2 = e
        let ground = crate::algebra::algebra_c();
        let c_tilde = unitalize(&ground);
        let ctx = CuntzCtx::new(&c_tilde, n_max)?;
        let e = SparseVec::unit(1);
        let u = ctx.iota(&e)?;
        let f = u.scale(&Scalar::from_int(2)).sub(&ctx.one());
        let p_f = GradedChain::single(n_max, 0, f.part(0));
        let q_f = GradedChain::single(n_max, 1, f.part(1));
        Ok(DihedralCtx { ctx, f, p_f, q_f })
    }

    fn n_max(&self) -> usize {
        self.ctx.truncation()
    }

    /// f is an involution for the Fedosov product.
    pub fn f_squared_is_one(&self) -> Result<bool> {
        Ok(self.ctx.multiply_mod(&self.f, &self.f)? == self.ctx.one())
    }

    /// Fedosov word q(f)^k, truncated.
    pub fn q_power(&self, k: usize) -> Result<GradedChain> {
        let mut acc = self.ctx.one();
        for _ in 0..k {
            acc = self.ctx.multiply_mod(&acc, &self.q_f)?;
        }
        Ok(acc)
    }

    /// Fedosov word p(f) q(f)^k, truncated.
    pub fn pq_power(&self, k: usize) -> Result<GradedChain> {
        self.ctx.multiply_mod(&self.p_f, &self.q_power(k)?)
    }

    /// Direct series L = -sum_{n>=1} (2 f q(f))^n / n mod the truncation.
    pub fn l_direct(&self) -> Result<GradedChain> {
        let base = self
            .ctx
            .multiply_mod(&self.f, &self.q_f)?
            .scale(&Scalar::from_int(2));
        let mut acc = GradedChain::zero(self.n_max());
        let mut power = self.ctx.one();
        for n in 1..=self.n_max() {
            power = self.ctx.multiply_mod(&power, &base)?;
            acc = acc.sub(&power.scale(&Scalar::ratio(1, n as i64)));
        }
        Ok(acc)
    }

    /// Closed form L = -sum_i 2^(2i-1) ((i-1)!)^2/(2i-1)! p(f) q(f)^(2i-1).
    pub fn l_closed(&self) -> Result<GradedChain> {
        let mut acc = GradedChain::zero(self.n_max());
        let mut i = 1usize;
        while 2 * i - 1 <= self.n_max() {
            let fact = Scalar::factorial(i as u64 - 1);
            let coeff = &(&Scalar::from_int(2).pow(2 * i as u64 - 1) * &(&fact * &fact))
                / &Scalar::factorial(2 * i as u64 - 1);
            acc = acc.sub(&self.pq_power(2 * i - 1)?.scale(&coeff));
            i += 1;
        }
        Ok(acc)
    }

    /// W_t = 1 + sum_{n>=1} (-1)^n 2^(2n-1) binom(t/2+n-1, 2n-1)
    ///       ((t/2n) q(f)^(2n) + p(f) q(f)^(2n-1))  as a t-polynomial.
    pub fn w_t(&self) -> Result<TSeries> {
        let mut acc = TSeries::constant(self.ctx.one());
        let mut n = 1usize;
        while 2 * n - 1 <= self.n_max() {
            // binom(x + n - 1, 2n-1) with x = t/2
            let shifted = binomial_poly(&Scalar::from_int(n as i64 - 1), 2 * n - 1);
            // substitute x = t/2: coefficient of t^k picks up 2^-k
            let half_sub = Poly::from_coeffs(
                shifted
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c / &Scalar::from_int(2).pow(k as u64))
                    .collect(),
            );
            let outer = if n % 2 == 0 {
                Scalar::from_int(2).pow(2 * n as u64 - 1)
            } else {
                -Scalar::from_int(2).pow(2 * n as u64 - 1)
            };
            let pq = self.pq_power(2 * n - 1)?;
            let qq = self.q_power(2 * n)?.scale(&Scalar::ratio(1, 2 * n as i64));
            // polynomial coefficients: binom(t) * (t * qq/(n-part) + pq)
            let mut coeffs: Vec<GradedChain> =
                vec![GradedChain::zero(self.n_max()); half_sub.coeffs.len() + 1];
            for (k, c) in half_sub.coeffs.iter().enumerate() {
                let w = &outer * c;
                coeffs[k] = coeffs[k].add(&pq.scale(&w));
                coeffs[k + 1] = coeffs[k + 1].add(&qq.scale(&w));
            }
            acc = acc.add(&TSeries { coeffs });
            n += 1;
        }
        Ok(acc)
    }

    /// exp of a chain with no degree-0 part, mod the truncation.
    pub fn exp(&self, x: &GradedChain) -> Result<GradedChain> {
        if !x.part(0).is_zero() {
            return Err(NchError::Other("exp needs vanishing degree-0 part".into()));
        }
        let mut acc = self.ctx.one();
        let mut power = self.ctx.one();
        for k in 1..=self.n_max() {
            power = self.ctx.multiply_mod(&power, x)?;
            acc = acc.add(&power.scale(&Scalar::factorial(k as u64).inv().unwrap()));
        }
        Ok(acc)
    }

    /// Assert that products of the closed basis {1, q^k, p q^k} stay in
    /// its span, and return the span echelon (flattened coordinates).
    pub fn closed_basis_assertion(&self) -> Result<bool> {
        let words = self.basis_words()?;
        let mut span = Echelon::new();
        for (_, w) in &words {
            span.insert(self.flatten(w));
        }
        for (_, a) in &words {
            for (_, b) in &words {
                let prod = self.ctx.multiply_mod(a, b)?;
                if !span.contains(&self.flatten(&prod)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Express a chain in the word basis; returns (label, coefficient)
    /// pairs or None if outside the span.
    pub fn word_coefficients(&self, x: &GradedChain) -> Result<Option<Vec<(String, Scalar)>>> {
        let words = self.basis_words()?;
        let mut span = Echelon::new();
        for (k, (_, w)) in words.iter().enumerate() {
            span.insert_tagged(self.flatten(w), SparseVec::unit(k));
        }
        let (r, cert) = span.reduce_with_certificate(&self.flatten(x));
        if !r.is_zero() {
            return Ok(None);
        }
        Ok(Some(
            cert.entries
                .iter()
                .map(|(k, c)| (words[*k].0.clone(), c.clone()))
                .collect(),
        ))
    }

    fn basis_words(&self) -> Result<Vec<(String, GradedChain)>> {
        let mut words = vec![("1".to_string(), self.ctx.one())];
        for k in 1..=self.n_max() {
            let label = if k == 1 { "q(f)".to_string() } else { format!("q(f)^{k}") };
            words.push((label, self.q_power(k)?));
        }
        for k in 0..=self.n_max() {
            let label = match k {
                0 => "p(f)".to_string(),
                1 => "p(f)q(f)".to_string(),
                _ => format!("p(f)q(f)^{k}"),
            };
            words.push((label, self.pq_power(k)?));
        }
        Ok(words)
    }

    fn flatten(&self, x: &GradedChain) -> SparseVec {
        // each Omega^k(C-tilde) has dimension 2
        SparseVec::collect(x.parts.iter().flat_map(|(deg, v)| {
            v.entries
                .iter()
                .map(|(i, c)| (deg * 2 + i, c.clone()))
                .collect::<Vec<_>>()
        }))
    }
}

/// The full dihedral verification suite.
#[derive(Clone, Debug)]
pub struct DihedralReport {
    pub checks: Vec<(String, bool)>,
    pub l_leading_coefficients: Vec<(String, Scalar)>,
}

impl DihedralReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

pub fn dihedral_suite(n_max: usize) -> Result<DihedralReport> {
    let d = DihedralCtx::new(n_max)?;
    let mut checks = Vec::new();
    checks.push(("f o f = 1".to_string(), d.f_squared_is_one()?));
    let l_direct = d.l_direct()?;
    let l_closed = d.l_closed()?;
    checks.push((
        format!("closed-form L = direct log series mod degree {n_max}"),
        l_direct == l_closed,
    ));
    // gamma-parity: L^gamma = -L
    checks.push((
        "L is gamma-odd".to_string(),
        d.ctx.gamma(&l_direct) == l_direct.scale(&-Scalar::one()),
    ));
    // exp(L) = f o f^gamma
    let ff_gamma = d.ctx.multiply_mod(&d.f, &d.ctx.gamma(&d.f))?;
    checks.push(("exp(L) = f f^gamma".to_string(), d.exp(&l_direct)? == ff_gamma));
    // the closed basis is multiplicatively closed
    checks.push((
        "span{1, q^k, p q^k} closed under products".to_string(),
        d.closed_basis_assertion()?,
    ));
    // W_t: constant term 1, parity, and the W-conjugation identity
    let w_t = d.w_t()?;
    checks.push((
        "W_t has constant term 1 at t = 0".to_string(),
        w_t.coeff(0) == d.ctx.one(),
    ));
    checks.push((
        "W_{-t} = W_t^gamma".to_string(),
        w_t.negate_t() == w_t.gamma(&d.ctx),
    ));
    let w1 = w_t.eval(&Scalar::one());
    let exp_half = d.exp(&l_direct.scale(&Scalar::ratio(1, 2)))?;
    checks.push(("W_1 = exp(L/2)".to_string(), w1 == exp_half));
    let w_minus = w_t.eval(&-Scalar::one());
    checks.push((
        "W_{-1} W_1 = 1".to_string(),
        d.ctx.multiply_mod(&w_minus, &w1)? == d.ctx.one(),
    ));
    let conj = d
        .ctx
        .multiply_mod(&d.ctx.multiply_mod(&w_minus, &d.f)?, &w1)?;
    checks.push((
        format!("W^-1 f W = f^gamma mod degree {n_max}"),
        conj == d.ctx.gamma(&d.f),
    ));
    let l_leading_coefficients = d
        .word_coefficients(&l_direct)?
        .unwrap_or_default();
    Ok(DihedralReport { checks, l_leading_coefficients })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{algebra_c2, algebra_dual, algebra_m2};

    #[test]
    fn generator_relations_hold() {
        for alg in [algebra_dual(), algebra_c2(), algebra_m2()] {
            let ctx = CuntzCtx::new(&alg, 4).unwrap();
            for (name, ok) in ctx.verify_generator_relations().unwrap() {
                assert!(ok, "{}: {}", alg.name, name);
            }
        }
    }

    #[test]
    fn dihedral_suite_passes() {
        let report = dihedral_suite(6).unwrap();
        assert!(report.all_pass(), "{:?}", report.checks);
    }

    #[test]
    fn l_series_coefficients() {
        let report = dihedral_suite(6).unwrap();
        // leading coefficient -2 on p(f)q(f), -4/3 on p(f)q(f)^3
        let find = |label: &str| -> Scalar {
            report
                .l_leading_coefficients
                .iter()
                .find(|(l, _)| l == label)
                .map(|(_, c)| c.clone())
                .unwrap_or_else(Scalar::zero)
        };
        assert_eq!(find("p(f)q(f)"), Scalar::from_int(-2));
        assert_eq!(find("p(f)q(f)^3"), Scalar::ratio(-4, 3));
        // no even-degree or bare-q words appear in L
        for (label, c) in &report.l_leading_coefficients {
            assert!(
                label.starts_with("p(f)q(f)"),
                "unexpected word {label} with coefficient {c}"
            );
        }
    }
}
