//! Dense univariate polynomials over exact scalars.
//!
//! Used for the spectral projection (Bezout identities in the Karoubi
//! operator), idempotent lifting polynomials, formal deformation
//! parameters and root counting for Toeplitz symbols.

use crate::scalar::Scalar;

/// Coefficients in increasing degree; no trailing zeros (zero = empty).
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly {
    pub coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![Scalar::one()] }
    }

    pub fn x() -> Self {
        Poly { coeffs: vec![Scalar::zero(), Scalar::one()] }
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn monomial(c: Scalar, deg: usize) -> Self {
        let mut coeffs = vec![Scalar::zero(); deg + 1];
        coeffs[deg] = c;
        Poly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        if self.coeffs.is_empty() {
            0
        } else {
            self.coeffs.len() - 1
        }
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn leading(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs(
            (0..n)
                .map(|k| &self.coeff(k) + &other.coeff(k))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs(
            (0..n)
                .map(|k| &self.coeff(k) - &other.coeff(k))
                .collect(),
        )
    }

    pub fn neg(&self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|v| v * c).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn pow(&self, e: usize) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Division with remainder; `other` must be nonzero.
    pub fn divrem(&self, other: &Poly) -> (Poly, Poly) {
        assert!(!other.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut quo = Poly::zero();
        let dlead = other.leading();
        let dinv = dlead.inv().expect("nonzero leading coefficient");
        while !rem.is_zero() && rem.degree() >= other.degree() {
            let shift = rem.degree() - other.degree();
            let c = &rem.leading() * &dinv;
            let term = Poly::monomial(c, shift);
            rem = rem.sub(&term.mul(other));
            quo = quo.add(&term);
        }
        (quo, rem)
    }

    /// Extended gcd: returns (g, s, t) monic with `g = s*self + t*other`.
    pub fn xgcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let ns = s0.sub(&q.mul(&s1));
            let nt = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = ns;
            t0 = t1;
            t1 = nt;
        }
        if r0.is_zero() {
            return (Poly::zero(), Poly::one(), Poly::zero());
        }
        let inv = r0.leading().inv().unwrap();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(k, c)| &Scalar::from_int((k + 1) as i64) * c)
                .collect(),
        )
    }

    /// Exact antiderivative with zero constant term.
    pub fn integral(&self) -> Poly {
        let mut out = vec![Scalar::zero()];
        for (k, c) in self.coeffs.iter().enumerate() {
            out.push(c / &Scalar::from_int((k + 1) as i64));
        }
        Poly::from_coeffs(out)
    }

    /// `1 + x + ... + x^(n-1)`.
    pub fn geometric_sum(n: usize) -> Poly {
        Poly::from_coeffs(vec![Scalar::one(); n])
    }

    /// Apply the polynomial to a square sparse matrix (Horner).
    pub fn eval_matrix(&self, m: &crate::linalg::SparseMat) -> crate::linalg::SparseMat {
        use crate::linalg::SparseMat;
        let n = m.nrows;
        let mut acc = SparseMat::zero(n, n);
        for c in self.coeffs.iter().rev() {
            acc = m.compose(&acc);
            if !c.is_zero() {
                acc = acc.add(&SparseMat::identity(n).scale(c));
            }
        }
        acc
    }
}

/// Binomial coefficient polynomial `binom(x + a, m)` in the variable x,
/// with `a` a scalar shift: `(x+a)(x+a-1)...(x+a-m+1)/m!`.
pub fn binomial_poly(shift: &Scalar, m: usize) -> Poly {
    let mut acc = Poly::one();
    for k in 0..m {
        let c = shift - &Scalar::from_int(k as i64);
        acc = acc.mul(&Poly::from_coeffs(vec![c, Scalar::one()]));
    }
    acc.scale(&Scalar::factorial(m as u64).inv().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_roundtrip() {
        let a = Poly::from_coeffs(vec![
            Scalar::from_int(-1),
            Scalar::zero(),
            Scalar::one(),
        ]); // x^2 - 1
        let b = Poly::from_coeffs(vec![Scalar::from_int(-1), Scalar::one()]); // x - 1
        let (q, r) = a.divrem(&b);
        assert!(r.is_zero());
        assert_eq!(q.mul(&b), a);
    }

    #[test]
    fn xgcd_bezout() {
        // (x-1)^2 and q(x) = (1+x)(1+x+x^2) are coprime
        let p = Poly::from_coeffs(vec![Scalar::one(), Scalar::from_int(-2), Scalar::one()]);
        let q = Poly::geometric_sum(2).mul(&Poly::geometric_sum(3));
        let (g, s, t) = p.xgcd(&q);
        assert_eq!(g, Poly::one());
        assert_eq!(s.mul(&p).add(&t.mul(&q)), Poly::one());
    }

    #[test]
    fn integral_of_beta_integrand() {
        // int_0^1 (t - t^2) dt = 1/6
        let p = Poly::from_coeffs(vec![Scalar::zero(), Scalar::one(), Scalar::from_int(-1)]);
        assert_eq!(p.integral().eval(&Scalar::one()), Scalar::ratio(1, 6));
    }

    #[test]
    fn binomial_shifted() {
        // binom(x/2 + 0, 1) evaluated at ... use shift 0, m=1: x
        let b = binomial_poly(&Scalar::zero(), 1);
        assert_eq!(b, Poly::x());
        // binom(x+1, 2) = (x+1)x/2
        let b = binomial_poly(&Scalar::one(), 2);
        assert_eq!(b.eval(&Scalar::from_int(3)), Scalar::from_int(6));
    }
}
