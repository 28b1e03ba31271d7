//! Polynomials with Gaussian-rational coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::num::ball::Ball;
use crate::num::gaussian::GaussianRational;
use crate::poly::real::RatPoly;

/// Dense polynomial over Q(i); coefficient k is the z^k coefficient.
/// Invariant: no trailing zero coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GPoly {
    pub c: Vec<GaussianRational>,
}

impl GPoly {
    pub fn new(mut c: Vec<GaussianRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        GPoly { c }
    }

    pub fn zero() -> Self {
        GPoly { c: vec![] }
    }

    pub fn one() -> Self {
        GPoly {
            c: vec![GaussianRational::one()],
        }
    }

    pub fn constant(x: GaussianRational) -> Self {
        Self::new(vec![x])
    }

    /// The monomial c * z^k.
    pub fn monomial(coeff: GaussianRational, k: usize) -> Self {
        let mut c = vec![GaussianRational::zero(); k + 1];
        c[k] = coeff;
        Self::new(c)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&GaussianRational> {
        self.c.last()
    }

    /// Index of the lowest nonzero coefficient; None for zero.
    pub fn low_order(&self) -> Option<usize> {
        self.c.iter().position(|x| !x.is_zero())
    }

    pub fn coeff(&self, k: usize) -> GaussianRational {
        self.c
            .get(k)
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    pub fn eval(&self, z: &GaussianRational) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for coeff in self.c.iter().rev() {
            acc = &(&acc * z) + coeff;
        }
        acc
    }

    pub fn eval_ball(&self, z: &Ball) -> Ball {
        let mut acc = Ball::zero();
        for coeff in self.c.iter().rev() {
            acc = acc.mul(z).add(&Ball::exact(coeff.clone()));
        }
        acc
    }

    pub fn derivative(&self) -> GPoly {
        if self.c.len() <= 1 {
            return GPoly::zero();
        }
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, x)| x.scale(&BigRational::from_integer(BigInt::from(k))))
            .collect();
        GPoly::new(c)
    }

    pub fn neg(&self) -> GPoly {
        GPoly {
            c: self.c.iter().map(|x| -x).collect(),
        }
    }

    pub fn add(&self, rhs: &GPoly) -> GPoly {
        let n = self.c.len().max(rhs.c.len());
        let mut c = vec![GaussianRational::zero(); n];
        for (k, x) in self.c.iter().enumerate() {
            c[k] += x;
        }
        for (k, x) in rhs.c.iter().enumerate() {
            c[k] += x;
        }
        GPoly::new(c)
    }

    pub fn sub(&self, rhs: &GPoly) -> GPoly {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &GPoly) -> GPoly {
        if self.is_zero() || rhs.is_zero() {
            return GPoly::zero();
        }
        let mut c = vec![GaussianRational::zero(); self.c.len() + rhs.c.len() - 1];
        for (j, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, b) in rhs.c.iter().enumerate() {
                c[j + k] += &(a * b);
            }
        }
        GPoly::new(c)
    }

    pub fn scale(&self, x: &GaussianRational) -> GPoly {
        GPoly::new(self.c.iter().map(|a| a * x).collect())
    }

    /// Quotient and remainder over the field Q(i).
    pub fn divrem(&self, rhs: &GPoly) -> (GPoly, GPoly) {
        assert!(!rhs.is_zero(), "division by zero polynomial");
        let mut r = self.c.clone();
        let dl = rhs.c.len();
        if r.len() < dl {
            return (GPoly::zero(), GPoly::new(r));
        }
        let lead_inv = rhs.c.last().unwrap().inv().expect("nonzero leading");
        let mut q = vec![GaussianRational::zero(); r.len() - dl + 1];
        while r.len() >= dl {
            let k = r.len() - dl;
            let factor = r.last().unwrap() * &lead_inv;
            q[k] = factor.clone();
            for (j, b) in rhs.c.iter().enumerate() {
                let t = &factor * b;
                r[k + j] -= &t;
            }
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
            if r.len() < dl {
                break;
            }
        }
        (GPoly::new(q), GPoly::new(r))
    }

    pub fn div_exact(&self, rhs: &GPoly) -> GPoly {
        let (q, r) = self.divrem(rhs);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd over Q(i).
    pub fn gcd(&self, rhs: &GPoly) -> GPoly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            // Keep remainders monic to dampen coefficient growth.
            let lead_inv = b.c.last().unwrap().inv().expect("nonzero leading");
            b = b.scale(&lead_inv);
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lead_inv = a.c.last().unwrap().inv().expect("nonzero leading");
        a.scale(&lead_inv)
    }

    /// Coefficient-wise complex conjugate.
    pub fn conj_coeffs(&self) -> GPoly {
        GPoly {
            c: self.c.iter().map(|x| x.conj()).collect(),
        }
    }

    /// The reciprocal adjoint f*(z) = z^deg(f) * conj(f)(1/z): reversed,
    /// conjugated coefficients. Roots of f* are the circle inversions
    /// 1/conj(r) of the roots of f.
    pub fn reciprocal_adjoint(&self) -> GPoly {
        let mut c: Vec<GaussianRational> = self.c.iter().rev().map(|x| x.conj()).collect();
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        GPoly::new(c)
    }

    /// Plain coefficient reversal z^deg(f) * f(1/z).
    pub fn reverse(&self) -> GPoly {
        let mut c: Vec<GaussianRational> = self.c.iter().rev().cloned().collect();
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        GPoly::new(c)
    }

    /// f / gcd(f, f'): same roots, all simple.
    pub fn squarefree_part(&self) -> GPoly {
        if self.degree().is_none_or(|d| d <= 1) {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            return self.clone();
        }
        self.div_exact(&g)
    }

    /// Yun-style square-free decomposition: returns (g_m, m) pairs with
    /// f = lead * prod g_m^m, each g_m monic square-free, pairwise coprime.
    pub fn squarefree_decomposition(&self) -> Vec<(GPoly, usize)> {
        assert!(!self.is_zero());
        if self.degree() == Some(0) {
            return vec![];
        }
        let lead_inv = self.leading().unwrap().inv().unwrap();
        let f = self.scale(&lead_inv);
        let df = f.derivative();
        let mut a = f.gcd(&df);
        let mut b = f.div_exact(&a);
        let mut c = df.div_exact(&a);
        let mut out = Vec::new();
        let mut m = 1usize;
        loop {
            let d = c.sub(&b.derivative());
            if d.is_zero() {
                if b.degree().is_some_and(|deg| deg >= 1) {
                    out.push((b, m));
                }
                break;
            }
            a = b.gcd(&d);
            if a.degree().is_some_and(|deg| deg >= 1) {
                out.push((a.clone(), m));
            }
            b = b.div_exact(&a);
            c = d.div_exact(&a);
            m += 1;
            if b.degree() == Some(0) {
                break;
            }
        }
        out
    }

    /// Substitute z = a + b*t and return the coefficients in t.
    pub fn compose_affine(&self, a: &GaussianRational, b: &GaussianRational) -> GPoly {
        let mut acc = GPoly::zero();
        let affine = GPoly::new(vec![a.clone(), b.clone()]);
        for coeff in self.c.iter().rev() {
            acc = acc.mul(&affine).add(&GPoly::constant(coeff.clone()));
        }
        acc
    }

    /// Split a polynomial in a real variable into real and imaginary parts.
    pub fn split_real_imag(&self) -> (RatPoly, RatPoly) {
        let re = RatPoly::new(self.c.iter().map(|x| x.re.clone()).collect());
        let im = RatPoly::new(self.c.iter().map(|x| x.im.clone()).collect());
        (re, im)
    }

    /// Largest |coefficient| upper bound, as a rational.
    pub fn coeff_abs_ub(&self) -> BigRational {
        use crate::num::ball::sqrt_ub;
        let mut best = BigRational::zero();
        for x in &self.c {
            let ub = sqrt_ub(&x.norm_sqr());
            if ub > best {
                best = ub;
            }
        }
        best
    }

    /// Cauchy bound: every root has |z| < 1 + max|c_k| / |lead|.
    pub fn root_bound(&self) -> BigRational {
        use crate::num::ball::{sqrt_lb, sqrt_ub};
        assert!(!self.is_zero());
        let lead_lb = {
            let lb = sqrt_lb(&self.leading().unwrap().norm_sqr());
            if lb.is_zero() {
                // sqrt_lb floors to 0 for tiny leads; fall back to the exact
                // squared norm which is positive.
                let n = self.leading().unwrap().norm_sqr();
                // |z| >= n / sqrt_ub(n) is a valid positive lower bound.
                n.clone() / sqrt_ub(&n)
            } else {
                lb
            }
        };
        let mut best = BigRational::zero();
        for x in &self.c[..self.c.len() - 1] {
            let ub = sqrt_ub(&x.norm_sqr());
            if ub > best {
                best = ub;
            }
        }
        BigRational::one() + best / lead_lb
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_ints(re, im)
    }

    fn gp(coeffs: &[(i64, i64)]) -> GPoly {
        GPoly::new(coeffs.iter().map(|&(a, b)| g(a, b)).collect())
    }

    #[test]
    fn divrem_roundtrip() {
        let f = gp(&[(1, 1), (0, -2), (3, 0), (1, 0)]);
        let d = gp(&[(1, -1), (2, 0)]);
        let (q, r) = f.divrem(&d);
        assert_eq!(q.mul(&d).add(&r), f);
        assert!(r.degree() < d.degree());
    }

    #[test]
    fn gcd_detects_common_root() {
        // (z - i)(z - 2) and (z - i)(z + 3) share (z - i)
        let a = gp(&[(0, -1), (1, 0)]);
        let f = a.mul(&gp(&[(-2, 0), (1, 0)]));
        let h = a.mul(&gp(&[(3, 0), (1, 0)]));
        let gcd = f.gcd(&h);
        assert_eq!(gcd, gp(&[(0, -1), (1, 0)]));
    }

    #[test]
    fn reciprocal_adjoint_inverts_roots() {
        // f = z - 1/2: f* should vanish at 2 = 1/conj(1/2).
        let f = GPoly::new(vec![GaussianRational::from_ratio(-1, 2), g(1, 0)]);
        let fs = f.reciprocal_adjoint();
        assert!(fs.eval(&g(2, 0)).is_zero());
    }

    #[test]
    fn squarefree_decomposition_multiplicities() {
        // (z-1)^2 (z+i)^3
        let a = gp(&[(-1, 0), (1, 0)]);
        let b = gp(&[(0, 1), (1, 0)]);
        let f = a.mul(&a).mul(&b).mul(&b).mul(&b);
        let dec = f.squarefree_decomposition();
        assert_eq!(dec.len(), 2);
        assert!(dec
            .iter()
            .any(|(p, m)| *m == 2 && p.eval(&g(1, 0)).is_zero()));
        assert!(dec
            .iter()
            .any(|(p, m)| *m == 3 && p.eval(&g(0, -1)).is_zero()));
    }

    #[test]
    fn affine_composition() {
        // f(z) = z^2, z = 1 + 2t: (1+2t)^2 = 1 + 4t + 4t^2
        let f = gp(&[(0, 0), (0, 0), (1, 0)]);
        let c = f.compose_affine(&g(1, 0), &g(2, 0));
        assert_eq!(c, gp(&[(1, 0), (4, 0), (4, 0)]));
    }
}
