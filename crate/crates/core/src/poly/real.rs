//! Polynomials with exact rational coefficients and Sturm-chain real-root
//! counting and isolation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense rational polynomial; coefficient k is the z^k coefficient.
/// Invariant: no trailing zero coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatPoly {
    pub c: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        RatPoly { c }
    }

    pub fn zero() -> Self {
        RatPoly { c: vec![] }
    }

    pub fn constant(x: BigRational) -> Self {
        Self::new(vec![x])
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.c.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for coeff in self.c.iter().rev() {
            acc = acc * x + coeff;
        }
        acc
    }

    pub fn derivative(&self) -> RatPoly {
        if self.c.len() <= 1 {
            return RatPoly::zero();
        }
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, x)| x * BigRational::from_integer(BigInt::from(k)))
            .collect();
        RatPoly::new(c)
    }

    pub fn neg(&self) -> RatPoly {
        RatPoly {
            c: self.c.iter().map(|x| -x).collect(),
        }
    }

    pub fn add(&self, rhs: &RatPoly) -> RatPoly {
        let n = self.c.len().max(rhs.c.len());
        let mut c = vec![BigRational::zero(); n];
        for (k, x) in self.c.iter().enumerate() {
            c[k] += x;
        }
        for (k, x) in rhs.c.iter().enumerate() {
            c[k] += x;
        }
        RatPoly::new(c)
    }

    pub fn mul(&self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut c = vec![BigRational::zero(); self.c.len() + rhs.c.len() - 1];
        for (j, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, b) in rhs.c.iter().enumerate() {
                c[j + k] += a * b;
            }
        }
        RatPoly::new(c)
    }

    /// Euclidean remainder of self by rhs (rhs nonzero).
    pub fn rem(&self, rhs: &RatPoly) -> RatPoly {
        assert!(!rhs.is_zero(), "division by zero polynomial");
        let mut r = self.c.clone();
        let dl = rhs.c.len();
        let lead = rhs.c.last().unwrap();
        while r.len() >= dl {
            let k = r.len() - dl;
            let factor = r.last().unwrap() / lead;
            if !factor.is_zero() {
                for (j, b) in rhs.c.iter().enumerate() {
                    let t = &factor * b;
                    r[k + j] -= t;
                }
            }
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
            if r.len() < dl {
                break;
            }
        }
        RatPoly::new(r)
    }

    /// Divide every coefficient by the positive content, keeping signs.
    /// Controls coefficient growth inside remainder chains.
    fn primitive(&self) -> RatPoly {
        if self.is_zero() {
            return RatPoly::zero();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for x in &self.c {
            num_gcd = num_integer::Integer::gcd(&num_gcd, x.numer());
            den_lcm = num_integer::Integer::lcm(&den_lcm, x.denom());
        }
        if num_gcd.is_zero() {
            return self.clone();
        }
        let scale = BigRational::new(den_lcm, num_gcd).abs();
        RatPoly {
            c: self.c.iter().map(|x| x * &scale).collect(),
        }
    }

    /// Monic gcd of two polynomials.
    pub fn gcd(&self, rhs: &RatPoly) -> RatPoly {
        let mut a = self.primitive();
        let mut b = rhs.primitive();
        while !b.is_zero() {
            let r = a.rem(&b).primitive();
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lead = a.c.last().unwrap().clone();
        RatPoly {
            c: a.c.iter().map(|x| x / &lead).collect(),
        }
    }

    /// self / gcd(self, self'): same distinct roots, all simple.
    pub fn squarefree_part(&self) -> RatPoly {
        if self.degree().is_none_or(|d| d <= 1) {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            return self.clone();
        }
        self.div_exact(&g)
    }

    /// Exact quotient; panics if the division is not exact.
    pub fn div_exact(&self, rhs: &RatPoly) -> RatPoly {
        assert!(!rhs.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return RatPoly::zero();
        }
        let mut r = self.c.clone();
        let dl = rhs.c.len();
        let lead = rhs.c.last().unwrap();
        assert!(r.len() >= dl, "inexact polynomial division");
        let mut q = vec![BigRational::zero(); r.len() - dl + 1];
        while r.len() >= dl {
            let k = r.len() - dl;
            let factor = r.last().unwrap() / lead;
            q[k] = factor.clone();
            for (j, b) in rhs.c.iter().enumerate() {
                let t = &factor * b;
                r[k + j] -= t;
            }
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        assert!(r.is_empty(), "inexact polynomial division");
        RatPoly::new(q)
    }
}

fn sign(x: &BigRational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Sturm chain of a square-free polynomial.
pub struct SturmChain {
    chain: Vec<RatPoly>,
}

impl SturmChain {
    /// Build a chain for counting the distinct real roots of p.
    /// Internally uses the square-free part, so multiplicities are ignored.
    pub fn new(p: &RatPoly) -> Self {
        let p = p.squarefree_part().primitive();
        let mut chain = vec![p.clone()];
        if p.degree().is_some_and(|d| d >= 1) {
            chain.push(p.derivative().primitive());
            loop {
                let n = chain.len();
                let r = chain[n - 2].rem(&chain[n - 1]);
                if r.is_zero() {
                    break;
                }
                chain.push(r.neg().primitive());
            }
        }
        SturmChain { chain }
    }

    fn variations_at(&self, x: &BigRational) -> usize {
        let signs: Vec<i8> = self.chain.iter().map(|p| sign(&p.eval(x))).collect();
        count_variations(&signs)
    }

    fn variations_at_inf(&self, positive: bool) -> usize {
        let signs: Vec<i8> = self
            .chain
            .iter()
            .map(|p| match p.degree() {
                None => 0,
                Some(d) => {
                    let s = sign(p.leading().unwrap());
                    if positive || d % 2 == 0 {
                        s
                    } else {
                        -s
                    }
                }
            })
            .collect();
        count_variations(&signs)
    }

    /// Number of distinct real roots in the half-open interval (a, b].
    pub fn count_in(&self, a: &BigRational, b: &BigRational) -> usize {
        assert!(a <= b);
        self.variations_at(a) - self.variations_at(b)
    }

    /// Number of distinct real roots on the whole line.
    pub fn count_all(&self) -> usize {
        self.variations_at_inf(false) - self.variations_at_inf(true)
    }
}

fn count_variations(signs: &[i8]) -> usize {
    let mut prev = 0i8;
    let mut count = 0;
    for &s in signs {
        if s == 0 {
            continue;
        }
        if prev != 0 && s != prev {
            count += 1;
        }
        prev = s;
    }
    count
}

/// A located real root of a square-free polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealRootSite {
    /// The root is exactly this rational.
    Exact(BigRational),
    /// Exactly one root lies strictly inside (lo, hi). hi is never a root;
    /// lo is a root only when that root is also reported as an Exact site.
    Open(BigRational, BigRational),
}

impl RealRootSite {
    pub fn lo(&self) -> &BigRational {
        match self {
            RealRootSite::Exact(r) => r,
            RealRootSite::Open(lo, _) => lo,
        }
    }

    pub fn hi(&self) -> &BigRational {
        match self {
            RealRootSite::Exact(r) => r,
            RealRootSite::Open(_, hi) => hi,
        }
    }
}

/// Isolate all distinct real roots of p inside the closed interval [a, b].
/// Returned sites are sorted and pairwise disjoint.
pub fn isolate_real_roots_in(p: &RatPoly, a: &BigRational, b: &BigRational) -> Vec<RealRootSite> {
    let sf = p.squarefree_part();
    if sf.degree().is_none() {
        // Zero polynomial: caller must handle separately.
        panic!("root isolation on the zero polynomial");
    }
    let chain = SturmChain::new(&sf);
    let mut out = Vec::new();
    // Peel off exact endpoint roots, then bisect (a, b].
    if sf.eval(a).is_zero() {
        out.push(RealRootSite::Exact(a.clone()));
    }
    if a == b {
        return out;
    }
    let mut stack = vec![(a.clone(), b.clone())];
    let mut found: Vec<RealRootSite> = Vec::new();
    while let Some((lo, hi)) = stack.pop() {
        let n = chain.count_in(&lo, &hi);
        if n == 0 {
            continue;
        }
        let hi_is_root = sf.eval(&hi).is_zero();
        if n == 1 {
            if hi_is_root {
                found.push(RealRootSite::Exact(hi.clone()));
                continue;
            }
            // One root in (lo, hi], not at hi, and lo is never a root of
            // the open segments we generate (checked below before pushing).
            found.push(RealRootSite::Open(lo.clone(), hi.clone()));
            continue;
        }
        let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
        if sf.eval(&mid).is_zero() {
            found.push(RealRootSite::Exact(mid.clone()));
        }
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    out.extend(found);
    // Tie-break on hi so an Exact site sorts before an Open site that
    // starts at the same point.
    out.sort_by(|x, y| x.lo().cmp(y.lo()).then_with(|| x.hi().cmp(y.hi())));
    out.dedup();
    out
}

/// Shrink an open isolation site until its width is at most eps.
pub fn refine_site(p: &RatPoly, site: &RealRootSite, eps: &BigRational) -> RealRootSite {
    let sf = p.squarefree_part();
    let chain = SturmChain::new(&sf);
    let (mut lo, mut hi) = match site {
        RealRootSite::Exact(_) => return site.clone(),
        RealRootSite::Open(lo, hi) => (lo.clone(), hi.clone()),
    };
    let two = BigRational::from_integer(BigInt::from(2));
    while &(&hi - &lo) > eps {
        let mid = (&lo + &hi) / &two;
        if sf.eval(&mid).is_zero() {
            return RealRootSite::Exact(mid);
        }
        if chain.count_in(&lo, &mid) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    RealRootSite::Open(lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn poly(coeffs: &[i64]) -> RatPoly {
        RatPoly::new(coeffs.iter().map(|&n| q(n, 1)).collect())
    }

    #[test]
    fn sturm_counts() {
        // (x-1)(x-2)(x+3) = x^3 - 7x + 6
        let p = poly(&[6, -7, 0, 1]);
        let chain = SturmChain::new(&p);
        assert_eq!(chain.count_all(), 3);
        assert_eq!(chain.count_in(&q(0, 1), &q(3, 1)), 2);
        assert_eq!(chain.count_in(&q(-4, 1), &q(0, 1)), 1);
    }

    #[test]
    fn sturm_handles_multiple_roots() {
        // (x-1)^2 (x+2)
        let p = poly(&[2, -3, 0, 1]);
        let chain = SturmChain::new(&p);
        assert_eq!(chain.count_all(), 2);
    }

    #[test]
    fn no_real_roots() {
        let p = poly(&[1, 0, 1]); // x^2+1
        assert_eq!(SturmChain::new(&p).count_all(), 0);
    }

    #[test]
    fn isolation_separates_roots() {
        // roots 1/2, sqrt(2), -sqrt(2)
        let p = RatPoly::new(vec![q(-1, 1), q(2, 1)]).mul(&poly(&[-2, 0, 1]));
        let sites = isolate_real_roots_in(&p, &q(-10, 1), &q(10, 1));
        assert_eq!(sites.len(), 3);
        for w in sites.windows(2) {
            assert!(w[0].hi() <= w[1].lo());
        }
        // each refined site brackets its root
        let eps = q(1, 100);
        let refined: Vec<_> = sites.iter().map(|s| refine_site(&p, s, &eps)).collect();
        let roots = [q(-3, 2), q(1, 2), q(3, 2)]; // approximate locations
        for (site, target) in refined.iter().zip(&roots) {
            let lo = site.lo() - q(1, 10);
            let hi = site.hi() + q(1, 10);
            assert!(&lo <= target && target <= &hi);
        }
        // a bisection point that lands on a root is reported exactly:
        // x(x-1)(x+1) on [-2, 2] splits first at 0
        let p0 = poly(&[0, -1, 0, 1]);
        let sites0 = isolate_real_roots_in(&p0, &q(-2, 1), &q(2, 1));
        assert_eq!(sites0.len(), 3);
        assert!(sites0.contains(&RealRootSite::Exact(q(0, 1))));
    }

    #[test]
    fn refinement_narrows() {
        let p = poly(&[-2, 0, 1]);
        let sites = isolate_real_roots_in(&p, &q(0, 1), &q(2, 1));
        assert_eq!(sites.len(), 1);
        let eps = q(1, 1_000_000);
        let r = refine_site(&p, &sites[0], &eps);
        match r {
            RealRootSite::Open(lo, hi) => {
                assert!(&hi - &lo <= eps);
                // sqrt(2) in (lo, hi)
                assert!(&lo * &lo < q(2, 1) && &hi * &hi > q(2, 1));
            }
            RealRootSite::Exact(_) => panic!("sqrt(2) is irrational"),
        }
    }
}
