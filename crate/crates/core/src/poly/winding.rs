//! Exact argument tracking along polynomial paths.
//!
//! A path h(t) = h1(t) + i*h2(t) with rational polynomial components is
//! followed through the eight sectors cut out by the coordinate half-axes.
//! Evaluation points are chosen so that at most one root of h1*h2 lies
//! strictly between consecutive points; each sector transition then lifts
//! to a unique signed number of pi/4 steps, and the step total is exactly
//! eight times the winding contribution of the path.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::num::gaussian::GaussianRational;
use crate::poly::complexpoly::GPoly;
use crate::poly::real::{isolate_real_roots_in, RatPoly, RealRootSite, SturmChain};

/// A polynomial path t -> h1(t) + i*h2(t) over the closed interval [a, b].
#[derive(Clone, Debug)]
pub struct RealPath {
    pub h1: RatPoly,
    pub h2: RatPoly,
    pub a: BigRational,
    pub b: BigRational,
}

fn sign(x: &BigRational) -> i8 {
    if x.is_zero() {
        0
    } else if x > &BigRational::zero() {
        1
    } else {
        -1
    }
}

fn octant(s1: i8, s2: i8) -> i64 {
    match (s1, s2) {
        (1, 0) => 0,
        (1, 1) => 1,
        (0, 1) => 2,
        (-1, 1) => 3,
        (-1, 0) => 4,
        (-1, -1) => 5,
        (0, -1) => 6,
        (1, -1) => 7,
        _ => panic!("path passes through zero"),
    }
}

fn step(o0: i64, o1: i64) -> i64 {
    let d = (o1 - o0).rem_euclid(8);
    match d {
        0..=3 => d,
        5..=7 => d - 8,
        _ => panic!("ambiguous octant step"),
    }
}

impl RealPath {
    pub fn new(h1: RatPoly, h2: RatPoly, a: BigRational, b: BigRational) -> Self {
        assert!(a <= b);
        RealPath { h1, h2, a, b }
    }

    /// From a polynomial in a real variable with Gaussian-rational
    /// coefficients.
    pub fn from_gpoly(h: &GPoly, a: BigRational, b: BigRational) -> Self {
        let (h1, h2) = h.split_real_imag();
        Self::new(h1, h2, a, b)
    }

    /// Whether h(t) = 0 for some t in the closed interval [a, b].
    pub fn hits_zero(&self) -> bool {
        let g = if self.h1.is_zero() && self.h2.is_zero() {
            return true;
        } else if self.h1.is_zero() {
            self.h2.clone()
        } else if self.h2.is_zero() {
            self.h1.clone()
        } else {
            self.h1.gcd(&self.h2)
        };
        if g.degree() == Some(0) {
            return false;
        }
        if g.eval(&self.a).is_zero() {
            return true;
        }
        SturmChain::new(&g).count_in(&self.a, &self.b) > 0
    }

    /// Total signed argument change along the path, in units of pi/4.
    /// The path must not pass through zero.
    pub fn octant_steps(&self) -> i64 {
        assert!(!self.hits_zero(), "octant walk on a path through zero");
        if self.a == self.b {
            return 0;
        }
        if self.h1.is_zero() || self.h2.is_zero() {
            // One component vanishes identically and the other has no root
            // in [a, b], so the path stays on a single half-axis.
            return 0;
        }
        let product = self.h1.mul(&self.h2);
        let sites = isolate_real_roots_in(&product, &self.a, &self.b);
        let mut pts: Vec<BigRational> = Vec::with_capacity(2 * sites.len() + 2);
        pts.push(self.a.clone());
        for site in &sites {
            match site {
                RealRootSite::Exact(r) => pts.push(r.clone()),
                RealRootSite::Open(lo, hi) => {
                    pts.push(lo.clone());
                    pts.push(hi.clone());
                }
            }
        }
        pts.push(self.b.clone());
        pts.dedup();
        debug_assert!(pts.windows(2).all(|w| w[0] < w[1]));
        let mut total = 0i64;
        let mut prev: Option<i64> = None;
        for t in &pts {
            let o = octant(sign(&self.h1.eval(t)), sign(&self.h2.eval(t)));
            if let Some(p) = prev {
                total += step(p, o);
            }
            prev = Some(o);
        }
        total
    }
}

fn one_minus_one() -> (BigRational, BigRational) {
    (
        BigRational::from_integer(BigInt::from(-1)),
        BigRational::from_integer(BigInt::from(1)),
    )
}

/// The two half-circle paths of q around the unit circle, as polynomial
/// paths in a real parameter over [-1, 1]. The right arc runs from -i
/// through 1 to i via z = (1+it)/(1-it); the left arc from i through -1
/// to -i via z = -(1+is)/(1-is). Each path carries the spurious factor
/// (1 - i t)^deg(q), which contributes a known argument change.
pub fn circle_arc_paths(q: &GPoly) -> (RealPath, RealPath) {
    assert!(!q.is_zero());
    let n = q.degree().unwrap();
    let plus = GPoly::new(vec![GaussianRational::one(), GaussianRational::i()]);
    let minus = GPoly::new(vec![GaussianRational::one(), -&GaussianRational::i()]);
    let mut pow_plus = Vec::with_capacity(n + 1);
    let mut pow_minus = Vec::with_capacity(n + 1);
    pow_plus.push(GPoly::one());
    pow_minus.push(GPoly::one());
    for k in 1..=n {
        let pp = pow_plus[k - 1].mul(&plus);
        let pm = pow_minus[k - 1].mul(&minus);
        pow_plus.push(pp);
        pow_minus.push(pm);
    }
    let mut right = GPoly::zero();
    let mut left = GPoly::zero();
    let mut sign_flip = GaussianRational::one();
    for k in 0..=n {
        let term = pow_plus[k].mul(&pow_minus[n - k]);
        right = right.add(&term.scale(&q.coeff(k)));
        left = left.add(&term.scale(&(&q.coeff(k) * &sign_flip)));
        sign_flip = -&sign_flip;
    }
    let (a, b) = one_minus_one();
    (
        RealPath::from_gpoly(&right, a.clone(), b.clone()),
        RealPath::from_gpoly(&left, a, b),
    )
}

/// Whether q has a root on the unit circle. Exact.
pub fn has_root_on_unit_circle(q: &GPoly) -> bool {
    assert!(!q.is_zero());
    if q.degree() == Some(0) {
        return false;
    }
    let (right, left) = circle_arc_paths(q);
    right.hits_zero() || left.hits_zero()
}

/// Winding number of q around the unit circle, i.e. the number of roots
/// of q in the open unit disk counted with multiplicity. None if q has a
/// root on the circle.
pub fn circle_winding(q: &GPoly) -> Option<i64> {
    assert!(!q.is_zero());
    let n = q.degree().unwrap() as i64;
    if n == 0 {
        return Some(0);
    }
    let (right, left) = circle_arc_paths(q);
    if right.hits_zero() || left.hits_zero() {
        return None;
    }
    let steps = right.octant_steps() + left.octant_steps();
    let total = steps + 4 * n;
    assert!(total % 8 == 0, "circle walk did not close up");
    Some(total / 8)
}

/// Number of roots of q (with multiplicity) strictly inside the axis
/// aligned rectangle (x0, x1) x (y0, y1). None if a root lies on the
/// boundary.
pub fn rect_root_count(
    q: &GPoly,
    x0: &BigRational,
    x1: &BigRational,
    y0: &BigRational,
    y1: &BigRational,
) -> Option<usize> {
    assert!(!q.is_zero());
    assert!(x0 < x1 && y0 < y1);
    if q.degree() == Some(0) {
        return Some(0);
    }
    let corners = [
        GaussianRational::new(x0.clone(), y0.clone()),
        GaussianRational::new(x1.clone(), y0.clone()),
        GaussianRational::new(x1.clone(), y1.clone()),
        GaussianRational::new(x0.clone(), y1.clone()),
    ];
    let mut steps = 0i64;
    for k in 0..4 {
        let from = &corners[k];
        let to = &corners[(k + 1) % 4];
        let delta = to - from;
        let h = q.compose_affine(from, &delta);
        let path = RealPath::from_gpoly(
            &h,
            BigRational::zero(),
            BigRational::from_integer(BigInt::from(1)),
        );
        if path.hits_zero() {
            return None;
        }
        steps += path.octant_steps();
    }
    assert!(steps % 8 == 0, "rectangle walk did not close up");
    assert!(steps >= 0);
    Some((steps / 8) as usize)
}

/// Number of roots of f in the open unit disk, counted with multiplicity,
/// for f with f(0) != 0 and no roots on the circle. Recursive reduction:
/// with a0, an the constant and leading coefficients and
/// g = conj(a0) f - an f*, the quantity |a0|^2 - |an|^2 decides whether g
/// keeps or complements the inside-root count of f. When it vanishes the
/// common factor with f* is split off (its roots pair up under circle
/// inversion), and exhausted cases fall back to the exact circle walk.
fn schur_count(f: &GPoly) -> usize {
    let n = f.degree().expect("nonzero polynomial");
    if n == 0 {
        return 0;
    }
    debug_assert!(!f.coeff(0).is_zero());
    let a0 = f.coeff(0);
    let an = f.leading().unwrap().clone();
    let delta = a0.norm_sqr() - an.norm_sqr();
    if !delta.is_zero() {
        let reduced = f.scale(&a0.conj()).sub(&f.reciprocal_adjoint().scale(&an));
        debug_assert!(!reduced.is_zero() && !reduced.coeff(0).is_zero());
        let inner = schur_count(&reduced);
        if delta > BigRational::zero() {
            inner
        } else {
            n - inner
        }
    } else {
        let g = f.gcd(&f.reciprocal_adjoint());
        let dg = g.degree().unwrap();
        if dg == n {
            // f is a unit multiple of f*: roots pair up under circle
            // inversion and none lie on the circle, so exactly half are
            // inside.
            assert!(n.is_multiple_of(2));
            n / 2
        } else if dg >= 1 {
            assert!(dg.is_multiple_of(2));
            dg / 2 + schur_count(&f.div_exact(&g))
        } else {
            circle_winding(f).expect("no circle roots") as usize
        }
    }
}

/// Number of roots of q in the open unit disk, counted with multiplicity.
/// None if q has a root on the unit circle.
pub fn count_in_unit_disk(q: &GPoly) -> Option<usize> {
    assert!(!q.is_zero());
    if has_root_on_unit_circle(q) {
        return None;
    }
    let ord = q.low_order().unwrap();
    let f = GPoly::new(q.c[ord..].to_vec());
    Some(ord + schur_count(&f))
}
