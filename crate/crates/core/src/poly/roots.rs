//! Algebraic numbers represented as exactly isolated polynomial roots.
//!
//! A root is either a Gaussian rational held exactly, or the unique root
//! of a square-free polynomial inside an axis-aligned rational rectangle
//! whose boundary avoids all roots. Rectangles can be refined on demand,
//! so enclosures of any requested quality are available, and equality,
//! root-membership, and unit-circle position are all decided exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::num::ball::{sqrt_ub, Ball};
use crate::num::gaussian::GaussianRational;
use crate::poly::complexpoly::GPoly;
use crate::poly::real::{isolate_real_roots_in, refine_site, RatPoly, RealRootSite};
use crate::poly::winding::rect_root_count;

/// Where a number sits relative to the unit circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiskPosition {
    Inside,
    OnCircle,
    Outside,
}

/// The unique root of `poly` strictly inside the rectangle
/// (x0, x1) x (y0, y1); no root of `poly` lies on the boundary.
#[derive(Clone, Debug)]
pub struct IsolatedRoot {
    poly: GPoly,
    x0: BigRational,
    x1: BigRational,
    y0: BigRational,
    y1: BigRational,
}

#[derive(Clone, Debug)]
pub enum AlgebraicNumber {
    Exact(GaussianRational),
    Isolated(IsolatedRoot),
}

fn half(x: &BigRational) -> BigRational {
    x / BigRational::from_integer(BigInt::from(2))
}

/// Smallest-denominator rational strictly between lo and hi.
fn simplest_between(lo: &BigRational, hi: &BigRational) -> BigRational {
    assert!(lo < hi);
    let zero = BigRational::zero();
    if lo < &zero && hi > &zero {
        return zero;
    }
    if lo >= &zero {
        simplest_nonneg(lo, hi)
    } else {
        -simplest_nonneg(&-hi.clone(), &-lo.clone())
    }
}

fn simplest_nonneg(lo: &BigRational, hi: &BigRational) -> BigRational {
    let fl = lo.floor();
    let next = &fl + BigRational::one();
    if &next < hi {
        return next;
    }
    // No integer strictly inside: recurse on the reciprocal of the
    // fractional parts. lo > fl here because next >= hi > lo >= fl and
    // lo integral would give next = lo + 1... guard anyway.
    let lo_frac = lo - &fl;
    let hi_frac = hi - &fl;
    if lo_frac.is_zero() {
        // lo is an integer, so every rational in (lo, hi) exceeds lo;
        // the simplest is fl + 1/ceil(1/hi_frac + 1)... handled by the
        // generic branch with a tiny positive lower bound instead.
        let inv_hi = hi_frac.recip();
        let denom = inv_hi.floor() + BigRational::one();
        return fl + denom.recip();
    }
    let sub = simplest_nonneg(&hi_frac.recip(), &lo_frac.recip());
    fl + sub.recip()
}

/// Cut positions tried when splitting an interval, as fractions of the
/// width: 1/2, 1/3, 2/3, 1/4, 3/4, ... Every value is distinct, so only
/// finitely many can be blocked by roots sitting on the cut line.
struct CutFractions {
    den: u64,
    num: u64,
}

impl CutFractions {
    fn new() -> Self {
        CutFractions { den: 2, num: 1 }
    }
}

impl Iterator for CutFractions {
    type Item = BigRational;

    fn next(&mut self) -> Option<BigRational> {
        loop {
            if self.num >= self.den {
                self.den += 1;
                self.num = 1;
                continue;
            }
            let n = self.num;
            self.num += 1;
            if num_integer::gcd(n, self.den) == 1 {
                return Some(BigRational::new(BigInt::from(n), BigInt::from(self.den)));
            }
        }
    }
}

impl IsolatedRoot {
    fn width(&self) -> BigRational {
        &self.x1 - &self.x0
    }

    fn height(&self) -> BigRational {
        &self.y1 - &self.y0
    }

    fn enclosure(&self) -> Ball {
        let cx = half(&(&self.x0 + &self.x1));
        let cy = half(&(&self.y0 + &self.y1));
        let hw = half(&self.width());
        let hh = half(&self.height());
        let rad = sqrt_ub(&(&hw * &hw + &hh * &hh));
        Ball::new(GaussianRational::new(cx, cy), rad)
    }

    /// One subdivision step: halve (approximately) the wider side while
    /// keeping the root strictly inside and the boundary root-free.
    fn refine(&mut self) {
        let split_x = self.width() >= self.height();
        let (lo, hi) = if split_x {
            (self.x0.clone(), self.x1.clone())
        } else {
            (self.y0.clone(), self.y1.clone())
        };
        let w = &hi - &lo;
        for frac in CutFractions::new() {
            let cut = &lo + &w * &frac;
            let count = if split_x {
                rect_root_count(&self.poly, &self.x0, &cut, &self.y0, &self.y1)
            } else {
                rect_root_count(&self.poly, &self.x0, &self.x1, &self.y0, &cut)
            };
            let Some(c) = count else { continue };
            if split_x {
                if c == 1 {
                    self.x1 = cut;
                } else {
                    self.x0 = cut;
                }
            } else if c == 1 {
                self.y1 = cut;
            } else {
                self.y0 = cut;
            }
            return;
        }
        unreachable!("cut fractions exhausted");
    }

    fn contains_strictly(&self, v: &GaussianRational) -> bool {
        self.x0 < v.re && v.re < self.x1 && self.y0 < v.im && v.im < self.y1
    }

    /// Whether the isolated root is a root of g, for g a divisor of the
    /// defining polynomial. Exact, no refinement needed: any root of g in
    /// the rectangle must be the isolated root itself.
    fn is_root_of_divisor(&self, g: &GPoly) -> bool {
        if g.degree().is_none_or(|d| d == 0) {
            return false;
        }
        rect_root_count(g, &self.x0, &self.x1, &self.y0, &self.y1)
            .expect("divisor root on an isolating boundary")
            > 0
    }
}

impl AlgebraicNumber {
    pub fn exact(v: GaussianRational) -> Self {
        AlgebraicNumber::Exact(v)
    }

    pub fn try_exact(&self) -> Option<&GaussianRational> {
        match self {
            AlgebraicNumber::Exact(v) => Some(v),
            AlgebraicNumber::Isolated(_) => None,
        }
    }

    /// A ball certified to contain the number.
    pub fn enclosure(&self) -> Ball {
        match self {
            AlgebraicNumber::Exact(v) => Ball::exact(v.clone()),
            AlgebraicNumber::Isolated(r) => r.enclosure(),
        }
    }

    /// Refine until the enclosure radius is at most eps.
    pub fn refine_to(&mut self, eps: &BigRational) {
        if let AlgebraicNumber::Isolated(r) = self {
            while &r.enclosure().rad > eps {
                r.refine();
            }
        }
    }

    pub fn conj(&self) -> AlgebraicNumber {
        match self {
            AlgebraicNumber::Exact(v) => AlgebraicNumber::Exact(v.conj()),
            AlgebraicNumber::Isolated(r) => AlgebraicNumber::Isolated(IsolatedRoot {
                poly: r.poly.conj_coeffs(),
                x0: r.x0.clone(),
                x1: r.x1.clone(),
                y0: -r.y1.clone(),
                y1: -r.y0.clone(),
            }),
        }
    }

    /// Whether this number is a root of p. Exact.
    pub fn is_root_of(&self, p: &GPoly) -> bool {
        if p.is_zero() {
            return true;
        }
        match self {
            AlgebraicNumber::Exact(v) => p.eval(v).is_zero(),
            AlgebraicNumber::Isolated(r) => {
                let g = r.poly.gcd(p);
                r.is_root_of_divisor(&g)
            }
        }
    }

    /// Exact position relative to the unit circle.
    pub fn disk_position(&mut self) -> DiskPosition {
        match self {
            AlgebraicNumber::Exact(v) => {
                let n = v.norm_sqr();
                let one = BigRational::one();
                if n < one {
                    DiskPosition::Inside
                } else if n == one {
                    DiskPosition::OnCircle
                } else {
                    DiskPosition::Outside
                }
            }
            AlgebraicNumber::Isolated(r) => {
                if isolated_root_on_circle(r) {
                    return DiskPosition::OnCircle;
                }
                loop {
                    let ball = r.enclosure();
                    if ball.abs_ub() < BigRational::one() {
                        return DiskPosition::Inside;
                    }
                    if ball.abs_lb() > BigRational::one() {
                        return DiskPosition::Outside;
                    }
                    r.refine();
                }
            }
        }
    }

    pub fn approx(&self) -> (f64, f64) {
        self.enclosure().approx()
    }
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (AlgebraicNumber::Exact(u), AlgebraicNumber::Exact(v)) => u == v,
            (AlgebraicNumber::Exact(u), AlgebraicNumber::Isolated(r))
            | (AlgebraicNumber::Isolated(r), AlgebraicNumber::Exact(u)) => {
                r.poly.eval(u).is_zero() && r.contains_strictly(u)
            }
            (AlgebraicNumber::Isolated(r1), AlgebraicNumber::Isolated(r2)) => {
                let g = r1.poly.gcd(&r2.poly);
                if g.degree().is_none_or(|d| d == 0) {
                    return false;
                }
                let x0 = (&r1.x0).max(&r2.x0).clone();
                let x1 = (&r1.x1).min(&r2.x1).clone();
                let y0 = (&r1.y0).max(&r2.y0).clone();
                let y1 = (&r1.y1).min(&r2.y1).clone();
                if x0 >= x1 || y0 >= y1 {
                    return false;
                }
                // Any root of g inside the intersection is simultaneously
                // the unique root of r1 and of r2.
                rect_root_count(&g, &x0, &x1, &y0, &y1).expect("gcd root on an isolating boundary")
                    > 0
            }
        }
    }
}

impl Eq for AlgebraicNumber {}

/// Exact test of whether the isolated root lies on the unit circle: the
/// circle roots of the defining polynomial correspond to the common real
/// roots of the component polynomials of its half-circle arc paths, and
/// each such root is mapped through the arc parametrization into a box
/// that is shrunk until it is either inside the rectangle (the isolated
/// root is that circle point) or disjoint from it.
fn isolated_root_on_circle(r: &IsolatedRoot) -> bool {
    use crate::poly::winding::circle_arc_paths;
    let (right, left) = circle_arc_paths(&r.poly);
    for (path, is_right) in [(&right, true), (&left, false)] {
        let u = if path.h1.is_zero() {
            path.h2.clone()
        } else if path.h2.is_zero() {
            path.h1.clone()
        } else {
            path.h1.gcd(&path.h2)
        };
        if u.is_zero() || u.degree() == Some(0) {
            continue;
        }
        let sites = isolate_real_roots_in(&u, &path.a, &path.b);
        for site in sites {
            if circle_site_is_root(r, &u, site, is_right) {
                return true;
            }
        }
    }
    false
}

/// Image of the arc parameter t under the right-arc map
/// z = (1+it)/(1-it) or the left-arc map z = -(1+it)/(1-it).
fn arc_point(t: &BigRational, is_right: bool) -> (BigRational, BigRational) {
    let t2 = t * t;
    let denom = BigRational::one() + &t2;
    let re = (BigRational::one() - &t2) / &denom;
    let im = BigRational::from_integer(BigInt::from(2)) * t / &denom;
    if is_right {
        (re, im)
    } else {
        (-re, -im)
    }
}

fn circle_site_is_root(r: &IsolatedRoot, u: &RatPoly, site: RealRootSite, is_right: bool) -> bool {
    let mut site = site;
    loop {
        match &site {
            RealRootSite::Exact(t) => {
                let (re, im) = arc_point(t, is_right);
                return r.contains_strictly(&GaussianRational::new(re, im));
            }
            RealRootSite::Open(lo, hi) => {
                let (re_a, im_a) = arc_point(lo, is_right);
                let (re_b, im_b) = arc_point(hi, is_right);
                // On the arcs, re is monotone on each side of t = 0 with
                // extremum +/-1 at t = 0, and im is monotone throughout.
                let mut re_lo = (&re_a).min(&re_b).clone();
                let mut re_hi = (&re_a).max(&re_b).clone();
                let spans_zero = lo < &BigRational::zero() && hi > &BigRational::zero();
                if spans_zero {
                    if is_right {
                        re_hi = BigRational::one();
                    } else {
                        re_lo = -BigRational::one();
                    }
                }
                let im_lo = (&im_a).min(&im_b).clone();
                let im_hi = (&im_a).max(&im_b).clone();
                // Strictly inside the isolating rectangle: the circle
                // point is the isolated root.
                if re_lo > r.x0 && re_hi < r.x1 && im_lo > r.y0 && im_hi < r.y1 {
                    return true;
                }
                // Disjoint from the closed rectangle: it is a different
                // root entirely.
                if re_hi < r.x0 || re_lo > r.x1 || im_hi < r.y0 || im_lo > r.y1 {
                    return false;
                }
                let eps = half(&half(&(hi - lo)));
                site = refine_site(u, &site, &eps);
            }
        }
    }
}

/// Isolate all distinct roots of p with multiplicities.
pub fn isolate_roots(p: &GPoly) -> Vec<(AlgebraicNumber, usize)> {
    assert!(!p.is_zero(), "root isolation on the zero polynomial");
    let mut out = Vec::new();
    for (factor, mult) in p.squarefree_decomposition() {
        for root in isolate_squarefree(&factor) {
            out.push((root, mult));
        }
    }
    out
}

/// Roots of p strictly inside the open unit disk, with multiplicities.
pub fn roots_in_unit_disk(p: &GPoly) -> Vec<(AlgebraicNumber, usize)> {
    let mut out = Vec::new();
    for (mut root, mult) in isolate_roots(p) {
        if root.disk_position() == DiskPosition::Inside {
            out.push((root, mult));
        }
    }
    out
}

fn isolate_squarefree(f: &GPoly) -> Vec<AlgebraicNumber> {
    let n = f.degree().expect("nonzero polynomial");
    if n == 0 {
        return vec![];
    }
    if n == 1 {
        let root = -&(&f.coeff(0) * &f.coeff(1).inv().unwrap());
        return vec![AlgebraicNumber::Exact(root)];
    }
    if n == 2 {
        // Quadratic formula when the discriminant has an exact square
        // root in Q(i).
        let a = f.coeff(2);
        let b = f.coeff(1);
        let c = f.coeff(0);
        let four = GaussianRational::from_int(4);
        let two = GaussianRational::from_int(2);
        let disc = &(&b * &b) - &(&four * &(&a * &c));
        if let Some(s) = disc.exact_sqrt() {
            let inv_2a = (&two * &a).inv().unwrap();
            let r1 = &(&(-&b) + &s) * &inv_2a;
            let r2 = &(&(-&b) - &s) * &inv_2a;
            debug_assert!(r1 != r2, "square-free quadratic with equal roots");
            return vec![AlgebraicNumber::Exact(r1), AlgebraicNumber::Exact(r2)];
        }
    }
    let bound = f.root_bound() + BigRational::one();
    // The initial box strictly contains every root, so the boundary walk
    // cannot fail, and a square-free polynomial has exactly deg(f)
    // distinct roots in it.
    let total = rect_root_count(f, &-bound.clone(), &bound, &-bound.clone(), &bound)
        .expect("roots escape the root bound");
    debug_assert_eq!(total, n);
    let mut stack = vec![(-bound.clone(), bound.clone(), -bound.clone(), bound, total)];
    let mut found = Vec::new();
    while let Some((x0, x1, y0, y1, count)) = stack.pop() {
        if count == 0 {
            continue;
        }
        if count == 1 {
            let mut root = IsolatedRoot {
                poly: f.clone(),
                x0,
                x1,
                y0,
                y1,
            };
            if let Some(v) = exactify(&mut root) {
                found.push(AlgebraicNumber::Exact(v));
            } else {
                found.push(AlgebraicNumber::Isolated(root));
            }
            continue;
        }
        let split_x = &x1 - &x0 >= &y1 - &y0;
        let (lo, hi) = if split_x { (&x0, &x1) } else { (&y0, &y1) };
        let w = hi - lo;
        for frac in CutFractions::new() {
            let cut = lo + &w * &frac;
            let first = if split_x {
                rect_root_count(f, &x0, &cut, &y0, &y1)
            } else {
                rect_root_count(f, &x0, &x1, &y0, &cut)
            };
            let Some(c) = first else { continue };
            if split_x {
                stack.push((x0.clone(), cut.clone(), y0.clone(), y1.clone(), c));
                stack.push((cut, x1, y0, y1, count - c));
            } else {
                stack.push((x0.clone(), x1.clone(), y0.clone(), cut.clone(), c));
                stack.push((x0, x1, cut, y1, count - c));
            }
            break;
        }
    }
    found
}

/// Attempt to recognize the isolated root as a Gaussian rational by
/// testing the simplest rational coordinates inside the rectangle while
/// refining a bounded number of times.
fn exactify(root: &mut IsolatedRoot) -> Option<GaussianRational> {
    for _ in 0..12 {
        let re = simplest_between(&root.x0, &root.x1);
        let im = simplest_between(&root.y0, &root.y1);
        let cand = GaussianRational::new(re, im);
        if root.poly.eval(&cand).is_zero() && root.contains_strictly(&cand) {
            return Some(cand);
        }
        root.refine();
    }
    None
}
