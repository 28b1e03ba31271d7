//! Certified complex ball arithmetic.
//!
//! A `Ball` is a closed disk {z : |z - mid| <= rad} with exact rational
//! midpoint and exact rational radius. All radius bookkeeping is done in
//! rational arithmetic with conservative upper bounds, so a ball always
//! contains the true value it tracks and a radius of zero means the value
//! is known exactly. Exactness therefore propagates through every
//! operation on exact inputs for free.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

use crate::error::{CoreError, Result};
use crate::num::gaussian::GaussianRational;

/// Floor of the square root of a nonnegative rational.
pub fn sqrt_lb(x: &BigRational) -> BigRational {
    assert!(!x.is_negative(), "sqrt of negative rational");
    if x.is_zero() {
        return BigRational::zero();
    }
    let nd = x.numer() * x.denom();
    let s = nd.to_biguint().expect("nonnegative").sqrt();
    BigRational::new(BigInt::from(s), x.denom().clone())
}

/// Ceiling-style upper bound for the square root of a nonnegative rational.
pub fn sqrt_ub(x: &BigRational) -> BigRational {
    assert!(!x.is_negative(), "sqrt of negative rational");
    if x.is_zero() {
        return BigRational::zero();
    }
    let nd = x.numer() * x.denom();
    let s = nd.to_biguint().expect("nonnegative").sqrt() + BigUint::one();
    BigRational::new(BigInt::from(s), x.denom().clone())
}

/// A complex disk with rational midpoint and radius.
#[derive(Clone, PartialEq, Eq)]
pub struct Ball {
    pub mid: GaussianRational,
    pub rad: BigRational,
}

impl Ball {
    pub fn exact(mid: GaussianRational) -> Self {
        Ball {
            mid,
            rad: BigRational::zero(),
        }
    }

    pub fn new(mid: GaussianRational, rad: BigRational) -> Self {
        assert!(!rad.is_negative(), "negative radius");
        Ball { mid, rad }
    }

    pub fn zero() -> Self {
        Ball::exact(GaussianRational::zero())
    }

    pub fn one() -> Self {
        Ball::exact(GaussianRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Ball::exact(GaussianRational::from_int(n))
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// True exactly when the ball is the single point 0.
    pub fn is_exact_zero(&self) -> bool {
        self.rad.is_zero() && self.mid.is_zero()
    }

    /// True when every point of the ball is nonzero: |mid| > rad.
    pub fn is_certainly_nonzero(&self) -> bool {
        if self.rad.is_zero() {
            return !self.mid.is_zero();
        }
        self.mid.norm_sqr() > &self.rad * &self.rad
    }

    pub fn contains_zero(&self) -> bool {
        !self.is_certainly_nonzero()
    }

    pub fn contains(&self, z: &GaussianRational) -> bool {
        (&self.mid - z).norm_sqr() <= &self.rad * &self.rad
    }

    /// Rational upper bound for |z| over the ball.
    pub fn abs_ub(&self) -> BigRational {
        sqrt_ub(&self.mid.norm_sqr()) + &self.rad
    }

    /// Rational lower bound for |z| over the ball (clamped at 0).
    pub fn abs_lb(&self) -> BigRational {
        let lb = sqrt_lb(&self.mid.norm_sqr()) - &self.rad;
        // sqrt_lb underestimates |mid| by at most 1/denom, which is already
        // conservative in the right direction here.
        if lb.is_negative() {
            BigRational::zero()
        } else {
            lb
        }
    }

    pub fn conj(&self) -> Self {
        Ball {
            mid: self.mid.conj(),
            rad: self.rad.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        Ball {
            mid: -&self.mid,
            rad: self.rad.clone(),
        }
    }

    pub fn add(&self, rhs: &Ball) -> Self {
        Ball {
            mid: &self.mid + &rhs.mid,
            rad: &self.rad + &rhs.rad,
        }
    }

    pub fn sub(&self, rhs: &Ball) -> Self {
        Ball {
            mid: &self.mid - &rhs.mid,
            rad: &self.rad + &rhs.rad,
        }
    }

    pub fn mul(&self, rhs: &Ball) -> Self {
        let mid = &self.mid * &rhs.mid;
        if self.rad.is_zero() && rhs.rad.is_zero() {
            return Ball::exact(mid);
        }
        let a = sqrt_ub(&self.mid.norm_sqr());
        let b = sqrt_ub(&rhs.mid.norm_sqr());
        let rad = &a * &rhs.rad + &b * &self.rad + &self.rad * &rhs.rad;
        Ball { mid, rad }
    }

    pub fn scale_rational(&self, c: &BigRational) -> Self {
        Ball {
            mid: self.mid.scale(c),
            rad: &self.rad * c.abs(),
        }
    }

    pub fn mul_exact(&self, c: &GaussianRational) -> Self {
        Ball {
            mid: &self.mid * c,
            rad: &self.rad * sqrt_ub(&c.norm_sqr()),
        }
    }

    /// Reciprocal; requires the ball to exclude zero.
    pub fn inv(&self) -> Result<Self> {
        if !self.is_certainly_nonzero() {
            return Err(CoreError::PrecisionExhausted {
                bits: 0,
                context: "reciprocal of a ball containing zero".into(),
            });
        }
        if self.rad.is_zero() {
            return Ok(Ball::exact(self.mid.inv()?));
        }
        let mid_inv = self.mid.inv()?;
        // |1/z - 1/m| = |m - z| / (|z||m|) <= rad / (lb * |m|).
        let m_abs_lb = sqrt_lb(&self.mid.norm_sqr());
        let z_lb = &m_abs_lb - &self.rad;
        if !z_lb.is_positive() {
            return Err(CoreError::PrecisionExhausted {
                bits: 0,
                context: "reciprocal lower bound collapsed".into(),
            });
        }
        let rad = &self.rad / (&z_lb * &m_abs_lb);
        Ok(Ball { mid: mid_inv, rad })
    }

    pub fn div(&self, rhs: &Ball) -> Result<Self> {
        Ok(self.mul(&rhs.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e == 0 {
            return Ok(Ball::one());
        }
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Ball::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Round the midpoint to denominator 2^bits, absorbing the rounding
    /// error into the radius. Keeps coefficient growth bounded on long
    /// computations without sacrificing rigor.
    pub fn compress(&self, bits: u32) -> Self {
        if self.rad.is_zero() {
            return self.clone();
        }
        let scale = BigInt::from(1u8) << bits;
        let round = |x: &BigRational| -> BigRational {
            let scaled = x * BigRational::from_integer(scale.clone());
            BigRational::new(scaled.round().to_integer(), scale.clone())
        };
        let re = round(&self.mid.re);
        let im = round(&self.mid.im);
        // Component error <= 2^-(bits+1) each, so |shift| <= 2^-bits.
        let extra = BigRational::new(BigInt::one(), scale);
        Ball {
            mid: GaussianRational::new(re, im),
            rad: &self.rad + extra,
        }
    }

    /// Crude f64 view of the midpoint, for reporting only.
    pub fn approx(&self) -> (f64, f64) {
        (
            self.mid.re.to_f64().unwrap_or(f64::NAN),
            self.mid.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Do the two balls intersect?
    pub fn overlaps(&self, other: &Ball) -> bool {
        let d2 = (&self.mid - &other.mid).norm_sqr();
        let r = &self.rad + &other.rad;
        d2 <= &r * &r
    }
}

impl fmt::Debug for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rad.is_zero() {
            write!(f, "{}", self.mid)
        } else {
            let (re, im) = self.approx();
            write!(
                f,
                "({re}{im:+}i ± {:e})",
                self.rad.to_f64().unwrap_or(f64::NAN)
            )
        }
    }
}
