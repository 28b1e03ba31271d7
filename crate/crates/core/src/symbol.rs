//! Laurent symbols of banded operators.
//!
//! A symbol p(z) = sum c_j z^j with finitely many Gaussian-rational
//! coefficients determines a Toeplitz matrix (entry (j, k) = c_{j-k}).
//! Circle-zero detection and winding numbers are decided exactly by the
//! root-counting machinery in [`crate::poly`].

use std::collections::BTreeMap;

use crate::error::{CoreError, Result};
use crate::num::gaussian::GaussianRational;
use crate::poly::complexpoly::GPoly;
use crate::poly::winding::{count_in_unit_disk, has_root_on_unit_circle};

/// Trigonometric-polynomial symbol with a tight coefficient map (no zero
/// values stored).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentSymbol {
    c: BTreeMap<i64, GaussianRational>,
}

impl LaurentSymbol {
    pub fn zero() -> Self {
        LaurentSymbol { c: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(x: GaussianRational) -> Self {
        let mut s = Self::zero();
        s.set(0, x);
        s
    }

    /// The monomial z^d.
    pub fn monomial(d: i64) -> Self {
        let mut s = Self::zero();
        s.set(d, GaussianRational::one());
        s
    }

    pub fn from_coeffs(pairs: Vec<(i64, GaussianRational)>) -> Self {
        let mut s = Self::zero();
        for (d, x) in pairs {
            let cur = s.coeff(d);
            s.set(d, &cur + &x);
        }
        s
    }

    pub fn set(&mut self, d: i64, x: GaussianRational) {
        if x.is_zero() {
            self.c.remove(&d);
        } else {
            self.c.insert(d, x);
        }
    }

    pub fn coeff(&self, d: i64) -> GaussianRational {
        self.c
            .get(&d)
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn low(&self) -> Option<i64> {
        self.c.keys().next().copied()
    }

    pub fn high(&self) -> Option<i64> {
        self.c.keys().next_back().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &GaussianRational)> {
        self.c.iter().map(|(&d, x)| (d, x))
    }

    pub fn add(&self, rhs: &LaurentSymbol) -> LaurentSymbol {
        let mut out = self.clone();
        for (d, x) in rhs.iter() {
            let cur = out.coeff(d);
            out.set(d, &cur + x);
        }
        out
    }

    pub fn neg(&self) -> LaurentSymbol {
        LaurentSymbol {
            c: self.c.iter().map(|(&d, x)| (d, -x)).collect(),
        }
    }

    pub fn sub(&self, rhs: &LaurentSymbol) -> LaurentSymbol {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, x: &GaussianRational) -> LaurentSymbol {
        if x.is_zero() {
            return Self::zero();
        }
        LaurentSymbol {
            c: self.c.iter().map(|(&d, v)| (d, v * x)).collect(),
        }
    }

    /// Exact coefficient convolution.
    pub fn multiply(&self, rhs: &LaurentSymbol) -> LaurentSymbol {
        let mut out = Self::zero();
        for (d1, x1) in self.iter() {
            for (d2, x2) in rhs.iter() {
                let d = d1 + d2;
                let cur = out.coeff(d);
                out.set(d, &cur + &(x1 * x2));
            }
        }
        out
    }

    /// Subtract a constant from the symbol (the symbol of T - lambda).
    pub fn translate(&self, lambda: &GaussianRational) -> LaurentSymbol {
        let mut out = self.clone();
        let cur = out.coeff(0);
        out.set(0, &cur - lambda);
        out
    }

    /// Symbol of the adjoint operator: c_d -> conj(c_{-d}).
    pub fn adjoint(&self) -> LaurentSymbol {
        LaurentSymbol {
            c: self.c.iter().map(|(&d, x)| (-d, x.conj())).collect(),
        }
    }

    /// Clear negative powers: returns (q, m) with q(z) = z^m p(z) a
    /// genuine polynomial and m = max(0, -lowest exponent).
    pub fn to_polynomial(&self) -> (GPoly, usize) {
        if self.is_zero() {
            return (GPoly::zero(), 0);
        }
        let low = self.low().unwrap();
        let m = if low < 0 { (-low) as usize } else { 0 };
        let high = self.high().unwrap();
        let deg = (high + m as i64) as usize;
        let mut coeffs = vec![GaussianRational::zero(); deg + 1];
        for (d, x) in self.iter() {
            coeffs[(d + m as i64) as usize] = x.clone();
        }
        (GPoly::new(coeffs), m)
    }

    /// Total bandwidth bound: max(|low|, |high|), 0 for the zero symbol.
    pub fn band_radius(&self) -> usize {
        match (self.low(), self.high()) {
            (Some(l), Some(h)) => l.unsigned_abs().max(h.unsigned_abs()) as usize,
            _ => 0,
        }
    }
}

impl std::fmt::Display for LaurentSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (d, x) in self.iter() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match d {
                0 => write!(f, "({x})")?,
                1 => write!(f, "({x})z")?,
                _ => write!(f, "({x})z^{d}")?,
            }
        }
        Ok(())
    }
}

/// Whether p has a zero on the unit circle. Exact.
pub fn circle_zero_test(p: &LaurentSymbol) -> Result<bool> {
    if p.is_zero() {
        return Err(CoreError::ZeroSymbol);
    }
    let (q, _) = p.to_polynomial();
    Ok(has_root_on_unit_circle(&q))
}

/// Winding number of p around 0 along the unit circle: the number of
/// roots of z^m p(z) strictly inside the disk (with multiplicity) minus
/// m, where -m is the lowest exponent.
pub fn winding_number(p: &LaurentSymbol) -> Result<i64> {
    if p.is_zero() {
        return Err(CoreError::ZeroSymbol);
    }
    let (q, m) = p.to_polynomial();
    match count_in_unit_disk(&q) {
        Some(k) => Ok(k as i64 - m as i64),
        None => Err(CoreError::CircleZero),
    }
}

/// Square matrix of Laurent symbols, dimension 1 or 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixSymbol {
    pub dim: usize,
    e: Vec<LaurentSymbol>,
}

impl MatrixSymbol {
    pub fn scalar(p: LaurentSymbol) -> Self {
        MatrixSymbol { dim: 1, e: vec![p] }
    }

    pub fn dim2(a: LaurentSymbol, b: LaurentSymbol, c: LaurentSymbol, d: LaurentSymbol) -> Self {
        MatrixSymbol {
            dim: 2,
            e: vec![a, b, c, d],
        }
    }

    /// [[a, c], [0, b]].
    pub fn upper_triangular(a: LaurentSymbol, c: LaurentSymbol, b: LaurentSymbol) -> Self {
        Self::dim2(a, c, LaurentSymbol::zero(), b)
    }

    pub fn identity(dim: usize) -> Self {
        assert!(dim == 1 || dim == 2);
        if dim == 1 {
            Self::scalar(LaurentSymbol::one())
        } else {
            Self::dim2(
                LaurentSymbol::one(),
                LaurentSymbol::zero(),
                LaurentSymbol::zero(),
                LaurentSymbol::one(),
            )
        }
    }

    pub fn zero(dim: usize) -> Self {
        assert!(dim == 1 || dim == 2);
        MatrixSymbol {
            dim,
            e: vec![LaurentSymbol::zero(); dim * dim],
        }
    }

    pub fn at(&self, i: usize, j: usize) -> &LaurentSymbol {
        &self.e[i * self.dim + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut LaurentSymbol {
        &mut self.e[i * self.dim + j]
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(|p| p.is_zero())
    }

    pub fn add(&self, rhs: &MatrixSymbol) -> MatrixSymbol {
        assert_eq!(self.dim, rhs.dim);
        MatrixSymbol {
            dim: self.dim,
            e: self.e.iter().zip(&rhs.e).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn neg(&self) -> MatrixSymbol {
        MatrixSymbol {
            dim: self.dim,
            e: self.e.iter().map(|a| a.neg()).collect(),
        }
    }

    pub fn scale(&self, x: &GaussianRational) -> MatrixSymbol {
        MatrixSymbol {
            dim: self.dim,
            e: self.e.iter().map(|a| a.scale(x)).collect(),
        }
    }

    pub fn multiply(&self, rhs: &MatrixSymbol) -> MatrixSymbol {
        assert_eq!(self.dim, rhs.dim);
        let mut out = MatrixSymbol::zero(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let mut acc = LaurentSymbol::zero();
                for l in 0..self.dim {
                    acc = acc.add(&self.at(i, l).multiply(rhs.at(l, j)));
                }
                *out.at_mut(i, j) = acc;
            }
        }
        out
    }

    /// Adjoint: transpose with entrywise adjoint symbols.
    pub fn adjoint(&self) -> MatrixSymbol {
        let mut out = MatrixSymbol::zero(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                *out.at_mut(i, j) = self.at(j, i).adjoint();
            }
        }
        out
    }

    /// Subtract lambda from every diagonal entry.
    pub fn translate(&self, lambda: &GaussianRational) -> MatrixSymbol {
        let mut out = self.clone();
        for i in 0..self.dim {
            let t = out.at(i, i).translate(lambda);
            *out.at_mut(i, i) = t;
        }
        out
    }

    /// Exact determinant symbol.
    pub fn det_symbol(&self) -> LaurentSymbol {
        match self.dim {
            1 => self.e[0].clone(),
            2 => self
                .at(0, 0)
                .multiply(self.at(1, 1))
                .sub(&self.at(0, 1).multiply(self.at(1, 0))),
            _ => unreachable!("dimension is 1 or 2"),
        }
    }

    /// Largest band radius over the entries.
    pub fn band_radius(&self) -> usize {
        self.e.iter().map(|p| p.band_radius()).max().unwrap_or(0)
    }
}
