//! Exact dense matrices over the Gaussian rationals.
//!
//! Rank goes through fraction-free (Bareiss) elimination on Gaussian
//! integers after clearing row denominators; kernels through exact
//! reduced row echelon form. Nothing in this module ever rounds.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{CoreError, Result};
use crate::num::gaussian::GaussianRational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    pub rows: usize,
    pub cols: usize,
    e: Vec<GaussianRational>,
}

type GInt = (BigInt, BigInt);

fn gi_is_zero(a: &GInt) -> bool {
    a.0.is_zero() && a.1.is_zero()
}

fn gi_mul(a: &GInt, b: &GInt) -> GInt {
    (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
}

fn gi_sub(a: &GInt, b: &GInt) -> GInt {
    (&a.0 - &b.0, &a.1 - &b.1)
}

/// Exact Gaussian-integer division; panics if the quotient is not a
/// Gaussian integer (Bareiss guarantees divisibility at every step).
fn gi_div_exact(a: &GInt, b: &GInt) -> GInt {
    let n = &b.0 * &b.0 + &b.1 * &b.1;
    assert!(
        !n.is_zero(),
        "division by zero in fraction-free elimination"
    );
    let re_num = &a.0 * &b.0 + &a.1 * &b.1;
    let im_num = &a.1 * &b.0 - &a.0 * &b.1;
    let (re_q, re_r) = num_integer::Integer::div_rem(&re_num, &n);
    let (im_q, im_r) = num_integer::Integer::div_rem(&im_num, &n);
    assert!(
        re_r.is_zero() && im_r.is_zero(),
        "inexact division in fraction-free elimination"
    );
    (re_q, im_q)
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, e: Vec<GaussianRational>) -> Self {
        assert_eq!(e.len(), rows * cols, "entry count mismatch");
        RationalMatrix { rows, cols, e }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            e: vec![GaussianRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = GaussianRational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<GaussianRational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        RationalMatrix {
            rows: r,
            cols: c,
            e: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> GaussianRational,
    ) -> Self {
        let mut e = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                e.push(f(i, j));
            }
        }
        RationalMatrix { rows, cols, e }
    }

    pub fn at(&self, r: usize, c: usize) -> &GaussianRational {
        &self.e[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut GaussianRational {
        &mut self.e[r * self.cols + c]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn add(&self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            e: self.e.iter().zip(&rhs.e).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            e: self.e.iter().zip(&rhs.e).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, x: &GaussianRational) -> RationalMatrix {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            e: self.e.iter().map(|a| a * x).collect(),
        }
    }

    pub fn mul(&self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, rhs.rows, "product dimension mismatch");
        let mut out = RationalMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let t = a * rhs.at(k, j);
                    *out.at_mut(i, j) += &t;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[GaussianRational]) -> Vec<GaussianRational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = GaussianRational::zero();
                for (j, vj) in v.iter().enumerate() {
                    acc += &(self.at(i, j) * vj);
                }
                acc
            })
            .collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> RationalMatrix {
        RationalMatrix::from_fn(self.cols, self.rows, |i, j| self.at(j, i).conj())
    }

    /// Exact rank by fraction-free elimination.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        // Clear denominators row by row (row scaling preserves rank).
        let mut m: Vec<Vec<GInt>> = (0..self.rows)
            .map(|i| {
                let mut l = BigInt::one();
                for j in 0..self.cols {
                    let x = self.at(i, j);
                    l = num_integer::lcm(l, x.re.denom().clone());
                    l = num_integer::lcm(l, x.im.denom().clone());
                }
                (0..self.cols)
                    .map(|j| {
                        let x = self.at(i, j);
                        let re = x.re.numer() * (&l / x.re.denom());
                        let im = x.im.numer() * (&l / x.im.denom());
                        (re, im)
                    })
                    .collect()
            })
            .collect();
        let mut prev: GInt = (BigInt::one(), BigInt::zero());
        let mut r = 0usize;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !gi_is_zero(&m[i][c])) else {
                continue;
            };
            m.swap(r, p);
            for i in r + 1..self.rows {
                for j in c + 1..self.cols {
                    let t = gi_sub(&gi_mul(&m[r][c], &m[i][j]), &gi_mul(&m[i][c], &m[r][j]));
                    m[i][j] = gi_div_exact(&t, &prev);
                }
                m[i][c] = (BigInt::zero(), BigInt::zero());
            }
            prev = m[r][c].clone();
            r += 1;
        }
        r
    }

    /// Exact reduced row echelon form; returns (reduced matrix, pivot
    /// column indices).
    pub fn rref(&self) -> (RationalMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.at(i, c).is_zero()) else {
                continue;
            };
            for j in 0..m.cols {
                let t = m.at(p, j).clone();
                *m.at_mut(p, j) = m.at(r, j).clone();
                *m.at_mut(r, j) = t;
            }
            let inv = m.at(r, c).inv().unwrap();
            for j in c..m.cols {
                let t = m.at(r, j) * &inv;
                *m.at_mut(r, j) = t;
            }
            for i in 0..m.rows {
                if i == r || m.at(i, c).is_zero() {
                    continue;
                }
                let f = m.at(i, c).clone();
                for j in c..m.cols {
                    let t = &f * m.at(r, j);
                    *m.at_mut(i, j) -= &t;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Exact basis of the null space; length = cols - rank.
    pub fn kernel_basis(&self) -> Vec<Vec<GaussianRational>> {
        let (m, pivots) = self.rref();
        let mut basis = Vec::new();
        let mut piv_iter = pivots.iter().copied().peekable();
        let mut free_cols = Vec::new();
        for c in 0..self.cols {
            if piv_iter.peek() == Some(&c) {
                piv_iter.next();
            } else {
                free_cols.push(c);
            }
        }
        for f in free_cols {
            let mut v = vec![GaussianRational::zero(); self.cols];
            v[f] = GaussianRational::one();
            for (k, &pc) in pivots.iter().enumerate() {
                v[pc] = -m.at(k, f);
            }
            basis.push(v);
        }
        basis
    }

    pub fn invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// alpha(M^k) and beta(M^k) for k = 1..=kmax.
    pub fn power_defects(&self, kmax: usize) -> Vec<(usize, usize)> {
        assert!(self.is_square(), "power defects of a non-square matrix");
        assert!(kmax >= 1);
        let mut out = Vec::with_capacity(kmax);
        let mut p = self.clone();
        for _ in 0..kmax {
            let rk = p.rank();
            out.push((self.cols - rk, self.rows - rk));
            p = p.mul(self);
        }
        out
    }

    /// Ascent and descent. In finite dimension both stabilization indices
    /// are read off the same rank sequence rank(M^k), since
    /// alpha(M^k) = beta(M^k) = n - rank(M^k) for square M.
    pub fn asc_des(&self) -> (usize, usize) {
        assert!(self.is_square(), "ascent of a non-square matrix");
        let n = self.rows;
        let mut prev_rank = n; // rank(M^0)
        let mut p = self.clone();
        let mut k = 0usize;
        loop {
            let rk = p.rank();
            if rk == prev_rank {
                return (k, k);
            }
            prev_rank = rk;
            k += 1;
            if k > n {
                unreachable!("rank chain longer than the dimension");
            }
            p = p.mul(self);
        }
    }
}

/// Assemble [[a, c], [z, b]] as one matrix.
pub fn assemble_block(
    a: &RationalMatrix,
    c: &RationalMatrix,
    z: &RationalMatrix,
    b: &RationalMatrix,
) -> Result<RationalMatrix> {
    if a.rows != c.rows || z.rows != b.rows || a.cols != z.cols || c.cols != b.cols {
        return Err(CoreError::DimensionMismatch(format!(
            "block shapes ({}x{}, {}x{}; {}x{}, {}x{}) are not conformable",
            a.rows, a.cols, c.rows, c.cols, z.rows, z.cols, b.rows, b.cols
        )));
    }
    let rows = a.rows + z.rows;
    let cols = a.cols + c.cols;
    Ok(RationalMatrix::from_fn(rows, cols, |i, j| {
        match (i < a.rows, j < a.cols) {
            (true, true) => a.at(i, j).clone(),
            (true, false) => c.at(i, j - a.cols).clone(),
            (false, true) => z.at(i - a.rows, j).clone(),
            (false, false) => b.at(i - a.rows, j - a.cols).clone(),
        }
    }))
}

impl std::fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}
