//! Certified linear algebra over complex balls.
//!
//! Every pivot decision must be certified: a pivot is usable only when
//! its ball excludes zero, and a column is skipped only when every
//! candidate entry is exactly zero. Anything else is Undecided, and the
//! caller reruns at higher precision.

use crate::error::{CoreError, Result};
use crate::num::ball::Ball;
use crate::num::gaussian::GaussianRational;
use crate::tri::TriState;

#[derive(Clone, Debug)]
pub struct BallMatrix {
    pub rows: usize,
    pub cols: usize,
    e: Vec<Ball>,
}

#[derive(Clone, Debug)]
pub struct Elimination {
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
    /// Null-space basis vectors (length = cols - rank). Exact when all
    /// input entries were exact.
    pub kernel: Vec<Vec<Ball>>,
}

impl BallMatrix {
    pub fn new(rows: usize, cols: usize, e: Vec<Ball>) -> Self {
        assert_eq!(e.len(), rows * cols);
        BallMatrix { rows, cols, e }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        BallMatrix {
            rows,
            cols,
            e: vec![Ball::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Ball::one();
        }
        m
    }

    pub fn from_exact_rows(rows: Vec<Vec<GaussianRational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        BallMatrix {
            rows: r,
            cols: c,
            e: rows.into_iter().flatten().map(Ball::exact).collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Ball) -> Self {
        let mut e = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                e.push(f(i, j));
            }
        }
        BallMatrix { rows, cols, e }
    }

    pub fn at(&self, r: usize, c: usize) -> &Ball {
        &self.e[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Ball {
        &mut self.e[r * self.cols + c]
    }

    pub fn mul(&self, rhs: &BallMatrix) -> BallMatrix {
        assert_eq!(self.cols, rhs.rows);
        BallMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = Ball::zero();
            for k in 0..self.cols {
                acc = acc.add(&self.at(i, k).mul(rhs.at(k, j)));
            }
            acc
        })
    }

    pub fn add(&self, rhs: &BallMatrix) -> BallMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        BallMatrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j).add(rhs.at(i, j)))
    }

    pub fn sub(&self, rhs: &BallMatrix) -> BallMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        BallMatrix::from_fn(self.rows, self.cols, |i, j| self.at(i, j).sub(rhs.at(i, j)))
    }

    pub fn adjoint(&self) -> BallMatrix {
        BallMatrix::from_fn(self.cols, self.rows, |i, j| self.at(j, i).conj())
    }

    pub fn mul_vec(&self, v: &[Ball]) -> Vec<Ball> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Ball::zero();
                for (j, vj) in v.iter().enumerate() {
                    acc = acc.add(&self.at(i, j).mul(vj));
                }
                acc
            })
            .collect()
    }

    pub fn all_contain_zero(&self) -> bool {
        self.e.iter().all(|b| b.contains_zero())
    }

    pub fn all_exact_zero(&self) -> bool {
        self.e.iter().all(|b| b.is_exact_zero())
    }

    /// Certified reduced row echelon form. None when some pivot decision
    /// is undecidable at the current radii.
    pub fn try_eliminate(&self) -> Option<Elimination> {
        let mut m = self.clone();
        let mut pivot_cols = Vec::new();
        let mut r = 0usize;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // Choose the certified-nonzero candidate with the largest
            // modulus lower bound; exactness is unaffected by the choice.
            let mut best: Option<(usize, num_rational::BigRational)> = None;
            let mut all_exact_zero = true;
            let mut any_uncertain = false;
            for i in r..m.rows {
                let b = m.at(i, c);
                if b.is_certainly_nonzero() {
                    all_exact_zero = false;
                    let lb = b.abs_lb();
                    if best.as_ref().is_none_or(|(_, cur)| &lb > cur) {
                        best = Some((i, lb));
                    }
                } else if !b.is_exact_zero() {
                    all_exact_zero = false;
                    any_uncertain = true;
                }
            }
            let Some((p, _)) = best else {
                if all_exact_zero {
                    continue; // certified free column
                }
                debug_assert!(any_uncertain);
                return None;
            };
            if p != r {
                for j in 0..m.cols {
                    let t = m.at(p, j).clone();
                    *m.at_mut(p, j) = m.at(r, j).clone();
                    *m.at_mut(r, j) = t;
                }
            }
            let inv = m.at(r, c).inv().expect("certified pivot");
            for j in c..m.cols {
                let t = m.at(r, j).mul(&inv);
                *m.at_mut(r, j) = t;
            }
            *m.at_mut(r, c) = Ball::one();
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.at(i, c).clone();
                if f.is_exact_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let t = m.at(i, j).sub(&f.mul(m.at(r, j)));
                    *m.at_mut(i, j) = t;
                }
                *m.at_mut(i, c) = Ball::zero();
            }
            pivot_cols.push(c);
            r += 1;
        }
        let mut kernel = Vec::new();
        let mut piv_iter = pivot_cols.iter().copied().peekable();
        for c in 0..m.cols {
            if piv_iter.peek() == Some(&c) {
                piv_iter.next();
                continue;
            }
            let mut v = vec![Ball::zero(); m.cols];
            v[c] = Ball::one();
            for (k, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = m.at(k, c).neg();
            }
            kernel.push(v);
        }
        Some(Elimination {
            rank: r,
            pivot_cols,
            kernel,
        })
    }

    /// Certified invertibility of a square ball matrix. Yes demands full
    /// certified rank; No demands an exactly-singular elimination (only
    /// possible with exact entries); anything else is Undecided.
    pub fn invertible_tristate(&self) -> TriState {
        assert!(self.rows == self.cols);
        match self.try_eliminate() {
            Some(el) if el.rank == self.rows => TriState::Yes,
            Some(_) => TriState::No,
            None => TriState::Undecided,
        }
    }
}

/// Run certified elimination, regenerating the matrix at doubled
/// precision until the decision closes or the bit budget is exhausted.
pub fn eliminate_adaptive(
    mut make: impl FnMut(u32) -> Result<BallMatrix>,
    start_bits: u32,
    max_bits: u32,
    context: &str,
) -> Result<Elimination> {
    let mut bits = start_bits;
    loop {
        let m = make(bits)?;
        if let Some(el) = m.try_eliminate() {
            return Ok(el);
        }
        if bits >= max_bits {
            return Err(CoreError::PrecisionExhausted {
                bits,
                context: context.to_string(),
            });
        }
        bits = (bits * 2).min(max_bits);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_ints(re, im)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn exact_elimination_matches_rational() {
        let m = BallMatrix::from_exact_rows(vec![
            vec![g(1, 0), g(2, 0), g(3, 0)],
            vec![g(2, 0), g(4, 0), g(6, 0)],
            vec![g(0, 1), g(0, 2), g(1, 0)],
        ]);
        let el = m.try_eliminate().unwrap();
        assert_eq!(el.rank, 2);
        assert_eq!(el.kernel.len(), 1);
        // kernel vector annihilates exactly
        let v = &el.kernel[0];
        for b in m.mul_vec(v) {
            assert!(b.is_exact_zero());
        }
    }

    #[test]
    fn uncertain_pivot_is_undecided() {
        // A ball straddling zero cannot be used or skipped.
        let m = BallMatrix::new(1, 1, vec![Ball::new(g(0, 0), q(1, 10))]);
        assert!(m.try_eliminate().is_none());
        assert_eq!(m.invertible_tristate(), TriState::Undecided);
    }

    #[test]
    fn inexact_but_certified_pivots_pass() {
        // Diagonal balls bounded away from zero.
        let m = BallMatrix::new(
            2,
            2,
            vec![
                Ball::new(g(1, 0), q(1, 10)),
                Ball::zero(),
                Ball::zero(),
                Ball::new(g(0, 1), q(1, 10)),
            ],
        );
        let el = m.try_eliminate().unwrap();
        assert_eq!(el.rank, 2);
        assert_eq!(m.invertible_tristate(), TriState::Yes);
    }

    #[test]
    fn adaptive_refinement() {
        // Radius shrinks as 2^-bits: decidable once bits > 2.
        let decided = eliminate_adaptive(
            |bits| {
                let rad = BigRational::new(BigInt::from(2), BigInt::from(2i64.pow(bits.min(40))));
                Ok(BallMatrix::new(1, 1, vec![Ball::new(g(1, 0), rad)]))
            },
            1,
            64,
            "test",
        )
        .unwrap();
        assert_eq!(decided.rank, 1);
        // Truly zero but inexact: exhausts the budget honestly.
        let failed = eliminate_adaptive(
            |bits| {
                let rad = BigRational::new(BigInt::from(1), BigInt::from(2i64.pow(bits.min(40))));
                Ok(BallMatrix::new(1, 1, vec![Ball::new(g(0, 0), rad)]))
            },
            8,
            32,
            "test",
        );
        assert!(matches!(failed, Err(CoreError::PrecisionExhausted { .. })));
    }
}
