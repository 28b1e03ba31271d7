//! Randomized finite-dimensional property suites.
//!
//! Each suite draws seeded random exact matrices and checks an identity
//! that the infinite-dimensional machinery relies on: the six-term
//! kernel/cokernel dimension identity for products, the two-of-three
//! invertibility laws for block triangles, and the corner criterion
//! (block triangle invertible iff the diagonal is one-sided invertible
//! and the compressed corner is invertible).

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::rational::{assemble_block, RationalMatrix};
use crate::num::gaussian::GaussianRational;

#[derive(Clone, Debug)]
pub struct OracleReport {
    pub suite: String,
    pub trials: usize,
    pub seed: u64,
    pub failures: Vec<String>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn rand_entry(rng: &mut ChaCha8Rng) -> GaussianRational {
    let part = |rng: &mut ChaCha8Rng| -> BigRational {
        if rng.gen_range(0..10) < 4 {
            return BigRational::from_integer(BigInt::from(0));
        }
        let num = rng.gen_range(-3i64..=3);
        let den = if rng.gen_range(0..4) == 0 { 2 } else { 1 };
        BigRational::new(BigInt::from(num), BigInt::from(den))
    };
    let re = part(rng);
    let im = if rng.gen_range(0..10) < 3 {
        part(rng)
    } else {
        BigRational::from_integer(BigInt::from(0))
    };
    GaussianRational::new(re, im)
}

pub fn rand_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> RationalMatrix {
    RationalMatrix::from_fn(rows, cols, |_, _| rand_entry(rng))
}

/// Six-term dimension identity for a composable pair T: X -> Y,
/// S: Y -> Z:
/// dim N(T) + dim N(S) + dim(Z/R(ST)) =
/// dim N(ST) + dim(Y/R(T)) + dim(Z/R(S)).
pub fn product_dimension_suite(trials: usize, seed: u64, max_dim: usize) -> OracleReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for trial in 0..trials {
        let x = rng.gen_range(1..=max_dim);
        let y = rng.gen_range(1..=max_dim);
        let z = rng.gen_range(1..=max_dim);
        let t = rand_matrix(&mut rng, y, x);
        let s = rand_matrix(&mut rng, z, y);
        let st = s.mul(&t);
        let rt = t.rank();
        let rs = s.rank();
        let rst = st.rank();
        let lhs = (x - rt) + (y - rs) + (z - rst);
        let rhs = (x - rst) + (y - rt) + (z - rs);
        if lhs != rhs {
            failures.push(format!(
                "trial {trial}: identity violated ({lhs} != {rhs})\nT = {t}\nS = {s}"
            ));
        }
    }
    OracleReport {
        suite: "product dimension identity".into(),
        trials,
        seed,
        failures,
    }
}

/// Two-of-three laws on M = [[A, C], [0, B]] with square A, B: for each
/// of the invertible / Fredholm / Weyl / Browder properties, any two of
/// {A, B, M} having it forces the third. In finite dimension the latter
/// three hold universally, so the content is the invertibility law plus
/// the classifier's agreement on the universal cases.
pub fn two_of_three_suite(trials: usize, seed: u64, max_dim: usize) -> OracleReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for trial in 0..trials {
        let n = rng.gen_range(1..=max_dim);
        let m = rng.gen_range(1..=max_dim);
        let a = rand_matrix(&mut rng, n, n);
        let b = rand_matrix(&mut rng, m, m);
        let c = rand_matrix(&mut rng, n, m);
        let z = RationalMatrix::zero(m, n);
        let mc = assemble_block(&a, &c, &z, &b).expect("conformable by construction");

        let flags = |t: &RationalMatrix| -> [bool; 4] {
            let rank = t.rank();
            let invertible = rank == t.rows;
            let alpha = t.cols - rank;
            let beta = t.rows - rank;
            let (asc, des) = t.asc_des();
            // fredholm: alpha, beta finite (always here); weyl adds
            // index 0; browder adds asc = des < infinity.
            [invertible, true, alpha == beta, asc == des]
        };
        let fa = flags(&a);
        let fb = flags(&b);
        let fm = flags(&mc);
        for k in 0..4 {
            let votes = [fa[k], fb[k], fm[k]];
            let yes = votes.iter().filter(|&&v| v).count();
            if yes == 2 {
                failures.push(format!(
                    "trial {trial}: property {k} holds for exactly two of (A, B, M_C)\nA = {a}\nB = {b}\nC = {c}"
                ));
            }
        }
    }
    OracleReport {
        suite: "two-of-three block laws".into(),
        trials,
        seed,
        failures,
    }
}

/// Finite-dimensional corner criterion: with A: X -> X' injective-capable
/// and B: Y' -> Y, the block matrix [[A, C], [0, B]] is invertible iff
/// A has full column rank, B has full row rank, and the compression of C
/// from N(B) into a basis of R(A)-perp is invertible. Checked against
/// brute-force rank of the assembled matrix.
pub fn corner_suite(trials: usize, seed: u64, max_dim: usize) -> OracleReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for trial in 0..trials {
        let x = rng.gen_range(1..=max_dim);
        let d = rng.gen_range(0..=2usize);
        let y = rng.gen_range(1..=max_dim);
        // A: x columns, x + d rows; B: y + d columns, y rows: the block
        // matrix is square of size x + d + y.
        let a = rand_matrix(&mut rng, x + d, x);
        let b = rand_matrix(&mut rng, y, y + d);
        let c = rand_matrix(&mut rng, x + d, y + d);
        let z = RationalMatrix::zero(y, x);
        let mc = assemble_block(&a, &c, &z, &b).expect("conformable by construction");
        let brute = mc.rank() == mc.rows;

        let a_inj = a.rank() == a.cols;
        let b_surj = b.rank() == b.rows;
        let verdict = if !(a_inj && b_surj) {
            false
        } else {
            // N(B) basis as columns K; R(A)-perp basis W = N(A*);
            // corner = W* C K.
            let kb = b.kernel_basis();
            let wb = a.adjoint().kernel_basis();
            if kb.len() != wb.len() {
                false
            } else if kb.is_empty() {
                true
            } else {
                let k = RationalMatrix::from_fn(y + d, kb.len(), |i, j| kb[j][i].clone());
                let w = RationalMatrix::from_fn(x + d, wb.len(), |i, j| wb[j][i].clone());
                let c1 = w.adjoint().mul(&c).mul(&k);
                c1.invertible()
            }
        };
        if verdict != brute {
            failures.push(format!(
                "trial {trial}: corner criterion {verdict} but brute force {brute}\nA = {a}\nB = {b}\nC = {c}"
            ));
        }
    }
    OracleReport {
        suite: "corner criterion".into(),
        trials,
        seed,
        failures,
    }
}
