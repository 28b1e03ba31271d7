//! Exact kernel computation for banded-plus-finite-rank operators.
//!
//! For a one-component operator `T = Toeplitz(p) + sum_i u_i (x) v_i`
//! with `p != 0`, every square-summable solution of `T x = 0` is an
//! explicit head followed by an exponential-polynomial tail whose
//! roots are the roots of the recurrence polynomial of `p` strictly
//! inside the unit disk. The kernel is therefore the null space of a
//! finite linear system over the head values, the tail coefficients
//! and the rank-one coupling scalars, and its dimension is decided by
//! certified ball elimination.
//!
//! Two-component operators are handled through their block-triangular
//! structure by solving the diagonal blocks and coupling them with the
//! corner block, again as one finite system.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{CoreError, Result};
use crate::linalg::BallMatrix;
use crate::num::ball::Ball;
use crate::num::gaussian::GaussianRational;
use crate::op::bet::{BetOperator, RankOne};
use crate::op::vector::{inner, shift_poly, BlockVector, ExpPolyVector, Tail};
use crate::poly::complexpoly::GPoly;
use crate::poly::roots::{roots_in_unit_disk, AlgebraicNumber};
use crate::symbol::LaurentSymbol;

fn precision_eps(bits: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << bits)
}

/// Recurrence polynomial of the symbol: for rows far from the
/// boundary, `sum_d c_d x_{n-d} = 0` admits the solutions `n^t w^n`
/// exactly at the roots of `char(w) = sum_d c_d w^(hi - d)`. Both
/// extreme coefficients are nonzero, so 0 is never a root.
pub fn recurrence_poly(p: &LaurentSymbol) -> GPoly {
    let lo = p.low().expect("nonzero symbol");
    let hi = p.high().expect("nonzero symbol");
    let mut coeffs = vec![GaussianRational::zero(); (hi - lo) as usize + 1];
    for (d, c) in p.iter() {
        coeffs[(hi - d) as usize] = c.clone();
    }
    GPoly::new(coeffs)
}

/// Coefficients (degree 0..=k) of `n -> sum_d c_d r^{-d} (n - d)^k`,
/// the action of the banded part on the tail monomial n^k r^n.
fn transform_column(p: &LaurentSymbol, r: &Ball, k: usize) -> Result<Vec<Ball>> {
    let mut ek = vec![Ball::zero(); k + 1];
    ek[k] = Ball::one();
    let mut out = vec![Ball::zero(); k + 1];
    for (d, c) in p.iter() {
        let factor = r.pow(-d)?.mul_exact(c);
        for (j, s) in shift_poly(&ek, d).iter().enumerate() {
            out[j] = out[j].add(&s.mul(&factor));
        }
    }
    Ok(out)
}

/// Solve the tail identity `sum_d c_d psi(n-d) r^{-d} = target(n)` for
/// a polynomial psi, where `m` is the multiplicity of `r` as a root of
/// the recurrence polynomial (0 when not a root). The transform drops
/// polynomial degree by exactly m with a nonzero leading factor, so a
/// solution of degree `deg(target) + m` with vanishing coefficients
/// below degree m exists and is found by back-substitution on degrees.
fn solve_tail_response(
    p: &LaurentSymbol,
    r: &Ball,
    m: usize,
    target: &[Ball],
) -> Result<Vec<Ball>> {
    if target.is_empty() {
        return Ok(Vec::new());
    }
    let tdeg = target.len() - 1;
    let deg = tdeg + m;
    let mut cols = Vec::with_capacity(tdeg + 1);
    for k in m..=deg {
        cols.push(transform_column(p, r, k)?);
    }
    let mut residual: Vec<Ball> = target.to_vec();
    let mut psi = vec![Ball::zero(); deg + 1];
    for j in (0..=tdeg).rev() {
        let col = &cols[j];
        let lead = &col[j];
        if !lead.is_certainly_nonzero() {
            return Err(CoreError::PrecisionExhausted {
                bits: 0,
                context: "tail response pivot not separated from zero".into(),
            });
        }
        let coef = residual[j].div(lead)?;
        for idx in 0..=j {
            residual[idx] = residual[idx].sub(&col[idx].mul(&coef));
        }
        psi[j + m] = coef;
    }
    Ok(psi)
}

fn negated_tails(x: &ExpPolyVector) -> Vec<Tail> {
    x.tails
        .iter()
        .map(|t| Tail {
            root: t.root.clone(),
            poly: t.poly.iter().map(Ball::neg).collect(),
        })
        .collect()
}

/// Exponential-polynomial response chi with the formal identity
/// `Toeplitz(p)[chi] = sum(targets)` beyond the data heads.
fn particular_response(
    p: &LaurentSymbol,
    inside: &[(AlgebraicNumber, usize)],
    targets: &[Tail],
) -> Result<Vec<Tail>> {
    let mut out = Vec::new();
    for t in targets {
        if t.poly.is_empty() {
            continue;
        }
        let mult = inside
            .iter()
            .find(|(root, _)| *root == t.root)
            .map_or(0, |(_, m)| *m);
        let psi = solve_tail_response(p, &t.root.enclosure(), mult, &t.poly)?;
        out.push(Tail::checked(t.root.clone(), psi)?);
    }
    Ok(out)
}

fn refined_vector(x: &ExpPolyVector, eps: &BigRational) -> ExpPolyVector {
    let mut out = x.clone();
    for t in &mut out.tails {
        t.root.refine_to(eps);
    }
    out
}

fn tails_value(tails: &[Tail], n: usize) -> Ball {
    let mut acc = Ball::zero();
    for t in tails {
        acc = acc.add(&t.value_at(n));
    }
    acc
}

/// Kernel element of the joint system, reporting the head/tail data of
/// the principal unknown together with the generator coefficients.
pub struct JointKernelElement {
    pub x: ExpPolyVector,
    pub coeffs: Vec<Ball>,
}

/// Solve `T x + sum_g c_g w_g = 0` over pairs (x, c) at one fixed
/// working precision. `T` must be a one-component operator with a
/// nonzero symbol. The returned basis is exact: its length is the true
/// dimension of the solution space.
pub fn joint_kernel_at(
    t: &BetOperator,
    generators: &[ExpPolyVector],
    bits: u32,
) -> Result<Vec<JointKernelElement>> {
    assert_eq!(
        t.dim(),
        1,
        "joint kernel operates on one-component operators"
    );
    let p = t.symbol.at(0, 0).clone();
    if p.is_zero() {
        return Err(CoreError::Unsupported(
            "kernel of a finite-rank operator is infinite-dimensional".into(),
        ));
    }
    let eps = precision_eps(bits);
    let hi = p.high().unwrap();

    let rec = recurrence_poly(&p);
    let mut inside = roots_in_unit_disk(&rec);
    for (root, _) in &mut inside {
        root.refine_to(&eps);
    }

    let us: Vec<ExpPolyVector> = t
        .perturbation
        .iter()
        .map(|ro| refined_vector(&ro.u.parts[0], &eps))
        .collect();
    let vs: Vec<ExpPolyVector> = t
        .perturbation
        .iter()
        .map(|ro| refined_vector(&ro.v.parts[0], &eps))
        .collect();
    let ws: Vec<ExpPolyVector> = generators.iter().map(|w| refined_vector(w, &eps)).collect();

    // first row from which every accessed index lies in tail regime
    let mut r0 = hi.max(0);
    for x in us.iter().chain(&ws) {
        r0 = r0.max(x.head_len() as i64);
    }
    let j0 = (r0 - hi) as usize;
    let r0 = r0 as usize;

    // homogeneous tail basis (root, power)
    let mut hom: Vec<(AlgebraicNumber, usize)> = Vec::new();
    for (root, mult) in &inside {
        for power in 0..*mult {
            hom.push((root.clone(), power));
        }
    }

    // particular responses cancelling the tails of each driver
    let chi_u: Vec<Vec<Tail>> = us
        .iter()
        .map(|u| particular_response(&p, &inside, &negated_tails(u)))
        .collect::<Result<_>>()?;
    let chi_w: Vec<Vec<Tail>> = ws
        .iter()
        .map(|w| particular_response(&p, &inside, &negated_tails(w)))
        .collect::<Result<_>>()?;

    let n_hom = hom.len();
    let n_pert = us.len();
    let n_gen = ws.len();
    let cols = j0 + n_hom + n_pert + n_gen;
    let rows = r0 + n_pert;
    let mut mat = BallMatrix::zero(rows, cols);

    let phi_value = |root: &AlgebraicNumber, power: usize, k: usize| -> Ball {
        let kk = GaussianRational::from_real(BigRational::from_integer(
            BigInt::from(k).pow(power as u32),
        ));
        root.enclosure()
            .pow(k as i64)
            .expect("nonnegative power cannot fail")
            .mul_exact(&kk)
    };

    // value of the tail-regime part of x at index k for each column
    let tail_col_value = |col: usize, k: usize| -> Ball {
        if col < n_hom {
            let (root, power) = &hom[col];
            phi_value(root, *power, k)
        } else if col < n_hom + n_pert {
            tails_value(&chi_u[col - n_hom], k)
        } else {
            tails_value(&chi_w[col - n_hom - n_pert], k)
        }
    };

    // operator rows 0..r0
    for n in 0..r0 {
        for (d, c) in p.iter() {
            let k = n as i64 - d;
            if k < 0 {
                continue;
            }
            let k = k as usize;
            if k < j0 {
                let cur = mat.at(n, k).clone();
                *mat.at_mut(n, k) = cur.add(&Ball::exact(c.clone()));
            } else {
                for col in 0..n_hom + n_pert + n_gen {
                    let contrib = tail_col_value(col, k).mul_exact(c);
                    let cur = mat.at(n, j0 + col).clone();
                    *mat.at_mut(n, j0 + col) = cur.add(&contrib);
                }
            }
        }
        for (i, u) in us.iter().enumerate() {
            let cur = mat.at(n, j0 + n_hom + i).clone();
            *mat.at_mut(n, j0 + n_hom + i) = cur.add(&u.entry(n));
        }
        for (g, w) in ws.iter().enumerate() {
            let cur = mat.at(n, j0 + n_hom + n_pert + g).clone();
            *mat.at_mut(n, j0 + n_hom + n_pert + g) = cur.add(&w.entry(n));
        }
    }

    // consistency rows: <x, v_i> - s_i = 0
    let wrap = |tails: &[Tail]| ExpPolyVector {
        head: vec![Ball::zero(); j0],
        tails: tails.to_vec(),
    };
    for (i, v) in vs.iter().enumerate() {
        let row = r0 + i;
        for k in 0..j0 {
            *mat.at_mut(row, k) = v.entry(k).conj();
        }
        for (col, (root, power)) in hom.iter().enumerate() {
            let mut phi = wrap(&[]);
            let mut poly = vec![Ball::zero(); power + 1];
            poly[*power] = Ball::one();
            phi.tails = vec![Tail::checked(root.clone(), poly)?];
            *mat.at_mut(row, j0 + col) = inner(&phi, v)?;
        }
        for (l, chi) in chi_u.iter().enumerate() {
            let mut val = inner(&wrap(chi), v)?;
            if l == i {
                val = val.sub(&Ball::one());
            }
            *mat.at_mut(row, j0 + n_hom + l) = val;
        }
        for (g, chi) in chi_w.iter().enumerate() {
            *mat.at_mut(row, j0 + n_hom + n_pert + g) = inner(&wrap(chi), v)?;
        }
    }

    let elim = mat.try_eliminate().ok_or(CoreError::PrecisionExhausted {
        bits,
        context: "kernel system elimination undecided".into(),
    })?;

    let mut out = Vec::with_capacity(elim.kernel.len());
    for coords in &elim.kernel {
        let head = coords[..j0].to_vec();
        let mut tails = Vec::new();
        for (col, (root, power)) in hom.iter().enumerate() {
            let coef = &coords[j0 + col];
            if coef.is_exact_zero() {
                continue;
            }
            let mut poly = vec![Ball::zero(); power + 1];
            poly[*power] = coef.clone();
            tails.push(Tail::checked(root.clone(), poly)?);
        }
        let mut scaled_chis = Vec::new();
        for (l, chi) in chi_u.iter().enumerate() {
            scaled_chis.push((coords[j0 + n_hom + l].clone(), chi));
        }
        for (g, chi) in chi_w.iter().enumerate() {
            scaled_chis.push((coords[j0 + n_hom + n_pert + g].clone(), chi));
        }
        for (coef, chi) in scaled_chis {
            if coef.is_exact_zero() {
                continue;
            }
            for t in chi {
                tails.push(Tail {
                    root: t.root.clone(),
                    poly: t.poly.iter().map(|c| c.mul(&coef)).collect(),
                });
            }
        }
        let mut x = ExpPolyVector { head, tails };
        x.normalize();
        out.push(JointKernelElement {
            x,
            coeffs: coords[j0 + n_hom + n_pert..].to_vec(),
        });
    }
    Ok(out)
}

/// Kernel basis of a one-component operator at fixed precision.
pub fn scalar_kernel_at(t: &BetOperator, bits: u32) -> Result<Vec<ExpPolyVector>> {
    Ok(joint_kernel_at(t, &[], bits)?
        .into_iter()
        .map(|e| e.x)
        .collect())
}

/// Particular solution of `T x = w` at fixed precision, or None when
/// unsolvability is certified.
pub fn scalar_solve_at(
    t: &BetOperator,
    w: &ExpPolyVector,
    bits: u32,
) -> Result<Option<ExpPolyVector>> {
    let neg_w = w.neg();
    let elements = joint_kernel_at(t, std::slice::from_ref(&neg_w), bits)?;
    // T x = c w inside the joint kernel; any element with c != 0 rescales
    for e in &elements {
        if e.coeffs[0].is_certainly_nonzero() {
            let inv = e.coeffs[0].inv()?;
            return Ok(Some(e.x.scale(&inv)));
        }
    }
    if elements.iter().all(|e| e.coeffs[0].is_exact_zero()) {
        return Ok(None);
    }
    Err(CoreError::PrecisionExhausted {
        bits,
        context: "solvability coefficient not separated from zero".into(),
    })
}

/// Scalar operator formed by one block entry of a two-component
/// operator: the (i, j) symbol plus the (i, j) parts of each rank-one
/// term. Faithful exactly when the operator is block-triangular.
pub fn block_component(t: &BetOperator, i: usize, j: usize) -> Result<BetOperator> {
    assert_eq!(t.dim(), 2);
    let perturbation = t
        .perturbation
        .iter()
        .map(|ro| RankOne {
            u: BlockVector::scalar(ro.u.parts[i].clone()),
            v: BlockVector::scalar(ro.v.parts[j].clone()),
        })
        .collect();
    BetOperator::new(
        crate::symbol::MatrixSymbol::scalar(t.symbol.at(i, j).clone()),
        perturbation,
    )
}

/// Kernel basis at fixed precision. Two-component operators must be
/// block-triangular; the reduction couples the kernel of one diagonal
/// block through the corner into the other diagonal block.
pub fn kernel_at(t: &BetOperator, bits: u32) -> Result<Vec<BlockVector>> {
    match t.dim() {
        1 => Ok(scalar_kernel_at(t, bits)?
            .into_iter()
            .map(BlockVector::scalar)
            .collect()),
        2 => {
            if t.is_upper_triangular() {
                let a = block_component(t, 0, 0)?;
                let c = block_component(t, 0, 1)?;
                let b = block_component(t, 1, 1)?;
                let ys = scalar_kernel_at(&b, bits)?;
                let drivers: Vec<ExpPolyVector> = ys
                    .iter()
                    .map(|y| {
                        c.apply(&BlockVector::scalar(y.clone()))
                            .map(|r| r.parts[0].clone())
                    })
                    .collect::<Result<_>>()?;
                let joint = joint_kernel_at(&a, &drivers, bits)?;
                Ok(joint
                    .into_iter()
                    .map(|e| {
                        let mut x1 = ExpPolyVector::zero();
                        for (coef, y) in e.coeffs.iter().zip(&ys) {
                            x1 = x1.add(&y.scale(coef));
                        }
                        BlockVector::pair(e.x, x1)
                    })
                    .collect())
            } else if t.is_lower_triangular() {
                let a = block_component(t, 0, 0)?;
                let c = block_component(t, 1, 0)?;
                let b = block_component(t, 1, 1)?;
                let zs = scalar_kernel_at(&a, bits)?;
                let drivers: Vec<ExpPolyVector> = zs
                    .iter()
                    .map(|z| {
                        c.apply(&BlockVector::scalar(z.clone()))
                            .map(|r| r.parts[0].clone())
                    })
                    .collect::<Result<_>>()?;
                let joint = joint_kernel_at(&b, &drivers, bits)?;
                Ok(joint
                    .into_iter()
                    .map(|e| {
                        let mut x0 = ExpPolyVector::zero();
                        for (coef, z) in e.coeffs.iter().zip(&zs) {
                            x0 = x0.add(&z.scale(coef));
                        }
                        BlockVector::pair(x0, e.x)
                    })
                    .collect())
            } else {
                Err(CoreError::Unsupported(
                    "kernel computation requires block-triangular structure".into(),
                ))
            }
        }
        d => Err(CoreError::Unsupported(format!(
            "kernel computation for {d}-component operators"
        ))),
    }
}
