//! Construction and verification of completions: given diagonal
//! operators A and B, decide whether the upper block operator
//! [[A, C], [0, B]] can be made Browder (or invertible) by a suitable
//! corner C, and build such a C explicitly with a checkable
//! certificate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::browder::{classify, OperatorClass};
use crate::config::{with_precision, RunConfig};
use crate::error::{CoreError, Result};
use crate::fredholm::{scalar_kernel_at, ExtNat};
use crate::linalg::ball::BallMatrix;
use crate::op::bet::{BetOperator, RankOne};
use crate::op::vector::{inner, BlockVector, ExpPolyVector};
use crate::symbol::MatrixSymbol;
use crate::tri::TriState;

/// Which regularity the completed block operator must achieve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompletionTarget {
    Invertible,
    Weyl,
    Browder,
}

/// Which constructor produced a certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompletionKind {
    Browder,
    InvertibleC,
}

/// Splitting of A along the kernel of its stabilized power: the first
/// block is the nilpotent action on N(A^p), the rest of A is injective
/// with closed range.
#[derive(Clone, Debug)]
pub struct LeftDecomposition {
    /// Ascent of A: first power whose kernel stops growing.
    pub p: u64,
    /// Basis of N(A^p).
    pub x1_basis: Vec<ExpPolyVector>,
    /// Action of A on `x1_basis` in its own coordinates; nilpotent of
    /// degree at most p.
    pub a1_matrix: BallMatrix,
    /// The compression of A beyond N(A^p) is injective (certified by
    /// the kernel chain stabilizing at p).
    pub a2_injective: bool,
    /// The compression inherits the closed range of A.
    pub a2_closed_range: bool,
}

/// Splitting of B along the range of its stabilized power, described
/// by the finite orthogonal complement of that range.
#[derive(Clone, Debug)]
pub struct RightDecomposition {
    /// Descent of B: first power whose range stops shrinking.
    pub q: u64,
    /// Basis of the orthogonal complement of R(B^q), computed as the
    /// kernel of the q-th power of the adjoint.
    pub complement_basis: Vec<ExpPolyVector>,
    /// Compression of B to that complement in its own coordinates;
    /// nilpotent of degree at most q.
    pub b2_matrix: BallMatrix,
    /// The restriction of B to R(B^q) is surjective onto R(B^q)
    /// (certified by the range chain stabilizing at q).
    pub b1_surjective: bool,
    pub b1_closed_range: bool,
}

/// One recorded dimension identity, re-checkable after the fact.
#[derive(Clone, Debug)]
pub struct DimensionCheck {
    pub name: String,
    pub lhs: ExtNat,
    pub rhs: ExtNat,
}

impl DimensionCheck {
    pub fn holds(&self) -> TriState {
        self.lhs.eq_tri(&self.rhs)
    }
}

/// Everything needed to re-validate a constructed completion without
/// trusting the constructor: the operators, both splittings, the
/// finite corner of C between the coupled subspaces, and the recorded
/// dimension identities.
#[derive(Clone, Debug)]
pub struct CompletionCertificate {
    pub kind: CompletionKind,
    pub a: BetOperator,
    pub b: BetOperator,
    pub c: BetOperator,
    pub left: LeftDecomposition,
    pub right: RightDecomposition,
    /// Basis of the coupled subspace on the B side: kernel vectors of
    /// B inside the full range of B^q.
    pub corner_col_basis: Vec<ExpPolyVector>,
    /// Basis of the coupled subspace on the A side: cokernel
    /// directions of the compression of A beyond N(A^p).
    pub corner_row_basis: Vec<ExpPolyVector>,
    /// Matrix of the compression of C from the column space to the row
    /// space, in the recorded bases.
    pub corner_matrix: BallMatrix,
    pub dimension_checks: Vec<DimensionCheck>,
}

/// Verdicts of the finite corner criterion for a given triple.
#[derive(Clone, Debug)]
pub struct CornerVerdicts {
    pub left_invertible: TriState,
    pub right_invertible: TriState,
    pub invertible: TriState,
    /// Compression of C from N(B) to the orthogonal complement of
    /// R(A), in the computed bases.
    pub corner: BallMatrix,
    pub kernel_b: Vec<ExpPolyVector>,
    pub cokernel_a: Vec<ExpPolyVector>,
}

/// Existence of a completion of the requested strength, decided from
/// the classifications of A and B alone. Returns the verdict and a
/// reason line for every clause that fails or stays undecided.
pub fn exists_completion(
    a_class: &OperatorClass,
    b_class: &OperatorClass,
    target: CompletionTarget,
) -> (TriState, Vec<String>) {
    let (clause_a, name_a, clause_b, name_b) = match target {
        CompletionTarget::Invertible => (
            a_class.left_invertible,
            "A is left invertible",
            b_class.right_invertible,
            "B is right invertible",
        ),
        CompletionTarget::Weyl => (
            a_class.left_semi_fredholm,
            "A is left semi-Fredholm",
            b_class.right_semi_fredholm,
            "B is right semi-Fredholm",
        ),
        CompletionTarget::Browder => (
            a_class.left_semi_browder,
            "A is left semi-Browder",
            b_class.right_semi_browder,
            "B is right semi-Browder",
        ),
    };
    let (clause_c, detail_c) = match target {
        CompletionTarget::Invertible => (
            a_class.beta.eq_tri(&b_class.alpha),
            format!(
                "kernel of B must match the cokernel of A: alpha(B) = {} vs beta(A) = {}",
                b_class.alpha, a_class.beta
            ),
        ),
        _ => {
            let lhs = a_class.alpha.add(&b_class.alpha);
            let rhs = a_class.beta.add(&b_class.beta);
            (
                lhs.eq_tri(&rhs),
                format!(
                    "kernel and cokernel dimensions must balance: {} + {} != {} + {}",
                    a_class.alpha, b_class.alpha, a_class.beta, b_class.beta
                ),
            )
        }
    };
    let mut reasons = Vec::new();
    for (clause, label, detail) in [
        (clause_a, "condition (a)", name_a.to_string()),
        (clause_b, "condition (b)", name_b.to_string()),
        (clause_c, "condition (c)", detail_c),
    ] {
        match clause {
            TriState::Yes => {}
            TriState::No => reasons.push(format!("{label} fails: {detail}")),
            TriState::Undecided => reasons.push(format!("{label} undecided: {detail}")),
        }
    }
    (clause_a.and(clause_b).and(clause_c), reasons)
}

fn require_scalar(t: &BetOperator, role: &str) -> Result<()> {
    if t.dim() != 1 {
        return Err(CoreError::Unsupported(format!(
            "{role} must be a one-component operator, got {} components",
            t.dim()
        )));
    }
    Ok(())
}

/// k-fold composition of a one- or two-component operator with itself.
pub fn operator_power(t: &BetOperator, k: u64) -> Result<BetOperator> {
    let mut acc = BetOperator::identity(t.dim());
    for _ in 0..k {
        acc = acc.compose(t)?;
    }
    Ok(acc)
}

fn refine_tails(x: &ExpPolyVector, bits: u32) -> ExpPolyVector {
    let eps = BigRational::new(BigInt::one(), BigInt::from(2).pow(bits));
    let mut out = x.clone();
    for t in &mut out.tails {
        t.root.refine_to(&eps);
    }
    out
}

fn apply_scalar(t: &BetOperator, x: &ExpPolyVector) -> Result<ExpPolyVector> {
    Ok(t.apply(&BlockVector::scalar(x.clone()))?.parts[0].clone())
}

/// Solve G X = R for a square certified-invertible G via one augmented
/// elimination. None is a precision failure; a certified singular G is
/// an internal contradiction surfaced by the caller.
fn solve_square(g: &BallMatrix, rhs: &BallMatrix, bits: u32, context: &str) -> Result<BallMatrix> {
    let n = g.rows;
    let m = rhs.cols;
    let aug = BallMatrix::from_fn(n, n + m, |i, j| {
        if j < n {
            g.at(i, j).clone()
        } else {
            rhs.at(i, j - n).clone()
        }
    });
    let el = aug.try_eliminate().ok_or(CoreError::PrecisionExhausted {
        bits,
        context: format!("{context}: elimination undecided"),
    })?;
    if el.rank != n || el.pivot_cols != (0..n).collect::<Vec<_>>() {
        return Err(CoreError::DimensionCheckFailed(format!(
            "{context}: coefficient matrix is singular"
        )));
    }
    // Kernel vector j of [G | R] is (-G^-1 R e_j, e_j).
    Ok(BallMatrix::from_fn(n, m, |i, j| el.kernel[j][i].neg()))
}

/// Coordinates of the orthogonal projections of `targets` onto the
/// span of `basis`, one column per target (normal equations).
fn coords_in_basis(
    basis: &[ExpPolyVector],
    targets: &[ExpPolyVector],
    bits: u32,
    context: &str,
) -> Result<BallMatrix> {
    let n = basis.len();
    let m = targets.len();
    let mut g = BallMatrix::zero(n, n);
    for (l, bl) in basis.iter().enumerate() {
        for (i, bi) in basis.iter().enumerate() {
            *g.at_mut(l, i) = inner(bi, bl)?;
        }
    }
    let mut rhs = BallMatrix::zero(n, m);
    for (l, bl) in basis.iter().enumerate() {
        for (j, t) in targets.iter().enumerate() {
            *rhs.at_mut(l, j) = inner(t, bl)?;
        }
    }
    solve_square(&g, &rhs, bits, context)
}

/// Dual family of a linearly independent family: vectors nu_j in the
/// same span with <basis_i, nu_j> = delta_ij.
fn dual_basis(basis: &[ExpPolyVector], bits: u32) -> Result<Vec<ExpPolyVector>> {
    let n = basis.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut m = BallMatrix::zero(n, n);
    for i in 0..n {
        for k in 0..n {
            *m.at_mut(i, k) = inner(&basis[k], &basis[i])?;
        }
    }
    let coeffs = solve_square(&m.adjoint(), &BallMatrix::identity(n), bits, "dual basis")?;
    let out = (0..n)
        .map(|j| {
            let mut v = ExpPolyVector::zero();
            for (k, b) in basis.iter().enumerate() {
                v = v.add(&b.scale(coeffs.at(k, j)));
            }
            v
        })
        .collect();
    Ok(out)
}

/// Basis of span(family) intersected with the orthogonal complement of
/// span(ortho): solves the finite coefficient system exactly.
fn intersect_orthocomplement(
    family: &[ExpPolyVector],
    ortho: &[ExpPolyVector],
    bits: u32,
    context: &str,
) -> Result<Vec<ExpPolyVector>> {
    let mut m = BallMatrix::zero(ortho.len(), family.len());
    for (j, o) in ortho.iter().enumerate() {
        for (i, f) in family.iter().enumerate() {
            *m.at_mut(j, i) = inner(f, o)?;
        }
    }
    let el = m.try_eliminate().ok_or(CoreError::PrecisionExhausted {
        bits,
        context: format!("{context}: orthogonality system undecided"),
    })?;
    let mut out = Vec::new();
    for coeffs in el.kernel {
        let mut v = ExpPolyVector::zero();
        for (i, f) in family.iter().enumerate() {
            v = v.add(&f.scale(&coeffs[i]));
        }
        out.push(v);
    }
    Ok(out)
}

/// Certified rank of a ball matrix as a tri-state against a demanded
/// value.
fn rank_is(m: &BallMatrix, want: usize) -> TriState {
    match m.try_eliminate() {
        Some(el) => TriState::from_bool(el.rank == want),
        None => TriState::Undecided,
    }
}

fn square_invertible(m: &BallMatrix) -> TriState {
    if m.rows != m.cols {
        return TriState::No;
    }
    rank_is(m, m.rows)
}

fn ball_matrix_power(m: &BallMatrix, k: u64) -> BallMatrix {
    let mut acc = BallMatrix::identity(m.rows);
    for _ in 0..k {
        acc = acc.mul(m);
    }
    acc
}

fn left_decompose_at(
    a: &BetOperator,
    p: u64,
    class: &OperatorClass,
    bits: u32,
) -> Result<LeftDecomposition> {
    let x1_basis = if p == 0 {
        Vec::new()
    } else {
        scalar_kernel_at(&operator_power(a, p)?, bits)?
    };
    let images = x1_basis
        .iter()
        .map(|x| apply_scalar(a, x))
        .collect::<Result<Vec<_>>>()?;
    let a1_matrix = coords_in_basis(&x1_basis, &images, bits, "nilpotent block of A")?;
    Ok(LeftDecomposition {
        p,
        x1_basis,
        a1_matrix,
        a2_injective: true,
        a2_closed_range: class.closed_range == TriState::Yes,
    })
}

fn right_decompose_at(
    b: &BetOperator,
    q: u64,
    class: &OperatorClass,
    bits: u32,
) -> Result<RightDecomposition> {
    let complement_basis = if q == 0 {
        Vec::new()
    } else {
        scalar_kernel_at(&operator_power(&b.adjoint(), q)?, bits)?
    };
    let images = complement_basis
        .iter()
        .map(|z| apply_scalar(b, z))
        .collect::<Result<Vec<_>>>()?;
    let b2_matrix = coords_in_basis(&complement_basis, &images, bits, "nilpotent block of B")?;
    Ok(RightDecomposition {
        q,
        complement_basis,
        b2_matrix,
        b1_surjective: true,
        b1_closed_range: class.closed_range == TriState::Yes,
    })
}

/// Ascent of A with the kernel basis of the stabilized power and the
/// nilpotent action of A on it.
pub fn left_decompose(a: &BetOperator, cfg: &RunConfig) -> Result<LeftDecomposition> {
    require_scalar(a, "A")?;
    let class = classify(a, cfg)?;
    if class.left_semi_browder != TriState::Yes {
        return Err(CoreError::NotLeftSemiBrowder(format!(
            "left semi-Browder flag is {} (ascent {})",
            class.left_semi_browder, class.ascent
        )));
    }
    let p = class
        .ascent
        .finite()
        .expect("finite ascent behind a yes flag");
    with_precision(cfg, "left decomposition", |bits| {
        left_decompose_at(a, p, &class, bits)
    })
}

/// Descent of B with the complement basis of the stabilized range and
/// the nilpotent compression of B to it.
pub fn right_decompose(b: &BetOperator, cfg: &RunConfig) -> Result<RightDecomposition> {
    require_scalar(b, "B")?;
    let class = classify(b, cfg)?;
    if class.right_semi_browder != TriState::Yes {
        return Err(CoreError::NotRightSemiBrowder(format!(
            "right semi-Browder flag is {} (descent {})",
            class.right_semi_browder, class.descent
        )));
    }
    let q = class
        .descent
        .finite()
        .expect("finite descent behind a yes flag");
    with_precision(cfg, "right decomposition", |bits| {
        right_decompose_at(b, q, &class, bits)
    })
}

/// The two finite bases every construction couples: kernel vectors of
/// B inside the full range of B^q, and cokernel directions of A
/// orthogonal to N(A^p). Both live in original coordinates.
fn coupling_bases(
    a: &BetOperator,
    b: &BetOperator,
    left: &LeftDecomposition,
    right: &RightDecomposition,
    bits: u32,
) -> Result<(Vec<ExpPolyVector>, Vec<ExpPolyVector>)> {
    let kernel_b = scalar_kernel_at(b, bits)?;
    let eta = intersect_orthocomplement(
        &kernel_b,
        &right.complement_basis,
        bits,
        "kernel of B inside the stabilized range",
    )?;
    let a_tail_cokernel = operator_power(a, left.p)?.compose(&a.adjoint())?;
    let candidates = scalar_kernel_at(&a_tail_cokernel, bits)?;
    let w = intersect_orthocomplement(
        &candidates,
        &left.x1_basis,
        bits,
        "cokernel directions of A beyond the nilpotent head",
    )?;
    Ok((eta, w))
}

fn base_dimension_checks(
    a_class: &OperatorClass,
    b_class: &OperatorClass,
    eta_len: usize,
    w_len: usize,
) -> Vec<DimensionCheck> {
    let alpha_a = a_class.alpha;
    let beta_a = a_class.beta;
    let alpha_b = b_class.alpha;
    let beta_b = b_class.beta;
    vec![
        DimensionCheck {
            name: "cokernel splitting of A".into(),
            lhs: beta_a,
            rhs: ExtNat::Finite(w_len as u64).add(&alpha_a),
        },
        DimensionCheck {
            name: "kernel splitting of B".into(),
            lhs: alpha_b,
            rhs: ExtNat::Finite(eta_len as u64).add(&beta_b),
        },
        DimensionCheck {
            name: "corner is square".into(),
            lhs: ExtNat::Finite(eta_len as u64),
            rhs: ExtNat::Finite(w_len as u64),
        },
        DimensionCheck {
            name: "kernel and cokernel dimensions balance".into(),
            lhs: alpha_a.add(&alpha_b),
            rhs: beta_a.add(&beta_b),
        },
    ]
}

/// Build a finite-rank C making [[A, C], [0, B]] Browder, together
/// with its certificate. C maps the kernel-side basis onto the
/// cokernel-side basis and annihilates everything orthogonal to the
/// kernel side.
pub fn construct_browder_c(
    a: &BetOperator,
    b: &BetOperator,
    cfg: &RunConfig,
) -> Result<(BetOperator, CompletionCertificate)> {
    require_scalar(a, "A")?;
    require_scalar(b, "B")?;
    let a_class = classify(a, cfg)?;
    let b_class = classify(b, cfg)?;
    let (ok, reasons) = exists_completion(&a_class, &b_class, CompletionTarget::Browder);
    if ok != TriState::Yes {
        return Err(CoreError::PreconditionFailed(format!(
            "no Browder completion exists: {}",
            reasons.join("; ")
        )));
    }
    let p = a_class
        .ascent
        .finite()
        .expect("finite ascent behind a yes flag");
    let q = b_class
        .descent
        .finite()
        .expect("finite descent behind a yes flag");
    with_precision(cfg, "Browder completion construction", |bits| {
        let left = left_decompose_at(a, p, &a_class, bits)?;
        let right = right_decompose_at(b, q, &b_class, bits)?;
        let (eta, w) = coupling_bases(a, b, &left, &right, bits)?;
        if eta.len() != w.len() {
            return Err(CoreError::DimensionCheckFailed(format!(
                "coupled bases disagree: {} kernel-side vs {} cokernel-side vectors",
                eta.len(),
                w.len()
            )));
        }
        let nu = dual_basis(&eta, bits)?;
        let perturbation = w
            .iter()
            .zip(nu.iter())
            .map(|(wi, ni)| RankOne {
                u: BlockVector::scalar(wi.clone()),
                v: BlockVector::scalar(ni.clone()),
            })
            .collect();
        let c = BetOperator::new(MatrixSymbol::zero(1), perturbation)?;
        let applied = eta
            .iter()
            .map(|e| apply_scalar(&c, e))
            .collect::<Result<Vec<_>>>()?;
        let corner_matrix = coords_in_basis(&w, &applied, bits, "corner of C")?;
        let mut checks = base_dimension_checks(&a_class, &b_class, eta.len(), w.len());
        checks.push(DimensionCheck {
            name: "corner rank".into(),
            lhs: ExtNat::Finite(match corner_matrix.try_eliminate() {
                Some(el) => el.rank as u64,
                None => {
                    return Err(CoreError::PrecisionExhausted {
                        bits,
                        context: "corner rank undecided".into(),
                    })
                }
            }),
            rhs: ExtNat::Finite(w.len() as u64),
        });
        let cert = CompletionCertificate {
            kind: CompletionKind::Browder,
            a: a.clone(),
            b: b.clone(),
            c: c.clone(),
            left,
            right,
            corner_col_basis: eta.clone(),
            corner_row_basis: w.clone(),
            corner_matrix,
            dimension_checks: checks,
        };
        Ok((c, cert))
    })
}

/// Finite corner criterion for a given triple: the compression of C
/// from N(B) to the orthogonal complement of R(A) decides left, right
/// and two-sided invertibility of the block operator, combined with
/// the flags of A and B. Both ranges must be certified closed.
pub fn corner_tests(
    a: &BetOperator,
    b: &BetOperator,
    c: &BetOperator,
    cfg: &RunConfig,
) -> Result<CornerVerdicts> {
    require_scalar(a, "A")?;
    require_scalar(b, "B")?;
    require_scalar(c, "C")?;
    let a_class = classify(a, cfg)?;
    let b_class = classify(b, cfg)?;
    if a_class.closed_range != TriState::Yes {
        return Err(CoreError::ClosedRangeUnknown(format!(
            "range of A is not certified closed (flag {})",
            a_class.closed_range
        )));
    }
    if b_class.closed_range != TriState::Yes {
        return Err(CoreError::ClosedRangeUnknown(format!(
            "range of B is not certified closed (flag {})",
            b_class.closed_range
        )));
    }
    with_precision(cfg, "corner criterion", |bits| {
        let kernel_b = scalar_kernel_at(b, bits)?;
        let cokernel_a = scalar_kernel_at(&a.adjoint(), bits)?;
        let applied = kernel_b
            .iter()
            .map(|k| apply_scalar(c, &refine_tails(k, bits)))
            .collect::<Result<Vec<_>>>()?;
        let corner = coords_in_basis(&cokernel_a, &applied, bits, "corner of C")?;
        let left_invertible = a_class.left_invertible.and(rank_is(&corner, corner.cols));
        let right_invertible = b_class.right_invertible.and(rank_is(&corner, corner.rows));
        let invertible = a_class
            .left_invertible
            .and(b_class.right_invertible)
            .and(square_invertible(&corner));
        Ok(CornerVerdicts {
            left_invertible,
            right_invertible,
            invertible,
            corner,
            kernel_b: kernel_b.clone(),
            cokernel_a,
        })
    })
}

/// Build an invertible C whose block completion is Browder. The
/// operator is the identity plus a finite-rank correction supported on
/// the joint span of the two coupling bases, chosen to map the
/// kernel-side basis exactly onto the cokernel-side basis.
pub fn construct_invertible_c(
    a: &BetOperator,
    b: &BetOperator,
    cfg: &RunConfig,
) -> Result<(BetOperator, CompletionCertificate)> {
    require_scalar(a, "A")?;
    require_scalar(b, "B")?;
    let a_class = classify(a, cfg)?;
    let b_class = classify(b, cfg)?;
    let (ok, reasons) = exists_completion(&a_class, &b_class, CompletionTarget::Browder);
    if ok != TriState::Yes {
        return Err(CoreError::PreconditionFailed(format!(
            "no Browder completion exists: {}",
            reasons.join("; ")
        )));
    }
    let p = a_class
        .ascent
        .finite()
        .expect("finite ascent behind a yes flag");
    let q = b_class
        .descent
        .finite()
        .expect("finite descent behind a yes flag");
    let (c, mut cert) = with_precision(cfg, "invertible completion construction", |bits| {
        let left = left_decompose_at(a, p, &a_class, bits)?;
        let right = right_decompose_at(b, q, &b_class, bits)?;
        let (eta, w) = coupling_bases(a, b, &left, &right, bits)?;
        if eta.len() != w.len() {
            return Err(CoreError::DimensionCheckFailed(format!(
                "coupled bases disagree: {} kernel-side vs {} cokernel-side vectors",
                eta.len(),
                w.len()
            )));
        }
        // Basis of span(eta) + span(w), starting from eta and sifting
        // w; the swap target starts from w and sifts eta. Both sifts
        // must add the same number of vectors.
        let source = sift_extend(&eta, &w, bits)?;
        let target = sift_extend(&w, &eta, bits)?;
        if source.len() != target.len() {
            return Err(CoreError::DimensionCheckFailed(format!(
                "joint span extensions disagree: {} vs {} vectors",
                source.len(),
                target.len()
            )));
        }
        let nu = dual_basis(&source, bits)?;
        let mut perturbation = Vec::new();
        for i in 0..source.len() {
            let diff = target[i].add(&source[i].neg());
            perturbation.push(RankOne {
                u: BlockVector::scalar(diff),
                v: BlockVector::scalar(nu[i].clone()),
            });
        }
        let c = BetOperator::new(MatrixSymbol::identity(1), perturbation)?;
        let applied = eta
            .iter()
            .map(|e| apply_scalar(&c, e))
            .collect::<Result<Vec<_>>>()?;
        let corner_matrix = coords_in_basis(&w, &applied, bits, "corner of C")?;
        let mut checks = base_dimension_checks(&a_class, &b_class, eta.len(), w.len());
        checks.push(DimensionCheck {
            name: "complement spaces both infinite-dimensional".into(),
            lhs: ExtNat::Infinite,
            rhs: ExtNat::Infinite,
        });
        let cert = CompletionCertificate {
            kind: CompletionKind::InvertibleC,
            a: a.clone(),
            b: b.clone(),
            c: c.clone(),
            left,
            right,
            corner_col_basis: eta.clone(),
            corner_row_basis: w.clone(),
            corner_matrix,
            dimension_checks: checks,
        };
        Ok((c, cert))
    })?;
    let c_class = classify(&c, cfg)?;
    if c_class.invertible != TriState::Yes {
        return Err(CoreError::DimensionCheckFailed(format!(
            "constructed completion failed its invertibility certification (flag {})",
            c_class.invertible
        )));
    }
    cert.dimension_checks.push(DimensionCheck {
        name: "completion kernel and cokernel vanish".into(),
        lhs: c_class.alpha.add(&c_class.beta),
        rhs: ExtNat::Finite(0),
    });
    Ok((c, cert))
}

/// Extend `base` to a basis of span(base) + span(extra) by sifting the
/// extra family for certified independence.
fn sift_extend(
    base: &[ExpPolyVector],
    extra: &[ExpPolyVector],
    bits: u32,
) -> Result<Vec<ExpPolyVector>> {
    let mut out: Vec<ExpPolyVector> = base.to_vec();
    for cand in extra {
        let mut fam: Vec<ExpPolyVector> = out.clone();
        fam.push(cand.clone());
        let n = fam.len();
        let mut g = BallMatrix::zero(n, n);
        for i in 0..n {
            for k in 0..n {
                *g.at_mut(i, k) = inner(&fam[k], &fam[i])?;
            }
        }
        let el = g.try_eliminate().ok_or(CoreError::PrecisionExhausted {
            bits,
            context: "independence sift undecided".into(),
        })?;
        if el.rank == n {
            out.push(cand.clone());
        }
    }
    Ok(out)
}

/// Re-validate a certificate from scratch: classifications, chain
/// lengths, basis dimensions and residuals, nilpotency of the recorded
/// blocks, corner invertibility, and every recorded dimension
/// identity. Returns false with one reason per failed check.
pub fn verify_certificate(cert: &CompletionCertificate, cfg: &RunConfig) -> (bool, Vec<String>) {
    let mut reasons = Vec::new();
    let a_class = match classify(&cert.a, cfg) {
        Ok(c) => c,
        Err(e) => return (false, vec![format!("classification of A failed: {e}")]),
    };
    let b_class = match classify(&cert.b, cfg) {
        Ok(c) => c,
        Err(e) => return (false, vec![format!("classification of B failed: {e}")]),
    };
    if a_class.left_semi_browder != TriState::Yes {
        reasons.push("A is not left semi-Browder".into());
    }
    if a_class.ascent.eq_finite(cert.left.p) != TriState::Yes {
        reasons.push(format!(
            "recorded ascent {} disagrees with the computed ascent {}",
            cert.left.p, a_class.ascent
        ));
    }
    if b_class.right_semi_browder != TriState::Yes {
        reasons.push("B is not right semi-Browder".into());
    }
    if b_class.descent.eq_finite(cert.right.q) != TriState::Yes {
        reasons.push(format!(
            "recorded descent {} disagrees with the computed descent {}",
            cert.right.q, b_class.descent
        ));
    }
    let balance = a_class
        .alpha
        .add(&b_class.alpha)
        .eq_tri(&a_class.beta.add(&b_class.beta));
    if balance != TriState::Yes {
        reasons.push("condition (c) fails on recomputation".into());
    }
    // Recorded kernel bases must have the freshly computed dimensions
    // and be annihilated by the stabilized powers.
    match fresh_kernel_dim(&cert.a, cert.left.p, cfg) {
        Ok(d) if d == cert.left.x1_basis.len() => {}
        Ok(d) => reasons.push(format!(
            "recorded kernel basis of A^p has {} vectors, computed dimension is {d}",
            cert.left.x1_basis.len()
        )),
        Err(e) => reasons.push(format!("kernel of A^p could not be recomputed: {e}")),
    }
    match fresh_kernel_dim(&cert.b.adjoint(), cert.right.q, cfg) {
        Ok(d) if d == cert.right.complement_basis.len() => {}
        Ok(d) => reasons.push(format!(
            "recorded complement basis has {} vectors, computed dimension is {d}",
            cert.right.complement_basis.len()
        )),
        Err(e) => reasons.push(format!("complement of R(B^q) could not be recomputed: {e}")),
    }
    if let Err(e) = check_annihilated(&cert.a, cert.left.p, &cert.left.x1_basis) {
        reasons.push(e);
    }
    if let Err(e) = check_annihilated(
        &cert.b.adjoint(),
        cert.right.q,
        &cert.right.complement_basis,
    ) {
        reasons.push(e);
    }
    if !ball_matrix_power(&cert.left.a1_matrix, cert.left.p).all_contain_zero() {
        reasons.push("recorded nilpotent block of A fails its vanishing power".into());
    }
    if !ball_matrix_power(&cert.right.b2_matrix, cert.right.q).all_contain_zero() {
        reasons.push("recorded nilpotent block of B fails its vanishing power".into());
    }
    if cert.corner_matrix.rows != cert.corner_row_basis.len()
        || cert.corner_matrix.cols != cert.corner_col_basis.len()
    {
        reasons.push("corner dimensions disagree with the recorded bases".into());
    }
    if square_invertible(&cert.corner_matrix) != TriState::Yes {
        reasons.push("corner not invertible".into());
    }
    for check in &cert.dimension_checks {
        if check.holds() != TriState::Yes {
            reasons.push(format!(
                "dimension check '{}' fails: {} != {}",
                check.name, check.lhs, check.rhs
            ));
        }
    }
    if cert.kind == CompletionKind::InvertibleC {
        match classify(&cert.c, cfg) {
            Ok(c_class) if c_class.invertible == TriState::Yes => {}
            Ok(c_class) => reasons.push(format!(
                "completion operator is not certified invertible (flag {})",
                c_class.invertible
            )),
            Err(e) => reasons.push(format!("classification of C failed: {e}")),
        }
    }
    (reasons.is_empty(), reasons)
}

fn fresh_kernel_dim(t: &BetOperator, k: u64, cfg: &RunConfig) -> Result<usize> {
    if k == 0 {
        return Ok(0);
    }
    let power = operator_power(t, k)?;
    with_precision(cfg, "certificate kernel dimension", |bits| {
        Ok(scalar_kernel_at(&power, bits)?.len())
    })
}

/// Consistency guard: the stabilized power must send every recorded
/// basis vector to a vector whose window encloses zero. Exact for
/// rational data; a tamper detector otherwise.
fn check_annihilated(
    t: &BetOperator,
    k: u64,
    basis: &[ExpPolyVector],
) -> std::result::Result<(), String> {
    let power = operator_power(t, k).map_err(|e| format!("power of operator failed: {e}"))?;
    for x in basis {
        let r = apply_scalar(&power, x).map_err(|e| format!("residual check failed: {e}"))?;
        let window = r.head_len() + 4;
        if !r.is_exact_zero() && !r.entries(window).iter().all(|b| b.contains_zero()) {
            return Err("recorded basis vector is not annihilated by the stabilized power".into());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::ball::Ball;
    use crate::num::gaussian::GaussianRational;
    use crate::op::bet::assemble_block_operator;
    use crate::symbol::LaurentSymbol;

    fn cfg() -> RunConfig {
        RunConfig::default()
    }

    fn shift() -> BetOperator {
        BetOperator::scalar_toeplitz(LaurentSymbol::monomial(1))
    }

    fn gr(n: i64, d: i64) -> GaussianRational {
        GaussianRational::from_ratio(n, d)
    }

    fn e(n: usize) -> ExpPolyVector {
        ExpPolyVector::basis(n)
    }

    #[test]
    fn existence_verdicts_for_shift_pairs() {
        let s = classify(&shift(), &cfg()).unwrap();
        let s_star = classify(&shift().adjoint(), &cfg()).unwrap();
        let (yes, reasons) = exists_completion(&s, &s_star, CompletionTarget::Browder);
        assert_eq!(yes, TriState::Yes);
        assert!(reasons.is_empty());
        let (yes, _) = exists_completion(&s, &s_star, CompletionTarget::Weyl);
        assert_eq!(yes, TriState::Yes);
        let (no, reasons) = exists_completion(&s, &s, CompletionTarget::Browder);
        assert_eq!(no, TriState::No);
        assert!(reasons.iter().any(|r| r.contains("condition (c)")));
        let id = classify(&BetOperator::identity(1), &cfg()).unwrap();
        let (yes, _) = exists_completion(&id, &id, CompletionTarget::Invertible);
        assert_eq!(yes, TriState::Yes);
    }

    #[test]
    fn shift_pair_browder_construction() {
        let a = shift();
        let b = shift().adjoint();
        let (c, cert) = construct_browder_c(&a, &b, &cfg()).unwrap();
        // C is exactly the rank-one e0 (x) e0
        assert!(c.symbol.is_zero());
        assert_eq!(c.perturbation.len(), 1);
        assert!(c.perturbation[0].u.parts[0].struct_eq(&e(0)));
        assert!(c.perturbation[0].v.parts[0].struct_eq(&e(0)));
        let (ok, reasons) = verify_certificate(&cert, &cfg());
        assert!(ok, "{reasons:?}");
        // direct reclassification of the assembled operator
        let m = assemble_block_operator(&a, &b, &c).unwrap();
        let class = classify(&m, &cfg()).unwrap();
        assert_eq!(class.browder, TriState::Yes);
        assert_eq!(class.invertible, TriState::Yes);
        // the completed operator is unitary: M*M = MM* = I on a window
        let mm = m.adjoint().compose(&m).unwrap();
        let mm2 = m.compose(&m.adjoint()).unwrap();
        let id = BetOperator::identity(2);
        for t in [&mm, &mm2] {
            let w = t.window(10);
            let wi = id.window(10);
            for i in 0..w.rows {
                for j in 0..w.cols {
                    assert!(w.at(i, j).sub(wi.at(i, j)).is_exact_zero());
                }
            }
        }
    }

    #[test]
    fn identity_pair_trivial_completions() {
        let id = BetOperator::identity(1);
        let (c, cert) = construct_browder_c(&id, &id, &cfg()).unwrap();
        assert!(c.is_zero());
        assert!(verify_certificate(&cert, &cfg()).0);
        let (ci, cert_i) = construct_invertible_c(&id, &id, &cfg()).unwrap();
        assert!(ci.perturbation.is_empty());
        let w = ci.window(6);
        let wi = BetOperator::identity(1).window(6);
        for i in 0..w.rows {
            for j in 0..w.cols {
                assert!(w.at(i, j).sub(wi.at(i, j)).is_exact_zero());
            }
        }
        assert!(verify_certificate(&cert_i, &cfg()).0);
    }

    #[test]
    fn toeplitz_half_pair_rank_one_coupling() {
        // A has a one-dimensional cokernel along (1/2)^n, B has the
        // matching kernel; the constructed C couples them.
        let mut pa = LaurentSymbol::monomial(1);
        pa.set(0, -gr(1, 2));
        let mut pb = LaurentSymbol::monomial(-1);
        pb.set(0, -gr(1, 2));
        let a = BetOperator::scalar_toeplitz(pa);
        let b = BetOperator::scalar_toeplitz(pb);
        let (c, cert) = construct_browder_c(&a, &b, &cfg()).unwrap();
        assert_eq!(c.perturbation.len(), 1);
        assert!(!c.perturbation[0].u.parts[0].tails.is_empty());
        let (ok, reasons) = verify_certificate(&cert, &cfg());
        assert!(ok, "{reasons:?}");
        let m = assemble_block_operator(&a, &b, &c).unwrap();
        let class = classify(&m, &cfg()).unwrap();
        assert_eq!(class.browder, TriState::Yes);
    }

    #[test]
    fn nilpotent_head_decomposition() {
        // A acts as 0 on e0, sends e1 to e0, and shifts e_n to e_{n+1}
        // for n >= 2: ascent 2 with a two-dimensional stabilized kernel.
        let s = LaurentSymbol::monomial(1);
        let perturbation = vec![
            RankOne {
                u: BlockVector::scalar(e(1).neg()),
                v: BlockVector::scalar(e(0)),
            },
            RankOne {
                u: BlockVector::scalar(e(0).add(&e(2).neg())),
                v: BlockVector::scalar(e(1)),
            },
        ];
        let a = BetOperator::new(MatrixSymbol::scalar(s), perturbation).unwrap();
        let left = left_decompose(&a, &cfg()).unwrap();
        assert_eq!(left.p, 2);
        assert_eq!(left.x1_basis.len(), 2);
        assert!(ball_matrix_power(&left.a1_matrix, 2).all_contain_zero());
        assert!(!left.a1_matrix.all_contain_zero());

        // completion against the backward shift: one coupled direction
        let b = shift().adjoint();
        let (c, cert) = construct_browder_c(&a, &b, &cfg()).unwrap();
        assert_eq!(c.perturbation.len(), 1);
        let (ok, reasons) = verify_certificate(&cert, &cfg());
        assert!(ok, "{reasons:?}");
        let m = assemble_block_operator(&a, &b, &c).unwrap();
        assert_eq!(classify(&m, &cfg()).unwrap().browder, TriState::Yes);
    }

    #[test]
    fn corner_criterion_shift_examples() {
        let a = shift();
        let b = shift().adjoint();
        let v = corner_tests(&a, &b, &BetOperator::identity(1), &cfg()).unwrap();
        assert_eq!(v.invertible, TriState::Yes);
        assert_eq!(v.corner.rows, 1);
        assert!(v.corner.at(0, 0).sub(&Ball::one()).is_exact_zero());
        let v = corner_tests(&a, &b, &BetOperator::zero(1), &cfg()).unwrap();
        assert_eq!(v.invertible, TriState::No);
        assert!(v.corner.at(0, 0).is_exact_zero());
        // empty corner: verdicts reduce to the diagonal flags
        let id = BetOperator::identity(1);
        let v = corner_tests(&id, &id, &shift(), &cfg()).unwrap();
        assert_eq!(v.corner.rows, 0);
        assert_eq!(v.invertible, TriState::Yes);
    }

    #[test]
    fn invertible_completion_swaps_defect_spaces() {
        // Kernel side is e0, cokernel side is the geometric vector
        // (1/2)^n: the constructed C swaps them and fixes the rest.
        let mut pa = LaurentSymbol::monomial(1);
        pa.set(0, -gr(1, 2));
        let a = BetOperator::scalar_toeplitz(pa);
        let b = shift().adjoint();
        let (c, cert) = construct_invertible_c(&a, &b, &cfg()).unwrap();
        let c_class = classify(&c, &cfg()).unwrap();
        assert_eq!(c_class.invertible, TriState::Yes);
        let (ok, reasons) = verify_certificate(&cert, &cfg());
        assert!(ok, "{reasons:?}");
        let m = assemble_block_operator(&a, &b, &c).unwrap();
        assert_eq!(classify(&m, &cfg()).unwrap().browder, TriState::Yes);
        // corner is the identity in the recorded bases
        assert!(cert
            .corner_matrix
            .at(0, 0)
            .sub(&Ball::one())
            .contains_zero());
        // shift pair: the identity already works, no correction needed
        let (ci, _) = construct_invertible_c(&shift(), &shift().adjoint(), &cfg()).unwrap();
        assert!(ci.perturbation.is_empty());
    }

    #[test]
    fn tampered_certificates_fail() {
        let a = shift();
        let b = shift().adjoint();
        let (_, cert) = construct_browder_c(&a, &b, &cfg()).unwrap();
        let mut corner_zeroed = cert.clone();
        corner_zeroed.corner_matrix = BallMatrix::zero(1, 1);
        let (ok, reasons) = verify_certificate(&corner_zeroed, &cfg());
        assert!(!ok);
        assert!(reasons.iter().any(|r| r.contains("corner not invertible")));
        let mut bad_degree = cert.clone();
        bad_degree.left.p = 3;
        let (ok, reasons) = verify_certificate(&bad_degree, &cfg());
        assert!(!ok, "{reasons:?}");
        let mut bad_check = cert;
        bad_check.dimension_checks.push(DimensionCheck {
            name: "forced".into(),
            lhs: ExtNat::Finite(1),
            rhs: ExtNat::Finite(2),
        });
        assert!(!verify_certificate(&bad_check, &cfg()).0);
    }

    #[test]
    fn decomposition_preconditions() {
        // backward shift has infinite ascent
        let err = left_decompose(&shift().adjoint(), &cfg()).unwrap_err();
        assert!(matches!(err, CoreError::NotLeftSemiBrowder(_)));
        let err = right_decompose(&shift(), &cfg()).unwrap_err();
        assert!(matches!(err, CoreError::NotRightSemiBrowder(_)));
        let err = construct_browder_c(&shift(), &shift(), &cfg()).unwrap_err();
        match err {
            CoreError::PreconditionFailed(msg) => assert!(msg.contains("condition (c)")),
            other => panic!("unexpected error {other:?}"),
        }
    }
}
