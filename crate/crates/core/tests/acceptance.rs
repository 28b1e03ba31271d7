//! Acceptance suite: one test per criterion, each printing a pass
//! line. Runtime-sensitive criteria assert their own budgets.

use std::time::Instant;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use browder_core::browder::{classify, OperatorClass};
use browder_core::completion::{
    construct_browder_c, construct_invertible_c, corner_tests, exists_completion,
    verify_certificate, CompletionTarget,
};
use browder_core::config::RunConfig;
use browder_core::jsonio::class_is_decided;
use browder_core::linalg::oracle::{product_dimension_suite, two_of_three_suite};
use browder_core::num::gaussian::GaussianRational;
use browder_core::op::bet::{assemble_block_operator, BetOperator, RankOne};
use browder_core::op::vector::{BlockVector, ExpPolyVector};
use browder_core::spectra::{grid_to_csv, scan, Region, ScanMode};
use browder_core::symbol::{winding_number, LaurentSymbol, MatrixSymbol};
use browder_core::tri::TriState;
use browder_core::CoreError;

fn cfg() -> RunConfig {
    RunConfig::default()
}

/// Classify with an escalating precision budget: random draws can land
/// near the certification cliff at the default 128 bits.
fn classify_with_cap(t: &BetOperator, power_cap: u64) -> OperatorClass {
    for bits in [128u32, 256, 512, 1024] {
        let c = RunConfig {
            precision_bits: bits,
            power_cap,
        };
        match classify(t, &c) {
            Ok(class) => return class,
            Err(CoreError::PrecisionExhausted { .. }) => continue,
            Err(e) => panic!("classification failed: {e}"),
        }
    }
    panic!("classification exhausted 1024 bits")
}

fn classify_retrying(t: &BetOperator) -> OperatorClass {
    classify_with_cap(t, RunConfig::default().power_cap)
}

fn shift() -> BetOperator {
    BetOperator::scalar_toeplitz(LaurentSymbol::monomial(1))
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Symbol with one dominant coefficient of magnitude 3 at a chosen
/// exponent and side coefficients of magnitude at most sqrt(2)/8: the
/// dominant term fixes the winding and keeps the symbol bounded away
/// from zero on the unit circle.
fn dominant_symbol(rng: &mut ChaCha8Rng, band: i64) -> (LaurentSymbol, i64) {
    let d = rng.gen_range(-band..=band);
    let mut p = LaurentSymbol::zero();
    p.set(d, GaussianRational::from_int(3));
    for e in -band..=band {
        if e != d && rng.gen_bool(0.6) {
            let re = rat(rng.gen_range(-1..=1), 8);
            let im = rat(rng.gen_range(-1..=1), 8);
            p.set(e, GaussianRational::new(re, im));
        }
    }
    (p, d)
}

/// Two-term symbol 3 z^d + c z^(d-1) with |c| at most sqrt(2)/8: winding
/// d, no circle zeros, and an exact rational root at -c/3 so kernel
/// computations stay on the exact arithmetic path.
fn fredholm_symbol(rng: &mut ChaCha8Rng, band: i64) -> (LaurentSymbol, i64) {
    let d = rng.gen_range(-band..=band);
    let mut p = LaurentSymbol::zero();
    p.set(d, GaussianRational::from_int(3));
    let re = rat(rng.gen_range(-1..=1), 8);
    let im = rat(rng.gen_range(-1..=1), 8);
    p.set(d - 1, GaussianRational::new(re, im));
    (p, d)
}

/// Symbol 3 + c z^(-1) with |c| at most sqrt(2)/8: zero winding, no
/// circle zeros, and an exact rational root inside the disk.
fn centered_symbol(rng: &mut ChaCha8Rng) -> LaurentSymbol {
    let mut p = LaurentSymbol::constant(GaussianRational::from_int(3));
    let re = rat(rng.gen_range(-1..=1), 8);
    let im = rat(rng.gen_range(-1..=1), 8);
    p.set(-1, GaussianRational::new(re, im));
    p
}

fn random_vector(rng: &mut ChaCha8Rng, max_len: usize) -> ExpPolyVector {
    let len = rng.gen_range(1..=max_len);
    let mut head = Vec::new();
    for _ in 0..len {
        head.push(GaussianRational::new(
            rat(rng.gen_range(-2..=2), 1),
            rat(rng.gen_range(-1..=1), 1),
        ));
    }
    ExpPolyVector::from_exact_head(&head)
}

fn random_rank_ones(rng: &mut ChaCha8Rng, max_count: usize) -> Vec<RankOne> {
    let count = rng.gen_range(0..=max_count);
    (0..count)
        .map(|_| RankOne {
            u: BlockVector::scalar(random_vector(rng, 3)),
            v: BlockVector::scalar(random_vector(rng, 3)),
        })
        .collect()
}

#[test]
fn criterion_01_product_dimension_oracle() {
    let start = Instant::now();
    let report = product_dimension_suite(500, 0xACC01, 8);
    assert!(
        report.failures.is_empty(),
        "counterexamples: {:?}",
        report.failures
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 10, "took {elapsed:?}");
    println!("criterion 1 (product dimension identity, 500 trials): pass");
}

#[test]
fn criterion_02_two_of_three_oracle() {
    let start = Instant::now();
    let report = two_of_three_suite(500, 0xACC02, 8);
    assert!(
        report.failures.is_empty(),
        "counterexamples: {:?}",
        report.failures
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 20, "took {elapsed:?}");
    println!("criterion 2 (two-of-three transfer laws, 500 trials): pass");
}

#[test]
fn criterion_03_shift_completion_is_unitary() {
    let start = Instant::now();
    let a = shift();
    let b = shift().adjoint();
    let (c, cert) = construct_browder_c(&a, &b, &cfg()).unwrap();
    let (ok, reasons) = verify_certificate(&cert, &cfg());
    assert!(ok, "{reasons:?}");
    let m = assemble_block_operator(&a, &b, &c).unwrap();
    assert_eq!(classify(&m, &cfg()).unwrap().browder, TriState::Yes);
    let id = BetOperator::identity(2).window(40);
    for t in [
        m.adjoint().compose(&m).unwrap(),
        m.compose(&m.adjoint()).unwrap(),
    ] {
        let w = t.window(40);
        assert_eq!((w.rows, w.cols), (id.rows, id.cols));
        for i in 0..w.rows {
            for j in 0..w.cols {
                assert!(
                    w.at(i, j).sub(id.at(i, j)).is_exact_zero(),
                    "entry ({i},{j}) differs"
                );
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 5, "took {elapsed:?}");
    println!("criterion 3 (shift pair completion, unitary 40x40 window): pass");
}

#[test]
fn criterion_04_impossible_pair_never_browder() {
    let start = Instant::now();
    let s = shift();
    let ca = classify(&s, &cfg()).unwrap();
    let (verdict, reasons) = exists_completion(&ca, &ca, CompletionTarget::Browder);
    assert_eq!(verdict, TriState::No);
    assert!(
        reasons.iter().any(|r| r.contains("condition (c)")),
        "{reasons:?}"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC04);
    for trial in 0..50 {
        let (sym, _) = dominant_symbol(&mut rng, 2);
        let c = BetOperator::new(
            MatrixSymbol::scalar(if rng.gen_bool(0.5) {
                sym
            } else {
                LaurentSymbol::zero()
            }),
            random_rank_ones(&mut rng, 2),
        )
        .unwrap();
        let m = assemble_block_operator(&s, &s, &c).unwrap();
        let class = classify_retrying(&m);
        assert_ne!(class.browder, TriState::Yes, "trial {trial}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}");
    println!("criterion 4 (pair without completion: 50 random C never Browder): pass");
}

#[test]
fn criterion_05_browder_completions_satisfy_necessity() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC05);
    let mut qualifying = 0;
    let mut draws = 0;
    while qualifying < 100 {
        draws += 1;
        assert!(draws < 1000, "generator too weak: {qualifying} in {draws}");
        let pa = centered_symbol(&mut rng);
        let pb = centered_symbol(&mut rng);
        let a = BetOperator::new(MatrixSymbol::scalar(pa), random_rank_ones(&mut rng, 1)).unwrap();
        let b = BetOperator::new(MatrixSymbol::scalar(pb), random_rank_ones(&mut rng, 1)).unwrap();
        let c = BetOperator::new(MatrixSymbol::zero(1), random_rank_ones(&mut rng, 1)).unwrap();
        let m = assemble_block_operator(&a, &b, &c).unwrap();
        let class = classify_retrying(&m);
        if class.browder != TriState::Yes || !class_is_decided(&class) {
            continue;
        }
        qualifying += 1;
        let ca = classify_retrying(&a);
        let cb = classify_retrying(&b);
        assert_eq!(
            ca.left_semi_browder,
            TriState::Yes,
            "condition (a), draw {draws}"
        );
        assert_eq!(
            cb.right_semi_browder,
            TriState::Yes,
            "condition (b), draw {draws}"
        );
        assert_eq!(
            ca.alpha.add(&cb.alpha).eq_tri(&ca.beta.add(&cb.beta)),
            TriState::Yes,
            "condition (c), draw {draws}"
        );
    }
    println!("criterion 5 (necessity on 100 Browder-completed triples): pass");
}

#[test]
fn criterion_06_shift_annulus_scan() {
    let start = Instant::now();
    let region = Region::new(rat(-2, 1), rat(2, 1), rat(-2, 1), rat(2, 1)).unwrap();
    let grid = scan(
        &shift(),
        &shift().adjoint(),
        &region,
        &rat(1, 20),
        ScanMode::AllC,
        false,
        &cfg(),
    )
    .unwrap();
    assert_eq!(grid.verdicts.len(), 81 * 81);
    let one = rat(1, 1);
    let cell = rat(1, 20);
    for v in &grid.verdicts {
        // exact rational grid: a point is in the region exactly when
        // its cell meets the unit circle at the point itself
        let on_circle = v.lambda.norm_sqr() == one;
        assert_eq!(v.in_spr, TriState::from_bool(on_circle), "at {}", v.lambda);
        if on_circle {
            // trivially within one cell width of the circle
            assert!((v.lambda.norm_sqr() - &one).abs() <= cell);
        }
    }
    let (yes, _, undecided) = grid.counts();
    assert_eq!(yes, 12);
    assert_eq!(undecided, 0);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 30, "took {elapsed:?}");
    println!("criterion 6 (shift pair scan at step 1/20, zero undecided): pass");
}

#[test]
fn criterion_07_scan_mode_invariance() {
    let region = Region::new(rat(-2, 1), rat(2, 1), rat(-2, 1), rat(2, 1)).unwrap();
    let mut bodies = Vec::new();
    let mut heads = Vec::new();
    for mode in ScanMode::ALL {
        let grid = scan(
            &shift(),
            &shift().adjoint(),
            &region,
            &rat(1, 20),
            mode,
            false,
            &cfg(),
        )
        .unwrap();
        let csv = grid_to_csv(&grid);
        let (head, body) = csv.split_once('\n').unwrap();
        heads.push(head.to_string());
        bodies.push(body.to_string());
    }
    assert_eq!(heads[0], "# mode=all_C");
    assert_eq!(heads[1], "# mode=fredholm_C");
    assert_eq!(heads[2], "# mode=invertible_C");
    assert_eq!(bodies[0], bodies[1]);
    assert_eq!(bodies[0], bodies[2]);
    println!("criterion 7 (mode invariance, byte-identical CSV bodies): pass");
}

#[test]
fn criterion_08_invertible_completion_and_corner_cross_check() {
    let a = shift();
    let b = shift().adjoint();
    let (c, cert) = construct_invertible_c(&a, &b, &cfg()).unwrap();
    assert_eq!(classify(&c, &cfg()).unwrap().invertible, TriState::Yes);
    let (ok, reasons) = verify_certificate(&cert, &cfg());
    assert!(ok, "{reasons:?}");
    let verdicts = corner_tests(&a, &b, &c, &cfg()).unwrap();
    assert_eq!(verdicts.invertible, TriState::Yes);
    let m = assemble_block_operator(&a, &b, &c).unwrap();
    assert_eq!(classify(&m, &cfg()).unwrap().invertible, TriState::Yes);
    // cross-check with C = I: one-by-one corner matrix equal to [1]
    let id = BetOperator::identity(1);
    let v = corner_tests(&a, &b, &id, &cfg()).unwrap();
    assert_eq!((v.corner.rows, v.corner.cols), (1, 1));
    let entry = v.corner.at(0, 0);
    assert!(entry.is_exact());
    assert_eq!(entry.mid, GaussianRational::one());
    assert_eq!(v.invertible, TriState::Yes);
    let mi = assemble_block_operator(&a, &b, &id).unwrap();
    assert_eq!(classify(&mi, &cfg()).unwrap().invertible, TriState::Yes);
    println!("criterion 8 (invertible completion with corner criterion cross-check): pass");
}

#[test]
fn criterion_09_index_additivity() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC09);
    for trial in 0..100 {
        let (pa, da) = fredholm_symbol(&mut rng, 1);
        let (pb, db) = fredholm_symbol(&mut rng, 1);
        let a = BetOperator::new(MatrixSymbol::scalar(pa), random_rank_ones(&mut rng, 1)).unwrap();
        let b = BetOperator::new(MatrixSymbol::scalar(pb), random_rank_ones(&mut rng, 1)).unwrap();
        let c = BetOperator::new(MatrixSymbol::zero(1), random_rank_ones(&mut rng, 2)).unwrap();
        // the index needs only the kernel and cokernel at the first
        // power; a low chain cap keeps pathological draws cheap
        let ca = classify_with_cap(&a, 2);
        let cb = classify_with_cap(&b, 2);
        assert_eq!(ca.fredholm, TriState::Yes, "trial {trial}");
        assert_eq!(cb.fredholm, TriState::Yes, "trial {trial}");
        assert_eq!(ca.index, Some(-da), "trial {trial}");
        assert_eq!(cb.index, Some(-db), "trial {trial}");
        let m = assemble_block_operator(&a, &b, &c).unwrap();
        let cm = classify_with_cap(&m, 2);
        assert_eq!(
            cm.index,
            Some(ca.index.unwrap() + cb.index.unwrap()),
            "trial {trial}"
        );
    }
    println!("criterion 9 (index additivity on 100 random Fredholm pairs): pass");
}

fn argument_principle_estimate(p: &LaurentSymbol, samples: usize) -> i64 {
    let coeffs: Vec<(i64, f64, f64)> = p
        .iter()
        .map(|(d, c)| (d, c.re.to_f64().unwrap(), c.im.to_f64().unwrap()))
        .collect();
    let eval = |theta: f64| -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (d, cr, ci) in &coeffs {
            let (s, c) = (*d as f64 * theta).sin_cos();
            re += cr * c - ci * s;
            im += cr * s + ci * c;
        }
        (re, im)
    };
    let mut total = 0.0;
    let step = std::f64::consts::TAU / samples as f64;
    let (mut re0, mut im0) = eval(0.0);
    for k in 1..=samples {
        let (re1, im1) = eval(k as f64 * step);
        // wrapped phase increment between consecutive samples
        let cross = re0 * im1 - im0 * re1;
        let dot = re0 * re1 + im0 * im1;
        total += cross.atan2(dot);
        (re0, im0) = (re1, im1);
    }
    (total / std::f64::consts::TAU).round() as i64
}

#[test]
fn criterion_10_winding_agrees_with_argument_principle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC10);
    for trial in 0..100 {
        let (p, d) = dominant_symbol(&mut rng, 3);
        let exact = winding_number(&p).unwrap();
        assert_eq!(exact, d, "trial {trial}: dominant-term winding");
        let estimate = argument_principle_estimate(&p, 4096);
        assert_eq!(exact, estimate, "trial {trial}: {p:?}");
    }
    println!("criterion 10 (winding vs 4096-point argument principle, 100 symbols): pass");
}
