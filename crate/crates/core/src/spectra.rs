//! Pointwise and grid classification of the common Browder spectrum
//! of all completions: a point lambda belongs to it exactly when
//! A - lambda fails left semi-Browder, or B - lambda fails right
//! semi-Browder, or the kernel/cokernel dimensions of the pair do not
//! balance.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use rayon::prelude::*;

use crate::browder::classify;
use crate::completion::{construct_invertible_c, CompletionCertificate};
use crate::config::RunConfig;
use crate::error::{CoreError, Result};
use crate::num::gaussian::GaussianRational;
use crate::op::bet::BetOperator;
use crate::tri::TriState;

/// Which class the completion operator C ranges over. The resulting
/// spectral region is the same for all three; the mode only changes
/// which witness gets attached.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanMode {
    AllC,
    FredholmC,
    InvertibleC,
}

impl ScanMode {
    pub const ALL: [ScanMode; 3] = [ScanMode::AllC, ScanMode::FredholmC, ScanMode::InvertibleC];

    pub fn code(&self) -> &'static str {
        match self {
            ScanMode::AllC => "all_C",
            ScanMode::FredholmC => "fredholm_C",
            ScanMode::InvertibleC => "invertible_C",
        }
    }
}

impl fmt::Display for ScanMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for ScanMode {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all_C" | "all_c" | "all" => Ok(ScanMode::AllC),
            "fredholm_C" | "fredholm_c" | "fredholm" => Ok(ScanMode::FredholmC),
            "invertible_C" | "invertible_c" | "invertible" => Ok(ScanMode::InvertibleC),
            other => Err(CoreError::Parse(format!("unknown scan mode '{other}'"))),
        }
    }
}

/// Verdict of one grid point. `in_spr` is the tri-state OR of the
/// three clauses: a decided yes anywhere wins, undecided only persists
/// when no clause is a decided yes.
#[derive(Clone, Debug)]
pub struct PointVerdict {
    pub lambda: GaussianRational,
    pub in_sigma_lb_a: TriState,
    pub in_sigma_rb_b: TriState,
    pub index_condition_fails: TriState,
    pub in_spr: TriState,
    pub witness: Option<Box<CompletionCertificate>>,
}

/// Closed rational rectangle in the complex plane.
#[derive(Clone, Debug)]
pub struct Region {
    pub re_min: BigRational,
    pub re_max: BigRational,
    pub im_min: BigRational,
    pub im_max: BigRational,
}

impl Region {
    pub fn new(
        re_min: BigRational,
        re_max: BigRational,
        im_min: BigRational,
        im_max: BigRational,
    ) -> Result<Self> {
        if re_min > re_max || im_min > im_max {
            return Err(CoreError::PreconditionFailed(
                "region is empty: expected re_min <= re_max and im_min <= im_max".into(),
            ));
        }
        Ok(Region {
            re_min,
            re_max,
            im_min,
            im_max,
        })
    }
}

/// Row-major grid of verdicts: rows run over imaginary parts from
/// `im_min` upward, columns over real parts from `re_min` rightward.
#[derive(Clone, Debug)]
pub struct SpectralGrid {
    pub region: Region,
    pub step: BigRational,
    pub mode: ScanMode,
    pub rows: usize,
    pub cols: usize,
    pub verdicts: Vec<PointVerdict>,
}

impl SpectralGrid {
    pub fn at(&self, row: usize, col: usize) -> &PointVerdict {
        &self.verdicts[row * self.cols + col]
    }

    /// (yes, no, undecided) counts of the `in_spr` verdicts.
    pub fn counts(&self) -> (usize, usize, usize) {
        let mut c = (0, 0, 0);
        for v in &self.verdicts {
            match v.in_spr {
                TriState::Yes => c.0 += 1,
                TriState::No => c.1 += 1,
                TriState::Undecided => c.2 += 1,
            }
        }
        c
    }
}

/// Classify one point: evaluates the three clauses on the translated
/// pair. Precision failures are recorded as undecided verdicts, never
/// as errors. When a witness is requested (modes other than `all_C`,
/// point decidedly outside), the invertible completion of the
/// translated pair is attached; witness construction failures leave
/// the point witness-free.
pub fn classify_point(
    a: &BetOperator,
    b: &BetOperator,
    lambda: &GaussianRational,
    mode: ScanMode,
    want_witness: bool,
    cfg: &RunConfig,
) -> PointVerdict {
    let at = a.translate(lambda);
    let bt = b.translate(lambda);
    let (in_sigma_lb_a, in_sigma_rb_b, index_condition_fails) =
        match (classify(&at, cfg), classify(&bt, cfg)) {
            (Ok(ca), Ok(cb)) => (
                !ca.left_semi_browder,
                !cb.right_semi_browder,
                !ca.alpha.add(&cb.alpha).eq_tri(&ca.beta.add(&cb.beta)),
            ),
            _ => (
                TriState::Undecided,
                TriState::Undecided,
                TriState::Undecided,
            ),
        };
    let in_spr = in_sigma_lb_a.or(in_sigma_rb_b).or(index_condition_fails);
    let witness = if want_witness && mode != ScanMode::AllC && in_spr == TriState::No {
        construct_invertible_c(&at, &bt, cfg)
            .ok()
            .map(|(_, cert)| Box::new(cert))
    } else {
        None
    };
    PointVerdict {
        lambda: lambda.clone(),
        in_sigma_lb_a,
        in_sigma_rb_b,
        index_condition_fails,
        in_spr,
        witness,
    }
}

fn axis_points(min: &BigRational, max: &BigRational, step: &BigRational) -> Vec<BigRational> {
    let count = ((max - min) / step).to_integer();
    let count = usize::try_from(count)
        .unwrap_or(usize::MAX)
        .saturating_add(1);
    (0..count)
        .map(|k| min + step * BigRational::from_integer(k.into()))
        .collect()
}

/// Scan a rational grid. Points are evaluated in parallel; the output
/// ordering is row-major and deterministic regardless of thread count.
pub fn scan(
    a: &BetOperator,
    b: &BetOperator,
    region: &Region,
    step: &BigRational,
    mode: ScanMode,
    want_witness: bool,
    cfg: &RunConfig,
) -> Result<SpectralGrid> {
    if step <= &BigRational::from_integer(0.into()) {
        return Err(CoreError::PreconditionFailed(format!(
            "step must be positive, got {step}"
        )));
    }
    let res = axis_points(&region.re_min, &region.re_max, step);
    let ims = axis_points(&region.im_min, &region.im_max, step);
    let (rows, cols) = (ims.len(), res.len());
    let verdicts: Vec<PointVerdict> = (0..rows * cols)
        .into_par_iter()
        .map(|idx| {
            let lambda = GaussianRational::new(res[idx % cols].clone(), ims[idx / cols].clone());
            classify_point(a, b, &lambda, mode, want_witness, cfg)
        })
        .collect();
    Ok(SpectralGrid {
        region: region.clone(),
        step: step.clone(),
        mode,
        rows,
        cols,
        verdicts,
    })
}

/// CSV rendering: a `# mode=` comment line, a fixed header, then one
/// row per point in grid order with exact rational coordinates.
pub fn grid_to_csv(grid: &SpectralGrid) -> String {
    let mut out = String::new();
    out.push_str(&format!("# mode={}\n", grid.mode.code()));
    out.push_str("re,im,in_sigma_lb_A,in_sigma_rb_B,index_condition_fails,in_SPR\n");
    for v in &grid.verdicts {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            v.lambda.re,
            v.lambda.im,
            v.in_sigma_lb_a,
            v.in_sigma_rb_b,
            v.index_condition_fails,
            v.in_spr
        ));
    }
    out
}

const CELL: usize = 8;
const COLOR_YES: &str = "#c0392b";
const COLOR_NO: &str = "#2c6fbb";
const COLOR_UNDECIDED: &str = "#b2b2b2";

fn color_of(t: TriState) -> &'static str {
    match t {
        TriState::Yes => COLOR_YES,
        TriState::No => COLOR_NO,
        TriState::Undecided => COLOR_UNDECIDED,
    }
}

/// SVG rendering: one cell per grid point (imaginary axis pointing
/// up), three-color palette keyed on `in_spr`, legend underneath.
/// Byte-identical for identical grids.
pub fn grid_to_svg(grid: &SpectralGrid) -> String {
    let raster_w = grid.cols * CELL;
    let raster_h = grid.rows * CELL;
    let legend_h = 3 * CELL;
    let w = raster_w.max(34 * CELL);
    let h = raster_h + legend_h;
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
    ));
    out.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"#ffffff\"/>\n"
    ));
    for row in 0..grid.rows {
        for col in 0..grid.cols {
            let v = grid.at(row, col);
            let x = col * CELL;
            let y = (grid.rows - 1 - row) * CELL;
            out.push_str(&format!(
                "<rect x=\"{x}\" y=\"{y}\" width=\"{CELL}\" height=\"{CELL}\" fill=\"{}\"/>\n",
                color_of(v.in_spr)
            ));
        }
    }
    let ly = raster_h + CELL;
    let labels = [
        (COLOR_YES, "in SPR"),
        (COLOR_NO, "not in SPR"),
        (COLOR_UNDECIDED, "undecided"),
    ];
    for (k, (color, label)) in labels.iter().enumerate() {
        let lx = k * 11 * CELL + CELL / 2;
        out.push_str(&format!(
            "<rect x=\"{lx}\" y=\"{ly}\" width=\"{CELL}\" height=\"{CELL}\" fill=\"{color}\"/>\n"
        ));
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"{CELL}\">{label}</text>\n",
            lx + CELL + CELL / 2,
            ly + CELL - 1
        ));
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::completion::verify_certificate;
    use crate::op::bet::assemble_block_operator;
    use crate::symbol::LaurentSymbol;

    fn cfg() -> RunConfig {
        RunConfig::default()
    }

    fn shift() -> BetOperator {
        BetOperator::scalar_toeplitz(LaurentSymbol::monomial(1))
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn verdict_tuple(v: &PointVerdict) -> (TriState, TriState, TriState, TriState) {
        (
            v.in_sigma_lb_a,
            v.in_sigma_rb_b,
            v.index_condition_fails,
            v.in_spr,
        )
    }

    #[test]
    fn named_point_examples() {
        let s = shift();
        let s_star = shift().adjoint();
        let zero = GaussianRational::zero();
        let v = classify_point(&s, &s_star, &zero, ScanMode::AllC, false, &cfg());
        assert_eq!(
            verdict_tuple(&v),
            (TriState::No, TriState::No, TriState::No, TriState::No)
        );
        let v = classify_point(&s, &s, &zero, ScanMode::AllC, false, &cfg());
        assert_eq!(v.index_condition_fails, TriState::Yes);
        assert_eq!(v.in_spr, TriState::Yes);
        let id = BetOperator::identity(1);
        let v = classify_point(
            &id,
            &id,
            &GaussianRational::one(),
            ScanMode::AllC,
            false,
            &cfg(),
        );
        assert_eq!(v.in_sigma_lb_a, TriState::Yes);
        assert_eq!(v.in_spr, TriState::Yes);
    }

    #[test]
    fn mode_invariance_at_sample_points() {
        let s = shift();
        let s_star = shift().adjoint();
        for lambda in [
            GaussianRational::zero(),
            GaussianRational::one(),
            GaussianRational::from_ints(1, 1),
            GaussianRational::from_ratio(1, 2),
            GaussianRational::from_ints(0, 2),
        ] {
            let base = classify_point(&s, &s_star, &lambda, ScanMode::AllC, false, &cfg());
            for mode in ScanMode::ALL {
                let v = classify_point(&s, &s_star, &lambda, mode, false, &cfg());
                assert_eq!(verdict_tuple(&v), verdict_tuple(&base), "at {lambda}");
            }
        }
    }

    #[test]
    fn shift_annulus_scan_small_step() {
        let region = Region::new(rat(-2, 1), rat(2, 1), rat(-2, 1), rat(2, 1)).unwrap();
        let grid = scan(
            &shift(),
            &shift().adjoint(),
            &region,
            &rat(1, 2),
            ScanMode::AllC,
            false,
            &cfg(),
        )
        .unwrap();
        assert_eq!((grid.rows, grid.cols), (9, 9));
        // row-major ordering with the real part varying fastest
        assert_eq!(grid.verdicts[0].lambda, GaussianRational::from_ints(-2, -2));
        assert_eq!(
            grid.verdicts[1].lambda,
            GaussianRational::new(rat(-3, 2), rat(-2, 1))
        );
        assert_eq!(
            grid.verdicts.last().unwrap().lambda,
            GaussianRational::from_ints(2, 2)
        );
        let (yes, no, undecided) = grid.counts();
        assert_eq!((yes, no, undecided), (4, 77, 0));
        for v in &grid.verdicts {
            let on_circle = v.lambda.norm_sqr() == rat(1, 1);
            assert_eq!(v.in_spr, TriState::from_bool(on_circle), "at {}", v.lambda);
        }
    }

    #[test]
    fn identity_pair_point_spectrum() {
        let id = BetOperator::identity(1);
        let region = Region::new(rat(0, 1), rat(2, 1), rat(0, 1), rat(2, 1)).unwrap();
        let grid = scan(&id, &id, &region, &rat(1, 1), ScanMode::AllC, false, &cfg()).unwrap();
        let (yes, no, undecided) = grid.counts();
        assert_eq!((yes, no, undecided), (1, 8, 0));
        for v in &grid.verdicts {
            let is_one = v.lambda == GaussianRational::one();
            assert_eq!(v.in_spr, TriState::from_bool(is_one));
        }
    }

    #[test]
    fn csv_shape_and_mode_line() {
        let region = Region::new(rat(-1, 1), rat(1, 1), rat(0, 1), rat(0, 1)).unwrap();
        let s = shift();
        let s_star = shift().adjoint();
        let grid = scan(
            &s,
            &s_star,
            &region,
            &rat(1, 2),
            ScanMode::AllC,
            false,
            &cfg(),
        )
        .unwrap();
        let csv = grid_to_csv(&grid);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# mode=all_C");
        assert_eq!(
            lines[1],
            "re,im,in_sigma_lb_A,in_sigma_rb_B,index_condition_fails,in_SPR"
        );
        assert_eq!(lines[2], "-1,0,yes,yes,no,yes");
        assert_eq!(lines[3], "-1/2,0,no,no,no,no");
        assert_eq!(lines.len(), 2 + 5);
        // mode invariance: identical apart from the mode line
        for mode in [ScanMode::FredholmC, ScanMode::InvertibleC] {
            let g = scan(&s, &s_star, &region, &rat(1, 2), mode, false, &cfg()).unwrap();
            let other = grid_to_csv(&g);
            assert_eq!(
                csv.lines().skip(1).collect::<Vec<_>>(),
                other.lines().skip(1).collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn svg_is_deterministic_with_legend() {
        let region = Region::new(rat(-1, 1), rat(1, 1), rat(-1, 1), rat(1, 1)).unwrap();
        let grid = scan(
            &shift(),
            &shift().adjoint(),
            &region,
            &rat(1, 1),
            ScanMode::AllC,
            false,
            &cfg(),
        )
        .unwrap();
        let svg1 = grid_to_svg(&grid);
        let svg2 = grid_to_svg(&grid);
        assert_eq!(svg1, svg2);
        assert!(svg1.starts_with("<svg "));
        assert!(svg1.contains("undecided"));
        assert!(svg1.contains("not in SPR"));
        assert!(svg1.contains(COLOR_YES));
        assert!(svg1.contains(COLOR_NO));
    }

    #[test]
    fn witnesses_attach_outside_the_region() {
        let region = Region::new(rat(0, 1), rat(1, 1), rat(0, 1), rat(1, 1)).unwrap();
        let grid = scan(
            &shift(),
            &shift().adjoint(),
            &region,
            &rat(1, 1),
            ScanMode::InvertibleC,
            true,
            &cfg(),
        )
        .unwrap();
        let mut witnessed = 0;
        for v in &grid.verdicts {
            match v.in_spr {
                TriState::No => {
                    let cert = v.witness.as_ref().expect("witness on a decided-out point");
                    let (ok, reasons) = verify_certificate(cert, &cfg());
                    assert!(ok, "{reasons:?}");
                    witnessed += 1;
                }
                _ => assert!(v.witness.is_none()),
            }
        }
        assert_eq!(witnessed, 2);
        // direct cross-check at lambda = 0: the witnessed completion
        // makes the assembled translated pair Browder
        let v0 = &grid.verdicts[0];
        assert_eq!(v0.lambda, GaussianRational::zero());
        let cert = v0.witness.as_ref().unwrap();
        let m = assemble_block_operator(&cert.a, &cert.b, &cert.c).unwrap();
        assert_eq!(classify(&m, &cfg()).unwrap().browder, TriState::Yes);
    }
}
