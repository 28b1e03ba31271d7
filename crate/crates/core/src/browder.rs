//! Operator classification: invertibility, Fredholm, Weyl and Browder
//! properties, and membership in the associated spectra.

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{CoreError, Result};
use crate::fredholm::{asc_des, fredholm_data, ExtNat};
use crate::num::gaussian::GaussianRational;
use crate::op::bet::BetOperator;
use crate::tri::TriState;

/// The ten spectra of an operator, in decreasing strength of the
/// regularity they negate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumKind {
    Sigma,
    Left,
    Right,
    Essential,
    Weyl,
    LeftEssential,
    RightEssential,
    Browder,
    LeftBrowder,
    RightBrowder,
}

impl SpectrumKind {
    pub const ALL: [SpectrumKind; 10] = [
        SpectrumKind::Sigma,
        SpectrumKind::Left,
        SpectrumKind::Right,
        SpectrumKind::Essential,
        SpectrumKind::Weyl,
        SpectrumKind::LeftEssential,
        SpectrumKind::RightEssential,
        SpectrumKind::Browder,
        SpectrumKind::LeftBrowder,
        SpectrumKind::RightBrowder,
    ];

    pub fn code(&self) -> &'static str {
        match self {
            SpectrumKind::Sigma => "sigma",
            SpectrumKind::Left => "l",
            SpectrumKind::Right => "r",
            SpectrumKind::Essential => "e",
            SpectrumKind::Weyl => "w",
            SpectrumKind::LeftEssential => "le",
            SpectrumKind::RightEssential => "re",
            SpectrumKind::Browder => "b",
            SpectrumKind::LeftBrowder => "lb",
            SpectrumKind::RightBrowder => "rb",
        }
    }
}

impl std::str::FromStr for SpectrumKind {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "sigma" => SpectrumKind::Sigma,
            "l" => SpectrumKind::Left,
            "r" => SpectrumKind::Right,
            "e" => SpectrumKind::Essential,
            "w" => SpectrumKind::Weyl,
            "le" => SpectrumKind::LeftEssential,
            "re" => SpectrumKind::RightEssential,
            "b" => SpectrumKind::Browder,
            "lb" => SpectrumKind::LeftBrowder,
            "rb" => SpectrumKind::RightBrowder,
            other => {
                return Err(CoreError::Parse(format!(
                    "unknown spectrum kind '{other}' (expected one of \
                     sigma, l, r, e, w, le, re, b, lb, rb)"
                )))
            }
        })
    }
}

/// Certified regularity flags of one operator, with the dimension data
/// they were derived from.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OperatorClass {
    pub alpha: ExtNat,
    pub beta: ExtNat,
    pub index: Option<i64>,
    pub ascent: ExtNat,
    pub descent: ExtNat,
    pub closed_range: TriState,
    pub invertible: TriState,
    pub left_invertible: TriState,
    pub right_invertible: TriState,
    pub fredholm: TriState,
    pub weyl: TriState,
    pub left_semi_fredholm: TriState,
    pub right_semi_fredholm: TriState,
    pub browder: TriState,
    pub left_semi_browder: TriState,
    pub right_semi_browder: TriState,
}

impl OperatorClass {
    /// The flag negated by each spectrum.
    pub fn regular_for(&self, kind: SpectrumKind) -> TriState {
        match kind {
            SpectrumKind::Sigma => self.invertible,
            SpectrumKind::Left => self.left_invertible,
            SpectrumKind::Right => self.right_invertible,
            SpectrumKind::Essential => self.fredholm,
            SpectrumKind::Weyl => self.weyl,
            SpectrumKind::LeftEssential => self.left_semi_fredholm,
            SpectrumKind::RightEssential => self.right_semi_fredholm,
            SpectrumKind::Browder => self.browder,
            SpectrumKind::LeftBrowder => self.left_semi_browder,
            SpectrumKind::RightBrowder => self.right_semi_browder,
        }
    }
}

/// Classify an operator.
///
/// Range closedness in this class is decided by the determinant
/// symbol: with no circle zero the operator is Fredholm (closed
/// range), with a circle zero and finite kernel data the range cannot
/// be closed, and with a vanishing determinant symbol the dimensions
/// are infinite and every regularity flag is No regardless.
pub fn classify(t: &BetOperator, cfg: &RunConfig) -> Result<OperatorClass> {
    let data = fredholm_data(t, cfg)?;
    let (ascent, descent) = asc_des(t, cfg)?;
    let closed_range = if data.semi_fredholm {
        TriState::Yes
    } else if t.symbol.is_zero() {
        // finite-rank operator: the range is finite-dimensional
        TriState::Yes
    } else if data.alpha.is_finite() == TriState::Yes {
        TriState::No
    } else {
        TriState::Undecided
    };
    let alpha_fin = data.alpha.is_finite();
    let beta_fin = data.beta.is_finite();
    let left_semi_fredholm = alpha_fin.and(closed_range);
    let right_semi_fredholm = beta_fin.and(closed_range);
    let fredholm = left_semi_fredholm.and(right_semi_fredholm);
    let weyl = fredholm.and(TriState::from_bool(data.index == Some(0)));
    let asc_fin = ascent.is_finite();
    let des_fin = descent.is_finite();
    let left_semi_browder = left_semi_fredholm.and(asc_fin);
    let right_semi_browder = right_semi_fredholm.and(des_fin);
    let browder = fredholm.and(asc_fin).and(des_fin);
    let left_invertible = data.alpha.eq_finite(0).and(closed_range);
    let right_invertible = data.beta.eq_finite(0).and(closed_range);
    let invertible = left_invertible.and(right_invertible);
    Ok(OperatorClass {
        alpha: data.alpha,
        beta: data.beta,
        index: data.index,
        ascent,
        descent,
        closed_range,
        invertible,
        left_invertible,
        right_invertible,
        fredholm,
        weyl,
        left_semi_fredholm,
        right_semi_fredholm,
        browder,
        left_semi_browder,
        right_semi_browder,
    })
}

/// Does lambda belong to the requested spectrum of T?
pub fn membership(
    t: &BetOperator,
    lambda: &GaussianRational,
    kind: SpectrumKind,
    cfg: &RunConfig,
) -> Result<TriState> {
    let class = classify(&t.translate(lambda), cfg)?;
    Ok(!class.regular_for(kind))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::op::bet::assemble_block_operator;
    use crate::symbol::LaurentSymbol;

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_ints(re, im)
    }

    fn gr(n: i64, d: i64) -> GaussianRational {
        GaussianRational::from_ratio(n, d)
    }

    fn cfg() -> RunConfig {
        RunConfig::default()
    }

    #[test]
    fn identity_and_its_spectrum() {
        let id = BetOperator::identity(1);
        let c = classify(&id, &cfg()).unwrap();
        assert_eq!(c.invertible, TriState::Yes);
        assert_eq!(c.browder, TriState::Yes);
        // 1 is in the spectrum of I (the translate is the zero operator)
        assert_eq!(
            membership(&id, &GaussianRational::one(), SpectrumKind::Sigma, &cfg()).unwrap(),
            TriState::Yes
        );
        assert_eq!(
            membership(&id, &g(2, 0), SpectrumKind::Sigma, &cfg()).unwrap(),
            TriState::No
        );
    }

    #[test]
    fn forward_shift_flags() {
        let s = BetOperator::scalar_toeplitz(LaurentSymbol::monomial(1));
        let c = classify(&s, &cfg()).unwrap();
        assert_eq!(c.left_invertible, TriState::Yes);
        assert_eq!(c.right_invertible, TriState::No);
        assert_eq!(c.invertible, TriState::No);
        assert_eq!(c.fredholm, TriState::Yes);
        assert_eq!(c.weyl, TriState::No);
        assert_eq!(c.left_semi_browder, TriState::Yes);
        assert_eq!(c.right_semi_browder, TriState::No);
        assert_eq!(c.browder, TriState::No);

        let back = s.adjoint();
        let c = classify(&back, &cfg()).unwrap();
        assert_eq!(c.left_invertible, TriState::No);
        assert_eq!(c.right_invertible, TriState::Yes);
        assert_eq!(c.right_semi_browder, TriState::Yes);
        assert_eq!(c.left_semi_browder, TriState::No);
    }

    #[test]
    fn shift_spectra_sample_points() {
        let s = BetOperator::scalar_toeplitz(LaurentSymbol::monomial(1));
        // inside the disk: everything up to Browder fails
        for kind in [
            SpectrumKind::Sigma,
            SpectrumKind::Weyl,
            SpectrumKind::Browder,
        ] {
            assert_eq!(
                membership(&s, &gr(1, 2), kind, &cfg()).unwrap(),
                TriState::Yes,
                "{kind:?}"
            );
        }
        // but the left essential spectrum misses interior points
        assert_eq!(
            membership(&s, &gr(1, 2), SpectrumKind::LeftEssential, &cfg()).unwrap(),
            TriState::No
        );
        // on the circle: essential spectrum
        assert_eq!(
            membership(&s, &g(1, 0), SpectrumKind::Essential, &cfg()).unwrap(),
            TriState::Yes
        );
        // outside: resolvent
        assert_eq!(
            membership(&s, &g(2, 0), SpectrumKind::Sigma, &cfg()).unwrap(),
            TriState::No
        );
    }

    #[test]
    fn weyl_not_browder_block() {
        let a = BetOperator::scalar_toeplitz(LaurentSymbol::monomial(1));
        let b = BetOperator::scalar_toeplitz(LaurentSymbol::monomial(-1));
        let m = assemble_block_operator(&a, &b, &BetOperator::zero(1)).unwrap();
        let c = classify(&m, &cfg()).unwrap();
        assert_eq!(c.weyl, TriState::Yes);
        assert_eq!(c.invertible, TriState::No);
        // chains exceed the cap, so Browder membership stays undecided
        assert_eq!(c.browder, TriState::Undecided);
        assert_eq!(
            membership(&m, &GaussianRational::zero(), SpectrumKind::Browder, &cfg()).unwrap(),
            TriState::Undecided
        );
    }

    #[test]
    fn spectrum_kind_codes_round_trip() {
        for kind in SpectrumKind::ALL {
            assert_eq!(kind.code().parse::<SpectrumKind>().unwrap(), kind);
        }
        assert!("banana".parse::<SpectrumKind>().is_err());
    }
}
