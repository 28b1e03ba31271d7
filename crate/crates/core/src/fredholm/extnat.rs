//! Natural numbers extended with infinity and a capped-search marker.

use serde::{Deserialize, Serialize};

use crate::tri::TriState;

/// Result of a dimension or stabilization search: an exact finite
/// value, a proof of infinity, or a certificate that the search passed
/// `cap` without resolving.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtNat {
    Finite(u64),
    Infinite,
    ExceedsCap(u64),
}

impl ExtNat {
    pub fn is_finite(&self) -> TriState {
        match self {
            ExtNat::Finite(_) => TriState::Yes,
            ExtNat::Infinite => TriState::No,
            ExtNat::ExceedsCap(_) => TriState::Undecided,
        }
    }

    pub fn finite(&self) -> Option<u64> {
        match self {
            ExtNat::Finite(n) => Some(*n),
            _ => None,
        }
    }

    /// Exact-when-decidable equality.
    pub fn eq_tri(&self, rhs: &ExtNat) -> TriState {
        use ExtNat::*;
        match (self, rhs) {
            (Finite(a), Finite(b)) => TriState::from_bool(a == b),
            (Infinite, Infinite) => TriState::Yes,
            (Finite(_), Infinite) | (Infinite, Finite(_)) => TriState::No,
            // the true value behind ExceedsCap(c) is some n > c (or infinity)
            (ExceedsCap(c), Finite(k)) | (Finite(k), ExceedsCap(c)) => {
                if k <= c {
                    TriState::No
                } else {
                    TriState::Undecided
                }
            }
            _ => TriState::Undecided,
        }
    }

    pub fn eq_finite(&self, k: u64) -> TriState {
        self.eq_tri(&ExtNat::Finite(k))
    }

    pub fn add(&self, rhs: &ExtNat) -> ExtNat {
        use ExtNat::*;
        match (self, rhs) {
            (Infinite, _) | (_, Infinite) => Infinite,
            (Finite(a), Finite(b)) => Finite(a + b),
            (ExceedsCap(c), Finite(k)) | (Finite(k), ExceedsCap(c)) => ExceedsCap(c + k),
            (ExceedsCap(a), ExceedsCap(b)) => ExceedsCap(a + b),
        }
    }
}

impl std::fmt::Display for ExtNat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtNat::Finite(n) => write!(f, "{n}"),
            ExtNat::Infinite => f.write_str("infinite"),
            ExtNat::ExceedsCap(c) => write!(f, "exceeds_cap({c})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equality_respects_cap_information() {
        assert_eq!(ExtNat::Finite(3).eq_finite(3), TriState::Yes);
        assert_eq!(ExtNat::Finite(3).eq_finite(4), TriState::No);
        assert_eq!(ExtNat::Infinite.eq_tri(&ExtNat::Infinite), TriState::Yes);
        assert_eq!(ExtNat::Infinite.eq_finite(0), TriState::No);
        // true value > 16, so it cannot equal 5
        assert_eq!(ExtNat::ExceedsCap(16).eq_finite(5), TriState::No);
        assert_eq!(ExtNat::ExceedsCap(16).eq_finite(20), TriState::Undecided);
        assert_eq!(
            ExtNat::ExceedsCap(4).eq_tri(&ExtNat::Infinite),
            TriState::Undecided
        );
    }

    #[test]
    fn addition_absorbs_and_propagates() {
        assert_eq!(ExtNat::Finite(2).add(&ExtNat::Finite(3)), ExtNat::Finite(5));
        assert_eq!(ExtNat::Infinite.add(&ExtNat::Finite(1)), ExtNat::Infinite);
        assert_eq!(
            ExtNat::ExceedsCap(16).add(&ExtNat::Finite(2)),
            ExtNat::ExceedsCap(18)
        );
    }
}
