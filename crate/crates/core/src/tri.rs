//! Three-valued logic for decisions that may be genuinely undecidable at
//! a given precision or power cap.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TriState {
    Yes,
    No,
    Undecided,
}

impl TriState {
    pub fn from_bool(b: bool) -> Self {
        if b {
            TriState::Yes
        } else {
            TriState::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == TriState::Yes
    }

    pub fn is_no(self) -> bool {
        self == TriState::No
    }

    pub fn is_decided(self) -> bool {
        self != TriState::Undecided
    }

    /// Logical AND: No dominates, then Undecided.
    pub fn and(self, other: TriState) -> TriState {
        use TriState::*;
        match (self, other) {
            (No, _) | (_, No) => No,
            (Yes, Yes) => Yes,
            _ => Undecided,
        }
    }

    /// Logical OR: Yes dominates, then Undecided.
    pub fn or(self, other: TriState) -> TriState {
        use TriState::*;
        match (self, other) {
            (Yes, _) | (_, Yes) => Yes,
            (No, No) => No,
            _ => Undecided,
        }
    }
}

impl std::ops::Not for TriState {
    type Output = TriState;

    fn not(self) -> TriState {
        match self {
            TriState::Yes => TriState::No,
            TriState::No => TriState::Yes,
            TriState::Undecided => TriState::Undecided,
        }
    }
}

impl std::fmt::Display for TriState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            TriState::Yes => "yes",
            TriState::No => "no",
            TriState::Undecided => "undecided",
        };
        f.write_str(s)
    }
}

#[cfg(test)]
mod tests {
    use super::TriState::*;

    #[test]
    fn truth_tables() {
        assert_eq!(Yes.and(Undecided), Undecided);
        assert_eq!(No.and(Undecided), No);
        assert_eq!(Yes.or(Undecided), Yes);
        assert_eq!(No.or(Undecided), Undecided);
        assert_eq!(!Undecided, Undecided);
        assert_eq!(!Yes, No);
    }
}
