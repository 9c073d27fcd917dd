use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::num::{Field, Scalar};
use crate::profile::{CorrelatedProfile, MixedProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Concept {
    Seslo,
    Selo,
    Stackelberg,
    BestNash,
    MaxCe,
}

impl Concept {
    pub const ALL: [Concept; 5] =
        [Concept::Seslo, Concept::Selo, Concept::Stackelberg, Concept::BestNash, Concept::MaxCe];

    pub fn name(self) -> &'static str {
        match self {
            Concept::Seslo => "SESLO",
            Concept::Selo => "SELO",
            Concept::Stackelberg => "STACKELBERG",
            Concept::BestNash => "BEST_NASH",
            Concept::MaxCe => "MAX_CE",
        }
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Concept {
    type Err = Error;

    /// Accepts the report names and the short forms `nash` and `ce`.
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "seslo" => Ok(Concept::Seslo),
            "selo" => Ok(Concept::Selo),
            "stackelberg" => Ok(Concept::Stackelberg),
            "nash" | "best_nash" => Ok(Concept::BestNash),
            "ce" | "max_ce" => Ok(Concept::MaxCe),
            other => Err(Error::Parse(format!("unknown concept `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness<F> {
    Mixed(MixedProfile<F>),
    Correlated(CorrelatedProfile<F>),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Support pairs (or arrangement vertices) looked at.
    pub supports_examined: usize,
    /// Vertices of the column player's strategy set evaluated.
    pub vertices_examined: usize,
    pub lps_solved: usize,
    /// The search stopped because it reached the supplied upper bound.
    pub stopped_early: bool,
}

/// Result of one solver call. `value` is the row player's utility under
/// `witness`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport<F> {
    pub concept: Concept,
    pub value: F,
    pub witness: Witness<F>,
    pub verifier_passed: bool,
    pub stats: SearchStats,
}

impl<F: Field> SolveReport<F> {
    pub fn value_scalar(&self) -> Scalar {
        self.value.to_scalar()
    }
}
