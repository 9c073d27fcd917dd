//! Two-player games in which the row player's commitment is only partially
//! observable: the column player sees which subset of indistinguishable
//! strategies (SIS) the row player drew from, but not the row itself.
//!
//! The crate computes the optimal committed profiles with and without a
//! signaling mediator, the classical special cases (Stackelberg, best Nash,
//! best correlated equilibrium), checks profiles for undetectable beneficial
//! deviations under several signaling models, and builds the instance
//! families used to exercise all of the above.
//!
//! Every solver is generic over [`Field`]: [`Rational`] gives exact answers,
//! `f64` gives fast approximate ones.

pub mod deviation;
pub mod error;
pub mod game;
pub mod generators;
pub mod io;
mod linalg;
pub mod lp;
pub mod num;
pub mod profile;
pub mod solvers;

pub use deviation::{
    find_deviation, verify_correlated, verify_mixed, DeviationPlan, SignalModel, VerifyReport,
};
pub use error::{Error, Result};
pub use game::{is_refinement, validate_game, Game, Matrix, RawGame, SisPartition};
pub use num::{Field, Mode, Rational, Scalar};
pub use profile::{
    conditional_sis_given_column, correlated_utilities, embed_mixed_as_correlated,
    expected_utilities, sis_mass, CorrelatedProfile, MixedProfile,
};
pub use solvers::{
    solve_best_nash, solve_max_ce, solve_selo, solve_seslo, solve_stackelberg, Concept,
    SeloOptions, SolveReport, Witness,
};
