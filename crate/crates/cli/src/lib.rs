//! Library side of the `seslo` command-line tool: the random-game
//! experiment and its CSV/SVG output.

pub mod experiment;
pub mod output;
