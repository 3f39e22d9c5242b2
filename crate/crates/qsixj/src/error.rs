//! Error types shared across the crate.

use crate::qnum::Regime;

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// A deformation parameter that does not define a valid regime.
    #[error("invalid deformation parameter: {0}")]
    InvalidRegime(String),
    /// An operation that is not defined in the requested regime.
    #[error("operation `{op}` is not supported in regime {regime:?}")]
    UnsupportedRegime { op: &'static str, regime: Regime },
    /// A twice-spin label that violates a precondition.
    #[error("invalid label {name} = {value}: {reason}")]
    InvalidLabel {
        name: &'static str,
        value: i64,
        reason: String,
    },
    /// An index (j or l) outside the admissible range of a space.
    #[error("index {name} = {value} is not admissible for labels ({a},{b},{c},{d})")]
    InadmissibleIndex {
        name: &'static str,
        value: i64,
        a: i64,
        b: i64,
        c: i64,
        d: i64,
    },
    /// An operation that needs a non-empty space was given an n = 0 one.
    #[error("the four-valent space is empty (n = 0)")]
    EmptySpace,
    /// A theta in a denominator vanished while the numerator did not.
    #[error("inadmissible denominator: theta({0},{1},{2}) is exactly zero")]
    InadmissibleDenominator(i64, i64, i64),
    /// The tridiagonal eigensolver failed to deflate a block.
    #[error("eigensolver did not converge after {iterations} iterations on block starting at {block}")]
    NoConvergence { block: usize, iterations: usize },
    /// Two candidate l values match an eigenvalue equally well.
    #[error("ambiguous eigenvalue assignment: l = {l1} and l = {l2} both match eigenvalue {value}")]
    AmbiguousEigenvalue { l1: i64, l2: i64, value: f64 },
    /// Sign fixing at jmin failed because the eigenvector entry is negligible.
    #[error("cannot fix the sign of the l = {l} eigencolumn: |entry at jmin| = {magnitude:e}")]
    SignFixFailed { l: i64, magnitude: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
