//! Exact linear algebra over the two-element field, specialized to the study
//! of matrix subspaces: range-compatible linear maps, algebraic reflexivity,
//! equivalence under the two-sided `GL_n x GL_p` action, and affine spaces of
//! matrices with lower-rank 2.
//!
//! Everything is computed exactly with bit-packed kernels; the `harness`
//! module binds the classification statements to executable, exhaustive or
//! seeded-random verification suites.

pub mod bitmat;
pub mod catalog;
pub mod equivalence;
pub mod harness;
pub mod rangecompat;
pub mod rankgeom;
pub mod reflexivity;
pub mod space;
pub mod textio;

pub use bitmat::{BitMatrix, BitVector};
pub use space::{AffineMatSpace, MatSubspace};

/// Errors shared across the crate. Preconditions named by the API contracts
/// surface here; internal invariants are debug-asserted instead.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("shape mismatch: {context} (expected {expected}, got {got})")]
    ShapeMismatch {
        context: &'static str,
        expected: String,
        got: String,
    },
    #[error("{what} = {value} exceeds the supported bound {max}")]
    TooLarge {
        what: &'static str,
        value: usize,
        max: usize,
    },
    #[error("{0}")]
    Precondition(String),
    #[error("unknown catalog name `{0}`")]
    UnknownName(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn shape(context: &'static str, expected: impl ToString, got: impl ToString) -> Self {
        Error::ShapeMismatch {
            context,
            expected: expected.to_string(),
            got: got.to_string(),
        }
    }
}
