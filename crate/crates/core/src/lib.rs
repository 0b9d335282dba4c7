//! Twins in words: `r` pairwise disjoint, letter-for-letter identical
//! subsequences of one word.

pub mod bounds;
pub mod constructions;
pub mod enumerator;
pub mod error;
pub mod fixtures;
pub mod models;
pub mod scalar;
pub mod solver;
pub mod witness;
pub mod word;

pub use error::{Error, Result};
pub use scalar::{Rational, Real, Scalar};
pub use solver::{SolveResult, SolverKind};
pub use witness::{verify_twins, Reason, TwinWitness, Verification};
pub use word::{Alphabet, Letter, LetterCounts, Word};
