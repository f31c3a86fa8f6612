//! Pattern-occurrence statistics for permutations and words.
//!
//! * [`pattern`] and [`count`]: pattern types, symmetries and occurrence counts.
//! * [`extremal`]: exhaustive maxima `μ(Π,k,n)`, `δ(Π,k,n)`.
//! * [`layered`]: packing densities of sets of layered permutations,
//!   co-occurrence ratios, backed by the simplex optimizer in [`optimize`].
//! * [`moments`]: exact leading coefficients of occurrence variance and
//!   covariance, with brute-force oracles.
//! * [`acceptance`]: the end-to-end verification criteria.

pub mod acceptance;
pub mod combinatorics;
pub mod count;
pub mod error;
pub mod extremal;
pub mod layered;
pub mod moments;
pub mod optimize;
pub mod pattern;

pub use count::{count_occurrences, density, is_occurrence};
pub use error::{Error, Result};
pub use extremal::{ExtremalResult, Restriction, Space};
pub use layered::{DensityResult, LayeredObjectiveSpec, Method, SimplexWeights, ValueKind};
pub use moments::{BracketMatrix, MomentReport};
pub use pattern::{LayeredShape, PatternSet, Permutation, Word, WordPattern};
