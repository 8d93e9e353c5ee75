//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("invalid root datum: {0}")]
    RootDatum(String),

    #[error("Weyl group larger than the configured cap {cap}")]
    WeylCap { cap: usize },

    #[error("not a representation multiset: weight {weight:?} has multiplicity {mult}")]
    NotRepresentation { weight: Vec<i64>, mult: i64 },

    #[error("representation is not quasi-symmetric: line spanned by {line:?} has weighted sum {sum:?}")]
    NotQuasiSymmetric { line: Vec<i64>, sum: Vec<i64> },

    #[error("representation multiset is not stable under the Weyl group")]
    NotWeylStable,

    #[error("quadratic form is not symmetric")]
    NotSymmetric,

    #[error("quadratic form is not positive definite (leading minor {index} is not positive)")]
    NotPositiveDefinite { index: usize },

    #[error("quadratic form is not Weyl-invariant")]
    NormNotInvariant,

    #[error("delta is not Weyl-invariant")]
    DeltaNotInvariant,

    #[error("weight is not invariant under the Levi Weyl group: {0}")]
    NotLeviInvariant(String),

    #[error("weight not in the positive central cone: pairing with root {root:?} is not positive")]
    NotInPositiveCone { root: Vec<i64> },

    #[error("weight {weight:?} is not dominant for the Levi of lambda")]
    NotDominant { weight: Vec<i64> },

    #[error("lambda is not anti-dominant: {0}")]
    NotAntiDominant(String),

    #[error("coverage violation: no window cell contains {weight:?}")]
    Coverage { weight: Vec<i64> },

    #[error("disjointness violation: {weight:?} lies in cells of lambda = {first} and lambda = {second}")]
    Disjointness {
        weight: Vec<i64>,
        first: String,
        second: String,
    },

    #[error("invalid input: {0}")]
    Invalid(String),
}
