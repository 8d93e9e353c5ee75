//! Combinatorics of semiorthogonal decompositions for quasi-symmetric
//! linear quotient stacks `V/G`.
//!
//! The crate computes the data that labels and verifies such decompositions:
//! weight polytopes and their lattice points, the partition of the weight
//! lattice into window cells indexed by rational cocharacters, Borel-Weil-Bott
//! presentations of Hall-induced generators, and the strict inequalities
//! behind semiorthogonality and full faithfulness. All arithmetic is exact
//! over the rationals; floating point is not used anywhere in this crate.

pub mod bwb;
pub mod error;
pub mod polytope;
pub mod presets;
pub mod ratlin;
pub mod root_datum;
pub mod sod;
pub mod weights;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
