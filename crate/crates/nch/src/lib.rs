//! Exact-arithmetic homological algebra for finite-dimensional
//! associative algebras: noncommutative differential forms and their
//! operator calculus, Hochschild and cyclic homology, Chern characters,
//! index pairings, excision tests, Lie-algebra homology comparisons and
//! a concrete Toeplitz index model.
//!
//! All arithmetic is exact (rational or Gaussian rational); every
//! identity that the library claims is checked as an equality of sparse
//! matrices or scalars, never numerically.
//!
//! See the `examples/` directory for one runnable walkthrough per major
//! capability, or the `nch` binary for the command-line surface.

pub mod algebra;
pub mod cochain;
pub mod cuntz;
pub mod error;
pub mod excision;
pub mod forms;
pub mod homology;
pub mod kindex;
pub mod lie;
pub mod linalg;
pub mod matrix;
pub mod poly;
pub mod report;
pub mod ring;
pub mod scalar;
pub mod suites;
pub mod toeplitz;
