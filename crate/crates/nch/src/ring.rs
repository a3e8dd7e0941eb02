//! Minimal ring interface shared by finite-dimensional algebra elements
//! and the half-line operator model used for Toeplitz index theory.

use crate::scalar::Scalar;

/// Elements carry their own context (owning algebra, truncation, ...),
/// so zero and one are derived from an existing element.
pub trait Ring: Clone + PartialEq + std::fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, c: &Scalar) -> Self;
    fn is_zero(&self) -> bool;
}
