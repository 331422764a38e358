//! Canonical forms and congruence classification for Hermitian-symmetric
//! matrix pairs.
//!
//! A pair `(A, B)` with `A` Hermitian and `B` symmetric is considered up to
//! the equivalence `(A, B) ~ (c P* A P, conj(c) P^T B P)` with `|c| = 1` and
//! `P` nonsingular. This crate computes
//!
//! * the three normal forms of such a pair when `B` is nonsingular
//!   (block form built from `H_m`/`K_m`/`L_m` blocks, the backward-identity
//!   Jordan form, and the inertia form),
//! * the block reduction for singular `B`,
//! * a complete classification with certified representatives for
//!   2x2, 3x3 and 4x4 pairs,
//! * congruence decision procedures that return explicit, verifiable
//!   certificates `(P, c)`.
//!
//! The quadratic part of a real 2n-manifold embedded in an (n+1)-dimensional
//! complex manifold near a complex point is exactly such a pair; the pair is
//! "quadratically flat" when `A` is Hermitian up to a unit scalar, which is
//! where the classification applies.

pub mod cli;
pub mod congruence;
pub mod consim;
pub mod forms;
pub mod matlin;
pub mod reduce;

pub use congruence::{CongruenceCertificate, PairInvariants};
pub use forms::{Form1, Form2, Form3};
pub use matlin::{CMatrix, Cx, InertiaTriple, Tolerances};
pub use reduce::{ClassLabel, MatrixPair, ReducedPair};

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Input expected to be Hermitian is not, within tolerance.
    NotHermitian(f64),
    /// Input expected to be symmetric is not, within tolerance.
    NotSymmetric(f64),
    /// Input expected to be nonsingular has numerical rank below full.
    Singular,
    /// Two inputs have incompatible dimensions.
    SizeMismatch(usize, usize),
    /// A requested operation is not available for this input.
    Unsupported(String),
    /// Cluster or staircase decisions were inconsistent; the tolerances do
    /// not separate the structure of this input.
    ToleranceBreakdown(String),
    /// Input failed validation (non-finite entries, shape mismatch, ...).
    BadInput(String),
}

impl std::fmt::Display for Error {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Error::NotHermitian(d) => write!(f, "matrix is not Hermitian (deviation {d:.3e})"),
            Error::NotSymmetric(d) => write!(f, "matrix is not symmetric (deviation {d:.3e})"),
            Error::Singular => write!(f, "matrix is numerically singular"),
            Error::SizeMismatch(a, b) => write!(f, "dimension mismatch: {a} vs {b}"),
            Error::Unsupported(s) => write!(f, "unsupported: {s}"),
            Error::ToleranceBreakdown(s) => write!(f, "tolerance breakdown: {s}"),
            Error::BadInput(s) => write!(f, "bad input: {s}"),
        }
    }
}

impl std::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
