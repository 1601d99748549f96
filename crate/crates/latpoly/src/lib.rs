//! Exact-arithmetic lattice polytopes and toric diagrams.
//!
//! Everything except the root finder in [`ehrhart`] runs over
//! arbitrary-precision integers and rationals, so lattice-point counts,
//! h*-vectors, and equivalence witnesses are bit-exact. The crate is
//! organized bottom-up:
//!
//! * [`linalg`] — integer/rational linear algebra (determinants, Hermite
//!   completion, affine frame solving).
//! * [`polytope`] — vertex/halfspace representations, face lattices, polar
//!   duality, and the classification predicates (reflexive, Gorenstein,
//!   Delzant, toric diagram).
//! * [`ehrhart`] — lattice-point counting, Ehrhart polynomials, h*-vectors,
//!   contact Betti numbers, and root location checks.
//! * [`families`] — cubes, cross-polytopes, small cross-polytopes, pyramids,
//!   pseudo-bipyramids, prequantization, the P_k/T_k/D_k family, and
//!   monotone Bott diagrams.
//! * [`cactus`] — rooted 3-cacti: canonical codes, enumeration, counting,
//!   realization as toric diagrams, and extraction from diagrams.
//! * [`equiv`] — affine unimodular equivalence, canonical forms, and the
//!   constructive family-identification procedures.
//! * [`cli`] — the `latpoly` command-line front end.

pub mod cactus;
pub mod cli;
pub mod ehrhart;
pub mod equiv;
pub mod families;
pub mod linalg;
pub mod polytope;

/// Crate-wide error type. Variants map onto the CLI's exit-code contract:
/// parse errors are usage errors, everything else is a domain error.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Mismatched or invalid dimensions (non-square matrix, mixed ambient
    /// dimensions, ...).
    #[error("dimension error: {0}")]
    Dimension(String),

    /// Input degenerate where a full-dimensional object is required
    /// (lower-dimensional point set, zero vector, singular frame).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A documented precondition was violated (non-primitive vector,
    /// apex not a lattice point of the base, ...).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Prequantization requested for a polytope that is not Gorenstein:
    /// no integral functional takes value 1 on every lifted facet normal.
    #[error("not Gorenstein: {0}")]
    NotGorenstein(String),

    /// Family parameters out of range (k < 0, k >= n, parity violation).
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    /// Classification input provably outside the target family.
    #[error("not in family: {0}")]
    NotInFamily(String),

    /// Input outside an operation's domain (e.g. a polytope that is not a
    /// valid cactus diagram, or a non-reflexive input to canonical_form).
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed input file or JSON document.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
