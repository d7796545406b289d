//! Dual-space geometry of finite-dimensional real algebras.
//!
//! An algebra is given by structure constants ([`algebra`]); the catalog in
//! [`builders`] provides ℝⁿ, self-adjoint matrices, spin factors, direct sums
//! and some Lie algebras. [`dual`] computes the linear bivector field on the
//! dual space and its distribution, [`spectral`] the Jordan structure theory
//! and [`orbit`] the orbit classification and the orbit metric, which reduces
//! to the Fisher–Rao and Bures–Helstrom metrics on ℝⁿ and on matrices.
//! [`verify`] bundles the acceptance checks used by the command-line tool.

pub mod algebra;
pub mod builders;
pub mod dual;
pub mod error;
pub mod linalg;
pub mod orbit;
pub mod spectral;
pub mod verify;

pub use algebra::{
    check_axioms, is_automorphism, is_derivation, left_multiplication, product, AlgebraFile, AlgebraKind,
    AlgebraSpec, AxiomReport, DualElement, Element, LinearOperator,
};
pub use builders::{
    build_direct_sum, build_hermitian, build_lie, build_rn, build_spin, from_source, load_custom, CatalogEntry,
    Field, LieName,
};
pub use error::{Error, Result};
pub use spectral::{FormVariant, PeirceDecomposition, SpectralData};
