//! Effective one-dimensional models of atoms in strong magnetic fields.
//!
//! A strong homogeneous magnetic field confines electrons to Landau orbits
//! transverse to the field, leaving an effective one-dimensional problem
//! along the field axis. The 3D Coulomb attraction and repulsion then turn
//! into regularized potentials `V_m(x)` (one per Landau angular momentum)
//! and effective interactions that are convex combinations of rescaled
//! `V_j`. This crate evaluates those potentials, computes the convex
//! decompositions exactly, solves the resulting 1D Schrödinger problems
//! (single electron, Hartree mean field, exact two-electron), and evaluates
//! numeric no-binding certificates built from an IMS localization argument.
//!
//! Modules:
//! - [`potentials`]: `V_m`, its field-scaled variant, the Slater average
//!   `V_av`, envelopes and tables.
//! - [`interactions`]: convex-combination coefficients for product pairs,
//!   antisymmetrized pairs and Slater determinants, plus brute-force
//!   quadrature oracles used to cross-check them.
//! - [`spectral`]: finite-difference discretization, tridiagonal ground
//!   states, Hartree SCF, two-electron diagonalization, binding tests and
//!   maximum-ionization scans.
//! - [`models`]: named effective models (`m`-momentum, Slater, custom) with
//!   their envelope parameters.
//! - [`certificates`]: localization partitions, inner/outer estimates, and
//!   threshold formulas composing into a no-binding certificate.

pub mod certificates;
pub mod error;
pub mod interactions;
pub mod models;
pub mod potentials;
pub mod quadrature;
pub mod spectral;

pub use certificates::{BoundParams, CertificateReport, Partition, PartitionSpec};
pub use error::CoreError;
pub use interactions::{CoefficientOrigin, CoefficientVector, PairLabel};
pub use models::ModelSpec;
pub use potentials::{FieldParams, LandauIndex};
pub use quadrature::QuadratureSpec;
pub use spectral::{DiscreteOperator, Grid1D, ScfOptions};

/// Crate result type.
pub type Result<T> = std::result::Result<T, CoreError>;
