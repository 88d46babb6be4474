//! Semi-quantum band topology on the complex projective plane.
//!
//! Three degenerate vibrational modes (a 1:1:1 resonance) coupled to three
//! electronic states give a matrix Hamiltonian family over the reduced phase
//! space CP^2. This crate builds the quantum polyad Hamiltonians, computes the
//! band structure of the classical matrix symbol, measures the Chern classes
//! of the eigen-band bundles by numerical curvature integration, and checks
//! the resulting level counts against exact characteristic-class arithmetic.

pub mod chern;
pub mod config;
pub mod herm3;
pub mod index;
pub mod polyad;
pub mod symbol;
pub mod quantum;
pub mod run;
pub mod symmetry;

pub use chern::ChernClass;
pub use polyad::PolyadBasis;
pub use symbol::PhasePoint;
