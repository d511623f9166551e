//! Exact linear algebra over Q(i), Lie-theoretic models of real reductive
//! groups, Dirac operators on spinor modules, and the coefficient-level
//! zeta machinery built on top of them.
//!
//! Identities that hold in exact arithmetic are checked with residual
//! exactly zero. Floating point only enters through character evaluation
//! at torus elements and through geodesic lengths.

pub mod exact;
pub mod matrix;
pub mod lie_characters;
pub mod group_model;
pub mod representations;
pub mod clifford_dirac;
pub mod eta_pipeline;
pub mod zeta_engine;
pub mod lattice_data;
