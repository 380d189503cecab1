//! Laboratory for one-dimensional oscillator / scalar-field point-interaction
//! models of radiation reaction and friction.
//!
//! The crate is organised around four pieces:
//!
//! * [`params`] and [`roots`]: parameter containers and the purely algebraic
//!   analysis (characteristic roots, regimes, plastic limits).
//! * [`field`]: closed-form d'Alembert machinery for a delta-localised source,
//!   including the retarded field reconstruction from a source history.
//! * [`dynamics`]: the reduced point dynamics for the two coupling laws, their
//!   closed forms, and the insulated equation for the readout `Q(t)`.
//! * [`lattice`]: a brute-force leapfrog discretisation of the full coupled
//!   system, used as an independent oracle for everything above.
//!
//! [`reflection`] covers complete-reflection scenarios, [`verify`] hosts the
//! acceptance criteria and [`exec`] switches batch work between rayon and a
//! plain sequential loop.

// `!(a > b)` is used on purpose so that NaN inputs take the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod csv;
pub mod drive;
pub mod dynamics;
pub mod error;
pub mod exec;
pub mod field;
pub mod fit;
pub mod lattice;
pub mod params;
pub mod quadrature;
pub mod reflection;
pub mod roots;
pub mod verify;

pub use drive::Drive;
pub use dynamics::{PointHistory, SourceLaw};
pub use error::{Error, Result};
pub use exec::Execution;
pub use field::{FieldSnapshot, SourceHistory, WaveInitialData};
pub use lattice::LatticeConfig;
pub use params::{InitialState, ModelParams};
pub use roots::CharacteristicRoots;
