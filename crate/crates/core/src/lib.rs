//! Design-analysis toolkit for lattice optical clocks.
//!
//! The crate models a cesium (or rubidium) optical clock operating on a
//! dipole-forbidden transition, trapped in a magic-wavelength optical
//! lattice: atomic polarizabilities and magic trapping conditions, hyperfine
//! Zeeman structure, projected-lattice geometry and sideband spectra, the
//! quantum-noise and intermodulation stability budget, a systematic-shift
//! error budget, and a stochastic simulation of the dual-transition lock
//! servo.
//!
//! All physical quantities are SI internally; polarizabilities cross the API
//! boundary in Å³ and reduced dipole matrix elements in atomic units, because
//! that is how the source literature tabulates them.

pub mod angular;
pub mod constants;
pub mod dataset;
pub mod lattice;
pub mod locksim;
pub mod polarizability;
pub mod stability;
pub mod systematics;
pub mod units;
pub mod zeeman;

pub use constants::{PhysConstants, CONSTANTS};
pub use dataset::{load_dataset, AtomicDataset, LevelId, Species, TransitionRecord};
