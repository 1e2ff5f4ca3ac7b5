//! Quantum states, channels and measurements.
//!
//! Strategies are stored as χ matrices over the matrix-unit operator basis
//! `n_[ij]`. The basis label α = (i, j) is flattened to `i·n + j` (0-based,
//! row-major) everywhere in this crate. Note the 1-based indices used in the
//! usual closed-form payoff expression shift down by one under this convention.

mod channel;
mod chi;
mod povm;
mod state;

pub use channel::{apply_channel, apply_product_channel, validate_kraus, KrausChannel};
pub use chi::{apply_chi, chi_to_kraus, kraus_to_chi, validate_chi, ChiMatrix};
pub use povm::{measure_probs, sample_index, sample_outcome, validate_povm, Povm};
pub use state::{validate_density, DensityMatrix};
