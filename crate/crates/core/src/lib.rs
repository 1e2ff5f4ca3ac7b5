//! Static two-player quantum games in which each player may apply any
//! physical operation to their subsystem.
//!
//! Strategies are χ matrices in the matrix-unit basis, payoffs are bilinear
//! contractions with a rank-4 payoff tensor, and ε-Nash claims are checked by
//! solving each player's best-response semidefinite program with a dual
//! certificate.

pub mod builtin;
pub mod equilibrium;
pub mod error;
pub mod game;
pub mod linalg;
pub mod quantum;
pub mod random;

pub use equilibrium::{
    best_response, response_problem, unitary_oracle, verify_nash, BestResponseResult, NashVerdict,
    OracleResult, ResponseProblem, SolverOptions,
};
pub use error::{Error, Result};
pub use game::{
    classical_reduction, payoff_contract, payoff_direct, payoff_tensor_general, payoff_tensor_matrix_unit,
    simulate_play, ClassicalBimatrix, PayoffTensor, Player, QuantumGame, SimulationReport,
};
pub use linalg::ComplexMatrix;
pub use quantum::{
    apply_channel, apply_chi, chi_to_kraus, kraus_to_chi, measure_probs, ChiMatrix, DensityMatrix, KrausChannel,
    Povm,
};
