//! Best responses and ε-Nash verification over full CPTP strategy sets.

mod oracle;
mod solver;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::game::{payoff_contract, payoff_tensor_matrix_unit, PayoffTensor, Player, QuantumGame};
use crate::linalg::ComplexMatrix;
use crate::quantum::ChiMatrix;

pub use oracle::{unitary_oracle, OracleResult, DEFAULT_RESOLUTION};
pub use solver::{best_response, BestResponseResult, SolverOptions, FEASIBILITY_TOL};

/// One player's payoff with the opponent's strategy fixed: `tr(G χ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseProblem {
    g: ComplexMatrix,
    n: usize,
    player: Player,
}

impl ResponseProblem {
    pub fn from_matrix(g: ComplexMatrix, n: usize, player: Player) -> Result<Self> {
        if g.dim() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: g.dim(),
            });
        }
        Ok(Self { g, n, player })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.g
    }

    /// Operator dimension of the responding player.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn player(&self) -> Player {
        self.player
    }

    /// The Hermitian part of `G`, which equals the objective on Hermitian χ.
    pub fn objective(&self) -> ComplexMatrix {
        self.g.hermitian_part()
    }

    pub fn value(&self, chi: &ChiMatrix) -> Result<f64> {
        if chi.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: chi.n(),
            });
        }
        let v = self.g.trace_product(chi.matrix());
        crate::game::check_real(v.re, v.im)
    }
}

/// Contracts `a` over the opponent's indices.
///
/// For player I, `G_{βα} = Σ_{γδ} ξ_{γδ} A_{αβγδ}`; for player II,
/// `G_{δγ} = Σ_{αβ} χ_{αβ} A_{αβγδ}`. Either way the payoff is `tr(G χ_own)`.
pub fn response_problem(a: &PayoffTensor, opponent: &ChiMatrix, player: Player) -> Result<ResponseProblem> {
    let (own, other) = match player {
        Player::I => (a.n1(), a.n2()),
        Player::II => (a.n2(), a.n1()),
    };
    if opponent.n() != other {
        return Err(Error::DimensionMismatch {
            expected: other,
            found: opponent.n(),
        });
    }
    let (d_own, d_other) = (own * own, other * other);
    let opp = opponent.matrix();
    let zero = Complex64::new(0.0, 0.0);
    let g = ComplexMatrix::from_fn(d_own, |row, col| {
        // row = β (resp. δ), col = α (resp. γ)
        let mut acc = zero;
        for x in 0..d_other {
            for y in 0..d_other {
                let w = opp[(x, y)];
                if w == zero {
                    continue;
                }
                acc += w * match player {
                    Player::I => a.get(col, row, x, y),
                    Player::II => a.get(x, y, col, row),
                };
            }
        }
        acc
    });
    ResponseProblem::from_matrix(g, own, player)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NashVerdict {
    pub is_equilibrium: bool,
    pub epsilon: f64,
    pub payoff_i: f64,
    pub payoff_ii: f64,
    /// Best-response value minus current payoff, clamped at zero.
    pub gap_i: f64,
    pub gap_ii: f64,
    pub response_i: BestResponseResult,
    pub response_ii: BestResponseResult,
}

/// Checks that neither player gains more than `epsilon` by deviating to any
/// physical operation. An uncertified best response yields
/// [`Error::NashNoConvergence`] carrying the partial gaps.
pub fn verify_nash(
    game: &QuantumGame,
    chi: &ChiMatrix,
    xi: &ChiMatrix,
    epsilon: f64,
    opts: &SolverOptions,
) -> Result<NashVerdict> {
    let a1 = payoff_tensor_matrix_unit(game, Player::I);
    let a2 = payoff_tensor_matrix_unit(game, Player::II);
    let payoff_i = payoff_contract(&a1, chi, xi)?;
    let payoff_ii = payoff_contract(&a2, chi, xi)?;

    let mut certified = true;
    let mut solve = |problem: ResponseProblem| match best_response(&problem, opts) {
        Ok(r) => Ok(r),
        Err(Error::NoConvergence(partial)) => {
            certified = false;
            Ok(*partial)
        }
        Err(e) => Err(e),
    };
    let response_i = solve(response_problem(&a1, xi, Player::I)?)?;
    let response_ii = solve(response_problem(&a2, chi, Player::II)?)?;

    let gap_i = (response_i.value - payoff_i).max(0.0);
    let gap_ii = (response_ii.value - payoff_ii).max(0.0);
    let verdict = NashVerdict {
        is_equilibrium: certified && gap_i <= epsilon && gap_ii <= epsilon,
        epsilon,
        payoff_i,
        payoff_ii,
        gap_i,
        gap_ii,
        response_i,
        response_ii,
    };
    if certified {
        Ok(verdict)
    } else {
        Err(Error::NashNoConvergence(Box::new(verdict)))
    }
}
