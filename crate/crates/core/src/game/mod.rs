//! Two-player static quantum games.
//!
//! A game is fixed by the initial joint state ρ and one Hermitian payoff
//! operator per player, `R = Σ_k a_k M_k† M_k`. Player I acts on the first
//! tensor factor (dimension `n1`), player II on the second (`n2`).

mod simulate;
mod tensor;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{tol, ComplexMatrix};
use crate::quantum::{apply_product_channel, DensityMatrix, KrausChannel, Povm};

pub use simulate::{simulate_play, SimulationReport};
pub use tensor::{
    payoff_contract, payoff_tensor_general, payoff_tensor_matrix_unit, PayoffTensor,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    I,
    II,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::I => Player::II,
            Player::II => Player::I,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Player::I => 0,
            Player::II => 1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Player::I => "I",
            Player::II => "II",
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Player {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "I" | "i" | "1" => Ok(Player::I),
            "II" | "ii" | "2" => Ok(Player::II),
            other => Err(Error::InvalidArgument(format!("unknown player {other:?}, expected I or II"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumGame {
    rho: DensityMatrix,
    payoff_ops: [ComplexMatrix; 2],
    n1: usize,
    n2: usize,
}

impl QuantumGame {
    pub fn new(
        rho: DensityMatrix,
        payoff_i: ComplexMatrix,
        payoff_ii: ComplexMatrix,
        n1: usize,
        n2: usize,
    ) -> Result<Self> {
        let joint = n1 * n2;
        for m in [rho.matrix(), &payoff_i, &payoff_ii] {
            if m.dim() != joint {
                return Err(Error::DimensionMismatch {
                    expected: joint,
                    found: m.dim(),
                });
            }
        }
        for r in [&payoff_i, &payoff_ii] {
            let residual = r.hermiticity_residual();
            if residual > tol::HERMITIAN {
                return Err(Error::NotHermitian { residual });
            }
        }
        Ok(Self {
            rho,
            payoff_ops: [payoff_i.hermitian_part(), payoff_ii.hermitian_part()],
            n1,
            n2,
        })
    }

    /// Builds both payoff operators from the referee's measurement.
    pub fn from_measurement(
        rho: DensityMatrix,
        povm: &Povm,
        payoffs_i: &[f64],
        payoffs_ii: &[f64],
        n1: usize,
        n2: usize,
    ) -> Result<Self> {
        let r1 = payoff_operator(povm, payoffs_i)?;
        let r2 = payoff_operator(povm, payoffs_ii)?;
        Self::new(rho, r1, r2, n1, n2)
    }

    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn payoff_operator(&self, player: Player) -> &ComplexMatrix {
        &self.payoff_ops[player.index()]
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    /// Operator dimension of the given player's subsystem.
    pub fn player_dim(&self, player: Player) -> usize {
        match player {
            Player::I => self.n1,
            Player::II => self.n2,
        }
    }
}

/// `R = Σ_k a_k M_k† M_k`.
pub fn payoff_operator(povm: &Povm, payoffs: &[f64]) -> Result<ComplexMatrix> {
    if payoffs.len() != povm.outcomes() {
        return Err(Error::LengthMismatch {
            expected: povm.outcomes(),
            found: payoffs.len(),
        });
    }
    let mut r = ComplexMatrix::zeros(povm.dim());
    for (effect, &a) in povm.effects().iter().zip(payoffs) {
        r = &r + &effect.scale_real(a);
    }
    Ok(r.hermitian_part())
}

/// Payoff by running both channels on ρ and taking `tr(R π)`.
pub fn payoff_direct(
    game: &QuantumGame,
    ch_a: &KrausChannel,
    ch_b: &KrausChannel,
    player: Player,
) -> Result<f64> {
    for (ch, n) in [(ch_a, game.n1), (ch_b, game.n2)] {
        if ch.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: ch.dim(),
            });
        }
    }
    let pi = apply_product_channel(ch_a, ch_b, &game.rho)?;
    let value = pi.expectation(game.payoff_operator(player));
    check_real(value.re, value.im)
}

pub(crate) fn check_real(re: f64, im: f64) -> Result<f64> {
    if im.abs() > 1e-9 * re.abs().max(1.0) {
        return Err(Error::NonRealPayoff { imag: im });
    }
    Ok(re)
}

/// A classical two-player game table, `(payoff_I, payoff_II)` per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalBimatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(f64, f64)>,
}

impl ClassicalBimatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<(f64, f64)>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        if let Some(k) = entries.iter().position(|(a, b)| !a.is_finite() || !b.is_finite()) {
            return Err(Error::NonFinite {
                row: k / cols,
                col: k % cols,
            });
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, s: usize, t: usize) -> (f64, f64) {
        self.entries[s * self.cols + t]
    }

    pub fn max_abs_diff(&self, other: &ClassicalBimatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a.0 - b.0).abs().max((a.1 - b.1).abs()))
            .fold(0.0, f64::max)
    }
}

/// Restricts both players to the pure shift strategies `X^s`, s ∈ [0, n).
/// For qubits these are the identity and the bit flip.
pub fn classical_reduction(game: &QuantumGame) -> Result<ClassicalBimatrix> {
    if game.n1 != game.n2 {
        return Err(Error::UnsupportedDimension(game.n2));
    }
    let n = game.n1;
    let shifts: Vec<KrausChannel> = (0..n)
        .map(|s| KrausChannel::unitary(ComplexMatrix::cyclic_shift(n, s)))
        .collect::<Result<_>>()?;
    let mut entries = Vec::with_capacity(n * n);
    for a in &shifts {
        for b in &shifts {
            entries.push((
                payoff_direct(game, a, b, Player::I)?,
                payoff_direct(game, a, b, Player::II)?,
            ));
        }
    }
    ClassicalBimatrix::new(n, n, entries)
}
