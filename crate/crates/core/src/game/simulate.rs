use rand::Rng;

use crate::error::{Error, Result};
use crate::quantum::{apply_product_channel, measure_probs, sample_index, KrausChannel, Povm};

use super::{payoff_operator, QuantumGame};

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub rounds: usize,
    /// Empirical mean payoff for players I and II.
    pub mean: [f64; 2],
    /// Sample standard deviation over √rounds.
    pub std_error: [f64; 2],
    /// Exact expected payoffs `tr(R π)`.
    pub exact: [f64; 2],
    /// Tally of referee outcomes.
    pub counts: Vec<usize>,
}

impl SimulationReport {
    /// (mean − exact) / std_error; zero when both the error and the deviation vanish.
    pub fn z_scores(&self) -> [f64; 2] {
        std::array::from_fn(|p| {
            let dev = self.mean[p] - self.exact[p];
            if self.std_error[p] > 0.0 {
                dev / self.std_error[p]
            } else if dev.abs() <= 1e-12 {
                0.0
            } else {
                f64::INFINITY.copysign(dev)
            }
        })
    }
}

const CONSISTENCY_TOL: f64 = 1e-9;

/// Plays `rounds` independent rounds: the referee prepares ρ, the players apply
/// their channels, the referee measures and pays out per outcome.
#[allow(clippy::too_many_arguments)]
pub fn simulate_play<R: Rng + ?Sized>(
    game: &QuantumGame,
    povm: &Povm,
    payoffs_i: &[f64],
    payoffs_ii: &[f64],
    ch_a: &KrausChannel,
    ch_b: &KrausChannel,
    rounds: usize,
    rng: &mut R,
) -> Result<SimulationReport> {
    if rounds == 0 {
        return Err(Error::InvalidArgument("rounds must be positive".into()));
    }
    for (player, payoffs) in [(super::Player::I, payoffs_i), (super::Player::II, payoffs_ii)] {
        let r = payoff_operator(povm, payoffs)?;
        if r.dim() != game.payoff_operator(player).dim() {
            return Err(Error::DimensionMismatch {
                expected: game.payoff_operator(player).dim(),
                found: r.dim(),
            });
        }
        let residual = r.max_abs_diff(game.payoff_operator(player));
        if residual > CONSISTENCY_TOL {
            return Err(Error::InconsistentMeasurement {
                player: player.label(),
                residual,
            });
        }
    }

    let pi = apply_product_channel(ch_a, ch_b, game.rho())?;
    let probs = measure_probs(povm, &pi)?;
    let exact = [payoffs_i, payoffs_ii].map(|a| probs.iter().zip(a).map(|(p, a)| p * a).sum::<f64>());

    let mut counts = vec![0usize; povm.outcomes()];
    for _ in 0..rounds {
        counts[sample_index(&probs, rng)] += 1;
    }

    let n = rounds as f64;
    let stats = |a: &[f64]| {
        let mean = counts.iter().zip(a).map(|(&c, &v)| c as f64 * v).sum::<f64>() / n;
        let ss: f64 = counts
            .iter()
            .zip(a)
            .map(|(&c, &v)| c as f64 * (v - mean).powi(2))
            .sum();
        let sd = if rounds > 1 { (ss / (n - 1.0)).sqrt() } else { 0.0 };
        (mean, sd / n.sqrt())
    };
    let (m1, e1) = stats(payoffs_i);
    let (m2, e2) = stats(payoffs_ii);
    Ok(SimulationReport {
        rounds,
        mean: [m1, m2],
        std_error: [e1, e2],
        exact,
        counts,
    })
}
