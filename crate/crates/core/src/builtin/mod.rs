//! The quantized prisoner's dilemma of Eisert, Wilkens and Lewenstein, with its
//! reference payoff tensors and equilibrium strategies.

mod fixture;

use num_complex::Complex64;

use crate::error::Result;
use crate::game::{Player, QuantumGame};
use crate::linalg::{tol, ComplexMatrix, I, ONE, ZERO};
use crate::quantum::{validate_chi, ChiMatrix, DensityMatrix, Povm};

pub use fixture::{parse_fixture, render_fixture, Erratum, TensorFixture};

const EWL_A1: &str = include_str!("../../data/ewl_payoff_a1.txt");
const EWL_A2: &str = include_str!("../../data/ewl_payoff_a2.txt");

#[derive(Debug, Clone)]
pub struct NamedGame {
    pub name: String,
    pub game: QuantumGame,
    pub strategies: Vec<(String, ChiMatrix)>,
}

impl NamedGame {
    pub fn strategy(&self, label: &str) -> Option<&ChiMatrix> {
        self.strategies.iter().find(|(l, _)| l == label).map(|(_, c)| c)
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// ρ = |ψ⟩⟨ψ| with |ψ⟩ = (|00⟩ + i|11⟩)/√2 (0-based entries (0,0), (3,3) = 1/2,
/// (0,3) = −i/2, (3,0) = i/2).
pub fn ewl_initial_state() -> DensityMatrix {
    let mut rho = ComplexMatrix::zeros(4);
    rho[(0, 0)] = c(0.5, 0.0);
    rho[(3, 3)] = c(0.5, 0.0);
    rho[(0, 3)] = c(0.0, -0.5);
    rho[(3, 0)] = c(0.0, 0.5);
    DensityMatrix::new(rho).expect("EWL state is a pure state")
}

/// Payoff operator: diagonal (2, 5/2, 5/2, 2), corners ∓i, inner block ±5i/2
/// with the sign of the inner block set by the player.
pub fn ewl_payoff_operator(player: Player) -> ComplexMatrix {
    let sign = match player {
        Player::I => 1.0,
        Player::II => -1.0,
    };
    let mut r = ComplexMatrix::diag_real(&[2.0, 2.5, 2.5, 2.0]);
    r[(0, 3)] = -I;
    r[(3, 0)] = I;
    r[(1, 2)] = c(0.0, 2.5 * sign);
    r[(2, 1)] = c(0.0, -2.5 * sign);
    r
}

/// The referee's measurement: projectors onto the four maximally entangled
/// states `(|00⟩ ± i|11⟩)/√2`, `(|01⟩ ∓ i|10⟩)/√2`, paying (3,3), (1,1), (5,0), (0,5).
pub fn ewl_measurement() -> (Povm, Vec<f64>, Vec<f64>) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let states = [
        [ONE * s, ZERO, ZERO, I * s],
        [ONE * s, ZERO, ZERO, -I * s],
        [ZERO, ONE * s, -I * s, ZERO],
        [ZERO, ONE * s, I * s, ZERO],
    ];
    let elements = states.iter().map(|v| ComplexMatrix::outer(v, v)).collect();
    let povm = Povm::new(elements).expect("orthonormal basis projectors");
    (povm, vec![3.0, 1.0, 5.0, 0.0], vec![3.0, 1.0, 0.0, 5.0])
}

pub fn ewl_prisoners_dilemma() -> NamedGame {
    let game = QuantumGame::new(
        ewl_initial_state(),
        ewl_payoff_operator(Player::I),
        ewl_payoff_operator(Player::II),
        2,
        2,
    )
    .expect("EWL operators are Hermitian");
    let (chi_star, xi_star) = ewl_equilibrium_strategies();
    NamedGame {
        name: "ewl".into(),
        game,
        strategies: vec![
            ("identity".into(), ChiMatrix::identity(2)),
            ("bit-flip".into(), ChiMatrix::bit_flip()),
            ("chi-star".into(), chi_star),
            ("xi-star".into(), xi_star),
        ],
    }
}

/// χ* with χ*_{(00)(00)} = χ*_{(01)(01)} = 1 and ξ* with ξ*_{(10)(10)} =
/// ξ*_{(11)(11)} = 1, all other entries zero.
pub fn ewl_equilibrium_strategies() -> (ChiMatrix, ChiMatrix) {
    let build = |labels: [usize; 2]| {
        let mut m = ComplexMatrix::zeros(4);
        for l in labels {
            m[(l, l)] = ONE;
        }
        validate_chi(m, 2, tol::VALIDATION).expect("equilibrium strategies are physical")
    };
    (build([0b00, 0b01]), build([0b10, 0b11]))
}

/// The hand-transcribed reference tensors `(A^I, A^II)` shipped with the crate.
pub fn ewl_reference_tensors() -> Result<(TensorFixture, TensorFixture)> {
    Ok((parse_fixture(EWL_A1, Player::I)?, parse_fixture(EWL_A2, Player::II)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{classical_reduction, payoff_contract, payoff_tensor_general, payoff_tensor_matrix_unit};
    use crate::quantum::{kraus_to_chi, KrausChannel};

    #[test]
    fn initial_state_is_pure() {
        let spec = ewl_initial_state().spectrum();
        assert!((spec[0] - 1.0).abs() < 1e-12 && spec[1..].iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn cooperative_payoff_from_operators() {
        let rho = ewl_initial_state();
        assert!((rho.expectation(&ewl_payoff_operator(Player::I)) - c(3.0, 0.0)).norm() < 1e-15);
        assert!((rho.expectation(&ewl_payoff_operator(Player::II)) - c(3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn measurement_reproduces_payoff_operators() {
        let (povm, a1, a2) = ewl_measurement();
        let g = QuantumGame::from_measurement(ewl_initial_state(), &povm, &a1, &a2, 2, 2).unwrap();
        assert!(g.payoff_operator(Player::I).max_abs_diff(&ewl_payoff_operator(Player::I)) < 1e-12);
        assert!(g.payoff_operator(Player::II).max_abs_diff(&ewl_payoff_operator(Player::II)) < 1e-12);
    }

    #[test]
    fn equilibrium_strategies_match_reset_channels() {
        let (chi, xi) = ewl_equilibrium_strategies();
        assert_eq!(chi, kraus_to_chi(&KrausChannel::reset(2, 0)));
        assert_eq!(xi, kraus_to_chi(&KrausChannel::reset(2, 1)));
        let named = ewl_prisoners_dilemma();
        for p in [Player::I, Player::II] {
            let a = payoff_tensor_matrix_unit(&named.game, p);
            assert!((payoff_contract(&a, &chi, &xi).unwrap() - 2.5).abs() < 1e-10);
        }
        assert!(named.strategy("chi-star").is_some());
        assert!(named.strategy("nope").is_none());
    }

    #[test]
    fn fixture_spot_values() {
        let (a1, a2) = ewl_reference_tensors().unwrap();
        let row1: Vec<Complex64> = (0..16).map(|col| a1.transcribed.grid(0, col)).collect();
        let mut want = vec![c(0.0, 0.0); 16];
        want[0] = c(1.0, 0.0);
        want[10] = c(1.25, 0.0);
        assert_eq!(row1, want);
        assert_eq!(a2.transcribed.grid(11, 11), c(0.0, -1.0));
        assert_eq!(a1.transcribed.grid(11, 11), c(-1.0, 0.0));
        assert!(a2.errata.is_empty());
        assert_eq!(a1.errata.len(), 2);
    }

    #[test]
    fn errata_are_forced_by_the_transcription_itself() {
        // Each corrected value is the conjugate of its pairing partner as transcribed,
        // and the transcribed value is not.
        let (a1, _) = ewl_reference_tensors().unwrap();
        let t = &a1.transcribed;
        for e in &a1.errata {
            let bits = |x: usize| [(x >> 3) & 1, (x >> 2) & 1, (x >> 1) & 1, x & 1];
            let [a, b, cc, d] = bits(e.row);
            let [i, j, k, l] = bits(e.col);
            let partner = t.grid(cc * 8 + d * 4 + a * 2 + b, k * 8 + l * 4 + i * 2 + j);
            assert_eq!(e.value, partner.conj());
            assert_ne!(t.grid(e.row, e.col), partner.conj());
        }
        assert!(t.hermiticity_pairing_residual() > 1.0);
        assert_eq!(a1.corrected().hermiticity_pairing_residual(), 0.0);
    }

    #[test]
    fn computed_tensors_match_reference() {
        let game = ewl_prisoners_dilemma().game;
        let (a1, a2) = ewl_reference_tensors().unwrap();
        for (p, fx) in [(Player::I, &a1), (Player::II, &a2)] {
            let general = payoff_tensor_general(&game, p);
            assert!(general.max_abs_diff(&fx.corrected()) <= 1e-12);
        }
    }

    #[test]
    fn classical_table() {
        let table = classical_reduction(&ewl_prisoners_dilemma().game).unwrap();
        assert_eq!(table.get(0, 0), (3.0, 3.0));
        assert_eq!(table.get(1, 1), (1.0, 1.0));
    }
}
