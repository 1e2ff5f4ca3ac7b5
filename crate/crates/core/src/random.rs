//! Random states, channels, measurements and games for testing and benchmarks.
//!
//! All draws come from complex Gaussian (Ginibre) matrices, so the
//! distributions have full support and no preferred basis.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::game::QuantumGame;
use crate::linalg::{hermitian_eigen, ComplexMatrix};
use crate::quantum::{kraus_to_chi, ChiMatrix, DensityMatrix, KrausChannel, Povm};

pub fn ginibre<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

pub fn random_hermitian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    ginibre(dim, rng).hermitian_part()
}

/// `W W† / tr(W W†)` for Ginibre `W`: full rank almost surely.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let w = ginibre(dim, rng);
    let m = &w * &w.adjoint();
    let t = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / t).hermitian_part()).expect("Wishart draw is a state")
}

/// `M^{-1/2}` for a positive definite `M`.
fn inverse_sqrt(m: &ComplexMatrix) -> ComplexMatrix {
    hermitian_eigen(&m.hermitian_part())
        .expect("Hermitian input")
        .reconstruct_with(|x| 1.0 / x.sqrt())
}

/// `kraus` Gaussian operators `G_k`, normalized to `G_k S^{-1/2}` with `S = Σ G_k† G_k`.
pub fn random_channel<R: Rng + ?Sized>(dim: usize, kraus: usize, rng: &mut R) -> KrausChannel {
    assert!(kraus > 0, "a channel needs at least one Kraus operator");
    let gs: Vec<ComplexMatrix> = (0..kraus).map(|_| ginibre(dim, rng)).collect();
    let mut s = ComplexMatrix::zeros(dim);
    for g in &gs {
        s = &s + &(&g.adjoint() * g);
    }
    let norm = inverse_sqrt(&s);
    KrausChannel::new(gs.iter().map(|g| g * &norm).collect()).expect("normalized operators are complete")
}

/// A Haar-distributed unitary, via the single-operator case of [`random_channel`].
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    random_channel(dim, 1, rng).operators()[0].clone()
}

pub fn random_chi<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ChiMatrix {
    let kraus = rng.random_range(1..=n * n);
    kraus_to_chi(&random_channel(n, kraus, rng))
}

/// `outcomes` measurement operators `M_k = W_k† S^{-1/2}` with `S = Σ W_k W_k†`,
/// so the effects `M_k† M_k` sum to the identity.
pub fn random_povm<R: Rng + ?Sized>(dim: usize, outcomes: usize, rng: &mut R) -> Povm {
    assert!(outcomes > 0, "a measurement needs at least one outcome");
    let ws: Vec<ComplexMatrix> = (0..outcomes).map(|_| ginibre(dim, rng)).collect();
    let mut s = ComplexMatrix::zeros(dim);
    for w in &ws {
        s = &s + &(w * &w.adjoint());
    }
    let norm = inverse_sqrt(&s);
    Povm::new(ws.iter().map(|w| &w.adjoint() * &norm).collect()).expect("normalized operators are complete")
}

/// A game with random state and arbitrary Hermitian payoff operators.
pub fn random_game<R: Rng + ?Sized>(n1: usize, n2: usize, rng: &mut R) -> QuantumGame {
    let d = n1 * n2;
    QuantumGame::new(
        random_density(d, rng),
        random_hermitian(d, rng),
        random_hermitian(d, rng),
        n1,
        n2,
    )
    .expect("dimensions agree")
}

/// A game whose referee measures a random POVM and pays amounts drawn
/// uniformly from `[0, max_payoff]`. Returns the payoff vectors too.
pub fn random_measurement_game<R: Rng + ?Sized>(
    n1: usize,
    n2: usize,
    outcomes: usize,
    max_payoff: f64,
    rng: &mut R,
) -> (QuantumGame, Povm, Vec<f64>, Vec<f64>) {
    let d = n1 * n2;
    let povm = random_povm(d, outcomes, rng);
    let mut draw = || (0..outcomes).map(|_| rng.random_range(0.0..=max_payoff)).collect::<Vec<f64>>();
    let (a1, a2) = (draw(), draw());
    let rho = random_density(d, rng);
    let game = QuantumGame::from_measurement(rho, &povm, &a1, &a2, n1, n2).expect("consistent inputs");
    (game, povm, a1, a2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::is_psd;
    use crate::quantum::validate_chi;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn draws_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=4 {
            let rho = random_density(n, &mut rng);
            assert!(rho.spectrum().iter().all(|&x| x > 0.0));
            let ch = random_channel(n, 3, &mut rng);
            assert_eq!(ch.operators().len(), 3);
            validate_chi(random_chi(n, &mut rng).into_matrix(), n, 1e-10).unwrap();
            let u = random_unitary(n, &mut rng);
            assert!((&u * &u.adjoint()).max_abs_diff(&ComplexMatrix::identity(n)) < 1e-10);
            let p = random_povm(n, 5, &mut rng);
            assert!(p.effects().iter().all(|e| is_psd(e, 1e-12).unwrap()));
        }
    }

    #[test]
    fn seeded_draws_repeat() {
        let a = random_game(2, 3, &mut ChaCha8Rng::seed_from_u64(9));
        let b = random_game(2, 3, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a.rho(), b.rho());
    }

    #[test]
    fn measurement_game_payoffs_are_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (game, _, a1, _) = random_measurement_game(2, 2, 4, 5.0, &mut rng);
        assert!(a1.iter().all(|x| (0.0..=5.0).contains(x)));
        let r = game.payoff_operator(crate::game::Player::I);
        let eig = hermitian_eigen(r).unwrap();
        assert!(eig.values[0] <= 5.0 + 1e-12 && eig.values[3] >= -1e-12);
    }
}
