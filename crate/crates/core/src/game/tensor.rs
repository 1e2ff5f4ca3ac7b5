use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::quantum::ChiMatrix;

use super::{check_real, Player, QuantumGame};

/// Rank-4 payoff tensor `A_{αβγδ}`.
///
/// α, β ∈ [0, n1²) label player I's matrix-unit basis, γ, δ ∈ [0, n2²) player
/// II's. Storage is the flattened grid with row `α·n1² + β` and column
/// `γ·n2² + δ`. For qubits this is the 16×16 layout where row r (0-based)
/// spells the four label bits (a b c d) of α = (a, b), β = (c, d) in binary.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffTensor {
    player: Player,
    n1: usize,
    n2: usize,
    data: Vec<Complex64>,
}

impl PayoffTensor {
    /// Wraps a flattened grid of `(n1²·n1²) × (n2²·n2²)` entries.
    pub fn from_flat(player: Player, n1: usize, n2: usize, data: Vec<Complex64>) -> Result<Self> {
        let expected = n1.pow(4) * n2.pow(4);
        if data.len() != expected {
            return Err(Error::Shape {
                expected,
                found: data.len(),
            });
        }
        Ok(Self { player, n1, n2, data })
    }

    fn from_fn(
        player: Player,
        n1: usize,
        n2: usize,
        mut f: impl FnMut(usize, usize, usize, usize) -> Complex64,
    ) -> Self {
        let (d1, d2) = (n1 * n1, n2 * n2);
        let mut data = Vec::with_capacity(d1 * d1 * d2 * d2);
        for alpha in 0..d1 {
            for beta in 0..d1 {
                for gamma in 0..d2 {
                    for delta in 0..d2 {
                        data.push(f(alpha, beta, gamma, delta));
                    }
                }
            }
        }
        Self { player, n1, n2, data }
    }

    pub fn player(&self) -> Player {
        self.player
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    /// Rows of the flattened grid, `n1⁴`.
    pub fn grid_rows(&self) -> usize {
        self.n1.pow(4)
    }

    /// Columns of the flattened grid, `n2⁴`.
    pub fn grid_cols(&self) -> usize {
        self.n2.pow(4)
    }

    #[inline]
    pub fn get(&self, alpha: usize, beta: usize, gamma: usize, delta: usize) -> Complex64 {
        let (d1, d2) = (self.n1 * self.n1, self.n2 * self.n2);
        self.data[(alpha * d1 + beta) * d2 * d2 + gamma * d2 + delta]
    }

    #[inline]
    pub fn grid(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.grid_cols() + col]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    /// Max |A_{αβγδ} − conj(A_{βαδγ})|; zero for any tensor built from a
    /// Hermitian payoff operator and a density matrix.
    pub fn hermiticity_pairing_residual(&self) -> f64 {
        let (d1, d2) = (self.n1 * self.n1, self.n2 * self.n2);
        let mut worst = 0.0f64;
        for a in 0..d1 {
            for b in 0..d1 {
                for g in 0..d2 {
                    for d in 0..d2 {
                        worst = worst.max((self.get(a, b, g, d) - self.get(b, a, d, g).conj()).norm());
                    }
                }
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &PayoffTensor) -> f64 {
        assert_eq!((self.n1, self.n2), (other.n1, other.n2), "tensor shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Literal evaluation of `A_{αβγδ} = tr[R (Ẽ_α ⊗ Ẽ_γ) ρ (Ẽ_β† ⊗ Ẽ_δ†)]` over
/// the matrix-unit basis.
pub fn payoff_tensor_general(game: &QuantumGame, player: Player) -> PayoffTensor {
    let (n1, n2) = (game.n1(), game.n2());
    let (d1, d2) = (n1 * n1, n2 * n2);
    let r = game.payoff_operator(player);
    let rho = game.rho().matrix();
    let unit = |n: usize, label: usize| ComplexMatrix::matrix_unit(n, label / n, label % n);

    // R (Ẽ_α ⊗ Ẽ_γ), indexed [α·d2 + γ]
    let left: Vec<ComplexMatrix> = (0..d1)
        .flat_map(|a| (0..d2).map(move |g| (a, g)))
        .map(|(a, g)| r * &unit(n1, a).kron(&unit(n2, g)))
        .collect();
    // ρ (Ẽ_β† ⊗ Ẽ_δ†), indexed [β·d2 + δ]
    let right: Vec<ComplexMatrix> = (0..d1)
        .flat_map(|b| (0..d2).map(move |d| (b, d)))
        .map(|(b, d)| rho * &unit(n1, b).adjoint().kron(&unit(n2, d).adjoint()))
        .collect();

    PayoffTensor::from_fn(player, n1, n2, |a, b, g, d| {
        left[a * d2 + g].trace_product(&right[b * d2 + d])
    })
}

/// Closed form over matrix units: with α = (a, b), β = (c, d), γ = (i, j),
/// δ = (k, l), `A = R[c·n2 + k, a·n2 + i] · ρ[b·n2 + j, d·n2 + l]`.
pub fn payoff_tensor_matrix_unit(game: &QuantumGame, player: Player) -> PayoffTensor {
    let (n1, n2) = (game.n1(), game.n2());
    let r = game.payoff_operator(player);
    let rho = game.rho().matrix();
    PayoffTensor::from_fn(player, n1, n2, |alpha, beta, gamma, delta| {
        let (a, b) = (alpha / n1, alpha % n1);
        let (c, d) = (beta / n1, beta % n1);
        let (i, j) = (gamma / n2, gamma % n2);
        let (k, l) = (delta / n2, delta % n2);
        r[(c * n2 + k, a * n2 + i)] * rho[(b * n2 + j, d * n2 + l)]
    })
}

/// `Σ χ_{αβ} ξ_{γδ} A_{αβγδ}`. A non-negligible imaginary part means the
/// tensor or a strategy is corrupt and is reported as an error.
pub fn payoff_contract(a: &PayoffTensor, chi: &ChiMatrix, xi: &ChiMatrix) -> Result<f64> {
    if chi.n() != a.n1 {
        return Err(Error::DimensionMismatch {
            expected: a.n1,
            found: chi.n(),
        });
    }
    if xi.n() != a.n2 {
        return Err(Error::DimensionMismatch {
            expected: a.n2,
            found: xi.n(),
        });
    }
    let (d1, d2) = (a.n1 * a.n1, a.n2 * a.n2);
    let (chi, xi) = (chi.matrix(), xi.matrix());
    let mut total = Complex64::new(0.0, 0.0);
    for alpha in 0..d1 {
        for beta in 0..d1 {
            let c = chi[(alpha, beta)];
            if c.norm_sqr() == 0.0 {
                continue;
            }
            let block = &a.data[(alpha * d1 + beta) * d2 * d2..][..d2 * d2];
            let inner: Complex64 = block.iter().zip(xi.as_slice()).map(|(t, x)| t * x).sum();
            total += c * inner;
        }
    }
    check_real(total.re, total.im)
}
