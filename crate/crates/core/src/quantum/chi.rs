use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen_with_tol, tol, ComplexMatrix, ONE};

use super::{DensityMatrix, KrausChannel};

/// A strategy in χ form over the matrix-unit basis.
///
/// `matrix` has dimension n² with rows and columns labelled by α = (i, j) ↦
/// `i·n + j`. Membership conditions:
/// * Hermitian and positive semidefinite;
/// * `Σ_i χ_{(i,j)(i,l)} = δ_{jl}` (trace preservation; this is the partial
///   trace over the first label index).
#[derive(Debug, Clone, PartialEq)]
pub struct ChiMatrix {
    n: usize,
    matrix: ComplexMatrix,
}

/// Checks the χ conditions in order: Hermiticity, trace preservation, 2×2
/// principal minors, positivity. Returns the first violation.
pub fn validate_chi(m: ComplexMatrix, n: usize, tol: f64) -> Result<ChiMatrix> {
    if m.dim() != n * n {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            found: m.dim(),
        });
    }
    let residual = m.hermiticity_residual();
    if residual > tol {
        return Err(Error::NotHermitian { residual });
    }
    let m = m.hermitian_part();

    let reduced = m.partial_trace_first(n);
    for j in 0..n {
        for l in 0..n {
            let target = if j == l { ONE } else { Complex64::new(0.0, 0.0) };
            let residual = (reduced[(j, l)] - target).norm();
            if residual > tol {
                return Err(Error::TraceConditionViolation { j, l, residual });
            }
        }
    }

    let d = n * n;
    for alpha in 0..d {
        for beta in alpha + 1..d {
            let deficit = m[(alpha, beta)].norm_sqr() - m[(alpha, alpha)].re * m[(beta, beta)].re;
            if deficit > tol {
                return Err(Error::MinorConditionViolation { alpha, beta, deficit });
            }
        }
    }

    let eig = hermitian_eigen_with_tol(&m, f64::INFINITY)?;
    let min = *eig.values.last().expect("nonempty");
    if min < -tol {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    Ok(ChiMatrix { n, matrix: m })
}

/// `χ_{αβ} = Σ_k e_{kα} conj(e_{kβ})` with `e_{k,(i,j)} = (E_k)_{ij}`.
pub fn kraus_to_chi(ch: &KrausChannel) -> ChiMatrix {
    let n = ch.dim();
    let d = n * n;
    let mut chi = ComplexMatrix::zeros(d);
    for e in ch.operators() {
        let coeffs = e.as_slice();
        for a in 0..d {
            if coeffs[a].norm_sqr() == 0.0 {
                continue;
            }
            for b in 0..d {
                chi[(a, b)] += coeffs[a] * coeffs[b].conj();
            }
        }
    }
    ChiMatrix {
        n,
        matrix: chi.hermitian_part(),
    }
}

/// Minimal-rank Kraus set `E_k = √λ_k · unflatten(v_k)` from the eigenpairs of χ.
pub fn chi_to_kraus(chi: &ChiMatrix) -> Result<KrausChannel> {
    let n = chi.n;
    let eig = hermitian_eigen_with_tol(&chi.matrix, f64::INFINITY)?;
    let ops: Vec<ComplexMatrix> = eig
        .values
        .iter()
        .enumerate()
        .take_while(|(_, &lambda)| lambda > tol::RANK)
        .map(|(k, &lambda)| {
            let v = eig.vector(k);
            let s = lambda.sqrt();
            ComplexMatrix::from_fn(n, |i, j| v[i * n + j] * s)
        })
        .collect();
    KrausChannel::new(ops).map_err(|e| Error::NotInOmega(Box::new(e)))
}

/// `Σ_{αβ} χ_{αβ} Ẽ_α ρ Ẽ_β†`; with matrix units this is
/// `out_{ac} = Σ_{b,d} χ_{(a,b)(c,d)} ρ_{bd}`.
pub fn apply_chi(chi: &ChiMatrix, rho: &DensityMatrix) -> Result<DensityMatrix> {
    let n = chi.n;
    if rho.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rho.dim(),
        });
    }
    let r = rho.matrix();
    let out = ComplexMatrix::from_fn(n, |a, c| {
        let mut acc = Complex64::new(0.0, 0.0);
        for b in 0..n {
            for d in 0..n {
                acc += chi.matrix[(a * n + b, c * n + d)] * r[(b, d)];
            }
        }
        acc
    });
    DensityMatrix::from_computed(out)
}

impl ChiMatrix {
    pub fn new(m: ComplexMatrix, n: usize) -> Result<Self> {
        validate_chi(m, n, tol::VALIDATION)
    }

    pub fn identity(n: usize) -> Self {
        kraus_to_chi(&KrausChannel::identity(n))
    }

    pub fn bit_flip() -> Self {
        kraus_to_chi(&KrausChannel::bit_flip())
    }

    /// χ of the channel `{U}`. The global phase of `U` drops out.
    pub fn from_unitary(u: ComplexMatrix) -> Result<Self> {
        Ok(kraus_to_chi(&KrausChannel::unitary(u)?))
    }

    /// χ = I/n, the channel sending every state to the maximally mixed state.
    pub fn maximally_mixing(n: usize) -> Self {
        ChiMatrix {
            n,
            matrix: ComplexMatrix::identity(n * n).scale_real(1.0 / n as f64),
        }
    }

    /// `t·self + (1 − t)·other`.
    pub fn mix(&self, other: &ChiMatrix, t: f64) -> Result<ChiMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidArgument(format!("mixing weight {t} outside [0, 1]")));
        }
        Ok(ChiMatrix {
            n: self.n,
            matrix: &self.matrix.scale_real(t) + &other.matrix.scale_real(1.0 - t),
        })
    }

    /// Underlying operator dimension n (χ itself is n² × n²).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// χ at basis labels α = (i, j), β = (k, l).
    pub fn at(&self, (i, j): (usize, usize), (k, l): (usize, usize)) -> Complex64 {
        let n = self.n;
        self.matrix[(i * n + j, k * n + l)]
    }

    /// Wraps a matrix without checking it, so tests can build invalid strategies.
    #[cfg(test)]
    pub(crate) fn from_trusted(matrix: ComplexMatrix, n: usize) -> Self {
        ChiMatrix { n, matrix }
    }
}
