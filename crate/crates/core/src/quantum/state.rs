use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, hermitian_eigen_with_tol, tol, ComplexMatrix};

/// A validated quantum state: Hermitian, unit trace, positive.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

/// Checks Hermiticity, then trace, then positivity, reporting the first failure
/// with its measured residual.
pub fn validate_density(m: ComplexMatrix, tol: f64) -> Result<DensityMatrix> {
    let residual = m.hermiticity_residual();
    if residual > tol {
        return Err(Error::NotHermitian { residual });
    }
    let m = m.hermitian_part();
    let trace = m.trace().re;
    if (trace - 1.0).abs() > tol {
        return Err(Error::TraceNotOne {
            trace,
            residual: (trace - 1.0).abs(),
        });
    }
    let eig = hermitian_eigen_with_tol(&m, f64::INFINITY)?;
    let min = *eig.values.last().expect("nonempty");
    if min < -tol {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    Ok(DensityMatrix { matrix: m })
}

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        validate_density(m, tol::VALIDATION)
    }

    /// Hermitizes and validates at the looser tolerance used for computed states.
    pub(crate) fn from_computed(m: ComplexMatrix) -> Result<Self> {
        validate_density(m.hermitian_part(), tol::DERIVED)
    }

    /// |ψ⟩⟨ψ| for a normalized copy of `psi`.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm = psi.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidArgument("state vector has zero norm".into()));
        }
        let v: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::outer(&v, &v))
    }

    /// Computational basis state |k⟩⟨k|.
    pub fn basis(dim: usize, k: usize) -> Self {
        Self {
            matrix: ComplexMatrix::matrix_unit(dim, k, k),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Eigenvalues, descending.
    pub fn spectrum(&self) -> Vec<f64> {
        hermitian_eigen(&self.matrix)
            .expect("density matrices are Hermitian")
            .values
    }

    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).re
    }

    /// `tr(op · ρ)`.
    pub fn expectation(&self, op: &ComplexMatrix) -> Complex64 {
        op.trace_product(&self.matrix)
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            matrix: self.matrix.kron(&other.matrix),
        }
    }
}
