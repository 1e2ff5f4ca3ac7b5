use crate::error::{Error, Result};
use crate::linalg::{tol, ComplexMatrix};

use super::DensityMatrix;

/// A physical operation given by Kraus operators with `Σ_k E_k† E_k = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    dim: usize,
    operators: Vec<ComplexMatrix>,
}

fn completeness_residual(ops: &[ComplexMatrix], dim: usize) -> f64 {
    let mut sum = ComplexMatrix::zeros(dim);
    for e in ops {
        sum = &sum + &(&e.adjoint() * e);
    }
    sum.max_abs_diff(&ComplexMatrix::identity(dim))
}

pub fn validate_kraus(ops: Vec<ComplexMatrix>, tol: f64) -> Result<KrausChannel> {
    let Some(first) = ops.first() else {
        return Err(Error::InvalidArgument("a channel needs at least one Kraus operator".into()));
    };
    let dim = first.dim();
    if let Some(bad) = ops.iter().find(|e| e.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.dim(),
        });
    }
    let residual = completeness_residual(&ops, dim);
    if residual > tol {
        return Err(Error::CompletenessViolation { residual });
    }
    Ok(KrausChannel { dim, operators: ops })
}

impl KrausChannel {
    pub fn new(ops: Vec<ComplexMatrix>) -> Result<Self> {
        validate_kraus(ops, tol::VALIDATION)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            operators: vec![ComplexMatrix::identity(dim)],
        }
    }

    /// The single-operator channel `{U}`; fails unless `U` is unitary.
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    pub fn bit_flip() -> Self {
        Self {
            dim: 2,
            operators: vec![ComplexMatrix::pauli_x()],
        }
    }

    /// `{n_[00], n_[01], …}` style reset to |k⟩: operators `n_[kj]` for every j.
    pub fn reset(dim: usize, k: usize) -> Self {
        Self {
            dim,
            operators: (0..dim).map(|j| ComplexMatrix::matrix_unit(dim, k, j)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    /// `{E_k ⊗ F_l}` acting on the joint system.
    pub fn tensor(&self, other: &KrausChannel) -> KrausChannel {
        let operators = self
            .operators
            .iter()
            .flat_map(|e| other.operators.iter().map(move |f| e.kron(f)))
            .collect();
        KrausChannel {
            dim: self.dim * other.dim,
            operators,
        }
    }

    /// `Σ_k E_k ρ E_k†` on a bare matrix, without validation.
    pub(crate) fn act(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(rho.dim());
        for e in &self.operators {
            out = &out + &(&(e * rho) * &e.adjoint());
        }
        out
    }
}

pub fn apply_channel(ch: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if ch.dim != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: ch.dim,
            found: rho.dim(),
        });
    }
    DensityMatrix::from_computed(ch.act(rho.matrix()))
}

/// Applies `ch_a ⊗ ch_b` to a bipartite state of dimension `dim(a)·dim(b)`.
pub fn apply_product_channel(
    ch_a: &KrausChannel,
    ch_b: &KrausChannel,
    rho: &DensityMatrix,
) -> Result<DensityMatrix> {
    let joint = ch_a.dim * ch_b.dim;
    if joint != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: joint,
            found: rho.dim(),
        });
    }
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(joint);
    for e in &ch_a.operators {
        for f in &ch_b.operators {
            let ef = e.kron(f);
            out = &out + &(&(&ef * m) * &ef.adjoint());
        }
    }
    DensityMatrix::from_computed(out)
}
