use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{tol, ComplexMatrix};

use super::DensityMatrix;

/// A measurement `{M_k}` with `Σ_k M_k† M_k = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    dim: usize,
    elements: Vec<ComplexMatrix>,
    effects: Vec<ComplexMatrix>,
}

pub fn validate_povm(elements: Vec<ComplexMatrix>, tol: f64) -> Result<Povm> {
    let Some(first) = elements.first() else {
        return Err(Error::InvalidArgument("a measurement needs at least one outcome".into()));
    };
    let dim = first.dim();
    if let Some(bad) = elements.iter().find(|m| m.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.dim(),
        });
    }
    let effects: Vec<ComplexMatrix> = elements.iter().map(|m| &m.adjoint() * m).collect();
    let mut sum = ComplexMatrix::zeros(dim);
    for e in &effects {
        sum = &sum + e;
    }
    let residual = sum.max_abs_diff(&ComplexMatrix::identity(dim));
    if residual > tol {
        return Err(Error::CompletenessViolation { residual });
    }
    Ok(Povm {
        dim,
        elements,
        effects,
    })
}

impl Povm {
    pub fn new(elements: Vec<ComplexMatrix>) -> Result<Self> {
        validate_povm(elements, tol::VALIDATION)
    }

    /// Projective measurement in the computational basis.
    pub fn computational(dim: usize) -> Self {
        let elements = (0..dim).map(|k| ComplexMatrix::matrix_unit(dim, k, k)).collect();
        validate_povm(elements, tol::VALIDATION).expect("basis projectors are complete")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn outcomes(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    /// `M_k† M_k` for every outcome.
    pub fn effects(&self) -> &[ComplexMatrix] {
        &self.effects
    }
}

/// Outcome probabilities `tr(M_k† M_k ρ)`. Rounding noise below zero is clipped.
pub fn measure_probs(povm: &Povm, rho: &DensityMatrix) -> Result<Vec<f64>> {
    if povm.dim != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: povm.dim,
            found: rho.dim(),
        });
    }
    Ok(povm
        .effects
        .iter()
        .map(|e| e.trace_product(rho.matrix()).re.max(0.0))
        .collect())
}

/// Inverse-CDF draw from an unnormalized probability vector.
pub fn sample_index<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let total: f64 = probs.iter().sum();
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for (k, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return k;
        }
    }
    // u landed on the upper edge through rounding: last outcome with mass
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

/// Draws one outcome with probability `measure_probs[k]`. Deterministic for a
/// given generator state.
pub fn sample_outcome<R: Rng + ?Sized>(povm: &Povm, rho: &DensityMatrix, rng: &mut R) -> Result<usize> {
    let probs = measure_probs(povm, rho)?;
    Ok(sample_index(&probs, rng))
}
