use num_complex::Complex64;

use super::{tol, ComplexMatrix, ZERO};
use crate::error::{Error, Result};

/// Eigenpairs of a Hermitian matrix, eigenvalues descending.
///
/// Column `k` of `vectors` is the eigenvector for `values[k]`. Order within a
/// cluster of equal eigenvalues is unspecified.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }

    /// `V · diag(f(λ)) · V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let v = &self.vectors;
        let weights: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .filter(|&k| weights[k] != 0.0)
                .map(|k| v[(i, k)] * v[(j, k)].conj() * weights[k])
                .sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|x| x)
    }
}

pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    hermitian_eigen_with_tol(m, tol::HERMITIAN)
}

/// Cyclic complex Jacobi diagonalization.
///
/// Each rotation first removes the phase of the pivot `a_pq` and then applies
/// a real plane rotation that annihilates it.
pub fn hermitian_eigen_with_tol(m: &ComplexMatrix, herm_tol: f64) -> Result<HermitianEigen> {
    let residual = m.hermiticity_residual();
    if residual > herm_tol {
        return Err(Error::NotHermitian { residual });
    }
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);

    let scale = a.frobenius_norm();
    let mut converged = n == 1 || scale == 0.0;
    let mut sweep = 0;
    while !converged {
        if sweep == tol::MAX_SWEEPS {
            return Err(Error::EigenNoConvergence { sweeps: sweep });
        }
        sweep += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        converged = off <= f64::EPSILON * scale;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(y, y)].re.total_cmp(&a[(x, x)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Skip pivots already negligible against both diagonal entries.
    if r < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[(p, q)] = ZERO;
        a[(q, p)] = ZERO;
        return;
    }
    let phase = apq / r;
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // J = diag(1, e^{-iφ}) on (p, q), followed by the real rotation [[c, s], [-s, c]].
    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    let n = a.dim();
    // A ← A J
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
    }
    // A ← J† A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
    // V ← V J
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}

pub fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    let eig = hermitian_eigen(m)?;
    Ok(*eig.values.last().expect("nonempty matrix"))
}

/// True iff the smallest eigenvalue is at least `-tol`.
pub fn is_psd(m: &ComplexMatrix, tol: f64) -> Result<bool> {
    Ok(min_eigenvalue(m)? >= -tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{I, ONE};

    fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
        // small LCG keeps this test free of rand
        let mut state = seed;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let g = ComplexMatrix::from_fn(n, |_, _| Complex64::new(next(), next()));
        g.hermitian_part()
    }

    #[test]
    fn identity_and_pauli_spectra() {
        let e = hermitian_eigen(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0]);
        let e = hermitian_eigen(&ComplexMatrix::pauli_x()).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14 && (e.values[1] + 1.0).abs() < 1e-14);
        let e = hermitian_eigen(&ComplexMatrix::pauli_y()).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14 && (e.values[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn random_reconstruction_and_unitarity() {
        for (n, seed) in [(1, 3), (2, 5), (4, 7), (8, 11), (16, 13)] {
            let m = random_hermitian(n, seed);
            let e = hermitian_eigen(&m).unwrap();
            assert!(e.reconstruct().max_abs_diff(&m) <= tol::RECONSTRUCTION);
            let vtv = &e.vectors.adjoint() * &e.vectors;
            assert!(vtv.max_abs_diff(&ComplexMatrix::identity(n)) <= tol::RECONSTRUCTION);
            assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_fn(2, |i, j| if i < j { I } else { ZERO });
        assert!(matches!(hermitian_eigen(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn psd_checks() {
        assert!(is_psd(&ComplexMatrix::identity(2).scale_real(0.5), tol::PSD).unwrap());
        assert!(!is_psd(&ComplexMatrix::diag_real(&[2.0, -1.0]), tol::PSD).unwrap());
    }

    #[test]
    fn ewl_initial_state_is_a_pure_projector() {
        let h = Complex64::new(0.5, 0.0);
        let mut rho = ComplexMatrix::zeros(4);
        rho[(0, 0)] = h;
        rho[(3, 3)] = h;
        rho[(0, 3)] = -I * 0.5;
        rho[(3, 0)] = I * 0.5;
        assert!((&rho * &rho).max_abs_diff(&rho) < 1e-15);
        assert!((rho.trace() - ONE).norm() < 1e-15);
        let e = hermitian_eigen(&rho).unwrap();
        let expected = [1.0, 0.0, 0.0, 0.0];
        for (got, want) in e.values.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!(is_psd(&rho, tol::PSD).unwrap());
    }
}
