//! Best response over the full strategy set.
//!
//! The problem `max tr(H χ)` over `{χ ⪰ 0, Tr₁ χ = I}` is a small semidefinite
//! program. The primal side alternates a gradient step on the linear objective
//! with projections onto the trace-preservation subspace and the PSD cone;
//! the running correction term `u` carries what each projection removed
//! (the Dykstra / ADMM increment), which is what makes the pair of
//! projections converge to the constrained maximizer rather than to an
//! arbitrary point of the intersection.
//!
//! Every reported value comes from an exactly feasible point and every bound
//! from an exactly dual-feasible `Y`, so `gap = bound − value` is a
//! certificate, not an estimate.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen_with_tol, ComplexMatrix};
use crate::quantum::{validate_chi, ChiMatrix};

use super::ResponseProblem;

/// Feasibility tolerance for solver output.
pub const FEASIBILITY_TOL: f64 = 1e-7;

const CHECK_EVERY: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub max_iters: usize,
    /// Target certified gap.
    pub tol: f64,
    /// Gradient step; `None` picks `0.5 / ‖H‖₂`.
    pub step: Option<f64>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iters: 5000,
            tol: 1e-7,
            step: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BestResponseResult {
    /// Payoff of `chi_opt`, a lower bound on the optimum.
    pub value: f64,
    pub chi_opt: ChiMatrix,
    /// Certified upper bound on the optimum.
    pub dual_bound: f64,
    /// `dual_bound − value`, clamped at zero.
    pub gap: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn psd_projection(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen_with_tol(&m.hermitian_part(), f64::INFINITY)?;
    Ok(eig.reconstruct_with(|x| x.max(0.0)))
}

/// Orthogonal projection onto `Tr₁ χ = I`: subtract `I ⊗ (Tr₁ χ − I)/n`.
fn affine_projection(m: &ComplexMatrix, n: usize) -> ComplexMatrix {
    let excess = &m.partial_trace_first(n) - &ComplexMatrix::identity(n);
    m - &ComplexMatrix::identity(n).kron(&excess.scale_real(1.0 / n as f64))
}

/// Maps a PSD matrix to an exactly trace-preserving one by the congruence
/// `(I ⊗ T^{-1/2}) z (I ⊗ T^{-1/2})` with `T = Tr₁ z`.
fn restore_feasibility(z: &ComplexMatrix, n: usize) -> Result<ComplexMatrix> {
    let mut z = z.hermitian_part();
    let mut t = z.partial_trace_first(n).hermitian_part();
    let eig = hermitian_eigen_with_tol(&t, f64::INFINITY)?;
    let floor = 1e-9;
    if *eig.values.last().expect("nonempty") < floor {
        // nudge toward the maximally mixing channel so T becomes invertible
        let eps = 1e-6;
        let mix = ComplexMatrix::identity(n * n).scale_real(eps / n as f64);
        z = &z.scale_real(1.0 - eps) + &mix;
        t = z.partial_trace_first(n).hermitian_part();
    }
    let eig = hermitian_eigen_with_tol(&t, f64::INFINITY)?;
    if *eig.values.last().expect("nonempty") <= 0.0 {
        return Err(Error::InfeasibleProjection("reduced matrix is singular".into()));
    }
    let inv_sqrt = eig.reconstruct_with(|x| 1.0 / x.sqrt());
    let k = ComplexMatrix::identity(n).kron(&inv_sqrt);
    Ok((&(&k * &z) * &k).hermitian_part())
}

/// Dual certificate from a feasible χ: `Y = Tr₁(H χ)` (exact at the optimum by
/// complementary slackness), shifted by the smallest `t` that makes
/// `I ⊗ (Y + tI) − H ⪰ 0`. The bound is `tr Y + n·t`.
pub(crate) fn dual_bound(h: &ComplexMatrix, chi: &ComplexMatrix, n: usize) -> Result<f64> {
    let y = (h * chi).partial_trace_first(n).hermitian_part();
    let slack = h - &ComplexMatrix::identity(n).kron(&y);
    let eig = hermitian_eigen_with_tol(&slack.hermitian_part(), f64::INFINITY)?;
    Ok(y.trace().re + n as f64 * eig.values[0])
}

struct Tracker {
    best_value: f64,
    best_chi: ComplexMatrix,
    best_bound: f64,
}

impl Tracker {
    fn observe(&mut self, h: &ComplexMatrix, chi: ComplexMatrix, n: usize) -> Result<()> {
        let value = h.trace_product(&chi).re;
        let bound = dual_bound(h, &chi, n)?;
        if value > self.best_value {
            self.best_value = value;
            self.best_chi = chi;
        }
        self.best_bound = self.best_bound.min(bound);
        Ok(())
    }

    fn gap(&self) -> f64 {
        (self.best_bound - self.best_value).max(0.0)
    }
}

pub fn best_response(problem: &ResponseProblem, opts: &SolverOptions) -> Result<BestResponseResult> {
    if opts.tol.is_nan() || opts.tol < 0.0 {
        return Err(Error::InvalidArgument("tolerance must be nonnegative".into()));
    }
    let n = problem.n();
    let d = n * n;
    let h = problem.objective();
    let scale = {
        let eig = hermitian_eigen_with_tol(&h, f64::INFINITY)?;
        eig.values[0].abs().max(eig.values[d - 1].abs())
    };

    let start = ChiMatrix::maximally_mixing(n).into_matrix();
    let mut tracker = Tracker {
        best_value: f64::NEG_INFINITY,
        best_chi: start.clone(),
        best_bound: f64::INFINITY,
    };
    tracker.observe(&h, start.clone(), n)?;

    let step = opts.step.unwrap_or(if scale > 0.0 { 0.5 / scale } else { 1.0 });
    let grad = h.scale_real(step);
    let mut z = start;
    let mut u = ComplexMatrix::zeros(d);
    let mut iterations = 0;
    while tracker.gap() > opts.tol && iterations < opts.max_iters {
        for _ in 0..CHECK_EVERY.min(opts.max_iters - iterations) {
            let x = affine_projection(&(&(&z - &u) + &grad), n);
            z = psd_projection(&(&x + &u))?;
            u = &u + &(&x - &z);
            iterations += 1;
        }
        tracker.observe(&h, restore_feasibility(&z, n)?, n)?;
    }

    let chi_opt = validate_chi(tracker.best_chi.clone(), n, FEASIBILITY_TOL)
        .map_err(|e| Error::InfeasibleProjection(e.to_string()))?;
    let result = BestResponseResult {
        value: tracker.best_value,
        chi_opt,
        dual_bound: tracker.best_bound,
        gap: tracker.gap(),
        iterations,
        converged: tracker.gap() <= opts.tol,
    };
    if result.converged {
        Ok(result)
    } else {
        Err(Error::NoConvergence(Box::new(result)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Player;

    #[test]
    fn affine_projection_lands_on_subspace_and_is_idempotent() {
        let n = 3;
        let m = ComplexMatrix::from_fn(9, |i, j| num_complex::Complex64::new((i * j) as f64 * 0.1, i as f64 - j as f64));
        let p = affine_projection(&m, n);
        assert!(p.partial_trace_first(n).max_abs_diff(&ComplexMatrix::identity(n)) < 1e-12);
        assert!(affine_projection(&p, n).max_abs_diff(&p) < 1e-12);
    }

    #[test]
    fn restoration_gives_valid_chi() {
        let z = ComplexMatrix::diag_real(&[0.9, 0.3, 0.2, 1.4]);
        let chi = restore_feasibility(&z, 2).unwrap();
        validate_chi(chi, 2, 1e-12).unwrap();
        // singular reduced matrix is nudged, not rejected
        let chi = restore_feasibility(&ComplexMatrix::diag_real(&[1.0, 0.0, 0.0, 0.0]), 2).unwrap();
        validate_chi(chi, 2, 1e-9).unwrap();
    }

    #[test]
    fn zero_objective_returns_maximally_mixing() {
        let problem = ResponseProblem::from_matrix(ComplexMatrix::zeros(4), 2, Player::I).unwrap();
        let r = best_response(&problem, &SolverOptions::default()).unwrap();
        assert_eq!(r.iterations, 0);
        assert_eq!(r.value, 0.0);
        assert_eq!(r.chi_opt, ChiMatrix::maximally_mixing(2));
    }

    #[test]
    fn weak_duality_on_random_objectives() {
        let mut state = 17u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        for n in [2, 3] {
            for _ in 0..5 {
                let g = ComplexMatrix::from_fn(n * n, |_, _| num_complex::Complex64::new(next(), next()));
                let problem = ResponseProblem::from_matrix(g, n, Player::II).unwrap();
                let r = best_response(&problem, &SolverOptions::default()).unwrap();
                assert!(r.value <= r.dual_bound + 1e-8);
                assert!(r.gap <= 1e-7);
                validate_chi(r.chi_opt.matrix().clone(), n, FEASIBILITY_TOL).unwrap();
            }
        }
    }

    #[test]
    fn iteration_budget_reports_partial_result() {
        let g = ComplexMatrix::from_fn(4, |i, j| num_complex::Complex64::new((i + 2 * j) as f64, (i * j) as f64));
        let problem = ResponseProblem::from_matrix(g, 2, Player::I).unwrap();
        let opts = SolverOptions {
            max_iters: 3,
            tol: 1e-14,
            step: None,
        };
        match best_response(&problem, &opts) {
            Err(Error::NoConvergence(partial)) => {
                assert!(!partial.converged);
                assert_eq!(partial.iterations, 3);
                assert!(partial.value <= partial.dual_bound + 1e-12);
            }
            other => panic!("expected NoConvergence, got {other:?}"),
        }
    }
}
