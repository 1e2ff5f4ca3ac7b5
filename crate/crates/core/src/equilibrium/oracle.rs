use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{PayoffTensor, Player};
use crate::linalg::ComplexMatrix;
use crate::quantum::ChiMatrix;

use super::response_problem;

/// Steps per angle. 24 puts both the identity and the bit flip on the grid.
pub const DEFAULT_RESOLUTION: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    pub unitary: ComplexMatrix,
    /// (rotation angle, polar angle, azimuth) of the maximizing grid point.
    pub angles: (f64, f64, f64),
    pub grid_points: usize,
}

/// `exp(−iθ/2 · n̂·σ)` with axis n̂ at polar angle `polar`, azimuth `azimuth`.
pub fn axis_angle_unitary(theta: f64, polar: f64, azimuth: f64) -> ComplexMatrix {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let (nx, ny, nz) = (polar.sin() * azimuth.cos(), polar.sin() * azimuth.sin(), polar.cos());
    let m = |re: f64, im: f64| Complex64::new(re, im);
    ComplexMatrix::from_rows(&[
        vec![m(c, -s * nz), m(-s * ny, -s * nx)],
        vec![m(s * ny, -s * nx), m(c, s * nz)],
    ])
    .expect("finite entries")
}

fn grid_angles(resolution: usize, k: usize) -> (f64, f64, f64) {
    let r = resolution;
    let (a, b, c) = (k / (r * r), (k / r) % r, k % r);
    let step = 2.0 * PI / r as f64;
    (a as f64 * step, b as f64 * PI / r as f64, c as f64 * step)
}

/// Brute-force maximum of the player's payoff over single-qubit unitary
/// strategies on a `resolution³` grid. Always a lower bound on the best response.
pub fn unitary_oracle(
    a: &PayoffTensor,
    opponent: &ChiMatrix,
    player: Player,
    resolution: usize,
) -> Result<OracleResult> {
    let own = match player {
        Player::I => a.n1(),
        Player::II => a.n2(),
    };
    if own != 2 {
        return Err(Error::UnsupportedDimension(own));
    }
    if resolution == 0 {
        return Err(Error::InvalidArgument("resolution must be positive".into()));
    }
    let problem = response_problem(a, opponent, player)?;
    let h = problem.objective();
    let points = resolution.pow(3);

    // payoff of χ_U = vec(U) vec(U)† is vec(U)† H vec(U)
    let evaluate = |k: usize| {
        let (t, p, z) = grid_angles(resolution, k);
        let u = axis_angle_unitary(t, p, z);
        let v = u.as_slice();
        let hv = h.apply(v);
        let value: f64 = v.iter().zip(&hv).map(|(x, y)| (x.conj() * y).re).sum();
        (value, k)
    };
    let (value, best) = (0..points)
        .into_par_iter()
        .map(evaluate)
        .reduce(
            || (f64::NEG_INFINITY, usize::MAX),
            |x, y| {
                if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) {
                    y
                } else {
                    x
                }
            },
        );
    let angles = grid_angles(resolution, best);
    Ok(OracleResult {
        value,
        unitary: axis_angle_unitary(angles.0, angles.1, angles.2),
        angles,
        grid_points: points,
    })
}
