//! Finite-difference eigenvalues of the reduced radial equation
//! −u″ + [((λ−½)² − ¼)/r² + 2μA/r] u = E_r u.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::system::{angular_eigenvalue, lambda_param, AngularMethod, SystemParams};
use crate::tridiag::SymTridiag;

pub const DEFAULT_FD_POINTS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialGrid {
    pub r_max: f64,
    /// Interior points; u vanishes at r = 0 and r = r_max.
    pub points: usize,
    pub spacing: f64,
}

impl RadialGrid {
    pub fn new(r_max: f64, points: usize) -> Self {
        Self {
            r_max,
            points,
            spacing: r_max / (points + 1) as f64,
        }
    }

    pub fn refined(&self) -> Self {
        Self::new(self.r_max, 2 * self.points + 1)
    }
}

/// r_max with x = 2β·r_max = 40 + 10n for the highest requested state.
pub fn radial_grid(params: &SystemParams, lambda: f64, count: usize, points: usize) -> RadialGrid {
    let n = count.saturating_sub(1) as f64;
    let beta = -params.mu * params.a / (n + lambda);
    RadialGrid::new((40.0 + 10.0 * n) / (2.0 * beta), points)
}

/// Lowest `count` values of E = E_r/(2μ) on one grid.
pub fn fd_levels(params: &SystemParams, lambda: f64, grid: &RadialGrid, count: usize) -> Vec<f64> {
    let h = grid.spacing;
    let centrifugal = (lambda - 0.5).powi(2) - 0.25;
    let coulomb = 2.0 * params.mu * params.a;
    let diag: Vec<f64> = (1..=grid.points)
        .map(|i| {
            let r = i as f64 * h;
            2.0 / (h * h) + centrifugal / (r * r) + coulomb / r
        })
        .collect();
    let off = vec![-1.0 / (h * h); grid.points - 1];
    SymTridiag::new(diag, off)
        .lowest(count)
        .into_iter()
        .map(|e| e / (2.0 * params.mu))
        .collect()
}

/// Richardson-extrapolated lowest eigenvalues from grids h and h/2.
pub fn radial_fd_eigen(params: &SystemParams, m: u32, count: usize) -> Result<Vec<f64>> {
    radial_fd_eigen_with(params, m, count, DEFAULT_FD_POINTS, AngularMethod::Auto)
}

pub fn radial_fd_eigen_with(
    params: &SystemParams,
    m: u32,
    count: usize,
    points: usize,
    method: AngularMethod,
) -> Result<Vec<f64>> {
    if count == 0 || count > 10 {
        return Err(Error::domain(format!("radial_fd_eigen count must be in 1..=10, got {count}")));
    }
    let e_theta = angular_eigenvalue(params, m, method)?;
    let lambda = lambda_param(params, m, e_theta)?;
    let coarse = radial_grid(params, lambda, count, points);
    let fine = coarse.refined();
    let e1 = fd_levels(params, lambda, &coarse, count);
    let e2 = fd_levels(params, lambda, &fine, count);
    let mut out = Vec::with_capacity(count);
    for (a, b) in e1.iter().zip(&e2) {
        let extrapolated = (4.0 * b - a) / 3.0;
        let change = (extrapolated - b).abs() / b.abs();
        if !(change < 1e-3) || !(*b < 0.0) {
            return Err(Error::Accuracy {
                what: "finite-difference radial levels did not converge".into(),
                achieved: change,
                target: 1e-3,
            });
        }
        out.push(extrapolated);
    }
    Ok(out)
}
