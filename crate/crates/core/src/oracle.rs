//! Independent torus-quadrature oracle.
//!
//! Fourier transform turns the group-ring Laplacian into a matrix-valued
//! function Delta(theta) on the d-torus; the von Neumann trace of any
//! spectral function is its integral over the torus.  The integral is
//! approximated on a midpoint-shifted uniform grid, which integrates
//! trigonometric polynomials of low enough degree exactly while avoiding the
//! singular set at theta = 0.  Nothing here shares code with the Folner
//! pipeline: eigenvalues come from pointwise Hermitian eigendecompositions,
//! never from finite pieces.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::laurent::LaurentMatrix;

/// Tolerance below which a pointwise eigenvalue is attributed to the kernel.
pub const KERNEL_TOL: f64 = 1e-7;

/// Default quadrature grid points per torus dimension.
pub const DEFAULT_GRID: usize = 64;

/// Pointwise spectra of Delta(theta) over the quadrature grid.
struct GridSpectra {
    points: usize,
    /// Sorted eigenvalues per grid point, grid-index order.
    eigs: Vec<Vec<f64>>,
}

fn sample(m: &LaurentMatrix, grid: usize) -> Result<GridSpectra> {
    if grid == 0 {
        return Err(Error::Invalid("oracle grid must be positive".into()));
    }
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "oracle needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let d = m.rank();
    let points = grid.pow(d as u32);
    let eigs = (0..points)
        .into_par_iter()
        .map(|flat| {
            let mut idx = flat;
            let mut theta = vec![0.0f64; d];
            for t in theta.iter_mut().rev() {
                *t = (idx % grid) as f64;
                idx /= grid;
            }
            // Midpoint shift keeps trig-polynomial exactness and stays off
            // the singular set at theta = 0.
            for t in theta.iter_mut() {
                *t = (*t + 0.5) / grid as f64;
            }
            let mat = m.evaluate(&theta);
            let mut vals: Vec<f64> = mat.symmetric_eigenvalues().iter().cloned().collect();
            vals.sort_by(f64::total_cmp);
            vals
        })
        .collect();
    Ok(GridSpectra { points, eigs })
}

impl GridSpectra {
    /// Mean over theta of #{eigenvalues <= lambda + kernel_tol}.
    fn density_at(&self, lambda: f64, kernel_tol: f64) -> f64 {
        let cut = lambda + kernel_tol;
        let total: usize = self
            .eigs
            .iter()
            .map(|v| v.iter().filter(|&&e| e <= cut).count())
            .sum();
        total as f64 / self.points as f64
    }

    /// Mean over theta of the log-product of eigenvalues above kernel_tol.
    fn log_det_prime(&self, kernel_tol: f64) -> f64 {
        let total: f64 = self
            .eigs
            .iter()
            .map(|v| {
                v.iter()
                    .filter(|&&e| e > kernel_tol)
                    .map(|e| e.ln())
                    .sum::<f64>()
            })
            .sum();
        total / self.points as f64
    }

    /// Mean over theta of sum of k-th powers of the eigenvalues.
    fn trace_power(&self, k: u32) -> f64 {
        let total: f64 = self
            .eigs
            .iter()
            .map(|v| v.iter().map(|e| e.powi(k as i32)).sum::<f64>())
            .sum();
        total / self.points as f64
    }
}

/// Integrated spectral density values from the quadrature oracle.
#[derive(Clone, Debug)]
pub struct VNDensity {
    pub grid: usize,
    pub kernel_tol: f64,
    /// F(0): the L^2 Betti number of this degree.
    pub b2: f64,
    /// (lambda, F(lambda)) at the requested thresholds.
    pub values: Vec<(f64, f64)>,
    /// Max |F_N - F_{N/2}| over the evaluated thresholds (including 0).
    pub error_estimate: f64,
}

/// Evaluates the integrated spectral density F(lambda) of a self-adjoint
/// group-ring matrix at the given thresholds.
pub fn density(
    m: &LaurentMatrix,
    lambdas: &[f64],
    grid: usize,
    kernel_tol: f64,
) -> Result<VNDensity> {
    let fine = sample(m, grid)?;
    let coarse = if grid >= 2 {
        Some(sample(m, grid / 2)?)
    } else {
        None
    };
    let b2 = fine.density_at(0.0, kernel_tol);
    let mut error_estimate: f64 = match &coarse {
        Some(c) => (b2 - c.density_at(0.0, kernel_tol)).abs(),
        None => 0.0,
    };
    let values = lambdas
        .iter()
        .map(|&l| {
            let f = fine.density_at(l, kernel_tol);
            if let Some(c) = &coarse {
                error_estimate = error_estimate.max((f - c.density_at(l, kernel_tol)).abs());
            }
            (l, f)
        })
        .collect();
    Ok(VNDensity {
        grid,
        kernel_tol,
        b2,
        values,
        error_estimate,
    })
}

/// Fuglede-Kadison determinant data from the quadrature oracle.
#[derive(Clone, Debug)]
pub struct FkDeterminant {
    pub grid: usize,
    pub kernel_tol: f64,
    /// F(0) at this grid.
    pub b2: f64,
    /// log det': mean log-product of eigenvalues above kernel_tol.
    pub log_det: f64,
    /// |log_det(N) - log_det(N/2)|.
    pub error_estimate: f64,
}

/// Evaluates log of the Fuglede-Kadison determinant (positive part) of a
/// self-adjoint group-ring matrix.
pub fn fk_determinant(m: &LaurentMatrix, grid: usize, kernel_tol: f64) -> Result<FkDeterminant> {
    let fine = sample(m, grid)?;
    let log_det = fine.log_det_prime(kernel_tol);
    let error_estimate = if grid >= 2 {
        (log_det - sample(m, grid / 2)?.log_det_prime(kernel_tol)).abs()
    } else {
        0.0
    };
    Ok(FkDeterminant {
        grid,
        kernel_tol,
        b2: fine.density_at(0.0, kernel_tol),
        log_det,
        error_estimate,
    })
}

/// Quadrature value of the von Neumann trace of the k-th power.  Exact (up
/// to roundoff) once the grid exceeds the bandwidth of the trigonometric
/// polynomial tr Delta(theta)^k.
pub fn trace_power_quadrature(m: &LaurentMatrix, k: u32, grid: usize) -> Result<f64> {
    Ok(sample(m, grid)?.trace_power(k))
}
