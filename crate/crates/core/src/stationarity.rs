//! First and second variation of `F` on one-dimensional sets.
//!
//! On a 0-dimensional boundary the mean curvature, the second fundamental
//! form and the tangential gradient all vanish, so only the position and
//! barycenter terms survive. Boundary motions are measured in the outward
//! normal direction: endpoint `x_i` moves to `x_i + t ν_i φ_i`.
//!
//! The barycenter here is `b = ∫_E x dγ` with `γ` the probability measure,
//! while boundary integrals use the weight `e^{-x²/2}`. The two differ by
//! `√(2π)`, which is why that factor shows up next to every `ε b`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::{penalized_functional, FunctionalParams};
use crate::sets::{GaussianSet, IntervalUnion1D};
use crate::special::{density, gauss_weight, SQRT_2PI};

/// Maximum spread of the Euler residuals below which a set counts as
/// stationary.
pub const STATION_TOL: f64 = 1e-8;

/// Slack allowed in `|λ| ≤ Λ`.
pub const LAGRANGE_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint1D {
    pub x: f64,
    /// Exterior normal, `±1`.
    pub nu: f64,
    /// `e^{-x²/2}`.
    pub weight: f64,
}

/// Finite boundary points of `u`, sorted.
pub fn boundary_points(u: &IntervalUnion1D) -> Vec<BoundaryPoint1D> {
    u.boundary().into_iter().map(|(x, nu)| BoundaryPoint1D { x, nu, weight: gauss_weight(x) }).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EulerReport {
    pub points: Vec<BoundaryPoint1D>,
    pub residuals: Vec<f64>,
    pub lambda_fit: f64,
    pub max_dev: f64,
}

impl EulerReport {
    pub fn is_stationary(&self, tol: f64) -> bool {
        self.max_dev < tol
    }
}

/// Residuals of the Euler–Lagrange equation `-x ν + ε b x / √(2π) = λ` at
/// each boundary point, with `λ` fitted as their weighted mean.
pub fn euler_residual(set: &IntervalUnion1D, params: &FunctionalParams) -> Result<EulerReport> {
    let points = boundary_points(set);
    if points.is_empty() {
        return Err(Error::NoBoundary);
    }
    let b = set.barycenter();
    let coupling = params.eps * b / SQRT_2PI;
    let residuals: Vec<f64> = points.iter().map(|p| -p.x * p.nu + coupling * p.x).collect();

    let total: f64 = points.iter().map(|p| p.weight).sum();
    let lambda_fit = if total > 0.0 {
        points.iter().zip(&residuals).map(|(p, r)| p.weight * r).sum::<f64>() / total
    } else {
        // every weight underflowed; fall back to the plain mean
        residuals.iter().sum::<f64>() / residuals.len() as f64
    };
    let max_dev = residuals.iter().map(|r| (r - lambda_fit).abs()).fold(0.0, f64::max);
    Ok(EulerReport { points, residuals, lambda_fit, max_dev })
}

/// `|λ| ≤ Λ`, up to [`LAGRANGE_SLACK`].
pub fn lagrange_bound_check(report: &EulerReport, params: &FunctionalParams) -> bool {
    report.lambda_fit.abs() <= params.lambda_pen + LAGRANGE_SLACK
}

/// `J[φ] = φᵀ M φ` on boundary values, restricted to `Σ φ_i w_i = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticFormJ {
    pub matrix: DMatrix<f64>,
    pub constraint: DVector<f64>,
}

impl QuadraticFormJ {
    pub fn dim(&self) -> usize {
        self.constraint.len()
    }

    pub fn eval(&self, phi: &[f64]) -> f64 {
        let v = DVector::from_column_slice(phi);
        v.dot(&(&self.matrix * &v))
    }
}

/// `J[φ] = Σ (-1 + ε b ν_i / √(2π)) φ_i² w_i + ε/(2π) (Σ φ_i x_i w_i)²`.
pub fn second_variation_form(set: &IntervalUnion1D, params: &FunctionalParams) -> QuadraticFormJ {
    let points = boundary_points(set);
    let k = points.len();
    let b = set.barycenter();
    let eps = params.eps;
    let xw = DVector::from_iterator(k, points.iter().map(|p| p.x * p.weight));
    let mut matrix = (&xw * xw.transpose()) * (eps / (2.0 * std::f64::consts::PI));
    for (i, p) in points.iter().enumerate() {
        matrix[(i, i)] += (-1.0 + eps * b * p.nu / SQRT_2PI) * p.weight;
    }
    let constraint = DVector::from_iterator(k, points.iter().map(|p| p.weight));
    QuadraticFormJ { matrix, constraint }
}

/// Orthonormal basis of the orthogonal complement of `w`, as the columns of
/// a `k × (k-1)` matrix (from the Householder reflection sending `w` to an
/// axis).
fn complement_basis(w: &DVector<f64>) -> DMatrix<f64> {
    let k = w.len();
    let norm = w.norm();
    let mut u = w / norm;
    // reflect onto e_0 with the sign that avoids cancellation
    let sign = if u[0] >= 0.0 { 1.0 } else { -1.0 };
    u[0] += sign;
    let un = u.norm();
    let q = DMatrix::<f64>::identity(k, k) - (&u * u.transpose()) * (2.0 / (un * un));
    q.columns(1, k - 1).into_owned()
}

/// Smallest eigenvalue of `J` on `{Σ φ_i w_i = 0}` with a unit eigenvector.
///
/// Returns `(+∞, [])` when `k < 2`: the constraint leaves no admissible `φ`.
pub fn psd_on_zero_average(form: &QuadraticFormJ) -> (f64, Vec<f64>) {
    let k = form.dim();
    if k < 2 || form.constraint.norm() == 0.0 {
        return (f64::INFINITY, Vec::new());
    }
    let basis = complement_basis(&form.constraint);
    let reduced = basis.transpose() * &form.matrix * &basis;
    let reduced = (&reduced + reduced.transpose()) * 0.5;
    let eig = nalgebra::SymmetricEigen::new(reduced);
    let (idx, &min) = eig.eigenvalues.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("k >= 2");
    let witness = &basis * eig.eigenvectors.column(idx);
    (min, witness.iter().copied().collect())
}

/// Rebuilds `u` with its finite boundary points replaced by `xs` (same
/// order as [`IntervalUnion1D::boundary`]).
fn with_boundary(u: &IntervalUnion1D, xs: &[f64]) -> Result<IntervalUnion1D> {
    let mut it = xs.iter().copied();
    let mut raw = Vec::with_capacity(u.intervals().len());
    for &(lo, hi) in u.intervals() {
        let lo = if lo.is_finite() { it.next().ok_or(Error::Misaligned)? } else { lo };
        let hi = if hi.is_finite() { it.next().ok_or(Error::Misaligned)? } else { hi };
        if !(lo < hi) {
            return Err(Error::InvalidInterval { lo, hi });
        }
        raw.push((lo, hi));
    }
    IntervalUnion1D::normalize(raw)
}

/// Second derivative at `t = 0` of `F` along the mass-preserving boundary
/// motion `x_i(t) = x_i + t ν_i φ_i`, by central differences with step `h`.
///
/// The endpoint with the largest weight is not moved linearly but solved by
/// Newton's method so that `γ` stays exactly at its initial value; for
/// `Σ φ_i w_i = 0` its velocity at `t = 0` is still `ν_j φ_j`, and the
/// volume penalty stays constant along the path.
pub fn mass_preserving_second_derivative(
    set: &IntervalUnion1D,
    params: &FunctionalParams,
    phi: &[f64],
    h: f64,
) -> Result<f64> {
    let points = boundary_points(set);
    if points.len() != phi.len() {
        return Err(Error::InvalidArgument(format!(
            "test function has {} values for {} boundary points",
            phi.len(),
            points.len()
        )));
    }
    if points.len() < 2 {
        return Err(Error::InvalidArgument("need at least two boundary points".into()));
    }
    let j =
        points.iter().enumerate().max_by(|a, b| a.1.weight.total_cmp(&b.1.weight)).map(|(i, _)| i).expect("nonempty");
    let target = set.measure();

    let eval = |t: f64| -> Result<f64> {
        let mut xs: Vec<f64> = points.iter().zip(phi).map(|(p, f)| p.x + t * p.nu * f).collect();
        for _ in 0..50 {
            let moved = with_boundary(set, &xs)?;
            let gap = moved.measure() - target;
            let step = gap / (points[j].nu * density(xs[j]));
            xs[j] -= step;
            if step.abs() < 1e-17 * (1.0 + xs[j].abs()) {
                break;
            }
        }
        let moved = with_boundary(set, &xs)?;
        Ok(penalized_functional(&GaussianSet::from(moved), params))
    };

    let (fp, f0, fm) = (eval(h)?, eval(0.0)?, eval(-h)?);
    Ok((fp - 2.0 * f0 + fm) / (h * h))
}
