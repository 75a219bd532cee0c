use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::b_max;
use crate::sets::IntervalUnion1D;
use crate::special::{gauss_weight, phi, phi_inv, SQRT_2PI};

/// The level `a < s` with `2φ(a) = φ(s)`.
pub fn solve_a(s: f64) -> Result<f64> {
    if !s.is_finite() {
        return Err(Error::InvalidArgument(format!("mass level must be finite, got {s}")));
    }
    phi_inv(0.5 * phi(s))
}

/// `E_s = (-∞, a) ∪ (-a, ∞)` with `2φ(a) = φ(s)`: mass `φ(s)`, barycenter
/// zero.
pub fn sharp_mass_set(s: f64) -> Result<IntervalUnion1D> {
    let a = solve_a(s)?;
    IntervalUnion1D::normalize([(f64::NEG_INFINITY, a), (-a, f64::INFINITY)])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassSweepRow {
    pub s: f64,
    pub a_s: f64,
    /// `s - a(s)`.
    pub shift: f64,
    pub deficit: f64,
    pub beta: f64,
    /// `D(E_s) / (s⁻² β(E_s))`.
    pub ratio: f64,
}

/// Deficit, asymmetry and their ratio along the family `E_s`, sorted by `s`.
///
/// `D = 2e^{-a²/2} - e^{-s²/2} = e^{-s²/2} (2e^{(s²-a²)/2} - 1)` and
/// `β = e^{-s²/2}/√(2π)`, so the ratio `√(2π) s² (2e^{(s²-a²)/2} - 1)` is
/// formed without the common underflowing factor.
pub fn mass_sweep(s_values: &[f64]) -> Result<Vec<MassSweepRow>> {
    let mut rows = s_values
        .iter()
        .map(|&s| {
            if !(s < 0.0 && s.is_finite()) {
                return Err(Error::InvalidArgument(format!("sweep levels must be negative, got {s}")));
            }
            let a = solve_a(s)?;
            let scaled = (LN_2 - 0.5 * (a - s) * (a + s)).exp_m1();
            Ok(MassSweepRow {
                s,
                a_s: a,
                shift: s - a,
                deficit: gauss_weight(s) * scaled,
                beta: b_max(s),
                ratio: SQRT_2PI * s * s * scaled,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|x, y| x.s.total_cmp(&y.s));
    Ok(rows)
}
