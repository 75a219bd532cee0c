//! Deficit, asymmetries, excess, the penalized functional `F` and its
//! constants.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{adaptive_quad, QuadSettings};
use crate::sets::{GaussianSet, HalfSpace, IntervalUnion1D};
use crate::special::{gauss_weight, mills_ratio, phi, INV_SQRT_2PI, SQRT_2PI};

/// Constant of the sharp stability estimate `β(E) ≤ c (1 + s²) D(E)`:
/// `c = 80 π² √(2π)`.
pub const STABILITY_CONSTANT: f64 = 80.0 * PI * PI * SQRT_2PI;

/// Below this barycenter norm the set is treated as balanced and `α̂` takes
/// its degenerate value `2φ(-|s|)`.
pub const BARYCENTER_ZERO_TOL: f64 = 1e-12;

/// Parameters `(s, ε, Λ)` of `F(E) = P(E) + ε/2 |b(E)|² + Λ |γ(E) - φ(s)|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionalParams {
    pub s: f64,
    pub eps: f64,
    pub lambda_pen: f64,
}

impl FunctionalParams {
    pub fn new(s: f64, eps: f64, lambda_pen: f64) -> Result<Self> {
        if !s.is_finite() {
            return Err(Error::InvalidArgument(format!("mass level must be finite, got {s}")));
        }
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
        }
        if !(lambda_pen > 0.0 && lambda_pen.is_finite()) {
            return Err(Error::InvalidArgument(format!("volume penalization must be positive, got {lambda_pen}")));
        }
        Ok(Self { s, eps, lambda_pen })
    }

    /// `(s, ε(s), Λ(s))` with the constants of [`stability_constants`].
    pub fn with_stability_constants(s: f64) -> Result<Self> {
        let k = stability_constants(s);
        Self::new(s, k.eps, k.lambda_pen)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityConstants {
    pub eps: f64,
    pub lambda_pen: f64,
    pub c: f64,
    /// Level the constants were evaluated at, always `-|s|`.
    pub level: f64,
    /// True when `s > 0` and the constants belong to the complement.
    pub complemented: bool,
}

/// `ε = e^{s²/2} / (40π²(1+s²))`, `Λ = √2 e^{-s²/2} / φ(s)` and `c`.
///
/// The formulas are stated for `s ≤ 0`; a positive level is reflected to
/// `-s`, the level of the complement, and flagged.
///
/// `Λ` is evaluated as `2√π / M(|s|)` with `M` the Mills ratio, which is the
/// same quantity without the underflowing factors.
pub fn stability_constants(s: f64) -> StabilityConstants {
    let level = -s.abs();
    let s2 = level * level;
    StabilityConstants {
        eps: (0.5 * s2).exp() / (40.0 * PI * PI * (1.0 + s2)),
        lambda_pen: 2.0 * PI.sqrt() / mills_ratio(-level),
        c: STABILITY_CONSTANT,
        level,
        complemented: s > 0.0,
    }
}

/// `b_s = e^{-s²/2}/√(2π)`, the largest barycenter norm at mass `φ(s)`.
pub fn b_max(s: f64) -> f64 {
    gauss_weight(s) * INV_SQRT_2PI
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn nondegenerate_level(set: &GaussianSet) -> Result<f64> {
    let m = set.measure();
    if !(m > 0.0 && m < 1.0) {
        return Err(Error::DegenerateMass(m));
    }
    Ok(set.mass_level())
}

/// `D(E) = P_γ(E) - e^{-s²/2}` with `γ(E) = φ(s)`.
pub fn deficit(set: &GaussianSet) -> f64 {
    set.perimeter() - gauss_weight(set.mass_level())
}

/// `β(E) = b_s - |b(E)|`.
pub fn strong_asym(set: &GaussianSet) -> Result<f64> {
    let s = nondegenerate_level(set)?;
    Ok(b_max(s) - norm(&set.barycenter()))
}

/// `β(E)` from its definition, `|b(E) - b(H_{ω,s})|` minimized over `ω`,
/// with the minimizer `ω = -b/|b|` (any `ω` when `b = 0`).
pub fn strong_asym_by_direction(set: &GaussianSet) -> Result<f64> {
    let s = nondegenerate_level(set)?;
    let b = set.barycenter();
    let bn = norm(&b);
    let bs = b_max(s);
    if bn == 0.0 {
        return Ok(bs);
    }
    // b(H_{ω,s}) = -b_s ω
    let diff: Vec<f64> = b.iter().map(|bi| bi - bs * (bi / bn)).collect();
    Ok(norm(&diff))
}

/// `α̂(E)`: `2φ(-|s|)` for balanced sets, otherwise `γ(E △ H_{ω,s})` with
/// `ω = -b/|b|`.
pub fn fraenkel_hat(set: &GaussianSet) -> Result<f64> {
    let s = nondegenerate_level(set)?;
    let b = set.barycenter();
    let bn = norm(&b);
    if bn < BARYCENTER_ZERO_TOL {
        return Ok(2.0 * phi(-s.abs()));
    }
    let omega: Vec<f64> = b.iter().map(|bi| -bi / bn).collect();
    set.symm_diff_measure(&HalfSpace::new(omega, s)?)
}

/// Fraenkel asymmetry `α(E) = min_ω γ(E △ H_{ω,s})` for families whose
/// symmetry pins the candidate directions: `ω = ±1` on the line, `ω = ±e_n`
/// for slabs, any single direction for centered balls, `ω` itself for a
/// half-space.
pub fn fraenkel_axis(set: &GaussianSet) -> Result<f64> {
    let s = nondegenerate_level(set)?;
    let dim = set.dim();
    match set {
        GaussianSet::Intervals(_) | GaussianSet::Slab(_) => {
            let axis = dim - 1;
            let up = set.symm_diff_measure(&HalfSpace::along_axis(dim, axis, true, s)?)?;
            let down = set.symm_diff_measure(&HalfSpace::along_axis(dim, axis, false, s)?)?;
            Ok(up.min(down))
        }
        GaussianSet::Ball(_) => set.symm_diff_measure(&HalfSpace::along_axis(dim, 0, true, s)?),
        GaussianSet::HalfSpace(h) => set.symm_diff_measure(&HalfSpace::new(h.omega().to_vec(), s)?),
    }
}

/// `4 · min(W₊, W₋)`: for a 1D boundary with normals `±1`, `|ν - ω|²` is 0 or
/// 4, so the minimum over `ω = ±1` charges every point whose normal disagrees.
fn excess_1d(u: &IntervalUnion1D) -> f64 {
    let (mut plus, mut minus) = (0.0, 0.0);
    for (x, nu) in u.boundary() {
        if nu > 0.0 {
            plus += gauss_weight(x);
        } else {
            minus += gauss_weight(x);
        }
    }
    4.0 * plus.min(minus)
}

/// Excess `ℰ(E) = min_ω ∫_{∂E} |ν - ω|² dH_γ`, evaluated on the boundary.
///
/// For a centered sphere the integrand only depends on the angle `θ` between
/// `ν` and `ω`, whose surface distribution has density `∝ sin^{n-2} θ`; the
/// mean of `cos θ` is integrated numerically.
pub fn excess(set: &GaussianSet) -> Result<f64> {
    match set {
        GaussianSet::Intervals(u) => Ok(excess_1d(u)),
        GaussianSet::Slab(s) => Ok(excess_1d(s.profile())),
        GaussianSet::HalfSpace(_) => Ok(0.0),
        GaussianSet::Ball(b) if b.dim() == 1 => {
            Ok(excess_1d(&IntervalUnion1D::normalize([(-b.radius(), b.radius())])?))
        }
        GaussianSet::Ball(b) => {
            let k = (b.dim() - 2) as i32;
            let settings = QuadSettings::default();
            let weight = adaptive_quad(|t: f64| t.sin().powi(k), 0.0, PI, settings)?;
            let moment = adaptive_quad(|t: f64| t.cos() * t.sin().powi(k), 0.0, PI, settings)?;
            if !(weight.converged && moment.converged) {
                return Err(Error::NoConvergence("sphere normal quadrature".into()));
            }
            let mean_cos = (moment.value / weight.value).abs();
            Ok(2.0 * set.perimeter() * (1.0 - mean_cos))
        }
    }
}

/// `(ℰ(E) from the boundary, 2D(E) + 2√(2π)β(E))`.
pub fn excess_identity(set: &GaussianSet) -> Result<(f64, f64)> {
    let direct = excess(set)?;
    let via = 2.0 * deficit(set) + 2.0 * SQRT_2PI * strong_asym(set)?;
    Ok((direct, via))
}

/// `F(E) = P_γ(E) + ε/2 |b(E)|² + Λ |γ(E) - φ(s)|`.
pub fn penalized_functional(set: &GaussianSet, params: &FunctionalParams) -> f64 {
    let b2: f64 = set.barycenter().iter().map(|x| x * x).sum();
    set.perimeter() + 0.5 * params.eps * b2 + params.lambda_pen * (set.measure() - phi(params.s)).abs()
}

/// Every derived quantity of a set in one record.
///
/// `s` always comes from the set's actual mass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantityBundle {
    pub s: f64,
    pub gamma: f64,
    pub perimeter: f64,
    pub barycenter: Vec<f64>,
    pub b_s: f64,
    pub deficit: f64,
    pub beta: f64,
    pub alpha_hat: f64,
    pub excess: f64,
}

impl QuantityBundle {
    pub fn compute(set: &GaussianSet) -> Result<Self> {
        let s = nondegenerate_level(set)?;
        let perimeter = set.perimeter();
        let barycenter = set.barycenter();
        let b_s = b_max(s);
        Ok(Self {
            s,
            gamma: set.measure(),
            perimeter,
            b_s,
            deficit: perimeter - gauss_weight(s),
            beta: b_s - norm(&barycenter),
            barycenter,
            alpha_hat: fraenkel_hat(set)?,
            excess: excess(set)?,
        })
    }

    pub fn barycenter_norm(&self) -> f64 {
        norm(&self.barycenter)
    }

    /// Both sides of `ε/2 (b_s² - |b|²) = ε/2 (b_s + |b|) β`.
    pub fn deficit_chain(&self, eps: f64) -> (f64, f64) {
        let bn = self.barycenter_norm();
        (0.5 * eps * (self.b_s * self.b_s - bn * bn), 0.5 * eps * (self.b_s + bn) * self.beta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::{CenteredBall, SlabSet};
    use crate::special::phi_inv;
    use approx::assert_relative_eq;

    const INF: f64 = f64::INFINITY;
    const A0: f64 = 0.674_489_750_196_081_7;

    fn e0() -> GaussianSet {
        IntervalUnion1D::normalize([(-INF, -A0), (A0, INF)]).unwrap().into()
    }

    fn rays_minus1_plus2() -> GaussianSet {
        IntervalUnion1D::normalize([(-INF, -1.0), (2.0, INF)]).unwrap().into()
    }

    #[test]
    fn b_max_values() {
        assert_relative_eq!(b_max(0.0), INV_SQRT_2PI);
        assert_relative_eq!(b_max(-1.0), 0.241_970_724_519_143_37, max_relative = 1e-15);
        assert_eq!(b_max(INF), 0.0);
        assert_eq!(b_max(3.0), b_max(-3.0));
    }

    #[test]
    fn constants_at_reference_levels() {
        let k = stability_constants(0.0);
        assert_relative_eq!(k.eps, 2.533_029_591_058_444e-3, max_relative = 1e-14);
        assert_relative_eq!(k.lambda_pen, 2.0 * 2f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(k.c, 1_979.154_356_095_451_8, max_relative = 1e-14);
        let k1 = stability_constants(-1.0);
        assert_relative_eq!(k1.eps, 2.088_129_883_045_452e-3, max_relative = 1e-14);
        assert_relative_eq!(k1.lambda_pen, 5.406_463_786_766_758, max_relative = 1e-13);
        assert!(!k1.complemented);
        let k_pos = stability_constants(1.0);
        assert!(k_pos.complemented);
        assert_eq!(k_pos.eps, k1.eps);
    }

    #[test]
    fn lambda_matches_direct_formula() {
        for &s in &[-0.3f64, -2.0, -6.0] {
            let direct = 2f64.sqrt() * (-0.5 * s * s).exp() / phi(s);
            assert_relative_eq!(stability_constants(s).lambda_pen, direct, max_relative = 1e-13);
        }
    }

    #[test]
    fn half_space_is_the_equality_case() {
        let h: GaussianSet = HalfSpace::new(vec![0.0, 1.0], -0.7).unwrap().into();
        assert!(deficit(&h).abs() < 1e-15);
        assert!(strong_asym(&h).unwrap().abs() < 1e-15);
        assert!(fraenkel_hat(&h).unwrap().abs() < 1e-15);
        assert_eq!(fraenkel_axis(&h).unwrap(), 0.0);
        assert_eq!(excess(&h).unwrap(), 0.0);
    }

    #[test]
    fn sharp_mass_set_at_zero() {
        let e = e0();
        assert_relative_eq!(deficit(&e), 0.593_095_484_210_631_4, max_relative = 1e-13);
        assert_relative_eq!(strong_asym(&e).unwrap(), INV_SQRT_2PI, max_relative = 1e-14);
        assert_relative_eq!(fraenkel_hat(&e).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(fraenkel_axis(&e).unwrap(), 0.5, max_relative = 1e-13);
        let (direct, via) = excess_identity(&e).unwrap();
        assert_relative_eq!(direct, 3.186_190_968_421_262_7, max_relative = 1e-13);
        assert_relative_eq!(via, direct, max_relative = 1e-13);
    }

    #[test]
    fn planar_ball_deficit() {
        let b: GaussianSet = CenteredBall::new(2, 1.0).unwrap().into();
        assert_relative_eq!(deficit(&b), 0.556_215_617_215_974, max_relative = 1e-12);
        let (direct, via) = excess_identity(&b).unwrap();
        assert_relative_eq!(direct, via, max_relative = 1e-12);
    }

    #[test]
    fn asymmetric_two_rays() {
        let e = rays_minus1_plus2();
        let bundle = QuantityBundle::compute(&e).unwrap();
        assert_relative_eq!(bundle.s, -0.910_022_257_632_736_8, max_relative = 1e-13);
        assert_relative_eq!(bundle.barycenter[0], -0.187_979_758_005_955_3, max_relative = 1e-13);
        assert_relative_eq!(bundle.beta, 0.075_702_943_241_481_41, max_relative = 1e-12);
        assert_relative_eq!(bundle.alpha_hat, 0.045_500_263_896_358_41, max_relative = 1e-11);
        assert_relative_eq!(strong_asym_by_direction(&e).unwrap(), bundle.beta, epsilon = 1e-12);
        // α̂ uses one admissible direction, so it bounds α from above
        assert!(fraenkel_axis(&e).unwrap() <= bundle.alpha_hat + 1e-12);
    }

    #[test]
    fn balanced_sets_take_the_degenerate_branch() {
        let e = e0();
        let s = e.mass_level();
        assert_relative_eq!(fraenkel_hat(&e).unwrap(), 2.0 * phi(-s.abs()), max_relative = 1e-14);
        let b: GaussianSet = CenteredBall::new(5, 2.0).unwrap().into();
        let sb = b.mass_level();
        assert_relative_eq!(fraenkel_hat(&b).unwrap(), 2.0 * phi(-sb.abs()), max_relative = 1e-14);
    }

    #[test]
    fn ball_fraenkel_is_direction_free() {
        let b: GaussianSet = CenteredBall::new(2, 1.0).unwrap().into();
        let s = b.mass_level();
        let tilted = HalfSpace::new(vec![0.6, -0.8], s).unwrap();
        assert_relative_eq!(fraenkel_axis(&b).unwrap(), b.symm_diff_measure(&tilted).unwrap(), max_relative = 1e-12);
    }

    #[test]
    fn complement_symmetry() {
        let e = rays_minus1_plus2();
        let c = e.complement().unwrap();
        assert_relative_eq!(strong_asym(&e).unwrap(), strong_asym(&c).unwrap(), epsilon = 1e-12);
        assert_relative_eq!(fraenkel_hat(&e).unwrap(), fraenkel_hat(&c).unwrap(), epsilon = 1e-12);
        assert_relative_eq!(deficit(&e), deficit(&c), epsilon = 1e-12);
    }

    #[test]
    fn slab_over_half_line_has_no_excess() {
        let s: GaussianSet = SlabSet::new(3, IntervalUnion1D::lower_half_line(-0.2)).unwrap().into();
        assert_eq!(excess(&s).unwrap(), 0.0);
    }

    #[test]
    fn functional_at_half_line_matches_profile_formula() {
        for &s in &[0.0f64, -1.0, -2.5] {
            let p = FunctionalParams::with_stability_constants(s).unwrap();
            let h: GaussianSet = IntervalUnion1D::lower_half_line(s).into();
            let expected = (-0.5 * s * s).exp() + p.eps / (4.0 * PI) * (-s * s).exp();
            assert_relative_eq!(penalized_functional(&h, &p), expected, max_relative = 1e-14);
        }
        let p = FunctionalParams::with_stability_constants(0.0).unwrap();
        assert_relative_eq!(penalized_functional(&e0(), &p), 1.593_095_484_210_631_4, max_relative = 1e-13);
    }

    #[test]
    fn functional_reduces_to_perimeter() {
        let e = rays_minus1_plus2();
        let p = FunctionalParams::new(e.mass_level(), 1e-300, 1e-300).unwrap();
        assert_relative_eq!(penalized_functional(&e, &p), e.perimeter(), max_relative = 1e-15);
    }

    #[test]
    fn params_are_validated() {
        assert!(FunctionalParams::new(0.0, 0.0, 1.0).is_err());
        assert!(FunctionalParams::new(0.0, 1.0, -1.0).is_err());
        assert!(FunctionalParams::new(f64::NAN, 1.0, 1.0).is_err());
    }

    #[test]
    fn degenerate_mass_is_reported() {
        let whole: GaussianSet = IntervalUnion1D::whole_line().into();
        assert!(matches!(strong_asym(&whole), Err(Error::DegenerateMass(_))));
        assert!(QuantityBundle::compute(&IntervalUnion1D::empty().into()).is_err());
    }

    #[test]
    fn deficit_chain_is_an_identity() {
        let b = QuantityBundle::compute(&rays_minus1_plus2()).unwrap();
        let (lhs, rhs) = b.deficit_chain(0.01);
        assert_relative_eq!(lhs, rhs, epsilon = 1e-15);
    }

    #[test]
    fn bundle_level_matches_phi_inv() {
        let e = rays_minus1_plus2();
        assert_relative_eq!(e.mass_level(), phi_inv(e.measure()).unwrap(), max_relative = 1e-14);
    }
}
