//! Set representations with exact Gaussian measure, perimeter and barycenter.

mod descriptor;
mod interval;
mod monte_carlo;

pub use descriptor::{Endpoint, SetDescriptor};
pub use interval::{IntervalUnion1D, Normal, MERGE_TOL};
pub use monte_carlo::{mc_barycenter, mc_measure, McEstimate};

use crate::error::{Error, Result};
use crate::quad::{adaptive_quad, QuadSettings};
use crate::special::{chi2_cdf, chi2_sf, density, gauss_weight, ln_gamma_half, phi, phi_inv, INV_SQRT_2PI};

const UNIT_TOL: f64 = 1e-12;

/// `H_{ω,s} = {x : x·ω < s}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfSpace {
    omega: Vec<f64>,
    s: f64,
}

impl HalfSpace {
    pub fn new(omega: Vec<f64>, s: f64) -> Result<Self> {
        if omega.is_empty() {
            return Err(Error::InvalidDimension { got: 0, min: 1 });
        }
        let norm = omega.iter().map(|w| w * w).sum::<f64>().sqrt();
        if !((norm - 1.0).abs() <= UNIT_TOL) {
            return Err(Error::InvalidArgument(format!("half-space normal must be a unit vector, |omega| = {norm}")));
        }
        if s.is_nan() {
            return Err(Error::InvalidArgument("half-space level is NaN".into()));
        }
        Ok(Self { omega, s })
    }

    /// `{x : ±x_axis < s}` in dimension `dim`.
    pub fn along_axis(dim: usize, axis: usize, positive: bool, s: f64) -> Result<Self> {
        if axis >= dim {
            return Err(Error::InvalidArgument(format!("axis {axis} out of range for dim {dim}")));
        }
        let mut omega = vec![0.0; dim];
        omega[axis] = if positive { 1.0 } else { -1.0 };
        Self::new(omega, s)
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn level(&self) -> f64 {
        self.s
    }

    pub fn dim(&self) -> usize {
        self.omega.len()
    }

    /// Sign of the component along `axis` when `ω = ±e_axis`, otherwise `None`.
    fn axis_sign(&self, axis: usize) -> Option<f64> {
        let along = self.omega[axis];
        ((along.abs() - 1.0).abs() <= UNIT_TOL).then_some(along.signum())
    }

    /// The 1D trace of this half-space on the line spanned by `e_axis`,
    /// assuming `ω = ±e_axis`.
    fn as_interval(&self, sign: f64) -> IntervalUnion1D {
        if sign > 0.0 {
            IntervalUnion1D::lower_half_line(self.s)
        } else {
            IntervalUnion1D::upper_half_line(-self.s)
        }
    }
}

/// `ℝ^{dim-1} × F` with the profile `F` along the last coordinate axis.
#[derive(Debug, Clone, PartialEq)]
pub struct SlabSet {
    dim: usize,
    profile: IntervalUnion1D,
}

impl SlabSet {
    pub fn new(dim: usize, profile: IntervalUnion1D) -> Result<Self> {
        if dim < 1 {
            return Err(Error::InvalidDimension { got: dim, min: 1 });
        }
        Ok(Self { dim, profile })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn profile(&self) -> &IntervalUnion1D {
        &self.profile
    }
}

/// Centered ball `{|x| < R}` in dimension `dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct CenteredBall {
    dim: usize,
    radius: f64,
}

impl CenteredBall {
    pub fn new(dim: usize, radius: f64) -> Result<Self> {
        if dim < 1 {
            return Err(Error::InvalidDimension { got: dim, min: 1 });
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidArgument(format!("ball radius must be positive, got {radius}")));
        }
        Ok(Self { dim, radius })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Gaussian surface measure `n ω_n R^{n-1} e^{-R²/2} / (2π)^{(n-1)/2}`,
    /// evaluated in log space.
    fn perimeter(&self) -> f64 {
        let n = self.dim as f64;
        let r = self.radius;
        let log_p = std::f64::consts::LN_2 + 0.5 * std::f64::consts::PI.ln() + (n - 1.0) * r.ln()
            - 0.5 * r * r
            - ln_gamma_half(self.dim)
            - 0.5 * (n - 1.0) * std::f64::consts::LN_2;
        log_p.exp()
    }

    /// `γ(B ∩ {x·ω < s})` by slicing along `ω`:
    /// `∫_{-R}^{min(s,R)} ψ(t) P(χ²_{n-1} ≤ R² - t²) dt`.
    fn mass_below(&self, s: f64) -> Result<f64> {
        let r = self.radius;
        if s <= -r {
            return Ok(0.0);
        }
        if self.dim == 1 {
            let top = s.min(r);
            return Ok(phi(top) - phi(-r));
        }
        if s >= r {
            return chi2_cdf(self.dim, r * r);
        }
        let k = self.dim - 1;
        let integrand = |t: f64| {
            let rem = (r * r - t * t).max(0.0);
            density(t) * chi2_cdf(k, rem).unwrap_or(0.0)
        };
        let res = adaptive_quad(integrand, -r, s, QuadSettings { abs_tol: 1e-14, rel_tol: 1e-12, max_depth: 60 })?;
        if !res.converged {
            return Err(Error::NoConvergence(format!(
                "ball/half-space slice quadrature did not converge (error {:.3e})",
                res.error
            )));
        }
        Ok(res.value)
    }
}

/// The set representations understood by the library.
#[derive(Debug, Clone, PartialEq)]
pub enum GaussianSet {
    Intervals(IntervalUnion1D),
    HalfSpace(HalfSpace),
    Slab(SlabSet),
    Ball(CenteredBall),
}

impl From<IntervalUnion1D> for GaussianSet {
    fn from(u: IntervalUnion1D) -> Self {
        GaussianSet::Intervals(u)
    }
}

impl From<HalfSpace> for GaussianSet {
    fn from(h: HalfSpace) -> Self {
        GaussianSet::HalfSpace(h)
    }
}

impl From<SlabSet> for GaussianSet {
    fn from(s: SlabSet) -> Self {
        GaussianSet::Slab(s)
    }
}

impl From<CenteredBall> for GaussianSet {
    fn from(b: CenteredBall) -> Self {
        GaussianSet::Ball(b)
    }
}

impl GaussianSet {
    pub fn dim(&self) -> usize {
        match self {
            GaussianSet::Intervals(_) => 1,
            GaussianSet::HalfSpace(h) => h.dim(),
            GaussianSet::Slab(s) => s.dim,
            GaussianSet::Ball(b) => b.dim,
        }
    }

    /// `γ(E)`.
    pub fn measure(&self) -> f64 {
        match self {
            GaussianSet::Intervals(u) => u.measure(),
            GaussianSet::HalfSpace(h) => phi(h.s),
            GaussianSet::Slab(s) => s.profile.measure(),
            GaussianSet::Ball(b) => chi2_cdf(b.dim, b.radius * b.radius).expect("valid ball"),
        }
    }

    /// `γ(ℝⁿ \ E)`, computed directly rather than as `1 - γ(E)`.
    pub fn complement_measure(&self) -> f64 {
        match self {
            GaussianSet::Intervals(u) => u.complement().measure(),
            GaussianSet::HalfSpace(h) => phi(-h.s),
            GaussianSet::Slab(s) => s.profile.complement().measure(),
            GaussianSet::Ball(b) => chi2_sf(b.dim, b.radius * b.radius).expect("valid ball"),
        }
    }

    /// The level `s` with `γ(E) = φ(s)`, taken from whichever of `E` and its
    /// complement has the smaller mass so that both tails keep full accuracy.
    pub fn mass_level(&self) -> f64 {
        let m = self.measure();
        if m <= 0.5 {
            phi_inv(m).expect("measure lies in [0, 1]")
        } else {
            -phi_inv(self.complement_measure().clamp(0.0, 1.0)).expect("measure lies in [0, 1]")
        }
    }

    /// Gaussian perimeter `P_γ(E)`.
    pub fn perimeter(&self) -> f64 {
        match self {
            GaussianSet::Intervals(u) => u.perimeter(),
            GaussianSet::HalfSpace(h) => gauss_weight(h.s),
            GaussianSet::Slab(s) => s.profile.perimeter(),
            GaussianSet::Ball(b) => b.perimeter(),
        }
    }

    /// Non-renormalized barycenter `b(E) = ∫_E x dγ`.
    pub fn barycenter(&self) -> Vec<f64> {
        match self {
            GaussianSet::Intervals(u) => vec![u.barycenter()],
            GaussianSet::HalfSpace(h) => {
                let bs = gauss_weight(h.s) * INV_SQRT_2PI;
                h.omega.iter().map(|w| -bs * w).collect()
            }
            GaussianSet::Slab(s) => {
                let mut b = vec![0.0; s.dim];
                b[s.dim - 1] = s.profile.barycenter();
                b
            }
            GaussianSet::Ball(b) => vec![0.0; b.dim],
        }
    }

    /// `ℝⁿ \ E`. Balls are rejected: their complement has no representation.
    pub fn complement(&self) -> Result<GaussianSet> {
        match self {
            GaussianSet::Intervals(u) => Ok(GaussianSet::Intervals(u.complement())),
            GaussianSet::HalfSpace(h) => {
                Ok(GaussianSet::HalfSpace(HalfSpace { omega: h.omega.iter().map(|w| -w).collect(), s: -h.s }))
            }
            GaussianSet::Slab(s) => Ok(GaussianSet::Slab(SlabSet { dim: s.dim, profile: s.profile.complement() })),
            GaussianSet::Ball(_) => Err(Error::Unsupported("complement of a ball".into())),
        }
    }

    /// Structural equality case of the isoperimetric inequality: half-spaces,
    /// half-lines and slabs over a half-line.
    pub fn is_half_space(&self) -> bool {
        match self {
            GaussianSet::Intervals(u) => u.is_half_line(),
            GaussianSet::HalfSpace(_) => true,
            GaussianSet::Slab(s) => s.profile.is_half_line(),
            GaussianSet::Ball(_) => false,
        }
    }

    /// `γ(E △ H)`.
    ///
    /// Intervals and slabs accept only half-spaces normal to their axis; balls
    /// accept any direction; half-spaces accept parallel or antiparallel ones.
    pub fn symm_diff_measure(&self, h: &HalfSpace) -> Result<f64> {
        if h.dim() != self.dim() {
            return Err(Error::InvalidArgument(format!(
                "half-space dimension {} does not match set dimension {}",
                h.dim(),
                self.dim()
            )));
        }
        match self {
            GaussianSet::Intervals(u) => {
                let sign = h.axis_sign(0).ok_or(Error::Misaligned)?;
                Ok(u.symmetric_difference(&h.as_interval(sign)).measure())
            }
            GaussianSet::Slab(s) => {
                let sign = h.axis_sign(s.dim - 1).ok_or(Error::Misaligned)?;
                Ok(s.profile.symmetric_difference(&h.as_interval(sign)).measure())
            }
            GaussianSet::HalfSpace(e) => {
                let dot: f64 = e.omega.iter().zip(&h.omega).map(|(a, b)| a * b).sum();
                let mine = if (dot - 1.0).abs() <= UNIT_TOL {
                    IntervalUnion1D::lower_half_line(e.s)
                } else if (dot + 1.0).abs() <= UNIT_TOL {
                    IntervalUnion1D::upper_half_line(-e.s)
                } else {
                    return Err(Error::Unsupported("symmetric difference of non-parallel half-spaces".into()));
                };
                Ok(mine.symmetric_difference(&IntervalUnion1D::lower_half_line(h.s)).measure())
            }
            GaussianSet::Ball(b) => {
                let inside = b.mass_below(h.s)?;
                Ok(self.measure() + phi(h.s) - 2.0 * inside)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const INF: f64 = f64::INFINITY;

    fn two_rays(a: f64) -> GaussianSet {
        IntervalUnion1D::normalize([(-INF, -a), (a, INF)]).unwrap().into()
    }

    #[test]
    fn half_space_closed_forms() {
        let h: GaussianSet = HalfSpace::new(vec![0.6, 0.8], -1.0).unwrap().into();
        assert_relative_eq!(h.measure(), 0.158_655_253_931_457_05, max_relative = 1e-14);
        assert_relative_eq!(h.perimeter(), (-0.5f64).exp(), max_relative = 1e-15);
        let b = h.barycenter();
        let bs = (-0.5f64).exp() * INV_SQRT_2PI;
        assert_relative_eq!(b[0], -0.6 * bs, max_relative = 1e-15);
        assert_relative_eq!(b[1], -0.8 * bs, max_relative = 1e-15);
    }

    #[test]
    fn non_unit_normal_is_rejected() {
        assert!(HalfSpace::new(vec![1.0, 1.0], 0.0).is_err());
        assert!(HalfSpace::new(vec![], 0.0).is_err());
    }

    #[test]
    fn sharp_mass_set_at_level_zero() {
        let a = 0.674_489_750_196_081_7;
        let e = two_rays(a);
        assert_relative_eq!(e.measure(), 0.5, max_relative = 1e-15);
        assert_relative_eq!(e.perimeter(), 1.593_095_484_210_631_4, max_relative = 1e-14);
        assert!(e.barycenter()[0].abs() < 1e-17);
    }

    #[test]
    fn planar_unit_ball() {
        let b: GaussianSet = CenteredBall::new(2, 1.0).unwrap().into();
        assert_relative_eq!(b.measure(), 0.393_469_340_287_366_6, max_relative = 1e-14);
        assert_relative_eq!(b.perimeter(), 1.520_346_901_066_281, max_relative = 1e-14);
        assert_eq!(b.barycenter(), vec![0.0, 0.0]);
        assert_relative_eq!(b.mass_level(), -0.270_288_020_738_735_85, max_relative = 1e-12);
    }

    #[test]
    fn ball_perimeter_matches_sphere_area_formula() {
        // n ω_n = 2 π^{n/2} / Γ(n/2); dim 3 gives 4π.
        let b = CenteredBall::new(3, 1.5).unwrap();
        let expected = 4.0 * std::f64::consts::PI * 1.5f64.powi(2) * (-1.125f64).exp() / (2.0 * std::f64::consts::PI);
        assert_relative_eq!(b.perimeter(), expected, max_relative = 1e-14);
    }

    #[test]
    fn bounded_interval_barycenter() {
        let u: GaussianSet = IntervalUnion1D::normalize([(1.0, 2.0)]).unwrap().into();
        assert_relative_eq!(u.barycenter()[0], 0.187_979_758_005_955_3, max_relative = 1e-14);
        let sym: GaussianSet = IntervalUnion1D::normalize([(-0.7, 0.7)]).unwrap().into();
        assert!(sym.barycenter()[0].abs() < 1e-17);
    }

    #[test]
    fn complements() {
        let l: GaussianSet = IntervalUnion1D::lower_half_line(0.0).into();
        assert_eq!(l.complement().unwrap(), IntervalUnion1D::upper_half_line(0.0).into());
        let h = HalfSpace::new(vec![1.0, 0.0], 0.4).unwrap();
        let hc = GaussianSet::from(h).complement().unwrap();
        assert_eq!(hc, HalfSpace::new(vec![-1.0, -0.0], -0.4).unwrap().into());
        assert!(GaussianSet::from(CenteredBall::new(2, 1.0).unwrap()).complement().is_err());
    }

    #[test]
    fn symm_diff_of_half_space_with_itself_vanishes() {
        let h = HalfSpace::new(vec![0.0, 1.0], -0.3).unwrap();
        assert_eq!(GaussianSet::from(h.clone()).symm_diff_measure(&h).unwrap(), 0.0);
    }

    #[test]
    fn symm_diff_two_rays_against_half_line() {
        let s = -0.4;
        let a = -phi_inv(phi(s) / 2.0).unwrap();
        let h = HalfSpace::new(vec![1.0], s).unwrap();
        let got = two_rays(a).symm_diff_measure(&h).unwrap();
        assert_relative_eq!(got, 2.0 * (phi(s) - phi(-a)), max_relative = 1e-13);
    }

    #[test]
    fn misaligned_half_space_is_rejected() {
        let slab: GaussianSet = SlabSet::new(2, IntervalUnion1D::lower_half_line(0.0)).unwrap().into();
        let h = HalfSpace::new(vec![1.0, 0.0], 0.0).unwrap();
        assert!(matches!(slab.symm_diff_measure(&h), Err(Error::Misaligned)));
        let tilted = HalfSpace::new(vec![0.6, 0.8], 0.0).unwrap();
        assert!(matches!(slab.symm_diff_measure(&tilted), Err(Error::Misaligned)));
        let vertical = HalfSpace::new(vec![0.0, 1.0], 0.0).unwrap();
        assert_eq!(slab.symm_diff_measure(&vertical).unwrap(), 0.0);
    }

    #[test]
    fn ball_slice_mass_limits() {
        let b = CenteredBall::new(3, 1.2).unwrap();
        let full = chi2_cdf(3, 1.44).unwrap();
        assert_eq!(b.mass_below(-2.0).unwrap(), 0.0);
        assert_relative_eq!(b.mass_below(2.0).unwrap(), full, max_relative = 1e-14);
        // symmetric slab cut through the center takes half the mass
        assert_relative_eq!(b.mass_below(0.0).unwrap(), full / 2.0, max_relative = 1e-11);
    }

    #[test]
    fn mass_level_uses_the_small_side() {
        let u: GaussianSet = IntervalUnion1D::upper_half_line(-9.0).into();
        assert_relative_eq!(u.mass_level(), 9.0, max_relative = 1e-13);
    }
}
