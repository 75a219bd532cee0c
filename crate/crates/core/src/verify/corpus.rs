//! Random and structured test sets.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimizer::sharp_mass_set;
use crate::sets::{CenteredBall, GaussianSet, IntervalUnion1D, SlabSet};
use crate::special::chi2_cdf;

/// Draws rejected before [`random_interval_union`] gives up.
pub const MAX_RETRIES: usize = 100;

/// Interval lengths and gaps shorter than this fraction of the endpoint scale
/// are rejected as degenerate.
pub const MIN_FEATURE: f64 = 0.025;

/// Endpoints farther out than this multiple of the endpoint scale are
/// rejected: the boundary would carry no measurable weight.
pub const MAX_REACH: f64 = 2.5;

/// Accepted mass window for random unions.
pub const MASS_WINDOW: (f64, f64) = (0.01, 0.99);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomSetSpec {
    /// Inclusive range of the number of components.
    pub k_range: (usize, usize),
    pub endpoint_scale: f64,
    pub include_rays: bool,
    pub seed: u64,
}

impl Default for RandomSetSpec {
    fn default() -> Self {
        Self { k_range: (1, 4), endpoint_scale: 2.0, include_rays: true, seed: 0 }
    }
}

impl RandomSetSpec {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.k_range;
        if !(1 <= lo && lo <= hi && hi <= 6) {
            return Err(Error::InvalidArgument(format!(
                "component range ({lo}, {hi}) must satisfy 1 <= min <= max <= 6"
            )));
        }
        if !(self.endpoint_scale > 0.0 && self.endpoint_scale.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "endpoint scale must be positive, got {}",
                self.endpoint_scale
            )));
        }
        Ok(())
    }
}

fn draw_once(spec: &RandomSetSpec, rng: &mut ChaCha8Rng) -> Option<IntervalUnion1D> {
    let scale = spec.endpoint_scale;
    let k = rng.random_range(spec.k_range.0..=spec.k_range.1);
    let left = spec.include_rays && rng.random_bool(0.5);
    let mut right = spec.include_rays && rng.random_bool(0.5);
    if left && right && k == 1 {
        right = false;
    }
    let rays = usize::from(left) + usize::from(right);
    let bounded = k - rays;
    let proposal = Normal::new(0.0, scale).expect("positive scale");
    let mut xs: Vec<f64> = (0..2 * bounded + rays).map(|_| proposal.sample(rng)).collect();
    xs.sort_by(f64::total_cmp);
    if xs.iter().any(|x| x.abs() > MAX_REACH * scale) || xs.windows(2).any(|w| w[1] - w[0] < MIN_FEATURE * scale) {
        return None;
    }
    let mut it = xs.into_iter();
    let mut raw = Vec::with_capacity(k);
    if left {
        raw.push((f64::NEG_INFINITY, it.next()?));
    }
    for _ in 0..bounded {
        raw.push((it.next()?, it.next()?));
    }
    if right {
        raw.push((it.next()?, f64::INFINITY));
    }
    let u = IntervalUnion1D::normalize(raw).ok()?;
    let m = u.measure();
    (m > MASS_WINDOW.0 && m < MASS_WINDOW.1).then_some(u)
}

/// A union of `k ∈ k_range` intervals with endpoints drawn from
/// `N(0, endpoint_scale²)`; each side gets a ray with probability 1/2 when
/// rays are enabled.
///
/// Draws with a feature shorter than [`MIN_FEATURE`]`·scale`, an endpoint
/// beyond [`MAX_REACH`]`·scale`, or mass outside [`MASS_WINDOW`] are redrawn.
pub fn random_interval_union(spec: &RandomSetSpec) -> Result<IntervalUnion1D> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for _ in 0..MAX_RETRIES {
        if let Some(u) = draw_once(spec, &mut rng) {
            return Ok(u);
        }
    }
    Err(Error::NoConvergence(format!("no admissible random set after {MAX_RETRIES} draws")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    RandomUnion,
    SharpMass,
    Ball,
    Slab,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusMember {
    pub index: usize,
    pub family: Family,
    pub set: GaussianSet,
}

/// Per-member generator: stream `index` of the corpus seed.
pub fn member_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Radius of the centered ball of mass `target` in dimension `dim`.
pub fn ball_radius_for_mass(dim: usize, target: f64) -> Result<f64> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::InvalidProbability(target));
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while chi2_cdf(dim, hi)? < target {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if chi2_cdf(dim, mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok((0.5 * (lo + hi)).sqrt())
}

/// Member counts `(random unions, E_s, balls, slabs)` for a corpus of `n`.
pub fn family_counts(n: usize) -> (usize, usize, usize, usize) {
    let share = |p: f64| ((n as f64) * p).round() as usize;
    let random = share(0.70).min(n);
    let sharp = share(0.15).min(n - random);
    let balls = share(0.10).min(n - random - sharp);
    (random, sharp, balls, n - random - sharp - balls)
}

/// Levels of the `E_s` members: an even grid on `[-6, 0]`; members with odd
/// position are replaced by their complement, which has level `-s`.
fn sharp_levels(count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![-3.0],
        _ => (0..count).map(|j| -6.0 * j as f64 / (count - 1) as f64).collect(),
    }
}

/// Mixed corpus of `n` sets: 70% random unions, 15% the two-ray family
/// `E_s`, 10% centered balls in dimensions 2–10 and 5% slabs in dimensions
/// 2–6. Every member is a pure function of `(seed, index)`.
pub fn build_corpus(n: usize, seed: u64) -> Result<Vec<CorpusMember>> {
    let (n_random, n_sharp, n_balls, _) = family_counts(n);
    let levels = sharp_levels(n_sharp);
    (0..n)
        .map(|index| {
            let mut rng = member_rng(seed, index);
            let (family, set) = if index < n_random {
                let spec = RandomSetSpec { seed: rng.next_u64(), ..Default::default() };
                (Family::RandomUnion, random_interval_union(&spec)?.into())
            } else if index < n_random + n_sharp {
                let j = index - n_random;
                let e = sharp_mass_set(levels[j])?;
                let e = if j % 2 == 1 { e.complement() } else { e };
                (Family::SharpMass, e.into())
            } else if index < n_random + n_sharp + n_balls {
                let dim = rng.random_range(2..=10);
                let target = rng.random_range(0.02..0.98);
                (Family::Ball, CenteredBall::new(dim, ball_radius_for_mass(dim, target)?)?.into())
            } else {
                let dim = rng.random_range(2..=6);
                let spec = RandomSetSpec { seed: rng.next_u64(), ..Default::default() };
                (Family::Slab, SlabSet::new(dim, random_interval_union(&spec)?)?.into())
            };
            Ok(CorpusMember { index, family, set })
        })
        .collect()
}
