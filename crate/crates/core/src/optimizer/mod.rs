//! Multistart minimization of `F` over unions of at most four intervals,
//! the half-space profile `t ↦ F(H_t)`, and the two-ray family `E_s`.

mod nelder_mead;
mod sweep;

pub use nelder_mead::{minimize, SimplexOutcome, SimplexSettings};
pub use sweep::{mass_sweep, sharp_mass_set, solve_a, MassSweepRow};

use std::f64::consts::PI;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::{penalized_functional, FunctionalParams};
use crate::sets::{GaussianSet, IntervalUnion1D};
use crate::special::{gauss_weight, phi, phi_inv};

pub const MAX_COMPONENTS: usize = 4;

/// Objective value assigned to endpoint vectors that are not strictly
/// increasing, before adding the size of the violation.
pub const ORDER_PENALTY: f64 = 1e6;

/// Standard deviation of the random endpoint proposal.
pub const PROPOSAL_SCALE: f64 = 2.0;

/// Shape of a union of intervals: an optional left ray `(-∞, e₀)`, some
/// bounded intervals, and an optional right ray `(e_last, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Template {
    pub left_ray: bool,
    pub bounded: usize,
    pub right_ray: bool,
}

impl Template {
    pub fn components(&self) -> usize {
        self.bounded + usize::from(self.left_ray) + usize::from(self.right_ray)
    }

    pub fn endpoint_count(&self) -> usize {
        2 * self.bounded + usize::from(self.left_ray) + usize::from(self.right_ray)
    }

    /// Every template with between 1 and `k_max` components, ordered by
    /// component count.
    pub fn enumerate(k_max: usize) -> Vec<Template> {
        let mut out = Vec::new();
        for k in 1..=k_max {
            for (left_ray, right_ray) in [(true, false), (false, true), (false, false), (true, true)] {
                let rays = usize::from(left_ray) + usize::from(right_ray);
                if rays <= k {
                    out.push(Template { left_ray, bounded: k - rays, right_ray });
                }
            }
        }
        out
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.left_ray {
            parts.push("L".to_string());
        }
        if self.bounded > 0 {
            parts.push(format!("{}B", self.bounded));
        }
        if self.right_ray {
            parts.push("R".to_string());
        }
        f.write_str(&parts.join("+"))
    }
}

/// A template with its finite endpoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KIntervalConfig {
    pub template: Template,
    pub endpoints: Vec<f64>,
}

impl KIntervalConfig {
    /// Total amount by which consecutive endpoints fail to increase.
    pub fn order_violation(&self) -> f64 {
        self.endpoints.windows(2).map(|w| (w[0] - w[1]).max(0.0)).sum()
    }

    pub fn decode(&self) -> Result<IntervalUnion1D> {
        if self.endpoints.len() != self.template.endpoint_count() {
            return Err(Error::InvalidArgument(format!(
                "template {} needs {} endpoints, got {}",
                self.template,
                self.template.endpoint_count(),
                self.endpoints.len()
            )));
        }
        if self.endpoints.iter().any(|x| !x.is_finite()) || self.endpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("endpoints must be finite and strictly increasing".into()));
        }
        let mut e = self.endpoints.iter().copied();
        let mut raw = Vec::with_capacity(self.template.components());
        if self.template.left_ray {
            raw.push((f64::NEG_INFINITY, e.next().expect("counted")));
        }
        for _ in 0..self.template.bounded {
            raw.push((e.next().expect("counted"), e.next().expect("counted")));
        }
        if self.template.right_ray {
            raw.push((e.next().expect("counted"), f64::INFINITY));
        }
        IntervalUnion1D::normalize(raw)
    }

    /// `F` of the decoded set, or the ordering penalty.
    pub fn objective(&self, params: &FunctionalParams) -> f64 {
        match self.decode() {
            Ok(u) => penalized_functional(&GaussianSet::from(u), params),
            Err(_) => ORDER_PENALTY + self.order_violation(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerSettings {
    pub multistarts: usize,
    pub seed: u64,
    pub step_tol: f64,
    pub f_tol: f64,
    pub max_iters: usize,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self { multistarts: 64, seed: 0, step_tol: 1e-10, f_tol: 1e-12, max_iters: 10_000 }
    }
}

impl OptimizerSettings {
    fn validate(&self) -> Result<()> {
        if self.multistarts == 0 || self.max_iters == 0 {
            return Err(Error::InvalidArgument("multistarts and max_iters must be positive".into()));
        }
        if !(self.step_tol > 0.0 && self.f_tol > 0.0) {
            return Err(Error::InvalidArgument("tolerances must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StartKind {
    HalfLine,
    ReflectedHalfLine,
    SharpMass,
    SymmetricInterval,
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StartDiagnostics {
    pub index: usize,
    pub kind: StartKind,
    pub template: String,
    pub start_f: f64,
    pub final_f: f64,
    pub iterations: usize,
    pub converged: bool,
    pub endpoints: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimizeReport {
    pub best: KIntervalConfig,
    pub best_f: f64,
    pub best_index: usize,
    /// `γ` of the returned set, which need not equal `φ(s)` for arbitrary
    /// `(ε, Λ)`.
    pub achieved_mass: f64,
    /// `F((-∞, s))`.
    pub half_line_f: f64,
    /// False when some explored configuration beats the half-line by more
    /// than `f_tol`.
    pub half_line_is_best: bool,
    pub starts: Vec<StartDiagnostics>,
}

impl MinimizeReport {
    pub fn best_set(&self) -> IntervalUnion1D {
        self.best.decode().expect("optimizer returns decodable configurations")
    }
}

struct Start {
    kind: StartKind,
    config: KIntervalConfig,
}

fn deterministic_starts(s: f64, templates: &[Template]) -> Result<Vec<Start>> {
    let has = |t: Template| templates.contains(&t);
    let left = Template { left_ray: true, bounded: 0, right_ray: false };
    let right = Template { left_ray: false, bounded: 0, right_ray: true };
    let single = Template { left_ray: false, bounded: 1, right_ray: false };
    let rays = Template { left_ray: true, bounded: 0, right_ray: true };
    let mut out = vec![
        Start { kind: StartKind::HalfLine, config: KIntervalConfig { template: left, endpoints: vec![s] } },
        Start { kind: StartKind::ReflectedHalfLine, config: KIntervalConfig { template: right, endpoints: vec![-s] } },
    ];
    if has(single) {
        let c = -phi_inv(0.5 * (1.0 - phi(s)))?;
        out.push(Start {
            kind: StartKind::SymmetricInterval,
            config: KIntervalConfig { template: single, endpoints: vec![-c, c] },
        });
    }
    if has(rays) {
        let a = solve_a(s)?;
        out.push(Start {
            kind: StartKind::SharpMass,
            config: KIntervalConfig { template: rays, endpoints: vec![a, -a] },
        });
    }
    Ok(out)
}

fn random_start(template: Template, seed: u64, index: usize) -> KIntervalConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let proposal = Normal::new(0.0, PROPOSAL_SCALE).expect("positive scale");
    let mut endpoints: Vec<f64> = (0..template.endpoint_count()).map(|_| proposal.sample(&mut rng)).collect();
    endpoints.sort_by(f64::total_cmp);
    KIntervalConfig { template, endpoints }
}

/// Minimizes `F` over unions of at most `k_max` intervals.
///
/// Starts are the half-line `(-∞, s)` and its mirror `(-s, ∞)`, the
/// symmetric interval and the two-ray set `E_s` of mass `φ(s)`, and
/// `settings.multistarts` random configurations cycling through all
/// templates. Each start runs a simplex search on the endpoint vector.
/// Among results within `f_tol` of the lowest value the one with the fewest
/// boundary points, then the lowest start index, wins.
pub fn minimize_f(
    s: f64,
    params: &FunctionalParams,
    k_max: usize,
    settings: &OptimizerSettings,
) -> Result<MinimizeReport> {
    if !(1..=MAX_COMPONENTS).contains(&k_max) {
        return Err(Error::InvalidArgument(format!("k_max must lie in [1, {MAX_COMPONENTS}], got {k_max}")));
    }
    if !s.is_finite() {
        return Err(Error::InvalidArgument(format!("mass level must be finite, got {s}")));
    }
    settings.validate()?;

    let templates = Template::enumerate(k_max);
    let mut starts = deterministic_starts(s, &templates)?;
    let offset = starts.len();
    for i in 0..settings.multistarts {
        let template = templates[i % templates.len()];
        starts.push(Start { kind: StartKind::Random, config: random_start(template, settings.seed, offset + i) });
    }

    let simplex = SimplexSettings {
        initial_step: 0.25,
        step_tol: settings.step_tol,
        f_tol: settings.f_tol,
        max_iters: settings.max_iters,
        restarts: 3,
    };
    let runs: Vec<StartDiagnostics> = starts
        .par_iter()
        .enumerate()
        .map(|(index, start)| {
            let template = start.config.template;
            let objective = |x: &[f64]| KIntervalConfig { template, endpoints: x.to_vec() }.objective(params);
            let start_f = objective(&start.config.endpoints);
            let out = minimize(&objective, &start.config.endpoints, &simplex);
            StartDiagnostics {
                index,
                kind: start.kind,
                template: template.to_string(),
                start_f,
                final_f: out.f,
                iterations: out.iterations,
                converged: out.converged,
                endpoints: out.x,
            }
        })
        .collect();

    let usable: Vec<&StartDiagnostics> =
        runs.iter().filter(|r| r.final_f.is_finite() && r.final_f < ORDER_PENALTY).collect();
    let lowest = usable
        .iter()
        .map(|r| r.final_f)
        .min_by(f64::total_cmp)
        .ok_or_else(|| Error::NoConvergence("every optimizer start failed".into()))?;
    let winner = usable
        .iter()
        .filter(|r| r.final_f <= lowest + settings.f_tol)
        .min_by_key(|r| (r.endpoints.len(), r.index))
        .expect("lowest is attained");
    let best = KIntervalConfig { template: starts[winner.index].config.template, endpoints: winner.endpoints.clone() };
    let set = best.decode()?;
    let half_line_f = penalized_functional(&GaussianSet::from(IntervalUnion1D::lower_half_line(s)), params);
    Ok(MinimizeReport {
        achieved_mass: set.measure(),
        best_f: winner.final_f,
        best_index: winner.index,
        half_line_is_best: lowest >= half_line_f - settings.f_tol,
        half_line_f,
        best,
        starts: runs,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfSpaceProfile {
    pub t: Vec<f64>,
    pub values: Vec<f64>,
    pub argmin: f64,
}

/// `f(t) = F(H_t) = e^{-t²/2} + ε/(4π) e^{-t²} + Λ |φ(t) - φ(s)|` on a grid.
pub fn half_space_profile(s: f64, params: &FunctionalParams, t_grid: &[f64]) -> Result<HalfSpaceProfile> {
    if t_grid.is_empty() || t_grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidArgument("t grid must be nonempty and finite".into()));
    }
    let target = phi(s);
    let values: Vec<f64> = t_grid
        .iter()
        .map(|&t| {
            let w = gauss_weight(t);
            w + params.eps / (4.0 * PI) * w * w + params.lambda_pen * (phi(t) - target).abs()
        })
        .collect();
    let (i, _) = values.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("grid is nonempty");
    Ok(HalfSpaceProfile { t: t_grid.to_vec(), argmin: t_grid[i], values })
}

/// `start, start + step, …` up to and including `end` (within half a step).
pub fn uniform_grid(start: f64, end: f64, step: f64) -> Vec<f64> {
    let n = ((end - start) / step + 0.5).floor() as usize;
    (0..=n).map(|i| start + i as f64 * step).collect()
}
