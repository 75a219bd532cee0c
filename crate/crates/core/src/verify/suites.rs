//! The verification suites: each check evaluates one inequality or identity
//! over the corpus or over a grid and tallies violations.

use std::collections::BTreeMap;
use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use super::corpus::{build_corpus, CorpusMember, Family};
use super::report::{CheckResult, VerificationReport};
use crate::error::{Error, Result};
use crate::functionals::{
    fraenkel_hat, penalized_functional, stability_constants, strong_asym, FunctionalParams, QuantityBundle,
    STABILITY_CONSTANT,
};
use crate::optimizer::{
    half_space_profile, mass_sweep, minimize_f, sharp_mass_set, solve_a, uniform_grid, OptimizerSettings,
};
use crate::quad::{adaptive_quad, QuadSettings};
use crate::sets::{mc_barycenter, mc_measure, GaussianSet, IntervalUnion1D};
use crate::special::{density, gauss_weight, ln_gamma_half, mills_ratio, phi, phi_inv, SQRT_2PI};
use crate::stationarity::{
    euler_residual, lagrange_bound_check, mass_preserving_second_derivative, psd_on_zero_average, second_variation_form,
};

/// `A ≤ B` is violated when `A - B > VIOLATION_RTOL · max(1, |B|)`.
pub const VIOLATION_RTOL: f64 = 1e-9;

/// Equalities that should hold exactly (half-spaces in the isoperimetric and
/// barycenter inequalities) are accepted below this slack, strict
/// inequalities must clear it.
pub const EQUALITY_TOL: f64 = 1e-10;

/// Levels of the deficit-to-asymmetry sweep along `E_s`.
pub const SWEEP_LEVELS: [f64; 5] = [-3.0, -5.0, -10.0, -15.0, -20.0];

/// Levels at which the optimizer is run.
pub const OPTIMIZER_LEVELS: [f64; 4] = [0.0, -0.5, -1.0, -2.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    MeasureOracle,
    Iso,
    BarycenterMax,
    Main,
    StrongVsStandard,
    AlphaHatCorollary,
    ExcessIdentity,
    ScalarFunctions,
    Stationarity,
    All,
}

impl Suite {
    /// Every concrete suite, in the order `all` runs them.
    pub const CONCRETE: [Suite; 9] = [
        Suite::MeasureOracle,
        Suite::Iso,
        Suite::BarycenterMax,
        Suite::Main,
        Suite::StrongVsStandard,
        Suite::AlphaHatCorollary,
        Suite::ExcessIdentity,
        Suite::ScalarFunctions,
        Suite::Stationarity,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::MeasureOracle => "measure-oracle",
            Suite::Iso => "iso",
            Suite::BarycenterMax => "barycenter-max",
            Suite::Main => "main",
            Suite::StrongVsStandard => "strong-vs-standard",
            Suite::AlphaHatCorollary => "alpha-hat-corollary",
            Suite::ExcessIdentity => "excess-identity",
            Suite::ScalarFunctions => "scalar-functions",
            Suite::Stationarity => "stationarity",
            Suite::All => "all",
        }
    }

    fn needs_corpus(&self) -> bool {
        !matches!(self, Suite::Stationarity)
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::CONCRETE
            .iter()
            .chain([Suite::All].iter())
            .find(|suite| suite.name() == s)
            .copied()
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    /// Corpus size.
    pub samples: usize,
    pub seed: u64,
    /// Constant in `β ≤ c(1+s²)D`; overriding it demonstrates that the
    /// suite detects a constant that is too small.
    pub c: f64,
    pub optimizer_starts: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { samples: 10_000, seed: 42, c: STABILITY_CONSTANT, optimizer_starts: 64 }
    }
}

/// Running count of samples, violations and the worst slack.
struct Tally {
    samples: u64,
    violations: u64,
    worst: f64,
    params: BTreeMap<String, f64>,
}

impl Tally {
    fn new() -> Self {
        Self { samples: 0, violations: 0, worst: f64::INFINITY, params: BTreeMap::new() }
    }

    /// Records a slack; negative (or NaN) counts as a violation.
    fn push(&mut self, margin: f64) {
        let margin = if margin.is_nan() { f64::NEG_INFINITY } else { margin };
        self.samples += 1;
        if margin < 0.0 {
            self.violations += 1;
        }
        self.worst = self.worst.min(margin);
    }

    /// `a ≤ b` up to [`VIOLATION_RTOL`].
    fn le(&mut self, a: f64, b: f64) {
        self.push(b - a + VIOLATION_RTOL * b.abs().max(1.0));
    }

    fn ge(&mut self, a: f64, b: f64) {
        self.le(b, a);
    }

    /// `|diff| ≤ tol`.
    fn within(&mut self, diff: f64, tol: f64) {
        self.push(tol - diff.abs());
    }

    /// `value > 0`, with no tolerance.
    fn positive(&mut self, value: f64) {
        self.samples += 1;
        if !(value > 0.0) {
            self.violations += 1;
        }
        self.worst = self.worst.min(if value.is_nan() { f64::NEG_INFINITY } else { value });
    }

    fn param(&mut self, key: &str, value: f64) {
        self.params.insert(key.to_string(), value);
    }

    fn finish(self, name: &str, anchor: &str, seed: u64, started: Instant) -> CheckResult {
        CheckResult {
            name: name.to_string(),
            anchor: anchor.to_string(),
            samples: self.samples,
            violations: self.violations,
            worst_margin: if self.samples == 0 { f64::INFINITY } else { self.worst },
            params: self.params,
            seed,
            wall_time: started.elapsed().as_secs_f64(),
        }
    }
}

/// Everything the corpus checks need about one member.
struct MemberEval {
    set: GaussianSet,
    half_space: bool,
    q: QuantityBundle,
    /// `(β, α̂)` of the complement, when it has a representation.
    complement: Option<(f64, f64)>,
}

impl MemberEval {
    fn new(member: &CorpusMember) -> Result<Self> {
        let q = QuantityBundle::compute(&member.set)?;
        let complement = match member.set.complement() {
            Ok(c) => Some((strong_asym(&c)?, fraenkel_hat(&c)?)),
            Err(Error::Unsupported(_)) => None,
            Err(e) => return Err(e),
        };
        Ok(Self { set: member.set.clone(), half_space: member.set.is_half_space(), q, complement })
    }

    fn weight_s(&self) -> f64 {
        gauss_weight(self.q.s)
    }

    /// The one-dimensional profile of intervals and slabs.
    fn profile(&self) -> Option<&IntervalUnion1D> {
        match &self.set {
            GaussianSet::Intervals(u) => Some(u),
            GaussianSet::Slab(s) => Some(s.profile()),
            _ => None,
        }
    }
}

struct Context {
    config: SuiteConfig,
    corpus: Vec<CorpusMember>,
    evals: Vec<MemberEval>,
}

type Check = fn(&Context) -> Result<CheckResult>;

fn checks_for(suite: Suite) -> Vec<Check> {
    match suite {
        Suite::MeasureOracle => {
            vec![measure_quadrature, barycenter_quadrature, ball_measure_quadrature, monte_carlo_measure]
        }
        Suite::Iso => vec![isoperimetric, isoperimetric_equality],
        Suite::BarycenterMax => vec![barycenter_maximality, barycenter_equality],
        Suite::Main => vec![stability_inequality, deficit_chain, mass_sweep_bound, mass_sweep_plateau],
        Suite::StrongVsStandard => vec![strong_vs_standard, complement_symmetry],
        Suite::AlphaHatCorollary => vec![alpha_hat_corollary],
        Suite::ExcessIdentity => vec![excess_identity],
        Suite::ScalarFunctions => vec![
            g_nonpositive,
            f_nonnegative,
            g_t_nonnegative,
            lambda_bound,
            eps_barycenter_quarter,
            half_space_functional_bound,
            slab_competitor,
            slab_transverse_barycenter,
        ],
        Suite::Stationarity => vec![
            sharp_mass_critical,
            sharp_mass_unstable,
            second_variation_witness,
            second_variation_fd,
            half_line_lagrange,
            half_space_profile_argmin,
            optimizer_half_line,
        ],
        Suite::All => Suite::CONCRETE.iter().flat_map(|s| checks_for(*s)).collect(),
    }
}

/// Runs the named suite on a corpus of `config.samples` sets.
pub fn run_suite(name: &str, config: &SuiteConfig) -> Result<VerificationReport> {
    let suite: Suite = name.parse()?;
    let started = Instant::now();
    let needs_corpus = match suite {
        Suite::All => true,
        s => s.needs_corpus(),
    };
    let corpus = if needs_corpus { build_corpus(config.samples, config.seed)? } else { Vec::new() };
    let evals = corpus.par_iter().map(MemberEval::new).collect::<Result<Vec<_>>>()?;
    let ctx = Context { config: *config, corpus, evals };
    let checks = checks_for(suite).into_iter().map(|check| check(&ctx)).collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport {
        suite: suite.name().to_string(),
        seed: config.seed,
        samples: config.samples as u64,
        checks,
        wall_time: started.elapsed().as_secs_f64(),
    })
}

// ---------------------------------------------------------------- oracles

const ORACLE_TOL: f64 = 1e-11;

fn quad_over(u: &IntervalUnion1D, f: impl Fn(f64) -> f64 + Copy) -> Result<f64> {
    let mut total = 0.0;
    for &(lo, hi) in u.intervals() {
        total += adaptive_quad(f, lo, hi, QuadSettings::default())?.value;
    }
    Ok(total)
}

fn measure_quadrature(ctx: &Context) -> Result<CheckResult> {
    let t = Instant::now();
    let diffs = ctx
        .evals
        .par_iter()
        .filter_map(|e| e.profile().map(|u| (u, e.q.gamma)))
        .map(|(u, gamma)| Ok(quad_over(u, density)? - gamma))
        .collect::<Result<Vec<_>>>()?;
    let mut tally = Tally::new();
    diffs.into_iter().for_each(|d| tally.within(d, ORACLE_TOL));
    tally.param("tol", ORACLE_TOL);
    Ok(tally.finish("measure-quadrature", "gamma(E) = int_E exp(-x^2/2) dx / sqrt(2 pi)", ctx.config.seed, t))
}

fn barycenter_quadrature(ctx: &Context) -> Result<CheckResult> {
    let t = Instant::now();
    let diffs = ctx
        .evals
        .par_iter()
        .filter_map(|e| e.profile())
        .map(|u| Ok(quad_over(u, |x| x * density(x))? - u.barycenter()))
        .collect::<Result<Vec<_>>>()?;
    let mut tally = Tally::new();
    diffs.into_iter().for_each(|d| tally.within(d, ORACLE_TOL));
    tally.param("tol", ORACLE_TOL);
    Ok(tally.finish("barycenter-quadrature", "b(E) = int_E x exp(-x^2/2) dx / sqrt(2 pi)", ctx.config.seed, t))
}

fn ball_measure_quadrature(ctx: &Context) -> Result<CheckResult> {
    let t = Instant::now();
    let diffs = ctx
        .evals
        .par_iter()
        .filter_map(|e| match &e.set {
            GaussianSet::Ball(b) => Some((b.dim(), b.radius(), e.q.gamma)),
            _ => None,
        })
        .map(|(dim, radius, gamma)| {
            let n = dim as f64;
            let log_norm = (1.0 - 0.5 * n) * LN_2 - ln_gamma_half(dim);
            let radial = |r: f64| if r <= 0.0 { 0.0 } else { ((n - 1.0) * r.ln() - 0.5 * r * r + log_norm).exp() };
            Ok(adaptive_quad(radial, 0.0, radius, QuadSettings::default())?.value - gamma)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut tally = Tally::new();
    diffs.into_iter().for_each(|d| tally.within(d, ORACLE_TOL));
    tally.param("tol", ORACLE_TOL);
    Ok(tally.finish("ball-measure-quadrature", "gamma(B_R) = P(chi2_n <= R^2)", ctx.config.seed, t))
}

const MC_SETS: usize = 60;
const MC_SAMPLES: usize = 20_000;
const MC_SIGMAS: f64 = 5.0;

fn monte_carlo_measure(ctx: &Context) -> Result<CheckResult> {
    let t = Instant::now();
    // a fixed number of members from every family, spread over the corpus
    let stride = (ctx.corpus.len() / MC_SETS).max(1);
    let picked: Vec<&CorpusMember> = ctx.corpus.iter().step_by(stride).take(MC_SETS).collect();
    let margins: Vec<f64> = picked
        .par_iter()
        .map(|m| {
            let exact = m.set.measure();
            let est = mc_measure(&m.set, MC_SAMPLES, ctx.config.seed ^ (m.index as u64).rotate_left(32));
            let sigma = (exact * (1.0 - exact) / MC_SAMPLES as f64).sqrt();
            MC_SIGMAS * sigma - (est.estimate - exact).abs()
        })
        .collect();
    let mut tally = Tally::new();
    margins.into_iter().for_each(|m| tally.push(m));
    tally.param("mc_samples", MC_SAMPLES as f64);
    tally.param("sigmas", MC_SIGMAS);
    Ok(tally.finish("monte-carlo-measure", "|gamma_MC(E) - gamma(E)| <= 5 sigma", ctx.config.seed, t))
}

// ------------------------------------------------------- corpus inequalities

fn isoperimetric(ctx: &Context) -> Result<CheckResult> {
    let t = Instant::now();
    let mut tally = Tally::new();
    for e in &ctx.evals {
        tally.ge(e.q.perimeter, e.weight_s());
    }
    Ok(tally.finish("isoperimetric", "P(E) >= exp(-s^2/2)", ctx.config.seed, t))
}

fn equality_on_half_spaces(tally: &mut Tally, evals: &[MemberEval], slack: impl Fn(&MemberEval) -> f64) {
    let mut half_spaces = 0.0;
    for e in evals {
        if e.half_space {
            half_spaces += 1.0;
            tally.within(slack(e), EQUALITY_TOL);
        } else {
            tally.push(slack(e) - EQUALITY_TOL);
        }
    }
    tally.param("half_spaces", half_spaces);
    tally.param("tol", EQUALITY_TOL);
}

fn isoperimetric_equality(ctx: &Context) -> Result<CheckResult> {
    let t = Instant::now();
    let mut tally = Tally::new();
    equality_on_half_spaces(&mut tally, &ctx.evals, |e| e.q.deficit);
    Ok(tally.finish("isoperimetric-equality", "P(E) = exp(-s^2/2) exactly for half-spaces", ctx.config.seed, t))
}

fn barycenter_maximality(ctx: &Context) -> Result<CheckResult> {
    let t = Instant::now();
    let mut tally = Tally::new();
    for e in &ctx.evals {
        tally.le(e.q.barycenter_norm(), e.q.b_s);
    }
    Ok(tally.finish("barycenter-maximality", "|b(E)| <= b_s", ctx.config.seed, t))
}

fn barycenter_equality(ctx: &Context) -> Result<CheckResult> {
    let t = Instant::now();
    let mut tally = Tally::new();
    equality_on_half_spaces(&mut tally, &ctx.evals, |e| e.q.beta);
    Ok(tally.finish("barycenter-equality", "|b(E)| = b_s exactly for half-spaces", ctx.config.seed, t))
}

/// Ratios `bound / value` below which `value ≤ bound` would fail, over
/// members with a non-negligible `value`.
fn min_ratio(
    evals: &[MemberEval],
    value: impl Fn(&MemberEval) -> f64,
    bound: impl Fn(&MemberEval) -> f64,
) -> (f64, f64) {
    evals
        .iter()
        .enumerate()
        .filter(|(_, e)| value(e) > 1e-12)
        .map(|(i, e)| (bound(e) / value(e), i as f64))
        .fold((f64::INFINITY, -1.0), |acc, x| if x.0 < acc.0 { x } else { acc })
}

fn stability_inequality(ctx: &Context) -> Result<CheckResult> {
    let t = Instant::now();
    let c = ctx.config.c;
    let bound = |e: &MemberEval| c * (1.0 + e.q.s * e.q.s) * e.q.deficit;
    let mut tally = Tally::new();
    for e in &ctx.evals {
        tally.le(e.q.beta, bound(e));
    }
    let (ratio, at) = min_ratio(&ctx.evals, |e| e.q.beta, bound);
    tally.param("c", c);
    tally.param("min_ratio", ratio);
    tally.param("min_ratio_index", at);
    Ok(tally.finish("stability-inequality", "beta <= c (1+s^2) D", ctx.config.seed, t))
}

fn deficit_chain(ctx: &Context) -> Result<CheckResult> {
    let t = Instant::now();
    let mut tally = Tally::new();
    for e in &ctx.evals {
        let (lhs, rhs) = e.q.deficit_chain(stability_constants(e.q.s).eps);
        tally.within(lhs - rhs, 1e-12);
    }
    Ok(tally.finish("deficit-chain", "eps/2 (b_s^2 - |b|^2) = eps/2 (b_s + |b|) beta", ctx.config.seed, t))
}

fn mass_sweep_bound(ctx: &Context) -> Result<CheckResult> {
    let t = Instant::now();
    let mut tally = Tally::new();
    for row in mass_sweep(&SWEEP_LEVELS)? {
        tally.le(row.ratio, 2.0);
        tally.param(&format!("ratio_at_{}", row.s), row.ratio);
    }
    tally.param("asymptote", SQRT_2PI * LN_2);
    Ok(tally.finish("mass-sweep-bound", "D(E_s) / (s^-2 beta(E_s)) <= 2", ctx.config.seed, t))
}

fn mass_sweep_plateau(ctx: &Context) -> Result<CheckResult> {
    let t = Instant::now();
    let rows = mass_sweep(&[-20.0, -15.0])?;
    let variation = (rows[1].ratio - rows[0].ratio).abs() / rows[0].ratio;
    let mut tally = Tally::new();
    tally.push(0.01 - variation);
    tally.param("relative_variation", variation);
    tally.param("gap_to_asymptote", SQRT_2PI * LN_2 - rows[0].ratio);
    Ok(tally.finish("mass-sweep-plateau", "|r(-15) - r(-20)| < 0.01 r(-20)", ctx.config.seed, t))
}

fn strong_vs_standard(ctx: &Context) -> Result<CheckResult> {
    let t = Instant::now();
    let bound = |e: &MemberEval| 0.25 * (0.5 * e.q.s * e.q.s).exp() * e.q.alpha_hat * e.q.alpha_hat;
    let mut tally = Tally::new();
    for e in &ctx.evals {
        tally.ge(e.q.beta, bound(e));
    }
    let (ratio, _) = min_ratio(&ctx.evals, bound, |e| e.q.beta);
    tally.param("min_ratio", ratio);
    Ok(tally.finish("strong-vs-standard", "beta >= exp(s^2/2) alpha_hat^2 / 4", ctx.config.seed, t))
}

fn complement_symmetry(ctx: &Context) -> Result<CheckResult> {
    let t = Instant::now();
    let mut tally = Tally::new();
    for e in &ctx.evals {
        if let Some((beta_c, alpha_c)) = e.complement {
            tally.within((e.q.beta - beta_c).abs().max((e.q.alpha_hat - alpha_c).abs()), 1e-12);
        }
    }
    Ok(tally.finish("complement-symmetry", "beta(E) = beta(E^c), alpha_hat(E) = alpha_hat(E^c)", ctx.config.seed, t))
}

fn alpha_hat_corollary(ctx: &Context) -> Result<CheckResult> {
    let t = Instant::now();
    let c = ctx.config.c;
    let bound = |e: &MemberEval| c * (1.0 + e.q.s * e.q.s) * e.weight_s() * e.q.deficit;
    let mut tally = Tally::new();
    for e in &ctx.evals {
        tally.le(e.q.alpha_hat * e.q.alpha_hat, bound(e));
    }
    let (ratio, _) = min_ratio(&ctx.evals, |e| e.q.alpha_hat * e.q.alpha_hat, bound);
    tally.param("c", c);
    tally.param("min_ratio", ratio);
    Ok(tally.finish("alpha-hat-corollary", "alpha_hat^2 <= c (1+s^2) exp(-s^2/2) D", ctx.config.seed, t))
}

fn excess_identity(ctx: &Context) -> Result<CheckResult> {
    let t = Instant::now();
    let mut tally = Tally::new();
    let mut worst = 0.0f64;
    for e in &ctx.evals {
        let via = 2.0 * e.q.deficit + 2.0 * SQRT_2PI * e.q.beta;
        let diff = (e.q.excess - via).abs();
        worst = worst.max(diff);
        tally.within(diff, 1e-10 * via.abs() + 1e-14);
    }
    tally.param("max_abs_difference", worst);
    Ok(tally.finish("excess-identity", "excess = 2 D + 2 sqrt(2 pi) beta", ctx.config.seed, t))
}

// ------------------------------------------------------- scalar functions

fn grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..=n).map(move |i| lo + (hi - lo) * i as f64 / n as f64)
}

/// `e^{s²/2} φ(s) √(2π)` for `s ≤ 0`.
fn scaled_phi(s: f64) -> f64 {
    mills_ratio(-s)
}

fn g_nonpositive(ctx: &Context) -> Result<CheckResult> {
    let t = Instant::now();
    let mut tally = Tally::new();
    // g(s) e^{s²/2} = 1 + (√(2π) s - π) φ(s) e^{s²/2}
    let scaled_g = |s: f64| 1.0 + (SQRT_2PI * s - PI) * scaled_phi(s) / SQRT_2PI;
    for s in grid(-40.0, 0.0, 40_000) {
        tally.le(scaled_g(s), 0.0);
    }
    tally.param("g_at_0", scaled_g(0.0));
    Ok(tally.finish("g-nonpositive", "exp(-s^2/2) + (sqrt(2 pi) s - pi) phi(s) <= 0 on [-40, 0]", ctx.config.seed, t))
}

fn f_nonnegative(ctx: &Context) -> Result<CheckResult> {
    let t = Instant::now();
    let mut tally = Tally::new();
    for s in grid(-40.0, 0.0, 40_000) {
        tally.ge(1.0, 2.0 * scaled_phi(s) / SQRT_2PI);
    }
    Ok(tally.finish("f-nonnegative", "exp(-s^2/2) >= 2 phi(s) on [-40, 0]", ctx.config.seed, t))
}

/// `e^{s²/2} g(t)` for
/// `g(t) = ∫_{s-t}^s (s - x) e^{-x²/2} dx - e^{s²/2}/2 (∫_{s-t}^s e^{-x²/2} dx)²`.
pub fn scaled_g_of_t(s: f64, t: f64) -> f64 {
    let decay = (0.5 * t * (2.0 * s - t)).exp();
    // M = e^{s²/2} ∫_{s-t}^s e^{-x²/2} dx
    let m = scaled_phi(s) - scaled_phi(s - t) * decay;
    s * m + 1.0 - decay - 0.5 * m * m
}

fn g_t_nonnegative(ctx: &Context) -> Result<CheckResult> {
    let t = Instant::now();
    let mut tally = Tally::new();
    for s in grid(-10.0, 0.0, 40) {
        for tt in grid(0.0, 40.0, 4000) {
            tally.ge(scaled_g_of_t(s, tt), 0.0);
        }
    }
    Ok(tally.finish(
        "g-t-nonnegative",
        "int_{s-t}^s (s-x) exp(-x^2/2) dx >= exp(s^2/2)/2 (int_{s-t}^s exp(-x^2/2) dx)^2 for t >= 0",
        ctx.config.seed,
        t,
    ))
}

fn lambda_bound(ctx: &Context) -> Result<CheckResult> {
    let t = Instant::now();
    let mut tally = Tally::new();
    for s in grid(-40.0, 0.0, 40_000) {
        let l = stability_constants(s).lambda_pen;
        tally.le(l * l + 1.0, 4.5 * PI * PI * (1.0 + s * s));
    }
    Ok(tally.finish("lambda-bound", "Lambda^2 + 1 <= 9/2 pi^2 (1+s^2) on [-40, 0]", ctx.config.seed, t))
}

fn eps_barycenter_quarter(ctx: &Context) -> Result<CheckResult> {
    let t = Instant::now();
    let mut tally = Tally::new();
    for s in grid(-30.0, 0.0, 30_000) {
        let eps = stability_constants(s).eps;
        tally.le(eps * 10.0 / 9.0 * gauss_weight(s) / SQRT_2PI, 0.25);
    }
    Ok(tally.finish("eps-barycenter-quarter", "eps (10/9) b_s <= 1/4 on [-30, 0]", ctx.config.seed, t))
}

fn half_space_functional_bound(ctx: &Context) -> Result<CheckResult> {
    let t = Instant::now();
    let mut tally = Tally::new();
    for s in grid(-5.0, 0.0, 5_000) {
        let p = FunctionalParams::with_stability_constants(s)?;
        let f = penalized_functional(&IntervalUnion1D::lower_half_line(s).into(), &p);
        tally.le(f, 10.0 / 9.0 * gauss_weight(s));
    }
    Ok(tally.finish("half-space-functional-bound", "F(H_s) <= (10/9) exp(-s^2/2) on [-5, 0]", ctx.config.seed, t))
}

/// `(β(E), β(F), √(π/2) e^{s²/2} γ(E \ H)²)` for the slab competitor `F`
/// built from `E` and `H = {x·ω < s}`, `ω = -b/|b|`: `F` keeps the mass of
/// `E \ H` just above `s` and the mass of `E ∩ H` at the bottom.
fn slab_competitor_terms(u: &IntervalUnion1D) -> Result<Option<(f64, f64, f64)>> {
    let set = GaussianSet::from(u.clone());
    let mut s = set.mass_level();
    let mut u = u.clone();
    if s > 0.0 {
        u = u.complement();
        s = -s;
    }
    if u.barycenter().abs() < 1e-12 {
        return Ok(None);
    }
    if u.barycenter() > 0.0 {
        u = u.reflect();
    }
    let beta_e = strong_asym(&GaussianSet::from(u.clone()))?;
    let h = IntervalUnion1D::lower_half_line(s);
    let m = u.difference(&h).measure();
    let lo = phi_inv((phi(s) - m).max(0.0))?;
    let hi = phi_inv((phi(s) + m).min(1.0))?;
    let raw = [(f64::NEG_INFINITY, lo), (s, hi.max(s))];
    let f = IntervalUnion1D::normalize(raw.into_iter().filter(|(a, b)| a < b))?;
    let beta_f = strong_asym(&GaussianSet::from(f))?;
    Ok(Some((beta_e, beta_f, (0.5 * PI).sqrt() * (0.5 * s * s).exp() * m * m)))
}

fn slab_competitor(ctx: &Context) -> Result<CheckResult> {
    let t = Instant::now();
    let terms =
        ctx.evals.par_iter().filter_map(|e| e.profile()).map(slab_competitor_terms).collect::<Result<Vec<_>>>()?;
    let mut tally = Tally::new();
    let mut chain = 0.0;
    let mut chain_violations = 0.0;
    for (beta_e, beta_f, bound) in terms.into_iter().flatten() {
        tally.ge(beta_f, bound);
        chain += 1.0;
        if beta_e - beta_f < -VIOLATION_RTOL {
            chain_violations += 1.0;
            tally.push(beta_e - beta_f);
        }
    }
    tally.param("chain_samples", chain);
    tally.param("chain_violations", chain_violations);
    Ok(tally.finish(
        "slab-competitor",
        "beta(E) >= beta(F) >= sqrt(pi/2) exp(s^2/2) gamma(E \\ H)^2",
        ctx.config.seed,
        t,
    ))
}

fn slab_transverse_barycenter(ctx: &Context) -> Result<CheckResult> {
    let t = Instant::now();
    let slabs: Vec<&CorpusMember> = ctx.corpus.iter().filter(|m| m.family == Family::Slab).collect();
    let margins: Vec<Vec<f64>> = slabs
        .par_iter()
        .map(|m| {
            // the sampled transverse components must be statistically zero
            let est = mc_barycenter(&m.set, 2_000, ctx.config.seed ^ (m.index as u64).rotate_left(17));
            est[..est.len() - 1].iter().map(|e| MC_SIGMAS * e.std_error - e.estimate.abs()).collect()
        })
        .collect();
    let mut tally = Tally::new();
    margins.into_iter().flatten().for_each(|m| tally.push(m));
    Ok(tally.finish("slab-transverse-barycenter", "<b(E), e_j> = 0 for j < n", ctx.config.seed, t))
}

// ------------------------------------------------------------ stationarity

fn sharp_levels() -> impl Iterator<Item = f64> {
    grid(-6.0, 0.0, 60)
}

fn sharp_mass_critical(ctx: &Context) -> Result<CheckResult> {
    let t = Instant::now();
    let mut tally = Tally::new();
    for s in sharp_levels() {
        let p = FunctionalParams::with_stability_constants(s)?;
        let r = euler_residual(&sharp_mass_set(s)?, &p)?;
        tally.within(r.max_dev, 1e-10);
    }
    Ok(tally.finish(
        "sharp-mass-critical",
        "-x nu + eps b x / sqrt(2 pi) is constant on the boundary of E_s",
        ctx.config.seed,
        t,
    ))
}

fn sharp_mass_unstable(ctx: &Context) -> Result<CheckResult> {
    let t = Instant::now();
    let mut tally = Tally::new();
    for s in sharp_levels() {
        let p = FunctionalParams::with_stability_constants(s)?;
        let (min, _) = psd_on_zero_average(&second_variation_form(&sharp_mass_set(s)?, &p));
        // scaled by the boundary weight so that deep tails stay comparable
        tally.positive(-min / gauss_weight(solve_a(s)?));
    }
    let a = solve_a(0.0)?;
    tally.param("eps_threshold_at_0", PI / (a * a * gauss_weight(a)));
    Ok(tally.finish("sharp-mass-unstable", "min J[phi] < 0 over zero-average phi at E_s", ctx.config.seed, t))
}

fn second_variation_witness(ctx: &Context) -> Result<CheckResult> {
    let t = Instant::now();
    let mut tally = Tally::new();
    for s in sharp_levels() {
        for eps in [stability_constants(s).eps, 2.0, 20.0] {
            let p = FunctionalParams::new(s, eps, 1.0)?;
            let form = second_variation_form(&sharp_mass_set(s)?, &p);
            let (min, witness) = psd_on_zero_average(&form);
            tally.within(form.eval(&witness) - min, 1e-10);
        }
    }
    Ok(tally.finish("second-variation-witness", "J[w] = lambda_min |w|^2", ctx.config.seed, t))
}

fn second_variation_fd(ctx: &Context) -> Result<CheckResult> {
    let t = Instant::now();
    let mut tally = Tally::new();
    let mut worst: f64 = 0.0;
    for s in grid(-3.0, 0.0, 12) {
        let e = sharp_mass_set(s)?;
        for eps in [stability_constants(s).eps, 2.0, 10.0] {
            let p = FunctionalParams::new(s, eps, stability_constants(s).lambda_pen)?;
            let form = second_variation_form(&e, &p);
            let phi = [1.0, -1.0];
            let fd = mass_preserving_second_derivative(&e, &p, &phi, 1e-4)?;
            let rel = ((fd - form.eval(&phi)) / form.eval(&phi)).abs();
            worst = worst.max(rel);
            tally.within(rel, 1e-3);
        }
    }
    tally.param("max_relative_error", worst);
    tally.param("step", 1e-4);
    Ok(tally.finish(
        "second-variation-fd",
        "d^2/dt^2 F(E_t) = J[phi] along mass-preserving motions",
        ctx.config.seed,
        t,
    ))
}

fn half_line_lagrange(ctx: &Context) -> Result<CheckResult> {
    let t = Instant::now();
    let mut tally = Tally::new();
    for s in sharp_levels() {
        let p = FunctionalParams::with_stability_constants(s)?;
        let r = euler_residual(&IntervalUnion1D::lower_half_line(s), &p)?;
        tally.le(r.lambda_fit.abs(), p.lambda_pen);
        debug_assert!(lagrange_bound_check(&r, &p));
    }
    Ok(tally.finish("half-line-lagrange", "|lambda| <= Lambda", ctx.config.seed, t))
}

fn half_space_profile_argmin(ctx: &Context) -> Result<CheckResult> {
    let t = Instant::now();
    let step = 1e-3;
    let t_grid = uniform_grid(-6.0, 2.0, step);
    let mut tally = Tally::new();
    for s in [0.0, -0.5, -1.0, -2.0, -3.0] {
        let p = FunctionalParams::with_stability_constants(s)?;
        let prof = half_space_profile(s, &p, &t_grid)?;
        tally.within(prof.argmin - s, step + 1e-12);
        // far tail: f(-6) ≈ Λφ(s) must exceed f(s)
        let at_s = penalized_functional(&IntervalUnion1D::lower_half_line(s).into(), &p);
        tally.positive(prof.values[0] - at_s);
    }
    Ok(tally.finish("half-space-profile-argmin", "argmin_t F(H_t) = s", ctx.config.seed, t))
}

fn optimizer_half_line(ctx: &Context) -> Result<CheckResult> {
    let t = Instant::now();
    let mut tally = Tally::new();
    let settings =
        OptimizerSettings { multistarts: ctx.config.optimizer_starts, seed: ctx.config.seed, ..Default::default() };
    let mut worst_endpoint: f64 = 0.0;
    let mut worst_value: f64 = 0.0;
    for s in OPTIMIZER_LEVELS {
        let p = FunctionalParams::with_stability_constants(s)?;
        let r = minimize_f(s, &p, 3, &settings)?;
        let set = r.best_set();
        let w = gauss_weight(s);
        let expected = w + p.eps / (4.0 * PI) * w * w;
        let endpoint_err = match set.intervals() {
            [(lo, hi)] if lo.is_infinite() && hi.is_finite() => (hi - s).abs(),
            [(lo, hi)] if hi.is_infinite() && lo.is_finite() => (lo + s).abs(),
            _ => f64::INFINITY,
        };
        worst_endpoint = worst_endpoint.max(endpoint_err);
        worst_value = worst_value.max((r.best_f - expected).abs());
        tally.within(endpoint_err, 1e-6);
        tally.within(r.best_f - expected, 1e-9);
        // Caccioppoli-type bound on the minimizer's boundary
        let second_moment: f64 = set.boundary().iter().map(|(x, _)| x * x * gauss_weight(*x)).sum();
        tally.le(second_moment, 20.0 * PI * PI * (1.0 + s * s) * w);
    }
    tally.param("worst_endpoint_error", worst_endpoint);
    tally.param("worst_value_error", worst_value);
    tally.param("starts", settings.multistarts as f64);
    Ok(tally.finish(
        "optimizer-half-line",
        "argmin F = H_s, F(H_s) = exp(-s^2/2) + eps/(4 pi) exp(-s^2)",
        ctx.config.seed,
        t,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig { samples: 400, seed: 3, optimizer_starts: 8, ..Default::default() }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::CONCRETE {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert!(matches!("nope".parse::<Suite>(), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn every_suite_passes_on_a_small_corpus() {
        for s in Suite::CONCRETE {
            let r = run_suite(s.name(), &small()).unwrap();
            for c in &r.checks {
                assert!(c.passed(), "{}: {:?}", c.name, c);
                assert!(c.samples > 0, "{} has no samples", c.name);
                assert!(c.worst_margin >= 0.0);
            }
        }
    }

    #[test]
    fn g_t_closed_form_matches_quadrature() {
        for &(s, tt) in &[(0.0f64, 1.0f64), (-1.5, 0.3), (-4.0, 2.0)] {
            let first =
                adaptive_quad(|x: f64| (s - x) * gauss_weight(x), s - tt, s, QuadSettings::default()).unwrap().value;
            let mass = adaptive_quad(gauss_weight, s - tt, s, QuadSettings::default()).unwrap().value;
            let g = first - 0.5 * (0.5 * s * s).exp() * mass * mass;
            let want = g * (0.5 * s * s).exp();
            assert!((scaled_g_of_t(s, tt) - want).abs() < 1e-12, "s={s} t={tt}");
        }
    }

    #[test]
    fn halving_the_constant_halves_the_margin_ratio() {
        let base = run_suite("main", &small()).unwrap();
        let ratio = base.check("stability-inequality").unwrap().params["min_ratio"];
        let halved = SuiteConfig { c: STABILITY_CONSTANT / 2.0, ..small() };
        let r = run_suite("main", &halved).unwrap();
        let got = r.check("stability-inequality").unwrap().params["min_ratio"];
        assert!((got - ratio / 2.0).abs() < 1e-9 * ratio);
        let broken = SuiteConfig { c: STABILITY_CONSTANT / (ratio * 1.01), ..small() };
        assert!(run_suite("main", &broken).unwrap().check("stability-inequality").unwrap().violations > 0);
    }
}
