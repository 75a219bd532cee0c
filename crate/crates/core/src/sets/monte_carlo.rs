//! Monte Carlo estimates by direct standard-Gaussian sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::GaussianSet;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
}

fn contains(set: &GaussianSet, x: &[f64]) -> bool {
    match set {
        GaussianSet::Intervals(u) => u.contains(x[0]),
        GaussianSet::HalfSpace(h) => {
            let dot: f64 = h.omega().iter().zip(x).map(|(w, xi)| w * xi).sum();
            dot < h.level()
        }
        GaussianSet::Slab(s) => s.profile().contains(x[s.dim() - 1]),
        GaussianSet::Ball(b) => {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            r2 < b.radius() * b.radius()
        }
    }
}

fn sample_into<R: Rng>(rng: &mut R, x: &mut [f64]) {
    for v in x.iter_mut() {
        *v = rng.sample(StandardNormal);
    }
}

/// Unbiased estimate of `γ(E)`; the generator is derived from `seed` alone.
pub fn mc_measure(set: &GaussianSet, n_samples: usize, seed: u64) -> McEstimate {
    let n_samples = n_samples.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![0.0; set.dim()];
    let mut hits = 0usize;
    for _ in 0..n_samples {
        sample_into(&mut rng, &mut x);
        if contains(set, &x) {
            hits += 1;
        }
    }
    let n = n_samples as f64;
    let p = hits as f64 / n;
    McEstimate { estimate: p, std_error: (p * (1.0 - p) / n).sqrt() }
}

/// Componentwise estimate of `b(E) = ∫_E x dγ`.
pub fn mc_barycenter(set: &GaussianSet, n_samples: usize, seed: u64) -> Vec<McEstimate> {
    let n_samples = n_samples.max(1);
    let dim = set.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![0.0; dim];
    let mut sum = vec![0.0; dim];
    let mut sum_sq = vec![0.0; dim];
    for _ in 0..n_samples {
        sample_into(&mut rng, &mut x);
        if contains(set, &x) {
            for j in 0..dim {
                sum[j] += x[j];
                sum_sq[j] += x[j] * x[j];
            }
        }
    }
    let n = n_samples as f64;
    (0..dim)
        .map(|j| {
            let mean = sum[j] / n;
            let var = (sum_sq[j] / n - mean * mean).max(0.0);
            McEstimate { estimate: mean, std_error: (var / n).sqrt() }
        })
        .collect()
}
