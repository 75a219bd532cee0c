//! Nelder–Mead simplex search with restarts.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexSettings {
    /// Initial edge length of the simplex along each coordinate.
    pub initial_step: f64,
    /// Largest coordinate distance from the best vertex at convergence.
    pub step_tol: f64,
    /// Largest spread of objective values at convergence.
    pub f_tol: f64,
    /// Objective evaluations budget shared by all restarts.
    pub max_iters: usize,
    /// Fresh simplices built around the incumbent after convergence.
    pub restarts: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexOutcome {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

struct Run<'a, F> {
    f: &'a F,
    evals: usize,
}

impl<F: Fn(&[f64]) -> f64> Run<'_, F> {
    fn eval(&mut self, x: &[f64]) -> f64 {
        self.evals += 1;
        let v = (self.f)(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    }

    /// One simplex search from `x0`. Returns the best vertex and whether the
    /// tolerances were met.
    fn search(&mut self, x0: &[f64], settings: &SimplexSettings) -> (Vec<f64>, f64, bool) {
        let n = x0.len();
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        simplex.push((x0.to_vec(), self.eval(x0)));
        for i in 0..n {
            let mut x = x0.to_vec();
            x[i] += settings.initial_step;
            let fx = self.eval(&x);
            simplex.push((x, fx));
        }

        loop {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let best = &simplex[0];
            let spread = simplex[n].1 - best.1;
            let diam = simplex[1..]
                .iter()
                .flat_map(|(x, _)| x.iter().zip(&best.0).map(|(a, b)| (a - b).abs()))
                .fold(0.0, f64::max);
            if diam <= settings.step_tol && spread <= settings.f_tol {
                return (simplex[0].0.clone(), simplex[0].1, true);
            }
            if self.evals >= settings.max_iters {
                return (simplex[0].0.clone(), simplex[0].1, false);
            }

            let mut centroid = vec![0.0; n];
            for (x, _) in &simplex[..n] {
                for (c, xi) in centroid.iter_mut().zip(x) {
                    *c += xi / n as f64;
                }
            }
            let worst = simplex[n].clone();
            let along = |t: f64| -> Vec<f64> { centroid.iter().zip(&worst.0).map(|(c, w)| c + t * (c - w)).collect() };

            let xr = along(REFLECT);
            let fr = self.eval(&xr);
            if fr < simplex[0].1 {
                let xe = along(EXPAND);
                let fe = self.eval(&xe);
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
                continue;
            }
            let (xc, fc) = if fr < worst.1 {
                let xc = along(REFLECT * CONTRACT);
                let fc = self.eval(&xc);
                (xc, fc)
            } else {
                let xc = along(-CONTRACT);
                let fc = self.eval(&xc);
                (xc, fc)
            };
            if fc < worst.1.min(fr) {
                simplex[n] = (xc, fc);
                continue;
            }
            let anchor = simplex[0].0.clone();
            for vertex in simplex.iter_mut().skip(1) {
                let x: Vec<f64> = anchor.iter().zip(&vertex.0).map(|(a, v)| a + SHRINK * (v - a)).collect();
                let fx = self.eval(&x);
                *vertex = (x, fx);
            }
        }
    }
}

/// Minimizes `f` from `x0`. After each converged search a fresh simplex is
/// built around the incumbent; restarts stop once they gain less than
/// `f_tol`.
pub fn minimize<F: Fn(&[f64]) -> f64>(f: &F, x0: &[f64], settings: &SimplexSettings) -> SimplexOutcome {
    let mut run = Run { f, evals: 0 };
    let (mut x, mut fx, mut converged) = run.search(x0, settings);
    for _ in 0..settings.restarts {
        if !converged || run.evals >= settings.max_iters {
            break;
        }
        let (xn, fn_, cn) = run.search(&x, settings);
        let gain = fx - fn_;
        if fn_ <= fx {
            x = xn;
            fx = fn_;
        }
        converged = cn;
        if gain <= settings.f_tol {
            break;
        }
    }
    SimplexOutcome { x, f: fx, iterations: run.evals, converged }
}
