//! Scalar special functions of the standard Gaussian.
//!
//! Everything here works on plain `f64` with `±∞` standing in for the
//! extended-real endpoints of half-lines. `exp(-∞) = 0` in IEEE arithmetic, so
//! weights and moments of unbounded intervals need no special casing beyond
//! avoiding `∞ · 0`.

use crate::error::{Error, Result};

pub const SQRT_2PI: f64 = 2.506_628_274_631_000_7;
pub const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Below this magnitude the Maclaurin series for `phi` is used; beyond it the
/// tail continued fraction converges in a few dozen terms.
const SERIES_CUTOFF: f64 = 2.0;

/// Gaussian boundary weight `e^{-x²/2}`.
///
/// The square is split into an exactly representable high part and a small
/// correction so that the relative error stays near one ulp even for
/// `|x| ≈ 38` where the result is close to the bottom of the normal range.
pub fn gauss_weight(x: f64) -> f64 {
    if x.is_infinite() {
        return 0.0;
    }
    let hi = (x * 16.0).trunc() / 16.0;
    let lo = x - hi;
    (-0.5 * hi * hi).exp() * (-0.5 * lo * (x + hi)).exp()
}

/// Standard normal density `e^{-x²/2}/√(2π)`.
pub fn density(x: f64) -> f64 {
    gauss_weight(x) * INV_SQRT_2PI
}

/// Standard normal CDF, `φ(s) = (2π)^{-1/2} ∫_{-∞}^s e^{-t²/2} dt`.
///
/// Relative accuracy is a few ulps across the whole range where the result is
/// a normal float; `φ(-∞) = 0`, `φ(+∞) = 1`.
pub fn phi(s: f64) -> f64 {
    if s.is_nan() {
        return f64::NAN;
    }
    if s == f64::NEG_INFINITY {
        return 0.0;
    }
    if s == f64::INFINITY {
        return 1.0;
    }
    if s.abs() <= SERIES_CUTOFF {
        0.5 + density(s) * odd_series(s)
    } else if s < 0.0 {
        density(s) * tail_fraction(-s)
    } else {
        1.0 - density(s) * tail_fraction(s)
    }
}

/// Mills ratio `φ(-x) / ψ(x)` where `ψ` is the standard normal density.
///
/// Finite for every `x ≥ 0` (including values where both numerator and
/// denominator underflow), which makes it the right tool for quantities scaled
/// by `e^{s²/2}`.
pub fn mills_ratio(x: f64) -> f64 {
    if x == f64::INFINITY {
        return 0.0;
    }
    if x > SERIES_CUTOFF {
        tail_fraction(x)
    } else {
        phi(-x) / density(x)
    }
}

/// `Σ_{n≥0} s^{2n+1} / (2n+1)!!`, so that `φ(s) = 1/2 + ψ(s) · series`.
fn odd_series(s: f64) -> f64 {
    let s2 = s * s;
    let mut term = s;
    let mut sum = s;
    let mut k = 1.0;
    while term.abs() > 1e-18 * sum.abs() {
        k += 2.0;
        term *= s2 / k;
        sum += term;
    }
    sum
}

/// Mills ratio for `x > 2` via the even contraction of the Legendre continued
/// fraction for `Γ(1/2, x²/2)`, evaluated with the modified Lentz method.
fn tail_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let z = 0.5 * x * x;
    let mut b = z + 0.5;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let i = f64::from(i);
        let an = -i * (i - 0.5);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    0.5 * x * h
}

/// Inverse of [`phi`].
///
/// Returns `-∞` at `p = 0` and `+∞` at `p = 1`. The initial guess is Acklam's
/// rational approximation, polished by two Halley steps against [`phi`]; the
/// lower tail is always solved directly so that probabilities down to the
/// subnormal range keep full relative accuracy.
pub fn phi_inv(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    if p == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if p == 1.0 {
        return Ok(f64::INFINITY);
    }
    if p > 0.5 {
        // 1 - p is exact here
        return Ok(-lower_quantile(1.0 - p));
    }
    Ok(lower_quantile(p))
}

fn lower_quantile(p: f64) -> f64 {
    let mut x = acklam(p);
    for _ in 0..2 {
        let pdf = density(x);
        if pdf == 0.0 {
            break;
        }
        let u = (phi(x) - p) / pdf;
        x -= u / (1.0 + 0.5 * x * u);
    }
    x
}

fn acklam(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] =
        [7.784_695_709_041_462e-3, 3.224_671_290_700_398e-1, 2.445_134_137_142_996, 3.754_408_661_907_416];
    if p < 0.02425 {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    }
}

/// First Gaussian moment of `(a, b)`: `∫_a^b x dγ = (e^{-a²/2} - e^{-b²/2})/√(2π)`.
pub fn partial_moment(a: f64, b: f64) -> Result<f64> {
    if a.is_nan() || b.is_nan() || a > b {
        return Err(Error::InvalidInterval { lo: a, hi: b });
    }
    Ok((gauss_weight(a) - gauss_weight(b)) * INV_SQRT_2PI)
}

/// Gaussian measure of `(lo, hi)` computed from whichever tail avoids
/// cancellation.
pub fn interval_mass(lo: f64, hi: f64) -> f64 {
    if lo >= 0.0 {
        phi(-lo) - phi(-hi)
    } else if hi <= 0.0 {
        phi(hi) - phi(lo)
    } else {
        1.0 - phi(lo) - phi(-hi)
    }
}

/// `ln Γ(k/2)` for a positive integer `k`, by exact recurrence from `Γ(1/2)`
/// or `Γ(1)`.
pub fn ln_gamma_half(k: usize) -> f64 {
    assert!(k >= 1, "ln_gamma_half needs k >= 1");
    let (mut acc, mut j) = if k % 2 == 1 { (SQRT_PI.ln(), 1) } else { (0.0, 2) };
    while j < k {
        acc += (j as f64 / 2.0).ln();
        j += 2;
    }
    acc
}

/// `P(‖X‖² ≤ t)` for `X` a `dim`-dimensional standard Gaussian.
pub fn chi2_cdf(dim: usize, t: f64) -> Result<f64> {
    let (lower, _) = chi2_split(dim, t)?;
    Ok(lower)
}

/// Upper tail `P(‖X‖² > t)`, accurate when the CDF is close to one.
pub fn chi2_sf(dim: usize, t: f64) -> Result<f64> {
    let (_, upper) = chi2_split(dim, t)?;
    Ok(upper)
}

fn chi2_split(dim: usize, t: f64) -> Result<(f64, f64)> {
    if dim < 1 {
        return Err(Error::InvalidDimension { got: dim, min: 1 });
    }
    if t.is_nan() || t < 0.0 {
        return Err(Error::InvalidArgument(format!("chi-square argument must be nonnegative, got {t}")));
    }
    if t == 0.0 {
        return Ok((0.0, 1.0));
    }
    if t == f64::INFINITY {
        return Ok((1.0, 0.0));
    }
    if dim == 1 {
        let tail = 2.0 * phi(-t.sqrt());
        return Ok((1.0 - tail, tail));
    }
    let a = dim as f64 / 2.0;
    let x = t / 2.0;
    let log_prefactor = -x + a * x.ln() - ln_gamma_half(dim);
    if x < a + 1.0 {
        let p = gamma_series(a, x) * log_prefactor.exp();
        Ok((p, 1.0 - p))
    } else {
        let q = gamma_fraction(a, x) * log_prefactor.exp();
        Ok((1.0 - q, q))
    }
}

fn gamma_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut term = 1.0 / a;
    let mut sum = term;
    for _ in 0..10_000 {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * 1e-17 {
            break;
        }
    }
    sum
}

fn gamma_fraction(a: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let i = f64::from(i);
        let an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}
