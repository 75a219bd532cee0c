//! Gaussian isoperimetric quantities and a numerical check of their
//! quantitative stability.
//!
//! Sets are measured against the standard Gaussian `γ` on `ℝⁿ`. For a set
//! `E` of mass `γ(E) = φ(s)` the crate computes the Gaussian perimeter
//! `P(E)`, the barycenter `b(E) = ∫_E x dγ`, the isoperimetric deficit
//! `D(E) = P(E) - e^{-s²/2}`, the strong asymmetry
//! `β(E) = e^{-s²/2}/√(2π) - |b(E)|` and the Fraenkel-type asymmetry
//! `α̂(E) = γ(E △ H)` against the half-space `H` aligned with `-b(E)`.
//! Everything is exact (closed forms or adaptive quadrature) for unions of
//! intervals on the line, slabs, half-spaces and centered balls.
//!
//! ```
//! use gaussian_iso::functionals::{deficit, strong_asym};
//! use gaussian_iso::sets::{GaussianSet, IntervalUnion1D};
//!
//! let two_rays = IntervalUnion1D::normalize([(f64::NEG_INFINITY, -1.5), (1.5, f64::INFINITY)])?;
//! let e = GaussianSet::from(two_rays);
//! assert!(deficit(&e) > 0.0);
//! assert!((strong_asym(&e)? - (-e.mass_level().powi(2) / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-12);
//! # Ok::<(), gaussian_iso::Error>(())
//! ```
//!
//! Modules:
//!
//! - [`special`] and [`quad`]: normal distribution functions and adaptive
//!   Gauss–Kronrod quadrature.
//! - [`sets`]: set representations with their measure, perimeter and
//!   barycenter.
//! - [`functionals`]: deficit, asymmetries, excess and the penalized
//!   functional `F`.
//! - [`stationarity`]: first and second variation of `F` on the line.
//! - [`optimizer`]: multistart minimization of `F` over unions of intervals
//!   and the two-ray mass sweep.
//! - [`verify`]: random corpora and the verification suites behind the
//!   `gaussian-iso` binary ([`cli`]).

// `!(x > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod functionals;
pub mod optimizer;
pub mod quad;
pub mod sets;
pub mod special;
pub mod stationarity;
pub mod verify;

#[cfg(doctest)]
mod doctest;

pub use error::{Error, Result};
