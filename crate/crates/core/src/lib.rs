//! A pseudospectral laboratory for the cubic derivative nonlinear
//! Schrödinger equation
//!
//! ```text
//! i∂ₜu + ∂ₓ²u = i∂ₓ(|u|²u) + λ|u|^{2k}u
//! ```
//!
//! on the torus 𝕋 = ℝ/2πℤ and on a large periodic box standing in for the
//! real line. The crate is organised bottom-up:
//!
//! * [`frequency`]: lattices, Fourier transforms, smooth cutoffs,
//!   Littlewood–Paley blocks, Bessel potentials and modulation weights.
//! * [`spaces`]: Besov, Sobolev and Bourgain-type (X^{s,b}, Y^{s,b}, Z^s and
//!   their dyadic-sup variants) norms on discrete fields.
//! * [`gauge`]: the line and torus gauge transformations and their inverses.
//! * [`nonlinear`]: right-hand sides of the original and gauged equations,
//!   with Fourier-side convolution oracles.
//! * [`solver`]: exact linear propagator, exponential Runge–Kutta stepping,
//!   Duhamel quadrature, Picard iteration and the scaling map.
//! * [`estimates`]: resonance identity, trilinear multipliers and sampling
//!   probes for the linear, bilinear and multilinear estimates.
//! * [`cli`]: reproducible experiment scenarios, field dumps and reports.

// `!(x > 0.0)` style guards are intentional: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod estimates;
pub(crate) mod fft;
pub mod frequency;
pub mod gauge;
pub mod nonlinear;
pub mod solver;
pub mod spaces;

pub use error::{Error, Result};
pub use frequency::{Domain, DomainKind, DyadicIndex, GridFunction, SpaceTimeField, SpectralField};
pub use num_complex::Complex64;
