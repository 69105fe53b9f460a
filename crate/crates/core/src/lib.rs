//! Numerical harmonic-analysis toolkit centered on integral kernels
//! `K(omega, t)` acting as `f~(omega) = ∫ K(omega, t) f(t) dt`.
//!
//! The library provides:
//!
//! - a quadrature substrate ([`grid`]) with trapezoidal weights, weighted
//!   inner products and thresholded support measures;
//! - linear-independence diagnostics for function families ([`independence`]):
//!   Wronskian and mollified-Wronskian determinants, sampling matrices and
//!   rank/interpolant extraction;
//! - a kernel zoo and its discretization into weighted matrices ([`kernels`]),
//!   including frame (Riesz-bound) estimation for the induced operator;
//! - local completeness analysis of kernels around a frequency, including the
//!   point at infinity ([`complete_points`]): frame-bound scans, stability
//!   decay, tail completeness via concentration eigenvalues, independent
//!   radii, and the differential-geometric (Frenet) completeness test;
//! - time-frequency transforms and uncertainty measurements ([`qup`]):
//!   Heisenberg products, Wigner, Gabor and wavelet transforms with inverses,
//!   and joint-support checks that probe the qualitative uncertainty
//!   principle;
//! - Beurling densities, exponential-system frame tests, sampling expansions
//!   and zero-density counters ([`density`]);
//! - frame/basis perturbation criteria ([`perturb`]);
//! - greedy and Prony-type decompositions over structured dictionaries
//!   ([`op_family`]).
//!
//! All quantities are computed on explicit finite grids with trapezoidal
//! quadrature; the Fourier transform convention is the non-unitary
//! `f^(omega) = ∫ f(t) e^{-i omega t} dt`, so Parseval reads
//! `∫ |f^|^2 = 2π ∫ |f|^2` and the constant `2π` is kept explicit.

pub mod complete_points;
pub mod density;
pub mod error;
pub mod grid;
pub mod independence;
pub mod io;
pub mod kernels;
pub mod linalg;
pub mod op_family;
pub mod perturb;
pub mod qup;

pub use error::QupError;
pub use grid::{Grid, Signal, SupportReport};
