//! Convex envelope of the fixed-rank approximation objective.
//!
//! For a data matrix `F` and a target rank `K`, the objective
//!
//! ```text
//! I(A) = R_K(A) + ||A - F||_F^2,    R_K(A) = 0 if rank(A) <= K, else infinity,
//! ```
//!
//! is nonconvex, but its convex envelope has a closed form in the singular
//! values of `A`. This crate evaluates the objective, its Fenchel
//! conjugate, the envelope, and the envelope's proximal operators exactly,
//! describes the full set of global minimizers, and uses the prox inside a
//! Douglas-Rachford solver for Hankel-structured approximation, which fits
//! a signal by a sum of `K` exponentials.
//!
//! The spectrum-level arithmetic lives in [`spectrum`]; [`envelope`] wraps
//! it with the SVD plumbing; [`minimizers`] handles the simplex geometry of
//! the solution set; [`hankel`] and [`solver`] carry the application.
//! Everything works without the standard library (`default-features =
//! false, features = ["libm"]`); allocation is required.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod envelope;
pub mod error;
pub mod hankel;
mod math;
pub mod matrix;
pub mod minimizers;
pub mod solver;
pub mod spectrum;
pub mod svd;

pub use envelope::{eckart_young, nuclear_prox, EnvelopeProblem, DEFAULT_RANK_TOL};
pub use error::{Error, Result};
pub use hankel::{default_rows, hankel_from_signal, hankel_project, signal_from_hankel};
pub use matrix::Mat;
pub use minimizers::{
    is_minimizer, lift, minimizer_set, sample_simplex, simplex_vertices, MinimizerSet,
    DEFAULT_MULT_TOL,
};
pub use solver::{
    cadzow_solve, compare, dr_solve, nuclear_solve, rho_from_tau, CompareReport, CompareRow,
    Method, Solution, SolverConfig, SolverTrace, TraceRow,
};
pub use spectrum::{
    envelope_penalty, k_star, pooled_zeta, prox_spectrum_at_f, soft_threshold, truncate, KStar,
    ProxBreakdown, Spectrum,
};
pub use svd::{svd, SvdTriple};
