//! Splitting solvers for Hankel-constrained fixed-rank approximation.
//!
//! The task: fit a signal by one whose Hankel lift has rank at most K,
//! minimizing the Frobenius misfit to the data. `dr_solve` runs
//! Douglas-Rachford splitting on the envelope relaxation,
//!
//! ```text
//! A = prox(Y),    Y <- Y + P_H(2A - Y) - A,
//! ```
//!
//! where prox is the envelope proximal operator anchored at the data and
//! `P_H` the Hankel projection. `nuclear_solve` swaps in the nuclear-norm
//! prox as a convex baseline; `cadzow_solve` alternates hard truncation
//! with the projection. All three record the same trace columns, with the
//! envelope objective as the common yardstick.

use alloc::vec::Vec;

use crate::envelope::{nuclear_prox_detail, EnvelopeProblem};
use crate::error::{check_non_negative, check_positive, Error, Result};
use crate::hankel::{default_rows, hankel_from_signal, hankel_project, signal_from_hankel};
use crate::matrix::Mat;
use crate::spectrum::{envelope_penalty, truncate};
use crate::svd::svd;

/// Shared knobs for the three solvers.
///
/// `rho` is the prox weight; a step length τ in the usual splitting
/// parameterization corresponds to `rho = 1 / (2 τ)` (see
/// [`rho_from_tau`]). `rows` overrides the most-square Hankel shape.
/// `seed` is carried into reports for tooling; the solves themselves are
/// deterministic.
#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub rank: usize,
    pub rho: f64,
    pub max_iters: usize,
    pub tol: f64,
    pub rows: Option<usize>,
    pub seed: u64,
    pub rank_tol: f64,
}

impl SolverConfig {
    pub fn new(rank: usize) -> SolverConfig {
        SolverConfig {
            rank,
            rho: 1.0,
            max_iters: 5000,
            tol: 1e-8,
            rows: None,
            seed: 0,
            rank_tol: crate::envelope::DEFAULT_RANK_TOL,
        }
    }

    fn check(&self) -> Result<()> {
        check_positive("rho", self.rho)?;
        check_positive("tol", self.tol)?;
        check_positive("rank_tol", self.rank_tol)?;
        if self.max_iters == 0 {
            return Err(Error::NonPositive {
                name: "max_iters",
                value: 0.0,
            });
        }
        Ok(())
    }
}

/// Maps a splitting step length to the prox weight: `rho = 1 / (2 tau)`.
pub fn rho_from_tau(tau: f64) -> Result<f64> {
    check_positive("tau", tau)?;
    Ok(1.0 / (2.0 * tau))
}

/// One iteration record. `objective` is the envelope objective of the
/// iterate, `feasibility` its Frobenius distance from the Hankel subspace,
/// `delta` the relative change of the driving iterate, `spectrum` the
/// singular values of the iterate.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub iter: usize,
    pub objective: f64,
    pub feasibility: f64,
    pub delta: f64,
    pub spectrum: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverTrace {
    pub rows: Vec<TraceRow>,
    pub converged: bool,
}

impl SolverTrace {
    pub fn iterations(&self) -> usize {
        self.rows.len()
    }
}

/// A solver result: the Hankel matrix reached, its signal readout, and the
/// per-iteration trace. `matrix` is exactly the Hankel lift of `signal`.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub matrix: Mat,
    pub signal: Vec<f64>,
    pub trace: SolverTrace,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Envelope,
    Nuclear,
    Cadzow,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Envelope => "envelope",
            Method::Nuclear => "nuclear",
            Method::Cadzow => "cadzow",
        }
    }
}

/// One row of the comparison table produced by [`compare`].
#[derive(Clone, Debug, PartialEq)]
pub struct CompareRow {
    pub method: Method,
    pub mu: Option<f64>,
    pub misfit: f64,
    pub rank: usize,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompareReport {
    pub rows: Vec<CompareRow>,
}

fn lift_signal(f: &[f64], cfg: &SolverConfig) -> Result<Mat> {
    if f.len() < 3 {
        return Err(Error::SignalTooShort { len: f.len() });
    }
    cfg.check()?;
    let rows = cfg.rows.unwrap_or_else(|| default_rows(f.len()));
    let fm = hankel_from_signal(f, rows)?;
    let n = fm.min_dim();
    if cfg.rank < 1 || cfg.rank >= n {
        return Err(Error::RankOutOfRange {
            rank: cfg.rank,
            min: 1,
            max: n.saturating_sub(1),
        });
    }
    Ok(fm)
}

// Readout first, then lift, so the returned matrix is exactly the Hankel
// lift of the returned signal.
fn finish(a: &Mat, rows: Vec<TraceRow>, converged: bool) -> Solution {
    let signal = signal_from_hankel(a);
    let matrix = Mat::from_fn(a.rows(), a.cols(), |i, j| signal[i + j]);
    Solution {
        matrix,
        signal,
        trace: SolverTrace { rows, converged },
    }
}

/// Douglas-Rachford splitting on the envelope relaxation of the
/// rank-constrained Hankel fit. Stops when both the relative change of `Y`
/// and the Hankel residual of `A` drop to `tol`, or at `max_iters`
/// (reported in the trace, not an error).
pub fn dr_solve(f: &[f64], cfg: &SolverConfig) -> Result<Solution> {
    let fm = lift_signal(f, cfg)?;
    let problem = EnvelopeProblem::new(fm.clone(), cfg.rank)?.with_rank_tol(cfg.rank_tol)?;
    let mut y = fm.clone();
    let mut rows = Vec::new();
    let mut converged = false;
    let mut last = fm.clone();
    for iter in 1..=cfg.max_iters {
        let (a, alpha) = problem.prox_general_detail(cfg.rho, &y)?;
        let feasibility = (&a - &hankel_project(&a)).frob_norm();
        let objective = envelope_penalty(&alpha, cfg.rank)? + a.sq_dist(&fm);
        let reflected = &a.scale(2.0) - &y;
        let y_next = &(&y + &hankel_project(&reflected)) - &a;
        let delta = (&y_next - &y).frob_norm() / y.frob_norm().max(1.0);
        rows.push(TraceRow {
            iter,
            objective,
            feasibility,
            delta,
            spectrum: alpha.into_values(),
        });
        y = y_next;
        last = a;
        if delta <= cfg.tol && feasibility <= cfg.tol {
            converged = true;
            break;
        }
    }
    Ok(finish(&last, rows, converged))
}

/// Same splitting with the nuclear-norm prox in place of the envelope prox:
/// each step minimizes `mu ||A||_* + ||A - F||^2 + rho ||A - Y||^2`. The
/// trace still reports the envelope objective so runs are comparable.
pub fn nuclear_solve(f: &[f64], mu: f64, cfg: &SolverConfig) -> Result<Solution> {
    check_non_negative("mu", mu)?;
    let fm = lift_signal(f, cfg)?;
    let blend = 1.0 / (1.0 + cfg.rho);
    let mut y = fm.clone();
    let mut rows = Vec::new();
    let mut converged = false;
    let mut last = fm.clone();
    for iter in 1..=cfg.max_iters {
        let g = Mat::from_fn(fm.rows(), fm.cols(), |i, j| {
            (fm[(i, j)] + cfg.rho * y[(i, j)]) * blend
        });
        let (a, alpha) = nuclear_prox_detail(&g, mu * blend)?;
        let feasibility = (&a - &hankel_project(&a)).frob_norm();
        let objective = envelope_penalty(&alpha, cfg.rank)? + a.sq_dist(&fm);
        let reflected = &a.scale(2.0) - &y;
        let y_next = &(&y + &hankel_project(&reflected)) - &a;
        let delta = (&y_next - &y).frob_norm() / y.frob_norm().max(1.0);
        rows.push(TraceRow {
            iter,
            objective,
            feasibility,
            delta,
            spectrum: alpha.into_values(),
        });
        y = y_next;
        last = a;
        if delta <= cfg.tol && feasibility <= cfg.tol {
            converged = true;
            break;
        }
    }
    Ok(finish(&last, rows, converged))
}

/// Alternating hard truncation and Hankel projection. Stops on the relative
/// change of the Hankel iterate alone; the rank step is recorded in the
/// trace exactly like the prox iterates of the other solvers.
pub fn cadzow_solve(f: &[f64], cfg: &SolverConfig) -> Result<Solution> {
    let fm = lift_signal(f, cfg)?;
    let mut a = fm.clone();
    let mut rows = Vec::new();
    let mut converged = false;
    let mut last = fm.clone();
    for iter in 1..=cfg.max_iters {
        let dec = svd(&a)?;
        let alpha = truncate(&dec.spectrum, cfg.rank)?;
        let t = dec.compose_with(alpha.values());
        let next = hankel_project(&t);
        let feasibility = (&t - &next).frob_norm();
        let objective = envelope_penalty(&alpha, cfg.rank)? + t.sq_dist(&fm);
        let delta = (&next - &a).frob_norm() / a.frob_norm().max(1.0);
        rows.push(TraceRow {
            iter,
            objective,
            feasibility,
            delta,
            spectrum: alpha.into_values(),
        });
        a = next;
        last = t;
        if delta <= cfg.tol {
            converged = true;
            break;
        }
    }
    Ok(finish(&last, rows, converged))
}

/// Runs the envelope solver, one nuclear solve per entry of `mu_grid`, and
/// the truncation baseline, and tabulates misfit against the input signal,
/// attained numerical rank, and iteration counts.
pub fn compare(f: &[f64], cfg: &SolverConfig, mu_grid: &[f64]) -> Result<CompareReport> {
    let mut rows = Vec::new();
    let sol = dr_solve(f, cfg)?;
    rows.push(compare_row(Method::Envelope, None, &sol, f, cfg)?);
    for &mu in mu_grid {
        let sol = nuclear_solve(f, mu, cfg)?;
        rows.push(compare_row(Method::Nuclear, Some(mu), &sol, f, cfg)?);
    }
    let sol = cadzow_solve(f, cfg)?;
    rows.push(compare_row(Method::Cadzow, None, &sol, f, cfg)?);
    Ok(CompareReport { rows })
}

fn compare_row(
    method: Method,
    mu: Option<f64>,
    sol: &Solution,
    f: &[f64],
    cfg: &SolverConfig,
) -> Result<CompareRow> {
    let misfit = sol
        .signal
        .iter()
        .zip(f)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    let rank = svd(&sol.matrix)?.spectrum.numerical_rank(cfg.rank_tol);
    Ok(CompareRow {
        method,
        mu,
        misfit,
        rank,
        iterations: sol.trace.iterations(),
        converged: sol.trace.converged,
    })
}
