//! Command definitions and dispatch. Every command reads its files, runs the
//! library, and emits one JSON report to stdout or `--output`; hankel-approx
//! additionally writes the fitted signal and the iteration trace next to the
//! report.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fixrank_core::{
    cadzow_solve, compare, default_rows, dr_solve, envelope_penalty, k_star, lift, minimizer_set,
    nuclear_solve, rho_from_tau, sample_simplex, simplex_vertices, svd, EnvelopeProblem,
    SolverConfig, DEFAULT_MULT_TOL,
};

use crate::io;
use crate::json::{num, to_string, vec_num};
use crate::report::{digest_file, report};

#[derive(Debug)]
pub enum CliError {
    /// A file failed to read or parse. Exit code 2.
    Parse(String),
    /// Dimensions or parameter values are unusable. Exit code 3.
    Param(String),
    /// hankel-approx ran out of iterations; the report was still written.
    /// Exit code 4.
    Stalled { iters: usize },
    /// An output file could not be written. Exit code 1.
    Io(String),
}

impl CliError {
    pub fn param(e: fixrank_core::Error) -> CliError {
        CliError::Param(e.to_string())
    }

    pub fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Param(_) => 3,
            CliError::Stalled { .. } => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) | CliError::Param(m) | CliError::Io(m) => f.write_str(m),
            CliError::Stalled { iters } => {
                write!(f, "did not converge within {} iterations", iters)
            }
        }
    }
}

#[derive(Parser)]
#[command(
    name = "fixrank",
    version,
    about = "Convex envelope of fixed-rank approximation and a Hankel fitting solver"
)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand)]
pub enum Cmd {
    /// Objective, envelope, and witness values at a point
    Eval {
        /// Point to evaluate, as a matrix file
        a: PathBuf,
        /// Data matrix file
        f: PathBuf,
        /// Target rank
        #[arg(short = 'K', long = "rank")]
        rank: usize,
        /// Write the JSON report here instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Proximal step of the envelope, anchored at the data matrix
    Prox {
        /// Data matrix file
        f: PathBuf,
        /// Target rank
        #[arg(short = 'K', long = "rank")]
        rank: usize,
        /// Prox weight
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        /// Splitting step length; sets rho = 1 / (2 tau)
        #[arg(long, conflicts_with = "rho")]
        tau: Option<f64>,
        /// Write the JSON report here instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Geometry of the set of global minimizers
    Minimizers {
        /// Data matrix file
        f: PathBuf,
        /// Target rank
        #[arg(short = 'K', long = "rank")]
        rank: usize,
        /// Number of seeded in-face samples to include
        #[arg(long, default_value_t = 0)]
        samples: usize,
        /// Seed for the samples
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the JSON report here instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Fit a signal by one of rank at most K under the Hankel structure
    HankelApprox {
        /// Signal file, one sample per line
        signal: PathBuf,
        /// Target rank
        #[arg(short = 'K', long = "rank")]
        rank: usize,
        /// Solver family
        #[arg(long, value_enum, default_value_t = MethodArg::Envelope)]
        method: MethodArg,
        /// Nuclear-norm weight (nuclear method only)
        #[arg(long)]
        mu: Option<f64>,
        /// Prox weight
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        /// Splitting step length; sets rho = 1 / (2 tau)
        #[arg(long, conflicts_with = "rho")]
        tau: Option<f64>,
        /// Iteration budget
        #[arg(long, default_value_t = 5000)]
        iters: usize,
        /// Stopping tolerance
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Seed recorded in the report
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Hankel row count (default: most square)
        #[arg(long)]
        rows: Option<usize>,
        /// Write the JSON report here instead of stdout; side files take
        /// this path's stem
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the envelope, nuclear, and truncation methods side by side
    Compare {
        /// Signal file, one sample per line
        signal: PathBuf,
        /// Target rank
        #[arg(short = 'K', long = "rank")]
        rank: usize,
        /// Comma-separated nuclear weights, one solve each
        #[arg(long, value_delimiter = ',')]
        mu: Vec<f64>,
        /// Prox weight
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        /// Splitting step length; sets rho = 1 / (2 tau)
        #[arg(long, conflicts_with = "rho")]
        tau: Option<f64>,
        /// Iteration budget
        #[arg(long, default_value_t = 5000)]
        iters: usize,
        /// Stopping tolerance
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Seed recorded in the report
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Hankel row count (default: most square)
        #[arg(long)]
        rows: Option<usize>,
        /// Write the JSON report here instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Envelope,
    Nuclear,
    Cadzow,
}

impl MethodArg {
    fn as_str(self) -> &'static str {
        match self {
            MethodArg::Envelope => "envelope",
            MethodArg::Nuclear => "nuclear",
            MethodArg::Cadzow => "cadzow",
        }
    }
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Eval { a, f, rank, output } => cmd_eval(&a, &f, rank, &output),
        Cmd::Prox {
            f,
            rank,
            rho,
            tau,
            output,
        } => cmd_prox(&f, rank, rho, tau, &output),
        Cmd::Minimizers {
            f,
            rank,
            samples,
            seed,
            output,
        } => cmd_minimizers(&f, rank, samples, seed, &output),
        Cmd::HankelApprox {
            signal,
            rank,
            method,
            mu,
            rho,
            tau,
            iters,
            tol,
            seed,
            rows,
            output,
        } => cmd_hankel_approx(
            &signal, rank, method, mu, rho, tau, iters, tol, seed, rows, &output,
        ),
        Cmd::Compare {
            signal,
            rank,
            mu,
            rho,
            tau,
            iters,
            tol,
            seed,
            rows,
            output,
        } => cmd_compare(
            &signal, rank, &mu, rho, tau, iters, tol, seed, rows, &output,
        ),
    }
}

fn emit(rep: &Value, output: &Option<PathBuf>) -> Result<(), CliError> {
    let text = to_string(rep);
    match output {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {}", p.display(), e))),
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

fn effective_rho(rho: f64, tau: Option<f64>) -> Result<f64, CliError> {
    match tau {
        Some(t) => rho_from_tau(t).map_err(CliError::param),
        None => Ok(rho),
    }
}

fn with_tau(mut params: Value, tau: Option<f64>) -> Value {
    if let Some(t) = tau {
        params["tau"] = num(t);
    }
    params
}

fn cmd_eval(
    a_path: &Path,
    f_path: &Path,
    rank: usize,
    output: &Option<PathBuf>,
) -> Result<(), CliError> {
    let a = io::read_matrix(a_path)?;
    let f = io::read_matrix(f_path)?;
    if a.shape() != f.shape() {
        return Err(CliError::Param(format!(
            "shape mismatch: point is {}x{}, data is {}x{}",
            a.rows(),
            a.cols(),
            f.rows(),
            f.cols()
        )));
    }
    let inputs = json!({
        "a": digest_file(a_path)?,
        "f": digest_file(f_path)?,
    });
    let prob = EnvelopeProblem::new(f, rank).map_err(CliError::param)?;
    let objective = prob.objective(&a).map_err(CliError::param)?;
    let envelope = prob.envelope(&a).map_err(CliError::param)?;
    let misfit = a.sq_dist(prob.data());
    let sa = svd(&a).map_err(CliError::param)?;
    let penalty = envelope_penalty(&sa.spectrum, rank).map_err(CliError::param)?;
    let ks = k_star(&sa.spectrum, rank).map_err(CliError::param)?;
    let witness = prob.conjugate_witness(&a).map_err(CliError::param)?;
    let pairing = a.inner(&witness) - prob.conjugate(&witness).map_err(CliError::param)?;

    let results = json!({
        "objective": num(objective),
        "misfit": num(misfit),
        "penalty": num(penalty),
        "envelope": num(envelope),
        "k_star": ks.k,
        "omega": num(ks.omega),
        "witness_pairing": num(pairing),
    });
    emit(
        &report("eval", inputs, json!({ "rank": rank }), results),
        output,
    )
}

fn cmd_prox(
    f_path: &Path,
    rank: usize,
    rho: f64,
    tau: Option<f64>,
    output: &Option<PathBuf>,
) -> Result<(), CliError> {
    let f = io::read_matrix(f_path)?;
    let inputs = json!({ "f": digest_file(f_path)? });
    let rho = effective_rho(rho, tau)?;
    let prob = EnvelopeProblem::new(f, rank).map_err(CliError::param)?;
    let b = prob.prox_breakdown(rho).map_err(CliError::param)?;

    let params = with_tau(json!({ "rank": rank, "rho": num(rho) }), tau);
    let results = json!({
        "s": num(b.s),
        "k1": b.k1,
        "k2": b.k2,
        "alpha": vec_num(b.alpha.values()),
        "truncated": b.is_truncation(),
    });
    emit(&report("prox", inputs, params, results), output)
}

fn cmd_minimizers(
    f_path: &Path,
    rank: usize,
    samples: usize,
    seed: u64,
    output: &Option<PathBuf>,
) -> Result<(), CliError> {
    let f = io::read_matrix(f_path)?;
    let inputs = json!({ "f": digest_file(f_path)? });
    let sa = svd(&f).map_err(CliError::param)?;
    let set = minimizer_set(sa.spectrum, rank, DEFAULT_MULT_TOL).map_err(CliError::param)?;

    let verts = simplex_vertices(set.block(), set.kept()).map_err(CliError::param)?;
    let mut vertices = Vec::with_capacity(verts.len());
    for v in &verts {
        vertices.push(vec_num(lift(&set, v).map_err(CliError::param)?.values()));
    }
    let mut sampled = Vec::with_capacity(samples);
    if samples > 0 {
        for x in sample_simplex(set.block(), set.kept(), samples, seed).map_err(CliError::param)? {
            sampled.push(vec_num(lift(&set, &x).map_err(CliError::param)?.values()));
        }
    }

    let params = json!({ "rank": rank, "samples": samples, "seed": seed });
    let results = json!({
        "phi": vec_num(set.phi.values()),
        "first": set.first,
        "last": set.last,
        "block": set.block(),
        "kept": set.kept(),
        "phi_k": num(set.phi_k),
        "min_value": num(set.min_value),
        "vertices": Value::from(vertices),
        "samples": Value::from(sampled),
    });
    emit(&report("minimizers", inputs, params, results), output)
}

/// Side files sit next to the report: `out.json` gets `out.signal.txt` and
/// `out.trace.csv`; stdout reports get `fixrank.*` in the working directory.
fn side_paths(output: &Option<PathBuf>) -> (PathBuf, PathBuf) {
    let stem = match output {
        Some(p) => {
            let s = p.to_string_lossy().into_owned();
            s.strip_suffix(".json").map(str::to_owned).unwrap_or(s)
        }
        None => "fixrank".to_owned(),
    };
    (
        PathBuf::from(format!("{}.signal.txt", stem)),
        PathBuf::from(format!("{}.trace.csv", stem)),
    )
}

fn solver_config(
    rank: usize,
    rho: f64,
    iters: usize,
    tol: f64,
    seed: u64,
    rows: Option<usize>,
) -> SolverConfig {
    let mut cfg = SolverConfig::new(rank);
    cfg.rho = rho;
    cfg.max_iters = iters;
    cfg.tol = tol;
    cfg.seed = seed;
    cfg.rows = rows;
    cfg
}

#[allow(clippy::too_many_arguments)] // one slot per flag; bundling them would just rename the list
fn cmd_hankel_approx(
    signal_path: &Path,
    rank: usize,
    method: MethodArg,
    mu: Option<f64>,
    rho: f64,
    tau: Option<f64>,
    iters: usize,
    tol: f64,
    seed: u64,
    rows: Option<usize>,
    output: &Option<PathBuf>,
) -> Result<(), CliError> {
    let f = io::read_signal(signal_path)?;
    let inputs = json!({ "signal": digest_file(signal_path)? });
    if mu.is_some() && method != MethodArg::Nuclear {
        return Err(CliError::Param(
            "--mu applies to the nuclear method only".to_owned(),
        ));
    }
    let rho = effective_rho(rho, tau)?;
    let cfg = solver_config(rank, rho, iters, tol, seed, rows);
    let sol = match method {
        MethodArg::Envelope => dr_solve(&f, &cfg),
        MethodArg::Nuclear => nuclear_solve(&f, mu.unwrap_or(0.0), &cfg),
        MethodArg::Cadzow => cadzow_solve(&f, &cfg),
    }
    .map_err(CliError::param)?;

    let (signal_out, trace_out) = side_paths(output);
    io::write_signal(&signal_out, &sol.signal)?;
    io::write_trace_csv(&trace_out, &sol.trace)?;

    let last = sol.trace.rows.last().expect("at least one iteration runs");
    let misfit: f64 = sol
        .signal
        .iter()
        .zip(&f)
        .map(|(y, x)| (y - x) * (y - x))
        .sum();
    let out_rank = svd(&sol.matrix)
        .map_err(CliError::param)?
        .spectrum
        .numerical_rank(cfg.rank_tol);

    let mut params = with_tau(
        json!({
            "rank": rank,
            "rho": num(rho),
            "iters": iters,
            "tol": num(tol),
            "seed": seed,
            "rows": cfg.rows.unwrap_or_else(|| default_rows(f.len())),
            "method": method.as_str(),
        }),
        tau,
    );
    if method == MethodArg::Nuclear {
        params["mu"] = num(mu.unwrap_or(0.0));
    }
    let results = json!({
        "converged": sol.trace.converged,
        "iterations": sol.trace.iterations(),
        "objective": num(last.objective),
        "feasibility": num(last.feasibility),
        "delta": num(last.delta),
        "misfit": num(misfit),
        "rank": out_rank,
        "signal_path": signal_out.to_string_lossy(),
        "trace_path": trace_out.to_string_lossy(),
    });
    emit(&report("hankel-approx", inputs, params, results), output)?;

    if !sol.trace.converged {
        return Err(CliError::Stalled {
            iters: sol.trace.iterations(),
        });
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)] // one slot per flag; bundling them would just rename the list
fn cmd_compare(
    signal_path: &Path,
    rank: usize,
    mu_grid: &[f64],
    rho: f64,
    tau: Option<f64>,
    iters: usize,
    tol: f64,
    seed: u64,
    rows: Option<usize>,
    output: &Option<PathBuf>,
) -> Result<(), CliError> {
    let f = io::read_signal(signal_path)?;
    let inputs = json!({ "signal": digest_file(signal_path)? });
    let rho = effective_rho(rho, tau)?;
    let cfg = solver_config(rank, rho, iters, tol, seed, rows);
    let table = compare(&f, &cfg, mu_grid).map_err(CliError::param)?;

    let rows_json: Vec<Value> = table
        .rows
        .iter()
        .map(|r| {
            json!({
                "method": r.method.as_str(),
                "mu": r.mu.map(num).unwrap_or(Value::Null),
                "misfit": num(r.misfit),
                "rank": r.rank,
                "iterations": r.iterations,
                "converged": r.converged,
            })
        })
        .collect();

    let params = with_tau(
        json!({
            "rank": rank,
            "rho": num(rho),
            "mu_grid": vec_num(mu_grid),
            "iters": iters,
            "tol": num(tol),
            "seed": seed,
            "rows": cfg.rows.unwrap_or_else(|| default_rows(f.len())),
        }),
        tau,
    );
    emit(
        &report(
            "compare",
            inputs,
            params,
            json!({ "rows": Value::from(rows_json) }),
        ),
        output,
    )
}
