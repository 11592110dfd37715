//! Geometry of the global minimizers of the rank-gated misfit.
//!
//! With phi the spectrum of `F` and K the target rank, every global
//! minimizer keeps the head of phi, zeroes the tail, and spreads the block
//! of values tied with `phi_K` over a scaled simplex: the minimizing spectra
//! are exactly
//!
//! ```text
//! (phi_1, .., phi_{J-1}, phi_K * x_1, .., phi_K * x_M, 0, ..)
//! ```
//!
//! with `x` non-increasing in `[0,1]^M` summing to `m`, where `J..L` is the
//! multiplicity block of `phi_K`, `M = L + 1 - J`, and `m = K + 1 - J`.
//! This module computes the block bounds, tests membership, enumerates the
//! simplex vertices, and samples the simplex. Indices `first`/`last` are
//! 1-based to match the j-th singular value convention used throughout.

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{check_positive, Error, Result};
use crate::math::abs;
use crate::spectrum::Spectrum;

/// Default tolerance for treating singular values as tied with `phi_K`,
/// relative to `max(1, phi_1)`. SVD routines return equal singular values
/// only approximately.
pub const DEFAULT_MULT_TOL: f64 = 1e-9;

/// The data describing the set of global minimizers for one `(phi, K)` pair.
#[derive(Clone, Debug)]
pub struct MinimizerSet {
    /// Spectrum of the data matrix.
    pub phi: Spectrum,
    /// Target rank K.
    pub rank: usize,
    /// First 1-based index tied with `phi_K` (the symbol J).
    pub first: usize,
    /// Last 1-based index tied with `phi_K` (the symbol L).
    pub last: usize,
    /// The pivotal singular value `phi_K`.
    pub phi_k: f64,
    /// Global minimum of the objective: the tail energy past K.
    pub min_value: f64,
    /// Tolerance the block was detected with.
    pub mult_tol: f64,
}

impl MinimizerSet {
    /// Block length M = L + 1 - J.
    pub fn block(&self) -> usize {
        self.last + 1 - self.first
    }

    /// Simplex level m = K + 1 - J, the number of block entries the rank
    /// budget pays for.
    pub fn kept(&self) -> usize {
        self.rank + 1 - self.first
    }

    /// True when `phi_K` is numerically zero; the scaled simplex collapses
    /// and the block of a minimizer must vanish outright.
    pub fn is_degenerate(&self) -> bool {
        self.phi_k <= self.mult_tol * self.phi.top().max(1.0)
    }
}

/// Locates the multiplicity block of `phi_K` and the global minimum value.
///
/// Ties are decided by `|phi_j - phi_K| <= mult_tol * max(1, phi_1)`.
pub fn minimizer_set(phi: Spectrum, rank: usize, mult_tol: f64) -> Result<MinimizerSet> {
    let n = phi.len();
    if rank < 1 || rank > n {
        return Err(Error::RankOutOfRange {
            rank,
            min: 1,
            max: n,
        });
    }
    check_positive("mult_tol", mult_tol)?;
    let phi_k = phi[rank - 1];
    let scale = mult_tol * phi.top().max(1.0);
    let mut first = rank;
    while first > 1 && phi[first - 2] - phi_k <= scale {
        first -= 1;
    }
    let mut last = rank;
    while last < n && phi_k - phi[last] <= scale {
        last += 1;
    }
    let min_value = phi.values()[rank..].iter().map(|v| v * v).sum();
    Ok(MinimizerSet {
        phi,
        rank,
        first,
        last,
        phi_k,
        min_value,
        mult_tol,
    })
}

/// Tests whether `alpha` is the spectrum of a global minimizer.
///
/// The head must match phi, everything past the block must vanish, and the
/// block divided by `phi_K` must lie on the simplex, all within `tol`
/// (head and tail comparisons are scaled by `max(1, phi_1)`). In the
/// degenerate case the whole block must vanish instead.
pub fn is_minimizer(alpha: &Spectrum, set: &MinimizerSet, tol: f64) -> Result<bool> {
    let n = set.phi.len();
    if alpha.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: alpha.len(),
        });
    }
    let scale = tol * set.phi.top().max(1.0);
    for j in 0..set.first - 1 {
        if abs(alpha[j] - set.phi[j]) > scale {
            return Ok(false);
        }
    }
    for j in set.last..n {
        if alpha[j] > scale {
            return Ok(false);
        }
    }
    if set.is_degenerate() {
        for j in set.first - 1..set.last {
            if alpha[j] > scale {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    // ordering and nonnegativity of x come with the Spectrum type, so only
    // the cap and the hyperplane are left to check
    if alpha[set.first - 1] / set.phi_k > 1.0 + tol {
        return Ok(false);
    }
    let sum: f64 = (set.first - 1..set.last)
        .map(|j| alpha[j] / set.phi_k)
        .sum();
    Ok(abs(sum - set.kept() as f64) <= tol)
}

/// Vertices of the simplex of non-increasing vectors in `[0,1]^block`
/// summing to `kept`: the vectors `v_p` with `kept / p` in the first `p`
/// slots and zeros after, for `p = kept..=block`.
pub fn simplex_vertices(block: usize, kept: usize) -> Result<Vec<Vec<f64>>> {
    if kept < 1 || kept > block {
        return Err(Error::SimplexOutOfRange { block, kept });
    }
    let mut out = Vec::with_capacity(block - kept + 1);
    for p in kept..=block {
        let mut v = vec![0.0; block];
        for slot in v.iter_mut().take(p) {
            *slot = kept as f64 / p as f64;
        }
        out.push(v);
    }
    Ok(out)
}

/// Draws `count` points of the simplex as random convex combinations of its
/// vertices. Deterministic in `seed`.
pub fn sample_simplex(block: usize, kept: usize, count: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    let verts = simplex_vertices(block, kept)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut w: Vec<f64> = (0..verts.len()).map(|_| unit(&mut rng)).collect();
        let total: f64 = w.iter().sum();
        for wi in w.iter_mut() {
            *wi /= total;
        }
        let mut x = vec![0.0; block];
        for (wi, v) in w.iter().zip(verts.iter()) {
            for (xj, vj) in x.iter_mut().zip(v.iter()) {
                *xj += wi * vj;
            }
        }
        // rounding can break the ordering or the cap by an ulp; trim it back
        if x[0] > 1.0 {
            x[0] = 1.0;
        }
        for j in 1..block {
            if x[j] > x[j - 1] {
                x[j] = x[j - 1];
            }
        }
        out.push(x);
    }
    Ok(out)
}

/// Turns a simplex point into the spectrum of the minimizer it encodes:
/// head of phi, block scaled by `phi_K`, zero tail.
///
/// `x` must be non-increasing in `[0,1]` with `block()` entries; the sum
/// constraint is deliberately not checked, so off-simplex probes can be
/// lifted too.
pub fn lift(set: &MinimizerSet, x: &[f64]) -> Result<Spectrum> {
    if x.len() != set.block() {
        return Err(Error::LengthMismatch {
            expected: set.block(),
            got: x.len(),
        });
    }
    for (i, &v) in x.iter().enumerate() {
        let ordered = i == 0 || v <= x[i - 1];
        if !v.is_finite() || !(0.0..=1.0).contains(&v) || !ordered {
            return Err(Error::InvalidSpectrum);
        }
    }
    let n = set.phi.len();
    let mut a = Vec::with_capacity(n);
    a.extend_from_slice(&set.phi.values()[..set.first - 1]);
    a.extend(x.iter().map(|&v| set.phi_k * v));
    a.resize(n, 0.0);
    Spectrum::new(a)
}

// uniform in (0, 1]
fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (((rng.next_u64() >> 11) + 1) as f64) * (1.0 / 9007199254740992.0)
}
