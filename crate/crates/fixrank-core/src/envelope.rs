//! Matrix-level objective, conjugate, envelope, and proximal operators.
//!
//! The rank-gated misfit `I(A) = gate(rank(A) <= K) + ||A - F||_F^2` is not
//! convex. Its convex envelope has a closed form in the singular values of
//! `A`, and both the envelope and its proximal operators reduce to the
//! sequence routines in [`crate::spectrum`] applied to the right spectrum,
//! recombined with the singular vectors of the right matrix.

use alloc::vec::Vec;

use crate::error::{check_positive, Error, Result};
use crate::matrix::Mat;
use crate::spectrum::{
    envelope_penalty, k_star, pooled_zeta, prox_spectrum_at_f, soft_threshold, truncate,
    ProxBreakdown, Spectrum,
};
use crate::svd::{svd, SvdTriple};

/// Default threshold for deciding numerical rank: entries above
/// `DEFAULT_RANK_TOL * top singular value` count.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// A data matrix, a target rank, and the SVD they share.
///
/// Everything the envelope needs from `F` flows through its singular values
/// and vectors, so the decomposition is computed once at construction.
#[derive(Clone, Debug)]
pub struct EnvelopeProblem {
    f: Mat,
    rank: usize,
    rank_tol: f64,
    f_svd: SvdTriple,
}

impl EnvelopeProblem {
    /// Requires finite `F` and `1 <= rank <= min(m, n)`.
    pub fn new(f: Mat, rank: usize) -> Result<Self> {
        f.check_finite()?;
        let n = f.min_dim();
        if rank < 1 || rank > n {
            return Err(Error::RankOutOfRange {
                rank,
                min: 1,
                max: n,
            });
        }
        let f_svd = svd(&f)?;
        Ok(EnvelopeProblem {
            f,
            rank,
            rank_tol: DEFAULT_RANK_TOL,
            f_svd,
        })
    }

    pub fn with_rank_tol(mut self, rank_tol: f64) -> Result<Self> {
        check_positive("rank_tol", rank_tol)?;
        self.rank_tol = rank_tol;
        Ok(self)
    }

    pub fn data(&self) -> &Mat {
        &self.f
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rank_tol(&self) -> f64 {
        self.rank_tol
    }

    pub fn data_svd(&self) -> &SvdTriple {
        &self.f_svd
    }

    pub fn data_spectrum(&self) -> &Spectrum {
        &self.f_svd.spectrum
    }

    /// The rank-gated misfit itself: `||A - F||_F^2` when the numerical rank
    /// of `A` is at most the target, infinity otherwise.
    pub fn objective(&self, a: &Mat) -> Result<f64> {
        a.check_finite()?;
        a.check_same_shape(&self.f)?;
        let alpha = svd(a)?.spectrum;
        if alpha.numerical_rank(self.rank_tol) <= self.rank {
            Ok(a.sq_dist(&self.f))
        } else {
            Ok(f64::INFINITY)
        }
    }

    /// Fenchel conjugate of the objective:
    /// sum of the top `K` squared singular values of `F + B / 2`, minus
    /// `||F||_F^2`. Finite everywhere.
    pub fn conjugate(&self, b: &Mat) -> Result<f64> {
        b.check_finite()?;
        b.check_same_shape(&self.f)?;
        let shifted = Mat::from_fn(self.f.rows(), self.f.cols(), |i, j| {
            self.f[(i, j)] + 0.5 * b[(i, j)]
        });
        let sigma = svd(&shifted)?.spectrum;
        let head: f64 = sigma.values()[..self.rank].iter().map(|v| v * v).sum();
        Ok(head - self.f.inner(&self.f))
    }

    /// The convex envelope of the objective: penalty of the spectrum of `A`
    /// plus the misfit. Agrees with the objective wherever the rank gate
    /// passes, and lower-bounds it everywhere.
    pub fn envelope(&self, a: &Mat) -> Result<f64> {
        a.check_finite()?;
        a.check_same_shape(&self.f)?;
        let alpha = svd(a)?.spectrum;
        Ok(envelope_penalty(&alpha, self.rank)? + a.sq_dist(&self.f))
    }

    /// A maximizing argument of `<A, B> - conjugate(B)`: evaluating the
    /// conjugate pairing at the returned `B` reproduces `envelope(A)`.
    ///
    /// Built from the SVD of `A` by flattening the pooled tail of its
    /// spectrum at the pooled average and mapping back through `F`.
    pub fn conjugate_witness(&self, a: &Mat) -> Result<Mat> {
        a.check_finite()?;
        a.check_same_shape(&self.f)?;
        let t = svd(a)?;
        let ks = k_star(&t.spectrum, self.rank)?;
        let cut = self.rank - ks.k;
        let gamma: Vec<f64> = t
            .spectrum
            .iter()
            .enumerate()
            .map(|(j, &v)| if j < cut { v } else { ks.omega })
            .collect();
        let lifted = t.compose_with(&gamma);
        Ok((&lifted - &self.f).scale(2.0))
    }

    /// Proximal point of the envelope scaled by `1 / rho`, anchored at the
    /// data matrix: the minimizer of `envelope(A) + rho * ||A - F||_F^2`.
    ///
    /// Shares singular vectors with `F`; the spectrum comes from
    /// [`prox_spectrum_at_f`]. When `phi_K >= (1 + rho) * phi_{K+1}` this is
    /// exactly [`eckart_young`] of `F`.
    pub fn prox(&self, rho: f64) -> Result<Mat> {
        let b = self.prox_breakdown(rho)?;
        Ok(self.f_svd.compose_with(b.alpha.values()))
    }

    /// Same as [`EnvelopeProblem::prox`] with the spectrum-level structure
    /// exposed for reporting.
    pub fn prox_breakdown(&self, rho: f64) -> Result<ProxBreakdown> {
        prox_spectrum_at_f(&self.f_svd.spectrum, self.rank, rho)
    }

    /// Proximal point of the envelope anchored at an arbitrary `X`: the
    /// minimizer of `envelope(A) + rho * ||A - X||_F^2`.
    ///
    /// Reduces to the split quadratic of [`pooled_zeta`] on the spectrum of
    /// `G = F + rho * X`; the minimizer shares singular vectors with `G`.
    /// At `X = F` it coincides with [`EnvelopeProblem::prox`].
    pub fn prox_general(&self, rho: f64, x: &Mat) -> Result<Mat> {
        Ok(self.prox_general_detail(rho, x)?.0)
    }

    /// [`EnvelopeProblem::prox_general`] plus the spectrum of the result,
    /// which callers like the solver loop need anyway.
    pub fn prox_general_detail(&self, rho: f64, x: &Mat) -> Result<(Mat, Spectrum)> {
        x.check_finite()?;
        x.check_same_shape(&self.f)?;
        check_positive("rho", rho)?;
        if *x == self.f {
            // same minimization problem; answer through the cached path so
            // the two entry points agree bit for bit
            let b = self.prox_breakdown(rho)?;
            let m = self.f_svd.compose_with(b.alpha.values());
            return Ok((m, b.alpha));
        }
        let g = Mat::from_fn(self.f.rows(), self.f.cols(), |i, j| {
            self.f[(i, j)] + rho * x[(i, j)]
        });
        let t = svd(&g)?;
        let (_, zeta) = pooled_zeta(&t.spectrum, self.rank, rho)?;
        let mut alpha: Vec<f64> = t
            .spectrum
            .iter()
            .zip(zeta.iter())
            .map(|(&gj, &zj)| (gj - zj) / rho)
            .collect();
        // exact arithmetic keeps alpha ordered; trim ulp seams
        for j in 0..alpha.len() {
            if alpha[j] < 0.0 {
                alpha[j] = 0.0;
            }
            if j > 0 && alpha[j] > alpha[j - 1] {
                alpha[j] = alpha[j - 1];
            }
        }
        let alpha = Spectrum::new(alpha)?;
        let m = t.compose_with(alpha.values());
        Ok((m, alpha))
    }
}

/// Best approximation of `F` by a matrix of rank at most `rank`: truncate
/// the spectrum, keep the singular vectors. `rank` may be `0..=min(m, n)`.
pub fn eckart_young(f: &Mat, rank: usize) -> Result<Mat> {
    f.check_finite()?;
    let t = svd(f)?;
    let cut = truncate(&t.spectrum, rank)?;
    Ok(t.compose_with(cut.values()))
}

/// Minimizer of `mu * ||A||_* + ||A - F||_F^2`: soft-threshold the spectrum
/// at `mu / 2`.
pub fn nuclear_prox(f: &Mat, mu: f64) -> Result<Mat> {
    Ok(nuclear_prox_detail(f, mu)?.0)
}

pub(crate) fn nuclear_prox_detail(f: &Mat, mu: f64) -> Result<(Mat, Spectrum)> {
    f.check_finite()?;
    let t = svd(f)?;
    let shrunk = soft_threshold(&t.spectrum, mu)?;
    Ok((t.compose_with(shrunk.values()), shrunk))
}
