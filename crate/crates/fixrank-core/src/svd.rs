//! Thin SVD by one-sided Jacobi rotations.
//!
//! The matrices this crate sees are small and dense, so a one-sided Jacobi
//! sweep is a good fit: simple, deterministic, and accurate to a few ulps on
//! every singular value. Columns of a working copy of `A` are rotated until
//! they are mutually orthogonal; their norms are the singular values, their
//! directions the left vectors, and the accumulated rotations the right
//! vectors.

// column/row indices carry the meaning in the rotation kernels
#![allow(clippy::needless_range_loop)]

use alloc::vec::Vec;

use crate::error::Result;
use crate::math;
use crate::matrix::Mat;
use crate::spectrum::Spectrum;

/// Thin decomposition `A = left * diag(spectrum) * right^T` with
/// `N = min(rows, cols)` columns in both factors. Columns of `left` and
/// `right` are orthonormal, the spectrum is non-increasing and non-negative.
#[derive(Clone, Debug)]
pub struct SvdTriple {
    pub left: Mat,
    pub spectrum: Spectrum,
    pub right: Mat,
}

impl SvdTriple {
    /// `left * diag(weights) * right^T` for an arbitrary weight vector of
    /// length `N`. The workhorse for truncations, shrinkages, and proxes:
    /// reuse the factors, swap the spectrum.
    pub fn compose_with(&self, weights: &[f64]) -> Mat {
        let n = self.spectrum.len();
        assert_eq!(weights.len(), n);
        let m = self.left.rows();
        let p = self.right.rows();
        let mut out = Mat::zeros(m, p);
        for k in 0..n {
            let w = weights[k];
            if w == 0.0 {
                continue;
            }
            for i in 0..m {
                let u = w * self.left[(i, k)];
                if u == 0.0 {
                    continue;
                }
                for j in 0..p {
                    out[(i, j)] += u * self.right[(j, k)];
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> Mat {
        self.compose_with(self.spectrum.values())
    }
}

const MAX_SWEEPS: usize = 64;
// relative threshold under which a column pair counts as orthogonal
const ORTHO_TOL: f64 = 1e-14;
// singular values below this multiple of the largest get a synthesized
// left vector instead of a normalized noise direction
const DEFICIENT_TOL: f64 = 1e-13;

/// Thin SVD. Deterministic, errors only on non-finite input.
pub fn svd(a: &Mat) -> Result<SvdTriple> {
    a.check_finite()?;
    if a.rows() < a.cols() {
        let t = svd_tall(&a.t());
        return Ok(SvdTriple {
            left: t.right,
            spectrum: t.spectrum,
            right: t.left,
        });
    }
    Ok(svd_tall(a))
}

// m >= n assumed
fn svd_tall(a: &Mat) -> SvdTriple {
    let (m, n) = a.shape();
    let mut w = a.clone();
    let mut v = Mat::identity(n);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = 0.0;
                for i in 0..m {
                    let x = w[(i, p)];
                    let y = w[(i, q)];
                    app += x * x;
                    aqq += y * y;
                    apq += x * y;
                }
                if apq == 0.0 || math::abs(apq) <= ORTHO_TOL * math::sqrt(app * aqq) {
                    continue;
                }
                // rotation angle that zeroes the (p, q) Gram entry
                let zeta = (aqq - app) / (2.0 * apq);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + math::sqrt(1.0 + zeta * zeta))
                } else {
                    -1.0 / (-zeta + math::sqrt(1.0 + zeta * zeta))
                };
                let c = 1.0 / math::sqrt(1.0 + t * t);
                let s = c * t;
                for i in 0..m {
                    let x = w[(i, p)];
                    let y = w[(i, q)];
                    w[(i, p)] = c * x - s * y;
                    w[(i, q)] = s * x + c * y;
                }
                for i in 0..n {
                    let x = v[(i, p)];
                    let y = v[(i, q)];
                    v[(i, p)] = c * x - s * y;
                    v[(i, q)] = s * x + c * y;
                }
                rotated = true;
            }
        }
        if !rotated {
            break;
        }
    }

    let mut norms: Vec<f64> = (0..n)
        .map(|j| math::sqrt((0..m).map(|i| w[(i, j)] * w[(i, j)]).sum()))
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    norms.sort_unstable_by(|x, y| y.total_cmp(x));

    let top = norms[0];
    let mut left = Mat::zeros(m, n);
    let mut right = Mat::zeros(n, n);
    let mut deficient = Vec::new();
    for (k, &j) in order.iter().enumerate() {
        for i in 0..n {
            right[(i, k)] = v[(i, j)];
        }
        if norms[k] > DEFICIENT_TOL * top && norms[k] > 0.0 {
            let inv = 1.0 / norms[k];
            for i in 0..m {
                left[(i, k)] = inv * w[(i, j)];
            }
        } else {
            deficient.push(k);
        }
    }
    complete_columns(&mut left, &deficient);

    SvdTriple {
        left,
        spectrum: Spectrum::new(norms).expect("column norms are sorted and non-negative"),
        right,
    }
}

// Fills the listed columns with unit vectors orthogonal to every other
// column, so the left factor stays orthonormal even at rank deficiency.
fn complete_columns(u: &mut Mat, slots: &[usize]) {
    let (m, n) = u.shape();
    for &k in slots {
        let mut filled = false;
        for cand in 0..m {
            let mut col: Vec<f64> = (0..m).map(|i| if i == cand { 1.0 } else { 0.0 }).collect();
            // two Gram-Schmidt passes keep the residual orthogonal to
            // working precision
            for _ in 0..2 {
                for other in 0..n {
                    if other == k || (slots.contains(&other) && other > k) {
                        continue;
                    }
                    let dot: f64 = (0..m).map(|i| col[i] * u[(i, other)]).sum();
                    for i in 0..m {
                        col[i] -= dot * u[(i, other)];
                    }
                }
            }
            let norm = math::sqrt(col.iter().map(|x| x * x).sum());
            if norm > 0.3 {
                for i in 0..m {
                    u[(i, k)] = col[i] / norm;
                }
                filled = true;
                break;
            }
        }
        assert!(filled, "orthonormal completion always exists for m >= n");
    }
}
