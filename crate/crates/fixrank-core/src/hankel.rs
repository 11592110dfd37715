//! Hankel structure operators: signal-to-matrix lifting, anti-diagonal
//! averaging, and matrix-to-signal readout.
//!
//! A signal of length P lifts to the `rows x (P - rows + 1)` matrix with
//! `H[i, j] = f[i + j]`; rank-K Hankel matrices correspond to signals that
//! are sums of K exponentials. Averaging each anti-diagonal is the
//! orthogonal projection onto the Hankel subspace in the Frobenius
//! geometry, which is the misfit geometry everywhere in this crate.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::Mat;

/// Most-square shape for a length-`len` signal: `ceil(len / 2)` rows.
/// Maximizes the achievable rank range of the lifted matrix.
pub fn default_rows(len: usize) -> usize {
    len.div_ceil(2)
}

/// Lifts a signal to its Hankel matrix with the given number of rows.
pub fn hankel_from_signal(f: &[f64], rows: usize) -> Result<Mat> {
    if f.is_empty() || rows < 1 || rows > f.len() {
        return Err(Error::RowsOutOfRange { rows, len: f.len() });
    }
    if f.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let cols = f.len() - rows + 1;
    Ok(Mat::from_fn(rows, cols, |i, j| f[i + j]))
}

/// Reads a signal back out of a matrix: the sequence of anti-diagonal
/// means, of length `rows + cols - 1`. Inverts [`hankel_from_signal`].
pub fn signal_from_hankel(a: &Mat) -> Vec<f64> {
    let (rows, cols) = a.shape();
    let mut sums = vec![0.0; rows + cols - 1];
    let mut counts = vec![0usize; rows + cols - 1];
    for i in 0..rows {
        for j in 0..cols {
            sums[i + j] += a[(i, j)];
            counts[i + j] += 1;
        }
    }
    for (s, c) in sums.iter_mut().zip(counts) {
        *s /= c as f64;
    }
    sums
}

/// Orthogonal projection onto the Hankel subspace: replaces every
/// anti-diagonal by its mean. Idempotent, self-adjoint, non-expansive.
pub fn hankel_project(a: &Mat) -> Mat {
    let signal = signal_from_hankel(a);
    Mat::from_fn(a.rows(), a.cols(), |i, j| signal[i + j])
}
