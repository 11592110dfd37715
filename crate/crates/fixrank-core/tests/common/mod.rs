//! Seeded randomness shared by the integration suites.

#![allow(dead_code)]

use fixrank_core::{Mat, Spectrum};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_mat(r: &mut StdRng, rows: usize, cols: usize, scale: f64) -> Mat {
    Mat::from_fn(rows, cols, |_, _| r.gen_range(-scale..=scale))
}

/// Product of two thin random factors, so the rank is at most `rank`.
pub fn random_low_rank(r: &mut StdRng, rows: usize, cols: usize, rank: usize, scale: f64) -> Mat {
    assert!(rank >= 1);
    let left = random_mat(r, rows, rank, scale);
    let right = random_mat(r, rank, cols, scale);
    left.matmul(&right)
}

pub fn random_spectrum(r: &mut StdRng, n: usize, scale: f64) -> Spectrum {
    let mut v: Vec<f64> = (0..n).map(|_| r.gen_range(0.0..=scale)).collect();
    v.sort_unstable_by(|a, b| b.total_cmp(a));
    Spectrum::new(v).unwrap()
}

pub fn l2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn l2_dist(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}
