//! Sequence-level core: everything the envelope does to singular values.
//!
//! The envelope of the rank-gated misfit depends on a matrix only through its
//! singular values, so the interesting arithmetic lives here, on plain
//! non-increasing vectors. The matrix layer composes these routines with an
//! SVD.

// positions relative to the rank cut carry the meaning here, so loops stay
// index-based
#![allow(clippy::needless_range_loop)]
//!
//! Conventions used throughout:
//!
//! - spectra are 0-indexed slices internally; the 1-based positions `k1`, `k2`
//!   in [`ProxBreakdown`] follow the usual math convention for reporting,
//! - an entry past the end of a spectrum reads as zero ([`Spectrum::get`]),
//! - comparisons that decide how many trailing entries pool together use the
//!   relative tolerance `1e-12 * max(1, top entry)`, which absorbs roundoff
//!   from the averaging without ever flipping a decision on well-separated
//!   data.

use alloc::vec::Vec;

use crate::error::{check_non_negative, check_positive, Error, Result};

/// Relative tolerance for the tie decisions made by [`k_star`].
pub const POOL_TOL: f64 = 1e-12;

/// Non-increasing, non-negative, finite vector of singular values.
///
/// The constructor enforces the invariant once so that every consumer can
/// rely on ordering without re-checking.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    /// Validates and wraps a vector of singular values.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSpectrum);
        }
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidSpectrum);
            }
            if i > 0 && values[i - 1] < v {
                return Err(Error::InvalidSpectrum);
            }
        }
        Ok(Spectrum { values })
    }

    pub fn from_slice(values: &[f64]) -> Result<Self> {
        Self::new(values.to_vec())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Entry at 0-based position `j`; positions past the end read as zero,
    /// matching the virtual zero tail of a singular value sequence.
    pub fn get(&self, j: usize) -> f64 {
        self.values.get(j).copied().unwrap_or(0.0)
    }

    /// Largest entry. The invariant puts it first.
    pub fn top(&self) -> f64 {
        self.values[0]
    }

    /// Count of entries exceeding `rank_tol * top()`.
    pub fn numerical_rank(&self, rank_tol: f64) -> usize {
        let thr = rank_tol * self.top();
        self.values.iter().filter(|&&v| v > thr).count()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, f64> {
        self.values.iter()
    }
}

impl core::ops::Index<usize> for Spectrum {
    type Output = f64;
    fn index(&self, j: usize) -> &f64 {
        &self.values[j]
    }
}

/// Size and pooled level of the trailing group that the envelope averages.
///
/// For a spectrum `beta` and target rank `K`, `k` entries ending at position
/// `K` pool together with everything past `K`, and `omega` is their common
/// average `(beta_{K-k+1} + ... + beta_N) / k` (1-based). The pair satisfies
/// `beta_{K-k+1} <= omega < beta_{K-k}` up to [`POOL_TOL`], with the left
/// neighbour of position 1 read as infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KStar {
    pub k: usize,
    pub omega: f64,
}

fn check_rank(rank: usize, n: usize) -> Result<()> {
    if rank < 1 || rank > n {
        return Err(Error::RankOutOfRange {
            rank,
            min: 1,
            max: n,
        });
    }
    Ok(())
}

fn tie_tol(top: f64) -> f64 {
    POOL_TOL * top.max(1.0)
}

/// Pooling depth of the envelope penalty.
///
/// Finds the largest `k` in `1..=rank` whose group average
/// `omega_k = (sum of the last n - rank + k entries) / k` dominates the first
/// entry of the group, i.e. `beta[rank - k] <= omega_k` up to [`POOL_TOL`].
/// `k = 1` always qualifies because `omega_1` is `beta[rank - 1]` plus the
/// non-negative tail, so the search cannot fail.
pub fn k_star(beta: &Spectrum, rank: usize) -> Result<KStar> {
    let n = beta.len();
    check_rank(rank, n)?;
    let b = beta.values();
    let tol = tie_tol(b[0]);

    // tails[i] is the sum of the last i entries
    let mut suffix = 0.0;
    let mut tails = Vec::with_capacity(n + 1);
    tails.push(0.0);
    for &v in b.iter().rev() {
        suffix += v;
        tails.push(suffix);
    }
    // the k-group spans the last n - rank + k entries
    for k in (1..=rank).rev() {
        let omega = tails[k + (n - rank)] / k as f64;
        if b[rank - k] <= omega + tol {
            return Ok(KStar { k, omega });
        }
    }
    unreachable!("k = 1 always satisfies the pooling test");
}

/// Envelope penalty of a spectrum: what the convex envelope adds on top of
/// the misfit.
///
/// Equals `k * omega^2 - (alpha_{rank-k+1}^2 + ... + alpha_N^2)` for the
/// pooling `(k, omega)` of [`k_star`]. Zero exactly when at most `rank`
/// entries are nonzero; the result is clamped at zero so roundoff cannot
/// leak a negative penalty.
pub fn envelope_penalty(alpha: &Spectrum, rank: usize) -> Result<f64> {
    let ks = k_star(alpha, rank)?;
    let a = alpha.values();
    let tail_sq: f64 = a[rank - ks.k..].iter().map(|&v| v * v).sum();
    Ok((ks.k as f64 * ks.omega * ks.omega - tail_sq).max(0.0))
}

/// Keeps the first `rank` entries and zeroes the rest. `rank` may be zero or
/// the full length.
pub fn truncate(phi: &Spectrum, rank: usize) -> Result<Spectrum> {
    let n = phi.len();
    if rank > n {
        return Err(Error::RankOutOfRange {
            rank,
            min: 0,
            max: n,
        });
    }
    let mut v = phi.values().to_vec();
    for x in v[rank..].iter_mut() {
        *x = 0.0;
    }
    Spectrum::new(v)
}

/// Singular value shrinkage of the nuclear norm prox: `max(phi_j - mu/2, 0)`.
pub fn soft_threshold(phi: &Spectrum, mu: f64) -> Result<Spectrum> {
    check_non_negative("mu", mu)?;
    let h = 0.5 * mu;
    Spectrum::new(phi.iter().map(|&v| (v - h).max(0.0)).collect())
}

/// Monotone minimizer of the split quadratic
/// `sum_j (zeta_j - g_j)^2 + rho * sum_{j <= rank} zeta_j^2`
/// over non-increasing `zeta`, together with the junction level `s`.
///
/// Entrywise minimization gives `g_j / (1 + rho)` on the first `rank`
/// entries and `g_j` on the rest; ordering can only break where the two
/// blocks meet. When it does, the optimum flattens a group around the
/// junction at a common level `s` in `[g_rank / (1 + rho), g_{rank+1}]`:
/// `zeta_j = max(g_j / (1 + rho), s)` on the head, `min(g_j, s)` on the
/// tail. `s` is found exactly by enumerating the breakpoints of the
/// piecewise quadratic cost inside the bracket and minimizing each segment
/// in closed form. With an empty bracket there is nothing to pool and `s`
/// reports the junction value `g_rank / (1 + rho)`.
pub fn pooled_zeta(g: &Spectrum, rank: usize, rho: f64) -> Result<(f64, Spectrum)> {
    let n = g.len();
    check_rank(rank, n)?;
    check_positive("rho", rho)?;
    let gv = g.values();
    let scale = 1.0 + rho;
    let lo = gv[rank - 1] / scale;
    let hi = if rank < n { gv[rank] } else { 0.0 };

    if lo >= hi {
        let mut z = Vec::with_capacity(n);
        for j in 0..rank {
            z.push(gv[j] / scale);
        }
        z.extend_from_slice(&gv[rank..]);
        return Ok((lo, Spectrum::new(z)?));
    }

    // cost of flattening at level s, up to an s-independent constant
    let cost = |s: f64| -> f64 {
        let mut c = 0.0;
        for j in 0..rank {
            let d = s - gv[j] / scale;
            if d > 0.0 {
                c += scale * d * d;
            }
        }
        for j in rank..n {
            let d = gv[j] - s;
            if d > 0.0 {
                c += d * d;
            }
        }
        c
    };

    let mut bps = Vec::with_capacity(n + 2);
    bps.push(lo);
    bps.push(hi);
    for j in 0..rank {
        let a = gv[j] / scale;
        if a > lo && a < hi {
            bps.push(a);
        }
    }
    for j in rank..n {
        if gv[j] > lo && gv[j] < hi {
            bps.push(gv[j]);
        }
    }
    bps.sort_unstable_by(f64::total_cmp);
    bps.dedup();

    let mut best_s = lo;
    let mut best = cost(lo);
    for w in bps.windows(2) {
        let (l, r) = (w[0], w[1]);
        // active sets are constant on the open segment; sample the midpoint
        let mid = 0.5 * (l + r);
        let mut wsum = 0.0;
        let mut wtot = 0.0;
        for j in 0..rank {
            let a = gv[j] / scale;
            if a < mid {
                wtot += scale;
                wsum += scale * a;
            }
        }
        for j in rank..n {
            if gv[j] > mid {
                wtot += 1.0;
                wsum += gv[j];
            }
        }
        for cand in [
            if wtot > 0.0 {
                (wsum / wtot).clamp(l, r)
            } else {
                l
            },
            r,
        ] {
            let c = cost(cand);
            if c < best {
                best = c;
                best_s = cand;
            }
        }
    }

    let s = best_s;
    let mut z = Vec::with_capacity(n);
    for j in 0..rank {
        z.push((gv[j] / scale).max(s));
    }
    for j in rank..n {
        z.push(gv[j].min(s));
    }
    Ok((s, Spectrum::new(z)?))
}

/// Proximal spectrum at the data matrix, with the piecewise structure spelled
/// out.
///
/// `alpha` minimizes `penalty(alpha) + (1 + rho) * sum (alpha_j - phi_j)^2`
/// over non-increasing spectra. `s` is the flattening level, `zeta` the
/// minimizer of the dual split quadratic at `g = (1 + rho) * phi`, and the
/// 1-based positions bound the three segments of `alpha`:
///
/// - `j < k1`: untouched, `alpha_j = phi_j`,
/// - `k1 <= j <= k2`: pulled to the level, `alpha_j = phi_j - (s - phi_j) / rho`,
/// - `j > k2`: zeroed.
///
/// `k1 > k2` means the middle segment is empty and the prox is the hard
/// truncation; that happens exactly when `phi_rank >= (1 + rho) * phi_{rank+1}`,
/// and in that case `alpha` is produced by [`truncate`] verbatim.
#[derive(Clone, Debug, PartialEq)]
pub struct ProxBreakdown {
    /// Flattening level in the units of `phi`.
    pub s: f64,
    /// 1-based first position with `phi_j < s`; `n + 1` when none.
    pub k1: usize,
    /// 1-based last position with `phi_j > s / (1 + rho)`; `0` when none.
    pub k2: usize,
    /// Minimizer of the split quadratic at `g = (1 + rho) * phi`.
    pub zeta: Spectrum,
    /// The proximal spectrum itself.
    pub alpha: Spectrum,
}

impl ProxBreakdown {
    /// True when the prox collapsed to the hard rank truncation.
    pub fn is_truncation(&self) -> bool {
        self.k1 > self.k2
    }
}

fn segment_bounds(phi: &[f64], s: f64, rho: f64) -> (usize, usize) {
    let n = phi.len();
    let mut k1 = n + 1;
    for (j, &v) in phi.iter().enumerate() {
        if v < s {
            k1 = j + 1;
            break;
        }
    }
    let mut k2 = 0;
    let cut = s / (1.0 + rho);
    for (j, &v) in phi.iter().enumerate() {
        if v > cut {
            k2 = j + 1;
        }
    }
    (k1, k2)
}

pub fn prox_spectrum_at_f(phi: &Spectrum, rank: usize, rho: f64) -> Result<ProxBreakdown> {
    let n = phi.len();
    check_rank(rank, n)?;
    check_positive("rho", rho)?;
    let pv = phi.values();
    let scale = 1.0 + rho;
    let next = phi.get(rank);

    if pv[rank - 1] >= scale * next {
        // no pooling possible: the prox is the hard truncation, emitted
        // verbatim so the equality is exact
        let s = pv[rank - 1];
        let alpha = truncate(phi, rank)?;
        let mut z = Vec::with_capacity(n);
        z.extend_from_slice(&pv[..rank]);
        for &v in &pv[rank..] {
            z.push(scale * v);
        }
        let (k1, k2) = segment_bounds(pv, s, rho);
        return Ok(ProxBreakdown {
            s,
            k1,
            k2,
            zeta: Spectrum::new(z)?,
            alpha,
        });
    }

    let g = Spectrum::new(pv.iter().map(|&v| scale * v).collect())?;
    let (s, zeta) = pooled_zeta(&g, rank, rho)?;
    let (k1, k2) = segment_bounds(pv, s, rho);

    let mut av = Vec::with_capacity(n);
    for (j, &v) in pv.iter().enumerate() {
        let pos = j + 1;
        let x = if pos < k1 {
            v
        } else if pos <= k2 {
            v - (s - v) / rho
        } else {
            0.0
        };
        av.push(x);
    }
    // the segment formulas agree in exact arithmetic; repair ulp-level seams
    // so the spectrum invariant holds verbatim
    for j in 0..n {
        if av[j] < 0.0 {
            av[j] = 0.0;
        }
        if j > 0 && av[j] > av[j - 1] {
            av[j] = av[j - 1];
        }
    }
    let alpha = Spectrum::new(av)?;
    Ok(ProxBreakdown {
        s,
        k1,
        k2,
        zeta,
        alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn spec(v: &[f64]) -> Spectrum {
        Spectrum::from_slice(v).unwrap()
    }

    #[test]
    fn spectrum_rejects_bad_input() {
        assert_eq!(Spectrum::new(vec![]), Err(Error::InvalidSpectrum));
        assert_eq!(Spectrum::new(vec![1.0, 2.0]), Err(Error::InvalidSpectrum));
        assert_eq!(Spectrum::new(vec![1.0, -0.5]), Err(Error::InvalidSpectrum));
        assert_eq!(Spectrum::new(vec![f64::NAN]), Err(Error::InvalidSpectrum));
        assert!(Spectrum::new(vec![2.0, 2.0, 0.0]).is_ok());
    }

    #[test]
    fn virtual_zero_tail() {
        let s = spec(&[3.0, 1.0]);
        assert_eq!(s.get(1), 1.0);
        assert_eq!(s.get(2), 0.0);
        assert_eq!(s.get(17), 0.0);
    }

    #[test]
    fn k_star_isolated_tail() {
        // one large entry keeps the pool small
        let ks = k_star(&spec(&[4.0, 1.0, 1.0, 1.0]), 2).unwrap();
        assert_eq!(ks.k, 1);
        assert_eq!(ks.omega, 3.0);
    }

    #[test]
    fn k_star_flat_spectrum_pools_to_the_top() {
        let ks = k_star(&spec(&[2.0, 2.0, 2.0]), 2).unwrap();
        assert_eq!(ks.k, 2);
        assert_eq!(ks.omega, 3.0);
    }

    #[test]
    fn k_star_single_kept_entry() {
        let ks = k_star(&spec(&[1.0, 1.0]), 1).unwrap();
        assert_eq!(ks.k, 1);
        assert_eq!(ks.omega, 2.0);
    }

    #[test]
    fn k_star_rejects_bad_rank() {
        let s = spec(&[1.0, 1.0]);
        assert!(k_star(&s, 0).is_err());
        assert!(k_star(&s, 3).is_err());
    }

    #[test]
    fn k_star_window_holds_on_random_input() {
        // beta_{K-k*+1} <= omega <= beta_{K-k*}, and the group averages are
        // non-increasing up to k* and increasing after it
        let mut rng = oorandom(7);
        for _ in 0..500 {
            let n = 1 + (next(&mut rng) % 10) as usize;
            let mut v: Vec<f64> = (0..n).map(|_| unit(&mut rng) * 4.0).collect();
            if n > 2 && next(&mut rng).is_multiple_of(2) {
                v[1] = v[0]; // inject exact ties
            }
            v.sort_unstable_by(|a, b| b.total_cmp(a));
            let beta = spec(&v);
            let rank = 1 + (next(&mut rng) as usize) % n;
            let ks = k_star(&beta, rank).unwrap();
            let tol = 1e-12 * v[0].max(1.0);
            assert!(ks.k >= 1 && ks.k <= rank);
            assert!(v[rank - ks.k] <= ks.omega + tol);
            if ks.k < rank {
                assert!(ks.omega < v[rank - ks.k - 1] + tol);
            }
            let omega_at = |k: usize| -> f64 { v[rank - k..].iter().sum::<f64>() / k as f64 };
            for k in 1..ks.k {
                assert!(omega_at(k) + tol >= omega_at(k + 1));
            }
            for k in ks.k..rank {
                assert!(omega_at(k) <= omega_at(k + 1) + tol);
            }
        }
    }

    #[test]
    fn penalty_zero_at_feasible_rank() {
        assert_eq!(envelope_penalty(&spec(&[5.0, 3.0, 0.0]), 2).unwrap(), 0.0);
    }

    #[test]
    fn penalty_flat_spectrum() {
        // pools everything: 2 * 3^2 - (4 + 4 + 4) = 6
        assert_eq!(envelope_penalty(&spec(&[2.0, 2.0, 2.0]), 2).unwrap(), 6.0);
    }

    #[test]
    fn penalty_pair() {
        assert_eq!(envelope_penalty(&spec(&[1.0, 1.0]), 1).unwrap(), 2.0);
    }

    #[test]
    fn penalty_never_negative_and_zero_on_truncated_tails() {
        let mut rng = oorandom(11);
        for _ in 0..300 {
            let n = 1 + (next(&mut rng) % 8) as usize;
            let mut v: Vec<f64> = (0..n).map(|_| unit(&mut rng) * 3.0).collect();
            v.sort_unstable_by(|a, b| b.total_cmp(a));
            let rank = 1 + (next(&mut rng) as usize) % n;
            let alpha = spec(&v);
            assert!(envelope_penalty(&alpha, rank).unwrap() >= 0.0);
            let cut = truncate(&alpha, rank).unwrap();
            assert!(envelope_penalty(&cut, rank).unwrap() <= 1e-12 * v[0].max(1.0));
        }
    }

    #[test]
    fn truncate_keeps_head() {
        let t = truncate(&spec(&[3.0, 2.0, 1.0]), 1).unwrap();
        assert_eq!(t.values(), &[3.0, 0.0, 0.0]);
        let z = truncate(&spec(&[3.0, 2.0]), 0).unwrap();
        assert_eq!(z.values(), &[0.0, 0.0]);
    }

    #[test]
    fn soft_threshold_shrinks() {
        let t = soft_threshold(&spec(&[3.0, 1.0]), 2.0).unwrap();
        assert_eq!(t.values(), &[2.0, 0.0]);
        assert!(soft_threshold(&spec(&[1.0]), -0.1).is_err());
    }

    // split objective the pooled form minimizes
    fn split_cost(z: &[f64], g: &[f64], rank: usize, rho: f64) -> f64 {
        let fit: f64 = z.iter().zip(g).map(|(a, b)| (a - b) * (a - b)).sum();
        let head: f64 = z[..rank].iter().map(|v| v * v).sum();
        fit + rho * head
    }

    #[test]
    fn pooled_zeta_flattens_the_junction() {
        let (s, z) = pooled_zeta(&spec(&[2.0, 2.0]), 1, 1.0).unwrap();
        assert!((s - 4.0 / 3.0).abs() < 1e-12);
        assert!((z[0] - 4.0 / 3.0).abs() < 1e-12);
        assert!((z[1] - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn pooled_zeta_ordered_junction_needs_no_pooling() {
        let (s, z) = pooled_zeta(&spec(&[4.0, 2.0]), 1, 1.0).unwrap();
        assert_eq!(s, 2.0);
        assert_eq!(z.values(), &[2.0, 2.0]);
    }

    #[test]
    fn pooled_zeta_long_tail() {
        let (s, z) = pooled_zeta(&spec(&[2.0, 2.0, 2.0]), 1, 1.0).unwrap();
        assert!((s - 1.5).abs() < 1e-12);
        for &v in z.values() {
            assert!((v - 1.5).abs() < 1e-12);
        }
    }

    #[test]
    fn pooled_zeta_matches_dense_grid_on_examples() {
        for (g, rank, rho) in [
            (vec![2.0, 2.0], 1usize, 1.0),
            (vec![4.0, 2.0], 1, 1.0),
            (vec![2.0, 2.0, 2.0], 1, 1.0),
            (vec![3.0, 2.9, 2.8, 0.1], 2, 0.7),
        ] {
            let gs = spec(&g);
            let (_, z) = pooled_zeta(&gs, rank, rho).unwrap();
            let got = split_cost(z.values(), &g, rank, rho);
            // grid over the junction bracket
            let scale = 1.0 + rho;
            let lo = g[rank - 1] / scale;
            let hi = if rank < g.len() { g[rank] } else { 0.0 };
            let mut best = f64::INFINITY;
            let steps = 200_000;
            for i in 0..=steps {
                let s = lo + (hi - lo).max(0.0) * i as f64 / steps as f64;
                let zz: Vec<f64> = (0..g.len())
                    .map(|j| {
                        if j < rank {
                            (g[j] / scale).max(s)
                        } else {
                            g[j].min(s)
                        }
                    })
                    .collect();
                best = best.min(split_cost(&zz, &g, rank, rho));
            }
            assert!(got <= best + 1e-9, "grid found better: {got} vs {best}");
        }
    }

    #[test]
    fn pooled_zeta_beats_random_monotone_candidates() {
        let mut rng = oorandom(23);
        for _ in 0..40 {
            let n = 2 + (next(&mut rng) % 6) as usize;
            let mut g: Vec<f64> = (0..n).map(|_| unit(&mut rng) * 3.0).collect();
            g.sort_unstable_by(|a, b| b.total_cmp(a));
            let rank = 1 + (next(&mut rng) as usize) % n;
            let rho = [0.1, 0.5, 1.0, 4.0][(next(&mut rng) % 4) as usize];
            let gs = spec(&g);
            let (_, z) = pooled_zeta(&gs, rank, rho).unwrap();
            let opt = split_cost(z.values(), &g, rank, rho);
            for _ in 0..25 {
                let mut cand: Vec<f64> = (0..n).map(|_| unit(&mut rng) * 4.0).collect();
                cand.sort_unstable_by(|a, b| b.total_cmp(a));
                assert!(split_cost(&cand, &g, rank, rho) + 1e-12 >= opt);
            }
        }
    }

    #[test]
    fn prox_flat_pair_pools() {
        let b = prox_spectrum_at_f(&spec(&[1.0, 1.0]), 1, 1.0).unwrap();
        assert!((b.s - 4.0 / 3.0).abs() < 1e-12);
        assert_eq!((b.k1, b.k2), (1, 2));
        assert!(!b.is_truncation());
        assert!((b.alpha[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((b.alpha[1] - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn prox_separated_pair_truncates_exactly() {
        let b = prox_spectrum_at_f(&spec(&[2.0, 1.0]), 1, 1.0).unwrap();
        assert!(b.is_truncation());
        assert_eq!(b.alpha.values(), &[2.0, 0.0]);
    }

    #[test]
    fn prox_flat_triple() {
        let b = prox_spectrum_at_f(&spec(&[1.0, 1.0, 1.0]), 1, 1.0).unwrap();
        assert!((b.s - 1.5).abs() < 1e-12);
        assert_eq!(b.alpha.values(), &[0.5, 0.5, 0.5]);
    }

    #[test]
    fn prox_respects_structure_on_random_input() {
        let mut rng = oorandom(31);
        for _ in 0..400 {
            let n = 1 + (next(&mut rng) % 8) as usize;
            let mut v: Vec<f64> = (0..n).map(|_| unit(&mut rng) * 2.0).collect();
            v.sort_unstable_by(|a, b| b.total_cmp(a));
            let phi = spec(&v);
            let rank = 1 + (next(&mut rng) as usize) % n;
            let rho = [0.1, 0.5, 1.0, 4.0][(next(&mut rng) % 4) as usize];
            let b = prox_spectrum_at_f(&phi, rank, rho).unwrap();
            let a = b.alpha.values();
            for j in 0..n {
                assert!(a[j] <= v[j] + 1e-12, "prox must not grow any entry");
                let pos = j + 1;
                if pos < b.k1 {
                    assert_eq!(a[j], v[j]);
                }
                if pos > b.k2 {
                    assert_eq!(a[j], 0.0);
                }
            }
            if b.k1 <= b.k2 {
                // the level sits strictly above the last pulled entry
                assert!(b.s > v[b.k2 - 1] - 1e-9 * v[0].max(1.0));
            }
            // truncation fires exactly on the separation condition
            let next = phi.get(rank);
            assert_eq!(b.is_truncation(), v[rank - 1] >= (1.0 + rho) * next);
            if b.is_truncation() {
                assert_eq!(a, truncate(&phi, rank).unwrap().values());
            }
        }
    }

    // tiny xorshift so the tests stay dependency-light here
    fn oorandom(seed: u64) -> u64 {
        seed.wrapping_mul(0x9e3779b97f4a7c15)
            .wrapping_add(0x2545f4914f6cdd1d)
    }

    fn next(state: &mut u64) -> u64 {
        let mut x = *state;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        *state = x;
        x
    }

    fn unit(state: &mut u64) -> f64 {
        (next(state) >> 11) as f64 / (1u64 << 53) as f64
    }
}
