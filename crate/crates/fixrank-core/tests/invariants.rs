//! Cross-module invariants that no single unit suite can see: the prox as a
//! true minimizer, contraction of spectra, projector algebra, and a batch of
//! randomized laws at the spectrum level.

mod common;

use common::*;
use fixrank_core::*;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn prox_output_beats_a_thousand_perturbations() {
    let mut r = rng(21);
    for _ in 0..20 {
        let m = r.gen_range(2..=6);
        let n = r.gen_range(2..=5);
        let rank = r.gen_range(1..=m.min(n));
        let rho = [0.1, 0.5, 1.0, 4.0][r.gen_range(0..4)];
        let f = random_mat(&mut r, m, n, 2.0);
        let prob = EnvelopeProblem::new(f.clone(), rank).unwrap();
        let a = prob.prox(rho).unwrap();
        let base = prob.envelope(&a).unwrap() + rho * a.sq_dist(&f);
        for _ in 0..50 {
            let step = 10f64.powi(-r.gen_range(1..=4));
            let d = random_mat(&mut r, m, n, step);
            let probe = &a + &d;
            let val = prob.envelope(&probe).unwrap() + rho * probe.sq_dist(&f);
            assert!(
                val >= base - 1e-10 * base.abs().max(1.0),
                "perturbation improved the prox objective: {} < {}",
                val,
                base
            );
        }
    }
}

#[test]
fn prox_never_inflates_a_singular_value() {
    let mut r = rng(22);
    for _ in 0..40 {
        let m = r.gen_range(1..=7);
        let n = r.gen_range(1..=7);
        let rank = r.gen_range(1..=m.min(n));
        let rho = r.gen_range(0.05..5.0);
        let f = random_mat(&mut r, m, n, 2.0);
        let prob = EnvelopeProblem::new(f.clone(), rank).unwrap();
        let b = prob.prox_breakdown(rho).unwrap();
        let phi = prob.data_spectrum();
        let scale = phi.top().max(1.0);
        for j in 0..phi.len() {
            assert!(
                b.alpha[j] <= phi[j] + 1e-12 * scale,
                "entry {} grew: {} > {}",
                j,
                b.alpha[j],
                phi[j]
            );
        }
        let out = prob.prox(rho).unwrap();
        assert!(out.frob_norm() <= f.frob_norm() * (1.0 + 1e-12));
    }
}

#[test]
fn readout_then_lift_is_the_projection() {
    let mut r = rng(23);
    for _ in 0..50 {
        let m = r.gen_range(1..=9);
        let n = r.gen_range(1..=9);
        let a = random_mat(&mut r, m, n, 3.0);
        let direct = hankel_project(&a);
        let through = hankel_from_signal(&signal_from_hankel(&a), m).unwrap();
        assert!(
            direct.sq_dist(&through).sqrt() <= 1e-13 * a.frob_norm().max(1.0),
            "two routes to the projection disagree"
        );
    }
}

#[test]
fn rank_truncation_attains_the_tail_energy() {
    let mut r = rng(24);
    for _ in 0..30 {
        let m = r.gen_range(1..=7);
        let n = r.gen_range(1..=6);
        let f = random_mat(&mut r, m, n, 2.0);
        let phi = svd(&f).unwrap().spectrum;
        for rank in 1..=m.min(n) {
            let prob = EnvelopeProblem::new(f.clone(), rank).unwrap();
            let cut = eckart_young(&f, rank).unwrap();
            let got = prob.objective(&cut).unwrap();
            let tail: f64 = phi.values()[rank..].iter().map(|v| v * v).sum();
            assert!(
                got.is_finite() && (got - tail).abs() <= 1e-9 * tail.max(1.0),
                "truncation misfit {} vs tail energy {}",
                got,
                tail
            );
        }
    }
}

#[test]
fn leaving_the_minimizing_face_raises_the_envelope() {
    let mut r = rng(25);
    for _ in 0..30 {
        // spectrum with a forced tie block straddling the cut
        let n = r.gen_range(3..=6);
        let rank = r.gen_range(2..=n - 1);
        let mut v: Vec<f64> = (0..n).map(|_| r.gen_range(0.5..3.0)).collect();
        v.sort_unstable_by(|a, b| b.total_cmp(a));
        let width = r.gen_range(2..=(n + 1 - rank).min(3));
        for j in rank..rank - 1 + width {
            v[j] = v[rank - 1];
        }
        let f = Mat::diag(&v, n, n);
        let prob = EnvelopeProblem::new(f, rank).unwrap();
        let set = minimizer_set(prob.data_spectrum().clone(), rank, DEFAULT_MULT_TOL).unwrap();
        assert!(set.block() >= width, "tie block not detected");

        let x = &sample_simplex(set.block(), set.kept(), 1, 7).unwrap()[0];
        let on = prob
            .envelope(
                &prob
                    .data_svd()
                    .compose_with(lift(&set, x).unwrap().values()),
            )
            .unwrap();
        assert!((on - set.min_value).abs() <= 1e-9 * set.min_value.max(1.0));

        let mut x2 = x.clone();
        let delta = 5e-3;
        let mut moved = false;
        for i in 0..x2.len() {
            let hi = if i == 0 { 1.0 } else { x2[i - 1] };
            let lo = if i + 1 < x2.len() { x2[i + 1] } else { 0.0 };
            if x2[i] + delta <= hi {
                x2[i] += delta;
                moved = true;
            } else if x2[i] - delta >= lo {
                x2[i] -= delta;
                moved = true;
            }
            if moved {
                break;
            }
        }
        assert!(moved, "sample too pinched to perturb");
        let off = prob
            .envelope(
                &prob
                    .data_svd()
                    .compose_with(lift(&set, &x2).unwrap().values()),
            )
            .unwrap();
        assert!(
            off > on + 1e-9,
            "off-face envelope {} did not rise above {}",
            off,
            on
        );
    }
}

fn sorted_values(max_len: usize, hi: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..hi, 1..=max_len).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.total_cmp(a));
        v
    })
}

fn values_and_rank(max_len: usize) -> impl Strategy<Value = (Vec<f64>, usize)> {
    sorted_values(max_len, 3.0).prop_flat_map(|v| {
        let n = v.len();
        (Just(v), 1..=n)
    })
}

proptest! {
    #[test]
    fn penalty_is_nonnegative_and_vanishes_on_short_tails((v, rank) in values_and_rank(10)) {
        let phi = Spectrum::new(v.clone()).unwrap();
        prop_assert!(envelope_penalty(&phi, rank).unwrap() >= 0.0);

        let mut cut = v.clone();
        for x in cut.iter_mut().skip(rank) {
            *x = 0.0;
        }
        let scale = v[0].max(1.0);
        let short = Spectrum::new(cut).unwrap();
        prop_assert!(envelope_penalty(&short, rank).unwrap() <= 1e-12 * scale * scale);
    }

    #[test]
    fn pool_scan_lands_in_the_admissible_window((v, rank) in values_and_rank(12)) {
        let beta = Spectrum::new(v.clone()).unwrap();
        let got = k_star(&beta, rank).unwrap();
        let tol = 1e-12 * v[0].max(1.0);
        let omega = v[rank - got.k..].iter().sum::<f64>() / got.k as f64;
        prop_assert!((got.omega - omega).abs() <= tol);
        prop_assert!(v[rank - got.k] <= omega + tol);
        if got.k < rank {
            prop_assert!(omega < v[rank - got.k - 1] + tol);
        }
    }

    #[test]
    fn prox_is_dominated_and_truncates_exactly_on_separation(
        (v, rank) in values_and_rank(9),
        rho in 0.05f64..5.0,
    ) {
        let phi = Spectrum::new(v.clone()).unwrap();
        let b = prox_spectrum_at_f(&phi, rank, rho).unwrap();
        let scale = v[0].max(1.0);
        for (j, &vj) in v.iter().enumerate() {
            prop_assert!(b.alpha[j] <= vj + 1e-12 * scale);
        }
        let next = if rank < v.len() { v[rank] } else { 0.0 };
        prop_assert_eq!(b.is_truncation(), v[rank - 1] >= (1.0 + rho) * next);
    }

    #[test]
    fn pooled_head_shrinks_and_rebuilds_from_its_level(
        (v, rank) in values_and_rank(9),
        rho in 0.05f64..5.0,
    ) {
        let g = Spectrum::new(v.clone()).unwrap();
        let (s, zeta) = pooled_zeta(&g, rank, rho).unwrap();
        for j in 0..v.len() {
            let want = if j < rank {
                (v[j] / (1.0 + rho)).max(s)
            } else {
                v[j].min(s)
            };
            prop_assert_eq!(zeta[j], want, "position {} strays from its formula", j);
        }
    }

    #[test]
    fn lift_then_readout_returns_the_signal(
        (f, rows) in prop::collection::vec(-100.0f64..100.0, 1..=24).prop_flat_map(|f| {
            let n = f.len();
            (Just(f), 1..=n)
        }),
    ) {
        let back = signal_from_hankel(&hankel_from_signal(&f, rows).unwrap());
        prop_assert_eq!(back.len(), f.len());
        for (x, y) in back.iter().zip(&f) {
            prop_assert!((x - y).abs() <= 1e-12 * y.abs().max(1.0));
        }
    }
}
