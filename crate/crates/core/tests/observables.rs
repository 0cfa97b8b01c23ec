mod common;

use std::f64::consts::PI;
use std::sync::Arc;

use common::{random_gauge, random_real_state, random_state, rel, rng, test_grid, test_window};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use tempus::observables::{
    check_gauge_normalization, derivative_norm, gauge_from_kernel, kernel_from_gauge, moments_distribution, moments_spectral,
    phase_gauge_scan, reconstruction_error, tau_overlap, tau_resolution_mean, temporal_distribution, temporal_distribution_unchecked,
    variance_gauge_scan, GaugeFamily,
};
use tempus::spectral::{EnergyGrid, TemporalGrid, TimeKind};
use tempus::Error;

#[test]
fn random_pairs_are_normalized() {
    let grid = test_grid();
    let tg = test_window();
    let mut r = rng(1);
    for case in 0..20 {
        let channels = 1 + case % 2;
        let m = channels + case % 3;
        let s = random_state(&mut r, &grid, channels);
        let g = random_gauge(&mut r, &grid, channels, m);
        assert!(check_gauge_normalization(&g).pass);
        for kind in [TimeKind::Clock, TimeKind::Arrival] {
            let d = temporal_distribution(&s, &g, &tg, kind).unwrap();
            assert!((d.mass() - 1.0).abs() < 1e-6, "case {case}: {}", d.mass());
        }
    }
}

#[test]
fn densities_translate_under_evolution() {
    let grid = test_grid();
    let tg = test_window();
    let mut r = rng(2);
    let s = random_state(&mut r, &grid, 1);
    let g = random_gauge(&mut r, &grid, 1, 2);
    for kind in [TimeKind::Clock, TimeKind::Arrival] {
        let base = temporal_distribution_unchecked(&s, &g, &tg, kind).unwrap();
        for t0 in [-5.0, -1.0, 1.0, 5.0] {
            let moved = temporal_distribution_unchecked(&s.evolve(t0), &g, &tg, kind).unwrap();
            let shift = kind.covariance_sign() * t0;
            let mismatch = tg
                .times()
                .zip(moved.density())
                .map(|(t, m)| (m - base.value_at(t - shift)).abs())
                .fold(0.0, f64::max);
            assert!(mismatch < 1e-4, "{kind:?} t0={t0}: {mismatch}");
        }
    }
}

#[test]
fn spectral_and_distribution_moments_agree() {
    let grid = test_grid();
    let tg = test_window();
    let mut r = rng(3);
    for case in 0..10 {
        let channels = if case < 6 { 1 } else { 2 };
        let s = random_state(&mut r, &grid, channels);
        let g = random_gauge(&mut r, &grid, channels, channels + case % 2);
        for kind in [TimeKind::Clock, TimeKind::Arrival] {
            let sp = moments_spectral(&s, &g, kind).unwrap();
            let di = moments_distribution(&temporal_distribution(&s, &g, &tg, kind).unwrap()).unwrap();
            let sd = di.std_dev();
            assert!(rel(sp.mean, di.mean, sd) < 1e-5, "case {case} {kind:?}: {} vs {}", sp.mean, di.mean);
            assert!(rel(sp.second_moment, di.second_moment, 0.0) < 1e-5, "case {case}");
            assert!(sp.variance >= -1e-10 && di.variance >= 0.0);
        }
    }
}

#[test]
fn real_state_moments_follow_covariance() {
    let grid = test_grid();
    let mut r = rng(4);
    let s = random_real_state(&mut r, &grid);
    let unity = GaugeFamily::unity(Arc::clone(&grid), 1);
    assert!(moments_spectral(&s, &unity, TimeKind::Clock).unwrap().mean.abs() < 1e-10);
    let t0 = 3.7;
    let clock = moments_spectral(&s.evolve(t0), &unity, TimeKind::Clock).unwrap().mean;
    let arrival = moments_spectral(&s.evolve(t0), &unity, TimeKind::Arrival).unwrap().mean;
    assert!((clock - t0).abs() < 1e-9);
    assert!((arrival + t0).abs() < 1e-9);
    // A linear gauge phase shifts clock readings by lambda.
    let lambda = 2.5;
    let shifted = moments_spectral(&s, &GaugeFamily::linear_phase(Arc::clone(&grid), lambda), TimeKind::Clock).unwrap();
    assert!((shifted.mean - lambda).abs() < 1e-9);
    let tg = test_window();
    let di = moments_distribution(&temporal_distribution(&s, &GaugeFamily::linear_phase(Arc::clone(&grid), lambda), &tg, TimeKind::Clock).unwrap()).unwrap();
    assert!((di.mean - lambda).abs() < 1e-6);
}

#[test]
fn time_reversal_negates_free_arrival_mean() {
    let grid = test_grid();
    let mut r = rng(5);
    let s = random_state(&mut r, &grid, 1);
    let unity = GaugeFamily::unity(Arc::clone(&grid), 1);
    let m = moments_spectral(&s, &unity, TimeKind::Arrival).unwrap().mean;
    let mr = moments_spectral(&s.time_reverse(), &unity, TimeKind::Arrival).unwrap().mean;
    assert!(m.abs() > 1.0);
    assert!((m + mr).abs() < 1e-9 * m.abs());
}

#[test]
fn narrow_density_has_vanishing_variance() {
    let vars: Vec<f64> = [2.0, 1.0, 0.5]
        .iter()
        .map(|&w| {
            let tg = TemporalGrid::new(-20.0, 20.0, 8001).unwrap();
            let d = tg.times().map(|t| (-(t - 3.0f64).powi(2) / (2.0 * w * w)).exp() / (w * (2.0 * PI).sqrt())).collect();
            let dist = tempus::TemporalDistribution::new(tg, d, TimeKind::Clock).unwrap();
            let m = moments_distribution(&dist).unwrap();
            assert!((m.mean - 3.0).abs() < 1e-10);
            m.variance
        })
        .collect();
    assert!(vars[0] > vars[1] && vars[1] > vars[2]);
    assert!((vars[2] - 0.25).abs() < 1e-8);
}

#[test]
fn insufficient_window_is_an_error() {
    let grid = test_grid();
    let mut r = rng(6);
    let s = random_state(&mut r, &grid, 1);
    let g = GaugeFamily::unity(Arc::clone(&grid), 1);
    let tg = TemporalGrid::new(-2.0, 2.0, 81).unwrap();
    assert!(matches!(temporal_distribution(&s, &g, &tg, TimeKind::Clock), Err(Error::WindowMass { .. })));
    let d = temporal_distribution_unchecked(&s, &g, &tg, TimeKind::Clock).unwrap();
    assert!(matches!(moments_distribution(&d), Err(Error::WindowMass { .. })));
}

#[test]
fn tau_states_reproduce_minimal_density() {
    let grid = test_grid();
    let tg = test_window();
    let mut r = rng(7);
    let s = random_state(&mut r, &grid, 1);
    let d = temporal_distribution(&s, &GaugeFamily::unity(Arc::clone(&grid), 1), &tg, TimeKind::Clock).unwrap();
    for (k, t) in tg.times().enumerate().step_by(37) {
        let o = tau_overlap(&s, t).unwrap().norm_sqr();
        assert!((o - d.density()[k]).abs() < 1e-10);
    }
    let mean = moments_spectral(&s, &GaugeFamily::unity(Arc::clone(&grid), 1), TimeKind::Clock).unwrap().mean;
    assert!((tau_resolution_mean(&s, &tg).unwrap() - mean).abs() < 1e-5);
    let real = random_real_state(&mut r, &grid);
    assert!(tau_overlap(&real, 0.0).unwrap().im.abs() < 1e-15);
}

#[test]
fn linear_phase_scan_is_flat_at_floor() {
    let grid = test_grid();
    let mut r = rng(8);
    let s = random_real_state(&mut r, &grid);
    let params: Vec<f64> = (0..=40).map(|i| -10.0 + 0.5 * i as f64).collect();
    let scan = variance_gauge_scan(&s, |e, l| l * e, &params).unwrap();
    let floor = scan.floor.unwrap();
    assert!((floor - derivative_norm(&s)).abs() < 1e-14);
    assert!(scan.relative_spread() < 1e-8, "{}", scan.relative_spread());
    for row in &scan.rows {
        assert!(rel(row.variance, floor, 0.0) < 1e-6);
        assert!((row.mean - row.param).abs() < 1e-9);
    }
}

#[test]
fn quadratic_phases_raise_the_variance() {
    let grid = test_grid();
    let mut r = rng(9);
    let s = random_real_state(&mut r, &grid);
    let params = [-2.0, -0.5, -0.1, 0.1, 0.5, 2.0];
    let scan = variance_gauge_scan(&s, |e, mu| mu * e * e, &params).unwrap();
    let floor = scan.floor.unwrap();
    for row in &scan.rows {
        // Oracle: Var = floor + 4 mu^2 Var_psi(E) for real psi.
        let m1 = s.energy_expectation(|e| e);
        let ve = s.energy_expectation(|e| e * e) - m1 * m1;
        let expect = floor + 4.0 * row.param * row.param * ve;
        assert!(row.variance > floor);
        assert!(rel(row.variance, expect, 0.0) < 1e-8, "{} vs {expect}", row.variance);
    }
}

#[test]
fn rephased_state_prefers_matching_gauge() {
    let grid = test_grid();
    let mut r = rng(10);
    let s = random_real_state(&mut r, &grid);
    let phi0 = 0.8;
    let rephased = s.rephase(|e| phi0 * e * e);
    let params: Vec<f64> = (0..=32).map(|i| -2.0 + 0.125 * i as f64).collect();
    assert!(matches!(variance_gauge_scan(&rephased, |e, p| p * e * e, &params), Err(Error::NonRealState { .. })));
    let scan = phase_gauge_scan(&rephased, |e, p| p * e * e, &params).unwrap();
    let best = scan.argmin().unwrap();
    assert!((best.param - phi0).abs() <= 0.125 + 1e-12, "{}", best.param);
}

#[test]
fn kernel_round_trips() {
    let grid = Arc::new(EnergyGrid::uniform_panels(0.0, 4.0, 12, 6).unwrap());
    let mut r = rng(11);
    for case in 0..12 {
        let channels = 1 + case % 2;
        let m = channels + case % (5 - channels);
        let fam = random_gauge(&mut r, &grid, channels, m);
        let k = kernel_from_gauge(&fam);
        assert!(k.is_psd());
        assert!(k.channel_diagonal_defect() < 1e-12);
        let g = gauge_from_kernel(&k).unwrap();
        assert!(g.len() <= m, "rank {} > {m}", g.len());
        assert!(reconstruction_error(&k, &g) < 1e-8);
        assert!(check_gauge_normalization(&g).max_deviation < 1e-8);
    }
}

#[test]
fn unitary_mixing_leaves_kernel_unchanged() {
    let grid = Arc::new(EnergyGrid::uniform_panels(0.0, 4.0, 8, 6).unwrap());
    let mut r = rng(12);
    let fam = random_gauge(&mut r, &grid, 1, 3);
    let th: f64 = 0.7;
    let z = Complex64::from_polar(1.0, 1.1);
    let (s, c) = th.sin_cos();
    let u = vec![
        vec![Complex64::new(c, 0.0), -z * s, Complex64::new(0.0, 0.0)],
        vec![z.conj() * s, Complex64::new(c, 0.0), Complex64::new(0.0, 0.0)],
        vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0)],
    ];
    let mixed = fam.mix(&u).unwrap();
    let a = kernel_from_gauge(&fam);
    let b = kernel_from_gauge(&mixed);
    let diff: DMatrix<Complex64> = a.matrix() - b.matrix();
    assert!(diff.iter().all(|z| z.norm() < 1e-12));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rotation_families_are_normalized(p0 in -3.0f64..3.0, p1 in -5.0f64..5.0, p2 in -2.0f64..2.0) {
        let g = GaugeFamily::rotation(test_grid(), |e| p0 + p1 * e + p2 * e * e);
        prop_assert!(check_gauge_normalization(&g).pass);
        prop_assert!(g.is_admissible());
    }

    #[test]
    fn variance_floor_holds(seed in 0u64..1000, mu in -1.0f64..1.0, lambda in -5.0f64..5.0) {
        let grid = test_grid();
        let mut r = rng(seed);
        let s = random_real_state(&mut r, &grid);
        let floor = derivative_norm(&s);
        let fam = GaugeFamily::phase(Arc::clone(&grid), |e| lambda * e + mu * e * e);
        let v = moments_spectral(&s, &fam, TimeKind::Clock).unwrap().variance;
        prop_assert!(v >= floor - 1e-8);
        let rot = random_gauge(&mut r, &grid, 1, 2);
        let v2 = moments_spectral(&s, &rot, TimeKind::Clock).unwrap().variance;
        prop_assert!(v2 >= floor - 1e-8);
    }

    #[test]
    fn scaled_gauges_fail_normalization(scale in 0.1f64..0.99) {
        let g = GaugeFamily::from_fn(test_grid(), 1, 1, |_, _, _| Complex64::new(scale, 0.0)).unwrap();
        let r = check_gauge_normalization(&g);
        prop_assert!(!r.pass);
        prop_assert!((r.max_deviation - (1.0 - scale * scale)).abs() < 1e-12);
    }
}
