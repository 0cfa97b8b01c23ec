//! The property suite behind `tempus selftest` and the acceptance target.
//! Every criterion runs at its stated tolerance and yields one line.

use std::sync::Arc;
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use tempus::halfline::{
    arrival_mean_relations, first_arrival_distribution, inverse_speed_expectation, resolving_grid, smith_delay, wall_delay, ArrivalMeans,
    HalfLinePotential, PhaseShiftProfile,
};
use tempus::lyapunov::{lyapunov_curve, no_invariant_lyapunov_certificate, reversal_identity_check, strauss_expectation, StraussKernel, Verdict};
use tempus::observables::{
    derivative_norm, gauge_from_kernel, kernel_from_gauge, moments_distribution, moments_spectral, phase_gauge_scan, reconstruction_error,
    temporal_distribution, temporal_distribution_unchecked, variance_gauge_scan, GaugeFamily,
};
use tempus::spectral::{gaussian_packet, EnergyGrid, PacketParams, SpectralState, TemporalGrid, TimeKind};

use crate::config::{Scenario, ScenarioConfig};
use crate::report::Check;
use crate::sampling::{random_gauge, random_psd, random_real_state, random_state, rng, sample_grid, sample_window};
use crate::scenarios::{energy_grid, energy_width, execute, moment_mismatch, potential, time_grid};

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct Criterion {
    pub id: &'static str,
    pub title: &'static str,
    pub check: Check,
    pub seconds: f64,
    /// Secondary measurements, or the error that stopped the run.
    pub note: String,
}

impl std::fmt::Display for Criterion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let c = &self.check;
        write!(
            f,
            "{} [{}] {}: {:.4e} {} {:.4e} ({:.2} s)",
            if c.pass { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            c.value,
            c.relation,
            c.tolerance,
            self.seconds
        )?;
        if !self.note.is_empty() {
            write!(f, " | {}", self.note)?;
        }
        Ok(())
    }
}

type Outcome = Result<(Check, String), String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// The fig1 packet on a plain grid; no resonances to resolve.
fn free_packet(x0: f64) -> Result<SpectralState, String> {
    let grid = Arc::new(EnergyGrid::uniform_panels(0.6, 2.0, 140, 12).map_err(err)?);
    gaussian_packet(grid, PacketParams { x0, ..PacketParams::fig1() }).map_err(err)
}

fn normalization() -> Outcome {
    let start = Instant::now();
    let grid = sample_grid();
    let tg = sample_window();
    let mut r = rng(1);
    let mut worst = 0.0f64;
    for case in 0..20 {
        let channels = 1 + case % 2;
        let s = random_state(&mut r, &grid, channels);
        let g = random_gauge(&mut r, &grid, channels, channels + case % 3);
        for kind in [TimeKind::Clock, TimeKind::Arrival] {
            let d = temporal_distribution(&s, &g, &tg, kind).map_err(err)?;
            worst = worst.max((d.mass() - 1.0).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok((Check::at_most("max |mass - 1|", worst, 1e-6).and(secs < 10.0), "20 pairs, budget 10 s".into()))
}

fn covariance() -> Outcome {
    let grid = sample_grid();
    let tg = sample_window();
    let mut r = rng(2);
    let mut worst = 0.0f64;
    for _ in 0..3 {
        let s = random_state(&mut r, &grid, 1);
        let g = random_gauge(&mut r, &grid, 1, 2);
        for kind in [TimeKind::Clock, TimeKind::Arrival] {
            let base = temporal_distribution_unchecked(&s, &g, &tg, kind).map_err(err)?;
            for t0 in [-5.0, -1.0, 1.0, 5.0] {
                let moved = temporal_distribution_unchecked(&s.evolve(t0), &g, &tg, kind).map_err(err)?;
                // Clock readings move by +t0, arrival times by -t0.
                let shift = match kind {
                    TimeKind::Clock => t0,
                    TimeKind::Arrival => -t0,
                };
                let m = tg
                    .times()
                    .zip(moved.density())
                    .map(|(t, d)| (d - base.value_at(t - shift)).abs())
                    .fold(0.0, f64::max);
                worst = worst.max(m);
            }
        }
    }
    Ok((Check::below("sup mismatch", worst, 1e-4), String::new()))
}

fn moments() -> Outcome {
    let grid = sample_grid();
    let tg = sample_window();
    let mut r = rng(3);
    let mut worst = 0.0f64;
    for case in 0..10 {
        let channels = if case < 6 { 1 } else { 2 };
        let s = random_state(&mut r, &grid, channels);
        let g = random_gauge(&mut r, &grid, channels, channels + case % 2);
        for kind in [TimeKind::Clock, TimeKind::Arrival] {
            let sp = moments_spectral(&s, &g, kind).map_err(err)?;
            let di = moments_distribution(&temporal_distribution(&s, &g, &tg, kind).map_err(err)?).map_err(err)?;
            worst = worst.max(moment_mismatch(&sp, &di));
        }
    }
    Ok((Check::below("max relative mismatch", worst, 1e-5), "10 states, 4 two-channel".into()))
}

/// Arrival means of the fig1 packet at g = 20 on the smith scenario grid and window.
fn scattering_means() -> Result<(ArrivalMeans, f64, f64), String> {
    let start = Instant::now();
    let cfg = ScenarioConfig::defaults(Scenario::Smith);
    let pot = potential(&cfg).map_err(err)?;
    let grid = energy_grid(&cfg, &pot).map_err(err)?;
    let s = gaussian_packet(Arc::clone(&grid), (&cfg.packet).into()).map_err(err)?;
    let prof = PhaseShiftProfile::new(grid, &pot).map_err(err)?;
    let m = arrival_mean_relations(&s, &prof, &time_grid(&cfg).map_err(err)?).map_err(err)?;
    Ok((m, wall_delay(&s, cfg.potential.a), start.elapsed().as_secs_f64()))
}

fn means_note(m: &ArrivalMeans, wall: f64) -> String {
    format!(
        "mean_in {:.4} mean_out {:.4} mean_io {:.4} delay {:.4} wall {:.4}",
        m.mean_in, m.mean_out, m.mean_io, m.delay, wall
    )
}

fn opaque_limit() -> Outcome {
    let pot = HalfLinePotential::delta(200.0, 20.0).map_err(err)?;
    let grid = Arc::new(resolving_grid(&pot, 0.6, 2.0, 2.5e-3, 12).map_err(err)?);
    let s = gaussian_packet(Arc::clone(&grid), PacketParams::fig1()).map_err(err)?;
    let prof = PhaseShiftProfile::new(grid, &pot).map_err(err)?;
    let delay = smith_delay(&s, &prof).map_err(err)?;
    let wall = wall_delay(&s, 20.0);
    Ok((
        Check::below("|delay - wall| / |wall|", (delay - wall).abs() / wall.abs(), 0.02),
        format!("delay {delay:.4} wall {wall:.4}"),
    ))
}

fn first_arrivals() -> Outcome {
    let s = free_packet(180.0)?;
    let tg = TemporalGrid::new(0.0, 250.0, 1001).map_err(err)?;
    let unity = GaugeFamily::unity(Arc::clone(s.grid()), 1);
    let origin = temporal_distribution(&s, &unity, &tg, TimeKind::Arrival).map_err(err)?;
    let at0 = first_arrival_distribution(&s, 0.0, &tg).map_err(err)?;
    let sup = origin.density().iter().zip(at0.density()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let m0 = moments_distribution(&at0).map_err(err)?.mean;
    let inv_v = inverse_speed_expectation(&s);
    let mut worst = 0.0f64;
    for a in [5.0, 20.0] {
        let ma = moments_distribution(&first_arrival_distribution(&s, a, &tg).map_err(err)?).map_err(err)?.mean;
        worst = worst.max(((ma - m0) + a * inv_v).abs() / (a * inv_v));
    }
    Ok((
        Check::below("max relative shift error", worst, 1e-4).and(sup < 1e-12),
        format!("a=0 sup difference {sup:.2e} (< 1e-12)"),
    ))
}

fn scenario_check(s: Scenario, name: &str) -> Outcome {
    let out = execute(&ScenarioConfig::defaults(s)).map_err(err)?;
    let check = out
        .report
        .checks
        .iter()
        .find(|c| c.name == name)
        .cloned()
        .ok_or_else(|| format!("{} produced no `{name}` check", s.name()))?;
    let note = out
        .report
        .quantities
        .iter()
        .filter(|(k, _)| k.starts_with("mean") || k.starts_with("peak") || k.starts_with("leading"))
        .map(|(k, v)| format!("{k} {v:.4}"))
        .collect::<Vec<_>>()
        .join(" ");
    Ok((check, note))
}

fn lyapunov() -> Outcome {
    let mut inc = f64::NEG_INFINITY;
    let mut ends = 0.0f64;
    let mut acc = 0.0f64;
    let mut curves = Vec::new();
    let mut r = rng(9);
    let grid = sample_grid();
    for _ in 0..5 {
        let s = random_state(&mut r, &grid, 2);
        let g = random_gauge(&mut r, &grid, 2, 3);
        curves.push((s, g, sample_window()));
    }
    let fig = free_packet(180.0)?;
    let tg = TemporalGrid::new(0.0, 250.0, 1001).map_err(err)?;
    curves.push((fig.clone(), GaugeFamily::unity(Arc::clone(fig.grid()), 1), tg));
    for (s, g, tg) in &curves {
        let dist = temporal_distribution(s, g, tg, TimeKind::Arrival).map_err(err)?;
        let c = lyapunov_curve(s, g, tg).map_err(err)?;
        inc = inc.max(c.max_increase());
        ends = ends.max(c.endpoint_defect());
        acc = acc.max(c.accumulation_defect(&dist));
    }
    // Strauss approximants on the fig1 packet against its origin curve.
    let reference = lyapunov_curve(&fig, &GaugeFamily::unity(Arc::clone(fig.grid()), 1), &tg).map_err(err)?;
    let sub = TemporalGrid::new(0.0, 250.0, 26).map_err(err)?;
    let width = energy_width(&fig);
    let mut devs = Vec::new();
    for f in [1e-1, 1e-2, 1e-3] {
        let k = StraussKernel::new(Arc::clone(fig.grid()), f * width).map_err(err)?;
        let c = strauss_expectation(&fig, &k, &sub).map_err(err)?;
        let d = c
            .values()
            .iter()
            .zip(reference.values().iter().step_by(40))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        devs.push(d);
    }
    let decreasing = devs.windows(2).all(|w| w[1] < w[0]);
    let rate: Vec<String> = [1e-1, 1e-2, 1e-3].iter().zip(&devs).map(|(f, d)| format!("{:.1}", d / (f * width))).collect();
    Ok((
        Check::at_most("max step increase", inc, 1e-10).and(ends <= 1e-3 && acc < 1e-10 && decreasing),
        format!(
            "endpoints {ends:.2e} accumulation {acc:.2e} strauss deviations {:.3e} {:.3e} {:.3e} (deviation/eps {})",
            devs[0],
            devs[1],
            devs[2],
            rate.join(" ")
        ),
    ))
}

fn reversal() -> Outcome {
    let s = free_packet(180.0)?;
    let tg = TemporalGrid::new(-400.0, 400.0, 1601).map_err(err)?;
    let c = reversal_identity_check(&s, &GaugeFamily::unity(Arc::clone(s.grid()), 1), &tg).map_err(err)?;
    Ok((Check::below("sup deviation", c.max_deviation, 1e-8), String::new()))
}

fn certificate() -> Outcome {
    let mut r = rng(11);
    let mut worst = f64::NEG_INFINITY;
    let mut count = 0;
    while count < 1000 {
        let n = r.gen_range(1..=8);
        let k = random_psd(&mut r, n);
        let trace: f64 = (0..n).map(|i| k[(i, i)].re).sum();
        if trace <= 1e-6 {
            continue;
        }
        count += 1;
        match no_invariant_lyapunov_certificate(&k).map_err(err)? {
            Verdict::Witness { value, .. } => worst = worst.max(value),
            Verdict::Trivial => worst = f64::INFINITY,
        }
    }
    let zero = no_invariant_lyapunov_certificate(&DMatrix::<Complex64>::zeros(5, 5)).map_err(err)?;
    Ok((
        Check::below("largest witness value", worst, 0.0).and(zero == Verdict::Trivial),
        format!("1000 kernels; zero kernel trivial: {}", zero == Verdict::Trivial),
    ))
}

fn gauge_scans() -> Outcome {
    let grid = sample_grid();
    let mut r = rng(12);
    let s = random_real_state(&mut r, &grid);
    let floor = derivative_norm(&s);
    let lambdas: Vec<f64> = (0..=40).map(|i| -10.0 + 0.5 * i as f64).collect();
    let lin = variance_gauge_scan(&s, |e, l| l * e, &lambdas).map_err(err)?;
    let spread = lin.relative_spread();
    let vs_floor = lin.rows.iter().map(|row| (row.variance - floor).abs() / floor).fold(0.0, f64::max);
    let mus = [-2.0, -0.5, -0.1, 0.1, 0.5, 2.0];
    let quad = variance_gauge_scan(&s, |e, mu| mu * e * e, &mus).map_err(err)?;
    let raised = quad.rows.iter().all(|row| row.variance > floor);
    let phi0 = 0.8;
    let step = 0.125;
    let params: Vec<f64> = (0..=32).map(|i| -2.0 + step * i as f64).collect();
    let best = phase_gauge_scan(&s.rephase(|e| phi0 * e * e), |e, p| p * e * e, &params)
        .map_err(err)?
        .argmin()
        .ok_or("empty scan")?;
    let located = (best.param - phi0).abs() <= step + 1e-12;
    Ok((
        Check::below("linear-scan relative spread", spread, 1e-8).and(vs_floor < 1e-6 && raised && located),
        format!("floor mismatch {vs_floor:.2e} (< 1e-6), quadratic raises: {raised}, rephased minimum at {}", best.param),
    ))
}

fn kernel_round_trip() -> Outcome {
    let grid = Arc::new(EnergyGrid::uniform_panels(0.0, 4.0, 12, 6).map_err(err)?);
    let mut r = rng(13);
    let mut worst = 0.0f64;
    let mut diag = 0.0f64;
    for case in 0..12 {
        let channels = 1 + case % 2;
        let m = channels + case % (5 - channels);
        let k = kernel_from_gauge(&random_gauge(&mut r, &grid, channels, m));
        let g = gauge_from_kernel(&k).map_err(err)?;
        worst = worst.max(reconstruction_error(&k, &g));
        if channels == 2 {
            diag = diag.max(k.channel_diagonal_defect());
        }
    }
    Ok((
        Check::below("max ||K - sum b b^dagger||", worst, 1e-8).and(diag < 1e-12),
        format!("ranks <= 4; two-channel diagonal defect {diag:.2e}"),
    ))
}

/// Runs every criterion in order, handing each result to `each` as it completes.
pub fn run_all(mut each: impl FnMut(&Criterion)) -> Vec<Criterion> {
    let mut out = Vec::new();
    let mut push = |id: &'static str, title: &'static str, start: Instant, res: Outcome| {
        let seconds = start.elapsed().as_secs_f64();
        let (check, note) = match res {
            Ok(x) => x,
            Err(e) => (Check::at_most("error", f64::NAN, 0.0), e),
        };
        let c = Criterion {
            id,
            title,
            check,
            seconds,
            note,
        };
        each(&c);
        out.push(c);
    };
    let t = Instant::now();
    push("1", "normalization of random (state, gauge) pairs", t, normalization());
    let t = Instant::now();
    push("2", "covariance of clock and arrival densities", t, covariance());
    let t = Instant::now();
    push("3", "spectral vs distribution moments", t, moments());

    let t = Instant::now();
    let means = scattering_means();
    match means {
        Ok((m, wall, secs)) => {
            let note = means_note(&m, wall);
            push(
                "4a",
                "smith identity, fig1 packet at g = 20 (runtime < 60 s)",
                t,
                Ok((Check::below("relative identity error", m.identity_error(), 1e-2).and(secs < 60.0), note.clone())),
            );
            let t = Instant::now();
            push("4b", "negative delay (advancement)", t, Ok((Check::below("smith delay", m.delay, 0.0), note.clone())));
            let t = Instant::now();
            push(
                "6",
                "interpolating asymptote mean",
                t,
                Ok((Check::at_most("|mean_io - (mean_in + mean_out)/2|", m.interpolation_error(), m.interpolation_tolerance()), note)),
            );
        }
        Err(e) => {
            for (id, title) in [("4a", "smith identity"), ("4b", "negative delay"), ("6", "interpolating asymptote mean")] {
                push(id, title, t, Err(e.clone()));
            }
        }
    }
    let t = Instant::now();
    push("5", "opaque limit at g = 200 against the wall delay", t, opaque_limit());
    let t = Instant::now();
    push("7", "first arrivals shift by -a<1/|v|>", t, first_arrivals());
    let t = Instant::now();
    push("8i", "fig1: packet centered at 180 +- 2 at t = 0", t, scenario_check(Scenario::Fig1, "packet_center_t0"));
    let t = Instant::now();
    push("8ii", "fig1: reflected packet ahead of the g = 0 reference at t = 190", t, scenario_check(Scenario::Fig1, "advancement_t190"));
    let t = Instant::now();
    push("8iii", "fig2: mean_out < mean_io < mean_in", t, scenario_check(Scenario::Fig2, "mean_ordering"));
    let t = Instant::now();
    push("9", "Lyapunov curves and Strauss approximants", t, lyapunov());
    let t = Instant::now();
    push("10", "time-reversal identity on the fig1 packet", t, reversal());
    let t = Instant::now();
    push("11", "no time-reversal invariant Lyapunov kernel", t, certificate());
    let t = Instant::now();
    push("12", "variance scans over gauges", t, gauge_scans());
    let t = Instant::now();
    push("13", "kernel round trip", t, kernel_round_trip());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn fast_criteria_pass() {
        for f in [covariance, reversal, kernel_round_trip, gauge_scans] {
            let (c, note) = f().unwrap();
            assert!(c.pass, "{c} {note}");
        }
    }

    #[test]
    fn mean_speed_is_near_group_speed() {
        let s = free_packet(180.0).unwrap();
        let v = 1.0 / inverse_speed_expectation(&s);
        assert!((v - PI / 2.0).abs() < 0.01);
    }
}
