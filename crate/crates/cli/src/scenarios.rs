//! Builtin scenarios. Each one computes everything in memory first, so a
//! failing step leaves no files behind.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex64;
use tempus::halfline::{
    arrival_mean_relations, asymptotic_arrivals, position_density, resolving_grid, wall_delay, ChannelTag, HalfLinePotential, PhaseShiftProfile,
};
use tempus::lyapunov::{curve_from_distribution, reversal_identity_check, strauss_expectation, StraussKernel};
use tempus::observables::{check_gauge_normalization, moments_distribution, moments_spectral, temporal_distribution, GaugeFamily, MomentReport};
use tempus::spectral::{gaussian_packet, EnergyGrid, SpectralState, TemporalDistribution, TemporalGrid};

use crate::config::{GaugeKind, PotentialKind, Scenario, ScenarioConfig};
use crate::error::{CliError, FieldError, Result};
use crate::output::{csv_table, gnuplot_script, write_all, Artifact, Panel};
use crate::report::{Check, RunReport};

/// Kernel matrices above this many nodes are not assembled.
pub const STRAUSS_MAX_NODES: usize = 6000;
/// Samples of the Strauss curves, at most.
const STRAUSS_SAMPLES: usize = 101;

/// Report and files of a scenario, before anything is written.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: RunReport,
    pub artifacts: Vec<Artifact>,
}

pub fn execute(cfg: &ScenarioConfig) -> Result<Outcome> {
    let mut out = match cfg.scenario {
        Scenario::Fig1 => fig1(cfg)?,
        Scenario::Fig2 => fig2(cfg)?,
        Scenario::Smith => smith(cfg)?,
        Scenario::Arrival => arrival(cfg)?,
        Scenario::Lyapunov => lyapunov(cfg)?,
    };
    out.artifacts.push(Artifact::new("report.csv", out.report.to_csv()));
    out.artifacts.push(Artifact::new("report.txt", format!("{}\n", out.report)));
    Ok(out)
}

/// Executes the scenario and writes its files to [`ScenarioConfig::output_dir`].
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<(RunReport, Vec<PathBuf>)> {
    let out = execute(cfg)?;
    let paths = write_all(&cfg.output_dir(), &out.artifacts)?;
    Ok((out.report, paths))
}

pub fn potential(cfg: &ScenarioConfig) -> Result<HalfLinePotential> {
    Ok(match cfg.potential.kind {
        PotentialKind::Free => HalfLinePotential::Free,
        PotentialKind::Delta => HalfLinePotential::delta(cfg.potential.g, cfg.potential.a)?,
    })
}

/// Uniform panels, refined around the resonances of `pot` when `grid.refine` is set.
pub fn energy_grid(cfg: &ScenarioConfig, pot: &HalfLinePotential) -> Result<Arc<EnergyGrid>> {
    let g = &cfg.grid;
    let grid = if g.refine {
        resolving_grid(pot, g.e_min, g.e_max, (g.e_max - g.e_min) / g.panels as f64, g.nodes)?
    } else {
        EnergyGrid::uniform_panels(g.e_min, g.e_max, g.panels, g.nodes)?
    };
    Ok(Arc::new(grid))
}

pub fn time_grid(cfg: &ScenarioConfig) -> Result<TemporalGrid> {
    Ok(TemporalGrid::new(cfg.time.t_min, cfg.time.t_max, cfg.time.n_t)?)
}

pub fn gauge(cfg: &ScenarioConfig, grid: &Arc<EnergyGrid>) -> Result<GaugeFamily> {
    let b = &cfg.gauge;
    let g = Arc::clone(grid);
    Ok(match b.kind {
        GaugeKind::Unity => GaugeFamily::unity(g, 1),
        GaugeKind::LinearPhase => GaugeFamily::linear_phase(g, b.lambda),
        GaugeKind::QuadraticPhase => GaugeFamily::quadratic_phase(g, b.mu),
        GaugeKind::FirstArrival => GaugeFamily::first_arrival(g, b.a),
        GaugeKind::Custom => custom_gauge(&cfg.base_dir.join(&b.file), g)?,
    })
}

fn field_error(msg: String) -> CliError {
    CliError::Invalid(vec![FieldError::new("gauge.file", msg)])
}

/// One `re im` (or `re,im`) pair per grid node; `#` starts a comment.
fn custom_gauge(path: &Path, grid: Arc<EnergyGrid>) -> Result<GaugeFamily> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut member = Vec::with_capacity(grid.len());
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let nums: Vec<f64> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| field_error(format!("line {}: {e}", i + 1)))?;
        let [re, im] = nums[..] else {
            return Err(field_error(format!("line {}: expected `re im`, got {} values", i + 1, nums.len())));
        };
        member.push(Complex64::new(re, im));
    }
    if member.len() != grid.len() {
        return Err(field_error(format!("{} values for a grid of {} nodes", member.len(), grid.len())));
    }
    let family = GaugeFamily::new(grid, 1, vec![member])?;
    let norm = check_gauge_normalization(&family);
    if !norm.pass {
        return Err(field_error(format!("gauge is not normalized (max deviation {:e})", norm.max_deviation)));
    }
    Ok(family)
}

fn packet(cfg: &ScenarioConfig, grid: &Arc<EnergyGrid>) -> Result<SpectralState> {
    Ok(gaussian_packet(Arc::clone(grid), (&cfg.packet).into())?)
}

/// Energy standard deviation of a normalized state.
pub fn energy_width(state: &SpectralState) -> f64 {
    let m1 = state.energy_expectation(|e| e);
    (state.energy_expectation(|e| e * e) - m1 * m1).max(0.0).sqrt()
}

fn time_tag(t: f64) -> String {
    if t.fract() == 0.0 && t.abs() < 1e15 {
        format!("t{}", t as i64)
    } else {
        format!("t{t}")
    }
}

fn fig1(cfg: &ScenarioConfig) -> Result<Outcome> {
    let pot = potential(cfg)?;
    let grid = energy_grid(cfg, &pot)?;
    let state = packet(cfg, &grid)?;
    let n = cfg.position.n_r;
    let r: Vec<f64> = (0..n).map(|i| cfg.position.r_max * i as f64 / (n - 1) as f64).collect();
    let barrier = match pot {
        HalfLinePotential::Delta { a, .. } => a,
        HalfLinePotential::Free => 0.0,
    };
    let mut report = RunReport::new("fig1");
    let mut artifacts = Vec::new();
    let mut names = Vec::new();
    let mut edges = None;
    for &t in &cfg.position.times {
        let rho = position_density(&state, ChannelTag::In, &pot, &r, t)?;
        let free = position_density(&state, ChannelTag::In, &HalfLinePotential::Free, &r, t)?;
        let tag = time_tag(t);
        let name = format!("fig1_{tag}.csv");
        artifacts.push(Artifact::new(&name, csv_table(&["r", "rho", "rho_free"], &[&r, &rho.density, &free.density])));
        names.push((name, tag.clone()));
        let peak = rho.peak_position(0.0).unwrap_or(f64::NAN);
        report.quantity(format!("peak_{tag}"), peak);
        report.quantity(format!("norm_{tag}"), rho.norm);
        if t == 0.0 {
            report.check(Check::at_most("packet_center_t0", (peak - cfg.packet.x0).abs(), cfg.tolerances.center));
        }
        let edge = rho.leading_edge(0.05, barrier).unwrap_or(f64::NAN);
        let edge_free = free.leading_edge(0.05, barrier).unwrap_or(f64::NAN);
        report.quantity(format!("leading_edge_{tag}"), edge);
        report.quantity(format!("leading_edge_free_{tag}"), edge_free);
        edges = Some((tag, t, edge, edge_free));
    }
    if let (Some((tag, t, edge, edge_free)), HalfLinePotential::Delta { .. }) = (edges, pot) {
        if t > 0.0 {
            // Outgoing packet ahead of the g = 0 reference.
            report.check(Check::above(format!("advancement_{tag}"), edge - edge_free, 0.0));
        }
    }
    let panels: Vec<Panel> = names
        .iter()
        .map(|(csv, tag)| Panel {
            csv,
            title: tag,
            columns: &[(2, "delta barrier"), (3, "g = 0")],
        })
        .collect();
    artifacts.push(Artifact::new("fig1.gp", gnuplot_script("fig1.png", "r", "|psi(r)|^2", None, &panels)));
    Ok(Outcome { report, artifacts })
}

fn window_for(dists: &[&TemporalDistribution]) -> Option<(f64, f64)> {
    // Plot range holding the bulk of every curve.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for d in dists {
        let c = d.cumulative();
        let total = *c.last()?;
        let t = |frac: f64| c.iter().position(|&x| x >= frac * total).map(|k| d.grid().t(k));
        lo = lo.min(t(0.001)?);
        hi = hi.max(t(0.99)?);
    }
    let pad = 0.1 * (hi - lo);
    Some(((lo - pad).floor(), (hi + pad).ceil()))
}

fn fig2(cfg: &ScenarioConfig) -> Result<Outcome> {
    let pot = potential(cfg)?;
    let grid = energy_grid(cfg, &pot)?;
    let state = packet(cfg, &grid)?;
    let prof = PhaseShiftProfile::new(Arc::clone(&grid), &pot)?;
    let tg = time_grid(cfg)?;
    let arr = asymptotic_arrivals(&state, &prof, &tg)?;
    let t: Vec<f64> = tg.times().collect();
    let csv = csv_table(
        &["t", "Pi_in", "Pi_out", "Pi_io"],
        &[&t, arr.incoming.density(), arr.outgoing.density(), arr.interpolating.density()],
    );
    let mean_in = moments_distribution(&arr.incoming)?.mean;
    let mean_out = moments_distribution(&arr.outgoing)?.mean;
    let mean_io = moments_distribution(&arr.interpolating)?.mean;
    let delay = tempus::halfline::smith_delay(&state, &prof)?;
    let mut report = RunReport::new("fig2");
    report.quantity("grid_nodes", grid.len() as f64);
    report.quantity("mean_in", mean_in);
    report.quantity("mean_out", mean_out);
    report.quantity("mean_io", mean_io);
    report.quantity("smith_delay", delay);
    let interp = (mean_io - 0.5 * (mean_in + mean_out)).abs();
    report.check(Check::at_most("interpolation", interp, cfg.tolerances.interpolation * delay.abs().max(1.0)));
    // mean_out < mean_io < mean_in: both gaps positive.
    report.check(Check::above("mean_ordering", (mean_in - mean_io).min(mean_io - mean_out), 0.0));
    let panel = [Panel {
        csv: "fig2.csv",
        title: "arrivals at x = 0",
        columns: &[(2, "in"), (3, "out"), (4, "io")],
    }];
    let range = window_for(&[&arr.incoming, &arr.outgoing, &arr.interpolating]);
    Ok(Outcome {
        report,
        artifacts: vec![
            Artifact::new("fig2.csv", csv),
            Artifact::new("fig2.gp", gnuplot_script("fig2.png", "t", "Pi(t)", range, &panel)),
        ],
    })
}

fn smith(cfg: &ScenarioConfig) -> Result<Outcome> {
    let pot = potential(cfg)?;
    let grid = energy_grid(cfg, &pot)?;
    let state = packet(cfg, &grid)?;
    let prof = PhaseShiftProfile::new(Arc::clone(&grid), &pot)?;
    let m = arrival_mean_relations(&state, &prof, &time_grid(cfg)?)?;
    let a = match pot {
        HalfLinePotential::Delta { a, .. } => a,
        HalfLinePotential::Free => 0.0,
    };
    let mut report = RunReport::new("smith");
    report.quantity("grid_nodes", grid.len() as f64);
    report.quantity("mean_in", m.mean_in);
    report.quantity("mean_out", m.mean_out);
    report.quantity("mean_io", m.mean_io);
    report.quantity("mean_difference", m.mean_out - m.mean_in);
    report.quantity("smith_delay", m.delay);
    report.quantity("wall_delay", wall_delay(&state, a));
    report.check(Check::at_most("smith_identity", m.identity_error(), cfg.tolerances.smith_identity));
    report.check(Check::below("advancement", m.delay, 0.0));
    report.check(Check::at_most("interpolation", m.interpolation_error(), cfg.tolerances.interpolation * m.delay.abs().max(1.0)));
    let rows = [
        ("mean_in", m.mean_in),
        ("mean_out", m.mean_out),
        ("mean_io", m.mean_io),
        ("mean_difference", m.mean_out - m.mean_in),
        ("smith_delay", m.delay),
    ];
    let mut csv = String::from("quantity,value\n");
    for (k, v) in rows {
        csv.push_str(&format!("{k},{v:.16e}\n"));
    }
    Ok(Outcome {
        report,
        artifacts: vec![Artifact::new("smith.csv", csv)],
    })
}

/// `max(|a - b| / max(|b|, scale))` over means and second moments.
pub fn moment_mismatch(sp: &MomentReport, di: &MomentReport) -> f64 {
    let mean = (sp.mean - di.mean).abs() / di.mean.abs().max(di.std_dev());
    let second = (sp.second_moment - di.second_moment).abs() / di.second_moment.abs();
    mean.max(second)
}

fn arrival(cfg: &ScenarioConfig) -> Result<Outcome> {
    let pot = potential(cfg)?;
    let grid = energy_grid(cfg, &pot)?;
    let state = packet(cfg, &grid)?;
    let b = gauge(cfg, &grid)?;
    let tg = time_grid(cfg)?;
    let kind = cfg.time.kind.into();
    let dist = temporal_distribution(&state, &b, &tg, kind)?;
    let di = moments_distribution(&dist)?;
    let sp = moments_spectral(&state, &b, kind)?;
    let mut report = RunReport::new("arrival");
    report.quantity("mass", dist.mass());
    report.quantity("mean", di.mean);
    report.quantity("std_dev", di.std_dev());
    report.quantity("spectral_mean", sp.mean);
    report.check(Check::at_most("normalization", (dist.mass() - 1.0).abs(), cfg.tolerances.normalization));
    report.check(Check::at_most("moments", moment_mismatch(&sp, &di), cfg.tolerances.moments));
    let t: Vec<f64> = tg.times().collect();
    let panel = [Panel {
        csv: "arrival.csv",
        title: "temporal density",
        columns: &[(2, "Pi")],
    }];
    Ok(Outcome {
        report,
        artifacts: vec![
            Artifact::new("arrival.csv", csv_table(&["t", "Pi"], &[&t, dist.density()])),
            Artifact::new("arrival.gp", gnuplot_script("arrival.png", "t", "Pi(t)", window_for(&[&dist]), &panel)),
        ],
    })
}

fn lyapunov(cfg: &ScenarioConfig) -> Result<Outcome> {
    let pot = potential(cfg)?;
    let grid = energy_grid(cfg, &pot)?;
    let state = packet(cfg, &grid)?;
    let b = gauge(cfg, &grid)?;
    let tg = time_grid(cfg)?;
    let dist = temporal_distribution(&state, &b, &tg, tempus::spectral::TimeKind::Arrival)?;
    let curve = curve_from_distribution(&dist)?;
    let tol = &cfg.tolerances;
    let mut report = RunReport::new("lyapunov");
    report.check(Check::at_most("monotone", curve.max_increase(), tol.monotone));
    report.check(Check::at_most("endpoints", curve.endpoint_defect(), tol.endpoints));
    report.check(Check::at_most("accumulation", curve.accumulation_defect(&dist), tol.accumulation));

    // Both sides of the reversal identity on a window symmetric about t = 0.
    let half = cfg.time.t_min.abs().max(cfg.time.t_max.abs());
    let steps = (2.0 * half / tg.dt()).ceil() as usize;
    let sym = TemporalGrid::new(-half, half, steps + 1)?;
    let rev = reversal_identity_check(&state, &b, &sym)?;
    report.check(Check::at_most("time_reversal", rev.max_deviation, tol.reversal));

    let t: Vec<f64> = tg.times().collect();
    let mut artifacts = vec![Artifact::new("lyapunov.csv", csv_table(&["t", "L", "Pi"], &[&t, curve.values(), dist.density()]))];
    let mut panels = vec![Panel {
        csv: "lyapunov.csv",
        title: "Lyapunov curve",
        columns: &[(2, "L")],
    }];

    // Strauss approximants only approach the origin curve with b = 1.
    if cfg.gauge.kind == GaugeKind::Unity && grid.len() <= STRAUSS_MAX_NODES {
        let stride = (tg.len() - 1).div_ceil(STRAUSS_SAMPLES - 1).max(1);
        let m = (tg.len() - 1) / stride + 1;
        let sub = TemporalGrid::new(tg.t_min(), tg.t(stride * (m - 1)), m)?;
        let reference: Vec<f64> = curve.values().iter().step_by(stride).copied().collect();
        let width = energy_width(&state);
        let mut columns = vec![sub.times().collect::<Vec<_>>(), reference.clone()];
        let mut devs = Vec::new();
        for f in [1e-1, 1e-2, 1e-3] {
            let k = StraussKernel::new(Arc::clone(&grid), f * width)?;
            let c = strauss_expectation(&state, &k, &sub)?;
            devs.push(c.values().iter().zip(&reference).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
            columns.push(c.values().to_vec());
        }
        for (f, d) in ["1e-1", "1e-2", "1e-3"].iter().zip(&devs) {
            report.quantity(format!("strauss_deviation_eps_{f}"), *d);
        }
        let worst_ratio = devs.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
        report.check(Check::below("strauss_decreasing", worst_ratio, 1.0));
        let refs: Vec<&[f64]> = columns.iter().map(Vec::as_slice).collect();
        artifacts.push(Artifact::new("strauss.csv", csv_table(&["t", "L", "L_eps_1e-1", "L_eps_1e-2", "L_eps_1e-3"], &refs)));
        panels.push(Panel {
            csv: "strauss.csv",
            title: "Strauss approximants",
            columns: &[(2, "L"), (3, "eps 1e-1"), (4, "eps 1e-2"), (5, "eps 1e-3")],
        });
    }
    artifacts.push(Artifact::new("lyapunov.gp", gnuplot_script("lyapunov.png", "t", "L(t)", None, &panels)));
    Ok(Outcome { report, artifacts })
}
