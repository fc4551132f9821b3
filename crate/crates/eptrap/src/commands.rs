//! One function per subcommand. Each writes its primary output to `out`.

use std::io::Write;
use std::path::Path;

use eptrap_core::linalg::cdot;
use eptrap_core::observables::{
    average_rate_vs_alpha, decay_rate, expansion_weights, order_parameter, resolvent_solve, rho_phase_rigidity,
    scattering_series, time_delay, ScatteringModel,
};
use eptrap_core::scenarios::{run_scenario, scenario_defaults};
use eptrap_core::series::Series;
use eptrap_core::spectra::solve_modes_with;
use eptrap_core::sweeps::{encircle_point, locate_ep, CycleOptions, SweepGrid};
use eptrap_core::{ModelSpec, C64};

use crate::bundle::{write_bundle, Manifest};
use crate::config::{Config, SeriesKind};
use crate::output::{branches_csv, write_atomic, write_series};
use crate::{parallel, report, selftest, CliError};

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|e| CliError::Io(format!("stdout: {e}")))
}

pub fn eig(cfg: &Config, out: &mut dyn Write) -> Result<(), CliError> {
    let model = cfg.model.to_spec()?;
    let h = model.build(&cfg.overrides())?;
    let ms = solve_modes_with(&h, &cfg.tolerances.spectra())?;
    emit(out, &report::pretty(&report::modeset(&ms)))
}

fn sweep_grid(cfg: &Config, model: ModelSpec) -> Result<SweepGrid, CliError> {
    let g = cfg.grid()?;
    let values = g.range.points("grid")?;
    Ok(SweepGrid::real(model, g.param.clone(), &values)?.with_base(cfg.overrides()))
}

/// Branches CSV to `path`, or to `out` when no path is given.
pub fn sweep(cfg: &Config, path: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    let grid = sweep_grid(cfg, cfg.model.to_spec()?)?;
    let r = parallel::sweep(&grid, &cfg.tolerances.sweep())?;
    let csv = branches_csv(&r);
    match path {
        Some(p) => write_atomic(p, csv.as_bytes()),
        None => emit(out, &csv),
    }
}

pub fn ep_find(cfg: &Config, out: &mut dyn Write) -> Result<(), CliError> {
    let model = cfg.model.to_spec()?;
    let ep = cfg.ep()?;
    let plane = ep.plane.plane();
    let base = cfg.overrides();
    let guess = match ep.guess {
        Some(g) => g.0,
        None => plane.base_point(&model, &base)?,
    };
    let cand = locate_ep(&model, &base, &plane, guess, &cfg.tolerances.ep())?;
    emit(out, &report::pretty(&report::ep_candidate(&cand)))
}

pub fn ep_cycle(cfg: &Config, out: &mut dyn Write) -> Result<(), CliError> {
    let model = cfg.model.to_spec()?;
    let ep = cfg.ep()?;
    let plane = ep.plane.plane();
    let base = cfg.overrides();
    let (center, located) = match ep.center {
        Some(c) => (c.0, None),
        None => {
            let guess = match ep.guess {
                Some(g) => g.0,
                None => plane.base_point(&model, &base)?,
            };
            let cand = locate_ep(&model, &base, &plane, guess, &cfg.tolerances.ep())?;
            (cand.param, Some(cand))
        }
    };
    let opts = CycleOptions {
        steps: ep.steps,
        loops: ep.loops,
        clockwise: ep.clockwise,
        phase_tol: cfg.tolerances.phase_tol,
        sweep: cfg.tolerances.sweep(),
    };
    let r = encircle_point(&model, &base, &plane, center, ep.radius, &opts)?;
    let mut v = report::cycle(&r, ep.trajectory);
    if let Some(c) = located {
        v["ep"] = report::ep_candidate(&c);
    }
    emit(out, &report::pretty(&v))
}

fn tag(s: Series, model: &ModelSpec, cfg: &Config) -> Series {
    let mut s = s.with_meta("model", model.kind());
    for (k, v) in &cfg.params {
        s = s.with_meta(&format!("param {k}"), format!("{}", v.0));
    }
    s
}

/// `(phi_k^T psi) / (phi_k^T phi_k)` expansion of an explicit initial state.
fn state_weights(ms: &eptrap_core::ModeSet, psi: &[C64]) -> Vec<C64> {
    ms.modes.iter().map(|m| cdot(&m.left, psi) / cdot(&m.left, &m.right)).collect()
}

pub fn observe_series(cfg: &Config) -> Result<Vec<Series>, CliError> {
    let model = cfg.model.to_spec()?;
    let ob = cfg.observables()?;
    let base = cfg.overrides();
    let mut list = Vec::new();
    let needs_e = ob.series.iter().any(|k| {
        matches!(k, SeriesKind::Transmission | SeriesKind::Phase | SeriesKind::TimeDelay | SeriesKind::Rho)
    });
    let energies = if needs_e {
        let r = ob.energies.as_ref().ok_or_else(|| CliError::Config("`observables.energies` is required".into()))?;
        r.points("observables.energies")?
    } else {
        Vec::new()
    };
    let sm = if needs_e { Some(ScatteringModel::from_spec(&model, &base, ob.wide_band)?) } else { None };
    let pair = (ob.pair[0], ob.pair[1]);
    let mut scat = None;
    let mut decay = None;
    let mut swept = None;
    for &kind in &ob.series {
        let s = match kind {
            SeriesKind::Transmission | SeriesKind::Phase => {
                let sm = sm.as_ref().expect("built above");
                if scat.is_none() {
                    scat = Some(scattering_series(sm, &energies, pair)?);
                }
                let ss = scat.as_ref().expect("just set");
                if kind == SeriesKind::Transmission {
                    Series::new("transmission", "E", "model units", energies.clone(), ss.transmission.iter().map(|t| t.norm()).collect())?
                } else {
                    Series::new("phase", "E", "rad", energies.clone(), ss.beta.clone())?
                }
                .with_meta("pair", format!("{},{}", pair.0, pair.1))
            }
            SeriesKind::TimeDelay => {
                let td = time_delay(sm.as_ref().expect("built above"), &energies)?;
                Series::new("time_delay", "E", "1/energy (hbar = 1)", energies.clone(), td.tau)?
            }
            SeriesKind::Rho => {
                let sm = sm.as_ref().expect("built above");
                if ob.channel >= sm.channels() {
                    return Err(CliError::Config(format!("channel {} out of range", ob.channel)));
                }
                let g = sm.channel_column(ob.channel);
                let mut rho = Vec::with_capacity(energies.len());
                for &e in &energies {
                    let psi = resolvent_solve(&sm.heff_at(e)?, &g, e)?;
                    rho.push(rho_phase_rigidity(&psi)?);
                }
                Series::new("rho", "E", "dimensionless", energies.clone(), rho)?
                    .with_meta("channel", ob.channel.to_string())
            }
            SeriesKind::DecayRate | SeriesKind::Population => {
                if decay.is_none() {
                    let times = ob
                        .times
                        .as_ref()
                        .ok_or_else(|| CliError::Config("`observables.times` is required".into()))?
                        .points("observables.times")?;
                    let h = model.build(&base)?;
                    let ms = solve_modes_with(&h, &cfg.tolerances.spectra())?;
                    let ck = match &ob.initial {
                        Some(psi) => {
                            let psi: Vec<C64> = psi.iter().map(|z| z.0).collect();
                            if psi.len() != ms.len() {
                                return Err(CliError::Config("`observables.initial` has the wrong length".into()));
                            }
                            state_weights(&ms, &psi)
                        }
                        None => {
                            let v = model.channel_vertex(&base)?;
                            if v.first().is_none_or(|row| ob.channel >= row.len()) {
                                return Err(CliError::Config(format!("channel {} out of range", ob.channel)));
                            }
                            let g: Vec<C64> = v.iter().map(|row| row[ob.channel]).collect();
                            expansion_weights(&ms, &g, ob.e_ref)
                        }
                    };
                    decay = Some(decay_rate(&ms.widths(), &ck, &times)?);
                }
                let d = decay.as_ref().expect("just set");
                if kind == SeriesKind::DecayRate {
                    Series::new("decay_rate", "t", "1/time (hbar = 1)", d.times.clone(), d.rate.clone())?
                } else {
                    Series::new("population", "t", "dimensionless", d.times.clone(), d.population.clone())?
                }
            }
            SeriesKind::AverageRate | SeriesKind::OrderParameter => {
                if swept.is_none() {
                    swept = Some(parallel::sweep(&sweep_grid(cfg, model.clone())?, &cfg.tolerances.sweep())?);
                }
                let r = swept.as_ref().expect("just set");
                let param = cfg.grid()?.param.clone();
                if kind == SeriesKind::AverageRate {
                    let av = average_rate_vs_alpha(r);
                    let mut s = Series::new("average_rate", &param, "energy", av.alphas, av.gamma_av)?
                        .with_meta("broad_branch", av.broad_branch.to_string());
                    if let Some(a) = av.saturation_onset {
                        s = s.with_meta("saturation_onset", format!("{a}"));
                    }
                    s
                } else {
                    let op = order_parameter(r, &cfg.tolerances.order_parameter());
                    let mut s = Series::new("order_parameter", &param, "energy", op.alphas, op.gamma0_over_n)?
                        .with_meta("jump_clusters", op.jump_clusters.to_string());
                    if let Some(a) = op.alpha_cr {
                        s = s.with_meta("alpha_cr", format!("{a}"));
                    }
                    s
                }
            }
        };
        list.push(tag(s, &model, cfg));
    }
    Ok(list)
}

/// Series CSVs plus the resolved config as `manifest.json` in `dir`.
pub fn observe(cfg: &Config, dir: &Path, svg: bool, out: &mut dyn Write) -> Result<(), CliError> {
    let list = observe_series(cfg)?;
    let files = write_series(dir, &list, svg)?;
    write_atomic(&dir.join("manifest.json"), cfg.to_json().as_bytes())?;
    for f in files {
        emit(out, &format!("{}\n", dir.join(f).display()))?;
    }
    Ok(())
}

/// Parses `key=value` pairs for `--set`.
pub fn parse_sets(sets: &[String]) -> Result<Vec<(String, f64)>, CliError> {
    sets.iter()
        .map(|s| {
            let (k, v) = s
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("`--set {s}`: expected key=value")))?;
            let x: f64 = v
                .trim()
                .parse()
                .map_err(|_| CliError::Config(format!("`--set {s}`: `{v}` is not a number")))?;
            Ok((k.trim().to_string(), x))
        })
        .collect()
}

/// Runs a scenario into a bundle directory; failed assertions give exit 3.
pub fn scenario(name: &str, sets: &[(String, f64)], dir: &Path, svg: bool, out: &mut dyn Write) -> Result<Manifest, CliError> {
    let b = run_scenario(name, sets)?;
    let m = write_bundle(dir, &b, svg)?;
    for a in &b.assertions {
        emit(out, &format!("{} {}: {}\n", if a.passed { "pass" } else { "FAIL" }, a.name, a.detail))?;
    }
    if !b.passed() {
        let failed: Vec<&str> = b.assertions.iter().filter(|a| !a.passed).map(|a| a.name.as_str()).collect();
        return Err(CliError::Assertion(format!("scenario `{name}` failed: {}", failed.join(", "))));
    }
    Ok(m)
}

/// Re-runs the experiment recorded in a manifest.
pub fn replay(manifest: &Manifest, dir: &Path, svg: bool, out: &mut dyn Write) -> Result<Manifest, CliError> {
    let defaults = scenario_defaults(&manifest.scenario)?;
    if defaults.len() != manifest.params.len() {
        return Err(CliError::Config("manifest parameters do not match the scenario".into()));
    }
    scenario(&manifest.scenario, &manifest.params, dir, svg, out)
}

pub fn run_selftest(out: &mut dyn Write) -> Result<(), CliError> {
    let results = parallel::with_pool(selftest::run_all);
    let mut failed = Vec::new();
    for r in &results {
        emit(out, &format!("{} {} ({:.2} s): {}\n", if r.passed { "pass" } else { "FAIL" }, r.name, r.seconds, r.detail))?;
        if !r.passed {
            failed.push(r.name);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Assertion(format!("selftest failed: {}", failed.join(", "))))
    }
}
