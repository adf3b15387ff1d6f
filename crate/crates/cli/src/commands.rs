//! The five run commands. Each reads a [`Config`], writes its files into the
//! output directory and returns the report lines.

use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use rsp_core::dispersion::{DispersionKind, DispersionModel, WeightRule};
use rsp_core::dynamics::{correlator, delta_window_state, narrowband_state, probe_amplitude, CorrelatorQuery};
use rsp_core::fieldstate::{fidelity, generated_amplitude_from, success_probability, Profile, SpectralTail, TargetState};
use rsp_core::numerics::fit::{least_squares, linear_fit};
use rsp_core::numerics::Grid1D;
use rsp_core::superosc::{
    max_band_edge, reconstruct_time_scaled, Basis, Mollifier, PairBasis, PlanTerm, WindowPlan,
};
use rsp_core::Error;

use crate::config::Config;
use crate::error::{core_kind, CliError};
use crate::output::{num, sha256_hex, write_file, Csv, Report};
use crate::pipeline::{default_half_span, run_pipeline, state_k_grid, WindowSettings};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Synth,
    Fidelity,
    Sweep,
    Correlator,
    Propagate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Synth => "synth",
            Self::Fidelity => "fidelity",
            Self::Sweep => "sweep",
            Self::Correlator => "correlator",
            Self::Propagate => "propagate",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Self::Synth, Self::Fidelity, Self::Sweep, Self::Correlator, Self::Propagate].into_iter().find(|c| c.name() == s)
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: Report,
    pub files: Vec<PathBuf>,
}

/// Runs `cmd` and writes its CSV files plus `report.txt` into `out_dir`.
pub fn run(cmd: Command, cfg: &Config, input: &[u8], out_dir: &Path) -> Result<RunOutput, CliError> {
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let mut report = Report::default();
    report.set("command", cmd.name());
    report.set("version", env!("CARGO_PKG_VERSION"));
    report.set("input_sha256", sha256_hex(input));
    let mut files = Vec::new();
    let start = Instant::now();
    match cmd {
        Command::Synth => synth(cfg, out_dir, &mut report, &mut files)?,
        Command::Fidelity => fidelity_cmd(cfg, out_dir, &mut report, &mut files)?,
        Command::Sweep => sweep(cfg, out_dir, &mut report, &mut files)?,
        Command::Correlator => correlator_cmd(cfg, out_dir, &mut report, &mut files)?,
        Command::Propagate => propagate(cfg, out_dir, &mut report, &mut files)?,
    }
    report.number("time_s.total", start.elapsed().as_secs_f64());
    echo_config(cfg, &mut report);
    files.push(write_file(out_dir, "report.txt", &report.render())?);
    Ok(RunOutput { report, files })
}

fn echo_config(cfg: &Config, report: &mut Report) {
    let mut section = String::new();
    for line in cfg.echo().lines() {
        if let Some(s) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            section = s.to_string();
        } else if let Some((k, v)) = line.split_once(" = ") {
            report.set(&format!("config.{section}.{k}"), v);
        }
    }
}

pub fn model_from(cfg: &Config) -> Result<DispersionModel, CliError> {
    let kind_s = cfg.require("model", "kind")?;
    let kind = DispersionKind::parse(kind_s)
        .ok_or_else(|| CliError::config("model.kind", format!("unknown dispersion kind '{kind_s}'")))?;
    let weight = match cfg.raw("model", "weight") {
        None => match kind {
            DispersionKind::RelativisticMassive | DispersionKind::RelativisticMassless => WeightRule::InverseSqrtTwoOmega,
            _ => WeightRule::Unit,
        },
        Some("inverse_sqrt") => WeightRule::InverseSqrtTwoOmega,
        Some(w) => WeightRule::parse(w)
            .ok_or_else(|| CliError::config("model.weight", format!("unknown weight rule '{w}'")))?,
    };
    let mass = match kind {
        DispersionKind::RelativisticMassive | DispersionKind::Schroedinger => cfg.f64_req("model", "mass")?,
        _ => 0.0,
    };
    let max_frequency = match kind {
        DispersionKind::BoundedFrequency => cfg.f64_req("model", "max_frequency")?,
        _ => 0.0,
    };
    Ok(DispersionModel::new(kind, mass, max_frequency, weight)?)
}

pub fn target_from(cfg: &Config, model: DispersionModel) -> Result<TargetState, CliError> {
    let name = cfg.require("target", "profile")?;
    let width = cfg.f64_req("target", "width")?;
    let profile = match name {
        "gaussian_shell" => Profile::GaussianShell { radius: cfg.f64_req("target", "radius")?, width },
        "gaussian_ball" => Profile::GaussianBall { width },
        "sech_ball" => Profile::SechBall { width },
        "exponential_ball" => Profile::ExponentialBall { width },
        other => return Err(CliError::config("target.profile", format!("unknown profile '{other}'"))),
    };
    let dimension = cfg.usize_or("target", "dimension", 1)? as u32;
    let gap = cfg.f64_or("target", "gap", 0.0)?;
    Ok(TargetState::new(dimension, profile, gap, model)?)
}

pub fn window_from(cfg: &Config) -> Result<WindowSettings, CliError> {
    let t0 = cfg.f64_req("window", "t0")?;
    let m_index = cfg.usize_or("window", "m_index", 8)?;
    let order = cfg.usize_or("window", "mollifier_order", 8)?;
    let mollifier = if order == 0 {
        None
    } else {
        let tau = cfg.f64_or("window", "mollifier_tau", t0 / 20.0)?;
        let m = Mollifier::new(order as u32, tau)?;
        m.validate_for(t0)?;
        Some(m)
    };
    let d = WindowSettings::default();
    Ok(WindowSettings {
        t0,
        half_span: cfg.f64_opt("window", "half_span")?,
        m_index: u32::try_from(m_index).map_err(|_| CliError::config("window.m_index", "too large"))?,
        omega_c: cfg.f64_opt("window", "omega_c")?,
        mollifier,
        time_step: cfg.f64_or("window", "time_step", d.time_step)?,
        coupling: cfg.f64_or("window", "coupling", d.coupling)?,
        k_points: cfg.usize_or("window", "k_points", d.k_points)?,
    })
}

fn timed<T>(report: &mut Report, stage: &str, f: impl FnOnce() -> T) -> T {
    let s = Instant::now();
    let v = f();
    report.number(&format!("time_s.{stage}"), s.elapsed().as_secs_f64());
    v
}

fn plan_summary(plan: &WindowPlan, report: &mut Report) {
    let pairs = plan.terms.iter().filter(|t| t.basis == Basis::SuperoscPair).count();
    report.number("t0", plan.t0);
    report.number("half_span", plan.half_span);
    report.set("m_index", plan.m_index);
    report.number("omega_c", plan.omega_c);
    report.set("terms", plan.terms.len());
    report.set("pair_terms", pairs);
    report.number("max_dynamic_range", plan.max_dynamic_range());
}

fn synth(cfg: &Config, dir: &Path, report: &mut Report, files: &mut Vec<PathBuf>) -> Result<(), CliError> {
    let model = model_from(cfg)?;
    let target = target_from(cfg, model)?;
    let win = window_from(cfg)?;
    let r = timed(report, "pipeline", || run_pipeline(&target, &win, win.mollifier.is_some()))?;
    plan_summary(&r.plan, report);
    report.number("fidelity", r.fidelity);
    report.number("eta", r.eta);
    if let Some(p) = &r.probability {
        report.number("ln_p", p.ln_value);
        report.number("p", p.value);
        report.set("beyond_perturbative", p.beyond_perturbative);
    }
    files.push(write_file(dir, "plan.txt", &r.plan.to_text())?);

    let k_top = r.k_grid.end();
    let w_state = model.shift_at_wavenumber(k_top)?;
    let freq_max = cfg.f64_opt("window", "freq_max")?.unwrap_or_else(|| w_state.max(2.0 * r.plan.omega_c));
    let freq_points = cfg.usize_or("window", "freq_points", 1001)?;
    let fg = Grid1D::linspace(0.0, freq_max, freq_points)?;
    let spec = timed(report, "spectrum", || r.plan.spectrum_values(&fg.points()))?;
    let mut csv = Csv::new(&["omega", "re", "im", "abs"]);
    for (w, v) in fg.points().iter().zip(&spec) {
        csv.row(&[num(*w), num(v.re), num(v.im), num(v.norm())]);
    }
    files.push(write_file(dir, "spectrum.csv", csv.text())?);

    let time_points = cfg.usize_or("window", "time_points", 2048)?;
    let t0 = r.plan.t0;
    let tg = Grid1D::linspace(-1.05 * t0, 0.05 * t0, time_points)?;
    let (f, ln_scale) = timed(report, "reconstruct", || reconstruct_time_scaled(&r.plan, &tg))?;
    report.number("window_ln_scale", ln_scale);
    let mut csv = Csv::new(&["t", "re", "im", "abs"]);
    for (t, v) in tg.points().iter().zip(f.values()) {
        csv.row(&[num(*t), num(v.re), num(v.im), num(v.norm())]);
    }
    files.push(write_file(dir, "window.csv", csv.text())?);
    Ok(())
}

fn fidelity_cmd(cfg: &Config, dir: &Path, report: &mut Report, files: &mut Vec<PathBuf>) -> Result<(), CliError> {
    let model = model_from(cfg)?;
    let target = target_from(cfg, model)?;
    let win = window_from(cfg)?;
    let r = timed(report, "pipeline", || run_pipeline(&target, &win, win.mollifier.is_some()))?;
    plan_summary(&r.plan, report);
    report.number("fidelity", r.fidelity);
    report.number("eta", r.eta);
    if let Some(p) = &r.probability {
        report.number("ln_p", p.ln_value);
    }
    let mut csv = Csv::new(&["k", "omega_shift", "desired_re", "desired_im", "generated_re", "generated_im"]);
    for (i, k) in r.k_grid.points().into_iter().enumerate() {
        let (a, b) = (r.desired.values()[i], r.generated.values()[i]);
        csv.row(&[num(k), num(model.shift_at_wavenumber(k)?), num(a.re), num(a.im), num(b.re), num(b.im)]);
    }
    files.push(write_file(dir, "amplitudes.csv", csv.text())?);
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Axis {
    Stretch,
    MIndex,
    HalfSpan,
    OmegaC,
    Radius,
    Mass,
}

impl Axis {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "A" => Self::Stretch,
            "m_index" => Self::MIndex,
            "T" => Self::HalfSpan,
            "omega_c" => Self::OmegaC,
            "L" => Self::Radius,
            "mass" => Self::Mass,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy)]
struct SweepRow {
    dynamic_range: f64,
    fidelity: f64,
    ln_p: f64,
    eta: f64,
    omega_c: f64,
}

fn sweep(cfg: &Config, dir: &Path, report: &mut Report, files: &mut Vec<PathBuf>) -> Result<(), CliError> {
    let axis_s = cfg.require("sweep", "axis")?;
    let axis = Axis::parse(axis_s).ok_or_else(|| {
        CliError::config("sweep.axis", format!("unknown axis '{axis_s}', expected A, m_index, T, omega_c, L or mass"))
    })?;
    let values = cfg.f64_list("sweep", "values")?.unwrap_or_default();
    if values.is_empty() {
        return Err(CliError::config("sweep.values", "missing required key"));
    }
    // fail on the base configuration before fanning out
    let model = model_from(cfg)?;
    target_from(cfg, model)?;
    let win = window_from(cfg)?;
    if axis == Axis::MIndex && values.iter().any(|v| v.fract() != 0.0 || *v < 1.0) {
        return Err(CliError::config("sweep.values", "m_index values must be positive integers"));
    }

    let rows: Vec<Result<SweepRow, Error>> = timed(report, "points", || {
        values.par_iter().map(|&v| sweep_point(cfg, axis, v, &win)).collect()
    });
    let mut csv = Csv::new(&["axis_value", "dynamic_range", "fidelity", "ln_p", "eta", "omega_c", "status"]);
    let mut failed = 0;
    for (v, r) in values.iter().zip(&rows) {
        match r {
            Ok(p) => csv.row(&[
                num(*v),
                num(p.dynamic_range),
                num(p.fidelity),
                num(p.ln_p),
                num(p.eta),
                num(p.omega_c),
                "ok".into(),
            ]),
            Err(e) => {
                failed += 1;
                let nan = num(f64::NAN);
                csv.row(&[num(*v), nan.clone(), nan.clone(), nan.clone(), nan.clone(), nan, format!("error:{}", core_kind(e))]);
            }
        }
    }
    files.push(write_file(dir, "sweep.csv", csv.text())?);
    report.set("axis", axis_s);
    report.set("points", values.len());
    report.set("failed_points", failed);

    let ok: Vec<(f64, SweepRow)> = values.iter().zip(&rows).filter_map(|(v, r)| r.as_ref().ok().map(|p| (*v, *p))).collect();
    match axis {
        Axis::Stretch => {
            let xs: Vec<f64> = ok.iter().map(|(_, p)| p.dynamic_range).collect();
            let ys: Vec<f64> = ok.iter().map(|(_, p)| p.ln_p).collect();
            if ys.iter().all(|y| y.is_finite()) {
                if let Ok(fit) = linear_fit(&xs, &ys) {
                    report.set("fit.x", "dynamic_range");
                    report.set("fit.y", "ln_p");
                    report.number("fit.slope", fit.slope);
                    report.number("fit.intercept", fit.intercept);
                    report.number("fit.r_squared", fit.r_squared);
                }
            }
        }
        Axis::OmegaC if ok.len() >= 2 => {
            let mono = ok.windows(2).all(|w| (w[1].0 > w[0].0) == (w[1].1.eta <= w[0].1.eta));
            report.set("eta_monotone_decreasing", mono);
        }
        Axis::MIndex if ok.len() >= 2 => {
            let mono = ok.windows(2).all(|w| w[1].1.fidelity >= w[0].1.fidelity - 1e-3);
            report.set("fidelity_monotone_increasing", mono);
        }
        _ => {}
    }
    Ok(())
}

fn sweep_point(cfg: &Config, axis: Axis, v: f64, base: &WindowSettings) -> Result<SweepRow, Error> {
    let model = model_from(cfg).map_err(core_only)?;
    let mut target = target_from(cfg, model).map_err(core_only)?;
    let mut win = *base;
    match axis {
        Axis::Stretch => return stretch_point(&target, &win, v),
        Axis::MIndex => win.m_index = v as u32,
        Axis::HalfSpan => win.half_span = Some(v),
        Axis::OmegaC => win.omega_c = Some(v),
        Axis::Radius => match target.profile {
            Profile::GaussianShell { width, .. } => target.profile = Profile::GaussianShell { radius: v, width },
            _ => return Err(Error::InvalidArgument("the L axis needs a gaussian_shell target".into())),
        },
        Axis::Mass => {
            let m = target.model;
            target.model = DispersionModel::new(m.kind(), v, m.max_frequency(), m.weight_rule())?;
            if !matches!(m.kind(), DispersionKind::RelativisticMassive | DispersionKind::Schroedinger) {
                return Err(Error::InvalidArgument(format!("{} has no mass parameter", m.kind().name())));
            }
        }
    }
    if axis == Axis::HalfSpan && win.half_span.is_none() {
        win.half_span = Some(default_half_span(&target.profile));
    }
    let r = run_pipeline(&target, &win, win.mollifier.is_some())?;
    Ok(SweepRow {
        dynamic_range: r.plan.max_dynamic_range(),
        fidelity: r.fidelity,
        ln_p: r.probability.map_or(f64::NAN, |p| p.ln_value),
        eta: r.eta,
        omega_c: r.plan.omega_c,
    })
}

/// Single pair window at the shift the stretch `a` maps to.
fn stretch_point(target: &TargetState, win: &WindowSettings, a: f64) -> Result<SweepRow, Error> {
    if !(a > 0.0) {
        return Err(Error::InvalidArgument(format!("stretch must be positive, got {a}")));
    }
    let mut plan = WindowPlan {
        terms: vec![],
        t0: win.t0,
        half_span: 0.0,
        omega_c: 0.0,
        m_index: win.m_index,
        mollifier: win.mollifier,
    };
    let tc = plan.core_support();
    let t = 0.5 * tc * (a.cosh() - 1.0);
    let pair = PairBasis::new(t, tc, win.m_index, 1.0)?;
    plan.half_span = t;
    plan.terms.push(PlanTerm { t_prime: t, weight: Complex64::new(1.0, 0.0), basis: Basis::SuperoscPair, params: Some(*pair.plus()) });
    plan.omega_c = win.omega_c.unwrap_or_else(|| max_band_edge(tc, win.m_index, plan.max_cosh()));
    let kg = state_k_grid(target, win.k_points)?;
    let desired = rsp_core::fieldstate::desired_amplitude(target, &kg)?;
    let generated = generated_amplitude_from(&plan, target, &kg)?;
    let ln_p = match plan.mollifier {
        Some(_) => success_probability(&plan, target, win.coupling, &kg)?.ln_value,
        None => f64::NAN,
    };
    Ok(SweepRow {
        dynamic_range: pair.plus().dynamic_range(),
        fidelity: fidelity(&generated, &desired)?,
        ln_p,
        eta: SpectralTail::new(target)?.fraction_above_shift(plan.omega_c)?,
        omega_c: plan.omega_c,
    })
}

fn core_only(e: CliError) -> Error {
    match e {
        CliError::Core(e) => e,
        other => Error::InvalidArgument(other.to_string()),
    }
}

fn correlator_cmd(cfg: &Config, dir: &Path, report: &mut Report, files: &mut Vec<PathBuf>) -> Result<(), CliError> {
    let model = model_from(cfg)?;
    let d = cfg.usize_or("correlator", "dimension", 3)? as u32;
    let r_min = cfg.f64_req("correlator", "r_min")?;
    let r_max = cfg.f64_req("correlator", "r_max")?;
    let count = cfg.usize_or("correlator", "r_count", 21)?;
    let dts = cfg.f64_list("correlator", "dt")?.unwrap_or_else(|| vec![0.0]);
    let rs = if count == 1 { vec![r_min] } else { Grid1D::linspace(r_min, r_max, count)?.points() };
    let queries: Vec<CorrelatorQuery> = dts
        .iter()
        .flat_map(|&dt| rs.iter().map(move |&r| (r, dt)))
        .map(|(r, dt)| CorrelatorQuery::new(model, d, r, dt))
        .collect::<Result<_, _>>()?;
    let values: Vec<_> = timed(report, "correlator", || queries.par_iter().map(correlator).collect());
    let mut csv = Csv::new(&["r", "dt", "re", "im", "abs", "status"]);
    let (mut xs, mut ys) = (vec![], vec![]);
    let mut distributional = 0;
    for (q, v) in queries.iter().zip(&values) {
        match v {
            Ok(c) => {
                let status = if c.distributional {
                    distributional += 1;
                    "distributional"
                } else {
                    "ok"
                };
                csv.row(&[num(q.separation), num(q.dt), num(c.value.re), num(c.value.im), num(c.value.norm()), status.into()]);
                if q.dt == 0.0 && q.separation > 0.0 && !c.distributional && c.value.norm() > 0.0 {
                    xs.push(q.separation);
                    ys.push(c.value.norm().ln());
                }
            }
            Err(e) => {
                let nan = num(f64::NAN);
                csv.row(&[num(q.separation), num(q.dt), nan.clone(), nan.clone(), nan, format!("error:{}", core_kind(e))]);
            }
        }
    }
    files.push(write_file(dir, "correlator.csv", csv.text())?);
    report.set("rows", queries.len());
    report.set("distributional_rows", distributional);
    if model.kind() == DispersionKind::RelativisticMassive && xs.len() >= 4 {
        // ln|C| ≈ c₀ - κ r + c₂ ln r over the equal-time rows
        let rows: Vec<Vec<f64>> = xs.iter().map(|&r| vec![1.0, r, r.ln()]).collect();
        let beta = least_squares(&rows, &ys)?;
        report.number("fitted_rate", -beta[1]);
        report.number("fitted_rate_over_mass", -beta[1] / model.mass());
    }
    Ok(())
}

fn propagate(cfg: &Config, dir: &Path, report: &mut Report, files: &mut Vec<PathBuf>) -> Result<(), CliError> {
    let model = model_from(cfg)?;
    let t0 = cfg.f64_or("propagate", "t0", 1.0)?;
    let kg = Grid1D::midpoints(
        cfg.f64_or("propagate", "k_min", 0.0)?,
        cfg.f64_or("propagate", "k_max", 20.0)?,
        cfg.usize_or("propagate", "k_points", 2000)?,
    )?;
    let state = match cfg.raw("propagate", "state").unwrap_or("delta") {
        "delta" => delta_window_state(&model, t0, &kg)?,
        "narrowband" => narrowband_state(
            &model,
            t0,
            cfg.f64_req("propagate", "k_center")?,
            cfg.f64_req("propagate", "k_width")?,
            &kg,
        )?,
        other => return Err(CliError::config("propagate.state", format!("unknown state '{other}', expected delta or narrowband"))),
    };
    let xg = Grid1D::linspace(
        cfg.f64_or("propagate", "x_min", 0.0)?,
        cfg.f64_req("propagate", "x_max")?,
        cfg.usize_or("propagate", "x_count", 401)?,
    )?;
    let tg = Grid1D::linspace(
        cfg.f64_or("propagate", "t_min", 0.0)?,
        cfg.f64_req("propagate", "t_max")?,
        cfg.usize_or("propagate", "t_count", 5)?,
    )?;
    let cells: Vec<(f64, f64)> =
        tg.points().into_iter().flat_map(|t| xg.points().into_iter().map(move |x| (x, t))).collect();
    let values: Vec<Complex64> = timed(report, "probe", || {
        cells.par_iter().map(|&(x, t)| probe_amplitude(&state, x, t)).collect::<Result<Vec<_>, _>>()
    })?;
    let mut csv = Csv::new(&["x", "t", "re", "im", "abs"]);
    for ((x, t), v) in cells.iter().zip(&values) {
        csv.row(&[num(*x), num(*t), num(v.re), num(v.im), num(v.norm())]);
    }
    files.push(write_file(dir, "propagate.csv", csv.text())?);

    // ridge: per-time maximum of |probe|, refined by a parabola
    let nx = xg.count();
    let (mut times, mut ridge) = (vec![], vec![]);
    for (j, t) in tg.points().into_iter().enumerate() {
        let mags: Vec<f64> = values[j * nx..(j + 1) * nx].iter().map(|v| v.norm()).collect();
        let i = mags.iter().enumerate().fold(0, |b, (i, &v)| if v > mags[b] { i } else { b });
        let x = if i > 0 && i + 1 < nx {
            let (a, b, c) = (mags[i - 1], mags[i], mags[i + 1]);
            let den = a - 2.0 * b + c;
            xg.x(i) + if den != 0.0 { 0.5 * (a - c) / den * xg.step() } else { 0.0 }
        } else {
            xg.x(i)
        };
        report.number(&format!("ridge_x.{j}"), x);
        times.push(t);
        ridge.push(x);
    }
    if let Ok(fit) = linear_fit(&times, &ridge) {
        report.number("ridge_velocity", fit.slope);
        report.number("ridge_intercept", fit.intercept);
        report.number("ridge_r_squared", fit.r_squared);
    }
    Ok(())
}
