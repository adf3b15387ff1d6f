use std::path::Path;
use std::process::{Command, Output};

use rsp_core::superosc::WindowPlan;

const BALL: &str = "[model]\nkind = relativistic_massless\nweight = unit\n\
[target]\nprofile = gaussian_ball\ndimension = 1\nwidth = 0.5\n\
[window]\nt0 = 1\nm_index = 4\nk_points = 200\ntime_points = 256\nfreq_points = 101\n";

fn rsp(cmd: &str, config: &str, dir: &Path, threads: Option<&str>) -> Output {
    let cfg = dir.join(format!("{cmd}.cfg"));
    std::fs::write(&cfg, config).unwrap();
    let mut c = Command::new(env!("CARGO_BIN_EXE_rsp"));
    c.arg(cmd).arg("--config").arg(&cfg).arg("--out").arg(dir.join("out"));
    c.env_remove("RSP_THREADS");
    if let Some(n) = threads {
        c.env("RSP_THREADS", n);
    }
    c.output().unwrap()
}

fn report_value(dir: &Path, key: &str) -> Option<String> {
    let text = std::fs::read_to_string(dir.join("out/report.txt")).unwrap();
    text.lines().find_map(|l| l.strip_prefix(&format!("{key} = ")).map(str::to_string))
}

fn report_f64(dir: &Path, key: &str) -> f64 {
    report_value(dir, key).unwrap_or_else(|| panic!("{key} missing")).parse().unwrap()
}

fn csv(dir: &Path, name: &str) -> Vec<Vec<String>> {
    std::fs::read_to_string(dir.join("out").join(name))
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn f(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn synth_writes_plan_spectrum_window_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = rsp("synth", BALL, dir.path(), None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["plan.txt", "spectrum.csv", "window.csv", "report.txt"] {
        assert!(dir.path().join("out").join(name).is_file(), "{name}");
    }
    let fid = report_f64(dir.path(), "fidelity");
    assert!(fid > 0.9 && fid <= 1.0, "{fid}");
    assert!(report_value(dir.path(), "ln_p").is_some());
    assert_eq!(report_value(dir.path(), "config.window.t0").as_deref(), Some("1"));
    let plan = WindowPlan::from_text(&std::fs::read_to_string(dir.path().join("out/plan.txt")).unwrap()).unwrap();
    assert_eq!(plan.m_index, 4);
    assert!((plan.omega_c - report_f64(dir.path(), "omega_c")).abs() <= 1e-15 * plan.omega_c);
    let text = std::fs::read_to_string(dir.path().join("out/spectrum.csv")).unwrap();
    assert!(text.starts_with("omega,re,im,abs\n") && !text.contains('\r'));
    assert_eq!(csv(dir.path(), "spectrum.csv").len(), 101);
}

#[test]
fn missing_t0_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let out = rsp("synth", &BALL.replace("t0 = 1\n", ""), dir.path(), None);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("error kind=config field=window.t0 "), "{err}");
}

#[test]
fn exit_codes_by_error_class() {
    let dir = tempfile::tempdir().unwrap();
    // unknown key
    assert_eq!(rsp("synth", &format!("{BALL}colour = red\n"), dir.path(), None).status.code(), Some(2));
    // unknown command
    assert_eq!(rsp("bogus", BALL, dir.path(), None).status.code(), Some(2));
    // infrared-divergent target: numeric domain
    let ir = BALL.replace("weight = unit\n", "");
    let out = rsp("synth", &ir, dir.path(), None);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    // band edge beyond what m_index can hold flat
    let out = rsp("synth", &format!("{BALL}omega_c = 100\n"), dir.path(), None);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("kind=m_index_too_small"));
}

#[test]
fn single_point_sweep_matches_synth() {
    let dir = tempfile::tempdir().unwrap();
    assert!(rsp("synth", BALL, dir.path(), None).status.success());
    let fid = report_f64(dir.path(), "fidelity");
    let lnp = report_f64(dir.path(), "ln_p");
    let out = rsp("sweep", &format!("{BALL}[sweep]\naxis = m_index\nvalues = 4\n"), dir.path(), None);
    assert!(out.status.success());
    let rows = csv(dir.path(), "sweep.csv");
    assert_eq!(rows.len(), 1);
    assert_eq!(f(&rows[0][2]), fid);
    assert_eq!(f(&rows[0][3]), lnp);
    assert_eq!(rows[0][6], "ok");
}

#[test]
fn stretch_sweep_fits_minus_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "[model]\nkind = relativistic_massless\nweight = unit\n\
        [target]\nprofile = gaussian_shell\nradius = 2\nwidth = 0.5\n\
        [window]\nt0 = 1\nm_index = 4\nk_points = 200\n\
        [sweep]\naxis = A\nvalues = 0.4, 0.6, 0.8, 1.0, 1.2, 1.4\n";
    assert!(rsp("sweep", cfg, dir.path(), None).status.success());
    let slope = report_f64(dir.path(), "fit.slope");
    assert!((slope + 2.0).abs() < 0.2, "{slope}");
    assert!(report_f64(dir.path(), "fit.r_squared") > 0.99);
    assert_eq!(csv(dir.path(), "sweep.csv").len(), 6);
}

#[test]
fn band_edge_sweep_has_falling_eta_and_keeps_failed_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = format!("{BALL}[sweep]\naxis = omega_c\nvalues = 0.05, 0.1, 0.2, 50\n").replace("m_index = 4", "m_index = 8");
    assert!(rsp("sweep", &cfg, dir.path(), None).status.success());
    let rows = csv(dir.path(), "sweep.csv");
    assert_eq!(rows.len(), 4);
    let eta: Vec<f64> = rows[..3].iter().map(|r| f(&r[4])).collect();
    assert!(eta[0] > eta[1] && eta[1] > eta[2], "{eta:?}");
    assert_eq!(rows[3][6], "error:m_index_too_small");
    assert_eq!(report_value(dir.path(), "failed_points").as_deref(), Some("1"));
    assert_eq!(report_value(dir.path(), "eta_monotone_decreasing").as_deref(), Some("true"));
}

#[test]
fn massive_correlator_table_and_rate() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "[model]\nkind = relativistic_massive\nmass = 2\n\
        [correlator]\ndimension = 3\nr_min = 2.5\nr_max = 7.5\nr_count = 21\n";
    assert!(rsp("correlator", cfg, dir.path(), None).status.success());
    let rows = csv(dir.path(), "correlator.csv");
    assert!(rows.len() >= 20);
    assert_eq!(2.0 * f(&rows[0][0]), 5.0);
    assert_eq!(2.0 * f(&rows[rows.len() - 1][0]), 15.0);
    assert!(rows.iter().all(|r| r[5] == "ok"));
    let rate = report_f64(dir.path(), "fitted_rate");
    assert!((rate / 2.0 - 1.0).abs() < 0.05, "{rate}");
}

#[test]
fn coincident_unit_weight_correlator_is_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "[model]\nkind = schroedinger\nmass = 1\n\
        [correlator]\ndimension = 1\nr_min = 0\nr_max = 0\nr_count = 1\ndt = 0\n";
    let out = rsp("correlator", cfg, dir.path(), None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = csv(dir.path(), "correlator.csv");
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][5], "distributional");
}

#[test]
fn massless_ridge_follows_light_cone() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "[model]\nkind = relativistic_massless\nweight = unit\n\
        [propagate]\nstate = delta\nt0 = 0\nk_max = 20\nk_points = 2000\n\
        x_min = -8\nx_max = 8\nx_count = 321\nt_min = 1\nt_max = 5\nt_count = 5\n";
    assert!(rsp("propagate", cfg, dir.path(), None).status.success());
    let rows = csv(dir.path(), "propagate.csv");
    assert_eq!(rows.len(), 321 * 5);
    for (j, chunk) in rows.chunks(321).enumerate() {
        let t = 1.0 + j as f64;
        let best = chunk.iter().max_by(|a, b| f(&a[4]).total_cmp(&f(&b[4]))).unwrap();
        assert!((f(&best[0]).abs() - t).abs() <= 0.05, "t = {t}: peak at {}", best[0]);
        assert_eq!(f(&best[1]), t);
    }
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let cfg = format!("{BALL}[sweep]\naxis = m_index\nvalues = 2, 3, 4\n");
    assert!(rsp("sweep", &cfg, a.path(), Some("1")).status.success());
    assert!(rsp("sweep", &cfg, b.path(), Some("3")).status.success());
    let read = |d: &Path| std::fs::read(d.join("out/sweep.csv")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
    assert!(rsp("synth", BALL, a.path(), Some("1")).status.success());
    assert!(rsp("synth", BALL, b.path(), Some("2")).status.success());
    for name in ["spectrum.csv", "window.csv", "plan.txt"] {
        assert_eq!(std::fs::read(a.path().join("out").join(name)).unwrap(), std::fs::read(b.path().join("out").join(name)).unwrap());
    }
}
