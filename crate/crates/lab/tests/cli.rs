use std::path::Path;
use std::process::{Command, Output};

use dicke_lab::output::{
    FIG1_HEADER, FIG2_HEADER, FIG2_N50_EXTRA, POPULATIONS_HEADER, POWER_RAW_HEADER, SCALING_HEADER,
    TRAJECTORY_HEADER,
};
use tempfile::TempDir;

fn dicke(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dicke"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("failed to launch dicke")
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut reader = csv::Reader::from_path(path).unwrap();
    let header = reader.headers().unwrap().iter().map(String::from).collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let i = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

#[test]
fn single_emitter_has_no_correlated_power() {
    let dir = TempDir::new().unwrap();
    let out = dicke(&["simulate", "--n", "1", "--samples", "200"], dir.path());
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let (header, rows) = read_csv(&dir.path().join("trajectory.csv"));
    assert_eq!(header, TRAJECTORY_HEADER);
    assert_eq!(rows.len(), 200);
    assert!(column(&header, &rows, "p_corr").iter().all(|&v| v == 0.0));
}

#[test]
fn trajectory_rows_satisfy_power_identity() {
    let dir = TempDir::new().unwrap();
    let out = dicke(
        &["simulate", "--n", "50", "--samples", "500", "--populations"],
        dir.path(),
    );
    assert!(out.status.success());
    let (header, rows) = read_csv(&dir.path().join("trajectory.csv"));
    let total = column(&header, &rows, "p_total");
    let ind = column(&header, &rows, "p_ind");
    let corr = column(&header, &rows, "p_corr");
    for k in 0..rows.len() {
        assert!((total[k] - ind[k] - corr[k]).abs() <= 1e-12, "row {k}");
    }
    let (pop_header, pop_rows) = read_csv(&dir.path().join("populations.csv"));
    assert_eq!(pop_header, POPULATIONS_HEADER);
    assert_eq!(pop_rows.len(), 500 * 51);
}

#[test]
fn minimizer_switches_twice_for_fifty_emitters() {
    let dir = TempDir::new().unwrap();
    assert!(dicke(&["simulate", "--n", "50"], dir.path())
        .status
        .success());
    let (header, rows) = read_csv(&dir.path().join("trajectory.csv"));
    let i = header.iter().position(|h| h == "lqu_minimizer").unwrap();
    let mut runs: Vec<&str> = Vec::new();
    for r in &rows {
        if runs.last() != Some(&r[i].as_str()) {
            runs.push(&r[i]);
        }
    }
    assert_eq!(runs, ["z", "x", "z"]);
}

#[test]
fn raw_powers_written_for_non_unit_scales() {
    let dir = TempDir::new().unwrap();
    let args = [
        "simulate",
        "--n",
        "4",
        "--gamma",
        "2",
        "--omega",
        "3",
        "--samples",
        "100",
    ];
    assert!(dicke(&args, dir.path()).status.success());
    let (header, rows) = read_csv(&dir.path().join("power_raw.csv"));
    assert_eq!(header, POWER_RAW_HEADER);
    let (th, trows) = read_csv(&dir.path().join("trajectory.csv"));
    let scaled = column(&th, &trows, "p_total");
    let raw = column(&header, &rows, "p_total");
    let t = column(&header, &rows, "t");
    let gt = column(&th, &trows, "gamma_t");
    for k in 0..rows.len() {
        assert!((raw[k] - 6.0 * scaled[k]).abs() <= 1e-12 * raw[k].abs().max(1.0));
        assert!((2.0 * t[k] - gt[k]).abs() <= 1e-15 * gt[k].max(1.0));
    }
}

#[test]
fn output_is_bit_identical_across_runs() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    for dir in [&a, &b] {
        assert!(dicke(&["fig", "1", "--n", "20"], dir.path())
            .status
            .success());
    }
    for file in ["populations.csv", "fig1.csv", "fig1_events.json"] {
        let x = std::fs::read(a.path().join(file)).unwrap();
        let y = std::fs::read(b.path().join(file)).unwrap();
        assert!(x == y, "{file} differs between runs");
        assert!(!x.contains(&b'\r'));
    }
}

#[test]
fn fig1_populations_flatten_near_peak_emission() {
    let dir = TempDir::new().unwrap();
    assert!(dicke(&["fig", "1"], dir.path()).status.success());
    let (header, _) = read_csv(&dir.path().join("fig1.csv"));
    assert_eq!(header, FIG1_HEADER);
    let events: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("fig1_events.json")).unwrap())
            .unwrap();
    assert!(events["width_dsc"].as_f64().unwrap() > 0.0);

    let run = dicke_lab::experiment::run_from_excited(
        &dicke_core::SystemParams::unit(50).unwrap(),
        None,
        2000,
        Default::default(),
    )
    .unwrap();
    let t_max = run.extrema().unwrap().t_max_power;

    let (_, pops) = read_csv(&dir.path().join("populations.csv"));
    let times: Vec<f64> = pops.iter().map(|r| r[0].parse().unwrap()).collect();
    let nearest = times
        .iter()
        .copied()
        .min_by(|a, b| (a - t_max).abs().total_cmp(&(b - t_max).abs()))
        .unwrap();
    let interior: Vec<f64> = pops
        .iter()
        .filter(|r| r[0].parse::<f64>().unwrap() == nearest)
        .filter(|r| r[1].parse::<f64>().unwrap().abs() <= 12.5)
        .map(|r| r[2].parse().unwrap())
        .collect();
    assert_eq!(interior.len(), 25);
    let mean = interior.iter().sum::<f64>() / interior.len() as f64;
    let (lo, hi) = interior
        .iter()
        .fold((f64::MAX, f64::MIN), |(lo, hi), &p| (lo.min(p), hi.max(p)));
    assert!((hi - lo) / mean <= 0.25, "spread {}", (hi - lo) / mean);
}

#[test]
fn fig2_reports_nearby_extrema_and_scaled_columns() {
    let dir = TempDir::new().unwrap();
    assert!(dicke(&["fig", "2"], dir.path()).status.success());
    let (header, rows) = read_csv(&dir.path().join("fig2.csv"));
    let expected: Vec<&str> = FIG2_HEADER.iter().chain(&FIG2_N50_EXTRA).copied().collect();
    assert_eq!(header, expected);
    let p = column(&header, &rows, "p_total");
    let p500 = column(&header, &rows, "p_total_over_500");
    let i = column(&header, &rows, "wysi_jx");
    let i50 = column(&header, &rows, "wysi_jx_4_over_50");
    for k in 0..rows.len() {
        assert_eq!(p500[k], p[k] / 500.0);
        assert_eq!(i50[k], 4.0 * i[k] / 50.0);
    }
    let extrema: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("fig2_extrema.json")).unwrap())
            .unwrap();
    let t_max = extrema["t_max"].as_f64().unwrap();
    let gap = extrema["gap"].as_f64().unwrap();
    assert!(
        gap >= 0.0 && gap < 0.1 * t_max,
        "gap {gap} vs t_max {t_max}"
    );

    let other = TempDir::new().unwrap();
    assert!(dicke(&["fig", "2", "--n", "20"], other.path())
        .status
        .success());
    let (header, _) = read_csv(&other.path().join("fig2.csv"));
    assert_eq!(header, FIG2_HEADER);
}

#[test]
fn sweep_writes_records_and_fit_sidecar() {
    let dir = TempDir::new().unwrap();
    let out = dicke(
        &["fig", "3", "--n-list", "8,12,16,20", "--samples", "2000"],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let (header, rows) = read_csv(&dir.path().join("scaling.csv"));
    assert_eq!(header, SCALING_HEADER);
    assert_eq!(column(&header, &rows, "n"), [8.0, 12.0, 16.0, 20.0]);
    assert!(column(&header, &rows, "width_dsc").iter().all(|&w| w > 0.0));
    let fit: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("scaling_fit.json")).unwrap())
            .unwrap();
    let mut keys: Vec<&str> = fit
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    keys.sort_unstable();
    assert_eq!(
        keys,
        ["n_list", "residual_width", "slope_gap", "slope_width_dsc"]
    );
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let cases: &[&[&str]] = &[
        &["sweep"],
        &["sweep", "--n-list", "8,16,32"],
        &["sweep", "--n-list", "4,16,32,64"],
        &["fig", "4"],
        &["fig", "1", "--samples", "100"],
        &["simulate", "--n", "0"],
        &["simulate", "--gamma", "-1"],
        &["simulate", "--rel-tol", "0"],
        &["verify", "--max-n", "9"],
        &["simulate", "--bogus"],
    ];
    for args in cases {
        let out = dicke(args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn corrupted_rate_fails_verification() {
    let dir = TempDir::new().unwrap();
    let out = dicke(
        &[
            "verify",
            "--max-n",
            "3",
            "--samples",
            "200",
            "--draws",
            "10",
            "--perturb-rate",
            "1:1.01",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("FAIL: populations"), "{stdout}");
}
