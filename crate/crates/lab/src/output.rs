//! CSV and JSON files written by the CLI. Headers and column order are a
//! fixed contract with downstream plotting.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use dicke_core::{DiagnosticRow, SuddenChangeReport, SystemParams, Trajectory};
use serde::Serialize;

use crate::experiment::{ScalingFit, ScalingRecord};

pub const TRAJECTORY_HEADER: [&str; 12] = [
    "gamma_t",
    "jz_mean",
    "jz2_mean",
    "p_total",
    "p_ind",
    "p_corr",
    "wysi_sigma_z",
    "wysi_jx",
    "w_xx",
    "w_zz",
    "lqu",
    "lqu_minimizer",
];
pub const POPULATIONS_HEADER: [&str; 3] = ["gamma_t", "m", "p"];
pub const POWER_RAW_HEADER: [&str; 4] = ["t", "p_total", "p_ind", "p_corr"];
pub const FIG1_HEADER: [&str; 4] = ["gamma_t", "wysi_sigma_z", "lqu", "lqu_minimizer"];
pub const FIG2_HEADER: [&str; 3] = ["gamma_t", "p_total", "wysi_jx"];
/// Extra columns for `N = 50`: `P/500` and `4I/50`.
pub const FIG2_N50_EXTRA: [&str; 2] = ["p_total_over_500", "wysi_jx_4_over_50"];
pub const SCALING_HEADER: [&str; 8] = [
    "n",
    "t_max",
    "t_min",
    "gap",
    "t_i",
    "t_f",
    "width_dsc",
    "p_max_over_n2",
];

pub const TRAJECTORY_FILE: &str = "trajectory.csv";
pub const POPULATIONS_FILE: &str = "populations.csv";
pub const POWER_RAW_FILE: &str = "power_raw.csv";
pub const FIG1_FILE: &str = "fig1.csv";
pub const FIG1_EVENTS_FILE: &str = "fig1_events.json";
pub const FIG2_FILE: &str = "fig2.csv";
pub const FIG2_EXTREMA_FILE: &str = "fig2_extrema.json";
pub const SCALING_FILE: &str = "scaling.csv";
pub const SCALING_FIT_FILE: &str = "scaling_fit.json";

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

fn writer(path: &Path) -> io::Result<csv::Writer<fs::File>> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(into_io)
}

fn into_io(e: csv::Error) -> io::Error {
    io::Error::other(e)
}

fn write_rows<I>(path: &Path, header: &[&str], rows: I) -> io::Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = writer(path)?;
    w.write_record(header).map_err(into_io)?;
    for row in rows {
        w.write_record(&row).map_err(into_io)?;
    }
    w.flush()
}

pub fn write_trajectory(path: &Path, rows: &[DiagnosticRow]) -> io::Result<()> {
    write_rows(
        path,
        &TRAJECTORY_HEADER,
        rows.iter().map(|r| {
            let mut v: Vec<String> = [
                r.gamma_t,
                r.jz_mean,
                r.jz2_mean,
                r.power.p_total,
                r.power.p_ind,
                r.power.p_corr,
                r.wysi_sigma_z,
                r.wysi_jx,
                r.w.xx(),
                r.w.zz(),
                r.lqu,
            ]
            .into_iter()
            .map(fmt_f64)
            .collect();
            v.push(r.lqu_minimizer.label().to_owned());
            v
        }),
    )
}

/// Long form: one row per (time, level).
pub fn write_populations(path: &Path, traj: &Trajectory) -> io::Result<()> {
    write_rows(
        path,
        &POPULATIONS_HEADER,
        traj.iter().flat_map(|(t, d)| {
            d.iter()
                .map(move |(m, p)| vec![fmt_f64(t), fmt_f64(m), fmt_f64(p)])
        }),
    )
}

/// Physical time and powers including the `γω` factor.
pub fn write_power_raw(
    path: &Path,
    params: &SystemParams,
    rows: &[DiagnosticRow],
) -> io::Result<()> {
    let s = params.gamma() * params.omega();
    write_rows(
        path,
        &POWER_RAW_HEADER,
        rows.iter().map(|r| {
            [
                r.gamma_t / params.gamma(),
                r.power.p_total * s,
                r.power.p_ind * s,
                r.power.p_corr * s,
            ]
            .into_iter()
            .map(fmt_f64)
            .collect()
        }),
    )
}

pub fn write_fig1(path: &Path, rows: &[DiagnosticRow]) -> io::Result<()> {
    write_rows(
        path,
        &FIG1_HEADER,
        rows.iter().map(|r| {
            vec![
                fmt_f64(r.gamma_t),
                fmt_f64(r.wysi_sigma_z),
                fmt_f64(r.lqu),
                r.lqu_minimizer.label().to_owned(),
            ]
        }),
    )
}

pub fn write_fig2(path: &Path, n_emitters: u32, rows: &[DiagnosticRow]) -> io::Result<()> {
    let with_extra = n_emitters == 50;
    let mut header: Vec<&str> = FIG2_HEADER.to_vec();
    if with_extra {
        header.extend(FIG2_N50_EXTRA);
    }
    write_rows(
        path,
        &header,
        rows.iter().map(|r| {
            let mut v = vec![r.gamma_t, r.power.p_total, r.wysi_jx];
            if with_extra {
                v.push(r.power.p_total / 500.0);
                v.push(4.0 * r.wysi_jx / 50.0);
            }
            v.into_iter().map(fmt_f64).collect()
        }),
    )
}

pub fn write_scaling(path: &Path, records: &[ScalingRecord]) -> io::Result<()> {
    write_rows(
        path,
        &SCALING_HEADER,
        records.iter().map(|r| {
            let mut v = vec![r.n.to_string()];
            v.extend(
                [
                    r.t_max,
                    r.t_min,
                    r.gap,
                    r.t_i,
                    r.t_f,
                    r.width_dsc,
                    r.p_max_over_n2,
                ]
                .into_iter()
                .map(fmt_f64),
            );
            v
        }),
    )
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> io::Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut text = serde_json::to_string_pretty(value).map_err(io::Error::other)?;
    text.push('\n');
    fs::write(path, text)
}

pub fn write_scaling_fit(path: &Path, fit: &ScalingFit) -> io::Result<()> {
    write_json(path, fit)
}

#[derive(Debug, Serialize)]
pub struct SuddenChangeJson {
    pub t_i: f64,
    pub t_f: f64,
    pub width_dsc: f64,
    pub minimizer_sequence: Vec<String>,
}

impl From<&SuddenChangeReport> for SuddenChangeJson {
    fn from(r: &SuddenChangeReport) -> Self {
        Self {
            t_i: r.t_initial,
            t_f: r.t_final,
            width_dsc: r.width,
            minimizer_sequence: r
                .minimizer_sequence
                .iter()
                .map(|a| a.label().to_owned())
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ExtremaJson {
    pub t_max: f64,
    pub t_min: f64,
    pub gap: f64,
}

pub fn out_path(dir: &Path, file: &str) -> PathBuf {
    dir.join(file)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, 1e-17, 123456.789, -2.5e-300, 0.0] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn scaling_csv_layout() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        let r = ScalingRecord {
            n: 16,
            t_max: 0.5,
            t_min: 0.25,
            gap: 0.25,
            t_i: 0.1,
            t_f: 0.2,
            width_dsc: 0.1,
            p_max_over_n2: 0.4,
        };
        write_scaling(&path, &[r]).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(
            text,
            "n,t_max,t_min,gap,t_i,t_f,width_dsc,p_max_over_n2\n16,0.5,0.25,0.25,0.1,0.2,0.1,0.4\n"
        );
    }
}
