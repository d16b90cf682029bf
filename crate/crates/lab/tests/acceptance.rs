//! End-to-end acceptance gate. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::process::ExitCode;

use dicke_core::qinfo::Axis;
use dicke_core::{
    analytic_two_level, power_breakdown, pulse_end_time, wysi_sigma_z_local, SystemParams,
    Tolerances,
};
use dicke_lab::experiment::{fit_loglog, run_from_excited, sweep, Run};
use dicke_lab::oracle::compare;
use dicke_lab::properties::run_wysi_suite;

const SAMPLES: usize = 2000;
const SWEEP: [u32; 6] = [16, 24, 32, 48, 64, 96];

struct Gate {
    failures: usize,
}

impl Gate {
    fn check(&mut self, name: &str, ok: bool, detail: String) {
        println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            self.failures += 1;
        }
    }
}

fn run(params: &SystemParams) -> Run {
    run_from_excited(params, None, SAMPLES, Tolerances::default()).expect("trajectory")
}

fn main_identity(runs: &[Run]) -> (bool, String) {
    let mut worst = 0.0_f64;
    for run in runs {
        let p = run.trajectory.params();
        let n = f64::from(p.n_emitters());
        let scale = p.gamma() * p.omega();
        for state in run.trajectory.states() {
            let corr = power_breakdown(p, state).unwrap().p_corr;
            let rhs = scale * n * n / 2.0 * wysi_sigma_z_local(state);
            worst = worst.max((corr - rhs).abs() / corr.max(scale));
        }
    }
    (
        worst <= 1e-9,
        format!("max |P_corr - γωN²/2·I| / max(P_corr, γω) = {worst:.3e} (limit 1e-9)"),
    )
}

fn conservation(runs: &[&Run]) -> (bool, String) {
    let mut norm = 0.0_f64;
    let mut identity = 0.0_f64;
    for run in runs {
        for state in run.trajectory.states() {
            norm = norm.max((state.populations().iter().sum::<f64>() - 1.0).abs());
        }
        for row in &run.rows {
            identity = identity.max((row.power.p_total - row.power.p_ind - row.power.p_corr).abs());
        }
    }
    (
        norm <= 1e-9 && identity <= 1e-12,
        format!("{} trajectories: max |Σp - 1| = {norm:.3e} (limit 1e-9), max row identity residual = {identity:.3e} (limit 1e-12)", runs.len()),
    )
}

fn main() -> ExitCode {
    let mut gate = Gate { failures: 0 };
    let tol = Tolerances::default();

    let identity_runs: Vec<Run> = [
        (2, 1.0, 1.0),
        (10, 1.0, 1.0),
        (50, 1.0, 1.0),
        (100, 1.0, 1.0),
        (50, 0.5, 2.0),
    ]
    .iter()
    .map(|&(n, g, w)| run(&SystemParams::new(n, g, w).unwrap()))
    .collect();
    let (ok, detail) = main_identity(&identity_runs);
    gate.check("main identity, N in {2, 10, 50, 100}", ok, detail);

    let mut deviations = Vec::new();
    let mut oracle_ok = true;
    for n in 2..=4 {
        let p = SystemParams::unit(n).unwrap();
        let t_end = pulse_end_time(&p, tol).unwrap();
        let report = compare(&p, t_end, SAMPLES, 1e-6, tol, None).unwrap();
        oracle_ok &= report.passed();
        let worst = report
            .deviations
            .iter()
            .map(|&(_, v)| v)
            .fold(0.0, f64::max);
        deviations.push(format!(
            "N={n}: worst {worst:.2e}, leakage {:.1e}",
            report.leakage
        ));
    }
    gate.check(
        "oracle equivalence, N = 2, 3, 4 at 1e-6",
        oracle_ok,
        deviations.join("; "),
    );

    let n50 = &identity_runs[2];
    let (ok, detail) = match n50.sudden_change() {
        Ok(r) => {
            let seq: Vec<&str> = r.minimizer_sequence.iter().map(|a| a.label()).collect();
            (
                r.minimizer_sequence == [Axis::Z, Axis::X, Axis::Z] && r.width > 0.0,
                format!(
                    "sequence {seq:?}, t_i = {:.6}, t_f = {:.6}, width = {:.6}",
                    r.t_initial, r.t_final, r.width
                ),
            )
        }
        Err(e) => (false, e.to_string()),
    };
    gate.check("double sudden change, N = 50", ok, detail);

    let records = sweep(&SWEEP, 1.0, 1.0, SAMPLES, tol).expect("sweep");
    let ns: Vec<f64> = records.iter().map(|r| f64::from(r.n)).collect();
    let widths: Vec<f64> = records.iter().map(|r| r.width_dsc).collect();
    let fit = fit_loglog(&ns, &widths).unwrap();
    gate.check(
        "width scaling over N in {16, 24, 32, 48, 64, 96}",
        (fit.slope + 1.0).abs() <= 0.15,
        format!("slope = {:.4} (target -1 ± 0.15)", fit.slope),
    );

    let gaps: Vec<f64> = records.iter().map(|r| r.gap).collect();
    let monotone = gaps.windows(2).all(|w| w[1] <= w[0]);
    let shrinks = gaps[5] < gaps[0] / 3.0;
    let listed: Vec<String> = records
        .iter()
        .map(|r| format!("{}:{:.3e}", r.n, r.gap))
        .collect();
    gate.check(
        "classical-limit convergence of |t_max - t_min|",
        monotone && shrinks,
        format!(
            "gaps [{}], non-increasing = {monotone}, gap(96) < gap(16)/3 = {shrinks}",
            listed.join(", ")
        ),
    );

    let reference = records.iter().find(|r| r.n == 64).unwrap().p_max_over_n2;
    let band: Vec<&_> = records.iter().filter(|r| r.n >= 32).collect();
    let worst = band
        .iter()
        .map(|r| (r.p_max_over_n2 / reference - 1.0).abs())
        .fold(0.0, f64::max);
    let listed: Vec<String> = band
        .iter()
        .map(|r| format!("{}:{:.4}", r.n, r.p_max_over_n2))
        .collect();
    gate.check(
        "N² intensity over N in {32, 48, 64, 96}",
        worst <= 0.2,
        format!(
            "max P/(γωN²) [{}], worst relative deviation from N=64 = {worst:.3} (limit 0.2)",
            listed.join(", ")
        ),
    );

    let mut suite_ok = true;
    let mut summary = Vec::new();
    for n in [2, 5, 10] {
        let r = run_wysi_suite(1, n, 1000);
        suite_ok &= r.passed();
        summary.push(format!(
            "N={n}: bound {:.1e}, convexity {:.1e}, Jz {:.1e}, uniform {:.1e}, pure {:.1e}",
            r.bound_violation, r.convexity_violation, r.jz_max, r.uniform_max, r.pure_deviation
        ));
    }
    gate.check(
        "WYSI property suite, 1000 draws, N = 2, 5, 10",
        suite_ok,
        summary.join("; "),
    );

    let mut single_runs = Vec::new();
    let mut decay = 0.0_f64;
    let mut corr = 0.0_f64;
    for gamma in [1.0, 2.5] {
        let p = SystemParams::new(1, gamma, 1.0).unwrap();
        let r = run_from_excited(&p, Some(5.0), SAMPLES, tol).unwrap();
        for (gt, state) in r.trajectory.iter() {
            let exact = analytic_two_level(&p, gt / gamma).unwrap();
            decay = decay.max((state.excited_population() - exact.excited_population()).abs());
        }
        corr = r
            .rows
            .iter()
            .map(|row| row.power.p_corr.abs())
            .fold(corr, f64::max);
        single_runs.push(r);
    }
    gate.check(
        "single-emitter analytics over γt in [0, 5]",
        decay <= 1e-8 && corr == 0.0,
        format!("max |p_e - exp(-2γt)| = {decay:.3e} (limit 1e-8), max |P_corr| = {corr:e}"),
    );

    let sweep_runs: Vec<Run> = SWEEP
        .iter()
        .map(|&n| run(&SystemParams::unit(n).unwrap()))
        .collect();
    let all: Vec<&Run> = identity_runs
        .iter()
        .chain(&single_runs)
        .chain(&sweep_runs)
        .collect();
    let (ok, detail) = conservation(&all);
    gate.check("conservation and power identity", ok, detail);

    println!("{} of 9 criteria passed", 9 - gate.failures);
    if gate.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
