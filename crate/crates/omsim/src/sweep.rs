//! Grid evaluation and CSV emission.
//!
//! Every grid point is evaluated independently (build → stability →
//! covariance → measures), so sweeps parallelize trivially; rows are
//! buffered and written in ascending axis order regardless of the worker
//! count. A point whose model is unstable, or whose solver fails, stays in
//! the output as a row with empty measure fields and a status note —
//! sweeps never abort halfway.

use crate::config::{AxisKind, ScenarioConfig};
use omsim_core::entanglement::{measure_pair, physicality_check};
use omsim_core::lyapunov::solve_lyapunov;
use omsim_core::model::{build_array, build_filter, build_inverse_filter, build_original};
use omsim_core::stability;
use omsim_core::{EntanglementReport, LinearModel, ModelKind, PhysicalParams};
use rayon::prelude::*;
use std::io::{self, Write};

/// Outcome class of one grid point.
#[derive(Clone, Debug, PartialEq)]
pub enum RowStatus {
    Ok,
    Unstable,
    Error(String),
}

impl RowStatus {
    fn as_csv(&self) -> String {
        match self {
            RowStatus::Ok => "ok".into(),
            RowStatus::Unstable => "unstable".into(),
            RowStatus::Error(msg) => format!("error: {}", msg.replace([',', '\n'], ";")),
        }
    }
}

/// One evaluated grid point.
#[derive(Clone, Debug)]
pub struct SweepRow {
    /// Axis value in canonical units (rad/s or K).
    pub axis_value: f64,
    pub stable: bool,
    pub max_real_eig: f64,
    /// Relative Lyapunov residual (stable points only).
    pub lyap_residual: Option<f64>,
    /// Smallest symplectic eigenvalue of the full steady covariance.
    pub min_symplectic: Option<f64>,
    /// One measure per configured pair (None when unavailable).
    pub measures: Vec<Option<EntanglementReport>>,
    pub status: RowStatus,
}

/// Apply the axis value to the scenario, returning the concrete model.
fn build_at(config: &ScenarioConfig, axis_value: f64) -> omsim_core::Result<LinearModel> {
    let mut p: PhysicalParams = config.physical.clone();
    let mut delta = p.laser_detuning;
    match config.sweep.axis {
        AxisKind::Delta => delta = axis_value,
        AxisKind::GammaM => p.mech_damping = axis_value,
        AxisKind::Temperature => p.temperature = axis_value,
        AxisKind::Varpi => p.array_detuning = axis_value,
        AxisKind::Hopping => p.hopping = axis_value,
    }
    match &config.model {
        ModelKind::Original => build_original(&p, delta),
        ModelKind::Filter => build_filter(&p, delta),
        ModelKind::InverseFilter => build_inverse_filter(&p, delta),
        ModelKind::Array { n, .. } => build_array(&p, *n, p.hopping, p.array_detuning),
    }
}

/// Evaluate one grid point. Never panics; solver failures land in `status`.
pub fn evaluate_point(config: &ScenarioConfig, axis_value: f64) -> SweepRow {
    let n_pairs = config.pairs.len();
    let mut row = SweepRow {
        axis_value,
        stable: false,
        max_real_eig: f64::NAN,
        lyap_residual: None,
        min_symplectic: None,
        measures: vec![None; n_pairs],
        status: RowStatus::Ok,
    };

    let model = match build_at(config, axis_value) {
        Ok(m) => m,
        Err(e) => {
            row.status = RowStatus::Error(e.to_string());
            return row;
        }
    };
    let spectral = match stability::spectral_stable(&model.a) {
        Ok(s) => s,
        Err(e) => {
            row.status = RowStatus::Error(e.to_string());
            return row;
        }
    };
    row.stable = spectral.stable;
    row.max_real_eig = spectral.max_real_eig;
    if !spectral.stable {
        row.status = RowStatus::Unstable;
        return row;
    }

    let cov = match solve_lyapunov(&model) {
        Ok(c) => c,
        Err(e) => {
            row.status = RowStatus::Error(e.to_string());
            return row;
        }
    };
    row.lyap_residual = Some(cov.residual);
    match physicality_check(&cov.v) {
        Ok(rep) => row.min_symplectic = Some(rep.min_symplectic),
        Err(e) => {
            row.status = RowStatus::Error(e.to_string());
            return row;
        }
    }
    for (k, &(i, j)) in config.pairs.iter().enumerate() {
        match measure_pair(&cov, i, j) {
            Ok(rep) => row.measures[k] = Some(rep),
            Err(e) => {
                row.status = RowStatus::Error(e.to_string());
                return row;
            }
        }
    }
    row
}

/// Evaluate the whole grid with up to `jobs` workers (0 = rayon default).
/// Row order and content are independent of the worker count.
pub fn run_sweep(config: &ScenarioConfig, jobs: usize) -> Vec<SweepRow> {
    let grid = config.sweep.grid();
    let eval = |vals: &[f64]| -> Vec<SweepRow> {
        vals.par_iter().map(|&x| evaluate_point(config, x)).collect()
    };
    if jobs == 0 {
        eval(&grid)
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        pool.install(|| eval(&grid))
    }
}

/// CSV emission options.
#[derive(Clone, Debug, Default)]
pub struct CsvOptions {
    /// Suppress the timestamp comment so identical configs give identical
    /// bytes.
    pub no_timestamp: bool,
}

/// Mode label used in per-pair column names.
fn mode_label(model: &ModelKind, idx: usize) -> String {
    let _ = model;
    if idx == 0 {
        "mirror".into()
    } else {
        format!("cavity_{idx}")
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

fn fmt_opt_sci(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

/// Write the sweep as CSV: a `#` metadata block (tool version, resolved
/// config, optional timestamp), one header row, then one line per grid
/// point in ascending axis order.
pub fn write_csv(
    out: &mut dyn Write,
    config: &ScenarioConfig,
    rows: &[SweepRow],
    opts: &CsvOptions,
) -> io::Result<()> {
    writeln!(out, "# omsim sweep v{}", env!("CARGO_PKG_VERSION"))?;
    if !opts.no_timestamp {
        let now = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        writeln!(out, "# generated_unix: {now}")?;
    }
    writeln!(out, "# config: {}", config.resolved_json())?;

    let axis = config.sweep.axis;
    let mut header: Vec<String> = Vec::new();
    match axis {
        AxisKind::Temperature => header.push("temperature_k".into()),
        _ => {
            header.push(format!("{}_rad_per_s", axis.name()));
            header.push(format!("{}_over_omega_m", axis.name()));
        }
    }
    for &(i, j) in &config.pairs {
        let a = mode_label(&config.model, i);
        let b = mode_label(&config.model, j);
        for field in ["en", "xi", "sigma", "simon"] {
            header.push(format!("{field}_{a}_{b}"));
        }
    }
    header.push("stable".into());
    header.push("max_real_eig_rad_per_s".into());
    header.push("lyap_residual".into());
    header.push("min_symplectic".into());
    header.push("status".into());
    writeln!(out, "{}", header.join(","))?;

    let om = config.physical.mech_freq;
    for row in rows {
        let mut cells: Vec<String> = Vec::with_capacity(header.len());
        match axis {
            AxisKind::Temperature => cells.push(format!("{}", row.axis_value)),
            _ => {
                cells.push(format!("{}", row.axis_value));
                cells.push(format!("{}", row.axis_value / om));
            }
        }
        for m in &row.measures {
            match m {
                Some(rep) => {
                    cells.push(format!("{}", rep.e_n));
                    cells.push(format!("{}", rep.xi));
                    cells.push(format!("{}", rep.sigma));
                    cells.push(if rep.simon_entangled { "1".into() } else { "0".into() });
                }
                None => cells.extend(std::iter::repeat_n(String::new(), 4)),
            }
        }
        cells.push(if row.stable { "true".into() } else { "false".into() });
        cells.push(if row.max_real_eig.is_nan() {
            String::new()
        } else {
            format!("{}", row.max_real_eig)
        });
        cells.push(fmt_opt_sci(row.lyap_residual));
        cells.push(fmt_opt(row.min_symplectic));
        cells.push(row.status.as_csv());
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_filter_config() -> ScenarioConfig {
        ScenarioConfig::from_json(
            r#"{
                "model": "filter",
                "sweep": {"axis": "delta", "start_omega_m_units": 0.1,
                          "stop_omega_m_units": 1.0, "points": 7}
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn sweep_covers_grid_in_order_and_survives_instability() {
        let cfg = small_filter_config();
        let rows = run_sweep(&cfg, 2);
        assert_eq!(rows.len(), 7);
        for w in rows.windows(2) {
            assert!(w[0].axis_value < w[1].axis_value);
        }
        // The reference configuration has an unstable window near 0.25 ω_m.
        let unstable: Vec<_> = rows.iter().filter(|r| !r.stable).collect();
        assert!(!unstable.is_empty(), "expected an unstable point in this range");
        for r in unstable {
            assert_eq!(r.status, RowStatus::Unstable);
            assert!(r.measures.iter().all(|m| m.is_none()));
        }
        for r in rows.iter().filter(|r| r.stable) {
            assert_eq!(r.status, RowStatus::Ok);
            assert!(r.measures[0].is_some());
            assert!(r.lyap_residual.unwrap() <= omsim_core::lyapunov::RESIDUAL_BOUND);
        }
    }

    #[test]
    fn result_is_independent_of_worker_count() {
        let cfg = small_filter_config();
        let a = run_sweep(&cfg, 1);
        let b = run_sweep(&cfg, 4);
        for (x, y) in a.iter().zip(b.iter()) {
            assert_eq!(x.axis_value, y.axis_value);
            assert_eq!(x.stable, y.stable);
            match (&x.measures[0], &y.measures[0]) {
                (Some(p), Some(q)) => assert_eq!(p.e_n, q.e_n),
                (None, None) => {}
                _ => panic!("rows differ between worker counts"),
            }
        }
    }

    #[test]
    fn csv_layout_and_determinism() {
        let cfg = small_filter_config();
        let rows = run_sweep(&cfg, 0);
        let opts = CsvOptions { no_timestamp: true };
        let mut buf1 = Vec::new();
        write_csv(&mut buf1, &cfg, &rows, &opts).unwrap();
        let mut buf2 = Vec::new();
        write_csv(&mut buf2, &cfg, &rows, &opts).unwrap();
        assert_eq!(buf1, buf2, "identical config ⇒ identical bytes");
        let text = String::from_utf8(buf1).unwrap();
        let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
        assert_eq!(
            header,
            "delta_rad_per_s,delta_over_omega_m,en_mirror_cavity_1,xi_mirror_cavity_1,\
             sigma_mirror_cavity_1,simon_mirror_cavity_1,stable,max_real_eig_rad_per_s,\
             lyap_residual,min_symplectic,status"
        );
        assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 8);
    }
}
