//! Reproducible validation suite with a machine-readable report.
//!
//! `fast` runs the cross-method numerical checks (analytic Lyapunov cases,
//! solver-vs-integrator agreement on random stable models, the two-mode
//! squeezed-vacuum closed form, stability-method agreement on random
//! parameter draws, the filter/inverse-filter identity, and the N = 1
//! array reduction) in under a minute. `full` adds the Monte Carlo oracle
//! and the figure-level sweep checks.
//!
//! Reports are deterministic for a fixed `(seed, level)`: check order is
//! fixed by name and all randomness comes from named streams of the seed.
//! Wall-clock runtimes are the one nondeterministic field; serialize with
//! [`ValidationReport::canonical_json`] to zero them out.

use crate::config::{AxisKind, Scale, ScenarioConfig, SweepSpec};
use crate::presets;
use crate::sweep::{run_sweep, RowStatus, SweepRow};
use omsim_core::entanglement::log_negativity;
use omsim_core::lyapunov::{integral_oracle, solve_lyapunov, stochastic_oracle};
use omsim_core::model::{build_array, build_filter, build_inverse_filter, build_original};
use omsim_core::rng::SplitMix64;
use omsim_core::stability::{
    assess, char_poly, explicit_filter_conditions, routh_hurwitz_quartic, spectral_stable,
    EPS_MARGIN,
};
use omsim_core::{Mat, ModelKind, PhysicalParams};
use serde::Serialize;
use std::time::Instant;

const PI: f64 = std::f64::consts::PI;

/// Validation depth.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Fast,
    Full,
}

impl Level {
    pub fn name(&self) -> &'static str {
        match self {
            Level::Fast => "fast",
            Level::Full => "full",
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

/// One validation check outcome.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    /// Primary measured scalar (0 when not applicable).
    pub measured: f64,
    /// Binding threshold the measurement was compared against.
    pub tolerance: f64,
    pub runtime_ms: f64,
    /// Human-readable specifics, including skip reasons.
    pub detail: String,
}

/// Machine-readable validation report.
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub tool_version: String,
    pub seed: u64,
    pub level: String,
    pub overall: bool,
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    /// JSON with runtime fields zeroed: byte-identical across runs with the
    /// same `(seed, level)`.
    pub fn canonical_json(&self) -> String {
        let mut clone = self.clone();
        for c in &mut clone.checks {
            c.runtime_ms = 0.0;
        }
        clone.to_json()
    }
}

struct CheckOutcome {
    measured: f64,
    tolerance: f64,
    pass: bool,
    detail: String,
}

fn run_check(
    checks: &mut Vec<CheckResult>,
    name: &str,
    f: impl FnOnce() -> CheckOutcome,
) {
    let t0 = Instant::now();
    let out = f();
    checks.push(CheckResult {
        name: name.to_string(),
        status: if out.pass { CheckStatus::Pass } else { CheckStatus::Fail },
        measured: out.measured,
        tolerance: out.tolerance,
        runtime_ms: t0.elapsed().as_secs_f64() * 1e3,
        detail: out.detail,
    });
}

fn skip_check(checks: &mut Vec<CheckResult>, name: &str, reason: &str) {
    checks.push(CheckResult {
        name: name.to_string(),
        status: CheckStatus::Skipped,
        measured: 0.0,
        tolerance: 0.0,
        runtime_ms: 0.0,
        detail: reason.to_string(),
    });
}

/// Random stable drift matrix: `A = −PᵀP/‖P‖ + K` with `K` skew-symmetric;
/// the symmetric part is negative definite, so the spectrum is strictly in
/// the left half-plane by construction.
pub fn random_stable_model(rng: &mut SplitMix64, dim: usize) -> omsim_core::LinearModel {
    let p = Mat::from_fn(dim, dim, |_, _| rng.next_standard_normal());
    let mut k = Mat::zeros(dim, dim);
    for i in 0..dim {
        for j in (i + 1)..dim {
            let v = rng.next_standard_normal();
            k[(i, j)] = v;
            k[(j, i)] = -v;
        }
    }
    let a = p.transpose().matmul(&p).scale(-1.0 / p.frobenius()).add(&k);
    let d: Vec<f64> = (0..dim).map(|_| 0.1 + 2.0 * rng.next_unit()).collect();
    omsim_core::LinearModel::from_parts(a, d)
}

/// Guarded entrywise relative error: entries below `floor_frac·max|b|`
/// compare against that floor instead of their own magnitude.
fn entrywise_rel_err(a: &Mat, b: &Mat, floor_frac: f64) -> f64 {
    let floor = floor_frac * b.max_abs();
    let mut worst = 0.0f64;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            let denom = b[(i, j)].abs().max(floor);
            if denom > 0.0 {
                worst = worst.max((a[(i, j)] - b[(i, j)]).abs() / denom);
            }
        }
    }
    worst
}

/// Draw a log-uniform filter-model parameter set around the reference one.
fn random_filter_params(rng: &mut SplitMix64) -> (PhysicalParams, f64) {
    let mut p = PhysicalParams::reference();
    let log_uniform = |rng: &mut SplitMix64, lo: f64, hi: f64| -> f64 {
        (lo.ln() + (hi.ln() - lo.ln()) * rng.next_unit()).exp()
    };
    p.cavity_decay *= log_uniform(rng, 0.05, 20.0);
    p.mech_freq *= log_uniform(rng, 0.1, 10.0);
    p.drive_power *= log_uniform(rng, 0.01, 10.0);
    p.mech_mass *= log_uniform(rng, 0.1, 10.0);
    let q = log_uniform(rng, 10.0, 1e7);
    p.mech_damping = p.mech_freq / q;
    p.temperature = log_uniform(rng, 1e-3, 10.0);
    let mag = log_uniform(rng, 0.05, 3.0);
    let sign = if rng.next_unit() < 0.5 { -1.0 } else { 1.0 };
    let delta = sign * mag * p.mech_freq;
    (p, delta)
}

fn fmt_pm(x: f64) -> String {
    format!("{x:.6}")
}

// ---------------------------------------------------------------------------
// Individual checks
// ---------------------------------------------------------------------------

fn check_lyapunov_analytic() -> CheckOutcome {
    let mut worst = 0.0f64;
    for (a, d) in [
        (0.5, vec![2.0, 4.0, 0.5, 8.0]),
        (3.0, vec![1.0, 1.0, 1.0, 1.0]),
        (0.01, vec![0.3, 7.0]),
    ] {
        let dim = d.len();
        let m = omsim_core::LinearModel::from_parts(Mat::from_diag(&vec![-a; dim]), d.clone());
        let cov = solve_lyapunov(&m).expect("analytic case must solve");
        for (i, di) in d.iter().enumerate() {
            let want = di / (2.0 * a);
            worst = worst.max((cov.v[(i, i)] - want).abs() / want);
            for j in 0..dim {
                if i != j {
                    worst = worst.max(cov.v[(i, j)].abs());
                }
            }
        }
    }
    // Decoupled two-mode example: A = diag(−1, −2), D = diag(2, 4) ⇒ V = I.
    let m = omsim_core::LinearModel::from_parts(Mat::from_diag(&[-1.0, -2.0]), vec![2.0, 4.0]);
    let cov = solve_lyapunov(&m).expect("decoupled case");
    worst = worst.max((cov.v[(0, 0)] - 1.0).abs());
    worst = worst.max((cov.v[(1, 1)] - 1.0).abs());
    CheckOutcome {
        measured: worst,
        tolerance: 1e-12,
        pass: worst <= 1e-12,
        detail: format!("max relative deviation from D/(2a): {worst:.3e}"),
    }
}

fn check_lyapunov_vs_integral(seed: u64) -> CheckOutcome {
    let mut rng = SplitMix64::new(seed ^ 0x17AB);
    let mut worst = 0.0f64;
    let mut slowest = 0.0f64;
    for _ in 0..100 {
        let m = random_stable_model(&mut rng, 4);
        let direct = solve_lyapunov(&m).expect("random stable model must solve");
        let integ = integral_oracle(&m, 1e9, 1e-8).expect("integral oracle must converge");
        let err = entrywise_rel_err(&integ.v, &direct.v, 1e-3);
        if err > worst {
            worst = err;
        }
        let spectral = spectral_stable(&m.a).unwrap();
        slowest = slowest.max(-1.0 / spectral.max_real_eig);
    }
    CheckOutcome {
        measured: worst,
        tolerance: 1e-6,
        pass: worst <= 1e-6,
        detail: format!(
            "100 seeded random stable 4x4 models, rtol 1e-8; worst entrywise relative error {worst:.3e} (denominator floored at 1e-3 max|V|); slowest relaxation time {slowest:.2}"
        ),
    }
}

fn check_tmsv() -> CheckOutcome {
    let mut worst = 0.0f64;
    for k in 0..=30 {
        let r = 0.1 * k as f64;
        let c = (2.0 * r).cosh() / 2.0;
        let s = (2.0 * r).sinh() / 2.0;
        let v = Mat::from_rows(
            4,
            4,
            &[
                c, 0.0, s, 0.0,
                0.0, c, 0.0, -s,
                s, 0.0, c, 0.0,
                0.0, -s, 0.0, c,
            ],
        );
        let rep = log_negativity(&v).expect("TMSV block is physical");
        worst = worst.max((rep.e_n - 2.0 * r).abs());
        if r == 0.0 && rep.e_n != 0.0 {
            worst = f64::INFINITY;
        }
    }
    CheckOutcome {
        measured: worst,
        tolerance: 1e-10,
        pass: worst <= 1e-10,
        detail: format!("max |E_N - 2r| over r in 0..3 step 0.1: {worst:.3e}"),
    }
}

fn check_stability_methods(seed: u64) -> CheckOutcome {
    let mut rng = SplitMix64::new(seed ^ 0x57AB);
    let mut disagreements = 0u64;
    let mut inside_band = 0u64;
    for _ in 0..10_000 {
        let (p, delta) = random_filter_params(&mut rng);
        let Ok(model) = build_filter(&p, delta) else { continue };
        let Ok(report) = assess(&model, Some(&p)) else { continue };
        let min_margin = report
            .margins
            .iter()
            .fold(f64::INFINITY, |m, (_, v)| m.min(v.abs()));
        if min_margin < EPS_MARGIN {
            inside_band += 1;
            continue;
        }
        // Cross-check the quartic route against the explicit conditions on
        // top of the built-in agreement flag.
        let coeffs = char_poly(&model.a.scale(1.0 / p.mech_freq));
        let (_, rh_ok) =
            routh_hurwitz_quartic(&[coeffs[0], coeffs[1], coeffs[2], coeffs[3], coeffs[4]]);
        let explicit = explicit_filter_conditions(&p, delta).unwrap();
        let explicit_ok = explicit[0] > 0.0 && explicit[1] > 0.0;
        if !report.method_agreement || rh_ok != report.stable || explicit_ok != report.stable {
            disagreements += 1;
        }
    }
    CheckOutcome {
        measured: disagreements as f64,
        tolerance: 0.0,
        pass: disagreements == 0,
        detail: format!(
            "10000 log-uniform parameter draws; {disagreements} disagreements outside the {EPS_MARGIN:.0e} margin band ({inside_band} draws inside the band)"
        ),
    }
}

fn check_reference_stable() -> CheckOutcome {
    let p = PhysicalParams::reference();
    let mut worst = f64::NEG_INFINITY;
    let mut all_stable = true;
    for frac in [0.5, 1.0] {
        let m = build_filter(&p, frac * p.mech_freq).unwrap();
        let r = assess(&m, Some(&p)).unwrap();
        all_stable &= r.stable && r.method_agreement;
        worst = worst.max(r.max_real_eig);
        let m = build_original(&p, frac * p.mech_freq).unwrap();
        let r = assess(&m, None).unwrap();
        all_stable &= r.stable;
        worst = worst.max(r.max_real_eig);
    }
    CheckOutcome {
        measured: worst,
        tolerance: 0.0,
        pass: all_stable && worst < 0.0,
        detail: format!(
            "reference configuration at delta/omega_m in {{0.5, 1}}: largest Re eigenvalue {worst:.3e} rad/s"
        ),
    }
}

fn check_filter_inverse_identity(seed: u64) -> CheckOutcome {
    let mut rng = SplitMix64::new(seed ^ 0xF1F0);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (p, delta) = random_filter_params(&mut rng);
        let f = build_filter(&p, delta).unwrap();
        let i = build_inverse_filter(&p, delta).unwrap();
        let mut diff = f.a.sub(&i.a).max_abs();
        for (df, di) in f.d.iter().zip(i.d.iter()) {
            diff = diff.max((df - di).abs());
        }
        worst = worst.max(diff);
    }
    CheckOutcome {
        measured: worst,
        tolerance: 0.0,
        pass: worst == 0.0,
        detail: format!("100 draws; max |A_f - A_i| and |D_f - D_i|: {worst:e} (must be exactly 0)"),
    }
}

fn check_array_n1_reduction(seed: u64) -> CheckOutcome {
    let mut rng = SplitMix64::new(seed ^ 0xA881);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (mut p, delta) = random_filter_params(&mut rng);
        p.laser_detuning = delta;
        p.cavity_count = 1;
        let arr = build_array(&p, 1, 0.0, 0.0).unwrap();
        let fil = build_filter(&p, delta).unwrap();
        let scale = fil.a.max_abs();
        let mut diff = arr.a.sub(&fil.a).max_abs() / scale;
        for (da, df) in arr.d.iter().zip(fil.d.iter()) {
            diff = diff.max((da - df).abs() / df.abs().max(1e-300));
        }
        worst = worst.max(diff);
    }
    CheckOutcome {
        measured: worst,
        tolerance: 1e-12,
        pass: worst <= 1e-12,
        detail: format!("100 draws; worst relative entry difference {worst:.3e}"),
    }
}

fn check_stochastic(seed: u64) -> CheckOutcome {
    let p = PhysicalParams::reference();
    let m = build_filter(&p, p.mech_freq).unwrap();
    let direct = solve_lyapunov(&m).unwrap();
    let anorm = m.a.frobenius();
    let spectral = spectral_stable(&m.a).unwrap();
    let dt = 3.0e-4 / anorm;
    let horizon = 20.0 / (-spectral.max_real_eig);
    let sto = stochastic_oracle(&m, seed, 10_000, dt, horizon).expect("stochastic oracle");
    let vmax = direct.v.max_abs();
    // Dominant entries (≥ 1% of max|V|) must agree within 5% plus the
    // estimator's own 3σ Monte Carlo allowance — near-cutoff entries carry
    // several percent of sampling noise at this ensemble size.
    let mut worst = 0.0f64;
    let mut pass = true;
    for i in 0..4 {
        for j in 0..4 {
            if direct.v[(i, j)].abs() > 0.01 * vmax {
                let diff = (sto.cov.v[(i, j)] - direct.v[(i, j)]).abs();
                let allowance = 0.05 * direct.v[(i, j)].abs() + 3.0 * sto.stderr[(i, j)];
                if diff > allowance {
                    pass = false;
                }
                worst = worst.max(diff / direct.v[(i, j)].abs());
            }
        }
    }
    CheckOutcome {
        measured: worst,
        tolerance: 0.05,
        pass,
        detail: format!(
            "ensemble 10000, dt·|A| = 3e-4, horizon 20 relaxation times; worst relative deviation on dominant entries {worst:.4} (budget 5% + 3σ per entry)"
        ),
    }
}

/// Shared grid for the detuning-sweep checks: |Δ|/ω_m ∈ [0.05, 2], 201 pts.
fn detuning_config(model: ModelKind, gamma_m: f64) -> ScenarioConfig {
    let mut p = PhysicalParams::reference();
    p.mech_damping = gamma_m;
    let om = p.mech_freq;
    ScenarioConfig {
        model,
        physical: p,
        sweep: SweepSpec {
            axis: AxisKind::Delta,
            start: 0.05 * om,
            stop: 2.0 * om,
            points: 201,
            scale: Scale::Linear,
        },
        pairs: vec![(0, 1)],
        output: None,
        seed: 1,
    }
}

fn en_of(row: &SweepRow) -> f64 {
    row.measures[0].as_ref().map(|m| m.e_n).unwrap_or(0.0)
}

fn argmax_en(rows: &[SweepRow]) -> (f64, f64) {
    let om = PhysicalParams::reference().mech_freq;
    let mut best = (0.0, f64::NEG_INFINITY);
    for r in rows {
        let e = en_of(r);
        if e > best.1 {
            best = (r.axis_value / om, e);
        }
    }
    best
}

fn check_peak_location() -> CheckOutcome {
    let gm = 200.0 * PI;
    let orig = run_sweep(&detuning_config(ModelKind::Original, gm), 0);
    let filt = run_sweep(&detuning_config(ModelKind::Filter, gm), 0);
    let (x_o, e_o) = argmax_en(&orig);
    let (x_f, e_f) = argmax_en(&filt);
    let in_band = |x: f64| (0.7..=1.2).contains(&x);
    let pass = in_band(x_o) && in_band(x_f);
    CheckOutcome {
        measured: x_f,
        tolerance: 1.2,
        pass,
        detail: format!(
            "argmax |delta|/omega_m over [0.05, 2]: original {x_o:.4} (E_N {e_o:.4}), filter {x_f:.4} (E_N {e_f:.4}); required band [0.7, 1.2]"
        ),
    }
}

fn check_damping_robustness() -> CheckOutcome {
    let mut maxima = std::collections::BTreeMap::new();
    for (tag, model) in [("original", ModelKind::Original), ("filter", ModelKind::Filter)] {
        for (gtag, g) in [("g0", 0.0), ("g2000pi", 2000.0 * PI)] {
            let rows = run_sweep(&detuning_config(model.clone(), g), 0);
            let (_, e) = argmax_en(&rows);
            maxima.insert(format!("{tag}_{gtag}"), e);
        }
    }
    let s_orig = maxima["original_g0"] - maxima["original_g2000pi"];
    let s_filt = maxima["filter_g0"] - maxima["filter_g2000pi"];
    let ratio = s_orig / s_filt;
    let pass = (1.5..=2.5).contains(&ratio);
    CheckOutcome {
        measured: ratio,
        tolerance: 2.5,
        pass,
        detail: format!(
            "sensitivity S = E_N^max(gamma=0) - E_N^max(gamma=2000pi): original {:.6}, filter {:.6}, ratio {ratio:.4}; required band [1.5, 2.5]",
            s_orig, s_filt
        ),
    }
}

fn temperature_rows(model: ModelKind) -> Vec<SweepRow> {
    let mut p = PhysicalParams::reference();
    p.mech_damping = 200.0 * PI;
    p.laser_detuning = 0.5 * p.mech_freq;
    let cfg = ScenarioConfig {
        model,
        physical: p,
        sweep: SweepSpec {
            axis: AxisKind::Temperature,
            start: 0.1,
            stop: 20.0,
            points: 201,
            scale: Scale::Linear,
        },
        pairs: vec![(0, 1)],
        output: None,
        seed: 1,
    };
    run_sweep(&cfg, 0)
}

fn persistence_temperature(rows: &[SweepRow]) -> f64 {
    for r in rows {
        if en_of(r) < 1e-3 {
            return r.axis_value;
        }
    }
    f64::INFINITY
}

fn check_temperature_persistence() -> CheckOutcome {
    let t_orig = persistence_temperature(&temperature_rows(ModelKind::Original));
    let t_filt = persistence_temperature(&temperature_rows(ModelKind::Filter));
    let ratio = t_filt / t_orig;
    let pass = (7.0..=13.0).contains(&t_filt) && (1.6..=2.4).contains(&ratio);
    CheckOutcome {
        measured: t_filt,
        tolerance: 13.0,
        pass,
        detail: format!(
            "persistence temperature (first grid T with E_N < 1e-3): filter {t_filt:.3} K (band [7, 13]), original {t_orig:.3} K, ratio {ratio:.3} (band [1.6, 2.4])"
        ),
    }
}

fn check_filter_inverse_curves() -> CheckOutcome {
    let gm = 200.0 * PI;
    let filt = run_sweep(&detuning_config(ModelKind::Filter, gm), 0);
    let inv = run_sweep(&detuning_config(ModelKind::InverseFilter, gm), 0);
    let mut worst = 0.0f64;
    for (a, b) in filt.iter().zip(inv.iter()) {
        worst = worst.max((en_of(a) - en_of(b)).abs());
        if a.stable != b.stable {
            worst = f64::INFINITY;
        }
    }
    CheckOutcome {
        measured: worst,
        tolerance: 0.0,
        pass: worst == 0.0,
        detail: format!("pointwise |E_N difference| across the detuning grid: {worst:e}"),
    }
}

/// Evaluate every preset sweep once; shared by the Simon and physicality
/// checks (and by the acceptance suite).
pub fn all_preset_rows() -> Vec<(String, ScenarioConfig, Vec<SweepRow>)> {
    let mut out = Vec::new();
    for preset in presets::PRESETS {
        for (stem, cfg) in presets::expand(preset.name).unwrap() {
            let rows = run_sweep(&cfg, 0);
            out.push((stem, cfg, rows));
        }
    }
    out
}

fn check_simon_equivalence(all: &[(String, ScenarioConfig, Vec<SweepRow>)]) -> CheckOutcome {
    let mut violations = 0u64;
    let mut points = 0u64;
    for (_, _, rows) in all {
        for row in rows {
            for m in row.measures.iter().flatten() {
                points += 1;
                // Guard band: skip points numerically at the threshold.
                if (m.xi - 0.5).abs() < 1e-10 {
                    continue;
                }
                let by_en = m.e_n > 0.0;
                if by_en != m.simon_entangled || by_en != (m.xi < 0.5) {
                    violations += 1;
                }
            }
        }
    }
    CheckOutcome {
        measured: violations as f64,
        tolerance: 0.0,
        pass: violations == 0,
        detail: format!(
            "three-way equivalence (E_N > 0 <=> Xi < 1/2 <=> Simon) over {points} measured sweep points: {violations} violations"
        ),
    }
}

fn check_physicality(all: &[(String, ScenarioConfig, Vec<SweepRow>)]) -> CheckOutcome {
    let mut min_nu = f64::INFINITY;
    let mut errors = 0u64;
    for (_, _, rows) in all {
        for row in rows {
            if let Some(nu) = row.min_symplectic {
                min_nu = min_nu.min(nu);
            }
            if matches!(row.status, RowStatus::Error(_)) {
                errors += 1;
            }
        }
    }
    let bound = 0.5 - 1e-9;
    CheckOutcome {
        measured: min_nu,
        tolerance: bound,
        pass: min_nu >= bound && errors == 0,
        detail: format!(
            "smallest symplectic eigenvalue across every preset steady state: {min_nu:.12} (bound {bound}); {errors} solver errors"
        ),
    }
}

fn check_array_optimum() -> CheckOutcome {
    let p = PhysicalParams::reference();
    let om = p.mech_freq;
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for iw in 0..61 {
        let w = 1.2 * om * iw as f64 / 60.0;
        for ij in 0..61 {
            let j = 1.2 * om * ij as f64 / 60.0;
            let mut pj = p.clone();
            pj.cavity_count = 2;
            pj.hopping = j;
            pj.array_detuning = w;
            let Ok(model) = build_array(&pj, 2, j, w) else { continue };
            let Ok(spectral) = spectral_stable(&model.a) else { continue };
            if !spectral.stable {
                continue;
            }
            let Ok(cov) = solve_lyapunov(&model) else { continue };
            let Ok(rep) = omsim_core::entanglement::measure_pair(&cov, 0, 1) else { continue };
            if rep.e_n > best.0 {
                best = (rep.e_n, w / om, j / om);
            }
        }
    }
    let (e, w, j) = best;
    let pass = (w - 0.6).abs() <= 0.1 && (j - 0.7).abs() <= 0.1 && (e - 0.045).abs() <= 0.015;
    CheckOutcome {
        measured: e,
        tolerance: 0.015,
        pass,
        detail: format!(
            "61x61 grid over (varpi, J) in [0, 1.2 omega_m]^2 at T = 0.4 K: max remote E_N {e:.4} at varpi = {} omega_m, J = {} omega_m; required 0.045 +/- 0.015 within 0.1 of (0.6, 0.7)",
            fmt_pm(w),
            fmt_pm(j)
        ),
    }
}

/// Run the validation suite.
pub fn run_validation(seed: u64, level: Level) -> ValidationReport {
    let mut checks = Vec::new();

    run_check(&mut checks, "01_lyapunov_analytic", check_lyapunov_analytic);
    run_check(&mut checks, "02_lyapunov_vs_integral_random", || {
        check_lyapunov_vs_integral(seed)
    });
    run_check(&mut checks, "03_tmsv_log_negativity", check_tmsv);
    run_check(&mut checks, "04_stability_methods_agree", || {
        check_stability_methods(seed)
    });
    run_check(&mut checks, "05_reference_configuration_stable", check_reference_stable);
    run_check(&mut checks, "06_filter_inverse_identity", || {
        check_filter_inverse_identity(seed)
    });
    run_check(&mut checks, "07_array_n1_reduction", || check_array_n1_reduction(seed));

    match level {
        Level::Fast => {
            for name in [
                "08_stochastic_vs_lyapunov",
                "09_peak_location_band",
                "10_damping_robustness_ratio",
                "11_temperature_persistence",
                "12_filter_inverse_curves_coincide",
                "13_simon_negativity_equivalence",
                "14_physicality_across_sweeps",
                "15_array_optimum",
            ] {
                skip_check(&mut checks, name, "full level only");
            }
        }
        Level::Full => {
            run_check(&mut checks, "08_stochastic_vs_lyapunov", || check_stochastic(seed));
            run_check(&mut checks, "09_peak_location_band", check_peak_location);
            run_check(&mut checks, "10_damping_robustness_ratio", check_damping_robustness);
            run_check(&mut checks, "11_temperature_persistence", check_temperature_persistence);
            run_check(&mut checks, "12_filter_inverse_curves_coincide", check_filter_inverse_curves);
            let all = all_preset_rows();
            run_check(&mut checks, "13_simon_negativity_equivalence", || {
                check_simon_equivalence(&all)
            });
            run_check(&mut checks, "14_physicality_across_sweeps", || check_physicality(&all));
            run_check(&mut checks, "15_array_optimum", check_array_optimum);
        }
    }

    let overall = checks
        .iter()
        .filter(|c| c.status != CheckStatus::Skipped)
        .all(|c| c.status == CheckStatus::Pass);
    ValidationReport {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed,
        level: level.name().to_string(),
        overall,
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_report_is_deterministic_excluding_runtimes() {
        let a = run_validation(3, Level::Fast);
        let b = run_validation(3, Level::Fast);
        assert_eq!(a.canonical_json(), b.canonical_json());
        let c = run_validation(4, Level::Fast);
        // Same verdicts, but measured randomness differs.
        assert_eq!(a.overall, c.overall);
    }

    #[test]
    fn fast_level_passes_and_marks_skips() {
        let report = run_validation(1, Level::Fast);
        for c in &report.checks {
            match c.status {
                CheckStatus::Skipped => assert_eq!(c.detail, "full level only"),
                _ => assert_eq!(c.status, CheckStatus::Pass, "{}: {}", c.name, c.detail),
            }
        }
        assert!(report.overall);
        assert_eq!(report.checks.len(), 15);
    }
}
