//! Asymptotic stability of a linear model.
//!
//! Two independent routes are provided and cross-checked:
//!
//! * the spectral test — all eigenvalues of the drift matrix strictly in
//!   the open left half-plane (the definition of stability here; a
//!   marginal spectrum counts as unstable, which is also what Lyapunov
//!   solvability requires), and
//! * Routh–Hurwitz sign conditions on the characteristic quartic for the
//!   4×4 single-cavity models, plus the two explicit closed-form margins
//!   for the filter model.
//!
//! Margins are evaluated on frequency-normalized quantities (everything
//! divided by ω_m) so that the agreement band [`EPS_MARGIN`] is meaningful
//! across parameter scales.

use crate::linalg::{eigenvalues, Mat};
use crate::model::{LinearModel, ModelKind};
use crate::params::{cavity_mean_field, derive_params, effective_coupling, PhysicalParams};
use crate::{math, Result};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

/// Agreement band for normalized stability margins: methods are only
/// required to agree when every margin is at least this far from zero.
pub const EPS_MARGIN: f64 = 1e-6;

/// Outcome of the stability assessment of one model.
#[derive(Clone, Debug)]
pub struct StabilityReport {
    /// Spectral verdict: max Re λ < 0 strictly.
    pub stable: bool,
    /// Largest real part of the drift spectrum, rad/s.
    pub max_real_eig: f64,
    /// Eigenvalues of the drift matrix, rad/s.
    pub eigenvalues: Vec<Complex64>,
    /// Named normalized margins (each must be > 0 for the algebraic tests
    /// to declare stability). Empty when no algebraic test applies.
    pub margins: Vec<(String, f64)>,
    /// Whether the algebraic tests agree with the spectral verdict (true
    /// when only the spectral test ran, and inside the [`EPS_MARGIN`] band).
    pub method_agreement: bool,
}

/// Monic characteristic polynomial coefficients `[C0=1, C1, …, C_n]` of a
/// square matrix, by the Faddeev–LeVerrier recurrence.
pub fn char_poly(a: &Mat) -> Vec<f64> {
    assert!(a.is_square());
    let n = a.nrows();
    let mut coeffs = vec![1.0];
    let mut m = Mat::zeros(n, n);
    for k in 1..=n {
        // M_k = A·(M_{k−1} + c_{k−1}·I)
        let mut shifted = m.clone();
        let ck_prev = *coeffs.last().unwrap();
        for i in 0..n {
            shifted[(i, i)] += ck_prev;
        }
        m = a.matmul(&shifted);
        let trace: f64 = (0..n).map(|i| m[(i, i)]).sum();
        coeffs.push(-trace / k as f64);
    }
    coeffs
}

/// The five Routh–Hurwitz margins of a quartic `C0λ⁴ + … + C4` and the
/// joint positivity verdict. `C0` must be positive (normalize first).
pub fn routh_hurwitz_quartic(c: &[f64; 5]) -> ([(&'static str, f64); 5], bool) {
    debug_assert!(c[0] > 0.0, "normalize the quartic so C0 > 0");
    let h2 = c[1] * c[2] - c[0] * c[3];
    let h3 = h2 * c[3] - c[1] * c[1] * c[4];
    let margins = [
        ("c0", c[0]),
        ("c1", c[1]),
        ("c1c2_minus_c0c3", h2),
        ("h3", h3),
        ("c4", c[4]),
    ];
    let stable = margins.iter().all(|&(_, v)| v > 0.0);
    (margins, stable)
}

/// The two nontrivial closed-form stability margins of the filter model,
/// evaluated in ω_m-normalized units. Both must be positive for stability;
/// they are the constant-coefficient and the oscillatory-branch conditions
/// of the characteristic quartic.
pub fn explicit_filter_conditions(p: &PhysicalParams, delta: f64) -> Result<[f64; 2]> {
    let d = derive_params(p)?;
    let mf = cavity_mean_field(
        d.drive_amplitude,
        p.cavity_decay,
        delta,
        d.vacuum_coupling,
        p.mech_freq,
    );
    let om = p.mech_freq;
    let g = effective_coupling(mf.alphas[0].re, d.vacuum_coupling) / om;
    let gm = p.mech_damping / om;
    let k = p.cavity_decay / om;
    let dl = delta / om;

    let first = (1.0 + gm * gm / 16.0) * (dl * dl + k * k) - g * g * dl;
    let bracket = math::powi(dl, 4)
        + dl * dl * (gm * gm / 8.0 + gm * k + 2.0 * k * k - 2.0)
        + math::powi(16.0 + (gm + 4.0 * k) * (gm + 4.0 * k), 2) / 256.0;
    let second = gm * k * bracket + g * g * dl * (gm / 2.0 + 2.0 * k) * (gm / 2.0 + 2.0 * k);
    Ok([first, second])
}

/// Spectral stability of an arbitrary real square matrix.
pub fn spectral_stable(a: &Mat) -> Result<StabilityReport> {
    let eigs = eigenvalues(a)?;
    let max_real_eig = eigs.iter().fold(f64::NEG_INFINITY, |m, z| m.max(z.re));
    Ok(StabilityReport {
        stable: max_real_eig < 0.0,
        max_real_eig,
        eigenvalues: eigs,
        margins: Vec::new(),
        method_agreement: true,
    })
}

/// Full assessment of a model: spectral test always; Routh–Hurwitz margins
/// for 4×4 models; the explicit filter conditions for filter-kind models.
pub fn assess(model: &LinearModel, p: Option<&PhysicalParams>) -> Result<StabilityReport> {
    let mut report = spectral_stable(&model.a)?;
    if model.dim() != 4 {
        return Ok(report);
    }

    let scaled = model.a.scale(1.0 / model.freq_scale);
    let coeffs = char_poly(&scaled);
    let c: [f64; 5] = [coeffs[0], coeffs[1], coeffs[2], coeffs[3], coeffs[4]];
    let (margins, rh_stable) = routh_hurwitz_quartic(&c);
    for (name, v) in margins {
        report.margins.push((String::from(name), v));
    }

    if let (Some(p), ModelKind::Filter | ModelKind::InverseFilter) = (p, &model.kind) {
        let delta = model.mean_field.detunings[0];
        let [first, second] = explicit_filter_conditions(p, delta)?;
        report.margins.push((String::from("filter_static"), first));
        report.margins.push((String::from("filter_oscillatory"), second));
    }

    let min_margin = report
        .margins
        .iter()
        .fold(f64::INFINITY, |m, (_, v)| m.min(math::abs(*v)));
    let algebraic_stable = rh_stable
        && report.margins.iter().all(|&(_, v)| v > 0.0);
    report.method_agreement = algebraic_stable == report.stable || min_margin < EPS_MARGIN;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_filter, build_original};
    use crate::rng::SplitMix64;

    #[test]
    fn char_poly_of_zero_matrix() {
        let c = char_poly(&Mat::zeros(4, 4));
        assert_eq!(c, vec![1.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn char_poly_of_diagonal_matrix() {
        // (λ+1)(λ+2)(λ+3)(λ+4) = λ⁴ + 10λ³ + 35λ² + 50λ + 24
        let c = char_poly(&Mat::from_diag(&[-1.0, -2.0, -3.0, -4.0]));
        let expect = [1.0, 10.0, 35.0, 50.0, 24.0];
        for (a, b) in c.iter().zip(expect.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn char_poly_matches_determinant_identity_for_filter_model() {
        // det(A − λI) = [(γ_m/4+λ)² + ω²][(κ+λ)² + Δ²] − ωG²Δ expanded:
        // C1 = γ/2 + 2κ, C2 = ω² + γ²/16 + γκ + κ² + Δ²,
        // C3 = (γ/2)(κ²+Δ²) + 2κ(ω² + γ²/16),
        // C4 = (ω² + γ²/16)(κ²+Δ²) − ωG²Δ.
        let p = PhysicalParams::reference();
        let m = build_filter(&p, 0.8 * p.mech_freq).unwrap();
        let scaled = m.a.scale(1.0 / p.mech_freq);
        let c = char_poly(&scaled);
        let gm = p.mech_damping / p.mech_freq;
        let k = p.cavity_decay / p.mech_freq;
        let dl = 0.8;
        let g = m.a[(1, 2)] / p.mech_freq;
        let c1 = gm / 2.0 + 2.0 * k;
        let c2 = 1.0 + gm * gm / 16.0 + gm * k + k * k + dl * dl;
        let c3 = gm / 2.0 * (k * k + dl * dl) + 2.0 * k * (1.0 + gm * gm / 16.0);
        let c4 = (1.0 + gm * gm / 16.0) * (k * k + dl * dl) - g * g * dl;
        for (got, want) in c[1..].iter().zip([c1, c2, c3, c4].iter()) {
            assert!(
                (got - want).abs() < 1e-10 * want.abs().max(1.0),
                "got {got}, want {want}"
            );
        }
    }

    #[test]
    fn hurwitz_quartic_verdicts() {
        // (λ+1)⁴ = λ⁴ + 4λ³ + 6λ² + 4λ + 1: stable.
        let (m, ok) = routh_hurwitz_quartic(&[1.0, 4.0, 6.0, 4.0, 1.0]);
        assert!(ok);
        assert!(m.iter().all(|&(_, v)| v > 0.0));
        // (λ−1)(λ+1)³ = λ⁴ + 2λ³ − 2λ − 1: C4 < 0, unstable.
        let (m, ok) = routh_hurwitz_quartic(&[1.0, 2.0, 0.0, -2.0, -1.0]);
        assert!(!ok);
        assert!(m[4].1 < 0.0);
    }

    #[test]
    fn explicit_conditions_reduce_correctly() {
        let p = PhysicalParams::reference();
        // Undriven: first margin is (1 + γ²/16)(Δ̃² + κ̃²) > 0.
        let mut p0 = p.clone();
        p0.drive_power = 0.0;
        let [first, _] = explicit_filter_conditions(&p0, 1.3 * p.mech_freq).unwrap();
        let gm = p.mech_damping / p.mech_freq;
        let k = p.cavity_decay / p.mech_freq;
        let want = (1.0 + gm * gm / 16.0) * (1.3f64 * 1.3 + k * k);
        assert!((first - want).abs() < 1e-12 * want);

        // Δ = 0: second margin collapses to γκ[16 + (γ+4κ)²]²/256.
        let [f0, s0] = explicit_filter_conditions(&p, 0.0).unwrap();
        assert!(f0 > 0.0);
        let want = gm * k * (16.0 + (gm + 4.0 * k) * (gm + 4.0 * k)).powi(2) / 256.0;
        assert!((s0 - want).abs() < 1e-12 * want);
    }

    #[test]
    fn explicit_conditions_equal_rh_combination() {
        // The oscillatory margin is algebraically (C1C2−C0C3)C3 − C1²C4 and
        // the static margin is C4; verify numerically on assorted points.
        let p = PhysicalParams::reference();
        for k in 0..40 {
            let delta = (-2.0 + 0.1 * k as f64) * p.mech_freq;
            if delta == 0.0 {
                continue;
            }
            let m = build_filter(&p, delta).unwrap();
            let c = char_poly(&m.a.scale(1.0 / p.mech_freq));
            let h2 = c[1] * c[2] - c[0] * c[3];
            let h3 = h2 * c[3] - c[1] * c[1] * c[4];
            let [first, second] = explicit_filter_conditions(&p, delta).unwrap();
            assert!((first - c[4]).abs() < 1e-9 * first.abs().max(1.0));
            assert!((second - h3).abs() < 1e-9 * second.abs().max(1.0));
        }
    }

    #[test]
    fn spectral_trivial_cases() {
        let r = spectral_stable(&Mat::from_diag(&[-1.0, -1.0, -1.0])).unwrap();
        assert!(r.stable);
        assert!((r.max_real_eig + 1.0).abs() < 1e-14);

        // A pure rotation is marginal and counts as NOT stable.
        let w = 2.0e7;
        let rot = Mat::from_rows(2, 2, &[0.0, w, -w, 0.0]);
        let r = spectral_stable(&rot).unwrap();
        assert_eq!(r.max_real_eig, 0.0);
        assert!(!r.stable);
    }

    #[test]
    fn random_stable_constructions_are_stable() {
        // A = −PᵀP/‖P‖ + K with K skew-symmetric has its numerical range in
        // the open left half-plane.
        let mut rng = SplitMix64::new(0x5AB1E);
        for _ in 0..500 {
            let n = 4;
            let p = Mat::from_fn(n, n, |_, _| rng.next_standard_normal());
            let mut k = Mat::zeros(n, n);
            for i in 0..n {
                for j in (i + 1)..n {
                    let v = rng.next_standard_normal();
                    k[(i, j)] = v;
                    k[(j, i)] = -v;
                }
            }
            let a = p.transpose().matmul(&p).scale(-1.0 / p.frobenius()).add(&k);
            let r = spectral_stable(&a).unwrap();
            assert!(r.stable, "construction guarantees stability");
        }
    }

    #[test]
    fn assessment_agrees_on_reference_model() {
        let p = PhysicalParams::reference();
        let m = build_filter(&p, p.mech_freq).unwrap();
        let r = assess(&m, Some(&p)).unwrap();
        assert!(r.stable, "reference configuration must be stable");
        assert!(r.method_agreement);
        assert_eq!(r.margins.len(), 7);
        assert!(r.margins.iter().all(|&(_, v)| v > 0.0));

        let o = build_original(&p, p.mech_freq).unwrap();
        let r = assess(&o, Some(&p)).unwrap();
        assert!(r.stable);
        assert!(r.method_agreement);
        assert_eq!(r.margins.len(), 5, "explicit margins are filter-only");
    }

    #[test]
    fn assessment_detects_instability_band() {
        // The reference configuration has a known unstable window around
        // Δ ≈ 0.25 ω_m.
        let p = PhysicalParams::reference();
        let m = build_filter(&p, 0.25 * p.mech_freq).unwrap();
        let r = assess(&m, Some(&p)).unwrap();
        assert!(!r.stable);
        assert!(r.method_agreement);
    }
}
