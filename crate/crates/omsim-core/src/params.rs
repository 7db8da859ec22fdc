//! Physical parameters and derived scalar quantities.
//!
//! Raw experimental knobs live in [`PhysicalParams`] (SI units throughout,
//! all frequencies angular in rad/s). Everything the dynamics needs —
//! vacuum coupling, drive amplitude, thermal occupation, classical mean
//! fields — is computed here as pure functions of those knobs.

use crate::math;
use crate::{CoreError, Result};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

/// Fundamental constants, CODATA-2018. Never user-modified.
#[derive(Clone, Copy, Debug)]
pub struct PhysicalConstants {
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Boltzmann constant, J/K.
    pub k_b: f64,
    /// Speed of light, m/s.
    pub c: f64,
}

pub const CONSTANTS: PhysicalConstants = PhysicalConstants {
    hbar: 1.054_571_817e-34,
    k_b: 1.380_649e-23,
    c: 299_792_458.0,
};

/// Raw experimental knobs.
///
/// The reference set (see [`PhysicalParams::reference`]) describes a
/// millimetre Fabry–Pérot cavity with an oscillating end mirror driven by a
/// 810 nm laser. A quality factor `ω_m/γ_m` below [`Q_VALIDITY_FLOOR`] is
/// outside the weak-coupling regime the linearized treatment assumes;
/// [`PhysicalParams::weak_coupling_warning`] flags it.
#[derive(Clone, Debug, PartialEq)]
pub struct PhysicalParams {
    /// Cavity length L, m.
    pub cavity_length: f64,
    /// Drive laser wavelength λ, m.
    pub drive_wavelength: f64,
    /// Drive laser input power P, W.
    pub drive_power: f64,
    /// Cavity amplitude decay rate κ, rad/s.
    pub cavity_decay: f64,
    /// Mechanical resonance frequency ω_m, rad/s.
    pub mech_freq: f64,
    /// Effective mirror mass m, kg.
    pub mech_mass: f64,
    /// Mirror bath temperature T, K.
    pub temperature: f64,
    /// Mechanical damping rate γ_m, rad/s.
    pub mech_damping: f64,
    /// Laser detuning from cavity resonance Δ₀, rad/s.
    pub laser_detuning: f64,
    /// Number of cavities in the array (1 = single cavity).
    pub cavity_count: usize,
    /// Nearest-neighbour hopping rate J, rad/s (arrays only).
    pub hopping: f64,
    /// Effective detuning ϖ of cavities 2..N, rad/s (arrays only).
    pub array_detuning: f64,
}

/// Below this quality factor the weak-coupling assumption is shaky.
pub const Q_VALIDITY_FLOOR: f64 = 1e3;

impl PhysicalParams {
    /// Reference experimental configuration: L = 1 mm, λ = 810 nm,
    /// P = 50 mW, κ = 8.8π×10⁶ rad/s, ω_m = 20π×10⁶ rad/s, m = 50 ng,
    /// T = 400 mK, γ_m = 200π rad/s, resonant drive (Δ₀ = 0).
    pub fn reference() -> Self {
        PhysicalParams {
            cavity_length: 1e-3,
            drive_wavelength: 810e-9,
            drive_power: 50e-3,
            cavity_decay: 8.8e6 * core::f64::consts::PI,
            mech_freq: 20e6 * core::f64::consts::PI,
            mech_mass: 50e-12,
            temperature: 0.4,
            mech_damping: 200.0 * core::f64::consts::PI,
            laser_detuning: 0.0,
            cavity_count: 1,
            hopping: 0.0,
            array_detuning: 0.0,
        }
    }

    /// Check all domain invariants, naming the offending field.
    ///
    /// `drive_power` may be zero (undriven cavity); the remaining scale
    /// parameters must be strictly positive.
    pub fn validate(&self) -> Result<()> {
        fn strictly_positive(field: &'static str, v: f64) -> Result<()> {
            if !v.is_finite() || v <= 0.0 {
                return Err(CoreError::InvalidParams {
                    field,
                    reason: format!("must be strictly positive and finite, got {v}"),
                });
            }
            Ok(())
        }
        fn non_negative(field: &'static str, v: f64) -> Result<()> {
            if !v.is_finite() || v < 0.0 {
                return Err(CoreError::InvalidParams {
                    field,
                    reason: format!("must be non-negative and finite, got {v}"),
                });
            }
            Ok(())
        }
        strictly_positive("cavity_length", self.cavity_length)?;
        strictly_positive("drive_wavelength", self.drive_wavelength)?;
        strictly_positive("cavity_decay", self.cavity_decay)?;
        strictly_positive("mech_freq", self.mech_freq)?;
        strictly_positive("mech_mass", self.mech_mass)?;
        non_negative("drive_power", self.drive_power)?;
        non_negative("temperature", self.temperature)?;
        non_negative("mech_damping", self.mech_damping)?;
        if !self.laser_detuning.is_finite() {
            return Err(CoreError::InvalidParams {
                field: "laser_detuning",
                reason: String::from("must be finite"),
            });
        }
        if !self.hopping.is_finite() || !self.array_detuning.is_finite() {
            return Err(CoreError::InvalidParams {
                field: "hopping/array_detuning",
                reason: String::from("must be finite"),
            });
        }
        if self.cavity_count < 1 {
            return Err(CoreError::InvalidParams {
                field: "cavity_count",
                reason: String::from("must be at least 1"),
            });
        }
        if self.mech_damping > 0.0 && self.mech_freq / self.mech_damping <= 1.0 {
            return Err(CoreError::InvalidParams {
                field: "mech_damping",
                reason: format!(
                    "quality factor {} must exceed 1",
                    self.mech_freq / self.mech_damping
                ),
            });
        }
        Ok(())
    }

    /// True when the quality factor is below [`Q_VALIDITY_FLOOR`].
    pub fn weak_coupling_warning(&self) -> bool {
        self.mech_damping > 0.0 && self.mech_freq / self.mech_damping < Q_VALIDITY_FLOOR
    }
}

/// Scalars derived from [`PhysicalParams`]; see [`derive_params`].
#[derive(Clone, Debug, PartialEq)]
pub struct DerivedParams {
    /// Cavity resonance ω_c = 2πc/λ, rad/s.
    pub cavity_freq: f64,
    /// Drive laser frequency ω_L, rad/s (resonant drive: ω_L = ω_c).
    pub laser_freq: f64,
    /// Vacuum optomechanical coupling G₀ = (ω_c/L)·√(ħ/mω_m), rad/s.
    pub vacuum_coupling: f64,
    /// Drive amplitude |E| = √(2Pκ/ħω_L), s⁻¹.
    pub drive_amplitude: f64,
    /// Mean thermal phonon occupation n̄.
    pub thermal_occupation: f64,
    /// Quality factor Q = ω_m/γ_m (∞ for an undamped mirror).
    pub quality_factor: f64,
    /// Optical finesse F = πc/Lκ.
    pub finesse: f64,
    /// Dimensionless damping γ = γ_m/ω_m.
    pub damping_ratio: f64,
}

/// Classical steady-state mean fields about which the dynamics is linearized.
#[derive(Clone, Debug, PartialEq)]
pub struct MeanField {
    /// Steady cavity amplitudes, one per cavity. Real and non-negative for
    /// the single-cavity models (drive phase convention); generally complex
    /// for arrays.
    pub alphas: Vec<Complex64>,
    /// Mirror displacement mean q_s = G₀|α_N|²/ω_m.
    pub q_s: f64,
    /// Mirror momentum mean (zero in steady state).
    pub p_s: f64,
    /// Effective detuning per cavity, rad/s. For the single-cavity models
    /// this is the swept Δ; for arrays `[Δ₀, ϖ, …, ϖ]`.
    pub detunings: Vec<f64>,
}

/// Mean thermal phonon number `n̄ = 1/(e^{ħω/k_BT} − 1)`.
///
/// `T = 0` maps to `n̄ = 0` by the limit convention, so zero-temperature
/// baselines need no special casing.
pub fn thermal_occupation(mech_freq: f64, temperature: f64) -> f64 {
    debug_assert!(mech_freq > 0.0 && temperature >= 0.0);
    if temperature == 0.0 {
        return 0.0;
    }
    let x = CONSTANTS.hbar * mech_freq / (CONSTANTS.k_b * temperature);
    1.0 / math::exp_m1(x)
}

/// All derived scalars for a parameter set.
pub fn derive_params(p: &PhysicalParams) -> Result<DerivedParams> {
    p.validate()?;
    let cavity_freq = 2.0 * core::f64::consts::PI * CONSTANTS.c / p.drive_wavelength;
    let laser_freq = cavity_freq;
    let vacuum_coupling =
        (cavity_freq / p.cavity_length) * math::sqrt(CONSTANTS.hbar / (p.mech_mass * p.mech_freq));
    let drive_amplitude =
        math::sqrt(2.0 * p.drive_power * p.cavity_decay / (CONSTANTS.hbar * laser_freq));
    let nbar = thermal_occupation(p.mech_freq, p.temperature);
    let quality_factor = if p.mech_damping > 0.0 {
        p.mech_freq / p.mech_damping
    } else {
        f64::INFINITY
    };
    let finesse = core::f64::consts::PI * CONSTANTS.c / (p.cavity_length * p.cavity_decay);
    let damping_ratio = p.mech_damping / p.mech_freq;
    let d = DerivedParams {
        cavity_freq,
        laser_freq,
        vacuum_coupling,
        drive_amplitude,
        thermal_occupation: nbar,
        quality_factor,
        finesse,
        damping_ratio,
    };
    for (what, v) in [
        ("cavity_freq", d.cavity_freq),
        ("vacuum_coupling", d.vacuum_coupling),
        ("drive_amplitude", d.drive_amplitude),
        ("thermal_occupation", d.thermal_occupation),
        ("finesse", d.finesse),
        ("damping_ratio", d.damping_ratio),
    ] {
        if !v.is_finite() {
            return Err(CoreError::NonFinite { what });
        }
    }
    Ok(d)
}

/// Single-cavity steady state at effective detuning Δ.
///
/// The drive phase is chosen so the amplitude is real and non-negative:
/// `α_s = |E|/√(κ² + Δ²)`.
pub fn cavity_mean_field(
    drive_amplitude: f64,
    cavity_decay: f64,
    delta: f64,
    vacuum_coupling: f64,
    mech_freq: f64,
) -> MeanField {
    debug_assert!(cavity_decay > 0.0);
    let alpha = drive_amplitude / math::hypot(cavity_decay, delta);
    let q_s = vacuum_coupling * alpha * alpha / mech_freq;
    MeanField {
        alphas: vec![Complex64::new(alpha, 0.0)],
        q_s,
        p_s: 0.0,
        detunings: vec![delta],
    }
}

/// Drive-enhanced optomechanical coupling `G = √2·α_s·G₀`.
pub fn effective_coupling(alpha: f64, vacuum_coupling: f64) -> f64 {
    core::f64::consts::SQRT_2 * alpha * vacuum_coupling
}

/// Recover the bare laser detuning Δ₀ = Δ + G₀²|α_s|²/ω_m from the
/// effective one. Reporting convenience only: sweeps always treat the
/// effective Δ as the independent variable.
pub fn delta0_from_delta(delta: f64, alpha: f64, vacuum_coupling: f64, mech_freq: f64) -> f64 {
    delta + vacuum_coupling * vacuum_coupling * alpha * alpha / mech_freq
}

#[cfg(test)]
mod tests {
    // Frozen oracle constants keep their full extended-precision digits.
    #![allow(clippy::excessive_precision)]

    use super::*;

    const PI: f64 = core::f64::consts::PI;

    #[test]
    fn zero_temperature_gives_zero_occupation() {
        assert_eq!(thermal_occupation(1e7, 0.0), 0.0);
    }

    #[test]
    fn ln2_crossover_gives_unit_occupation() {
        // ħω/k_BT = ln 2 ⇒ e^x − 1 = 1 ⇒ n̄ = 1.
        let omega = 2.0e7;
        let t = CONSTANTS.hbar * omega / (CONSTANTS.k_b * core::f64::consts::LN_2);
        assert!((thermal_occupation(omega, t) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reference_occupation_matches_oracle() {
        // Bose–Einstein value at ω_m = 20π MHz, T = 0.4 K, evaluated at
        // 50-digit precision beforehand.
        let n = thermal_occupation(20e6 * PI, 0.4);
        assert!((n - 832.964_865_428_011_011_3).abs() < 1e-9, "n̄ = {n}");
    }

    #[test]
    fn derived_params_match_oracle() {
        let d = derive_params(&PhysicalParams::reference()).unwrap();
        // Extended-precision evaluations of the closed formulas.
        assert!((d.vacuum_coupling - 426.067_783_080_594_52).abs() < 1e-9);
        assert!((d.drive_amplitude - 3.357_533_973_536_768_4e12).abs() < 1e1);
        assert!((d.finesse - 34_067.324_772_727_272_7).abs() < 1e-7);
        assert!((d.quality_factor - 1e5).abs() < 1e-9);
        assert!((d.cavity_freq - 2.325_495_762_109_695_4e15).abs() < 1.0);
        assert_eq!(d.laser_freq, d.cavity_freq);
    }

    #[test]
    fn quadrupling_mass_halves_coupling() {
        let p = PhysicalParams::reference();
        let mut p4 = p.clone();
        p4.mech_mass *= 4.0;
        let g = derive_params(&p).unwrap().vacuum_coupling;
        let g4 = derive_params(&p4).unwrap().vacuum_coupling;
        assert!((g4 - 0.5 * g).abs() < 1e-12 * g);
    }

    #[test]
    fn doubling_length_halves_coupling_and_finesse() {
        let p = PhysicalParams::reference();
        let mut p2 = p.clone();
        p2.cavity_length *= 2.0;
        let d = derive_params(&p).unwrap();
        let d2 = derive_params(&p2).unwrap();
        assert!((d2.vacuum_coupling - 0.5 * d.vacuum_coupling).abs() < 1e-12 * d.vacuum_coupling);
        assert!((d2.finesse - 0.5 * d.finesse).abs() < 1e-12 * d.finesse);
    }

    #[test]
    fn classical_limit_at_reference_point() {
        // For ħω ≪ k_BT, n̄·(ħω/k_BT) → 1 within 0.1%.
        let omega = 20e6 * PI;
        let x = CONSTANTS.hbar * omega / (CONSTANTS.k_b * 0.4);
        let n = thermal_occupation(omega, 0.4);
        assert!((n * x - 1.0).abs() < 1e-3);
    }

    #[test]
    fn occupation_monotonicity() {
        let omega = 20e6 * PI;
        let mut last = 0.0;
        for k in 1..=40 {
            let n = thermal_occupation(omega, 0.05 * k as f64);
            assert!(n > last, "n̄ must increase with T");
            last = n;
        }
        let mut last = f64::INFINITY;
        for k in 1..=40 {
            let n = thermal_occupation(1e6 * k as f64, 0.4);
            assert!(n < last, "n̄ must decrease with ω");
            last = n;
        }
    }

    #[test]
    fn mean_field_examples() {
        let d = derive_params(&PhysicalParams::reference()).unwrap();
        let kappa = PhysicalParams::reference().cavity_decay;
        let om = PhysicalParams::reference().mech_freq;

        // Zero detuning: α_s = |E|/κ.
        let mf = cavity_mean_field(d.drive_amplitude, kappa, 0.0, d.vacuum_coupling, om);
        assert!((mf.alphas[0].re - d.drive_amplitude / kappa).abs() < 1e-6);
        assert_eq!(mf.p_s, 0.0);

        // Undriven: everything zero.
        let mf0 = cavity_mean_field(0.0, kappa, om, d.vacuum_coupling, om);
        assert_eq!(mf0.alphas[0].re, 0.0);
        assert_eq!(mf0.q_s, 0.0);

        // Δ = ω_m against the extended-precision oracle.
        let mf1 = cavity_mean_field(d.drive_amplitude, kappa, om, d.vacuum_coupling, om);
        assert!((mf1.alphas[0].re - 48_911.518_085_209_098).abs() < 1e-6);
        let g = effective_coupling(mf1.alphas[0].re, d.vacuum_coupling);
        assert!((g - 2.947_167_617_697_273_6e7).abs() < 1e-2);
        assert!((mf1.q_s - 16_222.624_390_470_107).abs() < 1e-6);
    }

    #[test]
    fn effective_coupling_normalization() {
        assert_eq!(effective_coupling(0.0, 123.0), 0.0);
        let g0 = 426.0;
        assert!((effective_coupling(1.0 / core::f64::consts::SQRT_2, g0) - g0).abs() < 1e-12);
    }

    #[test]
    fn bare_detuning_recovery() {
        assert_eq!(delta0_from_delta(3.0, 0.0, 100.0, 2.0), 3.0);
        assert_eq!(delta0_from_delta(3.0, 5.0, 0.0, 2.0), 3.0);
        let d = derive_params(&PhysicalParams::reference()).unwrap();
        let p = PhysicalParams::reference();
        let mf = cavity_mean_field(
            d.drive_amplitude,
            p.cavity_decay,
            p.mech_freq,
            d.vacuum_coupling,
            p.mech_freq,
        );
        let d0 = delta0_from_delta(p.mech_freq, mf.alphas[0].re, d.vacuum_coupling, p.mech_freq);
        assert!((d0 - 6.974_379_068_159_264_4e7).abs() < 1e-1);
    }

    #[test]
    fn validation_rejects_bad_fields() {
        let mut p = PhysicalParams::reference();
        p.mech_mass = 0.0;
        assert!(matches!(
            p.validate(),
            Err(CoreError::InvalidParams { field: "mech_mass", .. })
        ));
        let mut p = PhysicalParams::reference();
        p.temperature = -1.0;
        assert!(p.validate().is_err());
        let mut p = PhysicalParams::reference();
        p.mech_damping = p.mech_freq * 2.0;
        assert!(p.validate().is_err());
        let mut p = PhysicalParams::reference();
        p.drive_power = 0.0;
        assert!(p.validate().is_ok(), "undriven cavity is legal");
    }

    #[test]
    fn weak_coupling_flag() {
        let mut p = PhysicalParams::reference();
        assert!(!p.weak_coupling_warning());
        p.mech_damping = p.mech_freq / 100.0;
        assert!(p.weak_coupling_warning());
        assert!(p.validate().is_ok());
    }
}
