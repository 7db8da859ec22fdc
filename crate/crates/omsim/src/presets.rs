//! Named sweep bundles reproducing the reference figures.
//!
//! Each preset expands to one or more scenario configs; multi-curve
//! figures become one CSV file per curve. Grid resolutions are artifact
//! choices (201 points per axis).

use crate::config::{AxisKind, Scale, ScenarioConfig, SweepSpec};
use omsim_core::{ModelKind, PhysicalParams};

const PI: f64 = std::f64::consts::PI;

/// A preset: a name, a description, and the configs it expands to.
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
}

/// All known presets in listing order.
pub const PRESETS: &[Preset] = &[
    Preset {
        name: "fig2a",
        description: "unfiltered model: entanglement vs detuning for seven damping rates",
    },
    Preset {
        name: "fig2b",
        description: "filtered model: entanglement vs detuning for seven damping rates",
    },
    Preset {
        name: "fig3a",
        description: "model comparison: entanglement vs detuning (original, filter, inverse filter)",
    },
    Preset {
        name: "fig3b",
        description: "model comparison: entanglement vs mirror temperature at delta = 0.5 omega_m",
    },
    Preset {
        name: "fig6a",
        description: "two-cavity array: pair entanglements vs far-cavity detuning at J = 0.7 omega_m",
    },
    Preset {
        name: "fig6b",
        description: "two-cavity array: pair entanglements vs hopping at varpi = 0.6 omega_m",
    },
    Preset {
        name: "fig6c",
        description: "two-cavity array: remote entanglement vs detuning for seven hopping rates",
    },
    Preset {
        name: "fig6d",
        description: "two-cavity array: remote entanglement vs hopping for five detunings",
    },
];

fn delta_sweep(points: usize) -> SweepSpec {
    let om = PhysicalParams::reference().mech_freq;
    SweepSpec { axis: AxisKind::Delta, start: 0.0, stop: 2.0 * om, points, scale: Scale::Linear }
}

fn single_cavity(model: ModelKind, gamma_m: f64, sweep: SweepSpec) -> ScenarioConfig {
    let mut p = PhysicalParams::reference();
    p.mech_damping = gamma_m;
    ScenarioConfig { model, physical: p, sweep, pairs: vec![(0, 1)], output: None, seed: 1 }
}

fn array_config(hopping: f64, varpi: f64, sweep: SweepSpec, all_pairs: bool) -> ScenarioConfig {
    let mut p = PhysicalParams::reference();
    p.cavity_count = 2;
    p.hopping = hopping;
    p.array_detuning = varpi;
    p.laser_detuning = 0.0;
    let pairs = if all_pairs { vec![(0, 1), (0, 2), (1, 2)] } else { vec![(0, 1)] };
    ScenarioConfig {
        model: ModelKind::Array { n: 2, hopping, varpi },
        physical: p,
        sweep,
        pairs,
        output: None,
        seed: 1,
    }
}

/// Damping-rate family used by the fig2 presets, rad/s.
pub fn fig2_damping_rates() -> Vec<(String, f64)> {
    [0.0, 200.0, 400.0, 600.0, 800.0, 1000.0, 2000.0]
        .iter()
        .map(|&g| (format!("gm{:04}pi", g as u64), g * PI))
        .collect()
}

/// Expand a preset to `(file stem, config)` pairs, or `None` for an
/// unknown name.
pub fn expand(name: &str) -> Option<Vec<(String, ScenarioConfig)>> {
    let om = PhysicalParams::reference().mech_freq;
    let points = 201;
    let out = match name {
        "fig2a" | "fig2b" => {
            let model = if name == "fig2a" { ModelKind::Original } else { ModelKind::Filter };
            fig2_damping_rates()
                .into_iter()
                .map(|(tag, g)| {
                    (format!("{name}_{tag}"), single_cavity(model.clone(), g, delta_sweep(points)))
                })
                .collect()
        }
        "fig3a" => [
            ("original", ModelKind::Original),
            ("filter", ModelKind::Filter),
            ("inverse_filter", ModelKind::InverseFilter),
        ]
        .into_iter()
        .map(|(tag, model)| {
            (format!("fig3a_{tag}"), single_cavity(model, 200.0 * PI, delta_sweep(points)))
        })
        .collect(),
        "fig3b" => [
            ("original", ModelKind::Original),
            ("filter", ModelKind::Filter),
            ("inverse_filter", ModelKind::InverseFilter),
        ]
        .into_iter()
        .map(|(tag, model)| {
            let sweep = SweepSpec {
                axis: AxisKind::Temperature,
                start: 0.1,
                stop: 20.0,
                points,
                scale: Scale::Linear,
            };
            let mut cfg = single_cavity(model, 200.0 * PI, sweep);
            cfg.physical.laser_detuning = 0.5 * om;
            (format!("fig3b_{tag}"), cfg)
        })
        .collect(),
        "fig6a" => {
            let sweep = SweepSpec {
                axis: AxisKind::Varpi,
                start: 0.0,
                stop: 1.2 * om,
                points,
                scale: Scale::Linear,
            };
            vec![("fig6a".to_string(), array_config(0.7 * om, 0.6 * om, sweep, true))]
        }
        "fig6b" => {
            let sweep = SweepSpec {
                axis: AxisKind::Hopping,
                start: 0.0,
                stop: 1.2 * om,
                points,
                scale: Scale::Linear,
            };
            vec![("fig6b".to_string(), array_config(0.7 * om, 0.6 * om, sweep, true))]
        }
        "fig6c" => [0.0f64, 0.2, 0.4, 0.6, 0.7, 0.8, 1.0]
            .iter()
            .map(|&j| {
                let sweep = SweepSpec {
                    axis: AxisKind::Varpi,
                    start: 0.0,
                    stop: 1.2 * om,
                    points,
                    scale: Scale::Linear,
                };
                let tag = format!("j{:02}", (j * 10.0).round() as u64);
                (format!("fig6c_{tag}"), array_config(j * om, 0.6 * om, sweep, false))
            })
            .collect(),
        "fig6d" => [0.2f64, 0.4, 0.6, 0.8, 1.0]
            .iter()
            .map(|&w| {
                let sweep = SweepSpec {
                    axis: AxisKind::Hopping,
                    start: 0.0,
                    stop: 1.2 * om,
                    points,
                    scale: Scale::Linear,
                };
                let tag = format!("w{:02}", (w * 10.0).round() as u64);
                (format!("fig6d_{tag}"), array_config(0.7 * om, w * om, sweep, false))
            })
            .collect(),
        _ => return None,
    };
    Some(out)
}
