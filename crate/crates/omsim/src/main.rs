//! `omsim` — steady-state optomechanical entanglement from the command line.
//!
//! Subcommands: `point` (single configuration report), `sweep` (parameter
//! sweeps to CSV, by preset or JSON config), `validate` (cross-method
//! validation suite), `preset-list`.
//!
//! Exit codes: 0 success, 1 usage error, 2 numerical failure,
//! 3 validation failure.

use clap::{Args, Parser, Subcommand};
use omsim::config::ScenarioConfig;
use omsim::presets;
use omsim::sweep::{run_sweep, write_csv, CsvOptions, RowStatus};
use omsim::verification::{run_validation, Level};
use omsim_core::entanglement::{measure_pair, physicality_check};
use omsim_core::lyapunov::solve_lyapunov;
use omsim_core::model::{build_array, build_filter, build_inverse_filter, build_original};
use omsim_core::params::{delta0_from_delta, derive_params};
use omsim_core::stability::assess;
use omsim_core::{LinearModel, PhysicalParams};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_USAGE: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_VALIDATION: u8 = 3;

#[derive(Parser)]
#[command(
    name = "omsim",
    version,
    about = "Steady-state optomechanical entanglement: stability, Lyapunov covariances, logarithmic negativity",
    max_term_width = 100
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one configuration and print derived parameters, mean
    /// fields, stability margins, and entanglement per mode pair.
    Point(PointArgs),
    /// Run a parameter sweep (from a preset bundle or a JSON config) and
    /// write CSV.
    Sweep(SweepArgs),
    /// Run the validation suite and write a JSON report.
    Validate(ValidateArgs),
    /// List the available sweep presets.
    PresetList,
}

#[derive(Args)]
struct PointArgs {
    /// Model variant: original | filter | inverse-filter | array.
    #[arg(long, default_value = "filter")]
    model: String,
    /// Effective detuning in units of omega_m (drive detuning for arrays).
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    delta_over_omega_m: f64,
    /// Drive power, W.
    #[arg(long)]
    power: Option<f64>,
    /// Mirror bath temperature, K.
    #[arg(long)]
    temperature: Option<f64>,
    /// Mechanical damping rate, rad/s.
    #[arg(long)]
    gamma_m: Option<f64>,
    /// Cavity amplitude decay rate, rad/s.
    #[arg(long)]
    kappa: Option<f64>,
    /// Number of cavities (array model).
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Hopping rate in units of omega_m (array model).
    #[arg(long, default_value_t = 0.7)]
    hopping_over_omega_m: f64,
    /// Far-cavity detuning in units of omega_m (array model).
    #[arg(long, default_value_t = 0.6, allow_negative_numbers = true)]
    varpi_over_omega_m: f64,
    /// Mode pair to report, as `i,j` (repeatable; 0 = mirror).
    #[arg(long = "pair", value_parser = parse_pair)]
    pairs: Vec<(usize, usize)>,
    /// Emit machine-readable JSON instead of text.
    #[arg(long)]
    json: bool,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let parts: Vec<_> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("expected `i,j`".into());
    }
    let i = parts[0].trim().parse().map_err(|e| format!("{e}"))?;
    let j = parts[1].trim().parse().map_err(|e| format!("{e}"))?;
    Ok((i, j))
}

#[derive(Args)]
struct SweepArgs {
    /// Preset name (see `omsim preset-list`).
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    /// JSON scenario config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output CSV path (single-config sweeps; default from the config).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Output directory for preset bundles.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Worker threads (0 = all cores). Defaults to $OMSIM_JOBS.
    #[arg(long)]
    jobs: Option<usize>,
    /// Omit the timestamp comment so repeated runs are byte-identical.
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Args)]
struct ValidateArgs {
    /// fast: cross-method numerical checks; full: adds the Monte Carlo
    /// oracle and the figure-level sweeps.
    #[arg(long, default_value = "fast")]
    level: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Zero the runtime fields (byte-identical reports for a fixed seed).
    #[arg(long)]
    no_runtimes: bool,
}

fn jobs_from_env() -> usize {
    std::env::var("OMSIM_JOBS")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version land here as non-errors.
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(EXIT_USAGE);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match cli.command {
        Command::Point(args) => cmd_point(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Validate(args) => cmd_validate(args),
        Command::PresetList => cmd_preset_list(),
    }
}

fn build_point_model(args: &PointArgs, p: &PhysicalParams, delta: f64) -> Result<LinearModel, String> {
    let kind = args.model.replace('_', "-");
    match kind.as_str() {
        "original" => build_original(p, delta).map_err(|e| e.to_string()),
        "filter" => build_filter(p, delta).map_err(|e| e.to_string()),
        "inverse-filter" => build_inverse_filter(p, delta).map_err(|e| e.to_string()),
        "array" => {
            let om = p.mech_freq;
            build_array(p, args.n, args.hopping_over_omega_m * om, args.varpi_over_omega_m * om)
                .map_err(|e| e.to_string())
        }
        other => Err(format!("unknown model `{other}` (field: model)")),
    }
}

fn cmd_point(args: PointArgs) -> ExitCode {
    let mut p = PhysicalParams::reference();
    if let Some(v) = args.power {
        p.drive_power = v;
    }
    if let Some(v) = args.temperature {
        p.temperature = v;
    }
    if let Some(v) = args.gamma_m {
        p.mech_damping = v;
    }
    if let Some(v) = args.kappa {
        p.cavity_decay = v;
    }
    let delta = args.delta_over_omega_m * p.mech_freq;
    if args.model == "array" {
        p.cavity_count = args.n;
        p.laser_detuning = delta;
        p.hopping = args.hopping_over_omega_m * p.mech_freq;
        p.array_detuning = args.varpi_over_omega_m * p.mech_freq;
    }
    if let Err(e) = p.validate() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE);
    }

    let model = match build_point_model(&args, &p, delta) {
        Ok(m) => m,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(if msg.contains("field") { EXIT_USAGE } else { EXIT_NUMERICAL });
        }
    };
    let derived = match derive_params(&p) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_NUMERICAL);
        }
    };
    let stability = match assess(&model, Some(&p)) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_NUMERICAL);
        }
    };

    let mut pairs = args.pairs.clone();
    if pairs.is_empty() {
        pairs.push((0, 1));
    }
    for &(i, j) in &pairs {
        if i == j || i >= model.modes() || j >= model.modes() {
            eprintln!(
                "error: pair ({i},{j}) invalid for {} modes (field: pair)",
                model.modes()
            );
            return ExitCode::from(EXIT_USAGE);
        }
    }

    let mut cov = None;
    let mut min_symplectic = None;
    let mut measures = Vec::new();
    if stability.stable {
        match solve_lyapunov(&model) {
            Ok(c) => {
                match physicality_check(&c.v) {
                    Ok(rep) => min_symplectic = Some(rep.min_symplectic),
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(EXIT_NUMERICAL);
                    }
                }
                for &(i, j) in &pairs {
                    match measure_pair(&c, i, j) {
                        Ok(rep) => measures.push(rep),
                        Err(e) => {
                            eprintln!("error: {e}");
                            return ExitCode::from(EXIT_NUMERICAL);
                        }
                    }
                }
                cov = Some(c);
            }
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_NUMERICAL);
            }
        }
    }

    let alpha = model.mean_field.alphas.first().copied();
    let delta0 = delta0_from_delta(
        delta,
        alpha.map(|a| a.norm()).unwrap_or(0.0),
        derived.vacuum_coupling,
        p.mech_freq,
    );

    if args.json {
        let m_json: Vec<_> = measures
            .iter()
            .map(|m| {
                serde_json::json!({
                    "pair": [m.pair.0, m.pair.1],
                    "e_n": m.e_n,
                    "xi": m.xi,
                    "sigma": m.sigma,
                    "simon_entangled": m.simon_entangled,
                    "det_theta": m.block_dets.0,
                    "det_eta": m.block_dets.1,
                    "det_beta": m.block_dets.2,
                })
            })
            .collect();
        let out = serde_json::json!({
            "model": model.kind.label(),
            "modes": model.mode_labels,
            "delta_rad_per_s": delta,
            "delta0_rad_per_s": delta0,
            "derived": {
                "cavity_freq_rad_per_s": derived.cavity_freq,
                "vacuum_coupling_rad_per_s": derived.vacuum_coupling,
                "drive_amplitude_per_s": derived.drive_amplitude,
                "thermal_occupation": derived.thermal_occupation,
                "finesse": derived.finesse,
                "quality_factor": if derived.quality_factor.is_finite() {
                    serde_json::json!(derived.quality_factor)
                } else {
                    serde_json::json!(null)
                },
            },
            "mean_field": {
                "alphas_re": model.mean_field.alphas.iter().map(|a| a.re).collect::<Vec<_>>(),
                "alphas_im": model.mean_field.alphas.iter().map(|a| a.im).collect::<Vec<_>>(),
                "q_s": model.mean_field.q_s,
                "detunings_rad_per_s": model.mean_field.detunings,
            },
            "stability": {
                "stable": stability.stable,
                "max_real_eig_rad_per_s": stability.max_real_eig,
                "margins": stability.margins.iter()
                    .map(|(n, v)| serde_json::json!({"name": n, "value": v}))
                    .collect::<Vec<_>>(),
                "method_agreement": stability.method_agreement,
            },
            "lyapunov_residual": cov.as_ref().map(|c| c.residual),
            "min_symplectic": min_symplectic,
            "weak_coupling_warning": p.weak_coupling_warning(),
            "pairs": m_json,
        });
        println!("{}", serde_json::to_string_pretty(&out).unwrap());
        return ExitCode::SUCCESS;
    }

    println!("model: {}", model.kind.label());
    println!("delta: {delta} rad/s ({} omega_m)", args.delta_over_omega_m);
    println!("delta0 (bare drive detuning): {delta0} rad/s");
    println!("derived parameters:");
    println!("  cavity_freq: {} rad/s", derived.cavity_freq);
    println!("  vacuum_coupling: {} rad/s", derived.vacuum_coupling);
    println!("  drive_amplitude: {} 1/s", derived.drive_amplitude);
    println!("  thermal_occupation: {}", derived.thermal_occupation);
    println!("  finesse: {}", derived.finesse);
    println!("  quality_factor: {}", derived.quality_factor);
    if p.weak_coupling_warning() {
        eprintln!("warning: quality factor below 1e3; weak-coupling treatment is marginal");
    }
    println!("mean field:");
    for (label, a) in model.mode_labels.iter().skip(1).zip(model.mean_field.alphas.iter()) {
        println!("  alpha[{label}]: {} + {}i", a.re, a.im);
    }
    println!("  q_s: {}", model.mean_field.q_s);
    println!("stability:");
    println!("  stable: {}", stability.stable);
    println!("  max_real_eig: {} rad/s", stability.max_real_eig);
    for (name, v) in &stability.margins {
        println!("  margin {name}: {v}");
    }
    match &cov {
        Some(c) => {
            println!("covariance: lyapunov_residual = {:e}", c.residual);
            println!("  min_symplectic: {}", min_symplectic.unwrap());
            for m in &measures {
                let a = &model.mode_labels[m.pair.0];
                let b = &model.mode_labels[m.pair.1];
                println!(
                    "pair {a}-{b}: E_N = {}, xi = {}, sigma = {}, simon_entangled = {}",
                    m.e_n, m.xi, m.sigma, m.simon_entangled
                );
            }
        }
        None => println!("covariance: none (model unstable; no steady state)"),
    }
    ExitCode::SUCCESS
}

fn write_sweep_file(
    path: &PathBuf,
    cfg: &ScenarioConfig,
    jobs: usize,
    opts: &CsvOptions,
) -> Result<usize, String> {
    let rows = run_sweep(cfg, jobs);
    let failures = rows
        .iter()
        .filter(|r| matches!(r.status, RowStatus::Error(_)))
        .count();
    let mut file = std::fs::File::create(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut buf = std::io::BufWriter::new(&mut file);
    write_csv(&mut buf, cfg, &rows, opts).map_err(|e| e.to_string())?;
    buf.flush().map_err(|e| e.to_string())?;
    Ok(failures)
}

fn cmd_sweep(args: SweepArgs) -> ExitCode {
    let jobs = args.jobs.unwrap_or_else(jobs_from_env);
    let opts = CsvOptions { no_timestamp: args.no_timestamp };

    let bundles: Vec<(PathBuf, ScenarioConfig)> = if let Some(name) = &args.preset {
        match presets::expand(name) {
            Some(configs) => configs
                .into_iter()
                .map(|(stem, cfg)| (args.out_dir.join(format!("{stem}.csv")), cfg))
                .collect(),
            None => {
                eprintln!(
                    "error: unknown preset `{name}`; run `omsim preset-list` for the catalogue"
                );
                return ExitCode::from(EXIT_USAGE);
            }
        }
    } else if let Some(path) = &args.config {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(EXIT_USAGE);
            }
        };
        let cfg = match ScenarioConfig::from_json(&text) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
        };
        let out = args
            .output
            .clone()
            .or_else(|| cfg.output.clone())
            .unwrap_or_else(|| PathBuf::from("sweep.csv"));
        vec![(out, cfg)]
    } else {
        eprintln!("error: give either --preset or --config");
        return ExitCode::from(EXIT_USAGE);
    };

    if args.preset.is_some() {
        if let Err(e) = std::fs::create_dir_all(&args.out_dir) {
            eprintln!("error: {}: {e}", args.out_dir.display());
            return ExitCode::from(EXIT_NUMERICAL);
        }
    }

    let mut total_failures = 0usize;
    for (path, cfg) in &bundles {
        match write_sweep_file(path, cfg, jobs, &opts) {
            Ok(failures) => {
                total_failures += failures;
                eprintln!("wrote {}", path.display());
            }
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_NUMERICAL);
            }
        }
    }
    if total_failures > 0 {
        eprintln!("note: {total_failures} grid points reported solver errors (see status column)");
    }
    ExitCode::SUCCESS
}

fn cmd_validate(args: ValidateArgs) -> ExitCode {
    let level = match args.level.as_str() {
        "fast" => Level::Fast,
        "full" => Level::Full,
        other => {
            eprintln!("error: unknown level `{other}` (expected fast|full)");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let report = run_validation(args.seed, level);
    for c in &report.checks {
        let status = match c.status {
            omsim::verification::CheckStatus::Pass => "pass",
            omsim::verification::CheckStatus::Fail => "FAIL",
            omsim::verification::CheckStatus::Skipped => "skip",
        };
        println!("[{status}] {} — {}", c.name, c.detail);
    }
    println!("overall: {}", if report.overall { "pass" } else { "FAIL" });
    if let Some(path) = &args.report {
        let json = if args.no_runtimes { report.canonical_json() } else { report.to_json() };
        if let Err(e) = std::fs::write(path, json) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(EXIT_NUMERICAL);
        }
        eprintln!("wrote {}", path.display());
    }
    if report.overall {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VALIDATION)
    }
}

fn cmd_preset_list() -> ExitCode {
    for preset in presets::PRESETS {
        let files = presets::expand(preset.name).unwrap();
        println!("{:8} {} ({} file{})", preset.name, preset.description, files.len(), if files.len() == 1 { "" } else { "s" });
        for (stem, _) in files {
            println!("           {stem}.csv");
        }
    }
    ExitCode::SUCCESS
}
