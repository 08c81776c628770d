//! `gls` — scattering spectra of a giant Λ-type atom coupled twice to a 1D
//! waveguide.
//!
//! Subcommands: `amplitudes` (point evaluation, JSON), `sweep` (CSV grid),
//! `conditions` (JSON report), `figure` (preset grids, CSV + optional SVG),
//! `verify` (closed-form vs solver vs lattice cross-checks), `geometry`
//! (device parameters → phases).
//!
//! Exit codes: 0 success, 1 verification/runtime failure, 2 usage error.
//! `GLS_THREADS` caps the worker threads used for grid evaluation.

mod config;
mod csvio;
mod geometry;
mod jsonio;
mod svg;

use clap::{Args, Parser, Subcommand};
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use gls_core::conditions::{
    analyze, ConversionCondition, TrajectoryTarget,
};
use gls_core::model::{
    effective_params, giant_lambda_amplitudes, sagnac_amplitudes, ModelParams,
};
use gls_core::sweep::{figure_preset, run_sweep, AxisSpec, FigureId, SweepMode, SweepSpec};
use gls_core::verify;

use config::Config;
use jsonio::{
    to_json_string, AmplitudesOut, ComplexOut, ConditionsOut, EffectiveOut, FiptOut, GeometryOut,
    OptimalConversionOut, ParamsOut, SagnacOut, TotalReflectionOut,
};
use svg::HeatmapQuantity;

#[derive(Parser)]
#[command(name = "gls", version, about = "Giant Λ-atom waveguide scattering spectra")]
struct Cli {
    /// Flat key=value config file; command-line flags win over file values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate scattering amplitudes and probabilities at one point (JSON).
    Amplitudes(AmplitudesArgs),
    /// Rectangular sweep over (delta, dphi) or (delta, eta), CSV output.
    Sweep(SweepArgs),
    /// Analytic condition report for a configuration (JSON).
    Conditions(ConditionsArgs),
    /// Run a figure preset: CSV grid plus optional SVG heatmap.
    Figure(FigureArgs),
    /// Cross-check closed forms against the boundary-condition solver (and
    /// optionally the lattice simulation). Nonzero exit on failure.
    Verify(VerifyArgs),
    /// Convert device geometry to accumulated phases.
    Geometry(GeometryArgs),
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct AmplitudesArgs {
    /// Decay rate Γ₁ (sets the rate unit).
    #[arg(long)]
    gamma1: Option<f64>,
    /// Decay ratio η = Γ₂/Γ₁.
    #[arg(long)]
    eta: Option<f64>,
    /// Phase φ₁ in radians.
    #[arg(long)]
    phi1: Option<f64>,
    /// Phase difference Δφ = φ₁ − φ₂ in radians.
    #[arg(long)]
    dphi: Option<f64>,
    /// Intrinsic dissipation γ in units of Γ₁.
    #[arg(long = "gamma-loss")]
    gamma_loss: Option<f64>,
    /// Detuning Δ in units of Γ₁.
    #[arg(long)]
    delta: Option<f64>,
    /// Also evaluate the Sagnac-coupled amplitudes.
    #[arg(long)]
    sagnac: bool,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct SweepArgs {
    /// Scan axis: "dphi" or "eta".
    #[arg(long)]
    mode: String,
    #[arg(long)]
    phi1: Option<f64>,
    /// Fixed decay ratio (dphi mode).
    #[arg(long)]
    eta: Option<f64>,
    /// Fixed phase difference (eta mode).
    #[arg(long)]
    dphi: Option<f64>,
    #[arg(long)]
    gamma1: Option<f64>,
    #[arg(long = "gamma-loss")]
    gamma_loss: Option<f64>,
    #[arg(long)]
    sagnac: bool,
    #[arg(long = "delta-min")]
    delta_min: Option<f64>,
    #[arg(long = "delta-max")]
    delta_max: Option<f64>,
    #[arg(long = "delta-count")]
    delta_count: Option<usize>,
    #[arg(long = "scan-min")]
    scan_min: Option<f64>,
    #[arg(long = "scan-max")]
    scan_max: Option<f64>,
    #[arg(long = "scan-count")]
    scan_count: Option<usize>,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write an SVG heatmap here.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Quantity for the SVG heatmap (T1, R1, Tc, loss, T1_tilde, Tc_tilde).
    #[arg(long = "svg-quantity")]
    svg_quantity: Option<String>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct ConditionsArgs {
    #[arg(long)]
    phi1: Option<f64>,
    #[arg(long)]
    dphi: Option<f64>,
    #[arg(long)]
    gamma1: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    /// Phase tolerance in radians for manifold detection.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct FigureArgs {
    /// Preset id: fig2a..fig2f, fig3a..fig3i, fig4a, fig4b, fig5a..fig5c.
    id: FigureId,
    /// Output CSV path (defaults to "<id>.csv").
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write an SVG heatmap of the figure's quantity here.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Also extract the extremum trajectories to "<out>.traj.csv".
    #[arg(long)]
    traj: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Random configurations per check.
    #[arg(long)]
    draws: Option<usize>,
    /// Seed for the randomized draws.
    #[arg(long)]
    seed: Option<u64>,
    /// Add the lattice wavepacket cross-check at one packet width.
    #[arg(long)]
    lattice: bool,
    /// Lattice packet width (sites) for --lattice.
    #[arg(long)]
    sigma: Option<f64>,
    /// Add the full sigma-convergence study (slow).
    #[arg(long = "lattice-full")]
    lattice_full: bool,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct GeometryArgs {
    /// Load a named preset ("gaas") instead of explicit values.
    #[arg(long)]
    preset: Option<String>,
    /// Coupling-point separation d in meters.
    #[arg(long)]
    d: Option<f64>,
    /// Group velocity in m/s.
    #[arg(long)]
    vg: Option<f64>,
    /// |g>-|e> transition angular frequency in rad/s.
    #[arg(long = "omega-e")]
    omega_e: Option<f64>,
    /// |g>-|f> splitting angular frequency in rad/s.
    #[arg(long = "omega-f")]
    omega_f: Option<f64>,
    /// Γ₁ + Γ₂ in 1/s, for the Markov-validity warning (0 disables).
    #[arg(long = "gamma-total")]
    gamma_total: Option<f64>,
}

enum CliError {
    Usage(String),
    Run(String),
    VerifyFailed,
}

impl CliError {
    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Run(_) | CliError::VerifyFailed => ExitCode::from(1),
        }
    }
}

impl From<config::ConfigError> for CliError {
    fn from(err: config::ConfigError) -> Self {
        CliError::Usage(err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(err) = init_thread_pool() {
        eprintln!("gls: {err}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            match &err {
                CliError::Usage(msg) | CliError::Run(msg) => eprintln!("gls: {msg}"),
                CliError::VerifyFailed => eprintln!("gls: verification failed"),
            }
            err.exit_code()
        }
    }
}

fn init_thread_pool() -> Result<(), String> {
    let Ok(raw) = std::env::var("GLS_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .parse()
        .map_err(|_| format!("GLS_THREADS must be a positive integer, got {raw:?}"))?;
    if threads == 0 {
        return Err("GLS_THREADS must be at least 1".into());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| format!("cannot configure {threads} worker threads: {e}"))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    match cli.command {
        Command::Amplitudes(args) => cmd_amplitudes(args, &config),
        Command::Sweep(args) => cmd_sweep(args, &config),
        Command::Conditions(args) => cmd_conditions(args, &config),
        Command::Figure(args) => cmd_figure(args, &config),
        Command::Verify(args) => cmd_verify(args, &config),
        Command::Geometry(args) => cmd_geometry(args, &config),
    }
}

fn write_output(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match path {
        Some(path) => std::fs::write(path, contents)
            .map_err(|e| CliError::Run(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn params_out(params: &ModelParams) -> ParamsOut {
    ParamsOut {
        gamma1: params.gamma1,
        gamma2: params.gamma2,
        eta: params.eta(),
        phi1: params.phi1,
        phi2: params.phi2,
        dphi: params.dphi(),
        gamma_loss: params.gamma_loss,
    }
}

fn cmd_amplitudes(args: AmplitudesArgs, config: &Config) -> Result<(), CliError> {
    let gamma1 = config.pick_f64(args.gamma1, "gamma1", 1.0)?;
    let eta = config.pick_f64(args.eta, "eta", 1.0)?;
    let phi1 = config.pick_f64(args.phi1, "phi1", 0.0)?;
    let dphi = config.pick_f64(args.dphi, "dphi", 0.0)?;
    let gamma_loss = config.pick_f64(args.gamma_loss, "gamma-loss", 0.0)?;
    let delta = config.pick_f64(args.delta, "delta", 0.0)?;
    let sagnac = config.pick_flag(args.sagnac, "sagnac")?;

    let params = ModelParams::from_dphi(gamma1, eta, phi1, dphi, gamma_loss)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let amps =
        giant_lambda_amplitudes(&params, delta).map_err(|e| CliError::Run(e.to_string()))?;
    let eff = effective_params(&params);
    let sagnac_out = if sagnac {
        let s = sagnac_amplitudes(&params, delta).map_err(|e| CliError::Run(e.to_string()))?;
        Some(SagnacOut {
            t1_tilde: ComplexOut::from(s.t1),
            t2_tilde: ComplexOut::from(s.t2),
            transmission: s.transmission,
            conversion: s.conversion,
            loss: s.loss,
        })
    } else {
        None
    };
    let out = AmplitudesOut {
        params: params_out(&params),
        delta,
        t1: ComplexOut::from(amps.t1),
        r1: ComplexOut::from(amps.r1),
        t2: ComplexOut::from(amps.t2),
        r2: ComplexOut::from(amps.r2),
        transmission: amps.transmission,
        reflection: amps.reflection,
        conversion: amps.conversion,
        loss: amps.loss,
        effective: EffectiveOut {
            delta_shift: eff.delta_shift,
            gamma1_eff: eff.gamma1_eff,
            gamma2_eff: eff.gamma2_eff,
            gamma_eff: eff.gamma_eff,
            eta_eff: eff.eta_eff,
        },
        sagnac: sagnac_out,
    };
    println!("{}", to_json_string(&out));
    Ok(())
}

fn cmd_sweep(args: SweepArgs, config: &Config) -> Result<(), CliError> {
    let phi1 = config.pick_f64(args.phi1, "phi1", 0.0)?;
    let gamma1 = config.pick_f64(args.gamma1, "gamma1", 1.0)?;
    let gamma_loss = config.pick_f64(args.gamma_loss, "gamma-loss", 0.0)?;
    let sagnac = config.pick_flag(args.sagnac, "sagnac")?;
    let (mode, scan_default): (SweepMode, (f64, f64)) = match args.mode.as_str() {
        "dphi" => (
            SweepMode::DeltaDphi {
                eta: config.pick_f64(args.eta, "eta", 1.0)?,
            },
            (0.0, 4.0 * PI),
        ),
        "eta" => (
            SweepMode::DeltaEta {
                dphi: config.pick_f64(args.dphi, "dphi", 0.0)?,
            },
            (0.0, 4.0),
        ),
        other => {
            return Err(CliError::Usage(format!(
                "--mode must be \"dphi\" or \"eta\", got {other:?}"
            )))
        }
    };
    let spec = SweepSpec {
        mode,
        phi1,
        gamma1,
        gamma_loss,
        sagnac,
        delta_axis: AxisSpec::new(
            config.pick_f64(args.delta_min, "delta-min", -8.0)?,
            config.pick_f64(args.delta_max, "delta-max", 8.0)?,
            config.pick_usize(args.delta_count, "delta-count", 321)?,
        ),
        scan_axis: AxisSpec::new(
            config.pick_f64(args.scan_min, "scan-min", scan_default.0)?,
            config.pick_f64(args.scan_max, "scan-max", scan_default.1)?,
            config.pick_usize(args.scan_count, "scan-count", 321)?,
        ),
    };
    let result = run_sweep(&spec).map_err(|e| CliError::Usage(e.to_string()))?;
    write_output(args.out.as_deref(), &csvio::sweep_to_csv(&result))?;
    if let Some(svg_path) = &args.svg {
        let quantity = parse_quantity(args.svg_quantity.as_deref(), sagnac)?;
        write_svg(&result, quantity, svg_path)?;
    }
    Ok(())
}

fn parse_quantity(raw: Option<&str>, sagnac: bool) -> Result<HeatmapQuantity, CliError> {
    match raw {
        Some(text) => text.parse().map_err(CliError::Usage),
        None => Ok(if sagnac {
            HeatmapQuantity::SagnacConversion
        } else {
            HeatmapQuantity::Conversion
        }),
    }
}

fn write_svg(
    result: &gls_core::sweep::SweepResult,
    quantity: HeatmapQuantity,
    path: &Path,
) -> Result<(), CliError> {
    let svg = svg::heatmap_svg(result, quantity).ok_or_else(|| {
        CliError::Usage(format!(
            "quantity {} is not available in this sweep (run with --sagnac)",
            quantity.as_str()
        ))
    })?;
    write_output(Some(path), &svg)
}

fn cmd_conditions(args: ConditionsArgs, config: &Config) -> Result<(), CliError> {
    let phi1 = config.pick_f64(args.phi1, "phi1", 0.0)?;
    let dphi = config.pick_f64(args.dphi, "dphi", 0.0)?;
    let gamma1 = config.pick_f64(args.gamma1, "gamma1", 1.0)?;
    let eta = config.pick_f64(args.eta, "eta", 1.0)?;
    let tol = config.pick_f64(args.tol, "tol", 1e-9)?;
    let report =
        analyze(phi1, dphi, gamma1, eta, tol).map_err(|e| CliError::Usage(e.to_string()))?;
    let out = ConditionsOut {
        phi1,
        dphi,
        gamma1,
        eta,
        fipt: FiptOut {
            active: report.fipt.is_some(),
            m: report.fipt.map(|f| f.m),
        },
        total_reflection: report.total_reflection.map(|tr| TotalReflectionOut {
            delta_star: tr.delta_star,
        }),
        optimal_conversion: report.optimal_conversion.map(|oc| match oc {
            ConversionCondition::At {
                eta_star,
                delta_star,
            } => OptimalConversionOut {
                possible: true,
                eta_star: Some(eta_star),
                delta_star: Some(delta_star),
            },
            ConversionCondition::Impossible => OptimalConversionOut {
                possible: false,
                eta_star: None,
                delta_star: None,
            },
        }),
        tolerance_used: report.tolerance_used,
    };
    println!("{}", to_json_string(&out));
    Ok(())
}

fn figure_quantity(id: FigureId) -> HeatmapQuantity {
    match id {
        FigureId::Fig2A | FigureId::Fig2D | FigureId::Fig3A | FigureId::Fig3D
        | FigureId::Fig3G => HeatmapQuantity::Transmission,
        FigureId::Fig2B | FigureId::Fig2E | FigureId::Fig3B | FigureId::Fig3E
        | FigureId::Fig3H => HeatmapQuantity::Reflection,
        FigureId::Fig2C | FigureId::Fig2F | FigureId::Fig3C | FigureId::Fig3F
        | FigureId::Fig3I => HeatmapQuantity::Conversion,
        FigureId::Fig4A | FigureId::Fig4B | FigureId::Fig5A | FigureId::Fig5B
        | FigureId::Fig5C => HeatmapQuantity::SagnacConversion,
    }
}

fn figure_targets(id: FigureId) -> Vec<TrajectoryTarget> {
    if figure_preset(id).sagnac {
        vec![TrajectoryTarget::MaxSagnacConversion]
    } else {
        vec![
            TrajectoryTarget::MinTransmission,
            TrajectoryTarget::MaxReflection,
            TrajectoryTarget::MaxConversion,
        ]
    }
}

fn cmd_figure(args: FigureArgs, _config: &Config) -> Result<(), CliError> {
    let spec = figure_preset(args.id);
    let mut result = run_sweep(&spec).map_err(|e| CliError::Run(e.to_string()))?;
    if args.traj {
        let mut trajectories = Vec::new();
        for target in figure_targets(args.id) {
            let entries = gls_core::conditions::extremum_trajectory(&spec, target)
                .map_err(|e| CliError::Run(e.to_string()))?;
            trajectories.push((target, entries));
        }
        result.trajectories = Some(trajectories);
    }
    let out_path = args
        .out
        .unwrap_or_else(|| PathBuf::from(format!("{}.csv", args.id)));
    write_output(Some(&out_path), &csvio::sweep_to_csv(&result))?;
    if let Some(trajectories) = &result.trajectories {
        let named: Vec<(&'static str, Vec<gls_core::conditions::TrajectoryEntry>)> = trajectories
            .iter()
            .map(|(target, entries)| (target.as_str(), entries.clone()))
            .collect();
        let traj_path = out_path.with_extension("traj.csv");
        write_output(
            Some(&traj_path),
            &csvio::trajectories_to_csv(&spec.mode, &named),
        )?;
    }
    if let Some(svg_path) = &args.svg {
        write_svg(&result, figure_quantity(args.id), svg_path)?;
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs, config: &Config) -> Result<(), CliError> {
    let draws = config.pick_usize(args.draws, "draws", 10_000)?;
    let seed = config.pick_u64(args.seed, "seed", 42)?;
    let lattice = config.pick_flag(args.lattice, "lattice")?;
    let lattice_full = config.pick_flag(args.lattice_full, "lattice-full")?;
    let sigma = config.pick_f64(args.sigma, "sigma", 40.0)?;

    let mut report = verify::closed_form_suite(seed, draws);
    if lattice || lattice_full {
        report.merge(verify::lattice_suite(sigma));
    }
    if lattice_full {
        for preset in [
            gls_core::lattice::LatticePreset::Optimum,
            gls_core::lattice::LatticePreset::TotalReflection,
            gls_core::lattice::LatticePreset::Fipt,
        ] {
            match verify::lattice_convergence(preset) {
                Ok(runs) => {
                    let monotone = runs
                        .windows(2)
                        .all(|w| w[1].1.max_abs_dev < w[0].1.max_abs_dev);
                    let table = runs
                        .iter()
                        .map(|(s, c)| format!("sigma {s}: {:.5}", c.max_abs_dev))
                        .collect::<Vec<_>>()
                        .join(", ");
                    println!(
                        "{} lattice convergence, {preset:?} ({table})",
                        if monotone { "PASS" } else { "FAIL" }
                    );
                    if !monotone {
                        report.checks.push(verify::Check {
                            name: format!("lattice convergence, {preset:?}"),
                            passed: false,
                            observed: f64::NAN,
                            bound: 0.0,
                        });
                    }
                }
                Err(err) => {
                    return Err(CliError::Run(format!(
                        "lattice convergence run failed for {preset:?}: {err}"
                    )))
                }
            }
        }
    }
    for check in &report.checks {
        println!("{check}");
    }
    if report.passed() {
        println!("PASS ({} checks)", report.checks.len());
        Ok(())
    } else {
        let failed = report.checks.iter().filter(|c| !c.passed).count();
        println!("FAIL ({failed} of {} checks)", report.checks.len());
        Err(CliError::VerifyFailed)
    }
}

fn cmd_geometry(args: GeometryArgs, config: &Config) -> Result<(), CliError> {
    let geom = match args.preset.as_deref() {
        Some("gaas") => geometry::gaas_preset(),
        Some(other) => {
            return Err(CliError::Usage(format!(
                "unknown geometry preset {other:?} (available: gaas)"
            )))
        }
        None => geometry::GeometryParams {
            d: config.pick_f64(args.d, "d", f64::NAN)?,
            v_g: config.pick_f64(args.vg, "vg", f64::NAN)?,
            omega_e: config.pick_f64(args.omega_e, "omega-e", f64::NAN)?,
            omega_f: config.pick_f64(args.omega_f, "omega-f", f64::NAN)?,
            gamma_total: config.pick_f64(args.gamma_total, "gamma-total", 0.0)?,
        },
    };
    let phases =
        geometry::phases_from_geometry(&geom).map_err(|e| CliError::Usage(e.to_string()))?;
    let two_pi = 2.0 * PI;
    let out = GeometryOut {
        d: geom.d,
        v_g: geom.v_g,
        omega_e: geom.omega_e,
        omega_f: geom.omega_f,
        gamma_total: geom.gamma_total,
        phi1: phases.phi1,
        dphi: phases.dphi,
        phi1_mod_2pi: phases.phi1.rem_euclid(two_pi),
        dphi_mod_2pi: phases.dphi.rem_euclid(two_pi),
        markov_warning: phases.markov_warning,
    };
    println!("{}", to_json_string(&out));
    Ok(())
}
