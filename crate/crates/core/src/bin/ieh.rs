//! Command-line front end: Hamiltonian synthesis, time evolution,
//! sensitivity analysis, and schedule-comparison sweeps.
//!
//! Exit codes: 0 success, 1 usage/config error, 2 numerical failure.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use ieh_core::pauli::{PauliDecomposition, TWO_QUBIT_LABELS};
use ieh_core::propagator::{propagate, UnitaryMatrix};
use ieh_core::robustness::{
    self, predicted_fidelity, robustness_sweep, truncation_unreliable, write_sweep_csv,
    write_trajectory_csv,
};
use ieh_core::schedule::{solve_cycloid_ratio, Schedule};
use ieh_core::spectral::SingleQubitParams;
use ieh_core::synthesis::{
    cz_hamiltonian, hadamard_hamiltonian, phase_gate_hamiltonian, TimeIndexedHamiltonian,
};
use ieh_core::{C64, Error, Mat2, Mat4};

#[derive(Parser)]
#[command(
    name = "ieh",
    version,
    about = "Inverse engineering of time-dependent qubit Hamiltonians"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the Hamiltonian trajectory of a gate preset
    Synth(CommonArgs),
    /// Integrate the synthesized Hamiltonian and report gate fidelity
    Evolve(CommonArgs),
    /// Sensitivity q_S of a single-qubit protocol and its P(eps) table
    Sensitivity(CommonArgs),
    /// Compare theta schedules under the amplitude-error sweep
    Sweep(CommonArgs),
}

#[derive(Args, Default)]
struct CommonArgs {
    /// Gate preset: phase | s | t | z | hadamard | cz
    #[arg(long)]
    gate: Option<String>,
    /// Phase-gate angle in radians (defaults: s=pi/2, t=pi/4, z=pi, cz=pi)
    #[arg(long)]
    xi: Option<f64>,
    /// Total evolution time
    #[arg(long)]
    tau: Option<f64>,
    /// Theta schedule, e.g. constant:0.785, linear:0.785, cycloid:0.693 or JSON
    #[arg(long)]
    theta_schedule: Option<String>,
    /// Eigenphase schedule, e.g. linear:3.1416 (bare kinds use the gate's angle)
    #[arg(long)]
    varphi_schedule: Option<String>,
    /// Azimuthal schedule (default constant:0)
    #[arg(long)]
    phi_schedule: Option<String>,
    /// Propagation steps (>= 100)
    #[arg(long)]
    steps: Option<usize>,
    /// Smallest epsilon of the sweep grid
    #[arg(long)]
    epsilon_min: Option<f64>,
    /// Largest epsilon of the sweep grid
    #[arg(long)]
    epsilon_max: Option<f64>,
    /// Number of epsilon grid points
    #[arg(long)]
    epsilon_count: Option<usize>,
    /// JSON config file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for CSV artifacts
    #[arg(long)]
    out: Option<PathBuf>,
    /// Allow epsilon grids beyond [-0.1, 0.1]
    #[arg(long)]
    force: bool,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    gate: Option<String>,
    xi: Option<f64>,
    tau: Option<f64>,
    theta_schedule: Option<String>,
    varphi_schedule: Option<String>,
    phi_schedule: Option<String>,
    steps: Option<usize>,
    epsilon_min: Option<f64>,
    epsilon_max: Option<f64>,
    epsilon_count: Option<usize>,
    out: Option<PathBuf>,
    force: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Gate {
    Phase,
    S,
    T,
    Z,
    Hadamard,
    Cz,
}

impl Gate {
    fn parse(name: &str) -> Result<Self, CliError> {
        match name.to_ascii_lowercase().as_str() {
            "phase" => Ok(Gate::Phase),
            "s" => Ok(Gate::S),
            "t" => Ok(Gate::T),
            "z" => Ok(Gate::Z),
            "hadamard" | "h" => Ok(Gate::Hadamard),
            "cz" => Ok(Gate::Cz),
            other => Err(CliError::config(format!(
                "unknown gate '{other}' (expected phase, s, t, z, hadamard or cz)"
            ))),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Gate::Phase => "phase",
            Gate::S => "s",
            Gate::T => "t",
            Gate::Z => "z",
            Gate::Hadamard => "hadamard",
            Gate::Cz => "cz",
        }
    }

    fn default_xi(&self) -> Option<f64> {
        match self {
            Gate::Phase => None,
            Gate::S => Some(FRAC_PI_2),
            Gate::T => Some(FRAC_PI_4),
            Gate::Z | Gate::Cz => Some(PI),
            Gate::Hadamard => Some(PI),
        }
    }
}

/// Fully resolved run parameters (flags over config-file values).
struct RunConfig {
    gate: Gate,
    xi: f64,
    tau: f64,
    theta: Schedule,
    varphi: Schedule,
    phi: Schedule,
    steps: usize,
    epsilon_grid: Vec<f64>,
    out: PathBuf,
    force: bool,
}

struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn config(message: impl Into<String>) -> Self {
        Self { message: message.into(), code: 1 }
    }

}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::QuadratureFailure { .. }
            | Error::UnboundedDerivative { .. }
            | Error::InvalidEvaluator { .. }
            | Error::InvalidHamiltonian(_) => 2,
            _ => 1,
        };
        Self { message: e.to_string(), code }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self { message: format!("i/o error: {e}"), code: 1 }
    }
}

/// Parses `kind`, `kind:value`, or a JSON schedule description. A bare kind
/// uses `default_end` as its end value (cycloid: its ratio is solved so that
/// the end value is reached).
fn parse_schedule(spec: &str, default_end: f64) -> Result<Schedule, CliError> {
    let spec = spec.trim();
    if spec.starts_with('{') {
        let s: Schedule = serde_json::from_str(spec)
            .map_err(|e| CliError::config(format!("schedule JSON parse error: {e}")))?;
        s.validate()?;
        return Ok(s);
    }
    let (kind, value) = match spec.split_once(':') {
        Some((k, v)) => {
            let value: f64 = v
                .parse()
                .map_err(|_| CliError::config(format!("invalid schedule value '{v}'")))?;
            (k, Some(value))
        }
        None => (spec, None),
    };
    let schedule = match kind.to_ascii_lowercase().as_str() {
        "constant" | "cte" => Schedule::Constant { value: value.unwrap_or(default_end) },
        "linear" | "lin" => Schedule::Linear { end_value: value.unwrap_or(default_end) },
        "quadratic" | "qua" => Schedule::Quadratic { end_value: value.unwrap_or(default_end) },
        "trigonometric" | "tri" => {
            Schedule::Trigonometric { end_value: value.unwrap_or(default_end) }
        }
        "cycloid" | "cyc" => match value {
            Some(r) => Schedule::Cycloid { r },
            None => Schedule::Cycloid { r: solve_cycloid_ratio(default_end)? },
        },
        other => {
            return Err(CliError::config(format!(
                "unknown schedule kind '{other}' (expected constant, linear, quadratic, \
                 trigonometric, cycloid, or a JSON object)"
            )))
        }
    };
    schedule.validate()?;
    Ok(schedule)
}

fn epsilon_grid(min: f64, max: f64, count: usize) -> Result<Vec<f64>, CliError> {
    if count == 0 {
        return Err(CliError::config("epsilon-count must be >= 1"));
    }
    if max < min {
        return Err(CliError::config(format!(
            "epsilon-max {max} is below epsilon-min {min}"
        )));
    }
    if count == 1 {
        return Ok(vec![min]);
    }
    Ok((0..count)
        .map(|i| min + (max - min) * i as f64 / (count - 1) as f64)
        .collect())
}

fn resolve(args: &CommonArgs) -> Result<RunConfig, CliError> {
    let file: FileConfig = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::config(format!("cannot read config {}: {e}", path.display()))
            })?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::config(format!("config parse error: {e}")))?
        }
        None => FileConfig::default(),
    };
    let gate_name = args
        .gate
        .clone()
        .or(file.gate)
        .ok_or_else(|| CliError::config("missing --gate (or 'gate' in the config file)"))?;
    let gate = Gate::parse(&gate_name)?;
    let xi = args
        .xi
        .or(file.xi)
        .or(gate.default_xi())
        .ok_or_else(|| CliError::config("gate 'phase' requires --xi"))?;
    let tau = args.tau.or(file.tau).unwrap_or(1.0);
    if !(tau > 0.0) {
        return Err(CliError::config(format!("tau = {tau} must be > 0")));
    }
    let steps = args.steps.or(file.steps).unwrap_or(10_000);

    // eigenphase boundary for the preset: the Hadamard construction needs a
    // full pi sweep; the phase family sweeps to xi
    let varphi_end = match gate {
        Gate::Hadamard => PI,
        _ => xi,
    };
    let varphi_spec = args.varphi_schedule.clone().or(file.varphi_schedule);
    let varphi = match varphi_spec {
        Some(s) => parse_schedule(&s, varphi_end)?,
        None => Schedule::Linear { end_value: varphi_end },
    };
    let theta_default = match gate {
        Gate::Hadamard => FRAC_PI_4,
        _ => 0.0,
    };
    let theta_spec = args.theta_schedule.clone().or(file.theta_schedule);
    let theta = match theta_spec {
        Some(s) => parse_schedule(&s, theta_default)?,
        None => Schedule::Constant { value: theta_default },
    };
    let phi_spec = args.phi_schedule.clone().or(file.phi_schedule);
    let phi = match phi_spec {
        Some(s) => parse_schedule(&s, 0.0)?,
        None => Schedule::Constant { value: 0.0 },
    };

    let eps_min = args.epsilon_min.or(file.epsilon_min).unwrap_or(-0.1);
    let eps_max = args.epsilon_max.or(file.epsilon_max).unwrap_or(0.1);
    let eps_count = args.epsilon_count.or(file.epsilon_count).unwrap_or(21);
    Ok(RunConfig {
        gate,
        xi,
        tau,
        theta,
        varphi,
        phi,
        steps,
        epsilon_grid: epsilon_grid(eps_min, eps_max, eps_count)?,
        out: args.out.clone().or(file.out).unwrap_or_else(|| PathBuf::from(".")),
        force: args.force || file.force.unwrap_or(false),
    })
}

fn preset_hamiltonian(cfg: &RunConfig) -> Result<TimeIndexedHamiltonian, CliError> {
    Ok(match cfg.gate {
        Gate::Hadamard => hadamard_hamiltonian(&cfg.varphi, cfg.tau)?,
        Gate::Cz => cz_hamiltonian(cfg.xi, &cfg.varphi, cfg.tau)?,
        _ => phase_gate_hamiltonian(cfg.xi, &cfg.varphi, cfg.tau)?,
    })
}

fn target_unitary(cfg: &RunConfig) -> UnitaryMatrix {
    let one = C64::new(1.0, 0.0);
    match cfg.gate {
        Gate::Hadamard => {
            let h = C64::new(1.0 / std::f64::consts::SQRT_2, 0.0);
            UnitaryMatrix::Dim2(Mat2::new(h, h, h, -h))
        }
        Gate::Cz => {
            let mut m = Mat4::identity();
            m[(3, 3)] = C64::from_polar(1.0, cfg.xi);
            UnitaryMatrix::Dim4(m)
        }
        _ => {
            let mut m = Mat2::identity();
            m[(1, 1)] = C64::from_polar(1.0, cfg.xi);
            let _ = one;
            UnitaryMatrix::Dim2(m)
        }
    }
}

fn write_outputs(out_dir: &Path, files: &[(&str, String)]) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(out_dir)?;
    let mut paths = Vec::new();
    for (name, content) in files {
        let path = out_dir.join(name);
        std::fs::write(&path, content)?;
        paths.push(path);
    }
    Ok(paths)
}

const SYNTH_SAMPLES: usize = 200;

fn cmd_synth(cfg: &RunConfig) -> Result<(), CliError> {
    let ham = preset_hamiltonian(cfg)?;
    let mut csv = String::new();
    let mut max_abs: f64 = 0.0;
    let mut dim = 0;
    for i in 0..=SYNTH_SAMPLES {
        let s = i as f64 / SYNTH_SAMPLES as f64;
        let h = ham.at(s)?;
        max_abs = max_abs.max(h.max_abs());
        match h {
            PauliDecomposition::Single { omega } => {
                if csv.is_empty() {
                    csv.push_str("s,omega_x,omega_y,omega_z\n");
                    dim = 2;
                }
                writeln!(csv, "{s},{},{},{}", omega[0], omega[1], omega[2]).unwrap();
            }
            PauliDecomposition::Two { coeffs } => {
                if csv.is_empty() {
                    csv.push_str("s");
                    for label in TWO_QUBIT_LABELS {
                        write!(csv, ",{label}").unwrap();
                    }
                    csv.push('\n');
                    dim = 4;
                }
                write!(csv, "{s}").unwrap();
                for c in coeffs {
                    write!(csv, ",{c}").unwrap();
                }
                csv.push('\n');
            }
        }
    }
    let paths = write_outputs(&cfg.out, &[("synth.csv", csv)])?;
    println!(
        "gate={} xi={} tau={} dim={dim} max_abs_coefficient={max_abs}",
        cfg.gate.name(),
        cfg.xi,
        cfg.tau
    );
    println!("wrote {}", paths[0].display());
    Ok(())
}

fn cmd_evolve(cfg: &RunConfig) -> Result<(), CliError> {
    let ham = preset_hamiltonian(cfg)?;
    let unitary = propagate(|s| ham.at(s), cfg.tau, cfg.steps)?;
    let target = target_unitary(cfg);
    let fidelity = ieh_core::propagator::gate_fidelity(&unitary, &target)?;
    let dim = unitary.dim();
    let mut csv = String::from("i,j,re,im\n");
    for i in 0..dim {
        for j in 0..dim {
            let e = unitary.entry(i, j);
            writeln!(csv, "{i},{j},{},{}", e.re, e.im).unwrap();
        }
    }
    let paths = write_outputs(&cfg.out, &[("unitary.csv", csv)])?;
    println!(
        "gate={} xi={} tau={} steps={} fidelity={fidelity}",
        cfg.gate.name(),
        cfg.xi,
        cfg.tau,
        cfg.steps
    );
    println!("wrote {}", paths[0].display());
    Ok(())
}

fn cmd_sensitivity(cfg: &RunConfig) -> Result<(), CliError> {
    if cfg.gate == Gate::Cz {
        return Err(CliError::config(
            "sensitivity analysis covers single-qubit protocols only",
        ));
    }
    let params = SingleQubitParams::new(
        cfg.theta.clone(),
        cfg.varphi.clone(),
        cfg.phi.clone(),
        cfg.tau,
    )?;
    let input = ieh_core::spectral::State2::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    let result = robustness::sensitivity_general(&params, &input)?;
    println!("q_s_general={}", result.q_s);
    if let Schedule::Constant { value: theta0 } = cfg.theta {
        let q_int = robustness::sensitivity_case_one(theta0, &cfg.varphi)?;
        let phi_end = cfg.varphi.end_value();
        let q_closed = robustness::sensitivity_case_one_closed(theta0, phi_end);
        let q_printed = robustness::sensitivity_case_one_printed(theta0, phi_end);
        println!("q_s_case_one={q_int}");
        println!("q_s_closed_corrected={q_closed}");
        println!("q_s_closed_printed={q_printed}");
        println!("closed_form_discrepancy={}", (q_closed - q_printed).abs());
    }
    let mut csv = String::from("epsilon,p_predicted\n");
    for &eps in &cfg.epsilon_grid {
        writeln!(csv, "{eps},{}", predicted_fidelity(result.q_s, eps)).unwrap();
        if truncation_unreliable(result.q_s, eps) {
            eprintln!(
                "warning: eps^2 * q_s = {} at eps = {eps} exceeds the second-order \
                 validity guard",
                eps * eps * result.q_s
            );
        }
    }
    let paths = write_outputs(&cfg.out, &[("sensitivity.csv", csv)])?;
    println!("wrote {}", paths[0].display());
    Ok(())
}

fn cmd_sweep(cfg: &RunConfig) -> Result<(), CliError> {
    let max_eps = cfg.epsilon_grid.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    if max_eps > 0.1 && !cfg.force {
        return Err(CliError::config(format!(
            "epsilon grid reaches {max_eps}, beyond the default validity window \
             [-0.1, 0.1]; pass --force to proceed"
        )));
    }
    let theta_end = cfg.theta.end_value();
    let schedules = vec![
        ("cte".to_string(), Schedule::Constant { value: theta_end }),
        ("lin".to_string(), Schedule::Linear { end_value: theta_end }),
        ("qua".to_string(), Schedule::Quadratic { end_value: theta_end }),
        ("tri".to_string(), Schedule::Trigonometric { end_value: theta_end }),
        ("cyc".to_string(), Schedule::Cycloid { r: solve_cycloid_ratio(theta_end)? }),
    ];
    let table =
        robustness_sweep(&schedules, &cfg.varphi, &cfg.epsilon_grid, cfg.tau, cfg.steps)?;
    for (name, message) in &table.failures {
        eprintln!("warning: schedule '{name}' failed: {message}");
    }
    for row in &table.rows {
        if truncation_unreliable(row.q_s, row.epsilon) {
            eprintln!(
                "warning: schedule '{}' at eps = {} exceeds the second-order \
                 validity guard",
                row.schedule_name, row.epsilon
            );
        }
    }
    let mut sweep = Vec::new();
    write_sweep_csv(&table, &mut sweep)?;
    let mut traj = Vec::new();
    write_trajectory_csv(&table, &mut traj)?;
    let paths = write_outputs(
        &cfg.out,
        &[
            ("sweep.csv", String::from_utf8(sweep).unwrap()),
            ("trajectories.csv", String::from_utf8(traj).unwrap()),
        ],
    )?;
    println!(
        "schedules={} cells={} failures={}",
        schedules.len(),
        table.rows.len(),
        table.failures.len()
    );
    for p in paths {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn run() -> Result<(), CliError> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return Ok(());
        }
        Err(e) => return Err(CliError::config(e.to_string())),
    };
    match &cli.command {
        Command::Synth(args) => cmd_synth(&resolve(args)?),
        Command::Evolve(args) => cmd_evolve(&resolve(args)?),
        Command::Sensitivity(args) => cmd_sensitivity(&resolve(args)?),
        Command::Sweep(args) => cmd_sweep(&resolve(args)?),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
