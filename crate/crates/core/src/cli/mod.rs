//! Command-line front end.
//!
//! Single-point commands print `key=value` lines (or one flat JSON object
//! with `--json`); tabular commands print CSV with a header row.

mod report;
mod sweep;
mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::dynamics::{integrate_particle, rotation_number, stroboscopic_map, OdeOptions, RotationOptions};
use crate::elliptic::EllipticError;
use crate::error::{Error, Result};
use crate::grid::TWO_PI;
use crate::phases::phase_decomposition_cnoidal;
use crate::reconstruct::{drift_velocity, exact_trajectory};
use crate::spectral::{evolve_and_check, write_checkpoint, CheckpointFormat};
use crate::waves::{
    classify_orbit, in_root_wedge, travelling_constants, CnoidalParams, CnoidalWave, OrbitClass,
    Tolerances,
};

pub use report::{Field, Report};
pub use sweep::{parse_range, sweep_point, sweep_rows, write_sweep_csv, SweepRow, SweepSpec, SWEEP_COLUMNS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_BAD_PARAMS: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_VERIFY_FAILED: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "kdv-drift", version, about = "Particle drift and phase decomposition for KdV cnoidal waves")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Central charge (dispersion coefficient).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub c: Option<f64>,
    /// ODE tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Print single-point reports as one JSON object.
    #[arg(long, global = true)]
    pub json: bool,
    /// Plain `key=value` file with defaults; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct PointArgs {
    /// Pointedness, 0 ≤ m < 1.
    #[arg(long, allow_hyphen_values = true)]
    pub m: f64,
    /// Rescaled velocity.
    #[arg(long = "V", allow_hyphen_values = true)]
    pub v: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DriftMethod {
    Closed,
    Ode,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TrajectoryMethod {
    Auto,
    Exact,
    Ode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Identities,
    Oracles,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Binary,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Orbit class, uniform representative and wedge membership.
    Classify(PointArgs),
    /// Drift velocity and rotation angle per period.
    Drift {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, value_enum, default_value = "closed")]
        method: DriftMethod,
    },
    /// Dynamical, Berry and anomalous velocities.
    Phases(PointArgs),
    /// Particle path as `t,x` CSV rows. Standing waves use 2π time units.
    Trajectory {
        #[command(flatten)]
        point: PointArgs,
        /// Starting position.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        x0: f64,
        #[arg(long, default_value_t = 1.0)]
        periods: f64,
        /// Output rows per period.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, value_enum, default_value = "auto")]
        method: TrajectoryMethod,
    },
    /// CSV over a rectangular (m, V) grid.
    Sweep {
        /// `lo,hi,count`.
        #[arg(long = "m-range", default_value = "0,0.95,60", allow_hyphen_values = true)]
        m_range: String,
        /// `lo,hi,count`.
        #[arg(long = "V-range", default_value = "-1.5,2.5,60", allow_hyphen_values = true)]
        v_range: String,
        /// Comma-separated column subset.
        #[arg(long)]
        columns: Option<String>,
        /// Write to a file instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Evolve cnoidal data spectrally and compare with the travelling wave.
    Simulate {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, default_value_t = 1)]
        periods: usize,
        /// Grid size (power of two).
        #[arg(long)]
        n: Option<usize>,
        /// Time steps per period.
        #[arg(long)]
        steps: Option<usize>,
        /// Save the final state.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "binary")]
        checkpoint_format: FormatArg,
    },
    /// Identity and oracle checks; exits 4 on any failure.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
    },
}

/// Effective settings after merging the config file and flags.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub c: f64,
    pub ode_tol: f64,
    pub rotation_tol: f64,
    pub strobe_n: usize,
    pub spectral_n: usize,
    pub steps_per_period: usize,
    pub tolerances: Tolerances,
    pub threads: Option<usize>,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            c: 1.0,
            ode_tol: OdeOptions::default().tol,
            rotation_tol: RotationOptions::default().tol,
            strobe_n: 512,
            spectral_n: 256,
            steps_per_period: 4096,
            tolerances: Tolerances::default(),
            threads: None,
        }
    }
}

impl Settings {
    /// Applies `key=value` lines; `#` starts a comment.
    pub fn apply_config(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or_default().trim();
            if line.is_empty() {
                continue;
            }
            let bad = || Error::InvalidParams(format!("config line {}: {raw}", lineno + 1));
            let (key, value) = line.split_once('=').ok_or_else(bad)?;
            let value = value.trim();
            let real = || value.parse::<f64>().map_err(|_| bad());
            let count = || value.parse::<usize>().map_err(|_| bad());
            match key.trim() {
                "c" => self.c = real()?,
                "tol" | "ode_tol" => self.ode_tol = real()?,
                "rotation_tol" => self.rotation_tol = real()?,
                "strobe_n" => self.strobe_n = count()?,
                "n" | "spectral_n" => self.spectral_n = count()?,
                "steps_per_period" => self.steps_per_period = count()?,
                "eps" => self.tolerances.eps = real()?,
                "eps_k" => self.tolerances.eps_k = real()?,
                "n_max" => self.tolerances.n_max = value.parse().map_err(|_| bad())?,
                "threads" => self.threads = Some(count()?),
                other => return Err(Error::InvalidParams(format!("unknown config key {other}"))),
            }
        }
        Ok(())
    }

    fn ode(&self) -> OdeOptions {
        OdeOptions { tol: self.ode_tol, ..Default::default() }
    }

    fn rotation(&self) -> RotationOptions {
        RotationOptions { tol: self.rotation_tol, ..Default::default() }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParams(_) | Error::ResonanceWedge { .. } | Error::Grid(_) | Error::Io(_) => EXIT_BAD_PARAMS,
        Error::Elliptic(EllipticError::Parameter(_) | EllipticError::Characteristic(_) | EllipticError::Domain(..)) => {
            EXIT_BAD_PARAMS
        }
        _ => EXIT_NUMERICAL,
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                EXIT_OK
            } else {
                let _ = write!(err, "{e}");
                EXIT_BAD_PARAMS
            };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn settings(global: &GlobalArgs) -> Result<Settings> {
    let mut s = Settings::default();
    if let Some(path) = &global.config {
        s.apply_config(&std::fs::read_to_string(path)?)?;
    }
    if let Some(c) = global.c {
        s.c = c;
    }
    if let Some(tol) = global.tol {
        s.ode_tol = tol;
    }
    if global.threads.is_some() {
        s.threads = global.threads;
    }
    Ok(s)
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let s = settings(&cli.global)?;
    let mut buf = Vec::new();
    let code = match s.threads {
        Some(threads) if threads > 0 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::InvalidParams(e.to_string()))?;
            pool.install(|| dispatch(cli, &s, &mut buf))
        }
        Some(_) => Err(Error::InvalidParams("--threads must be positive".into())),
        None => dispatch(cli, &s, &mut buf),
    };
    // Partial output is still shown when a command fails midway.
    out.write_all(&buf)?;
    code
}

fn dispatch(cli: &Cli, s: &Settings, out: &mut dyn Write) -> Result<i32> {
    let json = cli.global.json;
    match &cli.command {
        Command::Classify(pt) => emit(out, &classify(pt, s)?, json),
        Command::Drift { point, method } => {
            let (report, code) = drift(point, *method, s)?;
            emit(out, &report, json)?;
            Ok(code)
        }
        Command::Phases(pt) => emit(out, &phases(pt, s)?, json),
        Command::Trajectory { point, x0, periods, samples, method } => {
            trajectory(point, *x0, *periods, *samples, *method, s, out)
        }
        Command::Sweep { m_range, v_range, columns, output } => {
            let spec = SweepSpec::new(parse_range(m_range)?, parse_range(v_range)?, s.c, columns.as_deref())?;
            let rows = sweep_rows(&spec, &s.tolerances);
            match output {
                Some(path) => {
                    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
                    write_sweep_csv(&spec, &rows, &mut file)?;
                    file.flush()?;
                }
                None => write_sweep_csv(&spec, &rows, out)?,
            }
            Ok(EXIT_OK)
        }
        Command::Simulate { point, periods, n, steps, checkpoint, checkpoint_format } => {
            let report = simulate(point, *periods, *n, *steps, checkpoint.as_ref(), *checkpoint_format, s)?;
            emit(out, &report, json)
        }
        Command::Verify { suite } => {
            let report = verify::run_suite(*suite, s)?;
            emit(out, &report, json)?;
            Ok(if report.failures() == 0 { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
    }
}

fn emit(out: &mut dyn Write, report: &Report, json: bool) -> Result<i32> {
    if json {
        writeln!(out, "{}", report.to_json())?;
    } else {
        write!(out, "{}", report.to_lines())?;
    }
    Ok(EXIT_OK)
}

fn params(pt: &PointArgs, s: &Settings) -> Result<CnoidalParams> {
    CnoidalParams::new(pt.m, pt.v, s.c)
}

pub fn classify(pt: &PointArgs, s: &Settings) -> Result<Report> {
    let p = params(pt, s)?;
    let class = classify_orbit(&p, &s.tolerances);
    let tc = travelling_constants(&p);
    let mut r = Report::default();
    r.push("regime", class.label());
    r.push("m", p.m);
    r.push("V", p.rescaled_v);
    r.push("c", p.c);
    r.push("k", class.k());
    if let OrbitClass::ExceptionalK { n, .. } = class {
        r.push("n", n as i64);
    }
    r.push("in_resonance_wedge", p.in_resonance_wedge());
    r.push("in_root_wedge", in_root_wedge(&p));
    r.push("v", tc.v);
    r.push("A", tc.a);
    r.push("B", tc.b);
    r.push("cal_v", tc.cal_v);
    Ok(r)
}

fn drift(pt: &PointArgs, method: DriftMethod, s: &Settings) -> Result<(Report, i32)> {
    let p = params(pt, s)?;
    let closed = drift_velocity(&p)?;
    let mut r = Report::default();
    r.push("regime", closed.regime.label());
    r.push("v", closed.velocity);
    r.push("period", closed.period);
    if method != DriftMethod::Ode {
        r.push("v_drift", closed.v_drift);
        r.push("delta_phi", closed.delta_phi);
    }
    if method == DriftMethod::Closed {
        return Ok((r, EXIT_OK));
    }
    // A standing wave is autonomous, so any strobe time works.
    let strobe = closed.period.unwrap_or(1.0);
    let wave = CnoidalWave::new(p);
    let map = stroboscopic_map(&wave, strobe, s.strobe_n, &s.ode())?;
    match rotation_number(&map, &s.rotation()) {
        Ok(est) => {
            let v_num = est.delta_phi / strobe;
            r.push("v_drift_ode", v_num);
            r.push("delta_phi_ode", closed.period.map(|_| est.delta_phi));
            r.push("periods_used", est.periods_used as i64);
            if method == DriftMethod::Both {
                r.push("discrepancy", (v_num - closed.v_drift).abs());
            }
            Ok((r, EXIT_OK))
        }
        Err(Error::NoConvergence { best, gap, .. }) => {
            r.push("v_drift_ode_partial", best / strobe);
            r.push("convergence_gap", gap);
            r.push("status", "no-convergence");
            Ok((r, EXIT_NUMERICAL))
        }
        Err(e) => Err(e),
    }
}

fn phases(pt: &PointArgs, s: &Settings) -> Result<Report> {
    let p = params(pt, s)?;
    let class = classify_orbit(&p, &s.tolerances);
    let drift = drift_velocity(&p)?;
    let mut r = Report::default();
    r.push("regime", class.label());
    r.push("k", class.k());
    r.push("v", drift.velocity);
    let decomposition = match class {
        OrbitClass::ResonanceWedge | OrbitClass::NearSingularK { .. } => None,
        _ => Some(phase_decomposition_cnoidal(&p, &s.tolerances)?),
    };
    r.push("v_dyn", decomposition.map(|d| d.v_dynamical));
    r.push("v_berry", decomposition.map(|d| d.v_berry));
    r.push("v_anom", decomposition.map(|d| d.v_anomalous));
    r.push("sum", decomposition.map(|d| d.sum()));
    r.push("v_drift", drift.v_drift);
    Ok(r)
}

fn trajectory(
    pt: &PointArgs,
    x0: f64,
    periods: f64,
    samples: usize,
    method: TrajectoryMethod,
    s: &Settings,
    out: &mut dyn Write,
) -> Result<i32> {
    let p = params(pt, s)?;
    if !(periods.is_finite() && periods > 0.0) || samples == 0 || !x0.is_finite() {
        return Err(Error::InvalidParams("need periods > 0, samples > 0 and finite x0".into()));
    }
    let wave = CnoidalWave::new(p);
    let unit = wave.period().unwrap_or(TWO_PI);
    let rows = (periods * samples as f64).ceil() as usize;
    let times: Vec<f64> = (0..=rows).map(|i| periods * unit * i as f64 / rows as f64).collect();
    let exact = match method {
        TrajectoryMethod::Exact => true,
        TrajectoryMethod::Ode => false,
        TrajectoryMethod::Auto => p.wedge_distance() > 0.0 || p.m == 0.0,
    };
    let tr = if exact {
        exact_trajectory(&p, x0, &times)?
    } else {
        integrate_particle(&wave, x0, &times, &s.ode())?
    };
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "x"]).map_err(sweep::csv_error)?;
    for (t, x) in tr.times.iter().zip(&tr.positions) {
        w.write_record([format!("{t:.16e}"), format!("{x:.16e}")]).map_err(sweep::csv_error)?;
    }
    w.flush()?;
    Ok(EXIT_OK)
}

fn simulate(
    pt: &PointArgs,
    periods: usize,
    n: Option<usize>,
    steps: Option<usize>,
    checkpoint: Option<&PathBuf>,
    format: FormatArg,
    s: &Settings,
) -> Result<Report> {
    let p = params(pt, s)?;
    let n = n.unwrap_or(s.spectral_n);
    let steps = steps.unwrap_or(s.steps_per_period);
    if periods == 0 || steps == 0 {
        return Err(Error::InvalidParams("periods and steps must be positive".into()));
    }
    let (check, state) = evolve_and_check(&p, n, steps, periods)?;
    let mut r = Report::default();
    r.push("n", n as i64);
    r.push("steps_per_period", steps as i64);
    r.push("periods", periods as i64);
    r.push("period", check.period);
    r.push("travelling_error", check.error);
    r.push("mean_drift", check.mean_drift);
    r.push("energy_drift", check.energy_drift);
    if let Some(path) = checkpoint {
        let format = match format {
            FormatArg::Binary => CheckpointFormat::Binary,
            FormatArg::Text => CheckpointFormat::Text,
        };
        write_checkpoint(&state, path, format)?;
        r.push("checkpoint", path.display().to_string());
    }
    Ok(r)
}
