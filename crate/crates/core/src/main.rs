use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use qwalk::config::{parse_config, ExperimentConfig, OutputKind};
use qwalk::emit::{emit, emit_preset, format_significant, json_string};
use qwalk::experiment::{run_experiment, run_preset, PRESET_NAMES};
use qwalk::{CoinParams, NoiseKind, NoiseModel, WalkError};

#[derive(Parser)]
#[command(
    name = "qwalk",
    version,
    about = "Discrete-time quantum walks on a 1D lattice"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a JSON experiment config.
    Run { config: PathBuf },
    /// Run a named figure preset and write CSV/JSON/gnuplot files.
    Preset {
        /// Preset name; omit with --list to see all.
        name: Option<String>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        list: bool,
        #[arg(long)]
        include_zero_rows: bool,
    },
    /// Moments of single walks over a grid of θ and step counts.
    Sweep {
        /// Comma-separated θ values.
        #[arg(long, value_delimiter = ',', required = true)]
        theta_grid: Vec<f64>,
        /// Comma-separated step counts.
        #[arg(long, value_delimiter = ',', required = true)]
        steps: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Unit::Degrees)]
        unit: Unit,
        #[arg(long, default_value_t = 0.0)]
        xi: f64,
        #[arg(long, default_value_t = 0.0)]
        zeta: f64,
        #[arg(long, value_enum, default_value_t = Noise::None)]
        noise: Noise,
        #[arg(long, default_value_t = 0.0)]
        p: f64,
        /// Write the table here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Unit {
    Degrees,
    Radians,
}

#[derive(Clone, Copy, ValueEnum)]
enum Noise {
    None,
    BitFlip,
    PhaseFlip,
    AmplitudeDamping,
}

impl From<Noise> for NoiseKind {
    fn from(n: Noise) -> NoiseKind {
        match n {
            Noise::None => NoiseKind::None,
            Noise::BitFlip => NoiseKind::BitFlip,
            Noise::PhaseFlip => NoiseKind::PhaseFlip,
            Noise::AmplitudeDamping => NoiseKind::AmplitudeDamping,
        }
    }
}

fn configure_threads() -> Result<(), WalkError> {
    let Ok(raw) = std::env::var("QWALK_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| {
        WalkError::InvalidParameter(format!(
            "QWALK_THREADS must be a positive integer, got `{raw}`"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| WalkError::InvalidParameter(format!("cannot size thread pool: {e}")))
}

fn read(path: &PathBuf) -> Result<String, WalkError> {
    fs::read_to_string(path).map_err(|source| WalkError::Io {
        path: path.clone(),
        source,
    })
}

fn write_stdout(text: &str) -> Result<(), WalkError> {
    std::io::stdout()
        .write_all(text.as_bytes())
        .map_err(|source| WalkError::Io {
            path: "<stdout>".into(),
            source,
        })
}

fn run_config(path: &PathBuf) -> Result<(), WalkError> {
    let config = parse_config(&read(path)?)?;
    let result = run_experiment(&config)?;
    let spec = &result.config.emit;
    if spec.csv_path.is_none() && spec.json_path.is_none() && spec.plot_script.is_none() {
        return write_stdout(&json_string(&result));
    }
    for written in emit(&result, spec)? {
        eprintln!("wrote {}", written.display());
    }
    Ok(())
}

fn run_named_preset(
    name: Option<String>,
    out: PathBuf,
    list: bool,
    zeros: bool,
) -> Result<(), WalkError> {
    if list {
        return write_stdout(&(PRESET_NAMES.join("\n") + "\n"));
    }
    let name = name.ok_or_else(|| {
        WalkError::InvalidParameter(format!(
            "preset name required; one of {}",
            PRESET_NAMES.join(", ")
        ))
    })?;
    let result = run_preset(&name)?;
    for written in emit_preset(&result, &out, zeros)? {
        eprintln!("wrote {}", written.display());
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn sweep(
    theta_grid: Vec<f64>,
    steps: Vec<usize>,
    unit: Unit,
    xi: f64,
    zeta: f64,
    noise: Noise,
    p: f64,
    out: Option<PathBuf>,
) -> Result<(), WalkError> {
    let to_rad = |x: f64| match unit {
        Unit::Degrees => x.to_radians(),
        Unit::Radians => x,
    };
    let model = NoiseModel::new(noise.into(), p)?;
    let mut jobs = Vec::new();
    for &theta in &theta_grid {
        let coin = CoinParams::new(to_rad(xi), to_rad(theta), to_rad(zeta))?;
        for &n in &steps {
            let config = ExperimentConfig::single(coin, n)
                .with_noise(model)?
                .with_outputs(&[OutputKind::Moments]);
            jobs.push((coin, n, config));
        }
    }
    let rows = jobs
        .par_iter()
        .map(|(coin, n, config)| {
            let m = run_experiment(config)?.moments.expect("moments requested");
            let n2 = (*n as f64).powi(2);
            Ok(format!(
                "{},{},{},{},{},{},{}",
                format_significant(coin.theta()),
                n,
                format_significant(m.mean),
                format_significant(m.variance),
                if *n > 0 {
                    format_significant(m.variance / n2)
                } else {
                    "nan".into()
                },
                format_significant(1.0 - coin.theta().sin()),
                m.excess_kurtosis
                    .map(format_significant)
                    .unwrap_or_else(|| "nan".into()),
            ))
        })
        .collect::<Result<Vec<_>, WalkError>>()?;
    let mut table = String::from(
        "theta,steps,mean,variance,variance_over_n2,predicted_slope,excess_kurtosis\n",
    );
    for row in rows {
        table.push_str(&row);
        table.push('\n');
    }
    match out {
        Some(path) => fs::write(&path, table).map_err(|source| WalkError::Io { path, source }),
        None => write_stdout(&table),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads().and_then(|()| match cli.command {
        Command::Run { config } => run_config(&config),
        Command::Preset {
            name,
            out,
            list,
            include_zero_rows,
        } => run_named_preset(name, out, list, include_zero_rows),
        Command::Sweep {
            theta_grid,
            steps,
            unit,
            xi,
            zeta,
            noise,
            p,
            out,
        } => sweep(theta_grid, steps, unit, xi, zeta, noise, p, out),
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("qwalk: {err}");
            if err.is_validation() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}
