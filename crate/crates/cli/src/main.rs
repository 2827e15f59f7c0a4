use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use spinpump::config::RunConfig;
use spinpump::si::SiScales;
use spinpump::{output, presets, sweep};

#[derive(Parser)]
#[command(name = "spinpump", version, about = "Spin-resolved adiabatic pumping through a magnetic double-delta barrier")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the sweep described by a TOML config file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Regenerate one figure preset ("list" prints the available names).
    Figure {
        preset: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Convert a dimensionless current (units of e omega) to amperes and
    /// print the length and energy scales.
    ///
    /// The pump frequency is taken as cyclic: one electron per cycle at
    /// `--freq f` is `e f`. Multiply by 2 pi for the angular reading.
    ConvertSi {
        /// Reference field in tesla.
        #[arg(long)]
        b0: f64,
        /// Effective mass over the free electron mass.
        #[arg(long)]
        meff: f64,
        /// Pump frequency in Hz.
        #[arg(long)]
        freq: f64,
        #[arg(long)]
        value: f64,
    },
}

fn run_and_write(config: &RunConfig, threads: Option<usize>) -> anyhow::Result<ExitCode> {
    let result = sweep::run(config, threads)?;
    let files = output::write_all(config, &result, &config.output_dir)?;
    println!("{}", files.csv.display());
    println!("{}", files.metadata.display());
    println!("{}", files.plot.display());
    let flagged = result.flagged();
    if flagged > 0 {
        for row in result.rows.iter().filter(|r| r.is_flagged()) {
            eprintln!("flagged {} = {}: {}", config.axis, row.x, row.error.as_deref().unwrap_or_default());
        }
        eprintln!("{flagged} of {} points flagged", result.rows.len());
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn main_inner() -> anyhow::Result<ExitCode> {
    match Cli::parse().command {
        Command::Sweep { config, threads } => {
            let config = RunConfig::from_file(&config).with_context(|| format!("loading {}", config.display()))?;
            run_and_write(&config, threads)
        }
        Command::Figure { preset, out, threads } => {
            if preset == "list" {
                for p in presets::PRESETS {
                    println!("{:<12} {}", p.name, p.about);
                }
                return Ok(ExitCode::SUCCESS);
            }
            let Some(found) = presets::find(&preset) else {
                bail!("unknown preset '{preset}' (known: {})", presets::names().join(", "));
            };
            let mut config = found.config();
            config.output_dir = out;
            run_and_write(&config, threads)
        }
        Command::ConvertSi { b0, meff, freq, value } => {
            let scales = SiScales::new(b0, meff)?;
            anyhow::ensure!(freq.is_finite() && freq > 0.0, "frequency must be positive, got {freq}");
            println!("length_unit_angstrom = {:.6e}", scales.length_angstrom());
            println!("energy_unit_mev = {:.6e}", scales.energy_mev());
            println!("cyclotron_frequency_rad_s = {:.6e}", scales.cyclotron_frequency());
            println!("current_a = {:.6e}", SiScales::current(value, freq));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match main_inner() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
