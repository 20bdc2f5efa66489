//! `clockdesign`: command-line surface of the lattice-clock design toolkit.
//!
//! Every subcommand reads a scenario (bundled `cs-baseline`/`rb-comparison`
//! or a TOML file), computes one module's outputs, and writes plain-text
//! artifacts (CSV/JSON) into the output directory. `report` runs everything.
//!
//! Exit codes: 0 success, 2 usage error, 3 configuration error,
//! 4 computation error.

mod commands;
mod config;

use clap::{Args, Parser, Subcommand};
use commands::Ctx;
use config::Scenario;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "clockdesign",
    version,
    about = "Lattice optical clock design calculations"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario name (cs-baseline, rb-comparison) or path to a TOML file.
    #[arg(long, global = true, default_value = "cs-baseline")]
    scenario: String,
    /// Output directory for generated artifacts.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Artifact formats to emit.
    #[arg(long, global = true, value_delimiter = ',',
          default_values = ["csv", "json", "text"])]
    formats: Vec<commands::OutputFormat>,
}

#[derive(Subcommand)]
enum Command {
    /// Polarizability computations.
    Polarizability {
        #[command(subcommand)]
        sub: PolarizabilityCmd,
    },
    /// Magic trapping conditions.
    Magic {
        #[command(subcommand)]
        sub: MagicCmd,
    },
    /// Hyperfine + Zeeman structure.
    Zeeman {
        #[command(subcommand)]
        sub: ZeemanCmd,
    },
    /// Trap geometry, depth, and sideband structure.
    Lattice {
        #[command(subcommand)]
        sub: LatticeCmd,
    },
    /// Short-term stability budget.
    Stability {
        #[command(subcommand)]
        sub: StabilityCmd,
    },
    /// Systematic-shift error budget.
    Systematics {
        #[command(subcommand)]
        sub: SystematicsCmd,
    },
    /// Run the lock-servo Monte Carlo.
    Simulate {
        /// RNG seed override.
        #[arg(long)]
        seed: Option<u64>,
        /// Duration override, s.
        #[arg(long)]
        duration: Option<f64>,
    },
    /// Run every module and emit a single report document.
    Report,
}

#[derive(Subcommand)]
enum PolarizabilityCmd {
    /// Scan α0/α2 and the differential polarizability over a window.
    Scan {
        /// Window bounds, nm.
        #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
        window: Option<Vec<f64>>,
        /// Grid step, nm.
        #[arg(long)]
        step: Option<f64>,
    },
}

#[derive(Subcommand)]
enum MagicCmd {
    /// Locate magic wavelengths (roots of the differential polarizability).
    Find {
        #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
        window: Option<Vec<f64>>,
        #[arg(long)]
        step: Option<f64>,
    },
}

#[derive(Subcommand)]
enum ZeemanCmd {
    /// Diagonalize and export eigenvalue maps over the field grid.
    Map {
        /// Level key (e.g. 5d5/2); all levels with hyperfine data if omitted.
        #[arg(long)]
        level: Option<String>,
    },
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// Compute geometry, depth, sidebands, and depumping.
    Design,
}

#[derive(Subcommand)]
enum StabilityCmd {
    /// Compute the quantum-noise and intermodulation budget.
    Budget,
}

#[derive(Subcommand)]
enum SystematicsCmd {
    /// Emit the sensitivity-coefficient table with control requirements.
    Table {
        /// Timing target, e.g. 1ns@30d.
        #[arg(long)]
        target: Option<String>,
        /// Split the timing budget evenly across rows instead of allotting
        /// the full budget to each row.
        #[arg(long)]
        equal_split: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let scenario = match Scenario::resolve(&cli.common.scenario) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("configuration error: {e:#}");
            return ExitCode::from(3);
        }
    };
    let ctx = match Ctx::new(scenario, &cli.common.out, cli.common.formats.clone()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("configuration error: {e:#}");
            return ExitCode::from(3);
        }
    };

    let result = match &cli.command {
        Command::Polarizability {
            sub: PolarizabilityCmd::Scan { window, step },
        } => commands::polarizability_scan(&ctx, pair(window), *step),
        Command::Magic {
            sub: MagicCmd::Find { window, step },
        } => commands::magic_find(&ctx, pair(window), *step),
        Command::Zeeman {
            sub: ZeemanCmd::Map { level },
        } => commands::zeeman_map_cmd(&ctx, level.as_deref()),
        Command::Lattice {
            sub: LatticeCmd::Design,
        } => commands::lattice_design(&ctx),
        Command::Stability {
            sub: StabilityCmd::Budget,
        } => commands::stability_budget(&ctx),
        Command::Systematics {
            sub:
                SystematicsCmd::Table {
                    target,
                    equal_split,
                },
        } => commands::systematics_table(&ctx, target.as_deref(), *equal_split),
        Command::Simulate { seed, duration } => commands::simulate(&ctx, *seed, *duration),
        Command::Report => commands::report(&ctx),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            // Configuration problems (missing sections, bad levels, file
            // issues) exit 3; computation failures exit 4.
            let msg = format!("{e:#}");
            let config_like = msg.contains("scenario")
                || msg.contains("section")
                || msg.contains("bad ")
                || msg.contains("dataset")
                || msg.contains("reading")
                || msg.contains("unknown");
            if config_like {
                eprintln!("configuration error: {msg}");
                ExitCode::from(3)
            } else {
                eprintln!("computation error: {msg}");
                ExitCode::from(4)
            }
        }
    }
}

fn pair(v: &Option<Vec<f64>>) -> Option<(f64, f64)> {
    v.as_ref().map(|w| (w[0], w[1]))
}
