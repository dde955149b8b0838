use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use riesz_caps_cli::{newton_distance, run, CliError, Overrides, Scenario};

#[derive(Debug, Parser)]
#[command(name = "riesz-caps", version, about = "Equilibrium supports on spherical caps under axis fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a scenario file.
    Run {
        scenario: PathBuf,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Grid size override.
        #[arg(long)]
        grid: Option<usize>,
        /// Tolerance override.
        #[arg(long)]
        tol: Option<f64>,
        /// Seed override.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print the Newtonian critical distance `ρ₊(d)`.
    NewtonDistance {
        #[arg(long)]
        d: u32,
    },
}

fn execute(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Run { scenario, out, grid, tol, seed } => {
            let mut sc = Scenario::load(&scenario)?;
            sc.apply(&Overrides { grid, tol, seed });
            let output = run(&sc, &out)?;
            serde_json::to_string_pretty(&output.summary).map_err(|e| CliError::Io(e.to_string()))
        }
        Command::NewtonDistance { d } => {
            if d < 2 {
                return Err(CliError::Usage("d must be at least 2".into()));
            }
            let v = newton_distance(d)?;
            Ok(format!("rho_plus = {}\nresidual = {}", v["rho_plus"], v["residual"]))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(text) => {
            println!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
