use std::path::PathBuf;
use std::process::ExitCode;

use brieskorn_lab::{run, CliError, Command, Overrides, Problem, ProblemSpec, RunOptions};
use clap::Parser;

/// Pole order and Hodge filtrations of projective hypersurface complements.
#[derive(Parser, Debug)]
#[command(name = "brieskorn-lab", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Problem spec file (TOML); `-` reads standard input.
    #[arg(long)]
    input: PathBuf,
    /// Largest q for the hodge filtration and the family connection.
    #[arg(long)]
    q_max: Option<u32>,
    /// Emit the JSON report instead of text tables
    #[arg(long)]
    json: bool,
    /// Comma-separated rational sample values for the family parameter.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    samples: Option<Vec<String>>,
    /// Equal ranks in a row needed to accept a stabilized image
    #[arg(long)]
    stab_window: Option<usize>,
    /// Largest power of f tried before giving up
    #[arg(long)]
    stab_max: Option<u32>,
    /// Worker threads for the compute kernels.
    #[arg(long)]
    threads: Option<usize>,
    /// Record wall-clock time in the report.
    #[arg(long)]
    timing: bool,
}

fn execute(args: &Args) -> Result<brieskorn_lab::Report, CliError> {
    if let Some(t) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Input(format!("--threads: {e}")))?;
    }
    let spec = if args.input.as_os_str() == "-" {
        let mut text = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut text)
            .map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        ProblemSpec::from_toml(&text)?
    } else {
        ProblemSpec::load(&args.input)?
    };
    let overrides = Overrides {
        samples: args.samples.clone(),
        window: args.stab_window,
        max_power: args.stab_max,
    };
    let problem = Problem::new(spec, &overrides)?;
    run(
        args.command,
        &problem,
        RunOptions {
            q_max: args.q_max,
            timing: args.timing,
        },
    )
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(report) => {
            if args.json {
                print!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            if report.all_checks_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
