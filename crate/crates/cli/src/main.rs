use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mobius_cli::claims::format_claim;
use mobius_cli::commands::{self, CommandOutput, TraceKind};
use mobius_cli::{run_single, run_verify_all, CliError, Config, OutputFormat};

#[derive(Parser)]
#[command(
    name = "mobius",
    version,
    about = "Verify the K-theory and trace computations for the Mobius foliation"
)]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalOpts {
    /// Half-width L of the sampling grid [-L, L].
    #[arg(long, global = true, default_value_t = Config::default().half_width)]
    half_width: f64,
    /// Number of grid samples (odd).
    #[arg(long, global = true, default_value_t = Config::default().samples)]
    samples: usize,
    /// Pass threshold for homotopy samples and group-algebra identities.
    #[arg(long, global = true, default_value_t = Config::default().tolerance)]
    tol: f64,
    /// Number of steps of the unitary homotopy.
    #[arg(long, global = true, default_value_t = Config::default().homotopy_steps)]
    steps: usize,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Write the report to a file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run every claim C1..C10.
    VerifyAll,
    /// Run one claim.
    Claim { id: String },
    /// Wrap count of the leaf through a fibre coordinate.
    Leaves {
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
    },
    /// Holonomy group at a fibre coordinate.
    Holonomy {
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
    },
    /// Solve the six-term sequence with the measured boundary map.
    Kgroups,
    /// Pair a trace with [p+] - [p-].
    Pairing {
        #[arg(long, value_enum)]
        trace: TraceKind,
    },
}

impl GlobalOpts {
    fn config(&self) -> Config {
        Config {
            half_width: self.half_width,
            samples: self.samples,
            tolerance: self.tol,
            homotopy_steps: self.steps,
            output: if self.json {
                OutputFormat::Json
            } else {
                OutputFormat::Text
            },
        }
    }
}

fn emit(opts: &GlobalOpts, body: &str) -> Result<(), CliError> {
    match &opts.out {
        Some(path) => std::fs::write(path, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

fn render(config: &Config, out: CommandOutput) -> String {
    match config.output {
        OutputFormat::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&out.value).expect("serializable")
        ),
        OutputFormat::Text => out.text,
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let config = cli.opts.config();
    config.validate()?;
    let body;
    let mut pass = true;
    match &cli.command {
        Command::VerifyAll => {
            let report = run_verify_all(&config)?;
            pass = report.all_pass();
            body = match config.output {
                OutputFormat::Json => format!("{}\n", report.to_json()),
                OutputFormat::Text => report.to_text(),
            };
        }
        Command::Claim { id } => {
            let report = run_single(id, &config)?;
            pass = report.pass;
            body = match config.output {
                OutputFormat::Json => {
                    format!(
                        "{}\n",
                        serde_json::to_string_pretty(&report).expect("serializable")
                    )
                }
                OutputFormat::Text => format_claim(&report),
            };
        }
        Command::Leaves { r } => body = render(&config, commands::leaves(*r)?),
        Command::Holonomy { r } => body = render(&config, commands::holonomy(*r)?),
        Command::Kgroups => body = render(&config, commands::kgroups(&config)?),
        Command::Pairing { trace } => body = render(&config, commands::pairing(*trace, &config)?),
    }
    emit(&cli.opts, &body)?;
    Ok(pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("mobius: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
