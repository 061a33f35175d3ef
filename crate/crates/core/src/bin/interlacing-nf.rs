use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use interlacing_nf::cli::{run, Command, Format, RunConfig, Source};

#[derive(Parser)]
#[command(
    name = "interlacing-nf",
    version,
    about = "Interlacing patterns and local normal forms for U(n) on U(n+1) coadjoint orbits"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Pattern, normal form data, dimensions and exact self-checks.
    Analyze(Common),
    /// Numerical oracles at the canonical point and sampled conjugates.
    Verify(Common),
    /// Face lattice of the polytope of all mu for the given lambda.
    Faces(Common),
}

#[derive(Args)]
struct Common {
    /// Comma-separated rationals, e.g. "6,6,5,3/2".
    #[arg(long, allow_hyphen_values = true, conflicts_with = "input")]
    lambda: Option<String>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "input")]
    mu: Option<String>,
    /// JSON file {"lambda": [...], "mu": [...]} with rationals as strings.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Also check slice dimensions at every sampled point.
    #[arg(long)]
    sample_slices: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

fn config(command: Command, c: Common) -> Result<RunConfig, String> {
    let source = match (c.input, c.lambda) {
        (Some(path), _) => Source::File(path),
        (None, Some(lambda)) => Source::Inline { lambda, mu: c.mu },
        (None, None) => return Err("either --lambda or --input is required".into()),
    };
    Ok(RunConfig {
        command,
        source,
        tolerance: c.tol,
        seed: c.seed,
        samples: c.samples,
        format: match c.format {
            OutputFormat::Json => Format::Json,
            OutputFormat::Text => Format::Text,
        },
        sample_slices: c.sample_slices,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = match cli.command {
        Sub::Analyze(c) => config(Command::Analyze, c),
        Sub::Verify(c) => config(Command::Verify, c),
        Sub::Faces(c) => config(Command::Faces, c),
    };
    let cfg = match cfg {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let out = run(&cfg);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.exit_code as u8)
}
