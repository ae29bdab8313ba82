use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use semigroup_cm::cli::{run, Command, Format, RunConfig, EXIT_INPUT, EXIT_INTERNAL};
use semigroup_cm::homology::FieldSpec;

/// Cohen-Macaulay tests for S2-ifications of affine semigroup rings.
#[derive(Parser)]
#[command(name = "semigroup-cm", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Lattice, cone facets and generator incidences.
    Facets(CommonArgs),
    /// The transform into facet-value coordinates.
    Transform(CommonArgs),
    /// Standardness conditions for the embedding.
    Standard(CommonArgs),
    /// The complex of generator zero-sets and its non-faces.
    Complex(CommonArgs),
    /// Local cohomology contributions per non-face.
    Cohomology(CommonArgs),
    /// Elements of S' not in S up to a degree.
    S2(CommonArgs),
    /// Cohen-Macaulay verdict for k[S'].
    Cm(CommonArgs),
    /// Cross-check for toric surfaces in P4.
    Gw(CommonArgs),
    /// Everything above.
    Report(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Input file (text or JSON); `-` reads stdin.
    input: PathBuf,
    /// Coefficient field: `rational` or `fp:<p>`.
    #[arg(long, default_value = "rational")]
    field: FieldSpec,
    /// Facet-value box bound for G_J enumeration.
    #[arg(long)]
    bound: Option<u64>,
    /// Degree bound for S' \ S enumeration.
    #[arg(long)]
    degree: Option<u64>,
    #[arg(long, default_value = "text")]
    format: Format,
    /// Accepted for reproducible invocations; all computations are deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

impl Sub {
    fn split(self) -> (Command, CommonArgs) {
        match self {
            Sub::Facets(a) => (Command::Facets, a),
            Sub::Transform(a) => (Command::Transform, a),
            Sub::Standard(a) => (Command::Standard, a),
            Sub::Complex(a) => (Command::Complex, a),
            Sub::Cohomology(a) => (Command::Cohomology, a),
            Sub::S2(a) => (Command::S2, a),
            Sub::Cm(a) => (Command::Cm, a),
            Sub::Gw(a) => (Command::Gw, a),
            Sub::Report(a) => (Command::Report, a),
        }
    }
}

fn read_input(path: &PathBuf) -> std::io::Result<Vec<u8>> {
    let mut buf = Vec::new();
    if path.as_os_str() == "-" {
        std::io::stdin().read_to_end(&mut buf)?;
    } else {
        buf = std::fs::read(path)?;
    }
    Ok(buf)
}

fn exit(code: i32) -> ExitCode {
    ExitCode::from(u8::try_from(code).unwrap_or(u8::MAX))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return exit(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    let (cmd, args) = cli.command.split();
    let bytes = match read_input(&args.input) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {}: {e}", args.input.display());
            return exit(EXIT_INPUT);
        }
    };
    let cfg = RunConfig { field: args.field, bound: args.bound, degree: args.degree, format: args.format };
    let outcome = match std::panic::catch_unwind(|| run(cmd, &bytes, &cfg)) {
        Ok(o) => o,
        Err(_) => return exit(EXIT_INTERNAL),
    };
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    exit(outcome.exit_code)
}
