use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use preproj_cli::{run, Command, Format, RunConfig, EXIT_PASS};
use preproj_core::groebner::GroebnerBounds;

#[derive(Parser)]
#[command(name = "preproj", version, about = "Higher preprojective algebras over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Global dimension parameter d (at least 2).
    #[arg(long, global = true, default_value_t = 2)]
    d: usize,
    /// Prime modulus of the coefficient field.
    #[arg(long, global = true, default_value_t = 32003)]
    field: u32,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest tensor degree built before giving up.
    #[arg(long, global = true, default_value_t = 64)]
    max_degree: usize,
    /// Longest projective resolution computed.
    #[arg(long, global = true, default_value_t = 12)]
    max_resolution: usize,
    #[arg(long, global = true, default_value_t = 64)]
    nilpotence_bound: usize,
    #[arg(long, global = true, default_value_t = 30)]
    max_path_length: usize,
    #[arg(long, global = true, default_value_t = 20000)]
    max_dimension: usize,
    /// Resolution length for the negative Ext table, overriding max(2g, d+1).
    #[arg(long, global = true)]
    jmax_override: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Fmt::Json)]
    format: Fmt,
    /// Construction used by `build`: tensor, double-quiver or keller-qp.
    #[arg(long, global = true, default_value = "tensor")]
    construction: String,
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    no_cache: bool,
    /// Record wall-clock timings in the report.
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build Π_d of the input and print it.
    Build { input: PathBuf },
    /// Certify that the input is a d-preprojective algebra.
    Certify { input: PathBuf },
    /// Gorenstein dimension of the input.
    Gorenstein { input: PathBuf },
    /// The d-cluster tilting tower of the input.
    ClusterTilt { input: PathBuf },
    /// Check the hypotheses of the main theorem and rebuild the input.
    Reconstruct { input: PathBuf },
    /// Representation finiteness against selfinjectivity of Π_d.
    SelfinjectiveCorrespondence { input: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Fmt {
    Json,
    Text,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, input) = match cli.command {
        Cmd::Build { input } => (Command::Build, input),
        Cmd::Certify { input } => (Command::Certify, input),
        Cmd::Gorenstein { input } => (Command::Gorenstein, input),
        Cmd::ClusterTilt { input } => (Command::ClusterTilt, input),
        Cmd::Reconstruct { input } => (Command::Reconstruct, input),
        Cmd::SelfinjectiveCorrespondence { input } => (Command::SelfinjectiveCorrespondence, input),
    };
    let mut cfg = RunConfig::new(command, input, cli.d);
    cfg.field = cli.field;
    cfg.seed = cli.seed;
    cfg.max_degree = cli.max_degree;
    cfg.max_resolution = cli.max_resolution;
    cfg.nilpotence_bound = cli.nilpotence_bound;
    cfg.bounds = GroebnerBounds { max_path_length: cli.max_path_length, max_dimension: cli.max_dimension };
    cfg.jmax_override = cli.jmax_override;
    cfg.format = match cli.format {
        Fmt::Json => Format::Json,
        Fmt::Text => Format::Text,
    };
    cfg.construction = cli.construction;
    cfg.cache_dir = if cli.no_cache { None } else { cli.cache_dir };
    cfg.timings = cli.timings;
    let out = run(&cfg);
    if out.code == EXIT_PASS || out.code == preproj_cli::EXIT_FAIL || out.code == preproj_cli::EXIT_INDETERMINATE {
        print!("{}", out.output);
    } else {
        eprint!("{}", out.output);
    }
    ExitCode::from(out.code as u8)
}
