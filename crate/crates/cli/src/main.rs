use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

use commands::CliError;

#[derive(Parser, Debug)]
#[command(name = "su4kat", version, about = "KAT chart for SU(4): compose, factorize, verify, sample, cover")]
struct Cli {
    /// Output layout
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Pretty,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GroupingArg {
    Kat,
    Hadamard,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ScopeArg {
    Algebra,
    Chart,
    Hadamard,
    Spin6,
    All,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SampleKind {
    Chart,
    Haar,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compose chart parameters into an SU(4) matrix
    Compose {
        /// Parameter file, `-` for stdin
        #[arg(default_value = "-")]
        params: PathBuf,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
        /// Also write K, A1, A2, T under meta.factors
        #[arg(long)]
        factors: bool,
        #[arg(long, value_enum, default_value_t = GroupingArg::Kat)]
        grouping: GroupingArg,
        /// Exit 3 unless the parameters are inside the chart domain
        #[arg(long)]
        require_domain: bool,
    },
    /// Recover chart parameters from a complex4 matrix file
    Factorize {
        #[arg(default_value = "-")]
        matrix: PathBuf,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, env = "SU4KAT_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        starts: usize,
    },
    /// Run self-checks, and check a matrix file if one is given
    Verify {
        file: Option<PathBuf>,
        /// Defaults to `all` without a file and to no suite with one
        #[arg(long, value_enum)]
        scope: Option<ScopeArg>,
    },
    /// Draw seeded samples of chart parameters or Haar matrices
    Sample {
        #[arg(long, value_enum)]
        kind: SampleKind,
        #[arg(short = 'n', default_value_t = 1)]
        count: usize,
        #[arg(long, env = "SU4KAT_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
    /// Map chart parameters to their SO(6) image
    Cover {
        #[arg(default_value = "-")]
        params: PathBuf,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
        /// Add the ±I4 kernel demonstration under meta.kernel
        #[arg(long)]
        check_kernel: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.format {
        Format::Json => su4kat::OutputFormat::Json,
        Format::Pretty => su4kat::OutputFormat::Pretty,
    };
    let result = match cli.command {
        Command::Compose { params, output, factors, grouping, require_domain } => {
            let grouping = match grouping {
                GroupingArg::Kat => su4kat::Grouping::Kat,
                GroupingArg::Hadamard => su4kat::Grouping::Hadamard,
            };
            commands::compose(&params, &output, factors, grouping, require_domain, format)
        }
        Command::Factorize { matrix, output, tol, seed, starts } => {
            let opts = su4kat::SolverOptions { tol, seed, max_starts: starts, ..Default::default() };
            commands::factorize(&matrix, &output, &opts, format)
        }
        Command::Verify { file, scope } => {
            let scope = scope.map(|s| match s {
                ScopeArg::Algebra => su4kat::verify::Scope::Algebra,
                ScopeArg::Chart => su4kat::verify::Scope::Chart,
                ScopeArg::Hadamard => su4kat::verify::Scope::Hadamard,
                ScopeArg::Spin6 => su4kat::verify::Scope::Spin6,
                ScopeArg::All => su4kat::verify::Scope::All,
            });
            commands::verify(file.as_deref(), scope, format)
        }
        Command::Sample { kind, count, seed, output } => {
            commands::sample(matches!(kind, SampleKind::Haar), count, seed, &output, format)
        }
        Command::Cover { params, output, check_kernel } => {
            commands::cover(&params, &output, check_kernel, format)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("su4kat: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Input(_) => 2,
            CliError::Domain(_) => 3,
            CliError::NoConvergence(_) => 4,
            CliError::NonUnitary(_) => 5,
        }
    }
}
