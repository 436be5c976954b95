use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qfrob_cli::commands::{run_with_parallelism, Command};
use qfrob_cli::schema::load_definition;
use qfrob_core::{IdentityTestConfig, TestMode};

/// Exact verification of metric pencils, hydrodynamic Poisson brackets,
/// potential deformations, and quasi-Frobenius algebra identities.
///
/// Exit codes: 0 all checks pass, 1 at least one check fails, 2 usage or
/// parse error, 3 indeterminate (probabilistic mode could not sample).
#[derive(Parser)]
#[command(name = "qfrob", version, about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the five Poisson conditions on bracket coefficients
    CheckPoisson(CommonArgs),
    /// Check compatibility of a pencil (two brackets or two metrics)
    CheckPencil(CommonArgs),
    /// Check that a metric has the declared constant curvature
    CheckCurvature(CommonArgs),
    /// Evaluate the deformation-system residuals of a potential family
    Residuals(CommonArgs),
    /// Evaluate the associativity residuals of a scalar potential
    CheckWdvv(CommonArgs),
    /// Run algebra identity checks (structure constants, potential family, or form)
    CheckAlgebra(CommonArgs),
    /// Build canonical coefficients from potentials, or reconstruct potentials
    Canonical(CommonArgs),
    /// Coefficients of the local member of a bracket pencil
    LocalMember(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Definition file (TOML; see docs/format.md)
    #[arg(long)]
    input: PathBuf,

    /// Identity-testing mode
    #[arg(long, value_enum, default_value_t = ModeArg::Symbolic)]
    mode: ModeArg,

    /// Seed for probabilistic mode
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Evaluation points per identity in probabilistic mode
    #[arg(long, default_value_t = 8)]
    trials: u32,

    /// Bound M for random rational numerators/denominators
    #[arg(long = "sample-range", default_value_t = 1_000_000)]
    sample_range: u64,

    /// Report format
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,

    /// Worker threads for per-component zero testing
    #[arg(long, default_value_t = 1)]
    parallel: usize,

    /// Append wall-time lines to text output
    #[arg(long, default_value_t = false)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Symbolic,
    Probabilistic,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    JsonLike,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match &cli.command {
        Cmd::CheckPoisson(a) => (Command::CheckPoisson, a),
        Cmd::CheckPencil(a) => (Command::CheckPencil, a),
        Cmd::CheckCurvature(a) => (Command::CheckCurvature, a),
        Cmd::Residuals(a) => (Command::Residuals, a),
        Cmd::CheckWdvv(a) => (Command::CheckWdvv, a),
        Cmd::CheckAlgebra(a) => (Command::CheckAlgebra, a),
        Cmd::Canonical(a) => (Command::Canonical, a),
        Cmd::LocalMember(a) => (Command::LocalMember, a),
    };

    if args.parallel == 0 {
        eprintln!("error: --parallel must be at least 1");
        return ExitCode::from(2);
    }
    if args.sample_range == 0 {
        eprintln!("error: --sample-range must be at least 1");
        return ExitCode::from(2);
    }

    let definition = match load_definition(&args.input) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };

    let cfg = IdentityTestConfig {
        mode: match args.mode {
            ModeArg::Symbolic => TestMode::Symbolic,
            ModeArg::Probabilistic => TestMode::Probabilistic,
        },
        trials: args.trials,
        seed: args.seed,
        sample_range: args.sample_range,
    };

    let label = args.input.display().to_string();
    match run_with_parallelism(command, &definition, &cfg, &label, args.parallel) {
        Ok(report) => {
            match args.format {
                FormatArg::Text => print!("{}", report.render_text(args.timings)),
                FormatArg::JsonLike => print!("{}", report.render_json()),
            }
            ExitCode::from(u8::try_from(report.result.exit_code()).unwrap_or(1))
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
