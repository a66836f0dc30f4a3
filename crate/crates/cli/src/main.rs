//! `semicount`: count numerical and cone semigroups, list addition tables,
//! fit counting quasi-polynomials and run the verification suites.

mod cache;
mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Format;

#[derive(Parser, Debug)]
#[command(name = "semicount", version, about = "Exact semigroup counting through lattice points of polytopes")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,

    /// Fit cache directory; overrides SEMICOUNT_CACHE_DIR.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    /// Neither read nor write the fit cache.
    #[arg(long, global = true)]
    no_cache: bool,

    /// Largest period tried when detecting a quasi-polynomial.
    #[arg(long, global = true, default_value_t = semicount::ehrhart::DEFAULT_MAX_PERIOD)]
    max_period: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count numerical semigroups with n nonzero elements below the Frobenius number f.
    Count {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        f: u64,
        #[arg(long, value_enum, default_value_t = Method::Polytopes)]
        method: Method,
    },
    /// List the realizable addition tables on n elements with their polytopes.
    Tables {
        #[arg(long)]
        n: usize,
    },
    /// Fit the quasi-polynomial f ↦ N(n, f).
    Fit {
        #[arg(long)]
        n: usize,
        /// Largest f that may be sampled.
        #[arg(long, default_value_t = 500)]
        max_f: u64,
        /// Fit with this period instead of detecting one.
        #[arg(long)]
        period: Option<usize>,
        /// Held-out samples per residue class.
        #[arg(long, default_value_t = 2)]
        validation: usize,
    },
    /// Count semigroups in a cone whose nonzero window elements number n.
    Affine(AffineArgs),
    /// Run verification checks.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        /// Seconds after which remaining checks are skipped.
        #[arg(long, default_value_t = 600)]
        budget: u64,
    },
}

#[derive(Args, Debug)]
struct AffineArgs {
    /// File with a `cone:` line.
    #[arg(long)]
    cone: PathBuf,
    /// File with a `window:` line.
    #[arg(long)]
    window: PathBuf,
    #[arg(long)]
    n: usize,
    /// Count at this dilation.
    #[arg(long, required_unless_present = "fit", conflicts_with = "fit")]
    alpha: Option<u64>,
    /// Fit the quasi-polynomial in α instead.
    #[arg(long)]
    fit: bool,
    /// Largest α sampled by --fit.
    #[arg(long, default_value_t = 60, requires = "fit")]
    max_alpha: u64,
    /// Held-out samples per residue class for --fit.
    #[arg(long, default_value_t = 2, requires = "fit")]
    validation: usize,
    /// Accept windows given as raw constraint lists.
    #[arg(long)]
    allow_raw_window: bool,
    /// Largest number of convex pieces per table.
    #[arg(long, default_value_t = semicount::affine::DEFAULT_PIECE_CAP)]
    piece_cap: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Method {
    Oracle,
    Polytopes,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SuiteArg {
    Numsemi,
    Ehrhart,
    Affine,
    All,
}

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Exit {
    Ok = 0,
    Usage = 1,
    Mismatch = 2,
    FitFailure = 3,
    Cap = 4,
}

/// A failure with its exit code and message.
#[derive(Debug)]
struct Failure {
    exit: Exit,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { exit: Exit::Usage, message: message.into() }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Exit::Usage as u8 } else { Exit::Ok as u8 });
        }
    };
    match commands::run(&cli) {
        Ok((out, exit)) => {
            print!("{}", out.render(cli.format));
            ExitCode::from(exit as u8)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.exit as u8)
        }
    }
}
