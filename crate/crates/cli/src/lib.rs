//! Command-line front end for `surfcalc`.
//!
//! [`run`] parses arguments, dispatches to the library and prints JSON or an
//! aligned table. Exit codes: 0 on success, 1 on a domain error (with a JSON
//! report on stderr), 2 on a usage error or malformed input.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

pub mod commands;
pub mod golden;
pub mod render;

/// Failure of a CLI invocation.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Domain(#[from] surfcalc::Error),
    #[error("{0}")]
    Usage(String),
    /// Golden comparison ran and found differences.
    #[error("golden mismatch in {0}")]
    GoldenMismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) | CliError::GoldenMismatch(_) => 1,
            CliError::Usage(_) => 2,
        }
    }

    pub fn report(&self) -> Value {
        match self {
            CliError::Domain(e) => json!({"error": e.kind(), "message": e.to_string()}),
            CliError::Usage(m) => json!({"error": "Usage", "message": m}),
            CliError::GoldenMismatch(s) => json!({"error": "GoldenMismatch", "message": format!("suite {s} differs from its golden file")}),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(name = "surfcalc", version, about = "Exact computations on algebraic surfaces")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The 27 lines on a cubic surface.
    Cubic {
        #[command(subcommand)]
        cmd: CubicCmd,
    },
    /// Divisors on rational normal scrolls.
    Scroll {
        #[command(subcommand)]
        cmd: ScrollCmd,
    },
    /// Curve configurations and their singularities.
    Config {
        #[command(subcommand)]
        cmd: ConfigCmd,
    },
    /// Plurigenera of elliptic fibrations.
    Fib {
        #[command(subcommand)]
        cmd: FibCmd,
    },
    /// Numerical invariants of surfaces.
    Classify {
        #[command(subcommand)]
        cmd: ClassifyCmd,
    },
    /// Run a golden-value suite, or `all`.
    Golden(GoldenArgs),
}

#[derive(Debug, Subcommand)]
pub enum CubicCmd {
    Lines,
    Triangles,
    Doublesixes,
    Roots,
    WeylOrder,
}

#[derive(Debug, Args)]
pub struct TwistArgs {
    /// Twists `a1,...,an` of the scroll.
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    pub twists: Vec<i64>,
}

#[derive(Debug, Subcommand)]
pub enum ScrollCmd {
    /// Dimension of the space of sections of `eL + dM`.
    H0 {
        #[command(flatten)]
        twists: TwistArgs,
        /// `d,e` for the class `eL + dM`.
        #[arg(long, value_parser = parse_pair, allow_negative_numbers = true)]
        bidegree: (i64, i64),
    },
    /// Base locus of `|eL + dM|` and multiplicities along the subscrolls.
    Baselocus {
        #[command(flatten)]
        twists: TwistArgs,
        #[arg(long, value_parser = parse_pair, allow_negative_numbers = true)]
        bidegree: (i64, i64),
    },
    /// The canonical class.
    Canon {
        #[command(flatten)]
        twists: TwistArgs,
    },
    /// Top intersection of `n` divisor classes, each given as `d,e`.
    Intersect {
        #[command(flatten)]
        twists: TwistArgs,
        #[arg(long, value_parser = parse_pair, allow_negative_numbers = true, required = true)]
        bidegree: Vec<(i64, i64)>,
    },
    /// Admissible scroll types for a trigonal curve of genus `g`.
    Maroni {
        #[arg(long)]
        genus: i64,
    },
    /// Relative cubics on 3-dimensional scrolls `F(0, a2, a3)`.
    Cubicrange {
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
    },
}

#[derive(Debug, Args)]
pub struct InputArg {
    /// Path to a JSON input file.
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum ConfigCmd {
    /// Numerical cycle.
    Zcycle {
        #[command(flatten)]
        input: InputArg,
    },
    /// Du Val recognition.
    Ade {
        #[command(flatten)]
        input: InputArg,
    },
    /// Rational / elliptic Gorenstein classification.
    Classify {
        #[command(flatten)]
        input: InputArg,
        /// Search box as a multiple of the numerical cycle, e.g. `3` or `5/2`.
        #[arg(long, default_value = "3")]
        bound_factor: String,
    },
    /// Numerical `k`-connectedness of a cycle.
    Connected {
        #[command(flatten)]
        input: InputArg,
        /// Cycle as a JSON array or a map from curve names to coefficients.
        #[arg(long)]
        cycle: String,
        #[arg(long, default_value_t = 1)]
        k: i64,
    },
    /// Zariski decomposition of a divisor supported on the curves.
    Zariski {
        #[command(flatten)]
        input: InputArg,
        /// Coefficients as a JSON array or name map; entries may be "p/q".
        #[arg(long)]
        divisor: String,
    },
    /// Subtract `-2`-curves on which the divisor is negative.
    Reduce {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        divisor: String,
        /// Require every curve to be a `-2`-curve.
        #[arg(long)]
        k3: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum FibCmd {
    /// The fractional divisor `Δ` with `K = φ*Δ`.
    Delta {
        #[command(flatten)]
        input: InputArg,
    },
    /// Plurigenus `P_m`; an interval when only bounds are known.
    Pm {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        m: i64,
    },
    /// Multiplicities with `K` torsion over `P¹`.
    Torsion {
        #[arg(long, default_value_t = 4)]
        parts_max: usize,
    },
    /// Multiplicities with `κ = 1` and `P₁₂ ≤ 1`.
    P12,
    /// Tame equivalent of wild fibres.
    Wild {
        #[command(flatten)]
        input: InputArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum ClassifyCmd {
    /// Cases with `p_g ≤ 1`.
    Table,
    /// Betti numbers and signature of a regular surface.
    Invariants {
        #[arg(long, allow_negative_numbers = true)]
        chi: i64,
        #[arg(long, allow_negative_numbers = true)]
        k2: i64,
    },
    /// Riemann–Roch `χ(O(D))`.
    Rr {
        #[arg(long, allow_negative_numbers = true)]
        chi: i64,
        #[arg(long, allow_negative_numbers = true)]
        k_dot_d: i64,
        #[arg(long, allow_negative_numbers = true)]
        d2: i64,
    },
    /// Hodge index check on two classes.
    Index {
        #[arg(long, allow_negative_numbers = true)]
        d1_sq: i64,
        #[arg(long, allow_negative_numbers = true)]
        d1_d2: i64,
        #[arg(long, allow_negative_numbers = true)]
        d2_sq: i64,
    },
    /// `sup{t : H + tK nef}` on declared curves.
    NefThreshold {
        #[command(flatten)]
        input: InputArg,
    },
    /// Case of the numerical Kodaira dimension.
    Nu {
        #[arg(long, allow_negative_numbers = true)]
        k2: i64,
        /// `K` is numerically trivial.
        #[arg(long)]
        num_zero: bool,
        /// `K` is not nef.
        #[arg(long)]
        not_nef: bool,
    },
}

#[derive(Debug, Args)]
pub struct GoldenArgs {
    /// Suite name, or `all`.
    pub suite: String,
    /// Overwrite the golden files with the current output.
    #[arg(long)]
    pub bless: bool,
    /// Directory holding the golden files.
    #[arg(long)]
    pub dir: Option<PathBuf>,
}

fn parse_pair(s: &str) -> std::result::Result<(i64, i64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected two integers `d,e`, got {s:?}"))?;
    let p = |x: &str| x.trim().parse::<i64>().map_err(|e| format!("{x:?}: {e}"));
    Ok((p(a)?, p(b)?))
}

/// Budget override from `SURFCALC_BUDGET`.
pub fn budget_override() -> CliResult<Option<u128>> {
    match std::env::var("SURFCALC_BUDGET") {
        Ok(v) => v
            .trim()
            .parse::<u128>()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("SURFCALC_BUDGET must be a nonnegative integer, got {v:?}"))),
        Err(_) => Ok(None),
    }
}

/// Runs the CLI on `argv` (including the program name), writing to the
/// given streams, and returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Golden(g) => golden::run_cli(g, out),
        cmd => commands::dispatch(cmd).and_then(|v| {
            let text = render::render(&v, cli.format);
            match writeln!(out, "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Usage(e.to_string())),
                _ => Ok(()),
            }
        }),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "{}", e.report());
            e.exit_code()
        }
    }
}

/// Runs the CLI against the process's stdout and stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
