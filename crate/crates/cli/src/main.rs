//! `curveseg`: straight-line graph isotopic to a real plane curve.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use curveseg::emit::{to_dot, to_json, to_svg, write_file};
use curveseg::report::TopologyReport;
use curveseg::text::parse_polynomial;
use curveseg::{run, Error, Mode, Rational, RunConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Float,
    Certified,
}

#[derive(Debug, Parser)]
#[command(
    name = "curveseg",
    version,
    about = "Computes a straight-line graph isotopic to the real curve g(x, y) = 0",
    after_help = "Without --json, --dot or --svg the JSON report goes to standard output.\n\
                  The environment variable CURVESEG_SEED overrides --seed."
)]
struct Cli {
    /// Polynomial in x and y, e.g. "y^2 - x^3 - x^2".
    polynomial: String,
    #[arg(long, value_enum, default_value = "float")]
    mode: ModeArg,
    /// Fiber interval width and certified box size.
    #[arg(long, default_value = "1/1024", value_parser = parse_rational)]
    epsilon: Rational,
    /// Strip to sweep, as "lo,hi"; both ends must be regular values.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    x_range: Option<(Rational, Rational)>,
    /// Distance of the outer samples from the extreme critical values.
    #[arg(long, default_value = "1", value_parser = parse_rational)]
    margin: Rational,
    /// Regular abscissas to insert, each halving the widest gap.
    #[arg(long = "refine", default_value_t = 0)]
    refine_count: usize,
    /// Resolve every critical point by branch conservation alone.
    #[arg(long)]
    no_derivative_test: bool,
    /// Locate critical points by box subdivision instead of the discriminant.
    #[arg(long)]
    no_discriminant: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    max_shear_attempts: usize,
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    dot: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,
    /// Print the operation counters to standard error.
    #[arg(long)]
    counters: bool,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.trim()
        .parse::<Rational>()
        .map_err(|_| format!("'{s}' is not a rational number (use n or p/q)"))
}

fn parse_range(s: &str) -> Result<(Rational, Rational), String> {
    let (lo, hi) = s
        .split_once(',')
        .ok_or_else(|| format!("'{s}' is not a range (use lo,hi)"))?;
    Ok((parse_rational(lo)?, parse_rational(hi)?))
}

/// One exit status per library error; clap reports usage errors with 2.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 3,
        Error::VerticalLineComponent { .. } => 4,
        Error::GeneralPositionFailure { .. } => 5,
        Error::NegativeBranchCount { .. } => 6,
        Error::EpsilonFloor { .. } => 7,
        Error::Io(_) => 8,
        Error::InvalidConfig(_) => 9,
        Error::ZeroPolynomial => 10,
        Error::EmptyDomain { .. } => 11,
        Error::NonSquarefree => 12,
        Error::ConservationViolation { .. } => 13,
        Error::UnresolvedFiber { .. } => 14,
        Error::AllDerivativesVanish => 15,
        Error::NotSmoothCritical => 16,
        Error::ShrinkEpsilon => 17,
        Error::CoverTooCoarse { .. } => 18,
        Error::NotRegularValue { .. } => 19,
        Error::DuplicateAbscissa { .. } => 20,
    }
}

fn seed(cli_seed: u64) -> Result<u64, Error> {
    match std::env::var("CURVESEG_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("CURVESEG_SEED '{v}' is not an integer"))),
        Err(_) => Ok(cli_seed),
    }
}

fn execute(cli: Cli) -> Result<(), Error> {
    let g = parse_polynomial(&cli.polynomial)?;
    let config = RunConfig {
        mode: match cli.mode {
            ModeArg::Float => Mode::Float,
            ModeArg::Certified => Mode::Certified,
        },
        epsilon: cli.epsilon,
        x_range: cli.x_range,
        margin: cli.margin,
        refine_count: cli.refine_count,
        derivative_test: !cli.no_derivative_test,
        no_discriminant: cli.no_discriminant,
        seed: seed(cli.seed)?,
        max_shear_attempts: cli.max_shear_attempts,
    };
    let outcome = run(&config, &g)?;
    let report = TopologyReport::from_outcome(&outcome);
    let json = to_json(&report);
    if let Some(path) = &cli.json {
        write_file(path, &json)?;
    }
    if let Some(path) = &cli.dot {
        write_file(path, &to_dot(&outcome.graph, &outcome.shear))?;
    }
    if let Some(path) = &cli.svg {
        write_file(path, &to_svg(&outcome.graph, &outcome.shear))?;
    }
    if cli.json.is_none() && cli.dot.is_none() && cli.svg.is_none() {
        std::io::stdout().write_all(json.as_bytes())?;
    }
    if cli.counters {
        let c = outcome.counters;
        eprintln!(
            "counters: ring_ops={} branch_additions={} graph_additions={} derivative_test_ops={} isolations={}",
            c.ring_ops, c.branch_additions, c.graph_additions, c.derivative_test_ops, c.isolations
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("curveseg: error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
