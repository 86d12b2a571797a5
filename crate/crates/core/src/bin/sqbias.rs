use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sqbias::bounds::bound_curve;
use sqbias::extremal::{scan_three_point, Axis, GridSpec, Region, SigmaSampling};
use sqbias::metrics::l1_distance;
use sqbias::transforms::{zero_bias_with_report, TransformKind};
use sqbias::verify::{self, Suite};
use sqbias::Distribution;

/// Exit code for misuse: bad flags, unreadable input, failed preconditions.
const EXIT_USAGE: u8 = 2;
/// Exit code for a violated inequality or identity.
const EXIT_VIOLATION: u8 = 3;

#[derive(Parser)]
#[command(name = "sqbias", version, about = "Size-, zero- and square-bias transformations and their bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply a transformation to a distribution file.
    Transform {
        input: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the L1 distance between two distributions.
    Metric { a: PathBuf, b: PathBuf },
    /// Write r(t) and its bounds on a uniform t-grid as CSV.
    Bounds {
        input: PathBuf,
        #[arg(long, default_value_t = 5.0)]
        tmax: f64,
        #[arg(long, default_value_t = 50)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Standardize the input first.
        #[arg(long)]
        standardize: bool,
        /// Add a column for the twice-integrated bound with the minimum taken outside the integral.
        #[arg(long)]
        cor2_outer: bool,
    },
    /// Run a seeded verification suite and print its report.
    Verify {
        #[arg(long)]
        suite: Suite,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        count: Option<usize>,
    },
    /// Maximize g over a grid of three-point laws.
    ExtremalScan {
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true, default_values_t = [-5.0, -0.1])]
        x: Vec<f64>,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true, default_values_t = [-3.0, 0.0])]
        y: Vec<f64>,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true, default_values_t = [0.1, 5.0])]
        z: Vec<f64>,
        /// Points per axis.
        #[arg(long, default_value_t = 20)]
        points: usize,
        /// sigma^2 samples per (x, y, z).
        #[arg(long, default_value_t = 20)]
        sigma_samples: usize,
        /// Fixed sigma^2 values instead of per-triple sampling.
        #[arg(long, num_args = 1.., allow_negative_numbers = true)]
        sigma2: Option<Vec<f64>>,
        #[arg(long, value_enum, default_value_t = RegionArg::All)]
        region: RegionArg,
        #[arg(long, default_value_t = 1e-6)]
        margin: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Size,
    Zero,
    Square,
    DoubleSize,
    Uprod,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegionArg {
    All,
    Case1,
    Case2,
    Case3,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<sqbias::Error> for Failure {
    fn from(e: sqbias::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn read_dist(path: &Path) -> Result<Distribution, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    Distribution::from_json(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::usage(format!("{}: {e}", p.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::usage(e.to_string())),
    }
}

fn transform(input: &Path, kind: Kind, out: Option<&Path>) -> CmdResult {
    let d = read_dist(input)?;
    let result = match kind {
        Kind::Zero => {
            let (z, factor) = zero_bias_with_report(&d)?;
            if (factor - 1.0).abs() > 1e-12 {
                eprintln!("note: zero-bias density renormalized by {factor:.17e}");
            }
            z
        }
        Kind::Size => TransformKind::Size.apply(&d)?,
        Kind::Square => TransformKind::Square.apply(&d)?,
        Kind::DoubleSize => TransformKind::DoubleSize.apply(&d)?,
        Kind::Uprod => TransformKind::UniformProduct.apply(&d)?,
    };
    emit(out, &(result.to_json() + "\n"))
}

fn metric(a: &Path, b: &Path) -> CmdResult {
    let l1 = l1_distance(&read_dist(a)?, &read_dist(b)?);
    println!("{l1}");
    Ok(())
}

fn bounds(input: &Path, tmax: f64, steps: usize, out: Option<&Path>, standardize: bool, outer: bool) -> CmdResult {
    let mut d = read_dist(input)?;
    if standardize {
        d = d.standardize()?;
    }
    let curve = bound_curve(&d, tmax, steps)?;
    let mut buf = Vec::new();
    curve.write_csv(&mut buf, outer).expect("writing to memory");
    emit(out, &String::from_utf8(buf).expect("csv is ascii"))?;
    let (slack, name, t) = curve.min_slack();
    if !curve.holds() {
        return Err(Failure {
            code: EXIT_VIOLATION,
            message: format!("bound {name} violated at t = {t}: slack {slack:e}"),
        });
    }
    Ok(())
}

fn run_verify(suite: Suite, seed: u64, count: Option<usize>) -> CmdResult {
    match verify::run(suite, seed, count) {
        Ok(rep) => {
            println!("{}", serde_json::to_string_pretty(&rep).expect("report serializes"));
            Ok(())
        }
        Err(c) => {
            println!("{}", serde_json::to_string_pretty(&*c).expect("counterexample serializes"));
            Err(Failure {
                code: EXIT_VIOLATION,
                message: format!("{} failed at instance {}: {}", c.suite, c.index, c.detail),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Transform { input, kind, out } => transform(&input, kind, out.as_deref()),
        Command::Metric { a, b } => metric(&a, &b),
        Command::Bounds { input, tmax, steps, out, standardize, cor2_outer } => {
            bounds(&input, tmax, steps, out.as_deref(), standardize, cor2_outer)
        }
        Command::Verify { suite, seed, count } => run_verify(suite, seed, count),
        Command::ExtremalScan { x, y, z, points, sigma_samples, sigma2, region, margin, out } => {
            let spec = GridSpec {
                x: Axis::linspace(x[0], x[1], points),
                y: Axis::linspace(y[0], y[1], points),
                z: Axis::linspace(z[0], z[1], points),
                sigma2: match sigma2 {
                    Some(v) => SigmaSampling::Fixed(v),
                    None => SigmaSampling::Uniform(sigma_samples),
                },
                region: match region {
                    RegionArg::All => Region::All,
                    RegionArg::Case1 => Region::Case1,
                    RegionArg::Case2 => Region::Case2,
                    RegionArg::Case3 => Region::Case3,
                },
                margin,
            };
            scan(&spec, out.as_deref())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("sqbias: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn scan(spec: &GridSpec, out: Option<&Path>) -> CmdResult {
    let rep = scan_three_point(spec)?;
    emit(out, &(rep.to_json() + "\n"))?;
    if rep.max_g > 1e-9 {
        return Err(Failure {
            code: EXIT_VIOLATION,
            message: format!("max g = {} exceeds 1e-9", rep.max_g),
        });
    }
    Ok(())
}
