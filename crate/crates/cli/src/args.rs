use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use wpah::interpolation::{DEFAULT_SEED, DEFAULT_TRIALS};
use wpah::{FieldSpec, Rational, Weights};

#[derive(Parser, Debug)]
#[command(
    name = "wpah",
    version,
    about = "Fat-point interpolation in weighted projective space"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Args, Clone, Debug)]
pub struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Seed for point sampling and the random prime.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Independent samples per rank computation.
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: usize,
    /// `rational`, `prime:P` or `random`.
    #[arg(long, default_value = "random", value_parser = parse_field)]
    pub field: FieldSpec,
    /// Write output to this file instead of stdout.
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Number of monomials of each degree.
    Hilbert {
        #[arg(long, value_parser = parse_weights)]
        weights: Weights,
        /// A degree `d` or an inclusive range `lo..hi`.
        #[arg(long)]
        deg: DegRange,
        #[command(flatten)]
        common: Common,
    },
    /// Rank profile of general fat points per degree.
    AhCheck {
        #[arg(long, value_parser = parse_weights)]
        weights: Weights,
        /// Number of points.
        #[arg(long)]
        points: usize,
        /// Multiplicity of every point.
        #[arg(long, default_value_t = 2)]
        mult: u32,
        #[arg(long)]
        deg: DegRange,
        #[command(flatten)]
        common: Common,
    },
    /// Terracini certificate for general double points.
    TerraciniTrace {
        #[arg(long, value_parser = parse_weights)]
        weights: Weights,
        #[arg(long)]
        deg: i64,
        /// Number of double points.
        #[arg(long)]
        points: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Re-check a certificate written by `terracini-trace --format json`.
    CheckCert {
        #[arg(long)]
        input: String,
        #[command(flatten)]
        common: Common,
    },
    /// Generators of the ideal of a point.
    PointIdeal {
        #[arg(long, value_parser = parse_weights)]
        weights: Weights,
        /// Coordinates, comma separated; fractions like `1/2` are allowed.
        #[arg(long, allow_hyphen_values = true)]
        point: PointArg,
        #[command(flatten)]
        common: Common,
    },
    /// Minimal relations among three weights.
    Herzog {
        #[arg(long, value_parser = parse_weights)]
        weights: Weights,
        #[command(flatten)]
        common: Common,
    },
    /// Dimension of a secant variety of the weighted Veronese image.
    SecantDim {
        #[arg(long, value_parser = parse_weights)]
        weights: Weights,
        #[arg(long)]
        deg: u64,
        /// Number of points spanning the secant.
        #[arg(long)]
        rank: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Scan `floor(s_d/3) >= s_(d/2)` in `P(1,b,c)`.
    BoundCheck {
        #[arg(long, value_parser = parse_weights)]
        weights: Weights,
        #[arg(long)]
        deg: DegRange,
        /// Also run the lattice-triangle decomposition in every degree.
        #[arg(long)]
        triangle: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Numerical lemma scans and bound checks.
    VerifySuite {
        #[arg(long, default_value_t = 100_000)]
        max_deg: i64,
        #[arg(long, default_value_t = 12)]
        max_c: u32,
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Hilbert { common, .. }
            | Command::AhCheck { common, .. }
            | Command::TerraciniTrace { common, .. }
            | Command::CheckCert { common, .. }
            | Command::PointIdeal { common, .. }
            | Command::Herzog { common, .. }
            | Command::SecantDim { common, .. }
            | Command::BoundCheck { common, .. }
            | Command::VerifySuite { common, .. } => common,
        }
    }
}

fn parse_weights(s: &str) -> Result<Weights, String> {
    Weights::from_str(s).map_err(|e| e.to_string())
}

fn parse_field(s: &str) -> Result<FieldSpec, String> {
    FieldSpec::from_str(s).map_err(|e| e.to_string())
}

/// Inclusive degree range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegRange {
    pub lo: i64,
    pub hi: i64,
}

impl FromStr for DegRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<i64>().map_err(|_| format!("bad degree `{t}`"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
            None => {
                let d = parse(s)?;
                (d, d)
            }
        };
        if lo > hi {
            return Err(format!("empty range `{s}`"));
        }
        Ok(DegRange { lo, hi })
    }
}

#[derive(Clone, Debug)]
pub struct PointArg(pub Vec<Rational>);

impl FromStr for PointArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let t = s.trim().trim_start_matches('[').trim_end_matches(']');
        t.split([',', ':'])
            .map(|c| Rational::from_str(c.trim()).map_err(|_| format!("bad coordinate `{c}`")))
            .collect::<Result<Vec<_>, _>>()
            .map(PointArg)
    }
}
