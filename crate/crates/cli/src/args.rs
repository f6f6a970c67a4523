use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(
    name = "multweyl",
    version,
    about = "Exponential sums with multiplicative coefficients"
)]
pub struct Cli {
    /// JSON config merged under the flags given here.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format; inferred from the --out extension when absent.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads; falls back to WEYL_THREADS.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Prime counts and lists up to N.
    Primes(PrimesParams),
    /// Σ f(n) e(F(n)), optionally with the bound report.
    Sum(SumParams),
    /// Extremal construction reaching the N / log N size.
    Sharpness(SharpnessParams),
    /// Hyperbola partition and its exact-cover verification.
    Partition(PartitionParams),
    /// Solution counts of the Vinogradov system.
    Vmvt(VmvtParams),
    /// Roots of a polynomial congruence for every modulus up to N.
    Roots(RootsParams),
    /// Joint Weyl sums and discrepancy of (v/n, F(n)).
    Equidist(EquidistParams),
    /// Σ χ(n) e(F(n)) for a Dirichlet character.
    Charsum(CharsumParams),
    /// Dirichlet approximation of a real number.
    Approx(ApproxParams),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Primes(_) => "primes",
            Command::Sum(_) => "sum",
            Command::Sharpness(_) => "sharpness",
            Command::Partition(_) => "partition",
            Command::Vmvt(_) => "vmvt",
            Command::Roots(_) => "roots",
            Command::Equidist(_) => "equidist",
            Command::Charsum(_) => "charsum",
            Command::Approx(_) => "approx",
        }
    }
}

// Config keys equal the long flag names.

#[derive(Args, Serialize, Deserialize, Default, Debug, Clone)]
#[serde(deny_unknown_fields, default, rename_all = "kebab-case")]
pub struct PrimesParams {
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: Option<u64>,
    /// Include the primes themselves.
    #[arg(long)]
    pub list: bool,
}

#[derive(Args, Serialize, Deserialize, Default, Debug, Clone)]
#[serde(deny_unknown_fields, default, rename_all = "kebab-case")]
pub struct SumParams {
    /// mobius, liouville, unit or extremal.
    #[arg(long)]
    pub f: Option<String>,
    #[arg(long)]
    pub phase: Option<String>,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: Option<u64>,
    /// "r,A": emit the bound report instead of the bare sum.
    #[arg(long)]
    pub report: Option<String>,
}

#[derive(Args, Serialize, Deserialize, Default, Debug, Clone)]
#[serde(deny_unknown_fields, default, rename_all = "kebab-case")]
pub struct SharpnessParams {
    #[arg(long)]
    pub phase: Option<String>,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: Option<u64>,
    /// Initial grid size on the circle.
    #[arg(long)]
    pub grid: Option<u64>,
}

#[derive(Args, Serialize, Deserialize, Default, Debug, Clone)]
#[serde(deny_unknown_fields, default, rename_all = "kebab-case")]
pub struct PartitionParams {
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: Option<u64>,
    #[arg(long)]
    pub s: Option<String>,
    /// unit, or phase for f(n) log p e(F(pn)).
    #[arg(long)]
    pub weight: Option<String>,
    #[arg(long)]
    pub f: Option<String>,
    #[arg(long)]
    pub phase: Option<String>,
}

#[derive(Args, Serialize, Deserialize, Default, Debug, Clone)]
#[serde(deny_unknown_fields, default, rename_all = "kebab-case")]
pub struct VmvtParams {
    #[arg(long)]
    pub r: Option<u32>,
    #[arg(long)]
    pub d: Option<u32>,
    #[arg(long = "V")]
    #[serde(rename = "V")]
    pub v: Option<u64>,
    /// "Y,X": variables restricted to primes in (Y, X].
    #[arg(long)]
    pub primes: Option<String>,
    /// File of "lo hi" lines, one half-open interval (lo, hi] each.
    #[arg(long)]
    pub intervals: Option<String>,
}

#[derive(Args, Serialize, Deserialize, Default, Debug, Clone)]
#[serde(deny_unknown_fields, default, rename_all = "kebab-case")]
pub struct RootsParams {
    #[arg(long)]
    pub poly: Option<String>,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: Option<u64>,
    #[arg(long)]
    pub assume_irreducible: bool,
    #[arg(long)]
    pub allow_large: bool,
}

#[derive(Args, Serialize, Deserialize, Default, Debug, Clone)]
#[serde(deny_unknown_fields, default, rename_all = "kebab-case")]
pub struct EquidistParams {
    #[arg(long)]
    pub poly: Option<String>,
    #[arg(long)]
    pub phase: Option<String>,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: Option<u64>,
    #[arg(long, allow_negative_numbers = true)]
    pub h1: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    pub h2: Option<i64>,
    /// Add the grid discrepancy column.
    #[arg(long)]
    pub discrepancy: bool,
    #[arg(long)]
    pub grid: Option<u64>,
    #[arg(long)]
    pub assume_irreducible: bool,
    #[arg(long)]
    pub allow_large: bool,
}

#[derive(Args, Serialize, Deserialize, Default, Debug, Clone)]
#[serde(deny_unknown_fields, default, rename_all = "kebab-case")]
pub struct CharsumParams {
    #[arg(long)]
    pub k: Option<u64>,
    #[arg(long)]
    pub chi_index: Option<u64>,
    #[arg(long)]
    pub phase: Option<String>,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: Option<u64>,
}

#[derive(Args, Serialize, Deserialize, Default, Debug, Clone)]
#[serde(deny_unknown_fields, default, rename_all = "kebab-case")]
pub struct ApproxParams {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long = "R")]
    #[serde(rename = "R")]
    pub r: Option<String>,
}
