use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use slpelim::certify::DEFAULT_SEARCH_BUDGET;
use slpelim::field::DEFAULT_MODULUS;
use slpelim::polyring::DEFAULT_TERM_BUDGET;

#[derive(Debug, Parser)]
#[command(name = "slpelim", version, about = "Exact workbench for straight-line programs and parametric elimination")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args, Serialize)]
pub struct Global {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Prime for probabilistic checks.
    #[arg(long, global = true, default_value_t = DEFAULT_MODULUS)]
    pub modulus: u64,
    /// Largest number of terms any expanded intermediate may have.
    #[arg(long, global = true, default_value_t = DEFAULT_TERM_BUDGET)]
    pub term_budget: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the result here instead of stdout; a run manifest goes to `<PATH>.manifest.json`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate instances and circuits.
    #[command(subcommand)]
    Gen(GenCmd),
    /// Expand every output of a circuit.
    Expand(CircuitArg),
    /// Differentiate a single-output circuit.
    Diff {
        #[command(flatten)]
        circuit: CircuitArg,
        #[arg(long)]
        var: String,
    },
    /// Bind variables to rationals.
    Specialize {
        #[command(flatten)]
        circuit: CircuitArg,
        /// `VAR=num/den`; repeatable.
        #[arg(long = "bind", required = true)]
        binds: Vec<String>,
    },
    /// Report nonscalar length, total length and parameter count.
    Measure(CircuitArg),
    /// Compute general solutions of an instance.
    #[command(subcommand)]
    Elim(ElimCmd),
    /// Build and check certificates.
    #[command(subcommand)]
    Certify(CertifyCmd),
    /// Run the acceptance suite.
    #[command(subcommand)]
    Check(CheckCmd),
}

#[derive(Debug, Args)]
pub struct CircuitArg {
    /// Circuit file in text or JSON form; `-` reads stdin.
    #[arg(long)]
    pub circuit: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum GenCmd {
    /// Equations G_1..G_2n and F.
    Family1 {
        #[arg(long)]
        n: u32,
    },
    /// G = prod (X - T_l) and F = S X^(2^K).
    Family2 {
        #[arg(long)]
        delta: u32,
        #[arg(long)]
        k: u32,
    },
    /// A circuit for the general solution P.
    #[command(subcommand)]
    Pcircuit(PcircuitCmd),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PForm {
    Horner,
    Product,
}

#[derive(Debug, Subcommand)]
pub enum PcircuitCmd {
    /// Horner form with invariant coefficient parameters.
    Family1 {
        #[arg(long)]
        n: u32,
    },
    Family2 {
        #[arg(long)]
        delta: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value_t = PForm::Horner)]
        form: PForm,
    },
}

#[derive(Debug, Subcommand)]
pub enum ElimCmd {
    /// Product of (Y - F) over the solution points.
    Points(InstanceArg),
    /// Resultant of G and Y - F in X (family 2 only).
    Resultant(InstanceArg),
}

#[derive(Debug, Args)]
pub struct InstanceArg {
    /// Instance file written by `gen family1` or `gen family2`.
    #[arg(long)]
    pub instance: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum CertifyCmd {
    /// Coefficient identity of the family-1 general solution.
    Eq1 {
        #[arg(long)]
        n: u32,
    },
    /// Vandermonde factorization of M and the length bound.
    Vandermonde {
        #[arg(long)]
        n: u32,
        /// Comma-separated rationals; defaults to 0, 1, ..., 2^n - 1.
        #[arg(long)]
        points: Option<String>,
    },
    /// Tangent-space audit of an invariant circuit for P.
    Audit {
        #[command(flatten)]
        circuit: CircuitArg,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        points: Option<String>,
    },
    /// Measured length of the derived R circuit against (K-1) delta.
    Degree {
        #[arg(long)]
        delta: u32,
        #[arg(long)]
        k: u32,
        /// Circuit for P; defaults to the Horner form.
        #[arg(long)]
        circuit: Option<PathBuf>,
    },
    /// Ratios L(P_F) / L(F) over sample F.
    Elimcx {
        #[arg(long)]
        delta: u32,
        #[arg(long, default_value_t = 2)]
        k: u32,
        /// Candidate budget of the exhaustive search.
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: u64,
    },
    /// Size formulas of the two elimination algorithms.
    Size {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        l: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        delta: u64,
        #[arg(long)]
        big_delta: u64,
        #[arg(long)]
        delta_star: u64,
        #[arg(long)]
        d_star: u64,
        /// Comma-separated degrees of G_1..G_n.
        #[arg(long)]
        degrees: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum CheckCmd {
    /// Criteria 1 to 10.
    All {
        #[arg(long, default_value_t = 3)]
        max_n: u32,
    },
}
