use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use swkb_core::swkb::QuadratureMethod;
use swkb_core::PartnerSign;

#[derive(Debug, Parser)]
#[command(name = "swkb-lab", version, about = "Numerical checks of SWKB exactness for shape-invariant superpotentials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inspect the built-in superpotentials.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Evaluate the SWKB integral for a range of levels and compare with nπħ.
    Verify(VerifyArgs),
    /// Residuals of the shape-invariance condition and its two PDEs.
    SiCheck(SiCheckArgs),
    /// Algebraic energies and their ħ-derivatives.
    Spectrum(SpectrumArgs),
    /// The SWKB integral at several values of ħ.
    Sweep(SweepArgs),
    /// Eigensolver levels of H- or H+ against the algebraic spectrum.
    OracleCompare(OracleArgs),
    /// Re-run the command recorded in a report and compare the output.
    Replay {
        /// Report written by an earlier run (CSV or JSON).
        report: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    /// List entries with class, constants, domain and constraints.
    List {
        #[arg(long)]
        json: bool,
        /// Show a single entry.
        #[arg(long)]
        name: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    SineSubstitutionGauss,
    TanhSinh,
}

impl From<MethodArg> for QuadratureMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::SineSubstitutionGauss => QuadratureMethod::SineSubstitutionGauss,
            MethodArg::TanhSinh => QuadratureMethod::TanhSinh,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Minus,
    Plus,
}

impl From<SignArg> for PartnerSign {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Minus => PartnerSign::Minus,
            SignArg::Plus => PartnerSign::Plus,
        }
    }
}

/// Options shared by every command that writes a report.
#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpecArgs {
    /// Catalog entry name.
    #[arg(long)]
    pub potential: String,
    /// Override a parameter: a, hbar, amplitude or a class constant.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

#[derive(Debug, Args)]
pub struct QuadratureArgs {
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    /// JSON file with quadrature settings; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Levels as A..B (inclusive) or a single N.
    #[arg(long, value_name = "A..B", allow_hyphen_values = true)]
    pub n: String,
    #[command(flatten)]
    pub quadrature: QuadratureArgs,
    /// Pass threshold for |I − nπħ| / max(nπħ, ħ).
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
    /// Also write (n, x, integrand) samples to this CSV file.
    #[arg(long)]
    pub plot_data: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SiCheckArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// x-range as LO,HI; defaults to the entry's sample window.
    #[arg(long, value_name = "LO,HI", allow_hyphen_values = true)]
    pub x_range: Option<String>,
    /// a-range as LO,HI; defaults to a few ħ-steps from a.
    #[arg(long, value_name = "LO,HI", allow_hyphen_values = true)]
    pub a_range: Option<String>,
    #[arg(long, default_value_t = 20)]
    pub nx: usize,
    #[arg(long, default_value_t = 10)]
    pub na: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Catalog entry; all conventional entries when omitted.
    #[arg(long)]
    pub potential: Option<String>,
    #[arg(long = "set", value_name = "KEY=VALUE", requires = "potential")]
    pub set: Vec<String>,
    /// Highest level listed (capped at the last bound state).
    #[arg(long)]
    pub n_max: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Comma-separated ħ values.
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,2")]
    pub hbar: Vec<f64>,
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub quadrature: QuadratureArgs,
    /// Allowed relative spread of I/ħ across the sweep.
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[arg(long)]
    pub eigen_count: usize,
    #[arg(long, value_enum, default_value_t = SignArg::Minus)]
    pub sign: SignArg,
    /// Box as LO,HI; defaults to the entry's recorded box.
    #[arg(long = "box", value_name = "LO,HI", allow_hyphen_values = true)]
    pub box_: Option<String>,
    /// Cells on the coarsest grid.
    #[arg(long)]
    pub grid_points: Option<usize>,
    /// Pass threshold for the relative deviation; defaults per entry.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// JSON file with oracle settings; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}
