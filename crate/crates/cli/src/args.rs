use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "morseward", version, about = "Integer persistent homology of filtered digital images")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cell counts per degree and per filtration step.
    Info(Common),
    /// Run the filtered vector-field reduction and report its statistics.
    Reduce(Common),
    /// Homology of every filtration step.
    Homology(Common),
    /// Persistent, triple and born/die groups for the requested indices.
    Persist(Common),
    /// Torsion-labelled barcode.
    Barcode(Common),
    /// Representative cycles of persistent groups in the original complex.
    Generators(Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ComplexArg {
    Simplicial,
    Cubical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FiltrationArg {
    /// One input image per step, nested.
    Frames,
    /// Horizontal bands from the top, `--steps` of them.
    Rows,
    /// Vertical bands from the left, `--steps` of them.
    Cols,
    /// `--steps` gray-level thresholds up to the foreground cutoff.
    Gray,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Json,
    Svg,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Image files (ascii grid, PGM P2/P5), or one complex file.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "simplicial")]
    pub complex: ComplexArg,
    /// Defaults to `frames` for several inputs and a single step otherwise.
    #[arg(long, value_enum)]
    pub filtration: Option<FiltrationArg>,
    #[arg(long)]
    pub steps: Option<usize>,
    /// `i,j,n`, `i,j,k,n` or `all`; repeatable.
    #[arg(long = "query")]
    pub queries: Vec<String>,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Compute on the unreduced complex (small inputs only).
    #[arg(long)]
    pub skip_reduction: bool,
    /// List the vector fields as `(source;target)` cell-id pairs.
    #[arg(long)]
    pub dump_dvf: bool,
    /// Attach representative cycles.
    #[arg(long)]
    pub emit_generators: bool,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Write the result here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
