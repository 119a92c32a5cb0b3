//! `spackle` command-line interface.
//!
//! Exit codes: 0 success, 1 input error, 2 verification failure, 3 resource cutoff.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "spackle", version, about = "Compile Clifford error-detecting circuits into sparse subsystem codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Policy {
    Auto,
    Complete,
    Random6,
}

impl From<Policy> for spackle::gadgets::GraphPolicy {
    fn from(p: Policy) -> Self {
        use spackle::gadgets::GraphPolicy as G;
        match p {
            Policy::Auto => G::Auto,
            Policy::Complete => G::Complete,
            Policy::Random6 => G::Random6,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Mode {
    Symbolic,
    Exact,
}

#[derive(Args, Debug)]
pub struct Search {
    /// Distance search radius; omit for an unbounded search.
    #[arg(long)]
    pub max_distance: Option<usize>,
    /// Worker threads for the distance search.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Subcommand)]
pub enum Command {
    /// Sparsify a stabilizer code through gadget composition.
    Sparsify {
        #[arg(long)]
        stabilizers: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        policy: Policy,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        search: Search,
        /// Write the sparse code here.
        #[arg(long)]
        out_code: Option<PathBuf>,
        /// Write the error-detecting circuit here.
        #[arg(long)]
        out_circuit: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Report n, k, d, sparsity and stabilizer weights of a gauge group.
    Analyze {
        #[arg(long)]
        code: PathBuf,
        #[command(flatten)]
        search: Search,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check an error-detecting circuit against a base code and/or for fault tolerance.
    Verify {
        #[arg(long)]
        circuit: PathBuf,
        /// Base stabilizer code for the good-ED check.
        #[arg(long)]
        base: Option<PathBuf>,
        /// Largest error weight for the fault-tolerance scan; 0 skips it.
        #[arg(long, default_value_t = 1)]
        max_weight: usize,
        #[arg(long, value_enum, default_value = "symbolic")]
        mode: Mode,
        /// Fail on any violation of the literal definition, not only undetectable ones.
        #[arg(long)]
        strict: bool,
        /// Include every pattern verdict in the report.
        #[arg(long)]
        all_verdicts: bool,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Synthesize a postselection gadget for one Pauli.
    Gadget {
        /// Hermitian Pauli string, optionally signed, e.g. `-XYZ`.
        #[arg(long, allow_hyphen_values = true)]
        pauli: String,
        /// complete, path, cycle, random6, or an edge list such as `0-1,1-2`.
        #[arg(long, default_value = "complete")]
        graph: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Compose the error-detecting circuit of a stabilizer code.
    EdCircuit {
        #[arg(long)]
        stabilizers: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        policy: Policy,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Concatenate a k=1 stabilizer code with itself, with an optional local layout plan.
    Concat {
        #[arg(long)]
        stabilizers: PathBuf,
        #[arg(long)]
        levels: usize,
        /// Spacetime dimension for the layout plan.
        #[arg(long)]
        dimension: Option<usize>,
        #[arg(long)]
        out_code: Option<PathBuf>,
        /// Per-level plan table as CSV.
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Embed the error-detecting circuit on a lattice with nearest-neighbour gates.
    Localize {
        #[arg(long)]
        stabilizers: PathBuf,
        #[arg(long)]
        dimension: usize,
        #[arg(long, value_enum, default_value = "auto")]
        policy: Policy,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        search: Search,
        #[arg(long)]
        out_circuit: Option<PathBuf>,
        #[arg(long)]
        out_code: Option<PathBuf>,
        /// Layout record as JSON.
        #[arg(long)]
        out_spec: Option<PathBuf>,
        /// Wire to lattice coordinate table.
        #[arg(long)]
        placement: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Gilbert-Varshamov existence check and concatenation exponents.
    Gv {
        #[arg(long, requires_all = ["k", "d"])]
        n: Option<u64>,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        d: Option<u64>,
        /// Base code length for the exponent sweep.
        #[arg(long, requires = "delta")]
        n0: Option<u64>,
        /// Relative distance of the base code, e.g. `3/5`.
        #[arg(long)]
        delta: Option<String>,
        #[arg(long, default_value_t = 15)]
        b: u64,
        #[arg(long, default_value_t = 3)]
        levels: u64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
