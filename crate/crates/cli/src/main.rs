use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

mod commands;

/// Oriented matroids, Salvetti complexes and supersolvable extensions.
///
/// Commands that need an oriented matroid read a covector file from
/// `--input` or standard input. Reports go to standard output; the exit
/// status is 0 iff every clause passes.
#[derive(Parser, Debug)]
#[command(name = "ssom", version)]
struct Cli {
    /// Covector file to read instead of standard input.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Run single-threaded.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a bundled oriented matroid.
    Corpus { name: String },
    /// Check the covector axioms.
    CheckAxioms,
    /// Print the simplification.
    Simplify,
    /// Flats, Möbius values and Whitney numbers.
    Lattice,
    /// Test whether a flat is modular.
    Modular { flat: String },
    /// Search for a maximal chain of modular flats.
    Supersolvable,
    /// List the topes.
    Topes,
    /// Verify that a linear extension of the tope poset is a shelling.
    Shelling {
        #[arg(long)]
        base: String,
        /// Comma separated tope order; defaults to the lexicographic linear extension.
        #[arg(long)]
        order: Option<String>,
        /// Recursion depth; defaults to full depth.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Build the Salvetti poset.
    Salvetti {
        #[arg(long)]
        list: bool,
    },
    /// Localization at a flat and its sections.
    Localize {
        #[arg(long)]
        flat: String,
    },
    /// The fiber of ρ̃_X over a cell of S_X.
    Fiber {
        #[arg(long)]
        flat: String,
        #[arg(long)]
        cell: String,
    },
    /// Stratify the fiber over (0,B') for a modular flat of corank one.
    Stratify {
        #[arg(long)]
        tope: String,
        #[arg(long)]
        flat: String,
    },
    /// Build and certify an acyclic matching.
    Morse {
        #[arg(long, value_enum)]
        construction: Construction,
        /// Comma separated topes (the set Q).
        #[arg(long)]
        topes: Option<String>,
        /// Base tope for the shelling construction.
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        flat: Option<String>,
        /// Cell a of S_X for the fiber construction.
        #[arg(long)]
        cell: Option<String>,
        /// Local tope B' for the fiber construction.
        #[arg(long)]
        tope: Option<String>,
    },
    /// Integral homology.
    Homology {
        #[arg(long, value_enum, default_value = "salvetti")]
        target: Target,
        #[arg(long)]
        flat: Option<String>,
        #[arg(long)]
        cell: Option<String>,
        /// Facet list for `--target complex-file`.
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Certify that ρ̃_X is a poset quasi-fibration.
    CertifyQf {
        #[arg(long)]
        flat: String,
        #[arg(long)]
        exhaustive: bool,
        /// Number of sampled pairs when not exhaustive.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Rank data of the semidirect product decomposition.
    Ranks,
    /// Enumerate the covectors of a rational arrangement.
    FromArrangement { matrix: PathBuf },
    /// Extend through two disjoint rank-2 flats.
    ExtendLevi {
        #[arg(long, num_args = 2, value_names = ["X1", "X2"])]
        flats: Vec<String>,
        #[arg(long)]
        generic: bool,
        #[arg(long, default_value = "g")]
        label: String,
        /// Write the extended covector file here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Extend to a supersolvable oriented matroid.
    ExtendSs {
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Construction {
    Shelling,
    Convex,
    Fiber,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Target {
    Salvetti,
    Fiber,
    ComplexFile,
}

fn read_input(path: &Option<PathBuf>) -> Result<String> {
    match path {
        Some(p) => fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .context("reading standard input")?;
            Ok(s)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
