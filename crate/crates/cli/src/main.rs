use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nse_symmetry::expr::DEFAULT_SEED;

mod commands;
mod reproduce;

use commands::Report;

#[derive(Parser)]
#[command(name = "nse-sym", version, about = "Lie-symmetry workbench for the incompressible Navier-Stokes equations")]
struct Cli {
    /// Emit JSON; with a path, write it there and print text to stdout.
    #[arg(long, global = true, num_args = 0..=1, value_name = "PATH", default_missing_value = "-")]
    json: Option<String>,
    /// Seed for every sampled check (fallback: BOUTON_FORMS_SEED).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: machine parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
pub struct Exponents {
    /// Spatial exponent α_x as "p/q".
    #[arg(long, allow_hyphen_values = true)]
    pub ax: Option<String>,
    /// Temporal exponent α_t as "p/q".
    #[arg(long, allow_hyphen_values = true)]
    pub at: Option<String>,
}

#[derive(Args, Clone)]
pub struct SolutionSource {
    /// Solution file with lines `u = …`, `v = …`, `w = …`, `p = …`.
    #[arg(long, conflicts_with = "builtin")]
    pub file: Option<PathBuf>,
    /// Compiled-in solution.
    #[arg(long, value_enum)]
    pub builtin: Option<Builtin>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Builtin {
    /// `ū = (x, −y, 0)/(t+τ)`, `p = −y²/(t+τ)²`.
    Stagnation,
    /// Classical family with opaque profiles of `(y/x, z/x)`.
    Classical,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Family {
    Bouton,
    Classical,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum System {
    Separate,
    Combined,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Mode {
    Structural,
    Probabilistic,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Suite {
    #[value(name = "paper-table")]
    Table,
    Properties,
    All,
}

#[derive(Subcommand)]
pub enum Command {
    /// Isobaric weight (a, b) of an expression.
    Weights {
        #[arg(long)]
        expr: String,
        #[command(flatten)]
        exps: Exponents,
    },
    /// Criticality of scaling exponents.
    Classify {
        #[command(flatten)]
        exps: Exponents,
    },
    /// Smoothness scenario of scaling exponents.
    Scenario {
        #[command(flatten)]
        exps: Exponents,
    },
    /// Apply a generator (or a finite transform) to an expression.
    Apply {
        #[arg(long, required_unless_present = "transform", conflicts_with = "transform")]
        generator: Option<String>,
        /// "scale:ax=1,at=2", "rot:z" or "tshift".
        #[arg(long)]
        transform: Option<String>,
        #[arg(long)]
        expr: String,
    },
    /// Lie derivative of a form along a generator.
    Lie {
        #[arg(long)]
        generator: String,
        /// Form text, e.g. "(p/(u^2+v^2+w^2)) dt /\ dp".
        #[arg(long, required_unless_present = "file", conflicts_with = "file")]
        form: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Check that a form is annihilated by every generator.
    VerifyForm {
        /// Degree; selects the catalog form when no file is given.
        #[arg(long)]
        k: Option<usize>,
        /// File holding a form; defaults to the catalog form.
        #[arg(long)]
        form: Option<PathBuf>,
        /// Comma-separated generator names.
        #[arg(long, value_delimiter = ',', default_value = "T,X,Rx,Ry,Rz")]
        generators: Vec<String>,
        #[arg(long, value_enum, default_value = "structural")]
        mode: Mode,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Sample points per coefficient.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Solve for conserved k-forms over an ansatz basis.
    SolveForms {
        #[arg(long)]
        k: usize,
        /// Total degree in u, v, w of the basis functions.
        #[arg(long, default_value_t = 2)]
        degree: u32,
        /// Row budget, or "auto" for four rows per unknown.
        #[arg(long, default_value = "auto")]
        samples: String,
        /// Relative singular-value cutoff.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, value_delimiter = ',', default_value = "T,X,Rx,Ry,Rz")]
        generators: Vec<String>,
        /// Skip the comparison with the catalog form.
        #[arg(long)]
        no_compare: bool,
    },
    /// Navier-Stokes residuals of a velocity/pressure field.
    Residual {
        #[command(flatten)]
        source: SolutionSource,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 30)]
        samples: usize,
    },
    /// Euler number of a solution and its time independence.
    Euler {
        #[command(flatten)]
        source: SolutionSource,
    },
    /// Self-similar ansatz for given exponents with its homogeneity checks.
    Ansatz {
        #[command(flatten)]
        exps: Exponents,
        #[arg(long, value_enum, default_value = "bouton")]
        family: Family,
        #[arg(long, value_enum, default_value = "combined")]
        system: System,
    },
    /// Zero-form invariants of the two scaling generators.
    InvariantArgs {
        /// Row budget, or "auto".
        #[arg(long, default_value = "auto")]
        samples: String,
    },
    /// Run a built-in reproduction suite.
    Reproduce {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
    },
}

pub struct Context {
    pub seed: u64,
}

fn seed(flag: Option<u64>) -> Result<u64, String> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("BOUTON_FORMS_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("BOUTON_FORMS_SEED is not an unsigned integer: {v:?}")),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn emit(report: &Report, json: Option<&str>) -> Result<(), String> {
    let text = serde_json::to_string_pretty(&report.json).expect("serializable report");
    match json {
        Some("-") => println!("{text}"),
        Some(path) => {
            std::fs::write(path, text + "\n").map_err(|e| format!("cannot write {path}: {e}"))?;
            print!("{}", report.text);
        }
        None => print!("{}", report.text),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = match seed(cli.seed) {
        Ok(seed) => Context { seed },
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("global pool is built once");
    }
    let result = commands::run(cli.command, &ctx).and_then(|r| emit(&r, cli.json.as_deref()).map(|_| r));
    match result {
        Ok(r) if r.passed => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
