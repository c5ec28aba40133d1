//! `biprabhakar`: evaluate bicomplex Prabhakar functions and their transforms,
//! solve kinetic equations and run the verification suites.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use biprabhakar::{Bicomplex, Hyperbolic};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "biprabhakar", version, about = "Bicomplex Prabhakar functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output format; `table` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Relative tolerance for series and quadrature.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Series term limit.
    #[arg(long = "max-terms", global = true)]
    pub max_terms: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    /// `E(λ t^σ)`
    Plain,
    /// `t^{τ-1} E(λ t^σ)`
    Kernel,
}

/// Bicomplex values are `x0,x1,x2,x3` or `[re1,im1;re2,im2]`.
#[derive(Debug, Args)]
pub struct ParamArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Bicomplex,
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Bicomplex,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Bicomplex,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// E^δ_{σ,τ}(z).
    Eval {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, allow_hyphen_values = true)]
        z: Bicomplex,
    },
    /// Γ(z).
    Gamma {
        #[arg(long, allow_hyphen_values = true)]
        z: Bicomplex,
    },
    /// Laplace transform of t^{τ-1} E^δ_{σ,τ}(λ t^σ) at z.
    Laplace {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Bicomplex,
        #[arg(long, allow_hyphen_values = true)]
        z: Bicomplex,
        /// Also compute the transform by quadrature.
        #[arg(long)]
        quadrature: bool,
    },
    /// Mellin transform of E^δ_{σ,τ}(-λ t) at z (real σ).
    Mellin {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Bicomplex,
        #[arg(long, allow_hyphen_values = true)]
        z: Bicomplex,
        #[arg(long)]
        quadrature: bool,
    },
    /// E^δ_{σ,τ}(z) from its Mellin-Barnes integral, next to the series value.
    Barnes {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, allow_hyphen_values = true)]
        z: Bicomplex,
        /// Abscissa of the integration line.
        #[arg(long)]
        c: Option<f64>,
    },
    /// Solve a fractional kinetic equation on [0, t_end].
    ///
    /// With --problem the JSON problem file is solved by the general series.
    /// With --nu the equation has coefficients --a and orders --nu and a
    /// Prabhakar source. Otherwise the binomial special case with --n is
    /// solved in closed form.
    Kinetic {
        #[arg(long)]
        problem: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        sigma: Option<Bicomplex>,
        #[arg(long, allow_hyphen_values = true)]
        tau: Option<Bicomplex>,
        #[arg(long, allow_hyphen_values = true)]
        delta: Option<Bicomplex>,
        /// Hyperbolic `u1,u4`; repeat once per term.
        #[arg(long, allow_hyphen_values = true)]
        a: Vec<Hyperbolic>,
        /// Fractional orders; repeat once per term.
        #[arg(long, allow_hyphen_values = true)]
        nu: Vec<Bicomplex>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long = "N0", default_value_t = 1.0)]
        n0: f64,
        #[arg(long = "t-end", default_value_t = 1.0)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-3)]
        h: f64,
        /// Largest series index for the general solver.
        #[arg(long, default_value_t = 64)]
        terms: usize,
    },
    /// Run verification suites and print their reports.
    Verify {
        /// Suite name, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        draws: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Tabulate E(λ t^σ) or t^{τ-1} E(λ t^σ) on `steps` equispaced points.
    Table {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, allow_hyphen_values = true, default_value = "1,0,0,0")]
        lambda: Bicomplex,
        #[arg(long = "t-min", default_value_t = 0.0)]
        t_min: f64,
        #[arg(long = "t-max", default_value_t = 1.0)]
        t_max: f64,
        #[arg(long, default_value_t = 101)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = TableKind::Plain)]
        kind: TableKind,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("BIPRABHAKAR_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
