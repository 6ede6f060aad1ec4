//! Command-line flags. Every flag lands in the matching configuration
//! section, overriding the value from `--config`.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::RunConfig;

#[derive(Debug, Parser)]
#[command(
    name = "singosc",
    version,
    about = "Transition probabilities of the singular oscillator with a time-dependent frequency"
)]
pub struct Cli {
    /// INI-style configuration with [model], [profile], [task], [output] sections.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_name = "csv|tsv")]
    pub format: Option<String>,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Significant digits of floating-point output (1..=17).
    #[arg(long, global = true, value_name = "DIGITS")]
    pub precision: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reflection parameter rho of a frequency profile.
    Rho(ProfileOnly),
    /// Instantaneous energy levels E_n = 2 omega (n - j).
    Levels(LevelsArgs),
    /// A single transition probability w_mn.
    Wmn(WmnArgs),
    /// Transition probabilities on a grid, as m,n,w triplets.
    Table(TableArgs),
    /// Generating functions G_0 or G_1 on a list of points.
    Gen(GenArgs),
    /// Adiabatic-invariant ratio with a summed cross-check.
    Invariant(InvariantArgs),
    /// Compare closed-form probabilities with direct propagation.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Coupling g of the g/(8x^2) term; g > -1.
    #[arg(long, allow_negative_numbers = true)]
    pub g: Option<f64>,
    /// Admit the boundary value g = -1.
    #[arg(long)]
    pub allow_boundary: bool,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    /// Profile kind: constant, sudden_jump, tanh_step, piecewise_linear, table.
    #[arg(long = "profile", value_name = "KIND")]
    pub kind: Option<String>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub omega_minus: Option<f64>,
    #[arg(long)]
    pub omega_plus: Option<f64>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub center: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub t_jump: Option<f64>,
    #[arg(long)]
    pub width: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub t_start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub t_end: Option<f64>,
    /// Knots as "t:omega, t:omega, ...".
    #[arg(long, allow_hyphen_values = true)]
    pub points: Option<String>,
    /// Two-column "t omega" table file.
    #[arg(long, value_name = "PATH")]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RhoArgs {
    /// Use this rho instead of solving the classical problem.
    #[arg(long, allow_negative_numbers = true)]
    pub rho: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ProfileOnly {
    #[command(flatten)]
    pub profile: ProfileArgs,
}

#[derive(Debug, Args)]
pub struct LevelsArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Instantaneous frequency.
    #[arg(long)]
    pub omega: Option<f64>,
    /// Highest level.
    #[arg(long)]
    pub max: Option<usize>,
}

#[derive(Debug, Args)]
pub struct WmnArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub profile: ProfileArgs,
    #[command(flatten)]
    pub rho: RhoArgs,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Closed form to evaluate: jacobi or hypergeometric.
    #[arg(long)]
    pub method: Option<String>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub profile: ProfileArgs,
    #[command(flatten)]
    pub rho: RhoArgs,
    /// Default for both --max-m and --max-n.
    #[arg(long)]
    pub max: Option<usize>,
    #[arg(long)]
    pub max_m: Option<usize>,
    #[arg(long)]
    pub max_n: Option<usize>,
    /// Emit only this initial level.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub method: Option<String>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub profile: ProfileArgs,
    #[command(flatten)]
    pub rho: RhoArgs,
    /// Initial level, 0 or 1.
    #[arg(long)]
    pub m: Option<usize>,
    /// Evaluation points, comma separated; complex values as "a+bi".
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
}

#[derive(Debug, Args)]
pub struct InvariantArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub profile: ProfileArgs,
    #[command(flatten)]
    pub rho: RhoArgs,
    #[arg(long)]
    pub m: Option<usize>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub profile: ProfileArgs,
    /// Truncated basis size.
    #[arg(long)]
    pub basis: Option<usize>,
    #[arg(long)]
    pub max: Option<usize>,
    #[arg(long)]
    pub max_m: Option<usize>,
    #[arg(long)]
    pub max_n: Option<usize>,
    /// Largest accepted |w_numeric - w_closed|.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Propagator: cayley or cayley4.
    #[arg(long)]
    pub stepper: Option<String>,
    /// Local error target of the propagator.
    #[arg(long)]
    pub local_tol: Option<f64>,
}

impl ModelArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        cfg.flag("model", "g", self.g);
        if self.allow_boundary {
            cfg.flag("model", "allow_boundary", Some("true"));
        }
    }
}

impl ProfileArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        cfg.flag("profile", "kind", self.kind.as_deref());
        cfg.flag("profile", "omega", self.omega);
        cfg.flag("profile", "omega_minus", self.omega_minus);
        cfg.flag("profile", "omega_plus", self.omega_plus);
        cfg.flag("profile", "tau", self.tau);
        cfg.flag("profile", "center", self.center);
        cfg.flag("profile", "t_jump", self.t_jump);
        cfg.flag("profile", "width", self.width);
        cfg.flag("profile", "t_start", self.t_start);
        cfg.flag("profile", "t_end", self.t_end);
        cfg.flag("profile", "points", self.points.as_deref());
        cfg.flag(
            "profile",
            "file",
            self.file.as_ref().map(|p| p.display().to_string()),
        );
    }
}

impl Cli {
    /// Folds the flags of this invocation into `cfg`.
    pub fn apply(&self, cfg: &mut RunConfig) {
        cfg.flag("output", "format", self.format.as_deref());
        cfg.flag(
            "output",
            "out",
            self.out.as_ref().map(|p| p.display().to_string()),
        );
        cfg.flag("output", "precision", self.precision);
        match &self.command {
            Command::Rho(a) => a.profile.apply(cfg),
            Command::Levels(a) => {
                a.model.apply(cfg);
                cfg.flag("task", "omega", a.omega);
                cfg.flag("task", "max", a.max);
            }
            Command::Wmn(a) => {
                a.model.apply(cfg);
                a.profile.apply(cfg);
                cfg.flag("task", "rho", a.rho.rho);
                cfg.flag("task", "m", a.m);
                cfg.flag("task", "n", a.n);
                cfg.flag("task", "method", a.method.as_deref());
            }
            Command::Table(a) => {
                a.model.apply(cfg);
                a.profile.apply(cfg);
                cfg.flag("task", "rho", a.rho.rho);
                cfg.flag("task", "max", a.max);
                cfg.flag("task", "max_m", a.max_m);
                cfg.flag("task", "max_n", a.max_n);
                cfg.flag("task", "m", a.m);
                cfg.flag("task", "method", a.method.as_deref());
            }
            Command::Gen(a) => {
                a.model.apply(cfg);
                a.profile.apply(cfg);
                cfg.flag("task", "rho", a.rho.rho);
                cfg.flag("task", "m", a.m);
                cfg.flag("task", "z", a.z.as_deref());
            }
            Command::Invariant(a) => {
                a.model.apply(cfg);
                a.profile.apply(cfg);
                cfg.flag("task", "rho", a.rho.rho);
                cfg.flag("task", "m", a.m);
            }
            Command::Verify(a) => {
                a.model.apply(cfg);
                a.profile.apply(cfg);
                cfg.flag("task", "basis", a.basis);
                cfg.flag("task", "max", a.max);
                cfg.flag("task", "max_m", a.max_m);
                cfg.flag("task", "max_n", a.max_n);
                cfg.flag("task", "tol", a.tol);
                cfg.flag("task", "stepper", a.stepper.as_deref());
                cfg.flag("task", "local_tol", a.local_tol);
            }
        }
    }
}
