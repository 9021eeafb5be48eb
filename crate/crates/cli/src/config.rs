//! Command-line flags and their resolution into a validated [`RunConfig`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "koranyi",
    version,
    about = "Spectral and geometric verifications on the Heisenberg group"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Subcommand)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Table of R_k(λ, σ_r) over a (k, λ) grid.
    Rk,
    /// Envelope decay fit of |R_k| against μ|λ|r².
    Decay,
    /// Sweep of |R_k − 1| / √(μ|λ|) at low frequency.
    Lowfreq,
    /// Relative error of the Laguerre asymptotics per regime.
    Laguerre,
    /// van der Corput ratios on the phase ¼λ sin θ.
    Vdc,
    /// Weyl–Laguerre, Plancherel and twisted-convolution identities.
    Weyl,
    /// Steinhaus constant table.
    Steinhaus,
    /// Rice-type sequence search, certification and verification.
    Counterexample,
    /// Distance set of a point file.
    Distances,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Rk => "rk",
            Command::Decay => "decay",
            Command::Lowfreq => "lowfreq",
            Command::Laguerre => "laguerre",
            Command::Vdc => "vdc",
            Command::Weyl => "weyl",
            Command::Steinhaus => "steinhaus",
            Command::Counterexample => "counterexample",
            Command::Distances => "distances",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ProfileKind {
    Exp,
    Power,
}

/// Flags shared by every subcommand. Unset values take per-subcommand
/// defaults in [`RunConfig::resolve`].
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Dimension n of ℍⁿ.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub k_min: Option<usize>,
    #[arg(long, global = true)]
    pub k_max: Option<usize>,
    #[arg(long, global = true)]
    pub k_step: Option<usize>,
    /// Explicit k values (decay); overrides the k range.
    #[arg(long, global = true, value_delimiter = ',')]
    pub k_list: Option<Vec<usize>>,
    /// Lower end of the log-spaced λ range; μ|λ|r² for decay and lowfreq.
    #[arg(long, global = true)]
    pub lambda_min: Option<f64>,
    #[arg(long, global = true)]
    pub lambda_max: Option<f64>,
    #[arg(long, global = true)]
    pub lambda_steps: Option<usize>,
    /// Points per decade of μ|λ|r² (decay).
    #[arg(long, global = true)]
    pub per_decade: Option<usize>,
    #[arg(long, global = true)]
    pub r: Option<f64>,
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    /// One or more ρ values (steinhaus).
    #[arg(long, global = true, value_delimiter = ',')]
    pub rho: Option<Vec<f64>>,
    /// Quadrature tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file; stdout if absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Also write a gnuplot script next to the CSV output.
    #[arg(long, global = true)]
    pub plot: bool,
    /// Hermite truncation N (weyl).
    #[arg(long, global = true)]
    pub truncation: Option<usize>,
    /// Sample positions per regime (laguerre).
    #[arg(long, global = true)]
    pub positions: Option<usize>,
    /// Number of stages (counterexample).
    #[arg(long, global = true)]
    pub m_max: Option<usize>,
    /// Sampled member pairs (counterexample).
    #[arg(long, global = true)]
    pub pairs: Option<usize>,
    /// Monte Carlo points per stage ball (counterexample).
    #[arg(long, global = true)]
    pub density_samples: Option<usize>,
    /// Density profile family (counterexample).
    #[arg(long, global = true, value_enum)]
    pub profile: Option<ProfileKind>,
    #[arg(long, global = true)]
    pub profile_scale: Option<f64>,
    /// Rate of the exponential profile or power of the inverse-power one.
    #[arg(long, global = true)]
    pub profile_rate: Option<f64>,
    /// Drop the counting density guard in the radius search.
    #[arg(long, global = true)]
    pub no_density_guard: bool,
    /// Point file (distances): one point per line, 2n + 1 numbers.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Deduplication resolution (distances).
    #[arg(long, global = true)]
    pub resolution: Option<f64>,
}

/// Fully resolved configuration; serialised into every output header.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub subcommand: Command,
    pub n: usize,
    pub k_values: Vec<usize>,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub lambda_steps: usize,
    pub per_decade: usize,
    pub r: f64,
    pub delta: f64,
    pub rho: Vec<f64>,
    pub tol: f64,
    pub seed: u64,
    pub truncation: usize,
    pub positions: usize,
    pub m_max: usize,
    pub pairs: usize,
    pub density_samples: usize,
    pub profile: ProfileKind,
    pub profile_scale: f64,
    pub profile_rate: f64,
    pub density_guard: bool,
    pub input: Option<PathBuf>,
    pub resolution: f64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub plot: bool,
}

struct Defaults {
    k: (usize, usize, usize),
    lambda: (f64, f64, usize),
    tol: f64,
}

fn defaults(cmd: Command) -> Defaults {
    let d = |k, lambda, tol| Defaults { k, lambda, tol };
    match cmd {
        Command::Rk => d((0, 10, 1), (1e-2, 1e3, 11), 1e-10),
        Command::Decay => d((0, 0, 1), (1e2, 1e5, 0), 1e-10),
        Command::Lowfreq => d((0, 50, 1), (1e-6, 1e-2, 17), 1e-8),
        Command::Laguerre => d((50, 200, 50), (1.0, 1.0, 1), 1e-10),
        Command::Vdc => d((0, 0, 1), (1e2, 1e4, 3), 1e-12),
        Command::Weyl => d((0, 3, 1), (1.0, 1.0, 1), 1e-4),
        _ => d((0, 0, 1), (1.0, 1.0, 1), 1e-10),
    }
}

pub const DECAY_K_LIST: [usize; 6] = [0, 10, 30, 100, 300, 1000];

impl RunConfig {
    pub fn resolve(cmd: Command, c: &Common) -> Result<Self, String> {
        let d = defaults(cmd);
        let n = c.n.unwrap_or(1);
        if n == 0 {
            return Err("--n must be at least 1".into());
        }
        let (k_min, k_max) = (c.k_min.unwrap_or(d.k.0), c.k_max.unwrap_or(d.k.1));
        let k_step = c.k_step.unwrap_or(d.k.2);
        if k_step == 0 {
            return Err("--k-step must be positive".into());
        }
        if k_min > k_max {
            return Err(format!("empty k range: --k-min {k_min} > --k-max {k_max}"));
        }
        let k_values = match (&c.k_list, cmd) {
            (Some(list), _) if list.is_empty() => return Err("--k-list is empty".into()),
            (Some(list), _) => list.clone(),
            (None, Command::Decay) if c.k_min.is_none() && c.k_max.is_none() => DECAY_K_LIST.to_vec(),
            _ => (k_min..=k_max).step_by(k_step).collect(),
        };
        let lambda_min = c.lambda_min.unwrap_or(d.lambda.0);
        let lambda_max = c
            .lambda_max
            .unwrap_or(if c.lambda_min.is_some() && c.lambda_max.is_none() {
                lambda_min.max(d.lambda.1)
            } else {
                d.lambda.1
            });
        if !(lambda_min > 0.0 && lambda_min.is_finite() && lambda_max.is_finite()) {
            return Err(format!(
                "λ range must be positive and finite, got [{lambda_min}, {lambda_max}]"
            ));
        }
        if lambda_min > lambda_max {
            return Err(format!(
                "empty λ range: --lambda-min {lambda_min} > --lambda-max {lambda_max}"
            ));
        }
        let lambda_steps = c
            .lambda_steps
            .unwrap_or(if lambda_min == lambda_max { 1 } else { d.lambda.2 });
        if cmd != Command::Decay && lambda_steps == 0 {
            return Err("--lambda-steps must be positive".into());
        }
        if lambda_steps == 1 && lambda_min != lambda_max {
            return Err("--lambda-steps 1 needs --lambda-min equal to --lambda-max".into());
        }
        let positive = |name: &str, v: f64| -> Result<f64, String> {
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(format!("{name} must be positive and finite, got {v}"))
            }
        };
        let r = positive("--r", c.r.unwrap_or(1.0))?;
        let tol = positive("--tol", c.tol.unwrap_or(d.tol))?;
        let delta = c.delta.unwrap_or(0.01);
        if !(delta > 0.0 && delta < 1.0) {
            return Err(format!("--delta must lie in (0, 1), got {delta}"));
        }
        let rho = c.rho.clone().unwrap_or_else(|| vec![0.25]);
        if rho.is_empty() || rho.iter().any(|&p| !(p > 0.0 && p < 0.5)) {
            return Err(format!("--rho values must lie in (0, ½), got {rho:?}"));
        }
        let per_decade = c.per_decade.unwrap_or(16);
        if per_decade == 0 {
            return Err("--per-decade must be positive".into());
        }
        let positions = c.positions.unwrap_or(41);
        if positions < 2 {
            return Err("--positions must be at least 2".into());
        }
        let m_max = c.m_max.unwrap_or(2);
        if m_max == 0 {
            return Err("--m-max must be at least 1".into());
        }
        let profile = c.profile.unwrap_or(ProfileKind::Exp);
        let (scale, rate) = match profile {
            ProfileKind::Exp => (1e-4, 0.5),
            ProfileKind::Power => (1.0, 1.0),
        };
        let profile_scale = positive("--profile-scale", c.profile_scale.unwrap_or(scale))?;
        let profile_rate = positive("--profile-rate", c.profile_rate.unwrap_or(rate))?;
        let resolution = c
            .resolution
            .unwrap_or(koranyi_core::distance_sets::DEFAULT_DISTANCE_RESOLUTION);
        if !(resolution >= 0.0) {
            return Err(format!("--resolution must be nonnegative, got {resolution}"));
        }
        if cmd == Command::Distances && c.input.is_none() {
            return Err("distances needs --input".into());
        }
        if c.plot && (c.out.is_none() || c.format != Format::Csv) {
            return Err("--plot needs --out and --format csv".into());
        }
        Ok(Self {
            subcommand: cmd,
            n,
            k_values,
            lambda_min,
            lambda_max,
            lambda_steps,
            per_decade,
            r,
            delta,
            rho,
            tol,
            seed: c.seed.unwrap_or(1),
            truncation: c.truncation.unwrap_or(koranyi_core::weyl::DEFAULT_TRUNCATION),
            positions,
            m_max,
            pairs: c.pairs.unwrap_or(100_000),
            density_samples: c.density_samples.unwrap_or(200_000),
            profile,
            profile_scale,
            profile_rate,
            density_guard: !c.no_density_guard,
            input: c.input.clone(),
            resolution,
            format: c.format,
            out: c.out.clone(),
            plot: c.plot,
        })
    }

    /// Log-spaced λ values.
    pub fn lambdas(&self) -> Vec<f64> {
        log_space(self.lambda_min, self.lambda_max, self.lambda_steps)
    }
}

pub fn log_space(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps <= 1 {
        return vec![lo];
    }
    let (a, b) = (lo.log10(), hi.log10());
    (0..steps)
        .map(|i| {
            if i == steps - 1 {
                hi
            } else {
                10f64.powf(a + (b - a) * i as f64 / (steps - 1) as f64)
            }
        })
        .collect()
}
