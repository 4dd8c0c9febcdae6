use std::path::PathBuf;

use betaforge::ensembles::{EnsembleKind, EnsembleSpec};
use betaforge::gibbs::MalaConfig;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{parse_potential, ClassicalConfig, GibbsConfig, RunConfig};
use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "betaforge", version, about = "Sample β-ensembles and check them against their limits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact draws from the Hermite, Laguerre or Jacobi tridiagonal model.
    Classical(ClassicalArgs),
    /// Gibbs sampling on Jacobi coefficients for a polynomial potential.
    Gibbs(GibbsArgs),
    /// Summaries of an existing eigenvalues.csv.
    #[command(subcommand)]
    Stats(StatsCommand),
    /// Re-run the configuration stored in a manifest.json.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 2.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 1)]
    pub chains: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// auto, semicircle, mp[:ratio=r], arcsine, or a potential spec.
    #[arg(long)]
    pub target: Option<String>,
    #[command(flatten)]
    pub exec: Exec,
}

#[derive(Debug, Args)]
pub struct Exec {
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads; defaults to all cores.
    #[arg(long, env = "BETAFORGE_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EnsembleName {
    Hermite,
    Laguerre,
    Jacobi,
}

#[derive(Debug, Args)]
pub struct ClassicalArgs {
    #[arg(long, value_enum)]
    pub ensemble: EnsembleName,
    /// Scale so the spectrum converges (semicircle on [−2, 2], Marchenko–Pastur with unit mean).
    #[arg(long)]
    pub rescale: bool,
    #[arg(long, default_value_t = 0.0)]
    pub mu: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 1.0)]
    pub k: f64,
    #[arg(long, default_value_t = 1.0)]
    pub theta: f64,
    /// N/M for a rescaled Laguerre run.
    #[arg(long, default_value_t = 1.0)]
    pub ratio: f64,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    #[arg(long, default_value_t = 1.0)]
    pub q: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct GibbsArgs {
    /// `quartic:g4=0.25`, `sextic:g6=0.1667`, `poly:g1=..,g2=..` (keys g1..g6).
    #[arg(long)]
    pub potential: String,
    /// Target W = (βN/2)·V.
    #[arg(long)]
    pub rescale: bool,
    #[arg(long)]
    pub passes: usize,
    #[arg(long, default_value_t = 1)]
    pub snapshot_every: usize,
    /// Initial MALA step size in natural units.
    #[arg(long)]
    pub mala_step: Option<f64>,
    /// MALA steps per conditional update; default 100 for sextic potentials, else 1.
    #[arg(long)]
    pub mala_steps: Option<usize>,
    #[arg(long)]
    pub no_adapt: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Subcommand)]
pub enum StatsCommand {
    /// KS distance per pass against an equilibrium cdf.
    Ks(StatsArgs),
    /// KS distance per pass of edge-rescaled maxima against Tracy–Widom F₂.
    Tw(StatsArgs),
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub target: String,
    /// Run manifest; needed for `--target auto`.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Also write the summary JSON here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[command(flatten)]
    pub exec: Exec,
}

impl ClassicalArgs {
    pub fn to_config(&self) -> Result<RunConfig> {
        let Common { n, beta, .. } = self.common;
        let spec = match (self.ensemble, self.rescale) {
            (EnsembleName::Hermite, false) => EnsembleSpec::new(EnsembleKind::Hermite { mu: self.mu, sigma: self.sigma }, n, beta),
            (EnsembleName::Hermite, true) => EnsembleSpec::rescaled_hermite(n, beta),
            (EnsembleName::Laguerre, false) => EnsembleSpec::new(EnsembleKind::Laguerre { k: self.k, theta: self.theta }, n, beta),
            (EnsembleName::Laguerre, true) => EnsembleSpec::rescaled_laguerre(n, beta, self.ratio),
            (EnsembleName::Jacobi, false) => EnsembleSpec::new(EnsembleKind::Jacobi { p: self.p, q: self.q }, n, beta),
            (EnsembleName::Jacobi, true) => {
                return Err(CliError::config("rescale", "applies to hermite and laguerre only"))
            }
        }
        .map_err(|e| CliError::config("ensemble", e.to_string()))?;
        Ok(RunConfig::Classical(ClassicalConfig {
            ensemble: spec,
            chains: self.common.chains,
            seed: self.common.seed,
            target: self.common.target.clone(),
        }))
    }
}

impl GibbsArgs {
    pub fn to_config(&self) -> Result<RunConfig> {
        let v = parse_potential(&self.potential, self.rescale)?;
        let mut mala = MalaConfig::default_for(&v);
        if let Some(h) = self.mala_step {
            mala.step_size = h;
        }
        if let Some(s) = self.mala_steps {
            mala.steps_per_update = s;
        }
        mala.adapt = !self.no_adapt;
        Ok(RunConfig::Gibbs(GibbsConfig {
            potential: self.potential.clone(),
            rescale: self.rescale,
            n: self.common.n,
            beta: self.common.beta,
            passes: self.passes,
            snapshot_every: self.snapshot_every,
            chains: self.common.chains,
            seed: self.common.seed,
            mala,
            target: self.common.target.clone(),
        }))
    }
}
