use betaforge::ensembles::{EnsembleKind, EnsembleSpec};
use betaforge::gibbs::{MalaConfig, PolynomialPotential};
use betaforge::stats::{equilibrium_classical, equilibrium_polynomial, ClassicalLaw, EquilibriumMeasure};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum RunConfig {
    Classical(ClassicalConfig),
    Gibbs(GibbsConfig),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalConfig {
    pub ensemble: EnsembleSpec,
    pub chains: usize,
    pub seed: u64,
    pub target: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GibbsConfig {
    /// `name:key=val,...`, see [`parse_potential`].
    pub potential: String,
    pub rescale: bool,
    pub n: usize,
    pub beta: f64,
    pub passes: usize,
    pub snapshot_every: usize,
    pub chains: usize,
    pub seed: u64,
    pub mala: MalaConfig,
    pub target: Option<String>,
}

/// Contents of `manifest.json`; enough to replay a run bit for bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub betaforge_version: String,
    pub config: RunConfig,
}

impl Manifest {
    pub fn new(config: RunConfig) -> Self {
        Self { betaforge_version: VERSION.to_string(), config }
    }
}

impl RunConfig {
    pub fn chains(&self) -> usize {
        match self {
            Self::Classical(c) => c.chains,
            Self::Gibbs(g) => g.chains,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Self::Classical(c) => c.ensemble.n,
            Self::Gibbs(g) => g.n,
        }
    }

    pub fn target(&self) -> Option<&str> {
        match self {
            Self::Classical(c) => c.target.as_deref(),
            Self::Gibbs(g) => g.target.as_deref(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.chains() == 0 {
            return Err(CliError::config("chains", "must be at least 1"));
        }
        match self {
            Self::Classical(c) => c.ensemble.validate().map_err(|e| CliError::config("ensemble", e.to_string()))?,
            Self::Gibbs(g) => {
                if g.n == 0 {
                    return Err(CliError::config("n", "must be at least 1"));
                }
                if !(g.beta > 0.0 && g.beta.is_finite()) {
                    return Err(CliError::config("beta", format!("{} is not positive", g.beta)));
                }
                if g.passes == 0 {
                    return Err(CliError::config("passes", "must be at least 1"));
                }
                if g.snapshot_every == 0 || g.snapshot_every > g.passes {
                    return Err(CliError::config("snapshot_every", "must lie in 1..=passes"));
                }
                if !(g.mala.step_size > 0.0 && g.mala.step_size.is_finite()) {
                    return Err(CliError::config("mala.step_size", "must be positive"));
                }
                if g.mala.steps_per_update == 0 {
                    return Err(CliError::config("mala.steps_per_update", "must be at least 1"));
                }
                parse_potential(&g.potential, g.rescale)?;
            }
        }
        if let Some(t) = self.target() {
            parse_target(t)?;
        }
        Ok(())
    }
}

/// Parses `name:key=val,...` with names `quartic`, `sextic`, `poly` and keys `g1`…`g6`.
///
/// A bare `quartic` is `x⁴/4` and a bare `sextic` is `x⁶/6`.
pub fn parse_potential(spec: &str, rescale: bool) -> Result<PolynomialPotential> {
    let field = "potential";
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let max_key = match name.trim() {
        "quartic" => 4,
        "sextic" | "poly" => 6,
        other => return Err(CliError::config(field, format!("unknown potential `{other}` (quartic, sextic, poly)"))),
    };
    let mut g = [0.0; 6];
    let mut any = false;
    for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, val) = item
            .split_once('=')
            .ok_or_else(|| CliError::config(field, format!("expected key=value, got `{item}`")))?;
        let k: usize = key
            .trim()
            .strip_prefix('g')
            .and_then(|d| d.parse().ok())
            .filter(|k| (1..=max_key).contains(k))
            .ok_or_else(|| CliError::config(field, format!("key `{key}` is not one of g1..g{max_key}")))?;
        g[k - 1] = val
            .trim()
            .parse()
            .map_err(|_| CliError::config(format!("{field}.{}", key.trim()), format!("`{val}` is not a number")))?;
        any = true;
    }
    if !any {
        match max_key {
            4 if name == "quartic" => g[3] = 0.25,
            6 if name == "sextic" => g[5] = 1.0 / 6.0,
            _ => return Err(CliError::config(field, "poly needs at least one coefficient")),
        }
    }
    PolynomialPotential::new(g, rescale).map_err(|e| CliError::config(field, e.to_string()))
}

#[derive(Debug, Clone, PartialEq)]
pub enum TargetSpec {
    Auto,
    Law(ClassicalLaw),
    /// Equilibrium measure of a potential taken in the rescaled normalization.
    Potential(String),
}

pub fn parse_target(spec: &str) -> Result<TargetSpec> {
    let field = "target";
    let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
    match name.trim() {
        "auto" => Ok(TargetSpec::Auto),
        "semicircle" => Ok(TargetSpec::Law(ClassicalLaw::Semicircle)),
        "arcsine" => Ok(TargetSpec::Law(ClassicalLaw::Arcsine)),
        "mp" => {
            let mut ratio = 1.0;
            for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                match item.split_once('=') {
                    Some(("ratio", v)) => {
                        ratio = v
                            .trim()
                            .parse()
                            .map_err(|_| CliError::config("target.ratio", format!("`{v}` is not a number")))?
                    }
                    _ => return Err(CliError::config(field, format!("unknown mp option `{item}`"))),
                }
            }
            if !(ratio > 0.0 && ratio <= 1.0) {
                return Err(CliError::config("target.ratio", format!("{ratio} outside (0, 1]")));
            }
            Ok(TargetSpec::Law(ClassicalLaw::MarchenkoPastur { ratio }))
        }
        "quartic" | "sextic" | "poly" => {
            parse_potential(spec, true)?;
            Ok(TargetSpec::Potential(spec.to_string()))
        }
        other => Err(CliError::config(
            field,
            format!("unknown target `{other}` (auto, semicircle, mp[:ratio=r], arcsine, or a potential)"),
        )),
    }
}

/// A limiting law together with the affine map `x ↦ (x − shift)/scale`
/// that brings raw eigenvalues to its scale.
#[derive(Debug, Clone)]
pub struct Target {
    pub label: String,
    pub measure: EquilibriumMeasure,
    pub shift: f64,
    pub scale: f64,
}

impl Target {
    fn identity(label: String, measure: EquilibriumMeasure) -> Self {
        Self { label, measure, shift: 0.0, scale: 1.0 }
    }

    pub fn map(&self, x: f64) -> f64 {
        (x - self.shift) / self.scale
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.measure.cdf(self.map(x))
    }
}

fn law_label(law: ClassicalLaw) -> String {
    match law {
        ClassicalLaw::Semicircle => "semicircle".into(),
        ClassicalLaw::MarchenkoPastur { ratio } => format!("mp:ratio={ratio}"),
        ClassicalLaw::Arcsine => "arcsine".into(),
    }
}

/// Resolves a target string; `auto` needs the run configuration.
pub fn resolve_target(spec: &str, config: Option<&RunConfig>) -> Result<Target> {
    match parse_target(spec)? {
        TargetSpec::Law(law) => Ok(Target::identity(law_label(law), equilibrium_classical(law)?)),
        TargetSpec::Potential(p) => {
            let v = parse_potential(&p, true)?;
            Ok(Target::identity(format!("equilibrium:{p}"), equilibrium_polynomial(&v)?))
        }
        TargetSpec::Auto => match config {
            None => Err(CliError::config("target", "`auto` needs a run manifest")),
            Some(RunConfig::Gibbs(g)) => {
                let v = parse_potential(&g.potential, g.rescale)?.rescaled_equivalent(g.beta, g.n);
                Ok(Target::identity(format!("equilibrium:{}", g.potential), equilibrium_polynomial(&v)?))
            }
            Some(RunConfig::Classical(c)) => classical_limit(&c.ensemble),
        },
    }
}

fn classical_limit(spec: &EnsembleSpec) -> Result<Target> {
    let (n, beta) = (spec.n as f64, spec.beta);
    let (law, shift, scale) = match spec.kind {
        EnsembleKind::Hermite { mu, sigma } => (ClassicalLaw::Semicircle, mu, sigma * (beta * n / 2.0).sqrt()),
        EnsembleKind::Laguerre { k, theta } => {
            let m = 2.0 * k / beta + n - 1.0;
            let ratio = n / m;
            if ratio > 1.0 {
                return Err(CliError::config(
                    "target",
                    format!("Laguerre k = {k} gives ratio N/M = {ratio} > 1; no Marchenko-Pastur limit"),
                ));
            }
            (ClassicalLaw::MarchenkoPastur { ratio }, 0.0, theta * beta * m / 2.0)
        }
        EnsembleKind::Jacobi { .. } => (ClassicalLaw::Arcsine, 0.0, 1.0),
    };
    Ok(Target { label: law_label(law), measure: equilibrium_classical(law)?, shift, scale })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn potential_syntax() {
        let v = parse_potential("quartic:g4=0.25", true).unwrap();
        assert_eq!(v.g(4), 0.25);
        assert!(v.rescale_by_n);
        assert_eq!(parse_potential("sextic", false).unwrap().g(6), 1.0 / 6.0);
        let v = parse_potential("poly: g1=0.3, g2=0.5, g3=0.2, g4=0.25", true).unwrap();
        assert_eq!((v.g(1), v.g(3)), (0.3, 0.2));
        for bad in ["cubic", "quartic:g6=1", "poly:g2", "poly:g2=x", "poly", "quartic:g4=-1"] {
            assert!(matches!(parse_potential(bad, true), Err(CliError::Config { .. })), "{bad}");
        }
    }

    #[test]
    fn target_syntax() {
        assert_eq!(parse_target("auto").unwrap(), TargetSpec::Auto);
        assert_eq!(
            parse_target("mp:ratio=0.5").unwrap(),
            TargetSpec::Law(ClassicalLaw::MarchenkoPastur { ratio: 0.5 })
        );
        assert!(parse_target("mp:ratio=2").is_err());
        assert!(parse_target("gaussian").is_err());
        assert!(resolve_target("auto", None).is_err());
    }

    #[test]
    fn classical_auto_maps_to_standard_scale() {
        let spec = EnsembleSpec::hermite(100, 2.0, 1.0, 0.5).unwrap();
        let t = classical_limit(&spec).unwrap();
        assert_eq!(t.map(1.0 + 0.5 * 10.0 * 2.0), 2.0);
        let spec = EnsembleSpec::rescaled_laguerre(100, 2.0, 0.5).unwrap();
        let t = classical_limit(&spec).unwrap();
        assert!((t.scale - 1.0).abs() < 1e-12);
        assert_eq!(t.label, "mp:ratio=0.5");
    }
}
