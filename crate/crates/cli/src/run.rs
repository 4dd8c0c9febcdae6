use std::fs;
use std::path::Path;

use betaforge::ensembles::sample_ensemble;
use betaforge::gibbs::{run_chain, ChainStats, GibbsChain};
use betaforge::RngStream;
use rayon::prelude::*;

use crate::analysis::{ks_by_pass, parse_eigenvalue_csv, tw_by_pass, KsSummary, Snapshot, TwSummary};
use crate::config::{parse_potential, resolve_target, ClassicalConfig, GibbsConfig, Manifest, RunConfig, Target};
use crate::error::{CliError, Result};
use crate::output::{
    clear_incomplete, mark_incomplete, write_eigenvalues, write_json, write_ks, EIGENVALUES_FILE, KS_FILE,
    MANIFEST_FILE, TW_FILE,
};

/// What a run produced, beyond the files on disk.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub snapshots: Vec<Snapshot>,
    pub ks: Option<KsSummary>,
    pub tw: Option<TwSummary>,
    pub stats: ChainStats,
}

/// Runs `f(chain)` for every chain on a pool of `threads` workers (0 = all cores);
/// results come back in chain order.
fn per_chain<T, F>(chains: usize, threads: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::config("threads", e.to_string()))?;
    pool.install(|| (0..chains).into_par_iter().map(&f).collect())
}

fn run_classical(c: &ClassicalConfig, threads: usize) -> Result<(Vec<Snapshot>, ChainStats)> {
    let snaps = per_chain(c.chains, threads, |chain| {
        let mut rng = RngStream::new(c.seed, chain as u64);
        let s = sample_ensemble(&c.ensemble, &mut rng)?;
        Ok(Snapshot { chain, pass: 0, eigenvalues: s.eigenvalues })
    })?;
    Ok((snaps, ChainStats::default()))
}

fn run_gibbs(g: &GibbsConfig, threads: usize) -> Result<(Vec<Snapshot>, ChainStats)> {
    let v = parse_potential(&g.potential, g.rescale)?;
    let per = per_chain(g.chains, threads, |chain| {
        let rng = RngStream::new(g.seed, chain as u64);
        let mut c = GibbsChain::new(g.n, v, g.beta, g.mala, rng)?;
        let snaps = run_chain(&mut c, g.passes, g.snapshot_every)?;
        let snaps: Vec<Snapshot> = snaps
            .into_iter()
            .enumerate()
            .map(|(k, s)| Snapshot { chain, pass: (k + 1) * g.snapshot_every, eigenvalues: s.eigenvalues })
            .collect();
        Ok((snaps, *c.stats()))
    })?;
    let mut total = ChainStats::default();
    let mut all = Vec::with_capacity(per.len() * (g.passes / g.snapshot_every));
    for (snaps, s) in per {
        total.devroye_draws += s.devroye_draws;
        total.devroye_trials += s.devroye_trials;
        total.mala_updates += s.mala_updates;
        total.mala_steps += s.mala_steps;
        total.mala_accepted += s.mala_accepted;
        all.extend(snaps);
    }
    // chain-major order within the file
    all.sort_by_key(|s| (s.chain, s.pass));
    Ok((all, total))
}

fn summaries(snapshots: &[Snapshot], target: &Target) -> Result<(KsSummary, Option<TwSummary>)> {
    let ks = ks_by_pass(snapshots, target)?;
    let tw = match tw_by_pass(snapshots, target) {
        Ok(tw) => Some(tw),
        Err(CliError::Sampler(betaforge::Error::NoSoftEdge)) => None,
        Err(e) => return Err(e),
    };
    Ok((ks, tw))
}

fn execute(config: &RunConfig, out: &Path, threads: usize) -> Result<RunReport> {
    let target = config.target().map(|spec| resolve_target(spec, Some(config))).transpose()?;
    let (snapshots, stats) = match config {
        RunConfig::Classical(c) => run_classical(c, threads)?,
        RunConfig::Gibbs(g) => run_gibbs(g, threads)?,
    };
    write_eigenvalues(&out.join(EIGENVALUES_FILE), &snapshots)?;
    let (mut ks, mut tw) = (None, None);
    if let Some(target) = &target {
        let (k, t) = summaries(&snapshots, target)?;
        write_ks(&out.join(KS_FILE), &k)?;
        if let Some(t) = &t {
            write_json(&out.join(TW_FILE), t)?;
        }
        (ks, tw) = (Some(k), t);
    }
    Ok(RunReport { snapshots, ks, tw, stats })
}

/// Validates `config`, runs it, and writes all artifacts into `out`.
///
/// An `INCOMPLETE` marker sits in `out` until every file is written; on
/// failure it is left behind holding the error message.
pub fn run(config: &RunConfig, out: &Path, threads: Option<usize>) -> Result<RunReport> {
    config.validate()?;
    fs::create_dir_all(out)?;
    mark_incomplete(out, "run in progress")?;
    let result = write_json(&out.join(MANIFEST_FILE), &Manifest::new(config.clone()))
        .and_then(|_| execute(config, out, threads.unwrap_or(0)));
    match result {
        Ok(report) => {
            clear_incomplete(out)?;
            Ok(report)
        }
        Err(e) => {
            mark_incomplete(out, &e.to_string())?;
            Err(e)
        }
    }
}

pub fn load_manifest(path: &Path) -> Result<Manifest> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn load_inputs(input: &Path, target: &str, manifest: Option<&Path>) -> Result<(Vec<Snapshot>, Target)> {
    let manifest = manifest.map(load_manifest).transpose()?;
    let target = resolve_target(target, manifest.as_ref().map(|m| &m.config))?;
    let snapshots = parse_eigenvalue_csv(&fs::read_to_string(input)?)?;
    Ok((snapshots, target))
}

pub fn stats_ks(input: &Path, target: &str, manifest: Option<&Path>) -> Result<KsSummary> {
    let (snapshots, target) = load_inputs(input, target, manifest)?;
    ks_by_pass(&snapshots, &target)
}

pub fn stats_tw(input: &Path, target: &str, manifest: Option<&Path>) -> Result<TwSummary> {
    let (snapshots, target) = load_inputs(input, target, manifest)?;
    tw_by_pass(&snapshots, &target)
}
