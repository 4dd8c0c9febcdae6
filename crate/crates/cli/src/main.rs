use std::io::Write;
use std::process::ExitCode;

use anyhow::Context;
use betaforge_cli::args::{Cli, Command, StatsArgs, StatsCommand};
use betaforge_cli::output::write_json;
use betaforge_cli::run::{load_manifest, stats_ks, stats_tw, RunReport};
use betaforge_cli::{run, RunConfig};
use clap::Parser;
use serde::Serialize;

fn report(r: &RunReport, out: &std::path::Path) {
    let s = &r.stats;
    eprintln!("wrote {} snapshots to {}", r.snapshots.len(), out.display());
    if s.devroye_draws > 0 {
        eprintln!("devroye: {} draws, acceptance {:.3}", s.devroye_draws, s.devroye_draws as f64 / s.devroye_trials as f64);
    }
    if s.mala_steps > 0 {
        eprintln!("mala: {} updates, acceptance {:.3}", s.mala_updates, s.mala_accepted as f64 / s.mala_steps as f64);
    }
    if let Some(last) = r.ks.as_ref().and_then(|k| k.passes.last()) {
        eprintln!("ks at pass {}: {:.4}", last.pass, last.ks);
    }
}

fn emit<T: Serialize>(value: &T, args: &StatsArgs) -> anyhow::Result<()> {
    let mut stdout = std::io::stdout().lock();
    match writeln!(stdout, "{}", serde_json::to_string_pretty(value)?) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
        _ => {}
    }
    if let Some(path) = &args.out {
        write_json(path, value).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn execute(cli: Cli) -> anyhow::Result<()> {
    let (config, exec): (RunConfig, _) = match cli.command {
        Command::Classical(a) => (a.to_config()?, a.common.exec),
        Command::Gibbs(a) => (a.to_config()?, a.common.exec),
        Command::Replay(a) => {
            let m = load_manifest(&a.manifest).with_context(|| format!("reading {}", a.manifest.display()))?;
            (m.config, a.exec)
        }
        Command::Stats(StatsCommand::Ks(a)) => return emit(&stats_ks(&a.input, &a.target, a.manifest.as_deref())?, &a),
        Command::Stats(StatsCommand::Tw(a)) => return emit(&stats_tw(&a.input, &a.target, a.manifest.as_deref())?, &a),
    };
    let r = run(&config, &exec.out, exec.threads)?;
    report(&r, &exec.out);
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
