use std::collections::BTreeMap;

use betaforge::stats::{edge_rescale, ks_distance, tracy_widom2_cdf, EmpiricalCdf, DEFAULT_QUAD_ORDER};
use serde::{Deserialize, Serialize};

use crate::config::Target;
use crate::error::{CliError, Result};

pub const CSV_HEADER: &str = "chain,pass,index,value";

/// One spectrum snapshot: ascending eigenvalues of chain `chain` after pass `pass`.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub chain: usize,
    pub pass: usize,
    pub eigenvalues: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassKs {
    pub pass: usize,
    pub ks: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KsSummary {
    pub target: String,
    pub passes: Vec<PassKs>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassTw {
    pub pass: usize,
    pub ks: f64,
    pub maxima: usize,
    pub mean_rescaled: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwSummary {
    pub target: String,
    pub n: usize,
    pub passes: Vec<PassTw>,
}

/// Reads `chain,pass,index,value` rows back into snapshots, sorted by (pass, chain).
pub fn parse_eigenvalue_csv(text: &str) -> Result<Vec<Snapshot>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == CSV_HEADER => {}
        Some((_, h)) => return Err(CliError::Parse { line: 1, message: format!("expected header `{CSV_HEADER}`, got `{h}`") }),
        None => return Err(CliError::Parse { line: 1, message: "empty file".into() }),
    }
    let mut groups: BTreeMap<(usize, usize), Vec<(usize, f64)>> = BTreeMap::new();
    for (i, line) in lines {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(CliError::Parse { line: line_no, message: format!("expected 4 columns, found {}", fields.len()) });
        }
        let int = |k: usize, name: &str| {
            fields[k]
                .parse::<usize>()
                .map_err(|_| CliError::Parse { line: line_no, message: format!("{name} `{}` is not an integer", fields[k]) })
        };
        let (chain, pass, index) = (int(0, "chain")?, int(1, "pass")?, int(2, "index")?);
        let value: f64 = fields[3]
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| CliError::Parse { line: line_no, message: format!("value `{}` is not a finite number", fields[3]) })?;
        groups.entry((pass, chain)).or_default().push((index, value));
    }
    if groups.is_empty() {
        return Err(CliError::Parse { line: 2, message: "no data rows".into() });
    }
    Ok(groups
        .into_iter()
        .map(|((pass, chain), mut rows)| {
            rows.sort_by_key(|r| r.0);
            let mut eigenvalues: Vec<f64> = rows.into_iter().map(|r| r.1).collect();
            eigenvalues.sort_by(f64::total_cmp);
            Snapshot { chain, pass, eigenvalues }
        })
        .collect())
}

fn by_pass(snapshots: &[Snapshot]) -> BTreeMap<usize, Vec<&Snapshot>> {
    let mut m: BTreeMap<usize, Vec<&Snapshot>> = BTreeMap::new();
    for s in snapshots {
        m.entry(s.pass).or_default().push(s);
    }
    m
}

/// KS distance of the pooled spectrum at each pass against the target cdf.
pub fn ks_by_pass(snapshots: &[Snapshot], target: &Target) -> Result<KsSummary> {
    let mut passes = Vec::new();
    for (pass, group) in by_pass(snapshots) {
        let pooled: Vec<f64> = group.iter().flat_map(|s| s.eigenvalues.iter().copied()).collect();
        let samples = pooled.len();
        let ecdf = EmpiricalCdf::new(pooled)?;
        passes.push(PassKs { pass, ks: ks_distance(&ecdf, |x| target.cdf(x)), samples });
    }
    Ok(KsSummary { target: target.label.clone(), passes })
}

/// KS distance of the edge-rescaled largest eigenvalues at each pass against F₂.
pub fn tw_by_pass(snapshots: &[Snapshot], target: &Target) -> Result<TwSummary> {
    let n = snapshots[0].eigenvalues.len();
    if let Some(s) = snapshots.iter().find(|s| s.eigenvalues.len() != n) {
        return Err(CliError::config(
            "input",
            format!("chain {} pass {} has {} eigenvalues, expected {n}", s.chain, s.pass, s.eigenvalues.len()),
        ));
    }
    let mut passes = Vec::new();
    for (pass, group) in by_pass(snapshots) {
        let rescaled = group
            .iter()
            .map(|s| edge_rescale(target.map(*s.eigenvalues.last().unwrap()), n, &target.measure))
            .collect::<Result<Vec<f64>, _>>()?;
        let maxima = rescaled.len();
        let mean_rescaled = rescaled.iter().sum::<f64>() / maxima as f64;
        let ecdf = EmpiricalCdf::new(rescaled)?;
        let ks = ks_distance(&ecdf, |s| tracy_widom2_cdf(s, DEFAULT_QUAD_ORDER));
        passes.push(PassTw { pass, ks, maxima, mean_rescaled });
    }
    Ok(TwSummary { target: target.label.clone(), n, passes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::resolve_target;

    #[test]
    fn parse_reports_line_numbers() {
        let ok = "chain,pass,index,value\n0,0,1,2.0\n0,0,0,1.0\n1,0,0,3.0\n";
        let snaps = parse_eigenvalue_csv(ok).unwrap();
        assert_eq!(snaps.len(), 2);
        assert_eq!(snaps[0].eigenvalues, vec![1.0, 2.0]);
        let bad = "chain,pass,index,value\n0,0,0,1.0\n0,0,1\n";
        match parse_eigenvalue_csv(bad) {
            Err(CliError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match parse_eigenvalue_csv("a,b\n") {
            Err(CliError::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_eigenvalue_csv("chain,pass,index,value\n0,0,0,nan\n"),
            Err(CliError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn single_sample_tw() {
        let t = resolve_target("semicircle", None).unwrap();
        let snaps = vec![Snapshot { chain: 0, pass: 0, eigenvalues: vec![1.5] }];
        let s = tw_by_pass(&snaps, &t).unwrap();
        let f = tracy_widom2_cdf(-0.5, DEFAULT_QUAD_ORDER);
        assert!((s.passes[0].ks - f.max(1.0 - f)).abs() < 1e-12);
        assert_eq!(s.n, 1);
    }
}
