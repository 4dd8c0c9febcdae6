use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use betaforge::stats::{tracy_widom2_cdf, DEFAULT_QUAD_ORDER};

fn betaforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_betaforge"))
        .args(args)
        .env_remove("BETAFORGE_THREADS")
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> Output {
    let out = betaforge(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    out
}

fn read(dir: &Path, file: &str) -> String {
    fs::read_to_string(dir.join(file)).unwrap()
}

#[test]
fn classical_run_shape() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run1");
    let o = out.to_str().unwrap();
    ok(&["classical", "--ensemble", "hermite", "--n", "1000", "--beta", "2", "--chains", "1", "--seed", "42", "--out", o]);
    let csv = read(&out, "eigenvalues.csv");
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "chain,pass,index,value");
    assert_eq!(lines.len(), 1001);
    assert!(lines[1..].iter().all(|l| l.starts_with("0,0,")));
    let values: Vec<f64> = lines[1..].iter().map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
    assert!(values.windows(2).all(|w| w[0] <= w[1]));
    let manifest: serde_json::Value = serde_json::from_str(&read(&out, "manifest.json")).unwrap();
    assert_eq!(manifest["config"]["seed"], 42);
    assert_eq!(manifest["config"]["mode"], "classical");
    assert!(!out.join("INCOMPLETE").exists());
    assert!(!out.join("ks_by_pass.csv").exists());
}

#[test]
fn ks_on_exact_hermite_draw() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("h");
    let o = out.to_str().unwrap();
    ok(&["classical", "--ensemble", "hermite", "--rescale", "--n", "1000", "--seed", "1", "--out", o]);
    let input = out.join("eigenvalues.csv");
    let summary_path = tmp.path().join("ks.json");
    let stdout = ok(&[
        "stats", "ks", "--input", input.to_str().unwrap(), "--target", "semicircle", "--out",
        summary_path.to_str().unwrap(),
    ])
    .stdout;
    let v: serde_json::Value = serde_json::from_slice(&stdout).unwrap();
    assert!(v["passes"][0]["ks"].as_f64().unwrap() <= 0.05);
    assert_eq!(v["passes"][0]["samples"], 1000);
    let saved: serde_json::Value = serde_json::from_str(&fs::read_to_string(summary_path).unwrap()).unwrap();
    assert_eq!(saved, v);
}

#[test]
fn gibbs_run_shape_and_ks_trend() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("g");
    let o = out.to_str().unwrap();
    ok(&[
        "gibbs", "--potential", "quartic:g4=0.25", "--rescale", "--n", "40", "--beta", "2", "--passes", "6", "--chains",
        "20", "--snapshot-every", "2", "--seed", "7", "--target", "auto", "--out", o,
    ]);
    assert_eq!(read(&out, "eigenvalues.csv").lines().count(), 1 + 20 * 3 * 40);
    let ks: Vec<(usize, f64)> = read(&out, "ks_by_pass.csv")
        .lines()
        .skip(1)
        .map(|l| {
            let (p, k) = l.split_once(',').unwrap();
            (p.parse().unwrap(), k.parse().unwrap())
        })
        .collect();
    assert_eq!(ks.iter().map(|r| r.0).collect::<Vec<_>>(), vec![2, 4, 6]);
    assert!(ks[2].1 < 0.05);
    let tw: serde_json::Value = serde_json::from_str(&read(&out, "tw_summary.json")).unwrap();
    assert_eq!(tw["n"], 40);
    assert_eq!(tw["passes"].as_array().unwrap().len(), 3);
}

#[test]
fn identical_runs_are_byte_identical_across_threads_and_replay() {
    let tmp = tempfile::tempdir().unwrap();
    let args = |dir: &Path, threads: &str| {
        vec![
            "gibbs".to_string(),
            "--potential".into(),
            "poly:g2=0.5,g3=0.2,g4=0.25".into(),
            "--rescale".into(),
            "--n".into(),
            "15".into(),
            "--passes".into(),
            "3".into(),
            "--chains".into(),
            "6".into(),
            "--seed".into(),
            "99".into(),
            "--target".into(),
            "auto".into(),
            "--threads".into(),
            threads.into(),
            "--out".into(),
            dir.to_str().unwrap().into(),
        ]
    };
    let (a, b, c, d) = (tmp.path().join("a"), tmp.path().join("b"), tmp.path().join("c"), tmp.path().join("d"));
    for (dir, threads) in [(&a, "1"), (&b, "4"), (&c, "1")] {
        let v = args(dir, threads);
        ok(&v.iter().map(String::as_str).collect::<Vec<_>>());
    }
    let m = a.join("manifest.json");
    let out = Command::new(env!("CARGO_BIN_EXE_betaforge"))
        .args(["replay", "--manifest", m.to_str().unwrap(), "--out", d.to_str().unwrap()])
        .env("BETAFORGE_THREADS", "3")
        .output()
        .unwrap();
    assert!(out.status.success());
    for file in ["eigenvalues.csv", "manifest.json", "ks_by_pass.csv", "tw_summary.json"] {
        let reference = fs::read(a.join(file)).unwrap();
        for other in [&b, &c, &d] {
            assert_eq!(fs::read(other.join(file)).unwrap(), reference, "{file}");
        }
    }
}

#[test]
fn tw_on_single_sample() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("one.csv");
    fs::write(&input, "chain,pass,index,value\n0,0,0,2.5\n").unwrap();
    let stdout = ok(&["stats", "tw", "--input", input.to_str().unwrap(), "--target", "semicircle"]).stdout;
    let v: serde_json::Value = serde_json::from_slice(&stdout).unwrap();
    let f = tracy_widom2_cdf(0.5, DEFAULT_QUAD_ORDER);
    assert!((v["passes"][0]["ks"].as_f64().unwrap() - f.max(1.0 - f)).abs() < 1e-12);

    let out = betaforge(&["stats", "tw", "--input", input.to_str().unwrap(), "--target", "arcsine"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("no soft right edge"));
}

#[test]
fn parse_error_names_the_line() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("bad.csv");
    fs::write(&input, "chain,pass,index,value\n0,0,0,0.1\n0,0,1,0.2\n0,0,2\n").unwrap();
    let out = betaforge(&["stats", "ks", "--input", input.to_str().unwrap(), "--target", "semicircle"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 4"), "{err}");
}

#[test]
fn config_errors_name_the_field() {
    let tmp = tempfile::tempdir().unwrap();
    let o = tmp.path().join("x");
    let out = betaforge(&["gibbs", "--potential", "quartic:g7=1", "--n", "5", "--passes", "1", "--out", o.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("`potential`"));
    let out = betaforge(&["gibbs", "--potential", "quartic", "--n", "5", "--passes", "1", "--chains", "0", "--out", o.to_str().unwrap()]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("`chains`"));
    assert!(!o.exists());
}

#[test]
fn failed_run_leaves_marker() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("fail");
    // k = 0.5 with N = 10 means M < N: no Marchenko-Pastur limit for `auto`
    let o = betaforge(&[
        "classical", "--ensemble", "laguerre", "--k", "0.5", "--n", "10", "--target", "auto", "--out",
        out.to_str().unwrap(),
    ]);
    assert!(!o.status.success());
    let marker = fs::read_to_string(out.join("INCOMPLETE")).unwrap();
    assert!(marker.contains("Marchenko-Pastur"), "{marker}");
    assert!(out.join("manifest.json").exists());
}
