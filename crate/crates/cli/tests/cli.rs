use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torsionlab"))
        .arg("--cache-dir")
        .arg(cache)
        .args(args)
        .env_remove("TORSIONLAB_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(cache: &Path, args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = run(cache, &full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn cached_files(dir: &Path) -> usize {
    std::fs::read_dir(dir).map(|d| d.count()).unwrap_or(0)
}

#[test]
fn icosahedral_2s_twist() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(dir.path(), &["compute", "--group", "Yprime", "--twist", "2s"]);
    let t = v["T"].as_f64().unwrap();
    assert!((t - 0.190_983_005_6).abs() < 1e-9, "{t}");
    assert_eq!(v["surd"], "(3-sqrt5)/4");
    assert_eq!(v["route"], "closed");
}

#[test]
fn lens_routes_agree() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["compute", "--group", "lens", "--q", "10", "--r", "0"];
    let closed = json(dir.path(), &base);
    let t = closed["T"].as_f64().unwrap();
    assert!((t - 2.0 * std::f64::consts::PI.powi(2) / 100.0).abs() < 1e-10);
    for route in ["lens", "spectral"] {
        let mut args = base.to_vec();
        args.extend(["--route", route]);
        let other = json(dir.path(), &args);
        let d = other["lnT"].as_f64().unwrap() - closed["lnT"].as_f64().unwrap();
        assert!(d.abs() < 1e-8, "{route}: {d}");
    }
}

#[test]
fn cyclic_route_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    for group in ["Tprime", "Oprime", "Yprime"] {
        let closed = json(dir.path(), &["compute", "--group", group]);
        let cyclic = json(dir.path(), &["compute", "--group", group, "--route", "cyclic"]);
        let d = closed["lnT"].as_f64().unwrap() - cyclic["lnT"].as_f64().unwrap();
        assert!(d.abs() < 1e-10, "{group}: {d}");
    }
}

#[test]
fn twisted_lens_with_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["compute", "--group", "lens", "--q", "7", "--l", "1,2", "--r", "3"];
    let closed = json(dir.path(), &args);
    let mut lens = args.to_vec();
    lens.extend(["--route", "lens"]);
    let lens = json(dir.path(), &lens);
    assert_eq!(closed["group"], "L(7;1,2)");
    let d = closed["lnT"].as_f64().unwrap() - lens["lnT"].as_f64().unwrap();
    assert!(d.abs() < 1e-10, "{d}");
}

#[test]
fn all_twists_of_334() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(dir.path(), &["compute", "--group", "poly334", "--twist", "all"]);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 13);
    assert_eq!(rows[0]["twist"], "1");
    let sqrt2 = rows.iter().filter(|r| r["surd"] == "sqrt2").count();
    assert!(sqrt2 >= 2);
}

#[test]
fn verify_suites_pass() {
    let dir = tempfile::tempdir().unwrap();
    for suite in ["appendix1", "induction", "cyclic", "cheeger"] {
        let o = run(dir.path(), &["verify", suite]);
        assert!(o.status.success(), "{suite}: {}", stdout(&o));
        assert!(!stdout(&o).contains("FAIL"));
    }
    let report = json(dir.path(), &["verify", "cyclic"]);
    assert_eq!(report["pass"], true);
}

#[test]
fn tables() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(dir.path(), &["table", "--group", "binary-dihedral", "--q", "4"]);
    assert_eq!(v["table"]["classes"].as_array().unwrap().len(), 7);
    let v = json(dir.path(), &["table", "--group", "Yprime"]);
    assert_eq!(v["table"]["irreps"].as_array().unwrap().len(), 9);
    let text = stdout(&run(dir.path(), &["table", "--group", "Tprime"]));
    assert!(text.contains("sum dim^2 = 24"), "{text}");
}

#[test]
fn cache_clear_and_warm() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c");
    assert!(run(&cache, &["cache", "warm"]).status.success());
    assert_eq!(cached_files(&cache), 7);
    let o = run(&cache, &["cache", "clear"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("removed 7"));
    assert_eq!(cached_files(&cache), 0);
}

#[test]
fn warm_and_cold_runs_match() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["compute", "--group", "Oprime", "--twist", "all"];
    let cold = run(dir.path(), &args);
    assert_eq!(cached_files(dir.path()), 1);
    let warm = run(dir.path(), &args);
    let mut uncached = vec!["--no-cache"];
    uncached.extend_from_slice(&args);
    let none = run(dir.path(), &uncached);
    assert!(cold.status.success());
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(cold.stdout, none.stdout);
}

#[test]
fn corrupt_cache_entries_are_rebuilt() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--format", "json", "compute", "--group", "Tprime", "--twist", "2s'"];
    let first = run(dir.path(), &args);
    for e in std::fs::read_dir(dir.path()).unwrap() {
        std::fs::write(e.unwrap().path(), b"{ not json").unwrap();
    }
    let second = run(dir.path(), &args);
    assert!(second.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn json_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(dir.path(), &["compute", "--group", "binary-dihedral", "--q", "3", "--twist", "all"]);
    let back: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(v, back);
    for row in v.as_array().unwrap() {
        let (n, t) = (row["lnT"].as_f64().unwrap(), row["T"].as_f64().unwrap());
        assert!((n.exp() - t).abs() < 1e-12 * t.max(1.0));
    }
}

#[test]
fn bad_arguments_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[&[&str]] = &[
        &["compute", "--group", "lens"],
        &["compute", "--group", "Yprime", "--twist", "nope"],
        &["compute", "--group", "Yprime", "--q", "3"],
        &["compute", "--group", "lens", "--q", "6", "--l", "1,2"],
        &["compute", "--group", "lens", "--q", "5", "--l", "1"],
        &["compute", "--group", "Tprime", "--route", "lens"],
        &["compute", "--group", "Tprime", "--twist", "2s", "--route", "cyclic"],
        &["--em-order", "3", "compute", "--group", "Tprime"],
        &["compute", "--group", "E8"],
        &["frobnicate"],
    ];
    for args in cases {
        let o = run(dir.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn unwritable_cache_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("plain-file");
    std::fs::write(&file, b"").unwrap();
    let o = run(&file, &["table", "--group", "Tprime"]);
    assert_eq!(o.status.code(), Some(4));
}
