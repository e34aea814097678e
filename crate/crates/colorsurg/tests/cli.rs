use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_colorsurg"));
    c.env_remove("COLORSURG_OUT_DIR");
    c
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("colorsurg_cli_{name}_{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().unwrap()
}

fn error_kind(o: &Output) -> String {
    let err = String::from_utf8_lossy(&o.stderr);
    let last = err.lines().last().unwrap_or_default();
    let v: serde_json::Value = serde_json::from_str(last).expect("machine-readable error line");
    v["error"]["kind"].as_str().unwrap().to_string()
}

#[test]
fn version_and_help() {
    let o = bin().arg("--version").output().unwrap();
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains(env!("CARGO_PKG_VERSION")));
    let o = bin().arg("--help").output().unwrap();
    assert!(o.status.success());
    let help = String::from_utf8_lossy(&o.stdout);
    for sub in ["lattice", "surgery", "decode", "anyons", "estimate"] {
        assert!(help.contains(sub));
    }
}

#[test]
fn exit_codes() {
    let d = scratch("codes");
    let o = run(&d, &["lattice", "build", "--family", "triangular", "--distance", "4", "--out", "x.json"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(error_kind(&o), "validation");
    let o = run(&d, &["lattice", "frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_kind(&o), "parse");
    let o = run(&d, &["decode", "sweep", "--layout", "missing.json", "--p-list", "0.01"]);
    assert_eq!(o.status.code(), Some(1));
    std::fs::write(d.join("bad.json"), "{").unwrap();
    let o = run(&d, &["surgery", "run", "--layout", "bad.json"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&d, &["estimate", "sweep", "--p-min", "0.01", "--p-max", "0.02", "--points", "3"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn surgery_and_decode_are_seeded_and_round_trip() {
    let d = scratch("seeded");
    assert!(run(&d, &["lattice", "build", "--family", "triangular", "--distance", "3", "--out", "f.json"]).status.success());
    let args = ["surgery", "run", "--layout", "f.json", "--la", "X1 X3 Z4", "--lb", "Z1 Z2 Z3 Z4", "--seed", "5", "--trials", "20", "--out", "r.json"];
    let o = run(&d, &args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let first = std::fs::read(d.join("r.json")).unwrap();
    let mut t2 = args.to_vec();
    t2.extend(["--threads", "2"]);
    assert!(run(&d, &t2).status.success());
    assert_eq!(first, std::fs::read(d.join("r.json")).unwrap());
    let v: serde_json::Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(v["config"]["seed"], 5);
    assert_eq!(v["summary"]["agreements"], 20);
    assert_eq!(v["summary"]["single_merge_window"], true);
    assert!(run(&d, &["surgery", "run", "--in", "r.json", "--out", "r2.json"]).status.success());
    assert_eq!(first, std::fs::read(d.join("r2.json")).unwrap());

    let sweep = ["decode", "sweep", "--layout", "f.json", "--p-list", "0.01,0.03", "--trials", "2000", "--seed", "3", "--csv", "o.csv"];
    assert!(run(&d, &sweep).status.success());
    let csv = std::fs::read_to_string(d.join("o.csv")).unwrap();
    assert!(csv.lines().nth(1).unwrap() == "d,p,trials,failures,rate,ci_low,ci_high");
    assert!(csv.starts_with("# config: "));
    assert!(run(&d, &["decode", "sweep", "--in", "o.csv", "--csv", "o2.csv"]).status.success());
    assert_eq!(csv, std::fs::read_to_string(d.join("o2.csv")).unwrap());
}

#[test]
fn lattice_and_layout_round_trip() {
    let d = scratch("layout");
    assert!(run(&d, &["lattice", "build", "--distance", "5", "--out", "f.json"]).status.success());
    assert!(run(&d, &["lattice", "build", "--in", "f.json", "--out", "g.json"]).status.success());
    assert_eq!(std::fs::read(d.join("f.json")).unwrap(), std::fs::read(d.join("g.json")).unwrap());
    assert!(run(&d, &["lattice", "layout", "--distance", "3", "--la", "X1 X2", "--lb", "Z1 Z2", "--out", "l.json"]).status.success());
    assert!(run(&d, &["lattice", "layout", "--in", "l.json", "--out", "l2.json"]).status.success());
    assert_eq!(std::fs::read(d.join("l.json")).unwrap(), std::fs::read(d.join("l2.json")).unwrap());
    let o = run(&d, &["surgery", "run", "--layout", "l.json", "--trials", "5"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["summary"]["agreements"], 5);
}

#[test]
fn anyons_and_estimates() {
    let d = scratch("est");
    for (k, n) in [("boundaries", 6), ("transparent", 72), ("semitransparent", 162), ("opaque", 36)] {
        let o = run(&d, &["anyons", "enumerate", "--kind", k, "--validate"]);
        assert!(o.status.success());
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["count"], n);
        assert_eq!(v["violations"].as_array().unwrap().len(), 0);
    }
    let o = run(&d, &["anyons", "enumerate", "--kind", "semitransparent", "--out", "s.json"]);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "count 162");
    assert!(run(&d, &["anyons", "enumerate", "--in", "s.json", "--out", "s2.json"]).status.success());
    assert_eq!(std::fs::read(d.join("s.json")).unwrap(), std::fs::read(d.join("s2.json")).unwrap());

    let args = ["estimate", "sweep", "--n", "100", "--tcount", "1e8", "--budget", "0.01", "--p-min", "5e-5", "--p-max", "2e-3", "--points", "50", "--csv", "fig.csv"];
    assert!(run(&d, &args).status.success());
    let text = std::fs::read_to_string(d.join("fig.csv")).unwrap();
    assert_eq!(text.lines().count(), 52);
    assert!(run(&d, &["estimate", "sweep", "--in", "fig.csv", "--csv", "fig2.csv"]).status.success());
    assert_eq!(text, std::fs::read_to_string(d.join("fig2.csv")).unwrap());

    let o = run(&d, &["estimate", "table1", "--n", "100"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let r = v["table"]["spacetime_ratio_surface_over_color"].as_f64().unwrap();
    assert!((r - 3.057).abs() < 1e-3);
    let o = run(&d, &["estimate", "distill"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["time_speedup"].as_f64().unwrap(), 1.8);
}

#[test]
fn output_dir_from_environment() {
    let d = scratch("env");
    let o = bin().current_dir(&d).env("COLORSURG_OUT_DIR", d.join("outs")).args(["estimate", "distill", "--out", "x.json"]).output().unwrap();
    assert!(o.status.success());
    assert!(d.join("outs").join("x.json").exists());
}
