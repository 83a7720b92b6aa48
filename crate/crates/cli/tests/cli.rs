use std::path::PathBuf;
use std::process::Command;

use odeinv::report::IdentityReport;
use odeinv_cli::{exit_code, render, run, Format, Output, Provenance, RunReport};

struct Files(PathBuf);

impl Files {
    fn new(tag: &str) -> Files {
        let dir = std::env::temp_dir().join(format!("odeinv-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Files(dir)
    }

    fn put(&self, name: &str, text: &str) -> String {
        let p = self.0.join(name);
        std::fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    }
}

impl Drop for Files {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

const CUBIC: &str = "# y'' = 1 + x^2 y'^3\nname = cubic\nP = 1\nQ = 0\nR = 0\nS = x^2\n";
const SHEAR: &str = "xt = x\nyt = y + x^2\nx = xt\ny = yt - xt^2\n";

fn go(args: &[&str]) -> Output {
    run(std::iter::once("odeinv").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> (u8, RunReport) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = go(&full);
    let report = serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}{}", out.stdout, out.stderr));
    (out.code, report)
}

fn scalar<'a>(list: &'a Option<Vec<odeinv_cli::ScalarEntry>>, name: &str) -> &'a odeinv_cli::ScalarEntry {
    list.as_ref().unwrap().iter().find(|s| s.name == name).unwrap()
}

#[test]
fn classify_zero_equation() {
    let f = Files::new("zero");
    let ode = f.put("zero.ode", "P = 0\nQ = 0\nR = 0\nS = 0\n");
    let (code, r) = json(&["classify", &ode]);
    assert_eq!(code, 0);
    assert_eq!(r.verdict.unwrap().kind, "maximal_degeneration");
    let text = go(&["classify", &ode]);
    assert_eq!(text.stdout, "verdict: maximal degeneration\n");
}

#[test]
fn invariants_at_the_origin() {
    let f = Files::new("inv");
    let ode = f.put("cubic.ode", CUBIC);
    let (code, r) = json(&["invariants", &ode, "--scheme", "both", "--point", "0,0"]);
    assert_eq!(code, 0);
    for (name, want) in [("F5", "-24"), ("I2", "1/3"), ("I6", "0"), ("K", "0")] {
        let s = scalar(&r.scalars_sd, name);
        assert_eq!(s.value, want, "{name}");
        assert_eq!(s.provenance, Provenance::Exact);
    }
    assert_eq!(scalar(&r.scalars_bgd, "Omega2").value, "0");
    let v = r.verdict.unwrap();
    assert_eq!((v.kind.as_str(), v.f5.as_deref()), ("general_position_at", Some("-24")));
}

#[test]
fn symbolic_invariants_by_scheme() {
    let f = Files::new("sym");
    let ode = f.put("cubic.ode", CUBIC);
    let (_, r) = json(&["invariants", &ode, "--scheme", "sd"]);
    assert!(r.scalars_bgd.is_none());
    assert_eq!(scalar(&r.scalars_sd, "F5").value, "64*x^5 - 24");
    assert_eq!(scalar(&r.scalars_sd, "I2").value, "1/3");
    assert_eq!(scalar(&r.scalars_sd, "I2").provenance, Provenance::Symbolic);
    let (_, r) = json(&["invariants", &ode, "--scheme", "bgd"]);
    assert!(r.scalars_sd.is_none());
    assert_eq!(scalar(&r.scalars_bgd, "J0").value, "-64*x^5 + 24");
}

#[test]
fn transcendental_point_values_are_numeric() {
    let f = Files::new("trans");
    let ode = f.put("sin.ode", "P = sin(x)\nQ = 0\nR = 0\nS = 1\n");
    let (code, r) = json(&["invariants", &ode, "--point", "1/2,0"]);
    assert_eq!(code, 0);
    assert_eq!(scalar(&r.scalars_sd, "I3").provenance, Provenance::Numeric);
}

#[test]
fn transform_emits_pulled_back_equation() {
    let f = Files::new("tr");
    let (ode, map) = (f.put("cubic.ode", CUBIC), f.put("shear.map", SHEAR));
    let (code, r) = json(&["transform", &ode, &map]);
    assert_eq!(code, 0);
    let t = r.transformed.unwrap();
    assert_eq!((t.p.as_str(), t.q.as_str(), t.r.as_str(), t.s.as_str()), ("-8*x^5 + 3", "4*x^4", "-2*x^3", "x^2"));
}

#[test]
fn compare_and_check_weights_pass() {
    let f = Files::new("cmp");
    let (ode, map) = (f.put("cubic.ode", CUBIC), f.put("shear.map", SHEAR));
    let (code, r) = json(&["compare", &ode]);
    assert_eq!(code, 0);
    assert!(r.identities.len() > 40);
    let (code, r) = json(&["check-weights", &ode, &map, "--points", "12"]);
    assert_eq!(code, 0, "{:?}", r.identities);
    assert!(r.identities.iter().any(|i| i.name == "K agrees at matched points"));
}

#[test]
fn special_verify_is_exact() {
    let (code, r) = json(&["special-verify"]);
    assert_eq!(code, 0);
    assert!(r.identities.iter().all(|i| i.status == odeinv::report::Status::ExactZero));
}

#[test]
fn fuzz_reports_trials_in_order() {
    let (code, r) = json(&["--seed", "3", "fuzz", "--trials", "2", "--degree", "1"]);
    assert_eq!(code, 0);
    let idx: Vec<usize> = r.trials.iter().map(|t| t.index).collect();
    assert_eq!(idx, [0, 1]);
    assert!(r.identities[0].name.starts_with("random-0: "));
}

#[test]
fn reports_round_trip_and_repeat() {
    let f = Files::new("rt");
    let ode = f.put("cubic.ode", CUBIC);
    let args = ["--format", "json", "invariants", &ode, "--point", "1/3,-2"];
    let (a, b) = (go(&args), go(&args));
    assert_eq!(a.stdout, b.stdout);
    let r: RunReport = serde_json::from_str(&a.stdout).unwrap();
    assert_eq!(serde_json::to_string_pretty(&r).unwrap() + "\n", a.stdout);
    let keys: Vec<String> = serde_json::from_str::<serde_json::Value>(&a.stdout)
        .unwrap()
        .as_object()
        .unwrap()
        .keys()
        .cloned()
        .collect();
    for k in ["verdict", "scalars_sd", "scalars_bgd", "identities", "timing_ms"] {
        assert!(keys.iter().any(|x| x == k), "{k}");
    }
}

#[test]
fn timing_is_opt_in() {
    let (_, r) = json(&["special-verify"]);
    assert_eq!(r.timing_ms, None);
    let (_, r) = json(&["--timing", "special-verify"]);
    assert!(r.timing_ms.is_some());
}

#[test]
fn exit_codes() {
    let f = Files::new("codes");
    let bad = f.put("bad.ode", "P = 1\nQ = 0\nR = (x +\nS = 0\n");
    let out = go(&["classify", &bad]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("bad.ode") && out.stderr.contains("line 3") && out.stderr.contains("byte"));
    let missing = f.put("missing.ode", "P = 1\nQ = 0\nS = 0\n");
    assert_eq!(go(&["classify", &missing]).code, 2);
    assert_eq!(go(&["classify", "/no/such/file.ode"]).code, 2);
    assert_eq!(go(&["frobnicate"]).code, 2);
    assert_eq!(go(&["--format", "yaml", "special-verify"]).code, 2);
    let ode = f.put("cubic.ode", CUBIC);
    assert_eq!(go(&["invariants", &ode, "--point", "1"]).code, 2);
    assert_eq!(go(&["--tolerance", "-1", "special-verify"]).code, 2);
    assert_eq!(go(&["--help"]).code, 0);
}

#[test]
fn failed_reports_exit_with_one() {
    let (_, mut r) = json(&["special-verify"]);
    assert_eq!(exit_code(&r), 0);
    r.identities.push(IdentityReport::failed("made up", "nonzero"));
    assert_eq!(exit_code(&r), 1);
    assert!(render(&r, Format::Text).contains("FAILED       made up"));
}

#[test]
fn binary_exit_status() {
    let f = Files::new("bin");
    let ode = f.put("zero.ode", "P = 0\nQ = 0\nR = 0\nS = 0\n");
    let status = Command::new(env!("CARGO_BIN_EXE_odeinv")).args(["classify", &ode]).output().unwrap();
    assert_eq!(status.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&status.stdout), "verdict: maximal degeneration\n");
    let status = Command::new(env!("CARGO_BIN_EXE_odeinv")).arg("nope").output().unwrap();
    assert_eq!(status.status.code(), Some(2));
}
