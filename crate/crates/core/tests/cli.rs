use std::fs;

use defcms::cli::{self, compute, verify, Object, Opts, Status, Suite};

fn run(args: &str) -> i32 {
    cli::run(std::iter::once("defcms").chain(args.split_whitespace()))
}

fn opts() -> Opts {
    Opts::default()
}

#[test]
fn exit_codes() {
    assert_eq!(run("verify main-identity --system D21 --out /dev/null"), 0);
    assert_eq!(run("verify commute --system A --n 2 --m 1 --pmax 3 --out /dev/null"), 0);
    assert_eq!(run("verify poincare --n 2 --m 2 --N 8 --out /dev/null"), 0);
    assert_eq!(run("verify nonsense"), 2);
    assert_eq!(run("verify gauge --system E8"), 2);
    assert_eq!(run("verify gauge --model elliptic"), 2);
    assert_eq!(run("compute integral --system G12 --p 3"), 3);
    assert_eq!(run("compute bernoulli --system BC --r 2"), 3);
    assert_eq!(run("verify dimensions --n 2 --m 1 --N 5 --pin-k 1 --out /dev/null"), 1);
    assert_eq!(run("verify dimensions --pin-k x"), 2);
}

#[test]
fn reports_are_deterministic() {
    let o = Opts { system: Some("BC".into()), pmax: Some(4), ..opts() };
    let a = serde_json::to_string(&verify(Suite::Commute, &o).unwrap()).unwrap();
    let b = serde_json::to_string(&verify(Suite::Commute, &o).unwrap()).unwrap();
    assert_eq!(a, b);
    assert!(!a.contains("wall_time_ms"));
}

#[test]
fn failed_claims_carry_witnesses() {
    let o = Opts { n: Some(2), m: Some(1), big_n: Some(5), pin_k: Some("1".into()), ..opts() };
    let r = verify(Suite::Dimensions, &o).unwrap();
    assert_eq!(r.status, Status::Fail);
    assert!(r.claims.iter().filter(|c| c.status == Status::Fail).all(|c| c.witness.is_some()));
}

#[test]
fn diagnostics_are_reported_not_gating() {
    let r = verify(Suite::Macdonald, &opts()).unwrap();
    assert!(r.passed());
    let diag = r.claims.iter().find(|c| c.id.starts_with("differential-limit")).unwrap();
    assert_eq!(diag.status, Status::Reported);
}

#[test]
fn compute_objects() {
    let o = Opts { system: Some("A".into()), n: Some(1), m: Some(1), p: Some(1), ..opts() };
    assert_eq!(compute(Object::HcImage, &o).unwrap(), "lam1 + lam2");
    let o = Opts { n: Some(1), m: Some(1), lambda: Some("2".into()), ..opts() };
    let sj = compute(Object::SuperJack, &o).unwrap();
    assert!(sj.contains("x1^2") && sj.contains('k'), "{sj}");
    let o = Opts { n: Some(1), m: Some(1), r: Some(2), ..opts() };
    assert_eq!(compute(Object::Newton, &o).unwrap(), "x1^2 + (1/k)*y1^2");
}

#[test]
fn config_file_and_out_path() {
    let dir = std::env::temp_dir().join(format!("defcms-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("cfg.json");
    let out = dir.join("report.json");
    fs::write(&cfg, r#"{"n": 2, "m": 1, "N": 4}"#).unwrap();
    let code = run(&format!("verify poincare --config {} --out {}", cfg.display(), out.display()));
    assert_eq!(code, 0);
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["system"]["n"], 2);
    assert_eq!(report["tables"]["poincare"]["rows"].as_array().unwrap().len(), 5);
    fs::write(&cfg, r#"{"bogus": 1}"#).unwrap();
    assert_eq!(run(&format!("verify poincare --config {}", cfg.display())), 2);
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn pinned_k_specializes_the_system() {
    let o = Opts { system: Some("A".into()), n: Some(2), m: Some(1), pin_k: Some("-1/2".into()), ..opts() };
    let r = verify(Suite::MainIdentity, &o).unwrap();
    assert!(r.passed());
    assert_eq!(r.system.k, "-1/2");
}
