use std::process::Command;

use eqg::cli::{
    default_roster, fmt_complex, parse_complex, run_scan, run_table, run_verify, Expect, ModuleSpec, Record, ScanArgs,
    SuiteConfig, SuiteName, TableKind, EXIT_CONFIG, EXIT_FAIL, EXIT_PASS,
};
use eqg::{c, EllipticParams, EqgError};

fn eqg() -> Command {
    Command::new(env!("CARGO_BIN_EXE_eqg"))
}

#[test]
fn config_round_trips_through_json() {
    let cfg = SuiteConfig::default();
    let text = serde_json::to_string(&cfg).unwrap();
    let back = SuiteConfig::from_json(&text).unwrap();
    assert_eq!(serde_json::to_string(&back).unwrap(), text);
    assert_eq!(back.roster, default_roster());
}

#[test]
fn partial_and_malformed_configs() {
    let cfg = SuiteConfig::from_json(r#"{"suites": ["theta"], "plan": {"count": 5}}"#).unwrap();
    assert_eq!(cfg.suites, vec![SuiteName::Theta]);
    assert_eq!(cfg.plan.count, 5);
    assert_eq!(cfg.params, EllipticParams::default());
    assert!(matches!(SuiteConfig::from_json(r#"{"sutes": []}"#), Err(EqgError::Config(_))));
    assert!(matches!(SuiteConfig::from_json(r#"{"suites": ["nope"]}"#), Err(EqgError::Config(_))));
    let bad_roster = SuiteConfig { roster: vec![ModuleSpec::Tensor { factors: vec![] }], ..SuiteConfig::default() };
    assert!(bad_roster.validate().is_err());
}

#[test]
fn complex_formatting() {
    assert_eq!(fmt_complex(c(0.5, -0.25)), "0.500000000000-0.250000000000i");
    assert_eq!(parse_complex("0.3+1.1i").unwrap(), c(0.3, 1.1));
    assert_eq!(parse_complex("-2i").unwrap(), c(0.0, -2.0));
    assert_eq!(parse_complex("1e-3-2.5e-1i").unwrap(), c(1e-3, -0.25));
    let z = c(-0.123456789012345, 9.87654321e-7);
    let back = parse_complex(&fmt_complex(z)).unwrap();
    // Twelve significant digits per component.
    assert!((back.re - z.re).abs() <= 1e-11 * z.re.abs() && (back.im - z.im).abs() <= 1e-11 * z.im.abs());
    assert!(parse_complex("1+").is_err());
}

#[test]
fn records_need_coverage() {
    assert!(Record::below("x", &[], 1e-12, 1e-8).pass);
    assert!(!Record::new("x", &[], 1e-12, 0.5, Expect::Below(1e-8)).pass);
    assert!(Record::new("x", &[], 1.0, 0.0, Expect::Info).pass);
    assert!(!Record::below("x", &[], f64::NAN, 1e-8).pass);
}

#[test]
fn verify_subset_and_report_shape() {
    let cfg = SuiteConfig { suites: vec![SuiteName::Theta, SuiteName::Rmatrix], ..SuiteConfig::default() };
    let report = run_verify(&cfg).unwrap();
    assert!(report.all_pass, "{}", report.summary());
    assert_eq!(report.exit_code(), EXIT_PASS);
    let json: serde_json::Value = serde_json::to_value(&report).unwrap();
    assert_eq!(json["schema"], 1);
    assert_eq!(json["suites"].as_array().unwrap().len(), 2);
    let tau = &json["config"]["params"]["tau"];
    assert_eq!(tau.as_array().unwrap().len(), 2, "complex numbers are [re, im]");
    // Same seed, same samples.
    let again = run_verify(&cfg).unwrap();
    assert_eq!(
        serde_json::to_value(&again.suites).unwrap()[0]["records"],
        json["suites"][0]["records"]
    );
}

#[test]
fn tables_are_csv() {
    let p = EllipticParams::default();
    let b = run_table(&TableKind::Binomial { j: 3 }, &p).unwrap();
    let lines: Vec<&str> = b.lines().collect();
    assert_eq!(lines[0], "j,l,coefficient");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("3,0,1.00000000000") && lines[1].ends_with('i'));
    let r = run_table(&TableKind::Rmatrix { lambda: "0".into(), w: "0.17+0.05i".into() }, &p);
    assert!(r.is_err(), "lambda = 0 sits on a pole");
}

#[test]
fn scan_agrees_with_the_lattice() {
    let p = EllipticParams::default();
    let args = ScanArgs {
        l1: 2,
        l2: 2,
        z1: "0.13+0.02i".into(),
        from: "-1.2+0.03i".into(),
        to: "1.2+0.03i".into(),
        steps: 3,
        delta: vec![],
        include_lattice: true,
        detect_tol: 1e-6,
    };
    let r = run_scan(&args, &p).unwrap();
    assert!(r.all_consistent);
    assert_eq!(r.points.len(), 3 + 12);
    assert!(r.detections >= 8);
}

#[test]
fn binary_exit_codes() {
    let ok = eqg().args(["verify", "--suite", "theta", "--samples", "5"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_PASS), "{}", String::from_utf8_lossy(&ok.stderr));
    let v: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["schema"], 1);

    let fail = eqg().args(["verify", "--suite", "iso", "--samples", "5"]).output().unwrap();
    assert_eq!(fail.status.code(), Some(EXIT_FAIL));

    for bad in [vec!["verify", "--suite", "nope"], vec!["verify", "--tau", "0.3-1i"], vec!["table", "--eta", "0", "binomial"]] {
        assert_eq!(eqg().args(&bad).output().unwrap().status.code(), Some(EXIT_CONFIG), "{bad:?}");
    }
    let threads = eqg().args(["verify", "--suite", "theta"]).env("EQG_THREADS", "0").output().unwrap();
    assert_eq!(threads.status.code(), Some(EXIT_CONFIG));

    let table = eqg().args(["table", "binomial", "--j", "2"]).output().unwrap();
    assert_eq!(table.status.code(), Some(EXIT_PASS));
    assert!(String::from_utf8(table.stdout).unwrap().starts_with("j,l,coefficient\n"));
}
