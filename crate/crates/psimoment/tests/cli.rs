use std::process::{Command, Output};

fn psimoment(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psimoment"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn sieve_counts() {
    let out = psimoment(&["sieve", "--limit", "100", "--count"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(
        text.starts_with("limit=100 primes=25 prime_powers=35 psi=9.404531"),
        "{text}"
    );
}

#[test]
fn sieve_lists_events() {
    let out = psimoment(&["sieve", "--limit", "10"]);
    let ns: Vec<u64> = stdout(&out)
        .lines()
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(ns, [2, 3, 4, 5, 7, 8, 9]);
}

#[test]
fn fixed_sum_is_deterministic_without_timing() {
    let args = [
        "fixed",
        "--x",
        "20000",
        "--h",
        "50",
        "--k",
        "2,4",
        "--no-timing",
    ];
    let a = psimoment(&args);
    let b = psimoment(&[&args[..], &["--threads", "4", "--segment-size", "777"]].concat());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("k,mode,x,h_or_delta,actual,"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn json_output() {
    let out = psimoment(&[
        "scaled", "--x", "1e4", "--delta", "0.01", "--k", "2", "--format", "json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["rows"][0]["mode"], "scaled-integral");
    assert!(doc["rows"][0]["actual"].as_f64().unwrap() > 0.0);
}

#[test]
fn predict_thm_ii() {
    let out = psimoment(&[
        "predict",
        "--formula",
        "thm-ii",
        "--x",
        "1e10",
        "--delta",
        "1e-5",
        "--k",
        "4",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let fields: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let v: f64 = fields[5].parse().unwrap();
    assert!((v / 1.0195e22 - 1.0).abs() < 1e-3, "{v}");
}

#[test]
fn predict_cramer() {
    let out = psimoment(&["predict", "--formula", "cramer", "--x", "1e6", "--h", "100"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("formula,x,h,gaussian_variance,cramer_variance,ratio\ncramer,"));
}

#[test]
fn checkpoint_and_resume() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("c.jsonl");
    let ckpt = ckpt.to_str().unwrap();
    let args = [
        "scaled",
        "--x",
        "1e5",
        "--delta",
        "1e-3",
        "--segment-size",
        "8192",
        "--no-timing",
    ];
    let first = psimoment(&[&args[..], &["--checkpoint", ckpt]].concat());
    assert!(first.status.success());
    let again = psimoment(&[&args[..], &["--checkpoint", ckpt, "--resume"]].concat());
    assert!(again.status.success());
    assert_eq!(first.stdout, again.stdout);
}

#[test]
fn exit_codes() {
    // usage
    assert_eq!(psimoment(&["fixed", "--x", "10"]).status.code(), Some(2));
    assert_eq!(psimoment(&["bogus"]).status.code(), Some(2));
    assert_eq!(
        psimoment(&["fixed", "--x", "10", "--h", "20"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        psimoment(&["fixed", "--x", "10", "--h", "2", "--k", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        psimoment(&["scaled", "--x", "10", "--delta", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        psimoment(&["scaled", "--x", "10", "--delta", "0.1", "--resume"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(psimoment(&["reproduce", "ms-table"]).status.code(), Some(2));
    // numeric range
    let out = psimoment(&[
        "predict",
        "--formula",
        "thm-ii",
        "--x",
        "1e300",
        "--delta",
        "0.1",
        "--k",
        "16",
    ]);
    assert_eq!(out.status.code(), Some(3));
    // I/O
    let out = psimoment(&[
        "fixed",
        "--x",
        "100",
        "--h",
        "5",
        "--out",
        "/nonexistent-dir/r.csv",
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent-dir/r.csv"));
}
