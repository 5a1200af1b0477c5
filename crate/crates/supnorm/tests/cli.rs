use std::process::{Command, Output};

use serde_json::Value;

fn supnorm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_supnorm"))
        .args(args)
        .env_remove("SUPNORM_BUDGET")
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> (i32, Value) {
    let out = supnorm(args);
    let json = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    });
    (out.status.code().unwrap(), json)
}

#[test]
fn multiply_routes_agree() {
    let (code, r) = report(&["multiply", "--n", "2", "--p", "3", "--a", "1,0", "--b", "1,0"]);
    assert_eq!(code, 0);
    assert_eq!(r["verdict"], "PASS");
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["config"]["command"]["multiply"]["p"], 3);
    assert_eq!(r["result"]["satake"]["expression"], "T(2,0) + 4·T(1,1)");
    assert_eq!(r["result"]["oracle"]["expression"], "T(2,0) + 4·T(1,1)");
    assert_eq!(r["result"]["diff"], Value::Array(vec![]));
}

#[test]
fn amplifier_table_for_rank_two() {
    let (code, r) = report(&["amplifier", "--n", "2", "--p", "5"]);
    assert_eq!(code, 0);
    assert_eq!(r["verdict"], "PASS");
    let y: Vec<&str> = r["result"]["y"].as_array().unwrap().iter().map(|e| e["y"].as_str().unwrap()).collect();
    assert_eq!(y, ["-5/6", "5/6"]);
}

#[test]
fn sdelta_witnesses_include_hadamard() {
    let (code, r) = report(&["count", "--mode", "sdelta", "--n", "4", "--q", "identity", "--m", "16", "--l", "2", "--delta", "1e-6"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["count"], 384);
    let hadamard = serde_json::json!([[1, 1, 1, 1], [1, -1, 1, -1], [1, 1, -1, -1], [1, -1, -1, 1]]);
    let witnesses = r["result"]["witnesses"].as_array().unwrap();
    let w = witnesses.iter().find(|w| w["rows"] == hadamard).expect("Sylvester matrix present");
    assert_eq!(w["det"], "16");
    assert_eq!(w["determinantal_divisors"], serde_json::json!(["1", "2", "4", "16"]));
    assert_eq!(w["deviation"], 0.0);
}

#[test]
fn reports_are_byte_identical() {
    let args = ["count", "--mode", "corollary", "--n", "3", "--k", "1", "--x", "10,20", "--trials", "3", "--seed", "9"];
    let a = supnorm(&args);
    let b = supnorm(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let mut other = args.to_vec();
    other[args.len() - 1] = "10";
    assert_ne!(supnorm(&other).stdout, a.stdout);
}

#[test]
fn timing_only_when_requested() {
    let (_, plain) = report(&["cosets", "--n", "2", "--p", "2", "--a", "1,0"]);
    assert!(plain.get("timing").is_none());
    assert_eq!(plain["result"]["degree"], 3);
    let (_, timed) = report(&["cosets", "--n", "2", "--p", "2", "--a", "1,0", "--timing"]);
    assert!(timed["timing"]["elapsed_seconds"].as_f64().is_some());
}

#[test]
fn csv_for_ladders_only() {
    let out = supnorm(&["lem2", "--n", "3", "--j", "1", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# supnorm "));
    assert!(text.contains("\np,i,cell,c_i\n"));
    assert_eq!(supnorm(&["amplifier", "--n", "2", "--p", "5", "--format", "csv"]).status.code(), Some(2));
}

#[test]
fn exit_codes() {
    assert_eq!(supnorm(&["satake", "--n", "2", "--p", "3", "--a", "2,1,0"]).status.code(), Some(2));
    assert_eq!(supnorm(&["satake", "--n", "2", "--p", "4", "--a", "1,0"]).status.code(), Some(2));
    assert_eq!(supnorm(&["count", "--mode", "sdelta", "--m", "16", "--l", "2"]).status.code(), Some(2));
    let (code, r) = report(&["cosets", "--n", "3", "--p", "5", "--a", "3,0,0", "--budget", "10"]);
    assert_eq!((code, r["verdict"].as_str()), (3, Some("PARTIAL")));
    assert_eq!(r["result"]["degree_formula"], "19375");
    let budget_env = Command::new(env!("CARGO_BIN_EXE_supnorm"))
        .args(["multiply", "--n", "3", "--p", "5", "--a", "3,0,0", "--b", "1,0,0"])
        .env("SUPNORM_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(budget_env.status.code(), Some(3));
    let (code, r) = report(&["count", "--mode", "sdelta", "--n", "4", "--m", "81", "--l", "3", "--node-budget", "100"]);
    assert_eq!((code, r["result"]["complete"].as_bool()), (3, Some(false)));
}

#[test]
fn form_sources() {
    let dir = std::env::temp_dir().join(format!("supnorm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("q.json");
    std::fs::write(&path, r#"{"num": [[2, 1], [1, 2]], "den": 2}"#).unwrap();
    let q = format!("file:{}", path.display());
    let (code, r) = report(&["count", "--mode", "sdelta", "--q", &q, "--m", "3", "--l", "3", "--delta", "0.6"]);
    assert_eq!(code, 0);
    assert!(r["result"]["count"].as_u64().unwrap() > 0);
    let (_, a) = report(&["count", "--mode", "sdelta", "--n", "2", "--q", "seed:4", "--m", "5", "--l", "5", "--delta", "0.45"]);
    let (_, b) = report(&["count", "--mode", "sdelta", "--n", "2", "--q", "seed:4", "--m", "5", "--l", "5", "--delta", "0.45"]);
    assert_eq!(a["result"]["q_digest"], b["result"]["q_digest"]);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn verify_quick_passes() {
    let (code, r) = report(&["verify", "--only", "2,5,9,10"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["passed"], 4);
}
