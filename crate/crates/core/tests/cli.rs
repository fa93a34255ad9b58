use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_causal-explain"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn machine(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "machine"]);
    let o = run(&all);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_slice(&o.stdout).expect("machine output is JSON")
}

#[test]
fn check_accepts_a_valid_network() {
    let o = run(&["check", fixture("coin_bag.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("2 variables, 1 edges"));
}

#[test]
fn check_rejects_a_bad_row_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    let text = std::fs::read_to_string(fixture("coin_bag.toml"))
        .unwrap()
        .replace("0.99", "0.98");
    std::fs::write(&path, text).unwrap();
    let o = run(&["check", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("sum"));
}

#[test]
fn missing_file_is_exit_2() {
    let o = run(&["rank", "/nonexistent/case.toml"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn rank_coin_bag() {
    let v = machine(&["rank", fixture("coin_bag.case.toml").to_str().unwrap()]);
    assert_eq!(v["format"], "causal-explain/report/1");
    assert!((v["state"]["explanandum_prob"].as_f64().unwrap() - 0.108).abs() < 1e-12);
    let rows = v["candidates"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["conjuncts"][0], "C=bt");
    assert!((rows[0]["ep_ratio"].as_f64().unwrap() - 25.0 / 3.0).abs() < 1e-9);
}

#[test]
fn explanandum_must_be_observed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("case.toml");
    let net = fixture("coin_bag.toml");
    std::fs::write(
        &path,
        format!(
            "network = {:?}\nobservations = {{ C = \"bh\" }}\nexplanandum = {{ R = \"t\" }}\n",
            net.to_str().unwrap()
        ),
    )
    .unwrap();
    let o = run(&["rank", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn candidate_flags_override_the_case() {
    let case = fixture("coin_bag.case.toml");
    let v = machine(&["rank", case.to_str().unwrap(), "--require-raising"]);
    assert_eq!(v["candidates"].as_array().unwrap().len(), 1);

    let case = fixture("rain_wind_lawn.case.toml");
    let v = machine(&["rank", case.to_str().unwrap(), "--max-conjuncts", "1"]);
    let rows = v["candidates"].as_array().unwrap();
    assert!(rows
        .iter()
        .all(|r| r["conjuncts"].as_array().unwrap().len() == 1));

    let case = fixture("asbestos.case.toml");
    let v = machine(&["rank", case.to_str().unwrap(), "--no-mechanism-conjunct"]);
    assert!(v["candidates"].as_array().unwrap().is_empty());
    let v = machine(&["rank", case.to_str().unwrap()]);
    assert!(!v["candidates"].as_array().unwrap().is_empty());

    let case = fixture("four_coin.case.toml");
    let v = machine(&["rank", case.to_str().unwrap()]);
    let conj: Vec<&str> = v["candidates"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["conjuncts"][0].as_str().unwrap())
        .collect();
    assert!(conj.contains(&"C in {C1,C2}"));
    assert!(conj.contains(&"C in {C1,C2,C3}"));
}

#[test]
fn epsilon_flag_is_validated() {
    let case = fixture("coin_bag.case.toml");
    let o = run(&["rank", case.to_str().unwrap(), "--epsilon", "-1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn mpe_and_compare() {
    let v = machine(&["mpe", fixture("vacation.case.toml").to_str().unwrap()]);
    let best = v["best"].as_u64().unwrap() as usize;
    let row = &v["per_structure"][best];
    assert!(row["world"]
        .as_array()
        .unwrap()
        .contains(&Value::from("D=d2")));
    assert!((row["posterior"].as_f64().unwrap() - 0.2).abs() < 1e-12);

    let v = machine(&["compare", fixture("coin_bag.case.toml").to_str().unwrap()]);
    assert_eq!(v["matrix"][0][1], "incomparable");
    assert_eq!(v["matrix"][1][1], "equal");
}

#[test]
fn scenarios() {
    let o = run(&["scenario", "all"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("[FAIL]"));
    let o = run(&["scenario", "coin-bag"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[PASS] posterior(C=bh)"));
    let o = run(&["scenario", "no-such-thing"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn exit_code_mapping() {
    use causal_explain::Error;
    assert_eq!(Error::NullConditioning.exit_code(), 3);
    assert_eq!(Error::ImpossibleExplanation.exit_code(), 3);
    assert_eq!(Error::ImpossibleExplanandum.exit_code(), 3);
    assert_eq!(Error::UnknownScenario("x".into()).exit_code(), 4);
    assert_eq!(Error::Parse("x".into()).exit_code(), 2);
}
