use std::path::PathBuf;

use causal_explain::cli::{run_rank, CandidateFlags};
use causal_explain::format::{load_case, parse_network, serialize_network};
use causal_explain::network::Violation;
use causal_explain::report::{fmt_num, OutputFormat};
use causal_explain::scenario::{fixture, run_all, FIXTURES};
use causal_explain::Error;
use serde_json::Value;

fn case(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

#[test]
fn every_scenario_network_round_trips() {
    for (stem, _) in FIXTURES {
        let net = fixture(stem).unwrap();
        let text = serialize_network(&net);
        assert_eq!(parse_network(&text).unwrap(), net, "{stem}");
    }
}

#[test]
fn coin_bag_file_shape() {
    let net = fixture("coin_bag").unwrap();
    assert_eq!(net.len(), 2);
    assert_eq!(net.edges().len(), 1);
}

#[test]
fn duplicate_variable_is_named() {
    let text = r#"
edges = []
[[variables]]
name = "A"
values = ["f", "t"]
[[variables]]
name = "A"
values = ["x", "y"]
[cpts]
A = [{ given = [], p = [0.5, 0.5] }]
"#;
    let e = parse_network(text).unwrap_err();
    assert_eq!(e, Error::DuplicateVariable("A".into()));
    assert!(e.to_string().contains("`A`"));
}

#[test]
fn short_row_is_a_validation_error() {
    let text = r#"
edges = []
[[variables]]
name = "A"
values = ["f", "t"]
[cpts]
A = [{ given = [], p = [0.5, 0.49] }]
"#;
    match parse_network(text).unwrap_err() {
        Error::InvalidNetwork(v) => assert!(matches!(v[..], [Violation::RowSum { .. }])),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn syntax_errors_carry_a_line() {
    let e = parse_network("edges = [\n[[variables]\n").unwrap_err();
    assert!(matches!(e, Error::Parse(_)));
    assert!(e.to_string().contains("line"), "{e}");
}

#[test]
fn coin_bag_case_report() {
    let report = run_rank(
        &load_case(&case("coin_bag.case.toml")).unwrap(),
        &CandidateFlags::default(),
    )
    .unwrap();
    assert_eq!(report.candidates.len(), 2);
    let frontier_done = report
        .candidates
        .iter()
        .position(|r| !r.frontier_flag)
        .unwrap_or(report.candidates.len());
    assert!(report.candidates[frontier_done..]
        .iter()
        .all(|r| !r.frontier_flag));
}

/// Every number in the machine document shows up, formatted, in the table.
#[test]
fn table_and_machine_agree() {
    for outcome in run_all().unwrap() {
        for (label, report) in &outcome.reports {
            let table = report.render(OutputFormat::Table);
            let doc: Value = serde_json::from_str(&report.render(OutputFormat::Machine)).unwrap();
            let lines: Vec<&str> = table.lines().collect();
            let rows = doc["candidates"].as_array().unwrap();
            let header = lines.iter().position(|l| l.contains("ep_ratio")).unwrap();
            assert_eq!(lines.len() - header - 1, rows.len(), "{label}");
            for (row, line) in rows.iter().zip(&lines[header + 1..]) {
                for key in ["ep_ratio", "ep_diff", "prior", "posterior"] {
                    let x = row[key].as_f64().unwrap();
                    assert!(
                        line.split_whitespace().any(|tok| tok == fmt_num(x)),
                        "{label}: {key}={x} missing from `{line}`"
                    );
                }
            }
            let pe = doc["state"]["explanandum_prob"].as_f64().unwrap();
            assert!(table.contains(&format!("Pr-(E) = {}", fmt_num(pe))));
        }
    }
}

#[test]
fn mixture_case_loads_both_structures() {
    let c = load_case(&case("asbestos.case.toml")).unwrap();
    assert_eq!(c.structures.len(), 2);
    let (k, _) = c.resolve().unwrap();
    assert_eq!(k.structures().len(), 2);
}
