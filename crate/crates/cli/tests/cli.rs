use std::process::{Command, Output};

use qgauss_cli::table::{Table, TableKind};

fn qgauss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgauss"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn eval_prints_exact_value_and_trace() {
    let out = qgauss(&["eval", "15", "2", "--trace"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("exact:   i\n"), "{text}");
    let tags: Vec<&str> = text
        .lines()
        .filter_map(|l| l.split_whitespace().nth(1))
        .filter(|t| ["Prop10", "Lemma2"].contains(t))
        .collect();
    assert_eq!(tags, ["Prop10", "Prop10", "Lemma2"]);
}

#[test]
fn eval_trivial_modulus() {
    let out = qgauss(&["eval", "1", "6"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("exact:   1\n"));
}

#[test]
fn eval_odd_numerator_is_numeric_only() {
    let out = qgauss(&["eval", "7", "3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["exact"].is_null());
    assert!(v["numeric"]["re"].is_f64());
}

#[test]
fn exit_codes() {
    assert_eq!(qgauss(&["eval", "0", "2"]).status.code(), Some(2));
    assert_eq!(qgauss(&["eval", "-3", "2"]).status.code(), Some(2));
    assert_eq!(qgauss(&["table", "bogus"]).status.code(), Some(2));
    assert_eq!(qgauss(&["sylvester", "3", "9"]).status.code(), Some(2));
    assert_eq!(qgauss(&["eval", "4294967296", "2"]).status.code(), Some(3));
    assert_eq!(
        qgauss(&["count-sqrt", "3", "5000", "--max-modulus", "4096"]).status.code(),
        Some(3)
    );
}

#[test]
fn verify_ls_grid_summary() {
    let out = qgauss(&["verify-ls", "--max-a", "50", "--max-b", "50", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["total"], 2500);
    assert_eq!(v["passes"], 2500);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);

    let out = qgauss(&["verify-ls", "--max-a", "1", "--max-b", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("passes:   1\n"));
}

#[test]
fn verify_ls_independent_of_workers() {
    let run = |w: &str| {
        let out = qgauss(&["verify-ls", "--max-a", "20", "--max-b", "20", "--json", "--workers", w]);
        let mut v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        v.as_object_mut().unwrap().remove("wall_time_secs");
        v
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn count_sqrt_examples() {
    let text = stdout(&qgauss(&["count-sqrt", "1", "8"]));
    assert_eq!(text, "brute  4\nclosed 4\n");
    let text = stdout(&qgauss(&["count-sqrt", "0", "9"]));
    assert_eq!(text, "brute  3\nclosed 3\n");
    let out = qgauss(&["count-sqrt", "5", "12"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "brute  0\nclosed n/a (not a prime power)\n");
}

#[test]
fn oracle_subcommands_pass() {
    for args in [
        &["fourier-check", "3", "3", "2"][..],
        &["fourier-check", "2", "5", "-3"],
        &["sylvester", "7", "9"],
        &["induction-check", "3", "5", "7", "2"],
        &["induction-check", "3", "5", "2", "3"],
    ] {
        let out = qgauss(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", stdout(&out));
    }
}

#[test]
fn table_lemma1_csv() {
    let out = qgauss(&["table", "lemma1", "--max", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(reader.headers().unwrap(), vec!["a", "exact", "re", "im"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 8);
    assert_eq!(&rows[1][1], r#"{"kind":"zero"}"#);
    assert_eq!(&rows[3][1], r#"{"kind":"root8","coeff":"1","radicand":2,"octant":1}"#);
}

#[test]
fn table_reflection_is_all_ones() {
    let out = qgauss(&["table", "reflection", "--p", "3", "--max-k", "4", "--json"]);
    let table = Table::from_json(&stdout(&out)).unwrap();
    assert_eq!(table.rows.len(), 4);
    assert!(table.rows.iter().all(|r| r.exact.to_string() == "1"));
}

#[test]
fn table_json_round_trips_for_every_kind() {
    for kind in ["lemma1", "prop10", "prop11", "reflection"] {
        let out = qgauss(&["table", kind, "--json", "--max-k", "7", "--l", "-5", "--p", "7"]);
        assert_eq!(out.status.code(), Some(0), "{kind}");
        let text = stdout(&out);
        let table = Table::from_json(&text).unwrap();
        assert_eq!(format!("{}\n", table.to_json()), text, "{kind}");
    }
}

#[test]
fn table_round_trips_in_process() {
    let limits = qgauss::Limits::default();
    for kind in [TableKind::Lemma1, TableKind::Prop10, TableKind::Prop11, TableKind::Reflection] {
        let table = Table::build(kind, 40, Some(5), 6, 3, &limits).unwrap();
        let json = table.to_json();
        let parsed = Table::from_json(&json).unwrap();
        assert_eq!(parsed, table);
        assert_eq!(parsed.to_json(), json);
    }
}

#[test]
fn table_rejects_bad_parameters() {
    assert_eq!(qgauss(&["table", "prop10", "--p", "2"]).status.code(), Some(2));
    assert_eq!(qgauss(&["table", "prop10", "--p", "3", "--l", "3"]).status.code(), Some(2));
    assert_eq!(qgauss(&["table", "prop11", "--l", "2"]).status.code(), Some(2));
}
