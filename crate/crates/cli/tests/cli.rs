use std::process::{Command, Output};

fn qflag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qflag"))
        .args(args)
        .env_remove("QFLAG_MAX_N")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid json")
}

#[test]
fn orthocell_counts() {
    for (n, rank, count) in [(4, 1, 58), (4, 2, 11), (3, 1, 8), (3, 0, 6)] {
        let o = qflag(&["orthocells", "--n", &n.to_string(), "--rank", &rank.to_string(), "--format", "json"]);
        assert_eq!(o.status.code(), Some(0));
        let v = json(&o);
        assert_eq!(v["count"], count, "n={n} rank={rank}");
        assert_eq!(v["cells"].as_array().unwrap().len(), count);
    }
}

#[test]
fn effective_filter_reports_normal_classes() {
    let v = json(&qflag(&["orthocells", "--n", "4", "--filter", "effective", "--i", "1", "--j", "3", "--format", "json"]));
    assert_eq!(v["normal_count"], 15);
    assert!(v["count"].as_u64().unwrap() >= 15);
}

#[test]
fn sl2_relation() {
    let o = qflag(&["relations", "--n", "2", "--i", "1", "--j", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("type I relations in degree ω_1+ω_1: 1"));
    assert!(text.contains("x⊗y - q·y⊗x"));
}

#[test]
fn dims_tables() {
    let v = json(&qflag(&["dims", "--n", "2", "--format", "json"]));
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);
    assert_eq!(v["rows"][0]["formula"], 3);

    let v = json(&qflag(&["dims", "--n", "3", "--format", "json"]));
    let rows: Vec<(u64, u64, u64, u64)> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            let f = |k: &str| r[k].as_u64().unwrap();
            (f("i"), f("j"), f("formula"), f("rank"))
        })
        .collect();
    assert_eq!(rows, vec![(1, 1, 6, 6), (1, 2, 8, 8), (2, 2, 6, 6)]);
    assert_eq!(v["status"], "pass");
}

#[test]
fn verify_braid_passes() {
    let o = qflag(&["verify", "--n", "2", "--suite", "braid"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("status: pass\n"));
}

#[test]
fn report_is_json_by_default() {
    let o = qflag(&["report", "--n", "2", "--samples", "5", "--q", "3/2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["status"], "pass");
    assert!(v["checks"].as_array().unwrap().len() > 5);
}

#[test]
fn usage_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &["dims", "--n", "1"],
        &["dims", "--n", "8"],
        &["verify", "--n", "3", "--suite", "nonsense"],
        &["verify", "--n", "3", "--suite", "spanned", "--q", "1"],
        &["verify", "--n", "3", "--suite", "spanned", "--q", "0/5"],
        &["verify", "--n", "3", "--suite", "spanned", "--q", "x/y"],
        &["relations", "--n", "3", "--i", "3", "--j", "1"],
        &["orthocells", "--n", "3", "--filter", "effective"],
        &["frobnicate"],
    ];
    for args in cases {
        assert_eq!(qflag(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn max_n_override() {
    let run = |cap: &str| {
        Command::new(env!("CARGO_BIN_EXE_qflag"))
            .args(["orthocells", "--n", "3", "--rank", "0"])
            .env("QFLAG_MAX_N", cap)
            .output()
            .unwrap()
            .status
            .code()
    };
    assert_eq!(run("2"), Some(2));
    assert_eq!(run("3"), Some(0));
    assert_eq!(run("many"), Some(2));
}
