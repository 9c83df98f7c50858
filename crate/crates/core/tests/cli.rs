use std::process::{Command, Output};

fn finsurg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_finsurg")).args(args).env_remove("FINSURG_JOBS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn d_lens_plain() {
    let o = finsurg(&["d-lens", "3", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "0 1/2\n1 -1/6\n2 -1/6\n");
}

#[test]
fn d_lens_json() {
    let o = finsurg(&["d-lens", "4", "3", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows: Vec<(u64, String)> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["i"].as_u64().unwrap(), r["d"].as_str().unwrap().to_string()))
        .collect();
    let expect = [(0, "0"), (1, "1/4"), (2, "0"), (3, "-3/4")];
    assert_eq!(rows, expect.map(|(i, d)| (i, d.to_string())));
}

#[test]
fn d_lens_rejects_non_coprime() {
    let o = finsurg(&["d-lens", "4", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
    assert!(!o.stderr.is_empty());
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(finsurg(&[]).status.code(), Some(1));
    assert_eq!(finsurg(&["search", "--format", "xml"]).status.code(), Some(1));
    assert_eq!(finsurg(&["tseq"]).status.code(), Some(1));
    assert_eq!(finsurg(&["tseq", "--torus", "5,2", "--cable", "1,2,3,2"]).status.code(), Some(1));
    assert_eq!(finsurg(&["tseq", "--torus", "5"]).status.code(), Some(1));
    assert_eq!(finsurg(&["verify", "--suite", "nope"]).status.code(), Some(1));
}

#[test]
fn help_exits_0() {
    assert_eq!(finsurg(&["--help"]).status.code(), Some(0));
    assert_eq!(finsurg(&["--version"]).status.code(), Some(0));
}

#[test]
fn search_p_max_1() {
    let o = finsurg(&["search", "--p-max", "1", "--format", "csv"]);
    assert!(o.status.success());
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header.join(","), "p,q,epsilon,a,b,genus,t_sequence,match_kind,match_params");
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 1);
    let f = &rows[0];
    assert_eq!((&f[0], &f[1], &f[5], &f[6], &f[7], &f[8]), ("1", "1", "1", "1 0", "torus", "T(3,2)"));
}

#[test]
fn search_json_is_parseable() {
    let o = finsurg(&["search", "--p-max", "30", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v.as_array().unwrap();
    assert!(rows.iter().any(|r| r["p"] == 19 && r["q"] == 4 && r["match_params"] == "[9,2;3,2]"));
    assert!(rows.iter().all(|r| r["match_kind"] != "unexpected"));
}

#[test]
fn search_modes_and_jobs_agree() {
    let base = finsurg(&["search", "--p-max", "120", "--format", "csv", "--jobs", "1"]);
    assert!(base.status.success());
    for args in [
        &["search", "--p-max", "120", "--format", "csv", "--jobs", "3"][..],
        &["search", "--p-max", "120", "--format", "csv", "--mode", "full"],
        &["search", "--p-max", "120", "--format", "csv", "--prune-threshold", "0"],
    ] {
        let o = finsurg(args);
        assert!(o.status.success());
        assert_eq!(o.stdout, base.stdout, "{args:?}");
    }
    let env = Command::new(env!("CARGO_BIN_EXE_finsurg"))
        .args(["search", "--p-max", "120", "--format", "csv"])
        .env("FINSURG_JOBS", "2")
        .output()
        .unwrap();
    assert_eq!(env.stdout, base.stdout);
}

#[test]
fn tseq_examples() {
    let o = finsurg(&["tseq", "--torus", "5,2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "t: 1,1,0; g=2; admissible\n");

    let o = finsurg(&["tseq", "--alexander", "-1,1"]);
    assert!(stdout(&o).starts_with("t: 1,0;"));

    let o = finsurg(&["tseq", "--cable", "9,2,3,2"]);
    assert_eq!(stdout(&o), "t: 2,2,1,1,1,1,0; g=6; admissible\n");

    let o = finsurg(&["tseq", "--alexander", "1,1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Δ(1)"));

    // figure eight knot: normalized but not an L-space knot
    let o = finsurg(&["tseq", "--alexander", "3,-1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("not admissible"));
}

#[test]
fn verify_suites() {
    let o = finsurg(&["verify", "--suite", "lemma42", "--suite", "reconcile"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    let suites: Vec<&str> = out.lines().filter(|l| l.starts_with("suite ")).collect();
    assert_eq!(suites.len(), 2);
    assert!(suites[0].starts_with("suite lemma42:") && suites[0].contains(" 0 failures"));
    assert!(suites[1].starts_with("suite reconcile:") && suites[1].contains(" 0 failures"));

    let o = finsurg(&["verify", "--suite", "progression", "--seed", "7", "--samples", "12"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn verify_failure_exits_2() {
    // drop the T(5,2) row at p = 7 so one candidate class is left without a row
    let full = include_str!("../data/catalog.txt");
    let damaged: String = full.lines().filter(|l| *l != "7\ttorus\t5\t2\ttable3").map(|l| format!("{l}\n")).collect();
    assert_eq!(damaged.lines().count() + 1, full.lines().count());
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("catalog-missing-row.txt");
    std::fs::write(&path, damaged).unwrap();
    let path = path.to_str().unwrap();

    let o = finsurg(&["verify", "--suite", "reconcile", "--catalog", path]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
    assert!(stdout(&o).contains("suite reconcile"));

    let o = finsurg(&["verify", "--suite", "reconcile", "--catalog", "/nonexistent/catalog.txt"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn search_with_custom_catalog() {
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("catalog-empty.txt");
    std::fs::write(&path, "# nothing\n").unwrap();
    let o = finsurg(&["search", "--p-max", "3", "--format", "csv", "--catalog", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).matches("unexpected").count(), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}
