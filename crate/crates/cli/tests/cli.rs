use std::process::{Command, Output};

fn spectraff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spectraff"))
        .args(args)
        .env_remove("SPECTRAFF_MAX_VERTICES")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn schema() -> serde_json::Value {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../schema/columns.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn schema_columns(section: &str) -> Vec<String> {
    schema()[section]["columns"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap().to_string())
        .collect()
}

#[test]
fn certify_norm_example() {
    let out = spectraff(&["certify", "--family", "norm", "--q", "3", "--n", "2", "--lambda", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["family"], "norm");
    assert_eq!(v["q"], 3);
    assert_eq!(v["n"], 2);
    assert_eq!(v["lambda_value"], 1);
    assert_eq!(v["d_claim"], 4);
    assert_eq!(v["lambda_claim"], 3.0);
    assert!((v["lambda_measured"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    assert_eq!(v["satisfied"], true);
}

#[test]
fn construct_euclidean_example() {
    let out = spectraff(&["construct", "--family", "euclidean", "--q", "3", "--d", "2", "--lambda", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# euclidean q=3;d=2"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 18);
    assert!(rows.iter().all(|r| {
        let (u, v) = r.split_once(',').unwrap();
        u.parse::<usize>().unwrap() < v.parse::<usize>().unwrap()
    }));
}

#[test]
fn colored_construct_has_color_column() {
    let out = spectraff(&["construct", "--family", "euclidean", "--q", "3", "--d", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    // both nonzero radii give 4-regular classes on 9 vertices
    assert_eq!(rows.len(), 36);
    assert!(rows.iter().all(|r| r.split(',').count() == 3));
}

#[test]
fn certify_all_colors_csv_matches_schema() {
    let out = spectraff(&["certify", "--family", "euclidean", "--q", "5", "--d", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), schema_columns("cert").join(","));
    assert_eq!(lines.count(), 4);
}

#[test]
fn halved_claim_fails() {
    let out = spectraff(&["certify", "--family", "norm", "--q", "3", "--n", "2", "--lambda", "1", "--halve-claim"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["satisfied"], false);
    assert_eq!(v["lambda_claim"], 1.5);

    let out = spectraff(&["mix", "--family", "norm", "--q", "3", "--n", "2", "--halve-claim", "--pairs", "5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_flags_exit_2() {
    assert_eq!(spectraff(&["certify", "--bogus"]).status.code(), Some(2));
    assert_eq!(spectraff(&["certify", "--family", "nope", "--q", "3", "--n", "2"]).status.code(), Some(2));
    assert_eq!(spectraff(&["certify", "--family", "norm", "--q", "3"]).status.code(), Some(2));
    assert_eq!(spectraff(&["certify", "--family", "norm", "--q", "3", "--d", "2"]).status.code(), Some(2));
    assert_eq!(spectraff(&["certify", "--family", "norm", "--q", "6", "--n", "2"]).status.code(), Some(2));
    assert_eq!(spectraff(&["construct", "--family", "euclidean", "--q", "3", "--d", "2", "--lambda", "x"]).status.code(), Some(2));
    assert_eq!(spectraff(&[]).status.code(), Some(2));
}

#[test]
fn cap_violations_exit_3() {
    let out = spectraff(&["certify", "--family", "euclidean", "--q", "5", "--d", "2", "--lambda", "1", "--max-vertices", "10"]);
    assert_eq!(out.status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_spectraff"))
        .args(["construct", "--family", "euclidean", "--q", "5", "--d", "2", "--lambda", "1"])
        .env("SPECTRAFF_MAX_VERTICES", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = spectraff(&["count", "--family", "euclidean", "--q", "5", "--d", "2", "--sizes", "25", "--trials", "1", "--tuple-budget", "10"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn caps_only_shrink() {
    // a larger value than the default leaves the default in force
    let out = spectraff(&["construct", "--family", "euclidean", "--q", "3", "--d", "2", "--lambda", "1", "--max-vertices", "100000"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn report_header_matches_schema() {
    let out = spectraff(&["coverage", "--family", "euclidean", "--q", "3", "--d", "2", "--sizes", "4", "--trials", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().next().unwrap(), schema_columns("report").join(","));
}

#[test]
fn json_mirrors_csv() {
    let args = ["pinned", "--family", "euclidean", "--q", "3", "--d", "2", "--sizes", "5", "--trials", "1"];
    let csv_out = stdout(&spectraff(&args));
    let mut json_args = args.to_vec();
    json_args.extend(["--format", "json"]);
    let rows: Vec<serde_json::Map<String, serde_json::Value>> = serde_json::from_str(&stdout(&spectraff(&json_args))).unwrap();
    let columns = schema_columns("report");
    assert_eq!(csv_out.lines().count(), rows.len() + 1);
    for row in &rows {
        let keys: Vec<&String> = row.keys().collect();
        assert_eq!(keys.len(), columns.len());
        assert!(columns.iter().all(|c| row.contains_key(c)));
    }
}

#[test]
fn identical_config_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, threads) in [(&a, "1"), (&b, "3")] {
        let out = spectraff(&[
            "mix", "--family", "euclidean", "--q", "5", "--d", "2", "--pairs", "20", "--kst-pairs", "3",
            "--seed", "7", "--threads", threads, "--output", path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let mut summary = a.as_os_str().to_owned();
    summary.push(".summary.json");
    let s: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(summary).unwrap()).unwrap();
    assert_eq!(s["hard_failures"], 0);
    assert!(s["rows"].as_u64().unwrap() > 0);
}

#[test]
fn seed_changes_samples() {
    let run = |seed: &str| stdout(&spectraff(&["count", "--family", "norm", "--q", "5", "--n", "2", "--sizes", "8", "--trials", "2", "--seed", seed]));
    assert_eq!(run("1"), run("1"));
    assert_ne!(run("1"), run("2"));
}

#[test]
fn spec_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.json");
    std::fs::write(
        &path,
        r#"[{"family":"norm","p":3,"n":2,"lambda":1},{"family":"product","p":3,"d":2,"lambda":2,"form":"coupled"}]"#,
    )
    .unwrap();
    let out = spectraff(&["mix", "--spec", path.to_str().unwrap(), "--pairs", "5", "--kst-pairs", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("norm,q=3;n=2;lambda=1,certify"));
    assert!(text.contains("product,q=3;d=2;form=coupled;lambda=2,certify"));
    // a grid needs `mix`; single-construction commands refuse it
    assert_eq!(spectraff(&["certify", "--spec", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn system_counts() {
    let out = spectraff(&["count", "--family", "euclidean", "--q", "3", "--d", "2", "--t", "3", "--values", "1", "--sizes", "9", "--trials", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let row = text.lines().nth(1).unwrap();
    assert!(row.contains(",system,"));
    // wrong number of pair values
    let out = spectraff(&["count", "--family", "euclidean", "--q", "3", "--d", "2", "--t", "3", "--values", "1,2", "--sizes", "9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sumprod_runs() {
    let out = spectraff(&["sumprod", "--q", "11", "--d", "2", "--sets", "10"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().filter(|l| l.contains(",spe-inequality,")).count(), 10);
}

#[test]
fn acceptance_subset() {
    let out = spectraff(&["acceptance", "--criteria", "1,2,13"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("criterion")).count(), 3);
    assert!(text.lines().filter(|l| l.starts_with("criterion")).all(|l| l.contains("[PASS]")));
    assert_eq!(spectraff(&["acceptance", "--criteria", "99"]).status.code(), Some(2));
}
