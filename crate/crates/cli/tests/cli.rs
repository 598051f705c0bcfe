use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/golden")
}

fn ccalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ccalg")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn algebra_info_reports_basis_and_indecomposables() {
    let alg = fixture("tail_with_loop.json");
    let v = json(&ccalg(&["algebra", "info", "--algebra", path(&alg)]));
    assert_eq!(v["dimension"], 9);
    assert_eq!(v["basis"], serde_json::json!(["e1", "e2", "e3", "a", "b", "c", "ba", "cb", "cba"]));
    assert_eq!(v["projectives"][0], serde_json::json!([1, 1, 2]));
    assert_eq!(v["injectives"][2], serde_json::json!([2, 2, 2]));
}

#[test]
fn negative_simple_compute() {
    let alg = fixture("tail_with_loop.json");
    let rep = fixture("negative_simple_1.json");
    let v = json(&ccalg(&["rep", "compute", "--algebra", path(&alg), "--rep", path(&rep), "--what", "g,cc"]));
    assert_eq!(v["g"], serde_json::json!([1, 0, 0]));
    assert_eq!(v["cc"], "x1");
}

#[test]
fn module_with_jordan_block() {
    let alg = fixture("tail_with_loop.json");
    let rep = fixture("module_3_3.json");
    let v = json(&ccalg(&["rep", "compute", "--algebra", path(&alg), "--rep", path(&rep)]));
    assert_eq!(v["cc"], "(x2^2+x2+1)*x3^-1");
    assert_eq!(v["g"], serde_json::json!([0, 2, -1]));
    assert_eq!(v["hom"], 2);
    assert_eq!(v["E"], 0);
    let cc = ccalg(&["cc", "--algebra", path(&alg), "--rep", path(&fixture("string_3_3.json")), "--method", "coordinate"]);
    assert_eq!(stdout(&cc), "(x2^2+x2+1)*x3^-1\n");
}

#[test]
fn chi_single_and_table() {
    let alg = fixture("tail_with_loop.json");
    let rep = fixture("string_3_3.json");
    let v = json(&ccalg(&["chi", "--algebra", path(&alg), "--rep", path(&rep), "--e", "0,0,1"]));
    assert_eq!(v["chi"], "1");
    let t = json(&ccalg(&["chi", "--algebra", path(&alg), "--rep", path(&rep), "--method", "pointcount"]));
    assert_eq!(t.as_array().unwrap().len(), 3);
}

#[test]
fn finite_truncation_of_a_loop() {
    let out = ccalg(&["cc", "--algebra", path(&fixture("jordan.json")), "--rep", path(&fixture("jordan_3.json"))]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "4*x1^-1\n");
}

#[test]
fn graph_matches_golden_dot() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("g.dot");
    let report = dir.path().join("clusters.json");
    let out = ccalg(&[
        "graph",
        "--algebra",
        path(&fixture("looped_source.json")),
        "--reps",
        path(&fixture("looped_source_reps.json")),
        "--out",
        path(&dot),
        "--report",
        path(&report),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let golden = std::fs::read_to_string(golden_dir().join("looped_source.dot")).unwrap();
    assert_eq!(std::fs::read_to_string(&dot).unwrap(), golden);
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["clusters"].as_array().unwrap().len(), 3);
    assert_eq!(r["edges"].as_array().unwrap().len(), 3);
}

#[test]
fn tail_graph_clusters_have_three_members() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let out = ccalg(&[
        "graph",
        "--algebra",
        path(&fixture("tail_with_loop.json")),
        "--reps",
        path(&fixture("tail_rigid_reps.json")),
        "--out",
        path(&dir.path().join("g.dot")),
        "--report",
        path(&report),
    ]);
    assert!(out.status.success());
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let clusters = r["clusters"].as_array().unwrap();
    assert!(clusters.iter().all(|c| c["members"].as_array().unwrap().len() == 3 && c["sign_coherent"] == true));
    assert_eq!(r["two_completion"]["holds"], true);
}

#[test]
fn output_is_deterministic() {
    let (alg, reps) = (fixture("a3_zero_relation.json"), fixture("a3_reps.json"));
    let args = ["graph", "--algebra", path(&alg), "--reps", path(&reps)];
    let first = ccalg(&args);
    let second = ccalg(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn canon_and_hereditary_graph() {
    let q = fixture("kronecker2.json");
    let v = json(&ccalg(&["canon", "--quiver", path(&q), "--dim", "2,2"]));
    assert_eq!(v["decomposition"], serde_json::json!([[1, 1], [1, 1]]));
    let v = json(&ccalg(&["canon", "--quiver", path(&q), "--dim", "0,0"]));
    assert_eq!(v["decomposition"], serde_json::json!([]));
    let out = ccalg(&["hereditary-graph", "--quiver", path(&q), "--bound", "9"]);
    assert!(out.status.success());
    let dot = stdout(&out);
    assert_eq!(dot.lines().filter(|l| l.contains("[label=")).count(), 13);
}

#[test]
fn bq_reports() {
    let v = json(&ccalg(&["bq", "--quiver", path(&fixture("kronecker2.json"))]));
    for k in ["a", "b", "c", "d"] {
        assert_eq!(v[k], true, "condition {k}");
    }
    let v = json(&ccalg(&["bq", "--algebra", path(&fixture("tail_with_loop.json"))]));
    assert_eq!(v["d_witness"], serde_json::json!([1, 0, 1]));
    let v = json(&ccalg(&["bq", "--quiver", path(&fixture("two_arrows_from_3.json"))]));
    assert_eq!((v["a"].as_bool(), v["d"].as_bool(), v["rank"].as_u64()), (Some(false), Some(true), Some(2)));
}

#[test]
fn input_errors_exit_with_two() {
    let alg = fixture("tail_with_loop.json");
    let bad = ccalg(&["cc", "--algebra", path(&alg), "--rep", path(&fixture("bad_shape.json"))]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("shape"));
    let missing = ccalg(&["cc", "--algebra", "/nonexistent/alg.json", "--rep", path(&alg)]);
    assert_eq!(missing.status.code(), Some(2));
    let wrong_len = ccalg(&["canon", "--quiver", path(&fixture("kronecker2.json")), "--dim", "1"]);
    assert_eq!(wrong_len.status.code(), Some(2));
    let cyclic = ccalg(&["canon", "--quiver", path(&fixture("jordan.json")), "--dim", "1"]);
    assert_eq!(cyclic.status.code(), Some(2));
    let usage = ccalg(&["cc"]);
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn computation_errors_exit_with_three() {
    let alg = fixture("tail_with_loop.json");
    let rep = fixture("module_3_3.json");
    let out = ccalg(&["cc", "--algebra", path(&alg), "--rep", path(&rep), "--method", "coordinate"]);
    assert_eq!(out.status.code(), Some(3));
    let out = ccalg(&["cc", "--algebra", path(&alg), "--rep", path(&rep), "--method", "pointcount", "--budget", "1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_selected_criteria_pass() {
    let out = ccalg(&["verify", "--suite", "paper", "--criteria", "1,2,14"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("3 of 3 criteria passed"));
}

#[test]
fn verify_reports_a_single_perturbed_case() {
    let dir = tempfile::tempdir().unwrap();
    for entry in std::fs::read_dir(golden_dir()).unwrap() {
        let p = entry.unwrap().path();
        std::fs::copy(&p, dir.path().join(p.file_name().unwrap())).unwrap();
    }
    let cc = dir.path().join("cc_tail_with_loop.json");
    let text = std::fs::read_to_string(&cc).unwrap();
    let perturbed = text.replacen("\"(x2+1)*x1^-1\"", "\"(x2+2)*x1^-1\"", 1);
    assert_ne!(text, perturbed);
    std::fs::write(&cc, perturbed).unwrap();
    let out = ccalg(&["verify", "--golden-dir", path(dir.path()), "--criteria", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let s = stdout(&out);
    let cases: Vec<&str> = s.lines().filter(|l| l.trim_start().starts_with("case ")).collect();
    assert_eq!(cases.len(), 1, "{s}");
    assert!(cases[0].contains("case 1: expected (x2+2)*x1^-1"), "{s}");
}

#[test]
fn verify_without_golden_file_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = ccalg(&["verify", "--golden-dir", path(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("golden"));
}
