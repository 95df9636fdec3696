use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn fqdyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fqdyn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn read_json(path: &std::path::Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn build_writes_deterministic_model() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let spec = fixture("a1_f4.json");
    for out in [&a, &b] {
        let o = fqdyn(&["build", spec.to_str().unwrap(), "-o", out.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let model = read_json(&a);
    assert_eq!(model["kind"], "model");
    assert_eq!(model["point_count"], 4);
}

#[test]
fn build_rejects_non_commuting_endomorphism() {
    let o = fqdyn(&["build", fixture("bad_commute.json").to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("ta") && err.contains("endomorphism"), "{err}");
}

#[test]
fn malformed_json_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, "{\"kind\": \"variety\",").unwrap();
    assert_eq!(code(&fqdyn(&["build", p.to_str().unwrap()])), 2);
    std::fs::write(&p, r#"{"kind":"variety","field":{"p":2,"e":1},"working_degree":1,"variables":["x"],"equations":["x**2"]}"#).unwrap();
    let o = fqdyn(&["build", p.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("position 2"));
}

#[test]
fn cap_exceeded_exits_4() {
    let o = fqdyn(&["build", fixture("a1_f4_w12.json").to_str().unwrap(), "--cap-points", "1000"]);
    assert_eq!(code(&o), 4);
}

#[test]
fn relations_on_klein_and_s3() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = fqdyn(&["relations", fixture("x16.json").to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let r = read_json(&out);
    assert_eq!(r["relations"], serde_json::json!([[1, -1, -1, -1, 2]]));

    for name in ["s3_abstract.json", "s3_table.json"] {
        let o = fqdyn(&["relations", fixture(name).to_str().unwrap(), "-o", out.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
        let r = read_json(&out);
        assert_eq!(r["relations"].as_array().unwrap().len(), 3);
        assert_eq!(r["group"]["order"], 6);
    }
}

#[test]
fn trivial_group_reports_no_relations() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("t.json");
    std::fs::write(&p, r#"{"kind":"abstract","points":3,"frobenius":[0,1,2],"endomorphism":[1,2,2]}"#).unwrap();
    let o = fqdyn(&["relations", p.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("no nontrivial relations"));
}

#[test]
fn verify_x16_passes_and_report_replays() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.json");
    let o = fqdyn(&[
        "verify",
        fixture("x16.json").to_str().unwrap(),
        "--n",
        "1,2,3,4",
        "--nmax",
        "8",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = read_json(&out);
    for key in ["version", "spec_hash", "model", "group", "subgroups", "relations", "checks", "exactness", "timings"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
    assert_eq!(code(&fqdyn(&["report", out.to_str().unwrap()])), 0);
}

#[test]
fn working_degree_one_is_refused() {
    let o = fqdyn(&["verify", fixture("a1_f4.json").to_str().unwrap(), "--checks", "A", "--n", "1"]);
    assert_eq!(code(&o), 4);
}

#[test]
fn verify_through_built_model_matches_in_memory() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("m.json");
    let direct = dir.path().join("d.json");
    let via = dir.path().join("v.json");
    let spec = fixture("x16.json");
    assert_eq!(code(&fqdyn(&["build", spec.to_str().unwrap(), "-o", model.to_str().unwrap()])), 0);
    assert_eq!(code(&fqdyn(&["verify", spec.to_str().unwrap(), "-o", direct.to_str().unwrap()])), 0);
    assert_eq!(code(&fqdyn(&["verify", model.to_str().unwrap(), "-o", via.to_str().unwrap()])), 0);
    let mut a = read_json(&direct);
    let mut b = read_json(&via);
    a.as_object_mut().unwrap().remove("timings");
    b.as_object_mut().unwrap().remove("timings");
    assert_eq!(a, b);
}

#[test]
fn non_relation_needs_force() {
    let spec = fixture("x16.json");
    let s = spec.to_str().unwrap();
    let o = fqdyn(&["verify", s, "--checks", "A", "--relation", "1,0,0,0,-1"]);
    assert_eq!(code(&o), 3);
    let o = fqdyn(&["verify", s, "--checks", "A", "--n", "2", "--relation", "1,0,0,0,-1", "--force"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn endomorphism_checks_need_an_endomorphism() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("nof.json");
    std::fs::write(&p, r#"{"kind":"abstract","points":2,"frobenius":[0,1],"generators":[[1,0]]}"#).unwrap();
    assert_eq!(code(&fqdyn(&["verify", p.to_str().unwrap(), "--checks", "B"])), 3);
    assert_eq!(code(&fqdyn(&["verify", p.to_str().unwrap()])), 0);
}

#[test]
fn s3_abstract_model_verifies() {
    let o = fqdyn(&["--threads", "1", "verify", fixture("s3_abstract.json").to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}
