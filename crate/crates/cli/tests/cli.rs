use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_mackey-sk"));
    c.env_remove("MACKEY_SK_GROUP_CAP")
        .env_remove("MACKEY_SK_HOM_CAP")
        .env_remove("MACKEY_SK_OBJECT_CAP");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_of(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&o.stdout))
    })
}

fn path(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

#[test]
fn marks_of_c2() {
    let o = run(&["marks", "-i", &path("c2.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_of(&o);
    assert_eq!(v["schema"], "mackey-sk/1");
    assert_eq!(v["marks"], json!([[2, 1], [0, 1]]));
}

#[test]
fn marks_table_is_ascii_and_aligned() {
    let o = run(&["marks", "-g", "S3", "--format", "table"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.is_ascii());
    let rows: Vec<&str> = text.lines().filter(|l| l.starts_with("  ")).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.len() == rows[0].len()));
}

#[test]
fn k0_of_the_point_category_is_zero() {
    let o = run(&["squares", "k0", "-i", &path("empty-cat.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_of(&o);
    assert_eq!(v["free_rank"], 0);
    assert_eq!(v["torsion"], json!([]));
}

#[test]
fn s3_k0_mackey_is_isomorphic_to_burnside() {
    let o = run(&["sk0", "mackey", "-g", &path("s3.json"), "--trunc", "18"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let v = json_of(&o);
    assert_eq!(v["isomorphism"], true);
    let ranks: Vec<u64> = v["levels"].as_array().unwrap().iter().map(|l| l["free_rank"].as_u64().unwrap()).collect();
    assert_eq!(ranks, vec![1, 2, 2, 4]);
}

#[test]
fn corrupted_mackey_fails_only_the_double_coset_axiom() {
    let o = run(&["mackey", "validate", "-i", &path("c2-corrupted-mackey.json")]);
    assert_eq!(o.status.code(), Some(1));
    let v = json_of(&o);
    assert_eq!(v["status"], "fail");
    let failed: Vec<&str> = v["report"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .map(|c| c["axiom"].as_str().unwrap())
        .collect();
    assert_eq!(failed, vec!["double_coset"]);

    let ok = run(&["mackey", "validate", "-i", &path("c2-burnside-mackey.json")]);
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn stored_burnside_mackey_matches_the_computed_one() {
    let o = run(&["mackey", "burnside", "-g", "C2"]);
    let stored: Value = serde_json::from_str(&std::fs::read_to_string(data("c2-burnside-mackey.json")).unwrap()).unwrap();
    assert_eq!(json_of(&o)["mackey"], stored);
}

#[test]
fn euler_fixed_points_of_spheres() {
    for (file, want) in [
        ("c2-rotation-sphere.json", json!([2, 2])),
        ("c2-reflection-sphere.json", json!([2, 0])),
        ("c3-rotation-sphere.json", json!([2, 2])),
    ] {
        let o = run(&["euler", "fixed", "-i", &path(file)]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(json_of(&o)["fixed_euler"], want, "{file}");
    }
    let o = run(&["euler", "chi", "-i", &path("c2-rotation-sphere.json")]);
    assert_eq!(json_of(&o)["chi"], json!([0, 2]));
}

#[test]
fn restricting_the_rotation_sphere_to_the_trivial_group() {
    let o = run(&["euler", "restrict", "-i", &path("c2-rotation-sphere.json"), "--class", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_of(&o)["chi"], json!([2]));
}

#[test]
fn left_unit_composite_is_not_strictly_equal() {
    let o = run(&["span", "compose", "-i", &path("c2-unit-spans.json")]);
    assert_eq!(o.status.code(), Some(0));
    let input: Value = serde_json::from_str(&std::fs::read_to_string(data("c2-unit-spans.json")).unwrap()).unwrap();
    let v = json_of(&o);
    assert_eq!(v["apex_size"], 2);
    assert_ne!(v["composite"]["left"]["values"], input["second"]["left"]["values"]);
}

#[test]
fn assoc_test_is_deterministic() {
    let a = run(&["span", "assoc-test", "--seed", "5", "--count", "50"]);
    let b = run(&["span", "assoc-test", "--seed", "5", "--count", "50"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json_of(&a)["report"]["checks"][0]["checked"], 50);
}

#[test]
fn out_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("info.json");
    let o = run(&["group", "info", "-g", "D4", "--out", target.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(v["subgroups"], 10);
    assert_eq!(v["subgroup_classes"], 8);
}

#[test]
fn malformed_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"order\": 2, \"table\": [[0, 1], [0, 1]]}").unwrap();
    let o = run(&["marks", "-i", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("invalid group"));

    std::fs::write(&bad, "not json").unwrap();
    assert_eq!(run(&["squares", "check", "-i", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["marks", "-g", "Z7"]).status.code(), Some(2));
}

#[test]
fn caps_come_from_the_environment() {
    let o = bin()
        .args(["sk0", "build", "-g", "S3"])
        .env("MACKEY_SK_OBJECT_CAP", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let v = json_of(&o);
    assert_eq!(v["status"], "error");
    assert!(v["error"].as_str().unwrap().contains("cap"));

    let o = bin().args(["marks", "-g", "C2"]).env("MACKEY_SK_HOM_CAP", "lots").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn waldhausen_input_agrees_with_the_library() {
    let w = mackey_sk::squares::fixtures::pointed_sets(3);
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("pointed.json");
    std::fs::write(&file, serde_json::to_string(&w).unwrap()).unwrap();
    let o = run(&["squares", "k0", "--waldhausen", "-i", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let p = mackey_sk::squares::from_waldhausen(&w).unwrap();
    let k = mackey_sk::squares::k0(&p, false).unwrap();
    let v = json_of(&o);
    assert_eq!(v["free_rank"], k.group.free_rank);
    assert_eq!(v["classes"], serde_json::to_value(k.classes(&p)).unwrap());
}

#[test]
fn beck_chevalley_and_phi_psi_pass_on_c2() {
    let o = run(&["sk0", "beck", "-g", "C2"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["sk0", "phi-psi", "-g", "C2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_of(&o)["reports"].as_array().unwrap().len(), 2);
}
