use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_locality-forge"))
        .args(args)
        .env_remove("LOCALITY_FORGE_CAPS")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn classify_sym4() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(&["classify", "--group", data("sym4.json").to_str().unwrap(), "--prime", "2", "--out", out]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let c = json(&dir.path().join("classification.json"));
    assert_eq!(c["format"], "classification.v1");
    assert_eq!(c["tool_version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(c["config_hash"].as_str().unwrap().len(), 64);
    assert_eq!(c["seed"], 1);
    // F^cr is the normal four-group and S
    let cr: Vec<u64> = c["sets"]["centric_radical"]
        .as_array()
        .unwrap()
        .iter()
        .map(|i| c["classes"][i.as_u64().unwrap() as usize]["representative"]["order"].as_u64().unwrap())
        .collect();
    assert_eq!(cr, vec![4, 8]);
    assert_eq!(c["sets"]["centric"].as_array().unwrap().len(), 4);
    let l = json(&dir.path().join("locality.json"));
    assert_eq!(l["format"], "locality.v1");
    assert_eq!(l["Delta"].as_array().unwrap().len(), 2);
}

#[test]
fn reports_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = run(&[
            "expand",
            "--group",
            data("alt6.json").to_str().unwrap(),
            "--prime",
            "2",
            "--seed",
            "9",
            "--out",
            d.path().to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    }
    for f in ["trace.json", "locality.json"] {
        let x = std::fs::read(a.path().join(f)).unwrap();
        let y = std::fs::read(b.path().join(f)).unwrap();
        assert_eq!(x, y, "{f} differs between runs");
    }
    let t = json(&a.path().join("trace.json"));
    assert_eq!(t["seed"], 9);
    assert_eq!(t["final_size"], 104);
    let kinds: Vec<&str> = t["steps"].as_array().unwrap().iter().map(|s| s["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds, vec!["relabel", "elementary"]);
}

#[test]
fn trivial_group_is_degenerate() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "classify",
        "--group",
        data("trivial.json").to_str().unwrap(),
        "--prime",
        "2",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let c = json(&dir.path().join("classification.json"));
    assert_eq!(c["degenerate"], true);
    assert_eq!(c["classes"].as_array().unwrap().len(), 1);
}

#[test]
fn malformed_group_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"format":"perm-group.v1","points":3,"generators":[[1,2]]}"#).unwrap();
    let o = run(&["classify", "--group", bad.to_str().unwrap(), "--prime", "2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("\"error\":\"parse\""), "{}", stderr(&o));
    let o = run(&["classify", "--bogus"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn non_closed_delta_exits_3_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "expand",
        "--group",
        data("sym4.json").to_str().unwrap(),
        "--prime",
        "2",
        "--delta",
        "[[[2,1,4,3]]]",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 3);
    let e: serde_json::Value = serde_json::from_str(stderr(&o).trim()).unwrap();
    assert_eq!(e["error"], "domain");
    assert!(e["witness"].as_str().unwrap().contains("order"), "{e}");
}

#[test]
fn expand_to_current_delta_is_zero_steps() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "expand",
        "--group",
        data("sym4.json").to_str().unwrap(),
        "--prime",
        "2",
        "--delta",
        "cr-closure",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let t = json(&dir.path().join("trace.json"));
    assert!(t["steps"].as_array().unwrap().is_empty());
    assert_eq!(t["base_size"], t["final_size"]);
}

#[test]
fn expand_applies_theta_unless_disabled() {
    let dir = tempfile::tempdir().unwrap();
    let g = data("gl23.json");
    let out = dir.path().to_str().unwrap();
    let o = run(&["expand", "--group", g.to_str().unwrap(), "--prime", "3", "--out", out]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let t = json(&dir.path().join("trace.json"));
    assert_eq!(t["theta"]["theta_order"], 2);
    assert_eq!(t["theta"]["quotient_order"], 6);
    assert_eq!(t["final_size"], 6);
    let o = run(&["expand", "--group", g.to_str().unwrap(), "--prime", "3", "--out", out, "--no-theta"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn verify_full_suite_sym4() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify", "--group", data("sym4.json").to_str().unwrap(), "--prime", "2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&dir.path().join("verify.json"));
    assert_eq!(v["ok"], true);
    assert_eq!(v["suites"].as_array().unwrap().len(), 8);
}

#[test]
fn verify_fault_injected_locality_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(&["classify", "--group", data("sym4.json").to_str().unwrap(), "--prime", "2", "--out", out]);
    assert_eq!(code(&o), 0);
    let path = dir.path().join("locality.json");
    let o = run(&["verify", "--locality", path.to_str().unwrap(), "--out", out]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let mut l = json(&path);
    let n = l["inverse"].as_array().unwrap().len() as u64;
    let old = l["product"][5][7].as_u64().unwrap();
    l["product"][5][7] = serde_json::json!((old + 1) % n);
    let bad = dir.path().join("fault.json");
    std::fs::write(&bad, l.to_string()).unwrap();
    let o = run(&["verify", "--locality", bad.to_str().unwrap(), "--out", out]);
    assert_eq!(code(&o), 1);
    let v = json(&dir.path().join("verify.json"));
    let axioms = &v["suites"][0];
    assert_eq!(axioms["name"], "axioms");
    assert_eq!(axioms["ok"], false);
    assert!(!axioms["violations"].as_array().unwrap().is_empty());
}

#[test]
fn verify_empty_suite_list_is_a_no_op() {
    let o = run(&["verify", "--suites", ""]);
    assert_eq!(code(&o), 0);
}

#[test]
fn normals_and_quotient() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let g = data("sym4.json");
    let o = run(&["normals", "--group", g.to_str().unwrap(), "--prime", "2", "--out", out]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let n = json(&dir.path().join("normal-lattice.json"));
    assert_eq!(n["format"], "normal-lattice.v1");
    let sizes: Vec<u64> = n["members"].as_array().unwrap().iter().map(|m| m["size"].as_u64().unwrap()).collect();
    assert_eq!(sizes, vec![1, 4, 12, 24]);
    assert_eq!(n["members"][1]["S_cap_N"].as_array().unwrap().len(), 4);
    assert_eq!(n["members"][0]["hasse_edges"], serde_json::json!([1]));
    let o = run(&["quotient", "--group", g.to_str().unwrap(), "--prime", "2", "--normal", "1", "--out", out]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let q = json(&dir.path().join("quotient.json"));
    assert_eq!(q["quotient_size"], 6);
    let o = run(&["quotient", "--group", g.to_str().unwrap(), "--prime", "2", "--normal", "9", "--out", out]);
    assert_eq!(code(&o), 3);
}

#[test]
fn caps_env_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_locality-forge"))
        .args(["classify", "--group", data("alt6.json").to_str().unwrap(), "--prime", "2", "--out"])
        .arg(dir.path())
        .env("LOCALITY_FORGE_CAPS", "order=100")
        .output()
        .unwrap();
    assert_eq!(code(&o), 4);
    assert!(stderr(&o).contains("resource"));
}
