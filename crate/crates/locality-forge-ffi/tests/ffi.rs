use std::ffi::{CStr, CString};
use std::ptr;

use locality_forge_ffi::*;

const SYM4: &str = r#"{"format":"perm-group.v1","points":4,"generators":[[2,3,4,1],[2,1,3,4]]}"#;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(lf_last_error()) }.to_str().unwrap().to_string()
}

fn sym4() -> *mut LfGroup {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { lf_group_from_json(c(SYM4).as_ptr(), &mut g) }, LfStatus::Ok);
    g
}

#[test]
fn group_and_transporter() {
    let g = sym4();
    let mut n = 0usize;
    unsafe {
        assert_eq!(lf_group_order(g, &mut n), LfStatus::Ok);
        assert_eq!(n, 24);
        let mut l = ptr::null_mut();
        assert_eq!(lf_transporter(g, 2, c("cr-closure").as_ptr(), &mut l), LfStatus::Ok);
        assert_eq!(lf_locality_size(l, &mut n), LfStatus::Ok);
        assert_eq!(n, 24);
        let mut ok = -1;
        assert_eq!(lf_locality_verify(l, 7, &mut ok), LfStatus::Ok);
        assert_eq!(ok, 1);
        let mut prod = 0u32;
        assert_eq!(lf_locality_product(l, 0, 5, &mut prod), LfStatus::Ok);
        assert_eq!(prod, 5);
        assert_eq!(lf_locality_product(l, 0, 99, &mut prod), LfStatus::Domain);
        lf_locality_free(l);
        lf_group_free(g);
    }
}

#[test]
fn json_round_trip_through_handles() {
    let g = sym4();
    unsafe {
        let mut l = ptr::null_mut();
        assert_eq!(lf_subcentric_closure(g, 2, &mut l), LfStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(lf_locality_to_json(l, &mut s), LfStatus::Ok);
        let text = CStr::from_ptr(s).to_owned();
        let mut l2 = ptr::null_mut();
        assert_eq!(lf_locality_from_json(text.as_ptr(), &mut l2), LfStatus::Ok);
        let mut s2 = ptr::null_mut();
        assert_eq!(lf_locality_to_json(l2, &mut s2), LfStatus::Ok);
        assert_eq!(CStr::from_ptr(s2), text.as_c_str());
        lf_string_free(s);
        lf_string_free(s2);
        lf_locality_free(l);
        lf_locality_free(l2);
        lf_group_free(g);
    }
}

#[test]
fn classification_report() {
    let g = sym4();
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(lf_classify_json(g, 2, 1, &mut s), LfStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(CStr::from_ptr(s).to_str().unwrap()).unwrap();
        assert_eq!(v["format"], "classification.v1");
        assert_eq!(v["classes"].as_array().unwrap().len(), 7);
        lf_string_free(s);
        lf_group_free(g);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(lf_group_from_json(ptr::null(), &mut g), LfStatus::Null);
        assert_eq!(lf_group_from_json(c("{").as_ptr(), &mut g), LfStatus::Parse);
        assert!(last_error().contains("parse"));
        let g = sym4();
        let mut l = ptr::null_mut();
        assert_eq!(lf_transporter(g, 4, c("all").as_ptr(), &mut l), LfStatus::Domain);
        assert_eq!(lf_transporter(g, 2, c("[[[2,1,4,3]]]").as_ptr(), &mut l), LfStatus::Domain);
        assert!(last_error().contains("F-closed"), "{}", last_error());
        assert_eq!(lf_transporter(g, 2, c("nonsense").as_ptr(), &mut l), LfStatus::Parse);
        assert!(l.is_null());
        lf_group_free(g);
        lf_group_free(ptr::null_mut());
        lf_locality_free(ptr::null_mut());
        lf_string_free(ptr::null_mut());
    }
}

#[test]
fn fault_is_reported_through_verify() {
    let g = sym4();
    unsafe {
        let mut l = ptr::null_mut();
        assert_eq!(lf_transporter(g, 2, c("all").as_ptr(), &mut l), LfStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(lf_locality_to_json(l, &mut s), LfStatus::Ok);
        let mut v: serde_json::Value = serde_json::from_str(CStr::from_ptr(s).to_str().unwrap()).unwrap();
        v["product"][3][4] = serde_json::json!(9);
        let broken = c(&v.to_string());
        let mut l2 = ptr::null_mut();
        assert_eq!(lf_locality_from_json(broken.as_ptr(), &mut l2), LfStatus::Ok);
        let mut ok = -1;
        assert_eq!(lf_locality_verify(l2, 1, &mut ok), LfStatus::Ok);
        assert_eq!(ok, 0);
        assert!(!last_error().is_empty());
        lf_string_free(s);
        lf_locality_free(l);
        lf_locality_free(l2);
        lf_group_free(g);
    }
}

#[test]
fn header_is_current() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/locality_forge.h")).unwrap();
    for name in ["lf_group_from_json", "lf_transporter", "lf_locality_verify", "LF_STATUS_PANIC", "typedef struct LfLocality LfLocality"] {
        assert!(h.contains(name), "{name} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = which_cc() else { return };
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"locality_forge.h\"\nint main(void) { LfGroup *g = 0; size_t n; return lf_group_order(g, &n) == LF_STATUS_NULL ? 0 : 1; }\n",
    )
    .unwrap();
    let status = std::process::Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&src)
        .status()
        .unwrap();
    assert!(status.success());
}

fn which_cc() -> Result<&'static str, ()> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| std::process::Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
        .ok_or(())
}
