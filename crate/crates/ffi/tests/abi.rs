use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use approxsys_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    apx_string_free(s);
    out
}

unsafe fn last_error() -> String {
    let p = apx_last_error_message();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_string_lossy().into_owned()
}

unsafe fn builtin(name: &str) -> *mut ApxSystem {
    let mut sys = ptr::null_mut();
    assert_eq!(apx_system_builtin(cstr(name).as_ptr(), &mut sys), ApxStatus::Ok);
    sys
}

#[test]
fn eval_and_enumerate_division() {
    unsafe {
        let sys = builtin("division");
        assert_eq!(apx_system_dim(sys), 2);
        let mut out = ptr::null_mut();
        assert_eq!(apx_eval(sys, cstr("1,3").as_ptr(), 999, 0, &mut out), ApxStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["precision_index"], 999);
        let value: approxsys::Rat = v["value"].as_str().unwrap().parse().unwrap();
        let third: approxsys::Rat = "1/3".parse().unwrap();
        assert!((value - third).abs() < approxsys::Rat::reciprocal_succ(999));

        assert_eq!(apx_enumerate(sys, 0, &mut out), ApxStatus::NotFound);
        let k = (0..1000).find(|&k| apx_enumerate(sys, k, &mut out) == ApxStatus::Ok).unwrap();
        assert!(k > 0);
        let quad = take(out);
        assert_eq!(quad, r#"{"a":["0","1"],"m":1,"b":"0","n":0}"#);
        let mut member = -1;
        assert_eq!(apx_membership(sys, cstr(&quad).as_ptr(), 1, &mut member), ApxStatus::Ok);
        assert_eq!(member, 1);
        let off = r#"{"a":["0","1"],"m":1,"b":"1/2","n":0}"#;
        assert_eq!(apx_membership(sys, cstr(off).as_ptr(), 1, &mut member), ApxStatus::Ok);
        assert_eq!(member, 0);
        apx_system_free(sys);
    }
}

#[test]
fn error_statuses() {
    unsafe {
        let mut sys = ptr::null_mut();
        assert_eq!(apx_system_builtin(cstr("tangent").as_ptr(), &mut sys), ApxStatus::Parse);
        assert!(last_error().contains("unknown system"));
        assert!(sys.is_null());
        assert_eq!(apx_system_builtin(ptr::null(), &mut sys), ApxStatus::NullArgument);

        let sys = builtin("division");
        let mut out = ptr::null_mut();
        assert_eq!(apx_eval(sys, cstr("1,0").as_ptr(), 3, 500, &mut out), ApxStatus::Timeout);
        assert!(last_error().contains("500 steps"));
        assert_eq!(apx_eval(sys, cstr("1").as_ptr(), 3, 0, &mut out), ApxStatus::Dimension);
        assert_eq!(apx_eval(sys, cstr("1,x").as_ptr(), 3, 0, &mut out), ApxStatus::Parse);
        assert_eq!(apx_eval(sys, cstr("1,3").as_ptr(), 3, 0, ptr::null_mut()), ApxStatus::NullArgument);
        assert_eq!(apx_eval(ptr::null(), cstr("1,3").as_ptr(), 3, 0, &mut out), ApxStatus::NullArgument);
        assert_eq!(apx_enumerate(sys, 0, &mut out), ApxStatus::NotFound);
        let mut member = 0;
        assert_eq!(apx_membership(sys, cstr("{").as_ptr(), 1, &mut member), ApxStatus::Format);
        assert!(out.is_null());
        apx_system_free(sys);
        apx_system_free(ptr::null_mut());
        apx_string_free(ptr::null_mut());
        assert_eq!(apx_system_dim(ptr::null()), 0);
    }
}

#[test]
fn formula_systems_and_verification() {
    let json = std::fs::read_to_string(
        [env!("CARGO_MANIFEST_DIR"), "..", "core", "tests", "data", "square_corrupt.json"]
            .iter()
            .collect::<PathBuf>(),
    )
    .unwrap();
    unsafe {
        let mut sys = ptr::null_mut();
        assert_eq!(apx_system_from_formula_json(cstr(&json).as_ptr(), &mut sys), ApxStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(apx_verify_condition1(sys, 1000, 10, 0, &mut out), ApxStatus::Ok);
        let verdict = approxsys::Verdict::from_json(&take(out)).unwrap();
        assert_eq!(verdict.outcome, approxsys::Outcome::CounterExample);
        apx_system_free(sys);

        let no_theta = r#"{"vars":1,"formula":{"op":">=","poly":[[1,[0,0,0,1]]]}}"#;
        let mut bad = ptr::null_mut();
        let status = apx_system_from_formula_json(cstr(no_theta).as_ptr(), &mut bad);
        assert_eq!(status, ApxStatus::Ok, "{}", last_error());
        assert_eq!(apx_verify_condition1(bad, 10, 1, 0, &mut out), ApxStatus::NotFound);
        apx_system_free(bad);
        assert_eq!(apx_system_from_formula_json(cstr("[]").as_ptr(), &mut bad), ApxStatus::Format);

        let cos = builtin("cosine");
        assert_eq!(apx_verify_condition1(cos, 50, 3, 4, &mut out), ApxStatus::Ok);
        let verdict = approxsys::Verdict::from_json(&take(out)).unwrap();
        assert_ne!(verdict.outcome, approxsys::Outcome::CounterExample);
        apx_system_free(cos);
    }
}

#[test]
fn errors_are_per_thread() {
    unsafe {
        let mut sys = ptr::null_mut();
        assert_eq!(apx_system_builtin(cstr("nope").as_ptr(), &mut sys), ApxStatus::Parse);
        std::thread::spawn(|| assert!(apx_last_error_message().is_null())).join().unwrap();
        assert!(last_error().contains("nope"));
    }
}

#[test]
fn header_compiles_as_c() {
    let dir: PathBuf = [env!("CARGO_MANIFEST_DIR"), "include"].iter().collect();
    let header = dir.join("approxsys.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for f in ["apx_system_builtin", "apx_eval", "apx_last_error_message", "APX_STATUS_TIMEOUT"] {
        assert!(text.contains(f), "{f} missing from header");
    }
    let src = std::env::temp_dir().join(format!("approxsys_header_{}.c", std::process::id()));
    std::fs::write(
        &src,
        "#include \"approxsys.h\"\nint main(void) { ApxSystem *s = 0; return apx_system_builtin(\"cosine\", &s) == APX_STATUS_OK ? 0 : 1; }\n",
    )
    .unwrap();
    let status = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-I"])
        .arg(&dir)
        .arg(&src)
        .status();
    let _ = std::fs::remove_file(&src);
    match status {
        Ok(s) => assert!(s.success(), "header does not compile"),
        Err(e) => eprintln!("no C compiler available, skipping compile check: {e}"),
    }
}
