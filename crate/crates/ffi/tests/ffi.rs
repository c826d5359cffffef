use std::ffi::{CStr, CString};
use std::ptr;
use trisect_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(trisect_last_error()) }.to_str().unwrap().to_string()
}

fn diagram(name: &str) -> *mut TrisectDiagram {
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { trisect_diagram_catalog(c(name).as_ptr(), &mut d) }, TrisectStatus::Ok);
    d
}

fn triplet(spec: &str) -> *mut TrisectTriplet {
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { trisect_triplet_from_spec(c(spec).as_ptr(), &mut t) }, TrisectStatus::Ok, "{}", last_error());
    t
}

#[test]
fn kashaev_cp2_through_the_c_interface() {
    let (d, t) = (diagram("cp2"), triplet("kashaev:n=3"));
    let (mut re, mut im) = (0.0, 0.0);
    unsafe {
        assert_eq!(trisect_bracket(d, t, &mut re, &mut im), TrisectStatus::Ok);
        assert!(re.abs() < 1e-9 && (im - 27f64.sqrt()).abs() < 1e-9);
        assert_eq!(trisect_invariant(d, t, &mut re, &mut im), TrisectStatus::Ok);
        assert!(re.abs() < 1e-9 && (im - 1.0 / 3f64.sqrt()).abs() < 1e-9);
        assert_eq!(trisect_diagram_genus(d), 1);
        trisect_diagram_free(d);
        trisect_triplet_free(t);
    }
}

#[test]
fn counts_and_moves() {
    let d = diagram("s4");
    let (mut l, mut v) = (0u64, 0.0);
    unsafe {
        assert_eq!(trisect_count(d, c("Z/2").as_ptr(), c("Z/3").as_ptr(), &mut l, &mut v), TrisectStatus::Ok);
        assert_eq!((l, v), (6, 1.0));
        let moves = c(r#"[{"move": "stabilize"}, {"move": "reverse_orientation", "curve": "F1"}]"#);
        let mut e = ptr::null_mut();
        assert_eq!(trisect_diagram_apply_moves(d, moves.as_ptr(), &mut e), TrisectStatus::Ok);
        assert_eq!(trisect_diagram_genus(e), 6);
        assert_eq!(trisect_count(e, c("Z/2").as_ptr(), c("Z/3").as_ptr(), &mut l, &mut v), TrisectStatus::Ok);
        assert_eq!((l, v), (36, 1.0));
        trisect_diagram_free(e);
        trisect_diagram_free(d);
    }
}

#[test]
fn json_round_trip() {
    let d = diagram("cp2bar");
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(trisect_diagram_to_json(d, &mut s), TrisectStatus::Ok);
        let mut e = ptr::null_mut();
        assert_eq!(trisect_diagram_from_json(s, 1, &mut e), TrisectStatus::Ok);
        let mut s2 = ptr::null_mut();
        assert_eq!(trisect_diagram_to_json(e, &mut s2), TrisectStatus::Ok);
        assert_eq!(CStr::from_ptr(s), CStr::from_ptr(s2));
        trisect_string_free(s);
        trisect_string_free(s2);
        trisect_diagram_free(e);
        trisect_diagram_free(d);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    let mut d = ptr::null_mut();
    let mut t = ptr::null_mut();
    unsafe {
        assert_eq!(trisect_diagram_catalog(c("k3").as_ptr(), &mut d), TrisectStatus::InvalidDiagram);
        assert!(last_error().contains("k3"));
        assert!(d.is_null());
        assert_eq!(trisect_diagram_catalog(ptr::null(), &mut d), TrisectStatus::NullPointer);
        assert_eq!(trisect_triplet_from_spec(c("kashaev:n").as_ptr(), &mut t), TrisectStatus::Parse);
        assert_eq!(trisect_diagram_from_json(c("{").as_ptr(), 1, &mut d), TrisectStatus::Parse);
        let cp2 = diagram("cp2");
        assert_eq!(last_error(), "");
        let bad = c(r#"{"move": "two_point_delete", "p": "x", "q": "y"}"#);
        assert_eq!(trisect_diagram_apply_moves(cp2, bad.as_ptr(), &mut d), TrisectStatus::InvalidMove);
        let mut re = 0.0;
        assert_eq!(trisect_bracket(cp2, ptr::null(), &mut re, &mut re), TrisectStatus::NullPointer);
        assert_eq!(trisect_diagram_genus(ptr::null()), -1);
        trisect_diagram_free(cp2);
        trisect_diagram_free(ptr::null_mut());
        trisect_string_free(ptr::null_mut());
    }
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/trisect.h");
    let text = std::fs::read_to_string(header).unwrap();
    for f in ["trisect_bracket", "trisect_invariant", "trisect_count", "trisect_last_error", "TRISECT_STATUS_PANIC"] {
        assert!(text.contains(f), "{f} missing from the header");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"trisect.h\"\nint main(void) { TrisectDiagram *d = 0; double re, im; \
         return trisect_diagram_catalog(\"cp2\", &d) == TRISECT_STATUS_OK && trisect_invariant(d, 0, &re, &im) != 0; }\n",
    )
    .unwrap();
    let include = format!("-I{}/include", env!("CARGO_MANIFEST_DIR"));
    match std::process::Command::new("cc").args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", &include]).arg(&src).output() {
        Ok(o) => assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr)),
        Err(_) => eprintln!("no C compiler; skipped the compile check"),
    }
}
