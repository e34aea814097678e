use colorsurg_ffi::*;
use std::ffi::{CStr, CString};
use std::ptr;

fn four_patch() -> *mut CsLayout {
    let la = CString::new("X1 X3 Z4").unwrap();
    let lb = CString::new("Z1 Z2 Z3 Z4").unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { cs_layout_new(3, la.as_ptr(), lb.as_ptr(), &mut h) }, CsStatus::Ok);
    assert!(!h.is_null());
    h
}

#[test]
fn layout_json_round_trip() {
    let h = four_patch();
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(cs_layout_to_json(h, &mut s), CsStatus::Ok);
        let mut h2 = ptr::null_mut();
        assert_eq!(cs_layout_from_json(s, &mut h2), CsStatus::Ok);
        assert_eq!(cs_layout_num_qubits(h), cs_layout_num_qubits(h2));
        assert!(cs_layout_num_qubits(h) > 0);
        cs_string_free(s);
        cs_layout_free(h2);
        cs_layout_free(h);
    }
}

#[test]
fn surgery_is_seeded() {
    let h = four_patch();
    unsafe {
        let (mut a1, mut b1, mut a2, mut b2) = (0i8, 0i8, 0i8, 0i8);
        assert_eq!(cs_surgery_run(h, 11, &mut a1, &mut b1), CsStatus::Ok);
        assert_eq!(cs_surgery_run(h, 11, &mut a2, &mut b2), CsStatus::Ok);
        assert_eq!((a1, b1), (a2, b2));
        assert!(a1.abs() == 1 && b1.abs() == 1);
        let mut d = 0i64;
        assert_eq!(cs_decoder_fault_distance(h, &mut d), CsStatus::Ok);
        assert_eq!(d, 3);
        let mut f = 0u64;
        assert_eq!(cs_decoder_failures(h, 0.0, 100, 1, &mut f), CsStatus::Ok);
        assert_eq!(f, 0);
        cs_layout_free(h);
    }
}

#[test]
fn errors_map_to_codes() {
    let la = CString::new("X1").unwrap();
    let lb = CString::new("Z1").unwrap();
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(cs_layout_new(4, la.as_ptr(), lb.as_ptr(), &mut h), CsStatus::Validation);
        assert!(!cs_last_error_message().is_null());
        let bad = CString::new("Q9").unwrap();
        assert_eq!(cs_layout_new(3, bad.as_ptr(), lb.as_ptr(), &mut h), CsStatus::Parse);
        assert_eq!(cs_layout_new(3, ptr::null(), lb.as_ptr(), &mut h), CsStatus::NullPointer);
        let junk = CString::new("{").unwrap();
        assert_eq!(cs_layout_from_json(junk.as_ptr(), &mut h), CsStatus::Parse);
        assert!(h.is_null());
        let msg = CStr::from_ptr(cs_last_error_message()).to_str().unwrap();
        assert!(!msg.is_empty());
    }
}

#[test]
fn counts_and_estimates() {
    let mut n = 0usize;
    for (k, want) in [
        (CsAnyonKind::Boundaries, 6),
        (CsAnyonKind::Transparent, 72),
        (CsAnyonKind::SemiTransparent, 162),
        (CsAnyonKind::Opaque, 36),
    ] {
        assert_eq!(unsafe { cs_anyons_count(k, &mut n) }, CsStatus::Ok);
        assert_eq!(n, want);
    }
    let mut r = 0.0;
    assert_eq!(unsafe { cs_estimate_spacetime_ratio(100, 1e8, 0.01, 1e-3, &mut r) }, CsStatus::Ok);
    assert!(r > 0.85 && r < 0.95);
    assert_eq!(unsafe { cs_estimate_spacetime_ratio(100, 1e8, 0.01, 0.5, &mut r) }, CsStatus::Validation);
    let v = unsafe { CStr::from_ptr(cs_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/colorsurg.h");
    let text = std::fs::read_to_string(header).unwrap();
    for f in ["cs_layout_new", "cs_layout_free", "cs_last_error_message", "CS_STATUS_VALIDATION"] {
        assert!(text.contains(f), "{f} missing from header");
    }
    let dir = std::env::temp_dir().join(format!("colorsurg_hdr_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("use.c");
    std::fs::write(&src, format!("#include \"{header}\"\nint main(void) {{ CsLayout *h = 0; return (int)cs_layout_num_qubits(h); }}\n")).unwrap();
    match std::process::Command::new("cc").arg("-fsyntax-only").arg("-Wall").arg(&src).status() {
        Ok(s) => assert!(s.success()),
        Err(_) => eprintln!("no C compiler; header syntax not checked"),
    }
}
