use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use addcomb_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 512];
    unsafe {
        ac_last_error(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

fn group(spec: &str) -> *mut AcGroup {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { ac_group_parse(cstr(spec).as_ptr(), &mut g) }, AcStatus::Ok);
    g
}

fn set(g: *const AcGroup, body: &str) -> *mut AcSet {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ac_set_parse(g, cstr(body).as_ptr(), &mut s) }, AcStatus::Ok);
    s
}

#[test]
fn quantities_through_the_abi() {
    let g = group("Z/10");
    let a = set(g, "{0, 1, 2}");
    let mut e = 0u64;
    let mut v = AcValue {
        num: 0,
        den: 0,
        is_infinite: false,
        exactness: AcExactness::Exact,
    };
    unsafe {
        assert_eq!(ac_energy(a, a, &mut e), AcStatus::Ok);
        assert_eq!(e, 19);
        assert_eq!(ac_e_quantity(a, a, ptr::null(), 24, &mut v), AcStatus::Ok);
        assert_eq!(ac_longest_ap(a, &mut v), AcStatus::Ok);
        assert_eq!((v.num, v.den), (3, 1));
        assert_eq!(ac_petridis_ratio(a, 24, &mut v), AcStatus::Ok);
        assert_eq!((v.num, v.den), (5, 3));
        assert_eq!(ac_additive_dimension(a, 24, &mut v), AcStatus::Ok);
        assert_eq!(v.exactness, AcExactness::Exact);
        let h = set(g, "{3}");
        assert_eq!(ac_shift_ratio(h, &mut v), AcStatus::Ok);
        assert!(v.is_infinite);
        let mut d = ptr::null_mut();
        assert_eq!(ac_difference_set(a, a, &mut d), AcStatus::Ok);
        let mut buf = [0u64; 16];
        let mut len = 0usize;
        assert_eq!(ac_set_indices(d, buf.as_mut_ptr(), buf.len(), &mut len), AcStatus::Ok);
        assert_eq!(&buf[..len], &[0, 1, 2, 8, 9]);
        ac_set_free(d);
        ac_set_free(h);
        ac_set_free(a);
        ac_group_free(g);
    }
}

#[test]
fn error_codes() {
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(ac_group_parse(cstr("Z/1").as_ptr(), &mut g), AcStatus::Parse);
        assert!(g.is_null());
        assert!(last_error().contains('1'));
        assert_eq!(ac_group_parse(ptr::null(), &mut g), AcStatus::NullPointer);
        let z6 = group("Z/6");
        let z7 = group("Z/7");
        let (a, b) = (set(z6, "{1}"), set(z7, "{1}"));
        let mut out = ptr::null_mut();
        assert_eq!(ac_sumset(a, b, &mut out), AcStatus::GroupMismatch);
        let empty = set(z6, "{}");
        let mut v = std::mem::zeroed::<AcValue>();
        assert_eq!(ac_doubling(empty, a, &mut v), AcStatus::EmptySet);
        assert_eq!(ac_s_quantity(a, a, cstr("1/2").as_ptr(), 24, &mut v), AcStatus::InvalidArgument);
        let mut json = ptr::null_mut();
        assert_eq!(
            ac_verify_family(cstr("subsets(Z/64, max=10)").as_ptr(), cstr("chain").as_ptr(), 24, &mut json),
            AcStatus::FamilyTooLarge
        );
        assert_eq!(
            ac_verify_family(cstr("subsets(Z/6").as_ptr(), cstr("chain").as_ptr(), 24, &mut json),
            AcStatus::Parse
        );
        assert!(json.is_null());
        for s in [a, b, empty] {
            ac_set_free(s);
        }
        ac_group_free(z6);
        ac_group_free(z7);
        ac_group_free(ptr::null_mut());
        ac_set_free(ptr::null_mut());
        ac_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_api() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/addcomb.h")).unwrap();
    for name in ["ac_group_parse", "ac_set_parse", "ac_s_quantity", "ac_verify_family", "AC_STATUS_PANIC", "typedef struct AcSet AcSet"] {
        assert!(header.contains(name), "{name}");
    }
}

#[test]
fn c_program_links_against_the_static_library() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/<test binary>
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libaddcomb_ffi.a");
    assert!(lib.exists(), "missing {}", lib.display());
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("addcomb_smoke");
    let status = Command::new("cc")
        .arg(dir.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("a C compiler on PATH");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
