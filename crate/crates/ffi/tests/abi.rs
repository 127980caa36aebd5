use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use polynum_ffi::*;

fn system(poly: &[i64], digits: &[i64]) -> *mut PolynumSystem {
    let mut out = ptr::null_mut();
    let s = unsafe { polynum_system_new(poly.as_ptr(), poly.len(), digits.as_ptr(), digits.len(), &mut out) };
    assert_eq!(s, PolynumStatus::Ok);
    assert!(!out.is_null());
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(polynum_last_error_message()) }.to_string_lossy().into_owned()
}

#[test]
fn expand_and_evaluate_round_trip() {
    let sys = system(&[2, 2, 1], &[0, 1]);
    assert_eq!(unsafe { polynum_system_degree(sys) }, 2);
    let mut digits = [0i64; 16];
    let mut len = 0usize;
    let s = unsafe { polynum_expand(sys, [-1i64].as_ptr(), 1, digits.as_mut_ptr(), digits.len(), &mut len) };
    assert_eq!(s, PolynumStatus::Ok);
    assert_eq!(&digits[..len], &[1, 0, 1, 1, 1]);

    let mut coeffs = [0i64; 2];
    let s = unsafe { polynum_evaluate(sys, digits.as_ptr(), len, coeffs.as_mut_ptr()) };
    assert_eq!(s, PolynumStatus::Ok);
    assert_eq!(coeffs, [-1, 0]);
    unsafe { polynum_system_free(sys) };
}

#[test]
fn small_buffer_reports_required_length() {
    let sys = system(&[2, 1], &[0, 1]);
    let mut len = 0usize;
    let s = unsafe { polynum_expand(sys, [6i64].as_ptr(), 1, ptr::null_mut(), 0, &mut len) };
    assert_eq!(s, PolynumStatus::BufferTooSmall);
    assert_eq!(len, 5);
    assert!(!last_error().is_empty());
    unsafe { polynum_system_free(sys) };
}

#[test]
fn verdicts() {
    for (poly, digits, expected) in [
        (vec![2i64, 2, 1], vec![0i64, 1], PolynumVerdict::Yes),
        (vec![-2, 1], vec![0, 1], PolynumVerdict::No),
        (vec![2, -2, 1], vec![0, 1], PolynumVerdict::No),
    ] {
        let sys = system(&poly, &digits);
        let mut v = PolynumVerdict::Inconclusive;
        assert_eq!(unsafe { polynum_verify(sys, &mut v) }, PolynumStatus::Ok);
        assert_eq!(v, expected, "{poly:?}");
        unsafe { polynum_system_free(sys) };
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    let mut out = ptr::null_mut();
    let poly = [2i64, 2, 3];
    let digits = [0i64, 1];
    let s = unsafe { polynum_system_new(poly.as_ptr(), 3, digits.as_ptr(), 2, &mut out) };
    assert_eq!(s, PolynumStatus::InvalidInput);
    assert!(out.is_null());
    assert!(last_error().contains("monic"), "{}", last_error());

    let s = unsafe { polynum_system_new(ptr::null(), 3, digits.as_ptr(), 2, &mut out) };
    assert_eq!(s, PolynumStatus::NullPointer);

    let sys = system(&[-2, 1], &[0, 1]);
    let mut buf = [0i64; 8];
    let mut len = 0usize;
    let s = unsafe { polynum_expand(sys, [-1i64].as_ptr(), 1, buf.as_mut_ptr(), 8, &mut len) };
    assert_eq!(s, PolynumStatus::DomainError);
    assert!(last_error().contains("cycle"));

    let s = unsafe { polynum_evaluate(sys, [3i64].as_ptr(), 1, buf.as_mut_ptr()) };
    assert_eq!(s, PolynumStatus::InvalidInput);
    unsafe { polynum_system_free(sys) };
    unsafe { polynum_system_free(ptr::null_mut()) };
}

#[test]
fn region_count() {
    let sys = system(&[2, 1], &[0, 1]);
    let (mut count, mut normalized) = (0u64, 0.0f64);
    let s = unsafe { polynum_count_region(sys, 100.0, &mut count, &mut normalized) };
    assert_eq!(s, PolynumStatus::Ok);
    assert_eq!((count, normalized), (201, 2.01));
    let s = unsafe { polynum_count_region(sys, 0.5, &mut count, &mut normalized) };
    assert_eq!(s, PolynumStatus::InvalidInput);
    unsafe { polynum_system_free(sys) };
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(polynum_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn header() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include").join("polynum.h")
}

#[test]
fn header_declares_the_surface() {
    let text = std::fs::read_to_string(header()).unwrap();
    for name in [
        "typedef struct PolynumSystem PolynumSystem;",
        "polynum_system_new",
        "polynum_system_free",
        "polynum_system_degree",
        "polynum_verify",
        "polynum_expand",
        "polynum_evaluate",
        "polynum_count_region",
        "polynum_last_error_message",
        "POLYNUM_STATUS_BUFFER_TOO_SMALL = 4",
        "POLYNUM_VERDICT_INCONCLUSIVE = 2",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }
}

#[test]
fn c_program_links_against_the_static_library() {
    // target/<profile>/deps/<test binary> → target/<profile>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libpolynum_ffi.a");
    assert!(lib.exists(), "missing {}", lib.display());
    let dir = std::env::temp_dir().join(format!("polynum-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("main.c");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include "polynum.h"
int main(void) {
    const int64_t poly[] = {2, 2, 1};
    const int64_t digits[] = {0, 1};
    PolynumSystem *sys = NULL;
    if (polynum_system_new(poly, 3, digits, 2, &sys) != POLYNUM_STATUS_OK) return 1;
    const int64_t g[] = {-1};
    int64_t out[16];
    uintptr_t len = 0;
    if (polynum_expand(sys, g, 1, out, 16, &len) != POLYNUM_STATUS_OK) return 2;
    for (uintptr_t i = 0; i < len; i++) printf("%lld", (long long)out[i]);
    PolynumVerdict v;
    if (polynum_verify(sys, &v) != POLYNUM_STATUS_OK || v != POLYNUM_VERDICT_YES) return 3;
    polynum_system_free(sys);
    printf("\n");
    return 0;
}
"#,
    )
    .unwrap();
    let bin = dir.join("main");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "10111");
    let _ = std::fs::remove_dir_all(&dir);
}
