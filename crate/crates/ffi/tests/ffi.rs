use std::ffi::CStr;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use finsurg_ffi::*;

fn last_error() -> String {
    let p = finsurg_last_error_message();
    if p.is_null() {
        return String::new();
    }
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { finsurg_string_free(p) };
    s
}

fn d(p: u64, q: i64, i: u64) -> Result<(i64, i64), FinsurgStatus> {
    let (mut n, mut m) = (0i64, 0i64);
    match unsafe { finsurg_d_lens(p, q, i, &mut n, &mut m) } {
        FinsurgStatus::Ok => Ok((n, m)),
        s => Err(s),
    }
}

#[test]
fn d_lens_values() {
    assert_eq!(d(3, 1, 0), Ok((1, 2)));
    assert_eq!(d(3, 1, 1), Ok((-1, 6)));
    assert_eq!(d(5, 2, 0), Ok((2, 5)));
    assert_eq!(d(1, 0, 0), Ok((0, 1)));
}

#[test]
fn errors_set_message() {
    assert_eq!(d(4, 2, 0), Err(FinsurgStatus::InvalidArgument));
    assert!(!last_error().is_empty());
    assert_eq!(d(3, 1, 0), Ok((1, 2)));
    assert!(finsurg_last_error_message().is_null());
    assert_eq!(unsafe { finsurg_d_lens(3, 1, 0, ptr::null_mut(), ptr::null_mut()) }, FinsurgStatus::NullPointer);
}

#[test]
fn table_handles() {
    let mut t = ptr::null_mut();
    unsafe {
        assert_eq!(finsurg_d_table_lens(5, 2, &mut t), FinsurgStatus::Ok);
        assert_eq!(finsurg_d_table_len(t), 5);
        let (mut n, mut m) = (0, 0);
        for i in 0..5 {
            assert_eq!(finsurg_d_table_get(t, i, &mut n, &mut m), FinsurgStatus::Ok);
            assert_eq!(Ok((n, m)), d(5, 2, i as u64));
        }
        assert_eq!(finsurg_d_table_get(t, 5, &mut n, &mut m), FinsurgStatus::IndexOutOfRange);
        finsurg_d_table_free(t);

        assert_eq!(finsurg_d_table_len(ptr::null()), 0);
        finsurg_d_table_free(ptr::null_mut());
        assert_eq!(finsurg_d_table_get(ptr::null(), 0, &mut n, &mut m), FinsurgStatus::NullPointer);

        let mut bad = ptr::null_mut();
        assert_eq!(finsurg_d_table_lens(6, 3, &mut bad), FinsurgStatus::InvalidArgument);
        assert!(bad.is_null());
    }
}

#[test]
fn trefoil_table_shifts_lens_table() {
    unsafe {
        let (mut t, mut l) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(finsurg_d_table_trefoil(19, 4, &mut t), FinsurgStatus::Ok);
        assert_eq!(finsurg_d_table_lens(19, 4, &mut l), FinsurgStatus::Ok);
        assert_eq!(finsurg_d_table_len(t), 19);
        for i in 0..19 {
            let (mut a, mut b, mut c, mut e) = (0, 0, 0, 0);
            finsurg_d_table_get(t, i, &mut a, &mut b);
            finsurg_d_table_get(l, i, &mut c, &mut e);
            let shift = if i < 4 { 2 } else { 0 };
            // a/b = c/e - shift
            assert_eq!(a * e, (c - shift * e) * b, "i={i}");
        }
        finsurg_d_table_free(t);
        finsurg_d_table_free(l);
    }
}

#[test]
fn search_result_handle() {
    unsafe {
        let mut r = ptr::null_mut();
        assert_eq!(finsurg_search(230, false, 52, 0, &mut r), FinsurgStatus::Ok);
        let n = finsurg_search_len(r);
        assert_eq!(n, 65);
        let mut kinds = [0usize; 4];
        let mut seen = false;
        for k in 0..n {
            let mut v = std::mem::zeroed::<FinsurgCandidateView>();
            assert_eq!(finsurg_search_get(r, k, &mut v), FinsurgStatus::Ok);
            assert_eq!(v.t_len, v.genus as usize + 1);
            assert!(v.epsilon == 1 || v.epsilon == -1);
            kinds[v.match_kind as usize] += 1;

            let mut len = 0usize;
            assert_eq!(finsurg_search_tseq(r, k, ptr::null_mut(), 0, &mut len), FinsurgStatus::BufferTooSmall);
            assert_eq!(len, v.t_len);
            let mut buf = vec![0u32; len];
            assert_eq!(finsurg_search_tseq(r, k, buf.as_mut_ptr(), len, &mut len), FinsurgStatus::Ok);
            assert_eq!(buf[len - 1], 0);

            let label = finsurg_search_match_label(r, k);
            assert!(!label.is_null());
            let s = CStr::from_ptr(label).to_str().unwrap().to_string();
            finsurg_string_free(label);
            if (v.p, v.q) == (19, 4) {
                assert_eq!(v.match_kind, FinsurgMatchKind::Cable);
                assert_eq!(s, "[9,2;3,2]");
                let cable = finsurg::knot_invariants::cable_alexander(9, 2, 3, 2).unwrap();
                let expect = finsurg::knot_invariants::t_from_alexander(&cable).unwrap();
                assert_eq!(buf, expect.as_slice());
                seen = true;
            }
        }
        assert!(seen);
        assert_eq!(kinds[FinsurgMatchKind::Unexpected as usize], 0);
        assert!(kinds[FinsurgMatchKind::Hyperbolic as usize] > 0);

        let mut v = std::mem::zeroed::<FinsurgCandidateView>();
        assert_eq!(finsurg_search_get(r, n, &mut v), FinsurgStatus::IndexOutOfRange);
        assert!(finsurg_search_match_label(r, n).is_null());
        finsurg_search_free(r);
        assert_eq!(finsurg_search_len(ptr::null()), 0);
    }
}

#[test]
fn full_scan_matches_pruned() {
    unsafe {
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(finsurg_search(120, true, 0, 1, &mut a), FinsurgStatus::Ok);
        assert_eq!(finsurg_search(120, false, 0, 1, &mut b), FinsurgStatus::Ok);
        assert_eq!(finsurg_search_len(a), finsurg_search_len(b));
        for k in 0..finsurg_search_len(a) {
            let mut va = std::mem::zeroed::<FinsurgCandidateView>();
            let mut vb = std::mem::zeroed::<FinsurgCandidateView>();
            finsurg_search_get(a, k, &mut va);
            finsurg_search_get(b, k, &mut vb);
            assert_eq!(va, vb);
        }
        finsurg_search_free(a);
        finsurg_search_free(b);
    }
}

fn tseq(coeffs: &[i64]) -> Result<Vec<u32>, (FinsurgStatus, usize)> {
    let mut buf = [0u32; 64];
    let mut len = 99usize;
    match unsafe { finsurg_tseq_from_alexander(coeffs.as_ptr(), coeffs.len(), buf.as_mut_ptr(), buf.len(), &mut len) } {
        FinsurgStatus::Ok => Ok(buf[..len].to_vec()),
        s => Err((s, len)),
    }
}

#[test]
fn tseq_from_alexander() {
    assert_eq!(tseq(&[-1, 1]), Ok(vec![1, 0]));
    assert_eq!(tseq(&[1, -1, 1]), Ok(vec![1, 1, 0]));
    assert_eq!(tseq(&[1]), Ok(vec![0]));
    // T^2 - 2 + T^-2 has Δ(1) = 0
    assert_eq!(tseq(&[-2, 0, 1]).unwrap_err(), (FinsurgStatus::NotAdmissible, 0));
    // figure eight: Δ(1) = 1 but not an L-space knot
    assert_eq!(tseq(&[3, -1]).unwrap_err(), (FinsurgStatus::NotAdmissible, 0));
    assert!(!last_error().is_empty());
    let mut len = 0;
    let status = unsafe { finsurg_tseq_from_alexander(ptr::null(), 0, ptr::null_mut(), 0, &mut len) };
    assert_eq!(status, FinsurgStatus::NullPointer);
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(finsurg_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/finsurg.h")
}

#[test]
fn header_declares_exports() {
    let h = std::fs::read_to_string(header()).expect("generated header");
    for name in [
        "finsurg_last_error_message",
        "finsurg_string_free",
        "finsurg_version",
        "finsurg_d_lens",
        "finsurg_d_table_lens",
        "finsurg_d_table_trefoil",
        "finsurg_d_table_len",
        "finsurg_d_table_get",
        "finsurg_d_table_free",
        "finsurg_search",
        "finsurg_search_len",
        "finsurg_search_get",
        "finsurg_search_tseq",
        "finsurg_search_match_label",
        "finsurg_search_free",
        "finsurg_tseq_from_alexander",
        "typedef struct FinsurgDTable FinsurgDTable",
        "typedef struct FinsurgSearchResult FinsurgSearchResult",
        "FINSURG_STATUS_BUFFER_TOO_SMALL",
    ] {
        assert!(h.contains(name), "header lacks {name}");
    }
}

/// Builds the static library into a private target directory; the outer
/// cargo holds the lock on the shared one while tests run.
fn static_lib() -> PathBuf {
    let target = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("ffi-build");
    let status = Command::new(env!("CARGO"))
        .args(["build", "--offline", "--quiet", "-p", "finsurg-ffi", "--lib", "--target-dir"])
        .arg(&target)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .status()
        .expect("cargo");
    assert!(status.success(), "building the static library failed");
    target.join("debug/libfinsurg_ffi.a")
}

#[test]
fn c_program_links_and_runs() {
    let lib = static_lib();
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("finsurg_smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Wextra", "-Werror", "-I"])
        .arg(header().parent().unwrap())
        .arg(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .expect("C compiler");
    assert!(status.success());
    let run = Command::new(&out).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
}
