//! C ABI over `finsurg`.
//!
//! Every fallible call returns a [`FinsurgStatus`]; on failure the message is
//! kept per thread and read with [`finsurg_last_error_message`]. Handles are
//! opaque and must be released with their `_free` function. Strings returned
//! to the caller are released with [`finsurg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use finsurg::catalog::{Catalog, MatchResult};
use finsurg::knot_invariants::{torsion_values, AlexanderPoly, TSequence};
use finsurg::search::{search, Candidate, SearchConfig, SearchMode};
use finsurg::{d_lens, d_lens_table, d_trefoil_filling, DTable, Error, Rational};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FinsurgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    IndexOutOfRange = 3,
    NotAdmissible = 4,
    Overflow = 5,
    BufferTooSmall = 6,
    Internal = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FinsurgMatchKind {
    Torus = 0,
    Cable = 1,
    Hyperbolic = 2,
    Unexpected = 3,
}

/// One search candidate. The t-sequence and match label are read separately.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FinsurgCandidateView {
    pub p: u64,
    pub q: u64,
    /// +1 or -1.
    pub epsilon: i32,
    pub a: u64,
    pub b: u64,
    pub genus: u32,
    /// Length of the t-sequence, `genus + 1`.
    pub t_len: usize,
    pub match_kind: FinsurgMatchKind,
}

/// A table of correction terms.
pub struct FinsurgDTable {
    inner: DTable,
}

/// Search output together with catalog matches.
pub struct FinsurgSearchResult {
    candidates: Vec<Candidate>,
    matches: Vec<MatchResult>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: FinsurgStatus, msg: impl Into<String>) -> FinsurgStatus {
    set_error(msg);
    status
}

fn status_of(e: &Error) -> FinsurgStatus {
    match e {
        Error::IndexOutOfRange { .. } => FinsurgStatus::IndexOutOfRange,
        Error::NotAdmissible(_) | Error::NotNormalized(_) | Error::ZeroLeadingCoefficient => {
            FinsurgStatus::NotAdmissible
        }
        Error::Overflow => FinsurgStatus::Overflow,
        _ => FinsurgStatus::InvalidArgument,
    }
}

fn from_error(e: Error) -> FinsurgStatus {
    fail(status_of(&e), e.to_string())
}

/// Runs `f`, turning a panic into `Internal`.
fn guard(f: impl FnOnce() -> FinsurgStatus) -> FinsurgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => {
            if status == FinsurgStatus::Ok {
                LAST_ERROR.with(|e| *e.borrow_mut() = None);
            }
            status
        }
        Err(_) => fail(FinsurgStatus::Internal, "internal panic"),
    }
}

fn write_rational(v: Rational, num: *mut i64, den: *mut i64) -> FinsurgStatus {
    let (Ok(n), Ok(d)) = (i64::try_from(v.numer()), i64::try_from(v.denom())) else {
        return fail(FinsurgStatus::Overflow, format!("{v} does not fit in 64-bit integers"));
    };
    // SAFETY: callers check both pointers for null first.
    unsafe {
        *num = n;
        *den = d;
    }
    FinsurgStatus::Ok
}

fn write_u32s(values: &[u32], buf: *mut u32, cap: usize, out_len: *mut usize) -> FinsurgStatus {
    // SAFETY: out_len checked for null by the caller.
    unsafe { *out_len = values.len() };
    if values.len() > cap {
        return fail(FinsurgStatus::BufferTooSmall, format!("need {} entries, buffer holds {cap}", values.len()));
    }
    if !values.is_empty() {
        if buf.is_null() {
            return fail(FinsurgStatus::NullPointer, "null buffer");
        }
        // SAFETY: buf is non-null and the caller promises room for cap >= len entries.
        unsafe { ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len()) };
    }
    FinsurgStatus::Ok
}

/// Message for the last failed call on this thread, or null. Free with
/// [`finsurg_string_free`].
#[no_mangle]
pub extern "C" fn finsurg_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |s| s.clone().into_raw()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn finsurg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Static version string.
#[no_mangle]
pub extern "C" fn finsurg_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(s) => s,
        Err(_) => panic!("version has no interior nul"),
    };
    VERSION.as_ptr()
}

/// `d(L(p,q), i)` as a reduced fraction `num/den`, `den > 0`.
///
/// # Safety
/// `num` and `den` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn finsurg_d_lens(p: u64, q: i64, i: u64, num: *mut i64, den: *mut i64) -> FinsurgStatus {
    if num.is_null() || den.is_null() {
        return fail(FinsurgStatus::NullPointer, "null output pointer");
    }
    guard(|| match d_lens(p, q, i) {
        Ok(v) => write_rational(v, num, den),
        Err(e) => from_error(e),
    })
}

unsafe fn table_out(out: *mut *mut FinsurgDTable, make: impl FnOnce() -> finsurg::Result<DTable>) -> FinsurgStatus {
    if out.is_null() {
        return fail(FinsurgStatus::NullPointer, "null output pointer");
    }
    *out = ptr::null_mut();
    guard(|| match make() {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(FinsurgDTable { inner }));
            FinsurgStatus::Ok
        }
        Err(e) => from_error(e),
    })
}

/// `d(L(p,q), ·)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn finsurg_d_table_lens(p: u64, q: i64, out: *mut *mut FinsurgDTable) -> FinsurgStatus {
    table_out(out, || d_lens_table(p, q))
}

/// `d(T(p/q), ·)` for the trefoil-exterior filling, `p >= q >= 1`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn finsurg_d_table_trefoil(p: u64, q: u64, out: *mut *mut FinsurgDTable) -> FinsurgStatus {
    table_out(out, || d_trefoil_filling(p, q))
}

/// Number of entries; 0 for a null handle.
///
/// # Safety
/// `t` must be null or a live table handle.
#[no_mangle]
pub unsafe extern "C" fn finsurg_d_table_len(t: *const FinsurgDTable) -> usize {
    t.as_ref().map_or(0, |t| t.inner.len())
}

/// # Safety
/// `t` must be a live table handle; `num` and `den` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn finsurg_d_table_get(
    t: *const FinsurgDTable,
    i: usize,
    num: *mut i64,
    den: *mut i64,
) -> FinsurgStatus {
    let Some(t) = t.as_ref() else {
        return fail(FinsurgStatus::NullPointer, "null table");
    };
    if num.is_null() || den.is_null() {
        return fail(FinsurgStatus::NullPointer, "null output pointer");
    }
    let Some(&v) = t.inner.values().get(i) else {
        return fail(FinsurgStatus::IndexOutOfRange, format!("index {i} out of range 0..{}", t.inner.len()));
    };
    guard(|| write_rational(v, num, den))
}

/// # Safety
/// `t` must be null or a live table handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn finsurg_d_table_free(t: *mut FinsurgDTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Runs the search up to `p_max`. `full_scan` disables pruning;
/// `prune_threshold` is ignored when it is set. `jobs = 0` uses all cores.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn finsurg_search(
    p_max: u64,
    full_scan: bool,
    prune_threshold: u64,
    jobs: u32,
    out: *mut *mut FinsurgSearchResult,
) -> FinsurgStatus {
    if out.is_null() {
        return fail(FinsurgStatus::NullPointer, "null output pointer");
    }
    *out = ptr::null_mut();
    let mode = if full_scan { SearchMode::FullScan } else { SearchMode::Pruned { threshold: prune_threshold } };
    let config = SearchConfig { p_max, mode, jobs: (jobs > 0).then_some(jobs as usize) };
    guard(|| match search(&config) {
        Ok(candidates) => {
            let catalog = Catalog::embedded();
            let matches = candidates.iter().map(|c| catalog.match_candidate(c)).collect();
            *out = Box::into_raw(Box::new(FinsurgSearchResult { candidates, matches }));
            FinsurgStatus::Ok
        }
        Err(e) => from_error(e),
    })
}

/// # Safety
/// `r` must be null or a live search handle.
#[no_mangle]
pub unsafe extern "C" fn finsurg_search_len(r: *const FinsurgSearchResult) -> usize {
    r.as_ref().map_or(0, |r| r.candidates.len())
}

unsafe fn search_item<'a>(
    r: *const FinsurgSearchResult,
    idx: usize,
) -> Result<(&'a Candidate, &'a MatchResult), FinsurgStatus> {
    let r = r.as_ref().ok_or_else(|| fail(FinsurgStatus::NullPointer, "null search result"))?;
    match (r.candidates.get(idx), r.matches.get(idx)) {
        (Some(c), Some(m)) => Ok((c, m)),
        _ => Err(fail(FinsurgStatus::IndexOutOfRange, format!("index {idx} out of range 0..{}", r.candidates.len()))),
    }
}

/// # Safety
/// `r` must be a live search handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn finsurg_search_get(
    r: *const FinsurgSearchResult,
    idx: usize,
    out: *mut FinsurgCandidateView,
) -> FinsurgStatus {
    if out.is_null() {
        return fail(FinsurgStatus::NullPointer, "null output pointer");
    }
    let (c, m) = match search_item(r, idx) {
        Ok(x) => x,
        Err(s) => return s,
    };
    let match_kind = match m {
        MatchResult::Known { label } if label.kind() == "torus" => FinsurgMatchKind::Torus,
        MatchResult::Known { .. } => FinsurgMatchKind::Cable,
        MatchResult::HyperbolicCandidate { .. } => FinsurgMatchKind::Hyperbolic,
        MatchResult::Unexpected => FinsurgMatchKind::Unexpected,
    };
    *out = FinsurgCandidateView {
        p: c.p(),
        q: c.q(),
        epsilon: c.epsilon.value() as i32,
        a: c.map.a,
        b: c.map.b,
        genus: c.genus() as u32,
        t_len: c.t.as_slice().len(),
        match_kind,
    };
    FinsurgStatus::Ok
}

/// Copies the t-sequence into `buf` (capacity `cap`); `*out_len` always
/// receives the full length, so a short buffer can be retried.
///
/// # Safety
/// `r` must be a live search handle, `buf` valid for `cap` writes, `out_len`
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn finsurg_search_tseq(
    r: *const FinsurgSearchResult,
    idx: usize,
    buf: *mut u32,
    cap: usize,
    out_len: *mut usize,
) -> FinsurgStatus {
    if out_len.is_null() {
        return fail(FinsurgStatus::NullPointer, "null length pointer");
    }
    match search_item(r, idx) {
        Ok((c, _)) => write_u32s(c.t.as_slice(), buf, cap, out_len),
        Err(s) => s,
    }
}

/// Match label such as `T(3,2)`, `[9,2;3,2]` or the hyperbolic references;
/// empty for unexpected candidates. Null on error. Free with
/// [`finsurg_string_free`].
///
/// # Safety
/// `r` must be a live search handle.
#[no_mangle]
pub unsafe extern "C" fn finsurg_search_match_label(r: *const FinsurgSearchResult, idx: usize) -> *mut c_char {
    match search_item(r, idx) {
        Ok((_, m)) => CString::new(m.params().replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw),
        Err(_) => ptr::null_mut(),
    }
}

/// # Safety
/// `r` must be null or a live search handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn finsurg_search_free(r: *mut FinsurgSearchResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Torsion coefficients of the polynomial `a_0 + sum a_i (T^i + T^-i)` given
/// as `coeffs[0..len]`. Fails with `NotAdmissible` unless it is the
/// polynomial of an L-space knot, with `*out_len` set to 0.
///
/// # Safety
/// `coeffs` valid for `len` reads, `buf` for `cap` writes, `out_len` for a write.
#[no_mangle]
pub unsafe extern "C" fn finsurg_tseq_from_alexander(
    coeffs: *const i64,
    len: usize,
    buf: *mut u32,
    cap: usize,
    out_len: *mut usize,
) -> FinsurgStatus {
    if coeffs.is_null() || out_len.is_null() {
        return fail(FinsurgStatus::NullPointer, "null pointer argument");
    }
    let coeffs = std::slice::from_raw_parts(coeffs, len).to_vec();
    *out_len = 0;
    guard(|| {
        let poly = match AlexanderPoly::new(coeffs) {
            Ok(p) => p,
            Err(e) => return from_error(e),
        };
        match TSequence::new(&torsion_values(&poly)) {
            Ok(t) => write_u32s(t.as_slice(), buf, cap, out_len),
            Err(e) => from_error(e),
        }
    })
}
