//! C ABI over `syzygy-cert`.
//!
//! Every function returns a [`SyzStatus`]. On failure a message is kept per
//! thread and can be read with [`syz_last_error_message`]. Strings returned
//! through out-parameters are owned by the caller and must be released with
//! [`syz_string_free`]; certificates with [`syz_certificate_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use syzygy_cert::arith::Prime;
use syzygy_cert::criteria::{self, Case, Certificate, ThresholdQuery, Verdict};
use syzygy_cert::{Error, Rat};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyzStatus {
    Ok = 0,
    InvalidArgument = 1,
    NullPointer = 2,
    CaseNotApplicable = 3,
    EnumerationOverflow = 4,
    ScanLimit = 5,
    Internal = 6,
}

/// Matched case; `None` means no case hypotheses hold.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyzCase {
    None = 0,
    P2 = 1,
    TwoDigit = 2,
    LowDegree = 3,
    SmallP = 4,
    LargeP = 5,
    RemarkCase = 6,
}

impl From<Option<Case>> for SyzCase {
    fn from(c: Option<Case>) -> Self {
        match c {
            None => SyzCase::None,
            Some(Case::P2) => SyzCase::P2,
            Some(Case::TwoDigit) => SyzCase::TwoDigit,
            Some(Case::LowDegree) => SyzCase::LowDegree,
            Some(Case::SmallP) => SyzCase::SmallP,
            Some(Case::LargeP) => SyzCase::LargeP,
            Some(Case::RemarkCase) => SyzCase::RemarkCase,
        }
    }
}

/// Opaque certificate handle.
pub struct SyzCertificate {
    inner: Certificate,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: SyzStatus, msg: impl Into<String>) -> SyzStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> SyzStatus {
    let status = match e {
        Error::CaseNotApplicable(_) => SyzStatus::CaseNotApplicable,
        Error::EnumerationOverflow { .. } => SyzStatus::EnumerationOverflow,
        Error::ScanLimit { .. } => SyzStatus::ScanLimit,
        _ => SyzStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

/// Runs `f`, clearing the last error first and turning panics into `Internal`.
fn guard(f: impl FnOnce() -> Result<(), SyzStatus>) -> SyzStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SyzStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(SyzStatus::Internal, "internal panic"),
    }
}

fn prime(p: u64) -> Result<Prime, SyzStatus> {
    Prime::new(p).map_err(from_error)
}

fn nonnull<T>(p: *const T, what: &str) -> Result<(), SyzStatus> {
    if p.is_null() {
        Err(fail(SyzStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

fn to_c_string(s: String) -> Result<*mut c_char, SyzStatus> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| fail(SyzStatus::Internal, "string contains a nul byte"))
}

/// Classifies `(n, p, d)` by case hypotheses alone.
///
/// # Safety
/// `out_case` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn syz_classify(n: u64, p: u64, d: u64, out_case: *mut SyzCase) -> SyzStatus {
    guard(|| {
        nonnull(out_case, "out_case")?;
        let v = criteria::classify(n, prime(p)?, d).map_err(from_error)?;
        *out_case = SyzCase::from(v.case());
        Ok(())
    })
}

/// Builds the certificate for `(n, p, d)`.
///
/// # Safety
/// `out` must be null or valid for writes. The handle written there must be
/// released with `syz_certificate_free`.
#[no_mangle]
pub unsafe extern "C" fn syz_certify(
    n: u64,
    p: u64,
    d: u64,
    out: *mut *mut SyzCertificate,
) -> SyzStatus {
    guard(|| {
        nonnull(out, "out")?;
        let inner = criteria::certify_case(n, prime(p)?, d).map_err(from_error)?;
        *out = Box::into_raw(Box::new(SyzCertificate { inner }));
        Ok(())
    })
}

fn with_cert<R>(
    cert: *const SyzCertificate,
    out: *mut R,
    f: impl FnOnce(&Certificate) -> Result<R, SyzStatus>,
) -> SyzStatus {
    guard(|| {
        nonnull(cert, "certificate")?;
        nonnull(out, "out")?;
        // SAFETY: both checked non-null; validity is the caller's contract.
        unsafe {
            let value = f(&(*cert).inner)?;
            *out = value;
        }
        Ok(())
    })
}

/// Writes whether the verdict is stable.
///
/// # Safety
/// `cert` must come from `syz_certify` and not be freed; `out_stable` must be
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn syz_certificate_verdict(
    cert: *const SyzCertificate,
    out_stable: *mut bool,
) -> SyzStatus {
    with_cert(cert, out_stable, |c| Ok(c.verdict == Verdict::Stable))
}

/// Writes the matched case (`SYZ_CASE_NONE` when no hypotheses hold).
///
/// # Safety
/// As for `syz_certificate_verdict`.
#[no_mangle]
pub unsafe extern "C" fn syz_certificate_case(
    cert: *const SyzCertificate,
    out_case: *mut SyzCase,
) -> SyzStatus {
    with_cert(cert, out_case, |c| Ok(SyzCase::from(c.case)))
}

/// Writes whether every obligation holds.
///
/// # Safety
/// As for `syz_certificate_verdict`.
#[no_mangle]
pub unsafe extern "C" fn syz_certificate_all_hold(
    cert: *const SyzCertificate,
    out_all_hold: *mut bool,
) -> SyzStatus {
    with_cert(cert, out_all_hold, |c| Ok(c.all_hold))
}

/// # Safety
/// As for `syz_certificate_verdict`.
#[no_mangle]
pub unsafe extern "C" fn syz_certificate_obligation_count(
    cert: *const SyzCertificate,
    out_count: *mut usize,
) -> SyzStatus {
    with_cert(cert, out_count, |c| Ok(c.obligations.len()))
}

/// Serializes the certificate to JSON.
///
/// # Safety
/// As for `syz_certificate_verdict`; the string written to `out_json` must be
/// released with `syz_string_free`.
#[no_mangle]
pub unsafe extern "C" fn syz_certificate_to_json(
    cert: *const SyzCertificate,
    out_json: *mut *mut c_char,
) -> SyzStatus {
    with_cert(cert, out_json, |c| {
        let json =
            serde_json::to_string(c).map_err(|e| fail(SyzStatus::Internal, e.to_string()))?;
        to_c_string(json)
    })
}

/// # Safety
/// `cert` must be null or a handle from `syz_certify` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn syz_certificate_free(cert: *mut SyzCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn syz_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Writes `{"lower": "a/b", "upper": "c/d"}` for the dual's `mu_max`.
///
/// # Safety
/// `out_json` must be valid for writes; release the result with `syz_string_free`.
#[no_mangle]
pub unsafe extern "C" fn syz_mu_max_bounds(
    n: u64,
    d: u64,
    out_json: *mut *mut c_char,
) -> SyzStatus {
    guard(|| {
        nonnull(out_json, "out_json")?;
        let b = criteria::mu_max_bounds(n, d).map_err(from_error)?;
        let json =
            serde_json::to_string(&b).map_err(|e| fail(SyzStatus::Internal, e.to_string()))?;
        *out_json = to_c_string(json)?;
        Ok(())
    })
}

/// Restriction-degree threshold scan. `disc` is a rational such as `"2"` or `"7/2"`.
///
/// # Safety
/// `disc` must be a valid nul-terminated string; the out-pointers must be
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn syz_threshold(
    n: u64,
    r: u64,
    hn: u64,
    disc: *const c_char,
    horizon: u64,
    out_first_pass: *mut u64,
    out_stable_from: *mut u64,
) -> SyzStatus {
    guard(|| {
        nonnull(disc, "disc")?;
        nonnull(out_first_pass, "out_first_pass")?;
        nonnull(out_stable_from, "out_stable_from")?;
        let text = CStr::from_ptr(disc)
            .to_str()
            .map_err(|_| fail(SyzStatus::InvalidArgument, "disc is not UTF-8"))?;
        let disc: Rat = text.parse().map_err(from_error)?;
        let q = ThresholdQuery {
            n,
            r,
            hn,
            disc,
            horizon,
        };
        let res = criteria::restriction_threshold(&q).map_err(from_error)?;
        *out_first_pass = res.first_pass;
        *out_stable_from = res.stable_from;
        Ok(())
    })
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn syz_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn syz_version() -> *const c_char {
    static VERSION: &CStr =
        match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
            Ok(v) => v,
            Err(_) => panic!("version string"),
        };
    VERSION.as_ptr()
}
