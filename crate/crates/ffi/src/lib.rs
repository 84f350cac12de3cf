//! C ABI for `zerodensity`.
//!
//! Objects are opaque handles created by `zd_*_load`/`zd_newton_scan` and
//! released with the matching `zd_*_free`. Every fallible call returns a
//! [`ZdStatus`]; on failure `zd_last_error_message` describes the error
//! (per thread, valid until the next failing call on that thread).

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use zerodensity::ball::{ComplexBall, NumError};
use zerodensity::fmodel::{zero_free_check, ExpSum, ModelError, ZeroFreeVerdict};
use zerodensity::rigor::{verify_certificate, Certificate};
use zerodensity::search::{newton_scan, Candidate, FloatSum, ScanParams};
use zerodensity::zeros::ZeroTable;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Io = 3,
    Parse = 4,
    Table = 5,
    Inconclusive = 6,
    Numeric = 7,
    Panic = 8,
}

/// A loaded zero table.
pub struct ZdTable(ZeroTable);

/// Ranked candidates from a Newton scan.
pub struct ZdCandidates(Vec<Candidate>);

/// A parsed certificate.
pub struct ZdCertificate(Certificate);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl std::fmt::Display) {
    let text = CString::new(msg.to_string().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn fail(status: ZdStatus, msg: impl std::fmt::Display) -> ZdStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> ZdStatus) -> ZdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(ZdStatus::Panic, "internal panic"),
    }
}

fn model_status(e: &ModelError) -> ZdStatus {
    match e {
        ModelError::Num(NumError::Inconclusive(_)) => ZdStatus::Inconclusive,
        ModelError::Table(_) => ZdStatus::Table,
        ModelError::InvalidArgument(_) => ZdStatus::InvalidArgument,
        _ => ZdStatus::Numeric,
    }
}

unsafe fn c_str<'a>(p: *const c_char) -> Result<&'a str, ZdStatus> {
    if p.is_null() {
        return Err(fail(ZdStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(ZdStatus::InvalidArgument, "string is not UTF-8"))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn zd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failure on this thread; empty if none.
#[no_mangle]
pub extern "C" fn zd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Loads a zero table. `declared_error` may be NULL to use the file header.
///
/// # Safety
/// `path` must be a NUL-terminated string, `declared_error` NULL or one, and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zd_table_load(path: *const c_char, declared_error: *const c_char, out: *mut *mut ZdTable) -> ZdStatus {
    guard(|| {
        if out.is_null() {
            return fail(ZdStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        let path = match c_str(path) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let err = if declared_error.is_null() {
            None
        } else {
            match c_str(declared_error) {
                Ok(e) => Some(e),
                Err(s) => return s,
            }
        };
        match ZeroTable::load(path, err) {
            Ok(t) => {
                *out = Box::into_raw(Box::new(ZdTable(t)));
                ZdStatus::Ok
            }
            Err(e @ zerodensity::zeros::TableError::Io { .. }) => fail(ZdStatus::Io, e),
            Err(e) => fail(ZdStatus::Parse, e),
        }
    })
}

/// # Safety
/// `table` must come from `zd_table_load` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn zd_table_free(table: *mut ZdTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// # Safety
/// `table` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn zd_table_len(table: *const ZdTable, out: *mut usize) -> ZdStatus {
    if table.is_null() || out.is_null() {
        return fail(ZdStatus::NullPointer, "null argument");
    }
    *out = (*table).0.len();
    ZdStatus::Ok
}

/// The `n`-th ordinate (1-based) rounded to double.
///
/// # Safety
/// `table` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn zd_table_ordinate(table: *const ZdTable, n: usize, out: *mut f64) -> ZdStatus {
    if table.is_null() || out.is_null() {
        return fail(ZdStatus::NullPointer, "null argument");
    }
    match (*table).0.zero(n) {
        Ok(z) => {
            *out = z.ordinate.to_f64();
            ZdStatus::Ok
        }
        Err(e) => fail(ZdStatus::Table, e),
    }
}

/// Writes the sha256 hex digest of the table file (64 chars plus NUL) into
/// `buf`, which must hold at least 65 bytes.
///
/// # Safety
/// `table` must be a live handle and `buf` writable for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn zd_table_digest(table: *const ZdTable, buf: *mut c_char, len: usize) -> ZdStatus {
    if table.is_null() || buf.is_null() {
        return fail(ZdStatus::NullPointer, "null argument");
    }
    let d = (*table).0.source_digest().as_bytes();
    if len < d.len() + 1 {
        return fail(ZdStatus::InvalidArgument, "buffer shorter than 65 bytes");
    }
    ptr::copy_nonoverlapping(d.as_ptr().cast::<c_char>(), buf, d.len());
    *buf.add(d.len()) = 0;
    ZdStatus::Ok
}

/// Encloses `F_N(re + i im)` at `prec` bits. Writes the midpoint to
/// `out_re`/`out_im` and a bound on the distance to the true value in
/// `out_rad` (all rounded to double; the radius rounded up).
///
/// # Safety
/// `table` must be a live handle and the out pointers valid.
#[no_mangle]
pub unsafe extern "C" fn zd_eval_fn(
    table: *const ZdTable,
    n: usize,
    re: f64,
    im: f64,
    prec: u32,
    out_re: *mut f64,
    out_im: *mut f64,
    out_rad: *mut f64,
) -> ZdStatus {
    guard(|| {
        if table.is_null() || out_re.is_null() || out_im.is_null() || out_rad.is_null() {
            return fail(ZdStatus::NullPointer, "null argument");
        }
        if !(64..=8192).contains(&prec) || !re.is_finite() || !im.is_finite() {
            return fail(ZdStatus::InvalidArgument, "need finite z and 64 <= prec <= 8192");
        }
        let sum = match ExpSum::from_table(&(*table).0, n, prec) {
            Ok(s) => s,
            Err(e) => return fail(ZdStatus::Table, e),
        };
        let v = sum.eval(&ComplexBall::from_f64(prec, re, im));
        let (r, i) = (v.re.to_f64(), v.im.to_f64());
        let spread_re = (v.re.upper_f64() - r).max(r - v.re.lower_f64());
        let spread_im = (v.im.upper_f64() - i).max(i - v.im.lower_f64());
        *out_re = r;
        *out_im = i;
        *out_rad = spread_re.hypot(spread_im) * (1.0 + f64::EPSILON);
        ZdStatus::Ok
    })
}

/// First-term domination test on `Im z = y0` with `k` explicit zeros.
/// `zero_free` is set to 1 when certified, 0 when inconclusive.
///
/// # Safety
/// `table` must be a live handle and the out pointers valid.
#[no_mangle]
pub unsafe extern "C" fn zd_zero_free_check(
    table: *const ZdTable,
    y0: f64,
    k: usize,
    prec: u32,
    zero_free: *mut c_int,
    first_term_lower: *mut f64,
    remainder_upper: *mut f64,
) -> ZdStatus {
    guard(|| {
        if table.is_null() || zero_free.is_null() || first_term_lower.is_null() || remainder_upper.is_null() {
            return fail(ZdStatus::NullPointer, "null argument");
        }
        if !(64..=8192).contains(&prec) || !y0.is_finite() {
            return fail(ZdStatus::InvalidArgument, "need finite y0 and 64 <= prec <= 8192");
        }
        let y = zerodensity::ball::RealBall::from_f64(prec, y0);
        match zero_free_check(&(*table).0, &y, k, prec) {
            Ok(r) => {
                *zero_free = c_int::from(r.verdict == ZeroFreeVerdict::ZeroFree);
                *first_term_lower = r.first_term.lower_f64();
                *remainder_upper = r.remainder().upper_f64();
                ZdStatus::Ok
            }
            Err(e) => fail(model_status(&e), e),
        }
    })
}

/// Newton scan of `F_{n_search}` from `t + 0.04 i`, `t` in `[t_min, t_max]`
/// with step 0.1, 25 iterations and a 0.085 cap on `Im z`.
///
/// # Safety
/// `table` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn zd_newton_scan(
    table: *const ZdTable,
    n_search: usize,
    t_min: f64,
    t_max: f64,
    out: *mut *mut ZdCandidates,
) -> ZdStatus {
    guard(|| {
        if table.is_null() || out.is_null() {
            return fail(ZdStatus::NullPointer, "null argument");
        }
        *out = ptr::null_mut();
        let sum = match FloatSum::from_table(&(*table).0, n_search) {
            Ok(s) => s,
            Err(e) => return fail(ZdStatus::Table, e),
        };
        match newton_scan(&sum, &ScanParams::window(t_min, t_max)) {
            Ok(c) => {
                *out = Box::into_raw(Box::new(ZdCandidates(c)));
                ZdStatus::Ok
            }
            Err(e) => fail(ZdStatus::InvalidArgument, e),
        }
    })
}

/// # Safety
/// `cands` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn zd_candidates_len(cands: *const ZdCandidates) -> usize {
    if cands.is_null() {
        0
    } else {
        (*cands).0.len()
    }
}

/// Position of the `i`-th candidate (0-based, best first).
///
/// # Safety
/// `cands` must be a live handle and the out pointers valid.
#[no_mangle]
pub unsafe extern "C" fn zd_candidates_get(cands: *const ZdCandidates, i: usize, re: *mut f64, im: *mut f64) -> ZdStatus {
    if cands.is_null() || re.is_null() || im.is_null() {
        return fail(ZdStatus::NullPointer, "null argument");
    }
    let list: &[Candidate] = &(*cands).0;
    match list.get(i) {
        Some(c) => {
            *re = c.position.re;
            *im = c.position.im;
            ZdStatus::Ok
        }
        None => fail(ZdStatus::InvalidArgument, "candidate index out of range"),
    }
}

/// # Safety
/// `cands` must come from `zd_newton_scan` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn zd_candidates_free(cands: *mut ZdCandidates) {
    if !cands.is_null() {
        drop(Box::from_raw(cands));
    }
}

/// Reads a JSON certificate.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn zd_certificate_load(path: *const c_char, out: *mut *mut ZdCertificate) -> ZdStatus {
    guard(|| {
        if out.is_null() {
            return fail(ZdStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        let path = match c_str(path) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return fail(ZdStatus::Io, format!("{path}: {e}")),
        };
        match Certificate::from_json(&text) {
            Ok(c) => {
                *out = Box::into_raw(Box::new(ZdCertificate(c)));
                ZdStatus::Ok
            }
            Err(e) => fail(ZdStatus::Parse, e),
        }
    })
}

/// Re-checks the certificate; `passed` is 1 when every check holds. The
/// first failing check is available through `zd_last_error_message`.
///
/// # Safety
/// `cert` must be a live handle and `passed` valid.
#[no_mangle]
pub unsafe extern "C" fn zd_certificate_verify(cert: *const ZdCertificate, passed: *mut c_int) -> ZdStatus {
    guard(|| {
        if cert.is_null() || passed.is_null() {
            return fail(ZdStatus::NullPointer, "null argument");
        }
        let report = verify_certificate(&(*cert).0);
        *passed = c_int::from(report.passed());
        if let Some(f) = report.failures().next() {
            set_error(format!("{}: {}", f.name, f.detail));
        }
        ZdStatus::Ok
    })
}

/// # Safety
/// `cert` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn zd_certificate_q0(cert: *const ZdCertificate, out: *mut u64) -> ZdStatus {
    if cert.is_null() || out.is_null() {
        return fail(ZdStatus::NullPointer, "null argument");
    }
    *out = (*cert).0.q0;
    ZdStatus::Ok
}

/// Certified lower bound for `2 kappa`, rounded down to double.
///
/// # Safety
/// `cert` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn zd_certificate_two_kappa_lower(cert: *const ZdCertificate, out: *mut f64) -> ZdStatus {
    if cert.is_null() || out.is_null() {
        return fail(ZdStatus::NullPointer, "null argument");
    }
    let c = &(*cert).0;
    match c.ball(&c.two_kappa_lower) {
        Ok(b) => {
            *out = b.lower_f64();
            ZdStatus::Ok
        }
        Err(e) => fail(ZdStatus::Parse, e),
    }
}

/// # Safety
/// `cert` must come from `zd_certificate_load` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn zd_certificate_free(cert: *mut ZdCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}
