//! C interface to `quasigap`.
//!
//! Every fallible call returns a [`QgStatus`]; on failure a message is kept per
//! thread and can be read with [`qg_last_error`]. Strings handed out by the
//! library must be released with [`qg_string_free`], schemes with
//! [`qg_scheme_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use quasigap::exactnum::Surd;
use quasigap::patches::PatchType;
use quasigap::scheme::{Omega, OmegaConfig, Scheme, SchemeConfig};
use quasigap::steinhaus::circle_partition;
use quasigap::windowpartition::{analytic_spectrum, write_table};
use quasigap::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QgStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    /// Malformed configuration, literal or parameter.
    Config = 3,
    /// A lattice point on the window boundary or an undecidable comparison.
    Singular = 4,
    /// Any other library error.
    Failed = 5,
    Panic = 6,
}

/// Opaque handle to a built scheme.
pub struct QgScheme {
    inner: Scheme,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> QgStatus {
    match e.exit_code() {
        3 => QgStatus::Singular,
        _ => match e {
            Error::Parse { .. } | Error::Config(_) | Error::InvalidParameter(_) => QgStatus::Config,
            _ => QgStatus::Failed,
        },
    }
}

fn guarded(f: impl FnOnce() -> Result<(), QgStatus>) -> QgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QgStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside quasigap");
            QgStatus::Panic
        }
    }
}

fn fail(e: Error) -> QgStatus {
    set_error(e.to_string());
    status_of(&e)
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, QgStatus> {
    if s.is_null() {
        set_error("null string argument");
        return Err(QgStatus::NullArgument);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string is not valid UTF-8");
        QgStatus::InvalidUtf8
    })
}

unsafe fn scheme<'a>(s: *const QgScheme) -> Result<&'a Scheme, QgStatus> {
    s.as_ref().map(|s| &s.inner).ok_or_else(|| {
        set_error("null scheme handle");
        QgStatus::NullArgument
    })
}

fn non_null<T>(p: *mut T) -> Result<(), QgStatus> {
    if p.is_null() {
        set_error("null output pointer");
        return Err(QgStatus::NullArgument);
    }
    Ok(())
}

/// Message of the last failure on this thread, or null. Valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn qg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds a scheme from its JSON configuration.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qg_scheme_from_json(json: *const c_char, out: *mut *mut QgScheme) -> QgStatus {
    guarded(|| {
        non_null(out)?;
        let cfg = SchemeConfig::from_json(text(json)?).map_err(fail)?;
        let inner = Scheme::build(&cfg).map_err(fail)?;
        *out = Box::into_raw(Box::new(QgScheme { inner }));
        Ok(())
    })
}

/// # Safety
/// `s` must come from [`qg_scheme_from_json`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qg_scheme_free(s: *mut QgScheme) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of lattice lifts per physical lattice point (`|det B|`).
///
/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qg_scheme_index(s: *const QgScheme, out: *mut u64) -> QgStatus {
    guarded(|| {
        non_null(out)?;
        *out = scheme(s)?.index();
        Ok(())
    })
}

/// Whether the lattice point `n` (length `k`) is accepted by the window.
///
/// # Safety
/// `n` must point to `len` integers and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qg_scheme_accept(s: *const QgScheme, n: *const i64, len: usize, out: *mut bool) -> QgStatus {
    guarded(|| {
        non_null(out)?;
        let sc = scheme(s)?;
        if n.is_null() {
            set_error("null point");
            return Err(QgStatus::NullArgument);
        }
        let n = std::slice::from_raw_parts(n, len);
        if len != sc.k() {
            set_error(format!("point has {len} coordinates, scheme has k = {}", sc.k()));
            return Err(QgStatus::Config);
        }
        *out = sc.accept(n).map_err(fail)?;
        Ok(())
    })
}

/// Analytic spectrum at radius `r` for the closed unit cube, as a CSV table
/// (header plus one row). Release the result with [`qg_string_free`].
///
/// # Safety
/// `r` must be a nul-terminated literal and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qg_spectrum_csv(
    s: *const QgScheme,
    r: *const c_char,
    patch_type: u8,
    out: *mut *mut c_char,
) -> QgStatus {
    guarded(|| {
        non_null(out)?;
        let sc = scheme(s)?;
        let r = Surd::parse(text(r)?).map_err(fail)?;
        let t = PatchType::from_number(patch_type).map_err(fail)?;
        let omega = Omega::from_config(&OmegaConfig::ClosedHypercube, sc.d()).map_err(fail)?;
        let spec = analytic_spectrum(sc, &r, t, &omega).map_err(fail)?;
        let mut buf = Vec::new();
        write_table(&[spec.summary()], 12, &mut buf).map_err(fail)?;
        *out = CString::new(buf).expect("csv has no nul").into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Number of distinct gap lengths left by `{n alpha mod 1 : 1 <= n <= N}`.
///
/// # Safety
/// `alpha` must be a nul-terminated literal and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qg_steinhaus_gap_count(alpha: *const c_char, n: u64, out: *mut u32) -> QgStatus {
    guarded(|| {
        non_null(out)?;
        let a = Surd::parse(text(alpha)?).map_err(fail)?;
        *out = circle_partition(&a, n).map_err(fail)?.gaps().len() as u32;
        Ok(())
    })
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn qg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
