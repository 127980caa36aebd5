//! C ABI for `polynum`.
//!
//! Number systems live behind an opaque [`PolynumSystem`] handle created by
//! [`polynum_system_new`] and released with [`polynum_system_free`]. Every
//! fallible call returns a [`PolynumStatus`]; on failure a description is
//! available from [`polynum_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use polynum::numsys::{verify_number_system, Expansion, Verdict, DEFAULT_SEARCH_SLACK};
use polynum::spectra::{count_region, region_bounds, DEFAULT_BUDGET};
use polynum::{Error, IntPoly, ModulusContext, NumberSystem};

/// Result codes shared by every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolynumStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    /// The requested operation failed for mathematical reasons (cycle,
    /// step cap, non-convergent roots, ...).
    DomainError = 3,
    BufferTooSmall = 4,
    /// A value does not fit in 64 bits.
    Overflow = 5,
    /// Work estimate exceeded the configured budget.
    Budget = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolynumVerdict {
    Yes = 0,
    No = 1,
    Inconclusive = 2,
}

/// Opaque number system handle.
pub struct PolynumSystem {
    ns: NumberSystem,
    poly: IntPoly,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: PolynumStatus, msg: &str) -> PolynumStatus {
    set_error(msg);
    status
}

fn status_of(e: &Error) -> PolynumStatus {
    match e {
        Error::Budget { .. } => PolynumStatus::Budget,
        Error::NotMonic(_)
        | Error::Constant
        | Error::InvalidDigits(_)
        | Error::DigitNotInSet(_)
        | Error::InvalidParameter(_)
        | Error::Parse(_) => PolynumStatus::InvalidInput,
        _ => PolynumStatus::DomainError,
    }
}

fn guard(f: impl FnOnce() -> PolynumStatus) -> PolynumStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == PolynumStatus::Ok {
                set_error("");
            }
            s
        }
        Err(_) => fail(PolynumStatus::Panic, "internal panic"),
    }
}

unsafe fn input<'a>(p: *const i64, len: usize) -> Option<&'a [i64]> {
    if len == 0 {
        Some(&[])
    } else if p.is_null() {
        None
    } else {
        Some(slice::from_raw_parts(p, len))
    }
}

/// Builds a number system from ascending modulus coefficients (monic,
/// `poly_len = degree + 1`) and a digit set.
///
/// # Safety
/// `poly` and `digits` must point to `poly_len` and `digits_len` readable
/// values; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn polynum_system_new(
    poly: *const i64,
    poly_len: usize,
    digits: *const i64,
    digits_len: usize,
    out: *mut *mut PolynumSystem,
) -> PolynumStatus {
    guard(|| {
        if out.is_null() {
            return fail(PolynumStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        let (Some(p), Some(d)) = (input(poly, poly_len), input(digits, digits_len)) else {
            return fail(PolynumStatus::NullPointer, "coefficient or digit pointer is null");
        };
        let poly = IntPoly::from_i64s(p);
        let built = ModulusContext::new(poly.clone()).and_then(|ctx| NumberSystem::new(ctx, d.to_vec()));
        match built {
            Ok(ns) => {
                *out = Box::into_raw(Box::new(PolynumSystem { ns, poly }));
                PolynumStatus::Ok
            }
            Err(e) => fail(status_of(&e), &e.to_string()),
        }
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `system` must come from [`polynum_system_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn polynum_system_free(system: *mut PolynumSystem) {
    if !system.is_null() {
        drop(Box::from_raw(system));
    }
}

/// Degree `n` of the modulus, or 0 for a null handle.
///
/// # Safety
/// `system` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn polynum_system_degree(system: *const PolynumSystem) -> usize {
    system.as_ref().map_or(0, |s| s.ns.ctx().degree())
}

/// Decides whether the handle's pair is a number system.
///
/// # Safety
/// `system` must be a live handle and `verdict` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn polynum_verify(
    system: *const PolynumSystem,
    verdict: *mut PolynumVerdict,
) -> PolynumStatus {
    guard(|| {
        let (Some(s), false) = (system.as_ref(), verdict.is_null()) else {
            return fail(PolynumStatus::NullPointer, "null argument");
        };
        match verify_number_system(&s.poly, s.ns.digits(), DEFAULT_SEARCH_SLACK, DEFAULT_BUDGET) {
            Ok(r) => {
                *verdict = match r.verdict {
                    Verdict::Yes => PolynumVerdict::Yes,
                    Verdict::No => PolynumVerdict::No,
                    Verdict::Inconclusive => PolynumVerdict::Inconclusive,
                };
                PolynumStatus::Ok
            }
            Err(e @ Error::Budget { .. }) => {
                *verdict = PolynumVerdict::Inconclusive;
                fail(PolynumStatus::Budget, &e.to_string())
            }
            Err(e) => fail(status_of(&e), &e.to_string()),
        }
    })
}

/// Digit expansion of the element with ascending coefficients `element`.
/// Writes up to `capacity` digits and always stores the full length in
/// `out_len`; returns `BufferTooSmall` if `capacity` is insufficient.
///
/// # Safety
/// Pointers must be valid for the stated lengths; `out_digits` may be null
/// only when `capacity` is 0.
#[no_mangle]
pub unsafe extern "C" fn polynum_expand(
    system: *const PolynumSystem,
    element: *const i64,
    element_len: usize,
    out_digits: *mut i64,
    capacity: usize,
    out_len: *mut usize,
) -> PolynumStatus {
    guard(|| {
        let (Some(s), Some(g), false) = (system.as_ref(), input(element, element_len), out_len.is_null()) else {
            return fail(PolynumStatus::NullPointer, "null argument");
        };
        let g = s.ns.ctx().reduce(&IntPoly::from_i64s(g));
        match s.ns.expand(&g, None) {
            Ok(e) => {
                *out_len = e.digits.len();
                if e.digits.len() > capacity {
                    return fail(PolynumStatus::BufferTooSmall, "digit buffer too small");
                }
                if !e.digits.is_empty() {
                    if out_digits.is_null() {
                        return fail(PolynumStatus::NullPointer, "out_digits is null");
                    }
                    slice::from_raw_parts_mut(out_digits, e.digits.len()).copy_from_slice(&e.digits);
                }
                PolynumStatus::Ok
            }
            Err(e) => fail(status_of(&e), &e.to_string()),
        }
    })
}

/// Evaluates a digit string; writes the `n` canonical coefficients.
///
/// # Safety
/// `digits` must hold `digits_len` values and `out_coeffs` room for
/// `polynum_system_degree(system)` values.
#[no_mangle]
pub unsafe extern "C" fn polynum_evaluate(
    system: *const PolynumSystem,
    digits: *const i64,
    digits_len: usize,
    out_coeffs: *mut i64,
) -> PolynumStatus {
    guard(|| {
        let (Some(s), Some(d), false) = (system.as_ref(), input(digits, digits_len), out_coeffs.is_null()) else {
            return fail(PolynumStatus::NullPointer, "null argument");
        };
        let r = match s.ns.evaluate(&Expansion { digits: d.to_vec() }) {
            Ok(r) => r,
            Err(e) => return fail(status_of(&e), &e.to_string()),
        };
        let coeffs: Option<Vec<i64>> = r.coeffs().iter().map(BigInt::to_i64).collect();
        match coeffs {
            Some(c) => {
                slice::from_raw_parts_mut(out_coeffs, c.len()).copy_from_slice(&c);
                PolynumStatus::Ok
            }
            None => fail(PolynumStatus::Overflow, "coefficient exceeds 64 bits"),
        }
    })
}

/// `#R(T)` and `#R(T)/T^n`.
///
/// # Safety
/// `system` must be a live handle; output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn polynum_count_region(
    system: *const PolynumSystem,
    t: f64,
    out_count: *mut u64,
    out_normalized: *mut f64,
) -> PolynumStatus {
    guard(|| {
        let (Some(s), false, false) = (system.as_ref(), out_count.is_null(), out_normalized.is_null()) else {
            return fail(PolynumStatus::NullPointer, "null argument");
        };
        let ctx = s.ns.ctx();
        match region_bounds(t, ctx).and_then(|r| count_region(ctx, &r, DEFAULT_BUDGET)) {
            Ok(c) => {
                *out_count = c.count;
                *out_normalized = c.normalized;
                PolynumStatus::Ok
            }
            Err(e) => fail(status_of(&e), &e.to_string()),
        }
    })
}

/// Message for the most recent failure on this thread (empty after a
/// success). Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn polynum_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn polynum_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
