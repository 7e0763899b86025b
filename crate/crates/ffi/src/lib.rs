//! C ABI for the exact parts of `surfconv`: coefficient matrices, the
//! minor condition, the surface forms and the exponent region.
//!
//! Every function returns a [`SurfconvStatus`]; on failure a message is kept
//! per thread and can be read with [`surfconv_last_error_message`].
//! Handles are opaque and must be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_traits::ToPrimitive;
use surfconv::exponent::{ExponentPair, Membership, TypeSet};
use surfconv::rational::{self, Rational};
use surfconv::surface::{self, CoefficientMatrix};
use surfconv::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfconvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidDimension = 3,
    SingularSubmatrix = 4,
    Precondition = 5,
    Overflow = 6,
    Internal = 7,
    Panic = 8,
}

pub struct SurfconvMatrix {
    inner: CoefficientMatrix,
}

pub struct SurfconvTypeSet {
    inner: TypeSet,
}

/// Result of the minor check. `min_abs_det` is `min_num / min_den` in lowest terms.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurfconvStarReport {
    pub holds: bool,
    pub min_num: i64,
    pub min_den: i64,
    /// Number of leading entries of the witness buffer that were written (0 or l).
    pub witness_len: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
}

fn status_of(e: &Error) -> SurfconvStatus {
    match e {
        Error::InvalidDimension(_) => SurfconvStatus::InvalidDimension,
        Error::InvalidExponent(_) | Error::Config { .. } | Error::Json(_) => SurfconvStatus::InvalidArgument,
        Error::SingularSubmatrix { .. } => SurfconvStatus::SingularSubmatrix,
        Error::Precondition(_) | Error::Degenerate(_) | Error::OutsideTypeSet(_) | Error::UndefinedShell { .. } => {
            SurfconvStatus::Precondition
        }
        _ => SurfconvStatus::Internal,
    }
}

fn fail(status: SurfconvStatus, msg: impl Into<String>) -> SurfconvStatus {
    set_error(msg);
    status
}

fn guard<F: FnOnce() -> Result<(), SurfconvStatus>>(f: F) -> SurfconvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SurfconvStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(SurfconvStatus::Panic, "panic inside surfconv"),
    }
}

fn lift<T>(r: surfconv::Result<T>) -> Result<T, SurfconvStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), SurfconvStatus> {
    if p.is_null() {
        Err(fail(SurfconvStatus::NullPointer, format!("`{name}` is null")))
    } else {
        Ok(())
    }
}

fn rational_parts(r: &Rational) -> Result<(i64, i64), SurfconvStatus> {
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(n), Some(d)) => Ok((n, d)),
        _ => Err(fail(SurfconvStatus::Overflow, format!("{r} does not fit in 64-bit parts"))),
    }
}

fn make_rational(num: i64, den: i64) -> Result<Rational, SurfconvStatus> {
    if den == 0 {
        return Err(fail(SurfconvStatus::InvalidArgument, "zero denominator"));
    }
    Ok(rational::rat(num, den))
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn surfconv_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// NUL-terminated crate version; static storage.
#[no_mangle]
pub extern "C" fn surfconv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a `k x l` matrix from row-major numerators and denominators.
///
/// # Safety
/// `num` and `den` must point to `k * l` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn surfconv_matrix_new(
    k: usize,
    l: usize,
    num: *const i64,
    den: *const i64,
    out: *mut *mut SurfconvMatrix,
) -> SurfconvStatus {
    guard(|| {
        non_null(out, "out")?;
        non_null(num, "num")?;
        non_null(den, "den")?;
        let n = k.checked_mul(l).ok_or_else(|| fail(SurfconvStatus::InvalidDimension, "k * l overflows"))?;
        let nums = std::slice::from_raw_parts(num, n);
        let dens = std::slice::from_raw_parts(den, n);
        let entries = nums.iter().zip(dens).map(|(&a, &b)| make_rational(a, b)).collect::<Result<Vec<_>, _>>()?;
        let inner = lift(CoefficientMatrix::new(k, l, entries))?;
        *out = Box::into_raw(Box::new(SurfconvMatrix { inner }));
        Ok(())
    })
}

/// Parses the `{"k", "l", "entries": [[num, den], ...]}` matrix format.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn surfconv_matrix_from_json(json: *const c_char, out: *mut *mut SurfconvMatrix) -> SurfconvStatus {
    guard(|| {
        non_null(out, "out")?;
        non_null(json, "json")?;
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|_| fail(SurfconvStatus::InvalidArgument, "json is not UTF-8"))?;
        let value: serde_json::Value = lift(serde_json::from_str(text).map_err(Error::from))?;
        let inner = lift(CoefficientMatrix::from_json(&value))?;
        *out = Box::into_raw(Box::new(SurfconvMatrix { inner }));
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn surfconv_matrix_free(m: *mut SurfconvMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// `m` must be a live handle; `k` and `l` must be writable.
#[no_mangle]
pub unsafe extern "C" fn surfconv_matrix_dims(m: *const SurfconvMatrix, k: *mut usize, l: *mut usize) -> SurfconvStatus {
    guard(|| {
        non_null(m, "m")?;
        non_null(k, "k")?;
        non_null(l, "l")?;
        *k = (*m).inner.k();
        *l = (*m).inner.l();
        Ok(())
    })
}

/// Exact check that every `l x l` row-submatrix is nonsingular.
///
/// When it fails and `witness` is non-null, the lexicographically first
/// singular row set (0-based, `l` entries) is written there.
///
/// # Safety
/// `m` must be a live handle, `out` writable, and `witness` null or room for `l` values.
#[no_mangle]
pub unsafe extern "C" fn surfconv_check_star(
    m: *const SurfconvMatrix,
    out: *mut SurfconvStarReport,
    witness: *mut usize,
) -> SurfconvStatus {
    guard(|| {
        non_null(m, "m")?;
        non_null(out, "out")?;
        let r = surface::check_star(&(*m).inner);
        let (min_num, min_den) = rational_parts(&r.min_abs_det)?;
        let mut witness_len = 0;
        if let (Some(rows), false) = (&r.witness, witness.is_null()) {
            std::slice::from_raw_parts_mut(witness, rows.len()).copy_from_slice(rows);
            witness_len = rows.len();
        }
        *out = SurfconvStarReport { holds: r.holds, min_num, min_den, witness_len };
        Ok(())
    })
}

/// The constant `M` with `|zeta| <= M |(C zeta)_i|` on at least `k - l` rows.
///
/// # Safety
/// `m` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn surfconv_constant_m(m: *const SurfconvMatrix, out: *mut f64) -> SurfconvStatus {
    guard(|| {
        non_null(m, "m")?;
        non_null(out, "out")?;
        *out = lift(surface::constant_m(&(*m).inner))?;
        Ok(())
    })
}

unsafe fn input<'a>(p: *const f64, len: usize, want: usize, name: &str) -> Result<&'a [f64], SurfconvStatus> {
    non_null(p, name)?;
    if len != want {
        return Err(fail(SurfconvStatus::InvalidDimension, format!("`{name}` has {len} entries, expected {want}")));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn output<'a>(p: *mut f64, len: usize, want: usize) -> Result<&'a mut [f64], SurfconvStatus> {
    non_null(p, "out")?;
    if len != want {
        return Err(fail(SurfconvStatus::InvalidDimension, format!("`out` has {len} entries, expected {want}")));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

/// `Phi(y)`: `y` has `k` entries, `out` has `l`.
///
/// # Safety
/// Buffers must hold the stated number of doubles.
#[no_mangle]
pub unsafe extern "C" fn surfconv_phi(
    m: *const SurfconvMatrix,
    y: *const f64,
    y_len: usize,
    out: *mut f64,
    out_len: usize,
) -> SurfconvStatus {
    guard(|| {
        non_null(m, "m")?;
        let c = &(*m).inner;
        let y = input(y, y_len, c.k(), "y")?;
        output(out, out_len, c.l())?.copy_from_slice(&surface::phi(c, y));
        Ok(())
    })
}

/// `(L_1(x, y), ..., L_l(x, y))`.
///
/// # Safety
/// `x` and `y` hold `k` doubles, `out` holds `l`.
#[no_mangle]
pub unsafe extern "C" fn surfconv_bilinear(
    m: *const SurfconvMatrix,
    x: *const f64,
    y: *const f64,
    k: usize,
    out: *mut f64,
    out_len: usize,
) -> SurfconvStatus {
    guard(|| {
        non_null(m, "m")?;
        let c = &(*m).inner;
        let x = input(x, k, c.k(), "x")?;
        let y = input(y, k, c.k(), "y")?;
        output(out, out_len, c.l())?.copy_from_slice(&surface::bilinear(c, x, y));
        Ok(())
    })
}

/// `y * (C zeta)` entrywise.
///
/// # Safety
/// `y` holds `k` doubles, `zeta` holds `l`, `out` holds `k`.
#[no_mangle]
pub unsafe extern "C" fn surfconv_adjoint(
    m: *const SurfconvMatrix,
    y: *const f64,
    y_len: usize,
    zeta: *const f64,
    zeta_len: usize,
    out: *mut f64,
    out_len: usize,
) -> SurfconvStatus {
    guard(|| {
        non_null(m, "m")?;
        let c = &(*m).inner;
        let y = input(y, y_len, c.k(), "y")?;
        let zeta = input(zeta, zeta_len, c.l(), "zeta")?;
        output(out, out_len, c.k())?.copy_from_slice(&surface::adjoint(c, y, zeta));
        Ok(())
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn surfconv_typeset_new(k: u32, d: u32, out: *mut *mut SurfconvTypeSet) -> SurfconvStatus {
    guard(|| {
        non_null(out, "out")?;
        let inner = lift(TypeSet::new(k, d))?;
        *out = Box::into_raw(Box::new(SurfconvTypeSet { inner }));
        Ok(())
    })
}

/// # Safety
/// `ts` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn surfconv_typeset_free(ts: *mut SurfconvTypeSet) {
    if !ts.is_null() {
        drop(Box::from_raw(ts));
    }
}

/// Vertex `index` (0, 1 or 2) as `1/p = p_num/p_den`, `1/q = q_num/q_den`.
///
/// # Safety
/// `ts` must be a live handle; `out` must have room for 4 values
/// (`p_num, p_den, q_num, q_den`).
#[no_mangle]
pub unsafe extern "C" fn surfconv_typeset_vertex(ts: *const SurfconvTypeSet, index: usize, out: *mut i64) -> SurfconvStatus {
    guard(|| {
        non_null(ts, "ts")?;
        non_null(out, "out")?;
        let v = (*ts)
            .inner
            .vertices
            .get(index)
            .ok_or_else(|| fail(SurfconvStatus::InvalidArgument, format!("vertex index {index} out of range")))?;
        let (pn, pd) = rational_parts(&v.inv_p)?;
        let (qn, qd) = rational_parts(&v.inv_q)?;
        std::slice::from_raw_parts_mut(out, 4).copy_from_slice(&[pn, pd, qn, qd]);
        Ok(())
    })
}

/// Band width `1/p - 1/q` bound; `present` is false when there is no band.
///
/// # Safety
/// `ts` must be a live handle; `present` and `out` (2 values) must be writable.
#[no_mangle]
pub unsafe extern "C" fn surfconv_typeset_ricci_gap(
    ts: *const SurfconvTypeSet,
    present: *mut bool,
    out: *mut i64,
) -> SurfconvStatus {
    guard(|| {
        non_null(ts, "ts")?;
        non_null(present, "present")?;
        non_null(out, "out")?;
        match &(*ts).inner.ricci_gap {
            Some(g) => {
                let (n, d) = rational_parts(g)?;
                std::slice::from_raw_parts_mut(out, 2).copy_from_slice(&[n, d]);
                *present = true;
            }
            None => *present = false,
        }
        Ok(())
    })
}

/// Exact membership of `(p_num/p_den, q_num/q_den)`; `interior` demands
/// strict inequalities.
///
/// # Safety
/// `ts` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn surfconv_typeset_contains(
    ts: *const SurfconvTypeSet,
    p_num: i64,
    p_den: i64,
    q_num: i64,
    q_den: i64,
    interior: bool,
    out: *mut bool,
) -> SurfconvStatus {
    guard(|| {
        non_null(ts, "ts")?;
        non_null(out, "out")?;
        let pt = lift(ExponentPair::new(make_rational(p_num, p_den)?, make_rational(q_num, q_den)?))?;
        let mode = if interior { Membership::Interior } else { Membership::Boundary };
        *out = (*ts).inner.contains(&pt, mode);
        Ok(())
    })
}
