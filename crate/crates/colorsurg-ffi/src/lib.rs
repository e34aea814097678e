//! C ABI for the colorsurg toolkit.
//!
//! Every fallible call returns a `CsStatus`; on failure the message is kept in
//! thread-local storage and read with `cs_last_error_message`. Objects are
//! opaque handles released with their `_free` function. Strings returned by
//! the library are released with `cs_string_free`.

use colorsurg::decoder::{self, SyndromeGraph};
use colorsurg::estimator::{self, AlgorithmSpec};
use colorsurg::layout::{SurgeryLayout, Which};
use colorsurg::{anyons, surgery, Error, PauliOperator};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CsStatus {
    Ok = 0,
    NullPointer = 1,
    Parse = 2,
    Validation = 3,
    Runtime = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CsAnyonKind {
    Boundaries = 0,
    Transparent = 1,
    SemiTransparent = 2,
    Opaque = 3,
}

/// Opaque surgery layout.
pub struct CsLayout {
    inner: SurgeryLayout,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CsStatus {
    match e {
        Error::Parse(_) | Error::Json(_) | Error::Csv(_) => CsStatus::Parse,
        Error::Validation(_) => CsStatus::Validation,
        Error::Runtime(_) | Error::Io(_) => CsStatus::Runtime,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (CsStatus, String)>) -> CsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CsStatus::Ok,
        Ok(Err((s, m))) => {
            set_error(&m);
            s
        }
        Err(_) => {
            set_error("panic inside colorsurg");
            CsStatus::Panic
        }
    }
}

fn lib<T>(r: colorsurg::Result<T>) -> Result<T, (CsStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (CsStatus, String) {
    (CsStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (CsStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (CsStatus::Parse, format!("{what} is not UTF-8")))
}

fn words(la: &str, lb: &str) -> colorsurg::Result<(PauliOperator, PauliOperator)> {
    let n = [la, lb]
        .iter()
        .flat_map(|w| w.split(|c: char| c.is_whitespace() || c == ',' || c == '*'))
        .filter(|t| !t.is_empty())
        .map(|t| t.trim_start_matches('-').get(1..).unwrap_or_default().parse::<usize>())
        .try_fold(0usize, |m, i| i.map(|i| m.max(i)))
        .map_err(|_| Error::Parse(format!("bad logical words '{la}', '{lb}'")))?;
    if n == 0 {
        return Err(Error::Validation("logical words act on no patch".into()));
    }
    Ok((PauliOperator::from_sparse(la, n)?, PauliOperator::from_sparse(lb, n)?))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Build the surgery layout of distance `d` for sparse words such as "X1 X3 Z4".
///
/// # Safety
/// `la` and `lb` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cs_layout_new(d: usize, la: *const c_char, lb: *const c_char, out: *mut *mut CsLayout) -> CsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let (a, b) = lib(words(str_arg(la, "la")?, str_arg(lb, "lb")?))?;
        let inner = lib(SurgeryLayout::new(d, &a, &b))?;
        *out = Box::into_raw(Box::new(CsLayout { inner }));
        Ok(())
    })
}

/// Import a layout from JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cs_layout_from_json(json: *const c_char, out: *mut *mut CsLayout) -> CsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = lib(SurgeryLayout::from_json(str_arg(json, "json")?))?;
        *out = Box::into_raw(Box::new(CsLayout { inner }));
        Ok(())
    })
}

/// Export a layout as JSON; free the result with `cs_string_free`.
///
/// # Safety
/// `layout` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cs_layout_to_json(layout: *const CsLayout, out: *mut *mut c_char) -> CsStatus {
    guard(|| {
        let l = layout.as_ref().ok_or_else(|| null("layout"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let s = lib(l.inner.to_json())?;
        *out = CString::new(s).map_err(|e| (CsStatus::Runtime, e.to_string()))?.into_raw();
        Ok(())
    })
}

/// Number of physical qubits (data and ancilla) in the layout, 0 for NULL.
///
/// # Safety
/// `layout` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cs_layout_num_qubits(layout: *const CsLayout) -> usize {
    layout.as_ref().map_or(0, |l| l.inner.num_qubits())
}

/// # Safety
/// `layout` must be NULL or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn cs_layout_free(layout: *mut CsLayout) {
    if !layout.is_null() {
        drop(Box::from_raw(layout));
    }
}

/// One seeded merge/split run from the code space; writes both outcomes (+1/-1).
///
/// # Safety
/// `layout` must be a live handle; `out_a` and `out_b` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cs_surgery_run(layout: *const CsLayout, seed: u64, out_a: *mut i8, out_b: *mut i8) -> CsStatus {
    guard(|| {
        let l = &layout.as_ref().ok_or_else(|| null("layout"))?.inner;
        if out_a.is_null() || out_b.is_null() {
            return Err(null("out"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = lib(surgery::prepare_data(l).and_then(|t| surgery::prepare_ancilla(l, t)))?;
        let trace = lib(surgery::run_surgery(&mut t, l, &mut rng))?;
        let r = &trace.result;
        *out_a = r.outcome(Which::A).unwrap_or(1);
        *out_b = r.outcome(Which::B).unwrap_or(1);
        Ok(())
    })
}

/// Min-cut fault distance of the split step; -1 when no Bell error can flip
/// either outcome.
///
/// # Safety
/// `layout` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cs_decoder_fault_distance(layout: *const CsLayout, out: *mut i64) -> CsStatus {
    guard(|| {
        let l = &layout.as_ref().ok_or_else(|| null("layout"))?.inner;
        if out.is_null() {
            return Err(null("out"));
        }
        let g = lib(SyndromeGraph::new(l))?;
        *out = g.fault_distance().map_or(-1, |d| d as i64);
        Ok(())
    })
}

/// Monte Carlo count of decoded logical failures.
///
/// # Safety
/// `layout` must be a live handle; `out_failures` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cs_decoder_failures(
    layout: *const CsLayout,
    p: f64,
    trials: u64,
    seed: u64,
    out_failures: *mut u64,
) -> CsStatus {
    guard(|| {
        let l = &layout.as_ref().ok_or_else(|| null("layout"))?.inner;
        if out_failures.is_null() {
            return Err(null("out_failures"));
        }
        let g = lib(SyndromeGraph::new(l))?;
        *out_failures = lib(decoder::monte_carlo_failure(&g, l.d, p, trials, seed))?.failures;
        Ok(())
    })
}

/// Number of boundaries or walls of one kind.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cs_anyons_count(kind: CsAnyonKind, out: *mut usize) -> CsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = match kind {
            CsAnyonKind::Boundaries => anyons::enumerate_boundaries().len(),
            CsAnyonKind::Transparent => anyons::enumerate_transparent_walls().len(),
            CsAnyonKind::SemiTransparent => anyons::enumerate_semitransparent_walls().len(),
            CsAnyonKind::Opaque => anyons::enumerate_opaque_walls().len(),
        };
        Ok(())
    })
}

/// Color over surface spacetime ratio at one physical error rate.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cs_estimate_spacetime_ratio(n: u64, t_count: f64, budget: f64, p: f64, out: *mut f64) -> CsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let alg = lib(AlgorithmSpec::new(n, t_count, budget))?;
        *out = lib(estimator::compare_point(&alg, p))?.spacetime_ratio;
        Ok(())
    })
}
