//! C ABI over the chainmap library.
//!
//! Objects cross the boundary as opaque handles created by `cm_*_new`-style
//! functions and released with the matching `cm_*_free`. Every fallible call
//! returns a [`CmStatus`]; on failure `cm_last_error` describes the problem.
//! Strings returned to the caller are owned by it and released with
//! `cm_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use chainmap::algebra::Rational;
use chainmap::complexes::{betti, model_complex, ModelComplex, SimplicialComplex};
use chainmap::error::Error;
use chainmap::homcomplex::{chain_map_generators, ChainMapMatrix, MapParameterization};
use chainmap::optimize::{aw_total_loss, bisimplicial_penalty, map_to_json, norm_objective, random_vertex, LpBackend};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    TooLarge = 4,
    Consistency = 5,
    NonFinite = 6,
    Io = 7,
    Panic = 8,
}

/// A simplicial complex.
pub struct CmComplex(SimplicialComplex);

/// Chain maps between two complexes up to homotopy, over the rationals.
pub struct CmParam(MapParameterization<Rational>);

/// A chain map with floating-point entries.
pub struct CmMap(ChainMapMatrix<f64>);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CmStatus {
    match e {
        Error::InvalidInput(_) | Error::Json(_) | Error::Csv(_) => CmStatus::InvalidInput,
        Error::TooLarge(_) => CmStatus::TooLarge,
        Error::Consistency(_) => CmStatus::Consistency,
        Error::NonFinite { .. } => CmStatus::NonFinite,
        Error::Io(_) => CmStatus::Io,
    }
}

fn guard(f: impl FnOnce() -> Result<(), CmStatus>) -> CmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CmStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            CmStatus::Panic
        }
    }
}

fn lib<T>(r: chainmap::error::Result<T>) -> Result<T, CmStatus> {
    r.map_err(|e| {
        let s = status_of(&e);
        set_error(e.to_string());
        s
    })
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, CmStatus> {
    if p.is_null() {
        set_error("null string argument".into());
        return Err(CmStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string argument is not UTF-8".into());
        CmStatus::InvalidUtf8
    })
}

unsafe fn ref_arg<'a, T>(p: *const T) -> Result<&'a T, CmStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("null handle".into());
        CmStatus::NullPointer
    })
}

fn out_arg<T>(p: *mut T) -> Result<(), CmStatus> {
    if p.is_null() {
        set_error("null output pointer".into());
        return Err(CmStatus::NullPointer);
    }
    Ok(())
}

fn give_string(s: String, out: *mut *mut c_char) -> Result<(), CmStatus> {
    out_arg(out)?;
    let c = CString::new(s).map_err(|_| {
        set_error("output contains a nul byte".into());
        CmStatus::InvalidInput
    })?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn cm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn cm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a named model complex: point, triangle, square, octagon, ngon:N,
/// filled_triangle, octahedron, icosahedron.
///
/// # Safety
/// `name` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cm_complex_model(name: *const c_char, out: *mut *mut CmComplex) -> CmStatus {
    guard(|| {
        out_arg(out)?;
        let model: ModelComplex = lib(str_arg(name)?.parse())?;
        let k = lib(model_complex(model))?;
        *out = Box::into_raw(Box::new(CmComplex(k)));
        Ok(())
    })
}

/// Parses a complex from its JSON form (`{"simplices": [[0], [1], [0, 1], ...]}`).
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cm_complex_from_json(json: *const c_char, out: *mut *mut CmComplex) -> CmStatus {
    guard(|| {
        out_arg(out)?;
        let v: serde_json::Value = lib(serde_json::from_str(str_arg(json)?).map_err(Error::from))?;
        let k = lib(SimplicialComplex::from_json(&v))?;
        *out = Box::into_raw(Box::new(CmComplex(k)));
        Ok(())
    })
}

/// Writes the complex as JSON into a new string.
///
/// # Safety
/// `k` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cm_complex_to_json(k: *const CmComplex, out: *mut *mut c_char) -> CmStatus {
    guard(|| {
        let k = ref_arg(k)?;
        give_string(k.0.to_json().to_string(), out)
    })
}

/// Number of simplices of dimension `dim`.
///
/// # Safety
/// `k` must be a live handle or null (which gives 0).
#[no_mangle]
pub unsafe extern "C" fn cm_complex_count(k: *const CmComplex, dim: usize) -> usize {
    k.as_ref().map_or(0, |k| k.0.count(dim))
}

/// Rational Betti numbers in dimensions `0..len`; dimensions above the
/// complex are 0.
///
/// # Safety
/// `k` must be a live handle; `out` must hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn cm_complex_betti(k: *const CmComplex, out: *mut usize, len: usize) -> CmStatus {
    guard(|| {
        let k = ref_arg(k)?;
        out_arg(out)?;
        let b = betti::<Rational>(&k.0);
        for i in 0..len {
            *out.add(i) = b.get(i).copied().unwrap_or(0);
        }
        Ok(())
    })
}

/// # Safety
/// `k` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cm_complex_free(k: *mut CmComplex) {
    if !k.is_null() {
        drop(Box::from_raw(k));
    }
}

/// Computes the generators and homotopies of chain maps from `x` to `y`.
///
/// # Safety
/// `x` and `y` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cm_param_new(x: *const CmComplex, y: *const CmComplex, out: *mut *mut CmParam) -> CmStatus {
    guard(|| {
        let (x, y) = (ref_arg(x)?, ref_arg(y)?);
        out_arg(out)?;
        let p = lib(chain_map_generators::<Rational>(&x.0, &y.0))?;
        *out = Box::into_raw(Box::new(CmParam(p)));
        Ok(())
    })
}

/// Number of homology-class generators.
///
/// # Safety
/// `p` must be a live handle or null (which gives 0).
#[no_mangle]
pub unsafe extern "C" fn cm_param_generator_count(p: *const CmParam) -> usize {
    p.as_ref().map_or(0, |p| p.0.generators().len())
}

/// Number of independent homotopy directions.
///
/// # Safety
/// `p` must be a live handle or null (which gives 0).
#[no_mangle]
pub unsafe extern "C" fn cm_param_homotopy_count(p: *const CmParam) -> usize {
    p.as_ref().map_or(0, |p| p.0.independent_homotopies().len())
}

/// Writes the parameterization as JSON into a new string.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cm_param_to_json(p: *const CmParam, out: *mut *mut c_char) -> CmStatus {
    guard(|| {
        let p = ref_arg(p)?;
        give_string(p.0.to_json().to_string(), out)
    })
}

/// # Safety
/// `p` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cm_param_free(p: *mut CmParam) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Solves the norm program and returns a random vertex of its optimal face.
/// `optimum` may be null.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cm_map_lp_random_vertex(
    p: *const CmParam,
    seed: u64,
    out: *mut *mut CmMap,
    optimum: *mut f64,
) -> CmStatus {
    guard(|| {
        let p = ref_arg(p)?;
        out_arg(out)?;
        let sol = lib(random_vertex(&p.0, seed, LpBackend::Auto))?;
        if !optimum.is_null() {
            *optimum = sol.optimum;
        }
        *out = Box::into_raw(Box::new(CmMap(sol.map)));
        Ok(())
    })
}

/// Returns the map with every homotopy coefficient zero.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cm_map_base(p: *const CmParam, out: *mut *mut CmMap) -> CmStatus {
    guard(|| {
        let p = ref_arg(p)?;
        out_arg(out)?;
        let g = p.0.to_map(&p.0.base_vector()).map_field::<f64>();
        *out = Box::into_raw(Box::new(CmMap(g)));
        Ok(())
    })
}

/// Largest column sum plus largest row sum of absolute entries.
///
/// # Safety
/// `g` must be a live handle or null (which gives NaN).
#[no_mangle]
pub unsafe extern "C" fn cm_map_norm_objective(g: *const CmMap) -> f64 {
    g.as_ref().map_or(f64::NAN, |g| norm_objective(&g.0))
}

/// Number of nonzero entries beyond one per row and per column.
///
/// # Safety
/// `g` must be a live handle or null (which gives 0).
#[no_mangle]
pub unsafe extern "C" fn cm_map_penalty(g: *const CmMap) -> usize {
    g.as_ref().map_or(0, |g| bisimplicial_penalty(&g.0).value)
}

/// Diagonal-compatibility loss of the map and its adjoint.
///
/// # Safety
/// `g` must be a live handle or null (which gives NaN).
#[no_mangle]
pub unsafe extern "C" fn cm_map_aw_loss(g: *const CmMap) -> f64 {
    g.as_ref().map_or(f64::NAN, |g| aw_total_loss(&g.0))
}

/// Whether the map commutes with the boundaries (1) or not (0).
///
/// # Safety
/// `g` must be a live handle or null (which gives 0).
#[no_mangle]
pub unsafe extern "C" fn cm_map_is_chain_map(g: *const CmMap) -> i32 {
    g.as_ref().map_or(0, |g| g.0.is_chain_map() as i32)
}

/// Writes the map as JSON into a new string.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cm_map_to_json(g: *const CmMap, out: *mut *mut c_char) -> CmStatus {
    guard(|| {
        let g = ref_arg(g)?;
        give_string(map_to_json(&g.0).to_string(), out)
    })
}

/// # Safety
/// `g` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cm_map_free(g: *mut CmMap) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}
