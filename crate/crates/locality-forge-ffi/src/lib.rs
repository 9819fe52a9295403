//! C ABI over locality-forge. Objects are opaque handles owned by the caller
//! and released with the matching `_free`. Every call returns an [`LfStatus`];
//! on failure `lf_last_error` describes the cause for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use locality_forge::classify::classify_subgroups;
use locality_forge::cli::{classification_json, Ambient};
use locality_forge::expansion::subcentric_closure;
use locality_forge::group::{Caps, FiniteGroup};
use locality_forge::io;
use locality_forge::locality::Locality;
use locality_forge::partial::{PartialGroup, VerifyBudget};
use locality_forge::strat::stratification;
use locality_forge::verify::verify_locality_axioms;
use locality_forge::Error;

/// Undefined product marker.
pub const LF_NONE: u32 = u32::MAX;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LfStatus {
    Ok = 0,
    Null = 1,
    Parse = 2,
    Domain = 3,
    Resource = 4,
    Internal = 5,
    Panic = 6,
}

/// A finite permutation group.
pub struct LfGroup {
    group: FiniteGroup,
}

/// A locality (L, Δ, S).
pub struct LfLocality {
    locality: Locality,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> LfStatus {
    match e {
        Error::Parse(_) => LfStatus::Parse,
        Error::Domain { .. } => LfStatus::Domain,
        Error::Resource(_) => LfStatus::Resource,
        Error::Internal(_) | Error::Io(_) => LfStatus::Internal,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Error>) -> LfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            LfStatus::Ok
        }
        Ok(Err(e)) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("panic: {msg}"));
            LfStatus::Panic
        }
    }
}

macro_rules! non_null {
    ($($p:expr),+) => {
        if $($p.is_null())||+ {
            set_error("null pointer argument");
            return LfStatus::Null;
        }
    };
}

unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, Error> {
    CStr::from_ptr(s).to_str().map_err(|_| Error::Parse("argument is not UTF-8".into()))
}

fn caps() -> Result<Caps, Error> {
    Caps::from_env()
}

fn out_string(s: String, out: *mut *mut c_char) -> Result<(), Error> {
    let c = CString::new(s).map_err(|_| Error::internal("interior NUL in output"))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn lf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a perm-group.v1 record.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lf_group_from_json(json: *const c_char, out: *mut *mut LfGroup) -> LfStatus {
    non_null!(json, out);
    guard(|| {
        let group = io::parse_perm_group(str_arg(json)?, &caps()?)?;
        *out = Box::into_raw(Box::new(LfGroup { group }));
        Ok(())
    })
}

/// # Safety
/// `g` must be null or a handle from `lf_group_from_json`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lf_group_free(g: *mut LfGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live group handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lf_group_order(g: *const LfGroup, out: *mut usize) -> LfStatus {
    non_null!(g, out);
    guard(|| {
        *out = (*g).group.order();
        Ok(())
    })
}

fn ambient(g: &LfGroup, p: u32) -> Result<Ambient, Error> {
    Ambient::new(g.group.clone(), p, &caps()?)
}

/// The classification.v1 report of the group at `p`. Free the string with
/// `lf_string_free`.
///
/// # Safety
/// `g` must be a live group handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lf_classify_json(g: *const LfGroup, p: u32, seed: u64, out: *mut *mut c_char) -> LfStatus {
    non_null!(g, out);
    guard(|| {
        let amb = ambient(&*g, p)?;
        out_string(classification_json(&amb, "", seed)?, out)
    })
}

/// The transporter locality of the group on an object set given by a delta
/// spec (`cr-closure`, `centric`, `quasicentric`, `subcentric`, `all` or an
/// explicit JSON list).
///
/// # Safety
/// `g` must be a live group handle, `delta` a NUL-terminated string and `out`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lf_transporter(
    g: *const LfGroup,
    p: u32,
    delta: *const c_char,
    out: *mut *mut LfLocality,
) -> LfStatus {
    non_null!(g, delta, out);
    guard(|| {
        let amb = ambient(&*g, p)?;
        let d = amb.resolve_delta(str_arg(delta)?)?;
        let locality = amb.ctx.transporter(&d)?;
        *out = Box::into_raw(Box::new(LfLocality { locality }));
        Ok(())
    })
}

/// Expands the transporter locality on the closure of F^cr to the subcentric
/// subgroups. Fails with `Domain` if that locality is not proper.
///
/// # Safety
/// `g` must be a live group handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lf_subcentric_closure(g: *const LfGroup, p: u32, out: *mut *mut LfLocality) -> LfStatus {
    non_null!(g, out);
    guard(|| {
        let amb = ambient(&*g, p)?;
        let l = amb.ctx.transporter(&amb.resolve_delta("cr-closure")?)?;
        let st = stratification(&l)?;
        let cl = classify_subgroups(&amb.f, &st, p)?;
        let e = subcentric_closure(&l, &amb.f, &st, &cl)?;
        *out = Box::into_raw(Box::new(LfLocality { locality: e.locality }));
        Ok(())
    })
}

/// Parses a locality.v1 record.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lf_locality_from_json(json: *const c_char, out: *mut *mut LfLocality) -> LfStatus {
    non_null!(json, out);
    guard(|| {
        let locality = io::parse_locality(str_arg(json)?, &caps()?)?;
        *out = Box::into_raw(Box::new(LfLocality { locality }));
        Ok(())
    })
}

/// Serializes to locality.v1. Free the string with `lf_string_free`.
///
/// # Safety
/// `l` must be a live locality handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lf_locality_to_json(l: *const LfLocality, out: *mut *mut c_char) -> LfStatus {
    non_null!(l, out);
    guard(|| out_string(io::locality_to_json(&(*l).locality)?, out))
}

/// # Safety
/// `l` must be null or a locality handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lf_locality_free(l: *mut LfLocality) {
    if !l.is_null() {
        drop(Box::from_raw(l));
    }
}

/// # Safety
/// `l` must be a live locality handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lf_locality_size(l: *const LfLocality, out: *mut usize) -> LfStatus {
    non_null!(l, out);
    guard(|| {
        *out = (*l).locality.size();
        Ok(())
    })
}

/// The product of `a` and `b`, or `LF_NONE` when the pair is outside the domain.
///
/// # Safety
/// `l` must be a live locality handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lf_locality_product(l: *const LfLocality, a: u32, b: u32, out: *mut u32) -> LfStatus {
    non_null!(l, out);
    guard(|| {
        let loc = &(*l).locality;
        let n = loc.size() as u32;
        if a >= n || b >= n {
            return Err(Error::domain_with("element index out of range", format!("({a},{b}) with |L| = {n}")));
        }
        *out = loc.pair(a, b).unwrap_or(LF_NONE);
        Ok(())
    })
}

/// Checks the locality axioms. `ok` is set to 1 when they hold and 0 otherwise;
/// the first violated axiom is then available from `lf_last_error`.
///
/// # Safety
/// `l` must be a live locality handle and `ok` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lf_locality_verify(l: *const LfLocality, seed: u64, ok: *mut i32) -> LfStatus {
    non_null!(l, ok);
    let mut witness = None;
    let st = guard(|| {
        let budget = VerifyBudget { seed, ..VerifyBudget::default() };
        let rep = verify_locality_axioms(&(*l).locality, &budget);
        *ok = rep.ok() as i32;
        witness = rep.first_witness().map(String::from);
        Ok(())
    });
    if let Some(w) = witness {
        set_error(&w);
    }
    st
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
