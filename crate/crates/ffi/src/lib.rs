//! C ABI over `lorentz-approx`.
//!
//! Functions are handed out as opaque handles that the caller releases with
//! the matching `*_free`. Every fallible call returns an [`LaStatus`] and
//! writes its result through an out-pointer; on failure the message is
//! available from [`la_last_error_message`] on the same thread.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lorentz_approx::kfunc::{k_lower, k_upper_truncation};
use lorentz_approx::{
    approx_space_norm, lorentz_norm, lp_norm, weak_lorentz_norm, Error, NormParams, QuadratureSpec,
    RearrangementProfile, StepFunction,
};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Invalid = 3,
    Precondition = 4,
    Parse = 5,
    Io = 6,
    Panic = 7,
}

/// Nonincreasing rearrangement: constant pieces plus an optional power tail.
pub struct LaProfile(RearrangementProfile);

/// Finitely many disjoint atoms `value` on `[a, b)`.
pub struct LaStepFunction(StepFunction);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> LaStatus {
    match err {
        Error::Domain(_) => LaStatus::Domain,
        Error::Invalid(_) => LaStatus::Invalid,
        Error::Precondition(_) => LaStatus::Precondition,
        Error::Parse(_) | Error::Json(_) | Error::Csv(_) => LaStatus::Parse,
        Error::Io(_) => LaStatus::Io,
    }
}

/// Runs `f`, recording errors and panics.
fn guard<F: FnOnce() -> Result<(), (LaStatus, String)>>(f: F) -> LaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LaStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside lorentz-approx".into());
            LaStatus::Panic
        }
    }
}

fn lift<T>(r: lorentz_approx::Result<T>) -> Result<T, (LaStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (LaStatus, String) {
    (LaStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (LaStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), (LaStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn slice<'a>(p: *const f64, n: usize, what: &str) -> Result<&'a [f64], (LaStatus, String)> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, n))
}

unsafe fn c_str<'a>(p: *const c_char) -> Result<&'a str, (LaStatus, String)> {
    if p.is_null() {
        return Err(null("json"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| (LaStatus::Parse, format!("input is not UTF-8: {e}")))
}

fn json_err(e: serde_json::Error) -> (LaStatus, String) {
    (LaStatus::Parse, e.to_string())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Copy of the last error message on this thread, or NULL. Free with
/// [`la_string_free`].
#[no_mangle]
pub extern "C" fn la_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map_or(ptr::null_mut(), |c| c.clone().into_raw())
    })
}

/// Releases a string returned by this library. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn la_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a profile from `n` pieces `[t0[i], t1[i]) -> v[i]`. The tail
/// `c·t^{-gamma}` on `[tail_t, ∞)` is used when `has_tail` is nonzero.
#[no_mangle]
pub unsafe extern "C" fn la_profile_new(
    t0: *const f64,
    t1: *const f64,
    v: *const f64,
    n: usize,
    has_tail: i32,
    tail_t: f64,
    tail_c: f64,
    tail_gamma: f64,
    out: *mut *mut LaProfile,
) -> LaStatus {
    guard(|| {
        let (t0, t1, v) = (slice(t0, n, "t0")?, slice(t1, n, "t1")?, slice(v, n, "v")?);
        let triples: Vec<(f64, f64, f64)> = (0..n).map(|i| (t0[i], t1[i], v[i])).collect();
        let tail = (has_tail != 0).then_some((tail_t, tail_c, tail_gamma));
        let prof = lift(RearrangementProfile::from_triples(&triples, tail))?;
        write(out, Box::into_raw(Box::new(LaProfile(prof))), "out")
    })
}

/// Parses `{"pieces":[{"t0":..,"t1":..,"v":..}],"tail":{"T":..,"c":..,"gamma":..}}`.
#[no_mangle]
pub unsafe extern "C" fn la_profile_from_json(
    json: *const c_char,
    out: *mut *mut LaProfile,
) -> LaStatus {
    guard(|| {
        let prof: RearrangementProfile = serde_json::from_str(c_str(json)?).map_err(json_err)?;
        write(out, Box::into_raw(Box::new(LaProfile(prof))), "out")
    })
}

/// JSON form of the profile. Free with [`la_string_free`]; NULL on a null handle.
#[no_mangle]
pub unsafe extern "C" fn la_profile_to_json(profile: *const LaProfile) -> *mut c_char {
    match profile.as_ref() {
        Some(p) => serde_json::to_string(&p.0).map_or(ptr::null_mut(), into_c_string),
        None => ptr::null_mut(),
    }
}

#[no_mangle]
pub unsafe extern "C" fn la_profile_free(profile: *mut LaProfile) {
    if !profile.is_null() {
        drop(Box::from_raw(profile));
    }
}

/// Builds a step function from `n` atoms `[a[i], b[i]) -> v[i]`.
#[no_mangle]
pub unsafe extern "C" fn la_step_new(
    a: *const f64,
    b: *const f64,
    v: *const f64,
    n: usize,
    out: *mut *mut LaStepFunction,
) -> LaStatus {
    guard(|| {
        let (a, b, v) = (slice(a, n, "a")?, slice(b, n, "b")?, slice(v, n, "v")?);
        let triples: Vec<(f64, f64, f64)> = (0..n).map(|i| (a[i], b[i], v[i])).collect();
        let step = lift(StepFunction::from_triples(&triples))?;
        write(out, Box::into_raw(Box::new(LaStepFunction(step))), "out")
    })
}

/// Parses `{"atoms":[{"a":..,"b":..,"v":..}]}`.
#[no_mangle]
pub unsafe extern "C" fn la_step_from_json(
    json: *const c_char,
    out: *mut *mut LaStepFunction,
) -> LaStatus {
    guard(|| {
        let step: StepFunction = serde_json::from_str(c_str(json)?).map_err(json_err)?;
        write(out, Box::into_raw(Box::new(LaStepFunction(step))), "out")
    })
}

/// JSON form of the step function. Free with [`la_string_free`].
#[no_mangle]
pub unsafe extern "C" fn la_step_to_json(step: *const LaStepFunction) -> *mut c_char {
    match step.as_ref() {
        Some(s) => serde_json::to_string(&s.0).map_or(ptr::null_mut(), into_c_string),
        None => ptr::null_mut(),
    }
}

#[no_mangle]
pub unsafe extern "C" fn la_step_free(step: *mut LaStepFunction) {
    if !step.is_null() {
        drop(Box::from_raw(step));
    }
}

/// Number of atoms, 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn la_step_len(step: *const LaStepFunction) -> usize {
    step.as_ref().map_or(0, |s| s.0.atoms().len())
}

/// Decreasing rearrangement of a step function, as a new profile handle.
#[no_mangle]
pub unsafe extern "C" fn la_step_rearrange(
    step: *const LaStepFunction,
    out: *mut *mut LaProfile,
) -> LaStatus {
    guard(|| {
        let prof = deref(step, "step")?.0.rearrange();
        write(out, Box::into_raw(Box::new(LaProfile(prof))), "out")
    })
}

/// Best approximant from functions of support measure at most `sigma`, and
/// its `L_p` error.
#[no_mangle]
pub unsafe extern "C" fn la_best_approx(
    step: *const LaStepFunction,
    sigma: f64,
    p: f64,
    out_approximant: *mut *mut LaStepFunction,
    out_error: *mut f64,
) -> LaStatus {
    guard(|| {
        let best = lift(deref(step, "step")?.0.best_approx(sigma, p))?;
        if out_approximant.is_null() {
            return Err(null("out_approximant"));
        }
        write(out_error, best.error, "out_error")?;
        write(
            out_approximant,
            Box::into_raw(Box::new(LaStepFunction(best.approximant))),
            "out_approximant",
        )
    })
}

/// `E_sigma(f)_p`.
#[no_mangle]
pub unsafe extern "C" fn la_approx_error(
    profile: *const LaProfile,
    sigma: f64,
    p: f64,
    out: *mut f64,
) -> LaStatus {
    guard(|| {
        let v = lift(deref(profile, "profile")?.0.approx_error(sigma, p))?;
        write(out, v, "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn la_lp_norm(profile: *const LaProfile, p: f64, out: *mut f64) -> LaStatus {
    guard(|| {
        let v = lift(lp_norm(&deref(profile, "profile")?.0, p))?;
        write(out, v, "out")
    })
}

#[no_mangle]
pub unsafe extern "C" fn la_weak_lorentz_norm(
    profile: *const LaProfile,
    p: f64,
    out: *mut f64,
) -> LaStatus {
    guard(|| {
        let v = lift(weak_lorentz_norm(&deref(profile, "profile")?.0, p))?;
        write(out, v, "out")
    })
}

/// `q = INFINITY` gives the weak norm.
#[no_mangle]
pub unsafe extern "C" fn la_lorentz_norm(
    profile: *const LaProfile,
    p: f64,
    q: f64,
    out: *mut f64,
) -> LaStatus {
    guard(|| {
        let v = lift(lorentz_norm(&deref(profile, "profile")?.0, p, q))?;
        write(out, v, "out")
    })
}

/// `A^alpha_{p,q}` quasinorm with the default quadrature tolerance.
#[no_mangle]
pub unsafe extern "C" fn la_approx_space_norm(
    profile: *const LaProfile,
    p: f64,
    q: f64,
    alpha: f64,
    out: *mut f64,
) -> LaStatus {
    guard(|| {
        let params = lift(NormParams::from_alpha(p, q, alpha))?;
        let v = lift(approx_space_norm(
            &deref(profile, "profile")?.0,
            &params,
            &QuadratureSpec::default(),
        ))?;
        write(out, v, "out")
    })
}

/// Bracket `[lower, upper]` for `K(f, t; L_p, L_{p1,∞})`, `1/p1 = alpha + 1/p`.
#[no_mangle]
pub unsafe extern "C" fn la_k_bounds(
    profile: *const LaProfile,
    t: f64,
    p: f64,
    alpha: f64,
    out_lower: *mut f64,
    out_upper: *mut f64,
) -> LaStatus {
    guard(|| {
        let prof = &deref(profile, "profile")?.0;
        let params = lift(NormParams::from_alpha(p, f64::INFINITY, alpha))?;
        let lower = lift(k_lower(prof, t, &params))?;
        let upper = lift(k_upper_truncation(prof, t, &params))?.upper;
        write(out_lower, lower, "out_lower")?;
        write(out_upper, upper, "out_upper")
    })
}
