//! C interface to `rigidity-core`.
//!
//! Every function returns a [`RigidityStatus`]; results go through out
//! pointers. Handles are opaque and owned by the caller once returned, and
//! each has a matching `_free`. After a failure,
//! [`rigidity_last_error`] describes it.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_bigint::BigInt;
use num_rational::BigRational;
use rigidity_core::action_models::{ActionModel, GroupElement, ModelConfig, ModelError, Variant};
use rigidity_core::arith::QuadVal;
use rigidity_core::rigidity::{self as rig, DisjointnessCertificate, Horizons};
use rigidity_core::sl2z::{sanov_generators, Word};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RigidityStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Construction = 4,
    Counterexample = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RigidityVariant {
    Circle = 0,
    Interval = 1,
}

/// A built action model.
pub struct RigidityModel(ActionModel);

/// Tuned rigidity parameters.
pub struct RigidityParams(rig::RigidityParams);

/// A disjointness certificate.
pub struct RigidityCertificate(DisjointnessCertificate);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn fail(status: RigidityStatus, message: impl Into<String>) -> RigidityStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = message.into());
    status
}

fn guard(f: impl FnOnce() -> RigidityStatus) -> RigidityStatus {
    LAST_ERROR.with(|e| e.borrow_mut().clear());
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(RigidityStatus::Panic, msg)
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, RigidityStatus> {
    if p.is_null() {
        return Err(fail(RigidityStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(RigidityStatus::Parse, "string is not UTF-8"))
}

/// Copies `s` with a trailing NUL into `buf`; `needed` receives the size
/// including the NUL either way.
unsafe fn copy_out(s: &str, buf: *mut c_char, cap: usize, needed: *mut usize) -> RigidityStatus {
    if !needed.is_null() {
        *needed = s.len() + 1;
    }
    if buf.is_null() || cap < s.len() + 1 {
        return fail(RigidityStatus::BufferTooSmall, format!("need {} bytes", s.len() + 1));
    }
    ptr::copy_nonoverlapping(s.as_ptr(), buf as *mut u8, s.len());
    *buf.add(s.len()) = 0;
    RigidityStatus::Ok
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

/// The message of the last failure on this thread.
///
/// # Safety
/// `buf` must hold `cap` bytes; `needed` may be null.
#[no_mangle]
pub unsafe extern "C" fn rigidity_last_error(buf: *mut c_char, cap: usize, needed: *mut usize) -> RigidityStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    copy_out(&msg, buf, cap, needed)
}

/// Builds a model with the default schedule, base point and flow times.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rigidity_model_build(
    variant: RigidityVariant,
    depth: u32,
    out: *mut *mut RigidityModel,
) -> RigidityStatus {
    guard(|| {
        if out.is_null() {
            return fail(RigidityStatus::NullPointer, "null out pointer");
        }
        if depth > 12 {
            return fail(RigidityStatus::InvalidArgument, format!("depth {depth} exceeds 12"));
        }
        let v = match variant {
            RigidityVariant::Circle => Variant::Circle,
            RigidityVariant::Interval => Variant::Interval,
        };
        match ActionModel::build(ModelConfig::default_for(v, depth as usize)) {
            Ok(m) => {
                *out = Box::into_raw(Box::new(RigidityModel(m)));
                RigidityStatus::Ok
            }
            Err(e @ ModelError::NonSummable(_)) => fail(RigidityStatus::InvalidArgument, e.to_string()),
            Err(e) => fail(RigidityStatus::Construction, e.to_string()),
        }
    })
}

/// # Safety
/// `model` must come from `rigidity_model_build` or be null.
#[no_mangle]
pub unsafe extern "C" fn rigidity_model_free(model: *mut RigidityModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// `model` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rigidity_model_gap_count(model: *const RigidityModel, out: *mut usize) -> RigidityStatus {
    guard(|| {
        let (Some(m), false) = (model.as_ref(), out.is_null()) else {
            return fail(RigidityStatus::NullPointer, "null argument");
        };
        *out = m.0.gaps().len();
        RigidityStatus::Ok
    })
}

/// Image of `x` under a group element written like `h1^2 a B h2^-1`.
///
/// # Safety
/// `model`, `element` and `out` must be valid; `element` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn rigidity_model_evaluate(
    model: *const RigidityModel,
    element: *const c_char,
    x: f64,
    out: *mut f64,
) -> RigidityStatus {
    guard(|| {
        let (Some(m), false) = (model.as_ref(), out.is_null()) else {
            return fail(RigidityStatus::NullPointer, "null argument");
        };
        let g: GroupElement = match try_status!(text(element)).parse() {
            Ok(g) => g,
            Err(e) => return fail(RigidityStatus::Parse, format!("{e}")),
        };
        if !(0.0..=1.0).contains(&x) {
            return fail(RigidityStatus::InvalidArgument, format!("{x} is outside [0, 1]"));
        }
        *out = m.0.evaluate(&g, x);
        RigidityStatus::Ok
    })
}

/// Tunes parameters for `f0` (a word over `a, b, A, B`) and `(r, s)`
/// written as exact quadratic values such as `1` and `√2` (or `sqrt2`).
///
/// # Safety
/// All pointers must be valid and the strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn rigidity_params_tune(
    f0_word: *const c_char,
    r: *const c_char,
    s: *const c_char,
    out: *mut *mut RigidityParams,
) -> RigidityStatus {
    guard(|| {
        if out.is_null() {
            return fail(RigidityStatus::NullPointer, "null out pointer");
        }
        let word: Word = match try_status!(text(f0_word)).parse() {
            Ok(w) => w,
            Err(e) => return fail(RigidityStatus::Parse, format!("{e}")),
        };
        let parse = |p| -> Result<QuadVal, RigidityStatus> {
            text(p)?.parse::<QuadVal>().map_err(|e| fail(RigidityStatus::Parse, e.to_string()))
        };
        let rs = (try_status!(parse(r)), try_status!(parse(s)));
        let f0 = word.to_matrix(&sanov_generators());
        match rig::tune_parameters(&f0, Some(word), &rs, Horizons::default()) {
            Ok(p) => {
                *out = Box::into_raw(Box::new(RigidityParams(p)));
                RigidityStatus::Ok
            }
            Err(e) => fail(RigidityStatus::Construction, e.to_string()),
        }
    })
}

/// # Safety
/// `params` must come from `rigidity_params_tune` or be null.
#[no_mangle]
pub unsafe extern "C" fn rigidity_params_free(params: *mut RigidityParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// The tuned parameters as text.
///
/// # Safety
/// `params` must be valid, `buf` must hold `cap` bytes, `needed` may be null.
#[no_mangle]
pub unsafe extern "C" fn rigidity_params_describe(
    params: *const RigidityParams,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> RigidityStatus {
    guard(|| {
        let Some(p) = params.as_ref() else {
            return fail(RigidityStatus::NullPointer, "null params");
        };
        copy_out(&p.0.to_string(), buf, cap, needed)
    })
}

/// `λ`, `t` and `μ(J)` as doubles.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn rigidity_params_values(
    params: *const RigidityParams,
    lambda: *mut f64,
    t: *mut f64,
    mu_j: *mut f64,
) -> RigidityStatus {
    guard(|| {
        let Some(p) = params.as_ref() else {
            return fail(RigidityStatus::NullPointer, "null params");
        };
        if lambda.is_null() || t.is_null() || mu_j.is_null() {
            return fail(RigidityStatus::NullPointer, "null out pointer");
        }
        *lambda = p.0.lambda.to_f64();
        *t = p.0.t.to_f64();
        *mu_j = p.0.mu_j.to_f64();
        RigidityStatus::Ok
    })
}

/// Certifies that the `2^k` images of `J` are disjoint. On overlap the
/// status is `Counterexample` and the message names the pair.
///
/// # Safety
/// `params` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rigidity_certify(
    params: *const RigidityParams,
    k: u32,
    out: *mut *mut RigidityCertificate,
) -> RigidityStatus {
    guard(|| {
        let (Some(p), false) = (params.as_ref(), out.is_null()) else {
            return fail(RigidityStatus::NullPointer, "null argument");
        };
        if k > 24 {
            return fail(RigidityStatus::InvalidArgument, format!("k = {k} exceeds 24"));
        }
        match rig::certify_disjoint(&p.0, k) {
            Ok(c) => {
                *out = Box::into_raw(Box::new(RigidityCertificate(c)));
                RigidityStatus::Ok
            }
            Err(ce) => fail(
                RigidityStatus::Counterexample,
                format!("{} and {} overlap: gap {}", ce.first.0, ce.second.0, ce.gap),
            ),
        }
    })
}

/// # Safety
/// `cert` must come from `rigidity_certify` or be null.
#[no_mangle]
pub unsafe extern "C" fn rigidity_certificate_free(cert: *mut RigidityCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// # Safety
/// `cert` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rigidity_certificate_len(cert: *const RigidityCertificate, out: *mut usize) -> RigidityStatus {
    guard(|| {
        let (Some(c), false) = (cert.as_ref(), out.is_null()) else {
            return fail(RigidityStatus::NullPointer, "null argument");
        };
        *out = c.0.len();
        RigidityStatus::Ok
    })
}

/// The certificate file contents.
///
/// # Safety
/// `cert` must be valid, `buf` must hold `cap` bytes, `needed` may be null.
#[no_mangle]
pub unsafe extern "C" fn rigidity_certificate_text(
    cert: *const RigidityCertificate,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> RigidityStatus {
    guard(|| {
        let Some(c) = cert.as_ref() else {
            return fail(RigidityStatus::NullPointer, "null certificate");
        };
        copy_out(&c.0.to_text(), buf, cap, needed)
    })
}

/// Re-checks certificate text independently; `intervals` receives the count.
///
/// # Safety
/// `text` must be NUL-terminated and `intervals` valid.
#[no_mangle]
pub unsafe extern "C" fn rigidity_certificate_check(contents: *const c_char, intervals: *mut usize) -> RigidityStatus {
    guard(|| {
        if intervals.is_null() {
            return fail(RigidityStatus::NullPointer, "null out pointer");
        }
        match rig::check_certificate_text(try_status!(text(contents))) {
            Ok(c) => {
                *intervals = c.intervals;
                RigidityStatus::Ok
            }
            Err(e) => fail(RigidityStatus::Counterexample, e),
        }
    })
}

/// Least `k ≥ N` with `2^k A^{3N} (3/4)^{k−N} |J| > |[a,b]|`, from exact
/// rationals given as numerator and denominator.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rigidity_growth_threshold(
    a_num: i64,
    a_den: i64,
    n: u32,
    j_num: i64,
    j_den: i64,
    ab_num: i64,
    ab_den: i64,
    out: *mut u32,
) -> RigidityStatus {
    guard(|| {
        if out.is_null() {
            return fail(RigidityStatus::NullPointer, "null out pointer");
        }
        if [a_den, j_den, ab_den].contains(&0) {
            return fail(RigidityStatus::InvalidArgument, "zero denominator");
        }
        let q = |p: i64, d: i64| BigRational::new(BigInt::from(p), BigInt::from(d));
        let (a, j, ab) = (q(a_num, a_den), q(j_num, j_den), q(ab_num, ab_den));
        let zero = q(0, 1);
        if a <= zero || a >= q(1, 1) || j <= zero || ab <= zero {
            return fail(RigidityStatus::InvalidArgument, "need 0 < A < 1 and positive lengths");
        }
        *out = rig::growth_contradiction(&a, n, &j, &ab).k_star;
        RigidityStatus::Ok
    })
}
