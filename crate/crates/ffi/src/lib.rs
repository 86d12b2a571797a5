//! C ABI for `sqbias`.
//!
//! Distributions cross the boundary as opaque [`SqbDist`] handles, created
//! from JSON and released with [`sqb_dist_free`]. Every fallible call returns
//! an [`SqbStatus`]; on failure [`sqb_last_error`] holds a message for the
//! calling thread. Strings handed out by the library are released with
//! [`sqb_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sqbias::transforms::TransformKind;
use sqbias::{bounds, charfn, extremal, metrics, verify, Distribution, Error};

/// Opaque distribution handle.
pub struct SqbDist {
    inner: Distribution,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidJson = 3,
    InvalidDistribution = 4,
    /// An operation's precondition failed (wrong mean, wrong domain, ...).
    Precondition = 5,
    Unsupported = 6,
    /// A verified inequality or identity failed.
    Violation = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqbTransform {
    Size = 0,
    Zero = 1,
    Square = 2,
    DoubleSize = 3,
    UniformProduct = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SqbMoments {
    pub mean: f64,
    pub second: f64,
    pub third: f64,
    pub abs_third: f64,
}

/// `f(t)`, `f'(t)`, `f''(t)` as real and imaginary parts.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SqbCharFn {
    pub f_re: f64,
    pub f_im: f64,
    pub fprime_re: f64,
    pub fprime_im: f64,
    pub fsecond_re: f64,
    pub fsecond_im: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SqbTwoPointStats {
    pub third: f64,
    pub abs_third: f64,
    pub l1_square: f64,
    pub ratio: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Fail(SqbStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::InvalidDistribution(_) => SqbStatus::InvalidDistribution,
            Error::Unsupported(_) | Error::DegreeTooHigh(_) => SqbStatus::Unsupported,
            _ => SqbStatus::Precondition,
        };
        Fail(status, e.to_string())
    }
}

/// Runs `f`, translating errors and panics into a status code.
fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> SqbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            SqbStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("panic inside sqbias");
            SqbStatus::Panic
        }
    }
}

unsafe fn dist_ref<'a>(d: *const SqbDist) -> Result<&'a Distribution, Fail> {
    d.as_ref()
        .map(|h| &h.inner)
        .ok_or_else(|| Fail(SqbStatus::NullPointer, "null distribution handle".into()))
}

unsafe fn out_ref<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| Fail(SqbStatus::NullPointer, "null output pointer".into()))
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(Fail(SqbStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Fail(SqbStatus::InvalidUtf8, e.to_string()))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

fn new_handle(d: Distribution) -> *mut SqbDist {
    Box::into_raw(Box::new(SqbDist { inner: d }))
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn sqb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a JSON distribution into a new handle.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sqb_dist_from_json(json: *const c_char, out: *mut *mut SqbDist) -> SqbStatus {
    guard(|| {
        let out = out_ref(out)?;
        let text = read_str(json)?;
        let d = Distribution::from_json(text).map_err(|e| {
            // validation failures surface through serde as custom errors
            let status = if e.is_data() { SqbStatus::InvalidDistribution } else { SqbStatus::InvalidJson };
            Fail(status, e.to_string())
        })?;
        *out = new_handle(d);
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `d` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn sqb_dist_free(d: *mut SqbDist) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn sqb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Serializes a handle to JSON; free the result with [`sqb_string_free`].
///
/// # Safety
/// `d` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sqb_dist_to_json(d: *const SqbDist, out: *mut *mut c_char) -> SqbStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = into_c_string(dist_ref(d)?.to_json());
        Ok(())
    })
}

/// Applies a transformation, producing a new handle.
///
/// # Safety
/// `d` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sqb_transform(d: *const SqbDist, kind: SqbTransform, out: *mut *mut SqbDist) -> SqbStatus {
    guard(|| {
        let out = out_ref(out)?;
        let kind = match kind {
            SqbTransform::Size => TransformKind::Size,
            SqbTransform::Zero => TransformKind::Zero,
            SqbTransform::Square => TransformKind::Square,
            SqbTransform::DoubleSize => TransformKind::DoubleSize,
            SqbTransform::UniformProduct => TransformKind::UniformProduct,
        };
        *out = new_handle(kind.apply(dist_ref(d)?)?);
        Ok(())
    })
}

/// Affine map to mean 0 and variance 1, producing a new handle.
///
/// # Safety
/// `d` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sqb_standardize(d: *const SqbDist, out: *mut *mut SqbDist) -> SqbStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = new_handle(dist_ref(d)?.standardize()?);
        Ok(())
    })
}

/// `P(X < u)`.
///
/// # Safety
/// `d` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sqb_cdf(d: *const SqbDist, u: f64, out: *mut f64) -> SqbStatus {
    guard(|| {
        *out_ref(out)? = dist_ref(d)?.cdf(u);
        Ok(())
    })
}

/// # Safety
/// `d` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sqb_moments(d: *const SqbDist, out: *mut SqbMoments) -> SqbStatus {
    guard(|| {
        let m = dist_ref(d)?.moments();
        *out_ref(out)? = SqbMoments { mean: m.mean, second: m.second, third: m.third, abs_third: m.abs_third };
        Ok(())
    })
}

/// # Safety
/// `d` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sqb_cf_eval(d: *const SqbDist, t: f64, out: *mut SqbCharFn) -> SqbStatus {
    guard(|| {
        let c = charfn::cf_eval(dist_ref(d)?, t);
        *out_ref(out)? = SqbCharFn {
            f_re: c.f.re,
            f_im: c.f.im,
            fprime_re: c.fprime.re,
            fprime_im: c.fprime.im,
            fsecond_re: c.fsecond.re,
            fsecond_im: c.fsecond.im,
        };
        Ok(())
    })
}

/// # Safety
/// `a`, `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sqb_l1_distance(a: *const SqbDist, b: *const SqbDist, out: *mut f64) -> SqbStatus {
    guard(|| {
        *out_ref(out)? = metrics::l1_distance(dist_ref(a)?, dist_ref(b)?);
        Ok(())
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sqb_corollary1_bound(beta3: f64, t: f64, out: *mut f64) -> SqbStatus {
    guard(|| {
        *out_ref(out)? = bounds::corollary1_bound(beta3, t)?;
        Ok(())
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sqb_eq9_bound(beta3: f64, t: f64, out: *mut f64) -> SqbStatus {
    guard(|| {
        *out_ref(out)? = bounds::eq9_bound(beta3, t)?;
        Ok(())
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sqb_corollary2_bound(beta3: f64, t: f64, out: *mut f64) -> SqbStatus {
    guard(|| {
        *out_ref(out)? = bounds::corollary2_bound(beta3, t)?;
        Ok(())
    })
}

/// Bound curve of a standardized law as CSV; free `csv` with [`sqb_string_free`].
/// Returns `Violation` (with the CSV still written) when a slack drops below `-1e-9`.
///
/// # Safety
/// `d` must be a live handle; `csv` and `min_slack` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn sqb_bound_curve_csv(
    d: *const SqbDist,
    t_max: f64,
    steps: usize,
    csv: *mut *mut c_char,
    min_slack: *mut f64,
) -> SqbStatus {
    guard(|| {
        let csv = out_ref(csv)?;
        let min_slack = out_ref(min_slack)?;
        let curve = bounds::bound_curve(dist_ref(d)?, t_max, steps)?;
        let mut buf = Vec::new();
        curve.write_csv(&mut buf, false).expect("writing to memory");
        *csv = into_c_string(String::from_utf8(buf).expect("csv is ascii"));
        let (slack, name, t) = curve.min_slack();
        *min_slack = slack;
        if curve.holds() {
            Ok(())
        } else {
            Err(Fail(SqbStatus::Violation, format!("bound {name} violated at t = {t}")))
        }
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sqb_two_point_stats(p: f64, out: *mut SqbTwoPointStats) -> SqbStatus {
    guard(|| {
        let s = extremal::TwoPointFamily::new(p)?.stats();
        *out_ref(out)? = SqbTwoPointStats { third: s.third, abs_third: s.abs_third, l1_square: s.l1_square, ratio: s.ratio };
        Ok(())
    })
}

/// `g(x, y, z, sigma2)` for an admissible three-point configuration.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sqb_three_point_g(x: f64, y: f64, z: f64, sigma2: f64, out: *mut f64) -> SqbStatus {
    guard(|| {
        let cfg = extremal::ThreePointConfig::new(x, y, z, sigma2)?;
        *out_ref(out)? = extremal::three_point_g(&cfg)?;
        Ok(())
    })
}

/// Runs a verification suite by name; `count = 0` uses the suite default.
/// `report` receives the JSON report, or the counterexample when the status is `Violation`.
///
/// # Safety
/// `suite` must be a NUL-terminated string and `report` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sqb_verify(suite: *const c_char, seed: u64, count: usize, report: *mut *mut c_char) -> SqbStatus {
    guard(|| {
        let report = out_ref(report)?;
        let suite: verify::Suite = read_str(suite)?
            .parse()
            .map_err(|e: String| Fail(SqbStatus::Precondition, e))?;
        let count = (count > 0).then_some(count);
        match verify::run(suite, seed, count) {
            Ok(rep) => {
                *report = into_c_string(serde_json::to_string(&rep).expect("report serializes"));
                Ok(())
            }
            Err(c) => {
                *report = into_c_string(serde_json::to_string(&*c).expect("counterexample serializes"));
                Err(Fail(SqbStatus::Violation, c.detail.clone()))
            }
        }
    })
}
