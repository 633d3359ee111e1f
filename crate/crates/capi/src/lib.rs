//! C ABI over the ieh core library.
//!
//! Objects cross the boundary as opaque handles; every fallible call returns
//! an `IehStatus` and writes results through out-pointers. The most recent
//! error message per thread is available via `ieh_last_error_message`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use ieh_core::error::Error;
use ieh_core::propagator::UnitaryMatrix;
use ieh_core::schedule::Schedule;
use ieh_core::spectral::{SingleQubitParams, State2};
use ieh_core::C64;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IehStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DomainError = 3,
    NumericalFailure = 4,
    Utf8Error = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> IehStatus {
    match err {
        Error::QuadratureFailure { .. } | Error::UnboundedDerivative { .. } => {
            IehStatus::NumericalFailure
        }
        Error::Domain(_) => IehStatus::DomainError,
        _ => IehStatus::InvalidArgument,
    }
}

fn fail(err: &Error) -> IehStatus {
    set_error(&err.to_string());
    status_of(err)
}

/// Opaque normalized-time schedule handle.
pub struct IehSchedule(Schedule);

/// Opaque single-qubit protocol handle (θ, varphi, ϕ schedules plus τ).
pub struct IehSingleQubitParams(SingleQubitParams);

/// Returns the error message of the last failed call on this thread, or
/// null if none. The pointer stays valid until the next failed call.
#[no_mangle]
pub extern "C" fn ieh_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses a schedule from its JSON description, e.g.
/// `{"kind":"linear","end_value":3.14}`.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ieh_schedule_from_json(
    json: *const c_char,
    out: *mut *mut IehSchedule,
) -> IehStatus {
    if json.is_null() || out.is_null() {
        set_error("null pointer argument");
        return IehStatus::NullPointer;
    }
    let text = match CStr::from_ptr(json).to_str() {
        Ok(t) => t,
        Err(_) => {
            set_error("schedule JSON is not valid UTF-8");
            return IehStatus::Utf8Error;
        }
    };
    let schedule: Schedule = match serde_json::from_str(text) {
        Ok(s) => s,
        Err(e) => {
            set_error(&format!("schedule JSON parse error: {e}"));
            return IehStatus::InvalidArgument;
        }
    };
    if let Err(e) = schedule.validate() {
        return fail(&e);
    }
    *out = Box::into_raw(Box::new(IehSchedule(schedule)));
    IehStatus::Ok
}

/// Frees a schedule handle; null is ignored.
///
/// # Safety
/// `handle` must come from `ieh_schedule_from_json` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ieh_schedule_free(handle: *mut IehSchedule) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

unsafe fn schedule_eval(
    handle: *const IehSchedule,
    s: f64,
    out: *mut f64,
    f: impl Fn(&Schedule, f64) -> ieh_core::Result<f64>,
) -> IehStatus {
    if handle.is_null() || out.is_null() {
        set_error("null pointer argument");
        return IehStatus::NullPointer;
    }
    match f(&(*handle).0, s) {
        Ok(v) => {
            *out = v;
            IehStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Evaluates a schedule at normalized time `s ∈ [0, 1]`.
///
/// # Safety
/// `handle` must be a live schedule handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ieh_schedule_evaluate(
    handle: *const IehSchedule,
    s: f64,
    out: *mut f64,
) -> IehStatus {
    schedule_eval(handle, s, out, |sch, s| sch.evaluate(s))
}

/// Evaluates a schedule's normalized-time derivative at `s ∈ [0, 1]`.
///
/// # Safety
/// `handle` must be a live schedule handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ieh_schedule_derivative(
    handle: *const IehSchedule,
    s: f64,
    out: *mut f64,
) -> IehStatus {
    schedule_eval(handle, s, out, |sch, s| sch.derivative(s))
}

/// Solves for the cycloid ratio `r` with end value `target_end ∈ (0, π/2]`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ieh_solve_cycloid_ratio(target_end: f64, out: *mut f64) -> IehStatus {
    if out.is_null() {
        set_error("null pointer argument");
        return IehStatus::NullPointer;
    }
    match ieh_core::schedule::solve_cycloid_ratio(target_end) {
        Ok(r) => {
            *out = r;
            IehStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Builds a single-qubit protocol from three schedule handles and τ. The
/// schedule handles are copied and remain owned by the caller.
///
/// # Safety
/// All handles must be live and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ieh_params_new(
    theta: *const IehSchedule,
    varphi: *const IehSchedule,
    phi: *const IehSchedule,
    tau: f64,
    out: *mut *mut IehSingleQubitParams,
) -> IehStatus {
    if theta.is_null() || varphi.is_null() || phi.is_null() || out.is_null() {
        set_error("null pointer argument");
        return IehStatus::NullPointer;
    }
    match SingleQubitParams::new(
        (*theta).0.clone(),
        (*varphi).0.clone(),
        (*phi).0.clone(),
        tau,
    ) {
        Ok(p) => {
            *out = Box::into_raw(Box::new(IehSingleQubitParams(p)));
            IehStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Frees a protocol handle; null is ignored.
///
/// # Safety
/// `handle` must come from `ieh_params_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ieh_params_free(handle: *mut IehSingleQubitParams) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Sensitivity `q_S` of a protocol for the input state
/// `(a_re + i a_im)|0⟩ + (b_re + i b_im)|1⟩` (must be normalized).
///
/// # Safety
/// `params` must be a live protocol handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ieh_sensitivity_general(
    params: *const IehSingleQubitParams,
    a_re: f64,
    a_im: f64,
    b_re: f64,
    b_im: f64,
    out: *mut f64,
) -> IehStatus {
    if params.is_null() || out.is_null() {
        set_error("null pointer argument");
        return IehStatus::NullPointer;
    }
    let input = State2::new(C64::new(a_re, a_im), C64::new(b_re, b_im));
    match ieh_core::robustness::sensitivity_general(&(*params).0, &input) {
        Ok(r) => {
            *out = r.q_s;
            IehStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Closed-form constant-θ sensitivity (corrected variant).
#[no_mangle]
pub extern "C" fn ieh_sensitivity_case_one_closed(theta0: f64, phi_end: f64) -> f64 {
    ieh_core::robustness::sensitivity_case_one_closed(theta0, phi_end)
}

/// Closed-form constant-θ sensitivity, commonly printed variant (for
/// discrepancy reporting; see the library documentation).
#[no_mangle]
pub extern "C" fn ieh_sensitivity_case_one_printed(theta0: f64, phi_end: f64) -> f64 {
    ieh_core::robustness::sensitivity_case_one_printed(theta0, phi_end)
}

/// Second-order fidelity prediction `P(ε) = 1 − ε² q_S`.
#[no_mangle]
pub extern "C" fn ieh_predicted_fidelity(q_s: f64, epsilon: f64) -> f64 {
    ieh_core::robustness::predicted_fidelity(q_s, epsilon)
}

unsafe fn matrix_from_flat(dim: usize, re: *const f64, im: *const f64) -> Option<UnitaryMatrix> {
    let n = dim * dim;
    let re = std::slice::from_raw_parts(re, n);
    let im = std::slice::from_raw_parts(im, n);
    let at = |i: usize, j: usize| C64::new(re[i * dim + j], im[i * dim + j]);
    match dim {
        2 => Some(UnitaryMatrix::Dim2(ieh_core::Mat2::from_fn(at))),
        4 => Some(UnitaryMatrix::Dim4(ieh_core::Mat4::from_fn(at))),
        _ => None,
    }
}

/// Global-phase-insensitive gate fidelity `|tr(target† · actual)| / dim`
/// between two `dim × dim` matrices given as row-major real and imaginary
/// parts. `dim` must be 2 or 4.
///
/// # Safety
/// Each array pointer must reference `dim * dim` readable doubles and `out`
/// must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ieh_gate_fidelity(
    dim: usize,
    actual_re: *const f64,
    actual_im: *const f64,
    target_re: *const f64,
    target_im: *const f64,
    out: *mut f64,
) -> IehStatus {
    if actual_re.is_null()
        || actual_im.is_null()
        || target_re.is_null()
        || target_im.is_null()
        || out.is_null()
    {
        set_error("null pointer argument");
        return IehStatus::NullPointer;
    }
    let (Some(actual), Some(target)) = (
        matrix_from_flat(dim, actual_re, actual_im),
        matrix_from_flat(dim, target_re, target_im),
    ) else {
        set_error(&format!("dimension {dim} not supported (expected 2 or 4)"));
        return IehStatus::InvalidArgument;
    };
    match ieh_core::propagator::gate_fidelity(&actual, &target) {
        Ok(f) => {
            *out = f;
            IehStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;
    use std::f64::consts::PI;

    unsafe fn make_schedule(json: &str) -> *mut IehSchedule {
        let c = CString::new(json).unwrap();
        let mut handle: *mut IehSchedule = ptr::null_mut();
        assert_eq!(ieh_schedule_from_json(c.as_ptr(), &mut handle), IehStatus::Ok);
        handle
    }

    #[test]
    fn schedule_round_trip() {
        unsafe {
            let h = make_schedule(r#"{"kind":"linear","end_value":3.0}"#);
            let mut v = 0.0;
            assert_eq!(ieh_schedule_evaluate(h, 0.5, &mut v), IehStatus::Ok);
            assert!((v - 1.5).abs() < 1e-15);
            assert_eq!(ieh_schedule_derivative(h, 0.5, &mut v), IehStatus::Ok);
            assert!((v - 3.0).abs() < 1e-15);
            ieh_schedule_free(h);
        }
    }

    #[test]
    fn invalid_json_sets_error_message() {
        unsafe {
            let c = CString::new("{nope").unwrap();
            let mut handle: *mut IehSchedule = ptr::null_mut();
            assert_eq!(
                ieh_schedule_from_json(c.as_ptr(), &mut handle),
                IehStatus::InvalidArgument
            );
            let msg = ieh_last_error_message();
            assert!(!msg.is_null());
            assert!(!CStr::from_ptr(msg).to_str().unwrap().is_empty());
        }
    }

    #[test]
    fn sensitivity_through_the_abi() {
        unsafe {
            let theta = make_schedule(r#"{"kind":"constant","value":0.7853981633974483}"#);
            let varphi = make_schedule(r#"{"kind":"linear","end_value":3.141592653589793}"#);
            let phi = make_schedule(r#"{"kind":"constant","value":0.0}"#);
            let mut params: *mut IehSingleQubitParams = ptr::null_mut();
            assert_eq!(ieh_params_new(theta, varphi, phi, 1.0, &mut params), IehStatus::Ok);
            let mut q = 0.0;
            assert_eq!(
                ieh_sensitivity_general(params, 1.0, 0.0, 0.0, 0.0, &mut q),
                IehStatus::Ok
            );
            assert!((q - (8.0 + PI * PI) / 32.0).abs() < 1e-6);
            assert!(
                (q - ieh_sensitivity_case_one_closed(PI / 4.0, PI)).abs() < 1e-6
            );
            ieh_params_free(params);
            ieh_schedule_free(theta);
            ieh_schedule_free(varphi);
            ieh_schedule_free(phi);
        }
    }

    #[test]
    fn cycloid_solver_and_fidelity() {
        unsafe {
            let mut r = 0.0;
            assert_eq!(ieh_solve_cycloid_ratio(PI / 4.0, &mut r), IehStatus::Ok);
            assert!((r - 0.69294).abs() < 1e-4);

            let id_re = [1.0, 0.0, 0.0, 1.0];
            let zeros = [0.0; 4];
            let mut f = 0.0;
            assert_eq!(
                ieh_gate_fidelity(
                    2,
                    id_re.as_ptr(),
                    zeros.as_ptr(),
                    id_re.as_ptr(),
                    zeros.as_ptr(),
                    &mut f
                ),
                IehStatus::Ok
            );
            assert!((f - 1.0).abs() < 1e-15);
        }
    }
}
