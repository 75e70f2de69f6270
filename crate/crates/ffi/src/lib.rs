//! C interface to the `ocsca` learner.
//!
//! Every fallible function returns an [`OcscaStatus`]. On failure a message
//! is available from [`ocsca_last_error_message`] on the same thread.
//! Learners are opaque heap handles released with [`ocsca_learner_free`].
//! Labels cross the boundary as `+1` / `-1`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ocsca::persist::{load_model, save_model, SavedModel};
use ocsca::{
    BaseScorer, CostSchedule, Error, FeatureVector, Hyperparams, Label, LinearScorer, Sample,
    StepCase, StepOutcome,
};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OcscaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    ZeroVector = 4,
    NumericError = 5,
    IoError = 6,
    ParseError = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OcscaStepCase {
    Passive = 0,
    Interior = 1,
    Clamped = 2,
    SkippedZeroVector = 3,
}

/// Record of one update, mirroring the Rust `StepOutcome`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OcscaStepOutcome {
    pub margin_term: f64,
    pub raw_tau: f64,
    pub tau: f64,
    pub step_case: OcscaStepCase,
    pub loss_before: f64,
    pub loss_after: f64,
    pub cost: f64,
}

impl From<StepOutcome> for OcscaStepOutcome {
    fn from(o: StepOutcome) -> Self {
        OcscaStepOutcome {
            margin_term: o.margin_term,
            raw_tau: o.raw_tau,
            tau: o.tau,
            step_case: match o.case {
                StepCase::Passive => OcscaStepCase::Passive,
                StepCase::Interior => OcscaStepCase::Interior,
                StepCase::Clamped => OcscaStepCase::Clamped,
                StepCase::SkippedZeroVector => OcscaStepCase::SkippedZeroVector,
            },
            loss_before: o.loss_before,
            loss_after: o.loss_after,
            cost: o.cost,
        }
    }
}

/// Opaque learner handle.
pub struct OcscaLearner {
    inner: ocsca::OcscaLearner,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(OcscaStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e.root() {
            Error::DimensionMismatch { .. } => OcscaStatus::DimensionMismatch,
            Error::ZeroVector => OcscaStatus::ZeroVector,
            Error::NonFinite(_) => OcscaStatus::NumericError,
            Error::Io { .. } => OcscaStatus::IoError,
            Error::Parse { .. } | Error::Model(_) | Error::Config(_) => OcscaStatus::ParseError,
            _ => OcscaStatus::InvalidArgument,
        };
        Fail(status, e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(OcscaStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> OcscaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OcscaStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            OcscaStatus::Panic
        }
    }
}

fn label(value: c_int) -> Result<Label, Fail> {
    match value {
        1 => Ok(Label::Positive),
        -1 => Ok(Label::Negative),
        other => Err(Fail(
            OcscaStatus::InvalidArgument,
            format!("label must be +1 or -1, got {other}"),
        )),
    }
}

unsafe fn slice<'a, T>(data: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

unsafe fn learner_ref<'a>(handle: *const OcscaLearner) -> Result<&'a OcscaLearner, Fail> {
    handle.as_ref().ok_or_else(|| null("learner"))
}

unsafe fn learner_mut<'a>(handle: *mut OcscaLearner) -> Result<&'a mut OcscaLearner, Fail> {
    handle.as_mut().ok_or_else(|| null("learner"))
}

unsafe fn path_arg(path: *const c_char) -> Result<String, Fail> {
    if path.is_null() {
        return Err(null("path"));
    }
    CStr::from_ptr(path)
        .to_str()
        .map(str::to_string)
        .map_err(|_| Fail(OcscaStatus::InvalidArgument, "path is not valid UTF-8".into()))
}

unsafe fn dense(x: *const f64, len: usize) -> Result<FeatureVector, Fail> {
    Ok(FeatureVector::dense(slice(x, len, "x")?.to_vec())?)
}

unsafe fn sparse(
    dimension: usize,
    indices: *const usize,
    values: *const f64,
    nnz: usize,
) -> Result<FeatureVector, Fail> {
    let idx = slice(indices, nnz, "indices")?;
    let val = slice(values, nnz, "values")?;
    let entries = idx.iter().copied().zip(val.iter().copied()).collect();
    Ok(FeatureVector::sparse(dimension, entries)?)
}

fn build(
    base: BaseScorer,
    dimension: usize,
    cost_positive: f64,
    cost_negative: f64,
    alpha: f64,
    augment_bias: bool,
    out: *mut *mut OcscaLearner,
) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    let schedule = CostSchedule::new(cost_positive, cost_negative)?;
    let params = Hyperparams::new(alpha)?.with_bias(augment_bias);
    let inner = ocsca::OcscaLearner::new(base, dimension, schedule, params)?.with_trace(false);
    // SAFETY: checked non-null above
    unsafe { *out = Box::into_raw(Box::new(OcscaLearner { inner })) };
    Ok(())
}

/// Creates a learner over a zero base scorer (`f0 = 0`).
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn ocsca_learner_new(
    dimension: usize,
    cost_positive: f64,
    cost_negative: f64,
    alpha: f64,
    augment_bias: bool,
    out: *mut *mut OcscaLearner,
) -> OcscaStatus {
    guard(|| {
        build(
            BaseScorer::Zero,
            dimension,
            cost_positive,
            cost_negative,
            alpha,
            augment_bias,
            out,
        )
    })
}

/// Creates a learner over a linear base scorer `f0(x) = base_weights·x (+ intercept)`.
///
/// # Safety
/// `base_weights` must point to `dimension` doubles; `out` as for
/// [`ocsca_learner_new`].
#[no_mangle]
pub unsafe extern "C" fn ocsca_learner_new_linear(
    base_weights: *const f64,
    dimension: usize,
    has_intercept: bool,
    intercept: f64,
    cost_positive: f64,
    cost_negative: f64,
    alpha: f64,
    augment_bias: bool,
    out: *mut *mut OcscaLearner,
) -> OcscaStatus {
    guard(|| {
        let w = slice(base_weights, dimension, "base_weights")?.to_vec();
        let scorer = LinearScorer::new(w, has_intercept.then_some(intercept))?;
        build(
            BaseScorer::Linear(scorer),
            dimension,
            cost_positive,
            cost_negative,
            alpha,
            augment_bias,
            out,
        )
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `learner` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ocsca_learner_free(learner: *mut OcscaLearner) {
    if !learner.is_null() {
        drop(Box::from_raw(learner));
    }
}

/// Feature dimension, or 0 for a null handle.
///
/// # Safety
/// `learner` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ocsca_learner_dimension(learner: *const OcscaLearner) -> usize {
    learner.as_ref().map_or(0, |l| l.inner.dimension())
}

unsafe fn process(
    learner: *mut OcscaLearner,
    x: FeatureVector,
    y: c_int,
    out: *mut OcscaStepOutcome,
) -> Result<(), Fail> {
    let l = learner_mut(learner)?;
    let outcome = l.inner.process_sample(&Sample::new(x, label(y)?))?;
    if let Some(o) = out.as_mut() {
        *o = outcome.into();
    }
    Ok(())
}

/// Processes one dense sample. `out` may be null.
///
/// # Safety
/// `x` must point to `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ocsca_learner_process_dense(
    learner: *mut OcscaLearner,
    x: *const f64,
    len: usize,
    label: c_int,
    out: *mut OcscaStepOutcome,
) -> OcscaStatus {
    guard(|| process(learner, dense(x, len)?, label, out))
}

/// Processes one sparse sample with 0-based, strictly increasing indices.
///
/// # Safety
/// `indices` and `values` must each point to `nnz` elements.
#[no_mangle]
pub unsafe extern "C" fn ocsca_learner_process_sparse(
    learner: *mut OcscaLearner,
    indices: *const usize,
    values: *const f64,
    nnz: usize,
    label: c_int,
    out: *mut OcscaStepOutcome,
) -> OcscaStatus {
    guard(|| {
        let d = learner_ref(learner)?.inner.dimension();
        process(learner, sparse(d, indices, values, nnz)?, label, out)
    })
}

/// Writes `f(x)` to `out`.
///
/// # Safety
/// `x` must point to `len` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ocsca_learner_score_dense(
    learner: *const OcscaLearner,
    x: *const f64,
    len: usize,
    out: *mut f64,
) -> OcscaStatus {
    guard(|| {
        let l = learner_ref(learner)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = l.inner.classifier().score(&dense(x, len)?)?;
        Ok(())
    })
}

/// Writes the predicted label (`+1` / `-1`) to `out`.
///
/// # Safety
/// As for [`ocsca_learner_score_dense`].
#[no_mangle]
pub unsafe extern "C" fn ocsca_learner_predict_dense(
    learner: *const OcscaLearner,
    x: *const f64,
    len: usize,
    out: *mut c_int,
) -> OcscaStatus {
    guard(|| {
        let l = learner_ref(learner)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = match l.inner.classifier().predict(&dense(x, len)?)? {
            Label::Positive => 1,
            Label::Negative => -1,
        };
        Ok(())
    })
}

/// Copies the adaptation weights (plus the bias weight, last, if enabled)
/// into `buffer`. The required length is always written to `required`;
/// pass a null `buffer` to query it. A short buffer gives
/// `OCSCA_STATUS_INVALID_ARGUMENT`.
///
/// # Safety
/// `buffer` must have room for `capacity` doubles; `required` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ocsca_learner_weights(
    learner: *const OcscaLearner,
    buffer: *mut f64,
    capacity: usize,
    required: *mut usize,
) -> OcscaStatus {
    guard(|| {
        let w = learner_ref(learner)?.inner.weights();
        let required = required.as_mut().ok_or_else(|| null("required"))?;
        *required = w.len();
        if buffer.is_null() {
            return Ok(());
        }
        if capacity < w.len() {
            return Err(Fail(
                OcscaStatus::InvalidArgument,
                format!("buffer holds {capacity} values, {} needed", w.len()),
            ));
        }
        ptr::copy_nonoverlapping(w.as_ptr(), buffer, w.len());
        Ok(())
    })
}

/// Saves the learner to a model file (written atomically).
///
/// # Safety
/// `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ocsca_learner_save(
    learner: *const OcscaLearner,
    path: *const c_char,
) -> OcscaStatus {
    guard(|| {
        let l = learner_ref(learner)?;
        let path = path_arg(path)?;
        save_model(&SavedModel::from_learner(&l.inner), path)?;
        Ok(())
    })
}

/// Loads a model file into a new handle.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ocsca_learner_load(
    path: *const c_char,
    out: *mut *mut OcscaLearner,
) -> OcscaStatus {
    guard(|| {
        let path = path_arg(path)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = load_model(path)?.into_learner()?.with_trace(false);
        *out = Box::into_raw(Box::new(OcscaLearner { inner }));
        Ok(())
    })
}

/// Message for the most recent failure on this thread, or null. Valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ocsca_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn ocsca_status_name(status: OcscaStatus) -> *const c_char {
    let s: &'static CStr = match status {
        OcscaStatus::Ok => c"ok",
        OcscaStatus::NullPointer => c"null pointer",
        OcscaStatus::InvalidArgument => c"invalid argument",
        OcscaStatus::DimensionMismatch => c"dimension mismatch",
        OcscaStatus::ZeroVector => c"zero vector",
        OcscaStatus::NumericError => c"numeric error",
        OcscaStatus::IoError => c"i/o error",
        OcscaStatus::ParseError => c"parse error",
        OcscaStatus::Panic => c"panic",
    };
    s.as_ptr()
}
