//! C ABI over the eegaug augmentation core.
//!
//! Policies are parsed once into an opaque [`EegaugPolicy`] handle and then
//! applied to caller-owned `float32` buffers laid out as `B x C x T`
//! (row-major). Every fallible entry point returns an `int32_t` status:
//! [`EEGAUG_OK`] on success, otherwise a code whose message is available from
//! [`eegaug_last_error_message`] on the calling thread.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use libc::{c_char, size_t};

use eegaug::{apply_policy, Dataset, EegWindow, Error, Montage, Policy};

pub const EEGAUG_OK: i32 = 0;
/// A required pointer argument was null.
pub const EEGAUG_ERR_NULL: i32 = 1;
/// A string argument was not valid UTF-8.
pub const EEGAUG_ERR_UTF8: i32 = 2;
/// The core panicked; the message holds the panic payload.
pub const EEGAUG_ERR_PANIC: i32 = 3;
/// Codes 10 and above are the core library's error codes.
pub const EEGAUG_ERR_CORE_MIN: i32 = 10;

/// Parsed augmentation policy. Create with [`eegaug_policy_from_json`],
/// release with [`eegaug_policy_free`].
pub struct EegaugPolicy {
    policy: Policy,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let text = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

enum Failure {
    Null(&'static str),
    Utf8(&'static str),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn guarded(f: impl FnOnce() -> Result<(), Failure>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EEGAUG_OK,
        Ok(Err(Failure::Null(arg))) => {
            set_last_error(&format!("null pointer passed for {arg}"));
            EEGAUG_ERR_NULL
        }
        Ok(Err(Failure::Utf8(arg))) => {
            set_last_error(&format!("{arg} is not valid UTF-8"));
            EEGAUG_ERR_UTF8
        }
        Ok(Err(Failure::Core(e))) => {
            set_last_error(&e.to_string());
            e.code()
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_last_error(&format!("internal panic: {msg}"));
            EEGAUG_ERR_PANIC
        }
    }
}

unsafe fn c_str<'a>(p: *const c_char, arg: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(arg));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::Utf8(arg))
}

/// Montage for `channels` rows: standard 10-20 positions when every name is
/// known, names only otherwise, and generated names when `names` is null.
unsafe fn montage(names: *const *const c_char, channels: usize) -> Result<Montage, Failure> {
    if names.is_null() {
        let generated: Vec<String> = (0..channels).map(|c| format!("ch{c}")).collect();
        return Ok(Montage::from_names(&generated));
    }
    let mut list = Vec::with_capacity(channels);
    for c in 0..channels {
        list.push(c_str(*names.add(c), "channel_names[i]")?.to_string());
    }
    match Montage::from_standard(&list) {
        Ok(m) => Ok(m),
        Err(Error::MissingPositions(_)) => Ok(Montage::from_names(&list)),
        Err(e) => Err(e.into()),
    }
}

unsafe fn read_window(
    input: *const f32,
    channels: usize,
    samples: usize,
    sfreq: f64,
) -> Result<EegWindow, Failure> {
    let src = std::slice::from_raw_parts(input, channels * samples);
    let data: Vec<f64> = src.iter().map(|&v| f64::from(v)).collect();
    let array = eegaug::ndarray::Array2::from_shape_vec((channels, samples), data)
        .map_err(|e| Error::Size(e.to_string()))?;
    Ok(EegWindow::new(array, sfreq, 0)?)
}

fn write_window(w: &EegWindow, out: &mut [f32]) -> Result<(), Failure> {
    for (dst, &v) in out.iter_mut().zip(w.data().iter()) {
        let narrowed = v as f32;
        if !narrowed.is_finite() {
            return Err(Error::Data(format!("augmented value {v} does not fit in float32")).into());
        }
        *dst = narrowed;
    }
    Ok(())
}

fn checked_len(a: usize, b: usize, c: usize) -> Result<usize, Failure> {
    a.checked_mul(b)
        .and_then(|n| n.checked_mul(c))
        .ok_or_else(|| Error::Size("buffer size overflows".into()).into())
}

/// Parses a policy from JSON (`{seed, epoch, specs: [{name, params, p_aug}]}`).
///
/// On success `*out` receives a new handle owned by the caller.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn eegaug_policy_from_json(
    json: *const c_char,
    out: *mut *mut EegaugPolicy,
) -> i32 {
    guarded(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        *out = ptr::null_mut();
        let text = c_str(json, "json")?;
        let policy = Policy::from_json(text)?;
        *out = Box::into_raw(Box::new(EegaugPolicy { policy }));
        Ok(())
    })
}

/// Releases a policy handle. Null is ignored.
///
/// # Safety
/// `policy` must come from [`eegaug_policy_from_json`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn eegaug_policy_free(policy: *mut EegaugPolicy) {
    if !policy.is_null() {
        drop(Box::from_raw(policy));
    }
}

/// Augments `batch` windows of `channels x samples` values.
///
/// Window `b` uses window index `b` and the given `epoch`, so the output is
/// bitwise equal to the core `apply_policy` on the same data. `channel_names`
/// may be null; spatial transforms then fail for lack of geometry.
/// `input` and `output` may alias.
///
/// # Safety
/// `input` and `output` must each hold `batch * channels * samples` floats;
/// `channel_names`, when not null, must hold `channels` C strings.
#[no_mangle]
pub unsafe extern "C" fn eegaug_augment_batch(
    policy: *const EegaugPolicy,
    input: *const f32,
    output: *mut f32,
    batch: size_t,
    channels: size_t,
    samples: size_t,
    sfreq: f64,
    channel_names: *const *const c_char,
    epoch: u64,
) -> i32 {
    guarded(|| {
        let policy = policy.as_ref().ok_or(Failure::Null("policy"))?;
        if input.is_null() {
            return Err(Failure::Null("input"));
        }
        if output.is_null() {
            return Err(Failure::Null("output"));
        }
        let total = checked_len(batch, channels, samples)?;
        let montage = montage(channel_names, channels)?;
        let stride = channels * samples;
        let windows = (0..batch)
            .map(|b| read_window(input.add(b * stride), channels, samples, sfreq))
            .collect::<Result<Vec<_>, _>>()?;
        let zeros = vec![0u32; batch];
        let d = Dataset::new(montage, samples, sfreq, windows, zeros.clone(), zeros)?;
        let augmented = apply_policy(&policy.policy.with_epoch(epoch), &d)?;
        let out = std::slice::from_raw_parts_mut(output, total);
        for (w, chunk) in augmented.windows().iter().zip(out.chunks_mut(stride.max(1))) {
            write_window(w, chunk)?;
        }
        Ok(())
    })
}

/// Augments one `channels x samples` window with an explicit window index.
///
/// # Safety
/// As for [`eegaug_augment_batch`] with `batch = 1`.
#[no_mangle]
pub unsafe extern "C" fn eegaug_augment_window(
    policy: *const EegaugPolicy,
    input: *const f32,
    output: *mut f32,
    channels: size_t,
    samples: size_t,
    sfreq: f64,
    channel_names: *const *const c_char,
    window_index: u64,
    epoch: u64,
) -> i32 {
    guarded(|| {
        let policy = policy.as_ref().ok_or(Failure::Null("policy"))?;
        if input.is_null() {
            return Err(Failure::Null("input"));
        }
        if output.is_null() {
            return Err(Failure::Null("output"));
        }
        let total = checked_len(1, channels, samples)?;
        let montage = montage(channel_names, channels)?;
        let w = read_window(input, channels, samples, sfreq)?;
        let p = policy.policy.with_epoch(epoch);
        p.check_compatible(&montage, samples, sfreq)?;
        let (augmented, _) = p.augment_window(&w, window_index, &montage)?;
        write_window(&augmented, std::slice::from_raw_parts_mut(output, total))
    })
}

/// Message of the last failed call on this thread, or an empty string.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn eegaug_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn eegaug_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
