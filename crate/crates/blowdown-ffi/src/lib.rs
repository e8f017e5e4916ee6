//! C ABI for the blowdown lattice-arithmetic library.
//!
//! Conventions:
//! - Every function returns a [`BdStatus`]; results travel through `out`
//!   pointers. No function unwinds across the boundary (panics are caught
//!   and reported as [`BdStatus::Panic`]).
//! - Manifests are opaque handles created by [`bd_manifest_parse`] or
//!   [`bd_manifest_builtin`] and released by [`bd_manifest_free`].
//! - Strings returned through `char **` are NUL-terminated, UTF-8, owned
//!   by the caller, and must be released with [`bd_string_free`].
//! - On any non-OK status, [`bd_last_error_message`] returns a
//!   human-readable description of the most recent failure on the calling
//!   thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use blowdown::basiclasses::{enumerate_basic, SearchSpec};
use blowdown::dataset;
use blowdown::error::Error;
use blowdown::kirbytrace;
use blowdown::lattice::ClassVector;
use blowdown::manifest::Manifest;
use blowdown::normalform::wall_reduce;
use blowdown::rbd::liftable_thm;
use blowdown::report;
use blowdown::swchamber::{sw_rational_surface, SwOutcome};
use blowdown::verify;

/// Status of a C ABI call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BdStatus {
    /// The call succeeded and all `out` parameters are set.
    Ok = 0,
    /// A required pointer argument was NULL.
    NullArgument = 1,
    /// Input could not be parsed or referenced an unknown name.
    InvalidInput = 2,
    /// Input parsed but violated a mathematical precondition.
    Precondition = 3,
    /// The computation ran and a verified claim or scripted expectation
    /// failed.
    CheckFailed = 4,
    /// A string argument was not valid UTF-8 (or a result could not be
    /// encoded as a C string).
    InvalidUtf8 = 5,
    /// An internal panic was caught at the boundary.
    Panic = 6,
}

/// An opaque parsed manifest.
pub struct BdManifest {
    manifest: Manifest,
    label: String,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: impl Into<Vec<u8>>) {
    let stored = CString::new(message).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(stored));
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn status_of(error: &Error) -> BdStatus {
    match error {
        Error::ManifestParse { .. }
        | Error::ScriptParse { .. }
        | Error::UnknownName { .. }
        | Error::DimensionMismatch { .. }
        | Error::NotCharacteristic { .. }
        | Error::InvalidChain { .. }
        | Error::InvalidSearch { .. }
        | Error::InvalidModel { .. }
        | Error::InvalidChamber { .. } => BdStatus::InvalidInput,
        Error::MoveRejected { .. } => BdStatus::CheckFailed,
        _ => BdStatus::Precondition,
    }
}

fn fail(error: &Error) -> BdStatus {
    set_last_error(error.to_string());
    status_of(error)
}

/// Runs `body` with panics converted to [`BdStatus::Panic`] and clears the
/// thread-local error slot on entry.
fn guarded(body: impl FnOnce() -> BdStatus) -> BdStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(panic) => {
            let message = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "internal panic".to_string());
            set_last_error(message);
            BdStatus::Panic
        }
    }
}

/// Reads a required UTF-8 C string argument.
///
/// # Safety
/// `ptr` must be NULL or point to a NUL-terminated string valid for the
/// duration of the call.
unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, BdStatus> {
    if ptr.is_null() {
        set_last_error("required string argument is NULL");
        return Err(BdStatus::NullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|e| {
        set_last_error(format!("argument is not valid UTF-8: {e}"));
        BdStatus::InvalidUtf8
    })
}

fn write_string(out: *mut *mut c_char, text: String) -> BdStatus {
    match CString::new(text) {
        Ok(c) => {
            // SAFETY: the caller guaranteed `out` is a valid writable
            // pointer (checked non-null before calling).
            unsafe { *out = c.into_raw() };
            BdStatus::Ok
        }
        Err(e) => {
            set_last_error(format!("result contains an interior NUL byte: {e}"));
            BdStatus::InvalidUtf8
        }
    }
}

/// Reads a coordinate array argument into a class vector.
///
/// # Safety
/// `coords` must point to `len` readable `int64_t` values.
unsafe fn read_coords(coords: *const i64, len: usize) -> Result<ClassVector, BdStatus> {
    if coords.is_null() {
        set_last_error("coordinate array is NULL");
        return Err(BdStatus::NullArgument);
    }
    let slice = std::slice::from_raw_parts(coords, len);
    Ok(ClassVector::from_i64(slice))
}

/// Library version as a static NUL-terminated string. Do not free.
#[no_mangle]
pub extern "C" fn bd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Returns the most recent error message on this thread as a new string,
/// or NULL when the last call succeeded. The caller owns the result and
/// must release it with [`bd_string_free`].
#[no_mangle]
pub extern "C" fn bd_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|c| c.clone().into_raw())
            .unwrap_or(ptr::null_mut())
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be NULL or a pointer previously returned through a `char **`
/// out parameter (or [`bd_last_error_message`]) of this library, not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn bd_string_free(s: *mut c_char) {
    if s.is_null() {
        return;
    }
    drop(CString::from_raw(s));
}

/// Parses manifest text into an opaque handle.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be a valid writable
/// pointer. On success `*out` owns the handle and must be released with
/// [`bd_manifest_free`].
#[no_mangle]
pub unsafe extern "C" fn bd_manifest_parse(
    text: *const c_char,
    out: *mut *mut BdManifest,
) -> BdStatus {
    if out.is_null() {
        set_last_error("out pointer is NULL");
        return BdStatus::NullArgument;
    }
    let text = match read_str(text) {
        Ok(t) => t.to_owned(),
        Err(status) => return status,
    };
    guarded(|| match Manifest::parse(&text) {
        Ok(manifest) => {
            let handle = Box::new(BdManifest {
                manifest,
                label: "manifest".to_owned(),
            });
            *out = Box::into_raw(handle);
            BdStatus::Ok
        }
        Err(e) => fail(&e),
    })
}

/// Loads a builtin manifest by name (see `bd_dataset_json` for the list).
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be a valid writable
/// pointer. On success `*out` owns the handle and must be released with
/// [`bd_manifest_free`].
#[no_mangle]
pub unsafe extern "C" fn bd_manifest_builtin(
    name: *const c_char,
    out: *mut *mut BdManifest,
) -> BdStatus {
    if out.is_null() {
        set_last_error("out pointer is NULL");
        return BdStatus::NullArgument;
    }
    let name = match read_str(name) {
        Ok(n) => n.to_owned(),
        Err(status) => return status,
    };
    guarded(|| {
        let Some(text) = dataset::builtin_manifest(&name) else {
            return fail(&Error::UnknownName { name: name.clone() });
        };
        match Manifest::parse(text) {
            Ok(manifest) => {
                let handle = Box::new(BdManifest {
                    manifest,
                    label: name.clone(),
                });
                *out = Box::into_raw(handle);
                BdStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Releases a manifest handle.
///
/// # Safety
/// `handle` must be NULL or a pointer returned by [`bd_manifest_parse`] or
/// [`bd_manifest_builtin`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bd_manifest_free(handle: *mut BdManifest) {
    if handle.is_null() {
        return;
    }
    drop(Box::from_raw(handle));
}

/// Serializes a manifest's JSON mirror.
///
/// # Safety
/// `handle` must be a live manifest handle; `out` must be a valid writable
/// pointer. The result string must be released with [`bd_string_free`].
#[no_mangle]
pub unsafe extern "C" fn bd_manifest_to_json(
    handle: *const BdManifest,
    out: *mut *mut c_char,
) -> BdStatus {
    if handle.is_null() || out.is_null() {
        set_last_error("handle or out pointer is NULL");
        return BdStatus::NullArgument;
    }
    let handle = &*handle;
    guarded(|| write_string(out, handle.manifest.to_json().to_string()))
}

/// Enumerates basic classes for the manifest's chamber and writes the
/// report's JSON mirror.
///
/// # Safety
/// `handle` must be a live manifest handle; `out` must be a valid writable
/// pointer. The result string must be released with [`bd_string_free`].
#[no_mangle]
pub unsafe extern "C" fn bd_enumerate_json(
    handle: *const BdManifest,
    workers: usize,
    out: *mut *mut c_char,
) -> BdStatus {
    if handle.is_null() || out.is_null() {
        set_last_error("handle or out pointer is NULL");
        return BdStatus::NullArgument;
    }
    let handle = &*handle;
    guarded(|| {
        let run = || -> Result<String, Error> {
            let resolved = handle.manifest.resolve(handle.label.clone())?;
            let model = resolved.model()?;
            let rep = resolved.chamber.clone().ok_or_else(|| Error::ManifestParse {
                line: 0,
                reason: "manifest declares no chamber; enumeration needs one".into(),
            })?;
            let chamber = model.chamber(rep)?;
            let mut spec = SearchSpec::new(&model, &chamber);
            spec.workers = workers.max(1);
            let report = enumerate_basic(&spec)?;
            Ok(report::sw_report_json(&report).to_string())
        };
        match run() {
            Ok(json) => write_string(out, json),
            Err(e) => fail(&e),
        }
    })
}

/// Chamber SW value of a characteristic class on the manifest's model, in
/// the manifest's chamber. A moduli space that is empty for dimension
/// reasons writes 0 and sets `dimension_forced`.
///
/// # Safety
/// `handle` must be a live manifest handle; `coords` must point to `len`
/// readable values; `out_value` must be a valid writable pointer;
/// `dimension_forced` may be NULL when the caller does not need it.
#[no_mangle]
pub unsafe extern "C" fn bd_sw_value(
    handle: *const BdManifest,
    coords: *const i64,
    len: usize,
    out_value: *mut i64,
    dimension_forced: *mut bool,
) -> BdStatus {
    if handle.is_null() || out_value.is_null() {
        set_last_error("handle or out pointer is NULL");
        return BdStatus::NullArgument;
    }
    let handle = &*handle;
    let class = match read_coords(coords, len) {
        Ok(v) => v,
        Err(status) => return status,
    };
    guarded(|| {
        let run = || -> Result<SwOutcome, Error> {
            let resolved = handle.manifest.resolve(handle.label.clone())?;
            let model = resolved.model()?;
            let rep = resolved.chamber.clone().ok_or_else(|| Error::ManifestParse {
                line: 0,
                reason: "manifest declares no chamber".into(),
            })?;
            let chamber = model.chamber(rep)?;
            sw_rational_surface(&model, &class, &chamber)
        };
        match run() {
            Ok(outcome) => {
                let forced = outcome == SwOutcome::NegativeDimension;
                let value = outcome.value();
                let Ok(value) = i64::try_from(value.clone()) else {
                    set_last_error(format!("SW value {value} does not fit in int64"));
                    return BdStatus::Precondition;
                };
                *out_value = value;
                if !dimension_forced.is_null() {
                    *dimension_forced = forced;
                }
                BdStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Decides descent of a characteristic class through the manifest's named
/// configuration (pass NULL to use the manifest's only configuration).
///
/// # Safety
/// `handle` must be a live manifest handle; `config_name` may be NULL;
/// `coords` must point to `len` readable values; `out_liftable` must be a
/// valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn bd_lift_check(
    handle: *const BdManifest,
    config_name: *const c_char,
    coords: *const i64,
    len: usize,
    out_liftable: *mut bool,
) -> BdStatus {
    if handle.is_null() || out_liftable.is_null() {
        set_last_error("handle or out pointer is NULL");
        return BdStatus::NullArgument;
    }
    let handle = &*handle;
    let name = if config_name.is_null() {
        None
    } else {
        match read_str(config_name) {
            Ok(n) => Some(n.to_owned()),
            Err(status) => return status,
        }
    };
    let class = match read_coords(coords, len) {
        Ok(v) => v,
        Err(status) => return status,
    };
    guarded(|| {
        let run = || -> Result<bool, Error> {
            let resolved = handle.manifest.resolve(handle.label.clone())?;
            let cfg = resolved.config(name.as_deref())?;
            Ok(liftable_thm(&resolved.ambient, &class, cfg)?.liftable)
        };
        match run() {
            Ok(liftable) => {
                *out_liftable = liftable;
                BdStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Reduces a characteristic vector (coordinates `h, e1, ..., em`) to its
/// normal form and writes a JSON object with the result, the step count,
/// and the basis images of the reducing isometry.
///
/// # Safety
/// `coords` must point to `len` readable values; `out` must be a valid
/// writable pointer. The result string must be released with
/// [`bd_string_free`].
#[no_mangle]
pub unsafe extern "C" fn bd_reduce_json(
    coords: *const i64,
    len: usize,
    out: *mut *mut c_char,
) -> BdStatus {
    if out.is_null() {
        set_last_error("out pointer is NULL");
        return BdStatus::NullArgument;
    }
    let class = match read_coords(coords, len) {
        Ok(v) => v,
        Err(status) => return status,
    };
    guarded(|| {
        if len == 0 {
            return fail(&Error::DimensionMismatch {
                expected: 9,
                found: 0,
            });
        }
        match wall_reduce(len - 1, &class) {
            Ok(reduction) => {
                let coords_json = |v: &ClassVector| -> serde_json::Value {
                    v.coords()
                        .iter()
                        .map(|c| {
                            i64::try_from(c.clone())
                                .map(serde_json::Value::from)
                                .unwrap_or_else(|_| serde_json::Value::from(c.to_string()))
                        })
                        .collect()
                };
                let images: Vec<serde_json::Value> =
                    reduction.iso.images().iter().map(coords_json).collect();
                let json = serde_json::json!({
                    "result": coords_json(&reduction.result),
                    "steps": reduction.steps,
                    "negated": reduction.negated,
                    "images": images,
                });
                write_string(out, json.to_string())
            }
            Err(e) => fail(&e),
        }
    })
}

/// Replays handle-move script text and writes the outcome's JSON mirror.
/// A script whose moves or expectations fail returns
/// [`BdStatus::CheckFailed`] with the detail in the error message.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be a valid writable
/// pointer. The result string must be released with [`bd_string_free`].
#[no_mangle]
pub unsafe extern "C" fn bd_replay_json(
    text: *const c_char,
    out: *mut *mut c_char,
) -> BdStatus {
    if out.is_null() {
        set_last_error("out pointer is NULL");
        return BdStatus::NullArgument;
    }
    let text = match read_str(text) {
        Ok(t) => t.to_owned(),
        Err(status) => return status,
    };
    guarded(|| {
        let run = || -> Result<String, Error> {
            let script = kirbytrace::parse_script(&text)?;
            let outcome = kirbytrace::replay(&script)?;
            Ok(report::replay_json(&outcome).to_string())
        };
        match run() {
            Ok(json) => write_string(out, json),
            Err(e) => fail(&e),
        }
    })
}

/// Replays a builtin script by name and writes the outcome's JSON mirror.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be a valid writable
/// pointer. The result string must be released with [`bd_string_free`].
#[no_mangle]
pub unsafe extern "C" fn bd_replay_builtin_json(
    name: *const c_char,
    out: *mut *mut c_char,
) -> BdStatus {
    if out.is_null() {
        set_last_error("out pointer is NULL");
        return BdStatus::NullArgument;
    }
    let name = match read_str(name) {
        Ok(n) => n.to_owned(),
        Err(status) => return status,
    };
    guarded(|| match kirbytrace::replay_builtin(&name) {
        Ok(outcome) => write_string(out, report::replay_json(&outcome).to_string()),
        Err(e) => fail(&e),
    })
}

/// Runs the verification battery (pass NULL to run every section, or a
/// section name/prefix) and writes the section report's JSON mirror. All
/// checks passing returns OK; any failing check returns
/// [`BdStatus::CheckFailed`] with the JSON still written.
///
/// # Safety
/// `section` may be NULL; `out` must be a valid writable pointer. The
/// result string must be released with [`bd_string_free`].
#[no_mangle]
pub unsafe extern "C" fn bd_verify_json(
    section: *const c_char,
    out: *mut *mut c_char,
) -> BdStatus {
    if out.is_null() {
        set_last_error("out pointer is NULL");
        return BdStatus::NullArgument;
    }
    let filter = if section.is_null() {
        None
    } else {
        match read_str(section) {
            Ok(s) => Some(s.to_owned()),
            Err(status) => return status,
        }
    };
    guarded(|| {
        let selected: Vec<&'static str> = match &filter {
            None => verify::SECTION_NAMES.to_vec(),
            Some(f) => {
                let exact: Vec<&'static str> = verify::SECTION_NAMES
                    .iter()
                    .copied()
                    .filter(|n| n == f)
                    .collect();
                if exact.is_empty() {
                    verify::SECTION_NAMES
                        .iter()
                        .copied()
                        .filter(|n| n.starts_with(f.as_str()))
                        .collect()
                } else {
                    exact
                }
            }
        };
        if selected.is_empty() {
            return fail(&Error::UnknownName {
                name: filter.unwrap_or_default(),
            });
        }
        let sections: Result<Vec<verify::Section>, Error> =
            selected.iter().map(|n| verify::run_section(n)).collect();
        match sections {
            Ok(sections) => {
                let passed = report::all_passed(&sections);
                let status = write_string(out, report::sections_json(&sections).to_string());
                if status != BdStatus::Ok {
                    return status;
                }
                if passed {
                    BdStatus::Ok
                } else {
                    set_last_error("one or more verification checks failed");
                    BdStatus::CheckFailed
                }
            }
            Err(e) => fail(&e),
        }
    })
}

/// Writes the embedded dataset (manifest and script texts, keyed by name)
/// as a JSON object.
///
/// # Safety
/// `out` must be a valid writable pointer. The result string must be
/// released with [`bd_string_free`].
#[no_mangle]
pub unsafe extern "C" fn bd_dataset_json(out: *mut *mut c_char) -> BdStatus {
    if out.is_null() {
        set_last_error("out pointer is NULL");
        return BdStatus::NullArgument;
    }
    guarded(|| {
        let manifests: serde_json::Map<String, serde_json::Value> = dataset::MANIFEST_NAMES
            .iter()
            .map(|n| {
                (
                    n.to_string(),
                    serde_json::Value::from(dataset::builtin_manifest(n).unwrap_or_default()),
                )
            })
            .collect();
        let scripts: serde_json::Map<String, serde_json::Value> = dataset::SCRIPT_NAMES
            .iter()
            .map(|n| {
                (
                    n.to_string(),
                    serde_json::Value::from(dataset::builtin_script(n).unwrap_or_default()),
                )
            })
            .collect();
        let json = serde_json::json!({ "manifests": manifests, "scripts": scripts });
        write_string(out, json.to_string())
    })
}
