//! C ABI for hotspot queries.
//!
//! An index is an opaque `HsIndex*` owned by the caller and released with
//! `hs_index_free`. Every fallible call returns an `HsStatus`; on failure a
//! description is available from `hs_last_error_message` on the same thread.
//! The header `include/hotspot.h` is generated by cbindgen at build time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;

use hotspot::io::parse_trajectory;
use hotspot::oracle::verify_witness;
use hotspot::{Error, HotspotIndex, Square, Trajectory, Vertex, Window, Witness};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidTrajectory = 2,
    InvalidSide = 3,
    InvalidWindow = 4,
    InvalidRange = 5,
    Parse = 6,
    Io = 7,
    Internal = 8,
}

/// A square `[square_x, square_x + side] × [square_y, square_y + side]`
/// containing the trajectory over `[start, end]`; `score = end - start`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HsWitness {
    pub square_x: f64,
    pub square_y: f64,
    pub side: f64,
    pub start: f64,
    pub end: f64,
    pub score: f64,
}

impl From<Witness> for HsWitness {
    fn from(w: Witness) -> Self {
        Self {
            square_x: w.square.anchor_x,
            square_y: w.square.anchor_y,
            side: w.square.side,
            start: w.interval.start,
            end: w.interval.end,
            score: w.score,
        }
    }
}

impl From<HsWitness> for Witness {
    fn from(w: HsWitness) -> Self {
        Witness {
            square: Square { anchor_x: w.square_x, anchor_y: w.square_y, side: w.side },
            interval: Window { start: w.start, end: w.end },
            score: w.score,
        }
    }
}

/// Opaque index handle.
pub struct HsIndex {
    inner: HotspotIndex,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: impl Into<Vec<u8>>) {
    let msg = CString::new(msg).unwrap_or_else(|_| CString::new("error message contained NUL").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(msg));
}

fn fail(status: HsStatus, msg: impl Into<Vec<u8>>) -> HsStatus {
    set_last_error(msg);
    status
}

fn status_of(e: &Error) -> HsStatus {
    match e {
        Error::EmptyTrajectory | Error::NonFinite { .. } | Error::NonIncreasingTime { .. } => {
            HsStatus::InvalidTrajectory
        }
        Error::InvalidSide(_) => HsStatus::InvalidSide,
        Error::InvalidWindow { .. } | Error::OutOfRange { .. } => HsStatus::InvalidWindow,
        Error::InvalidRange { .. } => HsStatus::InvalidRange,
        Error::Parse { .. } => HsStatus::Parse,
        Error::Precondition(_) | Error::EmptyQueue | Error::EmptySequence => HsStatus::Internal,
    }
}

fn from_error(e: Error) -> HsStatus {
    fail(status_of(&e), e.to_string())
}

fn guarded(f: impl FnOnce() -> HsStatus) -> HsStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(HsStatus::Internal, "panic inside hotspot"))
}

unsafe fn write_index(out: *mut *mut HsIndex, traj: Trajectory, side: f64) -> HsStatus {
    match HotspotIndex::build(traj, side) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(HsIndex { inner }));
            HsStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// Builds an index from `n` vertices given as three parallel arrays.
///
/// # Safety
/// `ts`, `xs` and `ys` must each point to `n` readable doubles, and `out`
/// must be a valid pointer to an `HsIndex*`.
#[no_mangle]
pub unsafe extern "C" fn hs_index_build(
    ts: *const f64,
    xs: *const f64,
    ys: *const f64,
    n: usize,
    side: f64,
    out: *mut *mut HsIndex,
) -> HsStatus {
    guarded(|| {
        if out.is_null() || (n > 0 && (ts.is_null() || xs.is_null() || ys.is_null())) {
            return fail(HsStatus::NullPointer, "null pointer argument");
        }
        if n == 0 {
            return from_error(Error::EmptyTrajectory);
        }
        let (ts, xs, ys) =
            (std::slice::from_raw_parts(ts, n), std::slice::from_raw_parts(xs, n), std::slice::from_raw_parts(ys, n));
        let vertices = (0..n).map(|i| Vertex::new(ts[i], xs[i], ys[i])).collect();
        match Trajectory::new(vertices) {
            Ok(traj) => write_index(out, traj, side),
            Err(e) => from_error(e),
        }
    })
}

/// Builds an index from a `t,x,y` CSV file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer to an
/// `HsIndex*`.
#[no_mangle]
pub unsafe extern "C" fn hs_index_from_csv(path: *const c_char, side: f64, out: *mut *mut HsIndex) -> HsStatus {
    guarded(|| {
        if path.is_null() || out.is_null() {
            return fail(HsStatus::NullPointer, "null pointer argument");
        }
        let Ok(path) = CStr::from_ptr(path).to_str() else {
            return fail(HsStatus::Io, "path is not valid UTF-8");
        };
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return fail(HsStatus::Io, format!("{path}: {e}")),
        };
        match parse_trajectory(&text) {
            Ok(traj) => write_index(out, traj, side),
            Err(e) => from_error(e),
        }
    })
}

/// Releases an index. Null is ignored.
///
/// # Safety
/// `index` must come from `hs_index_build` or `hs_index_from_csv` and must
/// not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hs_index_free(index: *mut HsIndex) {
    if !index.is_null() {
        drop(Box::from_raw(index));
    }
}

/// Number of trajectory vertices, or 0 for a null handle.
///
/// # Safety
/// `index` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hs_index_len(index: *const HsIndex) -> usize {
    index.as_ref().map_or(0, |i| i.inner.trajectory().len())
}

unsafe fn answer(
    index: *const HsIndex,
    out: *mut HsWitness,
    f: impl FnOnce(&HotspotIndex) -> hotspot::Result<Witness>,
) -> HsStatus {
    guarded(|| {
        let (Some(index), false) = (index.as_ref(), out.is_null()) else {
            return fail(HsStatus::NullPointer, "null pointer argument");
        };
        match f(&index.inner) {
            Ok(w) => {
                *out = w.into();
                HsStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Approximate hotspot of the window `[x, y]` (clamped to the trajectory).
///
/// # Safety
/// `index` must be a live handle and `out` a valid `HsWitness` pointer.
#[no_mangle]
pub unsafe extern "C" fn hs_query(index: *const HsIndex, x: f64, y: f64, out: *mut HsWitness) -> HsStatus {
    answer(index, out, |idx| idx.query(x, y))
}

/// Approximate hotspot between vertices `i` and `j` (inclusive).
///
/// # Safety
/// `index` must be a live handle and `out` a valid `HsWitness` pointer.
#[no_mangle]
pub unsafe extern "C" fn hs_query_vertex_aligned(
    index: *const HsIndex,
    i: usize,
    j: usize,
    out: *mut HsWitness,
) -> HsStatus {
    answer(index, out, |idx| idx.query_vertex_aligned(i, j))
}

/// Approximate hotspot of the whole trajectory.
///
/// # Safety
/// `index` must be a live handle and `out` a valid `HsWitness` pointer.
#[no_mangle]
pub unsafe extern "C" fn hs_whole_trajectory(index: *const HsIndex, out: *mut HsWitness) -> HsStatus {
    answer(index, out, |idx| Ok(idx.whole_trajectory_hotspot()))
}

/// Re-checks a witness against the window `[x, y]`: writes 1 to `valid` if
/// the interval lies in the window and the trajectory over it stays in the
/// square, 0 otherwise.
///
/// # Safety
/// `index` must be a live handle; `witness` and `valid` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hs_verify_witness(
    index: *const HsIndex,
    x: f64,
    y: f64,
    witness: *const HsWitness,
    valid: *mut i32,
) -> HsStatus {
    guarded(|| {
        let (Some(index), Some(witness), false) = (index.as_ref(), witness.as_ref(), valid.is_null()) else {
            return fail(HsStatus::NullPointer, "null pointer argument");
        };
        let window = match Window::new(x, y) {
            Ok(w) => w,
            Err(e) => return from_error(e),
        };
        *valid = verify_witness(index.inner.trajectory(), window, &(*witness).into()) as i32;
        HsStatus::Ok
    })
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(std::ptr::null(), |m| m.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hs_version() -> *const c_char {
    static VERSION: OnceLock<CString> = OnceLock::new();
    VERSION.get_or_init(|| CString::new(env!("CARGO_PKG_VERSION")).expect("version contains NUL")).as_ptr()
}
