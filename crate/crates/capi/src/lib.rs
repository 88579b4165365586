//! C ABI for the sphds spherical data engine.
//!
//! Conventions:
//! - every fallible function returns a [`SphdsStatus`] and writes results
//!   through out-pointers; outputs are untouched on failure;
//! - datasets and windows are opaque handles created and released by this
//!   library (`sphds_dataset_free` / `sphds_window_free`);
//! - a human-readable message for the most recent failure on the calling
//!   thread is available from `sphds_last_error_message`;
//! - angles are radians; pixel indices are 0-based; `ordering` is 0 for
//!   ring and 1 for nested.

#![deny(unsafe_op_in_unsafe_fn)]

use sphds::dataset::DedupPolicy;
use sphds::stats::{self, BinCount, Side};
use sphds::{Error, PixelId, Resolution, Scheme, SphCoord, SphericalDataset, SphericalWindow};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Result codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SphdsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidResolution = 3,
    OutOfRange = 4,
    WrongOrdering = 5,
    EmptyData = 6,
    DuplicatePixel = 7,
    ParseError = 8,
    IoError = 9,
    Panic = 10,
}

/// Ordering scheme selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SphdsOrdering {
    Ring = 0,
    Nested = 1,
}

impl From<SphdsOrdering> for Scheme {
    fn from(o: SphdsOrdering) -> Scheme {
        match o {
            SphdsOrdering::Ring => Scheme::Ring,
            SphdsOrdering::Nested => Scheme::Nested,
        }
    }
}

/// Extreme-side selector for `sphds_extrema` and the asymmetry ratio.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SphdsSide {
    Smallest = 0,
    Largest = 1,
}

impl From<SphdsSide> for Side {
    fn from(s: SphdsSide) -> Side {
        match s {
            SphdsSide::Smallest => Side::Smallest,
            SphdsSide::Largest => Side::Largest,
        }
    }
}

/// Opaque dataset handle.
pub struct SphdsDataset {
    inner: SphericalDataset,
}

/// Opaque window handle.
pub struct SphdsWindow {
    inner: SphericalWindow,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let owned = CString::new(message.replace('\0', "?")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = owned);
}

fn status_of(err: &Error) -> SphdsStatus {
    match err {
        Error::InvalidNside(_) | Error::LevelOutOfRange(_) => SphdsStatus::InvalidResolution,
        Error::RingOutOfRange { .. } | Error::PixelOutOfRange { .. } | Error::NoParent => {
            SphdsStatus::OutOfRange
        }
        Error::WrongScheme { .. } => SphdsStatus::WrongOrdering,
        Error::EmptyInput(_) | Error::EmptySelection(_) | Error::InsufficientRows { .. } => {
            SphdsStatus::EmptyData
        }
        Error::DuplicatePixel { .. } => SphdsStatus::DuplicatePixel,
        Error::InvalidCoord(_)
        | Error::ZeroVector
        | Error::ZeroResultant
        | Error::InvalidWindow(_) => SphdsStatus::InvalidArgument,
        Error::UnknownColumn(_) | Error::MalformedFile(_) | Error::Csv(_) => {
            SphdsStatus::ParseError
        }
        Error::Io(_) => SphdsStatus::IoError,
    }
}

fn fail(err: Error) -> SphdsStatus {
    let status = status_of(&err);
    set_error(&err.to_string());
    status
}

fn guard(body: impl FnOnce() -> SphdsStatus) -> SphdsStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            SphdsStatus::Panic
        }
    }
}

/// # Safety
/// `ptr` must be null or a valid NUL-terminated string.
unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, SphdsStatus> {
    if ptr.is_null() {
        set_error("null string pointer");
        return Err(SphdsStatus::NullPointer);
    }
    unsafe { CStr::from_ptr(ptr) }.to_str().map_err(|_| {
        set_error("string is not valid UTF-8");
        SphdsStatus::InvalidArgument
    })
}

macro_rules! out_write {
    ($ptr:expr, $value:expr) => {{
        if $ptr.is_null() {
            set_error("null output pointer");
            return SphdsStatus::NullPointer;
        }
        unsafe { *$ptr = $value };
    }};
}

macro_rules! try_res {
    ($nside:expr) => {
        match Resolution::from_nside($nside) {
            Ok(r) => r,
            Err(e) => return fail(e),
        }
    };
}

macro_rules! try_handle {
    ($ptr:expr) => {{
        if $ptr.is_null() {
            set_error("null handle");
            return SphdsStatus::NullPointer;
        }
        unsafe { &(*$ptr).inner }
    }};
}

/// Message describing the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sphds_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Total pixel count `12 * nside^2`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sphds_npix(nside: u64, out: *mut u64) -> SphdsStatus {
    guard(|| {
        let res = try_res!(nside);
        out_write!(out, res.npix());
        SphdsStatus::Ok
    })
}

/// Ring count `4 * nside - 1`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sphds_nrings(nside: u64, out: *mut u64) -> SphdsStatus {
    guard(|| {
        let res = try_res!(nside);
        out_write!(out, res.nrings());
        SphdsStatus::Ok
    })
}

/// Solid angle of one pixel in steradians.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sphds_pixel_area(nside: u64, out: *mut f64) -> SphdsStatus {
    guard(|| {
        let res = try_res!(nside);
        out_write!(out, res.pixel_area());
        SphdsStatus::Ok
    })
}

/// Ring-scheme pixel containing the point `(theta, phi)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sphds_ang2pix_ring(
    nside: u64,
    theta: f64,
    phi: f64,
    out: *mut u64,
) -> SphdsStatus {
    guard(|| {
        let res = try_res!(nside);
        let coord = match SphCoord::new(theta, phi) {
            Ok(c) => c,
            Err(e) => return fail(e),
        };
        out_write!(out, res.ang2pix_ring(coord).index);
        SphdsStatus::Ok
    })
}

/// Center of ring-scheme pixel `pix`.
///
/// # Safety
/// `theta` and `phi` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sphds_pix2ang_ring(
    nside: u64,
    pix: u64,
    theta: *mut f64,
    phi: *mut f64,
) -> SphdsStatus {
    guard(|| {
        let res = try_res!(nside);
        match res.pix2ang_ring(PixelId::ring(pix)) {
            Ok(c) => {
                out_write!(theta, c.theta());
                out_write!(phi, c.phi());
                SphdsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Nested index of the ring-scheme pixel `pix`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sphds_ring2nest(nside: u64, pix: u64, out: *mut u64) -> SphdsStatus {
    guard(|| {
        let res = try_res!(nside);
        match res.ring2nest(PixelId::ring(pix)) {
            Ok(p) => {
                out_write!(out, p.index);
                SphdsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Ring index of the nested-scheme pixel `pix`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sphds_nest2ring(nside: u64, pix: u64, out: *mut u64) -> SphdsStatus {
    guard(|| {
        let res = try_res!(nside);
        match res.nest2ring(PixelId::nested(pix)) {
            Ok(p) => {
                out_write!(out, p.index);
                SphdsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// The four children of nested pixel `pix` at the next level; `out` must
/// hold 4 values.
///
/// # Safety
/// `out` must be valid for writes of 4 values.
#[no_mangle]
pub unsafe extern "C" fn sphds_children(nside: u64, pix: u64, out: *mut u64) -> SphdsStatus {
    guard(|| {
        let res = try_res!(nside);
        if out.is_null() {
            set_error("null output pointer");
            return SphdsStatus::NullPointer;
        }
        match res.children(PixelId::nested(pix)) {
            Ok(kids) => {
                for (i, kid) in kids.iter().enumerate() {
                    unsafe { *out.add(i) = kid.index };
                }
                SphdsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Parent of nested pixel `pix` at the previous level.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sphds_parent(nside: u64, pix: u64, out: *mut u64) -> SphdsStatus {
    guard(|| {
        let res = try_res!(nside);
        match res.parent(PixelId::nested(pix)) {
            Ok(p) => {
                out_write!(out, p.index);
                SphdsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Edge and corner neighbors of nested pixel `pix`; `out` must hold 8
/// values, `count` receives how many were written (6..=8).
///
/// # Safety
/// `out` must hold 8 writable values; `count` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sphds_neighbors(
    nside: u64,
    pix: u64,
    out: *mut u64,
    count: *mut usize,
) -> SphdsStatus {
    guard(|| {
        let res = try_res!(nside);
        if out.is_null() {
            set_error("null output pointer");
            return SphdsStatus::NullPointer;
        }
        match res.neighbors(PixelId::nested(pix)) {
            Ok(nb) => {
                for (i, q) in nb.iter().enumerate() {
                    unsafe { *out.add(i) = q.index };
                }
                out_write!(count, nb.len());
                SphdsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Loads a `sphds v1` dataset file into a new handle.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sphds_dataset_load(
    path: *const c_char,
    out: *mut *mut SphdsDataset,
) -> SphdsStatus {
    guard(|| {
        let path = match unsafe { read_str(path) } {
            Ok(p) => p,
            Err(status) => return status,
        };
        match SphericalDataset::load(path) {
            Ok(ds) => {
                let handle = Box::into_raw(Box::new(SphdsDataset { inner: ds }));
                out_write!(out, handle);
                SphdsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Writes the dataset to a `sphds v1` file.
///
/// # Safety
/// `ds` must be a live dataset handle; `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sphds_dataset_save(
    ds: *const SphdsDataset,
    path: *const c_char,
) -> SphdsStatus {
    guard(|| {
        let ds = try_handle!(ds);
        let path = match unsafe { read_str(path) } {
            Ok(p) => p,
            Err(status) => return status,
        };
        match ds.save(path) {
            Ok(()) => SphdsStatus::Ok,
            Err(e) => fail(e),
        }
    })
}

/// Releases a dataset handle. Null is a no-op.
///
/// # Safety
/// `ds` must be null or a pointer returned by this library that has not
/// been freed already.
#[no_mangle]
pub unsafe extern "C" fn sphds_dataset_free(ds: *mut SphdsDataset) {
    if !ds.is_null() {
        drop(unsafe { Box::from_raw(ds) });
    }
}

/// Number of rows.
///
/// # Safety
/// `ds` must be a live dataset handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sphds_dataset_len(
    ds: *const SphdsDataset,
    out: *mut usize,
) -> SphdsStatus {
    guard(|| {
        let ds = try_handle!(ds);
        out_write!(out, ds.len());
        SphdsStatus::Ok
    })
}

/// Grid nside of the dataset.
///
/// # Safety
/// `ds` must be a live dataset handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sphds_dataset_nside(
    ds: *const SphdsDataset,
    out: *mut u64,
) -> SphdsStatus {
    guard(|| {
        let ds = try_handle!(ds);
        out_write!(out, ds.res().nside());
        SphdsStatus::Ok
    })
}

/// Ordering scheme of the dataset.
///
/// # Safety
/// `ds` must be a live dataset handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sphds_dataset_ordering(
    ds: *const SphdsDataset,
    out: *mut SphdsOrdering,
) -> SphdsStatus {
    guard(|| {
        let ds = try_handle!(ds);
        let ordering = match ds.scheme() {
            Scheme::Ring => SphdsOrdering::Ring,
            Scheme::Nested => SphdsOrdering::Nested,
        };
        out_write!(out, ordering);
        SphdsStatus::Ok
    })
}

/// Builds a dataset from parallel coordinate/value arrays (radians), the
/// programmatic counterpart of the CLI `convert`. Duplicate pixels keep
/// the first occurrence when `keep_first` is true and fail otherwise.
///
/// # Safety
/// The input arrays must hold `len` readable values each; `column` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sphds_dataset_from_points(
    thetas: *const f64,
    phis: *const f64,
    values: *const f64,
    len: usize,
    nside: u64,
    ordering: SphdsOrdering,
    keep_first: bool,
    column: *const c_char,
    out: *mut *mut SphdsDataset,
) -> SphdsStatus {
    guard(|| {
        if thetas.is_null() || phis.is_null() || values.is_null() {
            set_error("null input array");
            return SphdsStatus::NullPointer;
        }
        let res = try_res!(nside);
        let column = match unsafe { read_str(column) } {
            Ok(c) => c,
            Err(status) => return status,
        };
        let mut table = match sphds::PointTable::new(vec![column.to_string()]) {
            Ok(t) => t,
            Err(e) => return fail(e),
        };
        for i in 0..len {
            let (theta, phi, value) = unsafe { (*thetas.add(i), *phis.add(i), *values.add(i)) };
            let coord = match SphCoord::new(theta, phi) {
                Ok(c) => c,
                Err(e) => return fail(e),
            };
            if let Err(e) = table.push(coord, &[value]) {
                return fail(e);
            }
        }
        let dedup = if keep_first {
            DedupPolicy::KeepFirst
        } else {
            DedupPolicy::Fail
        };
        match sphds::dataset::from_points(&table, res, ordering.into(), dedup) {
            Ok(ds) => {
                let handle = Box::into_raw(Box::new(SphdsDataset { inner: ds }));
                out_write!(out, handle);
                SphdsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Creates a disc window.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sphds_window_disc(
    theta: f64,
    phi: f64,
    radius: f64,
    out: *mut *mut SphdsWindow,
) -> SphdsStatus {
    guard(|| {
        let center = match SphCoord::new(theta, phi) {
            Ok(c) => c,
            Err(e) => return fail(e),
        };
        match SphericalWindow::disc(center, radius) {
            Ok(w) => {
                let handle = Box::into_raw(Box::new(SphdsWindow { inner: w }));
                out_write!(out, handle);
                SphdsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Creates a convex polygon window from parallel vertex arrays.
///
/// # Safety
/// `thetas` and `phis` must hold `len` readable values each; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sphds_window_polygon(
    thetas: *const f64,
    phis: *const f64,
    len: usize,
    out: *mut *mut SphdsWindow,
) -> SphdsStatus {
    guard(|| {
        if thetas.is_null() || phis.is_null() {
            set_error("null vertex array");
            return SphdsStatus::NullPointer;
        }
        let mut vertices = Vec::with_capacity(len);
        for i in 0..len {
            let (theta, phi) = unsafe { (*thetas.add(i), *phis.add(i)) };
            match SphCoord::new(theta, phi) {
                Ok(c) => vertices.push(c),
                Err(e) => return fail(e),
            }
        }
        match SphericalWindow::polygon(vertices) {
            Ok(w) => {
                let handle = Box::into_raw(Box::new(SphdsWindow { inner: w }));
                out_write!(out, handle);
                SphdsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Releases a window handle. Null is a no-op.
///
/// # Safety
/// `w` must be null or a pointer returned by this library that has not
/// been freed already.
#[no_mangle]
pub unsafe extern "C" fn sphds_window_free(w: *mut SphdsWindow) {
    if !w.is_null() {
        drop(unsafe { Box::from_raw(w) });
    }
}

/// Boundary-inclusive window membership of a point.
///
/// # Safety
/// `w` must be a live window handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sphds_window_contains(
    w: *const SphdsWindow,
    theta: f64,
    phi: f64,
    out: *mut bool,
) -> SphdsStatus {
    guard(|| {
        let w = try_handle!(w);
        let coord = match SphCoord::new(theta, phi) {
            Ok(c) => c,
            Err(e) => return fail(e),
        };
        out_write!(out, w.contains(coord));
        SphdsStatus::Ok
    })
}

fn window_ref(w: *const SphdsWindow) -> Option<&'static SphericalWindow> {
    if w.is_null() {
        None
    } else {
        Some(unsafe { &(*w).inner })
    }
}

/// Mean of a column.
///
/// # Safety
/// `ds` must be a live dataset handle; `column` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sphds_mean(
    ds: *const SphdsDataset,
    column: *const c_char,
    out: *mut f64,
) -> SphdsStatus {
    guard(|| {
        let ds = try_handle!(ds);
        let column = match unsafe { read_str(column) } {
            Ok(c) => c,
            Err(status) => return status,
        };
        match stats::mean_value(ds, column) {
            Ok(v) => {
                out_write!(out, v);
                SphdsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Exceedance probability above `alpha`; `window` may be null for the
/// whole sphere.
///
/// # Safety
/// `ds` must be a live dataset handle and `window` null or a live window handle; `column` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sphds_exprob(
    ds: *const SphdsDataset,
    window: *const SphdsWindow,
    column: *const c_char,
    alpha: f64,
    out: *mut f64,
) -> SphdsStatus {
    guard(|| {
        let ds = try_handle!(ds);
        let column = match unsafe { read_str(column) } {
            Ok(c) => c,
            Err(status) => return status,
        };
        match stats::exprob(ds, window_ref(window), column, alpha) {
            Ok(v) => {
                out_write!(out, v);
                SphdsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Histogram entropy; `bins == 0` selects the Sturges rule. `window` may
/// be null.
///
/// # Safety
/// Same contract as `sphds_exprob`.
#[no_mangle]
pub unsafe extern "C" fn sphds_entropy(
    ds: *const SphdsDataset,
    window: *const SphdsWindow,
    column: *const c_char,
    bins: usize,
    out: *mut f64,
) -> SphdsStatus {
    guard(|| {
        let ds = try_handle!(ds);
        let column = match unsafe { read_str(column) } {
            Ok(c) => c,
            Err(status) => return status,
        };
        let bins = if bins == 0 {
            BinCount::Auto
        } else {
            BinCount::Fixed(bins)
        };
        match stats::entropy(ds, window_ref(window), column, bins) {
            Ok(v) => {
                out_write!(out, v);
                SphdsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Excursion-set area (steradians) of `{column >= level}`.
///
/// # Safety
/// `ds` must be a live dataset handle; `column` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sphds_fmf(
    ds: *const SphdsDataset,
    level: f64,
    column: *const c_char,
    out: *mut f64,
) -> SphdsStatus {
    guard(|| {
        let ds = try_handle!(ds);
        let column = match unsafe { read_str(column) } {
            Ok(c) => c,
            Err(status) => return status,
        };
        match stats::fmf(ds, level, column) {
            Ok(v) => {
                out_write!(out, v);
                SphdsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Minimum pairwise geodesic distance between the dataset's pixel centers.
///
/// # Safety
/// `ds` must be a live dataset handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sphds_min_dist(ds: *const SphdsDataset, out: *mut f64) -> SphdsStatus {
    guard(|| {
        let ds = try_handle!(ds);
        match stats::min_dist(ds) {
            Ok(v) => {
                out_write!(out, v);
                SphdsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Windowed mean over overall mean of a column.
///
/// # Safety
/// `ds` and `window` must be live handles; `column` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sphds_asymmetry_mean(
    ds: *const SphdsDataset,
    window: *const SphdsWindow,
    column: *const c_char,
    out: *mut f64,
) -> SphdsStatus {
    guard(|| {
        let ds = try_handle!(ds);
        let w = try_handle!(window);
        let column = match unsafe { read_str(column) } {
            Ok(c) => c,
            Err(status) => return status,
        };
        match stats::asymmetry_mean(ds, w, column) {
            Ok(v) => {
                out_write!(out, v);
                SphdsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Mean of the `n` windowed extremes over the overall mean.
///
/// # Safety
/// Same contract as `sphds_asymmetry_mean`.
#[no_mangle]
pub unsafe extern "C" fn sphds_asymmetry_extrema(
    ds: *const SphdsDataset,
    window: *const SphdsWindow,
    n: usize,
    side: SphdsSide,
    column: *const c_char,
    out: *mut f64,
) -> SphdsStatus {
    guard(|| {
        let ds = try_handle!(ds);
        let w = try_handle!(window);
        let column = match unsafe { read_str(column) } {
            Ok(c) => c,
            Err(status) => return status,
        };
        match stats::asymmetry_extrema(ds, w, n, side.into(), column) {
            Ok(v) => {
                out_write!(out, v);
                SphdsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// The `n` most extreme rows; the four output arrays must each hold `n`
/// entries. `window` may be null.
///
/// # Safety
/// `ds` must be a live dataset handle and `window` null or live; the four output arrays must each hold `n` writable values.
#[no_mangle]
pub unsafe extern "C" fn sphds_extrema(
    ds: *const SphdsDataset,
    window: *const SphdsWindow,
    n: usize,
    side: SphdsSide,
    column: *const c_char,
    out_pix: *mut u64,
    out_theta: *mut f64,
    out_phi: *mut f64,
    out_value: *mut f64,
) -> SphdsStatus {
    guard(|| {
        let ds = try_handle!(ds);
        let column = match unsafe { read_str(column) } {
            Ok(c) => c,
            Err(status) => return status,
        };
        if n > 0
            && (out_pix.is_null()
                || out_theta.is_null()
                || out_phi.is_null()
                || out_value.is_null())
        {
            set_error("null output array");
            return SphdsStatus::NullPointer;
        }
        match stats::extrema(ds, window_ref(window), n, side.into(), column) {
            Ok(rows) => {
                for (i, row) in rows.iter().enumerate() {
                    unsafe {
                        *out_pix.add(i) = row.pix.index;
                        *out_theta.add(i) = row.coord.theta();
                        *out_phi.add(i) = row.coord.phi();
                        *out_value.add(i) = row.value;
                    }
                }
                SphdsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}
