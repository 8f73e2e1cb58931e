// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.


//! C ABI for `qroute`.
//!
//! Graphs, permutations and schedules are opaque heap handles owned by the
//! caller and released with the matching `*_free`. Every fallible call
//! returns a [`QrStatus`]; on failure a message is kept per thread and can be
//! read with [`qr_last_error_message`]. Strings handed out by the library
//! are released with [`qr_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qroute::archgraph::{generate_graph, generate_permutation};
use qroute::bounds::bounds_report;
use qroute::sim::verify_schedule;
use qroute::sparse_router::sparse_route;
use qroute::swap_router::route_generic;
use qroute::tele_router::{advantage_with, tele_schedule};
use qroute::{ArchGraph, DepthModel, Error, Family, PermKind, Permutation, Schedule};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidParameter = 3,
    Disconnected = 4,
    VertexOutOfRange = 5,
    Capacity = 6,
    WrongFamily = 7,
    InsufficientBudget = 8,
    InvalidSchedule = 9,
    Blocked = 10,
    VerificationFailed = 11,
    Json = 12,
    Io = 13,
    Panic = 14,
}

/// Graph families accepted by [`qr_graph_family`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QrFamily {
    /// `a` = vertex count.
    Path = 0,
    /// `a` = rim size; the hub is vertex `a`.
    Wheel = 1,
    /// `a` = number of levels.
    Ladder = 2,
    /// `a` = dimension.
    Hypercube = 3,
    /// `a` = r.
    Butterfly = 4,
    /// `a` = vertex count.
    Complete = 5,
    /// `a` = side, `b` = dimension.
    Grid = 6,
}

/// Routing model for [`qr_route`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QrModel {
    Swap = 0,
    Sparse = 1,
    Teleport = 2,
}

/// Opaque architecture graph.
pub struct QrGraph(ArchGraph);

/// Opaque permutation.
pub struct QrPermutation(Permutation);

/// Opaque schedule.
pub struct QrSchedule(Schedule);

/// Depths reported by [`qr_advantage`].
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QrAdvantage {
    pub swap_depth: u64,
    pub tele_depth: u64,
    pub tele_rounds: u64,
    pub ratio: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> QrStatus {
    match e {
        Error::InvalidParameter(_) => QrStatus::InvalidParameter,
        Error::Disconnected => QrStatus::Disconnected,
        Error::VertexOutOfRange { .. } => QrStatus::VertexOutOfRange,
        Error::Capacity { .. } => QrStatus::Capacity,
        Error::WrongFamily(_) => QrStatus::WrongFamily,
        Error::InsufficientBudget { .. } => QrStatus::InsufficientBudget,
        Error::InvalidSchedule { .. } => QrStatus::InvalidSchedule,
        Error::Blocked(_) => QrStatus::Blocked,
        Error::Verification(_) => QrStatus::VerificationFailed,
        Error::Json(_) => QrStatus::Json,
        Error::Io(_) => QrStatus::Io,
    }
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

type FfiResult<T> = std::result::Result<T, Failure>;

/// Run `f`, translating errors and panics into a status plus a message.
fn guard(f: impl FnOnce() -> FfiResult<()>) -> QrStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QrStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_last_error(format!("null pointer: {what}"));
            QrStatus::NullPointer
        }
        Ok(Err(Failure::Utf8(what))) => {
            set_last_error(format!("invalid UTF-8 in {what}"));
            QrStatus::InvalidUtf8
        }
        Ok(Err(Failure::Core(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            QrStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> FfiResult<&'a T> {
    // SAFETY: caller passes a live handle or null.
    unsafe { p.as_ref() }.ok_or(Failure::Null(what))
}

unsafe fn deref_mut<'a, T>(p: *mut T, what: &'static str) -> FfiResult<&'a mut T> {
    // SAFETY: caller passes a live handle or null.
    unsafe { p.as_mut() }.ok_or(Failure::Null(what))
}

unsafe fn read_str<'a>(p: *const c_char, what: &'static str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    // SAFETY: caller passes a NUL-terminated string.
    unsafe { CStr::from_ptr(p) }.to_str().map_err(|_| Failure::Utf8(what))
}

unsafe fn write_out<T>(out: *mut T, v: T, what: &'static str) -> FfiResult<()> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    // SAFETY: non-null and writable per the caller contract.
    unsafe { out.write(v) };
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> FfiResult<()> {
    let c = CString::new(s).map_err(|_| Failure::Utf8("output string"))?;
    // SAFETY: forwarded caller contract.
    unsafe { write_out(out, c.into_raw(), "out") }
}

unsafe fn write_handle<T>(out: *mut *mut T, v: T) -> FfiResult<()> {
    if out.is_null() {
        return Err(Failure::Null("out"));
    }
    // SAFETY: non-null and writable per the caller contract.
    unsafe { out.write(Box::into_raw(Box::new(v))) };
    Ok(())
}

/// Library version as a static NUL-terminated string. Do not free.
#[no_mangle]
pub extern "C" fn qr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL.
///
/// The pointer stays valid until the next call into the library on the
/// same thread. Do not free.
#[no_mangle]
pub extern "C" fn qr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Release a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn qr_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: allocated by CString::into_raw in this crate.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Build a graph of a named family with the default ancilla budget.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qr_graph_family(family: QrFamily, a: usize, b: usize, out: *mut *mut QrGraph) -> QrStatus {
    guard(|| {
        let f = match family {
            QrFamily::Path => Family::Path { n: a },
            QrFamily::Wheel => Family::Wheel { rim: a },
            QrFamily::Ladder => Family::Ladder { n: a },
            QrFamily::Hypercube => Family::Hypercube { d: a },
            QrFamily::Butterfly => Family::Butterfly { r: a },
            QrFamily::Complete => Family::Complete { n: a },
            QrFamily::Grid => Family::Grid { n: a, d: b },
        };
        let g = generate_graph(&f)?;
        unsafe { write_handle(out, QrGraph(g)) }
    })
}

/// Build a graph from `num_edges` pairs stored flat in `edges`.
///
/// # Safety
/// `edges` must hold `2 * num_edges` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qr_graph_from_edges(
    n: usize,
    edges: *const usize,
    num_edges: usize,
    ancilla_budget: usize,
    out: *mut *mut QrGraph,
) -> QrStatus {
    guard(|| {
        let flat: &[usize] = if num_edges == 0 {
            &[]
        } else if edges.is_null() {
            return Err(Failure::Null("edges"));
        } else {
            // SAFETY: caller guarantees 2 * num_edges readable values.
            unsafe { std::slice::from_raw_parts(edges, 2 * num_edges) }
        };
        let pairs: Vec<(usize, usize)> = flat.chunks_exact(2).map(|c| (c[0], c[1])).collect();
        let g = ArchGraph::from_edges(n, &pairs, ancilla_budget)?;
        unsafe { write_handle(out, QrGraph(g)) }
    })
}

/// Parse a graph from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qr_graph_from_json(json: *const c_char, out: *mut *mut QrGraph) -> QrStatus {
    guard(|| {
        let g = ArchGraph::from_json(unsafe { read_str(json, "json") }?)?;
        unsafe { write_handle(out, QrGraph(g)) }
    })
}

/// Serialise a graph to JSON. Free the result with [`qr_string_free`].
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qr_graph_to_json(g: *const QrGraph, out: *mut *mut c_char) -> QrStatus {
    guard(|| {
        let g = unsafe { deref(g, "graph") }?;
        unsafe { write_string(out, g.0.to_json()) }
    })
}

/// Number of vertices, or 0 for NULL.
///
/// # Safety
/// `g` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qr_graph_vertex_count(g: *const QrGraph) -> usize {
    unsafe { g.as_ref() }.map_or(0, |g| g.0.n())
}

/// Number of edges, or 0 for NULL.
///
/// # Safety
/// `g` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qr_graph_edge_count(g: *const QrGraph) -> usize {
    unsafe { g.as_ref() }.map_or(0, |g| g.0.num_edges())
}

/// Ancilla slots per vertex, or 0 for NULL.
///
/// # Safety
/// `g` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qr_graph_ancilla_budget(g: *const QrGraph) -> usize {
    unsafe { g.as_ref() }.map_or(0, |g| g.0.ancilla_budget())
}

/// Change the ancilla budget.
///
/// # Safety
/// `g` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qr_graph_set_ancilla_budget(g: *mut QrGraph, budget: usize) -> QrStatus {
    guard(|| {
        unsafe { deref_mut(g, "graph") }?.0.set_ancilla_budget(budget);
        Ok(())
    })
}

/// Graph diameter.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qr_graph_diameter(g: *const QrGraph, out: *mut usize) -> QrStatus {
    guard(|| {
        let d = unsafe { deref(g, "graph") }?.0.diameter()?;
        unsafe { write_out(out, d, "out") }
    })
}

/// Expansion and depth bounds as JSON. `exact` enables the exhaustive
/// expansion search on small graphs.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qr_graph_bounds_json(g: *const QrGraph, exact: bool, out: *mut *mut c_char) -> QrStatus {
    guard(|| {
        let report = bounds_report(&unsafe { deref(g, "graph") }?.0, exact)?;
        let text = serde_json::to_string(&report).map_err(Error::from)?;
        unsafe { write_string(out, text) }
    })
}

/// Release a graph. NULL is ignored.
///
/// # Safety
/// `g` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn qr_graph_free(g: *mut QrGraph) {
    if !g.is_null() {
        // SAFETY: allocated by Box::into_raw in this crate.
        drop(unsafe { Box::from_raw(g) });
    }
}

/// Permutation from its image array: vertex `i` maps to `image[i]`.
///
/// # Safety
/// `image` must hold `len` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qr_perm_from_image(image: *const usize, len: usize, out: *mut *mut QrPermutation) -> QrStatus {
    guard(|| {
        let v = if len == 0 {
            Vec::new()
        } else if image.is_null() {
            return Err(Failure::Null("image"));
        } else {
            // SAFETY: caller guarantees len readable values.
            unsafe { std::slice::from_raw_parts(image, len) }.to_vec()
        };
        let p = Permutation::from_image(v)?;
        unsafe { write_handle(out, QrPermutation(p)) }
    })
}

/// Named permutation on `g`, described as JSON such as
/// `{"kind":"rainbow","alpha":0.5}` or `{"kind":"random","seed":7,"k":4}`.
///
/// # Safety
/// `g` must be a live handle; `kind_json` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qr_perm_generate(
    g: *const QrGraph,
    kind_json: *const c_char,
    out: *mut *mut QrPermutation,
) -> QrStatus {
    guard(|| {
        let g = unsafe { deref(g, "graph") }?;
        let kind: PermKind = serde_json::from_str(unsafe { read_str(kind_json, "kind_json") }?).map_err(Error::from)?;
        let p = generate_permutation(&kind, &g.0)?;
        unsafe { write_handle(out, QrPermutation(p)) }
    })
}

/// Parse a permutation from JSON.
///
/// # Safety
/// `json` must be NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qr_perm_from_json(json: *const c_char, out: *mut *mut QrPermutation) -> QrStatus {
    guard(|| {
        let p = Permutation::from_json(unsafe { read_str(json, "json") }?)?;
        unsafe { write_handle(out, QrPermutation(p)) }
    })
}

/// Serialise a permutation to JSON. Free with [`qr_string_free`].
///
/// # Safety
/// `p` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qr_perm_to_json(p: *const QrPermutation, out: *mut *mut c_char) -> QrStatus {
    guard(|| {
        let p = unsafe { deref(p, "permutation") }?;
        unsafe { write_string(out, p.0.to_json()) }
    })
}

/// Length of a permutation, or 0 for NULL.
///
/// # Safety
/// `p` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qr_perm_len(p: *const QrPermutation) -> usize {
    unsafe { p.as_ref() }.map_or(0, |p| p.0.len())
}

/// Copy the image of `p` into `buf`, which must have room for
/// [`qr_perm_len`] values.
///
/// # Safety
/// `p` must be a live handle; `buf` must hold `cap` writable values.
#[no_mangle]
pub unsafe extern "C" fn qr_perm_image(p: *const QrPermutation, buf: *mut usize, cap: usize) -> QrStatus {
    guard(|| {
        let img = unsafe { deref(p, "permutation") }?.0.image();
        if cap < img.len() {
            return Err(Error::InvalidParameter(format!("buffer holds {cap} values, {} needed", img.len())).into());
        }
        if img.is_empty() {
            return Ok(());
        }
        if buf.is_null() {
            return Err(Failure::Null("buf"));
        }
        // SAFETY: buf has room for cap >= img.len() values.
        unsafe { ptr::copy_nonoverlapping(img.as_ptr(), buf, img.len()) };
        Ok(())
    })
}

/// Release a permutation. NULL is ignored.
///
/// # Safety
/// `p` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn qr_perm_free(p: *mut QrPermutation) {
    if !p.is_null() {
        // SAFETY: allocated by Box::into_raw in this crate.
        drop(unsafe { Box::from_raw(p) });
    }
}

/// Route `p` on `g` under `model`. The schedule is verified before it is
/// returned.
///
/// # Safety
/// `g` and `p` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qr_route(
    g: *const QrGraph,
    p: *const QrPermutation,
    model: QrModel,
    out: *mut *mut QrSchedule,
) -> QrStatus {
    guard(|| {
        let g = &unsafe { deref(g, "graph") }?.0;
        let p = &unsafe { deref(p, "permutation") }?.0;
        let s = match model {
            QrModel::Swap => route_generic(g, p)?,
            QrModel::Sparse => sparse_route(g, p)?,
            QrModel::Teleport => tele_schedule(g, p)?,
        };
        verify_schedule(g, &s, p)?;
        unsafe { write_handle(out, QrSchedule(s)) }
    })
}

/// Replay `s` on `g` and check that it realises `p`. Returns
/// `VerificationFailed` when it realises a different permutation.
///
/// # Safety
/// All handles must be live.
#[no_mangle]
pub unsafe extern "C" fn qr_verify(g: *const QrGraph, s: *const QrSchedule, p: *const QrPermutation) -> QrStatus {
    guard(|| {
        let g = &unsafe { deref(g, "graph") }?.0;
        let s = &unsafe { deref(s, "schedule") }?.0;
        let p = &unsafe { deref(p, "permutation") }?.0;
        verify_schedule(g, s, p)?;
        Ok(())
    })
}

/// Depth of a schedule under the default model (`conservative` false) or
/// the conservative one. 0 for NULL.
///
/// # Safety
/// `s` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qr_schedule_depth(s: *const QrSchedule, conservative: bool) -> u64 {
    let m = if conservative { DepthModel::conservative() } else { DepthModel::default() };
    unsafe { s.as_ref() }.map_or(0, |s| s.0.depth_with(&m))
}

/// Number of teleportation rounds, or 0 for NULL.
///
/// # Safety
/// `s` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qr_schedule_tele_rounds(s: *const QrSchedule) -> usize {
    unsafe { s.as_ref() }.map_or(0, |s| s.0.tele_rounds())
}

/// Number of timesteps, or 0 for NULL.
///
/// # Safety
/// `s` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qr_schedule_timesteps(s: *const QrSchedule) -> usize {
    unsafe { s.as_ref() }.map_or(0, |s| s.0.timesteps.len())
}

/// Parse a schedule from JSON.
///
/// # Safety
/// `json` must be NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qr_schedule_from_json(json: *const c_char, out: *mut *mut QrSchedule) -> QrStatus {
    guard(|| {
        let s = Schedule::from_json(unsafe { read_str(json, "json") }?)?;
        unsafe { write_handle(out, QrSchedule(s)) }
    })
}

/// Serialise a schedule to JSON. Free with [`qr_string_free`].
///
/// # Safety
/// `s` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qr_schedule_to_json(s: *const QrSchedule, out: *mut *mut c_char) -> QrStatus {
    guard(|| {
        let s = unsafe { deref(s, "schedule") }?;
        unsafe { write_string(out, s.0.to_json()) }
    })
}

/// Release a schedule. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn qr_schedule_free(s: *mut QrSchedule) {
    if !s.is_null() {
        // SAFETY: allocated by Box::into_raw in this crate.
        drop(unsafe { Box::from_raw(s) });
    }
}

/// Best swap depth against teleport depth for `p` on `g`.
///
/// # Safety
/// `g` and `p` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qr_advantage(
    g: *const QrGraph,
    p: *const QrPermutation,
    conservative: bool,
    out: *mut QrAdvantage,
) -> QrStatus {
    guard(|| {
        let g = &unsafe { deref(g, "graph") }?.0;
        let p = &unsafe { deref(p, "permutation") }?.0;
        let m = if conservative { DepthModel::conservative() } else { DepthModel::default() };
        let a = advantage_with(g, p, &m)?;
        let res = QrAdvantage {
            swap_depth: a.swap_depth,
            tele_depth: a.tele_depth,
            tele_rounds: a.tele_rounds as u64,
            ratio: a.ratio_f64,
        };
        unsafe { write_out(out, res, "out") }
    })
}
