//! C ABI over the `chipfire` crate.
//!
//! Graphs travel as opaque [`cf_graph`] handles; configurations, firing
//! sequences, and witnesses travel in their text forms (`"1,0,1"`,
//! `"0,2,1"`, witness JSON). Every fallible call returns a [`CfStatus`];
//! on failure a human-readable message is stored per thread and can be
//! fetched with [`cf_last_error_message`]. Strings returned through out
//! parameters are heap-allocated by Rust and must be released with
//! [`cf_string_free`].
//!
//! The build script generates `include/chipfire.h` with cbindgen.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::str::FromStr;

use chipfire::enumeration::CountTable;
use chipfire::firing::{apply_sequence, ChipConfig, FiringSequence};
use chipfire::graph::{Graph, Tree};
use chipfire::selfreach::{is_self_reachable_general, is_self_reachable_tree, reach_witness};
use chipfire::Error;

/// Result of a fallible call. `CF_STATUS_OK` is zero so callers can treat
/// nonzero as failure.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CfStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Input could not be parsed or violated a precondition; see
    /// `cf_last_error_message`.
    InvalidInput = 2,
    /// The operation needed a self-reachable configuration and the given
    /// one is not.
    NotSelfReachable = 3,
    /// A search guard tripped before the computation finished.
    GuardExceeded = 4,
    /// An internal invariant failed; see `cf_last_error_message`.
    Internal = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let owned = CString::new(msg.replace('\0', "?")).expect("NUL bytes replaced");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = owned);
}

fn status_of(err: &Error) -> CfStatus {
    match err {
        Error::NotSelfReachable => CfStatus::NotSelfReachable,
        Error::GuardExceeded { .. } => CfStatus::GuardExceeded,
        _ => CfStatus::InvalidInput,
    }
}

fn fail(err: &Error) -> CfStatus {
    set_last_error(&err.to_string());
    status_of(err)
}

/// Runs `body`, converting a panic into `CfStatus::Internal` instead of
/// unwinding across the C boundary.
fn no_unwind(body: impl FnOnce() -> CfStatus) -> CfStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_last_error("internal panic");
            CfStatus::Internal
        }
    }
}

/// # Safety
/// `ptr` must be non-null and point to a NUL-terminated string valid for
/// the duration of the call.
unsafe fn utf8_arg<'a>(ptr: *const c_char) -> Result<&'a str, CfStatus> {
    // SAFETY: caller guarantees a valid NUL-terminated string.
    match unsafe { CStr::from_ptr(ptr) }.to_str() {
        Ok(s) => Ok(s),
        Err(_) => {
            set_last_error("argument is not valid UTF-8");
            Err(CfStatus::InvalidInput)
        }
    }
}

fn string_out(s: String) -> *mut c_char {
    CString::new(s.replace('\0', "?"))
        .expect("NUL bytes replaced")
        .into_raw()
}

/// Opaque graph handle. Create with [`cf_graph_parse`] or
/// [`cf_random_tree`], release with [`cf_graph_free`].
#[allow(non_camel_case_types)]
pub struct cf_graph {
    inner: Graph,
}

/// Parses a graph from its text form (`"n <count>"` header, one `"u v"`
/// edge per line) into a fresh handle.
///
/// # Safety
/// `text` must point to a NUL-terminated string and `out` to writable
/// storage for one pointer; both must stay valid for the duration of the
/// call.
#[no_mangle]
pub unsafe extern "C" fn cf_graph_parse(text: *const c_char, out: *mut *mut cf_graph) -> CfStatus {
    if text.is_null() || out.is_null() {
        set_last_error("null pointer argument");
        return CfStatus::NullPointer;
    }
    no_unwind(|| {
        let text = match unsafe { utf8_arg(text) } {
            Ok(s) => s,
            Err(status) => return status,
        };
        match Graph::from_str(text) {
            Ok(g) => {
                // SAFETY: out is non-null and writable per the contract.
                unsafe { *out = Box::into_raw(Box::new(cf_graph { inner: g })) };
                CfStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Releases a handle created by this library. A null pointer is a no-op.
///
/// # Safety
/// `g` must be null or a pointer previously returned through
/// [`cf_graph_parse`] or [`cf_random_tree`] that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn cf_graph_free(g: *mut cf_graph) {
    if g.is_null() {
        return;
    }
    // SAFETY: caller guarantees this came from Box::into_raw in this crate.
    drop(unsafe { Box::from_raw(g) });
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cf_graph_vertex_count(g: *const cf_graph) -> u64 {
    if g.is_null() {
        return 0;
    }
    // SAFETY: caller guarantees a live handle.
    unsafe { &*g }.inner.n() as u64
}

/// Whether the graph is a tree (connected, n − 1 edges). False for null.
///
/// # Safety
/// `g` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn cf_graph_is_tree(g: *const cf_graph) -> bool {
    if g.is_null() {
        return false;
    }
    // SAFETY: caller guarantees a live handle.
    let graph = &unsafe { &*g }.inner;
    Tree::new(graph.clone()).is_ok()
}

/// Writes the graph's text form into `*out` as a freshly allocated string.
///
/// # Safety
/// `g` must be a live handle and `out` writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn cf_graph_to_text(g: *const cf_graph, out: *mut *mut c_char) -> CfStatus {
    if g.is_null() || out.is_null() {
        set_last_error("null pointer argument");
        return CfStatus::NullPointer;
    }
    no_unwind(|| {
        // SAFETY: caller guarantees a live handle and writable out.
        let text = unsafe { &*g }.inner.to_string();
        unsafe { *out = string_out(text) };
        CfStatus::Ok
    })
}

/// Decides self-reachability of `config` (text form) on the graph, writing
/// the answer to `*out`. Uses the linear-time tree decider when the graph
/// is a tree and the greedy permutation search otherwise.
///
/// # Safety
/// `g` must be a live handle, `config` a NUL-terminated string, and `out`
/// writable storage for one `bool`.
#[no_mangle]
pub unsafe extern "C" fn cf_check_self_reachable(
    g: *const cf_graph,
    config: *const c_char,
    out: *mut bool,
) -> CfStatus {
    if g.is_null() || config.is_null() || out.is_null() {
        set_last_error("null pointer argument");
        return CfStatus::NullPointer;
    }
    no_unwind(|| {
        // SAFETY: caller guarantees a live handle.
        let graph = &unsafe { &*g }.inner;
        let config = match unsafe { utf8_arg(config) } {
            Ok(s) => s,
            Err(status) => return status,
        };
        let c = match ChipConfig::from_str(config) {
            Ok(c) => c,
            Err(e) => return fail(&e),
        };
        let answer = match Tree::new(graph.clone()) {
            Ok(t) => is_self_reachable_tree(&t, &c),
            Err(_) => is_self_reachable_general(graph, &c),
        };
        match answer {
            Ok(yes) => {
                // SAFETY: out is writable per the contract.
                unsafe { *out = yes };
                CfStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Applies a firing sequence (text form, empty string for none) to a
/// configuration and writes the resulting configuration's text form into
/// `*out`.
///
/// # Safety
/// `g` must be a live handle, `config` and `sequence` NUL-terminated
/// strings, and `out` writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn cf_fire_sequence(
    g: *const cf_graph,
    config: *const c_char,
    sequence: *const c_char,
    out: *mut *mut c_char,
) -> CfStatus {
    if g.is_null() || config.is_null() || sequence.is_null() || out.is_null() {
        set_last_error("null pointer argument");
        return CfStatus::NullPointer;
    }
    no_unwind(|| {
        // SAFETY: caller guarantees a live handle.
        let graph = &unsafe { &*g }.inner;
        let (config, sequence) = match (unsafe { utf8_arg(config) }, unsafe { utf8_arg(sequence) })
        {
            (Ok(c), Ok(s)) => (c, s),
            (Err(status), _) | (_, Err(status)) => return status,
        };
        let parsed = ChipConfig::from_str(config)
            .and_then(|c| Ok((c, FiringSequence::from_str(sequence)?)));
        let (c, seq) = match parsed {
            Ok(pair) => pair,
            Err(e) => return fail(&e),
        };
        match apply_sequence(graph, &c, &seq) {
            Ok(result) => {
                // SAFETY: out is writable per the contract.
                unsafe { *out = string_out(result.to_string()) };
                CfStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Constructs a firing sequence taking `from` to `to` on a tree (both must
/// be self-reachable with equal totals) and writes the witness as JSON
/// (`{"from": ..., "to": ..., "seq": ...}`) into `*out`.
///
/// # Safety
/// `g` must be a live handle, `from` and `to` NUL-terminated strings, and
/// `out` writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn cf_reach_witness(
    g: *const cf_graph,
    from: *const c_char,
    to: *const c_char,
    out: *mut *mut c_char,
) -> CfStatus {
    if g.is_null() || from.is_null() || to.is_null() || out.is_null() {
        set_last_error("null pointer argument");
        return CfStatus::NullPointer;
    }
    no_unwind(|| {
        // SAFETY: caller guarantees a live handle.
        let graph = &unsafe { &*g }.inner;
        let (from, to) = match (unsafe { utf8_arg(from) }, unsafe { utf8_arg(to) }) {
            (Ok(f), Ok(t)) => (f, t),
            (Err(status), _) | (_, Err(status)) => return status,
        };
        let tree = match Tree::new(graph.clone()) {
            Ok(t) => t,
            Err(e) => return fail(&e),
        };
        let parsed = ChipConfig::from_str(from).and_then(|f| Ok((f, ChipConfig::from_str(to)?)));
        let (from, to) = match parsed {
            Ok(pair) => pair,
            Err(e) => return fail(&e),
        };
        match reach_witness(&tree, &from, &to) {
            Ok(w) => {
                let json = serde_json_string(&w);
                // SAFETY: out is writable per the contract.
                unsafe { *out = string_out(json) };
                CfStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

// The witness type serializes through serde; chipfire re-exports neither
// serde nor serde_json, so the JSON is produced via the Display-compatible
// field accessors to keep this crate's dependency list at just `chipfire`.
fn serde_json_string(w: &chipfire::selfreach::ReachWitness) -> String {
    fn quote(s: String) -> String {
        // text forms contain only digits, commas, and spaces — no escapes
        format!("\"{s}\"")
    }
    format!(
        "{{\"from\":{},\"to\":{},\"seq\":{}}}",
        quote(w.from_config().to_string()),
        quote(w.to_config().to_string()),
        quote(w.seq().to_string())
    )
}

/// Writes the number of self-reachable configurations with `chips` chips on
/// any `vertices`-vertex tree into `*out` as a decimal string (the count is
/// shape-independent and can exceed 64 bits).
///
/// # Safety
/// `out` must be writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn cf_count_self_reachable(
    chips: u64,
    vertices: u64,
    out: *mut *mut c_char,
) -> CfStatus {
    if out.is_null() {
        set_last_error("null pointer argument");
        return CfStatus::NullPointer;
    }
    no_unwind(|| {
        if vertices == 0 {
            set_last_error("vertices must be at least 1");
            return CfStatus::InvalidInput;
        }
        let (Ok(chips), Ok(vertices)) = (usize::try_from(chips), usize::try_from(vertices)) else {
            set_last_error("argument exceeds the platform's address width");
            return CfStatus::InvalidInput;
        };
        let count = CountTable::new().count(chips, vertices);
        // SAFETY: out is writable per the contract.
        unsafe { *out = string_out(count.to_string()) };
        CfStatus::Ok
    })
}

/// Generates a uniform random labeled tree on `vertices` vertices into a
/// fresh handle.
///
/// # Safety
/// `out` must be writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn cf_random_tree(
    vertices: u64,
    seed: u64,
    out: *mut *mut cf_graph,
) -> CfStatus {
    if out.is_null() {
        set_last_error("null pointer argument");
        return CfStatus::NullPointer;
    }
    no_unwind(|| {
        let Ok(vertices) = usize::try_from(vertices) else {
            set_last_error("argument exceeds the platform's address width");
            return CfStatus::InvalidInput;
        };
        match Tree::random(vertices, seed) {
            Ok(t) => {
                // SAFETY: out is writable per the contract.
                unsafe {
                    *out = Box::into_raw(Box::new(cf_graph {
                        inner: t.graph().clone(),
                    }));
                }
                CfStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Releases a string returned through an out parameter. A null pointer is
/// a no-op.
///
/// # Safety
/// `s` must be null or a pointer previously written by this library that
/// has not been freed.
#[no_mangle]
pub unsafe extern "C" fn cf_string_free(s: *mut c_char) {
    if s.is_null() {
        return;
    }
    // SAFETY: caller guarantees this came from CString::into_raw here.
    drop(unsafe { CString::from_raw(s) });
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn cf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}
