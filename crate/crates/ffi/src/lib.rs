//! C interface to `flowtd`.
//!
//! Graphs and decompositions are opaque handles owned by the caller and
//! released with their `_free` function. Every entry point returns an
//! [`FtdStatus`]; on failure a description is available from
//! [`ftd_last_error`] until the next call on the same thread. Node and bag
//! ids are 0-based.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::io;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::atomic::AtomicBool;

use flowtd::anytime::{self, Mode, RunConfig};
use flowtd::io::{check_td, parse_gr, write_td};
use flowtd::{validate_td, Graph, TreeDecomposition};

pub struct FtdGraph(Graph);

pub struct FtdDecomposition(TreeDecomposition);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FtdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidUtf8 = 3,
    ParseError = 4,
    InvalidDecomposition = 5,
    BufferTooSmall = 6,
    Internal = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FtdMethod {
    Auto = 0,
    FlowCutter = 1,
    MinDegree = 2,
    MinFill = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FtdOptions {
    pub method: FtdMethod,
    pub seed: u64,
    pub max_seconds: u64,
    /// 0 means no limit besides `max_seconds`.
    pub max_iterations: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(FtdStatus, String);

impl Failure {
    fn null(what: &str) -> Self {
        Failure(FtdStatus::NullPointer, format!("{what} is null"))
    }
}

fn call(f: impl FnOnce() -> Result<(), Failure>) -> FtdStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FtdStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal error: {msg}"));
            FtdStatus::Internal
        }
    }
}

unsafe fn c_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure::null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|e| Failure(FtdStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure::null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::null(what));
    }
    out.write(value);
    Ok(())
}

/// Message for the most recent failure on this thread, or null. The
/// pointer stays valid until the next `ftd_` call on the same thread.
#[no_mangle]
pub extern "C" fn ftd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn ftd_status_name(status: FtdStatus) -> *const c_char {
    let s: &'static CStr = match status {
        FtdStatus::Ok => c"ok",
        FtdStatus::NullPointer => c"null pointer",
        FtdStatus::InvalidArgument => c"invalid argument",
        FtdStatus::InvalidUtf8 => c"invalid utf-8",
        FtdStatus::ParseError => c"parse error",
        FtdStatus::InvalidDecomposition => c"invalid decomposition",
        FtdStatus::BufferTooSmall => c"buffer too small",
        FtdStatus::Internal => c"internal error",
    };
    s.as_ptr()
}

/// Parses a PACE `.gr` document.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ftd_graph_parse_gr(text: *const c_char, out: *mut *mut FtdGraph) -> FtdStatus {
    call(|| {
        let s = c_str(text, "text")?;
        let parsed = parse_gr(s).map_err(|e| Failure(FtdStatus::ParseError, e.to_string()))?;
        put(out, Box::into_raw(Box::new(FtdGraph(parsed.graph))), "out")
    })
}

/// Builds a graph from `edge_count` pairs stored flat in `edges`.
/// Self-loops and duplicates are dropped.
///
/// # Safety
/// `edges` must point to `2 * edge_count` readable values (it may be null
/// when `edge_count` is 0) and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ftd_graph_from_edges(
    node_count: usize,
    edges: *const usize,
    edge_count: usize,
    out: *mut *mut FtdGraph,
) -> FtdStatus {
    call(|| {
        let flat: &[usize] = match edge_count {
            0 => &[],
            _ if edges.is_null() => return Err(Failure::null("edges")),
            _ => std::slice::from_raw_parts(edges, 2 * edge_count),
        };
        if let Some(&v) = flat.iter().find(|&&v| v >= node_count) {
            return Err(Failure(FtdStatus::InvalidArgument, format!("node {v} out of range for {node_count} nodes")));
        }
        let g = Graph::from_edges(node_count, flat.chunks_exact(2).map(|p| (p[0], p[1])));
        put(out, Box::into_raw(Box::new(FtdGraph(g))), "out")
    })
}

/// # Safety
/// `g` must be null or a handle from this library that was not freed.
#[no_mangle]
pub unsafe extern "C" fn ftd_graph_free(g: *mut FtdGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live graph handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ftd_graph_node_count(g: *const FtdGraph, out: *mut usize) -> FtdStatus {
    call(|| put(out, deref(g, "graph")?.0.node_count(), "out"))
}

/// # Safety
/// `g` must be a live graph handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ftd_graph_edge_count(g: *const FtdGraph, out: *mut usize) -> FtdStatus {
    call(|| put(out, deref(g, "graph")?.0.edge_count(), "out"))
}

/// Defaults: automatic method, seed 0, one minute, no iteration limit.
#[no_mangle]
pub extern "C" fn ftd_options_default() -> FtdOptions {
    FtdOptions { method: FtdMethod::Auto, seed: 0, max_seconds: 60, max_iterations: 0 }
}

/// Runs the anytime solver and returns the best decomposition found.
///
/// # Safety
/// `g` must be a live graph handle, `options` null (for defaults) or
/// readable, and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ftd_decompose(
    g: *const FtdGraph,
    options: *const FtdOptions,
    out: *mut *mut FtdDecomposition,
) -> FtdStatus {
    call(|| {
        let g = &deref(g, "graph")?.0;
        let o = options.as_ref().copied().unwrap_or_else(|| ftd_options_default());
        let cfg = RunConfig {
            seed: o.seed,
            max_seconds: o.max_seconds,
            output_interval_seconds: o.max_seconds,
            mode: match o.method {
                FtdMethod::Auto => Mode::Auto,
                FtdMethod::FlowCutter => Mode::FlowCutter,
                FtdMethod::MinDegree => Mode::MinDegree,
                FtdMethod::MinFill => Mode::MinFill,
            },
            max_iterations: (o.max_iterations > 0).then_some(o.max_iterations),
            ..RunConfig::default()
        };
        let summary = anytime::run(g, &cfg, &AtomicBool::new(false), &mut io::sink()).map_err(|e| match e {
            anytime::RunError::Config(m) => Failure(FtdStatus::InvalidArgument, m),
            e => Failure(FtdStatus::Internal, e.to_string()),
        })?;
        put(out, Box::into_raw(Box::new(FtdDecomposition(summary.best.td))), "out")
    })
}

/// Parses and fully checks a `.td` document against `g`.
///
/// # Safety
/// `g` must be a live graph handle, `text` NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ftd_decomposition_parse_td(
    g: *const FtdGraph,
    text: *const c_char,
    out: *mut *mut FtdDecomposition,
) -> FtdStatus {
    call(|| {
        let g = &deref(g, "graph")?.0;
        let td = check_td(c_str(text, "text")?, g).map_err(|e| {
            let status = match e {
                flowtd::io::TdCheckError::Parse(_) => FtdStatus::ParseError,
                flowtd::io::TdCheckError::Invalid(_) => FtdStatus::InvalidDecomposition,
            };
            Failure(status, e.to_string())
        })?;
        put(out, Box::into_raw(Box::new(FtdDecomposition(td))), "out")
    })
}

/// # Safety
/// `td` must be null or a handle from this library that was not freed.
#[no_mangle]
pub unsafe extern "C" fn ftd_decomposition_free(td: *mut FtdDecomposition) {
    if !td.is_null() {
        drop(Box::from_raw(td));
    }
}

/// Returns `FTD_STATUS_OK` if `td` is a tree decomposition of `g`.
///
/// # Safety
/// Both handles must be live.
#[no_mangle]
pub unsafe extern "C" fn ftd_decomposition_validate(g: *const FtdGraph, td: *const FtdDecomposition) -> FtdStatus {
    call(|| {
        let g = &deref(g, "graph")?.0;
        let td = &deref(td, "decomposition")?.0;
        validate_td(g, td).map_err(|e| Failure(FtdStatus::InvalidDecomposition, e.to_string()))
    })
}

/// Largest bag size minus one.
///
/// # Safety
/// `td` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ftd_decomposition_width(td: *const FtdDecomposition, out: *mut usize) -> FtdStatus {
    call(|| put(out, deref(td, "decomposition")?.0.width(), "out"))
}

/// # Safety
/// `td` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ftd_decomposition_bag_count(td: *const FtdDecomposition, out: *mut usize) -> FtdStatus {
    call(|| put(out, deref(td, "decomposition")?.0.bag_count(), "out"))
}

/// Copies bag `bag` into `nodes` (capacity `cap`) in ascending order and
/// stores its size in `len`. If `cap` is too small nothing is copied,
/// `len` still receives the size and `FTD_STATUS_BUFFER_TOO_SMALL` is
/// returned; `nodes` may be null when `cap` is 0.
///
/// # Safety
/// `td` must be a live handle, `nodes` writable for `cap` values and `len`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ftd_decomposition_bag(
    td: *const FtdDecomposition,
    bag: usize,
    nodes: *mut usize,
    cap: usize,
    len: *mut usize,
) -> FtdStatus {
    call(|| {
        let td = &deref(td, "decomposition")?.0;
        let b = td.bags.get(bag).ok_or_else(|| {
            Failure(FtdStatus::InvalidArgument, format!("bag {bag} out of range for {} bags", td.bag_count()))
        })?;
        put(len, b.len(), "len")?;
        if b.len() > cap {
            return Err(Failure(FtdStatus::BufferTooSmall, format!("bag {bag} has {} nodes, capacity {cap}", b.len())));
        }
        if !b.is_empty() {
            if nodes.is_null() {
                return Err(Failure::null("nodes"));
            }
            for (i, v) in b.iter().enumerate() {
                nodes.add(i).write(v);
            }
        }
        Ok(())
    })
}

/// Number of tree edges between bags.
///
/// # Safety
/// `td` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ftd_decomposition_edge_count(td: *const FtdDecomposition, out: *mut usize) -> FtdStatus {
    call(|| put(out, deref(td, "decomposition")?.0.edges.len(), "out"))
}

/// Endpoints of tree edge `edge`, as bag ids.
///
/// # Safety
/// `td` must be a live handle, `a` and `b` writable.
#[no_mangle]
pub unsafe extern "C" fn ftd_decomposition_edge(
    td: *const FtdDecomposition,
    edge: usize,
    a: *mut usize,
    b: *mut usize,
) -> FtdStatus {
    call(|| {
        let td = &deref(td, "decomposition")?.0;
        let &(x, y) = td.edges.get(edge).ok_or_else(|| {
            Failure(FtdStatus::InvalidArgument, format!("edge {edge} out of range for {} edges", td.edges.len()))
        })?;
        put(a, x, "a")?;
        put(b, y, "b")
    })
}

/// Renders `td` as a PACE `.td` document for a graph with `node_count`
/// nodes. Release the string with [`ftd_string_free`].
///
/// # Safety
/// `td` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ftd_decomposition_write_td(
    td: *const FtdDecomposition,
    node_count: usize,
    out: *mut *mut c_char,
) -> FtdStatus {
    call(|| {
        let td = &deref(td, "decomposition")?.0;
        if let Some(v) = td.bags.iter().flat_map(|b| b.iter()).find(|&v| v >= node_count) {
            return Err(Failure(FtdStatus::InvalidArgument, format!("bag node {v} out of range for {node_count} nodes")));
        }
        let s = CString::new(write_td(td, node_count)).expect("no interior NUL in .td output");
        put(out, s.into_raw(), "out")
    })
}

/// # Safety
/// `s` must be null or a string returned by this library that was not freed.
#[no_mangle]
pub unsafe extern "C" fn ftd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
