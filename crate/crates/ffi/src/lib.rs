//! C interface to `tricolor`.
//!
//! Graphs live behind an opaque [`TricolorGraph`] handle. Every fallible
//! function returns a [`TricolorStatus`]; on failure
//! [`tricolor_last_error`] describes the error on the calling thread.
//! Output buffers are caller-allocated with one slot per vertex.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tricolor::{
    approx_color, approx_independent_set, exact_3color, exact_max_independent_set,
    gen_planted_3col, verify_coloring, verify_independent_set, ColorConfig, Coloring, Error, Graph,
    IsConfig, VertexSet,
};

/// Opaque graph handle.
pub struct TricolorGraph(Graph);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TricolorStatus {
    Ok = 0,
    InvalidArgument = 1,
    ParseError = 2,
    BudgetExceeded = 3,
    NullPointer = 4,
    Internal = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> TricolorStatus {
    match e {
        Error::Parse { .. } | Error::Json(_) => TricolorStatus::ParseError,
        Error::BudgetExceeded { .. } => TricolorStatus::BudgetExceeded,
        Error::InvalidArgument(_) => TricolorStatus::InvalidArgument,
        Error::Io(_) => TricolorStatus::Internal,
    }
}

struct Failure(TricolorStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(TricolorStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TricolorStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            TricolorStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            TricolorStatus::Internal
        }
    }
}

unsafe fn graph_ref<'a>(g: *const TricolorGraph) -> Result<&'a Graph, Failure> {
    g.as_ref().map(|h| &h.0).ok_or_else(|| null("graph"))
}

fn boxed(g: Graph, out: *mut *mut TricolorGraph) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    unsafe { *out = Box::into_raw(Box::new(TricolorGraph(g))) };
    Ok(())
}

unsafe fn write_slice<T: Copy>(out: *mut T, values: &[T]) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output buffer"));
    }
    ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    Ok(())
}

unsafe fn write_membership(out: *mut u8, n: usize, set: &VertexSet) -> Result<(), Failure> {
    let mut flags = vec![0u8; n];
    for &v in set.members() {
        flags[v] = 1;
    }
    write_slice(out, &flags)
}

fn to_u32(values: &[usize]) -> Vec<u32> {
    values.iter().map(|&c| c as u32).collect()
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn tricolor_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a graph on `n` vertices from `m` edges given as `2m` ids
/// `u0, v0, u1, v1, ...`. Duplicate edges are merged.
///
/// # Safety
/// `edges` must point to `2 * m` readable values (or be null when `m == 0`);
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tricolor_graph_from_edges(
    n: usize,
    edges: *const u32,
    m: usize,
    out: *mut *mut TricolorGraph,
) -> TricolorStatus {
    guard(|| {
        let pairs: &[u32] = if m == 0 {
            &[]
        } else if edges.is_null() {
            return Err(null("edges"));
        } else {
            std::slice::from_raw_parts(edges, 2 * m)
        };
        let g = Graph::from_edges(n, pairs.chunks(2).map(|p| (p[0] as usize, p[1] as usize)))?;
        boxed(g, out)
    })
}

/// Parses DIMACS `.col` text.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tricolor_graph_from_dimacs(
    text: *const c_char,
    out: *mut *mut TricolorGraph,
) -> TricolorStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| Failure(TricolorStatus::ParseError, "text is not UTF-8".into()))?;
        boxed(tricolor::dimacs::load_dimacs(text)?, out)
    })
}

/// Generates a planted 3-colorable graph. When `hidden` is not null it
/// receives the planted coloring (`n` values).
///
/// # Safety
/// `out` must be writable; `hidden` must be null or hold `n` values.
#[no_mangle]
pub unsafe extern "C" fn tricolor_graph_planted(
    n: usize,
    degree: usize,
    seed: u64,
    out: *mut *mut TricolorGraph,
    hidden: *mut u32,
) -> TricolorStatus {
    guard(|| {
        let inst = gen_planted_3col(n, degree, seed)?;
        if out.is_null() {
            return Err(null("out"));
        }
        if !hidden.is_null() {
            write_slice(hidden, &to_u32(inst.hidden_coloring.assignment()))?;
        }
        boxed(inst.graph, out)
    })
}

/// Frees a graph. Null is ignored.
///
/// # Safety
/// `g` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tricolor_graph_free(g: *mut TricolorGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Vertex count, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tricolor_graph_vertex_count(g: *const TricolorGraph) -> usize {
    g.as_ref().map_or(0, |h| h.0.vertex_count())
}

/// Edge count, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tricolor_graph_edge_count(g: *const TricolorGraph) -> usize {
    g.as_ref().map_or(0, |h| h.0.edge_count())
}

/// Colors `g` at ratio `r`. `per_round_calls == 0` selects the default.
/// `colors` receives one color per vertex. `report_json`, when not null,
/// receives a run report to be released with [`tricolor_string_free`].
///
/// # Safety
/// `g` must be a live handle; `colors` must hold `n` values; the remaining
/// pointers must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn tricolor_color(
    g: *const TricolorGraph,
    r: f64,
    seed: u64,
    per_round_calls: usize,
    colors: *mut u32,
    colors_used: *mut usize,
    promise_violation: *mut bool,
    report_json: *mut *mut c_char,
) -> TricolorStatus {
    guard(|| {
        let g = graph_ref(g)?;
        if colors.is_null() {
            return Err(null("colors"));
        }
        let cfg = ColorConfig {
            per_round_calls: (per_round_calls > 0).then_some(per_round_calls),
            ..ColorConfig::default()
        };
        let (coloring, report) = approx_color(g, r, &cfg, seed)?;
        write_slice(colors, &to_u32(coloring.assignment()))?;
        if let Some(p) = colors_used.as_mut() {
            *p = report.colors_used;
        }
        if let Some(p) = promise_violation.as_mut() {
            *p = report.promise_violation;
        }
        if let Some(p) = report_json.as_mut() {
            let json = serde_json::to_string(&report).map_err(Error::from)?;
            *p = CString::new(json).expect("json has no nul").into_raw();
        }
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tricolor_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Approximate maximum independent set at ratio `r`. `membership` receives
/// 1 for members and 0 otherwise.
///
/// # Safety
/// `g` must be a live handle; `membership` must hold `n` values; `size`
/// must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn tricolor_independent_set(
    g: *const TricolorGraph,
    r: f64,
    seed: u64,
    membership: *mut u8,
    size: *mut usize,
) -> TricolorStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let (set, _) = approx_independent_set(g, r, &IsConfig::default(), seed)?;
        write_membership(membership, g.vertex_count(), &set)?;
        if let Some(p) = size.as_mut() {
            *p = set.len();
        }
        Ok(())
    })
}

/// Maximum independent set within `budget` search nodes.
///
/// # Safety
/// As for [`tricolor_independent_set`].
#[no_mangle]
pub unsafe extern "C" fn tricolor_exact_mis(
    g: *const TricolorGraph,
    budget: u64,
    membership: *mut u8,
    size: *mut usize,
) -> TricolorStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let set = exact_max_independent_set(g, budget)?;
        write_membership(membership, g.vertex_count(), &set)?;
        if let Some(p) = size.as_mut() {
            *p = set.len();
        }
        Ok(())
    })
}

/// Exact 3-coloring within `budget` search nodes. `colors` is written only
/// when `*colorable` comes back true.
///
/// # Safety
/// `g` must be a live handle; `colors` must hold `n` values; `colorable`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn tricolor_exact_3color(
    g: *const TricolorGraph,
    budget: u64,
    colors: *mut u32,
    colorable: *mut bool,
) -> TricolorStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let flag = colorable.as_mut().ok_or_else(|| null("colorable"))?;
        match exact_3color(g, budget)? {
            Some(c) => {
                write_slice(colors, &to_u32(c.assignment()))?;
                *flag = true;
            }
            None => *flag = false,
        }
        Ok(())
    })
}

/// Checks that `colors` (one per vertex) is a proper coloring.
///
/// # Safety
/// `g` must be a live handle; `colors` must hold `n` values; `valid` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn tricolor_verify_coloring(
    g: *const TricolorGraph,
    colors: *const u32,
    valid: *mut bool,
) -> TricolorStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let flag = valid.as_mut().ok_or_else(|| null("valid"))?;
        let n = g.vertex_count();
        let assignment: Vec<usize> = if n == 0 {
            Vec::new()
        } else if colors.is_null() {
            return Err(null("colors"));
        } else {
            std::slice::from_raw_parts(colors, n)
                .iter()
                .map(|&c| c as usize)
                .collect()
        };
        *flag = verify_coloring(g, &Coloring::new(assignment))?;
        Ok(())
    })
}

/// Checks that the vertices flagged in `membership` are independent.
///
/// # Safety
/// `g` must be a live handle; `membership` must hold `n` values; `valid`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn tricolor_verify_independent_set(
    g: *const TricolorGraph,
    membership: *const u8,
    valid: *mut bool,
) -> TricolorStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let flag = valid.as_mut().ok_or_else(|| null("valid"))?;
        let n = g.vertex_count();
        let members: Vec<usize> = if n == 0 {
            Vec::new()
        } else if membership.is_null() {
            return Err(null("membership"));
        } else {
            let flags = std::slice::from_raw_parts(membership, n);
            (0..n).filter(|&v| flags[v] != 0).collect()
        };
        *flag = verify_independent_set(g, &VertexSet::new(members))?;
        Ok(())
    })
}
