//! C ABI for `pcnlab`.
//!
//! Graphs cross the boundary as opaque `PcnGraph` handles owned by the caller
//! and released with `pcn_graph_free`. Every fallible function returns a
//! `PcnStatus` and writes results through out-pointers; on failure the
//! message is kept per thread and read back with `pcn_last_error_message`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use pcnlab::bounds::{self, BoundsError, Parity};
use pcnlab::configmodel::{self, ConfigError};
use pcnlab::independence;
use pcnlab::packing::{self, ChiP};
use pcnlab::{Girth, MultiGraph};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PcnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    Exhausted = 4,
    OutOfDomain = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PcnParity {
    /// `f(x, k)`, colour `2k`.
    Even = 0,
    /// `h(x, k)`, colour `2k + 1`.
    Odd = 1,
}

/// Opaque multigraph handle.
pub struct PcnGraph {
    inner: MultiGraph,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

type Failure = (PcnStatus, String);

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> PcnStatus {
    let (status, message) = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => (PcnStatus::Ok, String::new()),
        Ok(Err(failure)) => failure,
        Err(_) => (PcnStatus::Panic, "internal panic".to_string()),
    };
    LAST_ERROR.with(|e| *e.borrow_mut() = message);
    status
}

fn null() -> Failure {
    (PcnStatus::NullPointer, "null pointer argument".to_string())
}

unsafe fn graph<'a>(g: *const PcnGraph) -> Result<&'a MultiGraph, Failure> {
    g.as_ref().map(|g| &g.inner).ok_or_else(null)
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

fn config_failure(e: ConfigError) -> Failure {
    let status = match e {
        ConfigError::Exhausted { .. } => PcnStatus::Exhausted,
        ConfigError::Parse { .. } => PcnStatus::ParseError,
        _ => PcnStatus::InvalidArgument,
    };
    (status, e.to_string())
}

fn bounds_failure(e: BoundsError) -> Failure {
    let status = match e {
        BoundsError::OutOfDomain { .. } => PcnStatus::OutOfDomain,
        _ => PcnStatus::InvalidArgument,
    };
    (status, e.to_string())
}

unsafe fn export(out: *mut *mut PcnGraph, g: MultiGraph) -> Result<(), Failure> {
    write(out, Box::into_raw(Box::new(PcnGraph { inner: g })))
}

/// Copies `text` plus a NUL into `buf` if it fits; always reports the size
/// needed (including the NUL) through `needed` when non-null.
unsafe fn copy_text(text: &str, buf: *mut c_char, cap: usize, needed: *mut usize) -> Result<(), Failure> {
    let len = text.len() + 1;
    if !needed.is_null() {
        needed.write(len);
    }
    if buf.is_null() || cap < len {
        return Err((PcnStatus::BufferTooSmall, format!("buffer needs {len} bytes")));
    }
    std::ptr::copy_nonoverlapping(text.as_ptr(), buf.cast(), text.len());
    buf.add(text.len()).write(0);
    Ok(())
}

/// Builds a graph on `n` vertices from `edge_count` pairs stored flat in
/// `edges` (`2 * edge_count` entries).
///
/// # Safety
/// `edges` must point to `2 * edge_count` readable values (or be null when
/// `edge_count` is 0); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pcn_graph_new(n: usize, edges: *const usize, edge_count: usize, out: *mut *mut PcnGraph) -> PcnStatus {
    guard(|| {
        let flat = if edge_count == 0 {
            &[][..]
        } else if edges.is_null() {
            return Err(null());
        } else {
            std::slice::from_raw_parts(edges, 2 * edge_count)
        };
        let g = MultiGraph::new(n, flat.chunks_exact(2).map(|e| (e[0], e[1])))
            .map_err(|e| (PcnStatus::InvalidArgument, e.to_string()))?;
        export(out, g)
    })
}

/// Parses the `n m` / `u v` text format.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pcn_graph_parse(text: *const c_char, out: *mut *mut PcnGraph) -> PcnStatus {
    guard(|| {
        if text.is_null() {
            return Err(null());
        }
        let text = CStr::from_ptr(text).to_str().map_err(|e| (PcnStatus::ParseError, e.to_string()))?;
        let g = MultiGraph::parse(text).map_err(|e| (PcnStatus::ParseError, e.to_string()))?;
        export(out, g)
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `g` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pcn_graph_free(g: *mut PcnGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pcn_graph_vertex_count(g: *const PcnGraph, out: *mut usize) -> PcnStatus {
    guard(|| write(out, graph(g)?.n()))
}

/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pcn_graph_edge_count(g: *const PcnGraph, out: *mut usize) -> PcnStatus {
    guard(|| write(out, graph(g)?.edge_count()))
}

/// Girth, with 0 standing for an acyclic graph.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pcn_graph_girth(g: *const PcnGraph, out: *mut usize) -> PcnStatus {
    guard(|| {
        let girth = match graph(g)?.girth() {
            Girth::Finite(v) => v,
            Girth::Infinite => 0,
        };
        write(out, girth)
    })
}

/// Writes the NUL-terminated text form into `buf`. If `cap` is too small
/// nothing is written, `needed` receives the required size and the call
/// returns `PCN_STATUS_BUFFER_TOO_SMALL`.
///
/// # Safety
/// `g` must be a live handle; `buf` must hold `cap` bytes; `needed` may be null.
#[no_mangle]
pub unsafe extern "C" fn pcn_graph_to_text(g: *const PcnGraph, buf: *mut c_char, cap: usize, needed: *mut usize) -> PcnStatus {
    guard(|| copy_text(&graph(g)?.to_text(), buf, cap, needed))
}

/// `exp(-sum_{k=1}^{g-1} 2^(k-1)/k)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pcn_girth_limit_probability(girth: usize, out: *mut f64) -> PcnStatus {
    guard(|| write(out, configmodel::girth_limit_probability(girth).map_err(config_failure)?))
}

/// Uniform labeled cubic graph with girth at least `girth`; `max_tries` of 0
/// selects the default budget.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pcn_sample_girth_conditioned(
    n: usize,
    girth: usize,
    seed: u64,
    max_tries: u64,
    out: *mut *mut PcnGraph,
) -> PcnStatus {
    guard(|| {
        let tries = if max_tries == 0 { configmodel::default_max_tries(girth).map_err(config_failure)? } else { max_tries };
        let sample = configmodel::sample_girth_conditioned(n, girth, seed, tries).map_err(config_failure)?;
        export(out, sample.graph)
    })
}

/// # Safety
/// `out_rate` and `out_accepted` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pcn_estimate_acceptance(
    n: usize,
    girth: usize,
    trials: u64,
    seed: u64,
    out_rate: *mut f64,
    out_accepted: *mut u64,
) -> PcnStatus {
    guard(|| {
        if out_rate.is_null() || out_accepted.is_null() {
            return Err(null());
        }
        let stats = configmodel::estimate_acceptance(n, girth, trials, seed).map_err(config_failure)?;
        write(out_rate, stats.acceptance_rate)?;
        write(out_accepted, stats.accepted)
    })
}

/// Exact `c_i`. The witness is copied into `witness` when it is non-null and
/// `cap` is large enough; `out_size` is always set on success or
/// `PCN_STATUS_BUFFER_TOO_SMALL`.
///
/// # Safety
/// `g` must be a live handle; `witness` must hold `cap` values or be null.
#[no_mangle]
pub unsafe extern "C" fn pcn_max_i_independent(
    g: *const PcnGraph,
    i: usize,
    witness: *mut usize,
    cap: usize,
    out_size: *mut usize,
) -> PcnStatus {
    guard(|| {
        let set = independence::max_i_independent(graph(g)?, i);
        write(out_size, set.size)?;
        if !witness.is_null() {
            if cap < set.size {
                return Err((PcnStatus::BufferTooSmall, format!("witness needs {} slots", set.size)));
            }
            std::ptr::copy_nonoverlapping(set.witness.as_ptr(), witness, set.size);
        }
        Ok(())
    })
}

/// Exact `c_{1,2,4}`.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pcn_max_union_124(g: *const PcnGraph, out: *mut usize) -> PcnStatus {
    guard(|| write(out, independence::max_union_124(graph(g)?).total))
}

/// Packing chromatic number up to `k_max`. `out_exact` is false when it
/// exceeds `k_max`. When exact and `colors` is non-null, the witness colouring
/// (one entry per vertex) is written there.
///
/// # Safety
/// `g` must be a live handle; `colors` must hold one value per vertex or be null.
#[no_mangle]
pub unsafe extern "C" fn pcn_chi_p(
    g: *const PcnGraph,
    k_max: u32,
    colors: *mut u32,
    out_value: *mut u32,
    out_exact: *mut bool,
) -> PcnStatus {
    guard(|| {
        if out_value.is_null() || out_exact.is_null() {
            return Err(null());
        }
        match packing::chi_p(graph(g)?, k_max) {
            ChiP::Exact { value, witness } => {
                if !colors.is_null() {
                    for (v, c) in witness.colors.iter().enumerate() {
                        colors.add(v).write(c.unwrap_or(0));
                    }
                }
                write(out_value, value)?;
                write(out_exact, true)
            }
            ChiP::GreaterThan(k) => {
                write(out_value, k)?;
                write(out_exact, false)
            }
        }
    })
}

/// `f(x, k)` or `h(x, k)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pcn_rate(parity: PcnParity, x: f64, k: u32, out: *mut f64) -> PcnStatus {
    guard(|| {
        let parity = match parity {
            PcnParity::Even => Parity::Even,
            PcnParity::Odd => Parity::Odd,
        };
        write(out, bounds::rate(parity, x, k).map_err(bounds_failure)?)
    })
}

/// Total density of the budget certificate for `k >= 12` colours.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pcn_budget_total(k: u32, out: *mut f64) -> PcnStatus {
    guard(|| write(out, bounds::budget_certificate(k).map_err(bounds_failure)?.total))
}

/// Copies the last error message of this thread (empty after a success) and
/// returns the buffer size it needs, including the NUL. Pass a null buffer to
/// query the size.
///
/// # Safety
/// `buf` must hold `cap` bytes or be null.
#[no_mangle]
pub unsafe extern "C" fn pcn_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let len = msg.len() + 1;
        if !buf.is_null() && cap >= len {
            std::ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast(), msg.len());
            buf.add(msg.len()).write(0);
        }
        len
    })
}
