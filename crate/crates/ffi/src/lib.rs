//! C interface to `tortile`.
//!
//! Graphs and configurations live behind opaque handles. Every call returns a
//! [`TtStatus`]; results come back as NUL-terminated JSON (or SVG) strings that
//! the caller releases with [`tt_string_free`]. After a failure,
//! [`tt_last_error`] describes it until the next call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tortile::arrangement::{classify_orbit, member_y};
use tortile::io::{self, AnyConfig, RawConfig};
use tortile::lattice::{enumerate_bonds, laplacian_lattice_index, spanning_tree_count};
use tortile::render::{render_tiling, BoundingBox};
use tortile::voronoi::{enumerate_cac, locate_point, tiles_adjacent, CoveringBound, TileCatalog};
use tortile::{with_config, Error, Graph, ZeroCochain};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TtStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidInput = 4,
    /// A size cap or window limit was hit.
    Capacity = 5,
    Panic = 6,
}

/// A validated graph.
pub struct TtGraph {
    graph: Graph,
}

/// Lengths, twisting and characters over a field, bound to one graph.
pub struct TtConfig {
    config: AnyConfig,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> TtStatus {
    match e {
        Error::Parse(_) => TtStatus::ParseError,
        e if e.is_capacity() => TtStatus::Capacity,
        _ => TtStatus::InvalidInput,
    }
}

struct Failure(TtStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

/// Runs `body`, converting errors and panics into a status.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> TtStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => TtStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            TtStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(TtStatus::NullArgument, format!("{what} is null")));
    }
    // SAFETY: the caller passes a NUL-terminated string that outlives the call.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| Failure(TtStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn read_handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    // SAFETY: non-null handles come from this library and are still live.
    unsafe { p.as_ref() }.ok_or_else(|| Failure(TtStatus::NullArgument, format!("{what} is null")))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(TtStatus::NullArgument, "output pointer is null".into()));
    }
    let c = CString::new(s).map_err(|_| Failure(TtStatus::InvalidInput, "result contains NUL".into()))?;
    // SAFETY: `out` is non-null and points to writable storage.
    unsafe { *out = c.into_raw() };
    Ok(())
}

unsafe fn write_handle<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(TtStatus::NullArgument, "output pointer is null".into()));
    }
    // SAFETY: as above.
    unsafe { *out = Box::into_raw(Box::new(value)) };
    Ok(())
}

fn vertex_values(g: &Graph, s: &str) -> Result<ZeroCochain<i64>, Failure> {
    let v = io::parse_int_list(s)?;
    if v.len() != g.vertex_count() {
        return Err(Failure(TtStatus::InvalidInput, format!("expected {} vertex values", g.vertex_count())));
    }
    Ok(ZeroCochain(v))
}

/// The message of the last failed call on this thread, or null. Owned by the
/// library; valid until the next call.
#[no_mangle]
pub extern "C" fn tt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn tt_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: produced by `CString::into_raw` in `write_string`.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Parses graph JSON: `{"vertices": [...], "edges": [{"tail", "head"}]}`.
///
/// # Safety
/// `json` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tt_graph_from_json(json: *const c_char, out: *mut *mut TtGraph) -> TtStatus {
    guard(|| {
        let text = unsafe { read_str(json, "json") }?;
        let graph = io::parse_graph(text)?;
        unsafe { write_handle(out, TtGraph { graph }) }
    })
}

/// # Safety
/// `g` is null or a live handle from [`tt_graph_from_json`].
#[no_mangle]
pub unsafe extern "C" fn tt_graph_free(g: *mut TtGraph) {
    if !g.is_null() {
        // SAFETY: produced by `Box::into_raw`.
        drop(unsafe { Box::from_raw(g) });
    }
}

/// # Safety
/// `g` is a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn tt_graph_vertex_count(g: *const TtGraph) -> usize {
    unsafe { g.as_ref() }.map_or(0, |g| g.graph.vertex_count())
}

/// # Safety
/// `g` is a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn tt_graph_edge_count(g: *const TtGraph) -> usize {
    unsafe { g.as_ref() }.map_or(0, |g| g.graph.edge_count())
}

/// `{"spanning_trees": N, "lattice_index": N}`, numbers as strings.
///
/// # Safety
/// `g` is a live graph handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tt_trees_json(g: *const TtGraph, out: *mut *mut c_char) -> TtStatus {
    guard(|| {
        let g = &unsafe { read_handle(g, "graph") }?.graph;
        let s = format!(
            r#"{{"lattice_index":"{}","spanning_trees":"{}"}}"#,
            laplacian_lattice_index(g),
            spanning_tree_count(g)
        );
        unsafe { write_string(out, s) }
    })
}

/// Bond elements as a JSON array.
///
/// # Safety
/// `g` is a live graph handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tt_bonds_json(g: *const TtGraph, out: *mut *mut c_char) -> TtStatus {
    guard(|| {
        let g = &unsafe { read_handle(g, "graph") }?.graph;
        let items: Vec<String> = enumerate_bonds(g)?.iter().map(|b| io::bond_json(g, b).to_string()).collect();
        unsafe { write_string(out, format!("[{}]", items.join(","))) }
    })
}

/// Coherent acyclic orientations as a JSON array.
///
/// # Safety
/// `g` is a live graph handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tt_cac_json(g: *const TtGraph, out: *mut *mut c_char) -> TtStatus {
    guard(|| {
        let g = &unsafe { read_handle(g, "graph") }?.graph;
        let items: Vec<String> = enumerate_cac(g)?.elements.iter().map(|d| io::cac_json(g, d).to_string()).collect();
        unsafe { write_string(out, format!("[{}]", items.join(","))) }
    })
}

/// Builds a configuration from JSON (`lengths`, `twist`, `a`, `b`, `field`,
/// `tree`); null means unit lengths, no twist, trivial characters over Q.
///
/// # Safety
/// `g` is a live graph handle; `json` is null or NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tt_config_new(g: *const TtGraph, json: *const c_char, out: *mut *mut TtConfig) -> TtStatus {
    guard(|| {
        let g = &unsafe { read_handle(g, "graph") }?.graph;
        let raw = if json.is_null() {
            RawConfig::trivial(g)
        } else {
            io::parse_config(g, unsafe { read_str(json, "json") }?)?
        };
        let config = AnyConfig::build(g, &raw)?;
        unsafe { write_handle(out, TtConfig { config }) }
    })
}

/// # Safety
/// `c` is null or a live handle from [`tt_config_new`].
#[no_mangle]
pub unsafe extern "C" fn tt_config_free(c: *mut TtConfig) {
    if !c.is_null() {
        // SAFETY: produced by `Box::into_raw`.
        drop(unsafe { Box::from_raw(c) });
    }
}

/// Every tile with `|f(v)| ≤ window`, as a JSON array.
///
/// # Safety
/// `c` is a live configuration handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tt_tiles_json(c: *const TtConfig, window: i64, out: *mut *mut c_char) -> TtStatus {
    guard(|| {
        let cfg = &unsafe { read_handle(c, "config") }?.config;
        let g = cfg.graph();
        if window < 0 {
            return Err(Failure(TtStatus::InvalidInput, "window must be nonnegative".into()));
        }
        let catalog = TileCatalog::new(g, cfg.params(), window)?;
        let items: Vec<String> = catalog.tiles().iter().map(|t| io::tile_json(g, t).to_string()).collect();
        unsafe { write_string(out, format!("[{}]", items.join(","))) }
    })
}

/// Tiles containing a point given as comma-separated rationals. A negative
/// window means the covering bound of the point.
///
/// # Safety
/// `c` is a live configuration handle; `point` is NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tt_locate_json(
    c: *const TtConfig,
    point: *const c_char,
    window: i64,
    out: *mut *mut c_char,
) -> TtStatus {
    guard(|| {
        let cfg = &unsafe { read_handle(c, "config") }?.config;
        let g = cfg.graph();
        let x = ZeroCochain(io::parse_rational_list(unsafe { read_str(point, "point") }?)?);
        if x.len() != g.vertex_count() {
            return Err(Failure(TtStatus::InvalidInput, format!("point needs {} coordinates", g.vertex_count())));
        }
        let window = if window < 0 { CoveringBound::new(g, cfg.params()).window(&x) } else { window };
        let items: Vec<String> = locate_point(g, cfg.params(), &x, window)?
            .iter()
            .map(|t| io::tile_json(g, t).to_string())
            .collect();
        unsafe { write_string(out, format!("[{}]", items.join(","))) }
    })
}

/// The shared face of two tiles as JSON, or `null` when they are disjoint.
///
/// # Safety
/// `c` is a live configuration handle; `f1`, `f2` are NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tt_adjacency_json(
    c: *const TtConfig,
    f1: *const c_char,
    f2: *const c_char,
    out: *mut *mut c_char,
) -> TtStatus {
    guard(|| {
        let cfg = &unsafe { read_handle(c, "config") }?.config;
        let g = cfg.graph();
        let f1 = vertex_values(g, unsafe { read_str(f1, "f1") }?)?;
        let f2 = vertex_values(g, unsafe { read_str(f2, "f2") }?)?;
        let s = match tiles_adjacent(g, cfg.params(), &f1, &f2)? {
            Some(face) => io::shared_face_json(g, &face).to_string(),
            None => "null".into(),
        };
        unsafe { write_string(out, s) }
    })
}

/// Membership in `Y` and orbit data of a point given in JSON:
/// `{"member": f | null, "orbit": {"n", "f", "c"} | null}`.
///
/// # Safety
/// `c` is a live configuration handle; `point_json` is NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tt_orbit_json(
    c: *const TtConfig,
    point_json: *const c_char,
    window: i64,
    out: *mut *mut c_char,
) -> TtStatus {
    guard(|| {
        let cfg = &unsafe { read_handle(c, "config") }?.config;
        let text = unsafe { read_str(point_json, "point") }?;
        let s = with_config!(cfg, c => {
            let g = &c.graph;
            let p = io::parse_point(g, &c.field, text)?;
            let member = member_y(c, &p, window)?;
            let orbit = classify_orbit(c, &p)?;
            let orbit = match orbit {
                Some((n, f, ch)) => format!(
                    r#"{{"c":{},"f":{},"n":{n}}}"#,
                    io::elems_json(&c.field, &ch),
                    io::cochain_json(&f)
                ),
                None => "null".into(),
            };
            let member = member.map_or("null".into(), |f| io::cochain_json(&f).to_string());
            format!(r#"{{"member":{member},"orbit":{orbit}}}"#)
        });
        unsafe { write_string(out, s) }
    })
}

/// SVG of the tiling inside `bbox` (`"x0,y0,x1,y1"`), rank at most two.
///
/// # Safety
/// `c` is a live configuration handle; `bbox` is NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn tt_render_svg(
    c: *const TtConfig,
    bbox: *const c_char,
    max_window: i64,
    out: *mut *mut c_char,
) -> TtStatus {
    guard(|| {
        let cfg = &unsafe { read_handle(c, "config") }?.config;
        let bbox = BoundingBox::parse(unsafe { read_str(bbox, "bbox") }?)?;
        let svg = render_tiling(cfg.graph(), cfg.params(), &bbox, max_window)?;
        unsafe { write_string(out, svg) }
    })
}
