use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use tortile_ffi::*;

const K3: &str = r#"{"vertices":["v1","v2","v3"],"edges":[
    {"tail":"v1","head":"v2"},{"tail":"v2","head":"v3"},{"tail":"v1","head":"v3"}]}"#;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn take(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { tt_string_free(p) };
    s
}

fn last_error() -> String {
    let p = tt_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn k3() -> *mut TtGraph {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { tt_graph_from_json(cstr(K3).as_ptr(), &mut g) }, TtStatus::Ok);
    g
}

#[test]
fn graph_queries() {
    let g = k3();
    assert_eq!(unsafe { tt_graph_vertex_count(g) }, 3);
    assert_eq!(unsafe { tt_graph_edge_count(g) }, 3);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { tt_trees_json(g, &mut out) }, TtStatus::Ok);
    assert_eq!(take(out), r#"{"lattice_index":"3","spanning_trees":"3"}"#);
    assert_eq!(unsafe { tt_bonds_json(g, &mut out) }, TtStatus::Ok);
    assert_eq!(take(out).matches("norm_sq").count(), 6);
    assert_eq!(unsafe { tt_cac_json(g, &mut out) }, TtStatus::Ok);
    assert_eq!(take(out).matches("partition").count(), 13);
    unsafe { tt_graph_free(g) };
}

#[test]
fn errors_set_status_and_message() {
    let mut g = ptr::null_mut();
    let bad = cstr(r#"{"vertices":["a","b"],"edges":[]}"#);
    assert_eq!(unsafe { tt_graph_from_json(bad.as_ptr(), &mut g) }, TtStatus::InvalidInput);
    assert!(g.is_null());
    assert!(last_error().contains("not connected"));

    assert_eq!(unsafe { tt_graph_from_json(cstr("{").as_ptr(), &mut g) }, TtStatus::ParseError);
    assert_eq!(unsafe { tt_graph_from_json(ptr::null(), &mut g) }, TtStatus::NullArgument);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { tt_trees_json(ptr::null(), &mut out) }, TtStatus::NullArgument);

    let g = k3();
    let mut cfg = ptr::null_mut();
    let wrong_b = cstr(r#"{"b":["1","2"]}"#);
    assert_eq!(unsafe { tt_config_new(g, wrong_b.as_ptr(), &mut cfg) }, TtStatus::InvalidInput);
    assert_eq!(unsafe { tt_config_new(g, ptr::null(), &mut cfg) }, TtStatus::Ok);
    let point = cstr("1/3,1/3,-2/3");
    assert_eq!(unsafe { tt_locate_json(cfg, point.as_ptr(), 0, &mut out) }, TtStatus::Capacity);
    assert!(last_error().contains("window"));
    // A successful call clears the message.
    assert_eq!(unsafe { tt_locate_json(cfg, point.as_ptr(), -1, &mut out) }, TtStatus::Ok);
    assert!(tt_last_error().is_null());
    take(out);
    unsafe {
        tt_config_free(cfg);
        tt_graph_free(g);
        tt_string_free(ptr::null_mut());
    }
}

#[test]
fn tiles_adjacency_orbits_and_render() {
    let g = k3();
    let mut cfg = ptr::null_mut();
    let json = cstr(r#"{"lengths":[1,2,1],"twist":[0,1,0],"a":["2","3","1/2"],"b":["5"]}"#);
    assert_eq!(unsafe { tt_config_new(g, json.as_ptr(), &mut cfg) }, TtStatus::Ok);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { tt_tiles_json(cfg, 1, &mut out) }, TtStatus::Ok);
    assert!(take(out).starts_with("[{"));

    let (f0, f1) = (cstr("0,0,0"), cstr("0,0,1"));
    assert_eq!(unsafe { tt_adjacency_json(cfg, f0.as_ptr(), f1.as_ptr(), &mut out) }, TtStatus::Ok);
    let face = take(out);
    assert!(face == "null" || face.contains("alpha"));

    let point = cstr(
        r#"[{"edge":"e1","kind":"interior","level":0,"ratio":"1"},
            {"edge":"e2","kind":"node","level":"1/2"},
            {"edge":"e3","kind":"interior","level":0,"ratio":"5"}]"#,
    );
    assert_eq!(unsafe { tt_orbit_json(cfg, point.as_ptr(), 4, &mut out) }, TtStatus::Ok);
    let orbit = take(out);
    assert!(orbit.starts_with(r#"{"member":"#), "{orbit}");

    let bbox = cstr("-1,-1,1,1");
    assert_eq!(unsafe { tt_render_svg(cfg, bbox.as_ptr(), 10, &mut out) }, TtStatus::Ok);
    assert!(take(out).contains("<svg"));
    unsafe {
        tt_config_free(cfg);
        tt_graph_free(g);
    }
}

#[test]
fn header_declares_the_api_and_compiles() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/tortile.h");
    let text = std::fs::read_to_string(&header).expect("build script writes the header");
    for name in [
        "tt_graph_from_json",
        "tt_config_new",
        "tt_locate_json",
        "tt_string_free",
        "tt_last_error",
        "TT_STATUS_OK",
        "typedef struct TtGraph TtGraph",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }
    // Syntax-check the header with the system C compiler when there is one.
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"tortile.h\"\nint main(void) { TtGraph *g = 0; return tt_graph_from_json(\"{}\", &g) == TT_STATUS_OK; }\n",
    )
    .unwrap();
    let inc = header.parent().unwrap();
    match Command::new("cc").arg("-fsyntax-only").arg("-I").arg(inc).arg(&src).output() {
        Ok(o) => assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr)),
        Err(_) => eprintln!("no C compiler; skipped the syntax check"),
    }
}
