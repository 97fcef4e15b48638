use std::ffi::{c_char, CStr, CString};
use std::ptr;

use flowtd_ffi::*;

const CYCLE5: &str = "c five cycle\np tw 5 5\n1 2\n2 3\n3 4\n4 5\n5 1\n";

fn graph(text: &str) -> *mut FtdGraph {
    let c = CString::new(text).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { ftd_graph_parse_gr(c.as_ptr(), &mut g) }, FtdStatus::Ok);
    assert!(!g.is_null());
    g
}

fn last_error() -> String {
    let p = ftd_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn options(method: FtdMethod) -> FtdOptions {
    FtdOptions { method, seed: 3, max_seconds: 30, max_iterations: 2 }
}

fn bags(td: *const FtdDecomposition) -> Vec<Vec<usize>> {
    let mut count = 0;
    assert_eq!(unsafe { ftd_decomposition_bag_count(td, &mut count) }, FtdStatus::Ok);
    (0..count)
        .map(|i| {
            let mut buf = [0usize; 16];
            let mut len = 0;
            assert_eq!(unsafe { ftd_decomposition_bag(td, i, buf.as_mut_ptr(), buf.len(), &mut len) }, FtdStatus::Ok);
            buf[..len].to_vec()
        })
        .collect()
}

#[test]
fn decompose_cycle_with_every_method() {
    let g = graph(CYCLE5);
    let (mut n, mut m) = (0, 0);
    unsafe {
        assert_eq!(ftd_graph_node_count(g, &mut n), FtdStatus::Ok);
        assert_eq!(ftd_graph_edge_count(g, &mut m), FtdStatus::Ok);
    }
    assert_eq!((n, m), (5, 5));
    for method in [FtdMethod::Auto, FtdMethod::FlowCutter, FtdMethod::MinDegree, FtdMethod::MinFill] {
        let mut td = ptr::null_mut();
        let o = options(method);
        assert_eq!(unsafe { ftd_decompose(g, &o, &mut td) }, FtdStatus::Ok, "{method:?}");
        let mut w = 0;
        unsafe {
            assert_eq!(ftd_decomposition_width(td, &mut w), FtdStatus::Ok);
            assert_eq!(ftd_decomposition_validate(g, td), FtdStatus::Ok);
        }
        assert_eq!(w, 2, "{method:?}");
        let covered: Vec<bool> = (0..5).map(|v| bags(td).iter().any(|b| b.contains(&v))).collect();
        assert!(covered.iter().all(|&c| c));
        unsafe { ftd_decomposition_free(td) };
    }
    unsafe { ftd_graph_free(g) };
}

#[test]
fn td_text_round_trip() {
    let g = graph(CYCLE5);
    let mut td = ptr::null_mut();
    let o = options(FtdMethod::MinFill);
    assert_eq!(unsafe { ftd_decompose(g, &o, &mut td) }, FtdStatus::Ok);
    let mut s: *mut c_char = ptr::null_mut();
    assert_eq!(unsafe { ftd_decomposition_write_td(td, 5, &mut s) }, FtdStatus::Ok);
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    assert!(text.starts_with("s td "));

    let mut back = ptr::null_mut();
    assert_eq!(unsafe { ftd_decomposition_parse_td(g, s, &mut back) }, FtdStatus::Ok);
    assert_eq!(bags(back), bags(td));
    let (mut ea, mut eb) = (0, 0);
    unsafe {
        assert_eq!(ftd_decomposition_edge_count(back, &mut ea), FtdStatus::Ok);
        assert_eq!(ftd_decomposition_edge_count(td, &mut eb), FtdStatus::Ok);
    }
    assert_eq!(ea, eb);
    for i in 0..ea {
        let (mut a, mut b) = (0, 0);
        assert_eq!(unsafe { ftd_decomposition_edge(back, i, &mut a, &mut b) }, FtdStatus::Ok);
        assert!(a < 5 && b < 5 && a != b);
    }
    unsafe {
        ftd_string_free(s);
        ftd_decomposition_free(back);
        ftd_decomposition_free(td);
        ftd_graph_free(g);
    }
}

#[test]
fn from_edges_matches_parsed_graph() {
    let flat = [0usize, 1, 1, 2, 2, 3, 3, 4, 4, 0, 0, 0, 1, 0];
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { ftd_graph_from_edges(5, flat.as_ptr(), 7, &mut g) }, FtdStatus::Ok);
    let mut m = 0;
    assert_eq!(unsafe { ftd_graph_edge_count(g, &mut m) }, FtdStatus::Ok);
    assert_eq!(m, 5);

    let mut bad = ptr::null_mut();
    assert_eq!(unsafe { ftd_graph_from_edges(2, flat.as_ptr(), 2, &mut bad) }, FtdStatus::InvalidArgument);
    assert!(bad.is_null());
    assert!(last_error().contains("out of range"));
    assert_eq!(unsafe { ftd_graph_from_edges(3, ptr::null(), 0, &mut bad) }, FtdStatus::Ok);
    unsafe {
        ftd_graph_free(bad);
        ftd_graph_free(g);
    }
}

#[test]
fn errors_are_reported() {
    let bad = CString::new("p tw 2 1\n1 3\n").unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { ftd_graph_parse_gr(bad.as_ptr(), &mut g) }, FtdStatus::ParseError);
    assert!(last_error().contains("line 2"), "{}", last_error());
    assert_eq!(unsafe { ftd_graph_parse_gr(ptr::null(), &mut g) }, FtdStatus::NullPointer);

    let g = graph(CYCLE5);
    // node 3 never appears
    let uncovered = CString::new("s td 2 3 5\nb 1 1 2 5\nb 2 2 4 5\n1 2\n").unwrap();
    let mut td = ptr::null_mut();
    assert_eq!(unsafe { ftd_decomposition_parse_td(g, uncovered.as_ptr(), &mut td) }, FtdStatus::InvalidDecomposition);
    let garbage = CString::new("s td x\n").unwrap();
    assert_eq!(unsafe { ftd_decomposition_parse_td(g, garbage.as_ptr(), &mut td) }, FtdStatus::ParseError);
    assert!(td.is_null());

    let mut w = 0;
    assert_eq!(unsafe { ftd_decomposition_width(ptr::null(), &mut w) }, FtdStatus::NullPointer);
    let o = FtdOptions { max_seconds: 0, ..options(FtdMethod::Auto) };
    assert_eq!(unsafe { ftd_decompose(g, &o, &mut td) }, FtdStatus::InvalidArgument);

    assert_eq!(unsafe { ftd_decompose(g, ptr::null(), &mut td) }, FtdStatus::Ok);
    assert!(ftd_last_error().is_null());
    let mut len = 0;
    assert_eq!(unsafe { ftd_decomposition_bag(td, 0, ptr::null_mut(), 0, &mut len) }, FtdStatus::BufferTooSmall);
    assert_eq!(len, 3);
    assert_eq!(unsafe { ftd_decomposition_bag(td, 99, ptr::null_mut(), 0, &mut len) }, FtdStatus::InvalidArgument);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ftd_decomposition_write_td(td, 2, &mut s) }, FtdStatus::InvalidArgument);
    unsafe {
        ftd_decomposition_free(td);
        ftd_graph_free(g);
        ftd_graph_free(ptr::null_mut());
        ftd_string_free(ptr::null_mut());
    }
}

#[test]
fn status_names() {
    let name = |s| unsafe { CStr::from_ptr(ftd_status_name(s)) }.to_str().unwrap();
    assert_eq!(name(FtdStatus::Ok), "ok");
    assert_eq!(name(FtdStatus::BufferTooSmall), "buffer too small");
}
