//! C ABI over the census toolkit: opaque digraph handles, status codes,
//! and a thread-local error message. The header is generated by cbindgen
//! into `include/atdcensus.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use atdcensus::canon::{are_isomorphic, canonical_form, is_self_opposite};
use atdcensus::census::{entries_from_documents, verify_two_atd};
use atdcensus::constructions::{generalised_wreath, wreath};
use atdcensus::digraph::Digraph;
use atdcensus::error::Error;
use atdcensus::io::{atd_csv, read_digraph, write_digraph};

/// Opaque digraph handle.
pub struct AtdDigraph(Digraph);

/// Status of an FFI call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum AtdStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidArgument = 2,
    BudgetExceeded = 3,
    Utf8 = 4,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(e: &Error) -> AtdStatus {
    let message = CString::new(e.to_string()).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
    match e {
        Error::BudgetExceeded { .. } | Error::CapExceeded { .. } => AtdStatus::BudgetExceeded,
        _ => AtdStatus::InvalidArgument,
    }
}

/// The message of the most recent error on this thread, or null. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn atd_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|s| s.as_ptr())
            .unwrap_or(ptr::null())
    })
}

unsafe fn write_out(out: *mut *mut AtdDigraph, d: Digraph) -> AtdStatus {
    if out.is_null() {
        return AtdStatus::NullArgument;
    }
    unsafe { *out = Box::into_raw(Box::new(AtdDigraph(d))) };
    AtdStatus::Ok
}

/// Builds a digraph on `n` vertices from `arc_count` pairs laid out flat as
/// `tail0, head0, tail1, head1, ...`.
///
/// # Safety
/// `arcs` must point to `2 * arc_count` readable u32 values; `out` must be
/// a valid location to store the handle.
#[no_mangle]
pub unsafe extern "C" fn atd_digraph_from_arcs(
    n: u32,
    arcs: *const u32,
    arc_count: usize,
    out: *mut *mut AtdDigraph,
) -> AtdStatus {
    if arcs.is_null() && arc_count > 0 {
        return AtdStatus::NullArgument;
    }
    let pairs: Vec<(u32, u32)> = (0..arc_count)
        .map(|i| unsafe { (*arcs.add(2 * i), *arcs.add(2 * i + 1)) })
        .collect();
    match Digraph::from_arcs(n as usize, &pairs) {
        Ok(d) => unsafe { write_out(out, d) },
        Err(e) => set_error(&e),
    }
}

/// Parses a digraph document (see the `ATD-DIGRAPH v1` format).
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out` a valid location.
#[no_mangle]
pub unsafe extern "C" fn atd_digraph_parse(
    text: *const c_char,
    out: *mut *mut AtdDigraph,
) -> AtdStatus {
    if text.is_null() {
        return AtdStatus::NullArgument;
    }
    let Ok(text) = unsafe { CStr::from_ptr(text) }.to_str() else {
        return AtdStatus::Utf8;
    };
    match read_digraph(text) {
        Ok((d, _)) => unsafe { write_out(out, d) },
        Err(e) => set_error(&e),
    }
}

/// The wreath digraph on `2n` vertices.
///
/// # Safety
/// `out` must be a valid location to store the handle.
#[no_mangle]
pub unsafe extern "C" fn atd_wreath(n: u32, out: *mut *mut AtdDigraph) -> AtdStatus {
    match wreath(n) {
        Ok(d) => unsafe { write_out(out, d) },
        Err(e) => set_error(&e),
    }
}

/// The generalised wreath digraph on `n * 2^r` vertices.
///
/// # Safety
/// `out` must be a valid location to store the handle.
#[no_mangle]
pub unsafe extern "C" fn atd_generalised_wreath(
    n: u32,
    r: u32,
    out: *mut *mut AtdDigraph,
) -> AtdStatus {
    match generalised_wreath(n, r) {
        Ok(d) => unsafe { write_out(out, d) },
        Err(e) => set_error(&e),
    }
}

/// Releases a digraph handle. A null pointer is ignored.
///
/// # Safety
/// `d` must be a pointer previously returned by this library and not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn atd_digraph_free(d: *mut AtdDigraph) {
    if !d.is_null() {
        drop(unsafe { Box::from_raw(d) });
    }
}

/// # Safety
/// `d` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn atd_digraph_order(d: *const AtdDigraph) -> u32 {
    if d.is_null() {
        return 0;
    }
    unsafe { &*d }.0.order() as u32
}

/// # Safety
/// `d` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn atd_digraph_arc_count(d: *const AtdDigraph) -> usize {
    if d.is_null() {
        return 0;
    }
    unsafe { &*d }.0.arc_count()
}

/// The digraph with all arcs reversed.
///
/// # Safety
/// `d` must be a live handle; `out` a valid location.
#[no_mangle]
pub unsafe extern "C" fn atd_opposite(
    d: *const AtdDigraph,
    out: *mut *mut AtdDigraph,
) -> AtdStatus {
    if d.is_null() {
        return AtdStatus::NullArgument;
    }
    let opp = unsafe { &*d }.0.opposite();
    unsafe { write_out(out, opp) }
}

/// The underlying graph (symmetrised arc relation).
///
/// # Safety
/// `d` must be a live handle; `out` a valid location.
#[no_mangle]
pub unsafe extern "C" fn atd_underlying_graph(
    d: *const AtdDigraph,
    out: *mut *mut AtdDigraph,
) -> AtdStatus {
    if d.is_null() {
        return AtdStatus::NullArgument;
    }
    match unsafe { &*d }.0.underlying_graph() {
        Ok(u) => unsafe { write_out(out, u) },
        Err(e) => set_error(&e),
    }
}

/// Label-invariant certificate bytes; two digraphs are isomorphic iff their
/// certificates agree. The buffer is allocated by the library and must be
/// released with `atd_bytes_free`.
///
/// # Safety
/// `d` must be a live handle; `out_bytes` and `out_len` valid locations.
#[no_mangle]
pub unsafe extern "C" fn atd_canonical_certificate(
    d: *const AtdDigraph,
    out_bytes: *mut *mut u8,
    out_len: *mut usize,
) -> AtdStatus {
    if d.is_null() || out_bytes.is_null() || out_len.is_null() {
        return AtdStatus::NullArgument;
    }
    match canonical_form(&unsafe { &*d }.0) {
        Ok(c) => {
            let mut bytes = c.bytes.into_boxed_slice();
            unsafe {
                *out_len = bytes.len();
                *out_bytes = bytes.as_mut_ptr();
            }
            std::mem::forget(bytes);
            AtdStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Releases a byte buffer returned by this library.
///
/// # Safety
/// `bytes` and `len` must come from a single library allocation.
#[no_mangle]
pub unsafe extern "C" fn atd_bytes_free(bytes: *mut u8, len: usize) {
    if !bytes.is_null() {
        drop(unsafe { Box::from_raw(std::ptr::slice_from_raw_parts_mut(bytes, len)) });
    }
}

/// # Safety
/// `a` and `b` must be live handles; `out` a valid location.
#[no_mangle]
pub unsafe extern "C" fn atd_are_isomorphic(
    a: *const AtdDigraph,
    b: *const AtdDigraph,
    out: *mut bool,
) -> AtdStatus {
    if a.is_null() || b.is_null() || out.is_null() {
        return AtdStatus::NullArgument;
    }
    match are_isomorphic(&unsafe { &*a }.0, &unsafe { &*b }.0) {
        Ok(v) => {
            unsafe { *out = v };
            AtdStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// # Safety
/// `d` must be a live handle; `out` a valid location.
#[no_mangle]
pub unsafe extern "C" fn atd_is_self_opposite(
    d: *const AtdDigraph,
    out: *mut bool,
) -> AtdStatus {
    if d.is_null() || out.is_null() {
        return AtdStatus::NullArgument;
    }
    match is_self_opposite(&unsafe { &*d }.0) {
        Ok(v) => {
            unsafe { *out = v };
            AtdStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Whether the digraph is connected, asymmetric, 2-valent regular and
/// arc-transitive.
///
/// # Safety
/// `d` must be a live handle; `out` a valid location.
#[no_mangle]
pub unsafe extern "C" fn atd_is_two_atd(d: *const AtdDigraph, out: *mut bool) -> AtdStatus {
    if d.is_null() || out.is_null() {
        return AtdStatus::NullArgument;
    }
    match verify_two_atd(&unsafe { &*d }.0) {
        Ok(v) => {
            unsafe { *out = v.is_two_atd() };
            AtdStatus::Ok
        }
        Err(e) => set_error(&e),
    }
}

/// Serialises a digraph document. Free with `atd_string_free`.
///
/// # Safety
/// `d` must be a live handle; `out` a valid location.
#[no_mangle]
pub unsafe extern "C" fn atd_digraph_document(
    d: *const AtdDigraph,
    out: *mut *mut c_char,
) -> AtdStatus {
    if d.is_null() || out.is_null() {
        return AtdStatus::NullArgument;
    }
    let text = write_digraph(&unsafe { &*d }.0, None);
    match CString::new(text) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            AtdStatus::Ok
        }
        Err(_) => AtdStatus::Utf8,
    }
}

/// Computes the full invariant record of a 2-valent arc-transitive
/// asymmetric digraph as a two-line CSV (header and row). Free with
/// `atd_string_free`.
///
/// # Safety
/// `d` must be a live handle; `out` a valid location.
#[no_mangle]
pub unsafe extern "C" fn atd_record_csv(
    d: *const AtdDigraph,
    out: *mut *mut c_char,
) -> AtdStatus {
    if d.is_null() || out.is_null() {
        return AtdStatus::NullArgument;
    }
    let mut documents = std::collections::HashMap::new();
    documents.insert("input".to_string(), unsafe { &*d }.0.clone());
    let text = entries_from_documents(&documents).and_then(|entries| atd_csv(&entries));
    match text {
        Ok(text) => match CString::new(text) {
            Ok(s) => {
                unsafe { *out = s.into_raw() };
                AtdStatus::Ok
            }
            Err(_) => AtdStatus::Utf8,
        },
        Err(e) => set_error(&e),
    }
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be a string previously returned by this library.
#[no_mangle]
pub unsafe extern "C" fn atd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_measure_free() {
        unsafe {
            let mut d: *mut AtdDigraph = ptr::null_mut();
            assert!(atd_wreath(3, &mut d) == AtdStatus::Ok);
            assert_eq!(atd_digraph_order(d), 6);
            assert_eq!(atd_digraph_arc_count(d), 12);

            let mut opp: *mut AtdDigraph = ptr::null_mut();
            assert!(atd_opposite(d, &mut opp) == AtdStatus::Ok);
            let mut iso = false;
            assert!(atd_are_isomorphic(d, opp, &mut iso) == AtdStatus::Ok);
            assert!(iso);

            let mut selfopp = false;
            assert!(atd_is_self_opposite(d, &mut selfopp) == AtdStatus::Ok);
            assert!(selfopp);

            let mut valid = false;
            assert!(atd_is_two_atd(d, &mut valid) == AtdStatus::Ok);
            assert!(valid);

            atd_digraph_free(opp);
            atd_digraph_free(d);
        }
    }

    #[test]
    fn certificates_agree_across_relabelings() {
        unsafe {
            let arcs_a: Vec<u32> = vec![0, 1, 1, 2, 2, 0];
            let arcs_b: Vec<u32> = vec![2, 0, 0, 1, 1, 2];
            let mut a: *mut AtdDigraph = ptr::null_mut();
            let mut b: *mut AtdDigraph = ptr::null_mut();
            assert!(atd_digraph_from_arcs(3, arcs_a.as_ptr(), 3, &mut a) == AtdStatus::Ok);
            assert!(atd_digraph_from_arcs(3, arcs_b.as_ptr(), 3, &mut b) == AtdStatus::Ok);
            let (mut pa, mut la) = (ptr::null_mut(), 0usize);
            let (mut pb, mut lb) = (ptr::null_mut(), 0usize);
            assert!(atd_canonical_certificate(a, &mut pa, &mut la) == AtdStatus::Ok);
            assert!(atd_canonical_certificate(b, &mut pb, &mut lb) == AtdStatus::Ok);
            assert_eq!(la, lb);
            let sa = std::slice::from_raw_parts(pa, la);
            let sb = std::slice::from_raw_parts(pb, lb);
            assert_eq!(sa, sb);
            atd_bytes_free(pa, la);
            atd_bytes_free(pb, lb);
            atd_digraph_free(a);
            atd_digraph_free(b);
        }
    }

    #[test]
    fn errors_set_messages() {
        unsafe {
            let mut d: *mut AtdDigraph = ptr::null_mut();
            assert!(atd_wreath(1, &mut d) != AtdStatus::Ok);
            let msg = atd_last_error();
            assert!(!msg.is_null());
            let text = CStr::from_ptr(msg).to_str().unwrap();
            assert!(text.contains("wreath"));
        }
    }

    #[test]
    fn document_round_trip() {
        unsafe {
            let mut d: *mut AtdDigraph = ptr::null_mut();
            assert!(atd_generalised_wreath(3, 2, &mut d) == AtdStatus::Ok);
            let mut text: *mut c_char = ptr::null_mut();
            assert!(atd_digraph_document(d, &mut text) == AtdStatus::Ok);
            let mut parsed: *mut AtdDigraph = ptr::null_mut();
            assert!(atd_digraph_parse(text, &mut parsed) == AtdStatus::Ok);
            assert_eq!(atd_digraph_order(parsed), 12);
            atd_string_free(text);
            atd_digraph_free(parsed);
            atd_digraph_free(d);
        }
    }

    #[test]
    fn record_csv_for_wreath() {
        unsafe {
            let mut d: *mut AtdDigraph = ptr::null_mut();
            assert!(atd_wreath(3, &mut d) == AtdStatus::Ok);
            let mut text: *mut c_char = ptr::null_mut();
            assert!(atd_record_csv(d, &mut text) == AtdStatus::Ok);
            let csv = CStr::from_ptr(text).to_str().unwrap();
            assert!(csv.starts_with("Name,|V|,SelfOpp"));
            assert!(csv.contains(",yes")); // self-opposite
            atd_string_free(text);
            atd_digraph_free(d);
        }
    }
}
