//! C interface to `trisect-core`.
//!
//! Diagrams and triplets are opaque handles. Constructors such as
//! [`trisect_diagram_catalog`] hand them out and the matching `_free`
//! releases them. Every fallible call returns a [`TrisectStatus`]; on failure
//! the message is available from [`trisect_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use trisect_core::bracket::{invariant, trisection_bracket, BracketConfig};
use trisect_core::diagram::{catalog, Diagram};
use trisect_core::group::Group;
use trisect_core::labelcount::{group_count_invariant, WeakConfig};
use trisect_core::moves::{apply_all, parse_moves};
use trisect_core::triplet::HopfTriplet;
use trisect_core::Error;

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrisectStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidDiagram = 3,
    InvalidMove = 4,
    AxiomViolation = 5,
    Incompatible = 6,
    StabilizationObstruction = 7,
    ResourceExceeded = 8,
    Parse = 9,
    Io = 10,
    Other = 11,
    Panic = 12,
}

/// A trisection or surface diagram.
pub struct TrisectDiagram(Diagram);

/// A Hopf triplet with its default integrals.
pub struct TrisectTriplet(BracketConfig);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> TrisectStatus {
    match e {
        Error::InvalidDiagram(_) => TrisectStatus::InvalidDiagram,
        Error::InvalidMove(_) => TrisectStatus::InvalidMove,
        Error::AxiomViolation(_) | Error::NonSemisimple => TrisectStatus::AxiomViolation,
        Error::Incompatible(_) | Error::Missing(_) | Error::NoStandardSummand => TrisectStatus::Incompatible,
        Error::StabilizationObstruction => TrisectStatus::StabilizationObstruction,
        Error::ResourceExceeded { .. } => TrisectStatus::ResourceExceeded,
        Error::Parse(_) => TrisectStatus::Parse,
        Error::Io(_) => TrisectStatus::Io,
    }
}

struct Fail(TrisectStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> TrisectStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            TrisectStatus::Ok
        }
        Ok(Err(Fail(s, m))) => {
            set_error(&m);
            s
        }
        Err(_) => {
            set_error("internal panic");
            TrisectStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(TrisectStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(TrisectStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(TrisectStatus::NullPointer, format!("{what} is null")))
}

unsafe fn put<T>(out: *mut T, v: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(TrisectStatus::NullPointer, format!("{what} is null")));
    }
    out.write(v);
    Ok(())
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Message of the last failed call on this thread, or an empty string.
/// The pointer stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn trisect_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Loads a catalog diagram (`s4`, `cp2`, `cp2bar`, `s4-disc`, `s1xs3`).
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trisect_diagram_catalog(name: *const c_char, out: *mut *mut TrisectDiagram) -> TrisectStatus {
    guard(|| {
        let n = text(name, "name")?;
        let d = catalog(n).ok_or_else(|| Fail(TrisectStatus::InvalidDiagram, format!("no catalog diagram '{n}'")))?;
        put(out, boxed(TrisectDiagram(d)), "out")
    })
}

/// Parses a diagram from JSON. With `strict` nonzero the full trisection rules apply.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trisect_diagram_from_json(json: *const c_char, strict: i32, out: *mut *mut TrisectDiagram) -> TrisectStatus {
    guard(|| {
        let d = Diagram::from_json(text(json, "json")?, strict != 0)?;
        put(out, boxed(TrisectDiagram(d)), "out")
    })
}

/// Serializes a diagram. Release the string with [`trisect_string_free`].
///
/// # Safety
/// `d` must come from this library and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trisect_diagram_to_json(d: *const TrisectDiagram, out: *mut *mut c_char) -> TrisectStatus {
    guard(|| {
        let d = handle(d, "diagram")?;
        let s = CString::new(d.0.to_json_string()).map_err(|_| Fail(TrisectStatus::Other, "NUL in output".into()))?;
        put(out, s.into_raw(), "out")
    })
}

/// Genus of the diagram's surface, or -1 for a null handle.
///
/// # Safety
/// `d` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn trisect_diagram_genus(d: *const TrisectDiagram) -> i64 {
    d.as_ref().map_or(-1, |d| d.0.genus as i64)
}

/// Applies a JSON move or list of moves, returning a new diagram.
///
/// # Safety
/// `d` must come from this library, `moves` must be a NUL-terminated string
/// and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trisect_diagram_apply_moves(
    d: *const TrisectDiagram,
    moves: *const c_char,
    out: *mut *mut TrisectDiagram,
) -> TrisectStatus {
    guard(|| {
        let d = handle(d, "diagram")?;
        let ms = parse_moves(text(moves, "moves")?)?;
        put(out, boxed(TrisectDiagram(apply_all(&d.0, &ms)?)), "out")
    })
}

/// # Safety
/// `d` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn trisect_diagram_free(d: *mut TrisectDiagram) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Builds a triplet from `kashaev:n=<n>`, `group:C=<g>,B=<g>` or `file:<path>`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trisect_triplet_from_spec(spec: *const c_char, out: *mut *mut TrisectTriplet) -> TrisectStatus {
    guard(|| {
        let t = HopfTriplet::from_spec(text(spec, "spec")?)?;
        put(out, boxed(TrisectTriplet(BracketConfig::new(t))), "out")
    })
}

/// # Safety
/// `t` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn trisect_triplet_free(t: *mut TrisectTriplet) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// The trisection bracket as a complex number.
///
/// # Safety
/// `d` and `t` must be handles from this library; `re` and `im` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn trisect_bracket(d: *const TrisectDiagram, t: *const TrisectTriplet, re: *mut f64, im: *mut f64) -> TrisectStatus {
    guard(|| {
        let z = trisection_bracket(&handle(d, "diagram")?.0, &handle(t, "triplet")?.0)?.to_complex();
        put(re, z.re, "re")?;
        put(im, z.im, "im")
    })
}

/// The normalized invariant on the principal cube-root branch.
///
/// # Safety
/// `d` and `t` must be handles from this library; `re` and `im` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn trisect_invariant(d: *const TrisectDiagram, t: *const TrisectTriplet, re: *mut f64, im: *mut f64) -> TrisectStatus {
    guard(|| {
        let z = invariant(&handle(d, "diagram")?.0, &handle(t, "triplet")?.0)?.to_complex();
        put(re, z.re, "re")?;
        put(im, z.im, "im")
    })
}

/// Number of admissible labellings for groups `c`, `b` and a one-point M,
/// plus the normalized counting invariant.
///
/// # Safety
/// `d` must be a handle from this library, `c` and `b` NUL-terminated group
/// names, and the output pointers valid.
#[no_mangle]
pub unsafe extern "C" fn trisect_count(
    d: *const TrisectDiagram,
    c: *const c_char,
    b: *const c_char,
    labellings: *mut u64,
    invariant: *mut f64,
) -> TrisectStatus {
    guard(|| {
        let d = handle(d, "diagram")?;
        let cfg = WeakConfig::point(Group::from_spec(text(c, "C")?)?, Group::from_spec(text(b, "B")?)?);
        let (l, v) = group_count_invariant(&d.0, &cfg)?;
        let l = u64::try_from(l).map_err(|_| Fail(TrisectStatus::ResourceExceeded, format!("count {l} overflows u64")))?;
        put(labellings, l, "labellings")?;
        let z = v.exact().map_or_else(|| v.to_complex(), |x| x.to_complex());
        put(invariant, z.re, "invariant")
    })
}

/// # Safety
/// `s` must be null or a string returned by this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn trisect_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
