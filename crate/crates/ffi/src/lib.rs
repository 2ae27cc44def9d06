//! C ABI over `dowker-core`.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call returns a
//! [`DkStatus`]; on failure [`dk_last_error`] describes what went wrong.
//! Strings returned through `char **` out-parameters are NUL-terminated UTF-8
//! and must be released with [`dk_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dowker_core::homology::homology_with;
use dowker_core::verify::{run_verification, VerifyConfig};
use dowker_core::{
    check_fiber_hypothesis, dowker_complex, enumerate_concepts, is_quasi_isomorphism, pi,
    pi_hat, random_relation, rectangle_complex_with, transpose_dowker_complex, Coefficients, Error,
    Limits, Relation, Simplex, SimplicialComplex,
};

/// Result of every fallible call. Values 1 to 3 match the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DkStatus {
    Ok = 0,
    VerificationFailed = 1,
    InvalidInput = 2,
    ResourceGuard = 3,
    NullPointer = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DkKind {
    Dowker = 0,
    DowkerTranspose = 1,
    Rectangle = 2,
}

/// A finite relation.
pub struct DkRelation(Relation);

/// A simplicial complex.
pub struct DkComplex(SimplicialComplex);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = CString::new(message.into().replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn fail(e: Error) -> DkStatus {
    let status = if e.is_resource_guard() {
        DkStatus::ResourceGuard
    } else {
        DkStatus::InvalidInput
    };
    set_error(e.to_string());
    status
}

/// Runs `body`, clearing the last error first and turning panics into
/// [`DkStatus::Panic`].
fn guarded(body: impl FnOnce() -> DkStatus) -> DkStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(format!("internal error: {message}"));
            DkStatus::Panic
        }
    }
}

/// # Safety
/// `s` must be NULL or a valid NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, DkStatus> {
    if s.is_null() {
        set_error("null string argument");
        return Err(DkStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string argument is not UTF-8");
        DkStatus::InvalidInput
    })
}

/// # Safety
/// `out` must be NULL or valid for a pointer write.
unsafe fn write_string(out: *mut *mut c_char, text: String) -> DkStatus {
    if out.is_null() {
        set_error("null output pointer");
        return DkStatus::NullPointer;
    }
    match CString::new(text) {
        Ok(c) => {
            *out = c.into_raw();
            DkStatus::Ok
        }
        Err(_) => {
            set_error("output contains a NUL byte");
            DkStatus::InvalidInput
        }
    }
}

/// # Safety
/// `out` must be NULL or valid for a pointer write.
unsafe fn write_handle<T>(out: *mut *mut T, value: T) -> DkStatus {
    if out.is_null() {
        set_error("null output pointer");
        return DkStatus::NullPointer;
    }
    *out = Box::into_raw(Box::new(value));
    DkStatus::Ok
}

/// # Safety
/// `p` must be NULL or a live handle from this library.
unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, DkStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("null handle");
        DkStatus::NullPointer
    })
}

/// # Safety
/// `out` must be NULL or valid for a write of `T`.
unsafe fn write_value<T>(out: *mut T, value: T) -> DkStatus {
    if out.is_null() {
        set_error("null output pointer");
        return DkStatus::NullPointer;
    }
    *out = value;
    DkStatus::Ok
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serializable")
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn dk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a relation from JSON: `{"x": [...], "y": [...], "pairs": [[x, y], ...]}`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn dk_relation_from_json(text: *const c_char, out: *mut *mut DkRelation) -> DkStatus {
    guarded(|| {
        let text = tri!(read_str(text));
        match Relation::from_json_str(text) {
            Ok(r) => write_handle(out, DkRelation(r)),
            Err(e) => fail(e),
        }
    })
}

/// Parses a relation from CSV with an `x,y` header.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn dk_relation_from_csv(text: *const c_char, out: *mut *mut DkRelation) -> DkStatus {
    guarded(|| {
        let text = tri!(read_str(text));
        match Relation::from_csv_str(text) {
            Ok(r) => write_handle(out, DkRelation(r)),
            Err(e) => fail(e),
        }
    })
}

/// Random relation on `x0..`, `y0..` with each pair kept with probability
/// `density`.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn dk_relation_random(
    nx: usize,
    ny: usize,
    density: f64,
    seed: u64,
    out: *mut *mut DkRelation,
) -> DkStatus {
    guarded(|| {
        if !(0.0..=1.0).contains(&density) {
            set_error("density must lie in [0, 1]");
            return DkStatus::InvalidInput;
        }
        write_handle(out, DkRelation(random_relation(nx, ny, density, seed)))
    })
}

/// # Safety
/// `relation` must be a live handle and `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn dk_relation_transpose(relation: *const DkRelation, out: *mut *mut DkRelation) -> DkStatus {
    guarded(|| {
        let r = tri!(handle(relation));
        write_handle(out, DkRelation(r.0.transpose()))
    })
}

/// Number of pairs.
///
/// # Safety
/// `relation` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn dk_relation_len(relation: *const DkRelation, out: *mut usize) -> DkStatus {
    guarded(|| {
        let r = tri!(handle(relation));
        write_value(out, r.0.len())
    })
}

/// Canonical JSON with sorted pairs.
///
/// # Safety
/// `relation` must be a live handle and `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn dk_relation_to_json(relation: *const DkRelation, out: *mut *mut c_char) -> DkStatus {
    guarded(|| {
        let r = tri!(handle(relation));
        write_string(out, r.0.to_json_string())
    })
}

/// # Safety
/// `relation` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dk_relation_free(relation: *mut DkRelation) {
    if !relation.is_null() {
        drop(Box::from_raw(relation));
    }
}

/// All formal concepts as a JSON array of `{"extent", "intent"}`.
///
/// # Safety
/// `relation` must be a live handle and `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn dk_concepts_json(relation: *const DkRelation, out: *mut *mut c_char) -> DkStatus {
    guarded(|| {
        let r = tri!(handle(relation));
        write_string(out, json(&enumerate_concepts(&r.0)))
    })
}

/// Builds `D(R)`, `D(R^T)` or `E(R)`; facets above `max_dimension` are a
/// resource-guard error.
///
/// # Safety
/// `relation` must be a live handle and `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn dk_complex_build(
    relation: *const DkRelation,
    kind: DkKind,
    max_dimension: usize,
    out: *mut *mut DkComplex,
) -> DkStatus {
    guarded(|| {
        let r = &tri!(handle(relation)).0;
        let limits = Limits::default().with_max_dimension(max_dimension);
        let complex = match kind {
            DkKind::Dowker => dowker_complex(r),
            DkKind::DowkerTranspose => transpose_dowker_complex(r),
            DkKind::Rectangle => match rectangle_complex_with(r, &limits) {
                Ok(c) => c,
                Err(e) => return fail(e),
            },
        };
        if let Err(e) = complex.check_dimension(&limits) {
            return fail(e);
        }
        write_handle(out, DkComplex(complex))
    })
}

/// # Safety
/// `complex` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn dk_complex_num_facets(complex: *const DkComplex, out: *mut usize) -> DkStatus {
    guarded(|| write_value(out, tri!(handle(complex)).0.num_facets()))
}

/// Declared vertices, including ones in no facet.
///
/// # Safety
/// `complex` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn dk_complex_num_vertices(complex: *const DkComplex, out: *mut usize) -> DkStatus {
    guarded(|| write_value(out, tri!(handle(complex)).0.vertices().len()))
}

/// −1 for the empty complex.
///
/// # Safety
/// `complex` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn dk_complex_dimension(complex: *const DkComplex, out: *mut i64) -> DkStatus {
    guarded(|| write_value(out, tri!(handle(complex)).0.dimension()))
}

/// # Safety
/// `complex` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn dk_complex_euler_characteristic(complex: *const DkComplex, out: *mut i64) -> DkStatus {
    guarded(|| write_value(out, tri!(handle(complex)).0.euler_characteristic()))
}

/// `{"vertices": [...], "facets": [[...], ...]}`.
///
/// # Safety
/// `complex` must be a live handle and `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn dk_complex_to_json(complex: *const DkComplex, out: *mut *mut c_char) -> DkStatus {
    guarded(|| write_string(out, json(&tri!(handle(complex)).0.to_json())))
}

/// The 1-skeleton as a Graphviz `graph`.
///
/// # Safety
/// `complex` must be a live handle and `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn dk_complex_to_dot(complex: *const DkComplex, out: *mut *mut c_char) -> DkStatus {
    guarded(|| write_string(out, tri!(handle(complex)).0.to_dot()))
}

/// Homology as `{"reduced", "groups": [{"dim", "betti", "torsion"}]}`.
/// `coefficients` is `z`, `q`, `z2` or `zp:<p>`; NULL means `z`.
///
/// # Safety
/// `complex` must be a live handle, `coefficients` NULL or a NUL-terminated
/// string, and `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn dk_complex_homology_json(
    complex: *const DkComplex,
    reduced: bool,
    coefficients: *const c_char,
    out: *mut *mut c_char,
) -> DkStatus {
    guarded(|| {
        let k = &tri!(handle(complex)).0;
        let coefficients = if coefficients.is_null() {
            Coefficients::Integers
        } else {
            match tri!(read_str(coefficients)).parse() {
                Ok(c) => c,
                Err(e) => return fail(e),
            }
        };
        match homology_with(k, reduced, coefficients, &Limits::default()) {
            Ok(h) => write_string(out, json(&h)),
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `complex` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dk_complex_free(complex: *mut DkComplex) {
    if !complex.is_null() {
        drop(Box::from_raw(complex));
    }
}

/// Fiber report for `π_R` over the simplex given as comma-separated objects.
///
/// # Safety
/// `relation` must be a live handle, `simplex` a NUL-terminated string and
/// `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn dk_fiber_json(
    relation: *const DkRelation,
    simplex: *const c_char,
    out: *mut *mut c_char,
) -> DkStatus {
    guarded(|| {
        let r = &tri!(handle(relation)).0;
        let vertices = tri!(read_str(simplex)).split(',').map(str::trim);
        let report = Simplex::new(vertices)
            .and_then(|sigma| check_fiber_hypothesis(r, &sigma, &Limits::default()));
        match report {
            Ok(report) => write_string(out, json(&report)),
            Err(e) => fail(e),
        }
    })
}

/// Whether both coordinate projections out of `E(R)` are
/// quasi-isomorphisms over the integers.
///
/// # Safety
/// `relation` must be a live handle and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn dk_projections_are_quasi_isomorphisms(relation: *const DkRelation, out: *mut bool) -> DkStatus {
    guarded(|| {
        let r = &tri!(handle(relation)).0;
        let limits = Limits::default();
        let both = is_quasi_isomorphism(&pi(r), &limits)
            .and_then(|a| Ok(a && is_quasi_isomorphism(&pi_hat(r), &limits)?));
        match both {
            Ok(v) => write_value(out, v),
            Err(e) => fail(e),
        }
    })
}

/// Runs a verification campaign with every check and writes the JSON report.
/// Returns [`DkStatus::VerificationFailed`] (with the report written) when
/// any check fails.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn dk_verify_json(
    trials: usize,
    seed: u64,
    max_x: usize,
    max_y: usize,
    out: *mut *mut c_char,
) -> DkStatus {
    guarded(|| {
        let config = VerifyConfig {
            trials,
            seed,
            max_x,
            max_y,
            ..VerifyConfig::default()
        };
        let report = match run_verification(&config) {
            Ok(r) => r,
            Err(e) => return fail(e),
        };
        let status = write_string(out, json(&report));
        if status == DkStatus::Ok && !report.passed() {
            set_error(format!("{} checks failed", report.failures.len()));
            return DkStatus::VerificationFailed;
        }
        status
    })
}
