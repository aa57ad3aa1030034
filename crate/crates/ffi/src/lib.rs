//! C ABI over the `hsim` library.
//!
//! Every entry point returns an [`HsimStatus`]; results come back through
//! out-pointers. On failure, [`hsim_last_error`] gives a message for the
//! calling thread. Handles are opaque and must be released with their
//! `_free` function. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hsim::circuit::trotterize;
use hsim::simulation::trotter_error;
use hsim::{
    order, parse_hamiltonian, random_hamiltonian, Hamiltonian, HsimError, Ordering, PauliString,
    Strategy,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HsimStatus {
    Ok = 0,
    /// Null pointer, bad UTF-8 or a buffer too small.
    InvalidArgument = 1,
    InputError = 2,
    CapabilityError = 3,
    InternalError = 4,
    Panic = 5,
}

/// Parsed Hamiltonian.
pub struct HsimHamiltonian(Hamiltonian);

/// Term ordering together with the Hamiltonian it orders.
pub struct HsimOrdering {
    h: Hamiltonian,
    o: Ordering,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

enum Fail {
    Arg(String),
    Hsim(HsimError),
}

impl From<HsimError> for Fail {
    fn from(e: HsimError) -> Fail {
        Fail::Hsim(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> HsimStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HsimStatus::Ok,
        Ok(Err(Fail::Arg(msg))) => {
            set_error(msg);
            HsimStatus::InvalidArgument
        }
        Ok(Err(Fail::Hsim(e))) => {
            set_error(e.to_string());
            match e {
                HsimError::Parse { .. } | HsimError::Input(_) => HsimStatus::InputError,
                HsimError::Capability(_) => HsimStatus::CapabilityError,
                HsimError::Internal(_) => HsimStatus::InternalError,
            }
        }
        Err(_) => {
            set_error("panic inside hsim");
            HsimStatus::Panic
        }
    }
}

unsafe fn utf8<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Arg(format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Arg(format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref()
        .ok_or_else(|| Fail::Arg(format!("{what} is null")))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Arg("output pointer is null".into()));
    }
    out.write(value);
    Ok(())
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next `hsim_*` call on the same thread.
#[no_mangle]
pub extern "C" fn hsim_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses Hamiltonian text (one `<coefficient> <pauli-string>` per line).
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hsim_hamiltonian_parse(
    text: *const c_char,
    out: *mut *mut HsimHamiltonian,
) -> HsimStatus {
    guard(|| {
        let h = parse_hamiltonian(utf8(text, "text")?)?;
        put(out, Box::into_raw(Box::new(HsimHamiltonian(h))))
    })
}

/// Seeded random Hamiltonian with distinct non-identity terms.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hsim_hamiltonian_random(
    width: usize,
    n_terms: usize,
    seed: u64,
    out: *mut *mut HsimHamiltonian,
) -> HsimStatus {
    guard(|| {
        let h = random_hamiltonian(width, n_terms, seed)?;
        put(out, Box::into_raw(Box::new(HsimHamiltonian(h))))
    })
}

/// # Safety
/// `h` must come from `hsim_hamiltonian_parse` or `hsim_hamiltonian_random`
/// and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn hsim_hamiltonian_free(h: *mut HsimHamiltonian) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` must be a live handle and `width`, `n_terms` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hsim_hamiltonian_shape(
    h: *const HsimHamiltonian,
    width: *mut usize,
    n_terms: *mut usize,
) -> HsimStatus {
    guard(|| {
        let h = &handle(h, "hamiltonian")?.0;
        put(width, h.width())?;
        put(n_terms, h.len())
    })
}

/// Orders the terms of `h`. `strategy` is one of `lex`, `mag`, `random`,
/// `deplete`, `mctsp`; `seed` is used by `random` only.
///
/// # Safety
/// `h` must be a live handle, `strategy` NUL-terminated, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn hsim_order(
    h: *const HsimHamiltonian,
    strategy: *const c_char,
    seed: u64,
    out: *mut *mut HsimOrdering,
) -> HsimStatus {
    guard(|| {
        let h = &handle(h, "hamiltonian")?.0;
        let s = Strategy::from_cli_name(utf8(strategy, "strategy")?, seed)?;
        let o = order(h, s);
        put(
            out,
            Box::into_raw(Box::new(HsimOrdering { h: h.clone(), o })),
        )
    })
}

/// # Safety
/// `o` must come from `hsim_order` and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn hsim_ordering_free(o: *mut HsimOrdering) {
    if !o.is_null() {
        drop(Box::from_raw(o));
    }
}

/// Copies the permutation into `buf`. With `buf` null, only `len` is set.
///
/// # Safety
/// `o` must be a live handle; `buf` must hold `cap` elements when non-null.
#[no_mangle]
pub unsafe extern "C" fn hsim_ordering_permutation(
    o: *const HsimOrdering,
    buf: *mut usize,
    cap: usize,
    len: *mut usize,
) -> HsimStatus {
    guard(|| {
        let perm = &handle(o, "ordering")?.o.permutation;
        put(len, perm.len())?;
        if buf.is_null() {
            return Ok(());
        }
        if cap < perm.len() {
            return Err(Fail::Arg(format!(
                "buffer holds {cap} entries, need {}",
                perm.len()
            )));
        }
        ptr::copy_nonoverlapping(perm.as_ptr(), buf, perm.len());
        Ok(())
    })
}

/// CNOT count of one Trotter step in this order, after cancellation.
///
/// # Safety
/// `o` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn hsim_ordering_cnot_cost(
    o: *const HsimOrdering,
    out: *mut usize,
) -> HsimStatus {
    guard(|| {
        let o = handle(o, "ordering")?;
        put(out, o.o.cnot_cost(&o.h))
    })
}

/// Diamond distance between the compiled circuit at `(t, r)` and
/// `exp(-iHt)`.
///
/// # Safety
/// `o` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn hsim_trotter_error(
    o: *const HsimOrdering,
    t: f64,
    r: usize,
    out: *mut f64,
) -> HsimStatus {
    guard(|| {
        let o = handle(o, "ordering")?;
        put(out, trotter_error(&o.h, &o.o, t, r)?)
    })
}

/// Compiles the Trotter circuit to the plain-text gate list. Release the
/// string with `hsim_string_free`.
///
/// # Safety
/// `o` must be a live handle and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn hsim_compile(
    o: *const HsimOrdering,
    t: f64,
    r: usize,
    out: *mut *mut c_char,
) -> HsimStatus {
    guard(|| {
        let o = handle(o, "ordering")?;
        let c = trotterize(&o.h, &o.o, t, r)?;
        let s = CString::new(c.to_text())
            .map_err(|e| Fail::Hsim(HsimError::Internal(e.to_string())))?;
        put(out, s.into_raw())
    })
}

/// # Safety
/// `s` must come from an `hsim_*` function returning an owned string. Null
/// is ignored.
#[no_mangle]
pub unsafe extern "C" fn hsim_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn pair(a: *const c_char, b: *const c_char) -> Result<(PauliString, PauliString), Fail> {
    Ok((utf8(a, "a")?.parse()?, utf8(b, "b")?.parse()?))
}

/// CNOTs left at the interface between the subcircuits of `a` and `b`.
///
/// # Safety
/// `a` and `b` must be NUL-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn hsim_cnot_distance(
    a: *const c_char,
    b: *const c_char,
    out: *mut usize,
) -> HsimStatus {
    guard(|| {
        let (a, b) = pair(a, b)?;
        put(out, a.cnot_distance(&b)?)
    })
}

/// # Safety
/// `a` and `b` must be NUL-terminated and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn hsim_commutes(
    a: *const c_char,
    b: *const c_char,
    out: *mut bool,
) -> HsimStatus {
    guard(|| {
        let (a, b) = pair(a, b)?;
        put(out, a.commutes(&b)?)
    })
}
