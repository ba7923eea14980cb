//! C ABI over `addcomb`.
//!
//! Groups and sets are opaque heap handles released with [`ac_group_free`]
//! and [`ac_set_free`]. Every fallible call returns an [`AcStatus`]; the
//! message of the last error on the calling thread is available through
//! [`ac_last_error`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use addcomb::group::{max_order_from_env, GroupSpec};
use addcomb::literal::parse_set_body;
use addcomb::quantities::{
    additive_dimension, doubling, e_quantity, longest_ap, petridis_ratio, s_quantity, shift_ratio_k, Exactness,
    QuantityResult, SearchBudget,
};
use addcomb::ratio::{QValue, Threshold};
use addcomb::sumset::{difference_set, sumset};
use addcomb::verify::{parse_family, run_family, CheckConfig, CheckKind, DEFAULT_FAMILY_LIMIT};
use addcomb::{Error, GroupSet};
use num_traits::ToPrimitive;

/// Opaque group handle.
pub struct AcGroup(GroupSpec);

/// Opaque set handle.
pub struct AcSet(GroupSet);

#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum AcStatus {
    Ok = 0,
    /// A `verify` run finished with at least one failed check.
    CheckFailed = 1,
    Parse = 2,
    FamilyTooLarge = 3,
    ConstructionFailed = 4,
    NullPointer = 5,
    OutOfRange = 6,
    GroupMismatch = 7,
    EmptySet = 8,
    InvalidArgument = 9,
    /// The value does not fit the output type.
    Overflow = 10,
    BufferTooSmall = 11,
    Panic = 12,
}

#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum AcExactness {
    Exact = 0,
    LowerBound = 1,
    UpperBound = 2,
}

/// `num / den` in lowest terms with `den > 0`; `is_infinite` marks `+inf`.
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct AcValue {
    pub num: i64,
    pub den: i64,
    pub is_infinite: bool,
    pub exactness: AcExactness,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_of(e: &Error) -> AcStatus {
    match e {
        Error::GroupSpecSyntax { .. } | Error::ModulusTooSmall(_) | Error::Parse(_) => AcStatus::Parse,
        Error::OrderTooLarge { .. } | Error::ElementOutOfRange { .. } => AcStatus::OutOfRange,
        Error::GroupMismatch { .. } => AcStatus::GroupMismatch,
        Error::EmptySet(_) => AcStatus::EmptySet,
        Error::InvalidArgument(_) | Error::ExactnessEnvelope(_) => AcStatus::InvalidArgument,
        Error::ConstructionFailed(_) => AcStatus::ConstructionFailed,
        Error::FamilyTooLarge { .. } => AcStatus::FamilyTooLarge,
    }
}

struct Fail(AcStatus);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        set_error(e.to_string());
        Fail(status_of(&e))
    }
}

fn fail(status: AcStatus, msg: &str) -> Fail {
    set_error(msg);
    Fail(status)
}

fn guard(f: impl FnOnce() -> Result<AcStatus, Fail>) -> AcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(Fail(s))) => s,
        Err(_) => {
            set_error("internal panic");
            AcStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| fail(AcStatus::NullPointer, "null handle"))
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(fail(AcStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(AcStatus::Parse, "string is not UTF-8"))
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<AcStatus, Fail> {
    if out.is_null() {
        return Err(fail(AcStatus::NullPointer, "null output pointer"));
    }
    out.write(v);
    Ok(AcStatus::Ok)
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `cap`). Returns the full message length.
///
/// # Safety
/// `buf` must be null or point to `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn ac_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        if !buf.is_null() && cap > 0 {
            let n = e.len().min(cap - 1);
            ptr::copy_nonoverlapping(e.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        e.len()
    })
}

/// Parses a group spec such as `Z/4xZ/6` or `F2^7`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ac_group_parse(spec: *const c_char, out: *mut *mut AcGroup) -> AcStatus {
    guard(|| {
        let g = GroupSpec::parse_with_cap(text(spec)?, max_order_from_env()?)?;
        put(out, Box::into_raw(Box::new(AcGroup(g))))
    })
}

/// # Safety
/// `g` must be null or a handle from [`ac_group_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ac_group_free(g: *mut AcGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live group handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ac_group_order(g: *const AcGroup, out: *mut u64) -> AcStatus {
    guard(|| put(out, deref(g)?.0.order() as u64))
}

/// Builds a set from canonical element indices.
///
/// # Safety
/// `indices` must point to `n` values (or be null with `n == 0`).
#[no_mangle]
pub unsafe extern "C" fn ac_set_from_indices(
    g: *const AcGroup,
    indices: *const u64,
    n: usize,
    out: *mut *mut AcSet,
) -> AcStatus {
    guard(|| {
        let g = deref(g)?;
        let idx: &[u64] = if n == 0 {
            &[]
        } else if indices.is_null() {
            return Err(fail(AcStatus::NullPointer, "null index array"));
        } else {
            std::slice::from_raw_parts(indices, n)
        };
        let s = GroupSet::from_indices(&g.0, idx.iter().copied())?;
        put(out, Box::into_raw(Box::new(AcSet(s))))
    })
}

/// Parses a set body such as `{0, 5, (1,2)}`.
///
/// # Safety
/// `body` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ac_set_parse(g: *const AcGroup, body: *const c_char, out: *mut *mut AcSet) -> AcStatus {
    guard(|| {
        let s = parse_set_body(&deref(g)?.0, text(body)?)?;
        put(out, Box::into_raw(Box::new(AcSet(s))))
    })
}

/// # Safety
/// `s` must be null or a live set handle.
#[no_mangle]
pub unsafe extern "C" fn ac_set_free(s: *mut AcSet) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` must be a live set handle.
#[no_mangle]
pub unsafe extern "C" fn ac_set_len(s: *const AcSet, out: *mut usize) -> AcStatus {
    guard(|| put(out, deref(s)?.0.len()))
}

/// Writes the members in increasing index order. With `buf` too small, nothing
/// is written, `*len` receives the size and the call returns `BufferTooSmall`.
///
/// # Safety
/// `buf` must point to `cap` writable values (or be null with `cap == 0`).
#[no_mangle]
pub unsafe extern "C" fn ac_set_indices(s: *const AcSet, buf: *mut u64, cap: usize, len: *mut usize) -> AcStatus {
    guard(|| {
        let v = deref(s)?.0.to_vec();
        put(len, v.len())?;
        if v.len() > cap {
            return Err(fail(AcStatus::BufferTooSmall, "buffer too small"));
        }
        if !v.is_empty() {
            if buf.is_null() {
                return Err(fail(AcStatus::NullPointer, "null buffer"));
            }
            for (i, x) in v.into_iter().enumerate() {
                *buf.add(i) = x as u64;
            }
        }
        Ok(AcStatus::Ok)
    })
}

unsafe fn binary(
    a: *const AcSet,
    b: *const AcSet,
    out: *mut *mut AcSet,
    op: fn(&GroupSet, &GroupSet) -> addcomb::Result<GroupSet>,
) -> AcStatus {
    guard(|| {
        let s = op(&deref(a)?.0, &deref(b)?.0)?;
        put(out, Box::into_raw(Box::new(AcSet(s))))
    })
}

/// `A + B`.
///
/// # Safety
/// `a`, `b` must be live set handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ac_sumset(a: *const AcSet, b: *const AcSet, out: *mut *mut AcSet) -> AcStatus {
    binary(a, b, out, sumset)
}

/// `A - B`.
///
/// # Safety
/// `a`, `b` must be live set handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ac_difference_set(a: *const AcSet, b: *const AcSet, out: *mut *mut AcSet) -> AcStatus {
    binary(a, b, out, difference_set)
}

/// `E(A, B)`.
///
/// # Safety
/// `a`, `b` must be live set handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ac_energy(a: *const AcSet, b: *const AcSet, out: *mut u64) -> AcStatus {
    guard(|| {
        let e = addcomb::energy::common_energy(&deref(a)?.0, &deref(b)?.0)?.value;
        let e = u64::try_from(e).map_err(|_| fail(AcStatus::Overflow, "energy exceeds 64 bits"))?;
        put(out, e)
    })
}

fn value_of(q: &QuantityResult) -> Result<AcValue, Fail> {
    let exactness = match q.exactness {
        Exactness::Exact => AcExactness::Exact,
        Exactness::LowerBound => AcExactness::LowerBound,
        Exactness::UpperBound => AcExactness::UpperBound,
    };
    let (num, den, is_infinite) = match &q.value {
        QValue::Infinite => (0, 1, true),
        QValue::Finite(r) => {
            match (r.numer().to_i64(), r.denom().to_i64()) {
                (Some(n), Some(d)) => (n, d, false),
                _ => return Err(fail(AcStatus::Overflow, "value does not fit 64-bit fraction")),
            }
        }
    };
    Ok(AcValue {
        num,
        den,
        is_infinite,
        exactness,
    })
}

fn budget(bits: u32) -> SearchBudget {
    SearchBudget {
        max_exact_bits: bits,
        ..SearchBudget::default()
    }
}

unsafe fn threshold(t: *const c_char) -> Result<Threshold, Fail> {
    if t.is_null() {
        return Ok(Threshold::Infinite);
    }
    Ok(Threshold::parse(text(t)?)?)
}

/// `D[A;B] = |A+B| / |A|`.
///
/// # Safety
/// `a`, `b` must be live set handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ac_doubling(a: *const AcSet, b: *const AcSet, out: *mut AcValue) -> AcStatus {
    guard(|| put(out, value_of(&doubling(&deref(a)?.0, &deref(b)?.0)?)?))
}

/// `S_T[A;B]`; `t` is a rational `>= 1`, `"inf"`, or null for `inf`.
///
/// # Safety
/// `a`, `b` must be live set handles, `t` null or NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ac_s_quantity(
    a: *const AcSet,
    b: *const AcSet,
    t: *const c_char,
    budget_bits: u32,
    out: *mut AcValue,
) -> AcStatus {
    guard(|| {
        let q = s_quantity(&deref(a)?.0, &deref(b)?.0, &threshold(t)?, &budget(budget_bits))?;
        put(out, value_of(&q)?)
    })
}

/// `E_T[A;B]`; `t` as for [`ac_s_quantity`].
///
/// # Safety
/// `a`, `b` must be live set handles, `t` null or NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ac_e_quantity(
    a: *const AcSet,
    b: *const AcSet,
    t: *const c_char,
    budget_bits: u32,
    out: *mut AcValue,
) -> AcStatus {
    guard(|| {
        let q = e_quantity(&deref(a)?.0, &deref(b)?.0, &threshold(t)?, &budget(budget_bits))?;
        put(out, value_of(&q)?)
    })
}

/// `K(A)`.
///
/// # Safety
/// `a` must be a live set handle.
#[no_mangle]
pub unsafe extern "C" fn ac_shift_ratio(a: *const AcSet, out: *mut AcValue) -> AcStatus {
    guard(|| put(out, value_of(&shift_ratio_k(&deref(a)?.0)?)?))
}

/// `k(A)`.
///
/// # Safety
/// `a` must be a live set handle.
#[no_mangle]
pub unsafe extern "C" fn ac_longest_ap(a: *const AcSet, out: *mut AcValue) -> AcStatus {
    guard(|| put(out, value_of(&longest_ap(&deref(a)?.0)?)?))
}

/// `dim(A)`.
///
/// # Safety
/// `a` must be a live set handle.
#[no_mangle]
pub unsafe extern "C" fn ac_additive_dimension(a: *const AcSet, budget_bits: u32, out: *mut AcValue) -> AcStatus {
    guard(|| put(out, value_of(&additive_dimension(&deref(a)?.0, &budget(budget_bits))?)?))
}

/// `min |A+X|/|X|` over nonempty `X ⊆ A`.
///
/// # Safety
/// `a` must be a live set handle.
#[no_mangle]
pub unsafe extern "C" fn ac_petridis_ratio(a: *const AcSet, budget_bits: u32, out: *mut AcValue) -> AcStatus {
    guard(|| put(out, value_of(&petridis_ratio(&deref(a)?.0, &budget(budget_bits))?)?))
}

/// Runs `checks` (comma-separated, or `all`) over `family` and stores the
/// JSON summary in `*json_out`, to be released with [`ac_string_free`].
/// Returns `CheckFailed` when any check failed.
///
/// # Safety
/// `family` and `checks` must be NUL-terminated; `json_out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ac_verify_family(
    family: *const c_char,
    checks: *const c_char,
    budget_bits: u32,
    json_out: *mut *mut c_char,
) -> AcStatus {
    guard(|| {
        if json_out.is_null() {
            return Err(fail(AcStatus::NullPointer, "null output pointer"));
        }
        let family = parse_family(text(family)?, max_order_from_env()?)?;
        let mut config = CheckConfig::new(CheckKind::parse_list(text(checks)?)?);
        config.budget = budget(budget_bits);
        let (summary, _) = run_family(&family, &config, DEFAULT_FAMILY_LIMIT)?;
        let json = serde_json::to_string(&summary).map_err(|e| fail(AcStatus::InvalidArgument, &e.to_string()))?;
        let c = CString::new(json).map_err(|_| fail(AcStatus::InvalidArgument, "NUL in output"))?;
        json_out.write(c.into_raw());
        Ok(if summary.all_passed() {
            AcStatus::Ok
        } else {
            AcStatus::CheckFailed
        })
    })
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn ac_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
