//! C ABI for `hardwindow`.
//!
//! Every entry point returns an [`HwStatus`] and writes results through an
//! out-pointer. On a non-OK status the message is available from
//! [`hw_last_error`] on the same thread. Surveys and exceptional sets are
//! returned as opaque handles that must be released with their `_free`
//! function. Strings returned by this library are released with
//! [`hw_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hardwindow::survey::{write_csv, SurveyRecord};
use hardwindow::{DenominatorFilter, Error, Eta, ExceptionalSet, Mode, SurveyOptions};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HwStatus {
    Ok = 0,
    InvalidArgument = 1,
    NotObtuse = 2,
    NotLowestTerms = 3,
    SharesLargestPrime = 4,
    BelowAsymptoticDomain = 5,
    Numerical = 6,
    NullPointer = 7,
    IndexOutOfRange = 8,
    Panic = 9,
}

impl From<&Error> for HwStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::NotObtuse { .. } => HwStatus::NotObtuse,
            Error::NotLowestTerms { .. } => HwStatus::NotLowestTerms,
            Error::SharesLargestPrime { .. } => HwStatus::SharesLargestPrime,
            Error::BelowAsymptoticDomain(_) => HwStatus::BelowAsymptoticDomain,
            Error::Numerical(_) => HwStatus::Numerical,
            _ => HwStatus::InvalidArgument,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HwMode {
    TwoPq = 0,
    TwoOfThree = 1,
}

fn mode_from_raw(raw: u32) -> Result<Mode, (HwStatus, String)> {
    match raw {
        x if x == HwMode::TwoPq as u32 => Ok(Mode::TwoPq),
        x if x == HwMode::TwoOfThree as u32 => Ok(Mode::TwoOfThree),
        _ => Err((HwStatus::InvalidArgument, format!("unknown mode {raw}"))),
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HwFilter {
    All = 0,
    Primes = 1,
    OmegaPlus = 2,
}

fn filter_from_raw(raw: u32) -> Result<DenominatorFilter, (HwStatus, String)> {
    match raw {
        x if x == HwFilter::All as u32 => Ok(DenominatorFilter::All),
        x if x == HwFilter::Primes as u32 => Ok(DenominatorFilter::Primes),
        x if x == HwFilter::OmegaPlus as u32 => Ok(DenominatorFilter::OmegaPlus),
        _ => Err((HwStatus::InvalidArgument, format!("unknown filter {raw}"))),
    }
}

/// Witness search result. `witness` is 0 when the triangle is not ruled out.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HwWitness {
    pub ruled_out: bool,
    pub witness: u64,
    pub held_p: bool,
    pub held_q: bool,
    pub held_r: bool,
    pub s_count: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HwSpectral {
    pub s_direct: u64,
    pub main_term: f64,
    pub error_term: f64,
    pub spectral_sum: f64,
    pub residual: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HwErrorBound {
    pub prime: u64,
    pub d: u64,
    pub exceptional_size: u64,
    pub exceptional_bound: f64,
    pub mean_s: f64,
    pub mean_bound: f64,
    pub checked: u64,
    pub excluded: u64,
    pub max_ratio: f64,
    pub pass: bool,
}

/// One survey row. Fields that are not available are -1.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HwSurveyRecord {
    pub n: u64,
    pub p_plus: u64,
    pub omega_plus: i8,
    pub h_size: u64,
    pub ruled_two_pq: u64,
    pub ruled_two_of_three: u64,
    pub s_ge5: u64,
    pub in_c: i64,
    pub q_div_p: u64,
    pub frac_ruled: f64,
    pub in_e: i64,
}

impl From<&SurveyRecord> for HwSurveyRecord {
    fn from(r: &SurveyRecord) -> Self {
        HwSurveyRecord {
            n: r.n,
            p_plus: r.p_plus,
            omega_plus: r.omega_plus.map_or(-1, |b| b as i8),
            h_size: r.h_size,
            ruled_two_pq: r.ruled_two_pq,
            ruled_two_of_three: r.ruled_two_of_three,
            s_ge5: r.s_ge5,
            in_c: r.in_c.map_or(-1, |c| c as i64),
            q_div_p: r.q_div_p,
            frac_ruled: r.frac_ruled,
            in_e: r.in_e.map_or(-1, |e| e as i64),
        }
    }
}

/// Opaque survey result.
pub struct HwSurvey {
    records: Vec<SurveyRecord>,
    deep_audit: bool,
}

/// Opaque exceptional set of residue classes.
pub struct HwExceptionalSet {
    inner: ExceptionalSet,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("NULs replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Run `f`, translating library errors and panics into status codes.
fn guard<F>(f: F) -> HwStatus
where
    F: FnOnce() -> Result<(), (HwStatus, String)>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HwStatus::Ok,
        Ok(Err((status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            HwStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (HwStatus, String) {
    (HwStatus::from(&e), e.to_string())
}

fn null_err(name: &str) -> (HwStatus, String) {
    (HwStatus::NullPointer, format!("{name} is NULL"))
}

/// # Safety
/// `out` must be NULL or valid for a write of `T`.
unsafe fn write_out<T>(out: *mut T, value: T, name: &str) -> Result<(), (HwStatus, String)> {
    if out.is_null() {
        return Err(null_err(name));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Last error message on this thread as a new string, or NULL if none.
/// Free with [`hw_string_free`].
#[no_mangle]
pub extern "C" fn hw_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map_or(ptr::null_mut(), |c| c.clone().into_raw())
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `out` must be valid for writing one `int64_t`.
#[no_mangle]
pub unsafe extern "C" fn hw_ramanujan(n: u64, t: i64, out: *mut i64) -> HwStatus {
    guard(|| {
        let c = hardwindow::ramanujan(n, t).map_err(lib_err)?;
        write_out(out, c, "out")
    })
}

/// # Safety
/// `out` must be valid for writing one `uint64_t`.
#[no_mangle]
pub unsafe extern "C" fn hw_count_s(p: u64, q: u64, n: u64, out: *mut u64) -> HwStatus {
    guard(|| {
        hardwindow::triangle::require_hard_window(p, q, n).map_err(lib_err)?;
        let s = hardwindow::count_s(p, q, n).map_err(lib_err)?;
        write_out(out, s, "out")
    })
}

/// `mode` is an `HwMode` value.
///
/// # Safety
/// `out` must be valid for writing one `HwWitness`.
#[no_mangle]
pub unsafe extern "C" fn hw_find_witness(
    p: u64,
    q: u64,
    n: u64,
    mode: u32,
    out: *mut HwWitness,
) -> HwStatus {
    guard(|| {
        let mode = mode_from_raw(mode)?;
        let rep = hardwindow::find_witness(p, q, n, mode).map_err(lib_err)?;
        let w = HwWitness {
            ruled_out: rep.ruled_out,
            witness: rep.witness.unwrap_or(0),
            held_p: rep.inequalities_held.p,
            held_q: rep.inequalities_held.q,
            held_r: rep.inequalities_held.r,
            s_count: rep.s_count,
        };
        write_out(out, w, "out")
    })
}

/// # Safety
/// `out` must be valid for writing one `HwSpectral`.
#[no_mangle]
pub unsafe extern "C" fn hw_spectral(p: u64, q: u64, n: u64, out: *mut HwSpectral) -> HwStatus {
    guard(|| {
        let d = hardwindow::spectral_s(p, q, n).map_err(lib_err)?;
        let s = HwSpectral {
            s_direct: d.s_direct,
            main_term: d.main_term,
            error_term: d.error_term,
            spectral_sum: d.spectral_sum,
            residual: d.residual,
        };
        write_out(out, s, "out")
    })
}

/// # Safety
/// `out` must be valid for writing one `HwErrorBound`.
#[no_mangle]
pub unsafe extern "C" fn hw_verify_error_bound(
    n: u64,
    q: u64,
    r: f64,
    out: *mut HwErrorBound,
) -> HwStatus {
    guard(|| {
        let rep = hardwindow::verify_error_bound(n, q, r).map_err(lib_err)?;
        let b = HwErrorBound {
            prime: rep.prime,
            d: rep.d,
            exceptional_size: rep.exceptional_size as u64,
            exceptional_bound: rep.exceptional_bound,
            mean_s: rep.mean_s,
            mean_bound: rep.mean_bound,
            checked: rep.checked as u64,
            excluded: rep.excluded as u64,
            max_ratio: rep.max_ratio,
            pass: rep.pass(),
        };
        write_out(out, b, "out")
    })
}

/// Build the exceptional set for `(n, q, R)`.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn hw_exceptional_set_new(
    n: u64,
    q: u64,
    r: f64,
    out: *mut *mut HwExceptionalSet,
) -> HwStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_err("out"));
        }
        let inner = hardwindow::exceptional_set(n, q, r).map_err(lib_err)?;
        out.write(Box::into_raw(Box::new(HwExceptionalSet { inner })));
        Ok(())
    })
}

/// `d = P^α` of the set.
///
/// # Safety
/// `set` must be a live handle from [`hw_exceptional_set_new`].
#[no_mangle]
pub unsafe extern "C" fn hw_exceptional_set_modulus(set: *const HwExceptionalSet) -> u64 {
    set.as_ref().map_or(0, |s| s.inner.d)
}

/// Copy up to `cap` member classes into `buf` and return the total number
/// of members. Pass `buf = NULL` to query the size.
///
/// # Safety
/// `set` must be a live handle; `buf` must be NULL or valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn hw_exceptional_set_members(
    set: *const HwExceptionalSet,
    buf: *mut u64,
    cap: usize,
) -> usize {
    let Some(set) = set.as_ref() else { return 0 };
    let members = &set.inner.members;
    if !buf.is_null() {
        let k = cap.min(members.len());
        ptr::copy_nonoverlapping(members.as_ptr(), buf, k);
    }
    members.len()
}

/// # Safety
/// `set` must be NULL or a handle from [`hw_exceptional_set_new`] that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn hw_exceptional_set_free(set: *mut HwExceptionalSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Survey every admissible denominator in `[n_min, n_max]`. `eta_num/eta_den`
/// truncates to `min(p, q) > eta·n`; pass `0/1` for none. `filter` is an
/// `HwFilter` value.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn hw_survey_new(
    n_min: u64,
    n_max: u64,
    filter: u32,
    eta_num: u64,
    eta_den: u64,
    deep_audit: bool,
    out: *mut *mut HwSurvey,
) -> HwStatus {
    guard(|| {
        if out.is_null() {
            return Err(null_err("out"));
        }
        let filter = filter_from_raw(filter)?;
        let eta = Eta::new(eta_num, eta_den).map_err(lib_err)?;
        let opts = SurveyOptions { eta, deep_audit };
        let records = hardwindow::survey_range(n_min, n_max, filter, &opts).map_err(lib_err)?;
        out.write(Box::into_raw(Box::new(HwSurvey {
            records,
            deep_audit,
        })));
        Ok(())
    })
}

/// # Safety
/// `survey` must be a live handle from [`hw_survey_new`].
#[no_mangle]
pub unsafe extern "C" fn hw_survey_len(survey: *const HwSurvey) -> usize {
    survey.as_ref().map_or(0, |s| s.records.len())
}

/// # Safety
/// `survey` must be a live handle; `out` valid for one `HwSurveyRecord`.
#[no_mangle]
pub unsafe extern "C" fn hw_survey_get(
    survey: *const HwSurvey,
    index: usize,
    out: *mut HwSurveyRecord,
) -> HwStatus {
    guard(|| {
        let survey = survey.as_ref().ok_or_else(|| null_err("survey"))?;
        let rec = survey.records.get(index).ok_or_else(|| {
            (
                HwStatus::IndexOutOfRange,
                format!("index {index} >= {}", survey.records.len()),
            )
        })?;
        write_out(out, rec.into(), "out")
    })
}

/// The survey as CSV text (header included). Free with [`hw_string_free`].
/// Returns NULL if `survey` is NULL.
///
/// # Safety
/// `survey` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hw_survey_csv(survey: *const HwSurvey) -> *mut c_char {
    let Some(survey) = survey.as_ref() else {
        return ptr::null_mut();
    };
    let mut buf = Vec::new();
    if write_csv(&survey.records, survey.deep_audit, &mut buf).is_err() {
        return ptr::null_mut();
    }
    into_c_string(String::from_utf8_lossy(&buf).into_owned())
}

/// # Safety
/// `survey` must be NULL or a handle from [`hw_survey_new`] that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn hw_survey_free(survey: *mut HwSurvey) {
    if !survey.is_null() {
        drop(Box::from_raw(survey));
    }
}
