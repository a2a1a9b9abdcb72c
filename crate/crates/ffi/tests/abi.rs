use std::ffi::CStr;
use std::ptr;

use hardwindow_ffi::*;

fn last_error() -> String {
    let p = hw_last_error();
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { hw_string_free(p) };
    s
}

#[test]
fn ramanujan_values() {
    let mut out = 0i64;
    for (n, t, want) in [(5, 0, 4), (4, 2, -2), (8, 2, 0), (12, 5, 0), (1, 7, 1)] {
        assert_eq!(unsafe { hw_ramanujan(n, t, &mut out) }, HwStatus::Ok);
        assert_eq!(out, want, "c_{n}({t})");
    }
    assert_eq!(
        unsafe { hw_ramanujan(0, 1, &mut out) },
        HwStatus::InvalidArgument
    );
    assert!(!last_error().is_empty());
    assert_eq!(
        unsafe { hw_ramanujan(5, 0, ptr::null_mut()) },
        HwStatus::NullPointer
    );
}

#[test]
fn witness_and_count() {
    let mut w = HwWitness::default();
    let st = unsafe { hw_find_witness(5, 6, 23, HwMode::TwoPq as u32, &mut w) };
    assert_eq!(st, HwStatus::Ok);
    assert!(w.ruled_out);
    assert_eq!(w.witness, 5);
    assert!(w.held_p && w.held_q);
    assert_eq!(w.s_count, 3);

    let st = unsafe { hw_find_witness(1, 2, 4, HwMode::TwoPq as u32, &mut w) };
    assert_eq!(st, HwStatus::NotObtuse);
    assert!(last_error().contains("is not obtuse"));

    let st = unsafe { hw_find_witness(5, 6, 23, 7, &mut w) };
    assert_eq!(st, HwStatus::InvalidArgument);

    let mut s = 0u64;
    assert_eq!(unsafe { hw_count_s(1, 4, 12, &mut s) }, HwStatus::Ok);
    assert_eq!(s, 1);
    assert_eq!(
        unsafe { hw_count_s(2, 2, 12, &mut s) },
        HwStatus::NotLowestTerms
    );
}

#[test]
fn spectral_reconstructs() {
    let mut sp = HwSpectral::default();
    assert_eq!(unsafe { hw_spectral(5, 6, 23, &mut sp) }, HwStatus::Ok);
    assert_eq!(sp.s_direct, 3);
    assert!(sp.residual < 1e-6);
    assert!((sp.main_term + sp.error_term - 3.0).abs() < 1e-9);
}

#[test]
fn error_bound_and_exceptional_set() {
    let mut b = HwErrorBound::default();
    assert_eq!(
        unsafe { hw_verify_error_bound(202, 3, 2.0, &mut b) },
        HwStatus::Ok
    );
    assert_eq!(b.prime, 101);
    assert!(b.pass);
    assert!(b.checked > 0);

    let mut set: *mut HwExceptionalSet = ptr::null_mut();
    assert_eq!(
        unsafe { hw_exceptional_set_new(202, 3, 2.0, &mut set) },
        HwStatus::Ok
    );
    assert!(!set.is_null());
    assert_eq!(unsafe { hw_exceptional_set_modulus(set) }, 101);
    let len = unsafe { hw_exceptional_set_members(set, ptr::null_mut(), 0) };
    let mut buf = vec![0u64; len];
    assert_eq!(
        unsafe { hw_exceptional_set_members(set, buf.as_mut_ptr(), len) },
        len
    );
    assert!(buf.windows(2).all(|w| w[0] < w[1]));
    assert!(buf.iter().all(|&m| m < 101));
    unsafe { hw_exceptional_set_free(set) };

    let st = unsafe { hw_exceptional_set_new(202, 101, 2.0, &mut set) };
    assert_eq!(st, HwStatus::SharesLargestPrime);
    let st = unsafe { hw_exceptional_set_new(202, 3, 1.0, &mut set) };
    assert_eq!(st, HwStatus::InvalidArgument);
}

#[test]
fn survey_handle_roundtrip() {
    let mut h: *mut HwSurvey = ptr::null_mut();
    let st = unsafe { hw_survey_new(5, 30, HwFilter::Primes as u32, 0, 1, false, &mut h) };
    assert_eq!(st, HwStatus::Ok);
    assert_eq!(unsafe { hw_survey_len(h) }, 8);

    let mut rec = HwSurveyRecord::default();
    assert_eq!(unsafe { hw_survey_get(h, 0, &mut rec) }, HwStatus::Ok);
    assert_eq!(rec.n, 5);
    assert_eq!(rec.h_size, 1);
    assert_eq!(rec.omega_plus, -1);
    assert_eq!(rec.in_c, -1);
    assert_eq!(rec.in_e, -1);
    assert_eq!(unsafe { hw_survey_get(h, 7, &mut rec) }, HwStatus::Ok);
    assert_eq!(rec.n, 29);
    assert_eq!(rec.omega_plus, 1);
    assert!(rec.in_c >= 0);
    assert_eq!(
        unsafe { hw_survey_get(h, 8, &mut rec) },
        HwStatus::IndexOutOfRange
    );

    let csv = unsafe { hw_survey_csv(h) };
    let text = unsafe { CStr::from_ptr(csv) }.to_str().unwrap().to_owned();
    unsafe { hw_string_free(csv) };
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 9);
    assert_eq!(lines[0], hardwindow::survey::CSV_HEADER);
    assert!(lines[1].starts_with("5,5,na,1,"));
    unsafe { hw_survey_free(h) };

    let st = unsafe { hw_survey_new(5, 30, 9, 0, 1, false, &mut h) };
    assert_eq!(st, HwStatus::InvalidArgument);
    let st = unsafe { hw_survey_new(5, 30, HwFilter::All as u32, 1, 6, false, &mut h) };
    assert_eq!(st, HwStatus::InvalidArgument);
}

#[test]
fn null_handles_are_tolerated() {
    unsafe {
        assert_eq!(hw_survey_len(ptr::null()), 0);
        assert!(hw_survey_csv(ptr::null()).is_null());
        hw_survey_free(ptr::null_mut());
        hw_exceptional_set_free(ptr::null_mut());
        hw_string_free(ptr::null_mut());
        let mut rec = HwSurveyRecord::default();
        assert_eq!(
            hw_survey_get(ptr::null(), 0, &mut rec),
            HwStatus::NullPointer
        );
    }
}
