use std::ffi::{CStr, CString};
use std::ptr;

use metakernel_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(p: *mut std::ffi::c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    mk_string_free(p);
    s
}

unsafe fn last_error() -> String {
    let p = mk_last_error();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_string_lossy().into_owned()
}

#[test]
fn events_and_clean_check() {
    unsafe {
        let s = mk_session_new();
        let mut out = ptr::null_mut();
        let events = c("(defstub foo (x))
                        (defmeta nth-symbolp-metafn :trigger-fns (nth))
                        (simplify (nth (foo x) y) :hyps ((symbolp (foo x))))");
        assert_eq!(mk_session_events(s, events.as_ptr(), &mut out), MkStatus::Ok);
        assert_eq!(take(out), "(SIMPLIFY (NTH (FOO X) Y) (CAR Y) :OBLIGATIONS 1)\n");

        let mut report = ptr::null_mut();
        let mut violations = usize::MAX;
        assert_eq!(mk_session_check(s, 200, 7, &mut report, &mut violations), MkStatus::Ok);
        assert_eq!(violations, 0);
        assert!(take(report).contains("(SUMMARY :EVENTS 3 :OBLIGATIONS 1"));
        mk_session_free(s);
    }
}

#[test]
fn eval_and_meta_extract() {
    unsafe {
        let s = mk_session_new();
        let mut out = ptr::null_mut();
        let defs = c("(defun my-atom (x) (not (consp x)))");
        assert_eq!(mk_session_events(s, defs.as_ptr(), &mut out), MkStatus::Ok);
        assert_eq!(take(out), "");

        assert_eq!(mk_eval(s, c("(my-atom (cons x y))").as_ptr(), c("((x . 1) (y a b))").as_ptr(), &mut out), MkStatus::Ok);
        assert_eq!(take(out), "NIL");
        assert_eq!(mk_eval(s, c("(binary-+ x '1/2)").as_ptr(), c("((x . 1))").as_ptr(), &mut out), MkStatus::Ok);
        assert_eq!(take(out), "3/2");

        assert_eq!(mk_meta_extract(s, c("(:formula my-atom)").as_ptr(), &mut out), MkStatus::Ok);
        assert_eq!(take(out), "(EQUAL (MY-ATOM X) (NOT (CONSP X)))");
        assert_eq!(mk_meta_extract(s, c("(:fncall len ((1 2 3)))").as_ptr(), &mut out), MkStatus::Ok);
        assert_eq!(take(out), "(EQUAL (LEN '(1 2 3)) '3)");
        mk_session_free(s);
    }
}

#[test]
fn corrupted_world_reports_violations() {
    unsafe {
        let s = mk_session_new();
        let mut out = ptr::null_mut();
        let events = c("(defun my-atom (x) (not (consp x)))
                        (defthm atom-flipped (equal (my-atom x) (consp x)))
                        (meta-extract (:formula atom-flipped))");
        assert_eq!(mk_session_events(s, events.as_ptr(), &mut out), MkStatus::Ok);
        mk_string_free(out);
        let mut violations = 0;
        assert_eq!(mk_session_check(s, 100, 1, ptr::null_mut(), &mut violations), MkStatus::Violations);
        assert_eq!(violations, 1);
        mk_session_free(s);
    }
}

#[test]
fn errors_set_codes_and_messages() {
    unsafe {
        let s = mk_session_new();
        let mut out = ptr::null_mut();
        assert_eq!(mk_session_events(s, c("(defun f (x)").as_ptr(), &mut out), MkStatus::ParseError);
        assert!(!last_error().is_empty());
        assert_eq!(mk_session_events(s, c("(frobnicate)").as_ptr(), &mut out), MkStatus::EventError);
        assert!(last_error().contains("FROBNICATE"));
        assert_eq!(mk_eval(s, c("(undefined-fn x)").as_ptr(), c("()").as_ptr(), &mut out), MkStatus::EvalError);
        assert_eq!(mk_eval(s, c("x").as_ptr(), c("(1 2)").as_ptr(), &mut out), MkStatus::ParseError);
        assert_eq!(mk_eval(ptr::null_mut(), c("x").as_ptr(), c("()").as_ptr(), &mut out), MkStatus::NullArgument);
        assert_eq!(mk_session_events(s, ptr::null(), &mut out), MkStatus::NullArgument);
        assert_eq!(mk_eval(s, c("x").as_ptr(), c("((x . 1))").as_ptr(), &mut out), MkStatus::Ok);
        assert!(mk_last_error().is_null());
        mk_string_free(out);
        mk_string_free(ptr::null_mut());
        mk_session_free(ptr::null_mut());
        mk_session_free(s);
    }
}
