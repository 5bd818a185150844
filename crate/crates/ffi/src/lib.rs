//! C ABI over a metakernel session.
//!
//! A session is an opaque handle. Every call returns an [`MkStatus`]; on
//! failure the message is available from [`mk_last_error`] on the same
//! thread. Strings returned through out-pointers are owned by the caller
//! and released with [`mk_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use metakernel::eval::{eval, Env};
use metakernel::harness::session::Session;
use metakernel::harness::{finish, RunOptions};
use metakernel::sexp::{parse_term, parse_value, read_forms};
use metakernel::term::Value;

/// Opaque session: a world, its metafunctions and context rules, and the
/// ledger of consumed facts.
pub struct MkSession {
    session: Session,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MkStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    EventError = 4,
    EvalError = 5,
    /// The ledger check found a false fact or an unsound result.
    Violations = 6,
    Panic = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Fail(MkStatus, String);

fn guard(f: impl FnOnce() -> Result<MkStatus, Fail>) -> MkStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside metakernel");
            MkStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(MkStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(MkStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn session<'a>(s: *mut MkSession) -> Result<&'a mut Session, Fail> {
    s.as_mut().map(|h| &mut h.session).ok_or_else(|| Fail(MkStatus::NullArgument, "session is null".into()))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(MkStatus::NullArgument, "output pointer is null".into()));
    }
    let c = CString::new(s.replace('\0', " ")).expect("nul bytes removed");
    *out = c.into_raw();
    Ok(())
}

/// Creates an empty session. Never returns null.
#[no_mangle]
pub extern "C" fn mk_session_new() -> *mut MkSession {
    Box::into_raw(Box::new(MkSession { session: Session::new() }))
}

/// # Safety
/// `s` must come from [`mk_session_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn mk_session_free(s: *mut MkSession) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Processes a sequence of events. Each query's result line is written to
/// `*out`, newline separated.
///
/// # Safety
/// `s` is a live session, `events` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mk_session_events(
    s: *mut MkSession,
    events: *const c_char,
    out: *mut *mut c_char,
) -> MkStatus {
    guard(|| {
        let session = session(s)?;
        let forms = read_forms(text(events, "events")?).map_err(|e| Fail(MkStatus::ParseError, e.to_string()))?;
        let mut lines = String::new();
        for f in &forms {
            let printed = session.event(&f.value).map_err(|e| Fail(MkStatus::EventError, e.to_string()))?;
            if let Some(o) = printed {
                lines.push_str(&o.to_string());
                lines.push('\n');
            }
        }
        put_string(out, lines)?;
        Ok(MkStatus::Ok)
    })
}

/// Evaluates `term` under `env`, an association list such as
/// `((X . 1) (Y A B))`, in the session's world.
///
/// # Safety
/// `s` is a live session, `term` and `env` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mk_eval(
    s: *mut MkSession,
    term: *const c_char,
    env: *const c_char,
    out: *mut *mut c_char,
) -> MkStatus {
    guard(|| {
        let session = session(s)?;
        let t = parse_term(text(term, "term")?).map_err(|e| Fail(MkStatus::ParseError, e.to_string()))?;
        session.world.check_term(&t, None).map_err(|e| Fail(MkStatus::EvalError, e.to_string()))?;
        let alist = parse_value(text(env, "env")?).map_err(|e| Fail(MkStatus::ParseError, e.to_string()))?;
        let pairs = alist.list_items().ok_or_else(|| Fail(MkStatus::ParseError, "env is not a list".into()))?;
        let mut bindings = Vec::new();
        for p in pairs {
            match p.as_cons().and_then(|(k, v)| Some((k.as_symbol()?.clone(), v.clone()))) {
                Some(b) => bindings.push(b),
                None => return Err(Fail(MkStatus::ParseError, format!("bad binding {p}"))),
            }
        }
        let env: Env = bindings.into_iter().collect();
        let v = eval(&t, &env, &session.world).map_err(|e| Fail(MkStatus::EvalError, e.to_string()))?;
        put_string(out, v.to_string())?;
        Ok(MkStatus::Ok)
    })
}

/// Extracts the fact for request `obj`, e.g. `(:formula atom)`, and logs
/// it in the session's ledger.
///
/// # Safety
/// `s` is a live session, `obj` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mk_meta_extract(s: *mut MkSession, obj: *const c_char, out: *mut *mut c_char) -> MkStatus {
    guard(|| {
        let session = session(s)?;
        let obj = parse_value(text(obj, "obj")?).map_err(|e| Fail(MkStatus::ParseError, e.to_string()))?;
        let form = Value::list([Value::sym("META-EXTRACT"), obj]);
        let o = session.event(&form).map_err(|e| Fail(MkStatus::EventError, e.to_string()))?;
        let fact = match o {
            Some(metakernel::harness::session::Outcome::Fact { fact, .. }) => fact.to_string(),
            _ => return Err(Fail(MkStatus::EventError, "no fact produced".into())),
        };
        put_string(out, fact)?;
        Ok(MkStatus::Ok)
    })
}

/// Checks every logged fact and query result over `samples` seeded
/// environments. Writes the report to `*report` (if non-null) and the
/// number of violations to `*violations` (if non-null). Returns
/// `MK_STATUS_VIOLATIONS` when any were found.
///
/// # Safety
/// `s` is a live session; the out-pointers are null or writable.
#[no_mangle]
pub unsafe extern "C" fn mk_session_check(
    s: *mut MkSession,
    samples: usize,
    seed: u64,
    report: *mut *mut c_char,
    violations: *mut usize,
) -> MkStatus {
    guard(|| {
        let session = session(s)?;
        let r = finish(session, Vec::new(), &RunOptions { samples, seed, trace: false });
        if !report.is_null() {
            put_string(report, r.render())?;
        }
        if !violations.is_null() {
            *violations = r.violation_count();
        }
        Ok(if r.violation_count() == 0 { MkStatus::Ok } else { MkStatus::Violations })
    })
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call on this thread.
#[no_mangle]
pub extern "C" fn mk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `p` is null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mk_string_free(p: *mut c_char) {
    if !p.is_null() {
        drop(CString::from_raw(p));
    }
}
