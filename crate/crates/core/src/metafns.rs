//! Metafunctions: the driver that applies them, and the two shipped ones.
//!
//! `nth-symbolp` turns `(NTH n x)` into `(CAR x)` when type-set reasoning
//! says `n` is a symbol. `nth-update-nth` simplifies read-over-write terms
//! of any structure whose accessors are defined by `NTH`/`UPDATE-NTH` at
//! fixed positions, reading the positions off the definitional equations.

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use crate::eval::{eval, Env, EvalError};
use crate::meta_extract::Mfc;
use crate::term::{Sym, Term};
use crate::typeset::TypeSet;
use crate::world::{formals_of_formula, World, WorldError};

pub const SIMPLIFY_PASS_CAP: usize = 100;

pub trait Metafunction: Send + Sync {
    fn name(&self) -> &str;

    /// Returns `t` itself to decline.
    fn apply(&self, t: &Term, mfc: &Mfc) -> Term;
}

struct Entry {
    mf: Arc<dyn Metafunction>,
    triggers: BTreeSet<Sym>,
}

/// Registered metafunctions in registration order.
#[derive(Default)]
pub struct Registry {
    entries: Vec<Entry>,
}

impl Registry {
    pub fn new() -> Self {
        Registry::default()
    }

    /// Registers `mf`, or widens its trigger set if it is already present.
    pub fn register(&mut self, mf: Arc<dyn Metafunction>, triggers: impl IntoIterator<Item = Sym>) {
        match self.entries.iter_mut().find(|e| e.mf.name() == mf.name()) {
            Some(e) => e.triggers.extend(triggers),
            None => self.entries.push(Entry { mf, triggers: triggers.into_iter().collect() }),
        }
    }

    pub fn add_triggers(&mut self, name: &str, triggers: impl IntoIterator<Item = Sym>) -> bool {
        match self.entries.iter_mut().find(|e| e.mf.name() == name) {
            Some(e) => {
                e.triggers.extend(triggers);
                true
            }
            None => false,
        }
    }

    pub fn triggers(&self, name: &str) -> Option<&BTreeSet<Sym>> {
        self.entries.iter().find(|e| e.mf.name() == name).map(|e| &e.triggers)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.mf.name())
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Compiled-in metafunction by name.
pub fn builtin(name: &str) -> Option<Arc<dyn Metafunction>> {
    match name.to_ascii_uppercase().as_str() {
        "NTH-SYMBOLP-METAFN" => Some(Arc::new(NthSymbolp)),
        "NTH-UPDATE-NTH-METAFN" => Some(Arc::new(NthUpdateNth)),
        _ => None,
    }
}

struct Driver<'a, 'm> {
    mfc: &'a Mfc<'m>,
    registry: &'a Registry,
    passes: usize,
}

impl Driver<'_, '_> {
    fn simp(&mut self, t: &Term) -> Term {
        let Term::App(f, args) = t else { return t.clone() };
        let cur = Term::App(f.clone(), args.iter().map(|a| self.simp(a)).collect());
        for e in &self.registry.entries {
            if self.passes >= SIMPLIFY_PASS_CAP {
                break;
            }
            if !e.triggers.contains(f) {
                continue;
            }
            let out = e.mf.apply(&cur, self.mfc);
            if out != cur {
                self.passes += 1;
                return self.simp(&out);
            }
        }
        cur
    }
}

/// Applies registered metafunctions innermost-first until nothing changes or
/// the pass cap is reached.
pub fn simplify(t: &Term, mfc: &Mfc, registry: &Registry) -> Term {
    Driver { mfc, registry, passes: 0 }.simp(t)
}

pub struct NthSymbolp;

impl Metafunction for NthSymbolp {
    fn name(&self) -> &str {
        "NTH-SYMBOLP-METAFN"
    }

    fn apply(&self, t: &Term, mfc: &Mfc) -> Term {
        match t.as_call("NTH", 2) {
            Some([n, x]) if mfc.ts(n) == TypeSet::SYMBOL => Term::app("CAR", vec![x.clone()]),
            _ => t.clone(),
        }
    }
}

/// Position read by `f` if its equation is `(EQUAL (f v) (NTH 'i v))`.
pub fn fn_nth_index(f: &Sym, formula: &Term) -> Option<usize> {
    let [call, body] = formula.as_call("EQUAL", 2)? else { return None };
    let [Term::Var(v)] = call.as_call(f.name(), 1)? else { return None };
    let [i, Term::Var(x)] = body.as_call("NTH", 2)? else { return None };
    (x == v).then_some(())?;
    i.as_quote()?.as_usize()
}

/// Position written by `f` if its equation is
/// `(EQUAL (f v x) (UPDATE-NTH 'i v x))`.
pub fn fn_update_nth_index(f: &Sym, formula: &Term) -> Option<usize> {
    let [call, body] = formula.as_call("EQUAL", 2)? else { return None };
    let [Term::Var(v), Term::Var(x)] = call.as_call(f.name(), 2)? else { return None };
    let [i, Term::Var(v2), Term::Var(x2)] = body.as_call("UPDATE-NTH", 3)? else { return None };
    (v != x && v == v2 && x == x2).then_some(())?;
    i.as_quote()?.as_usize()
}

pub struct NthUpdateNth;

impl Metafunction for NthUpdateNth {
    fn name(&self) -> &str {
        "NTH-UPDATE-NTH-METAFN"
    }

    fn apply(&self, t: &Term, mfc: &Mfc) -> Term {
        let Some((rd, [inner])) = t.as_app() else { return t.clone() };
        let Some((wr, [v, x])) = inner.as_app() else { return t.clone() };
        let Some(i_rd) = fn_nth_index(rd, &mfc.formula(rd)) else { return t.clone() };
        let Some(i_wr) = fn_update_nth_index(wr, &mfc.formula(wr)) else { return t.clone() };
        // The reader's equation once more, justifying the rebuilt read.
        mfc.formula(rd);
        if i_rd == i_wr {
            v.clone()
        } else {
            Term::App(rd.clone(), vec![x.clone()])
        }
    }
}

/// Defines an accessor `FLD` and an updater `UPDATE-FLD` for each field,
/// stored at consecutive positions of a list. Returns the new world and
/// the accessors.
pub fn defstobj_expand(name: &Sym, fields: &[Sym], w: &World) -> Result<(World, Vec<Sym>), WorldError> {
    let st = Term::Var(name.clone());
    let val = Sym::new("V");
    let mut w = w.clone();
    for (i, fld) in fields.iter().enumerate() {
        let idx = Term::int(i);
        w = w.add_defun(fld.clone(), vec![name.clone()], Term::app("NTH", vec![idx.clone(), st.clone()]))?;
        let updater = Sym::new(&format!("UPDATE-{}", fld.name()));
        let body = Term::app("UPDATE-NTH", vec![idx, Term::Var(val.clone()), st.clone()]);
        w = w.add_defun(updater, vec![val.clone(), name.clone()], body)?;
    }
    Ok((w, fields.to_vec()))
}

#[derive(Debug, Error)]
pub enum AlistError {
    #[error(transparent)]
    World(#[from] WorldError),
    #[error("{name} expects {expected} argument(s), got {got}")]
    Arity { name: Sym, expected: usize, got: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Binds the formals of `call`'s function, as read from its stored
/// equation, to the values of the actuals in `env`.
pub fn meta_extract_alist(call: &Term, env: &Env, w: &World) -> Result<Env, AlistError> {
    let Some((f, args)) = call.as_app() else {
        return Err(WorldError::UnknownFunction(Sym::new("QUOTE")).into());
    };
    let formals = formals_of_formula(&w.meta_extract_formula(f)).ok_or_else(|| WorldError::UnknownFunction(f.clone()))?;
    if formals.len() != args.len() {
        return Err(AlistError::Arity { name: f.clone(), expected: formals.len(), got: args.len() });
    }
    formals
        .into_iter()
        .zip(args)
        .map(|(v, a)| Ok((v, eval(a, env, w)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meta_extract::{Ledger, ObligationKind};
    use crate::rewrite::MfcContext;
    use crate::sexp::{parse_term, parse_value};
    use crate::term::Value;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn stobj(n: usize) -> (World, Vec<Sym>) {
        let fields: Vec<Sym> = (1..=n).map(|i| Sym::new(&format!("FLD{i}"))).collect();
        defstobj_expand(&"ST".into(), &fields, &World::new()).unwrap()
    }

    fn registry(readers: Vec<Sym>) -> Registry {
        let mut r = Registry::new();
        r.register(Arc::new(NthSymbolp), [Sym::new("NTH")]);
        r.register(Arc::new(NthUpdateNth), readers);
        r
    }

    #[test]
    fn stobj_equations_and_formals() {
        let (w, readers) = stobj(20);
        assert_eq!(readers.len(), 20);
        assert_eq!(w.meta_extract_formula(&"FLD3".into()), t("(equal (fld3 st) (nth '2 st))"));
        assert_eq!(w.formals(&"UPDATE-FLD7".into()).unwrap(), vec![Sym::new("V"), Sym::new("ST")]);
        assert_eq!(fn_nth_index(&"FLD3".into(), &w.meta_extract_formula(&"FLD3".into())), Some(2));
        let upd = Sym::new("UPDATE-FLD3");
        assert_eq!(fn_update_nth_index(&upd, &w.meta_extract_formula(&upd)), Some(2));
        let atom = t("(equal (atom x) (not (consp x)))");
        assert_eq!(fn_nth_index(&"ATOM".into(), &atom), None);
        assert_eq!(fn_update_nth_index(&"ATOM".into(), &atom), None);
    }

    #[test]
    fn read_over_write() {
        let (w, readers) = stobj(20);
        let reg = registry(readers);
        let ctx = MfcContext::new(vec![], w);
        let ledger = Ledger::new();
        let mfc = Mfc::new(&ctx, &ledger);
        assert_eq!(simplify(&t("(fld3 (update-fld3 '5 st))"), &mfc, &reg), t("'5"));
        assert_eq!(simplify(&t("(fld3 (update-fld1 '1 st))"), &mfc, &reg), t("(fld3 st)"));
        assert_eq!(ledger.len(), 6);
        assert!(ledger.obligations().iter().all(|o| o.kind == ObligationKind::Global));
    }

    #[test]
    fn nth_symbolp_needs_the_exact_type_set() {
        let w = World::new().add_defun("FOO".into(), vec!["X".into()], t("(if (consp x) (car x) 'foo)")).unwrap();
        let reg = registry(vec![]);
        let ledger = Ledger::new();
        let with = MfcContext::new(vec![t("(symbolp (foo x))")], w.clone());
        assert_eq!(simplify(&t("(nth (foo x) y)"), &Mfc::new(&with, &ledger), &reg), t("(car y)"));
        let without = MfcContext::new(vec![], w);
        let mfc = Mfc::new(&without, &ledger);
        assert_eq!(simplify(&t("(nth (foo x) y)"), &mfc, &reg), t("(nth (foo x) y)"));
        assert_eq!(simplify(&t("(nth '0 y)"), &mfc, &reg), t("(nth '0 y)"));
        assert_eq!(simplify(&t("(car y)"), &mfc, &reg), t("(car y)"));
    }

    struct Flip(&'static str, &'static str, &'static str);

    impl Metafunction for Flip {
        fn name(&self) -> &str {
            self.0
        }

        fn apply(&self, t: &Term, _: &Mfc) -> Term {
            match t.as_app() {
                Some((f, args)) if f.is(self.1) => Term::App(self.2.into(), args.to_vec()),
                _ => t.clone(),
            }
        }
    }

    #[test]
    fn flip_flop_stops_at_the_cap() {
        let mut reg = Registry::new();
        reg.register(Arc::new(Flip("A2B", "F", "G")), [Sym::new("F")]);
        reg.register(Arc::new(Flip("B2A", "G", "F")), [Sym::new("G")]);
        let ctx = MfcContext::new(vec![], World::new());
        let ledger = Ledger::new();
        let out = simplify(&t("(f x)"), &Mfc::new(&ctx, &ledger), &reg);
        // An even number of flips lands back on F.
        assert_eq!(out, t("(f x)"));
        assert_eq!(SIMPLIFY_PASS_CAP % 2, 0);
    }

    #[test]
    fn alist_from_stored_formals() {
        let (w, _) = stobj(3);
        let env: Env = [(Sym::new("ST"), parse_value("(10 20 30)").unwrap())].into_iter().collect();
        let al = meta_extract_alist(&t("(fld3 st)"), &env, &w).unwrap();
        assert_eq!(al.bindings(), env.bindings());
        let env0: Env = [(Sym::new("ST"), parse_value("(0 0)").unwrap())].into_iter().collect();
        let al = meta_extract_alist(&t("(update-fld1 '1 st)"), &env0, &w).unwrap();
        assert_eq!(al.to_value(), parse_value("((V . 1) (ST 0 0))").unwrap());
        assert!(meta_extract_alist(&t("(frob x)"), &env, &w).is_err());
        assert_eq!(eval(&t("(nth '2 st)"), &al, &w).unwrap(), Value::nil());
    }
}
