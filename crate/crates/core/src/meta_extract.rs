//! Fact constructors and the obligation ledger.
//!
//! A fact constructor turns a request for a fact into a term that must be
//! true: a definitional equation, a stored rule, a computed function value,
//! or the correctness statement for one answer of a context oracle. Malformed
//! or out-of-kind requests produce `'T`, which is true and useless.
//!
//! Every fact a metafunction consumes through [`Mfc`] is appended to a
//! [`Ledger`]. After a run the ledger is checked by evaluating each fact in
//! many environments; contextual facts are only checked where the hypotheses
//! of the context they were produced under hold.

use std::fmt;
use std::sync::Mutex;

use crate::eval::{eval, magic_ev_fncall, sublis_var, Env, EvalError};
use crate::rewrite::{mfc_ap, mfc_relieve_hyp, mfc_rw_plus, mfc_ts, MfcContext};
use crate::term::{Alist, Sym, Term, Value};
use crate::typeset::TypeSet;
use crate::world::{Equiv, World};

/// A request for a fact, as carried by a quoted list headed by its tag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactObj {
    Formula(Sym),
    Lemma(Sym, usize),
    Fncall(Sym, Vec<Value>),
    Typeset(Term),
    RwPlus { term: Term, alist: Alist, obj: Value, equiv: Equiv },
    Rw { term: Term, obj: Value, equiv: Equiv },
    Ap(Term),
    RelieveHyp { hyp: Term, alist: Alist, rune: Value, target: Term, backptr: usize },
    Malformed(Value),
}

fn parse_alist(v: &Value) -> Option<Alist> {
    v.list_items()?
        .iter()
        .map(|pair| {
            let (k, t) = pair.as_cons()?;
            let k = k.as_symbol()?;
            if k.is("NIL") || k.is("T") || k.is_keyword() {
                return None;
            }
            Some((k.clone(), Term::from_value(t)?))
        })
        .collect()
}

fn alist_value(al: &[(Sym, Term)]) -> Value {
    Value::list(al.iter().map(|(k, t)| Value::cons(Value::Symbol(k.clone()), t.to_value())).collect::<Vec<_>>())
}

fn parse_equiv(v: &Value) -> Option<Equiv> {
    Equiv::from_symbol(v.as_symbol()?)
}

fn parse_fn(v: &Value) -> Option<Sym> {
    v.as_symbol().filter(|s| !s.is("QUOTE") && !s.is_keyword()).cloned()
}

impl FactObj {
    /// Reads a request. Anything that does not have exactly one of the eight
    /// shapes is kept as `Malformed`.
    pub fn parse(v: &Value) -> FactObj {
        Self::try_parse(v).unwrap_or_else(|| FactObj::Malformed(v.clone()))
    }

    fn try_parse(v: &Value) -> Option<FactObj> {
        let items = v.list_items()?;
        let (tag, rest) = items.split_first()?;
        let tag = tag.as_symbol()?;
        Some(match (tag.name(), rest) {
            (":FORMULA", [f]) => FactObj::Formula(f.as_symbol()?.clone()),
            (":LEMMA", [f, n]) => FactObj::Lemma(parse_fn(f)?, n.as_usize()?),
            (":FNCALL", [f, args]) => FactObj::Fncall(parse_fn(f)?, args.list_items()?),
            (":TYPESET", [t]) => FactObj::Typeset(Term::from_value(t)?),
            (":RW+", [t, al, obj, eq]) => FactObj::RwPlus {
                term: Term::from_value(t)?,
                alist: parse_alist(al)?,
                obj: obj.clone(),
                equiv: parse_equiv(eq)?,
            },
            (":RW", [t, obj, eq]) => FactObj::Rw { term: Term::from_value(t)?, obj: obj.clone(), equiv: parse_equiv(eq)? },
            (":AP", [t]) => FactObj::Ap(Term::from_value(t)?),
            (":RELIEVE-HYP", [h, al, rune, target, bp]) => FactObj::RelieveHyp {
                hyp: Term::from_value(h)?,
                alist: parse_alist(al)?,
                rune: rune.clone(),
                target: Term::from_value(target)?,
                backptr: bp.as_usize()?,
            },
            _ => return None,
        })
    }

    pub fn to_value(&self) -> Value {
        let tagged = |tag: &str, rest: Vec<Value>| Value::list(std::iter::once(Value::sym(tag)).chain(rest).collect::<Vec<_>>());
        let sym = |s: &Sym| Value::Symbol(s.clone());
        match self {
            FactObj::Formula(f) => tagged(":FORMULA", vec![sym(f)]),
            FactObj::Lemma(f, n) => tagged(":LEMMA", vec![sym(f), Value::int(*n)]),
            FactObj::Fncall(f, args) => tagged(":FNCALL", vec![sym(f), Value::list(args.clone())]),
            FactObj::Typeset(t) => tagged(":TYPESET", vec![t.to_value()]),
            FactObj::RwPlus { term, alist, obj, equiv } => tagged(
                ":RW+",
                vec![term.to_value(), alist_value(alist), obj.clone(), Value::sym(equiv.symbol())],
            ),
            FactObj::Rw { term, obj, equiv } => {
                tagged(":RW", vec![term.to_value(), obj.clone(), Value::sym(equiv.symbol())])
            }
            FactObj::Ap(t) => tagged(":AP", vec![t.to_value()]),
            FactObj::RelieveHyp { hyp, alist, rune, target, backptr } => tagged(
                ":RELIEVE-HYP",
                vec![hyp.to_value(), alist_value(alist), rune.clone(), target.to_value(), Value::int(*backptr)],
            ),
            FactObj::Malformed(v) => v.clone(),
        }
    }

    pub fn is_global(&self) -> bool {
        matches!(self, FactObj::Formula(_) | FactObj::Lemma(..) | FactObj::Fncall(..))
    }

    pub fn is_contextual(&self) -> bool {
        !self.is_global() && !matches!(self, FactObj::Malformed(_))
    }
}

impl fmt::Display for FactObj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_value())
    }
}

/// Fact about `obj` read from `st`, provided `st` and `state` hold the same
/// world.
pub fn meta_extract_global_fact_plus(obj: &FactObj, st: &World, state: &World) -> Term {
    if st != state {
        return Term::t();
    }
    match obj {
        FactObj::Formula(f) => st.meta_extract_formula(f),
        FactObj::Lemma(f, n) => st.nth_lemma(f, *n),
        FactObj::Fncall(f, args) => match magic_ev_fncall(f, args, st) {
            Some(v) => {
                let call = Term::App(f.clone(), args.iter().cloned().map(Term::Quote).collect());
                Term::equal(call, Term::Quote(v))
            }
            None => Term::t(),
        },
        _ => Term::t(),
    }
}

pub fn meta_extract_global_fact(obj: &FactObj, state: &World) -> Term {
    meta_extract_global_fact_plus(obj, state, state)
}

/// What a context oracle answered, alongside the fact justifying it.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Answer {
    TypeSet(TypeSet),
    Term(Term),
    Bool(bool),
    None,
}

fn well_formed(ctx: &MfcContext, terms: &[&Term]) -> bool {
    terms.iter().all(|t| ctx.world.check_term(t, None).is_ok())
}

fn contextual(obj: &FactObj, ctx: &MfcContext) -> (Term, Answer) {
    let trivial = (Term::t(), Answer::None);
    match obj {
        FactObj::Typeset(t) => {
            if !well_formed(ctx, &[t]) {
                return trivial;
            }
            let ts = mfc_ts(t, ctx);
            let fact = Term::app("TYPESPEC-CHECK", vec![Term::Quote(ts.to_value()), t.clone()]);
            (fact, Answer::TypeSet(ts))
        }
        FactObj::RwPlus { term, alist, obj, equiv } => rw_fact(term, alist, obj, *equiv, ctx),
        FactObj::Rw { term, obj, equiv } => rw_fact(term, &[], obj, *equiv, ctx),
        FactObj::Ap(t) => {
            if !well_formed(ctx, &[t]) {
                return trivial;
            }
            if mfc_ap(t, ctx) {
                (Term::not(t.clone()), Answer::Bool(true))
            } else {
                (Term::t(), Answer::Bool(false))
            }
        }
        FactObj::RelieveHyp { hyp, alist, rune, target, backptr } => {
            let mut parts: Vec<&Term> = alist.iter().map(|(_, t)| t).collect();
            parts.extend([hyp, target]);
            if !well_formed(ctx, &parts) {
                return trivial;
            }
            if mfc_relieve_hyp(hyp, alist, rune, target, *backptr, ctx) {
                (sublis_var(alist, hyp), Answer::Bool(true))
            } else {
                (Term::t(), Answer::Bool(false))
            }
        }
        _ => trivial,
    }
}

fn rw_fact(term: &Term, alist: &[(Sym, Term)], obj: &Value, equiv: Equiv, ctx: &MfcContext) -> (Term, Answer) {
    let mut parts: Vec<&Term> = alist.iter().map(|(_, t)| t).collect();
    parts.push(term);
    if !well_formed(ctx, &parts) {
        return (Term::t(), Answer::None);
    }
    let before = sublis_var(alist, term);
    let after = mfc_rw_plus(term, alist, obj, equiv, ctx);
    (Term::app(equiv.symbol(), vec![before, after.clone()]), Answer::Term(after))
}

/// Fact about a context oracle's answer for `obj` under `ctx`.
pub fn meta_extract_contextual_fact(obj: &FactObj, ctx: &MfcContext) -> Term {
    contextual(obj, ctx).0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObligationKind {
    Global,
    Contextual,
}

impl fmt::Display for ObligationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ObligationKind::Global => "GLOBAL",
            ObligationKind::Contextual => "CONTEXTUAL",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obligation {
    pub obj: FactObj,
    pub fact: Term,
    pub kind: ObligationKind,
    /// Hypotheses in force when a contextual fact was produced.
    pub ctx_snapshot: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    /// True in every applicable environment; `checked` counts them.
    Ok { checked: usize },
    /// NIL, or an evaluation error, in `env`.
    Violated { env: Env, error: Option<String> },
}

#[derive(Clone, Debug)]
pub struct CheckedObligation {
    pub index: usize,
    pub obligation: Obligation,
    pub status: Status,
}

impl CheckedObligation {
    pub fn is_violation(&self) -> bool {
        matches!(self.status, Status::Violated { .. })
    }
}

impl fmt::Display for CheckedObligation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = &self.obligation;
        write!(f, "(OBLIGATION {} {} {} ", o.kind, o.obj, o.fact)?;
        match &self.status {
            Status::Ok { checked } => write!(f, "(OK {checked}))"),
            Status::Violated { env, error: None } => write!(f, "(VIOLATED {}))", env.to_value()),
            Status::Violated { env, error: Some(e) } => {
                write!(f, "(VIOLATED {} {}))", env.to_value(), Value::string(e))
            }
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct LedgerReport {
    pub results: Vec<CheckedObligation>,
}

impl LedgerReport {
    pub fn violations(&self) -> impl Iterator<Item = &CheckedObligation> {
        self.results.iter().filter(|r| r.is_violation())
    }

    pub fn is_clean(&self) -> bool {
        self.violations().next().is_none()
    }

    /// Number of (obligation, environment) pairs evaluated.
    pub fn checks(&self) -> usize {
        self.results
            .iter()
            .map(|r| match r.status {
                Status::Ok { checked } => checked,
                Status::Violated { .. } => 1,
            })
            .sum()
    }
}

impl fmt::Display for LedgerReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

fn holds(t: &Term, env: &Env, w: &World) -> Result<bool, EvalError> {
    eval(t, env, w).map(|v| v.truthy())
}

/// Checks one obligation against every environment in `envs`.
pub fn check_obligation(o: &Obligation, envs: &[Env], w: &World) -> Status {
    let mut checked = 0;
    for env in envs {
        if o.kind == ObligationKind::Contextual
            && !o.ctx_snapshot.iter().all(|h| matches!(holds(h, env, w), Ok(true)))
        {
            continue;
        }
        match holds(&o.fact, env, w) {
            Ok(true) => checked += 1,
            Ok(false) => return Status::Violated { env: env.clone(), error: None },
            Err(e) => return Status::Violated { env: env.clone(), error: Some(e.to_string()) },
        }
    }
    Status::Ok { checked }
}

/// Append-only log of consumed facts.
#[derive(Debug, Default)]
pub struct Ledger {
    entries: Mutex<Vec<Obligation>>,
}

impl Ledger {
    pub fn new() -> Self {
        Ledger::default()
    }

    pub fn record(&self, o: Obligation) {
        self.entries.lock().expect("ledger poisoned").push(o);
    }

    pub fn len(&self) -> usize {
        self.entries.lock().expect("ledger poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn obligations(&self) -> Vec<Obligation> {
        self.entries.lock().expect("ledger poisoned").clone()
    }

    pub fn clear(&self) {
        self.entries.lock().expect("ledger poisoned").clear();
    }

    pub fn check(&self, envs: &[Env], w: &World) -> LedgerReport {
        let obligations = self.obligations();
        let results = std::thread::scope(|s| {
            let handles: Vec<_> = obligations
                .chunks(obligations.len().div_ceil(worker_count()).max(1))
                .map(|chunk| s.spawn(move || chunk.iter().map(|o| check_obligation(o, envs, w)).collect::<Vec<_>>()))
                .collect();
            handles.into_iter().flat_map(|h| h.join().expect("checker panicked")).collect::<Vec<_>>()
        });
        LedgerReport {
            results: obligations
                .into_iter()
                .zip(results)
                .enumerate()
                .map(|(index, (obligation, status))| CheckedObligation { index, obligation, status })
                .collect(),
        }
    }
}

fn worker_count() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(8)
}

/// The oracles a metafunction may consult. Every call records the fact that
/// justifies its answer.
pub struct Mfc<'a> {
    pub ctx: &'a MfcContext,
    pub ledger: &'a Ledger,
}

impl<'a> Mfc<'a> {
    pub fn new(ctx: &'a MfcContext, ledger: &'a Ledger) -> Self {
        Mfc { ctx, ledger }
    }

    pub fn world(&self) -> &World {
        &self.ctx.world
    }

    fn global(&self, obj: FactObj) -> Term {
        let fact = meta_extract_global_fact(&obj, &self.ctx.world);
        self.ledger.record(Obligation { obj, fact: fact.clone(), kind: ObligationKind::Global, ctx_snapshot: Vec::new() });
        fact
    }

    fn contextual(&self, obj: FactObj) -> Answer {
        let (fact, answer) = contextual(&obj, self.ctx);
        self.ledger.record(Obligation {
            obj,
            fact,
            kind: ObligationKind::Contextual,
            ctx_snapshot: self.ctx.hyps.clone(),
        });
        answer
    }

    pub fn formula(&self, name: &Sym) -> Term {
        self.global(FactObj::Formula(name.clone()))
    }

    pub fn lemma(&self, f: &Sym, n: usize) -> Term {
        self.global(FactObj::Lemma(f.clone(), n))
    }

    /// Value of `f` on `args`, if it could be computed.
    pub fn fncall(&self, f: &Sym, args: &[Value]) -> Option<Value> {
        let fact = self.global(FactObj::Fncall(f.clone(), args.to_vec()));
        let [_, v] = fact.as_call("EQUAL", 2)? else { return None };
        v.as_quote().cloned()
    }

    pub fn ts(&self, t: &Term) -> TypeSet {
        match self.contextual(FactObj::Typeset(t.clone())) {
            Answer::TypeSet(ts) => ts,
            _ => TypeSet::TOP,
        }
    }

    pub fn rw_plus(&self, t: &Term, alist: &[(Sym, Term)], obj: &Value, equiv: Equiv) -> Term {
        let req = FactObj::RwPlus { term: t.clone(), alist: alist.to_vec(), obj: obj.clone(), equiv };
        match self.contextual(req) {
            Answer::Term(r) => r,
            _ => sublis_var(alist, t),
        }
    }

    pub fn rw(&self, t: &Term, obj: &Value, equiv: Equiv) -> Term {
        match self.contextual(FactObj::Rw { term: t.clone(), obj: obj.clone(), equiv }) {
            Answer::Term(r) => r,
            _ => t.clone(),
        }
    }

    pub fn ap(&self, t: &Term) -> bool {
        self.contextual(FactObj::Ap(t.clone())) == Answer::Bool(true)
    }

    pub fn relieve_hyp(&self, hyp: &Term, alist: &[(Sym, Term)], rune: &Value, target: &Term, backptr: usize) -> bool {
        let req = FactObj::RelieveHyp {
            hyp: hyp.clone(),
            alist: alist.to_vec(),
            rune: rune.clone(),
            target: target.clone(),
            backptr,
        };
        self.contextual(req) == Answer::Bool(true)
    }
}
