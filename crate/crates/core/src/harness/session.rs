//! Event processing against an evolving world.

use std::fmt;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::bound_rw::{prove_bounds, BoundHint, BoundsResult};
use crate::context_rw::{context_simplify, ContextRule};
use crate::meta_extract::{
    meta_extract_contextual_fact, meta_extract_global_fact, FactObj, Ledger, Mfc, Obligation, ObligationKind,
};
use crate::metafns::{builtin, defstobj_expand, simplify, NthUpdateNth, Registry};
use crate::rewrite::MfcContext;
use crate::sexp::translate;
use crate::term::{Sym, Term, Value};
use crate::world::{Equiv, RewriteRule, World};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("event {index} ({head}): {message}")]
pub struct EventError {
    pub index: usize,
    pub head: String,
    pub message: String,
}

/// What a query event produced.
#[derive(Clone, Debug)]
pub enum Outcome {
    /// `simplify`, `context-simplify` and `rewrite`: `output` must equal
    /// `input` (or agree in truth value under IFF) wherever `hyps` hold.
    Simplified { kind: &'static str, input: Term, output: Term, hyps: Vec<Term>, equiv: Equiv, obligations: usize },
    Bounds { goal: Term, hyps: Vec<Term>, result: BoundsResult },
    Fact { obj: FactObj, fact: Term },
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Simplified { kind, input, output, obligations, .. } => {
                write!(f, "({kind} {input} {output} :OBLIGATIONS {obligations})")
            }
            Outcome::Bounds { goal, result, .. } if result.proved => write!(
                f,
                "(PROVE-BOUNDS {goal} PROVED :LESSER {} :GREATER {})",
                result.lesser, result.greater
            ),
            Outcome::Bounds { goal, result, .. } => {
                write!(f, "(PROVE-BOUNDS {goal} UNPROVED :RESIDUAL {})", result.residual)
            }
            Outcome::Fact { obj, fact } => write!(f, "(META-EXTRACT {obj} {fact})"),
        }
    }
}

/// World, metafunctions, context rules and ledger of one run.
pub struct Session {
    pub world: World,
    pub registry: Registry,
    pub context_rules: Vec<ContextRule>,
    pub ledger: Ledger,
    pub outcomes: Vec<Outcome>,
    trace: Option<Arc<Mutex<Vec<String>>>>,
    events: usize,
}

impl Default for Session {
    fn default() -> Self {
        Session::new()
    }
}

type EResult<T> = Result<T, String>;

fn symbol(v: &Value, what: &str) -> EResult<Sym> {
    match v.as_symbol() {
        Some(s) if !s.is("NIL") && !s.is("T") && !s.is_keyword() => Ok(s.clone()),
        _ => Err(format!("expected a {what}, got {v}")),
    }
}

fn symbols(v: &Value, what: &str) -> EResult<Vec<Sym>> {
    v.list_items()
        .ok_or_else(|| format!("expected a list of {what}s, got {v}"))?
        .iter()
        .map(|x| symbol(x, what))
        .collect()
}

fn term(v: &Value) -> EResult<Term> {
    translate(v)
}

fn terms(v: &Value) -> EResult<Vec<Term>> {
    v.list_items().ok_or_else(|| format!("expected a list of terms, got {v}"))?.iter().map(term).collect()
}

/// Splits trailing `:key value` pairs off `args`.
type Keywords = Vec<(String, Value)>;

fn split_keywords(args: &[Value]) -> EResult<(&[Value], Keywords)> {
    let start = args
        .iter()
        .position(|a| a.as_symbol().is_some_and(Sym::is_keyword))
        .unwrap_or(args.len());
    let (pos, kw) = args.split_at(start);
    if kw.len() % 2 != 0 {
        return Err("keyword arguments must come in pairs".into());
    }
    let pairs = kw
        .chunks(2)
        .map(|c| match c[0].as_symbol() {
            Some(k) if k.is_keyword() => Ok((k.name().to_string(), c[1].clone())),
            _ => Err(format!("expected a keyword, got {}", c[0])),
        })
        .collect::<EResult<Vec<_>>>()?;
    Ok((pos, pairs))
}

fn only_keys(kw: &[(String, Value)], allowed: &[&str]) -> EResult<()> {
    match kw.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
        Some((k, _)) => Err(format!("unexpected keyword {k}")),
        None => Ok(()),
    }
}

fn keyword<'a>(kw: &'a [(String, Value)], key: &str) -> Option<&'a Value> {
    kw.iter().find(|(k, _)| k == key).map(|(_, v)| v)
}

fn arity(args: &[Value], n: usize, shape: &str) -> EResult<()> {
    if args.len() == n {
        Ok(())
    } else {
        Err(format!("expected {shape}"))
    }
}

impl Session {
    pub fn new() -> Self {
        Session {
            world: World::new(),
            registry: Registry::new(),
            context_rules: Vec::new(),
            ledger: Ledger::new(),
            outcomes: Vec::new(),
            trace: None,
            events: 0,
        }
    }

    pub fn with_trace(mut self) -> Self {
        self.trace = Some(Arc::new(Mutex::new(Vec::new())));
        self
    }

    pub fn events_processed(&self) -> usize {
        self.events
    }

    /// Rule applications recorded since the last call.
    pub fn take_trace(&self) -> Vec<String> {
        self.trace.as_ref().map(|t| std::mem::take(&mut *t.lock().expect("trace poisoned"))).unwrap_or_default()
    }

    fn context(&self, hyps: Vec<Term>) -> MfcContext {
        let ctx = MfcContext::new(hyps, self.world.clone());
        match &self.trace {
            Some(sink) => ctx.with_trace(sink.clone()),
            None => ctx,
        }
    }

    fn checked(&self, t: Term) -> EResult<Term> {
        self.world.check_term(&t, None).map_err(|e| e.to_string())?;
        Ok(t)
    }

    fn hyps(&self, kw: &[(String, Value)]) -> EResult<Vec<Term>> {
        match keyword(kw, ":HYPS") {
            Some(v) => terms(v)?.into_iter().map(|h| self.checked(h)).collect(),
            None => Ok(Vec::new()),
        }
    }

    /// Processes one event. Queries return the outcome they recorded.
    pub fn event(&mut self, form: &Value) -> Result<Option<&Outcome>, EventError> {
        let index = self.events;
        let head = form.car().as_symbol().map(|s| s.name().to_string()).unwrap_or_else(|| form.to_string());
        let recorded = self.outcomes.len();
        self.dispatch(form).map_err(|message| EventError { index, head, message })?;
        self.events += 1;
        Ok(self.outcomes.get(recorded))
    }

    fn dispatch(&mut self, form: &Value) -> EResult<()> {
        let items = form.list_items().ok_or_else(|| format!("an event must be a list, got {form}"))?;
        let (head, args) = items.split_first().ok_or("empty event")?;
        let head = head.as_symbol().ok_or("an event must start with a symbol")?;
        let (args, kw) = split_keywords(args)?;
        match head.name() {
            "DEFUN" => {
                only_keys(&kw, &[])?;
                arity(args, 3, "(defun name (formals) body)")?;
                let body = term(&args[2])?;
                self.world = self.world.add_defun(symbol(&args[0], "name")?, symbols(&args[1], "formal")?, body)
                    .map_err(|e| e.to_string())?;
            }
            "DEFSTUB" => {
                only_keys(&kw, &[])?;
                arity(args, 2, "(defstub name (formals))")?;
                let name = symbol(&args[0], "name")?;
                let formals = symbols(&args[1], "formal")?;
                let body = stub_body(&name, &formals);
                self.world = self.world.add_defun(name, formals, body).map_err(|e| e.to_string())?;
            }
            "DEFTHM" => {
                only_keys(&kw, &[])?;
                arity(args, 2, "(defthm name formula)")?;
                self.world = self.world.add_defthm(symbol(&args[0], "name")?, term(&args[1])?)
                    .map_err(|e| e.to_string())?;
            }
            "DEFRULE" => {
                only_keys(&kw, &[":BACKCHAIN-LIMIT"])?;
                arity(args, 5, "(defrule name (hyps) equiv lhs rhs)")?;
                let equiv = args[2]
                    .as_symbol()
                    .and_then(Equiv::from_symbol)
                    .ok_or_else(|| format!("unknown equivalence {}", args[2]))?;
                let backchain_limit = match keyword(&kw, ":BACKCHAIN-LIMIT") {
                    Some(v) => Some(v.as_usize().ok_or_else(|| format!("bad backchain limit {v}"))?),
                    None => None,
                };
                let rule = RewriteRule {
                    name: symbol(&args[0], "name")?,
                    hyps: terms(&args[1])?,
                    equiv,
                    lhs: term(&args[3])?,
                    rhs: term(&args[4])?,
                    backchain_limit,
                };
                self.world = self.world.add_rewrite_rule(rule).map_err(|e| e.to_string())?;
            }
            "DEFSTOBJ" => {
                only_keys(&kw, &[])?;
                let (name, fields) = args.split_first().ok_or("expected (defstobj name fld1 ... fldn)")?;
                let fields = fields.iter().map(|f| symbol(f, "field")).collect::<EResult<Vec<_>>>()?;
                let (w, readers) = defstobj_expand(&symbol(name, "name")?, &fields, &self.world).map_err(|e| e.to_string())?;
                self.world = w;
                self.registry.register(Arc::new(NthUpdateNth), readers);
            }
            "DEFMETA" => {
                only_keys(&kw, &[":TRIGGER-FNS"])?;
                arity(args, 1, "(defmeta name :trigger-fns (fns))")?;
                let name = symbol(&args[0], "metafunction name")?;
                let mf = builtin(name.name()).ok_or_else(|| format!("no metafunction named {name}"))?;
                let triggers = match keyword(&kw, ":TRIGGER-FNS") {
                    Some(v) => symbols(v, "function")?,
                    None => Vec::new(),
                };
                self.registry.register(mf, triggers);
            }
            "DEFCONTEXT" => {
                only_keys(&kw, &[])?;
                let (name, rest) = match args.len() {
                    3 => (Sym::new(&format!("CONTEXT-RULE-{}", self.context_rules.len() + 1)), args),
                    4 => (symbol(&args[0], "name")?, &args[1..]),
                    _ => return Err("expected (defcontext [name] (hyps) lhs rhs)".into()),
                };
                let lhs = self.checked(term(&rest[1])?)?;
                let rhs = self.checked(term(&rest[2])?)?;
                let rule = ContextRule::new(name.clone(), terms(&rest[0])?, lhs, rhs).map_err(|e| e.to_string())?;
                self.world = self.world.add_defthm(name, rule.formula()).map_err(|e| e.to_string())?;
                self.context_rules.push(rule);
            }
            "SIMPLIFY" | "CONTEXT-SIMPLIFY" | "REWRITE" => {
                let kind: &'static str = match head.name() {
                    "SIMPLIFY" => "SIMPLIFY",
                    "CONTEXT-SIMPLIFY" => "CONTEXT-SIMPLIFY",
                    _ => "REWRITE",
                };
                only_keys(&kw, if kind == "REWRITE" { &[":HYPS", ":EQUIV"] } else { &[":HYPS"] })?;
                arity(args, 1, "a single term")?;
                let input = self.checked(term(&args[0])?)?;
                let hyps = self.hyps(&kw)?;
                let equiv = match keyword(&kw, ":EQUIV") {
                    Some(v) => v.as_symbol().and_then(Equiv::from_symbol).ok_or_else(|| format!("unknown equivalence {v}"))?,
                    None => Equiv::Equal,
                };
                let ctx = self.context(hyps.clone());
                let before = self.ledger.len();
                let mfc = Mfc::new(&ctx, &self.ledger);
                let output = match kind {
                    "SIMPLIFY" => simplify(&input, &mfc, &self.registry),
                    "CONTEXT-SIMPLIFY" => context_simplify(&input, &self.context_rules, &mfc),
                    _ => mfc.rw(&input, &Value::sym("?"), equiv),
                };
                let obligations = self.ledger.len() - before;
                self.outcomes.push(Outcome::Simplified { kind, input, output, hyps, equiv, obligations });
            }
            "PROVE-BOUNDS" => {
                only_keys(&kw, &[":HYPS"])?;
                arity(args, 2, "(prove-bounds goal (hints))")?;
                let goal = self.checked(term(&args[0])?)?;
                let mut hints = Vec::new();
                for h in terms(&args[1])? {
                    hints.extend(BoundHint::parse(&h).ok_or_else(|| format!("hint {h} is not an inequality"))?);
                }
                let hyps = self.hyps(&kw)?;
                let ctx = self.context(hyps.clone());
                let mfc = Mfc::new(&ctx, &self.ledger);
                let result = prove_bounds(&goal, &hints, &mfc).map_err(|e| e.to_string())?;
                self.outcomes.push(Outcome::Bounds { goal, hyps, result });
            }
            "META-EXTRACT" => {
                only_keys(&kw, &[":HYPS"])?;
                arity(args, 1, "(meta-extract obj)")?;
                let obj = FactObj::parse(&args[0]);
                let hyps = self.hyps(&kw)?;
                let (fact, kind) = if obj.is_contextual() {
                    (meta_extract_contextual_fact(&obj, &self.context(hyps.clone())), ObligationKind::Contextual)
                } else {
                    (meta_extract_global_fact(&obj, &self.world), ObligationKind::Global)
                };
                let ctx_snapshot = if kind == ObligationKind::Contextual { hyps } else { Vec::new() };
                self.ledger.record(Obligation { obj: obj.clone(), fact: fact.clone(), kind, ctx_snapshot });
                self.outcomes.push(Outcome::Fact { obj, fact });
            }
            other => return Err(format!("unknown event {other}")),
        }
        Ok(())
    }
}

/// Body given to a stub: opaque to the rewriter, but evaluable.
pub fn stub_body(name: &Sym, formals: &[Sym]) -> Term {
    let tag = Term::Quote(Value::Symbol(name.clone()));
    match formals.first() {
        Some(x) => Term::app(
            "IF",
            vec![
                Term::app("CONSP", vec![Term::Var(x.clone())]),
                Term::app("CAR", vec![Term::Var(x.clone())]),
                tag,
            ],
        ),
        None => tag,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sexp::{parse_term, read_forms};

    fn run(text: &str) -> Session {
        let mut s = Session::new();
        for f in read_forms(text).unwrap() {
            s.event(&f.value).unwrap();
        }
        s
    }

    #[test]
    fn nth_symbolp_scenario() {
        let s = run("(defstub foo (x))
                     (defmeta nth-symbolp-metafn :trigger-fns (nth))
                     (simplify (nth (foo x) y) :hyps ((symbolp (foo x))))");
        match &s.outcomes[0] {
            Outcome::Simplified { output, obligations, .. } => {
                assert_eq!(output, &parse_term("(car y)").unwrap());
                assert_eq!(*obligations, 1);
            }
            o => panic!("unexpected {o}"),
        }
    }

    #[test]
    fn errors_name_the_event() {
        let mut s = Session::new();
        let forms = read_forms("(defun atom (x) (not (consp x))) (defun atom (x) x)").unwrap();
        s.event(&forms[0].value).unwrap();
        let e = s.event(&forms[1].value).unwrap_err();
        assert_eq!(e.index, 1);
        assert_eq!(e.head, "DEFUN");
        assert!(e.to_string().contains("already defined"));
        assert!(s.event(&read_forms("(frobnicate)").unwrap()[0].value).is_err());
        assert!(s.event(&read_forms("(simplify (undefined-fn x))").unwrap()[0].value).is_err());
    }

    #[test]
    fn stub_bodies() {
        assert_eq!(stub_body(&"FOO".into(), &["X".into()]), parse_term("(if (consp x) (car x) 'foo)").unwrap());
        assert_eq!(stub_body(&"K".into(), &[]), parse_term("'k").unwrap());
    }
}
