//! The logical world: definitions, theorems and indexed rewrite rules.
//!
//! A [`World`] is a persistent value. Every `add_*` returns a new world and
//! leaves existing handles untouched; the maps are shared behind `Arc`s and
//! copied on write.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::eval::primitive_arity;
use crate::term::{Sym, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WorldError {
    #[error("{0} is already defined")]
    DuplicateName(Sym),
    #[error("{0} is a primitive and cannot be redefined")]
    Primitive(Sym),
    #[error("duplicate formal {formal} in definition of {name}")]
    DuplicateFormal { name: Sym, formal: Sym },
    #[error("{0} cannot be used as a variable")]
    IllegalVariable(Sym),
    #[error("variable {var} is free in {context} but not bound by {binder}")]
    FreeVariable { var: Sym, context: &'static str, binder: &'static str },
    #[error("the left-hand side of rule {0} must be a function application")]
    LhsNotApplication(Sym),
    #[error("unknown function {0}")]
    UnknownFunction(Sym),
    #[error("{name} expects {expected} argument(s), got {got}")]
    Arity { name: Sym, expected: usize, got: usize },
}

/// `(defun name formals body)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Definition {
    pub name: Sym,
    pub formals: Vec<Sym>,
    pub body: Term,
}

/// Equivalence relation of a rewrite rule or rewrite request.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Equiv {
    Equal,
    Iff,
}

impl Equiv {
    pub fn symbol(self) -> &'static str {
        match self {
            Equiv::Equal => "EQUAL",
            Equiv::Iff => "IFF",
        }
    }

    /// Reads EQUAL/IFF, plus the NIL/T shorthands.
    pub fn from_symbol(s: &Sym) -> Option<Equiv> {
        match s.name() {
            "EQUAL" | "NIL" => Some(Equiv::Equal),
            "IFF" | "T" => Some(Equiv::Iff),
            _ => None,
        }
    }
}

impl fmt::Display for Equiv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A conditional rewrite rule, stored by the head symbol of its left-hand side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub name: Sym,
    pub hyps: Vec<Term>,
    pub equiv: Equiv,
    pub lhs: Term,
    pub rhs: Term,
    pub backchain_limit: Option<usize>,
}

impl RewriteRule {
    pub fn head(&self) -> Option<&Sym> {
        self.lhs.as_app().map(|(f, _)| f)
    }
}

/// Conjunction of `hyps` in IF form; `'T` for no hypotheses.
pub fn conjoin(hyps: &[Term]) -> Term {
    match hyps.split_last() {
        None => Term::t(),
        Some((last, init)) => init
            .iter()
            .rev()
            .fold(last.clone(), |acc, h| Term::app("IF", vec![h.clone(), acc, Term::nil()])),
    }
}

/// `(implies hyps (equiv lhs rhs))`, or just the equivalence when there are no hyps.
pub fn rewrite_rule_term(r: &RewriteRule) -> Term {
    let concl = Term::app(r.equiv.symbol(), vec![r.lhs.clone(), r.rhs.clone()]);
    if r.hyps.is_empty() {
        concl
    } else {
        Term::app("IMPLIES", vec![conjoin(&r.hyps), concl])
    }
}

#[derive(Clone, Default)]
pub struct World {
    definitions: Arc<BTreeMap<Sym, Definition>>,
    theorems: Arc<BTreeMap<Sym, Term>>,
    lemmas: Arc<BTreeMap<Sym, Vec<RewriteRule>>>,
}

impl PartialEq for World {
    fn eq(&self, other: &Self) -> bool {
        let same = |a: bool, b: bool| a || b;
        same(Arc::ptr_eq(&self.definitions, &other.definitions), self.definitions == other.definitions)
            && same(Arc::ptr_eq(&self.theorems, &other.theorems), self.theorems == other.theorems)
            && same(Arc::ptr_eq(&self.lemmas, &other.lemmas), self.lemmas == other.lemmas)
    }
}

impl Eq for World {}

impl fmt::Debug for World {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("World")
            .field("definitions", &self.definitions.len())
            .field("theorems", &self.theorems.len())
            .field("rules", &self.lemmas.values().map(Vec::len).sum::<usize>())
            .finish()
    }
}

fn check_variable(v: &Sym) -> Result<(), WorldError> {
    if v.is("T") || v.is("NIL") || v.is_keyword() {
        Err(WorldError::IllegalVariable(v.clone()))
    } else {
        Ok(())
    }
}

impl World {
    pub fn new() -> Self {
        World::default()
    }

    pub fn definition(&self, name: &Sym) -> Option<&Definition> {
        self.definitions.get(name)
    }

    pub fn definitions(&self) -> impl Iterator<Item = &Definition> {
        self.definitions.values()
    }

    pub fn theorem(&self, name: &Sym) -> Option<&Term> {
        self.theorems.get(name)
    }

    pub fn theorems(&self) -> impl Iterator<Item = (&Sym, &Term)> {
        self.theorems.iter()
    }

    /// Rules indexed under `f`, in insertion order.
    pub fn rules_for(&self, f: &Sym) -> &[RewriteRule] {
        self.lemmas.get(f).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn rules(&self) -> impl Iterator<Item = &RewriteRule> {
        self.lemmas.values().flatten()
    }

    /// Arity of a primitive or defined function.
    pub fn arity(&self, f: &Sym) -> Option<usize> {
        primitive_arity(f.name()).or_else(|| self.definitions.get(f).map(|d| d.formals.len()))
    }

    fn name_taken(&self, name: &Sym) -> bool {
        self.definitions.contains_key(name) || self.theorems.contains_key(name)
    }

    /// Every application names a known function with the right arity.
    /// `pending` covers a function that is being defined (recursion).
    pub fn check_term(&self, t: &Term, pending: Option<(&Sym, usize)>) -> Result<(), WorldError> {
        match t {
            Term::Var(v) => check_variable(v),
            Term::Quote(_) => Ok(()),
            Term::App(f, args) => {
                let expected = match pending {
                    Some((name, n)) if name == f => Some(n),
                    _ => self.arity(f),
                }
                .ok_or_else(|| WorldError::UnknownFunction(f.clone()))?;
                if expected != args.len() {
                    return Err(WorldError::Arity { name: f.clone(), expected, got: args.len() });
                }
                args.iter().try_for_each(|a| self.check_term(a, pending))
            }
        }
    }

    pub fn add_defun(&self, name: Sym, formals: Vec<Sym>, body: Term) -> Result<World, WorldError> {
        if primitive_arity(name.name()).is_some() {
            return Err(WorldError::Primitive(name));
        }
        if self.name_taken(&name) {
            return Err(WorldError::DuplicateName(name));
        }
        for (i, f) in formals.iter().enumerate() {
            check_variable(f)?;
            if formals[..i].contains(f) {
                return Err(WorldError::DuplicateFormal { name, formal: f.clone() });
            }
        }
        self.check_term(&body, Some((&name, formals.len())))?;
        if let Some(v) = body.free_vars().into_iter().find(|v| !formals.contains(v)) {
            return Err(WorldError::FreeVariable { var: v, context: "body", binder: "the formals" });
        }
        let mut w = self.clone();
        Arc::make_mut(&mut w.definitions).insert(name.clone(), Definition { name, formals, body });
        Ok(w)
    }

    pub fn add_defthm(&self, name: Sym, formula: Term) -> Result<World, WorldError> {
        if self.name_taken(&name) || primitive_arity(name.name()).is_some() {
            return Err(WorldError::DuplicateName(name));
        }
        self.check_term(&formula, None)?;
        let mut w = self.clone();
        Arc::make_mut(&mut w.theorems).insert(name, formula);
        Ok(w)
    }

    pub fn add_rewrite_rule(&self, rule: RewriteRule) -> Result<World, WorldError> {
        let head = match &rule.lhs {
            Term::App(f, _) => f.clone(),
            _ => return Err(WorldError::LhsNotApplication(rule.name)),
        };
        if self.rules().any(|r| r.name == rule.name) {
            return Err(WorldError::DuplicateName(rule.name));
        }
        self.check_term(&rule.lhs, None)?;
        self.check_term(&rule.rhs, None)?;
        for h in &rule.hyps {
            self.check_term(h, None)?;
        }
        let bound = rule.lhs.free_vars();
        if let Some(v) = rule.rhs.free_vars().into_iter().find(|v| !bound.contains(v)) {
            return Err(WorldError::FreeVariable { var: v, context: "rhs", binder: "the lhs" });
        }
        for h in &rule.hyps {
            if let Some(v) = h.free_vars().into_iter().find(|v| !bound.contains(v)) {
                return Err(WorldError::FreeVariable { var: v, context: "hypothesis", binder: "the lhs" });
            }
        }
        let mut w = self.clone();
        Arc::make_mut(&mut w.lemmas).entry(head).or_default().push(rule);
        Ok(w)
    }

    /// Definitional equation of a defined function, body of a theorem, or `'T`.
    pub fn meta_extract_formula(&self, name: &Sym) -> Term {
        if let Some(d) = self.definitions.get(name) {
            let call = Term::App(name.clone(), d.formals.iter().cloned().map(Term::Var).collect());
            Term::equal(call, d.body.clone())
        } else if let Some(t) = self.theorems.get(name) {
            t.clone()
        } else {
            Term::t()
        }
    }

    /// The `n`th rule stored for `f` as a term; `'T` when out of range.
    pub fn nth_lemma(&self, f: &Sym, n: usize) -> Term {
        self.rules_for(f).get(n).map(rewrite_rule_term).unwrap_or_else(Term::t)
    }

    /// Formals as read off the stored definitional equation.
    pub fn formals(&self, f: &Sym) -> Result<Vec<Sym>, WorldError> {
        formals_of_formula(&self.meta_extract_formula(f)).ok_or_else(|| WorldError::UnknownFunction(f.clone()))
    }
}

/// `(cdr (cadr formula))` for a formula of shape `(EQUAL (f v1 .. vn) body)`.
pub fn formals_of_formula(formula: &Term) -> Option<Vec<Sym>> {
    let [call, _] = formula.as_call("EQUAL", 2)? else { return None };
    let (_, args) = call.as_app()?;
    args.iter()
        .map(|a| match a {
            Term::Var(v) => Some(v.clone()),
            _ => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sexp::parse_term;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn with_atom() -> World {
        World::new().add_defun("ATOM".into(), vec!["X".into()], t("(not (consp x))")).unwrap()
    }

    fn car_of_cons() -> RewriteRule {
        RewriteRule {
            name: "CAR-CONS".into(),
            hyps: vec![],
            equiv: Equiv::Equal,
            lhs: t("(car (cons x y))"),
            rhs: t("x"),
            backchain_limit: None,
        }
    }

    #[test]
    fn formula_of_definition() {
        let w = with_atom();
        assert_eq!(w.meta_extract_formula(&"ATOM".into()).to_string(), "(EQUAL (ATOM X) (NOT (CONSP X)))");
        assert_eq!(w.meta_extract_formula(&"FROB".into()), Term::t());
        assert_eq!(w.formals(&"ATOM".into()).unwrap(), vec![Sym::new("X")]);
        assert!(w.formals(&"FROB".into()).is_err());
    }

    #[test]
    fn rule_terms_and_lookup() {
        let w = World::new().add_rewrite_rule(car_of_cons()).unwrap();
        assert_eq!(w.nth_lemma(&"CAR".into(), 0).to_string(), "(EQUAL (CAR (CONS X Y)) X)");
        assert_eq!(w.nth_lemma(&"CAR".into(), 7), Term::t());
        assert_eq!(w.nth_lemma(&"UNDEFINED-FN".into(), 0), Term::t());

        let mut r = car_of_cons();
        r.hyps = vec![t("(consp x)")];
        assert_eq!(rewrite_rule_term(&r).to_string(), "(IMPLIES (CONSP X) (EQUAL (CAR (CONS X Y)) X))");
        r.hyps.push(t("(symbolp y)"));
        assert_eq!(
            rewrite_rule_term(&r).to_string(),
            "(IMPLIES (IF (CONSP X) (SYMBOLP Y) 'NIL) (EQUAL (CAR (CONS X Y)) X))"
        );
    }

    #[test]
    fn rejects_bad_events() {
        let w = with_atom();
        assert_eq!(
            w.add_defun("ATOM".into(), vec!["X".into()], t("x")).unwrap_err(),
            WorldError::DuplicateName("ATOM".into())
        );
        let mut r = car_of_cons();
        r.rhs = t("z");
        assert!(matches!(World::new().add_rewrite_rule(r).unwrap_err(), WorldError::FreeVariable { .. }));
        let mut r = car_of_cons();
        r.lhs = t("x");
        assert!(matches!(World::new().add_rewrite_rule(r).unwrap_err(), WorldError::LhsNotApplication(_)));
        assert!(World::new().add_defun("F".into(), vec!["X".into()], t("(car x y)")).is_err());
        assert!(World::new().add_defun("F".into(), vec!["X".into()], t("(g x)")).is_err());
        assert!(World::new().add_defun("CAR".into(), vec!["X".into()], t("x")).is_err());
        assert!(World::new().add_defun("F".into(), vec!["X".into(), "X".into()], t("x")).is_err());
    }

    #[test]
    fn worlds_are_persistent() {
        let w0 = World::new();
        let w1 = w0.add_defun("ATOM".into(), vec!["X".into()], t("(not (consp x))")).unwrap();
        assert_eq!(w0.meta_extract_formula(&"ATOM".into()), Term::t());
        assert_ne!(w0, w1);
        assert_eq!(w1, with_atom());
    }

    #[test]
    fn recursive_definitions_are_accepted() {
        let w = World::new()
            .add_defun("CNT".into(), vec!["X".into()], t("(if (consp x) (+ 1 (cnt (cdr x))) 0)"))
            .unwrap();
        assert_eq!(w.arity(&"CNT".into()), Some(1));
    }
}
