//! Total evaluator for terms over a world.
//!
//! Primitives use completion semantics: `car`/`cdr` of a non-cons is NIL,
//! arithmetic reads non-numbers as 0, `nth` reads a non-natural index as 0.
//! Defined functions are interpreted through their stored bodies.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::term::{Sym, Term, Value};
use crate::typeset::TypeSet;
use crate::world::World;

pub const DEFAULT_FUEL: u64 = 100_000;

/// Nesting limit for defined-function calls; keeps the interpreter off the
/// end of the native stack long before fuel would run out.
pub const MAX_CALL_DEPTH: usize = 512;

/// Largest shift or field width the bit primitives will materialize.
const MAX_SHIFT: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("evaluation fuel exhausted")]
    FuelExhausted,
    #[error("call depth limit of {MAX_CALL_DEPTH} exceeded")]
    DepthExceeded,
    #[error("unknown function {0}")]
    UnknownFunction(Sym),
    #[error("{name} expects {expected} argument(s), got {got}")]
    Arity { name: Sym, expected: usize, got: usize },
    #[error("{0}")]
    ResourceLimit(String),
}

/// The fixed primitive signature.
pub const PRIMITIVES: &[(&str, usize)] = &[
    ("IF", 3),
    ("EQUAL", 2),
    ("NOT", 1),
    ("IFF", 2),
    ("IMPLIES", 2),
    ("CONS", 2),
    ("CAR", 1),
    ("CDR", 1),
    ("CONSP", 1),
    ("SYMBOLP", 1),
    ("RATIONALP", 1),
    ("INTEGERP", 1),
    ("NTH", 2),
    ("UPDATE-NTH", 3),
    ("LEN", 1),
    ("ACONS", 3),
    ("BINARY-+", 2),
    ("BINARY-*", 2),
    ("UNARY--", 1),
    ("UNARY-/", 1),
    ("<", 2),
    ("NFIX", 1),
    ("ASH", 2),
    ("LOGAND", 2),
    ("LOGIOR", 2),
    ("LOGBITP", 2),
    ("LOGAPP", 3),
    ("LOGTAIL", 2),
    ("TYPESPEC-CHECK", 2),
];

pub fn primitive_arity(name: &str) -> Option<usize> {
    PRIMITIVES.iter().find(|(n, _)| *n == name).map(|&(_, a)| a)
}

pub fn is_primitive(f: &Sym) -> bool {
    primitive_arity(f.name()).is_some()
}

/// Variable bindings; the first binding of a name wins.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Env(Vec<(Sym, Value)>);

impl Env {
    pub fn new() -> Self {
        Env(Vec::new())
    }

    pub fn lookup(&self, v: &Sym) -> Option<&Value> {
        self.0.iter().find(|(k, _)| k == v).map(|(_, x)| x)
    }

    /// Adds a binding at the end, where it is shadowed by earlier ones.
    pub fn push(&mut self, v: Sym, x: Value) {
        self.0.push((v, x));
    }

    pub fn bindings(&self) -> &[(Sym, Value)] {
        &self.0
    }

    /// `self` followed by `other`, so `self` wins on shared names.
    pub fn append(&self, other: &Env) -> Env {
        Env(self.0.iter().chain(other.0.iter()).cloned().collect())
    }

    /// The environment as an association-list value.
    pub fn to_value(&self) -> Value {
        Value::list(
            self.0
                .iter()
                .map(|(k, v)| Value::cons(Value::Symbol(k.clone()), v.clone()))
                .collect::<Vec<_>>(),
        )
    }
}

impl FromIterator<(Sym, Value)> for Env {
    fn from_iter<I: IntoIterator<Item = (Sym, Value)>>(iter: I) -> Self {
        Env(iter.into_iter().collect())
    }
}

fn shift_amount(n: &BigInt) -> Result<u64, EvalError> {
    match n.to_u64() {
        Some(k) if k <= MAX_SHIFT => Ok(k),
        _ => Err(EvalError::ResourceLimit(format!("shift of {n} bits is too large"))),
    }
}

/// floor(i / 2^k) for any natural k.
fn floor_shift_right(i: &BigInt, k: &BigInt) -> BigInt {
    match k.to_u64() {
        Some(k) if k <= MAX_SHIFT => i >> k,
        _ => {
            if i.is_negative() {
                -BigInt::one()
            } else {
                BigInt::zero()
            }
        }
    }
}

fn nth(n: &Value, l: &Value) -> Value {
    let Some(mut k) = n.nfix().to_usize() else { return Value::nil() };
    let mut cur = l;
    loop {
        match cur.as_cons() {
            None => return Value::nil(),
            Some((a, d)) => {
                if k == 0 {
                    return a.clone();
                }
                k -= 1;
                cur = d;
            }
        }
    }
}

fn update_nth(n: &Value, v: &Value, l: &Value) -> Result<Value, EvalError> {
    let k = match n.nfix().to_usize() {
        Some(k) if k <= MAX_SHIFT as usize => k,
        _ => return Err(EvalError::ResourceLimit(format!("update-nth index {n} is too large"))),
    };
    let mut prefix = Vec::with_capacity(k);
    let mut cur = l.clone();
    for _ in 0..k {
        prefix.push(cur.car());
        cur = cur.cdr();
    }
    let tail = Value::cons(v.clone(), cur.cdr());
    Ok(prefix.into_iter().rev().fold(tail, |acc, x| Value::cons(x, acc)))
}

/// Applies a primitive to evaluated arguments. `None` if `f` is not a
/// primitive or the argument count is wrong.
pub fn apply_primitive(f: &str, args: &[Value]) -> Option<Result<Value, EvalError>> {
    if primitive_arity(f)? != args.len() {
        return None;
    }
    let v = match (f, args) {
        ("IF", [c, a, b]) => Ok(if c.truthy() { a.clone() } else { b.clone() }),
        ("EQUAL", [a, b]) => Ok(Value::bool(a == b)),
        ("NOT", [a]) => Ok(Value::bool(a.is_nil())),
        ("IFF", [a, b]) => Ok(Value::bool(a.truthy() == b.truthy())),
        ("IMPLIES", [a, b]) => Ok(Value::bool(a.is_nil() || b.truthy())),
        ("CONS", [a, b]) => Ok(Value::cons(a.clone(), b.clone())),
        ("CAR", [a]) => Ok(a.car()),
        ("CDR", [a]) => Ok(a.cdr()),
        ("CONSP", [a]) => Ok(Value::bool(a.is_cons())),
        ("SYMBOLP", [a]) => Ok(Value::bool(matches!(a, Value::Symbol(_)))),
        ("RATIONALP", [a]) => Ok(Value::bool(a.as_rational().is_some())),
        ("INTEGERP", [a]) => Ok(Value::bool(a.as_integer().is_some())),
        ("NTH", [n, l]) => Ok(nth(n, l)),
        ("UPDATE-NTH", [n, v, l]) => update_nth(n, v, l),
        ("LEN", [a]) => Ok(Value::int(a.len())),
        ("ACONS", [k, v, a]) => Ok(Value::cons(Value::cons(k.clone(), v.clone()), a.clone())),
        ("BINARY-+", [a, b]) => Ok(Value::rational(a.rfix() + b.rfix())),
        ("BINARY-*", [a, b]) => Ok(Value::rational(a.rfix() * b.rfix())),
        ("UNARY--", [a]) => Ok(Value::rational(-a.rfix())),
        ("UNARY-/", [a]) => {
            let r = a.rfix();
            Ok(if r.is_zero() { Value::int(0) } else { Value::rational(r.recip()) })
        }
        ("<", [a, b]) => Ok(Value::bool(a.rfix() < b.rfix())),
        ("NFIX", [a]) => Ok(Value::Integer(a.nfix())),
        ("ASH", [i, c]) => {
            let (i, c) = (i.ifix(), c.ifix());
            if c.is_negative() {
                Ok(Value::Integer(floor_shift_right(&i, &-c)))
            } else if i.is_zero() {
                Ok(Value::int(0))
            } else {
                shift_amount(&c).map(|k| Value::Integer(i << k))
            }
        }
        ("LOGAND", [a, b]) => Ok(Value::Integer(a.ifix() & b.ifix())),
        ("LOGIOR", [a, b]) => Ok(Value::Integer(a.ifix() | b.ifix())),
        ("LOGBITP", [i, j]) => {
            let (i, j) = (i.nfix(), j.ifix());
            Ok(Value::bool(match i.to_u64() {
                Some(k) => j.bit(k),
                None => j.is_negative(),
            }))
        }
        ("LOGAPP", [size, i, j]) => {
            let size = size.nfix();
            let (i, j) = (i.ifix(), j.ifix());
            shift_amount(&size).map(|k| {
                let modulus = BigInt::one() << k;
                Value::Integer(i.mod_floor(&modulus) + j * modulus)
            })
        }
        ("LOGTAIL", [pos, i]) => Ok(Value::Integer(floor_shift_right(&i.ifix(), &pos.nfix()))),
        ("TYPESPEC-CHECK", [ts, x]) => Ok(Value::bool(TypeSet::from_value_lenient(ts).check(x))),
        _ => return None,
    };
    Some(v)
}

/// Interpreter state for one top-level evaluation.
pub struct Evaluator<'w> {
    world: &'w World,
    fuel: u64,
    depth: usize,
}

impl<'w> Evaluator<'w> {
    pub fn new(world: &'w World, fuel: u64) -> Self {
        Evaluator { world, fuel, depth: 0 }
    }

    pub fn remaining_fuel(&self) -> u64 {
        self.fuel
    }

    pub fn eval(&mut self, t: &Term, env: &Env) -> Result<Value, EvalError> {
        match t {
            Term::Var(v) => Ok(env.lookup(v).cloned().unwrap_or_else(Value::nil)),
            Term::Quote(v) => Ok(v.clone()),
            Term::App(f, args) => {
                if self.fuel == 0 {
                    return Err(EvalError::FuelExhausted);
                }
                self.fuel -= 1;
                if f.is("IF") && args.len() == 3 {
                    let c = self.eval(&args[0], env)?;
                    return self.eval(if c.truthy() { &args[1] } else { &args[2] }, env);
                }
                let vals = args.iter().map(|a| self.eval(a, env)).collect::<Result<Vec<_>, _>>()?;
                self.apply(f, vals)
            }
        }
    }

    pub fn apply(&mut self, f: &Sym, vals: Vec<Value>) -> Result<Value, EvalError> {
        if let Some(expected) = primitive_arity(f.name()) {
            return apply_primitive(f.name(), &vals).unwrap_or_else(|| {
                Err(EvalError::Arity { name: f.clone(), expected, got: vals.len() })
            });
        }
        let world = self.world;
        let def = world.definition(f).ok_or_else(|| EvalError::UnknownFunction(f.clone()))?;
        if def.formals.len() != vals.len() {
            return Err(EvalError::Arity { name: f.clone(), expected: def.formals.len(), got: vals.len() });
        }
        if self.depth >= MAX_CALL_DEPTH {
            return Err(EvalError::DepthExceeded);
        }
        let env: Env = def.formals.iter().cloned().zip(vals).collect();
        self.depth += 1;
        let r = self.eval(&def.body, &env);
        self.depth -= 1;
        r
    }
}

pub fn eval(t: &Term, env: &Env, w: &World) -> Result<Value, EvalError> {
    Evaluator::new(w, DEFAULT_FUEL).eval(t, env)
}

pub fn eval_with_fuel(t: &Term, env: &Env, w: &World, fuel: u64) -> Result<Value, EvalError> {
    Evaluator::new(w, fuel).eval(t, env)
}

/// Value of `(f 'a1 .. 'an)`, or `None` when `f` is unknown, the arity is
/// wrong, or evaluation runs out of resources.
pub fn magic_ev_fncall(f: &Sym, args: &[Value], w: &World) -> Option<Value> {
    if f.is("QUOTE") || w.arity(f)? != args.len() {
        return None;
    }
    let call = Term::App(f.clone(), args.iter().cloned().map(Term::Quote).collect());
    eval(&call, &Env::new(), w).ok()
}

/// Substitutes `alist` into `t`, folding every primitive call whose
/// arguments all end up quoted. Unbound variables are left alone.
pub fn sublis_var(alist: &[(Sym, Term)], t: &Term) -> Term {
    match t {
        Term::Var(v) => alist
            .iter()
            .find(|(k, _)| k == v)
            .map(|(_, x)| x.clone())
            .unwrap_or_else(|| t.clone()),
        Term::Quote(_) => t.clone(),
        Term::App(f, args) => {
            let args: Vec<Term> = args.iter().map(|a| sublis_var(alist, a)).collect();
            fold_ground(Term::App(f.clone(), args))
        }
    }
}

/// Folds `t` itself (not its arguments) if it is a primitive call on constants.
pub fn fold_ground(t: Term) -> Term {
    if let Term::App(f, args) = &t {
        if is_primitive(f) && args.iter().all(Term::is_quote) {
            let vals: Vec<Value> = args.iter().filter_map(|a| a.as_quote().cloned()).collect();
            if let Some(Ok(v)) = apply_primitive(f.name(), &vals) {
                return Term::Quote(v);
            }
        }
    }
    t
}

/// Evaluates each right-hand side of `alist` in `env`.
pub fn eval_alist(alist: &[(Sym, Term)], env: &Env, w: &World) -> Result<Env, EvalError> {
    alist
        .iter()
        .map(|(k, t)| eval(t, env, w).map(|v| (k.clone(), v)))
        .collect()
}

/// Exact rational helper shared by tests and generators.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sexp::{parse_term, parse_value};

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn ev(s: &str) -> Value {
        eval(&t(s), &Env::new(), &World::new()).unwrap()
    }

    fn env(pairs: &[(&str, &str)]) -> Env {
        pairs.iter().map(|(k, v)| (Sym::new(k), parse_value(v).unwrap())).collect()
    }

    #[test]
    fn list_primitives() {
        assert_eq!(ev("(car '(a b))"), Value::sym("A"));
        assert_eq!(ev("(car '5)"), Value::nil());
        assert_eq!(ev("(len '(1 2 3))"), Value::int(3));
        assert_eq!(ev("(nth '1 '(a b c))"), Value::sym("B"));
        assert_eq!(ev("(nth '-1 '(a b c))"), Value::sym("A"));
        assert_eq!(ev("(nth 'x '(a b c))"), Value::sym("A"));
        assert_eq!(ev("(nth '7 '(a b c))"), Value::nil());
        assert_eq!(ev("(update-nth '2 'z '(a))").to_string(), "(A NIL Z)");
        assert_eq!(ev("(update-nth '0 'z '(a b))").to_string(), "(Z B)");
        assert_eq!(ev("(acons 'k 'v 'nil)").to_string(), "((K . V))");
    }

    #[test]
    fn arithmetic_completions() {
        assert_eq!(ev("(binary-+ '1/2 '1/2)"), Value::int(1));
        assert_eq!(ev("(binary-+ 'a '3)"), Value::int(3));
        assert_eq!(ev("(unary-/ '0)"), Value::int(0));
        assert_eq!(ev("(unary-/ '-2/3)").to_string(), "-3/2");
        assert_eq!(ev("(< 'a '1)"), Value::t());
        assert_eq!(ev("(nfix '-4)"), Value::int(0));
        assert_eq!(ev("(nfix '1/2)"), Value::int(0));
    }

    #[test]
    fn bit_primitives() {
        assert_eq!(ev("(logtail '6 '16)"), Value::int(0));
        assert_eq!(ev("(logtail '2 '-5)"), Value::int(-2));
        assert_eq!(ev("(ash '1 '4)"), Value::int(16));
        assert_eq!(ev("(ash '-5 '-1)"), Value::int(-3));
        assert_eq!(ev("(logand '-1 '12)"), Value::int(12));
        assert_eq!(ev("(logand '-4 '7)"), Value::int(4));
        assert_eq!(ev("(logior '-8 '3)"), Value::int(-5));
        assert_eq!(ev("(logbitp '4 '16)"), Value::t());
        assert_eq!(ev("(logbitp '100 '-1)"), Value::t());
        assert_eq!(ev("(logapp '6 '100 '2)"), Value::int(36 + 128));
        assert_eq!(ev("(logapp '2 '-1 '0)"), Value::int(3));
    }

    #[test]
    fn defined_functions_use_their_bodies() {
        let w = World::new().add_defun("ATOM".into(), vec!["X".into()], t("(not (consp x))")).unwrap();
        assert_eq!(eval(&t("(atom x)"), &env(&[("X", "(1 . 2)")]), &w).unwrap(), Value::nil());
        assert_eq!(eval(&t("(atom x)"), &Env::new(), &w).unwrap(), Value::t());
        let formula = w.meta_extract_formula(&"ATOM".into());
        assert!(eval(&formula, &env(&[("X", "5")]), &w).unwrap().truthy());
    }

    #[test]
    fn fuel_and_depth_are_errors() {
        let w = World::new().add_defun("LOOP".into(), vec!["X".into()], t("(loop x)")).unwrap();
        let e = eval(&t("(loop '1)"), &Env::new(), &w).unwrap_err();
        assert!(matches!(e, EvalError::DepthExceeded | EvalError::FuelExhausted));
        assert_eq!(eval(&t("(if 't '1 (loop '1))"), &Env::new(), &w).unwrap(), Value::int(1));
        let w = World::new()
            .add_defun("SPIN".into(), vec!["N".into()], t("(if (< '0 n) (binary-+ (spin (+ n -1)) (spin (+ n -1))) '0)"))
            .unwrap();
        assert_eq!(eval(&t("(spin '40)"), &Env::new(), &w).unwrap_err(), EvalError::FuelExhausted);
        assert_eq!(eval(&t("(frob '1)"), &Env::new(), &w).unwrap_err(), EvalError::UnknownFunction("FROB".into()));
    }

    #[test]
    fn magic_ev_fncall_cases() {
        let w = World::new();
        let l = parse_value("(1 2 3)").unwrap();
        assert_eq!(magic_ev_fncall(&"LEN".into(), &[l], &w), Some(Value::int(3)));
        assert_eq!(magic_ev_fncall(&"UNDEFINED-FN".into(), &[Value::int(1)], &w), None);
        assert_eq!(magic_ev_fncall(&"LOGTAIL".into(), &[Value::int(6), Value::int(16)], &w), Some(Value::int(0)));
        assert_eq!(magic_ev_fncall(&"CAR".into(), &[], &w), None);
    }

    #[test]
    fn sublis_var_folds_ground_primitive_calls() {
        let al = vec![(Sym::new("X"), Term::int(1))];
        assert_eq!(sublis_var(&al, &t("(binary-+ x '2)")), Term::int(3));
        assert_eq!(sublis_var(&[], &t("(car x)")), t("(car x)"));
        assert_eq!(sublis_var(&[], &t("(ash '1 (nfix '4))")), Term::int(16));
        assert_eq!(sublis_var(&al, &t("(f x)")), t("(f '1)"));
    }
}
