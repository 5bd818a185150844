//! Values, terms and the small structural toolkit shared by every other module.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An interned-by-value symbol name. Names coming out of the reader are upper case.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sym(Arc<str>);

impl Sym {
    pub fn new(name: &str) -> Self {
        Sym(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// Symbols whose name starts with ':' act as self-quoting tags.
    pub fn is_keyword(&self) -> bool {
        self.0.starts_with(':')
    }

    pub fn is(&self, name: &str) -> bool {
        &*self.0 == name
    }
}

impl From<&str> for Sym {
    fn from(s: &str) -> Self {
        Sym::new(s)
    }
}

impl fmt::Debug for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Runtime datum.
///
/// `Ratio` is only ever built through [`Value::rational`], which keeps it in
/// lowest terms and demotes whole numbers to `Integer`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Symbol(Sym),
    Integer(BigInt),
    Ratio(BigRational),
    Character(char),
    String(Arc<str>),
    Cons(Arc<(Value, Value)>),
}

impl Value {
    pub fn nil() -> Value {
        Value::Symbol(Sym::new("NIL"))
    }

    pub fn t() -> Value {
        Value::Symbol(Sym::new("T"))
    }

    pub fn bool(b: bool) -> Value {
        if b {
            Value::t()
        } else {
            Value::nil()
        }
    }

    pub fn sym(name: &str) -> Value {
        Value::Symbol(Sym::new(name))
    }

    pub fn int<I: Into<BigInt>>(i: I) -> Value {
        Value::Integer(i.into())
    }

    pub fn string(s: &str) -> Value {
        Value::String(Arc::from(s))
    }

    /// Normalizing constructor: whole numbers become `Integer`.
    pub fn rational(r: BigRational) -> Value {
        if r.denom().is_one() {
            Value::Integer(r.to_integer())
        } else {
            Value::Ratio(r)
        }
    }

    pub fn cons(head: Value, tail: Value) -> Value {
        Value::Cons(Arc::new((head, tail)))
    }

    pub fn list<I>(items: I) -> Value
    where
        I: IntoIterator<Item = Value>,
        I::IntoIter: DoubleEndedIterator,
    {
        items
            .into_iter()
            .rev()
            .fold(Value::nil(), |acc, v| Value::cons(v, acc))
    }

    pub fn is_nil(&self) -> bool {
        matches!(self, Value::Symbol(s) if s.is("NIL"))
    }

    /// Anything other than NIL counts as true.
    pub fn truthy(&self) -> bool {
        !self.is_nil()
    }

    pub fn as_symbol(&self) -> Option<&Sym> {
        match self {
            Value::Symbol(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_cons(&self) -> Option<(&Value, &Value)> {
        match self {
            Value::Cons(c) => Some((&c.0, &c.1)),
            _ => None,
        }
    }

    pub fn is_cons(&self) -> bool {
        matches!(self, Value::Cons(_))
    }

    pub fn car(&self) -> Value {
        self.as_cons().map(|(a, _)| a.clone()).unwrap_or_else(Value::nil)
    }

    pub fn cdr(&self) -> Value {
        self.as_cons().map(|(_, d)| d.clone()).unwrap_or_else(Value::nil)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self {
            Value::Integer(i) => Some(BigRational::from_integer(i.clone())),
            Value::Ratio(r) => Some(r.clone()),
            _ => None,
        }
    }

    pub fn as_integer(&self) -> Option<&BigInt> {
        match self {
            Value::Integer(i) => Some(i),
            _ => None,
        }
    }

    /// Rational value, with every non-number read as 0.
    pub fn rfix(&self) -> BigRational {
        self.as_rational().unwrap_or_else(BigRational::zero)
    }

    /// Integer value, with every non-integer read as 0.
    pub fn ifix(&self) -> BigInt {
        self.as_integer().cloned().unwrap_or_else(BigInt::zero)
    }

    /// Natural-number value, with everything else read as 0.
    pub fn nfix(&self) -> BigInt {
        match self {
            Value::Integer(i) if !i.is_negative() => i.clone(),
            _ => BigInt::zero(),
        }
    }

    /// Small natural, if this is one.
    pub fn as_usize(&self) -> Option<usize> {
        match self {
            Value::Integer(i) if !i.is_negative() => i.to_usize(),
            _ => None,
        }
    }

    /// Elements of a NIL-terminated list; `None` for dotted or non-lists.
    pub fn list_items(&self) -> Option<Vec<Value>> {
        let mut out = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                Value::Cons(c) => {
                    out.push(c.0.clone());
                    cur = &c.1;
                }
                v if v.is_nil() => return Some(out),
                _ => return None,
            }
        }
    }

    /// Number of conses along the cdr chain.
    pub fn len(&self) -> usize {
        let mut n = 0;
        let mut cur = self;
        while let Value::Cons(c) = cur {
            n += 1;
            cur = &c.1;
        }
        n
    }

    /// True for atoms, i.e. when `len` is zero.
    pub fn is_empty(&self) -> bool {
        !self.is_cons()
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Term syntax: variables, quoted constants and function applications.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Sym),
    Quote(Value),
    App(Sym, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Sym::new(name))
    }

    pub fn quote(v: Value) -> Term {
        Term::Quote(v)
    }

    pub fn int<I: Into<BigInt>>(i: I) -> Term {
        Term::Quote(Value::int(i))
    }

    pub fn t() -> Term {
        Term::Quote(Value::t())
    }

    pub fn nil() -> Term {
        Term::Quote(Value::nil())
    }

    pub fn app(f: &str, args: Vec<Term>) -> Term {
        debug_assert!(f != "QUOTE", "QUOTE is not a function symbol");
        Term::App(Sym::new(f), args)
    }

    pub fn app_sym(f: Sym, args: Vec<Term>) -> Term {
        debug_assert!(!f.is("QUOTE"), "QUOTE is not a function symbol");
        Term::App(f, args)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(t: Term) -> Term {
        Term::app("NOT", vec![t])
    }

    pub fn equal(a: Term, b: Term) -> Term {
        Term::app("EQUAL", vec![a, b])
    }

    pub fn is_quote(&self) -> bool {
        matches!(self, Term::Quote(_))
    }

    pub fn as_quote(&self) -> Option<&Value> {
        match self {
            Term::Quote(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_true_const(&self) -> bool {
        matches!(self, Term::Quote(v) if v.truthy())
    }

    pub fn as_app(&self) -> Option<(&Sym, &[Term])> {
        match self {
            Term::App(f, args) => Some((f, args)),
            _ => None,
        }
    }

    /// Matches `(f a1 .. an)` for a specific head and arity.
    pub fn as_call(&self, f: &str, arity: usize) -> Option<&[Term]> {
        match self {
            Term::App(g, args) if g.is(f) && args.len() == arity => Some(args),
            _ => None,
        }
    }

    /// Variables in left-to-right order of first occurrence.
    pub fn free_vars(&self) -> Vec<Sym> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<Sym>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Quote(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Quote(_) => true,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn occurrences(&self, v: &Sym) -> usize {
        match self {
            Term::Var(w) => usize::from(w == v),
            Term::Quote(_) => 0,
            Term::App(_, args) => args.iter().map(|a| a.occurrences(v)).sum(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            _ => 1,
        }
    }

    /// Subterm at an argument-index path.
    pub fn at_path(&self, path: &[usize]) -> Option<&Term> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => match self {
                Term::App(_, args) => args.get(i)?.at_path(rest),
                _ => None,
            },
        }
    }

    /// Copy of `self` with the subterm at `path` replaced.
    pub fn replace_at(&self, path: &[usize], new: Term) -> Option<Term> {
        match path.split_first() {
            None => Some(new),
            Some((&i, rest)) => match self {
                Term::App(f, args) if i < args.len() => {
                    let mut args = args.clone();
                    args[i] = args[i].replace_at(rest, new)?;
                    Some(Term::App(f.clone(), args))
                }
                _ => None,
            },
        }
    }

    /// Plain variable substitution, no folding. First binding wins.
    pub fn substitute(&self, bindings: &[(Sym, Term)]) -> Term {
        match self {
            Term::Var(v) => bindings
                .iter()
                .find(|(k, _)| k == v)
                .map(|(_, t)| t.clone())
                .unwrap_or_else(|| self.clone()),
            Term::Quote(_) => self.clone(),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.substitute(bindings)).collect())
            }
        }
    }

    /// The term written as data, e.g. `(CAR X)` becomes the list `(CAR X)`
    /// and `'3` becomes `(QUOTE 3)`.
    pub fn to_value(&self) -> Value {
        match self {
            Term::Var(v) => Value::Symbol(v.clone()),
            Term::Quote(v) => Value::list([Value::sym("QUOTE"), v.clone()]),
            Term::App(f, args) => Value::cons(
                Value::Symbol(f.clone()),
                Value::list(args.iter().map(Term::to_value).collect::<Vec<_>>()),
            ),
        }
    }

    /// Reads a term back from data. Rejects anything that is not a
    /// well-formed term: bare numbers, T/NIL/keywords as variables,
    /// dotted argument lists, and QUOTE forms of the wrong length.
    pub fn from_value(v: &Value) -> Option<Term> {
        match v {
            Value::Symbol(s) => {
                if s.is("NIL") || s.is("T") || s.is_keyword() {
                    None
                } else {
                    Some(Term::Var(s.clone()))
                }
            }
            Value::Cons(c) => {
                let head = c.0.as_symbol()?;
                let rest = c.1.list_items()?;
                if head.is("QUOTE") {
                    return match rest.as_slice() {
                        [x] => Some(Term::Quote(x.clone())),
                        _ => None,
                    };
                }
                let args = rest.iter().map(Term::from_value).collect::<Option<Vec<_>>>()?;
                Some(Term::App(head.clone(), args))
            }
            _ => None,
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Association list from variables to terms; first binding wins.
pub type Alist = Vec<(Sym, Term)>;

/// Ground-term rational constant helper used by several modules.
pub fn quoted_rational(t: &Term) -> Option<BigRational> {
    t.as_quote().and_then(Value::as_rational)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sexp::parse_term;

    #[test]
    fn free_vars_first_occurrence_order() {
        let t = parse_term("(f x (g x y))").unwrap();
        assert_eq!(t.free_vars(), vec![Sym::new("X"), Sym::new("Y")]);
        let t = parse_term("(nth n x)").unwrap();
        assert_eq!(t.free_vars(), vec![Sym::new("N"), Sym::new("X")]);
        assert!(parse_term("'3").unwrap().free_vars().is_empty());
    }

    #[test]
    fn rational_constructor_normalizes() {
        let half = BigRational::new(BigInt::from(2), BigInt::from(4));
        assert_eq!(Value::rational(half), Value::Ratio(BigRational::new(1.into(), 2.into())));
        let whole = BigRational::new(BigInt::from(6), BigInt::from(3));
        assert_eq!(Value::rational(whole), Value::int(2));
    }

    #[test]
    fn value_round_trip_through_data() {
        let t = parse_term("(if (consp x) (car x) '(a . b))").unwrap();
        assert_eq!(Term::from_value(&t.to_value()), Some(t));
        assert_eq!(Term::from_value(&Value::int(3)), None);
        assert_eq!(Term::from_value(&Value::nil()), None);
    }

    #[test]
    fn path_access_and_replacement() {
        let t = parse_term("(f a (g b c))").unwrap();
        assert_eq!(t.at_path(&[1, 0]), Some(&Term::var("B")));
        let r = t.replace_at(&[1, 1], Term::int(1)).unwrap();
        assert_eq!(r, parse_term("(f a (g b '1))").unwrap());
        assert!(t.at_path(&[3]).is_none());
    }
}
