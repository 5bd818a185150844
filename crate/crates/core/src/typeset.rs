//! Type-set lattice and a shallow, sound type-set inference for terms.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::rewrite::MfcContext;
use crate::term::{Term, Value};

/// The basic types. Every value belongs to exactly one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TsAtom {
    PositiveInteger,
    Zero,
    NegativeInteger,
    PositiveRatio,
    NegativeRatio,
    Nil,
    T,
    NonTNonNilSymbol,
    Cons,
    String,
    Character,
}

impl TsAtom {
    pub const ALL: [TsAtom; 11] = [
        TsAtom::PositiveInteger,
        TsAtom::Zero,
        TsAtom::NegativeInteger,
        TsAtom::PositiveRatio,
        TsAtom::NegativeRatio,
        TsAtom::Nil,
        TsAtom::T,
        TsAtom::NonTNonNilSymbol,
        TsAtom::Cons,
        TsAtom::String,
        TsAtom::Character,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TsAtom::PositiveInteger => "POSITIVE-INTEGER",
            TsAtom::Zero => "ZERO",
            TsAtom::NegativeInteger => "NEGATIVE-INTEGER",
            TsAtom::PositiveRatio => "POSITIVE-RATIO",
            TsAtom::NegativeRatio => "NEGATIVE-RATIO",
            TsAtom::Nil => "NIL",
            TsAtom::T => "T",
            TsAtom::NonTNonNilSymbol => "NON-T-NON-NIL-SYMBOL",
            TsAtom::Cons => "CONS",
            TsAtom::String => "STRING",
            TsAtom::Character => "CHARACTER",
        }
    }

    pub fn from_name(name: &str) -> Option<TsAtom> {
        TsAtom::ALL.into_iter().find(|a| a.name() == name)
    }

    fn bit(self) -> u16 {
        1 << (self as u16)
    }

    /// The unique atom a value belongs to.
    pub fn classify(v: &Value) -> TsAtom {
        match v {
            Value::Integer(i) if i.is_zero() => TsAtom::Zero,
            Value::Integer(i) if i.is_positive() => TsAtom::PositiveInteger,
            Value::Integer(_) => TsAtom::NegativeInteger,
            Value::Ratio(r) if r.is_positive() => TsAtom::PositiveRatio,
            Value::Ratio(_) => TsAtom::NegativeRatio,
            Value::Symbol(s) if s.is("NIL") => TsAtom::Nil,
            Value::Symbol(s) if s.is("T") => TsAtom::T,
            Value::Symbol(_) => TsAtom::NonTNonNilSymbol,
            Value::Cons(_) => TsAtom::Cons,
            Value::String(_) => TsAtom::String,
            Value::Character(_) => TsAtom::Character,
        }
    }

    /// Sign (-1, 0, 1) and integrality of a numeric atom.
    fn numeric(self) -> Option<(i8, bool)> {
        match self {
            TsAtom::PositiveInteger => Some((1, true)),
            TsAtom::Zero => Some((0, true)),
            TsAtom::NegativeInteger => Some((-1, true)),
            TsAtom::PositiveRatio => Some((1, false)),
            TsAtom::NegativeRatio => Some((-1, false)),
            _ => None,
        }
    }
}

/// A set of basic types. The full set means "unknown", the empty set is a
/// contradiction.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeSet(u16);

impl TypeSet {
    pub const EMPTY: TypeSet = TypeSet(0);
    pub const TOP: TypeSet = TypeSet((1 << 11) - 1);
    pub const SYMBOL: TypeSet = TypeSet(1 << 5 | 1 << 6 | 1 << 7);
    pub const BOOLEAN: TypeSet = TypeSet(1 << 5 | 1 << 6);
    pub const INTEGER: TypeSet = TypeSet(1 | 1 << 1 | 1 << 2);
    pub const RATIONAL: TypeSet = TypeSet(0b11111);
    pub const POSITIVE: TypeSet = TypeSet(1 | 1 << 3);
    pub const NEGATIVE: TypeSet = TypeSet(1 << 2 | 1 << 4);
    pub const NATURAL: TypeSet = TypeSet(1 | 1 << 1);

    pub fn singleton(a: TsAtom) -> TypeSet {
        TypeSet(a.bit())
    }

    pub fn of_atoms(atoms: &[TsAtom]) -> TypeSet {
        atoms.iter().fold(TypeSet::EMPTY, |acc, &a| acc.union(TypeSet::singleton(a)))
    }

    pub fn of_value(v: &Value) -> TypeSet {
        TypeSet::singleton(TsAtom::classify(v))
    }

    pub fn contains(self, a: TsAtom) -> bool {
        self.0 & a.bit() != 0
    }

    pub fn union(self, o: TypeSet) -> TypeSet {
        TypeSet(self.0 | o.0)
    }

    pub fn intersect(self, o: TypeSet) -> TypeSet {
        TypeSet(self.0 & o.0)
    }

    pub fn minus(self, o: TypeSet) -> TypeSet {
        TypeSet(self.0 & !o.0)
    }

    pub fn complement(self) -> TypeSet {
        TypeSet::TOP.minus(self)
    }

    pub fn is_subset(self, o: TypeSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn atoms(self) -> impl Iterator<Item = TsAtom> {
        TsAtom::ALL.into_iter().filter(move |a| self.contains(*a))
    }

    /// Membership test behind `typespec-check`.
    pub fn check(self, v: &Value) -> bool {
        self.contains(TsAtom::classify(v))
    }

    /// Types of the value arithmetic sees: non-numbers read as 0.
    pub fn numeric_projection(self) -> TypeSet {
        let nums = self.intersect(TypeSet::RATIONAL);
        if self.is_subset(TypeSet::RATIONAL) {
            nums
        } else {
            nums.union(TypeSet::singleton(TsAtom::Zero))
        }
    }

    /// Quoted form: the atom names in lattice order.
    pub fn to_value(self) -> Value {
        Value::list(self.atoms().map(|a| Value::sym(a.name())).collect::<Vec<_>>())
    }

    /// Strict decoding of [`TypeSet::to_value`].
    pub fn from_value(v: &Value) -> Option<TypeSet> {
        v.list_items()?.iter().try_fold(TypeSet::EMPTY, |acc, x| {
            let a = TsAtom::from_name(x.as_symbol()?.name())?;
            Some(acc.union(TypeSet::singleton(a)))
        })
    }

    /// Decoding used by the evaluator: unrecognized entries contribute nothing.
    pub fn from_value_lenient(v: &Value) -> TypeSet {
        let mut acc = TypeSet::EMPTY;
        let mut cur = v;
        while let Some((x, rest)) = cur.as_cons() {
            if let Some(a) = x.as_symbol().and_then(|s| TsAtom::from_name(s.name())) {
                acc = acc.union(TypeSet::singleton(a));
            }
            cur = rest;
        }
        acc
    }
}

impl fmt::Display for TypeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_value(), f)
    }
}

impl fmt::Debug for TypeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn numeric_atoms(signs: &[i8], ints: &[bool]) -> TypeSet {
    let mut out = TypeSet::EMPTY;
    for &s in signs {
        for &i in ints {
            let atom = match (s, i) {
                (0, true) => TsAtom::Zero,
                (0, false) => continue,
                (1, true) => TsAtom::PositiveInteger,
                (1, false) => TsAtom::PositiveRatio,
                (_, true) => TsAtom::NegativeInteger,
                (_, false) => TsAtom::NegativeRatio,
            };
            out = out.union(TypeSet::singleton(atom));
        }
    }
    out
}

fn lift2(a: TypeSet, b: TypeSet, op: fn((i8, bool), (i8, bool)) -> TypeSet) -> TypeSet {
    let (a, b) = (a.numeric_projection(), b.numeric_projection());
    let mut out = TypeSet::EMPTY;
    for x in a.atoms().filter_map(TsAtom::numeric) {
        for y in b.atoms().filter_map(TsAtom::numeric) {
            out = out.union(op(x, y));
        }
    }
    out
}

fn lift1(a: TypeSet, op: fn((i8, bool)) -> TypeSet) -> TypeSet {
    a.numeric_projection()
        .atoms()
        .filter_map(TsAtom::numeric)
        .fold(TypeSet::EMPTY, |acc, x| acc.union(op(x)))
}

fn add_atoms((s1, i1): (i8, bool), (s2, i2): (i8, bool)) -> TypeSet {
    // A zero summand leaves the other one untouched.
    if s1 == 0 {
        return numeric_atoms(&[s2], &[i2]);
    }
    if s2 == 0 {
        return numeric_atoms(&[s1], &[i1]);
    }
    let signs: &[i8] = if s1 == s2 { &[s1][..] } else { &[-1, 0, 1][..] };
    let ints: &[bool] = match (i1, i2) {
        (true, true) => &[true],
        (true, false) | (false, true) => &[false],
        (false, false) => &[true, false],
    };
    numeric_atoms(signs, ints)
}

fn mul_atoms((s1, i1): (i8, bool), (s2, i2): (i8, bool)) -> TypeSet {
    if s1 == 0 || s2 == 0 {
        return TypeSet::singleton(TsAtom::Zero);
    }
    let ints: &[bool] = if i1 && i2 { &[true] } else { &[true, false] };
    numeric_atoms(&[s1 * s2], ints)
}

fn negate_atom((s, i): (i8, bool)) -> TypeSet {
    numeric_atoms(&[-s], &[i])
}

fn reciprocal_atom((s, _): (i8, bool)) -> TypeSet {
    if s == 0 {
        TypeSet::singleton(TsAtom::Zero)
    } else {
        numeric_atoms(&[s], &[true, false])
    }
}

/// What hypothesis `h` (or its negation, when `positive` is false) says
/// about the value of `subject`. `TOP` when it says nothing.
fn hyp_mask(h: &Term, subject: &Term, positive: bool) -> TypeSet {
    if h == subject {
        let falsy = TypeSet::singleton(TsAtom::Nil);
        return if positive { falsy.complement() } else { falsy };
    }
    let pick = |set: TypeSet| if positive { set } else { set.complement() };
    match h {
        Term::App(f, args) => match (f.name(), args.as_slice()) {
            ("NOT", [x]) => hyp_mask(x, subject, !positive),
            ("IF", [a, b, c]) if positive && c.as_quote().is_some_and(Value::is_nil) => {
                hyp_mask(a, subject, true).intersect(hyp_mask(b, subject, true))
            }
            ("SYMBOLP", [x]) if x == subject => pick(TypeSet::SYMBOL),
            ("CONSP", [x]) if x == subject => pick(TypeSet::singleton(TsAtom::Cons)),
            ("RATIONALP", [x]) if x == subject => pick(TypeSet::RATIONAL),
            ("INTEGERP", [x]) if x == subject => pick(TypeSet::INTEGER),
            ("EQUAL", [x, Term::Quote(c)]) | ("EQUAL", [Term::Quote(c), x]) if x == subject => {
                let atom = TsAtom::classify(c);
                if positive {
                    TypeSet::singleton(atom)
                } else if matches!(atom, TsAtom::Nil | TsAtom::T | TsAtom::Zero) {
                    TypeSet::singleton(atom).complement()
                } else {
                    TypeSet::TOP
                }
            }
            ("<", [Term::Quote(k), x]) if x == subject => {
                // k < x, or when negated x <= k; x is read through rfix.
                let k = k.rfix();
                match (positive, k.is_negative(), k.is_zero()) {
                    (true, false, _) => TypeSet::POSITIVE,
                    (false, true, _) => TypeSet::NEGATIVE,
                    (false, false, true) => TypeSet::POSITIVE.complement(),
                    _ => TypeSet::TOP,
                }
            }
            ("<", [x, Term::Quote(k)]) if x == subject => {
                // x < k, or when negated k <= x.
                let k = k.rfix();
                match (positive, k.is_positive(), k.is_zero()) {
                    (true, false, _) => TypeSet::NEGATIVE,
                    (false, true, _) => TypeSet::POSITIVE,
                    (false, false, true) => TypeSet::NEGATIVE.complement(),
                    _ => TypeSet::TOP,
                }
            }
            _ => TypeSet::TOP,
        },
        _ => TypeSet::TOP,
    }
}

fn signature(f: &str, args: &[Term], ctx: &MfcContext) -> TypeSet {
    let ts = |i: usize| type_set_of(&args[i], ctx);
    match (f, args.len()) {
        ("IF", 3) => match args[0].as_quote() {
            Some(c) if c.truthy() => ts(1),
            Some(_) => ts(2),
            None => ts(1).union(ts(2)),
        },
        ("EQUAL" | "IFF" | "IMPLIES" | "<" | "LOGBITP" | "TYPESPEC-CHECK", 2)
        | ("NOT" | "CONSP" | "SYMBOLP" | "RATIONALP" | "INTEGERP", 1) => TypeSet::BOOLEAN,
        ("CONS", 2) | ("ACONS" | "UPDATE-NTH", 3) => TypeSet::singleton(TsAtom::Cons),
        ("LEN" | "NFIX", 1) => TypeSet::NATURAL,
        ("BINARY-+", 2) => lift2(ts(0), ts(1), add_atoms),
        ("BINARY-*", 2) => lift2(ts(0), ts(1), mul_atoms),
        ("UNARY--", 1) => lift1(ts(0), negate_atom),
        ("UNARY-/", 1) => lift1(ts(0), reciprocal_atom),
        ("ASH" | "LOGAND" | "LOGIOR" | "LOGTAIL", 2) | ("LOGAPP", 3) => TypeSet::INTEGER,
        _ => TypeSet::TOP,
    }
}

/// Sound over-approximation of the types `t` can take in any environment
/// satisfying the context hypotheses.
pub fn type_set_of(t: &Term, ctx: &MfcContext) -> TypeSet {
    let base = match t {
        Term::Quote(v) => return TypeSet::of_value(v),
        Term::Var(_) => TypeSet::TOP,
        Term::App(f, args) => signature(f.name(), args, ctx),
    };
    ctx.hyps
        .iter()
        .fold(base, |acc, h| acc.intersect(hyp_mask(h, t, true)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::rat;
    use crate::sexp::parse_term;
    use crate::world::World;

    fn ctx(hyps: &[&str]) -> MfcContext {
        MfcContext::new(hyps.iter().map(|h| parse_term(h).unwrap()).collect(), World::new())
    }

    fn ts(t: &str, hyps: &[&str]) -> TypeSet {
        type_set_of(&parse_term(t).unwrap(), &ctx(hyps))
    }

    #[test]
    fn typespec_check_cases() {
        assert!(TypeSet::SYMBOL.check(&Value::sym("FOO")));
        assert!(!TypeSet::SYMBOL.check(&Value::int(7)));
        assert!(TypeSet::TOP.check(&Value::string("x")));
        assert!(!TypeSet::EMPTY.check(&Value::nil()));
    }

    #[test]
    fn printing_uses_lattice_order() {
        assert_eq!(TypeSet::SYMBOL.to_string(), "(NIL T NON-T-NON-NIL-SYMBOL)");
        assert_eq!(TypeSet::from_value(&TypeSet::SYMBOL.to_value()), Some(TypeSet::SYMBOL));
        assert_eq!(TypeSet::from_value(&Value::sym("X")), None);
    }

    #[test]
    fn context_hypothesis_about_compound_term() {
        assert_eq!(ts("(foo x)", &["(symbolp (foo x))"]), TypeSet::SYMBOL);
        assert_eq!(ts("(foo x)", &[]), TypeSet::TOP);
        assert_eq!(ts("'5", &[]), TypeSet::singleton(TsAtom::PositiveInteger));
    }

    #[test]
    fn hypothesis_shapes() {
        assert_eq!(ts("x", &["(consp x)"]), TypeSet::singleton(TsAtom::Cons));
        assert_eq!(ts("x", &["(not (symbolp x))", "(not (consp x))", "(rationalp x)"]), TypeSet::RATIONAL);
        assert_eq!(ts("x", &["(equal x 'nil)"]), TypeSet::singleton(TsAtom::Nil));
        assert_eq!(ts("x", &["(symbolp x)", "x", "(not (equal x 't))"]), TypeSet::singleton(TsAtom::NonTNonNilSymbol));
        assert_eq!(ts("x", &["(< '0 x)"]), TypeSet::POSITIVE);
        assert_eq!(ts("x", &["(< '-1 x)"]), TypeSet::TOP);
        assert_eq!(ts("x", &["(<= 1 x)"]), TypeSet::POSITIVE);
        assert_eq!(ts("x", &["(<= 0 x)", "(rationalp x)"]), TypeSet::of_atoms(&[TsAtom::PositiveInteger, TsAtom::Zero, TsAtom::PositiveRatio]));
        assert_eq!(ts("x", &["(and (consp x) (symbolp x))"]), TypeSet::EMPTY);
    }

    /// Sample-value oracle for the abstract product: classify every product
    /// of representative values of each input atom.
    fn product_oracle(a: TypeSet, b: TypeSet) -> TypeSet {
        let samples = |atom: TsAtom| -> Vec<Value> {
            let r = |n, d| Value::rational(rat(n, d));
            match atom {
                TsAtom::PositiveInteger => vec![Value::int(1), Value::int(2), Value::int(3)],
                TsAtom::Zero => vec![Value::int(0)],
                TsAtom::NegativeInteger => vec![Value::int(-1), Value::int(-2)],
                TsAtom::PositiveRatio => vec![r(1, 2), r(2, 3), r(3, 2)],
                TsAtom::NegativeRatio => vec![r(-1, 2), r(-3, 2)],
                _ => vec![],
            }
        };
        let mut out = TypeSet::EMPTY;
        for x in a.atoms().flat_map(samples) {
            for y in b.atoms().flat_map(samples) {
                out = out.union(TypeSet::of_value(&Value::rational(x.rfix() * y.rfix())));
            }
        }
        out
    }

    #[test]
    fn product_of_nonnegative_rationals() {
        let hyps = ["(rationalp a)", "(<= 0 a)", "(rationalp b)", "(<= 0 b)"];
        let nonneg = TypeSet::of_atoms(&[TsAtom::Zero, TsAtom::PositiveInteger, TsAtom::PositiveRatio]);
        let expected = product_oracle(nonneg, nonneg);
        assert_eq!(expected, nonneg);
        assert_eq!(ts("(binary-* a b)", &hyps), expected);
    }

    #[test]
    fn arithmetic_signatures() {
        assert_eq!(ts("(binary-+ '1 '2)", &[]), TypeSet::singleton(TsAtom::PositiveInteger));
        assert_eq!(ts("(binary-+ x y)", &[]), TypeSet::RATIONAL);
        assert_eq!(ts("(unary-- x)", &["(< '0 x)"]), TypeSet::NEGATIVE);
        assert_eq!(ts("(binary-* x x)", &["(integerp x)"]), TypeSet::INTEGER);
        assert_eq!(ts("(unary-/ '0)", &[]), TypeSet::singleton(TsAtom::Zero));
        assert_eq!(ts("(len x)", &[]), TypeSet::NATURAL);
        assert_eq!(ts("(binary-+ 'a '1/2)", &[]), TypeSet::singleton(TsAtom::PositiveRatio));
    }
}
