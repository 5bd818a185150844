//! Bound rewriting: prove an inequality by replacing subterms at monotonic
//! positions with user-supplied bounds.
//!
//! To show `l < r` it is enough to show `l' < r'` for some `l' >= l` and
//! `r' <= r`. Sums are monotonic in both arguments, negation flips the
//! direction, and a product is monotonic in one factor when the sign of
//! the other is known. Every bound used must be justified in the current
//! context, either by backchaining or by linear arithmetic.

use std::cell::RefCell;
use std::fmt;

use thiserror::Error;

use crate::eval::sublis_var;
use crate::meta_extract::Mfc;
use crate::term::{Term, Value};
use crate::typeset::{TsAtom, TypeSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `subject <= bound`
    Upper,
    /// `bound <= subject`
    Lower,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundHint {
    pub side: Side,
    pub strict: bool,
    pub subject: Term,
    pub bound: Term,
}

impl BoundHint {
    /// Reads `(< a b)` or `(NOT (< b a))`. A constant side is never a
    /// subject, so `(<= a '10)` gives one upper bound and `(<= x y)` gives an
    /// upper bound on `x` and a lower bound on `y`.
    pub fn parse(t: &Term) -> Option<Vec<BoundHint>> {
        let (strict, small, big) = match inequality(t)? {
            (Relation::Lt, a, b) => (true, a, b),
            (Relation::Le, a, b) => (false, a, b),
        };
        let mut out = Vec::new();
        if !small.is_quote() {
            out.push(BoundHint { side: Side::Upper, strict, subject: small.clone(), bound: big.clone() });
        }
        if !big.is_quote() {
            out.push(BoundHint { side: Side::Lower, strict, subject: big.clone(), bound: small.clone() });
        }
        Some(out)
    }

    /// The inequality this hint asserts.
    pub fn term(&self) -> Term {
        let (small, big) = match self.side {
            Side::Upper => (&self.subject, &self.bound),
            Side::Lower => (&self.bound, &self.subject),
        };
        relation_term(if self.strict { Relation::Lt } else { Relation::Le }, small.clone(), big.clone())
    }
}

impl fmt::Display for BoundHint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.term())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Lt,
    Le,
}

/// `(< a b)` as (Lt, a, b); `(NOT (< b a))` as (Le, a, b).
fn inequality(t: &Term) -> Option<(Relation, &Term, &Term)> {
    if let Some([a, b]) = t.as_call("<", 2) {
        return Some((Relation::Lt, a, b));
    }
    let [inner] = t.as_call("NOT", 1)? else { return None };
    let [b, a] = inner.as_call("<", 2)? else { return None };
    Some((Relation::Le, a, b))
}

fn relation_term(rel: Relation, a: Term, b: Term) -> Term {
    match rel {
        Relation::Lt => Term::app("<", vec![a, b]),
        Relation::Le => Term::not(Term::app("<", vec![b, a])),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Up => Direction::Down,
            Direction::Down => Direction::Up,
        }
    }

    fn side(self) -> Side {
        match self {
            Direction::Up => Side::Upper,
            Direction::Down => Side::Lower,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Zero,
    Nonneg,
    Nonpos,
    Unknown,
}

/// Sign of the number `t` denotes, as arithmetic sees it (non-numbers
/// act as zero).
pub fn sign_of(t: &Term, mfc: &Mfc) -> Sign {
    let ts = mfc.ts(t).numeric_projection();
    let zero = TypeSet::singleton(TsAtom::Zero);
    if ts.is_subset(zero) {
        Sign::Zero
    } else if ts.is_subset(TypeSet::POSITIVE.union(zero)) {
        Sign::Nonneg
    } else if ts.is_subset(TypeSet::NEGATIVE.union(zero)) {
        Sign::Nonpos
    } else {
        Sign::Unknown
    }
}

struct Replacer<'a, 'm> {
    mfc: &'a Mfc<'m>,
    hints: &'a [BoundHint],
    validated: RefCell<Vec<Option<bool>>>,
}

impl Replacer<'_, '_> {
    fn valid(&self, i: usize) -> bool {
        if let Some(v) = self.validated.borrow()[i] {
            return v;
        }
        let ineq = self.hints[i].term();
        let ok = self.mfc.relieve_hyp(&ineq, &[], &Value::sym("BOUND-HINT"), &ineq, i)
            || self.mfc.ap(&Term::not(ineq));
        self.validated.borrow_mut()[i] = Some(ok);
        ok
    }

    fn replace(&self, t: &Term, dir: Direction) -> Term {
        for (i, h) in self.hints.iter().enumerate() {
            if h.side == dir.side() && &h.subject == t && self.valid(i) {
                return h.bound.clone();
            }
        }
        let Some((f, args)) = t.as_app() else { return t.clone() };
        match (f.name(), args) {
            ("BINARY-+", [a, b]) => Term::app("BINARY-+", vec![self.replace(a, dir), self.replace(b, dir)]),
            ("UNARY--", [a]) => Term::app("UNARY--", vec![self.replace(a, dir.flip())]),
            ("BINARY-*", [a, b]) => {
                let b2 = self.factor(b, a, dir);
                let a2 = self.factor(a, &b2, dir);
                Term::app("BINARY-*", vec![a2, b2])
            }
            _ => t.clone(),
        }
    }

    /// Bounds `x` in a product with `other`, when `other`'s sign allows.
    fn factor(&self, x: &Term, other: &Term, dir: Direction) -> Term {
        match sign_of(other, self.mfc) {
            Sign::Nonneg => self.replace(x, dir),
            Sign::Nonpos => self.replace(x, dir.flip()),
            Sign::Zero | Sign::Unknown => x.clone(),
        }
    }
}

/// Replaces subterms of `t` by validated bounds so that the result bounds
/// `t` from above (`Up`) or below (`Down`).
pub fn bound_replace(t: &Term, dir: Direction, hints: &[BoundHint], mfc: &Mfc) -> Term {
    Replacer { mfc, hints, validated: RefCell::new(vec![None; hints.len()]) }.replace(t, dir)
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("goal {0} is not of the form (< a b) or (<= a b)")]
pub struct GoalShapeError(pub Term);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundsResult {
    pub proved: bool,
    /// The bounded goal, ground-folded.
    pub residual: Term,
    /// The bounded lesser and greater sides, ground-folded.
    pub lesser: Term,
    pub greater: Term,
}

/// Tries to prove `goal` by bounding its lesser side from above and its
/// greater side from below, then deciding the result by ground evaluation
/// or linear arithmetic.
pub fn prove_bounds(goal: &Term, hints: &[BoundHint], mfc: &Mfc) -> Result<BoundsResult, GoalShapeError> {
    let (rel, l, r) = inequality(goal).ok_or_else(|| GoalShapeError(goal.clone()))?;
    let replacer = Replacer { mfc, hints, validated: RefCell::new(vec![None; hints.len()]) };
    let lesser = sublis_var(&[], &replacer.replace(l, Direction::Up));
    let greater = sublis_var(&[], &replacer.replace(r, Direction::Down));
    let residual = sublis_var(&[], &relation_term(rel, lesser.clone(), greater.clone()));
    let proved = match residual.as_quote() {
        Some(v) => v.truthy(),
        None => mfc.ap(&Term::not(residual.clone())),
    };
    Ok(BoundsResult { proved, residual, lesser, greater })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meta_extract::Ledger;
    use crate::rewrite::MfcContext;
    use crate::sexp::parse_term;
    use crate::world::World;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn hints(ss: &[&str]) -> Vec<BoundHint> {
        ss.iter().flat_map(|s| BoundHint::parse(&t(s)).unwrap()).collect()
    }

    fn ctx(hyps: &[&str]) -> MfcContext {
        MfcContext::new(hyps.iter().map(|h| t(h)).collect(), World::new())
    }

    #[test]
    fn parses_hints() {
        assert_eq!(
            hints(&["(<= a '10)"]),
            vec![BoundHint { side: Side::Upper, strict: false, subject: t("a"), bound: t("'10") }]
        );
        assert_eq!(hints(&["(< '0 b)"])[0].side, Side::Lower);
        assert_eq!(hints(&["(<= x y)"]).len(), 2);
        assert_eq!(hints(&["(<= a '10)"])[0].term(), t("(<= a '10)"));
        assert!(BoundHint::parse(&t("(equal a '1)")).is_none());
    }

    #[test]
    fn signs() {
        let c = ctx(&["(not (< a '0))", "(rationalp a)"]);
        let l = Ledger::new();
        let m = Mfc::new(&c, &l);
        assert_eq!(sign_of(&t("a"), &m), Sign::Nonneg);
        assert_eq!(sign_of(&t("'-3"), &m), Sign::Nonpos);
        assert_eq!(sign_of(&t("'0"), &m), Sign::Zero);
        assert_eq!(sign_of(&t("x"), &m), Sign::Unknown);
    }

    #[test]
    fn difference_is_bounded_from_below() {
        let c = ctx(&["(<= b bb)"]);
        let l = Ledger::new();
        let m = Mfc::new(&c, &l);
        let h = hints(&["(<= b bb)"]);
        let out = bound_replace(&t("(binary-+ a (unary-- b))"), Direction::Down, &h, &m);
        assert_eq!(out, t("(binary-+ a (unary-- bb))"));
    }

    #[test]
    fn unknown_sign_blocks_descent() {
        let c = ctx(&["(<= a '10)", "(<= b '20)"]);
        let l = Ledger::new();
        let m = Mfc::new(&c, &l);
        let h = hints(&["(<= a '10)", "(<= b '20)"]);
        assert_eq!(bound_replace(&t("(binary-* a b)"), Direction::Up, &h, &m), t("(binary-* a b)"));
        assert_eq!(bound_replace(&t("(binary-* a b)"), Direction::Up, &[], &m), t("(binary-* a b)"));
    }

    #[test]
    fn negation_flips() {
        let c = ctx(&["(<= '0 b)"]);
        let l = Ledger::new();
        let m = Mfc::new(&c, &l);
        let h = hints(&["(<= '0 b)"]);
        assert_eq!(bound_replace(&t("(unary-- b)"), Direction::Up, &h, &m), t("(unary-- '0)"));
    }

    #[test]
    fn product_within_bounds() {
        let c = ctx(&["(<= '0 a)", "(<= '0 b)", "(<= a '10)", "(<= b '20)"]);
        let l = Ledger::new();
        let m = Mfc::new(&c, &l);
        let h = hints(&["(<= a '10)", "(<= b '20)"]);
        let r = prove_bounds(&t("(<= (binary-* a b) '200)"), &h, &m).unwrap();
        assert!(r.proved);
        assert_eq!(r.lesser, t("'200"));
        let r = prove_bounds(&t("(< (binary-* a b) '200)"), &h, &m).unwrap();
        assert!(!r.proved);
    }

    #[test]
    fn unbounded_goals() {
        let c = ctx(&[]);
        let l = Ledger::new();
        let m = Mfc::new(&c, &l);
        assert!(!prove_bounds(&t("(< x x)"), &[], &m).unwrap().proved);
        assert!(prove_bounds(&t("(consp x)"), &[], &m).is_err());
    }

    #[test]
    fn unjustified_hints_are_ignored() {
        let c = ctx(&["(<= '0 a)"]);
        let l = Ledger::new();
        let m = Mfc::new(&c, &l);
        let h = hints(&["(<= a '10)"]);
        assert_eq!(bound_replace(&t("a"), Direction::Up, &h, &m), t("a"));
        // One relieve-hyp and one linear-arithmetic attempt were recorded.
        assert_eq!(l.len(), 2);
    }
}
