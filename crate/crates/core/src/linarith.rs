//! Linear arithmetic over the rationals: linearization of literals and
//! refutation by Fourier-Motzkin elimination.
//!
//! Constraints are kept as `sum(c_i * atom_i) + constant REL 0`. Atoms are
//! opaque terms (variables, non-arithmetic calls, nonlinear products), read
//! through `rfix` exactly as the arithmetic primitives read them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::term::Term;

pub const DEFAULT_ATOM_CAP: usize = 20;

/// Work limit on the number of live constraints during elimination.
const MAX_CONSTRAINTS: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    Lt,
    Le,
    Eq,
}

impl Relation {
    fn holds(self, c: &BigRational) -> bool {
        match self {
            Relation::Lt => c.is_negative(),
            Relation::Le => !c.is_positive(),
            Relation::Eq => c.is_zero(),
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "=",
        }
    }
}

/// A linear polynomial over opaque atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly {
    pub coeffs: BTreeMap<Term, BigRational>,
    pub constant: BigRational,
}

impl Poly {
    pub fn constant(c: BigRational) -> Poly {
        Poly { coeffs: BTreeMap::new(), constant: c }
    }

    pub fn atom(t: Term) -> Poly {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(t, BigRational::one());
        Poly { coeffs, constant: BigRational::zero() }
    }

    pub fn as_constant(&self) -> Option<&BigRational> {
        self.coeffs.is_empty().then_some(&self.constant)
    }

    pub fn plus(mut self, other: &Poly) -> Poly {
        for (a, c) in &other.coeffs {
            let e = self.coeffs.entry(a.clone()).or_insert_with(BigRational::zero);
            *e += c;
            if e.is_zero() {
                self.coeffs.remove(a);
            }
        }
        self.constant += &other.constant;
        self
    }

    pub fn scale(mut self, k: &BigRational) -> Poly {
        if k.is_zero() {
            return Poly::default();
        }
        for c in self.coeffs.values_mut() {
            *c *= k;
        }
        self.constant *= k;
        self
    }

    pub fn minus(self, other: &Poly) -> Poly {
        self.plus(&other.clone().scale(&-BigRational::one()))
    }

    /// Reads an arithmetic term. `+`, unary minus and products with a
    /// constant factor are interpreted; anything else is an atom.
    pub fn of_term(t: &Term) -> Poly {
        match t {
            Term::Quote(v) => Poly::constant(v.rfix()),
            Term::App(f, args) => match (f.name(), args.as_slice()) {
                ("BINARY-+", [a, b]) => Poly::of_term(a).plus(&Poly::of_term(b)),
                ("UNARY--", [a]) => Poly::of_term(a).scale(&-BigRational::one()),
                ("BINARY-*", [a, b]) => {
                    let (pa, pb) = (Poly::of_term(a), Poly::of_term(b));
                    if let Some(k) = pa.as_constant() {
                        pb.scale(k)
                    } else if let Some(k) = pb.as_constant() {
                        pa.scale(k)
                    } else {
                        Poly::atom(t.clone())
                    }
                }
                _ => Poly::atom(t.clone()),
            },
            Term::Var(_) => Poly::atom(t.clone()),
        }
    }
}

/// `poly REL 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearConstraint {
    pub relation: Relation,
    pub poly: Poly,
}

impl LinearConstraint {
    pub fn new(relation: Relation, poly: Poly) -> Self {
        LinearConstraint { relation, poly }
    }

    /// Divides through by the magnitude of the leading coefficient so that
    /// equal constraints compare equal.
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.poly.coeffs.values().next().map(|c| c.abs()) {
            let k = lead.recip();
            self.poly = self.poly.scale(&k);
        }
        self
    }

    /// Constant constraint that cannot hold.
    fn is_contradiction(&self) -> bool {
        self.poly.as_constant().is_some_and(|c| !self.relation.holds(c))
    }

    fn is_trivial(&self) -> bool {
        self.poly.as_constant().is_some_and(|c| self.relation.holds(c))
    }
}

impl fmt::Display for LinearConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (a, c) in &self.poly.coeffs {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{c}*{a}")?;
        }
        if first {
            write!(f, "{}", self.poly.constant)?;
        } else if !self.poly.constant.is_zero() {
            write!(f, " + {}", self.poly.constant)?;
        }
        write!(f, " {} 0", self.relation.symbol())
    }
}

/// Linear content of a literal, if it has any.
pub fn linearize(t: &Term) -> Option<LinearConstraint> {
    let (f, args) = t.as_app()?;
    match (f.name(), args) {
        ("<", [a, b]) => Some(LinearConstraint::new(Relation::Lt, Poly::of_term(a).minus(&Poly::of_term(b)))),
        ("EQUAL", [a, b]) => Some(LinearConstraint::new(Relation::Eq, Poly::of_term(a).minus(&Poly::of_term(b)))),
        ("NOT", [inner]) => match inner.as_app()? {
            (g, [a, b]) if g.is("<") => {
                Some(LinearConstraint::new(Relation::Le, Poly::of_term(b).minus(&Poly::of_term(a))))
            }
            (g, [x]) if g.is("NOT") => linearize(x),
            _ => None,
        },
        _ => None,
    }
}

pub fn refute(cs: &[LinearConstraint]) -> bool {
    refute_with_cap(cs, DEFAULT_ATOM_CAP)
}

/// True only if the constraints have no common rational solution. Systems
/// over more than `atom_cap` atoms are not attempted.
pub fn refute_with_cap(cs: &[LinearConstraint], atom_cap: usize) -> bool {
    let mut set: BTreeSet<LinearConstraint> = BTreeSet::new();
    for c in cs {
        if c.relation == Relation::Eq {
            set.insert(LinearConstraint::new(Relation::Le, c.poly.clone()).normalized());
            set.insert(LinearConstraint::new(Relation::Le, c.poly.clone().scale(&-BigRational::one())).normalized());
        } else {
            set.insert(c.clone().normalized());
        }
    }
    let atom_count = set.iter().flat_map(|c| c.poly.coeffs.keys()).collect::<BTreeSet<_>>().len();
    if atom_count > atom_cap {
        return false;
    }
    loop {
        if set.iter().any(LinearConstraint::is_contradiction) {
            return true;
        }
        set.retain(|c| !c.is_trivial());
        let Some(pivot) = choose_pivot(&set) else { return false };

        let (mut upper, mut lower, mut rest) = (Vec::new(), Vec::new(), BTreeSet::new());
        for c in set {
            match c.poly.coeffs.get(&pivot).map(|k| k.is_positive()) {
                Some(true) => upper.push(c),
                Some(false) => lower.push(c),
                None => {
                    rest.insert(c);
                }
            }
        }
        for u in &upper {
            let a = &u.poly.coeffs[&pivot];
            for l in &lower {
                let b = -&l.poly.coeffs[&pivot];
                let poly = u.poly.clone().scale(&b).plus(&l.poly.clone().scale(a));
                let relation = if u.relation == Relation::Lt || l.relation == Relation::Lt {
                    Relation::Lt
                } else {
                    Relation::Le
                };
                rest.insert(LinearConstraint::new(relation, poly).normalized());
                if rest.len() > MAX_CONSTRAINTS {
                    return false;
                }
            }
        }
        set = rest;
    }
}

/// Atom with the fewest occurrences; ties go to the earliest in print order.
fn choose_pivot(set: &BTreeSet<LinearConstraint>) -> Option<Term> {
    let mut counts: BTreeMap<&Term, usize> = BTreeMap::new();
    for c in set {
        for a in c.poly.coeffs.keys() {
            *counts.entry(a).or_default() += 1;
        }
    }
    counts
        .into_iter()
        .min_by(|(a, n), (b, m)| n.cmp(m).then_with(|| a.to_string().cmp(&b.to_string())))
        .map(|(a, _)| a.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::rat;
    use crate::sexp::parse_term;

    fn lin(s: &str) -> LinearConstraint {
        linearize(&parse_term(s).unwrap()).unwrap()
    }

    #[test]
    fn linearizes_literals() {
        assert_eq!(lin("(< x '5)").to_string(), "1*X + -5 < 0");
        assert_eq!(lin("(not (< x '5))").to_string(), "-1*X + 5 <= 0");
        assert_eq!(lin("(< (binary-* a b) '3)").to_string(), "1*(BINARY-* A B) + -3 < 0");
        assert_eq!(lin("(equal (binary-* '2 x) (binary-+ y '1))").to_string(), "2*X + -1*Y + -1 = 0");
        assert_eq!(lin("(< (unary-- x) 'foo)").to_string(), "-1*X < 0");
        assert!(linearize(&parse_term("(consp x)").unwrap()).is_none());
        assert!(linearize(&parse_term("(not (equal x '1))").unwrap()).is_none());
    }

    #[test]
    fn refutes_interval_clash() {
        assert!(refute(&[lin("(< x '5)"), lin("(< '6 x)")]));
        assert!(!refute(&[lin("(< x '5)")]));
        assert!(refute(&[lin("(< x '5)"), lin("(not (< x '5))")]));
        assert!(!refute(&[lin("(< x '5)"), lin("(not (< '5 x))")]));
        assert!(refute(&[lin("(equal x '3)"), lin("(< x '3)")]));
        assert!(!refute(&[lin("(equal x '3)"), lin("(not (< x '3))")]));
    }

    #[test]
    fn chains_through_several_atoms() {
        let cs = [lin("(< x y)"), lin("(< y z)"), lin("(< z x)")];
        assert!(refute(&cs));
        let cs = [lin("(not (< y x))"), lin("(not (< z y))"), lin("(not (< x z))")];
        assert!(!refute(&cs));
        let cs = [lin("(not (< y x))"), lin("(not (< z y))"), lin("(not (< x z))"), lin("(< x z)")];
        assert!(refute(&cs));
    }

    #[test]
    fn constant_contradiction_is_found_immediately() {
        let c = LinearConstraint::new(Relation::Le, Poly::constant(rat(1, 2)));
        assert!(refute(&[c]));
        let c = LinearConstraint::new(Relation::Lt, Poly::constant(rat(0, 1)));
        assert!(refute(&[c]));
    }

    #[test]
    fn atom_cap_gives_up() {
        let cs: Vec<_> = (0..3).map(|i| lin(&format!("(< x{i} '0)"))).chain([lin("(< '0 x0)")]).collect();
        assert!(refute(&cs));
        assert!(!refute_with_cap(&cs, 2));
    }
}
