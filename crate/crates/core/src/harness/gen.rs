//! Seeded generators for values, terms, environments, contexts and worlds.
//!
//! Distributions:
//! - values: small integers (-10..=10), ratios with denominators 2..=4, a
//!   handful of symbols, one character, one string, and conses of these up
//!   to depth 2;
//! - terms: variables, quoted values and applications of any primitive or
//!   defined function, up to the requested depth. Shift widths, bit
//!   positions and update indices are small constants so evaluation stays
//!   cheap;
//! - environments: every listed variable bound, with constants drawn from
//!   the terms under test about half the time;
//! - worlds: up to three non-recursive definitions, optionally a
//!   structurally recursive length function, and a shuffled subset of a
//!   pool of valid rewrite rules.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::eval::{Env, PRIMITIVES};
use crate::sexp::parse_term;
use crate::term::{Sym, Term, Value};
use crate::typeset::{TsAtom, TypeSet};
use crate::world::{Equiv, RewriteRule, World};

pub const SYMBOL_POOL: [&str; 5] = ["NIL", "T", "A", "B", "FOO"];

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn small_int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn rational(&mut self) -> BigRational {
        let n = self.small_int(-20, 20);
        let d = self.small_int(1, 4);
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    pub fn value(&mut self, depth: usize) -> Value {
        let roll = self.rng.gen_range(0..100);
        match roll {
            0..=34 => Value::int(self.small_int(-10, 10)),
            35..=44 => Value::rational(self.rational()),
            45..=64 => Value::sym(SYMBOL_POOL.choose(&mut self.rng).expect("pool")),
            65..=67 => Value::Character('a'),
            68..=70 => Value::string("s"),
            _ if depth == 0 => Value::int(self.small_int(0, 3)),
            _ => Value::cons(self.value(depth - 1), self.value(depth - 1)),
        }
    }

    fn type_set(&mut self) -> TypeSet {
        let atoms: Vec<TsAtom> = TsAtom::ALL.iter().copied().filter(|_| self.rng.gen_bool(0.5)).collect();
        TypeSet::of_atoms(&atoms)
    }

    fn small_const(&mut self, lo: i64, hi: i64) -> Term {
        Term::int(self.small_int(lo, hi))
    }

    fn leaf(&mut self, vars: &[Sym]) -> Term {
        if !vars.is_empty() && self.rng.gen_bool(0.6) {
            Term::Var(vars.choose(&mut self.rng).expect("nonempty").clone())
        } else {
            Term::Quote(self.value(2))
        }
    }

    /// Random term over the primitives and the definitions of `w`.
    pub fn term(&mut self, depth: usize, vars: &[Sym], w: &World) -> Term {
        if depth == 0 || self.rng.gen_bool(0.25) {
            return self.leaf(vars);
        }
        let defs: Vec<(Sym, usize)> = w.definitions().map(|d| (d.name.clone(), d.formals.len())).collect();
        let pick = self.rng.gen_range(0..PRIMITIVES.len() + defs.len());
        let (f, arity) = match PRIMITIVES.get(pick) {
            Some((name, arity)) => (Sym::new(name), *arity),
            None => defs[pick - PRIMITIVES.len()].clone(),
        };
        let sub = |g: &mut Gen| g.term(depth - 1, vars, w);
        let args = match f.name() {
            "ASH" => vec![sub(self), self.small_const(-8, 8)],
            "LOGTAIL" => vec![self.small_const(0, 8), sub(self)],
            "LOGAPP" => vec![self.small_const(0, 8), sub(self), sub(self)],
            "UPDATE-NTH" => vec![self.small_const(0, 4), sub(self), sub(self)],
            "TYPESPEC-CHECK" => vec![Term::Quote(self.type_set().to_value()), sub(self)],
            _ => (0..arity).map(|_| sub(self)).collect(),
        };
        Term::App(f, args)
    }

    /// Binds every variable; `consts` are preferred about half the time.
    pub fn env(&mut self, vars: &[Sym], consts: &[Value]) -> Env {
        vars.iter()
            .map(|v| {
                let x = if !consts.is_empty() && self.rng.gen_bool(0.5) {
                    let c = consts.choose(&mut self.rng).expect("nonempty").clone();
                    self.nudge(c)
                } else {
                    self.value(2)
                };
                (v.clone(), x)
            })
            .collect()
    }

    /// A constant, or a number near it.
    fn nudge(&mut self, c: Value) -> Value {
        match c.as_rational() {
            Some(r) if self.rng.gen_bool(0.5) => {
                let delta = BigRational::new(BigInt::from(self.small_int(-4, 4)), BigInt::from(self.small_int(1, 2)));
                Value::rational(r + delta)
            }
            _ => c,
        }
    }

    /// A literal about one of `vars`, usable as a context hypothesis.
    pub fn hyp(&mut self, vars: &[Sym], w: &World) -> Term {
        let x = Term::Var(vars.choose(&mut self.rng).expect("nonempty").clone());
        let k = self.small_const(-5, 5);
        let lit = match self.rng.gen_range(0..9) {
            0 => Term::app("SYMBOLP", vec![x]),
            1 => Term::app("CONSP", vec![x]),
            2 => Term::app("RATIONALP", vec![x]),
            3 => Term::app("INTEGERP", vec![x]),
            4 => Term::app("<", vec![x, k]),
            5 => Term::app("<", vec![k, x]),
            6 => Term::equal(x, Term::Quote(self.value(1))),
            7 => self.term(2, vars, w),
            _ => Term::app("<", vec![x, self.term(1, vars, w)]),
        };
        if self.rng.gen_bool(0.3) {
            Term::not(lit)
        } else {
            lit
        }
    }

    pub fn world(&mut self) -> World {
        let mut w = World::new();
        let formals = [Sym::new("X"), Sym::new("Y")];
        for i in 0..self.rng.gen_range(0..=3) {
            let n = self.rng.gen_range(1..=2);
            let body = self.term(2, &formals[..n], &w);
            w = w.add_defun(Sym::new(&format!("F{i}")), formals[..n].to_vec(), body).expect("generated definition");
        }
        if self.rng.gen_bool(0.5) {
            w = w
                .add_defun(
                    "LEN2".into(),
                    vec!["X".into()],
                    parse_term("(if (consp x) (binary-+ '1 (len2 (cdr x))) '0)").expect("literal"),
                )
                .expect("generated definition");
        }
        let mut rules = valid_rules();
        rules.shuffle(&mut self.rng);
        for r in rules.into_iter().filter(|_| self.rng.gen_bool(0.7)) {
            w = w.add_rewrite_rule(r).expect("pool rule");
        }
        w
    }
}

/// Rewrite rules that hold under the evaluator's completions.
pub fn valid_rules() -> Vec<RewriteRule> {
    let rule = |name: &str, hyps: &[&str], equiv: Equiv, lhs: &str, rhs: &str| RewriteRule {
        name: name.into(),
        hyps: hyps.iter().map(|h| parse_term(h).expect("literal")).collect(),
        equiv,
        lhs: parse_term(lhs).expect("literal"),
        rhs: parse_term(rhs).expect("literal"),
        backchain_limit: None,
    };
    use Equiv::*;
    vec![
        rule("CAR-CONS", &[], Equal, "(car (cons x y))", "x"),
        rule("CDR-CONS", &[], Equal, "(cdr (cons x y))", "y"),
        rule("PLUS-ZERO", &["(rationalp x)"], Equal, "(binary-+ '0 x)", "x"),
        rule("MINUS-MINUS", &["(rationalp x)"], Equal, "(unary-- (unary-- x))", "x"),
        rule("NOT-NOT", &[], Iff, "(not (not x))", "x"),
        rule("NTH-UPDATE-NTH-SAME", &[], Equal, "(nth n (update-nth n v l))", "v"),
        rule("LEN-CONS", &[], Equal, "(len (cons x y))", "(binary-+ '1 (len y))"),
        rule("EQUAL-SAME", &[], Equal, "(equal x x)", "'t"),
        rule("CONSP-CONS", &[], Equal, "(consp (cons x y))", "'t"),
        rule("NFIX-NATURAL", &["(integerp x)", "(not (< x '0))"], Equal, "(nfix x)", "x"),
        rule(
            "LOGAND-LOGAPP",
            &["(equal (logtail m n) '0)"],
            Equal,
            "(logand n (logapp m a b))",
            "(logand n a)",
        ),
    ]
}

pub fn random_world(seed: u64) -> World {
    Gen::new(seed).world()
}

pub fn random_env(vars: &[Sym], seed: u64) -> Env {
    Gen::new(seed).env(vars, &[])
}

pub fn random_term(depth: usize, vars: &[Sym], seed: u64) -> Term {
    Gen::new(seed).term(depth, vars, &World::new())
}

/// Every quoted constant in `t`, plus the integers next to them.
pub fn constants_of(t: &Term, out: &mut Vec<Value>) {
    match t {
        Term::Quote(v) => {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
        Term::App(_, args) => args.iter().for_each(|a| constants_of(a, out)),
        Term::Var(_) => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn replayable() {
        let vars = [Sym::new("X"), Sym::new("Y")];
        assert_eq!(random_term(4, &vars, 7), random_term(4, &vars, 7));
        assert_eq!(random_env(&vars, 7), random_env(&vars, 7));
        assert_eq!(random_world(7), random_world(7));
    }

    #[test]
    fn generated_worlds_are_well_formed() {
        for seed in 0..30 {
            let w = random_world(seed);
            for d in w.definitions() {
                assert!(w.check_term(&d.body, Some((&d.name, d.formals.len()))).is_ok());
            }
            for r in w.rules() {
                let bound = r.lhs.free_vars();
                assert!(r.rhs.free_vars().iter().all(|v| bound.contains(v)));
            }
        }
    }
}
