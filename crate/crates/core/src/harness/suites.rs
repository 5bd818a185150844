//! Property suites shared by `metakernel selftest` and the test targets.
//!
//! Each suite draws its cases from a seeded generator and stops at the
//! first counterexample. A case is counted as exercised when the property
//! had something to say about it, e.g. a hypothesis was actually relieved.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use crate::eval::{eval, eval_alist, sublis_var, Env};
use crate::linarith::{linearize, refute, LinearConstraint};
use crate::meta_extract::{Ledger, Mfc};
use crate::rewrite::{mfc_ap, mfc_relieve_hyp, rewrite, MfcContext, DEFAULT_REWRITE_CAP};
use crate::sexp::parse_term;
use crate::term::{Sym, Term, Value};
use crate::typeset::{type_set_of, TypeSet};
use crate::world::{Equiv, World};

use super::gen::{valid_rules, Gen};
use super::session::Session;
use super::{envs_for, finish, satisfies, RunOptions};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub exercised: usize,
    pub counterexample: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => write!(f, "(SUITE {} PASS :CASES {} :EXERCISED {})", self.name, self.cases, self.exercised),
            Some(c) => write!(f, "(SUITE {} FAIL :CASES {} {})", self.name, self.cases, Value::string(c)),
        }
    }
}

/// `case` returns whether the case exercised the property.
fn run_suite(name: &'static str, cases: usize, mut case: impl FnMut(usize) -> Result<bool, String>) -> SuiteResult {
    let mut exercised = 0;
    for i in 0..cases {
        match case(i) {
            Ok(hit) => exercised += usize::from(hit),
            Err(c) => return SuiteResult { name, cases: i + 1, exercised, counterexample: Some(c) },
        }
    }
    SuiteResult { name, cases, exercised, counterexample: None }
}

fn vars() -> Vec<Sym> {
    ["X", "Y", "Z"].into_iter().map(Sym::new).collect()
}

fn case_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i as u64)
}

/// print then parse gives back the same term.
pub fn sexp_round_trip(cases: usize, seed: u64) -> SuiteResult {
    let vs = vars();
    run_suite("SEXP-ROUND-TRIP", cases, |i| {
        let mut g = Gen::new(case_seed(seed, i));
        let w = g.world();
        let t = g.term(4, &vs, &w);
        let text = t.to_string();
        match parse_term(&text) {
            Ok(back) if back == t => Ok(true),
            other => Err(format!("{text} reads back as {other:?}")),
        }
    })
}

/// `eval(sublis_var(al, x), a) = eval(x, append(eval_alist(al, a), a))`.
pub fn sublis_var_law(cases: usize, seed: u64) -> SuiteResult {
    let vs = vars();
    run_suite("SUBLIS-VAR-LAW", cases, |i| {
        let mut g = Gen::new(case_seed(seed, i));
        let w = g.world();
        let n = g.rng().gen_range(0..=3);
        let al: Vec<(Sym, Term)> = vs[..n].iter().map(|v| (v.clone(), g.term(2, &vs, &w))).collect();
        let x = g.term(3, &vs, &w);
        let a = g.env(&vs, &[]);
        let Ok(bound) = eval_alist(&al, &a, &w) else { return Ok(false) };
        let Ok(rhs) = eval(&x, &bound.append(&a), &w) else { return Ok(false) };
        let lhs_term = sublis_var(&al, &x);
        match eval(&lhs_term, &a, &w) {
            Ok(lhs) if lhs == rhs => Ok(true),
            other => Err(format!("alist {al:?}, term {x}, env {}: {other:?} vs {rhs}", a.to_value())),
        }
    })
}

/// Every definitional equation evaluates to true.
pub fn definitional_soundness(cases: usize, seed: u64) -> SuiteResult {
    run_suite("DEFINITIONAL-SOUNDNESS", cases, |i| {
        let mut g = Gen::new(case_seed(seed, i));
        let w = g.world();
        let defs: Vec<Sym> = w.definitions().map(|d| d.name.clone()).collect();
        let mut checked = false;
        for f in defs {
            let formula = w.meta_extract_formula(&f);
            let vs = formula.free_vars();
            for _ in 0..20 {
                let env = g.env(&vs, &[]);
                if let Ok(v) = eval(&formula, &env, &w) {
                    if v.is_nil() {
                        return Err(format!("{formula} is false in {}", env.to_value()));
                    }
                    checked = true;
                }
            }
        }
        Ok(checked)
    })
}

struct Instance {
    world: World,
    hyps: Vec<Term>,
    term: Term,
    envs: Vec<Env>,
}

fn instance(seed: u64, depth: usize, env_count: usize) -> Instance {
    let vs = vars();
    let mut g = Gen::new(seed);
    let world = g.world();
    let nh = g.rng().gen_range(0..=2);
    let hyps: Vec<Term> = (0..nh).map(|_| g.hyp(&vs, &world)).collect();
    let term = g.term(depth, &vs, &world);
    let mut all: Vec<&Term> = hyps.iter().collect();
    all.push(&term);
    let envs = envs_for(&all, env_count, seed ^ 0x5eed);
    let envs = envs.into_iter().filter(|e| satisfies(&hyps, e, &world)).collect();
    Instance { world, hyps, term, envs }
}

/// The type set of a term contains the type of its value, and more
/// hypotheses never enlarge it.
pub fn typeset_soundness(cases: usize, seed: u64) -> SuiteResult {
    run_suite("TYPESET-SOUNDNESS", cases, |i| {
        let inst = instance(case_seed(seed, i), 3, 40);
        let ctx = MfcContext::new(inst.hyps.clone(), inst.world.clone());
        let ts = type_set_of(&inst.term, &ctx);
        let mut checked = false;
        for env in &inst.envs {
            if let Ok(v) = eval(&inst.term, env, &inst.world) {
                if !ts.check(&v) {
                    return Err(format!(
                        "{} under {:?} has type set {ts} but value {v} in {}",
                        inst.term,
                        inst.hyps,
                        env.to_value()
                    ));
                }
                checked = true;
            }
        }
        let mut more = inst.hyps.clone();
        more.push(Gen::new(case_seed(seed, i) + 1).hyp(&vars(), &inst.world));
        let narrower = type_set_of(&inst.term, &MfcContext::new(more, inst.world.clone()));
        if !narrower.is_subset(ts) {
            return Err(format!("adding a hypothesis grew the type set of {}", inst.term));
        }
        if let Term::Quote(v) = &inst.term {
            if ts != TypeSet::of_value(v) || ts.atoms().count() != 1 {
                return Err(format!("quoted {v} is not a singleton"));
            }
        }
        Ok(checked && ts != TypeSet::TOP)
    })
}

/// Rewriting preserves values under EQUAL and truth values under IFF, and
/// a second rewrite changes nothing.
pub fn rewrite_preservation(cases: usize, seed: u64) -> SuiteResult {
    run_suite("REWRITE-PRESERVATION", cases, |i| {
        let inst = instance(case_seed(seed, i), 4, 40);
        let ctx = MfcContext::new(inst.hyps.clone(), inst.world.clone());
        let mut hit = false;
        for equiv in [Equiv::Equal, Equiv::Iff] {
            let out = rewrite(&inst.term, &ctx, equiv, DEFAULT_REWRITE_CAP);
            let again = rewrite(&out, &ctx, equiv, DEFAULT_REWRITE_CAP);
            if again != out {
                return Err(format!("{} rewrites to {out}, then to {again}", inst.term));
            }
            for env in &inst.envs {
                let (Ok(a), Ok(b)) = (eval(&inst.term, env, &inst.world), eval(&out, env, &inst.world)) else {
                    continue;
                };
                let agree = match equiv {
                    Equiv::Equal => a == b,
                    Equiv::Iff => a.truthy() == b.truthy(),
                };
                if !agree {
                    return Err(format!(
                        "{} ~> {out} under {equiv} with hyps {:?}: {a} vs {b} in {}",
                        inst.term,
                        inst.hyps,
                        env.to_value()
                    ));
                }
                hit |= out != inst.term;
            }
        }
        Ok(hit)
    })
}

fn arith_literal(g: &mut Gen, vs: &[Sym]) -> Term {
    let x = Term::Var(vs[g.rng().gen_range(0..vs.len())].clone());
    let y = Term::Var(vs[g.rng().gen_range(0..vs.len())].clone());
    let k = Term::int(g.small_int(-5, 5));
    let lhs = match g.rng().gen_range(0..3) {
        0 => x,
        1 => Term::app("BINARY-+", vec![x, y]),
        _ => Term::app("BINARY-*", vec![Term::int(g.small_int(-3, 3)), x]),
    };
    match g.rng().gen_range(0..4) {
        0 => Term::app("<", vec![lhs, k]),
        1 => Term::app("<", vec![k, lhs]),
        2 => Term::not(Term::app("<", vec![lhs, k])),
        _ => Term::equal(lhs, k),
    }
}

/// A literal implied by the arithmetic literal `lit`, with its constant
/// moved by up to 3 in the safe direction.
fn weaken(lit: &Term, g: &mut Gen) -> Option<Term> {
    let d = g.small_int(0, 3);
    let shift = |k: &Term, by: i64| {
        let r = k.as_quote()?.as_rational()?;
        Some(Term::Quote(Value::rational(r + BigRational::from_integer(by.into()))))
    };
    if let Some([a, b]) = lit.as_call("<", 2) {
        return if b.is_quote() {
            Some(Term::app("<", vec![a.clone(), shift(b, d)?]))
        } else {
            Some(Term::app("<", vec![shift(a, -d)?, b.clone()]))
        };
    }
    if let Some([inner]) = lit.as_call("NOT", 1) {
        let [a, b] = inner.as_call("<", 2)? else { return None };
        return if b.is_quote() {
            Some(Term::not(Term::app("<", vec![a.clone(), shift(b, -d)?])))
        } else {
            Some(Term::not(Term::app("<", vec![shift(a, d)?, b.clone()])))
        };
    }
    let [a, b] = lit.as_call("EQUAL", 2)? else { return None };
    Some(Term::not(Term::app("<", vec![a.clone(), shift(b, -d)?])))
}

/// Hypotheses over one or two variables, and a literal that is either
/// random or implied by one of them.
fn arith_context(g: &mut Gen) -> (Vec<Term>, Term) {
    let vs = vars();
    let vs = &vs[..g.rng().gen_range(1..=2)];
    let n = g.rng().gen_range(1..=4);
    let hyps: Vec<Term> = (0..n).map(|_| arith_literal(g, vs)).collect();
    let pick = g.rng().gen_range(0..hyps.len());
    let implied = if g.rng().gen_bool(0.5) { weaken(&hyps[pick], g) } else { None };
    let lit = implied.unwrap_or_else(|| arith_literal(g, vs));
    (hyps, lit)
}

/// Checks that `fact` holds wherever `hyps` do; reports whether some
/// sampled environment satisfied the hypotheses.
fn holds_under(hyps: &[Term], fact: &Term, w: &World, seed: u64) -> Result<bool, String> {
    let mut all: Vec<&Term> = hyps.iter().collect();
    all.push(fact);
    let mut checked = false;
    for env in envs_for(&all, 200, seed) {
        if !satisfies(hyps, &env, w) {
            continue;
        }
        match eval(fact, &env, w) {
            Ok(v) if v.is_nil() => return Err(format!("{fact} is false under {hyps:?} in {}", env.to_value())),
            Ok(_) => checked = true,
            Err(_) => {}
        }
    }
    Ok(checked)
}

/// A relieved hypothesis holds wherever the context does.
pub fn relieve_hyp_soundness(cases: usize, seed: u64) -> SuiteResult {
    run_suite("RELIEVE-HYP-SOUNDNESS", cases, |i| {
        let mut g = Gen::new(case_seed(seed, i));
        if g.rng().gen_bool(0.5) {
            let (hyps, lit) = arith_context(&mut g);
            // Abstract one variable so the alist does some work.
            let al = vec![(Sym::new("M"), Term::var("X"))];
            let pattern = lit.substitute(&[(Sym::new("X"), Term::var("M"))]);
            let ctx = MfcContext::new(hyps.clone(), World::new());
            if !mfc_relieve_hyp(&pattern, &al, &Value::nil(), &Term::nil(), 0, &ctx) {
                return Ok(false);
            }
            return holds_under(&hyps, &sublis_var(&al, &pattern), &World::new(), case_seed(seed, i));
        }
        let inst = instance(case_seed(seed, i), 2, 0);
        let hyp = if g.rng().gen_bool(0.5) && !inst.hyps.is_empty() {
            inst.hyps[0].clone()
        } else {
            g.hyp(&vars(), &inst.world)
        };
        let ctx = MfcContext::new(inst.hyps.clone(), inst.world.clone());
        if !mfc_relieve_hyp(&hyp, &[], &Value::nil(), &Term::nil(), 0, &ctx) {
            return Ok(false);
        }
        holds_under(&inst.hyps, &hyp, &inst.world, case_seed(seed, i))
    })
}

/// When linear arithmetic refutes a literal, its negation holds wherever
/// the context does.
pub fn ap_soundness(cases: usize, seed: u64) -> SuiteResult {
    run_suite("AP-SOUNDNESS", cases, |i| {
        let mut g = Gen::new(case_seed(seed, i));
        let (hyps, lit) = arith_context(&mut g);
        let t = if g.rng().gen_bool(0.7) { Term::not(lit) } else { lit };
        let w = World::new();
        if !mfc_ap(&t, &MfcContext::new(hyps.clone(), w.clone())) {
            return Ok(false);
        }
        holds_under(&hyps, &Term::not(t), &w, case_seed(seed, i))
    })
}

/// A system of integer-coefficient constraints over at most three atoms.
#[derive(Clone, Debug)]
pub struct SmallSystem {
    /// `(coefficients, constant, relation)` meaning `c . x + k REL 0`,
    /// with REL one of `<`, `<=`, `=`.
    pub rows: Vec<([i64; 3], i64, &'static str)>,
}

impl SmallSystem {
    /// The rows as literals over X0, X1, X2.
    pub fn literals(&self) -> Vec<Term> {
        self.rows
            .iter()
            .map(|(c, k, rel)| {
                let mut sum = Term::int(*k);
                for (j, cj) in c.iter().enumerate() {
                    if *cj != 0 {
                        let atom = Term::var(&format!("X{j}"));
                        sum = Term::app("BINARY-+", vec![Term::app("BINARY-*", vec![Term::int(*cj), atom]), sum]);
                    }
                }
                let zero = Term::int(0);
                match *rel {
                    "<" => Term::app("<", vec![sum, zero]),
                    "<=" => Term::not(Term::app("<", vec![zero, sum])),
                    _ => Term::equal(sum, zero),
                }
            })
            .collect()
    }

    pub fn constraints(&self) -> Vec<LinearConstraint> {
        self.literals().iter().map(|l| linearize(l).expect("linear literal")).collect()
    }

    /// Exact test at `x = k / den`, in integer arithmetic.
    fn holds_at(&self, k: [i64; 3], den: i64) -> bool {
        self.rows.iter().all(|(c, konst, rel)| {
            let v: i64 = c.iter().zip(k).map(|(a, b)| a * b).sum::<i64>() + konst * den;
            match *rel {
                "<" => v < 0,
                "<=" => v <= 0,
                _ => v == 0,
            }
        })
    }

    /// A grid point in [-8, 8]^3 with step 1/4 satisfying every row.
    pub fn grid_witness(&self) -> Option<[i64; 3]> {
        let r = -32..=32;
        for a in r.clone() {
            for b in r.clone() {
                for c in r.clone() {
                    if self.holds_at([a, b, c], 4) {
                        return Some([a, b, c]);
                    }
                }
            }
        }
        None
    }
}

fn random_system(g: &mut Gen) -> SmallSystem {
    let atoms = g.rng().gen_range(1..=3);
    let rows = (0..g.rng().gen_range(2..=5))
        .map(|_| {
            let mut c = [0i64; 3];
            for cj in c.iter_mut().take(atoms) {
                *cj = g.small_int(-5, 5);
            }
            let rel = ["<", "<=", "<", "<=", "="][g.rng().gen_range(0..5)];
            (c, g.small_int(-6, 6), rel)
        })
        .collect();
    SmallSystem { rows }
}

/// A system satisfied by a random point with coordinates in quarters.
pub fn witnessed_system(g: &mut Gen) -> (SmallSystem, [BigRational; 3]) {
    let k: [i64; 3] = [g.small_int(-16, 16), g.small_int(-16, 16), g.small_int(-16, 16)];
    let witness = k.map(|x| BigRational::new(BigInt::from(x), BigInt::from(4)));
    let rows = (0..g.rng().gen_range(2..=6))
        .map(|_| {
            let c = [g.small_int(-5, 5), g.small_int(-5, 5), g.small_int(-5, 5)];
            let rel = ["<", "<=", "="][g.rng().gen_range(0..3)];
            // Scale by 4 so the witness value c . k / 4 becomes an integer.
            let c4 = c.map(|x| 4 * x);
            let at: i64 = c.iter().zip(k).map(|(a, b)| a * b).sum();
            let slack = match rel {
                "<" => g.small_int(1, 5),
                "<=" => g.small_int(0, 5),
                _ => 0,
            };
            (c4, -at - slack, rel)
        })
        .collect();
    (SmallSystem { rows }, witness)
}

/// Refuted systems have no grid solution; systems with a known solution
/// are never refuted.
pub fn linarith_soundness(refuted_wanted: usize, satisfiable: usize, seed: u64) -> SuiteResult {
    let mut g = Gen::new(seed);
    let mut found = 0;
    let mut attempts = 0;
    while found < refuted_wanted && attempts < refuted_wanted * 200 {
        attempts += 1;
        let sys = random_system(&mut g);
        if refute(&sys.constraints()) {
            found += 1;
            if let Some(p) = sys.grid_witness() {
                return SuiteResult {
                    name: "LINARITH-SOUNDNESS",
                    cases: found,
                    exercised: found,
                    counterexample: Some(format!("refuted {:?} but it holds at {p:?}/4", sys.literals())),
                };
            }
        }
    }
    if found < refuted_wanted {
        return SuiteResult {
            name: "LINARITH-SOUNDNESS",
            cases: found,
            exercised: found,
            counterexample: Some(format!("only {found} refutable systems in {attempts} attempts")),
        };
    }
    for i in 0..satisfiable {
        let (sys, w) = witnessed_system(&mut g);
        if refute(&sys.constraints()) {
            return SuiteResult {
                name: "LINARITH-SOUNDNESS",
                cases: found + i + 1,
                exercised: found + i,
                counterexample: Some(format!("refuted {:?} although {w:?} satisfies it", sys.literals())),
            };
        }
    }
    SuiteResult { name: "LINARITH-SOUNDNESS", cases: found + satisfiable, exercised: found + satisfiable, counterexample: None }
}

const CONTEXT_RULES: &str = "
(defcontext logbitp-context () (logbitp n (logand (ash 1 (nfix n)) m)) (logbitp n m))
(defcontext logior-context () (logand n (logior a (logand n b))) (logand n (logior a b)))
(defcontext logand-context () (logand n (logand (logand n a) b)) (logand n (logand a b)))
";

/// Event text for a generated scenario: a random world written as events,
/// a stobj, both metafunctions, the context rules and a mix of queries.
pub fn random_scenario(seed: u64) -> String {
    let mut g = Gen::new(seed);
    let w = g.world();
    let mut out = String::new();
    let rules: Vec<_> = w.rules().map(|r| r.name.clone()).collect();
    for d in w.definitions() {
        let formals = Value::list(d.formals.iter().map(|f| Value::Symbol(f.clone())).collect::<Vec<_>>());
        out.push_str(&format!("(defun {} {} {})\n", d.name, formals, d.body.to_value()));
    }
    for r in valid_rules().into_iter().filter(|r| rules.contains(&r.name)) {
        let hyps = Value::list(r.hyps.iter().map(Term::to_value).collect::<Vec<_>>());
        out.push_str(&format!("(defrule {} {} {} {} {})\n", r.name, hyps, r.equiv, r.lhs.to_value(), r.rhs.to_value()));
    }
    out.push_str("(defstobj st fld1 fld2 fld3 fld4)\n(defmeta nth-symbolp-metafn :trigger-fns (nth))\n");
    out.push_str(CONTEXT_RULES);
    let world = {
        let mut s = Session::new();
        for f in crate::sexp::read_forms(&out).expect("generated events parse") {
            s.event(&f.value).expect("generated events are valid");
        }
        s.world
    };
    let vs = vec![Sym::new("X"), Sym::new("Y"), Sym::new("ST")];
    for _ in 0..6 {
        let nh = g.rng().gen_range(0..=2);
        let hyps = Value::list((0..nh).map(|_| g.hyp(&vs, &world).to_value()).collect::<Vec<_>>());
        let t = g.term(3, &vs, &world).to_value();
        let q = match g.rng().gen_range(0..6) {
            0 | 1 => format!("(simplify {t} :hyps {hyps})"),
            2 => format!("(context-simplify {t} :hyps {hyps})"),
            3 => format!("(rewrite {t} :hyps {hyps} :equiv {})", if g.rng().gen_bool(0.5) { "iff" } else { "equal" }),
            4 => {
                let k = g.small_int(-5, 5);
                let hyps = if g.rng().gen_bool(0.6) {
                    format!("((rationalp x) (rationalp y) (<= x '{k}) (<= y '{k}))")
                } else {
                    hyps.to_string()
                };
                format!("(prove-bounds (<= (+ x (* 2 y)) '{}) ((<= x '{k}) (<= y '{k})) :hyps {hyps})", 3 * k)
            }
            _ => {
                let j = g.small_int(1, 4);
                let i = g.small_int(1, 4);
                format!("(simplify (fld{j} (update-fld{i} {t} (update-fld{j} x st))) :hyps {hyps})")
            }
        };
        out.push_str(&q);
        out.push('\n');
    }
    out
}

/// Every generated scenario runs with a clean ledger and sound results.
pub fn scenario_soundness(cases: usize, seed: u64, samples: usize) -> SuiteResult {
    run_suite("SCENARIO-SOUNDNESS", cases, |i| {
        let text = random_scenario(case_seed(seed, i));
        let options = RunOptions { samples, seed: case_seed(seed, i), trace: false };
        let report = super::run_source(&text, &options).map_err(|e| format!("{e}\n{text}"))?;
        if report.violation_count() > 0 {
            let first = report
                .ledger
                .violations()
                .map(|v| v.to_string())
                .chain(report.failures.iter().map(|f| f.description.clone()))
                .next()
                .unwrap_or_default();
            return Err(format!("{first}\n{text}"));
        }
        Ok(report.ledger.checks() > 0)
    })
}

/// Facts consumed through the toolkit on random queries check true.
pub fn ledger_soundness(cases: usize, seed: u64) -> SuiteResult {
    run_suite("LEDGER-SOUNDNESS", cases, |i| {
        let inst = instance(case_seed(seed, i), 3, 0);
        let ctx = MfcContext::new(inst.hyps.clone(), inst.world.clone());
        let ledger = Ledger::new();
        let mfc = Mfc::new(&ctx, &ledger);
        let obj = Value::sym("?");
        mfc.ts(&inst.term);
        mfc.rw(&inst.term, &obj, Equiv::Equal);
        mfc.rw(&inst.term, &obj, Equiv::Iff);
        mfc.ap(&inst.term);
        mfc.relieve_hyp(&inst.term, &[], &Value::nil(), &Term::nil(), 0);
        if let Some((f, args)) = inst.term.as_app() {
            if let Some(vals) = args.iter().map(|a| a.as_quote().cloned()).collect::<Option<Vec<_>>>() {
                mfc.fncall(f, &vals);
            }
            mfc.formula(f);
            mfc.lemma(f, 0);
        }
        let mut s = Session::new();
        s.world = inst.world.clone();
        for o in ledger.obligations() {
            s.ledger.record(o);
        }
        let report = finish(&s, Vec::new(), &RunOptions { samples: 60, seed: case_seed(seed, i), trace: false });
        let first = report.ledger.violations().next().map(|v| v.to_string());
        match first {
            Some(v) => Err(format!("{v} with hyps {:?}", inst.hyps)),
            None => Ok(report.ledger.checks() > 0),
        }
    })
}

/// All suites with the sizes used by `selftest`.
pub fn all(seed: u64) -> Vec<SuiteResult> {
    vec![
        sexp_round_trip(1000, seed),
        sublis_var_law(500, seed),
        definitional_soundness(100, seed),
        typeset_soundness(500, seed),
        rewrite_preservation(500, seed),
        relieve_hyp_soundness(500, seed),
        ap_soundness(500, seed),
        linarith_soundness(200, 200, seed),
        ledger_soundness(200, seed),
        scenario_soundness(50, seed, 300),
    ]
}
