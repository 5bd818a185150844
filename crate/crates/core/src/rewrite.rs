//! Conditional rewriter and the `mfc-*` oracles a metafunction may call.
//!
//! The rewriter works inside-out: arguments first, then ground folding of
//! primitive calls, then the world's rules for the head symbol in insertion
//! order. A successful rule application restarts at the same node. All work
//! done on behalf of one request shares a single step budget, so every call
//! terminates.

use std::sync::{Arc, Mutex};

use crate::eval::{eval, fold_ground, sublis_var, Env};
use crate::linarith::{linearize, refute};
use crate::term::{Alist, Sym, Term, Value};
use crate::typeset::{type_set_of, TypeSet};
use crate::world::{Equiv, RewriteRule, World};

pub const DEFAULT_BACKCHAIN: usize = 3;
pub const DEFAULT_REWRITE_CAP: usize = 1000;

/// Proof context handed to a metafunction: hypotheses assumed non-NIL and
/// the world they live in.
#[derive(Clone, Debug)]
pub struct MfcContext {
    pub hyps: Vec<Term>,
    pub world: World,
    trace: Option<Arc<Mutex<Vec<String>>>>,
}

impl MfcContext {
    pub fn new(hyps: Vec<Term>, world: World) -> Self {
        MfcContext { hyps, world, trace: None }
    }

    /// Records one line per rule application into `sink`.
    pub fn with_trace(mut self, sink: Arc<Mutex<Vec<String>>>) -> Self {
        self.trace = Some(sink);
        self
    }

    pub fn trace_sink(&self) -> Option<&Arc<Mutex<Vec<String>>>> {
        self.trace.as_ref()
    }

    fn record(&self, line: impl FnOnce() -> String) {
        if let Some(sink) = &self.trace {
            sink.lock().expect("trace sink poisoned").push(line());
        }
    }
}

/// One-way match of `pattern` against `t`: only pattern variables bind.
pub fn match_pattern(pattern: &Term, t: &Term) -> Option<Alist> {
    let mut out = Vec::new();
    match_into(pattern, t, &mut out).then_some(out)
}

fn match_into(pattern: &Term, t: &Term, out: &mut Alist) -> bool {
    match pattern {
        Term::Var(v) => match out.iter().find(|(k, _)| k == v) {
            Some((_, bound)) => bound == t,
            None => {
                out.push((v.clone(), t.clone()));
                true
            }
        },
        Term::Quote(_) => pattern == t,
        Term::App(f, pargs) => match t {
            Term::App(g, targs) if f == g && pargs.len() == targs.len() => {
                pargs.iter().zip(targs).all(|(p, x)| match_into(p, x, out))
            }
            _ => false,
        },
    }
}

struct Rewriter<'c> {
    ctx: &'c MfcContext,
    steps: usize,
    cap: usize,
}

impl<'c> Rewriter<'c> {
    fn new(ctx: &'c MfcContext, cap: usize) -> Self {
        Rewriter { ctx, steps: 0, cap }
    }

    fn rw(&mut self, t: &Term, equiv: Equiv, backchain: usize) -> Term {
        let cur = match t {
            Term::Quote(_) => return t.clone(),
            Term::Var(_) => t.clone(),
            Term::App(f, args) if f.is("IF") && args.len() == 3 => {
                let test = self.rw(&args[0], Equiv::Iff, backchain);
                if let Some(c) = test.as_quote() {
                    let branch = if c.truthy() { &args[1] } else { &args[2] };
                    return self.rw(branch, equiv, backchain);
                }
                let then = self.rw(&args[1], equiv, backchain);
                let els = self.rw(&args[2], equiv, backchain);
                Term::app("IF", vec![test, then, els])
            }
            Term::App(f, args) => {
                let args = args.iter().map(|a| self.rw(a, Equiv::Equal, backchain)).collect();
                let cur = fold_ground(Term::App(f.clone(), args));
                if let Some(next) = self.apply_rules(&cur, equiv, backchain) {
                    return self.rw(&next, equiv, backchain);
                }
                cur
            }
        };
        if equiv == Equiv::Iff && self.ctx.hyps.contains(&cur) {
            return Term::t();
        }
        cur
    }

    fn apply_rules(&mut self, t: &Term, equiv: Equiv, backchain: usize) -> Option<Term> {
        let Term::App(f, _) = t else { return None };
        let world = &self.ctx.world;
        for rule in world.rules_for(f) {
            if self.steps >= self.cap {
                return None;
            }
            if rule.equiv == Equiv::Iff && equiv == Equiv::Equal {
                continue;
            }
            let Some(sigma) = match_pattern(&rule.lhs, t) else { continue };
            if !self.relieve_rule_hyps(rule, &sigma, backchain) {
                continue;
            }
            self.steps += 1;
            let next = sublis_var(&sigma, &rule.rhs);
            self.ctx.record(|| format!("({} {} -> {})", rule.name, t, next));
            return Some(next);
        }
        None
    }

    fn relieve_rule_hyps(&mut self, rule: &RewriteRule, sigma: &Alist, backchain: usize) -> bool {
        if rule.hyps.is_empty() {
            return true;
        }
        if backchain == 0 {
            return false;
        }
        let budget = (backchain - 1).min(rule.backchain_limit.unwrap_or(usize::MAX));
        rule.hyps.iter().all(|h| self.relieve(&sublis_var(sigma, h), budget))
    }

    fn relieve(&mut self, hyp: &Term, backchain: usize) -> bool {
        if self.ctx.hyps.contains(hyp) {
            return true;
        }
        if hyp.is_ground() {
            if let Ok(v) = eval(hyp, &Env::new(), &self.ctx.world) {
                if v.truthy() {
                    return true;
                }
            }
        }
        if self.rw(hyp, Equiv::Iff, backchain).is_true_const() {
            return true;
        }
        mfc_ap(&Term::not(hyp.clone()), self.ctx)
    }
}

/// Rewrites `t` under the context; gives up quietly once `cap` rule
/// applications have been made.
pub fn rewrite(t: &Term, ctx: &MfcContext, equiv: Equiv, cap: usize) -> Term {
    Rewriter::new(ctx, cap).rw(t, equiv, DEFAULT_BACKCHAIN)
}

pub fn mfc_ts(t: &Term, ctx: &MfcContext) -> TypeSet {
    type_set_of(t, ctx)
}

/// Rewrites `t` under `alist`. The objective is accepted for interface
/// fidelity and ignored.
pub fn mfc_rw_plus(t: &Term, alist: &[(Sym, Term)], _obj: &Value, equiv: Equiv, ctx: &MfcContext) -> Term {
    rewrite(&sublis_var(alist, t), ctx, equiv, DEFAULT_REWRITE_CAP)
}

pub fn mfc_rw(t: &Term, obj: &Value, equiv: Equiv, ctx: &MfcContext) -> Term {
    mfc_rw_plus(t, &[], obj, equiv, ctx)
}

/// True when linear arithmetic over the context shows `t` is false.
pub fn mfc_ap(t: &Term, ctx: &MfcContext) -> bool {
    let Some(goal) = linearize(t) else { return false };
    let mut cs: Vec<_> = ctx.hyps.iter().filter_map(linearize).collect();
    cs.push(goal);
    refute(&cs)
}

/// Tries to establish `hyp` under `alist`. Rune, target and backpointer are
/// bookkeeping only.
pub fn mfc_relieve_hyp(
    hyp: &Term,
    alist: &[(Sym, Term)],
    _rune: &Value,
    _target: &Term,
    _backptr: usize,
    ctx: &MfcContext,
) -> bool {
    let inst = sublis_var(alist, hyp);
    Rewriter::new(ctx, DEFAULT_REWRITE_CAP).relieve(&inst, DEFAULT_BACKCHAIN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sexp::parse_term;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn rule(name: &str, hyps: &[&str], lhs: &str, rhs: &str) -> RewriteRule {
        RewriteRule {
            name: name.into(),
            hyps: hyps.iter().map(|h| t(h)).collect(),
            equiv: Equiv::Equal,
            lhs: t(lhs),
            rhs: t(rhs),
            backchain_limit: None,
        }
    }

    fn world() -> World {
        World::new()
            .add_rewrite_rule(rule("CAR-CONS", &[], "(car (cons x y))", "x"))
            .unwrap()
            .add_rewrite_rule(rule(
                "LOGAND-LOGAPP",
                &["(equal (logtail m n) '0)"],
                "(logand n (logapp m a b))",
                "(logand n a)",
            ))
            .unwrap()
    }

    fn ctx(hyps: &[&str]) -> MfcContext {
        MfcContext::new(hyps.iter().map(|h| t(h)).collect(), world())
    }

    #[test]
    fn rewrites_with_rules_and_folding() {
        let c = ctx(&[]);
        assert_eq!(rewrite(&t("(car (cons x y))"), &c, Equiv::Equal, 1000), t("x"));
        assert_eq!(rewrite(&t("(binary-+ '1 '2)"), &c, Equiv::Equal, 1000), t("'3"));
        assert_eq!(
            rewrite(&t("(logand '16 (logapp '6 d e))"), &c, Equiv::Equal, 1000),
            t("(logand '16 d)")
        );
        // The hypothesis fails for a non-constant width.
        assert_eq!(
            rewrite(&t("(logand '16 (logapp k d e))"), &c, Equiv::Equal, 1000),
            t("(logand '16 (logapp k d e))")
        );
    }

    #[test]
    fn iff_uses_hypothesis_membership() {
        let c = ctx(&["(consp x)"]);
        assert_eq!(rewrite(&t("(consp x)"), &c, Equiv::Iff, 1000), Term::t());
        assert_eq!(rewrite(&t("(consp x)"), &c, Equiv::Equal, 1000), t("(consp x)"));
        assert_eq!(rewrite(&t("(if (consp x) a b)"), &c, Equiv::Equal, 1000), t("a"));
    }

    #[test]
    fn rw_plus_and_rw() {
        let c = ctx(&[]);
        let al = vec![(Sym::new("X"), Term::int(1))];
        assert_eq!(mfc_rw_plus(&t("(binary-+ x '2)"), &al, &Value::sym("?"), Equiv::Equal, &c), t("'3"));
        assert_eq!(mfc_rw(&t("(car (cons x y))"), &Value::sym("?"), Equiv::Equal, &c), t("x"));
        assert_eq!(mfc_rw(&t("'5"), &Value::sym("?"), Equiv::Equal, &c), t("'5"));
    }

    #[test]
    fn ap_cases() {
        assert!(mfc_ap(&t("(< '6 x)"), &ctx(&["(< x '5)"])));
        assert!(!mfc_ap(&t("(< x '10)"), &ctx(&[])));
        assert!(!mfc_ap(&t("(consp x)"), &ctx(&["(< x '5)"])));
    }

    #[test]
    fn relieve_hyp_cases() {
        let none = Value::nil();
        let al = vec![(Sym::new("M"), Term::int(6)), (Sym::new("N"), Term::int(16))];
        assert!(mfc_relieve_hyp(&t("(equal (logtail m n) '0)"), &al, &none, &Term::nil(), 0, &ctx(&[])));
        assert!(mfc_relieve_hyp(&t("(symbolp x)"), &[], &none, &Term::nil(), 0, &ctx(&["(symbolp x)"])));
        assert!(!mfc_relieve_hyp(&t("(consp x)"), &[], &none, &Term::nil(), 0, &ctx(&[])));
        assert!(mfc_relieve_hyp(&t("(< x '7)"), &[], &none, &Term::nil(), 0, &ctx(&["(< x '5)"])));
    }

    #[test]
    fn backchain_limit_zero_blocks_conditional_rules() {
        let mut r = rule("CONSP-CAR", &["(consp x)"], "(car (cons (car x) y))", "(car x)");
        r.backchain_limit = Some(0);
        let w = World::new().add_rewrite_rule(r).unwrap();
        let c = MfcContext::new(vec![t("(consp x)")], w);
        // Membership in the context needs no backchaining.
        assert_eq!(rewrite(&t("(car (cons (car x) y))"), &c, Equiv::Equal, 1000), t("(car x)"));
    }

    #[test]
    fn looping_rules_stop_at_the_cap() {
        let w = World::new()
            .add_defun("F".into(), vec!["X".into(), "Y".into()], t("(binary-+ x y)"))
            .unwrap()
            .add_rewrite_rule(rule("FLIP", &[], "(f x y)", "(f y x)"))
            .unwrap();
        let c = MfcContext::new(vec![], w);
        let out = rewrite(&t("(f a b)"), &c, Equiv::Equal, 7);
        assert_eq!(out, t("(f b a)"));
    }

    #[test]
    fn trace_lines() {
        let sink = Arc::new(Mutex::new(Vec::new()));
        let c = ctx(&[]).with_trace(sink.clone());
        rewrite(&t("(car (cons a b))"), &c, Equiv::Equal, 1000);
        assert_eq!(sink.lock().unwrap().as_slice(), ["(CAR-CONS (CAR (CONS A B)) -> A)"]);
    }

    #[test]
    fn matching_is_one_way_and_consistent() {
        assert!(match_pattern(&t("(f x x)"), &t("(f a b)")).is_none());
        assert_eq!(match_pattern(&t("(f x x)"), &t("(f a a)")).unwrap(), vec![(Sym::new("X"), t("a"))]);
        assert!(match_pattern(&t("(f 'a)"), &t("(f x)")).is_none());
    }
}
