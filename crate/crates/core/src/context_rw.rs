//! Context-sensitive rewriting.
//!
//! A context rule is an equality whose right-hand side is its left-hand
//! side with one subterm abstracted to a variable, e.g.
//!
//! ```text
//! (LOGBITP N (LOGAND (ASH '1 (NFIX N)) M)) = (LOGBITP N M)
//! ```
//!
//! Read right to left it says that the argument `M` of `LOGBITP` may be
//! simplified as if it were wrapped in `(LOGAND (ASH '1 (NFIX N)) _)`.
//! The simplifier wraps the subterm in that context, simplifies the
//! wrapped term (propagating further contexts inward), and splices the
//! simplified subterm back if the wrapper survived.

use std::fmt;

use thiserror::Error;

use crate::eval::sublis_var;
use crate::meta_extract::Mfc;
use crate::rewrite::match_pattern;
use crate::term::{Sym, Term, Value};
use crate::world::{conjoin, Equiv};

pub const CONTEXT_DEPTH_CAP: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContextRule {
    pub name: Sym,
    pub hyps: Vec<Term>,
    pub lhs: Term,
    pub rhs: Term,
    pub hole_var: Sym,
    /// Position of `hole_var` in `rhs`, and of the context in `lhs`.
    pub hole_path: Vec<usize>,
    /// Position of `hole_var` inside the context.
    context_path: Vec<usize>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContextRuleError {
    #[error("the two sides are identical")]
    NoDifference,
    #[error("the two sides differ in more than one position")]
    SeveralDifferences,
    #[error("the right-hand side of the difference, {0}, is not a variable")]
    NotAVariable(Term),
    #[error("the variable {0} occurs more than once in the right-hand side")]
    VariableRecurs(Sym),
    #[error("the variable {0} must occur exactly once in the context")]
    ContextOccurrence(Sym),
    #[error("hypothesis variable {0} is not bound by the right-hand side")]
    UnboundHypVar(Sym),
}

/// Positions where `a` and `b` differ, descending through matching heads.
fn diff(a: &Term, b: &Term, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if a == b {
        return;
    }
    match (a, b) {
        (Term::App(f, xs), Term::App(g, ys)) if f == g && xs.len() == ys.len() => {
            for (i, (x, y)) in xs.iter().zip(ys).enumerate() {
                path.push(i);
                diff(x, y, path, out);
                path.pop();
            }
        }
        _ => out.push(path.clone()),
    }
}

fn path_of(t: &Term, v: &Sym) -> Option<Vec<usize>> {
    match t {
        Term::Var(x) if x == v => Some(Vec::new()),
        Term::App(_, args) => args.iter().enumerate().find_map(|(i, a)| {
            let mut p = path_of(a, v)?;
            p.insert(0, i);
            Some(p)
        }),
        _ => None,
    }
}

impl ContextRule {
    pub fn new(name: Sym, hyps: Vec<Term>, lhs: Term, rhs: Term) -> Result<ContextRule, ContextRuleError> {
        let mut diffs = Vec::new();
        diff(&lhs, &rhs, &mut Vec::new(), &mut diffs);
        let hole_path = match diffs.len() {
            0 => return Err(ContextRuleError::NoDifference),
            1 => diffs.pop().expect("one difference"),
            _ => return Err(ContextRuleError::SeveralDifferences),
        };
        let hole = rhs.at_path(&hole_path).expect("diff path is in range");
        let Term::Var(hole_var) = hole else {
            return Err(ContextRuleError::NotAVariable(hole.clone()));
        };
        let hole_var = hole_var.clone();
        if rhs.occurrences(&hole_var) != 1 {
            return Err(ContextRuleError::VariableRecurs(hole_var));
        }
        let context = lhs.at_path(&hole_path).expect("diff path is in range");
        if context.occurrences(&hole_var) != 1 || lhs.occurrences(&hole_var) != 1 {
            return Err(ContextRuleError::ContextOccurrence(hole_var));
        }
        let context_path = path_of(context, &hole_var).expect("occurs once");
        let bound = rhs.free_vars();
        if let Some(v) = hyps.iter().flat_map(Term::free_vars).find(|v| !bound.contains(v)) {
            return Err(ContextRuleError::UnboundHypVar(v));
        }
        Ok(ContextRule { name, hyps, lhs, rhs, hole_var, hole_path, context_path })
    }

    /// The wrapper term, with the hole variable at the hole.
    pub fn context(&self) -> &Term {
        self.lhs.at_path(&self.hole_path).expect("validated")
    }

    /// The rule read as a formula.
    pub fn formula(&self) -> Term {
        let eq = Term::equal(self.lhs.clone(), self.rhs.clone());
        if self.hyps.is_empty() {
            eq
        } else {
            Term::app("IMPLIES", vec![conjoin(&self.hyps), eq])
        }
    }
}

impl fmt::Display for ContextRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.formula())
    }
}

struct Simplifier<'a, 'm> {
    rules: &'a [ContextRule],
    mfc: &'a Mfc<'m>,
}

impl Simplifier<'_, '_> {
    fn simp(&self, t: &Term, depth: usize) -> Term {
        if depth >= CONTEXT_DEPTH_CAP {
            return t.clone();
        }
        for rule in self.rules {
            if let Some(out) = self.try_rule(rule, t, depth) {
                return out;
            }
        }
        match t {
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| self.simp(a, depth + 1)).collect()),
            _ => t.clone(),
        }
    }

    fn try_rule(&self, rule: &ContextRule, t: &Term, depth: usize) -> Option<Term> {
        let sigma = match_pattern(&rule.rhs, t)?;
        let rune = Value::list([Value::sym(":CONTEXT"), Value::Symbol(rule.name.clone())]);
        for h in &rule.hyps {
            if !self.mfc.relieve_hyp(h, &sigma, &rune, t, 0) {
                return None;
            }
        }
        let s = t.at_path(&rule.hole_path)?;
        let others: Vec<_> = sigma.iter().filter(|(k, _)| k != &rule.hole_var).cloned().collect();
        let skeleton = sublis_var(&others, rule.context());
        let wrapped = skeleton.replace_at(&rule.context_path, s.clone())?;
        let inner = self.simp(&wrapped, depth + 1);
        let rewritten = self.mfc.rw(&inner, &Value::sym("?"), Equiv::Equal);
        let s2 = rewritten.at_path(&rule.context_path)?;
        let hole = Term::Var(rule.hole_var.clone());
        if rewritten.replace_at(&rule.context_path, hole.clone())? != skeleton.replace_at(&rule.context_path, hole)? {
            return None;
        }
        if s2 == s {
            return None;
        }
        self.mfc.formula(&rule.name);
        t.replace_at(&rule.hole_path, s2.clone())
    }
}

/// Simplifies `t` top-down under the contexts that `rules` propagate.
pub fn context_simplify(t: &Term, rules: &[ContextRule], mfc: &Mfc) -> Term {
    Simplifier { rules, mfc }.simp(t, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meta_extract::Ledger;
    use crate::rewrite::MfcContext;
    use crate::sexp::parse_term;
    use crate::world::{RewriteRule, World};

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn rule(name: &str, lhs: &str, rhs: &str) -> Result<ContextRule, ContextRuleError> {
        ContextRule::new(name.into(), vec![], t(lhs), t(rhs))
    }

    fn logic_rules() -> Vec<ContextRule> {
        vec![
            rule("LOGBITP-CTX", "(logbitp n (logand (ash '1 (nfix n)) m))", "(logbitp n m)").unwrap(),
            rule("LOGIOR-CTX", "(logand n (logior a (logand n b)))", "(logand n (logior a b))").unwrap(),
            rule("LOGAND-CTX", "(logand n (logand (logand n a) b))", "(logand n (logand a b))").unwrap(),
        ]
    }

    fn world(rules: &[ContextRule]) -> World {
        let mut w = World::new()
            .add_rewrite_rule(RewriteRule {
                name: "LOGAND-LOGAPP".into(),
                hyps: vec![t("(equal (logtail m n) '0)")],
                equiv: Equiv::Equal,
                lhs: t("(logand n (logapp m a b))"),
                rhs: t("(logand n a)"),
                backchain_limit: None,
            })
            .unwrap();
        for r in rules {
            w = w.add_defthm(r.name.clone(), r.formula()).unwrap();
        }
        w
    }

    #[test]
    fn parses_rules() {
        let r = &logic_rules()[0];
        assert_eq!(r.hole_var, Sym::new("M"));
        assert_eq!(r.context(), &t("(logand (ash '1 (nfix n)) m)"));
        let r = &logic_rules()[1];
        assert_eq!(r.hole_var, Sym::new("B"));
        assert_eq!(r.context(), &t("(logand n b)"));
        assert_eq!(
            rule("X", "(f (g x) y)", "(f x x)").unwrap_err(),
            ContextRuleError::SeveralDifferences
        );
        assert_eq!(
            rule("X", "(logand n (logand n b))", "(logand n (logand b b))").unwrap_err(),
            ContextRuleError::VariableRecurs("B".into())
        );
        assert_eq!(rule("X", "(f x)", "(f x)").unwrap_err(), ContextRuleError::NoDifference);
        assert!(matches!(rule("X", "(f (g x))", "(f '1)"), Err(ContextRuleError::NotAVariable(_))));
    }

    #[test]
    fn logbitp_example() {
        let rules = logic_rules();
        let ctx = MfcContext::new(vec![], world(&rules));
        let ledger = Ledger::new();
        let mfc = Mfc::new(&ctx, &ledger);
        let input = t("(logbitp '4 (logand (logior a (logior b (logior c (logapp '6 d e)))) (logand f g)))");
        let want = t("(logbitp '4 (logand (logior a (logior b (logior c d))) (logand f g)))");
        assert_eq!(context_simplify(&input, &rules, &mfc), want);
        assert!(!ledger.is_empty());
    }

    #[test]
    fn no_rule_leaves_the_term() {
        let rules = logic_rules();
        let ctx = MfcContext::new(vec![], world(&rules));
        let ledger = Ledger::new();
        let mfc = Mfc::new(&ctx, &ledger);
        let input = t("(logior a (logapp '6 d e))");
        assert_eq!(context_simplify(&input, &rules, &mfc), input);
    }
}
