//! Event-file runner and the post-run checks.
//!
//! After the events of a file have been processed, every fact in the ledger
//! and every query result is checked by evaluation over a seeded sample of
//! environments.

pub mod gen;
pub mod session;
pub mod suites;

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::eval::{eval, Env};
use crate::meta_extract::LedgerReport;
use crate::sexp::{read_forms, ParseError};
use crate::term::{Sym, Term, Value};
use crate::world::{Equiv, World};
use gen::{constants_of, Gen};
use session::{EventError, Outcome, Session};
pub use suites::SuiteResult;

pub const DEFAULT_SAMPLES: usize = 1000;
pub const DEFAULT_SEED: u64 = 2017;

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub samples: usize,
    pub seed: u64,
    pub trace: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { samples: DEFAULT_SAMPLES, seed: DEFAULT_SEED, trace: false }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Event(#[from] EventError),
}

/// A query result that disagreed with evaluation.
#[derive(Clone, Debug)]
pub struct SoundnessFailure {
    pub outcome: usize,
    pub description: String,
    pub env: Env,
}

#[derive(Debug)]
pub struct RunReport {
    pub events_processed: usize,
    pub outcomes: Vec<Outcome>,
    /// Printed output, in event order.
    pub lines: Vec<String>,
    pub ledger: LedgerReport,
    pub failures: Vec<SoundnessFailure>,
    pub property_suites: Vec<SuiteResult>,
    pub seed: u64,
    pub samples: usize,
}

impl RunReport {
    pub fn violation_count(&self) -> usize {
        self.ledger.violations().count() + self.failures.len()
    }

    pub fn is_clean(&self) -> bool {
        self.violation_count() == 0 && self.property_suites.iter().all(SuiteResult::passed)
    }

    pub fn unproved(&self) -> usize {
        self.outcomes.iter().filter(|o| matches!(o, Outcome::Bounds { result, .. } if !result.proved)).count()
    }

    /// 0 clean, 1 violations, 3 some bound goal was not proved.
    pub fn exit_code(&self) -> i32 {
        if !self.is_clean() {
            1
        } else if self.unproved() > 0 {
            3
        } else {
            0
        }
    }

    /// The ledger and the summary, one S-expression per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "; seed {} samples {}", self.seed, self.samples);
        out.push_str(&self.ledger.to_string());
        for f in &self.failures {
            let _ = writeln!(out, "(UNSOUND {} {} {})", f.outcome, Value::string(&f.description), f.env.to_value());
        }
        for s in &self.property_suites {
            let _ = writeln!(out, "{s}");
        }
        let _ = writeln!(
            out,
            "(SUMMARY :EVENTS {} :OBLIGATIONS {} :CHECKS {} :VIOLATIONS {} :UNPROVED {})",
            self.events_processed,
            self.ledger.results.len(),
            self.ledger.checks(),
            self.violation_count(),
            self.unproved()
        );
        out
    }
}

pub fn run_events(path: &Path, options: &RunOptions) -> Result<RunReport, RunError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| RunError::Io { path: path.display().to_string(), source })?;
    run_source(&text, options)
}

pub fn run_source(text: &str, options: &RunOptions) -> Result<RunReport, RunError> {
    let forms = read_forms(text)?;
    let mut session = if options.trace { Session::new().with_trace() } else { Session::new() };
    let mut lines = Vec::new();
    for form in &forms {
        let printed = session.event(&form.value)?.map(|o| o.to_string());
        lines.extend(session.take_trace());
        lines.extend(printed);
    }
    Ok(finish(&session, lines, options))
}

/// Runs the post-run checks on a session.
pub fn finish(session: &Session, lines: Vec<String>, options: &RunOptions) -> RunReport {
    let envs = sample_envs(session, options.samples, options.seed);
    let ledger = session.ledger.check(&envs, &session.world);
    let failures = session
        .outcomes
        .iter()
        .enumerate()
        .filter_map(|(i, o)| {
            check_outcome(o, &envs, &session.world)
                .map(|(description, env)| SoundnessFailure { outcome: i, description, env })
        })
        .collect();
    RunReport {
        events_processed: session.events_processed(),
        outcomes: session.outcomes.clone(),
        lines,
        ledger,
        failures,
        property_suites: Vec::new(),
        seed: options.seed,
        samples: options.samples,
    }
}

fn outcome_terms(o: &Outcome) -> Vec<&Term> {
    match o {
        Outcome::Simplified { input, output, hyps, .. } => [input, output].into_iter().chain(hyps).collect(),
        Outcome::Bounds { goal, hyps, .. } => std::iter::once(goal).chain(hyps).collect(),
        Outcome::Fact { fact, .. } => vec![fact],
    }
}

/// Environments over every variable the run mentions, biased toward the
/// constants it mentions.
pub fn sample_envs(session: &Session, n: usize, seed: u64) -> Vec<Env> {
    let obligations = session.ledger.obligations();
    let mut terms: Vec<&Term> = Vec::new();
    for o in &obligations {
        terms.push(&o.fact);
        terms.extend(&o.ctx_snapshot);
    }
    for o in &session.outcomes {
        terms.extend(outcome_terms(o));
    }
    envs_for(&terms, n, seed)
}

pub fn envs_for(terms: &[&Term], n: usize, seed: u64) -> Vec<Env> {
    let mut vars: Vec<Sym> = Vec::new();
    let mut consts = Vec::new();
    for t in terms {
        for v in t.free_vars() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        constants_of(t, &mut consts);
    }
    let mut g = Gen::new(seed);
    (0..n).map(|_| g.env(&vars, &consts)).collect()
}

/// True when every hypothesis evaluates to non-NIL.
pub fn satisfies(hyps: &[Term], env: &Env, w: &World) -> bool {
    hyps.iter().all(|h| matches!(eval(h, env, w), Ok(v) if v.truthy()))
}

fn check_outcome(o: &Outcome, envs: &[Env], w: &World) -> Option<(String, Env)> {
    match o {
        Outcome::Simplified { input, output, hyps, equiv, .. } => {
            for env in envs.iter().filter(|e| satisfies(hyps, e, w)) {
                let (Ok(a), Ok(b)) = (eval(input, env, w), eval(output, env, w)) else { continue };
                let agree = match equiv {
                    Equiv::Equal => a == b,
                    Equiv::Iff => a.truthy() == b.truthy(),
                };
                if !agree {
                    return Some((format!("{input} evaluates to {a} but {output} to {b}"), env.clone()));
                }
            }
            None
        }
        Outcome::Bounds { goal, hyps, result } if result.proved => {
            for env in envs.iter().filter(|e| satisfies(hyps, e, w)) {
                if matches!(eval(goal, env, w), Ok(v) if v.is_nil()) {
                    return Some((format!("proved goal {goal} is false"), env.clone()));
                }
            }
            None
        }
        _ => None,
    }
}
