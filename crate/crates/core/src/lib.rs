//! A first-order rewriting kernel whose metafunctions consume facts from a
//! logical world and from proof-context oracles. Every consumed fact is
//! logged, and after a run each one is checked by evaluation over sampled
//! environments.
//!
//! ```
//! use metakernel::harness::{run_source, RunOptions};
//!
//! let report = run_source(
//!     "(defstub foo (x))
//!      (defmeta nth-symbolp-metafn :trigger-fns (nth))
//!      (simplify (nth (foo x) y) :hyps ((symbolp (foo x))))",
//!     &RunOptions { samples: 100, ..Default::default() },
//! )
//! .unwrap();
//! assert_eq!(report.lines, ["(SIMPLIFY (NTH (FOO X) Y) (CAR Y) :OBLIGATIONS 1)"]);
//! assert!(report.is_clean());
//! ```

pub mod bound_rw;
pub mod context_rw;
pub mod eval;
pub mod harness;
pub mod linarith;
pub mod meta_extract;
pub mod metafns;
pub mod rewrite;
pub mod sexp;
pub mod term;
pub mod typeset;
pub mod world;

pub use eval::{eval, sublis_var, Env};
pub use meta_extract::{FactObj, Ledger, Mfc};
pub use rewrite::MfcContext;
pub use sexp::{parse_term, parse_value};
pub use term::{Sym, Term, Value};
pub use typeset::TypeSet;
pub use world::{Equiv, World};
