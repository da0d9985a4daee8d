//! A call-by-value λ-calculus evaluation toolkit built around *crumbled
//! forms*: terms flattened so that applications and conditionals only ever
//! apply values, with all intermediate results named in an environment of
//! explicit substitutions.
//!
//! The crate has five layers:
//!
//! - [`syntax`]: surface terms, parsing, printing, α-equality and
//!   capture-avoiding substitution;
//! - [`reference`]: small-step oracle interpreters for closed (Plotkin-style)
//!   and open (fireball) call-by-value;
//! - [`crumbling`]: crumbled forms, the crumbling translation, read-back and
//!   the size measures;
//! - [`machine`]: the pointed crumble machine, a micro-step environment
//!   machine over crumbled forms with closed and open modes and
//!   per-transition metrics;
//! - [`harness`]: random term generation, oracle cross-checking, benchmark
//!   families and report types.

pub mod crumbling;
pub mod harness;
pub mod machine;
pub mod reference;
pub mod syntax;

pub use crumbling::{Bite, Crumble, CrumbledValue, Env};
pub use harness::{CheckReport, GenConfig, Trace, TraceEntry};
pub use machine::{Metrics, Mode, PointedState, TransitionLabel};
pub use syntax::{Term, VarId};
