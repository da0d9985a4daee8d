//! Oracle small-step interpreters: closed call-by-value (right-to-left, with
//! conditionals and errors) and open call-by-value on fireballs. Both search
//! for the redex by structural recursion following the right-context grammar;
//! they are meant to be obviously correct, not fast.

use thiserror::Error;

use crate::syntax::{free_vars, subst, Term};

/// Names of the reduction rules, shared by both calculi. `BetaI` (the
/// β-rule lighting an inert argument) only occurs in fireball evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleName {
    BetaV,
    BetaI,
    Ift,
    Iff,
    Ife,
    AppE,
}

/// Result of one small-step attempt.
#[derive(Clone, Debug, PartialEq)]
pub enum StepResult {
    Stepped(Term, RuleName),
    /// No redex anywhere: the term is normal for the calculus.
    Normal,
    /// Normal but not a value: a dead end that only open terms can reach in
    /// the closed calculus (e.g. a free head variable in redex position).
    Stuck(String),
}

#[derive(Debug, Clone, Error, PartialEq)]
#[error("closed-calculus evaluation stuck on an open term: {0}")]
pub struct StuckError(pub String);

/// Outcome of an iterated evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalOutcome {
    pub term: Term,
    pub steps: Vec<RuleName>,
    pub exhausted: bool,
}

#[derive(Clone, Copy, PartialEq)]
enum Calculus {
    Pif,
    Fireball,
}

/// Fireballs: values and inert terms, the normal forms of open call-by-value.
pub fn is_fireball(t: &Term) -> bool {
    t.is_value() || is_inert(t)
}

/// Inert terms: a variable or inert term applied to a fireball, or a
/// conditional whose guard is a variable or an inert term.
pub fn is_inert(t: &Term) -> bool {
    match t {
        Term::App(f, a) => {
            is_fireball(a) && (matches!(f.as_ref(), Term::Var(_)) || is_inert(f))
        }
        Term::If(c, _, _) => matches!(c.as_ref(), Term::Var(_)) || is_inert(c),
        _ => false,
    }
}

/// "Already evaluated" for the purpose of the right-to-left search: in the
/// closed calculus only values stop the search, in the open one fireballs do.
fn is_evaluated(t: &Term, calc: Calculus) -> bool {
    match calc {
        Calculus::Pif => t.is_value(),
        Calculus::Fireball => is_fireball(t),
    }
}

/// Finds and fires the unique right-to-left redex, if any.
fn find_step(t: &Term, calc: Calculus) -> Option<(Term, RuleName)> {
    match t {
        Term::Var(_) | Term::Lam(..) | Term::True | Term::False | Term::Err => None,
        Term::App(f, a) => {
            // Right subterm first.
            if let Some((a2, r)) = find_step(a, calc) {
                return Some((Term::app(f.as_ref().clone(), a2), r));
            }
            // Left position opens up only once the argument is evaluated.
            if !is_evaluated(a, calc) {
                return None;
            }
            if let Some((f2, r)) = find_step(f, calc) {
                return Some((Term::app(f2, a.as_ref().clone()), r));
            }
            // Top-level rules.
            match f.as_ref() {
                Term::Lam(x, body) => {
                    let rule = match calc {
                        Calculus::Pif => RuleName::BetaV,
                        Calculus::Fireball => {
                            if a.is_value() {
                                RuleName::BetaV
                            } else {
                                RuleName::BetaI
                            }
                        }
                    };
                    Some((subst(body, x, a), rule))
                }
                Term::True | Term::False | Term::Err => Some((Term::Err, RuleName::AppE)),
                _ => None,
            }
        }
        Term::If(c, t1, t2) => {
            if let Some((c2, r)) = find_step(c, calc) {
                return Some((Term::ite(c2, t1.as_ref().clone(), t2.as_ref().clone()), r));
            }
            match c.as_ref() {
                Term::True => Some((t1.as_ref().clone(), RuleName::Ift)),
                Term::False => Some((t2.as_ref().clone(), RuleName::Iff)),
                Term::Lam(..) | Term::Err => Some((Term::Err, RuleName::Ife)),
                _ => None,
            }
        }
    }
}

/// One step of the closed calculus. Defined on any term, adequate only on
/// closed ones; on open terms a normal non-value is reported as `Stuck`.
pub fn pif_step(t: &Term) -> StepResult {
    match find_step(t, Calculus::Pif) {
        Some((u, r)) => StepResult::Stepped(u, r),
        None => {
            if t.is_value() {
                StepResult::Normal
            } else {
                StepResult::Stuck(describe_dead_end(t))
            }
        }
    }
}

/// One step of the fireball calculus. Never stuck: by open harmony a term
/// with no redex is a fireball.
pub fn fireball_step(t: &Term) -> StepResult {
    match find_step(t, Calculus::Fireball) {
        Some((u, r)) => StepResult::Stepped(u, r),
        None => StepResult::Normal,
    }
}

fn describe_dead_end(t: &Term) -> String {
    match t {
        Term::App(f, a) => {
            if !is_evaluated(a, Calculus::Pif) {
                describe_dead_end(a)
            } else if let Term::Var(x) = f.as_ref() {
                format!("free head variable {x} applied in redex position")
            } else {
                describe_dead_end(f)
            }
        }
        Term::If(c, _, _) => {
            if let Term::Var(x) = c.as_ref() {
                format!("free variable {x} as if-guard in redex position")
            } else {
                describe_dead_end(c)
            }
        }
        Term::Var(x) => format!("free variable {x} in redex position"),
        _ => "open-term dead end".to_owned(),
    }
}

/// Iterates [`pif_step`] up to `fuel` times.
pub fn pif_eval(t: &Term, fuel: u64) -> Result<EvalOutcome, StuckError> {
    let mut cur = t.clone();
    let mut steps = Vec::new();
    for _ in 0..fuel {
        match pif_step(&cur) {
            StepResult::Stepped(next, r) => {
                cur = next;
                steps.push(r);
            }
            StepResult::Normal => {
                return Ok(EvalOutcome {
                    term: cur,
                    steps,
                    exhausted: false,
                })
            }
            StepResult::Stuck(reason) => return Err(StuckError(reason)),
        }
    }
    match pif_step(&cur) {
        StepResult::Stuck(reason) => Err(StuckError(reason)),
        more => Ok(EvalOutcome {
            term: cur,
            steps,
            exhausted: matches!(more, StepResult::Stepped(..)),
        }),
    }
}

/// Iterates [`fireball_step`] up to `fuel` times.
pub fn fireball_eval(t: &Term, fuel: u64) -> EvalOutcome {
    let mut cur = t.clone();
    let mut steps = Vec::new();
    for _ in 0..fuel {
        match fireball_step(&cur) {
            StepResult::Stepped(next, r) => {
                cur = next;
                steps.push(r);
            }
            _ => {
                return EvalOutcome {
                    term: cur,
                    steps,
                    exhausted: false,
                }
            }
        }
    }
    let exhausted = matches!(fireball_step(&cur), StepResult::Stepped(..));
    EvalOutcome {
        term: cur,
        steps,
        exhausted,
    }
}

/// Iterates [`pif_eval`] with an additional size budget: evaluation stops
/// early, flagged as exhausted, once the term grows past `max_size`. Guards
/// the oracle against size-exploding divergent terms.
pub fn pif_eval_bounded(t: &Term, fuel: u64, max_size: u64) -> Result<EvalOutcome, StuckError> {
    let mut cur = t.clone();
    let mut steps = Vec::new();
    for _ in 0..fuel {
        if crate::syntax::term_size(&cur) > max_size {
            return Ok(EvalOutcome {
                term: cur,
                steps,
                exhausted: true,
            });
        }
        match pif_step(&cur) {
            StepResult::Stepped(next, r) => {
                cur = next;
                steps.push(r);
            }
            StepResult::Normal => {
                return Ok(EvalOutcome {
                    term: cur,
                    steps,
                    exhausted: false,
                })
            }
            StepResult::Stuck(reason) => return Err(StuckError(reason)),
        }
    }
    Ok(EvalOutcome {
        term: cur,
        steps,
        exhausted: !matches!(pif_step(&cur), StepResult::Normal),
    })
}

/// Same size-budgeted iteration for the fireball calculus.
pub fn fireball_eval_bounded(t: &Term, fuel: u64, max_size: u64) -> EvalOutcome {
    let mut cur = t.clone();
    let mut steps = Vec::new();
    for _ in 0..fuel {
        if crate::syntax::term_size(&cur) > max_size {
            return EvalOutcome {
                term: cur,
                steps,
                exhausted: true,
            };
        }
        match fireball_step(&cur) {
            StepResult::Stepped(next, r) => {
                cur = next;
                steps.push(r);
            }
            _ => {
                return EvalOutcome {
                    term: cur,
                    steps,
                    exhausted: false,
                }
            }
        }
    }
    let exhausted = matches!(fireball_step(&cur), StepResult::Stepped(..));
    EvalOutcome {
        term: cur,
        steps,
        exhausted,
    }
}

/// Counts the positions at which a rule could fire under the right-to-left
/// search discipline. Test support for the determinism property: the count is
/// 1 exactly when the term is not normal.
pub fn applicable_rule_count(t: &Term, open: bool) -> usize {
    let calc = if open {
        Calculus::Fireball
    } else {
        Calculus::Pif
    };
    fn go(t: &Term, calc: Calculus) -> usize {
        match t {
            Term::Var(_) | Term::Lam(..) | Term::True | Term::False | Term::Err => 0,
            Term::App(f, a) => {
                let mut n = go(a, calc);
                if is_evaluated(a, calc) {
                    n += go(f, calc);
                    match f.as_ref() {
                        Term::Lam(..) | Term::True | Term::False | Term::Err => n += 1,
                        _ => {}
                    }
                }
                n
            }
            Term::If(c, _, _) => {
                let mut n = go(c, calc);
                if is_evaluated(c, calc) {
                    match c.as_ref() {
                        Term::True | Term::False | Term::Lam(..) | Term::Err => n += 1,
                        _ => {}
                    }
                }
                n
            }
        }
    }
    go(t, calc)
}

/// Closedness helper used by preconditions.
pub fn is_closed(t: &Term) -> bool {
    free_vars(t).is_empty()
}
