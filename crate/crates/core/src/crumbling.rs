//! Crumbled forms and the crumbling translation.
//!
//! A crumble is a bite paired with an environment of explicit substitutions.
//! Bites never nest non-value constructs: an application applies two crumbled
//! values, a conditional tests a crumbled value. All intermediate results of
//! the original term are named by environment entries, laid out left to right
//! in evaluation order (entries on the right are evaluated first), with each
//! entry's free variables referring to entries further right.

use std::collections::HashSet;
use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use crate::syntax::{subst, Term, VarId};

/// Crumbled values: what may appear in application and guard position.
/// Abstraction bodies are full crumbles (the translation is strong on
/// bodies); they are reference-counted so substitution transitions can copy
/// a stored abstraction in constant time.
#[derive(Clone, Debug, PartialEq)]
pub enum CrumbledValue {
    Var(VarId),
    Lam(VarId, Rc<Crumble>),
    True,
    False,
    Err,
}

impl CrumbledValue {
    /// Practical values are the non-variable crumbled values.
    pub fn is_practical(&self) -> bool {
        !matches!(self, CrumbledValue::Var(_))
    }
}

/// Bites: a crumbled value, an application of two crumbled values, or a
/// conditional on a crumbled value whose branches are crumbles.
#[derive(Clone, Debug, PartialEq)]
pub enum Bite {
    Val(CrumbledValue),
    App(CrumbledValue, CrumbledValue),
    If(CrumbledValue, Box<Crumble>, Box<Crumble>),
}

impl Bite {
    pub fn is_practical_value(&self) -> bool {
        matches!(self, Bite::Val(v) if v.is_practical())
    }
}

/// One explicit substitution `[x ← b]`.
#[derive(Clone, Debug, PartialEq)]
pub struct EnvEntry {
    pub var: VarId,
    pub bite: Bite,
}

/// An environment: a finite sequence of explicit substitutions, extendable at
/// both ends and concatenable. This is the plain representation used for
/// structural tests and golden files; the machine has its own chain-backed
/// one.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Env {
    pub entries: Vec<EnvEntry>,
}

impl Env {
    pub fn empty() -> Env {
        Env::default()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn push_right(&mut self, var: VarId, bite: Bite) {
        self.entries.push(EnvEntry { var, bite });
    }

    pub fn push_left(&mut self, var: VarId, bite: Bite) {
        self.entries.insert(0, EnvEntry { var, bite });
    }

    /// Concatenation by juxtaposition: `self` followed by `other`.
    pub fn concat(mut self, other: Env) -> Env {
        self.entries.extend(other.entries);
        self
    }

    /// Domain: the set of bound variables.
    pub fn domain(&self) -> HashSet<VarId> {
        self.entries.iter().map(|e| e.var.clone()).collect()
    }
}

/// A crumble: a bite with an environment.
#[derive(Clone, Debug, PartialEq)]
pub struct Crumble {
    pub bite: Bite,
    pub env: Env,
}

impl Crumble {
    pub fn new(bite: Bite, env: Env) -> Crumble {
        Crumble { bite, env }
    }

    pub fn from_bite(bite: Bite) -> Crumble {
        Crumble {
            bite,
            env: Env::empty(),
        }
    }

    /// A v-crumble: a practical-value bite over an environment of practical
    /// values, i.e. a fully evaluated crumble for the closed machine.
    pub fn is_v_crumble(&self) -> bool {
        self.bite.is_practical_value()
            && self.env.entries.iter().all(|e| e.bite.is_practical_value())
    }
}

/// Appending an environment: `(b, e) @ e' := (b, ee')`.
pub fn append(c: Crumble, e: Env) -> Crumble {
    Crumble {
        bite: c.bite,
        env: c.env.concat(e),
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
#[error("not a value: {0}")]
pub struct NotAValue(pub String);

// ---------------------------------------------------------------------------
// The crumbling translation
// ---------------------------------------------------------------------------

/// Translates a term into a crumble. The translation is strong on bodies
/// (abstraction bodies and if-branches become crumbles themselves) and runs
/// in a single linear pass: non-value subterms in application or guard
/// position get a fresh entry, reserved in pre-order and patched once the
/// subterm's bite is known, so that an entry always precedes the entries of
/// its own subterm.
pub fn translate(t: &Term) -> Crumble {
    let mut slots: Vec<Option<EnvEntry>> = Vec::new();
    let bite = bite_of(t, &mut slots);
    let entries = slots
        .into_iter()
        .map(|s| s.expect("all reserved entries are patched"))
        .collect();
    Crumble {
        bite,
        env: Env { entries },
    }
}

/// Translates a value into a crumbled value.
pub fn translate_value(v: &Term) -> Result<CrumbledValue, NotAValue> {
    if !v.is_value() {
        return Err(NotAValue(format!("{v:?}")));
    }
    Ok(value_of(v))
}

fn value_of(v: &Term) -> CrumbledValue {
    match v {
        Term::Var(x) => CrumbledValue::Var(x.clone()),
        Term::Lam(x, body) => CrumbledValue::Lam(x.clone(), Rc::new(translate(body))),
        Term::True => CrumbledValue::True,
        Term::False => CrumbledValue::False,
        Term::Err => CrumbledValue::Err,
        _ => unreachable!("caller checks the value predicate"),
    }
}

fn bite_of(t: &Term, slots: &mut Vec<Option<EnvEntry>>) -> Bite {
    match t {
        Term::Var(_) | Term::Lam(..) | Term::True | Term::False | Term::Err => Bite::Val(value_of(t)),
        Term::App(f, a) => {
            let vf = value_position(f, slots);
            let va = value_position(a, slots);
            Bite::App(vf, va)
        }
        Term::If(c, t1, t2) => {
            let vc = value_position(c, slots);
            Bite::If(vc, Box::new(translate(t1)), Box::new(translate(t2)))
        }
    }
}

fn value_position(t: &Term, slots: &mut Vec<Option<EnvEntry>>) -> CrumbledValue {
    if t.is_value() {
        return value_of(t);
    }
    let slot = slots.len();
    slots.push(None);
    let bite = bite_of(t, slots);
    // The fresh name is drawn after the subterm has been translated.
    let x = VarId::fresh(None);
    slots[slot] = Some(EnvEntry {
        var: x.clone(),
        bite,
    });
    CrumbledValue::Var(x)
}

// ---------------------------------------------------------------------------
// Read-back
// ---------------------------------------------------------------------------

/// Reads a crumbled value back to a term.
pub fn readback_value(v: &CrumbledValue) -> Term {
    match v {
        CrumbledValue::Var(x) => Term::Var(x.clone()),
        CrumbledValue::Lam(x, body) => Term::lam(x.clone(), readback(body)),
        CrumbledValue::True => Term::True,
        CrumbledValue::False => Term::False,
        CrumbledValue::Err => Term::Err,
    }
}

/// Reads a bite back to a term.
pub fn readback_bite(b: &Bite) -> Term {
    match b {
        Bite::Val(v) => readback_value(v),
        Bite::App(v, w) => Term::app(readback_value(v), readback_value(w)),
        Bite::If(v, c, d) => Term::ite(readback_value(v), readback(c), readback(d)),
    }
}

/// Reads a crumble back to a term: the bite's read-back with each entry
/// substituted in, left to right (so the rightmost entry is substituted
/// last, i.e. outermost).
pub fn readback(c: &Crumble) -> Term {
    let mut t = readback_bite(&c.bite);
    for entry in &c.env.entries {
        let v = readback_bite(&entry.bite);
        t = subst(&t, &entry.var, &v);
    }
    t
}

// ---------------------------------------------------------------------------
// Well-namedness and measures
// ---------------------------------------------------------------------------

/// Checks that all binders of explicit substitutions outside abstractions
/// are pairwise distinct. The check recurses through if-branches (their
/// entries sit outside any abstraction) but stops at lambdas.
pub fn is_well_named(c: &Crumble) -> bool {
    let mut seen = HashSet::new();
    outside_binders_ok(c, &mut seen)
}

fn outside_binders_ok(c: &Crumble, seen: &mut HashSet<VarId>) -> bool {
    if !bite_outside_binders_ok(&c.bite, seen) {
        return false;
    }
    for entry in &c.env.entries {
        if !seen.insert(entry.var.clone()) {
            return false;
        }
        if !bite_outside_binders_ok(&entry.bite, seen) {
            return false;
        }
    }
    true
}

fn bite_outside_binders_ok(b: &Bite, seen: &mut HashSet<VarId>) -> bool {
    match b {
        Bite::Val(_) | Bite::App(..) => true,
        Bite::If(_, c, d) => outside_binders_ok(c, seen) && outside_binders_ok(d, seen),
    }
}

/// Free variables of a crumble: `fv((b,e)) = (fv(b) \ dom(e)) ∪ fv(e)`,
/// where entries bind in everything to their left.
pub fn crumble_free_vars(c: &Crumble) -> HashSet<VarId> {
    let mut fv = bite_free_vars(&c.bite);
    for entry in &c.env.entries {
        fv.remove(&entry.var);
        fv.extend(bite_free_vars(&entry.bite));
    }
    fv
}

pub fn bite_free_vars(b: &Bite) -> HashSet<VarId> {
    match b {
        Bite::Val(v) => value_free_vars(v),
        Bite::App(v, w) => {
            let mut fv = value_free_vars(v);
            fv.extend(value_free_vars(w));
            fv
        }
        Bite::If(v, c, d) => {
            let mut fv = value_free_vars(v);
            fv.extend(crumble_free_vars(c));
            fv.extend(crumble_free_vars(d));
            fv
        }
    }
}

pub fn value_free_vars(v: &CrumbledValue) -> HashSet<VarId> {
    match v {
        CrumbledValue::Var(x) => std::iter::once(x.clone()).collect(),
        CrumbledValue::Lam(x, body) => {
            let mut fv = crumble_free_vars(body);
            fv.remove(x);
            fv
        }
        CrumbledValue::True | CrumbledValue::False | CrumbledValue::Err => HashSet::new(),
    }
}

/// The variable-crumble measure: counts bites that are bare variables, not
/// looking under abstractions.
pub fn var_measure(c: &Crumble) -> u64 {
    bite_var_measure(&c.bite) + c.env.entries.iter().map(|e| bite_var_measure(&e.bite)).sum::<u64>()
}

pub fn bite_var_measure(b: &Bite) -> u64 {
    match b {
        Bite::Val(CrumbledValue::Var(_)) => 1,
        _ => 0,
    }
}

/// Size of a crumble: sizes of the bite and of the environment, where an
/// entry `[x ← b]` counts `1 + |b|`.
pub fn crumble_size(c: &Crumble) -> u64 {
    bite_size(&c.bite) + env_size(&c.env)
}

pub fn env_size(e: &Env) -> u64 {
    e.entries.iter().map(|en| 1 + bite_size(&en.bite)).sum()
}

pub fn bite_size(b: &Bite) -> u64 {
    match b {
        Bite::Val(v) => value_size(v),
        Bite::App(v, w) => 1 + value_size(v) + value_size(w),
        Bite::If(v, c, d) => 1 + value_size(v) + crumble_size(c) + crumble_size(d),
    }
}

pub fn value_size(v: &CrumbledValue) -> u64 {
    match v {
        CrumbledValue::Var(_)
        | CrumbledValue::True
        | CrumbledValue::False
        | CrumbledValue::Err => 1,
        CrumbledValue::Lam(_, body) => 1 + crumble_size(body),
    }
}

/// Length of a crumble: one for the bite plus one per environment entry.
pub fn len_measure(c: &Crumble) -> u64 {
    1 + c.env.len() as u64
}

/// Upper bound on the length of any body (abstraction body or if-branch)
/// occurring anywhere in the crumble; 0 when there are none. Bounds how much
/// a single principal transition can lengthen the machine's environment.
pub fn body_bound_l(c: &Crumble) -> u64 {
    let mut best = 0;
    walk_bodies(c, &mut |body| best = best.max(len_measure(body)));
    best
}

fn walk_bodies(c: &Crumble, f: &mut impl FnMut(&Crumble)) {
    walk_bodies_bite(&c.bite, f);
    for entry in &c.env.entries {
        walk_bodies_bite(&entry.bite, f);
    }
}

fn walk_bodies_bite(b: &Bite, f: &mut impl FnMut(&Crumble)) {
    match b {
        Bite::Val(v) => walk_bodies_value(v, f),
        Bite::App(v, w) => {
            walk_bodies_value(v, f);
            walk_bodies_value(w, f);
        }
        Bite::If(v, c, d) => {
            walk_bodies_value(v, f);
            f(c);
            walk_bodies(c, f);
            f(d);
            walk_bodies(d, f);
        }
    }
}

fn walk_bodies_value(v: &CrumbledValue, f: &mut impl FnMut(&Crumble)) {
    if let CrumbledValue::Lam(_, body) = v {
        f(body);
        walk_bodies(body, f);
    }
}

// ---------------------------------------------------------------------------
// Decomposition (test support)
// ---------------------------------------------------------------------------

/// A crumble-context prefix `(b, e[x ← ⟨·⟩])` produced by [`decompose`].
#[derive(Clone, Debug, PartialEq)]
pub struct CrumblePrefix {
    pub bite: Bite,
    pub before: Vec<EnvEntry>,
    pub hole: VarId,
}

impl CrumblePrefix {
    /// Plugging: the hole takes the crumble's bite and the crumble's
    /// environment is concatenated after it.
    pub fn plug(&self, c: Crumble) -> Crumble {
        let mut entries = self.before.clone();
        entries.push(EnvEntry {
            var: self.hole.clone(),
            bite: c.bite,
        });
        entries.extend(c.env.entries);
        Crumble {
            bite: self.bite.clone(),
            env: Env { entries },
        }
    }
}

/// Enumerates every decomposition `c = C⟨c'⟩` of a crumble into a context
/// prefix and a suffix crumble. The first element is the trivial one (no
/// prefix, the crumble itself); entry `i` of the environment then yields the
/// prefix holding the bite and entries before `i`, with the suffix crumble
/// built from entry `i`'s bite and the entries after it.
///
/// This exists for tests only: the machine never plugs or unplugs.
pub fn decompose(c: &Crumble) -> Vec<(Option<CrumblePrefix>, Crumble)> {
    let mut out = vec![(None, c.clone())];
    for i in 0..c.env.entries.len() {
        let prefix = CrumblePrefix {
            bite: c.bite.clone(),
            before: c.env.entries[..i].to_vec(),
            hole: c.env.entries[i].var.clone(),
        };
        let suffix = Crumble {
            bite: c.env.entries[i].bite.clone(),
            env: Env {
                entries: c.env.entries[i + 1..].to_vec(),
            },
        };
        out.push((Some(prefix), suffix));
    }
    out
}

// ---------------------------------------------------------------------------
// Canonical text
// ---------------------------------------------------------------------------

/// Canonical textual form: `(bite)[x<-bite][y<-bite]...`, with bites printed
/// in the term grammar extended by nested crumbles in lambda bodies and
/// if-branches. Variable names carry their id, so the text is unambiguous.
pub fn crumble_to_text(c: &Crumble) -> String {
    let mut s = String::new();
    write_crumble(c, &mut s);
    s
}

fn write_crumble(c: &Crumble, out: &mut String) {
    out.push('(');
    write_bite(&c.bite, out);
    out.push(')');
    for entry in &c.env.entries {
        out.push('[');
        out.push_str(&entry.var.display_name());
        out.push_str("<-");
        write_bite(&entry.bite, out);
        out.push(']');
    }
}

fn write_bite(b: &Bite, out: &mut String) {
    match b {
        Bite::Val(v) => write_value(v, out, false),
        Bite::App(v, w) => {
            write_value(v, out, true);
            out.push(' ');
            write_value(w, out, true);
        }
        Bite::If(v, c, d) => {
            out.push_str("if ");
            write_value(v, out, true);
            out.push_str(" then ");
            write_crumble(c, out);
            out.push_str(" else ");
            write_crumble(d, out);
        }
    }
}

fn write_value(v: &CrumbledValue, out: &mut String, operand: bool) {
    match v {
        CrumbledValue::Var(x) => out.push_str(&x.display_name()),
        CrumbledValue::True => out.push_str("true"),
        CrumbledValue::False => out.push_str("false"),
        CrumbledValue::Err => out.push_str("err"),
        CrumbledValue::Lam(x, body) => {
            if operand {
                out.push('(');
            }
            out.push('\\');
            out.push_str(&x.display_name());
            out.push_str(". ");
            write_crumble(body, out);
            if operand {
                out.push(')');
            }
        }
    }
}

impl fmt::Display for Crumble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crumble_to_text(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alpha_eq, free_vars, parse, term_size};

    fn p(s: &str) -> Term {
        parse(s).expect("parse")
    }

    fn delta() -> Term {
        p("\\x. x x")
    }

    /// δδI crumbles to (z Ī, [z ← δ̄δ̄]).
    #[test]
    fn translate_delta_delta_i() {
        let t = Term::app(Term::app(delta(), delta()), p("\\x. x"));
        let c = translate(&t);
        assert_eq!(c.env.len(), 1);
        match (&c.bite, &c.env.entries[0]) {
            (Bite::App(CrumbledValue::Var(z), CrumbledValue::Lam(_, ibody)), entry) => {
                assert_eq!(z, &entry.var);
                // Ī = λx.(x, ε)
                assert!(matches!(ibody.bite, Bite::Val(CrumbledValue::Var(_))));
                assert!(ibody.env.is_empty());
                // [z ← δ̄ δ̄]
                match &entry.bite {
                    Bite::App(CrumbledValue::Lam(_, b1), CrumbledValue::Lam(_, b2)) => {
                        for b in [b1, b2] {
                            assert!(matches!(b.bite, Bite::App(..)));
                            assert!(b.env.is_empty());
                        }
                    }
                    other => panic!("expected application of two lambdas, got {other:?}"),
                }
            }
            other => panic!("unexpected shape {other:?}"),
        }
    }

    /// δδ(xx) crumbles to (z w, [z ← δ̄δ̄][w ← xx]).
    #[test]
    fn translate_delta_delta_open() {
        let t = Term::app(Term::app(delta(), delta()), p("x x"));
        let c = translate(&t);
        assert_eq!(c.env.len(), 2);
        match &c.bite {
            Bite::App(CrumbledValue::Var(z), CrumbledValue::Var(w)) => {
                assert_eq!(z, &c.env.entries[0].var);
                assert_eq!(w, &c.env.entries[1].var);
            }
            other => panic!("unexpected bite {other:?}"),
        }
        assert!(matches!(
            &c.env.entries[0].bite,
            Bite::App(CrumbledValue::Lam(..), CrumbledValue::Lam(..))
        ));
        match &c.env.entries[1].bite {
            Bite::App(CrumbledValue::Var(x1), CrumbledValue::Var(x2)) => assert_eq!(x1, x2),
            other => panic!("expected x x, got {other:?}"),
        }
    }

    #[test]
    fn translate_bare_variable() {
        let c = translate(&p("x"));
        assert!(matches!(c.bite, Bite::Val(CrumbledValue::Var(_))));
        assert!(c.env.is_empty());
    }

    /// λx.x(xx) becomes λx.(x x', [x' ← x x]).
    #[test]
    fn translate_body_is_strong() {
        let c = translate(&p("\\x. x (x x)"));
        match &c.bite {
            Bite::Val(CrumbledValue::Lam(x, body)) => {
                assert_eq!(body.env.len(), 1);
                match &body.bite {
                    Bite::App(CrumbledValue::Var(head), CrumbledValue::Var(xp)) => {
                        assert_eq!(head, x);
                        assert_eq!(xp, &body.env.entries[0].var);
                    }
                    other => panic!("unexpected body bite {other:?}"),
                }
                match &body.env.entries[0].bite {
                    Bite::App(CrumbledValue::Var(a), CrumbledValue::Var(b)) => {
                        assert_eq!(a, x);
                        assert_eq!(b, x);
                    }
                    other => panic!("unexpected entry {other:?}"),
                }
            }
            other => panic!("expected lambda value, got {other:?}"),
        }
    }

    /// Nested applications: ((λy.yy) I) ((I I) I) crumbles with the parent
    /// entry before the entries of its own subterm.
    #[test]
    fn translate_orders_entries_in_preorder() {
        let t = p("((\\y. y y) (\\x. x)) (((\\x. x) (\\x. x)) (\\x. x))");
        let c = translate(&t);
        // (w z, [w ← (λy.yy) Ī][z ← x Ī][x ← Ī Ī])
        assert_eq!(c.env.len(), 3);
        match &c.bite {
            Bite::App(CrumbledValue::Var(w), CrumbledValue::Var(z)) => {
                assert_eq!(w, &c.env.entries[0].var);
                assert_eq!(z, &c.env.entries[1].var);
            }
            other => panic!("unexpected bite {other:?}"),
        }
        match &c.env.entries[1].bite {
            Bite::App(CrumbledValue::Var(x), CrumbledValue::Lam(..)) => {
                assert_eq!(x, &c.env.entries[2].var);
            }
            other => panic!("unexpected middle entry {other:?}"),
        }
        assert!(matches!(
            &c.env.entries[2].bite,
            Bite::App(CrumbledValue::Lam(..), CrumbledValue::Lam(..))
        ));
    }

    #[test]
    fn translate_value_examples() {
        match translate_value(&p("\\x. x")).unwrap() {
            CrumbledValue::Lam(_, body) => {
                assert!(matches!(body.bite, Bite::Val(CrumbledValue::Var(_))));
                assert!(body.env.is_empty());
            }
            other => panic!("expected lambda, got {other:?}"),
        }
        assert_eq!(translate_value(&Term::True).unwrap(), CrumbledValue::True);
        match translate_value(&delta()).unwrap() {
            CrumbledValue::Lam(_, body) => assert!(matches!(body.bite, Bite::App(..))),
            other => panic!("expected lambda, got {other:?}"),
        }
        assert!(translate_value(&p("x y")).is_err());
    }

    #[test]
    fn readback_examples() {
        let c = translate(&p("x"));
        assert!(alpha_eq(&readback(&c), &p("x")));

        // (x x, [x ← y]) reads back to y y.
        let x = VarId::fresh(Some("x"));
        let y = VarId::fresh(Some("y"));
        let mut env = Env::empty();
        env.push_right(x.clone(), Bite::Val(CrumbledValue::Var(y.clone())));
        let c = Crumble::new(
            Bite::App(CrumbledValue::Var(x.clone()), CrumbledValue::Var(x)),
            env,
        );
        let t = readback(&c);
        assert_eq!(t, Term::app(Term::Var(y.clone()), Term::Var(y)));
    }

    #[test]
    fn readback_inverts_translation_on_nested_example() {
        let t = p("((\\y. y y) (\\x. x)) (((\\x. x) (\\x. x)) (\\x. x))");
        assert!(alpha_eq(&readback(&translate(&t)), &t));
    }

    #[test]
    fn translation_not_surjective() {
        // (x x, [x ← y]) reads back to y y, but translate(y y) is
        // structurally different: the application keeps both occurrences.
        let x = VarId::fresh(Some("x"));
        let y = VarId::fresh(Some("y"));
        let mut env = Env::empty();
        env.push_right(x.clone(), Bite::Val(CrumbledValue::Var(y.clone())));
        let c = Crumble::new(
            Bite::App(CrumbledValue::Var(x.clone()), CrumbledValue::Var(x)),
            env,
        );
        let direct = translate(&readback(&c));
        assert!(direct.env.is_empty());
        assert_ne!(direct, c);
    }

    #[test]
    fn append_laws() {
        let c = translate(&p("x"));
        let mut e = Env::empty();
        e.push_right(VarId::fresh(Some("y")), Bite::Val(CrumbledValue::True));
        let appended = append(c.clone(), e.clone());
        assert_eq!(appended.env.len(), 1);
        // Unit law.
        assert_eq!(append(c.clone(), Env::empty()), c);
        // Associativity.
        let mut e2 = Env::empty();
        e2.push_right(VarId::fresh(Some("z")), Bite::Val(CrumbledValue::False));
        let left = append(append(c.clone(), e.clone()), e2.clone());
        let right = append(c, e.concat(e2));
        assert_eq!(left, right);
    }

    #[test]
    fn well_named_examples() {
        for s in ["x", "\\x. x (x x)", "(\\x. x x) (\\x. x x) (x x)"] {
            assert!(is_well_named(&translate(&p(s))), "{s}");
        }
        // Duplicate binder at top level.
        let y = VarId::fresh(Some("y"));
        let mut env = Env::empty();
        env.push_right(y.clone(), Bite::Val(CrumbledValue::True));
        env.push_right(y, Bite::Val(CrumbledValue::False));
        let c = Crumble::new(Bite::Val(CrumbledValue::Var(VarId::fresh(Some("x")))), env);
        assert!(!is_well_named(&c));
        // The same binder inside an abstraction does not clash with one
        // outside.
        let z = VarId::fresh(Some("z"));
        let mut inner_env = Env::empty();
        inner_env.push_right(z.clone(), Bite::Val(CrumbledValue::True));
        let x = VarId::fresh(Some("x"));
        let lam = CrumbledValue::Lam(
            x.clone(),
            Rc::new(Crumble::new(Bite::Val(CrumbledValue::Var(x)), inner_env)),
        );
        let mut outer_env = Env::empty();
        outer_env.push_right(z, Bite::Val(CrumbledValue::False));
        let c = Crumble::new(Bite::Val(lam), outer_env);
        assert!(is_well_named(&c));
    }

    #[test]
    fn var_measure_examples() {
        assert_eq!(var_measure(&translate(&p("x"))), 1);
        assert_eq!(var_measure(&translate(&p("\\x. x"))), 0);
        assert_eq!(var_measure(&translate(&p("(\\x. x) (\\y. y)"))), 0);
        assert_eq!(var_measure(&translate(&p("x y"))), 0);
    }

    #[test]
    fn size_and_len_examples() {
        let c = translate(&p("x"));
        assert_eq!(len_measure(&c), 1);
        assert_eq!(crumble_size(&c), 1);
        for s in ["x", "\\x. x x", "(\\x. x x) (\\x. x x) (x x)", "if x y then true else z"] {
            let t = p(s);
            let c = translate(&t);
            assert!(
                crumble_size(&c) <= 5 * term_size(&t),
                "size bound fails on {s}"
            );
            assert!(body_bound_l(&c) <= term_size(&t), "body bound fails on {s}");
            assert!(len_measure(&c) <= term_size(&t), "len bound fails on {s}");
        }
    }

    #[test]
    fn free_vars_preserved_by_translation() {
        for s in ["x", "x y", "(\\x. x (x x)) y", "if x then y else \\z. w"] {
            let t = p(s);
            assert_eq!(crumble_free_vars(&translate(&t)), free_vars(&t), "{s}");
        }
        assert!(crumble_free_vars(&translate(&p("(\\x. x x) (\\x. x x)"))).is_empty());
    }

    #[test]
    fn decompose_enumerates_splits_and_plugs_back() {
        let t = p("((\\y. y y) (\\x. x)) (((\\x. x) (\\x. x)) (\\x. x))");
        let c = translate(&t);
        let parts = decompose(&c);
        assert_eq!(parts.len(), c.env.len() + 1);
        for (prefix, suffix) in &parts {
            match prefix {
                None => assert_eq!(suffix, &c),
                Some(ctx) => assert_eq!(ctx.plug(suffix.clone()), c),
            }
        }
    }

    #[test]
    fn canonical_text_shape() {
        let c = translate(&p("(\\x. x x) (\\x. x x) (x x)"));
        let s = crumble_to_text(&c);
        assert!(s.starts_with('('), "{s}");
        assert_eq!(s.matches("<-").count(), 2, "{s}");
        assert!(s.contains("]["), "{s}");
    }
}
