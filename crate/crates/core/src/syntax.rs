//! Surface terms: λ-calculus with booleans, if-then-else and an error
//! constant, plus the usual toolbox (parsing, printing, α-equality, free
//! variables, capture-avoiding substitution, term size).

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

/// Process-wide variable id counter. Ids are never reused within a session,
/// which is what makes freshness checks trivial everywhere else: a newly
/// allocated id cannot clash with anything already in existence.
static NEXT_VAR_ID: AtomicU64 = AtomicU64::new(0);

/// A variable symbol. Equality and hashing are identity-based: two `VarId`s
/// are the same variable iff their `id`s are equal. The optional `hint` is
/// only used for display.
#[derive(Clone, Debug)]
pub struct VarId {
    id: u64,
    hint: Option<String>,
}

impl VarId {
    /// Allocates a fresh variable from the global counter.
    pub fn fresh(hint: Option<&str>) -> VarId {
        VarId {
            id: NEXT_VAR_ID.fetch_add(1, Ordering::Relaxed),
            hint: hint.map(str::to_owned),
        }
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn hint(&self) -> Option<&str> {
        self.hint.as_deref()
    }

    /// Display name made unambiguous by the id suffix. Used by the canonical
    /// crumble printer.
    pub fn display_name(&self) -> String {
        format!("{}{}", self.hint.as_deref().unwrap_or("v"), self.id)
    }
}

impl PartialEq for VarId {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for VarId {}

impl std::hash::Hash for VarId {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.id.hash(state);
    }
}

impl PartialOrd for VarId {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for VarId {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.id.cmp(&other.id)
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_name())
    }
}

/// Surface terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(VarId),
    Lam(VarId, Box<Term>),
    App(Box<Term>, Box<Term>),
    If(Box<Term>, Box<Term>, Box<Term>),
    True,
    False,
    Err,
}

impl Term {
    pub fn var(x: VarId) -> Term {
        Term::Var(x)
    }

    pub fn lam(x: VarId, body: Term) -> Term {
        Term::Lam(x, Box::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn ite(c: Term, t: Term, e: Term) -> Term {
        Term::If(Box::new(c), Box::new(t), Box::new(e))
    }

    /// Values: variables, abstractions, booleans and the error constant.
    pub fn is_value(&self) -> bool {
        matches!(
            self,
            Term::Var(_) | Term::Lam(..) | Term::True | Term::False | Term::Err
        )
    }

    /// Practical values: values that are not variables.
    pub fn is_practical_value(&self) -> bool {
        matches!(self, Term::Lam(..) | Term::True | Term::False | Term::Err)
    }
}

/// Free variables of a term.
pub fn free_vars(t: &Term) -> HashSet<VarId> {
    fn go(t: &Term, bound: &mut Vec<VarId>, acc: &mut HashSet<VarId>) {
        match t {
            Term::Var(x) => {
                if !bound.contains(x) {
                    acc.insert(x.clone());
                }
            }
            Term::Lam(x, body) => {
                bound.push(x.clone());
                go(body, bound, acc);
                bound.pop();
            }
            Term::App(f, a) => {
                go(f, bound, acc);
                go(a, bound, acc);
            }
            Term::If(c, t1, t2) => {
                go(c, bound, acc);
                go(t1, bound, acc);
                go(t2, bound, acc);
            }
            Term::True | Term::False | Term::Err => {}
        }
    }
    let mut acc = HashSet::new();
    go(t, &mut Vec::new(), &mut acc);
    acc
}

/// Capture-avoiding substitution `t{x ← v}`. Binders in `t` are renamed with
/// fresh ids whenever they would capture a free variable of `v`.
pub fn subst(t: &Term, x: &VarId, v: &Term) -> Term {
    let fv_v = free_vars(v);
    subst_go(t, x, v, &fv_v)
}

fn subst_go(t: &Term, x: &VarId, v: &Term, fv_v: &HashSet<VarId>) -> Term {
    match t {
        Term::Var(y) => {
            if y == x {
                v.clone()
            } else {
                t.clone()
            }
        }
        Term::Lam(y, body) => {
            if y == x {
                t.clone()
            } else if fv_v.contains(y) {
                let y2 = VarId::fresh(y.hint());
                let body2 = subst(body, y, &Term::Var(y2.clone()));
                Term::lam(y2, subst_go(&body2, x, v, fv_v))
            } else {
                Term::lam(y.clone(), subst_go(body, x, v, fv_v))
            }
        }
        Term::App(f, a) => Term::app(subst_go(f, x, v, fv_v), subst_go(a, x, v, fv_v)),
        Term::If(c, t1, t2) => Term::ite(
            subst_go(c, x, v, fv_v),
            subst_go(t1, x, v, fv_v),
            subst_go(t2, x, v, fv_v),
        ),
        Term::True | Term::False | Term::Err => t.clone(),
    }
}

/// α-equality, via canonical renumbering of binders. Free variables compare
/// by id.
pub fn alpha_eq(t: &Term, u: &Term) -> bool {
    fn go(t: &Term, u: &Term, env_t: &mut Vec<VarId>, env_u: &mut Vec<VarId>) -> bool {
        match (t, u) {
            (Term::Var(x), Term::Var(y)) => {
                let ix = env_t.iter().rposition(|b| b == x);
                let iy = env_u.iter().rposition(|b| b == y);
                match (ix, iy) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => x == y,
                    _ => false,
                }
            }
            (Term::Lam(x, b1), Term::Lam(y, b2)) => {
                env_t.push(x.clone());
                env_u.push(y.clone());
                let r = go(b1, b2, env_t, env_u);
                env_t.pop();
                env_u.pop();
                r
            }
            (Term::App(f1, a1), Term::App(f2, a2)) => {
                go(f1, f2, env_t, env_u) && go(a1, a2, env_t, env_u)
            }
            (Term::If(c1, t1, e1), Term::If(c2, t2, e2)) => {
                go(c1, c2, env_t, env_u) && go(t1, t2, env_t, env_u) && go(e1, e2, env_t, env_u)
            }
            (Term::True, Term::True) | (Term::False, Term::False) | (Term::Err, Term::Err) => true,
            _ => false,
        }
    }
    go(t, u, &mut Vec::new(), &mut Vec::new())
}

/// The term size measure: variables and constants count 1, `λx.t` is
/// `|t| + 1`, applications and conditionals add 1 to the sum of their parts.
pub fn term_size(t: &Term) -> u64 {
    match t {
        Term::Var(_) | Term::True | Term::False | Term::Err => 1,
        Term::Lam(_, body) => term_size(body) + 1,
        Term::App(f, a) => term_size(f) + term_size(a) + 1,
        Term::If(c, t1, t2) => term_size(c) + term_size(t1) + term_size(t2) + 1,
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

/// Parse error with 1-based line/column of the offending token.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("parse error at {line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

const KEYWORDS: [&str; 6] = ["if", "then", "else", "true", "false", "err"];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Lambda,
    Dot,
    LParen,
    RParen,
    KwIf,
    KwThen,
    KwElse,
    KwTrue,
    KwFalse,
    KwErr,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.col,
            message: message.into(),
        }
    }

    fn bump(&mut self) -> u8 {
        let c = self.src[self.pos];
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        c
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
        let mut out = Vec::new();
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            if c.is_ascii_whitespace() {
                self.bump();
                continue;
            }
            let (line, col) = (self.line, self.col);
            let tok = match c {
                b'\\' => {
                    self.bump();
                    Tok::Lambda
                }
                b'.' => {
                    self.bump();
                    Tok::Dot
                }
                b'(' => {
                    self.bump();
                    Tok::LParen
                }
                b')' => {
                    self.bump();
                    Tok::RParen
                }
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    let start = self.pos;
                    while self.pos < self.src.len() {
                        let c = self.src[self.pos];
                        if c.is_ascii_alphanumeric() || c == b'_' || c == b'\'' {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    let ident = std::str::from_utf8(&self.src[start..self.pos])
                        .expect("ascii ident")
                        .to_owned();
                    match ident.as_str() {
                        "if" => Tok::KwIf,
                        "then" => Tok::KwThen,
                        "else" => Tok::KwElse,
                        "true" => Tok::KwTrue,
                        "false" => Tok::KwFalse,
                        "err" => Tok::KwErr,
                        _ => Tok::Ident(ident),
                    }
                }
                other => {
                    return Err(self.error(format!("unexpected character {:?}", other as char)))
                }
            };
            out.push((tok, line, col));
        }
        Ok(out)
    }
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    end: (usize, usize),
    /// Binders currently in scope, innermost last.
    scope: Vec<(String, VarId)>,
    /// Free variables, unified by name.
    free: HashMap<String, VarId>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|&(_, l, c)| (l, c))
            .unwrap_or(self.end)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, column) = self.here();
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == tok => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.error(format!("expected {what}, found {t:?}"))),
            None => Err(self.error(format!("expected {what}, found end of input"))),
        }
    }

    fn lookup(&mut self, name: &str) -> VarId {
        if let Some((_, v)) = self.scope.iter().rev().find(|(n, _)| n == name) {
            return v.clone();
        }
        self.free
            .entry(name.to_owned())
            .or_insert_with(|| VarId::fresh(Some(name)))
            .clone()
    }

    /// term ::= lam | if | app
    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some(Tok::Lambda) => self.lam(),
            Some(Tok::KwIf) => self.ite(),
            _ => self.app(),
        }
    }

    fn lam(&mut self) -> Result<Term, ParseError> {
        self.expect(Tok::Lambda, "'\\'")?;
        let name = match self.next() {
            Some(Tok::Ident(name)) => name,
            _ => {
                self.pos = self.pos.saturating_sub(1);
                return Err(self.error("expected identifier after '\\'"));
            }
        };
        self.expect(Tok::Dot, "'.'")?;
        let binder = VarId::fresh(Some(&name));
        self.scope.push((name, binder.clone()));
        let body = self.term()?;
        self.scope.pop();
        Ok(Term::lam(binder, body))
    }

    fn ite(&mut self) -> Result<Term, ParseError> {
        self.expect(Tok::KwIf, "'if'")?;
        let cond = self.term()?;
        self.expect(Tok::KwThen, "'then'")?;
        let then = self.term()?;
        self.expect(Tok::KwElse, "'else'")?;
        let els = self.term()?;
        Ok(Term::ite(cond, then, els))
    }

    /// app ::= atom+  (left-associative)
    fn app(&mut self) -> Result<Term, ParseError> {
        let mut t = match self.atom()? {
            Some(t) => t,
            None => return Err(self.error("expected a term")),
        };
        while let Some(next) = self.atom()? {
            t = Term::app(t, next);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Option<Term>, ParseError> {
        match self.peek() {
            Some(Tok::Ident(_)) => {
                let name = match self.next() {
                    Some(Tok::Ident(name)) => name,
                    _ => unreachable!(),
                };
                Ok(Some(Term::Var(self.lookup(&name))))
            }
            Some(Tok::KwTrue) => {
                self.pos += 1;
                Ok(Some(Term::True))
            }
            Some(Tok::KwFalse) => {
                self.pos += 1;
                Ok(Some(Term::False))
            }
            Some(Tok::KwErr) => {
                self.pos += 1;
                Ok(Some(Term::Err))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(Some(t))
            }
            // Lambdas and ifs are not atoms, but they may start the final
            // operand position of an application only via parentheses; a bare
            // one here simply ends the atom sequence.
            _ => Ok(None),
        }
    }
}

/// Parses a term. Fresh ids are allocated per binder; free variables are
/// unified by name within this call.
pub fn parse(source: &str) -> Result<Term, ParseError> {
    parse_with_free_env(source, &mut HashMap::new())
}

/// Like [`parse`], but free variable names resolve through (and extend) the
/// given map. Two parses sharing the map agree on the identity of their free
/// variables, which is what round-trip tests need.
pub fn parse_with_free_env(
    source: &str,
    free: &mut HashMap<String, VarId>,
) -> Result<Term, ParseError> {
    let lexer = Lexer::new(source);
    let end = (lexer.line, lexer.col);
    let toks = Lexer::new(source).tokens()?;
    let end = toks.last().map(|&(_, l, c)| (l, c + 1)).unwrap_or(end);
    let mut p = Parser {
        toks,
        pos: 0,
        end,
        scope: Vec::new(),
        free: std::mem::take(free),
    };
    let t = p.term()?;
    if p.pos < p.toks.len() {
        return Err(p.error("trailing input after term"));
    }
    *free = p.free;
    Ok(t)
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

/// Pretty-prints a term in the concrete grammar. The output reparses to an
/// α-equal term: free variables get names that are injective on ids, and
/// binder names are chosen to avoid clashes with anything in scope.
pub fn print(t: &Term) -> String {
    let mut names: HashMap<VarId, String> = HashMap::new();
    let mut used: HashSet<String> = HashSet::new();
    // Free variables first, in a deterministic order.
    let mut frees: Vec<VarId> = free_vars(t).into_iter().collect();
    frees.sort();
    for v in frees {
        let name = pick_name(v.hint().unwrap_or("x"), &used);
        used.insert(name.clone());
        names.insert(v, name);
    }
    let mut out = String::new();
    print_term(t, &mut names, &mut used, &mut out, Pos::Top);
    out
}

fn pick_name(base: &str, used: &HashSet<String>) -> String {
    let base = if KEYWORDS.contains(&base) || base.is_empty() {
        "x"
    } else {
        base
    };
    let mut name = base.to_owned();
    while used.contains(&name) || KEYWORDS.contains(&name.as_str()) {
        name.push('\'');
    }
    name
}

#[derive(Clone, Copy, PartialEq)]
enum Pos {
    /// Whole term, lambda body, if branch: everything allowed bare.
    Top,
    /// Application operand: only atoms allowed bare.
    Operand,
}

fn print_term(
    t: &Term,
    names: &mut HashMap<VarId, String>,
    used: &mut HashSet<String>,
    out: &mut String,
    pos: Pos,
) {
    match t {
        Term::Var(x) => {
            let name = names
                .get(x)
                .cloned()
                .unwrap_or_else(|| format!("{}{}", x.hint().unwrap_or("x"), x.id()));
            out.push_str(&name);
        }
        Term::True => out.push_str("true"),
        Term::False => out.push_str("false"),
        Term::Err => out.push_str("err"),
        Term::Lam(x, body) => {
            let parens = pos == Pos::Operand;
            if parens {
                out.push('(');
            }
            let name = pick_name(x.hint().unwrap_or("x"), used);
            let shadowed = names.insert(x.clone(), name.clone());
            let newly_used = used.insert(name.clone());
            out.push('\\');
            out.push_str(&name);
            out.push_str(". ");
            print_term(body, names, used, out, Pos::Top);
            match shadowed {
                Some(old) => {
                    names.insert(x.clone(), old);
                }
                None => {
                    names.remove(x);
                }
            }
            if newly_used {
                used.remove(&name);
            }
            if parens {
                out.push(')');
            }
        }
        Term::App(f, a) => {
            let parens = pos == Pos::Operand;
            if parens {
                out.push('(');
            }
            // Left spine of an application can stay bare (left-associative),
            // unless it is a lambda or an if.
            match f.as_ref() {
                Term::App(..) => print_term(f, names, used, out, Pos::Top),
                _ => print_term(f, names, used, out, Pos::Operand),
            }
            out.push(' ');
            print_term(a, names, used, out, Pos::Operand);
            if parens {
                out.push(')');
            }
        }
        Term::If(c, t1, t2) => {
            let parens = pos == Pos::Operand;
            if parens {
                out.push('(');
            }
            out.push_str("if ");
            print_term(c, names, used, out, Pos::Top);
            out.push_str(" then ");
            print_term(t1, names, used, out, Pos::Top);
            out.push_str(" else ");
            print_term(t2, names, used, out, Pos::Top);
            if parens {
                out.push(')');
            }
        }
    }
}
