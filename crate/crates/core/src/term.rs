//! Plain lambda terms.
//!
//! Terms use named binders. Equality of terms in the rest of the crate is
//! α-equivalence ([`Term::alpha_eq`]); the derived `PartialEq` is syntactic.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Abs(String, Box<Term>),
    App(Box<Term>, Box<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("path {0} does not address a subterm")]
    BadPath(RedexPath),
    #[error("path {0} does not address a beta redex")]
    NotARedex(RedexPath),
}

pub fn var(x: &str) -> Term {
    Term::Var(x.to_string())
}

pub fn abs(x: &str, body: Term) -> Term {
    Term::Abs(x.to_string(), Box::new(body))
}

pub fn app(f: Term, a: Term) -> Term {
    Term::App(Box::new(f), Box::new(a))
}

/// Left-nested application `f a1 a2 ...`.
pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
    args.into_iter().fold(f, app)
}

/// A name based on `base` that does not occur in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches('\'');
    let mut candidate = format!("{stem}'");
    while avoid.contains(&candidate) {
        candidate.push('\'');
    }
    candidate
}

impl Term {
    pub fn parse(text: &str) -> Result<Term, TermError> {
        text.parse()
    }

    /// `|x| = 1`, `|λx.t| = |t| + 1`, `|t u| = |t| + |u| + 1`.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Abs(_, b) => b.size() + 1,
            Term::App(f, a) => f.size() + a.size() + 1,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Term::Abs(x, b) => {
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            Term::App(f, a) => {
                f.collect_free(bound, out);
                a.collect_free(bound, out);
            }
        }
    }

    /// Every variable name occurring in the term, bound or free.
    pub fn all_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::Abs(x, b) => {
                out.insert(x.clone());
                b.collect_names(out);
            }
            Term::App(f, a) => {
                f.collect_names(out);
                a.collect_names(out);
            }
        }
    }

    /// Number of free occurrences of `x`.
    pub fn free_occurrences(&self, x: &str) -> usize {
        match self {
            Term::Var(y) => usize::from(y == x),
            Term::Abs(y, b) => {
                if y == x {
                    0
                } else {
                    b.free_occurrences(x)
                }
            }
            Term::App(f, a) => f.free_occurrences(x) + a.free_occurrences(x),
        }
    }

    pub fn is_free(&self, x: &str) -> bool {
        self.free_occurrences(x) > 0
    }

    /// Capture-avoiding `self[u/x]`.
    pub fn substitute(&self, x: &str, u: &Term) -> Term {
        let fv = u.free_vars();
        self.subst_with(x, u, &fv)
    }

    fn subst_with(&self, x: &str, u: &Term, fv_u: &BTreeSet<String>) -> Term {
        match self {
            Term::Var(y) => {
                if y == x {
                    u.clone()
                } else {
                    self.clone()
                }
            }
            Term::App(f, a) => app(f.subst_with(x, u, fv_u), a.subst_with(x, u, fv_u)),
            Term::Abs(y, b) => {
                if y == x || !b.is_free(x) {
                    return self.clone();
                }
                if fv_u.contains(y) {
                    let mut avoid = fv_u.clone();
                    avoid.extend(b.free_vars());
                    avoid.insert(x.to_string());
                    let y2 = fresh_name(y, &avoid);
                    let b2 = b.rename_free(y, &y2);
                    Term::Abs(y2, Box::new(b2.subst_with(x, u, fv_u)))
                } else {
                    Term::Abs(y.clone(), Box::new(b.subst_with(x, u, fv_u)))
                }
            }
        }
    }

    /// `self[y/x]` for a variable `y`.
    pub fn rename_free(&self, x: &str, y: &str) -> Term {
        self.substitute(x, &Term::Var(y.to_string()))
    }

    /// α-equivalence.
    pub fn alpha_eq(&self, other: &Term) -> bool {
        fn go<'a>(a: &'a Term, b: &'a Term, ea: &mut Vec<&'a str>, eb: &mut Vec<&'a str>) -> bool {
            match (a, b) {
                (Term::Var(x), Term::Var(y)) => {
                    let ix = ea.iter().rposition(|v| *v == x);
                    let iy = eb.iter().rposition(|v| *v == y);
                    match (ix, iy) {
                        (Some(i), Some(j)) => i == j,
                        (None, None) => x == y,
                        _ => false,
                    }
                }
                (Term::Abs(x, s), Term::Abs(y, t)) => {
                    ea.push(x);
                    eb.push(y);
                    let r = go(s, t, ea, eb);
                    ea.pop();
                    eb.pop();
                    r
                }
                (Term::App(f, a2), Term::App(g, b2)) => go(f, g, ea, eb) && go(a2, b2, ea, eb),
                _ => false,
            }
        }
        go(self, other, &mut Vec::new(), &mut Vec::new())
    }

    pub fn subterm(&self, path: &RedexPath) -> Option<&Term> {
        let mut cur = self;
        for step in &path.0 {
            cur = match (step, cur) {
                (Step::Fun, Term::App(f, _)) => f,
                (Step::Arg, Term::App(_, a)) => a,
                (Step::Body, Term::Abs(_, b)) => b,
                _ => return None,
            };
        }
        Some(cur)
    }

    /// Replace the subterm at `path` (no renaming: the caller is responsible
    /// for scoping of the replacement).
    pub fn replace_at(&self, path: &[Step], new: Term) -> Option<Term> {
        let Some((first, rest)) = path.split_first() else {
            return Some(new);
        };
        Some(match (first, self) {
            (Step::Fun, Term::App(f, a)) => app(f.replace_at(rest, new)?, (**a).clone()),
            (Step::Arg, Term::App(f, a)) => app((**f).clone(), a.replace_at(rest, new)?),
            (Step::Body, Term::Abs(x, b)) => Term::Abs(x.clone(), Box::new(b.replace_at(rest, new)?)),
            _ => return None,
        })
    }

    pub fn is_redex(&self) -> bool {
        matches!(self, Term::App(f, _) if matches!(**f, Term::Abs(..)))
    }

    /// All redex paths in leftmost-outermost order.
    pub fn redexes(&self) -> Vec<RedexPath> {
        let mut out = Vec::new();
        self.collect_redexes(&mut Vec::new(), &mut out);
        out
    }

    fn collect_redexes(&self, prefix: &mut Vec<Step>, out: &mut Vec<RedexPath>) {
        if self.is_redex() {
            out.push(RedexPath(prefix.clone()));
        }
        match self {
            Term::Var(_) => {}
            Term::Abs(_, b) => {
                prefix.push(Step::Body);
                b.collect_redexes(prefix, out);
                prefix.pop();
            }
            Term::App(f, a) => {
                prefix.push(Step::Fun);
                f.collect_redexes(prefix, out);
                prefix.pop();
                prefix.push(Step::Arg);
                a.collect_redexes(prefix, out);
                prefix.pop();
            }
        }
    }

    pub fn is_normal(&self) -> bool {
        match self {
            Term::Var(_) => true,
            Term::Abs(_, b) => b.is_normal(),
            Term::App(f, a) => !self.is_redex() && f.is_normal() && a.is_normal(),
        }
    }

    fn leftmost_outermost(&self) -> Option<RedexPath> {
        fn go(t: &Term, prefix: &mut Vec<Step>) -> bool {
            if t.is_redex() {
                return true;
            }
            match t {
                Term::Var(_) => false,
                Term::Abs(_, b) => {
                    prefix.push(Step::Body);
                    go(b, prefix) || {
                        prefix.pop();
                        false
                    }
                }
                Term::App(f, a) => {
                    prefix.push(Step::Fun);
                    if go(f, prefix) {
                        return true;
                    }
                    prefix.pop();
                    prefix.push(Step::Arg);
                    go(a, prefix) || {
                        prefix.pop();
                        false
                    }
                }
            }
        }
        let mut p = Vec::new();
        go(self, &mut p).then_some(RedexPath(p))
    }

    fn rightmost_innermost(&self) -> Option<RedexPath> {
        fn go(t: &Term, prefix: &mut Vec<Step>) -> bool {
            match t {
                Term::Var(_) => false,
                Term::Abs(_, b) => {
                    prefix.push(Step::Body);
                    if go(b, prefix) {
                        return true;
                    }
                    prefix.pop();
                    false
                }
                Term::App(f, a) => {
                    prefix.push(Step::Arg);
                    if go(a, prefix) {
                        return true;
                    }
                    prefix.pop();
                    prefix.push(Step::Fun);
                    if go(f, prefix) {
                        return true;
                    }
                    prefix.pop();
                    t.is_redex()
                }
            }
        }
        let mut p = Vec::new();
        go(self, &mut p).then_some(RedexPath(p))
    }

    /// Contract the redex at `path`.
    pub fn beta_at(&self, path: &RedexPath) -> Result<Term, TermError> {
        let sub = self.subterm(path).ok_or_else(|| TermError::BadPath(path.clone()))?;
        let Term::App(f, a) = sub else {
            return Err(TermError::NotARedex(path.clone()));
        };
        let Term::Abs(x, body) = &**f else {
            return Err(TermError::NotARedex(path.clone()));
        };
        let reduct = body.substitute(x, a);
        self.replace_at(&path.0, reduct)
            .ok_or_else(|| TermError::BadPath(path.clone()))
    }

    /// Decode a Church numeral `λf.λx.f (… (f x))`.
    pub fn church_value(&self) -> Option<u64> {
        let Term::Abs(f, b) = self else { return None };
        let Term::Abs(x, body) = &**b else { return None };
        let mut cur: &Term = body;
        if f == x {
            return None;
        }
        let mut n = 0;
        loop {
            match &*cur {
                Term::Var(y) if y == x => return Some(n),
                Term::App(g, a) if matches!(&**g, Term::Var(h) if h == f) => {
                    n += 1;
                    cur = a;
                }
                _ => return None,
            }
        }
    }
}

/// One step of a [`RedexPath`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Step {
    Fun,
    Arg,
    Body,
}

/// Address of a subterm, read from the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RedexPath(pub Vec<Step>);

impl RedexPath {
    pub fn root() -> Self {
        RedexPath(Vec::new())
    }

    pub fn child(&self, step: Step) -> Self {
        let mut v = self.0.clone();
        v.push(step);
        RedexPath(v)
    }
}

impl fmt::Display for RedexPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        for s in &self.0 {
            let c = match s {
                Step::Fun => 'F',
                Step::Arg => 'A',
                Step::Body => 'B',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    LeftmostOutermost,
    RightmostInnermost,
    Random(u64),
}

impl Strategy {
    pub fn label(&self) -> String {
        match self {
            Strategy::LeftmostOutermost => "lo".into(),
            Strategy::RightmostInnermost => "ri".into(),
            Strategy::Random(s) => format!("random({s})"),
        }
    }
}

/// Chooses the next redex. Random selection keeps its own generator so a
/// run is reproducible from the seed alone.
pub struct RedexChooser {
    strategy: Strategy,
    rng: Option<ChaCha8Rng>,
}

impl RedexChooser {
    pub fn new(strategy: Strategy) -> Self {
        let rng = match strategy {
            Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        RedexChooser { strategy, rng }
    }

    pub fn choose(&mut self, t: &Term) -> Option<RedexPath> {
        match self.strategy {
            Strategy::LeftmostOutermost => t.leftmost_outermost(),
            Strategy::RightmostInnermost => t.rightmost_innermost(),
            Strategy::Random(_) => {
                let all = t.redexes();
                if all.is_empty() {
                    return None;
                }
                let rng = self.rng.as_mut().expect("random strategy has a generator");
                let i = rng.gen_range(0..all.len());
                Some(all[i].clone())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub path: RedexPath,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    #[serde(with = "term_string")]
    pub initial: Term,
    pub steps: Vec<TraceStep>,
    #[serde(rename = "final", with = "term_string")]
    pub final_term: Term,
    pub count: usize,
    /// False when fuel ran out before a normal form was reached.
    pub normal: bool,
}

impl ReductionTrace {
    /// Re-run the recorded steps from `initial`.
    pub fn replay(&self) -> Result<Term, TermError> {
        let mut t = self.initial.clone();
        for s in &self.steps {
            t = t.beta_at(&s.path)?;
        }
        Ok(t)
    }
}

pub fn normalize(t: &Term, strategy: Strategy, fuel: u64) -> ReductionTrace {
    let mut chooser = RedexChooser::new(strategy);
    let mut cur = t.clone();
    let mut steps = Vec::new();
    let mut normal = false;
    for _ in 0..fuel {
        match chooser.choose(&cur) {
            None => {
                normal = true;
                break;
            }
            Some(p) => {
                cur = cur.beta_at(&p).expect("chosen path is a redex");
                steps.push(TraceStep { path: p, size: cur.size() });
            }
        }
    }
    if !normal {
        normal = cur.is_normal();
    }
    ReductionTrace {
        initial: t.clone(),
        count: steps.len(),
        steps,
        final_term: cur,
        normal,
    }
}

/// Serde adapter storing a term as its concrete syntax.
pub mod term_string {
    use super::Term;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(t: &Term, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&t.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Term, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => write!(f, "{x}"),
            Term::Abs(x, b) => write!(f, "\\{x}.{b}"),
            Term::App(g, a) => {
                match **g {
                    Term::Abs(..) => write!(f, "({g})")?,
                    _ => write!(f, "{g}")?,
                }
                match **a {
                    Term::Var(_) => write!(f, " {a}"),
                    _ => write!(f, " ({a})"),
                }
            }
        }
    }
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

/// Tokens shared by the term and λLA readers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Lambda,
    Dot,
    LParen,
    RParen,
    Bang,
    Par,
    Ident(String),
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, TermError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '\\' | 'λ' => {
                out.push((pos, Tok::Lambda));
                i += 1;
            }
            '.' => {
                out.push((pos, Tok::Dot));
                i += 1;
            }
            '(' => {
                out.push((pos, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((pos, Tok::RParen));
                i += 1;
            }
            '!' => {
                out.push((pos, Tok::Bang));
                i += 1;
            }
            '$' | '§' => {
                out.push((pos, Tok::Par));
                i += 1;
            }
            c if is_ident_char(c) && c != '\'' => {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i].1) {
                    i += 1;
                }
                let s: String = chars[start..i].iter().map(|(_, c)| *c).collect();
                out.push((pos, Tok::Ident(s)));
            }
            other => {
                return Err(TermError::Syntax {
                    pos,
                    msg: format!("unexpected character '{other}'"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    i: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: &str) -> Result<T, TermError> {
        Err(TermError::Syntax { pos: self.pos(), msg: msg.to_string() })
    }

    fn term(&mut self) -> Result<Term, TermError> {
        let mut acc: Option<Term> = None;
        loop {
            let atom = match self.peek() {
                Some(Tok::Lambda) => Some(self.lambda()?),
                Some(Tok::Ident(_)) | Some(Tok::LParen) => Some(self.atom()?),
                _ => None,
            };
            match atom {
                None => break,
                Some(a) => {
                    acc = Some(match acc {
                        None => a,
                        Some(f) => app(f, a),
                    });
                }
            }
        }
        match acc {
            Some(t) => Ok(t),
            None => self.err("expected a term"),
        }
    }

    fn lambda(&mut self) -> Result<Term, TermError> {
        self.i += 1;
        let mut binders = Vec::new();
        while let Some(Tok::Ident(x)) = self.peek() {
            binders.push(x.clone());
            self.i += 1;
        }
        if binders.is_empty() {
            return self.err("expected a binder after lambda");
        }
        if self.peek() != Some(&Tok::Dot) {
            return self.err("expected '.'");
        }
        self.i += 1;
        let body = self.term()?;
        Ok(binders.into_iter().rev().fold(body, |b, x| Term::Abs(x, Box::new(b))))
    }

    fn atom(&mut self) -> Result<Term, TermError> {
        match self.peek().cloned() {
            Some(Tok::Ident(x)) => {
                self.i += 1;
                Ok(Term::Var(x))
            }
            Some(Tok::LParen) => {
                self.i += 1;
                let t = self.term()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                self.i += 1;
                Ok(t)
            }
            _ => self.err("expected an identifier or '('"),
        }
    }
}

impl FromStr for Term {
    type Err = TermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let toks = tokenize(s)?;
        if let Some((pos, t)) = toks.iter().find(|(_, t)| matches!(t, Tok::Bang | Tok::Par)) {
            return Err(TermError::Syntax {
                pos: *pos,
                msg: format!("modal constructor {t:?} is not part of plain terms"),
            });
        }
        let mut p = Parser { toks, i: 0, end: s.len() };
        let t = p.term()?;
        if p.i != p.toks.len() {
            return p.err("trailing input");
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Term {
        s.parse().unwrap()
    }

    #[test]
    fn parses_identity_and_numeral() {
        assert_eq!(t("\\x.x"), abs("x", var("x")));
        assert_eq!(
            t("\\f.\\x.f (f x)"),
            abs("f", abs("x", app(var("f"), app(var("f"), var("x")))))
        );
        assert_eq!(t("\\f x.f x"), t("\\f.\\x.f x"));
        assert_eq!(t("a b c"), app(app(var("a"), var("b")), var("c")));
    }

    #[test]
    fn rejects_malformed() {
        assert!(matches!(Term::parse("\\x."), Err(TermError::Syntax { pos: 3, .. })));
        assert!(Term::parse("(x").is_err());
        assert!(Term::parse("x )").is_err());
        assert!(Term::parse("").is_err());
    }

    #[test]
    fn sizes() {
        assert_eq!(var("x").size(), 1);
        assert_eq!(t("\\x.x").size(), 2);
        assert_eq!(t("\\f.\\x.f (f x)").size(), 7);
    }

    #[test]
    fn occurrences() {
        assert_eq!(t("\\y.x x").free_occurrences("x"), 2);
        assert_eq!(t("\\x.x").free_occurrences("x"), 0);
        assert_eq!(t("f (f x)").free_occurrences("f"), 2);
    }

    #[test]
    fn substitution_avoids_capture() {
        assert_eq!(var("x").substitute("x", &var("y")), var("y"));
        let r = t("\\y.x").substitute("x", &var("y"));
        match &r {
            Term::Abs(b, body) => {
                assert_ne!(b, "y");
                assert_eq!(**body, var("y"));
            }
            _ => panic!("expected abstraction"),
        }
        assert_eq!(t("\\x.x").substitute("x", &var("y")), t("\\x.x"));
    }

    #[test]
    fn alpha_equivalence() {
        assert!(t("\\x.x").alpha_eq(&t("\\y.y")));
        assert!(!t("\\x.y").alpha_eq(&t("\\y.y")));
        assert!(t("\\x.\\y.x y").alpha_eq(&t("\\a.\\b.a b")));
        assert!(!t("\\x.\\y.x y").alpha_eq(&t("\\a.\\b.b a")));
    }

    #[test]
    fn one_step_identity() {
        let tr = normalize(&t("(\\x.x) y"), Strategy::LeftmostOutermost, 10);
        assert_eq!(tr.count, 1);
        assert_eq!(tr.final_term, var("y"));
        assert!(tr.normal);
        assert_eq!(tr.replay().unwrap(), tr.final_term);
    }

    #[test]
    fn fuel_exhaustion_is_reported() {
        let omega = t("(\\x.x x) (\\x.x x)");
        let tr = normalize(&omega, Strategy::LeftmostOutermost, 5);
        assert_eq!(tr.count, 5);
        assert!(!tr.normal);
    }

    #[test]
    fn strategies_pick_expected_redex() {
        let term = t("(\\x.x) ((\\y.y) z)");
        let mut lo = RedexChooser::new(Strategy::LeftmostOutermost);
        let mut ri = RedexChooser::new(Strategy::RightmostInnermost);
        assert_eq!(lo.choose(&term), Some(RedexPath::root()));
        assert_eq!(ri.choose(&term), Some(RedexPath(vec![Step::Arg])));
    }

    #[test]
    fn counterexample_family_sizes() {
        // t_n = (λx.y x x)^n z; normal form u_n = y u_{n-1} u_{n-1}
        let mut sizes = Vec::new();
        for n in 1..=3 {
            let mut term = var("z");
            for _ in 0..n {
                term = app(t("\\x.y x x"), term);
            }
            let tr = normalize(&term, Strategy::LeftmostOutermost, 10_000);
            assert!(tr.normal);
            sizes.push(tr.final_term.size());
        }
        assert_eq!(sizes, vec![5, 13, 29]);
    }

    #[test]
    fn church_decoding() {
        assert_eq!(t("\\f.\\x.x").church_value(), Some(0));
        assert_eq!(t("\\f.\\x.f (f (f x))").church_value(), Some(3));
        assert_eq!(t("\\f.\\x.x f").church_value(), None);
    }

    #[test]
    fn trace_json_shape() {
        let tr = normalize(&t("(\\x.x) y"), Strategy::LeftmostOutermost, 10);
        let v = serde_json::to_value(&tr).unwrap();
        assert_eq!(v["initial"], "(\\x.x) y");
        assert_eq!(v["final"], "y");
        assert_eq!(v["count"], 1);
        assert_eq!(v["steps"][0]["size"], 1);
        let back: ReductionTrace = serde_json::from_value(v).unwrap();
        assert_eq!(back, tr);
    }
}
