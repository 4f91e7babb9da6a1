//! Light affine lambda calculus: terms, reduction, erasure and the embedding
//! of NDLAL scripts.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::deriv::{check_ndlal, DerivError, DerivScript, Rule};
use crate::term::{fresh_name, tokenize, RedexChooser, RedexPath, Step, Strategy, Term, TermError, Tok};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Modality {
    Bang,
    Par,
}

impl Modality {
    fn sigil(self) -> char {
        match self {
            Modality::Bang => '!',
            Modality::Par => '$',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LlaTerm {
    Var(String),
    Abs(String, Box<LlaTerm>),
    App(Box<LlaTerm>, Box<LlaTerm>),
    /// `!t` or `$t`
    Box(Modality, Box<LlaTerm>),
    /// `let u be !x in t` or `let u be $x in t`
    Let(Modality, Box<LlaTerm>, String, Box<LlaTerm>),
}

pub fn lvar(x: &str) -> LlaTerm {
    LlaTerm::Var(x.into())
}

pub fn labs(x: &str, b: LlaTerm) -> LlaTerm {
    LlaTerm::Abs(x.into(), Box::new(b))
}

pub fn lapp(f: LlaTerm, a: LlaTerm) -> LlaTerm {
    LlaTerm::App(Box::new(f), Box::new(a))
}

pub fn lbox(m: Modality, t: LlaTerm) -> LlaTerm {
    LlaTerm::Box(m, Box::new(t))
}

pub fn llet(m: Modality, u: LlaTerm, x: &str, t: LlaTerm) -> LlaTerm {
    LlaTerm::Let(m, Box::new(u), x.into(), Box::new(t))
}

/// `λ^! x.t`, stored as `λx.let x be !y in t[y/x]`.
pub fn lbang_abs(x: &str, t: LlaTerm) -> LlaTerm {
    let mut avoid = t.all_names();
    avoid.insert(x.to_string());
    let y = fresh_name(x, &avoid);
    labs(x, llet(Modality::Bang, lvar(x), &y, t.substitute(x, &lvar(&y))))
}

#[derive(Debug, Error)]
pub enum LlaError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("{0}")]
    Mismatch(String),
    #[error("simulation invariant: {0}")]
    Simulation(String),
    #[error(transparent)]
    Deriv(#[from] DerivError),
    #[error(transparent)]
    Term(#[from] TermError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LlaStep {
    Fun,
    Arg,
    Body,
    /// Under `!` or `$`.
    Inner,
    Scrutinee,
    LetBody,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LlaRule {
    Beta,
    Par,
    Bang,
    Com1,
    Com2,
}

impl LlaTerm {
    /// Size with `!`/`$` boxes free and `λ^! x` counted as one binder.
    pub fn size(&self) -> usize {
        if let Some((_, _, t)) = self.as_bang_abs() {
            return 1 + t.size();
        }
        match self {
            LlaTerm::Var(_) => 1,
            LlaTerm::Box(_, b) => b.size(),
            LlaTerm::Abs(_, b) => 1 + b.size(),
            LlaTerm::App(f, a) => 1 + f.size() + a.size(),
            LlaTerm::Let(_, u, _, t) => 1 + u.size() + t.size(),
        }
    }

    /// Every constructor counted once.
    pub fn node_count(&self) -> usize {
        match self {
            LlaTerm::Var(_) => 1,
            LlaTerm::Abs(_, b) | LlaTerm::Box(_, b) => 1 + b.node_count(),
            LlaTerm::App(f, a) => 1 + f.node_count() + a.node_count(),
            LlaTerm::Let(_, u, _, t) => 1 + u.node_count() + t.node_count(),
        }
    }

    /// `λx.let x be !y in t` with `x` not free in `t`, as `(x, y, t)`.
    pub fn as_bang_abs(&self) -> Option<(&str, &str, &LlaTerm)> {
        match self {
            LlaTerm::Abs(x, b) => match &**b {
                LlaTerm::Let(Modality::Bang, u, y, t) if matches!(&**u, LlaTerm::Var(v) if v == x) && !t.free_vars().contains(x) => {
                    Some((x, y, t))
                }
                _ => None,
            },
            _ => None,
        }
    }

    /// Maximal number of `!`/`$` boxes on a branch.
    pub fn depth(&self) -> usize {
        match self {
            LlaTerm::Var(_) => 0,
            LlaTerm::Abs(_, b) => b.depth(),
            LlaTerm::Box(_, b) => 1 + b.depth(),
            LlaTerm::App(f, a) => f.depth().max(a.depth()),
            LlaTerm::Let(_, u, _, t) => u.depth().max(t.depth()),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        match self {
            LlaTerm::Var(x) => BTreeSet::from([x.clone()]),
            LlaTerm::Abs(x, b) => {
                let mut s = b.free_vars();
                s.remove(x);
                s
            }
            LlaTerm::Box(_, b) => b.free_vars(),
            LlaTerm::App(f, a) => {
                let mut s = f.free_vars();
                s.extend(a.free_vars());
                s
            }
            LlaTerm::Let(_, u, x, t) => {
                let mut s = t.free_vars();
                s.remove(x);
                s.extend(u.free_vars());
                s
            }
        }
    }

    pub fn all_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.names_into(&mut out);
        out
    }

    fn names_into(&self, out: &mut BTreeSet<String>) {
        match self {
            LlaTerm::Var(x) => {
                out.insert(x.clone());
            }
            LlaTerm::Abs(x, b) => {
                out.insert(x.clone());
                b.names_into(out);
            }
            LlaTerm::Box(_, b) => b.names_into(out),
            LlaTerm::App(f, a) => {
                f.names_into(out);
                a.names_into(out);
            }
            LlaTerm::Let(_, u, x, t) => {
                out.insert(x.clone());
                u.names_into(out);
                t.names_into(out);
            }
        }
    }

    /// Capture-avoiding `self[u/x]`.
    pub fn substitute(&self, x: &str, u: &LlaTerm) -> LlaTerm {
        let fv = u.free_vars();
        self.subst_with(x, u, &fv)
    }

    fn subst_with(&self, x: &str, u: &LlaTerm, fv: &BTreeSet<String>) -> LlaTerm {
        match self {
            LlaTerm::Var(y) if y == x => u.clone(),
            LlaTerm::Var(_) => self.clone(),
            LlaTerm::App(f, a) => lapp(f.subst_with(x, u, fv), a.subst_with(x, u, fv)),
            LlaTerm::Box(m, b) => lbox(*m, b.subst_with(x, u, fv)),
            LlaTerm::Abs(y, b) => {
                let (y, b) = self.under_binder(y, b, x, u, fv);
                labs(&y, b)
            }
            LlaTerm::Let(m, s, y, b) => {
                let s = s.subst_with(x, u, fv);
                let (y, b) = self.under_binder(y, b, x, u, fv);
                llet(*m, s, &y, b)
            }
        }
    }

    fn under_binder(&self, y: &str, b: &LlaTerm, x: &str, u: &LlaTerm, fv: &BTreeSet<String>) -> (String, LlaTerm) {
        if y == x || !b.free_vars().contains(x) {
            return (y.to_string(), b.clone());
        }
        if fv.contains(y) {
            let mut avoid = fv.clone();
            avoid.extend(b.all_names());
            avoid.insert(x.to_string());
            let z = fresh_name(y, &avoid);
            let renamed = b.substitute(y, &lvar(&z));
            (z, renamed.subst_with(x, u, fv))
        } else {
            (y.to_string(), b.subst_with(x, u, fv))
        }
    }

    pub fn erase(&self) -> Term {
        match self {
            LlaTerm::Var(x) => Term::Var(x.clone()),
            LlaTerm::Abs(x, b) => Term::Abs(x.clone(), Box::new(b.erase())),
            LlaTerm::App(f, a) => Term::App(Box::new(f.erase()), Box::new(a.erase())),
            LlaTerm::Box(_, b) => b.erase(),
            LlaTerm::Let(_, u, x, t) => t.erase().substitute(x, &u.erase()),
        }
    }

    pub fn subterm(&self, path: &[LlaStep]) -> Option<&LlaTerm> {
        let mut cur = self;
        for s in path {
            cur = match (s, cur) {
                (LlaStep::Fun, LlaTerm::App(f, _)) => f,
                (LlaStep::Arg, LlaTerm::App(_, a)) => a,
                (LlaStep::Body, LlaTerm::Abs(_, b)) => b,
                (LlaStep::Inner, LlaTerm::Box(_, b)) => b,
                (LlaStep::Scrutinee, LlaTerm::Let(_, u, _, _)) => u,
                (LlaStep::LetBody, LlaTerm::Let(_, _, _, t)) => t,
                _ => return None,
            };
        }
        Some(cur)
    }

    fn replace_at(&self, path: &[LlaStep], new: LlaTerm) -> Option<LlaTerm> {
        let Some((s, rest)) = path.split_first() else { return Some(new) };
        Some(match (s, self) {
            (LlaStep::Fun, LlaTerm::App(f, a)) => lapp(f.replace_at(rest, new)?, (**a).clone()),
            (LlaStep::Arg, LlaTerm::App(f, a)) => lapp((**f).clone(), a.replace_at(rest, new)?),
            (LlaStep::Body, LlaTerm::Abs(x, b)) => labs(x, b.replace_at(rest, new)?),
            (LlaStep::Inner, LlaTerm::Box(m, b)) => lbox(*m, b.replace_at(rest, new)?),
            (LlaStep::Scrutinee, LlaTerm::Let(m, u, x, t)) => llet(*m, u.replace_at(rest, new)?, x, (**t).clone()),
            (LlaStep::LetBody, LlaTerm::Let(m, u, x, t)) => llet(*m, (**u).clone(), x, t.replace_at(rest, new)?),
            _ => return None,
        })
    }

    /// The contractum of `rule` if this node is such a redex.
    pub fn contract(&self, rule: LlaRule) -> Option<LlaTerm> {
        match (rule, self) {
            (LlaRule::Beta, LlaTerm::App(f, a)) => match &**f {
                LlaTerm::Abs(x, b) => Some(b.substitute(x, a)),
                _ => None,
            },
            (LlaRule::Par | LlaRule::Bang, LlaTerm::Let(m, u, x, t)) => {
                let want = if rule == LlaRule::Par { Modality::Par } else { Modality::Bang };
                match &**u {
                    LlaTerm::Box(k, inner) if *k == want && *m == want => Some(t.substitute(x, inner)),
                    _ => None,
                }
            }
            (LlaRule::Com1, LlaTerm::App(f, v)) => match &**f {
                LlaTerm::Let(m, u, x, t) => {
                    let (x, t) = avoid_binder(x, t, &v.free_vars());
                    Some(llet(*m, (**u).clone(), &x, lapp(t, (**v).clone())))
                }
                _ => None,
            },
            (LlaRule::Com2, LlaTerm::Let(m2, s, y, v)) => match &**s {
                LlaTerm::Let(m1, u, x, t) => {
                    let mut fv = v.free_vars();
                    fv.insert(y.clone());
                    let (x, t) = avoid_binder(x, t, &fv);
                    Some(llet(*m1, (**u).clone(), &x, llet(*m2, t, y, (**v).clone())))
                }
                _ => None,
            },
            _ => None,
        }
    }

    /// Fire `rule` at `path`.
    pub fn step(&self, rule: LlaRule, path: &[LlaStep]) -> Result<LlaTerm, LlaError> {
        let here = self.subterm(path).ok_or_else(|| LlaError::Mismatch("path leaves the term".into()))?;
        let new = here.contract(rule).ok_or_else(|| LlaError::Mismatch(format!("no {rule:?} redex at the path")))?;
        Ok(self.replace_at(path, new).expect("path checked"))
    }

    /// Paths of `rule` redexes, innermost first.
    pub fn redexes(&self, rule: LlaRule) -> Vec<Vec<LlaStep>> {
        let mut out = Vec::new();
        self.collect(rule, &mut Vec::new(), &mut out);
        out
    }

    fn collect(&self, rule: LlaRule, here: &mut Vec<LlaStep>, out: &mut Vec<Vec<LlaStep>>) {
        let kids: Vec<(LlaStep, &LlaTerm)> = match self {
            LlaTerm::Var(_) => vec![],
            LlaTerm::Abs(_, b) => vec![(LlaStep::Body, b)],
            LlaTerm::Box(_, b) => vec![(LlaStep::Inner, b)],
            LlaTerm::App(f, a) => vec![(LlaStep::Fun, f), (LlaStep::Arg, a)],
            LlaTerm::Let(_, u, _, t) => vec![(LlaStep::Scrutinee, u), (LlaStep::LetBody, t)],
        };
        for (s, k) in kids {
            here.push(s);
            k.collect(rule, here, out);
            here.pop();
        }
        if self.contract(rule).is_some() {
            out.push(here.clone());
        }
    }

    pub fn is_saturated(&self) -> bool {
        SATURATION.iter().all(|r| self.redexes(*r).is_empty())
    }
}

const SATURATION: [LlaRule; 4] = [LlaRule::Par, LlaRule::Bang, LlaRule::Com1, LlaRule::Com2];

fn avoid_binder(x: &str, t: &LlaTerm, fv: &BTreeSet<String>) -> (String, LlaTerm) {
    if !fv.contains(x) {
        return (x.to_string(), t.clone());
    }
    let mut avoid = fv.clone();
    avoid.extend(t.all_names());
    let z = fresh_name(x, &avoid);
    (z.clone(), t.substitute(x, &lvar(&z)))
}

/// Apply `($)`, `(!)`, `(com1)`, `(com2)` in that priority, innermost first,
/// until none applies.
pub fn saturate(t: &LlaTerm) -> (LlaTerm, usize) {
    let mut cur = t.clone();
    let mut steps = 0;
    'outer: loop {
        for rule in SATURATION {
            if let Some(p) = cur.redexes(rule).into_iter().next() {
                cur = cur.step(rule, &p).expect("redex found");
                steps += 1;
                continue 'outer;
            }
        }
        return (cur, steps);
    }
}

/// The λLA term decorating the subject of an NDLAL script.
pub fn embed(s: &DerivScript) -> Result<LlaTerm, LlaError> {
    check_ndlal(s)?;
    Ok(emb(s))
}

fn emb(s: &DerivScript) -> LlaTerm {
    let p = &s.params;
    let kid = |i: usize| emb(&s.premises[i]);
    let binder = || p.binder.as_deref().expect("binder");
    match s.rule {
        Rule::Id => lvar(p.var.as_deref().expect("var")),
        Rule::LinI => labs(binder(), kid(0)),
        Rule::BangIDlal => lbang_abs(binder(), kid(0)),
        Rule::LinE => lapp(kid(0), kid(1)),
        Rule::BangEDlal => lapp(kid(0), lbox(Modality::Bang, kid(1))),
        Rule::ParI => lbox(Modality::Par, kid(0)),
        Rule::ParE => llet(Modality::Par, kid(0), binder(), kid(1)),
        Rule::Cntr => {
            let [x1, x2, x] = p.merged.as_ref().expect("merged");
            kid(0).substitute(x1, &lvar(x)).substitute(x2, &lvar(x))
        }
        Rule::Weak | Rule::ForallI | Rule::ForallE => kid(0),
        Rule::BangILal | Rule::BangELal => unreachable!("checked as NDLAL"),
    }
}

/// Mirror the β-step at `redex` of `erase(t)` on `t`, then saturate.
/// Returns the new term and the number of λLA steps.
pub fn simulate_step(t: &LlaTerm, redex: &RedexPath) -> Result<(LlaTerm, usize), LlaError> {
    let mut lpath = Vec::new();
    locate(t, &redex.0, &mut lpath)?;
    let fired = t.step(LlaRule::Beta, &lpath).map_err(|e| LlaError::Simulation(e.to_string()))?;
    let (out, n) = saturate(&fired);
    Ok((out, 1 + n))
}

fn locate(t: &LlaTerm, path: &[Step], out: &mut Vec<LlaStep>) -> Result<(), LlaError> {
    let lost = |what: &str| Err(LlaError::Simulation(format!("redex not locatable: {what}")));
    match t {
        LlaTerm::Var(_) => lost("reached a variable"),
        LlaTerm::Box(_, b) => {
            out.push(LlaStep::Inner);
            locate(b, path, out)
        }
        LlaTerm::Abs(_, b) => match path.split_first() {
            Some((Step::Body, rest)) => {
                out.push(LlaStep::Body);
                locate(b, rest, out)
            }
            _ => lost("path does not enter an abstraction body"),
        },
        LlaTerm::App(f, a) => match path.split_first() {
            None if matches!(**f, LlaTerm::Abs(..)) => Ok(()),
            None => lost("application head is not an abstraction"),
            Some((Step::Fun, rest)) => {
                out.push(LlaStep::Fun);
                locate(f, rest, out)
            }
            Some((Step::Arg, rest)) => {
                out.push(LlaStep::Arg);
                locate(a, rest, out)
            }
            Some((Step::Body, _)) => lost("path enters an application body"),
        },
        LlaTerm::Let(_, u, x, body) => match hole_depth(&body.erase(), x, path) {
            Some(k) => {
                out.push(LlaStep::Scrutinee);
                locate(u, &path[k..], out)
            }
            None => {
                out.push(LlaStep::LetBody);
                locate(body, path, out)
            }
        },
    }
}

/// Steps along `path` in `t` before reaching a free occurrence of `x`.
fn hole_depth(t: &Term, x: &str, path: &[Step]) -> Option<usize> {
    let mut cur = t;
    for (i, s) in path.iter().enumerate() {
        match cur {
            Term::Var(y) if y == x => return Some(i),
            Term::Abs(y, _) if y == x => return None,
            _ => {}
        }
        cur = match (s, cur) {
            (Step::Fun, Term::App(f, _)) => f,
            (Step::Arg, Term::App(_, a)) => a,
            (Step::Body, Term::Abs(_, b)) => b,
            _ => return None,
        };
    }
    matches!(cur, Term::Var(y) if y == x).then_some(path.len())
}

/// Application heads and `let` scrutinees violating the shapes allowed in a
/// saturated typable term.
pub fn shape_violations(t: &LlaTerm) -> Vec<String> {
    let mut out = Vec::new();
    shapes(t, &mut out);
    out
}

fn shapes(t: &LlaTerm, out: &mut Vec<String>) {
    match t {
        LlaTerm::Var(_) => {}
        LlaTerm::Abs(_, b) | LlaTerm::Box(_, b) => shapes(b, out),
        LlaTerm::App(f, a) => {
            if !matches!(**f, LlaTerm::Var(_) | LlaTerm::App(..) | LlaTerm::Abs(..)) {
                out.push(format!("application head {f}"));
            }
            shapes(f, out);
            shapes(a, out);
        }
        LlaTerm::Let(_, u, _, b) => {
            if !matches!(**u, LlaTerm::Var(_) | LlaTerm::App(..)) {
                out.push(format!("let scrutinee {u}"));
            }
            shapes(u, out);
            shapes(b, out);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub strategy: String,
    pub beta_steps: u64,
    pub lla_steps: u64,
    pub normal: bool,
    /// `|D|^(2^(d+1))`, absent when it overflows.
    pub bound: Option<u128>,
    pub violations: Vec<String>,
}

/// Embed, saturate, then follow `strategy` on the erasure to normal form,
/// checking the commuting square at every step.
pub fn simulate_run(s: &DerivScript, strategy: Strategy, fuel: u64) -> Result<SimulationReport, LlaError> {
    let mut t = embed(s)?;
    let (sat, n0) = saturate(&t);
    t = sat;
    let mut lla_steps = n0 as u64;
    let mut beta_steps = 0;
    let mut violations = Vec::new();
    let mut chooser = RedexChooser::new(strategy);
    let mut normal = false;
    while beta_steps < fuel {
        let e = t.erase();
        let Some(path) = chooser.choose(&e) else {
            normal = true;
            break;
        };
        let expected = e.beta_at(&path)?;
        let (next, n) = simulate_step(&t, &path)?;
        if !next.erase().alpha_eq(&expected) {
            violations.push(format!("step {beta_steps}: erasure does not commute at {path}"));
        }
        for v in shape_violations(&next) {
            violations.push(format!("step {beta_steps}: {v}"));
        }
        t = next;
        beta_steps += 1;
        lla_steps += n as u64;
    }
    let bound = crate::stratify::tower_bound(s.size(), s.depth() + 1);
    if bound.is_some_and(|b| u128::from(lla_steps) > b) {
        violations.push(format!("{lla_steps} λLA steps exceed |D|^(2^(d+1))"));
    }
    if lla_steps < beta_steps {
        violations.push("fewer λLA steps than β steps".into());
    }
    Ok(SimulationReport { strategy: strategy.label(), beta_steps, lla_steps, normal, bound, violations })
}

fn atomic(t: &LlaTerm) -> bool {
    matches!(t, LlaTerm::Var(_) | LlaTerm::Box(..))
}

impl fmt::Display for LlaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LlaTerm::Var(x) => write!(f, "{x}"),
            LlaTerm::Abs(x, b) => write!(f, "\\{x}.{b}"),
            LlaTerm::Box(m, b) if atomic(b) => write!(f, "{}{b}", m.sigil()),
            LlaTerm::Box(m, b) => write!(f, "{}({b})", m.sigil()),
            LlaTerm::Let(m, u, x, t) => write!(f, "let {u} be {}{x} in {t}", m.sigil()),
            LlaTerm::App(fun, arg) => {
                match &**fun {
                    LlaTerm::Abs(..) | LlaTerm::Let(..) => write!(f, "({fun})")?,
                    _ => write!(f, "{fun}")?,
                }
                if atomic(arg) {
                    write!(f, " {arg}")
                } else {
                    write!(f, " ({arg})")
                }
            }
        }
    }
}

const KEYWORDS: [&str; 3] = ["let", "be", "in"];

struct Parser {
    toks: Vec<(usize, Tok)>,
    i: usize,
    end: usize,
}

impl Parser {
    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, LlaError> {
        Err(LlaError::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(_, t)| t)
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn expect_kw(&mut self, kw: &str) -> Result<(), LlaError> {
        if self.is_kw(kw) {
            self.i += 1;
            Ok(())
        } else {
            self.err(format!("expected '{kw}'"))
        }
    }

    fn ident(&mut self) -> Result<String, LlaError> {
        match self.peek() {
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.i += 1;
                Ok(s)
            }
            _ => self.err("expected a variable"),
        }
    }

    fn term(&mut self) -> Result<LlaTerm, LlaError> {
        if matches!(self.peek(), Some(Tok::Lambda)) {
            self.i += 1;
            let mut xs = vec![self.ident()?];
            while matches!(self.peek(), Some(Tok::Ident(_))) {
                xs.push(self.ident()?);
            }
            if !matches!(self.peek(), Some(Tok::Dot)) {
                return self.err("expected '.'");
            }
            self.i += 1;
            let body = self.term()?;
            return Ok(xs.iter().rev().fold(body, |b, x| labs(x, b)));
        }
        if self.is_kw("let") {
            self.i += 1;
            let u = self.term()?;
            self.expect_kw("be")?;
            let m = match self.peek() {
                Some(Tok::Bang) => Modality::Bang,
                Some(Tok::Par) => Modality::Par,
                _ => return self.err("expected '!' or '$'"),
            };
            self.i += 1;
            let x = self.ident()?;
            self.expect_kw("in")?;
            let t = self.term()?;
            return Ok(llet(m, u, &x, t));
        }
        let mut acc = self.atom()?;
        while self.starts_atom() {
            let a = self.atom()?;
            acc = lapp(acc, a);
        }
        if matches!(self.peek(), Some(Tok::Lambda)) || self.is_kw("let") {
            let tail = self.term()?;
            acc = lapp(acc, tail);
        }
        Ok(acc)
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Some(Tok::Ident(s)) => !KEYWORDS.contains(&s.as_str()),
            Some(Tok::LParen | Tok::Bang | Tok::Par) => true,
            _ => false,
        }
    }

    fn atom(&mut self) -> Result<LlaTerm, LlaError> {
        match self.peek() {
            Some(Tok::LParen) => {
                self.i += 1;
                let t = self.term()?;
                if !matches!(self.peek(), Some(Tok::RParen)) {
                    return self.err("expected ')'");
                }
                self.i += 1;
                Ok(t)
            }
            Some(Tok::Bang) => {
                self.i += 1;
                Ok(lbox(Modality::Bang, self.atom()?))
            }
            Some(Tok::Par) => {
                self.i += 1;
                Ok(lbox(Modality::Par, self.atom()?))
            }
            _ => Ok(lvar(&self.ident()?)),
        }
    }
}

impl FromStr for LlaTerm {
    type Err = LlaError;

    fn from_str(text: &str) -> Result<LlaTerm, LlaError> {
        let toks = tokenize(text).map_err(|e| match e {
            TermError::Syntax { pos, msg } => LlaError::Syntax { pos, msg },
            other => LlaError::Term(other),
        })?;
        let mut p = Parser { toks, i: 0, end: text.len() };
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
    use crate::stdlib::{self, certs};

    fn p(s: &str) -> LlaTerm {
        s.parse().unwrap()
    }

    #[test]
    fn reduction_rules() {
        let t = p("let $u be $x in f x");
        assert_eq!(t.step(LlaRule::Par, &[]).unwrap(), p("f u"));
        let t = p("(let u be !x in t) v");
        assert_eq!(t.step(LlaRule::Com1, &[]).unwrap(), p("let u be !x in t v"));
        let t = p("let (let u be $x in t) be !y in v");
        assert_eq!(t.step(LlaRule::Com2, &[]).unwrap(), p("let u be $x in let t be !y in v"));
        assert_eq!(p("(\\x.x) y").step(LlaRule::Beta, &[]).unwrap(), p("y"));
        assert!(p("(\\x.x) y").step(LlaRule::Par, &[]).is_err());
    }

    #[test]
    fn com1_avoids_capture() {
        let t = p("(let u be !x in t) x");
        let r = t.step(LlaRule::Com1, &[]).unwrap();
        assert!(r.erase().alpha_eq(&t.erase()));
    }

    #[test]
    fn erasure() {
        assert_eq!(p("!t").erase().to_string(), "t");
        assert_eq!(p("$x").erase().to_string(), "x");
        assert_eq!(p("let !y be !x in x").erase().to_string(), "y");
        assert!(p("let !y be !x in x").erase().size() <= p("let !y be !x in x").size());
    }

    #[test]
    fn saturation() {
        assert_eq!(saturate(&p("let $y be $x in x")), (p("y"), 1));
        assert_eq!(saturate(&p("\\x.x")), (p("\\x.x"), 0));
        let t = p("(let !u be !x in x) v");
        let (s, n) = saturate(&t);
        assert!(n >= 1 && s.is_saturated());
        assert!(s.erase().alpha_eq(&t.erase()));
    }

    #[test]
    fn church_two_embedding() {
        let t = embed(&certs::church(2)).unwrap();
        let expected = lbang_abs("f", lbox(Modality::Par, p("\\x.f (f x)")));
        assert_eq!(t, expected);
        assert_eq!(t.to_string(), "\\f.let f be !f' in $(\\x.f' (f' x))");
    }

    #[test]
    fn round_trip_display() {
        for s in ["\\f.let f be !g in $(\\x.g (g x))", "f !(a b) $c", "(let u be $x in t) v"] {
            assert_eq!(p(&p(s).to_string()), p(s));
        }
    }

    #[test]
    fn embeddings_respect_bounds() {
        for prog in stdlib::corpus() {
            let s = prog.certificate.as_ref().unwrap();
            let t = embed(s).unwrap();
            assert!(t.erase().alpha_eq(&prog.term), "{}", prog.name);
            assert!(t.size() <= s.size(), "{}: {} > {}", prog.name, t.size(), s.size());
            assert!(t.depth() <= s.depth(), "{}", prog.name);
        }
    }

    #[test]
    fn pure_step() {
        let (r, n) = simulate_step(&p("(\\x.x) y"), &RedexPath::root()).unwrap();
        assert_eq!((r, n), (p("y"), 1));
    }

    #[test]
    fn step_under_let() {
        let t = p("let y be $x in (\\z.z) x");
        let (r, _) = simulate_step(&t, &RedexPath::root()).unwrap();
        assert_eq!(r, p("let y be $x in x"));
    }

    #[test]
    fn add_simulation() {
        let prog = stdlib::corpus().into_iter().find(|p| p.name == "add_2_3").unwrap();
        let r = simulate_run(prog.certificate.as_ref().unwrap(), Strategy::LeftmostOutermost, 100_000).unwrap();
        assert!(r.normal && r.violations.is_empty(), "{r:?}");
        assert!(r.lla_steps >= r.beta_steps);
    }
}
