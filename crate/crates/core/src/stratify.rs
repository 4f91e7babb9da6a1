//! Stratified terms and level-by-level normalization.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::deriv::{check_ndlal, DerivError, DerivScript, Rule};
use crate::term::{fresh_name, RedexPath, Step, Term};

/// A term whose abstractions carry a depth and an optional `!` mark.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StratTerm {
    Var(String),
    Abs { x: String, depth: usize, banged: bool, body: Box<StratTerm> },
    App(Box<StratTerm>, Box<StratTerm>),
}

pub fn svar(x: &str) -> StratTerm {
    StratTerm::Var(x.into())
}

pub fn sabs(x: &str, depth: usize, banged: bool, body: StratTerm) -> StratTerm {
    StratTerm::Abs { x: x.into(), depth, banged, body: Box::new(body) }
}

pub fn sapp(f: StratTerm, a: StratTerm) -> StratTerm {
    StratTerm::App(Box::new(f), Box::new(a))
}

#[derive(Debug, Error)]
pub enum StratifyError {
    #[error(transparent)]
    Deriv(#[from] DerivError),
    #[error("level {level}: {msg}")]
    Invariant { level: usize, msg: String },
}

impl StratTerm {
    pub fn erase(&self) -> Term {
        match self {
            StratTerm::Var(x) => Term::Var(x.clone()),
            StratTerm::Abs { x, body, .. } => Term::Abs(x.clone(), Box::new(body.erase())),
            StratTerm::App(f, a) => Term::App(Box::new(f.erase()), Box::new(a.erase())),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            StratTerm::Var(_) => 1,
            StratTerm::Abs { body, .. } => 1 + body.size(),
            StratTerm::App(f, a) => 1 + f.size() + a.size(),
        }
    }

    /// Maximal abstraction depth, 0 for an abstraction-free term.
    pub fn depth(&self) -> usize {
        match self {
            StratTerm::Var(_) => 0,
            StratTerm::Abs { depth, body, .. } => (*depth).max(body.depth()),
            StratTerm::App(f, a) => f.depth().max(a.depth()),
        }
    }

    /// `t[+k]`
    pub fn shift(&self, k: usize) -> StratTerm {
        match self {
            StratTerm::Var(_) => self.clone(),
            StratTerm::Abs { x, depth, banged, body } => sabs(x, depth + k, *banged, body.shift(k)),
            StratTerm::App(f, a) => sapp(f.shift(k), a.shift(k)),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        self.erase().free_vars()
    }

    fn all_names(&self, out: &mut BTreeSet<String>) {
        match self {
            StratTerm::Var(x) => {
                out.insert(x.clone());
            }
            StratTerm::Abs { x, body, .. } => {
                out.insert(x.clone());
                body.all_names(out);
            }
            StratTerm::App(f, a) => {
                f.all_names(out);
                a.all_names(out);
            }
        }
    }

    /// Capture-avoiding `self[u/x]`.
    pub fn substitute(&self, x: &str, u: &StratTerm) -> StratTerm {
        let fv = u.free_vars();
        self.subst_with(x, u, &fv)
    }

    fn subst_with(&self, x: &str, u: &StratTerm, fv: &BTreeSet<String>) -> StratTerm {
        match self {
            StratTerm::Var(y) if y == x => u.clone(),
            StratTerm::Var(_) => self.clone(),
            StratTerm::App(f, a) => sapp(f.subst_with(x, u, fv), a.subst_with(x, u, fv)),
            StratTerm::Abs { x: y, .. } if y == x => self.clone(),
            StratTerm::Abs { x: y, depth, banged, body } => {
                if !body.free_vars().contains(x) {
                    return self.clone();
                }
                if fv.contains(y) {
                    let mut avoid = fv.clone();
                    body.all_names(&mut avoid);
                    avoid.insert(x.to_string());
                    let z = fresh_name(y, &avoid);
                    let renamed = body.subst_with(y, &svar(&z), &BTreeSet::from([z.clone()]));
                    sabs(&z, *depth, *banged, renamed.subst_with(x, u, fv))
                } else {
                    sabs(y, *depth, *banged, body.subst_with(x, u, fv))
                }
            }
        }
    }

    pub fn subterm(&self, path: &[Step]) -> Option<&StratTerm> {
        let mut cur = self;
        for s in path {
            cur = match (s, cur) {
                (Step::Fun, StratTerm::App(f, _)) => f,
                (Step::Arg, StratTerm::App(_, a)) => a,
                (Step::Body, StratTerm::Abs { body, .. }) => body,
                _ => return None,
            };
        }
        Some(cur)
    }

    fn replace_at(&self, path: &[Step], new: StratTerm) -> StratTerm {
        match (path.split_first(), self) {
            (None, _) => new,
            (Some((Step::Fun, rest)), StratTerm::App(f, a)) => sapp(f.replace_at(rest, new), (**a).clone()),
            (Some((Step::Arg, rest)), StratTerm::App(f, a)) => sapp((**f).clone(), a.replace_at(rest, new)),
            (Some((Step::Body, rest)), StratTerm::Abs { x, depth, banged, body }) => {
                sabs(x, *depth, *banged, body.replace_at(rest, new))
            }
            _ => panic!("path does not fit the term"),
        }
    }

    /// Redexes with their depth, leftmost-outermost first.
    pub fn redexes(&self) -> Vec<(RedexPath, usize)> {
        let mut out = Vec::new();
        self.collect_redexes(&mut Vec::new(), &mut out);
        out
    }

    fn collect_redexes(&self, here: &mut Vec<Step>, out: &mut Vec<(RedexPath, usize)>) {
        match self {
            StratTerm::Var(_) => {}
            StratTerm::Abs { body, .. } => {
                here.push(Step::Body);
                body.collect_redexes(here, out);
                here.pop();
            }
            StratTerm::App(f, a) => {
                if let StratTerm::Abs { depth, .. } = &**f {
                    out.push((RedexPath(here.clone()), *depth));
                }
                here.push(Step::Fun);
                f.collect_redexes(here, out);
                here.pop();
                here.push(Step::Arg);
                a.collect_redexes(here, out);
                here.pop();
            }
        }
    }

    /// Contract the redex at `path`.
    pub fn beta_at(&self, path: &RedexPath) -> Option<StratTerm> {
        match self.subterm(&path.0)? {
            StratTerm::App(f, a) => match &**f {
                StratTerm::Abs { x, body, .. } => Some(self.replace_at(&path.0, body.substitute(x, a))),
                _ => None,
            },
            _ => None,
        }
    }
}

impl fmt::Display for StratTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StratTerm::Var(x) => write!(f, "{x}"),
            StratTerm::Abs { x, depth, banged, body } => {
                write!(f, "\\^{depth}{}{x}.{body}", if *banged { "!" } else { "" })
            }
            StratTerm::App(fun, arg) => {
                match &**fun {
                    StratTerm::Abs { .. } => write!(f, "({fun})")?,
                    _ => write!(f, "{fun}")?,
                }
                match &**arg {
                    StratTerm::Var(_) => write!(f, " {arg}"),
                    _ => write!(f, " ({arg})"),
                }
            }
        }
    }
}

/// Decorate the subject of a checked NDLAL script.
pub fn decorate(s: &DerivScript) -> Result<StratTerm, StratifyError> {
    check_ndlal(s)?;
    Ok(dec(s))
}

fn dec(s: &DerivScript) -> StratTerm {
    let p = &s.params;
    let kid = |i: usize| dec(&s.premises[i]);
    match s.rule {
        Rule::Id => svar(p.var.as_deref().expect("var")),
        Rule::LinI => sabs(p.binder.as_deref().expect("binder"), 0, false, kid(0)),
        Rule::BangIDlal => sabs(p.binder.as_deref().expect("binder"), 0, true, kid(0)),
        Rule::LinE => sapp(kid(0), kid(1)),
        Rule::BangEDlal => sapp(kid(0), kid(1).shift(1)),
        Rule::ParI => kid(0).shift(1),
        Rule::ParE => kid(1).substitute(p.binder.as_deref().expect("binder"), &kid(0)),
        Rule::Cntr => {
            let [x1, x2, x] = p.merged.as_ref().expect("merged");
            kid(0).substitute(x1, &svar(x)).substitute(x2, &svar(x))
        }
        Rule::Weak | Rule::ForallI | Rule::ForallE => kid(0),
        Rule::BangILal | Rule::BangELal => unreachable!("checked as NDLAL"),
    }
}

/// Fire every redex at depth `d`, leftmost-outermost, within a budget of
/// `|t|` steps.
pub fn reduce_level(t: &StratTerm, d: usize) -> Result<(StratTerm, usize), StratifyError> {
    let budget = t.size();
    let mut cur = t.clone();
    let mut steps = 0;
    while let Some((path, _)) = cur.redexes().into_iter().find(|(_, e)| *e == d) {
        if steps == budget {
            return Err(StratifyError::Invariant { level: d, msg: format!("more than {budget} steps") });
        }
        cur = cur.beta_at(&path).expect("redex");
        steps += 1;
    }
    Ok((cur, steps))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub level: usize,
    pub entry_size: usize,
    pub steps: usize,
    pub exit_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelTrace {
    pub initial_size: usize,
    pub depth: usize,
    pub levels: Vec<LevelRecord>,
    pub total_steps: usize,
    /// `Σ |t_i|` over the entry sizes.
    pub size_sum: usize,
    #[serde(with = "crate::term::term_string", rename = "final")]
    pub final_term: Term,
    /// Bound violations; empty on typable input.
    pub violations: Vec<String>,
}

impl LevelTrace {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("level,entry_size,steps,exit_size\n");
        for r in &self.levels {
            out.push_str(&format!("{},{},{},{}\n", r.level, r.entry_size, r.steps, r.exit_size));
        }
        out
    }
}

/// `n^(2^d)`, or `None` past `u128`.
pub fn tower_bound(n: usize, d: usize) -> Option<u128> {
    let mut acc = n as u128;
    for _ in 0..d {
        acc = acc.checked_mul(acc)?;
    }
    Some(acc)
}

/// Normalize level by level, recording bound violations instead of stopping.
pub fn normalize_levels(t: &StratTerm) -> LevelTrace {
    let depth = t.depth();
    let mut cur = t.clone();
    let mut levels = Vec::new();
    let mut violations = Vec::new();
    for d in 0..=depth {
        let entry = cur.size();
        let (next, steps) = match reduce_level(&cur, d) {
            Ok(r) => r,
            Err(e) => {
                violations.push(e.to_string());
                let (n, s) = reduce_level_unbounded(&cur, d);
                (n, s)
            }
        };
        let exit = next.size();
        if entry >= 2 && exit > entry * (entry - 1) {
            violations.push(format!("level {d}: exit size {exit} exceeds {entry}*({entry}-1)"));
        }
        if let Some((p, e)) = next.redexes().into_iter().find(|(_, e)| *e <= d) {
            violations.push(format!("level {d}: redex at depth {e} remains at {p}"));
        }
        for hit in scan_forbidden_patterns(&next) {
            violations.push(format!("level {d}: {hit}"));
        }
        levels.push(LevelRecord { level: d, entry_size: entry, steps, exit_size: exit });
        cur = next;
    }
    let size_sum: usize = levels.iter().map(|r| r.entry_size).sum();
    if tower_bound(t.size(), depth).is_some_and(|b| size_sum as u128 > b) {
        violations.push(format!("size sum {size_sum} exceeds {}^(2^{depth})", t.size()));
    }
    let final_term = cur.erase();
    if !final_term.is_normal() {
        violations.push("result is not normal".into());
    }
    LevelTrace {
        initial_size: t.size(),
        depth,
        total_steps: levels.iter().map(|r| r.steps).sum(),
        size_sum,
        levels,
        final_term,
        violations,
    }
}

fn reduce_level_unbounded(t: &StratTerm, d: usize) -> (StratTerm, usize) {
    let mut cur = t.clone();
    let mut steps = 0;
    while let Some((path, _)) = cur.redexes().into_iter().find(|(_, e)| *e == d) {
        cur = cur.beta_at(&path).expect("redex");
        steps += 1;
    }
    (cur, steps)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternHit {
    pub path: RedexPath,
    /// `application` for `(λ^d x.t)(λ^e y.u)`, `nesting` for `λ^d x.λ^e y.t`.
    pub kind: String,
    pub outer: usize,
    pub inner: usize,
}

impl fmt::Display for PatternHit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} pattern at {} with depths {} > {}", self.kind, self.path, self.outer, self.inner)
    }
}

/// Occurrences of `(λ^d x.t)(λ^e y.u)` and `λ^d x.λ^e y.t` with `e < d`.
pub fn scan_forbidden_patterns(t: &StratTerm) -> Vec<PatternHit> {
    let mut out = Vec::new();
    scan(t, &mut Vec::new(), &mut out);
    out
}

fn scan(t: &StratTerm, here: &mut Vec<Step>, out: &mut Vec<PatternHit>) {
    match t {
        StratTerm::Var(_) => {}
        StratTerm::Abs { depth, body, .. } => {
            if let StratTerm::Abs { depth: e, .. } = &**body {
                if e < depth {
                    out.push(PatternHit { path: RedexPath(here.clone()), kind: "nesting".into(), outer: *depth, inner: *e });
                }
            }
            here.push(Step::Body);
            scan(body, here, out);
            here.pop();
        }
        StratTerm::App(f, a) => {
            if let (StratTerm::Abs { depth: d, .. }, StratTerm::Abs { depth: e, .. }) = (&**f, &**a) {
                if e < d {
                    out.push(PatternHit { path: RedexPath(here.clone()), kind: "application".into(), outer: *d, inner: *e });
                }
            }
            here.push(Step::Fun);
            scan(f, here, out);
            here.pop();
            here.push(Step::Arg);
            scan(a, here, out);
            here.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stdlib::{self, certs};
    use crate::term::{normalize, Strategy};

    #[test]
    fn church_two_decoration() {
        let t = decorate(&certs::church(2)).unwrap();
        assert_eq!(t.to_string(), "\\^0!f.\\^1x.f (f x)");
        assert!(scan_forbidden_patterns(&t).is_empty());
    }

    #[test]
    fn variable_decoration() {
        let t = decorate(&crate::deriv::id("x", crate::types::tvar("a"))).unwrap();
        assert_eq!(t, svar("x"));
        assert_eq!(t.depth(), 0);
    }

    #[test]
    fn one_step_level() {
        let t = sapp(sabs("x", 0, false, svar("x")), svar("y"));
        assert_eq!(reduce_level(&t, 0).unwrap(), (svar("y"), 1));
        assert_eq!(reduce_level(&t, 1).unwrap(), (t.clone(), 0));
    }

    #[test]
    fn flagged_pattern() {
        let t = sapp(sabs("x", 1, false, svar("x")), sabs("y", 0, false, svar("y")));
        assert_eq!(scan_forbidden_patterns(&t).len(), 1);
    }

    #[test]
    fn decorated_programs_normalize() {
        for p in stdlib::corpus() {
            let cert = p.certificate.as_ref().unwrap();
            let t = decorate(cert).unwrap();
            assert!(t.erase().alpha_eq(&p.term), "{}", p.name);
            assert!(t.depth() <= cert.depth(), "{}", p.name);
            let tr = normalize_levels(&t);
            assert!(tr.violations.is_empty(), "{}: {:?}", p.name, tr.violations);
            let reference = normalize(&p.term, Strategy::LeftmostOutermost, 1_000_000);
            assert!(tr.final_term.alpha_eq(&reference.final_term), "{}", p.name);
        }
    }

    #[test]
    fn square_three_levels() {
        let p = stdlib::corpus().into_iter().find(|p| p.name == "square_3").unwrap();
        let tr = normalize_levels(&decorate(p.certificate.as_ref().unwrap()).unwrap());
        assert_eq!(tr.final_term.church_value(), Some(9));
        assert!(tr.levels.windows(2).all(|w| w[0].level < w[1].level));
    }

    #[test]
    fn csv_columns() {
        let tr = normalize_levels(&decorate(&certs::church(2)).unwrap());
        assert_eq!(tr.total_steps, 0);
        assert!(tr.to_csv().starts_with("level,entry_size,steps,exit_size\n0,"));
    }
}
