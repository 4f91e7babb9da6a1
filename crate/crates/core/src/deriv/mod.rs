//! Natural-deduction derivation scripts for NDLAL and NLAL.

mod check;
mod subst;
mod translate;
mod vsnorm;
mod reduce;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::term::Term;
use crate::types::{type_string, DualContext, LalContext, Mark, Type};

pub use check::{check_ndlal, check_nlal, judge_ndlal, judge_nlal, Checked, CheckedLal};
pub use reduce::subject_reduce;
pub use subst::{subst_linear, subst_nonlinear, subst_par, subst_type};
pub use translate::translate_to_lal;
pub use vsnorm::{is_vs_normal, vs_normalize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    Id,
    LinI,
    LinE,
    /// `(=> i)`
    BangIDlal,
    /// `(=> e)`
    BangEDlal,
    Weak,
    Cntr,
    ParI,
    ParE,
    ForallI,
    ForallE,
    /// `(! i)`, LAL only
    BangILal,
    /// `(! e)`, LAL only
    BangELal,
}

impl Rule {
    pub fn arity(self) -> usize {
        match self {
            Rule::Id => 0,
            Rule::LinE | Rule::BangEDlal | Rule::ParE | Rule::BangELal => 2,
            _ => 1,
        }
    }

    pub fn is_dlal(self) -> bool {
        !matches!(self, Rule::BangILal | Rule::BangELal)
    }

    pub fn is_lal(self) -> bool {
        !matches!(self, Rule::BangIDlal | Rule::BangEDlal)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    /// Abstracted variable, `let` binder, or the eigenvariable of `ForallI`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub binder: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "type_string::option")]
    pub inst_type: Option<Type>,
    /// `[x1, x2, x]`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub merged: Option<[String; 3]>,
    /// Variable of `Id` and `Weak`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub var: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "type_string::option")]
    pub ty: Option<Type>,
    /// Zone of a weakened variable: `Bang` is the non-linear zone in NDLAL.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mark: Option<Mark>,
    /// `ParI`: variables sent to the non-linear zone (NDLAL) or marked `[A]!` (NLAL).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nonlinear: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivScript {
    pub rule: Rule,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub premises: Vec<DerivScript>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivError {
    #[error("node {path}: {msg}")]
    Rule { path: NodePath, msg: String },
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// Premise indices from the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct NodePath(pub Vec<usize>);

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "root");
        }
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "root/{}", parts.join("/"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Judgement {
    pub ctx: DualContext,
    pub subject: Term,
    pub ty: Type,
}

impl fmt::Display for Judgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |- {} : {}", self.ctx, self.subject, self.ty)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LalJudgement {
    pub ctx: LalContext,
    pub subject: Term,
    pub ty: Type,
}

impl fmt::Display for LalJudgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |- {} : {}", self.ctx, self.subject, self.ty)
    }
}

fn node(rule: Rule, params: Params, premises: Vec<DerivScript>) -> DerivScript {
    DerivScript { rule, params, premises }
}

pub fn id(x: &str, ty: Type) -> DerivScript {
    node(Rule::Id, Params { var: Some(x.into()), ty: Some(ty), ..Params::default() }, vec![])
}

pub fn lin_i(x: &str, p: DerivScript) -> DerivScript {
    node(Rule::LinI, Params { binder: Some(x.into()), ..Params::default() }, vec![p])
}

pub fn lin_e(f: DerivScript, a: DerivScript) -> DerivScript {
    node(Rule::LinE, Params::default(), vec![f, a])
}

pub fn bang_i(x: &str, p: DerivScript) -> DerivScript {
    node(Rule::BangIDlal, Params { binder: Some(x.into()), ..Params::default() }, vec![p])
}

pub fn bang_e(f: DerivScript, a: DerivScript) -> DerivScript {
    node(Rule::BangEDlal, Params::default(), vec![f, a])
}

pub fn weak(x: &str, ty: Type, mark: Mark, p: DerivScript) -> DerivScript {
    node(
        Rule::Weak,
        Params { var: Some(x.into()), ty: Some(ty), mark: Some(mark), ..Params::default() },
        vec![p],
    )
}

pub fn cntr(x1: &str, x2: &str, x: &str, p: DerivScript) -> DerivScript {
    node(Rule::Cntr, Params { merged: Some([x1.into(), x2.into(), x.into()]), ..Params::default() }, vec![p])
}

pub fn par_i(nonlinear: &[&str], p: DerivScript) -> DerivScript {
    let nl = nonlinear.iter().map(|s| s.to_string()).collect();
    node(Rule::ParI, Params { nonlinear: Some(nl), ..Params::default() }, vec![p])
}

pub fn par_i_owned(nonlinear: Vec<String>, p: DerivScript) -> DerivScript {
    node(Rule::ParI, Params { nonlinear: Some(nonlinear), ..Params::default() }, vec![p])
}

/// `let u be $x in t`: major premise `u`, minor premise `t` with `x:[A]$`.
pub fn par_e(x: &str, u: DerivScript, t: DerivScript) -> DerivScript {
    node(Rule::ParE, Params { binder: Some(x.into()), ..Params::default() }, vec![u, t])
}

pub fn forall_i(a: &str, p: DerivScript) -> DerivScript {
    node(Rule::ForallI, Params { binder: Some(a.into()), ..Params::default() }, vec![p])
}

pub fn forall_e(b: Type, p: DerivScript) -> DerivScript {
    node(Rule::ForallE, Params { inst_type: Some(b), ..Params::default() }, vec![p])
}

pub fn bang_i_lal(p: DerivScript) -> DerivScript {
    node(Rule::BangILal, Params::default(), vec![p])
}

pub fn bang_e_lal(x: &str, u: DerivScript, t: DerivScript) -> DerivScript {
    node(Rule::BangELal, Params { binder: Some(x.into()), ..Params::default() }, vec![u, t])
}

impl DerivScript {
    /// `|D|`, the number of judgements.
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(DerivScript::size).sum::<usize>()
    }

    /// NDLAL depth: `ParI` premises and right premises of `(=> e)` along a branch.
    /// NLAL depth: `(! i)` and `ParI` rules along a branch.
    pub fn depth(&self) -> usize {
        match self.rule {
            Rule::ParI | Rule::BangILal => 1 + self.premises[0].depth(),
            Rule::BangEDlal => self.premises[0].depth().max(1 + self.premises[1].depth()),
            _ => self.premises.iter().map(DerivScript::depth).max().unwrap_or(0),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scripts serialize")
    }

    pub fn from_json(text: &str) -> Result<DerivScript, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Count of nodes using `rule`.
    pub fn count_rule(&self, rule: Rule) -> usize {
        usize::from(self.rule == rule) + self.premises.iter().map(|p| p.count_rule(rule)).sum::<usize>()
    }

    /// Every term variable name mentioned by the script.
    pub fn names(&self) -> std::collections::BTreeSet<String> {
        let mut out = std::collections::BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut std::collections::BTreeSet<String>) {
        let p = &self.params;
        if self.rule != Rule::ForallI {
            out.extend(p.binder.iter().cloned());
        }
        out.extend(p.var.iter().cloned());
        if let Some(m) = &p.merged {
            out.extend(m.iter().cloned());
        }
        if let Some(n) = &p.nonlinear {
            out.extend(n.iter().cloned());
        }
        for q in &self.premises {
            q.collect_names(out);
        }
    }

    /// Every type variable name mentioned by the script.
    pub fn type_names(&self) -> std::collections::BTreeSet<String> {
        let mut out = std::collections::BTreeSet::new();
        self.collect_type_names(&mut out);
        out
    }

    fn collect_type_names(&self, out: &mut std::collections::BTreeSet<String>) {
        let p = &self.params;
        if self.rule == Rule::ForallI {
            out.extend(p.binder.iter().cloned());
        }
        for t in p.ty.iter().chain(p.inst_type.iter()) {
            collect_all_tvars(t, out);
        }
        for q in &self.premises {
            q.collect_type_names(out);
        }
    }
}

fn collect_all_tvars(t: &Type, out: &mut std::collections::BTreeSet<String>) {
    match t {
        Type::Var(a) => {
            out.insert(a.clone());
        }
        Type::Lin(a, b) | Type::Arrow(a, b) => {
            collect_all_tvars(a, out);
            collect_all_tvars(b, out);
        }
        Type::Bang(a) | Type::Par(a) => collect_all_tvars(a, out),
        Type::Forall(x, a) => {
            out.insert(x.clone());
            collect_all_tvars(a, out);
        }
    }
}
