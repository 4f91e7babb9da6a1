//! DLAL type inference for propositional types.
//!
//! First the `!`s: a simple derivation is decorated with boolean parameters,
//! the constraint system is solved and each solution is tested on the
//! arguments of `(⇒ e)`. Then the `§`s, level by level (see [`stage2`]).
//! Every result comes with an NDLAL certificate that has been rechecked.

pub mod simple;
pub mod stage1;
pub mod stage2;
pub mod random;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::deriv::{check_ndlal, DerivScript};
use crate::term::Term;
use crate::types::{type_string, SimpleType, Type};

pub use simple::{principal_simple_type, simple_at, SimpleDeriv, TermTree};
pub use stage1::{
    abstract_derivation, bang_check, constraints, enumerate_solutions, maximal_decoration, merge_types,
    unify_abstract, AbsType, AbstractDeriv, BangDeriv, Basic, Constraint, Rejection,
};
pub use stage2::{place_paragraphs, Placement, Stage2Options, StratSkeleton};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InferError {
    #[error("not simply typable: {0}")]
    NotSimplyTypable(String),
    #[error("{0} is not an instance of the principal simple type")]
    NotAnInstance(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("internal: {0}")]
    Internal(String),
}

#[derive(Clone, Debug)]
pub struct InferOptions {
    pub level_cap: u32,
    /// Free boolean parameters allowed after propagation.
    pub param_cap: usize,
    /// Solutions of the constraint system to try, fewest 1s first.
    pub max_phi: usize,
    /// Results wanted in total; 1 keeps only least placements.
    pub max_results: usize,
    pub budget: usize,
}

impl Default for InferOptions {
    fn default() -> Self {
        InferOptions { level_cap: 8, param_cap: 256, max_phi: 256, max_results: 12, budget: 2000 }
    }
}

impl InferOptions {
    pub fn with_cap(level_cap: u32) -> Self {
        InferOptions { level_cap, ..Self::default() }
    }

    /// Only the least placement of each solution, up to `max_results` types.
    pub fn least(level_cap: u32) -> Self {
        InferOptions { level_cap, max_results: 1, ..Self::default() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InferResult {
    #[serde(rename = "type", with = "type_string")]
    pub ty: Type,
    pub certificate: DerivScript,
    pub phi: BTreeMap<String, bool>,
    /// Box depth of every subterm, by address.
    pub levels: BTreeMap<String, i64>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct InferReport {
    pub results: Vec<InferResult>,
    pub solutions_tried: usize,
    pub rejected: Vec<Rejection>,
    /// Solutions that passed the `!` conditions but admit no `§` placement.
    pub unplaceable: usize,
}

fn certify(t: &Term, ad: &AbstractDeriv, bd: &BangDeriv, p: Placement) -> Option<InferResult> {
    let c = check_ndlal(&p.script).ok()?;
    if !c.j.subject.alpha_eq(t) || !c.j.ty.alpha_eq(&p.ty) || c.j.ctx.has_discharged() {
        return None;
    }
    let paths = ad.simple.tree.paths();
    Some(InferResult {
        ty: p.ty,
        certificate: p.script,
        phi: bd.phi.iter().enumerate().map(|(i, &b)| (format!("p{i}"), b)).collect(),
        levels: paths.iter().map(|(n, path)| (path.to_string(), p.levels[*n])).collect(),
    })
}

fn run(t: &Term, sd: SimpleDeriv, opts: &InferOptions, target: Option<&Type>) -> Result<InferReport, InferError> {
    let ad = abstract_derivation(&sd)?;
    let mut cs = ad.constraints.clone();
    if let Some(ty) = target {
        match pin_kinds(&ad.types[sd.tree.subject], ty) {
            Some(extra) => cs.extend(extra),
            None => return Ok(InferReport::default()),
        }
    }
    let sols = enumerate_solutions(&cs, ad.params, opts.param_cap, opts.max_phi)?;
    let mut report = InferReport { solutions_tried: sols.len(), ..InferReport::default() };
    let mut valid = Vec::new();
    for phi in sols {
        match bang_check(&ad, &phi) {
            Ok(bd) => valid.push(bd),
            Err(r) => report.rejected.push(r),
        }
    }
    // Least placement of every decoration first, then further placements.
    let passes: &[bool] = if target.is_none() && opts.max_results > 1 { &[false, true] } else { &[false] };
    for &more in passes {
        for bd in &valid {
            let done = if target.is_some() { !report.results.is_empty() } else { report.results.len() >= opts.max_results };
            if done && (target.is_some() || opts.max_results > 1) {
                return Ok(report);
            }
            let wanted = if more { opts.max_results - report.results.len() + 1 } else { 1 };
            let s2 = Stage2Options { level_cap: opts.level_cap, max_results: wanted, budget: opts.budget };
            let placed = place_paragraphs(&ad, bd, &s2, target);
            if placed.is_empty() && !more {
                report.unplaceable += 1;
            }
            for p in placed {
                if let Some(r) = certify(t, &ad, bd, p) {
                    if !report.results.iter().any(|q| q.ty.alpha_eq(&r.ty)) {
                        report.results.push(r);
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Parameter values forced by the connectives of a target type.
fn pin_kinds(b: &Basic, ty: &Type) -> Option<Vec<Constraint>> {
    let mut ty = ty;
    while let Type::Par(inner) = ty {
        ty = inner;
    }
    match (b, ty) {
        (Basic::Atom(_), Type::Var(_)) => Some(Vec::new()),
        (Basic::Arrow(a, r), Type::Lin(x, y) | Type::Arrow(x, y)) => {
            let params = a.params.iter().copied().collect();
            let rhs = if matches!(ty, Type::Arrow(..)) { None } else { Some(Vec::new()) };
            let mut out = vec![Constraint { lhs: params, rhs }];
            out.extend(pin_kinds(&a.body, x)?);
            out.extend(pin_kinds(r, y)?);
            Some(out)
        }
        _ => None,
    }
}

/// All decorations found for `t`, with statistics.
pub fn infer_report(t: &Term, opts: &InferOptions) -> Result<InferReport, InferError> {
    let (_, sd) = principal_simple_type(t)?;
    run(t, sd, opts, None)
}

/// DLAL types of `t` with rechecked certificates, deduplicated up to
/// renaming of type variables. Empty when no decoration exists.
pub fn infer(t: &Term, level_cap: u32) -> Result<Vec<InferResult>, InferError> {
    Ok(infer_report(t, &InferOptions::with_cap(level_cap))?.results)
}

/// Inference over an instance `b` of the principal simple type of `t`.
pub fn infer_at(t: &Term, b: &SimpleType, opts: &InferOptions) -> Result<Vec<InferResult>, InferError> {
    let sd = simple_at(t, b)?;
    Ok(run(t, sd, opts, None)?.results)
}

/// A certificate for `t : target`, searched through the same two stages with
/// the connectives and `§`s of the subject type fixed.
pub fn infer_matching(t: &Term, target: &Type, opts: &InferOptions) -> Result<Option<InferResult>, InferError> {
    let b = target.erase_to_simple().map_err(|e| InferError::NotAnInstance(e.to_string()))?;
    let sd = simple_at(t, &b)?;
    let r = run(t, sd, opts, Some(target))?;
    Ok(r.results.into_iter().find(|r| r.ty.alpha_eq(target)))
}

#[cfg(test)]
mod tests;
