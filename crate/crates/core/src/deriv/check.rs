use std::collections::BTreeMap;

use super::{DerivError, DerivScript, Judgement, LalJudgement, NodePath, Rule};
use crate::term::{abs, app, Term};
use crate::types::{arrow, bang, forall, lin, par, DualContext, LalContext, LalEntry, LinEntry, Mark, Type};

/// A script annotated with the judgement at every node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checked {
    pub j: Judgement,
    pub premises: Vec<Checked>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckedLal {
    pub j: LalJudgement,
    pub premises: Vec<CheckedLal>,
}

fn fail<T>(path: &[usize], msg: impl Into<String>) -> Result<T, DerivError> {
    Err(DerivError::Rule { path: NodePath(path.to_vec()), msg: msg.into() })
}

fn need<'a, T>(v: &'a Option<T>, path: &[usize], what: &str) -> Result<&'a T, DerivError> {
    match v {
        Some(x) => Ok(x),
        None => fail(path, format!("missing parameter {what}")),
    }
}

/// NDLAL check; the root judgement must be free of discharged formulas.
pub fn check_ndlal(s: &DerivScript) -> Result<Checked, DerivError> {
    let c = judge_ndlal(s)?;
    if c.j.ctx.has_discharged() {
        return fail(&[], "discharged formula in the final judgement");
    }
    Ok(c)
}

/// NDLAL check allowing discharged formulas at the root.
pub fn judge_ndlal(s: &DerivScript) -> Result<Checked, DerivError> {
    ndlal(s, &mut Vec::new())
}

pub fn check_nlal(s: &DerivScript) -> Result<CheckedLal, DerivError> {
    let c = judge_nlal(s)?;
    if c.j.ctx.has_discharged() {
        return fail(&[], "discharged formula in the final judgement");
    }
    Ok(c)
}

pub fn judge_nlal(s: &DerivScript) -> Result<CheckedLal, DerivError> {
    nlal(s, &mut Vec::new())
}

fn premises<T>(
    s: &DerivScript,
    path: &mut Vec<usize>,
    f: fn(&DerivScript, &mut Vec<usize>) -> Result<T, DerivError>,
) -> Result<Vec<T>, DerivError> {
    if s.premises.len() != s.rule.arity() {
        return fail(path, format!("{:?} expects {} premises, found {}", s.rule, s.rule.arity(), s.premises.len()));
    }
    let mut out = Vec::new();
    for (i, p) in s.premises.iter().enumerate() {
        path.push(i);
        out.push(f(p, path)?);
        path.pop();
    }
    Ok(out)
}

fn union(a: &DualContext, b: &DualContext, path: &[usize]) -> Result<DualContext, DerivError> {
    let mut out = a.clone();
    for (k, v) in &b.nonlinear {
        if out.contains(k) {
            return fail(path, format!("variable {k} occurs in both premises"));
        }
        out.nonlinear.insert(k.clone(), v.clone());
    }
    for (k, v) in &b.linear {
        if out.contains(k) {
            return fail(path, format!("variable {k} occurs in both premises"));
        }
        out.linear.insert(k.clone(), v.clone());
    }
    Ok(out)
}

fn same_type(a: &Type, b: &Type, path: &[usize], what: &str) -> Result<(), DerivError> {
    if a.alpha_eq(b) {
        Ok(())
    } else {
        fail(path, format!("{what}: expected {a}, found {b}"))
    }
}

fn dlal_type(t: &Type, path: &[usize]) -> Result<(), DerivError> {
    if t.is_dlal() {
        Ok(())
    } else {
        fail(path, format!("{t} is not a DLAL type"))
    }
}

fn ndlal(s: &DerivScript, path: &mut Vec<usize>) -> Result<Checked, DerivError> {
    if !s.rule.is_dlal() {
        return fail(path, format!("{:?} is not an NDLAL rule", s.rule));
    }
    let ps = premises(s, path, ndlal)?;
    let p = &s.params;
    let j = match s.rule {
        Rule::Id => {
            let x = need(&p.var, path, "var")?;
            let ty = need(&p.ty, path, "ty")?;
            dlal_type(ty, path)?;
            let mut ctx = DualContext::default();
            ctx.linear.insert(x.clone(), LinEntry { ty: ty.clone(), discharged: false });
            Judgement { ctx, subject: Term::Var(x.clone()), ty: ty.clone() }
        }
        Rule::LinI => {
            let x = need(&p.binder, path, "binder")?;
            let pj = &ps[0].j;
            let mut ctx = pj.ctx.clone();
            let e = match ctx.linear.remove(x) {
                Some(e) => e,
                None if ctx.nonlinear.contains_key(x) => return fail(path, format!("{x} is non-linear; use (=> i)")),
                None => return fail(path, format!("{x} is not in the linear zone")),
            };
            if e.discharged {
                return fail(path, format!("(-o i) cannot abstract the discharged variable {x}"));
            }
            Judgement { ctx, subject: abs(x, pj.subject.clone()), ty: lin(e.ty, pj.ty.clone()) }
        }
        Rule::BangIDlal => {
            let x = need(&p.binder, path, "binder")?;
            let pj = &ps[0].j;
            let mut ctx = pj.ctx.clone();
            let Some(a) = ctx.nonlinear.remove(x) else {
                if ctx.linear.get(x).is_some_and(|e| e.discharged) {
                    return fail(path, format!("(=> i) cannot abstract the discharged variable {x}"));
                }
                return fail(path, format!("{x} is not in the non-linear zone"));
            };
            Judgement { ctx, subject: abs(x, pj.subject.clone()), ty: arrow(a, pj.ty.clone()) }
        }
        Rule::LinE => {
            let (f, a) = (&ps[0].j, &ps[1].j);
            let Type::Lin(dom, cod) = &f.ty else {
                return fail(path, format!("(-o e) major premise has type {}", f.ty));
            };
            same_type(dom, &a.ty, path, "(-o e) argument")?;
            let ctx = union(&f.ctx, &a.ctx, path)?;
            Judgement { ctx, subject: app(f.subject.clone(), a.subject.clone()), ty: (**cod).clone() }
        }
        Rule::BangEDlal => {
            let (f, a) = (&ps[0].j, &ps[1].j);
            let Type::Arrow(dom, cod) = &f.ty else {
                return fail(path, format!("(=> e) major premise has type {}", f.ty));
            };
            same_type(dom, &a.ty, path, "(=> e) argument")?;
            if !a.ctx.nonlinear.is_empty() || a.ctx.linear.len() > 1 {
                return fail(path, "(=> e) argument context must be empty or a single linear variable");
            }
            let mut ctx = f.ctx.clone();
            if let Some((z, e)) = a.ctx.linear.iter().next() {
                if e.discharged {
                    return fail(path, format!("(=> e) argument variable {z} is discharged"));
                }
                if ctx.contains(z) {
                    return fail(path, format!("variable {z} occurs in both premises"));
                }
                ctx.nonlinear.insert(z.clone(), e.ty.clone());
            }
            Judgement { ctx, subject: app(f.subject.clone(), a.subject.clone()), ty: (**cod).clone() }
        }
        Rule::Weak => {
            let x = need(&p.var, path, "var")?;
            let ty = need(&p.ty, path, "ty")?;
            dlal_type(ty, path)?;
            let pj = &ps[0].j;
            let mut ctx = pj.ctx.clone();
            if ctx.contains(x) {
                return fail(path, format!("weakened variable {x} already in context"));
            }
            match p.mark.unwrap_or(Mark::Proper) {
                Mark::Bang => {
                    ctx.nonlinear.insert(x.clone(), ty.clone());
                }
                Mark::Proper => {
                    ctx.linear.insert(x.clone(), LinEntry { ty: ty.clone(), discharged: false });
                }
                Mark::Par => {
                    ctx.linear.insert(x.clone(), LinEntry { ty: ty.clone(), discharged: true });
                }
            }
            Judgement { ctx, subject: pj.subject.clone(), ty: pj.ty.clone() }
        }
        Rule::Cntr => {
            let [x1, x2, x] = need(&p.merged, path, "merged")?;
            let pj = &ps[0].j;
            if x1 == x2 {
                return fail(path, "contracted variables must be distinct");
            }
            let mut ctx = pj.ctx.clone();
            let (Some(a1), Some(a2)) = (ctx.nonlinear.remove(x1), ctx.nonlinear.remove(x2)) else {
                return fail(path, format!("(Cntr) needs {x1} and {x2} in the non-linear zone"));
            };
            same_type(&a1, &a2, path, "(Cntr) types")?;
            if ctx.contains(x) {
                return fail(path, format!("contracted name {x} already in context"));
            }
            ctx.nonlinear.insert(x.clone(), a1);
            let subject = pj.subject.rename_free(x1, x).rename_free(x2, x);
            Judgement { ctx, subject, ty: pj.ty.clone() }
        }
        Rule::ParI => {
            let nl = need(&p.nonlinear, path, "nonlinear")?;
            let pj = &ps[0].j;
            if !pj.ctx.nonlinear.is_empty() {
                return fail(path, "(§ i) premise must have an empty non-linear zone");
            }
            let mut ctx = DualContext::default();
            for (k, e) in &pj.ctx.linear {
                if e.discharged {
                    return fail(path, format!("(§ i) premise has discharged variable {k}"));
                }
                if nl.contains(k) {
                    ctx.nonlinear.insert(k.clone(), e.ty.clone());
                } else {
                    ctx.linear.insert(k.clone(), LinEntry { ty: e.ty.clone(), discharged: true });
                }
            }
            if let Some(k) = nl.iter().find(|k| !pj.ctx.linear.contains_key(*k)) {
                return fail(path, format!("(§ i) names {k}, which is not in the premise"));
            }
            Judgement { ctx, subject: pj.subject.clone(), ty: par(pj.ty.clone()) }
        }
        Rule::ParE => {
            let x = need(&p.binder, path, "binder")?;
            let (u, t) = (&ps[0].j, &ps[1].j);
            let Type::Par(a) = &u.ty else {
                return fail(path, format!("(§ e) major premise has type {}", u.ty));
            };
            let mut rest = t.ctx.clone();
            match rest.linear.remove(x) {
                Some(e) if e.discharged => same_type(a, &e.ty, path, "(§ e) discharged formula")?,
                _ => return fail(path, format!("(§ e) needs {x} discharged in the minor premise")),
            }
            let ctx = union(&u.ctx, &rest, path)?;
            Judgement { ctx, subject: t.subject.substitute(x, &u.subject), ty: t.ty.clone() }
        }
        Rule::ForallI => {
            let a = need(&p.binder, path, "binder")?;
            let pj = &ps[0].j;
            if pj.ctx.free_type_vars().contains(a) {
                return fail(path, format!("eigenvariable {a} is free in the context"));
            }
            Judgement { ctx: pj.ctx.clone(), subject: pj.subject.clone(), ty: forall(a, pj.ty.clone()) }
        }
        Rule::ForallE => {
            let b = need(&p.inst_type, path, "inst_type")?;
            dlal_type(b, path)?;
            let pj = &ps[0].j;
            let Type::Forall(a, body) = &pj.ty else {
                return fail(path, format!("(∀ e) premise has type {}", pj.ty));
            };
            Judgement { ctx: pj.ctx.clone(), subject: pj.subject.clone(), ty: body.substitute(a, b) }
        }
        Rule::BangILal | Rule::BangELal => unreachable!(),
    };
    Ok(Checked { j, premises: ps })
}

fn lal_union(a: &LalContext, b: &LalContext, path: &[usize]) -> Result<LalContext, DerivError> {
    let mut out = a.0.clone();
    for (k, v) in &b.0 {
        if out.insert(k.clone(), v.clone()).is_some() {
            return fail(path, format!("variable {k} occurs in both premises"));
        }
    }
    Ok(LalContext(out))
}

fn proper(ty: &Type) -> LalEntry {
    LalEntry { ty: ty.clone(), mark: Mark::Proper }
}

fn nlal(s: &DerivScript, path: &mut Vec<usize>) -> Result<CheckedLal, DerivError> {
    if !s.rule.is_lal() {
        return fail(path, format!("{:?} is not an NLAL rule", s.rule));
    }
    let ps = premises(s, path, nlal)?;
    let p = &s.params;
    let lal_type = |t: &Type| if t.is_lal() { Ok(()) } else { fail(path, format!("{t} is not a LAL type")) };
    let j = match s.rule {
        Rule::Id => {
            let x = need(&p.var, path, "var")?;
            let ty = need(&p.ty, path, "ty")?;
            lal_type(ty)?;
            let ctx = LalContext(BTreeMap::from([(x.clone(), proper(ty))]));
            LalJudgement { ctx, subject: Term::Var(x.clone()), ty: ty.clone() }
        }
        Rule::LinI => {
            let x = need(&p.binder, path, "binder")?;
            let pj = &ps[0].j;
            let mut ctx = pj.ctx.clone();
            let e = match ctx.0.remove(x) {
                Some(e) => e,
                None => return fail(path, format!("{x} is not in the context")),
            };
            if e.mark != Mark::Proper {
                return fail(path, format!("(-o i) cannot abstract the discharged variable {x}"));
            }
            LalJudgement { ctx, subject: abs(x, pj.subject.clone()), ty: lin(e.ty, pj.ty.clone()) }
        }
        Rule::LinE => {
            let (f, a) = (&ps[0].j, &ps[1].j);
            let Type::Lin(dom, cod) = &f.ty else {
                return fail(path, format!("(-o e) major premise has type {}", f.ty));
            };
            same_type(dom, &a.ty, path, "(-o e) argument")?;
            let ctx = lal_union(&f.ctx, &a.ctx, path)?;
            LalJudgement { ctx, subject: app(f.subject.clone(), a.subject.clone()), ty: (**cod).clone() }
        }
        Rule::Weak => {
            let x = need(&p.var, path, "var")?;
            let ty = need(&p.ty, path, "ty")?;
            lal_type(ty)?;
            let pj = &ps[0].j;
            let mut ctx = pj.ctx.clone();
            let entry = LalEntry { ty: ty.clone(), mark: p.mark.unwrap_or(Mark::Proper) };
            if ctx.0.insert(x.clone(), entry).is_some() {
                return fail(path, format!("weakened variable {x} already in context"));
            }
            LalJudgement { ctx, subject: pj.subject.clone(), ty: pj.ty.clone() }
        }
        Rule::Cntr => {
            let [x1, x2, x] = need(&p.merged, path, "merged")?;
            let pj = &ps[0].j;
            if x1 == x2 {
                return fail(path, "contracted variables must be distinct");
            }
            let mut ctx = pj.ctx.clone();
            let (Some(a1), Some(a2)) = (ctx.0.remove(x1), ctx.0.remove(x2)) else {
                return fail(path, format!("(Cntr) needs {x1} and {x2} in the context"));
            };
            if a1.mark != Mark::Bang || a2.mark != Mark::Bang {
                return fail(path, "(Cntr) applies to !-discharged formulas only");
            }
            same_type(&a1.ty, &a2.ty, path, "(Cntr) types")?;
            if ctx.0.insert(x.clone(), a1).is_some() {
                return fail(path, format!("contracted name {x} already in context"));
            }
            let subject = pj.subject.rename_free(x1, x).rename_free(x2, x);
            LalJudgement { ctx, subject, ty: pj.ty.clone() }
        }
        Rule::ParI => {
            let nl = need(&p.nonlinear, path, "nonlinear")?;
            let pj = &ps[0].j;
            let mut ctx = LalContext::default();
            for (k, e) in &pj.ctx.0 {
                if e.mark != Mark::Proper {
                    return fail(path, format!("(§ i) premise has discharged variable {k}"));
                }
                let mark = if nl.contains(k) { Mark::Bang } else { Mark::Par };
                ctx.0.insert(k.clone(), LalEntry { ty: e.ty.clone(), mark });
            }
            if let Some(k) = nl.iter().find(|k| !pj.ctx.0.contains_key(*k)) {
                return fail(path, format!("(§ i) names {k}, which is not in the premise"));
            }
            LalJudgement { ctx, subject: pj.subject.clone(), ty: par(pj.ty.clone()) }
        }
        Rule::BangILal => {
            let pj = &ps[0].j;
            if pj.ctx.0.len() > 1 {
                return fail(path, "(! i) premise has more than one free variable");
            }
            let mut ctx = LalContext::default();
            for (k, e) in &pj.ctx.0 {
                if e.mark != Mark::Proper {
                    return fail(path, format!("(! i) premise has discharged variable {k}"));
                }
                ctx.0.insert(k.clone(), LalEntry { ty: e.ty.clone(), mark: Mark::Bang });
            }
            LalJudgement { ctx, subject: pj.subject.clone(), ty: bang(pj.ty.clone()) }
        }
        Rule::ParE | Rule::BangELal => {
            let x = need(&p.binder, path, "binder")?;
            let (u, t) = (&ps[0].j, &ps[1].j);
            let (inner, mark) = match (&u.ty, s.rule) {
                (Type::Par(a), Rule::ParE) => (a, Mark::Par),
                (Type::Bang(a), Rule::BangELal) => (a, Mark::Bang),
                _ => return fail(path, format!("{:?} major premise has type {}", s.rule, u.ty)),
            };
            let mut rest = t.ctx.clone();
            match rest.0.remove(x) {
                Some(e) if e.mark == mark => same_type(inner, &e.ty, path, "discharged formula")?,
                _ => return fail(path, format!("{:?} needs {x} discharged with {mark:?} in the minor premise", s.rule)),
            }
            let ctx = lal_union(&u.ctx, &rest, path)?;
            LalJudgement { ctx, subject: t.subject.substitute(x, &u.subject), ty: t.ty.clone() }
        }
        Rule::ForallI => {
            let a = need(&p.binder, path, "binder")?;
            let pj = &ps[0].j;
            if pj.ctx.free_type_vars().contains(a) {
                return fail(path, format!("eigenvariable {a} is free in the context"));
            }
            LalJudgement { ctx: pj.ctx.clone(), subject: pj.subject.clone(), ty: forall(a, pj.ty.clone()) }
        }
        Rule::ForallE => {
            let b = need(&p.inst_type, path, "inst_type")?;
            lal_type(b)?;
            let pj = &ps[0].j;
            let Type::Forall(a, body) = &pj.ty else {
                return fail(path, format!("(∀ e) premise has type {}", pj.ty));
            };
            LalJudgement { ctx: pj.ctx.clone(), subject: pj.subject.clone(), ty: body.substitute(a, b) }
        }
        Rule::BangIDlal | Rule::BangEDlal => unreachable!(),
    };
    Ok(CheckedLal { j, premises: ps })
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use crate::types::{arrow, lin, nat, nat_at, tvar, Mark};

    fn church2() -> DerivScript {
        let a = tvar("a");
        let endo = lin(a.clone(), a.clone());
        let body = lin_e(id("f1", endo.clone()), lin_e(id("f2", endo.clone()), id("x", a)));
        let boxed = par_i(&["f1", "f2"], lin_i("x", body));
        forall_i("a", bang_i("f", cntr("f1", "f2", "f", boxed)))
    }

    #[test]
    fn identity_axiom() {
        let c = check_ndlal(&id("x", tvar("a"))).unwrap();
        assert_eq!(c.j.to_string(), "; x:a |- x : a");
    }

    #[test]
    fn church_two_has_numeral_type() {
        let s = church2();
        let c = check_ndlal(&s).unwrap();
        assert!(c.j.ty.alpha_eq(&nat()));
        assert!(c.j.subject.alpha_eq(&"\\f.\\x.f (f x)".parse().unwrap()));
        assert_eq!(s.size(), 10);
        assert_eq!(s.depth(), 1);
        let _ = nat_at(tvar("a"));
    }

    #[test]
    fn rejects_abstracting_discharged() {
        let s = lin_i("x", par_i(&[], id("x", tvar("a"))));
        let err = judge_ndlal(&s).unwrap_err();
        assert!(err.to_string().contains("discharged"), "{err}");
    }

    #[test]
    fn rejects_discharged_at_root() {
        assert!(check_ndlal(&par_i(&[], id("x", tvar("a")))).is_err());
        assert!(judge_ndlal(&par_i(&[], id("x", tvar("a")))).is_ok());
    }

    #[test]
    fn rejects_contraction_of_linear() {
        let s = cntr("x", "y", "z", lin_e(id("x", lin(tvar("a"), tvar("a"))), id("y", tvar("a"))));
        assert!(judge_ndlal(&s).is_err());
    }

    #[test]
    fn eigenvariable_condition() {
        assert!(judge_ndlal(&forall_i("a", id("x", tvar("a")))).is_err());
        assert!(judge_ndlal(&forall_i("b", id("x", tvar("a")))).is_ok());
    }

    #[test]
    fn closed_bang_argument() {
        let idt = lin_i("y", id("y", tvar("a")));
        let f = id("g", arrow(lin(tvar("a"), tvar("a")), tvar("b")));
        let c = judge_ndlal(&bang_e(f, idt)).unwrap();
        assert!(c.j.ctx.nonlinear.is_empty());
    }

    #[test]
    fn bang_intro_lal_side_condition() {
        let two = lin_e(id("f", lin(tvar("a"), tvar("a"))), id("x", tvar("a")));
        assert!(judge_nlal(&bang_i_lal(two)).is_err());
        assert!(judge_nlal(&bang_i_lal(id("x", tvar("a")))).is_ok());
        let w = weak("y", tvar("a"), Mark::Bang, id("x", tvar("a")));
        assert!(judge_nlal(&w).is_ok());
    }
}
