//! Substitution on derivations: type substitution, and substitution of a
//! derivation of `u` for a linear, §-discharged or non-linear variable.

use std::collections::BTreeSet;

use super::{judge_ndlal, par_i_owned, weak, Checked, DerivError, DerivScript, Rule};
use crate::term::fresh_name;
use crate::types::{DualContext, Mark, Type};

fn fresh_tvar(base: &str, avoid: &BTreeSet<String>) -> String {
    fresh_name(base, avoid)
}

/// Rename the free context variable `a` to `b` throughout `d`.
pub(crate) fn rename_free(d: &DerivScript, a: &str, b: &str) -> DerivScript {
    let mut out = d.clone();
    let p = &mut out.params;
    let descend_all = |out: &mut DerivScript| {
        for q in out.premises.iter_mut() {
            *q = rename_free(q, a, b);
        }
    };
    match d.rule {
        Rule::Id => {
            if p.var.as_deref() == Some(a) {
                p.var = Some(b.into());
            }
        }
        Rule::Weak => {
            if p.var.as_deref() == Some(a) {
                p.var = Some(b.into());
            } else {
                descend_all(&mut out);
            }
        }
        Rule::LinI | Rule::BangIDlal => {
            if p.binder.as_deref() != Some(a) {
                descend_all(&mut out);
            }
        }
        Rule::Cntr => {
            let m = p.merged.as_mut().expect("checked Cntr has names");
            let bound_here = m[0] == a || m[1] == a;
            if m[2] == a {
                m[2] = b.into();
            } else if !bound_here {
                descend_all(&mut out);
            }
        }
        Rule::ParE | Rule::BangELal => {
            out.premises[0] = rename_free(&d.premises[0], a, b);
            if p.binder.as_deref() != Some(a) {
                out.premises[1] = rename_free(&d.premises[1], a, b);
            }
        }
        Rule::ParI => {
            if let Some(nl) = p.nonlinear.as_mut() {
                for n in nl.iter_mut() {
                    if n == a {
                        *n = b.into();
                    }
                }
            }
            descend_all(&mut out);
        }
        _ => descend_all(&mut out),
    }
    out
}

/// Rename internally bound term names in `avoid` and `ForallI` eigenvariables
/// in `avoid_t`, so that the result can host a derivation using those names.
pub(crate) fn freshen(d: &DerivScript, avoid: &mut BTreeSet<String>, avoid_t: &mut BTreeSet<String>) -> DerivScript {
    let mut out = d.clone();
    let pick = |name: &str, avoid: &mut BTreeSet<String>| {
        let n = fresh_name(name, avoid);
        avoid.insert(n.clone());
        n
    };
    match d.rule {
        Rule::LinI | Rule::BangIDlal => {
            let x = d.params.binder.clone().expect("binder");
            if avoid.contains(&x) {
                let y = pick(&x, avoid);
                out.premises[0] = rename_free(&out.premises[0], &x, &y);
                out.params.binder = Some(y);
            }
        }
        Rule::ParE | Rule::BangELal => {
            let x = d.params.binder.clone().expect("binder");
            if avoid.contains(&x) {
                let y = pick(&x, avoid);
                out.premises[1] = rename_free(&out.premises[1], &x, &y);
                out.params.binder = Some(y);
            }
        }
        Rule::Cntr => {
            let [x1, x2, x] = d.params.merged.clone().expect("merged");
            let mut m = [x1.clone(), x2.clone(), x];
            for (i, xi) in [x1, x2].iter().enumerate() {
                if avoid.contains(xi) && *xi != m[2] {
                    let y = pick(xi, avoid);
                    out.premises[0] = rename_free(&out.premises[0], xi, &y);
                    m[i] = y;
                }
            }
            out.params.merged = Some(m);
        }
        Rule::ForallI => {
            let a = d.params.binder.clone().expect("binder");
            if avoid_t.contains(&a) {
                let b = fresh_tvar(&a, avoid_t);
                avoid_t.insert(b.clone());
                out.premises[0] = subst_type(&out.premises[0], &a, &Type::Var(b.clone()));
                out.params.binder = Some(b);
            }
        }
        _ => {}
    }
    for q in out.premises.iter_mut() {
        *q = freshen(q, avoid, avoid_t);
    }
    out
}

/// Type substitution `D[B/α]`.
pub fn subst_type(d: &DerivScript, alpha: &str, b: &Type) -> DerivScript {
    let mut out = d.clone();
    if d.rule == Rule::ForallI {
        let beta = d.params.binder.clone().expect("binder");
        if beta == alpha {
            return out;
        }
        let fv = b.free_vars();
        if fv.contains(&beta) {
            let mut avoid = fv;
            avoid.extend(d.type_names());
            avoid.insert(alpha.to_string());
            let beta2 = fresh_tvar(&beta, &avoid);
            out.premises[0] = subst_type(&out.premises[0], &beta, &Type::Var(beta2.clone()));
            out.params.binder = Some(beta2);
        }
    }
    let p = &mut out.params;
    if let Some(t) = p.ty.as_mut() {
        *t = t.substitute(alpha, b);
    }
    if let Some(t) = p.inst_type.as_mut() {
        *t = t.substitute(alpha, b);
    }
    for q in out.premises.iter_mut() {
        *q = subst_type(q, alpha, b);
    }
    out
}

fn shape<T>(msg: impl Into<String>) -> Result<T, DerivError> {
    Err(DerivError::Shape(msg.into()))
}

fn disjoint(a: &DualContext, b: &DualContext, skip: &str) -> Result<(), DerivError> {
    match a.vars().into_iter().find(|v| v != skip && b.contains(v)) {
        Some(v) => shape(format!("variable {v} occurs in both derivations")),
        None => Ok(()),
    }
}

/// Prepare `dt` to receive `du`: internal names of `dt` avoid everything in `du`.
fn prepare(du: &DerivScript, cu: &Checked, dt: &DerivScript) -> Result<(DerivScript, Checked), DerivError> {
    let mut avoid = du.names();
    avoid.extend(cu.j.ctx.vars());
    let mut avoid_t = cu.j.ctx.free_type_vars();
    avoid_t.extend(du.type_names());
    let dt2 = freshen(dt, &mut avoid, &mut avoid_t);
    let ct = judge_ndlal(&dt2)?;
    Ok((dt2, ct))
}

fn holder(c: &Checked, x: &str) -> Option<usize> {
    c.premises.iter().position(|p| p.j.ctx.contains(x))
}

fn weaken_ctx(mut d: DerivScript, ctx: &DualContext, nonlinear_as: Mark, linear_as: Mark, force_bang: &[String]) -> DerivScript {
    for (k, t) in &ctx.nonlinear {
        d = weak(k, t.clone(), nonlinear_as, d);
    }
    for (k, e) in &ctx.linear {
        let m = if force_bang.contains(k) {
            Mark::Bang
        } else if e.discharged {
            Mark::Par
        } else {
            linear_as
        };
        d = weak(k, e.ty.clone(), m, d);
    }
    d
}

/// `Γ1;Δ1 ⊢ u:A` and `Γ2; x:A, Δ2 ⊢ t:B` give `Γ1,Γ2; Δ1,Δ2 ⊢ t[u/x]:B`.
pub fn subst_linear(du: &DerivScript, dt: &DerivScript, x: &str) -> Result<DerivScript, DerivError> {
    let cu = judge_ndlal(du)?;
    let ct = judge_ndlal(dt)?;
    match ct.j.ctx.linear.get(x) {
        Some(e) if !e.discharged && e.ty.alpha_eq(&cu.j.ty) => {}
        _ => return shape(format!("{x} is not a linear variable of type {}", cu.j.ty)),
    }
    disjoint(&cu.j.ctx, &ct.j.ctx, x)?;
    let (dt2, ct2) = prepare(du, &cu, dt)?;
    Ok(go_linear(&dt2, &ct2, x, du, &cu.j.ctx))
}

fn go_linear(d: &DerivScript, c: &Checked, x: &str, du: &DerivScript, uctx: &DualContext) -> DerivScript {
    match d.rule {
        Rule::Id => du.clone(),
        Rule::Weak if d.params.var.as_deref() == Some(x) => {
            weaken_ctx(d.premises[0].clone(), uctx, Mark::Bang, Mark::Proper, &[])
        }
        _ => {
            let i = holder(c, x).expect("linear variable is held by a premise");
            let mut out = d.clone();
            out.premises[i] = go_linear(&d.premises[i], &c.premises[i], x, du, uctx);
            out
        }
    }
}

/// `; Γ1, Δ1 ⊢ u:A` and `Γ2; x:[A]$, Δ2 ⊢ t:B` give
/// `Γ1,Γ2; [Δ1]$,Δ2 ⊢ t[u/x]:B`, where `nonlinear` lists `Γ1`.
pub fn subst_par(du: &DerivScript, dt: &DerivScript, x: &str, nonlinear: &[String]) -> Result<DerivScript, DerivError> {
    let cu = judge_ndlal(du)?;
    let ct = judge_ndlal(dt)?;
    if !cu.j.ctx.nonlinear.is_empty() || cu.j.ctx.has_discharged() {
        return shape("clause (3) needs a derivation with only proper linear entries");
    }
    match ct.j.ctx.linear.get(x) {
        Some(e) if e.discharged && e.ty.alpha_eq(&cu.j.ty) => {}
        _ => return shape(format!("{x} is not a §-discharged variable of type {}", cu.j.ty)),
    }
    disjoint(&cu.j.ctx, &ct.j.ctx, x)?;
    let (dt2, ct2) = prepare(du, &cu, dt)?;
    Ok(go_par(&dt2, &ct2, x, du, &cu.j.ctx, nonlinear))
}

fn go_par(d: &DerivScript, c: &Checked, x: &str, du: &DerivScript, uctx: &DualContext, nl: &[String]) -> DerivScript {
    match d.rule {
        Rule::ParI => {
            let inner = go_linear(&d.premises[0], &c.premises[0], x, du, uctx);
            let mut names = d.params.nonlinear.clone().unwrap_or_default();
            names.extend(nl.iter().cloned());
            par_i_owned(names, inner)
        }
        Rule::Weak if d.params.var.as_deref() == Some(x) => {
            weaken_ctx(d.premises[0].clone(), uctx, Mark::Bang, Mark::Par, nl)
        }
        _ => {
            let i = holder(c, x).expect("discharged variable is held by a premise");
            let mut out = d.clone();
            out.premises[i] = go_par(&d.premises[i], &c.premises[i], x, du, uctx, nl);
            out
        }
    }
}

/// `; z:C ⊢ u:A` (or closed `u`) and `x:A, Γ; Δ ⊢ t:B` give
/// `z:C, Γ; Δ ⊢ t[u/x]:B`. Contractions of `x` are replayed on copies of `z`.
pub fn subst_nonlinear(du: &DerivScript, dt: &DerivScript, x: &str) -> Result<DerivScript, DerivError> {
    let cu = judge_ndlal(du)?;
    let ct = judge_ndlal(dt)?;
    if !cu.j.ctx.nonlinear.is_empty() || cu.j.ctx.linear.len() > 1 || cu.j.ctx.has_discharged() {
        return shape("clause (4) needs a derivation of ; z:C |- u:A or of a closed term");
    }
    match ct.j.ctx.nonlinear.get(x) {
        Some(t) if t.alpha_eq(&cu.j.ty) => {}
        _ => return shape(format!("{x} is not a non-linear variable of type {}", cu.j.ty)),
    }
    disjoint(&cu.j.ctx, &ct.j.ctx, x)?;
    let (dt2, ct2) = prepare(du, &cu, dt)?;
    let mut avoid = dt2.names();
    avoid.extend(du.names());
    avoid.extend(ct2.j.ctx.vars());
    let z = cu.j.ctx.linear.iter().next().map(|(k, e)| (k.clone(), e.ty.clone()));
    Ok(go_nonlinear(&dt2, &ct2, x, du, z.as_ref(), &mut avoid))
}

fn go_nonlinear(
    d: &DerivScript,
    c: &Checked,
    x: &str,
    du: &DerivScript,
    z: Option<&(String, Type)>,
    avoid: &mut BTreeSet<String>,
) -> DerivScript {
    let p = &d.params;
    match d.rule {
        Rule::Cntr if p.merged.as_ref().is_some_and(|m| m[2] == x) => {
            let [x1, x2, _] = p.merged.clone().expect("merged");
            let copy = |avoid: &mut BTreeSet<String>| match z {
                Some((zn, zt)) => {
                    let zi = fresh_name(zn, avoid);
                    avoid.insert(zi.clone());
                    (rename_free(du, zn, &zi), Some((zi, zt.clone())))
                }
                None => (du.clone(), None),
            };
            let (du1, z1) = copy(avoid);
            let (du2, z2) = copy(avoid);
            let r = go_nonlinear(&d.premises[0], &c.premises[0], &x1, &du1, z1.as_ref(), avoid);
            let cr = judge_ndlal(&r).expect("substitution keeps derivations well formed");
            let r = go_nonlinear(&r, &cr, &x2, &du2, z2.as_ref(), avoid);
            match (z, z1, z2) {
                (Some((zn, _)), Some((n1, _)), Some((n2, _))) => super::cntr(&n1, &n2, zn, r),
                _ => r,
            }
        }
        Rule::Weak if p.var.as_deref() == Some(x) => match z {
            Some((zn, zt)) => weak(zn, zt.clone(), Mark::Bang, d.premises[0].clone()),
            None => d.premises[0].clone(),
        },
        Rule::BangEDlal if c.premises[1].j.ctx.contains(x) => {
            let uctx = judge_ndlal(du).expect("checked").j.ctx;
            let right = go_linear(&d.premises[1], &c.premises[1], x, du, &uctx);
            let mut out = d.clone();
            out.premises[1] = right;
            out
        }
        Rule::ParI => {
            let uctx = judge_ndlal(du).expect("checked").j.ctx;
            let inner = go_linear(&d.premises[0], &c.premises[0], x, du, &uctx);
            let mut names: Vec<String> = p.nonlinear.clone().unwrap_or_default().into_iter().filter(|n| n != x).collect();
            if let Some((zn, _)) = z {
                names.push(zn.clone());
            }
            par_i_owned(names, inner)
        }
        _ => {
            let i = holder(c, x).expect("non-linear variable is held by a premise");
            let mut out = d.clone();
            out.premises[i] = go_nonlinear(&d.premises[i], &c.premises[i], x, du, z, avoid);
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use crate::term::Term;
    use crate::types::{lin, par, tvar};

    fn a() -> Type {
        tvar("a")
    }

    #[test]
    fn type_substitution_identity() {
        let d = lin_i("x", id("x", a()));
        assert_eq!(subst_type(&d, "a", &a()), d);
        let e = subst_type(&d, "a", &lin(tvar("b"), tvar("b")));
        let c = check_ndlal(&e).unwrap();
        assert_eq!(c.j.ty.to_string(), "(b -o b) -o b -o b");
    }

    #[test]
    fn linear_substitution_into_axiom() {
        let r = subst_linear(&id("y", a()), &id("x", a()), "x").unwrap();
        assert_eq!(r.size(), 1);
        let c = judge_ndlal(&r).unwrap();
        assert_eq!(c.j.subject, Term::Var("y".into()));
    }

    #[test]
    fn par_substitution_through_box() {
        // ; w:a |- w : a  into  ; x:[a]$, f:[a -o a]$ |- f x : $a  (boxed)
        let du = id("w", a());
        let dt = par_i(&[], lin_e(id("f", lin(a(), a())), id("x", a())));
        let r = subst_par(&du, &dt, "x", &["w".to_string()]).unwrap();
        let c = judge_ndlal(&r).unwrap();
        assert!(c.j.ctx.nonlinear.contains_key("w"));
        assert!(c.j.ctx.linear["f"].discharged);
        assert_eq!(c.j.ty, par(a()));
        assert!(r.size() <= du.size() + dt.size());
    }

    #[test]
    fn nonlinear_substitution_replays_contraction() {
        // x1, x2 : a -o a non-linear, contracted into x; substitute ; g:a -o a |- g
        let endo = lin(a(), a());
        let body = lin_e(id("x1", endo.clone()), lin_e(id("x2", endo.clone()), id("y", a())));
        let boxed = par_i(&["x1", "x2"], lin_i("y", body));
        let dt = cntr("x1", "x2", "x", boxed);
        let r = subst_nonlinear(&id("g", endo), &dt, "x").unwrap();
        let c = judge_ndlal(&r).unwrap();
        assert!(c.j.ctx.nonlinear.contains_key("g"));
        assert!(c.j.subject.alpha_eq(&"\\y.g (g y)".parse().unwrap()));
    }

    #[test]
    fn capture_is_avoided() {
        // substitute y into λy.x (x linear) : internal y must be renamed
        let dt = lin_i("y", weak("y", a(), crate::types::Mark::Proper, id("x", a())));
        let r = subst_linear(&id("y", a()), &dt, "x").unwrap();
        let c = judge_ndlal(&r).unwrap();
        assert!(c.j.ctx.linear.contains_key("y"));
        match &c.j.subject {
            Term::Abs(b, body) => {
                assert_ne!(b, "y");
                assert_eq!(**body, Term::Var("y".into()));
            }
            t => panic!("unexpected {t}"),
        }
    }
}
