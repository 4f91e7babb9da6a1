//! ∀§-normalization of NDLAL derivations.

use super::subst::{rename_free, subst_par, subst_type};
use super::{check_ndlal, DerivError, DerivScript, Rule};
use crate::term::fresh_name;

fn is_elim(r: Rule) -> bool {
    matches!(r, Rule::LinE | Rule::BangEDlal | Rule::ParE | Rule::ForallE)
}

/// No `(∀ i)` feeds `(∀ e)`, no `(§ i)` is the major premise of `(§ e)`, and no
/// Weak, Cntr or `(§ e)` is the major premise of an elimination.
pub fn is_vs_normal(d: &DerivScript) -> bool {
    let local = if is_elim(d.rule) {
        let major = d.premises[0].rule;
        !(d.rule == Rule::ForallE && major == Rule::ForallI)
            && !(d.rule == Rule::ParE && major == Rule::ParI)
            && !matches!(major, Rule::Weak | Rule::Cntr | Rule::ParE)
    } else {
        true
    };
    local && d.premises.iter().all(is_vs_normal)
}

/// Rewrite to a ∀§-normal derivation with the same conclusion.
pub fn vs_normalize(d: &DerivScript) -> Result<DerivScript, DerivError> {
    check_ndlal(d)?;
    norm(d)
}

pub(crate) fn norm(d: &DerivScript) -> Result<DerivScript, DerivError> {
    let mut out = d.clone();
    for q in out.premises.iter_mut() {
        *q = norm(q)?;
    }
    match rewrite(&out)? {
        Some(r) => norm(&r),
        None => Ok(out),
    }
}

fn rewrite(d: &DerivScript) -> Result<Option<DerivScript>, DerivError> {
    if !is_elim(d.rule) {
        return Ok(None);
    }
    let major = &d.premises[0];
    match (d.rule, major.rule) {
        (Rule::ForallE, Rule::ForallI) => {
            let a = major.params.binder.as_deref().expect("binder");
            let b = d.params.inst_type.as_ref().expect("inst_type");
            Ok(Some(subst_type(&major.premises[0], a, b)))
        }
        (Rule::ParE, Rule::ParI) => {
            let x = d.params.binder.as_deref().expect("binder");
            let nl = major.params.nonlinear.clone().unwrap_or_default();
            Ok(Some(subst_par(&major.premises[0], &d.premises[1], x, &nl)?))
        }
        (_, Rule::Weak) => {
            let mut inner = d.clone();
            inner.premises[0] = major.premises[0].clone();
            let mut out = major.clone();
            out.premises[0] = inner;
            Ok(Some(out))
        }
        (_, Rule::Cntr) => {
            let mut avoid = d.names();
            let rest: std::collections::BTreeSet<String> = d.premises[1..].iter().flat_map(|p| p.names()).collect();
            let [x1, x2, x] = major.params.merged.clone().expect("merged");
            let mut body = major.premises[0].clone();
            let mut m = [x1.clone(), x2.clone(), x];
            for (i, xi) in [x1, x2].iter().enumerate() {
                if rest.contains(xi) {
                    let y = fresh_name(xi, &avoid);
                    avoid.insert(y.clone());
                    body = rename_free(&body, xi, &y);
                    m[i] = y;
                }
            }
            let mut inner = d.clone();
            inner.premises[0] = body;
            let mut out = major.clone();
            out.params.merged = Some(m);
            out.premises[0] = inner;
            Ok(Some(out))
        }
        (_, Rule::ParE) => {
            let mut avoid = d.names();
            let rest: std::collections::BTreeSet<String> = d.premises[1..].iter().flat_map(|p| p.names()).collect();
            let y = major.params.binder.clone().expect("binder");
            let mut t = major.premises[1].clone();
            let mut y2 = y.clone();
            if rest.contains(&y) {
                y2 = fresh_name(&y, &avoid);
                avoid.insert(y2.clone());
                t = rename_free(&t, &y, &y2);
            }
            let mut inner = d.clone();
            inner.premises[0] = t;
            let mut out = major.clone();
            out.params.binder = Some(y2);
            out.premises[1] = inner;
            Ok(Some(out))
        }
        _ => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use crate::types::{lin, par, tvar, Mark};

    #[test]
    fn forall_pair_collapses() {
        let d = forall_e(tvar("b"), forall_i("a", lin_i("x", id("x", tvar("a")))));
        let n = vs_normalize(&d).unwrap();
        assert_eq!(n, lin_i("x", id("x", tvar("b"))));
        assert!(is_vs_normal(&n));
    }

    #[test]
    fn normal_script_unchanged() {
        let d = lin_i("x", id("x", tvar("a")));
        assert_eq!(vs_normalize(&d).unwrap(), d);
    }

    #[test]
    fn par_pair_collapses() {
        let a = tvar("a");
        let boxed = par_i(&[], id("w", a.clone()));
        let minor = par_i(&[], lin_e(id("f", lin(a.clone(), a.clone())), id("x", a.clone())));
        let d = par_e("x", boxed, minor);
        let before = judge_ndlal(&d).unwrap();
        let n = norm(&d).unwrap();
        let after = judge_ndlal(&n).unwrap();
        assert!(is_vs_normal(&n));
        assert!(after.j.ctx.alpha_eq(&before.j.ctx));
        assert_eq!(after.j.ty, par(a));
        assert!(n.size() < d.size());
    }

    #[test]
    fn weakening_permutes_below_elimination() {
        let a = tvar("a");
        let f = weak("k", a.clone(), Mark::Bang, id("f", lin(a.clone(), a.clone())));
        let d = lin_e(f, id("x", a));
        let n = norm(&d).unwrap();
        assert_eq!(n.rule, Rule::Weak);
        assert!(is_vs_normal(&n));
        assert_eq!(judge_ndlal(&n).unwrap().j, judge_ndlal(&d).unwrap().j);
    }

    use super::norm;
}
