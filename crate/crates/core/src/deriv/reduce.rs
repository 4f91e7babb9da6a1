//! Subject reduction: a derivation for the reduct of a β-step.

use super::subst::{subst_linear, subst_nonlinear};
use super::vsnorm::norm;
use super::{check_ndlal, judge_ndlal, DerivError, DerivScript, Rule};
use crate::term::{RedexPath, Step, Term};

/// Given a checked script for `t0` and a redex of `t0`, build a script for
/// the reduct with the same context and type.
pub fn subject_reduce(s: &DerivScript, redex: &RedexPath) -> Result<DerivScript, DerivError> {
    let c = check_ndlal(s)?;
    if !c.j.subject.subterm(redex).is_some_and(Term::is_redex) {
        return Err(DerivError::Shape(format!("path {redex} is not a redex of the subject")));
    }
    let n = norm(s)?;
    go(&n, &redex.0)
}

fn bad<T>(msg: &str) -> Result<T, DerivError> {
    Err(DerivError::Shape(msg.to_string()))
}

fn go(d: &DerivScript, path: &[Step]) -> Result<DerivScript, DerivError> {
    let mut out = d.clone();
    match d.rule {
        Rule::Id => return bad("redex path reached a variable"),
        Rule::LinI | Rule::BangIDlal => match path.split_first() {
            Some((Step::Body, rest)) => out.premises[0] = go(&d.premises[0], rest)?,
            _ => return bad("redex path does not enter the abstraction body"),
        },
        Rule::LinE | Rule::BangEDlal => match path.split_first() {
            None => return root_redex(d),
            Some((Step::Fun, rest)) => out.premises[0] = go(&d.premises[0], rest)?,
            Some((Step::Arg, rest)) => out.premises[1] = go(&d.premises[1], rest)?,
            Some((Step::Body, _)) => return bad("redex path enters an application body"),
        },
        Rule::ParE => {
            let x = d.params.binder.as_deref().expect("binder");
            let t = judge_ndlal(&d.premises[1])?.j.subject;
            match locate_hole(&t, x, path) {
                Some(k) => out.premises[0] = go(&d.premises[0], &path[k..])?,
                None => out.premises[1] = go(&d.premises[1], path)?,
            }
        }
        _ => out.premises[0] = go(&d.premises[0], path)?,
    }
    Ok(out)
}

/// If walking `path` in `t` meets the variable `x`, the number of steps taken.
fn locate_hole(t: &Term, x: &str, path: &[Step]) -> Option<usize> {
    let mut cur = t;
    for (i, s) in path.iter().enumerate() {
        if matches!(cur, Term::Var(y) if y == x) {
            return Some(i);
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

fn root_redex(d: &DerivScript) -> Result<DerivScript, DerivError> {
    let major = &d.premises[0];
    match (d.rule, major.rule) {
        (Rule::LinE, Rule::LinI) => {
            let x = major.params.binder.as_deref().expect("binder");
            subst_linear(&d.premises[1], &major.premises[0], x)
        }
        (Rule::BangEDlal, Rule::BangIDlal) => {
            let x = major.params.binder.as_deref().expect("binder");
            subst_nonlinear(&d.premises[1], &major.premises[0], x)
        }
        (_, r) => Err(DerivError::Shape(format!("major premise of the redex ends with {r:?}, not an introduction"))),
    }
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use crate::term::{RedexPath, Step};
    use crate::types::{arrow, lin, tvar};

    #[test]
    fn linear_redex() {
        let a = tvar("a");
        let f = lin_i("x", id("x", a.clone()));
        let d = lin_e(f, id("y", a));
        let r = subject_reduce(&d, &RedexPath::root()).unwrap();
        let c = check_ndlal(&r).unwrap();
        assert_eq!(c.j.subject.to_string(), "y");
    }

    #[test]
    fn nonlinear_redex_with_contraction() {
        // (λ^! g. λy. g (g y)) (λw.w)
        let a = tvar("a");
        let endo = lin(a.clone(), a.clone());
        let body = lin_e(id("g1", endo.clone()), lin_e(id("g2", endo.clone()), id("y", a.clone())));
        let f = bang_i("g", cntr("g1", "g2", "g", par_i(&["g1", "g2"], lin_i("y", body))));
        let arg = lin_i("w", id("w", a.clone()));
        let d = bang_e(f, arg);
        let before = check_ndlal(&d).unwrap();
        let r = subject_reduce(&d, &RedexPath::root()).unwrap();
        let c = check_ndlal(&r).unwrap();
        assert!(c.j.ty.alpha_eq(&before.j.ty));
        assert!(c.j.subject.alpha_eq(&"\\y.(\\w.w) ((\\w.w) y)".parse().unwrap()));
        let inner = subject_reduce(&r, &RedexPath(vec![Step::Body])).unwrap();
        assert!(check_ndlal(&inner).unwrap().j.subject.alpha_eq(&"\\y.(\\w.w) y".parse().unwrap()));
        let _ = arrow(a.clone(), a);
    }
}
