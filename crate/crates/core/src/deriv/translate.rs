use super::{
    bang_e_lal, bang_i_lal, check_ndlal, id, lin_e, lin_i, Checked, DerivError, DerivScript, Rule,
};
use crate::types::bang;

/// NDLAL to NLAL: `Γ; Δ ⊢ t : A` becomes `[Γ*]!, Δ* ⊢ t : A*` with the same subject.
pub fn translate_to_lal(s: &DerivScript) -> Result<DerivScript, DerivError> {
    let c = check_ndlal(s)?;
    Ok(go(s, &c))
}

fn go(s: &DerivScript, c: &Checked) -> DerivScript {
    let kids: Vec<DerivScript> = s.premises.iter().zip(&c.premises).map(|(p, cp)| go(p, cp)).collect();
    let mut out = DerivScript { rule: s.rule, params: s.params.clone(), premises: kids };
    if let Some(t) = out.params.ty.as_mut() {
        *t = t.star_translate();
    }
    if let Some(t) = out.params.inst_type.as_mut() {
        *t = t.star_translate();
    }
    match s.rule {
        Rule::BangIDlal => {
            let x = s.params.binder.as_deref().expect("binder");
            let a = c.premises[0].j.ctx.nonlinear[x].star_translate();
            let body = out.premises.pop().expect("premise");
            lin_i(x, bang_e_lal(x, id(x, bang(a)), body))
        }
        Rule::BangEDlal => {
            let arg = out.premises.pop().expect("argument");
            let f = out.premises.pop().expect("function");
            lin_e(f, bang_i_lal(arg))
        }
        _ => out,
    }
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use crate::types::{lin, nat, tvar};

    #[test]
    fn axiom_translates_to_axiom() {
        let s = id("x", tvar("a"));
        assert_eq!(translate_to_lal(&s).unwrap(), s);
    }

    #[test]
    fn church_two_translates() {
        let a = tvar("a");
        let endo = lin(a.clone(), a.clone());
        let body = lin_e(id("f1", endo.clone()), lin_e(id("f2", endo), id("x", a)));
        let s = forall_i("a", bang_i("f", cntr("f1", "f2", "f", par_i(&["f1", "f2"], lin_i("x", body)))));
        let t = translate_to_lal(&s).unwrap();
        let c = check_nlal(&t).unwrap();
        assert!(c.j.ty.alpha_eq(&nat().star_translate()));
        assert!(c.j.subject.alpha_eq(&check_ndlal(&s).unwrap().j.subject));
    }
}
