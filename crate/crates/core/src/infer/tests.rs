use super::*;
use crate::stdlib::{add_term, church_term, counterexample, mult_term};
use crate::types::{nat_at, tvar};

fn ty(s: &str) -> Type {
    s.parse().unwrap()
}

fn has(rs: &[InferResult], t: &Type) -> bool {
    rs.iter().any(|r| r.ty.alpha_eq(t))
}

#[test]
fn identity() {
    let rs = infer(&"\\x.x".parse().unwrap(), 8).unwrap();
    assert!(rs[0].ty.alpha_eq(&ty("a -o a")), "{}", rs[0].ty);
    assert!(has(&rs, &ty("a => $a")));
}

#[test]
fn church_numerals() {
    for n in [2, 3] {
        let rs = infer(&church_term(n), 8).unwrap();
        assert!(has(&rs, &ty("(a -o a) => $(a -o a)")), "{:?}", rs.iter().map(|r| r.ty.to_string()).collect::<Vec<_>>());
    }
}

#[test]
fn counterexamples_have_no_type() {
    for n in [2, 3] {
        let t = counterexample(n).term;
        let rep = infer_report(&t, &InferOptions::default()).unwrap();
        assert!(rep.results.is_empty());
        assert!(!rep.rejected.is_empty());
    }
}

#[test]
fn add_instance() {
    let n = nat_at(tvar("a"));
    let target = crate::types::lin(n.clone(), crate::types::lin(n.clone(), n));
    let r = infer_matching(&add_term(), &target, &InferOptions::default()).unwrap();
    assert!(r.is_some());
}

#[test]
fn mult_instance() {
    let n = nat_at(tvar("a"));
    let m = crate::types::arrow(crate::types::lin(n.clone(), n.clone()), crate::types::par(crate::types::lin(n.clone(), n.clone())));
    let target = crate::types::arrow(n.clone(), crate::types::lin(m, crate::types::par(n)));
    let r = infer_matching(&mult_term(), &target, &InferOptions::default()).unwrap();
    assert!(r.is_some());
}

#[test]
fn results_recheck() {
    for s in ["\\f.\\x.f (f (f x))", "\\x.\\y.x y y", "\\f.f (\\x.x)", "\\x.\\y.y"] {
        let t: Term = s.parse().unwrap();
        for r in infer(&t, 8).unwrap() {
            let c = check_ndlal(&r.certificate).unwrap();
            assert!(c.j.subject.alpha_eq(&t));
            assert!(c.j.ty.alpha_eq(&r.ty));
        }
    }
}

#[test]
fn not_simply_typable() {
    assert!(matches!(infer(&"\\x.x x".parse().unwrap(), 8), Err(InferError::NotSimplyTypable(_))));
}
