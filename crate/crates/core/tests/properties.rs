use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dlal::deriv::{check_ndlal, check_nlal, translate_to_lal, DerivScript};
use dlal::infer::random::random_typable;
use dlal::infer::{infer_report, principal_simple_type, InferOptions, InferResult};
use dlal::lla::simulate_run;
use dlal::stratify::{decorate, normalize_levels};
use dlal::term::{abs, app, normalize, var, Strategy as Reduce, Term};
use dlal::types::{arrow, bang, lin, par, tvar, Type};

fn term() -> impl Strategy<Value = Term> {
    let leaf = prop::sample::select(vec!["x", "y", "z", "f"]).prop_map(var);
    leaf.prop_recursive(6, 40, 2, |inner| {
        prop_oneof![
            (prop::sample::select(vec!["x", "y", "f"]), inner.clone()).prop_map(|(x, b)| abs(x, b)),
            (inner.clone(), inner).prop_map(|(f, a)| app(f, a)),
        ]
    })
}

fn ty() -> impl Strategy<Value = Type> {
    let leaf = prop::sample::select(vec!["a", "b", "c"]).prop_map(tvar);
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| lin(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| arrow(a, b)),
            inner.clone().prop_map(par),
            inner.prop_map(bang),
        ]
    })
}

fn typable(seed: u64) -> Term {
    random_typable(&mut ChaCha8Rng::seed_from_u64(seed), 20)
}

fn inferred(t: &Term) -> Vec<InferResult> {
    infer_report(t, &InferOptions { max_results: 4, ..InferOptions::default() }).expect("simply typable").results
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn term_print_parse(t in term()) {
        let back: Term = t.to_string().parse().unwrap();
        prop_assert_eq!(&back, &t);
    }

    #[test]
    fn type_print_parse(a in ty()) {
        let back: Type = a.to_string().parse().unwrap();
        prop_assert!(back.alpha_eq(&a), "{} vs {}", back, a);
    }

    #[test]
    fn size_counts_nodes(t in term()) {
        let expect = match &t {
            Term::Var(_) => 1,
            Term::Abs(_, b) => 1 + b.size(),
            Term::App(f, a) => 1 + f.size() + a.size(),
        };
        prop_assert_eq!(t.size(), expect);
    }

    #[test]
    fn alpha_renaming(t in term()) {
        let r = abs("fresh_v", t.rename_free("x", "fresh_v"));
        prop_assert!(r.alpha_eq(&abs("x", t.clone())));
    }

    #[test]
    fn simply_typed_terms_normalize_alike(seed in any::<u64>()) {
        let t = typable(seed);
        let lo = normalize(&t, Reduce::LeftmostOutermost, 100_000);
        let ri = normalize(&t, Reduce::RightmostInnermost, 100_000);
        let rnd = normalize(&t, Reduce::Random(seed), 100_000);
        prop_assert!(lo.normal && ri.normal && rnd.normal);
        prop_assert!(lo.final_term.alpha_eq(&ri.final_term));
        prop_assert!(lo.final_term.alpha_eq(&rnd.final_term));
    }

    #[test]
    fn inferred_certificates_check(seed in any::<u64>()) {
        let t = typable(seed);
        let (principal, _) = principal_simple_type(&t).unwrap();
        for r in inferred(&t) {
            let c = check_ndlal(&r.certificate).unwrap();
            prop_assert!(c.j.subject.alpha_eq(&t));
            prop_assert!(c.j.ty.alpha_eq(&r.ty));
            prop_assert!(c.j.ctx.is_empty());
            prop_assert!(r.ty.erase_to_simple().unwrap().equiv(&principal), "{} over {}", r.ty, principal);
            prop_assert!(t.size() <= r.certificate.size());
        }
    }

    #[test]
    fn certificates_survive_json(seed in any::<u64>()) {
        let t = typable(seed);
        for r in inferred(&t) {
            let back = DerivScript::from_json(&r.certificate.to_json()).unwrap();
            prop_assert_eq!(&back, &r.certificate);
        }
    }

    #[test]
    fn level_normalization_agrees(seed in any::<u64>()) {
        let t = typable(seed);
        let nf = normalize(&t, Reduce::LeftmostOutermost, 100_000).final_term;
        for r in inferred(&t) {
            let st = decorate(&r.certificate).unwrap();
            prop_assert!(st.erase().alpha_eq(&t));
            let tr = normalize_levels(&st);
            prop_assert!(tr.violations.is_empty(), "{:?}", tr.violations);
            prop_assert!(tr.final_term.alpha_eq(&nf));
        }
    }

    #[test]
    fn translation_checks(seed in any::<u64>()) {
        let t = typable(seed);
        for r in inferred(&t) {
            let l = translate_to_lal(&r.certificate).unwrap();
            let c = check_nlal(&l).unwrap();
            prop_assert!(c.j.subject.alpha_eq(&t));
            prop_assert!(c.j.ty.alpha_eq(&r.ty.star_translate()));
        }
    }

    #[test]
    fn simulation_commutes(seed in any::<u64>()) {
        let t = typable(seed);
        if let Some(r) = inferred(&t).into_iter().next() {
            let rep = simulate_run(&r.certificate, Reduce::Random(seed), 100_000).unwrap();
            prop_assert!(rep.normal);
            prop_assert!(rep.violations.is_empty(), "{:?}", rep.violations);
        }
    }
}
