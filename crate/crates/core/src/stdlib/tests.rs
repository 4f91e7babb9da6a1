use super::*;
use crate::term::{normalize, Strategy};
use crate::types::{lin, nat, par_n};

fn value(t: &Term) -> u64 {
    let r = normalize(t, Strategy::LeftmostOutermost, 1_000_000);
    assert!(r.normal);
    r.final_term.church_value().expect("numeral")
}

#[test]
fn numerals() {
    assert_eq!(church(0).term.to_string(), "\\f.\\x.x");
    assert!(church(2).term.alpha_eq(&"\\f.\\x.f (f x)".parse().unwrap()));
    assert!(church(2).claimed_type.unwrap().alpha_eq(&nat()));
    assert_eq!(church(5).term.size(), 2 + 5 * 2 + 1);
}

#[test]
fn printed_terms_match_certificates() {
    let ar = arithmetic();
    assert!(ar.add.term.alpha_eq(&add_term()));
    assert!(ar.mult.term.alpha_eq(&mult_term()));
    assert!(succ().term.alpha_eq(&succ_term()));
}

#[test]
fn arithmetic_types() {
    let ar = arithmetic();
    let n = nat();
    assert!(ar.add.claimed_type.unwrap().alpha_eq(&lin(n.clone(), lin(n.clone(), n.clone()))));
    let m: Type = "N => N -o $N".replace('N', &format!("({n})")).parse().unwrap();
    assert!(ar.mult.claimed_type.unwrap().alpha_eq(&m));
    assert!(ar.square.claimed_type.unwrap().alpha_eq(&lin(n.clone(), par_n(4, n))));
}

#[test]
fn square_term_shape() {
    let sq = arithmetic().square.term;
    // (m step) (λk.(λn2.(k step) (λn1.mult n1 n2) 0) (k succ 0)) 0
    let inner = apps(app(var("k"), step_term()), [abs("n1", apps(mult_term(), [var("n1"), var("n2")])), church_term(0)]);
    let mid = abs("k", app(abs("n2", inner), apps(var("k"), [succ_term(), church_term(0)])));
    let whole = abs("m", apps(app(var("m"), step_term()), [mid, church_term(0)]));
    assert!(sq.alpha_eq(&whole), "{sq}");
}

#[test]
fn arithmetic_values() {
    let ar = arithmetic();
    assert_eq!(value(&apps(ar.add.term, [church_term(2), church_term(3)])), 5);
    assert_eq!(value(&apps(ar.mult.term, [church_term(2), church_term(3)])), 6);
    assert_eq!(value(&app(ar.square.term, church_term(3))), 9);
    assert_eq!(value(&app(succ().term, church_term(4))), 5);
}

#[test]
fn coercions_are_extensional_identities() {
    for k in 0..=5 {
        for kind in [Coercion::C1, Coercion::C2] {
            let c = coercion_context(kind, &var("n")).substitute("m", &church_term(k));
            assert_eq!(value(&c), k as u64);
        }
    }
}

#[test]
fn polynomial_values() {
    assert_eq!(value(&app(polynomial(2, 3, 1).term, church_term(4))), 35);
    assert_eq!(value(&app(polynomial(0, 7, 1).term, church_term(5))), 7);
    for k in 0..=4 {
        assert_eq!(value(&app(polynomial(1, 0, 1).term, church_term(k))), (k * k) as u64);
    }
}

#[test]
fn polynomial_type() {
    for k in 1..=2 {
        let t = polynomial(1, 1, k).claimed_type.unwrap();
        assert!(t.alpha_eq(&lin(nat(), par_n(4 * k + 1, nat()))), "{t}");
    }
}

#[test]
fn mult_p_and_add_q_types() {
    let n = nat();
    let p = 3;
    let mp = check_ndlal(&certs::mult_p(p)).unwrap().j.ty;
    assert!(mp.alpha_eq(&lin(par_n(p, n.clone()), lin(par_n(p + 1, n.clone()), par_n(p + 2, n.clone())))));
    let q = 5;
    let aq = check_ndlal(&certs::add_q(q)).unwrap().j.ty;
    assert!(aq.alpha_eq(&lin(par_n(q, n.clone()), lin(par_n(q, n.clone()), par_n(q, n)))));
}

#[test]
fn counterexample_family() {
    for n in 1..=3 {
        let p = counterexample(n);
        p.verify().unwrap();
        let c = check_nlal(p.lal_certificate.as_ref().unwrap()).unwrap();
        assert!(c.j.ty.alpha_eq(p.claimed_type.as_ref().unwrap()));
        let nf = normalize(&p.term, Strategy::LeftmostOutermost, 10_000).final_term;
        assert!(nf.alpha_eq(&unfolded(n)));
    }
    assert_eq!(unfolded(1).size(), 5);
    assert_eq!(unfolded(3).size(), 29);
}

#[test]
fn words() {
    let w = word(&[true, false, true]);
    assert!(w.term.alpha_eq(&"\\s0.\\s1.\\x.s1 (s0 (s1 x))".parse().unwrap()));
    assert!(word(&[]).claimed_type.unwrap().alpha_eq(&crate::types::word()));
}

#[test]
fn corpus_round_trip() {
    let dir = std::env::temp_dir().join(format!("dlal-corpus-{}", std::process::id()));
    let progs = all();
    write_corpus(&dir, &progs).unwrap();
    let back = load_corpus(&dir).unwrap();
    assert_eq!(back.len(), progs.len());
    for p in &back {
        let orig = progs.iter().find(|q| q.name == p.name).unwrap();
        assert!(p.term.alpha_eq(&orig.term));
        assert_eq!(p.certificate, orig.certificate);
    }
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn every_program_verifies() {
    for p in all() {
        p.verify().unwrap_or_else(|e| panic!("{}: {e}", p.name));
    }
}
