//! Acceptance suite. Prints one line per criterion and exits non-zero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use dlal::bench::fuel_for;
use dlal::deriv::{check_ndlal, check_nlal, translate_to_lal, DerivScript};
use dlal::infer::random::random_corpus;
use dlal::infer::{infer, infer_matching, InferOptions};
use dlal::lla::simulate_run;
use dlal::stdlib::{self, church_term, coercion_context, counterexample, unfolded, Coercion};
use dlal::stratify::{decorate, normalize_levels, tower_bound};
use dlal::term::{app, apps, normalize, var, Strategy, Term};
use dlal::types::{arrow, lin, nat, nat_at, par, par_n, tvar, Type};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))
}

fn certificates() -> Vec<(String, DerivScript)> {
    stdlib::all().into_iter().filter_map(|p| p.certificate.map(|c| (p.name, c))).collect()
}

fn strategies(seed: u64) -> [Strategy; 3] {
    [Strategy::LeftmostOutermost, Strategy::RightmostInnermost, Strategy::Random(seed)]
}

fn value(t: &Term, s: Strategy) -> Result<u64, String> {
    let r = normalize(t, s, 1_000_000);
    ensure(r.normal, || format!("{}: no normal form for {t}", s.label()))?;
    r.final_term.church_value().ok_or_else(|| format!("{}: {} is not a numeral", s.label(), r.final_term))
}

fn certificate_suite() -> Outcome {
    let start = Instant::now();
    let mut n = 0;
    for p in stdlib::all() {
        p.verify().map_err(|e| format!("{}: {e}", p.name))?;
        n += 1;
    }
    let square = stdlib::arithmetic().square.certificate.ok_or("square has no certificate")?;
    let c = check_ndlal(&square).map_err(|e| e.to_string())?;
    ensure(c.j.ctx.is_empty(), || format!("square context {:?}", c.j.ctx))?;
    let want = lin(nat(), par_n(4, nat()));
    ensure(c.j.ty.alpha_eq(&want), || format!("square : {}", c.j.ty))?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("{n} programs verified, square : {}", c.j.ty))
}

fn arithmetic_oracle() -> Outcome {
    let start = Instant::now();
    let ar = stdlib::arithmetic();
    let poly = stdlib::polynomial(2, 3, 1);
    let mut runs = 0;
    for s in strategies(17) {
        for a in 0..=6u64 {
            let na = church_term(a as usize);
            let sq = value(&app(ar.square.term.clone(), na.clone()), s)?;
            ensure(sq == a * a, || format!("{}: square {a} = {sq}", s.label()))?;
            let pv = value(&app(poly.term.clone(), na.clone()), s)?;
            ensure(pv == 2 * a * a + 3, || format!("{}: 2X^2+3 at {a} = {pv}", s.label()))?;
            runs += 2;
            for b in 0..=6u64 {
                let nb = church_term(b as usize);
                let sum = value(&apps(ar.add.term.clone(), [na.clone(), nb.clone()]), s)?;
                ensure(sum == a + b, || format!("{}: add {a} {b} = {sum}", s.label()))?;
                let prod = value(&apps(ar.mult.term.clone(), [na.clone(), nb]), s)?;
                ensure(prod == a * b, || format!("{}: mult {a} {b} = {prod}", s.label()))?;
                runs += 2;
            }
        }
    }
    within(start, Duration::from_secs(5))?;
    Ok(format!("{runs} evaluations exact"))
}

fn coercion_identity() -> Outcome {
    let bodies: Vec<Term> = vec![
        var("n"),
        app(stdlib::succ_term(), var("n")),
        apps(stdlib::add_term(), [var("n"), var("n")]),
    ];
    let mut n = 0;
    for kind in [Coercion::C1, Coercion::C2] {
        for t in &bodies {
            for k in 0..=5 {
                let numeral = church_term(k);
                let lhs = normalize(&coercion_context(kind, t).substitute("m", &numeral), Strategy::LeftmostOutermost, 1_000_000);
                let rhs = normalize(&t.substitute("n", &numeral), Strategy::LeftmostOutermost, 1_000_000);
                ensure(lhs.normal && rhs.normal, || format!("{kind:?} {t} at {k}: no normal form"))?;
                ensure(lhs.final_term.alpha_eq(&rhs.final_term), || {
                    format!("{kind:?} {t} at {k}: {} vs {}", lhs.final_term, rhs.final_term)
                })?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} instances α-equal"))
}

fn level_bounds() -> Outcome {
    let mut certs: Vec<(String, DerivScript)> = certificates();
    let from_stdlib = certs.len();
    let opts = InferOptions::least(8);
    let mut seed = 0;
    while certs.len() < from_stdlib + 500 {
        for t in random_corpus(seed, 100, 25) {
            if certs.len() == from_stdlib + 500 {
                break;
            }
            let rs = first_certificate(&t, &opts)?;
            if let Some(c) = rs {
                certs.push((t.to_string(), c));
            }
        }
        seed += 1;
        ensure(seed < 20, || "too few random terms are typable".into())?;
    }
    for (name, c) in &certs {
        let st = decorate(c).map_err(|e| format!("{name}: {e}"))?;
        let tr = normalize_levels(&st);
        ensure(tr.violations.is_empty(), || format!("{name}: {}", tr.violations.join("; ")))?;
        for r in &tr.levels {
            ensure(r.steps <= r.entry_size, || format!("{name}: level {} takes {} steps from size {}", r.level, r.steps, r.entry_size))?;
        }
    }
    Ok(format!("{} stdlib + {} random certificates, no violations", from_stdlib, certs.len() - from_stdlib))
}

fn first_certificate(t: &Term, opts: &InferOptions) -> Result<Option<DerivScript>, String> {
    let rs = dlal::infer::infer_report(t, opts).map_err(|e| format!("{t}: {e}"))?;
    Ok(rs.results.into_iter().next().map(|r| r.certificate))
}

fn strategy_independence() -> Outcome {
    let mut runs = 0;
    for p in stdlib::corpus() {
        let depth = p.certificate.as_ref().map(|c| c.depth()).ok_or(format!("{} has no certificate", p.name))?;
        let bound = tower_bound(p.term.size(), depth);
        let fuel = fuel_for(bound);
        let mut nf: Option<Term> = None;
        for seed in 0..10 {
            let tr = normalize(&p.term, Strategy::Random(seed), fuel);
            ensure(tr.normal, || format!("{} seed {seed}: not normal after {} steps", p.name, tr.count))?;
            ensure(bound.map_or(true, |b| tr.count as u128 <= b), || {
                format!("{} seed {seed}: {} steps exceed {:?}; trace {:?}", p.name, tr.count, bound, tr.steps)
            })?;
            match &nf {
                None => nf = Some(tr.final_term),
                Some(n) => ensure(n.alpha_eq(&tr.final_term), || format!("{} seed {seed}: normal forms differ", p.name))?,
            }
            runs += 1;
        }
    }
    Ok(format!("{runs} runs within bound, normal forms agree"))
}

fn size_vs_certificate() -> Outcome {
    let mut certs = certificates();
    for n in 0..=4 {
        for r in infer(&church_term(n), 8).map_err(|e| e.to_string())? {
            certs.push((format!("inferred church_{n} : {}", r.ty), r.certificate));
        }
    }
    for (name, c) in &certs {
        let j = check_ndlal(c).map_err(|e| format!("{name}: {e}"))?;
        ensure(j.j.subject.size() <= c.size(), || format!("{name}: |t| = {} > {}", j.j.subject.size(), c.size()))?;
    }
    Ok(format!("{} certificates", certs.len()))
}

fn counterexample_contrast() -> Outcome {
    for n in 1..=10 {
        let (prev, cur) = (unfolded(n - 1).size(), unfolded(n).size());
        ensure(cur == 2 * prev + 3, || format!("|u_{n}| = {cur}, |u_{}| = {prev}", n - 1))?;
    }
    let t2 = counterexample(2);
    let c = check_nlal(t2.lal_certificate.as_ref().ok_or("t_2 has no LAL certificate")?).map_err(|e| e.to_string())?;
    ensure(c.j.subject.alpha_eq(&t2.term), || "t_2 certificate subject".into())?;
    for n in [2, 3] {
        let rs = infer(&counterexample(n).term, 8).map_err(|e| e.to_string())?;
        ensure(rs.is_empty(), || format!("t_{n} : {}", rs[0].ty))?;
    }
    Ok(format!("|u_10| = {}, t_2 checks in LAL, t_2 and t_3 untypable", unfolded(10).size()))
}

fn simulation() -> Outcome {
    let mut runs = 0;
    for p in stdlib::corpus() {
        let cert = p.certificate.as_ref().ok_or(format!("{} has no certificate", p.name))?;
        let fuel = fuel_for(tower_bound(cert.size(), cert.depth() + 1));
        for s in strategies(3) {
            let r = simulate_run(cert, s, fuel).map_err(|e| format!("{} {}: {e}", p.name, s.label()))?;
            ensure(r.normal, || format!("{} {}: not normal", p.name, s.label()))?;
            ensure(r.violations.is_empty(), || format!("{} {}: {}", p.name, s.label(), r.violations.join("; ")))?;
            ensure(r.lla_steps >= r.beta_steps, || format!("{} {}: {} < {}", p.name, s.label(), r.lla_steps, r.beta_steps))?;
            ensure(r.bound.map_or(true, |b| u128::from(r.lla_steps) <= b), || {
                format!("{} {}: {} steps exceed {:?}", p.name, s.label(), r.lla_steps, r.bound)
            })?;
            runs += 1;
        }
    }
    Ok(format!("{runs} simulations commute"))
}

fn translation() -> Outcome {
    let certs = certificates();
    for (name, c) in &certs {
        let d = check_ndlal(c).map_err(|e| format!("{name}: {e}"))?;
        let l = translate_to_lal(c).map_err(|e| format!("{name}: {e}"))?;
        let j = check_nlal(&l).map_err(|e| format!("{name}: {e}"))?;
        ensure(j.j.subject.alpha_eq(&d.j.subject), || format!("{name}: subject changed"))?;
        let want = d.j.ty.star_translate();
        ensure(j.j.ty.alpha_eq(&want), || format!("{name}: {} instead of {want}", j.j.ty))?;
    }
    Ok(format!("{} translations check", certs.len()))
}

fn inference_recovery() -> Outcome {
    let start = Instant::now();
    let want: Type = "(a -o a) => $(a -o a)".parse().map_err(|e| format!("{e}"))?;
    // 0 and 1 have principal types more general than the numeral type.
    for n in 0..=1 {
        let r = infer_matching(&church_term(n), &want, &InferOptions::default()).map_err(|e| e.to_string())?;
        let r = r.ok_or(format!("church_{n}: no certificate for {want}"))?;
        ensure(check_ndlal(&r.certificate).is_ok(), || format!("church_{n}: certificate rejected"))?;
    }
    for n in 2..=6 {
        let rs = infer(&church_term(n), 8).map_err(|e| e.to_string())?;
        ensure(rs.iter().any(|r| r.ty.alpha_eq(&want)), || {
            format!("church_{n}: {:?}", rs.iter().map(|r| r.ty.to_string()).collect::<Vec<_>>())
        })?;
        for r in &rs {
            ensure(check_ndlal(&r.certificate).is_ok(), || format!("church_{n}: certificate rejected"))?;
        }
    }
    let n = nat_at(tvar("a"));
    let add_ty = lin(n.clone(), lin(n.clone(), n.clone()));
    let iter = arrow(lin(n.clone(), n.clone()), par(lin(n.clone(), n.clone())));
    let mult_ty = arrow(n.clone(), lin(iter, par(n)));
    for (name, t, ty) in [("add", stdlib::add_term(), add_ty), ("mult", stdlib::mult_term(), mult_ty)] {
        let r = infer_matching(&t, &ty, &InferOptions::default()).map_err(|e| e.to_string())?;
        let r = r.ok_or(format!("{name}: no certificate for {ty}"))?;
        let c = check_ndlal(&r.certificate).map_err(|e| format!("{name}: {e}"))?;
        ensure(c.j.ty.alpha_eq(&ty) && c.j.subject.alpha_eq(&t), || format!("{name}: certificate proves {}", c.j.ty))?;
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("church 0..6, add and mult recovered in {:?}", start.elapsed()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("certificate suite", certificate_suite),
        ("arithmetic oracle", arithmetic_oracle),
        ("coercion identity", coercion_identity),
        ("level bounds", level_bounds),
        ("strategy independence", strategy_independence),
        ("term size below certificate size", size_vs_certificate),
        ("counterexample contrast", counterexample_contrast),
        ("simulation", simulation),
        ("translation to LAL", translation),
        ("inference recovery", inference_recovery),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or(e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or("panic".into()))
        });
        let t = start.elapsed();
        match res {
            Ok(msg) => println!("criterion {:>2} PASS {name}: {msg} ({t:.2?})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {msg} ({t:.2?})", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
