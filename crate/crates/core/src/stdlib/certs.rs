//! Hand-built NDLAL/NLAL certificates for the standard programs.

use crate::deriv::{
    bang_e, bang_e_lal, bang_i, bang_i_lal, cntr, forall_e, forall_i, id, judge_ndlal, lin_e, lin_i, par_e,
    par_i, par_i_owned, weak, DerivError, DerivScript,
};
use crate::term::fresh_name;
use crate::types::{arrow, bang, lin, nat, par, tvar, Mark, Type};

fn n_ty() -> Type {
    nat()
}

/// `; ⊢ n : (A -o A) => $(A -o A)` for the numeral `λf.λx.f^n x`.
pub fn church_at(n: usize, a: &Type) -> DerivScript {
    let endo = lin(a.clone(), a.clone());
    let fname = |i: usize| if n == 1 { "f".to_string() } else { format!("f_{i}") };
    let mut body = id("x", a.clone());
    for i in (1..=n).rev() {
        body = lin_e(id(&fname(i), endo.clone()), body);
    }
    let names: Vec<String> = (1..=n).map(fname).collect();
    let mut d = par_i_owned(names, lin_i("x", body));
    if n == 0 {
        d = weak("f", endo, Mark::Bang, d);
    }
    let mut acc = fname(1);
    for i in 2..=n {
        let target = if i == n { "f".to_string() } else { format!("g_{i}") };
        d = cntr(&acc, &fname(i), &target, d);
        acc = target;
    }
    bang_i("f", d)
}

/// `; ⊢ n : N`
pub fn church(n: usize) -> DerivScript {
    forall_i("a", church_at(n, &tvar("a")))
}

/// `n f` at instance `inst`, where `n` is derived by `nd` and `f` by `fd`.
fn iterate(nd: DerivScript, inst: Type, fd: DerivScript) -> DerivScript {
    bang_e(forall_e(inst, nd), fd)
}

/// `; n:N, m:N ⊢ λf.λx.n f (m f x) : N`
fn add_body(n: &str, m: &str) -> DerivScript {
    let a = tvar("a");
    let endo = lin(a.clone(), a.clone());
    let inner = lin_i("x", lin_e(id("y", endo.clone()), lin_e(id("w", endo.clone()), id("x", a.clone()))));
    let boxed = par_i(&[], inner);
    let with_n = par_e("y", iterate(id(n, n_ty()), a.clone(), id("f_1", endo.clone())), boxed);
    let with_m = par_e("w", iterate(id(m, n_ty()), a, id("f_2", endo)), with_n);
    forall_i("a", bang_i("f", cntr("f_1", "f_2", "f", with_m)))
}

/// `add = λn.λm.λf.λx.n f (m f x) : N -o N -o N`
pub fn add() -> DerivScript {
    lin_i("n", lin_i("m", add_body("n", "m")))
}

/// `succ = λn.λf.λx.f (n f x) : N -o N`
pub fn succ() -> DerivScript {
    let a = tvar("a");
    let endo = lin(a.clone(), a.clone());
    let inner = lin_i("x", lin_e(id("f_1", endo.clone()), lin_e(id("y", endo.clone()), id("x", a.clone()))));
    let boxed = par_i(&["f_1"], inner);
    let applied = par_e("y", iterate(id("n", n_ty()), a, id("f_2", endo)), boxed);
    lin_i("n", forall_i("a", bang_i("f", cntr("f_1", "f_2", "f", applied))))
}

/// `mult = λn.λm.(m (λk.λf.λx.n f (k f x))) 0 : N => N -o $N`
pub fn mult() -> DerivScript {
    let nn = lin(n_ty(), n_ty());
    let adder = lin_i("k", add_body("n", "k"));
    let iterated = iterate(id("m", n_ty()), n_ty(), adder);
    let boxed = par_i(&[], lin_e(id("g", nn), church(0)));
    bang_i("n", lin_i("m", par_e("g", iterated, boxed)))
}

/// `step = λg.λp.g (succ p) : (N => A) -o (N => A)`
pub fn step(a: &Type) -> DerivScript {
    let na = arrow(n_ty(), a.clone());
    lin_i("g", bang_i("p", bang_e(id("g", na), lin_e(succ(), id("p", n_ty())))))
}

fn shape(msg: impl Into<String>) -> DerivError {
    DerivError::Shape(msg.into())
}

/// From `n:N; Δ ⊢ t : A` derive `; m:N, $Δ ⊢ (m step) (λn.t) 0 : $A`.
pub fn coerc1(premise: DerivScript, n: &str, m: &str) -> Result<DerivScript, DerivError> {
    let c = judge_ndlal(&premise)?;
    let ctx = &c.j.ctx;
    if ctx.nonlinear.len() != 1 || !ctx.nonlinear.get(n).is_some_and(|t| t.alpha_eq(&n_ty())) {
        return Err(shape(format!("coerc1 needs {n}:N as the only non-linear variable")));
    }
    if ctx.has_discharged() {
        return Err(shape("coerc1 premise has discharged formulas"));
    }
    let a = c.j.ty.clone();
    let delta: Vec<(String, Type)> = ctx.linear.iter().map(|(k, e)| (k.clone(), e.ty.clone())).collect();
    let mut avoid = premise.names();
    avoid.insert(m.to_string());
    let h = fresh_name("h", &avoid);
    let na = arrow(n_ty(), a.clone());
    let hty = lin(na.clone(), na.clone());
    let lam = bang_i(n, premise);
    let boxed = par_i(&[], bang_e(lin_e(id(&h, hty), lam), church(0)));
    let mstep = iterate(id(m, n_ty()), na, step(&a));
    let mut d = par_e(&h, mstep, boxed);
    for (v, b) in delta {
        d = par_e(&v, id(&v, par(b.clone())), d);
    }
    Ok(d)
}

/// From `Γ; n:$N, Δ ⊢ t : A` derive `Γ; m:N, Δ ⊢ (λn.t) (m succ 0) : A`.
pub fn coerc2(premise: DerivScript, n: &str, m: &str) -> Result<DerivScript, DerivError> {
    let c = judge_ndlal(&premise)?;
    match c.j.ctx.linear.get(n) {
        Some(e) if !e.discharged && e.ty.alpha_eq(&par(n_ty())) => {}
        _ => return Err(shape(format!("coerc2 needs {n}:$N in the linear zone"))),
    }
    let mut avoid = premise.names();
    avoid.insert(m.to_string());
    let h = fresh_name("h", &avoid);
    let nn = lin(n_ty(), n_ty());
    let msucc = iterate(id(m, n_ty()), n_ty(), succ());
    let boxed = par_i(&[], lin_e(id(&h, nn), church(0)));
    Ok(lin_e(lin_i(n, premise), par_e(&h, msucc, boxed)))
}

/// `n1:N; n2:N ⊢ mult n1 n2 : $N`
pub fn mult_applied(n1: &str, n2: &str) -> DerivScript {
    lin_e(bang_e(mult(), id(n1, n_ty())), id(n2, n_ty()))
}

/// The squaring derivation: coerc1, coerc2, (§ i), Cntr, coerc1, (-o i).
pub fn square() -> DerivScript {
    let s1 = mult_applied("n1", "n2");
    let s2 = coerc1(s1, "n1", "m1").expect("mult premise fits coerc1");
    let s3 = coerc2(s2, "n2", "m2").expect("coerc1 output fits coerc2");
    let s4 = par_i(&["m1", "m2"], s3);
    let s5 = cntr("m1", "m2", "k", s4);
    let s6 = coerc1(s5, "k", "m").expect("contracted premise fits coerc1");
    lin_i("m", s6)
}

/// Push a derivation with only proper linear entries `levels` boxes deeper:
/// `; x:B ⊢ t:C` becomes `; x:$^k B ⊢ t : $^k C`.
pub fn lift(mut d: DerivScript, levels: usize) -> Result<DerivScript, DerivError> {
    for _ in 0..levels {
        let c = judge_ndlal(&d)?;
        if !c.j.ctx.nonlinear.is_empty() || c.j.ctx.has_discharged() {
            return Err(shape("lift needs a context of proper linear entries"));
        }
        let entries: Vec<(String, Type)> = c.j.ctx.linear.iter().map(|(k, e)| (k.clone(), e.ty.clone())).collect();
        d = par_i(&[], d);
        for (v, b) in entries {
            d = par_e(&v, id(&v, par(b)), d);
        }
    }
    Ok(d)
}

/// `u = λy.square (… (square y))` with `k` copies, at `N -o $^{4k} N`.
/// For `k = 1` this is `square` itself.
pub fn power_tower(k: usize) -> DerivScript {
    assert!(k >= 1, "at least one squaring");
    if k == 1 {
        return square();
    }
    let mut d = lin_e(square(), id("y", n_ty()));
    for j in 2..=k {
        let x = format!("x_{j}");
        let host = lift(lin_e(square(), id(&x, n_ty())), 4 * (j - 1) - 1).expect("lift of a single variable");
        d = par_e(&x, d, par_i(&[], host));
    }
    lin_i("y", d)
}

/// `mult_p = λm.λn2.C1[mult n n2] : $^p N -o $^{p+1} N -o $^{p+2} N`
pub fn mult_p(p: usize) -> DerivScript {
    let body = coerc1(mult_applied("n", "n2"), "n", "m").expect("mult premise fits coerc1");
    let lifted = lift(body, p).expect("coerc1 output has linear entries only");
    lin_i("m", lin_i("n2", lifted))
}

/// `add_q = λa.λb.add a b : $^q N -o $^q N -o $^q N`
pub fn add_q(q: usize) -> DerivScript {
    let body = lin_e(lin_e(add(), id("a", n_ty())), id("b", n_ty()));
    let lifted = lift(body, q).expect("linear entries only");
    lin_i("a", lin_i("b", lifted))
}

/// `; ⊢ v : $^levels N`
pub fn literal(v: usize, levels: usize) -> DerivScript {
    (0..levels).fold(church(v), |d, _| par_i(&[], d))
}

/// `t_P = λn.(add_q (mult_p a (u n))) b` for `P(X) = a X^{2^k} + b`.
pub fn polynomial(a: usize, b: usize, k: usize) -> DerivScript {
    let p = 4 * k - 1;
    let q = 4 * k + 1;
    let un = lin_e(power_tower(k), id("n", n_ty()));
    let prod = lin_e(lin_e(mult_p(p), literal(a, p)), un);
    lin_i("n", lin_e(lin_e(add_q(q), prod), literal(b, q)))
}

/// NLAL certificate of `y:!(!A -o !A -o !A), z:!!A ⊢ (λx.y x x)^n z : $!A`.
pub fn counterexample(n: usize) -> DerivScript {
    assert!(n >= 1, "at least one copy");
    let a = tvar("a");
    let ba = bang(a.clone());
    let yty = lin(ba.clone(), lin(ba.clone(), ba.clone()));
    let yname = |i: usize| if n == 1 { "y".to_string() } else { format!("y_{i}") };
    let copy = |i: usize| {
        let body = lin_e(lin_e(id(&yname(i), yty.clone()), bang_i_lal(id("w1", a.clone()))), bang_i_lal(id("w2", a.clone())));
        lin_i("x", bang_e_lal("w", id("x", ba.clone()), cntr("w1", "w2", "w", body)))
    };
    let mut d = id("z", ba.clone());
    for i in (1..=n).rev() {
        d = lin_e(copy(i), d);
    }
    let mut bangs: Vec<String> = (1..=n).map(yname).collect();
    bangs.push("z".into());
    d = par_i_owned(bangs, d);
    let mut acc = yname(1);
    for i in 2..=n {
        let target = if i == n { "y".to_string() } else { format!("v_{i}") };
        d = cntr(&acc, &yname(i), &target, d);
        acc = target;
    }
    d = bang_e_lal("y", id("y", bang(yty)), d);
    bang_e_lal("z", id("z", bang(ba)), d)
}

/// `f a1 … ak` where `f` is derived closed and each argument closed; every
/// application is linear unless its flag is set.
pub fn apply_closed(f: DerivScript, args: Vec<(DerivScript, bool)>) -> DerivScript {
    args.into_iter().fold(f, |acc, (a, bang_arg)| if bang_arg { bang_e(acc, a) } else { lin_e(acc, a) })
}

/// `; ⊢ w : W` for the binary word `λs0.λs1.λx.s_{b1} (… (s_{bn} x))`.
pub fn word_script(bits: &[bool]) -> DerivScript {
    let a = tvar("a");
    let endo = lin(a.clone(), a.clone());
    let count = |b: bool| bits.iter().filter(|&&c| c == b).count();
    let occ = |b: bool, i: usize| {
        if count(b) == 1 { format!("s{}", u8::from(b)) } else { format!("s{}_{i}", u8::from(b)) }
    };
    let mut body = id("x", a.clone());
    for (i, &b) in bits.iter().enumerate().rev() {
        body = lin_e(id(&occ(b, i), endo.clone()), body);
    }
    let names: Vec<String> = bits.iter().enumerate().map(|(i, &b)| occ(b, i)).collect();
    let mut d = par_i_owned(names, lin_i("x", body));
    for b in [false, true] {
        let target = format!("s{}", u8::from(b));
        let uses: Vec<String> = bits.iter().enumerate().filter(|(_, &c)| c == b).map(|(i, _)| occ(b, i)).collect();
        match uses.as_slice() {
            [] => d = weak(&target, endo.clone(), Mark::Bang, d),
            [_] => {}
            [first, rest @ ..] => {
                let mut acc = first.clone();
                for (j, u) in rest.iter().enumerate() {
                    let next = if j + 1 == rest.len() { target.clone() } else { format!("{target}_acc{j}") };
                    d = cntr(&acc, u, &next, d);
                    acc = next;
                }
            }
        }
    }
    forall_i("a", bang_i("s0", bang_i("s1", d)))
}

