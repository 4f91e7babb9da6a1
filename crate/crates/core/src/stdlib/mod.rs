//! Standard programs with their certificates, and the on-disk corpus.

pub mod certs;

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::deriv::{check_ndlal, check_nlal, DerivError, DerivScript};
use crate::term::{abs, app, apps, var, Term, TermError};
use crate::types::{bang, par, tvar, type_string, Type};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NamedProgram {
    pub name: String,
    #[serde(with = "crate::term::term_string")]
    pub term: Term,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<DerivScript>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lal_certificate: Option<DerivScript>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "type_string::option")]
    pub claimed_type: Option<Type>,
    #[serde(default)]
    pub notes: String,
}

#[derive(Debug, Error)]
pub enum StdlibError {
    #[error(transparent)]
    Deriv(#[from] DerivError),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}: certificate subject differs from the program text")]
    Mismatch(String),
    #[error("no program named {0}")]
    Unknown(String),
}

impl NamedProgram {
    /// Program whose term and type are read off a checked NDLAL certificate.
    pub fn certified(name: &str, cert: DerivScript, notes: &str) -> Result<NamedProgram, DerivError> {
        let c = check_ndlal(&cert)?;
        Ok(NamedProgram {
            name: name.into(),
            term: c.j.subject,
            certificate: Some(cert),
            lal_certificate: None,
            claimed_type: Some(c.j.ty),
            notes: notes.into(),
        })
    }

    /// Recheck the certificates and compare subjects against `term`.
    pub fn verify(&self) -> Result<(), StdlibError> {
        if let Some(cert) = &self.certificate {
            let c = check_ndlal(cert)?;
            if !c.j.subject.alpha_eq(&self.term) {
                return Err(StdlibError::Mismatch(self.name.clone()));
            }
        }
        if let Some(cert) = &self.lal_certificate {
            let c = check_nlal(cert)?;
            if !c.j.subject.alpha_eq(&self.term) {
                return Err(StdlibError::Mismatch(self.name.clone()));
            }
        }
        Ok(())
    }
}

fn certified(name: &str, cert: DerivScript, notes: &str) -> NamedProgram {
    NamedProgram::certified(name, cert, notes).unwrap_or_else(|e| panic!("stdlib certificate {name}: {e}"))
}

pub fn church_term(n: usize) -> Term {
    let body = (0..n).fold(var("x"), |acc, _| app(var("f"), acc));
    abs("f", abs("x", body))
}

/// Numeral certified at `N`.
pub fn church(n: usize) -> NamedProgram {
    certified(&format!("church_{n}"), certs::church(n), "")
}

pub fn succ_term() -> Term {
    "\\n.\\f.\\x.f (n f x)".parse().expect("succ")
}

pub fn succ() -> NamedProgram {
    certified("succ", certs::succ(), "")
}

pub fn add_term() -> Term {
    "\\n.\\m.\\f.\\x.n f (m f x)".parse().expect("add")
}

pub fn mult_term() -> Term {
    let inner = "\\k.\\f.\\x.n f (k f x)".parse::<Term>().expect("adder");
    abs("n", abs("m", apps(var("m"), [inner, church_term(0)])))
}

pub fn step_term() -> Term {
    abs("g", abs("p", app(var("g"), app(succ_term(), var("p")))))
}

pub struct Arithmetic {
    pub add: NamedProgram,
    pub mult: NamedProgram,
    pub square: NamedProgram,
}

pub fn arithmetic() -> Arithmetic {
    Arithmetic {
        add: certified("add", certs::add(), ""),
        mult: certified("mult", certs::mult(), ""),
        square: certified("square", certs::square(), "coerc1, coerc2, $i, Cntr, coerc1, -o i with coercions expanded"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coercion {
    C1,
    C2,
}

/// `C1[t] = (m step) (λn.t) 0` and `C2[t] = (λn.t) (m succ 0)`, with hole
/// variable `n` and fresh parameter `m`.
pub fn coercion_context(kind: Coercion, t: &Term) -> Term {
    let lam = abs("n", t.clone());
    match kind {
        Coercion::C1 => apps(app(var("m"), step_term()), [lam, church_term(0)]),
        Coercion::C2 => app(lam, apps(var("m"), [succ_term(), church_term(0)])),
    }
}

/// `t_P` for `P(X) = a X^{2^k} + b`.
pub fn polynomial(a: usize, b: usize, k: usize) -> NamedProgram {
    let notes = format!("P(X) = {a} X^{} + {b}", 1usize << k);
    certified(&format!("poly_{a}_{b}_{k}"), certs::polynomial(a, b, k), &notes)
}

/// `u_n` with `u_0 = z` and `u_n = y u_{n-1} u_{n-1}`.
pub fn unfolded(n: usize) -> Term {
    (0..n).fold(var("z"), |u, _| apps(var("y"), [u.clone(), u]))
}

/// `t_n = (λx.y x x)^n z`, typable in LAL but not in DLAL.
pub fn counterexample(n: usize) -> NamedProgram {
    let dup = abs("x", apps(var("y"), [var("x"), var("x")]));
    let term = (0..n).fold(var("z"), |acc, _| app(dup.clone(), acc));
    NamedProgram {
        name: format!("counterexample_{n}"),
        term,
        certificate: None,
        lal_certificate: Some(certs::counterexample(n)),
        claimed_type: Some(par(bang(tvar("a")))),
        notes: "context y : !(!a -o !a -o !a), z : !!a; normal form u_n with |u_n| = O(2^n)".into(),
    }
}

pub fn word(bits: &[bool]) -> NamedProgram {
    let label: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
    certified(&format!("word_{label}"), certs::word_script(bits), "")
}

/// The benchmark corpus: every program carries an NDLAL certificate.
pub fn corpus() -> Vec<NamedProgram> {
    use certs::apply_closed as ap;
    let ar = arithmetic();
    vec![
        church(0),
        church(2),
        church(5),
        succ(),
        ar.add,
        ar.mult,
        ar.square,
        word(&[true, false, true]),
        certified("succ_2", ap(certs::succ(), vec![(certs::church(2), false)]), ""),
        certified("add_2_3", ap(certs::add(), vec![(certs::church(2), false), (certs::church(3), false)]), ""),
        certified("mult_2_3", ap(certs::mult(), vec![(certs::church(2), true), (certs::church(3), false)]), ""),
        certified("square_3", ap(certs::square(), vec![(certs::church(3), false)]), ""),
        certified("poly_2_3_1_at_2", ap(certs::polynomial(2, 3, 1), vec![(certs::church(2), false)]), "2 X^2 + 3 at 2"),
    ]
}

/// Everything in the standard library, including the LAL-only family.
pub fn all() -> Vec<NamedProgram> {
    let mut v = corpus();
    v.push(polynomial(2, 3, 1));
    v.push(counterexample(1));
    v.push(counterexample(2));
    v.push(counterexample(3));
    v
}

pub fn by_name(name: &str) -> Result<NamedProgram, StdlibError> {
    all().into_iter().find(|p| p.name == name).ok_or_else(|| StdlibError::Unknown(name.into()))
}

#[derive(Serialize, Deserialize)]
struct Meta {
    #[serde(default, skip_serializing_if = "Option::is_none", with = "type_string::option")]
    claimed_type: Option<Type>,
    #[serde(default)]
    notes: String,
}

/// Write `name.lam`, `name.cert.json` (and `name.lal.cert.json`, `name.meta.json`) per program.
pub fn write_corpus(dir: &Path, programs: &[NamedProgram]) -> Result<(), StdlibError> {
    fs::create_dir_all(dir)?;
    for p in programs {
        fs::write(dir.join(format!("{}.lam", p.name)), format!("{}\n", p.term))?;
        if let Some(c) = &p.certificate {
            fs::write(dir.join(format!("{}.cert.json", p.name)), c.to_json())?;
        }
        if let Some(c) = &p.lal_certificate {
            fs::write(dir.join(format!("{}.lal.cert.json", p.name)), c.to_json())?;
        }
        let meta = Meta { claimed_type: p.claimed_type.clone(), notes: p.notes.clone() };
        fs::write(dir.join(format!("{}.meta.json", p.name)), serde_json::to_string_pretty(&meta)?)?;
    }
    Ok(())
}

/// Load every `*.lam` file of a directory, sorted by name, with any sibling certificates.
pub fn load_corpus(dir: &Path) -> Result<Vec<NamedProgram>, StdlibError> {
    let mut names: Vec<String> = fs::read_dir(dir)?
        .filter_map(|e| e.ok())
        .filter_map(|e| e.file_name().to_str().and_then(|s| s.strip_suffix(".lam")).map(String::from))
        .collect();
    names.sort();
    names.iter().map(|n| load_program(dir, n)).collect()
}

pub fn load_program(dir: &Path, name: &str) -> Result<NamedProgram, StdlibError> {
    let term: Term = fs::read_to_string(dir.join(format!("{name}.lam")))?.trim().parse()?;
    let read_cert = |suffix: &str| -> Result<Option<DerivScript>, StdlibError> {
        let path = dir.join(format!("{name}{suffix}"));
        if path.exists() {
            Ok(Some(DerivScript::from_json(&fs::read_to_string(path)?)?))
        } else {
            Ok(None)
        }
    };
    let meta_path = dir.join(format!("{name}.meta.json"));
    let meta: Meta = if meta_path.exists() {
        serde_json::from_str(&fs::read_to_string(meta_path)?)?
    } else {
        Meta { claimed_type: None, notes: String::new() }
    };
    let p = NamedProgram {
        name: name.into(),
        term,
        certificate: read_cert(".cert.json")?,
        lal_certificate: read_cert(".lal.cert.json")?,
        claimed_type: meta.claimed_type,
        notes: meta.notes,
    };
    p.verify()?;
    Ok(p)
}

#[cfg(test)]
mod tests;
