//! DLAL, LAL and simple types, plus typing contexts.
//!
//! DLAL and LAL types share one enum: a DLAL type never contains `!A` and a
//! LAL type never contains `A => B` (see [`Type::is_dlal`], [`Type::is_lal`]).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Var(String),
    /// `A -o B`
    Lin(Box<Type>, Box<Type>),
    /// `A => B`, DLAL only
    Arrow(Box<Type>, Box<Type>),
    /// `!A`, LAL only
    Bang(Box<Type>),
    /// `$A`
    Par(Box<Type>),
    Forall(String, Box<Type>),
}

pub type DlalType = Type;
pub type LalType = Type;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SimpleType {
    Var(String),
    Arrow(Box<SimpleType>, Box<SimpleType>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("type syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("quantified type {0} has no simple erasure")]
    Quantified(String),
    #[error("type {0} uses a connective outside the expected logic")]
    WrongLogic(String),
}

pub fn tvar(a: &str) -> Type {
    Type::Var(a.to_string())
}

pub fn lin(a: Type, b: Type) -> Type {
    Type::Lin(Box::new(a), Box::new(b))
}

pub fn arrow(a: Type, b: Type) -> Type {
    Type::Arrow(Box::new(a), Box::new(b))
}

pub fn bang(a: Type) -> Type {
    Type::Bang(Box::new(a))
}

pub fn par(a: Type) -> Type {
    Type::Par(Box::new(a))
}

/// `$^k A`
pub fn par_n(k: usize, a: Type) -> Type {
    (0..k).fold(a, |t, _| par(t))
}

pub fn forall(a: &str, body: Type) -> Type {
    Type::Forall(a.to_string(), Box::new(body))
}

/// `(A -o A) => $(A -o A)`, the body of the numeral type at `A`.
pub fn nat_at(a: Type) -> Type {
    let endo = lin(a.clone(), a);
    arrow(endo.clone(), par(endo))
}

/// `N = forall a. (a -o a) => $(a -o a)`
pub fn nat() -> Type {
    forall("a", nat_at(tvar("a")))
}

/// `W = forall a. (a -o a) => (a -o a) => $(a -o a)`
pub fn word() -> Type {
    let endo = lin(tvar("a"), tvar("a"));
    forall("a", arrow(endo.clone(), arrow(endo.clone(), par(endo))))
}

fn fresh_tvar(base: &str, avoid: &BTreeSet<String>) -> String {
    let mut c = format!("{base}'");
    while avoid.contains(&c) {
        c.push('\'');
    }
    c
}

impl Type {
    pub fn parse(text: &str) -> Result<Type, TypeError> {
        text.parse()
    }

    pub fn is_dlal(&self) -> bool {
        match self {
            Type::Var(_) => true,
            Type::Bang(_) => false,
            Type::Lin(a, b) | Type::Arrow(a, b) => a.is_dlal() && b.is_dlal(),
            Type::Par(a) | Type::Forall(_, a) => a.is_dlal(),
        }
    }

    pub fn is_lal(&self) -> bool {
        match self {
            Type::Var(_) => true,
            Type::Arrow(..) => false,
            Type::Lin(a, b) => a.is_lal() && b.is_lal(),
            Type::Bang(a) | Type::Par(a) | Type::Forall(_, a) => a.is_lal(),
        }
    }

    pub fn is_propositional(&self) -> bool {
        match self {
            Type::Var(_) => true,
            Type::Forall(..) => false,
            Type::Lin(a, b) | Type::Arrow(a, b) => a.is_propositional() && b.is_propositional(),
            Type::Bang(a) | Type::Par(a) => a.is_propositional(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Type::Var(a) => {
                if !bound.contains(a) {
                    out.insert(a.clone());
                }
            }
            Type::Lin(a, b) | Type::Arrow(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Type::Bang(a) | Type::Par(a) => a.collect_free(bound, out),
            Type::Forall(x, a) => {
                bound.push(x.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Capture-avoiding `self[b/a]`.
    pub fn substitute(&self, a: &str, b: &Type) -> Type {
        match self {
            Type::Var(x) => {
                if x == a {
                    b.clone()
                } else {
                    self.clone()
                }
            }
            Type::Lin(x, y) => lin(x.substitute(a, b), y.substitute(a, b)),
            Type::Arrow(x, y) => arrow(x.substitute(a, b), y.substitute(a, b)),
            Type::Bang(x) => bang(x.substitute(a, b)),
            Type::Par(x) => par(x.substitute(a, b)),
            Type::Forall(x, body) => {
                if x == a || !body.free_vars().contains(a) {
                    return self.clone();
                }
                let fv_b = b.free_vars();
                if fv_b.contains(x) {
                    let mut avoid = fv_b;
                    avoid.extend(body.free_vars());
                    avoid.insert(a.to_string());
                    let x2 = fresh_tvar(x, &avoid);
                    let body2 = body.substitute(x, &tvar(&x2));
                    forall(&x2, body2.substitute(a, b))
                } else {
                    forall(x, body.substitute(a, b))
                }
            }
        }
    }

    pub fn alpha_eq(&self, other: &Type) -> bool {
        fn go<'a>(s: &'a Type, t: &'a Type, es: &mut Vec<&'a str>, et: &mut Vec<&'a str>) -> bool {
            match (s, t) {
                (Type::Var(x), Type::Var(y)) => {
                    match (es.iter().rposition(|v| *v == x), et.iter().rposition(|v| *v == y)) {
                        (Some(i), Some(j)) => i == j,
                        (None, None) => x == y,
                        _ => false,
                    }
                }
                (Type::Lin(a, b), Type::Lin(c, d)) | (Type::Arrow(a, b), Type::Arrow(c, d)) => {
                    go(a, c, es, et) && go(b, d, es, et)
                }
                (Type::Bang(a), Type::Bang(c)) | (Type::Par(a), Type::Par(c)) => go(a, c, es, et),
                (Type::Forall(x, a), Type::Forall(y, c)) => {
                    es.push(x);
                    et.push(y);
                    let r = go(a, c, es, et);
                    es.pop();
                    et.pop();
                    r
                }
                _ => false,
            }
        }
        go(self, other, &mut Vec::new(), &mut Vec::new())
    }

    /// `(A => B)* = !A* -o B*`, every other connective commutes.
    pub fn star_translate(&self) -> Type {
        match self {
            Type::Var(_) => self.clone(),
            Type::Lin(a, b) => lin(a.star_translate(), b.star_translate()),
            Type::Arrow(a, b) => lin(bang(a.star_translate()), b.star_translate()),
            Type::Bang(a) => bang(a.star_translate()),
            Type::Par(a) => par(a.star_translate()),
            Type::Forall(x, a) => forall(x, a.star_translate()),
        }
    }

    /// The DLAL preimage under [`Type::star_translate`], if any.
    pub fn dlal_preimage(&self) -> Option<Type> {
        match self {
            Type::Var(_) => Some(self.clone()),
            Type::Lin(a, b) => match &**a {
                Type::Bang(inner) => Some(arrow(inner.dlal_preimage()?, b.dlal_preimage()?)),
                _ => Some(lin(a.dlal_preimage()?, b.dlal_preimage()?)),
            },
            Type::Arrow(..) | Type::Bang(_) => None,
            Type::Par(a) => Some(par(a.dlal_preimage()?)),
            Type::Forall(x, a) => Some(forall(x, a.dlal_preimage()?)),
        }
    }

    pub fn in_dlal_star(&self) -> bool {
        self.dlal_preimage().is_some()
    }

    /// Forget modalities and arrow kinds. Works for both DLAL and LAL types.
    pub fn erase_to_simple(&self) -> Result<SimpleType, TypeError> {
        match self {
            Type::Var(a) => Ok(SimpleType::Var(a.clone())),
            Type::Lin(a, b) | Type::Arrow(a, b) => Ok(SimpleType::arrow(a.erase_to_simple()?, b.erase_to_simple()?)),
            Type::Bang(a) | Type::Par(a) => a.erase_to_simple(),
            Type::Forall(..) => Err(TypeError::Quantified(self.to_string())),
        }
    }

    /// Number of `$` wrappers at the top.
    pub fn par_depth(&self) -> usize {
        match self {
            Type::Par(a) => 1 + a.par_depth(),
            _ => 0,
        }
    }
}

impl SimpleType {
    pub fn var(a: &str) -> SimpleType {
        SimpleType::Var(a.to_string())
    }

    pub fn arrow(a: SimpleType, b: SimpleType) -> SimpleType {
        SimpleType::Arrow(Box::new(a), Box::new(b))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        fn go(t: &SimpleType, out: &mut BTreeSet<String>) {
            match t {
                SimpleType::Var(a) => {
                    out.insert(a.clone());
                }
                SimpleType::Arrow(a, b) => {
                    go(a, out);
                    go(b, out);
                }
            }
        }
        go(self, &mut out);
        out
    }

    /// Equality up to a bijective renaming of type variables.
    pub fn equiv(&self, other: &SimpleType) -> bool {
        fn go(s: &SimpleType, t: &SimpleType, fwd: &mut BTreeMap<String, String>, bwd: &mut BTreeMap<String, String>) -> bool {
            match (s, t) {
                (SimpleType::Var(a), SimpleType::Var(b)) => {
                    let f = fwd.entry(a.clone()).or_insert_with(|| b.clone()).clone();
                    let g = bwd.entry(b.clone()).or_insert_with(|| a.clone()).clone();
                    &f == b && &g == a
                }
                (SimpleType::Arrow(a, b), SimpleType::Arrow(c, d)) => go(a, c, fwd, bwd) && go(b, d, fwd, bwd),
                _ => false,
            }
        }
        go(self, other, &mut BTreeMap::new(), &mut BTreeMap::new())
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleType::Var(a) => write!(f, "{a}"),
            SimpleType::Arrow(a, b) => match **a {
                SimpleType::Arrow(..) => write!(f, "({a}) -> {b}"),
                _ => write!(f, "{a} -> {b}"),
            },
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn operand(t: &Type, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                Type::Lin(..) | Type::Arrow(..) | Type::Forall(..) => write!(f, "({t})"),
                _ => write!(f, "{t}"),
            }
        }
        fn unary(sym: &str, t: &Type, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                Type::Lin(..) | Type::Arrow(..) | Type::Forall(..) => write!(f, "{sym} ({t})"),
                _ => write!(f, "{sym}{t}"),
            }
        }
        match self {
            Type::Var(a) => write!(f, "{a}"),
            Type::Lin(a, b) => {
                operand(a, f)?;
                write!(f, " -o {b}")
            }
            Type::Arrow(a, b) => {
                operand(a, f)?;
                write!(f, " => {b}")
            }
            Type::Bang(a) => unary("!", a, f),
            Type::Par(a) => unary("$", a, f),
            Type::Forall(x, a) => write!(f, "forall {x}. {a}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum TTok {
    Ident(String),
    Lin,
    Arrow,
    SimpleArrow,
    Bang,
    Par,
    Forall,
    Dot,
    LParen,
    RParen,
}

fn ttokenize(s: &str) -> Result<Vec<(usize, TTok)>, TypeError> {
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let at = |i: usize, c: char| chars.get(i).map(|p| p.1) == Some(c);
    while i < chars.len() {
        let (pos, c) = chars[i];
        let (tok, len) = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '-' if at(i + 1, 'o') && !chars.get(i + 2).is_some_and(|p| crate::term::is_ident_char(p.1)) => (TTok::Lin, 2),
            '-' if at(i + 1, '>') => (TTok::SimpleArrow, 2),
            '=' if at(i + 1, '>') => (TTok::Arrow, 2),
            '⊸' => (TTok::Lin, 1),
            '⇒' => (TTok::Arrow, 1),
            '→' => (TTok::SimpleArrow, 1),
            '!' => (TTok::Bang, 1),
            '$' | '§' => (TTok::Par, 1),
            '∀' => (TTok::Forall, 1),
            '.' => (TTok::Dot, 1),
            '(' => (TTok::LParen, 1),
            ')' => (TTok::RParen, 1),
            c if c.is_alphanumeric() || c == '_' => {
                let start = i;
                while i < chars.len() && crate::term::is_ident_char(chars[i].1) {
                    i += 1;
                }
                let word: String = chars[start..i].iter().map(|p| p.1).collect();
                out.push((pos, if word == "forall" { TTok::Forall } else { TTok::Ident(word) }));
                continue;
            }
            other => {
                return Err(TypeError::Syntax { pos, msg: format!("unexpected character '{other}'") });
            }
        };
        out.push((pos, tok));
        i += len;
    }
    Ok(out)
}

struct TParser {
    toks: Vec<(usize, TTok)>,
    i: usize,
    end: usize,
    simple: bool,
}

impl TParser {
    fn peek(&self) -> Option<&TTok> {
        self.toks.get(self.i).map(|p| &p.1)
    }

    fn err<T>(&self, msg: &str) -> Result<T, TypeError> {
        let pos = self.toks.get(self.i).map_or(self.end, |p| p.0);
        Err(TypeError::Syntax { pos, msg: msg.to_string() })
    }

    fn ty(&mut self) -> Result<Type, TypeError> {
        if self.peek() == Some(&TTok::Forall) {
            return self.quantified();
        }
        let left = self.unary()?;
        match self.peek() {
            Some(TTok::Lin) if !self.simple => {
                self.i += 1;
                Ok(lin(left, self.ty()?))
            }
            Some(TTok::Arrow) if !self.simple => {
                self.i += 1;
                Ok(arrow(left, self.ty()?))
            }
            Some(TTok::SimpleArrow) if self.simple => {
                self.i += 1;
                Ok(lin(left, self.ty()?))
            }
            _ => Ok(left),
        }
    }

    fn quantified(&mut self) -> Result<Type, TypeError> {
        if self.simple {
            return self.err("quantifier in a simple type");
        }
        self.i += 1;
        let Some(TTok::Ident(x)) = self.peek().cloned() else {
            return self.err("expected a type variable after forall");
        };
        self.i += 1;
        if self.peek() != Some(&TTok::Dot) {
            return self.err("expected '.'");
        }
        self.i += 1;
        Ok(forall(&x, self.ty()?))
    }

    fn unary(&mut self) -> Result<Type, TypeError> {
        match self.peek().cloned() {
            Some(TTok::Bang) if !self.simple => {
                self.i += 1;
                Ok(bang(self.unary()?))
            }
            Some(TTok::Par) if !self.simple => {
                self.i += 1;
                Ok(par(self.unary()?))
            }
            Some(TTok::Forall) => self.quantified(),
            Some(TTok::Ident(x)) => {
                self.i += 1;
                Ok(tvar(&x))
            }
            Some(TTok::LParen) => {
                self.i += 1;
                let t = self.ty()?;
                if self.peek() != Some(&TTok::RParen) {
                    return self.err("expected ')'");
                }
                self.i += 1;
                Ok(t)
            }
            _ => self.err("expected a type"),
        }
    }
}

fn parse_with(s: &str, simple: bool) -> Result<Type, TypeError> {
    let mut p = TParser { toks: ttokenize(s)?, i: 0, end: s.len(), simple };
    let t = p.ty()?;
    if p.i != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(t)
}

impl FromStr for Type {
    type Err = TypeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_with(s, false)
    }
}

impl FromStr for SimpleType {
    type Err = TypeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_with(s, true)?.erase_to_simple()
    }
}

/// Serde adapter storing a type as its concrete syntax.
pub mod type_string {
    use super::Type;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(t: &Type, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&t.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Type, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }

    pub mod option {
        use super::super::Type;
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(t: &Option<Type>, s: S) -> Result<S::Ok, S::Error> {
            match t {
                Some(t) => s.serialize_some(&t.to_string()),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Type>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|s| s.parse().map_err(serde::de::Error::custom))
                .transpose()
        }
    }
}

/// A Δ-zone entry: a plain type or a discharged `[A]$`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinEntry {
    pub ty: Type,
    pub discharged: bool,
}

/// `Γ ; Δ` with disjoint zones.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DualContext {
    pub nonlinear: BTreeMap<String, Type>,
    pub linear: BTreeMap<String, LinEntry>,
}

impl DualContext {
    pub fn contains(&self, x: &str) -> bool {
        self.nonlinear.contains_key(x) || self.linear.contains_key(x)
    }

    pub fn vars(&self) -> BTreeSet<String> {
        self.nonlinear.keys().chain(self.linear.keys()).cloned().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.nonlinear.is_empty() && self.linear.is_empty()
    }

    pub fn has_discharged(&self) -> bool {
        self.linear.values().any(|e| e.discharged)
    }

    pub fn free_type_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for t in self.nonlinear.values() {
            out.extend(t.free_vars());
        }
        for e in self.linear.values() {
            out.extend(e.ty.free_vars());
        }
        out
    }

    pub fn map_types(&self, f: impl Fn(&Type) -> Type) -> DualContext {
        DualContext {
            nonlinear: self.nonlinear.iter().map(|(k, v)| (k.clone(), f(v))).collect(),
            linear: self
                .linear
                .iter()
                .map(|(k, e)| (k.clone(), LinEntry { ty: f(&e.ty), discharged: e.discharged }))
                .collect(),
        }
    }

    /// Entry-wise α-equivalence.
    pub fn alpha_eq(&self, other: &DualContext) -> bool {
        self.nonlinear.len() == other.nonlinear.len()
            && self.linear.len() == other.linear.len()
            && self.nonlinear.iter().all(|(k, v)| other.nonlinear.get(k).is_some_and(|w| v.alpha_eq(w)))
            && self
                .linear
                .iter()
                .all(|(k, e)| other.linear.get(k).is_some_and(|f| e.discharged == f.discharged && e.ty.alpha_eq(&f.ty)))
    }
}

impl fmt::Display for DualContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.nonlinear.iter().map(|(k, v)| format!("{k}:{v}")).collect();
        let d: Vec<String> = self
            .linear
            .iter()
            .map(|(k, e)| if e.discharged { format!("{k}:[{}]$", e.ty) } else { format!("{k}:{}", e.ty) })
            .collect();
        write!(f, "{}; {}", g.join(", "), d.join(", "))
    }
}

/// Marks on a LAL context entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mark {
    Proper,
    /// `[A]!`
    Bang,
    /// `[A]$`
    Par,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LalEntry {
    pub ty: Type,
    pub mark: Mark,
}

/// Single-zone LAL context.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LalContext(pub BTreeMap<String, LalEntry>);

impl LalContext {
    pub fn has_discharged(&self) -> bool {
        self.0.values().any(|e| e.mark != Mark::Proper)
    }

    pub fn free_type_vars(&self) -> BTreeSet<String> {
        self.0.values().flat_map(|e| e.ty.free_vars()).collect()
    }

    pub fn alpha_eq(&self, other: &LalContext) -> bool {
        self.0.len() == other.0.len()
            && self.0.iter().all(|(k, e)| other.0.get(k).is_some_and(|f| e.mark == f.mark && e.ty.alpha_eq(&f.ty)))
    }
}

impl fmt::Display for LalContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(k, e)| match e.mark {
                Mark::Proper => format!("{k}:{}", e.ty),
                Mark::Bang => format!("{k}:[{}]!", e.ty),
                Mark::Par => format!("{k}:[{}]$", e.ty),
            })
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ty(s: &str) -> Type {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_print() {
        let n = ty("forall a. (a -o a) => $(a -o a)");
        assert_eq!(n, nat());
        assert_eq!(n.to_string(), "forall a. (a -o a) => $ (a -o a)");
        assert_eq!(ty("a -o b -o c"), lin(tvar("a"), lin(tvar("b"), tvar("c"))));
        assert_eq!(ty("$$a"), par_n(2, tvar("a")));
        assert_eq!(ty("!a -o a"), lin(bang(tvar("a")), tvar("a")));
        assert!(Type::parse("a -o").is_err());
        assert!(Type::parse("forall . a").is_err());
    }

    #[test]
    fn star_translation() {
        assert_eq!(tvar("a").star_translate(), tvar("a"));
        assert_eq!(nat().star_translate(), ty("forall a. !(a -o a) -o $(a -o a)"));
        let s = par(lin(tvar("a"), tvar("a")));
        assert_eq!(s.star_translate(), s);
    }

    #[test]
    fn star_preimage() {
        assert_eq!(ty("!a -o a").dlal_preimage(), Some(ty("a => a")));
        assert!(!ty("a -o !a").in_dlal_star());
        assert!(!ty("!!a -o a").in_dlal_star());
    }

    #[test]
    fn erasure() {
        assert_eq!(ty("$a").erase_to_simple().unwrap(), SimpleType::var("a"));
        assert_eq!(
            nat_at(tvar("a")).erase_to_simple().unwrap(),
            "(a -> a) -> a -> a".parse::<SimpleType>().unwrap()
        );
        assert!(matches!(ty("forall a. a").erase_to_simple(), Err(TypeError::Quantified(_))));
    }

    #[test]
    fn substitution() {
        assert_eq!(tvar("a").substitute("a", &ty("b -o b")), ty("b -o b"));
        assert_eq!(ty("forall a. a").substitute("a", &tvar("b")), ty("forall a. a"));
        let w = ty("b -o b");
        let inst = nat_at(tvar("a")).substitute("a", &w);
        assert_eq!(inst, ty("((b -o b) -o b -o b) => $((b -o b) -o b -o b)"));
        let capt = ty("forall b. a -o b").substitute("a", &tvar("b"));
        assert!(capt.alpha_eq(&ty("forall c. b -o c")));
    }

    #[test]
    fn type_alpha_eq() {
        assert!(ty("forall a. a -o a").alpha_eq(&ty("forall b. b -o b")));
        assert!(!ty("forall a. a -o b").alpha_eq(&ty("forall b. b -o b")));
    }

    #[test]
    fn simple_equiv() {
        let a: SimpleType = "(a -> a) -> a -> a".parse().unwrap();
        let b: SimpleType = "(x -> x) -> x -> x".parse().unwrap();
        let c: SimpleType = "(x -> y) -> x -> x".parse().unwrap();
        assert!(a.equiv(&b));
        assert!(!a.equiv(&c));
    }
}
