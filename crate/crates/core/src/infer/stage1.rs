//! Abstract types with boolean parameters, the abstract derivation and the
//! `!`-placement conditions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::types::SimpleType;

use super::simple::{NodeKind, SimpleDeriv};
use super::InferError;

pub type Param = u32;

/// `B ::= α | A -> B`
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Basic {
    Atom(String),
    Arrow(Box<AbsType>, Box<Basic>),
}

/// `A ::= a1 .. an B`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbsType {
    pub params: BTreeSet<Param>,
    pub body: Basic,
}

impl AbsType {
    pub fn plain(body: Basic) -> AbsType {
        AbsType { params: BTreeSet::new(), body }
    }
}

impl fmt::Display for Basic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basic::Atom(a) => write!(f, "{a}"),
            Basic::Arrow(a, b) => write!(f, "({a} -> {b})"),
        }
    }
}

impl fmt::Display for AbsType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.params {
            write!(f, "p{p} ")?;
        }
        write!(f, "{}", self.body)
    }
}

/// `lhs = rhs`, each side a disjunction of parameters; `None` is the constant 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub lhs: Vec<Param>,
    pub rhs: Option<Vec<Param>>,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |v: &[Param]| {
            if v.is_empty() {
                "0".to_string()
            } else {
                v.iter().map(|p| format!("p{p}")).collect::<Vec<_>>().join("+")
            }
        };
        match &self.rhs {
            Some(r) => write!(f, "{} = {}", side(&self.lhs), side(r)),
            None => write!(f, "{} = 1", side(&self.lhs)),
        }
    }
}

/// Decorate every arrow argument with a fresh parameter.
pub fn maximal_decoration(t: &SimpleType, next: &mut Param) -> Basic {
    match t {
        SimpleType::Var(a) => Basic::Atom(a.clone()),
        SimpleType::Arrow(a, b) => {
            let p = *next;
            *next += 1;
            let arg = maximal_decoration(a, next);
            let res = maximal_decoration(b, next);
            Basic::Arrow(Box::new(AbsType { params: [p].into(), body: arg }), Box::new(res))
        }
    }
}

/// `U(A1, A2)`; `None` when the shapes differ.
pub fn unify_abstract(a: &AbsType, b: &AbsType) -> Option<Vec<Constraint>> {
    let mut out = Vec::new();
    if a.params != b.params {
        out.push(Constraint { lhs: a.params.iter().copied().collect(), rhs: Some(b.params.iter().copied().collect()) });
    }
    unify_basic(&a.body, &b.body, &mut out)?;
    Some(out)
}

fn unify_basic(a: &Basic, b: &Basic, out: &mut Vec<Constraint>) -> Option<()> {
    match (a, b) {
        (Basic::Atom(x), Basic::Atom(y)) if x == y => Some(()),
        (Basic::Arrow(a1, b1), Basic::Arrow(a2, b2)) => {
            out.extend(unify_abstract(a1, a2)?);
            unify_basic(b1, b2, out)
        }
        _ => None,
    }
}

/// `m(A1, A2)`: same shape, parameters united.
pub fn merge_types(a: &AbsType, b: &AbsType) -> Option<AbsType> {
    Some(AbsType { params: a.params.union(&b.params).copied().collect(), body: merge_basic(&a.body, &b.body)? })
}

fn merge_basic(a: &Basic, b: &Basic) -> Option<Basic> {
    match (a, b) {
        (Basic::Atom(x), Basic::Atom(y)) if x == y => Some(a.clone()),
        (Basic::Arrow(a1, b1), Basic::Arrow(a2, b2)) => {
            Some(Basic::Arrow(Box::new(merge_types(a1, a2)?), Box::new(merge_basic(b1, b2)?)))
        }
        _ => None,
    }
}

/// The abstract derivation over a simply typed tree. Contraction and
/// weakening sit right above the abstraction binding the variable.
#[derive(Clone, Debug)]
pub struct AbstractDeriv {
    pub simple: SimpleDeriv,
    /// Basic type of every node.
    pub types: Vec<Basic>,
    /// Parameter of every abstraction and application node.
    pub node_param: Vec<Option<Param>>,
    /// Type of the bound variable at every abstraction, context parameters included.
    pub binder_types: BTreeMap<usize, AbsType>,
    pub constraints: Vec<Constraint>,
    pub params: u32,
}

impl AbstractDeriv {
    /// Applications whose argument contains `occ` and sits below `binder`.
    pub fn enclosing_args(&self, binder: usize, occ: usize) -> Vec<usize> {
        let tree = &self.simple.tree;
        let mut out = Vec::new();
        let mut child = occ;
        let mut cur = tree.nodes[occ].parent;
        while let Some(p) = cur {
            if p == binder {
                break;
            }
            if let NodeKind::App { arg, .. } = &tree.nodes[p].kind {
                if *arg == child {
                    out.push(p);
                }
            }
            child = p;
            cur = tree.nodes[p].parent;
        }
        out
    }
}

pub fn abstract_derivation(sd: &SimpleDeriv) -> Result<AbstractDeriv, InferError> {
    let tree = &sd.tree;
    let n = tree.nodes.len();
    let mut next: Param = 0;
    let mut node_param = vec![None; n];
    for (i, node) in tree.nodes.iter().enumerate() {
        if !matches!(node.kind, NodeKind::Var { .. }) {
            node_param[i] = Some(next);
            next += 1;
        }
    }
    let mut types: Vec<Option<Basic>> = vec![None; n];
    for (i, node) in tree.nodes.iter().enumerate() {
        if matches!(node.kind, NodeKind::Var { .. }) {
            types[i] = Some(maximal_decoration(&sd.types[i], &mut next));
        }
    }
    let mut ad = AbstractDeriv {
        simple: sd.clone(),
        types: Vec::new(),
        node_param,
        binder_types: BTreeMap::new(),
        constraints: Vec::new(),
        params: 0,
    };
    // children before parents
    let mut order = tree.subtree(tree.root);
    order.reverse();
    let shape = |what: &str| InferError::Internal(format!("abstract derivation: {what}"));
    for i in order {
        match &tree.nodes[i].kind {
            NodeKind::Var { .. } => {}
            NodeKind::Abs { body, .. } => {
                let occs = tree.occurrences(i);
                let mut env: Option<AbsType> = None;
                for &o in &occs {
                    let mut a = AbsType::plain(types[o].clone().ok_or_else(|| shape("variable"))?);
                    for p in ad.enclosing_args(i, o) {
                        a.params.insert(ad.node_param[p].expect("application parameter"));
                    }
                    env = Some(match env {
                        None => a,
                        Some(e) => merge_types(&e, &a).ok_or_else(|| shape("merge"))?,
                    });
                }
                let a = ad.node_param[i].expect("abstraction parameter");
                if occs.len() >= 2 {
                    ad.constraints.push(Constraint { lhs: vec![a], rhs: None });
                }
                let env = match env {
                    Some(e) => e,
                    None => {
                        let SimpleType::Arrow(dom, _) = &sd.types[i] else { return Err(shape("abstraction type")) };
                        AbsType::plain(maximal_decoration(dom, &mut next))
                    }
                };
                ad.binder_types.insert(i, env.clone());
                let mut arg = env;
                arg.params.insert(a);
                let res = types[*body].clone().ok_or_else(|| shape("body"))?;
                types[i] = Some(Basic::Arrow(Box::new(arg), Box::new(res)));
            }
            NodeKind::App { fun, arg } => {
                let Some(Basic::Arrow(a1, b1)) = types[*fun].clone() else { return Err(shape("function type")) };
                let mut a2 = AbsType::plain(types[*arg].clone().ok_or_else(|| shape("argument"))?);
                a2.params.insert(ad.node_param[i].expect("application parameter"));
                let cs = unify_abstract(&a1, &a2).ok_or_else(|| shape("U"))?;
                ad.constraints.extend(cs);
                types[i] = Some(*b1);
            }
        }
    }
    ad.types = types.into_iter().map(|t| t.expect("typed")).collect();
    ad.params = next;
    Ok(ad)
}

/// The constraint system `C` of an abstract derivation.
pub fn constraints(ad: &AbstractDeriv) -> &[Constraint] {
    &ad.constraints
}

struct Solver<'a> {
    cs: &'a [Constraint],
    by_param: Vec<Vec<usize>>,
    n: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Val {
    Zero,
    One,
    Open,
}

impl Solver<'_> {
    fn side(&self, ps: &[Param], asg: &[Option<bool>]) -> Val {
        let mut open = false;
        for &p in ps {
            match asg[p as usize] {
                Some(true) => return Val::One,
                None => open = true,
                _ => {}
            }
        }
        if open {
            Val::Open
        } else {
            Val::Zero
        }
    }

    /// Unit propagation; false on conflict.
    fn propagate(&self, asg: &mut [Option<bool>], mut queue: Vec<usize>) -> bool {
        while let Some(ci) = queue.pop() {
            let c = &self.cs[ci];
            let l = self.side(&c.lhs, asg);
            let r = match &c.rhs {
                Some(r) => self.side(r, asg),
                None => Val::One,
            };
            let set = |ps: &[Param], v: bool, asg: &mut [Option<bool>], queue: &mut Vec<usize>| {
                for &p in ps {
                    if asg[p as usize].is_none() {
                        asg[p as usize] = Some(v);
                        queue.extend(self.by_param[p as usize].iter().copied());
                    }
                }
            };
            match (l, r) {
                (Val::Zero, Val::One) | (Val::One, Val::Zero) => return false,
                (Val::Zero, Val::Open) => set(c.rhs.as_deref().unwrap_or(&[]), false, asg, &mut queue),
                (Val::Open, Val::Zero) => set(&c.lhs, false, asg, &mut queue),
                (Val::One, Val::Open) | (Val::Open, Val::One) => {
                    let ps: &[Param] = if l == Val::Open { &c.lhs } else { c.rhs.as_deref().unwrap_or(&[]) };
                    let open: Vec<Param> = ps.iter().copied().filter(|&p| asg[p as usize].is_none()).collect();
                    if open.len() == 1 {
                        set(&open, true, asg, &mut queue);
                    }
                }
                _ => {}
            }
        }
        true
    }

    fn search(&self, asg: Vec<Option<bool>>, ones_left: usize, out: &mut Vec<Vec<bool>>, max: usize) {
        if out.len() >= max {
            return;
        }
        match asg.iter().position(|v| v.is_none()) {
            None => {
                if ones_left == 0 {
                    out.push(asg.iter().map(|v| v.unwrap_or(false)).collect());
                }
            }
            Some(p) => {
                for v in [false, true] {
                    let mut a = asg.clone();
                    a[p] = Some(v);
                    if !self.propagate(&mut a, self.by_param[p].clone()) {
                        continue;
                    }
                    let used = a.iter().filter(|x| **x == Some(true)).count() - asg.iter().filter(|x| **x == Some(true)).count();
                    if used <= ones_left {
                        self.search(a, ones_left - used, out, max);
                    }
                }
            }
        }
    }
}

/// All solutions of `cs` over `n` parameters, fewest 1s first, at most `max`
/// of them. More than `cap` parameters left free after propagation is an error.
pub fn enumerate_solutions(cs: &[Constraint], n: u32, cap: usize, max: usize) -> Result<Vec<Vec<bool>>, InferError> {
    let n = n as usize;
    let mut by_param = vec![Vec::new(); n];
    for (i, c) in cs.iter().enumerate() {
        for &p in c.lhs.iter().chain(c.rhs.iter().flatten()) {
            by_param[p as usize].push(i);
        }
    }
    let s = Solver { cs, by_param, n };
    let mut start = vec![None; s.n];
    if !s.propagate(&mut start, (0..cs.len()).collect()) {
        return Ok(Vec::new());
    }
    let free = start.iter().filter(|v| v.is_none()).count();
    if free > cap {
        return Err(InferError::Resource(format!("{free} free parameters exceed the cap of {cap}")));
    }
    let mut out = Vec::new();
    for k in 0..=free {
        s.search(start.clone(), k, &mut out, max);
        if out.len() >= max {
            break;
        }
    }
    Ok(out)
}

/// Which `(⇒ i)` and `(⇒ e)` nodes a solution selects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BangDeriv {
    pub phi: Vec<bool>,
    /// Per node: abstraction binding a non-linear variable, or application
    /// with a `!`-boxed argument.
    pub bang: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rejection {
    /// A `(⇒ e)` argument has more than one free variable occurrence.
    CrowdedArgument { node: usize, occurrences: usize },
    /// A variable occurrence lies in two `(⇒ e)` argument environments.
    NestedArgument { occurrence: usize },
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::CrowdedArgument { node, occurrences } => {
                write!(f, "(=> e) argument at node {node} has {occurrences} variable occurrences")
            }
            Rejection::NestedArgument { occurrence } => {
                write!(f, "occurrence at node {occurrence} sits in two (=> e) arguments")
            }
        }
    }
}

fn holds(phi: &[bool], ps: &BTreeSet<Param>) -> bool {
    ps.iter().any(|&p| phi[p as usize])
}

/// Apply a solution and test the two conditions on `(⇒ e)` arguments.
pub fn bang_check(ad: &AbstractDeriv, phi: &[bool]) -> Result<BangDeriv, Rejection> {
    let tree = &ad.simple.tree;
    let mut bang = vec![false; tree.nodes.len()];
    for (i, node) in tree.nodes.iter().enumerate() {
        bang[i] = match &node.kind {
            NodeKind::Var { .. } => false,
            NodeKind::App { .. } => phi[ad.node_param[i].expect("param") as usize],
            NodeKind::Abs { .. } => match &ad.types[i] {
                Basic::Arrow(a, _) => holds(phi, &a.params),
                Basic::Atom(_) => false,
            },
        };
    }
    let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, node) in tree.nodes.iter().enumerate() {
        let NodeKind::App { arg, .. } = &node.kind else { continue };
        if !bang[i] {
            continue;
        }
        let inside: BTreeSet<usize> = tree.subtree(*arg).into_iter().collect();
        let env: Vec<usize> = inside
            .iter()
            .copied()
            .filter(|&m| matches!(&tree.nodes[m].kind, NodeKind::Var { binder, .. } if !inside.contains(binder)))
            .collect();
        if env.len() > 1 {
            return Err(Rejection::CrowdedArgument { node: i, occurrences: env.len() });
        }
        for o in env {
            *seen.entry(o).or_default() += 1;
        }
    }
    if let Some((&o, _)) = seen.iter().find(|(_, &c)| c > 1) {
        return Err(Rejection::NestedArgument { occurrence: o });
    }
    Ok(BangDeriv { phi: phi.to_vec(), bang })
}
