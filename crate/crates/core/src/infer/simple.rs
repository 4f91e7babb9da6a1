//! Term trees with unique binders, and principal simple types.

use std::collections::{BTreeMap, BTreeSet};

use crate::term::{RedexPath, Step, Term};
use crate::types::SimpleType;

use super::InferError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Var { name: String, binder: usize },
    Abs { name: String, body: usize },
    App { fun: usize, arg: usize },
}

#[derive(Clone, Debug)]
pub struct Node {
    pub kind: NodeKind,
    pub parent: Option<usize>,
}

/// The closure `λfv..t` of a term as an arena, binders renamed apart.
#[derive(Clone, Debug)]
pub struct TermTree {
    pub nodes: Vec<Node>,
    pub root: usize,
    /// Free variables of the original term, in closure order.
    pub free: Vec<String>,
    /// Root of the original term inside the closure.
    pub subject: usize,
    pub names: BTreeSet<String>,
}

/// Fresh names of the form `base`, `base1`, `base2`, ...
pub(crate) fn fresh(base: &str, used: &mut BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit() || c == '\'');
    let stem = if stem.is_empty() { "v" } else { stem };
    let mut i = 0usize;
    loop {
        let cand = if i == 0 { stem.to_string() } else { format!("{stem}{i}") };
        if used.insert(cand.clone()) {
            return cand;
        }
        i += 1;
    }
}

impl TermTree {
    pub fn new(t: &Term) -> TermTree {
        let free: Vec<String> = t.free_vars().into_iter().collect();
        let mut tree = TermTree { nodes: Vec::new(), root: 0, free: free.clone(), subject: 0, names: BTreeSet::new() };
        tree.names.extend(free.iter().cloned());
        let mut scope: Vec<(String, usize)> = Vec::new();
        let mut outer = Vec::new();
        for x in &free {
            let id = tree.push(NodeKind::Abs { name: x.clone(), body: usize::MAX }, outer.last().copied());
            outer.push(id);
            scope.push((x.clone(), id));
        }
        let parent = outer.last().copied();
        let subject = tree.build(t, parent, &mut scope);
        for w in outer.windows(2) {
            tree.set_body(w[0], w[1]);
        }
        if let Some(&last) = outer.last() {
            tree.set_body(last, subject);
        }
        tree.root = outer.first().copied().unwrap_or(subject);
        tree.subject = subject;
        tree
    }

    fn push(&mut self, kind: NodeKind, parent: Option<usize>) -> usize {
        self.nodes.push(Node { kind, parent });
        self.nodes.len() - 1
    }

    fn set_body(&mut self, abs: usize, body: usize) {
        if let NodeKind::Abs { body: b, .. } = &mut self.nodes[abs].kind {
            *b = body;
        }
    }

    fn build(&mut self, t: &Term, parent: Option<usize>, scope: &mut Vec<(String, usize)>) -> usize {
        match t {
            Term::Var(x) => {
                let binder = scope.iter().rev().find(|(y, _)| y == x).map(|p| p.1).expect("closed by construction");
                let name = match &self.nodes[binder].kind {
                    NodeKind::Abs { name, .. } => name.clone(),
                    _ => unreachable!(),
                };
                self.push(NodeKind::Var { name, binder }, parent)
            }
            Term::Abs(x, body) => {
                let name = fresh(x, &mut self.names);
                let id = self.push(NodeKind::Abs { name, body: usize::MAX }, parent);
                scope.push((x.clone(), id));
                let b = self.build(body, Some(id), scope);
                scope.pop();
                self.set_body(id, b);
                id
            }
            Term::App(f, a) => {
                let id = self.push(NodeKind::App { fun: usize::MAX, arg: usize::MAX }, parent);
                let fi = self.build(f, Some(id), scope);
                let ai = self.build(a, Some(id), scope);
                self.nodes[id].kind = NodeKind::App { fun: fi, arg: ai };
                id
            }
        }
    }

    pub fn term(&self, n: usize) -> Term {
        match &self.nodes[n].kind {
            NodeKind::Var { name, .. } => Term::Var(name.clone()),
            NodeKind::Abs { name, body } => Term::Abs(name.clone(), Box::new(self.term(*body))),
            NodeKind::App { fun, arg } => Term::App(Box::new(self.term(*fun)), Box::new(self.term(*arg))),
        }
    }

    pub fn children(&self, n: usize) -> Vec<usize> {
        match &self.nodes[n].kind {
            NodeKind::Var { .. } => vec![],
            NodeKind::Abs { body, .. } => vec![*body],
            NodeKind::App { fun, arg } => vec![*fun, *arg],
        }
    }

    /// Nodes of the subtree at `n`, preorder.
    pub fn subtree(&self, n: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![n];
        while let Some(m) = stack.pop() {
            out.push(m);
            let mut cs = self.children(m);
            cs.reverse();
            stack.extend(cs);
        }
        out
    }

    /// Nodes strictly below `top` on the way down to `bottom` (inclusive).
    pub fn path_below(&self, top: usize, bottom: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = bottom;
        while cur != top {
            out.push(cur);
            cur = self.nodes[cur].parent.expect("top is an ancestor");
        }
        out.reverse();
        out
    }

    pub fn occurrences(&self, binder: usize) -> Vec<usize> {
        self.subtree(binder)
            .into_iter()
            .filter(|&m| matches!(&self.nodes[m].kind, NodeKind::Var { binder: b, .. } if *b == binder))
            .collect()
    }

    /// Closure binders, outermost first.
    pub fn closure_binders(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = self.root;
        for _ in 0..self.free.len() {
            out.push(cur);
            if let NodeKind::Abs { body, .. } = &self.nodes[cur].kind {
                cur = *body;
            }
        }
        out
    }

    /// Address of every node of the subject, relative to the subject.
    pub fn paths(&self) -> BTreeMap<usize, RedexPath> {
        let mut out = BTreeMap::new();
        let mut stack = vec![(self.subject, RedexPath::root())];
        while let Some((n, p)) = stack.pop() {
            match &self.nodes[n].kind {
                NodeKind::Var { .. } => {}
                NodeKind::Abs { body, .. } => stack.push((*body, p.child(Step::Body))),
                NodeKind::App { fun, arg } => {
                    stack.push((*fun, p.child(Step::Fun)));
                    stack.push((*arg, p.child(Step::Arg)));
                }
            }
            out.insert(n, p);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum St {
    Var(u32),
    Con(String),
    Arr(Box<St>, Box<St>),
}

#[derive(Default)]
struct Unifier {
    subst: BTreeMap<u32, St>,
    next: u32,
}

impl Unifier {
    fn fresh(&mut self) -> St {
        self.next += 1;
        St::Var(self.next - 1)
    }

    fn walk(&self, t: &St) -> St {
        match t {
            St::Var(v) => match self.subst.get(v) {
                Some(u) => self.walk(u),
                None => t.clone(),
            },
            St::Arr(a, b) => St::Arr(Box::new(self.walk(a)), Box::new(self.walk(b))),
            St::Con(_) => t.clone(),
        }
    }

    fn occurs(&self, v: u32, t: &St) -> bool {
        match self.walk(t) {
            St::Var(w) => v == w,
            St::Arr(a, b) => self.occurs(v, &a) || self.occurs(v, &b),
            St::Con(_) => false,
        }
    }

    fn unify(&mut self, a: &St, b: &St) -> Result<(), String> {
        let (a, b) = (self.walk(a), self.walk(b));
        match (&a, &b) {
            (St::Var(x), St::Var(y)) if x == y => Ok(()),
            (St::Var(x), _) => {
                if self.occurs(*x, &b) {
                    return Err("occurs check".into());
                }
                self.subst.insert(*x, b.clone());
                Ok(())
            }
            (_, St::Var(_)) => self.unify(&b, &a),
            (St::Con(x), St::Con(y)) if x == y => Ok(()),
            (St::Arr(a1, b1), St::Arr(a2, b2)) => {
                self.unify(a1, a2)?;
                self.unify(b1, b2)
            }
            _ => Err("constructor clash".into()),
        }
    }
}

fn rigid(t: &SimpleType) -> St {
    match t {
        SimpleType::Var(a) => St::Con(a.clone()),
        SimpleType::Arrow(a, b) => St::Arr(Box::new(rigid(a)), Box::new(rigid(b))),
    }
}

/// A simply typed tree: one simple type per node.
#[derive(Clone, Debug)]
pub struct SimpleDeriv {
    pub tree: TermTree,
    pub types: Vec<SimpleType>,
}

impl SimpleDeriv {
    /// Type of the subject.
    pub fn ty(&self) -> &SimpleType {
        &self.types[self.tree.subject]
    }

    /// Types of the free variables of the subject.
    pub fn context(&self) -> BTreeMap<String, SimpleType> {
        self.tree
            .closure_binders()
            .into_iter()
            .zip(&self.tree.free)
            .map(|(b, x)| match &self.types[b] {
                SimpleType::Arrow(a, _) => (x.clone(), (**a).clone()),
                _ => unreachable!(),
            })
            .collect()
    }
}

fn type_tree(tree: TermTree, target: Option<&SimpleType>) -> Result<SimpleDeriv, InferError> {
    let mut u = Unifier::default();
    let vars: Vec<St> = (0..tree.nodes.len()).map(|_| u.fresh()).collect();
    for (i, n) in tree.nodes.iter().enumerate() {
        let r = match &n.kind {
            NodeKind::Var { binder, .. } => {
                let a = u.fresh();
                let b = u.fresh();
                u.unify(&vars[*binder], &St::Arr(Box::new(a.clone()), Box::new(b))).and_then(|_| u.unify(&vars[i], &a))
            }
            NodeKind::Abs { body, .. } => {
                let a = u.fresh();
                u.unify(&vars[i], &St::Arr(Box::new(a), Box::new(vars[*body].clone())))
            }
            NodeKind::App { fun, arg } => {
                u.unify(&vars[*fun], &St::Arr(Box::new(vars[*arg].clone()), Box::new(vars[i].clone())))
            }
        };
        r.map_err(|msg| InferError::NotSimplyTypable(format!("{}: {msg}", tree.term(tree.subject))))?;
    }
    if let Some(b) = target {
        u.unify(&vars[tree.subject], &rigid(b))
            .map_err(|_| InferError::NotAnInstance(format!("{b}")))?;
    }
    let mut used: BTreeSet<String> = target.map(|b| b.free_vars()).unwrap_or_default();
    let mut names: BTreeMap<u32, String> = BTreeMap::new();
    let mut order = vec![tree.subject];
    order.extend(0..tree.nodes.len());
    let mut types = vec![SimpleType::var("a"); tree.nodes.len()];
    for &i in &order {
        let t = name_type(&u.walk(&vars[i]), &mut names, &mut used);
        types[i] = t;
    }
    Ok(SimpleDeriv { tree, types })
}

fn name_type(t: &St, names: &mut BTreeMap<u32, String>, used: &mut BTreeSet<String>) -> SimpleType {
    match t {
        St::Con(a) => SimpleType::Var(a.clone()),
        St::Var(v) => {
            if let Some(n) = names.get(v) {
                return SimpleType::Var(n.clone());
            }
            let mut k = 0usize;
            let name = loop {
                let c = (b'a' + (k % 26) as u8) as char;
                let cand = if k < 26 { c.to_string() } else { format!("{c}{}", k / 26) };
                if !used.contains(&cand) {
                    break cand;
                }
                k += 1;
            };
            used.insert(name.clone());
            names.insert(*v, name.clone());
            SimpleType::Var(name)
        }
        St::Arr(a, b) => {
            let a = name_type(a, names, used);
            SimpleType::arrow(a, name_type(b, names, used))
        }
    }
}

/// Principal simple type of `t` together with its typed tree. Free variables
/// are typed through the closure.
pub fn principal_simple_type(t: &Term) -> Result<(SimpleType, SimpleDeriv), InferError> {
    let d = type_tree(TermTree::new(t), None)?;
    Ok((d.ty().clone(), d))
}

/// The simple derivation of `t` specialised to the instance `b` of its
/// principal type.
pub fn simple_at(t: &Term, b: &SimpleType) -> Result<SimpleDeriv, InferError> {
    type_tree(TermTree::new(t), Some(b))
}
