//! Placement of `§` boxes over a `!`-decorated derivation.
//!
//! Every node of the tree gets a level (the number of boxes around it) and
//! every position of every type gets an absolute level. Typing, box nesting
//! and variable discipline then reduce to difference constraints `x >= y + c`,
//! whose least solution is computed by relaxation. Reading off a derivation
//! from a solution opens a box wherever the level goes up along an edge, and
//! feeds a door wherever it goes down.

use std::collections::{BTreeMap, BTreeSet};

use crate::deriv::{bang_e, bang_i, cntr, id, lin_e, lin_i, par_e, par_i_owned, weak, DerivScript, Rule};
use crate::types::{arrow, lin, par_n, tvar, Mark, Type};

use super::simple::{fresh, NodeKind, TermTree};
use super::stage1::{AbstractDeriv, BangDeriv, Basic};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Sk {
    Atom(String),
    Arrow { bang: bool, arg: usize, res: usize },
}

/// Type skeletons with `⊸`/`⇒` fixed, one level variable per position, and
/// the difference constraints tying them to node levels.
#[derive(Clone, Debug)]
pub struct StratSkeleton {
    sk: Vec<Sk>,
    uf: Vec<usize>,
    node_skel: Vec<usize>,
    binder_skel: BTreeMap<usize, usize>,
    nodes: usize,
    edges: Vec<(usize, usize, i64)>,
    cap: i64,
}

/// A solved placement.
#[derive(Clone, Debug)]
pub struct Placement {
    pub ty: Type,
    pub script: DerivScript,
    /// Level of every node of the closure tree.
    pub levels: Vec<i64>,
}

impl StratSkeleton {
    fn find(&self, mut x: usize) -> usize {
        while self.uf[x] != x {
            x = self.uf[x];
        }
        x
    }

    fn skel_of(&mut self, b: &Basic, phi: &[bool]) -> usize {
        let s = match b {
            Basic::Atom(a) => Sk::Atom(a.clone()),
            Basic::Arrow(a, r) => {
                let bang = a.params.iter().any(|&p| phi[p as usize]);
                let arg = self.skel_of(&a.body, phi);
                let res = self.skel_of(r, phi);
                Sk::Arrow { bang, arg, res }
            }
        };
        self.sk.push(s);
        self.uf.push(self.uf.len());
        self.sk.len() - 1
    }

    fn unify(&mut self, a: usize, b: usize) -> Result<(), String> {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return Ok(());
        }
        match (self.sk[a].clone(), self.sk[b].clone()) {
            (Sk::Atom(x), Sk::Atom(y)) if x == y => {
                self.uf[b] = a;
                Ok(())
            }
            (Sk::Arrow { bang: k1, arg: a1, res: r1 }, Sk::Arrow { bang: k2, arg: a2, res: r2 }) if k1 == k2 => {
                self.uf[b] = a;
                self.unify(a1, a2)?;
                self.unify(r1, r2)
            }
            _ => Err("arrow kinds disagree".into()),
        }
    }

    fn lv(&self, n: usize) -> usize {
        self.sk.len() + n
    }

    fn zero(&self) -> usize {
        self.sk.len() + self.nodes
    }

    fn ge(&mut self, x: usize, y: usize, c: i64) {
        self.edges.push((x, y, c));
    }

    fn eq(&mut self, x: usize, y: usize) {
        self.ge(x, y, 0);
        self.ge(y, x, 0);
    }

    /// Skeletons and constraints for one `!`-decoration.
    pub fn new(ad: &AbstractDeriv, bd: &BangDeriv, level_cap: u32) -> Result<StratSkeleton, String> {
        let tree = &ad.simple.tree;
        let mut s = StratSkeleton {
            sk: Vec::new(),
            uf: Vec::new(),
            node_skel: Vec::new(),
            binder_skel: BTreeMap::new(),
            nodes: tree.nodes.len(),
            edges: Vec::new(),
            cap: level_cap as i64,
        };
        for t in &ad.types {
            let id = s.skel_of(t, &bd.phi);
            s.node_skel.push(id);
        }
        for (i, node) in tree.nodes.iter().enumerate() {
            match &node.kind {
                NodeKind::Abs { body, .. } => {
                    let Sk::Arrow { bang, arg, res } = s.sk[s.node_skel[i]].clone() else { return Err("abstraction".into()) };
                    if bang != bd.bang[i] {
                        return Err("abstraction kind".into());
                    }
                    s.binder_skel.insert(i, arg);
                    s.unify(res, s.node_skel[*body])?;
                }
                NodeKind::App { fun, arg } => {
                    let Sk::Arrow { bang, arg: x, res } = s.sk[s.node_skel[*fun]].clone() else {
                        return Err("application".into());
                    };
                    if bang != bd.bang[i] {
                        return Err("application kind".into());
                    }
                    s.unify(x, s.node_skel[*arg])?;
                    s.unify(res, s.node_skel[i])?;
                }
                NodeKind::Var { .. } => {}
            }
        }
        for (i, node) in tree.nodes.iter().enumerate() {
            if let NodeKind::Var { binder, .. } = &node.kind {
                s.unify(s.node_skel[i], s.binder_skel[binder])?;
            }
        }
        s.constrain(ad, bd);
        let mut edges: Vec<(usize, usize, i64)> = s.edges.iter().map(|&(x, y, c)| (s.canon(x), s.canon(y), c)).collect();
        edges.sort_unstable();
        edges.dedup();
        s.edges = edges;
        Ok(s)
    }

    fn constrain(&mut self, ad: &AbstractDeriv, bd: &BangDeriv) {
        let tree = &ad.simple.tree;
        for i in 0..self.sk.len() {
            if let Sk::Arrow { bang, arg, res } = self.sk[i].clone() {
                self.ge(arg, i, bang as i64);
                self.ge(res, i, 0);
            }
        }
        let z = self.zero();
        for v in 0..z {
            self.ge(v, z, 0);
            self.ge(z, v, -self.cap);
        }
        for (i, node) in tree.nodes.iter().enumerate() {
            let (li, si) = (self.lv(i), self.node_skel[i]);
            self.ge(si, li, 0);
            match &node.kind {
                NodeKind::Abs { .. } => self.eq(si, li),
                NodeKind::App { fun, arg } => {
                    self.eq(self.node_skel[*fun], li);
                    if bd.bang[i] {
                        for v in tree.subtree(*arg) {
                            self.ge(self.lv(v), li, 1);
                        }
                    }
                }
                NodeKind::Var { binder, .. } => {
                    let lb = self.lv(*binder);
                    for v in tree.path_below(*binder, i) {
                        self.ge(self.lv(v), lb, 0);
                    }
                    if bd.bang[*binder] {
                        self.ge(li, lb, 1);
                        for p in ad.enclosing_args(*binder, i) {
                            if bd.bang[p] {
                                self.ge(lb, self.lv(p), 0);
                            }
                        }
                    }
                }
            }
        }
        for c in tree.closure_binders() {
            self.ge(z, self.lv(c), 0);
        }
    }

    /// Least solution of the constraints plus `extra`, if any within the cap.
    fn solve(&self, extra: &[(usize, usize, i64)]) -> Option<Vec<i64>> {
        let z = self.zero();
        let mut val = vec![0i64; z + 1];
        loop {
            let mut changed = false;
            for &(x, y, c) in self.edges.iter().chain(extra) {
                if val[x] < val[y] + c {
                    val[x] = val[y] + c;
                    changed = true;
                }
            }
            if val[z] != 0 {
                return None;
            }
            if !changed {
                return Some(val);
            }
        }
    }

    fn canon(&self, v: usize) -> usize {
        if v < self.sk.len() {
            self.find(v)
        } else {
            v
        }
    }

    fn ty(&self, s: usize, base: i64, val: &[i64]) -> Result<Type, String> {
        let r = self.find(s);
        let here = val[r];
        if here < base {
            return Err(format!("negative exponent at skeleton {r}"));
        }
        let content = match &self.sk[r] {
            Sk::Atom(a) => tvar(a),
            Sk::Arrow { bang, arg, res } => {
                let a = self.ty(*arg, here + *bang as i64, val)?;
                let b = self.ty(*res, here, val)?;
                if *bang {
                    arrow(a, b)
                } else {
                    lin(a, b)
                }
            }
        };
        Ok(par_n((here - base) as usize, content))
    }

    /// Positions of the subject type in preorder: `(position, parent, offset)`,
    /// the root's parent being the zero variable.
    fn positions(&self, subject: usize) -> Vec<(usize, usize, i64)> {
        let mut out = Vec::new();
        let mut stack = vec![(self.node_skel[subject], self.zero(), 0i64)];
        while let Some((s, parent, off)) = stack.pop() {
            let r = self.find(s);
            out.push((r, parent, off));
            if let Sk::Arrow { bang, arg, res } = &self.sk[r] {
                stack.push((*res, r, 0));
                stack.push((*arg, r, *bang as i64));
            }
        }
        out
    }

    /// Constraints pinning the subject type to `target`, when shapes agree.
    fn pin(&self, subject: usize, target: &Type) -> Option<Vec<(usize, usize, i64)>> {
        fn go(s: &StratSkeleton, sk: usize, parent: usize, off: i64, t: &Type, out: &mut Vec<(usize, usize, i64)>) -> Option<()> {
            let mut e = 0i64;
            let mut t = t;
            while let Type::Par(inner) = t {
                e += 1;
                t = inner;
            }
            let r = s.find(sk);
            out.push((r, parent, off + e));
            out.push((parent, r, -(off + e)));
            match (&s.sk[r], t) {
                (Sk::Atom(_), Type::Var(_)) => Some(()),
                (Sk::Arrow { bang: false, arg, res }, Type::Lin(a, b)) => {
                    go(s, *arg, r, 0, a, out)?;
                    go(s, *res, r, 0, b, out)
                }
                (Sk::Arrow { bang: true, arg, res }, Type::Arrow(a, b)) => {
                    go(s, *arg, r, 1, a, out)?;
                    go(s, *res, r, 0, b, out)
                }
                _ => None,
            }
        }
        let mut out = Vec::new();
        go(self, self.node_skel[subject], self.zero(), 0, target, &mut out)?;
        Some(out)
    }
}

enum Pending {
    Door { y: String, node: usize },
    Occ { node: usize, gamma: bool },
}

struct Builder<'a> {
    tree: &'a TermTree,
    sk: &'a StratSkeleton,
    val: &'a [i64],
    bang: &'a [bool],
    names: BTreeSet<String>,
    occ_name: BTreeMap<usize, String>,
}

type Built = Result<(DerivScript, Vec<Pending>), String>;

impl Builder<'_> {
    fn level(&self, n: usize) -> i64 {
        self.val[self.sk.lv(n)]
    }

    fn node_ty(&self, n: usize, k: i64) -> Result<Type, String> {
        self.sk.ty(self.sk.node_skel[n], k, self.val)
    }

    fn binder_of(&self, o: usize) -> usize {
        match &self.tree.nodes[o].kind {
            NodeKind::Var { binder, .. } => *binder,
            _ => unreachable!(),
        }
    }

    fn build(&mut self, n: usize, k: i64) -> Built {
        let ln = self.level(n);
        let is_var = matches!(self.tree.nodes[n].kind, NodeKind::Var { .. });
        if ln < k && !is_var {
            let y = fresh("d", &mut self.names);
            return Ok((id(&y, self.node_ty(n, k)?), vec![Pending::Door { y, node: n }]));
        }
        if ln > k {
            return self.open_box(n, k);
        }
        match self.tree.nodes[n].kind.clone() {
            NodeKind::Var { .. } => Ok((id(&self.occ_name[&n], self.node_ty(n, k)?), vec![Pending::Occ { node: n, gamma: false }])),
            NodeKind::Abs { name, body } => self.abstraction(n, &name, body, k),
            NodeKind::App { fun, arg } => {
                let (f, mut pf) = self.build(fun, k)?;
                if !self.bang[n] {
                    let (a, pa) = self.build(arg, k)?;
                    pf.extend(pa);
                    return Ok((lin_e(f, a), pf));
                }
                let (a, pa) = self.build(arg, k + 1)?;
                if pa.len() > 1 {
                    return Err("(=> e) argument with several free variables".into());
                }
                for p in pa {
                    match p {
                        Pending::Occ { node, gamma: false } => pf.push(Pending::Occ { node, gamma: true }),
                        _ => return Err("(=> e) argument with a door or a non-linear variable".into()),
                    }
                }
                Ok((bang_e(f, a), pf))
            }
        }
    }

    fn open_box(&mut self, n: usize, k: i64) -> Built {
        let (r, pend) = self.build(n, k + 1)?;
        let mut gamma = Vec::new();
        for p in &pend {
            match p {
                Pending::Occ { gamma: true, .. } => return Err("non-linear variable inside a box".into()),
                Pending::Occ { node, gamma: false } => {
                    let b = self.binder_of(*node);
                    if self.bang[b] && self.level(b) == k {
                        gamma.push(*node);
                    }
                }
                Pending::Door { .. } => {}
            }
        }
        let mut s = par_i_owned(gamma.iter().map(|o| self.occ_name[o].clone()).collect(), r);
        let mut out = Vec::new();
        for p in pend {
            match p {
                Pending::Door { y, node } => {
                    let (u, up) = self.build(node, k)?;
                    s = par_e(&y, u, s);
                    out.extend(up);
                }
                Pending::Occ { node, .. } if gamma.contains(&node) => out.push(Pending::Occ { node, gamma: true }),
                Pending::Occ { node, .. } => {
                    let name = self.occ_name[&node].clone();
                    s = par_e(&name, id(&name, self.node_ty(node, k)?), s);
                    out.push(Pending::Occ { node, gamma: false });
                }
            }
        }
        Ok((s, out))
    }

    fn abstraction(&mut self, n: usize, x: &str, body: usize, k: i64) -> Built {
        let (r, pend) = self.build(body, k)?;
        let (mine, rest): (Vec<Pending>, Vec<Pending>) =
            pend.into_iter().partition(|p| matches!(p, Pending::Occ { node, .. } if self.binder_of(*node) == n));
        let xs = self.sk.binder_skel[&n];
        let mut s = r;
        if !self.bang[n] {
            match mine.as_slice() {
                [] => s = weak(x, self.sk.ty(xs, k, self.val)?, Mark::Proper, s),
                [Pending::Occ { gamma: false, .. }] => {}
                _ => return Err(format!("linear variable {x} used badly")),
            }
            return Ok((lin_i(x, s), rest));
        }
        let mut names = Vec::new();
        for p in &mine {
            match p {
                Pending::Occ { node, gamma: true } => names.push(self.occ_name[node].clone()),
                _ => return Err(format!("non-linear variable {x} never crosses a box")),
            }
        }
        if names.is_empty() {
            s = weak(x, self.sk.ty(xs, k + 1, self.val)?, Mark::Bang, s);
        }
        let mut cur = names.first().cloned().unwrap_or_default();
        for (i, nm) in names.iter().enumerate().skip(1) {
            let target = if i + 1 == names.len() { x.to_string() } else { fresh(x, &mut self.names) };
            s = cntr(&cur, nm, &target, s);
            cur = target;
        }
        Ok((bang_i(x, s), rest))
    }
}

/// Remove the outermost `count` introductions, keeping the structural rules
/// between them.
fn strip(s: DerivScript, count: usize) -> DerivScript {
    if count == 0 {
        return s;
    }
    match s.rule {
        Rule::LinI | Rule::BangIDlal => strip(s.premises.into_iter().next().expect("premise"), count - 1),
        _ => {
            let mut s = s;
            let p = s.premises.remove(0);
            s.premises.insert(0, strip(p, count));
            s
        }
    }
}

fn read_off(ad: &AbstractDeriv, bd: &BangDeriv, sk: &StratSkeleton, val: &[i64]) -> Result<Placement, String> {
    let tree = &ad.simple.tree;
    let mut b = Builder { tree, sk, val, bang: &bd.bang, names: tree.names.clone(), occ_name: BTreeMap::new() };
    for (i, node) in tree.nodes.iter().enumerate() {
        if let NodeKind::Abs { name, .. } = &node.kind {
            let occs = tree.occurrences(i);
            for &o in &occs {
                let nm = if occs.len() == 1 { name.clone() } else { fresh(name, &mut b.names) };
                b.occ_name.insert(o, nm);
            }
        }
    }
    let (s, pend) = b.build(tree.root, 0)?;
    if !pend.is_empty() {
        return Err("unresolved doors at the root".into());
    }
    let script = strip(s, tree.free.len());
    let ty = sk.ty(sk.node_skel[tree.subject], 0, val)?;
    let levels = (0..tree.nodes.len()).map(|n| val[sk.lv(n)]).collect();
    Ok(Placement { ty, script, levels })
}

#[derive(Clone, Debug)]
pub struct Stage2Options {
    pub level_cap: u32,
    /// Placements to collect, the least one included.
    pub max_results: usize,
    /// Relaxation runs allowed for the enumeration.
    pub budget: usize,
}

impl Default for Stage2Options {
    fn default() -> Self {
        Stage2Options { level_cap: 8, max_results: 8, budget: 2000 }
    }
}

/// Placements for one `!`-decoration: the least solution first, then
/// solutions with subject types of growing `§`-weight. With `target`, only
/// the placement whose subject type has that decoration.
pub fn place_paragraphs(ad: &AbstractDeriv, bd: &BangDeriv, opts: &Stage2Options, target: Option<&Type>) -> Vec<Placement> {
    let Ok(sk) = StratSkeleton::new(ad, bd, opts.level_cap) else { return Vec::new() };
    let subject = ad.simple.tree.subject;
    if let Some(t) = target {
        let Some(pins) = sk.pin(subject, t) else { return Vec::new() };
        return sk.solve(&pins).and_then(|v| read_off(ad, bd, &sk, &v).ok()).into_iter().collect();
    }
    let Some(least) = sk.solve(&[]) else { return Vec::new() };
    let mut out: Vec<Placement> = read_off(ad, bd, &sk, &least).ok().into_iter().collect();
    let positions = sk.positions(subject);
    let mut budget = opts.budget;
    let mut fixes = Vec::new();
    for total in 0..=opts.level_cap as i64 {
        if out.len() >= opts.max_results || budget == 0 {
            break;
        }
        enumerate(&sk, ad, bd, &positions, 0, total, &mut fixes, &mut budget, opts.max_results, &mut out);
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    sk: &StratSkeleton,
    ad: &AbstractDeriv,
    bd: &BangDeriv,
    positions: &[(usize, usize, i64)],
    idx: usize,
    remaining: i64,
    fixes: &mut Vec<(usize, usize, i64)>,
    budget: &mut usize,
    max: usize,
    out: &mut Vec<Placement>,
) {
    if out.len() >= max || *budget == 0 {
        return;
    }
    if idx == positions.len() {
        if remaining != 0 {
            return;
        }
        *budget -= 1;
        if let Some(v) = sk.solve(fixes) {
            if let Ok(p) = read_off(ad, bd, sk, &v) {
                if !out.iter().any(|q| q.ty.alpha_eq(&p.ty)) {
                    out.push(p);
                }
            }
        }
        return;
    }
    let (s, parent, off) = positions[idx];
    let last = idx + 1 == positions.len();
    let range: Vec<i64> = if last { vec![remaining] } else { (0..=remaining).collect() };
    for e in range {
        fixes.push((s, parent, off + e));
        fixes.push((parent, s, -(off + e)));
        *budget = budget.saturating_sub(1);
        if *budget > 0 && sk.solve(fixes).is_some() {
            enumerate(sk, ad, bd, positions, idx + 1, remaining - e, fixes, budget, max, out);
        }
        fixes.pop();
        fixes.pop();
        if out.len() >= max || *budget == 0 {
            return;
        }
    }
}
