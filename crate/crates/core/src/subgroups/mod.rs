//! Folded subgroup graphs over a free product of finite and cyclic factors.
//!
//! Every vertex carries, per finite factor, at most one complete orbit of
//! that factor, and per cyclic factor at most one outgoing and one incoming
//! generator edge. Reading a normal form from the base vertex is a partial
//! right action, so membership is a single deterministic walk.

mod family;
mod spec;

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::algebra::{Backend, Element, FactorElem, FactorKind, Group, NormalForm, Syllable};
use crate::error::{Error, Result};

pub use spec::{parse_subgroup_spec, SubgroupSpec};
pub use family::{
    double_coset_members, factor_conjugate_intersection, peripheral_family, reduce_y,
    reduced_family, teq_y, MemberSet, PeripheralInstance, TeqOutcome, YSet,
};

/// A complete orbit of a finite factor: `slots[s]` is the vertex reached from
/// `slots[0]` by the element with table index `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    pub factor: usize,
    pub slots: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct SubgroupGraph {
    pub base: usize,
    pub zout: Vec<BTreeMap<usize, usize>>,
    pub zin: Vec<BTreeMap<usize, usize>>,
    pub orbits: Vec<Orbit>,
    /// Per vertex and finite factor: orbit index and position in it.
    pub member: Vec<BTreeMap<usize, (usize, u32)>>,
    pub generators: Vec<Element>,
}

impl PartialEq for SubgroupGraph {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base
            && self.zout == other.zout
            && self.orbits == other.orbits
            && self.member == other.member
    }
}

fn nf(g: &Element) -> Result<&NormalForm> {
    match g {
        Element::Nf(n) => Ok(n),
        Element::Word(_) => Err(Error::BackendMismatch {
            expected: "free_product",
        }),
    }
}

fn require_free(g: &Group) -> Result<()> {
    if g.backend != Backend::FreeProduct {
        return Err(Error::BackendMismatch {
            expected: "free_product",
        });
    }
    Ok(())
}

fn table(g: &Group, f: usize) -> &crate::algebra::FiniteTable {
    match &g.factors[f].kind {
        FactorKind::Finite(t) => t,
        FactorKind::Cyclic => unreachable!("cyclic factor has no table"),
    }
}

struct Builder<'g> {
    g: &'g Group,
    parent: Vec<usize>,
    zout: Vec<BTreeMap<usize, usize>>,
    zin: Vec<BTreeMap<usize, usize>>,
    orbits: Vec<Orbit>,
    member: Vec<BTreeMap<usize, (usize, u32)>>,
    queue: Vec<(usize, usize)>,
}

impl<'g> Builder<'g> {
    fn new(g: &'g Group) -> Self {
        let mut b = Builder {
            g,
            parent: Vec::new(),
            zout: Vec::new(),
            zin: Vec::new(),
            orbits: Vec::new(),
            member: Vec::new(),
            queue: Vec::new(),
        };
        b.fresh();
        b
    }

    fn import(g: &'g Group, sg: &SubgroupGraph, keep_v: &[bool], keep_o: &[bool]) -> Self {
        let n = sg.len();
        let mut b = Builder {
            g,
            parent: (0..n).collect(),
            zout: vec![BTreeMap::new(); n],
            zin: vec![BTreeMap::new(); n],
            orbits: Vec::new(),
            member: vec![BTreeMap::new(); n],
            queue: Vec::new(),
        };
        for v in 0..n {
            if !keep_v[v] {
                continue;
            }
            for (&f, &w) in &sg.zout[v] {
                if keep_v[w] {
                    b.zout[v].insert(f, w);
                    b.zin[w].insert(f, v);
                }
            }
        }
        let mut remap = HashMap::new();
        for (i, o) in sg.orbits.iter().enumerate() {
            if keep_o[i] {
                remap.insert(i, b.orbits.len());
                b.orbits.push(o.clone());
            }
        }
        for v in 0..n {
            for (&f, &(o, t)) in &sg.member[v] {
                if let Some(&o2) = remap.get(&o) {
                    b.member[v].insert(f, (o2, t));
                }
            }
        }
        b
    }

    fn fresh(&mut self) -> usize {
        let id = self.parent.len();
        self.parent.push(id);
        self.zout.push(BTreeMap::new());
        self.zin.push(BTreeMap::new());
        self.member.push(BTreeMap::new());
        id
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn slot_merges(&mut self, f: usize, (o1, t1): (usize, u32), (o2, t2): (usize, u32)) {
        let t = table(self.g, f);
        for s in 0..t.order() as u32 {
            let a = self.orbits[o1].slots[t.mul(t1, s) as usize];
            let b = self.orbits[o2].slots[t.mul(t2, s) as usize];
            self.queue.push((a, b));
        }
    }

    fn attach(&mut self, v: usize, f: usize, m: (usize, u32)) {
        let v = self.find(v);
        match self.member[v].get(&f).copied() {
            Some(m0) => self.slot_merges(f, m0, m),
            None => {
                self.member[v].insert(f, m);
            }
        }
    }

    fn add_orbit(&mut self, v: usize, f: usize) -> usize {
        let order = table(self.g, f).order();
        let o = self.orbits.len();
        let mut slots = vec![v];
        for _ in 1..order {
            slots.push(self.fresh());
        }
        self.orbits.push(Orbit { factor: f, slots: slots.clone() });
        for (s, w) in slots.into_iter().enumerate() {
            self.attach(w, f, (o, s as u32));
        }
        o
    }

    fn link(&mut self, v: usize, f: usize, w: usize) {
        let (v, w) = (self.find(v), self.find(w));
        match self.zout[v].get(&f).copied() {
            Some(t) => self.queue.push((t, w)),
            None => {
                self.zout[v].insert(f, w);
            }
        }
        match self.zin[w].get(&f).copied() {
            Some(t) => self.queue.push((t, v)),
            None => {
                self.zin[w].insert(f, v);
            }
        }
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        let (r, c) = (a.min(b), a.max(b));
        self.parent[c] = r;
        for (f, t) in std::mem::take(&mut self.zout[c]) {
            match self.zout[r].get(&f).copied() {
                Some(t0) => self.queue.push((t0, t)),
                None => {
                    self.zout[r].insert(f, t);
                }
            }
        }
        for (f, t) in std::mem::take(&mut self.zin[c]) {
            match self.zin[r].get(&f).copied() {
                Some(t0) => self.queue.push((t0, t)),
                None => {
                    self.zin[r].insert(f, t);
                }
            }
        }
        for (f, m) in std::mem::take(&mut self.member[c]) {
            match self.member[r].get(&f).copied() {
                Some(m0) => self.slot_merges(f, m0, m),
                None => {
                    self.member[r].insert(f, m);
                }
            }
        }
    }

    fn run(&mut self) {
        while let Some((a, b)) = self.queue.pop() {
            self.merge(a, b);
        }
    }

    fn step(&mut self, v: usize, s: &Syllable) -> usize {
        let mut v = self.find(v);
        match &s.elem {
            FactorElem::Fin(e) => {
                let (o, t) = match self.member[v].get(&s.factor).copied() {
                    Some(m) => m,
                    None => (self.add_orbit(v, s.factor), 0),
                };
                let w = self.orbits[o].slots[table(self.g, s.factor).mul(t, *e) as usize];
                self.find(w)
            }
            FactorElem::Int(k) => {
                let n: usize = k.abs().try_into().expect("exponent fits in memory");
                for _ in 0..n {
                    let next = if k.is_positive() {
                        self.zout[v].get(&s.factor).copied()
                    } else {
                        self.zin[v].get(&s.factor).copied()
                    };
                    v = match next {
                        Some(w) => self.find(w),
                        None => {
                            let w = self.fresh();
                            if k.is_positive() {
                                self.link(v, s.factor, w);
                            } else {
                                self.link(w, s.factor, v);
                            }
                            w
                        }
                    };
                }
                v
            }
        }
    }

    fn add_loop(&mut self, from: usize, word: &NormalForm, to: usize) {
        let mut v = from;
        for s in &word.0 {
            v = self.step(v, s);
            self.run();
        }
        self.queue.push((v, to));
        self.run();
    }

    /// Canonical relabeling by breadth-first search from `base`.
    fn finish(mut self, base: usize, generators: Vec<Element>) -> SubgroupGraph {
        self.run();
        let base = self.find(base);
        let mut index: HashMap<usize, usize> = HashMap::new();
        let mut order = vec![base];
        index.insert(base, 0);
        let mut i = 0;
        let nf = self.g.factors.len();
        while i < order.len() {
            let r = order[i];
            i += 1;
            let mut next = Vec::new();
            for f in 0..nf {
                if let Some(&(o, t)) = self.member[r].get(&f) {
                    let tb = table(self.g, f);
                    for s in 0..tb.order() as u32 {
                        next.push(self.orbits[o].slots[tb.mul(t, s) as usize]);
                    }
                }
                if let Some(&w) = self.zout[r].get(&f) {
                    next.push(w);
                }
                if let Some(&w) = self.zin[r].get(&f) {
                    next.push(w);
                }
            }
            for w in next {
                let w = self.find(w);
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(w) {
                    e.insert(order.len());
                    order.push(w);
                }
            }
        }
        let n = order.len();
        let mut out = SubgroupGraph {
            base: 0,
            zout: vec![BTreeMap::new(); n],
            zin: vec![BTreeMap::new(); n],
            orbits: Vec::new(),
            member: vec![BTreeMap::new(); n],
            generators,
        };
        for (k, &r) in order.iter().enumerate() {
            let outs: Vec<(usize, usize)> = self.zout[r].iter().map(|(&f, &w)| (f, w)).collect();
            for (f, w) in outs {
                let w = index[&self.find(w)];
                out.zout[k].insert(f, w);
                out.zin[w].insert(f, k);
            }
        }
        for (k, &r) in order.iter().enumerate() {
            let mems: Vec<(usize, (usize, u32))> =
                self.member[r].iter().map(|(&f, &m)| (f, m)).collect();
            for (f, (o, t)) in mems {
                if out.member[k].contains_key(&f) {
                    continue;
                }
                let tb = table(self.g, f);
                let slots: Vec<usize> = (0..tb.order() as u32)
                    .map(|s| {
                        let w = self.orbits[o].slots[tb.mul(t, s) as usize];
                        index[&self.find(w)]
                    })
                    .collect();
                let no = out.orbits.len();
                for (s, &w) in slots.iter().enumerate() {
                    out.member[w].entry(f).or_insert((no, s as u32));
                }
                out.orbits.push(Orbit { factor: f, slots });
            }
        }
        out
    }
}

impl SubgroupGraph {
    pub fn len(&self) -> usize {
        self.zout.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zout.is_empty()
    }

    fn z_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.zout[v].values().chain(self.zin[v].values()).copied()
    }

    /// Removes hanging trees: vertices with a single cyclic edge and no
    /// orbit, and free orbits with at most one member used elsewhere.
    fn prune(self, g: &Group) -> SubgroupGraph {
        let n = self.len();
        let mut keep_v = vec![true; n];
        let mut keep_o = vec![true; self.orbits.len()];
        let stabilized: Vec<bool> = self
            .orbits
            .iter()
            .map(|o| {
                let mut s = o.slots.clone();
                s.sort_unstable();
                s.dedup();
                s.len() < o.slots.len()
            })
            .collect();
        loop {
            let mut changed = false;
            let orbit_count = |v: usize, keep_o: &[bool]| {
                self.member[v].values().filter(|(o, _)| keep_o[*o]).count()
            };
            let zdeg = |v: usize, keep_v: &[bool]| self.z_neighbors(v).filter(|&w| keep_v[w]).count();
            for (i, o) in self.orbits.iter().enumerate() {
                if !keep_o[i] || stabilized[i] {
                    continue;
                }
                let busy = o
                    .slots
                    .iter()
                    .filter(|&&u| {
                        u == self.base || zdeg(u, &keep_v) > 0 || orbit_count(u, &keep_o) > 1
                    })
                    .count();
                if busy <= 1 {
                    keep_o[i] = false;
                    changed = true;
                }
            }
            for v in 0..n {
                if keep_v[v]
                    && v != self.base
                    && orbit_count(v, &keep_o) == 0
                    && zdeg(v, &keep_v) <= 1
                {
                    keep_v[v] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let base = self.base;
        let gens = self.generators.clone();
        Builder::import(g, &self, &keep_v, &keep_o).finish(base, gens)
    }

    /// Folds the subgroup generated by the given elements.
    pub fn fold(g: &Group, generators: &[Element]) -> Result<SubgroupGraph> {
        require_free(g)?;
        let mut b = Builder::new(g);
        let mut gens = Vec::new();
        for x in generators {
            let w = nf(x)?;
            if w.0.is_empty() {
                continue;
            }
            b.add_loop(0, w, 0);
            gens.push(x.clone());
        }
        Ok(b.finish(0, gens).prune(g))
    }

    /// Rebuilds the graph from its own edges and orbits.
    pub fn refold(&self, g: &Group) -> SubgroupGraph {
        let keep_v = vec![true; self.len()];
        let keep_o = vec![true; self.orbits.len()];
        Builder::import(g, self, &keep_v, &keep_o)
            .finish(self.base, self.generators.clone())
            .prune(g)
    }

    /// Walks `k` generator steps of a cyclic factor.
    pub fn z_walk(&self, v: usize, f: usize, k: &BigInt) -> Option<usize> {
        let map = if k.is_negative() { &self.zin } else { &self.zout };
        let mut rest = k.abs();
        let mut cur = v;
        let mut walked = 0usize;
        let mut reduced = false;
        while rest.is_positive() {
            cur = *map[cur].get(&f)?;
            rest -= 1;
            walked += 1;
            if cur == v && !reduced {
                rest %= walked;
                reduced = true;
            }
        }
        Some(cur)
    }

    /// Length of the generator cycle of a cyclic factor through `v`, or 0.
    pub fn period(&self, v: usize, f: usize) -> usize {
        let mut cur = v;
        for d in 1..=self.len() {
            match self.zout[cur].get(&f) {
                Some(&w) => cur = w,
                None => return 0,
            }
            if cur == v {
                return d;
            }
        }
        0
    }

    /// Signed offset from `v` to `w` along the generator edges of `f`.
    pub fn chain_offset(&self, v: usize, w: usize, f: usize) -> Option<i64> {
        if v == w {
            return Some(0);
        }
        for (map, sign) in [(&self.zout, 1i64), (&self.zin, -1i64)] {
            let mut cur = v;
            for d in 1..=self.len() as i64 {
                match map[cur].get(&f) {
                    Some(&x) => cur = x,
                    None => break,
                }
                if cur == w {
                    return Some(sign * d);
                }
                if cur == v {
                    break;
                }
            }
        }
        None
    }

    pub fn step(&self, v: usize, s: &Syllable, g: &Group) -> Option<usize> {
        match &s.elem {
            FactorElem::Fin(e) => {
                let (o, t) = *self.member[v].get(&s.factor)?;
                Some(self.orbits[o].slots[table(g, s.factor).mul(t, *e) as usize])
            }
            FactorElem::Int(k) => self.z_walk(v, s.factor, k),
        }
    }

    /// The vertex reached by reading a normal form from `v`.
    pub fn read(&self, g: &Group, v: usize, x: &Element) -> Result<Option<usize>> {
        let mut cur = v;
        for s in &nf(x)?.0 {
            match self.step(cur, s, g) {
                Some(w) => cur = w,
                None => return Ok(None),
            }
        }
        Ok(Some(cur))
    }

    pub fn contains(&self, g: &Group, x: &Element) -> Result<bool> {
        Ok(self.read(g, self.base, x)? == Some(self.base))
    }

    /// `L·g₁ = L·g₂`.
    pub fn coset_equal(&self, g: &Group, a: &Element, b: &Element) -> Result<bool> {
        self.contains(g, &g.mul(a, &g.inv(b)))
    }

    /// The graph of `g·L·g⁻¹`.
    pub fn conjugate(&self, g: &Group, x: &Element) -> Result<SubgroupGraph> {
        let w = nf(x)?.clone();
        let keep_v = vec![true; self.len()];
        let keep_o = vec![true; self.orbits.len()];
        let mut b = Builder::import(g, self, &keep_v, &keep_o);
        let nb = b.fresh();
        b.add_loop(nb, &w, self.base);
        let xi = g.inv(x);
        let gens = self
            .generators
            .iter()
            .map(|s| g.mul(&g.mul(x, s), &xi))
            .collect();
        Ok(b.finish(nb, gens).prune(g))
    }

    /// Product graph of `L ∩ K` over pairs reachable from the bases.
    pub fn intersect(&self, g: &Group, other: &SubgroupGraph) -> SubgroupGraph {
        let mut b = Builder::new(g);
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        index.insert((self.base, other.base), 0);
        let mut queue = VecDeque::from([(self.base, other.base)]);
        let mut id = |b: &mut Builder, p: (usize, usize), q: &mut VecDeque<(usize, usize)>| {
            *index.entry(p).or_insert_with(|| {
                q.push_back(p);
                b.fresh()
            })
        };
        while let Some((v, w)) = queue.pop_front() {
            let me = id(&mut b, (v, w), &mut queue);
            for f in 0..g.factors.len() {
                match &g.factors[f].kind {
                    FactorKind::Finite(t) => {
                        let (Some(&(o1, t1)), Some(&(o2, t2))) =
                            (self.member[v].get(&f), other.member[w].get(&f))
                        else {
                            continue;
                        };
                        if b.member[me].contains_key(&f) {
                            continue;
                        }
                        let mut slots = Vec::with_capacity(t.order());
                        for s in 0..t.order() as u32 {
                            let p = (
                                self.orbits[o1].slots[t.mul(t1, s) as usize],
                                other.orbits[o2].slots[t.mul(t2, s) as usize],
                            );
                            slots.push(id(&mut b, p, &mut queue));
                        }
                        let o = b.orbits.len();
                        b.orbits.push(Orbit { factor: f, slots: slots.clone() });
                        for (s, x) in slots.into_iter().enumerate() {
                            b.member[x].entry(f).or_insert((o, s as u32));
                        }
                    }
                    FactorKind::Cyclic => {
                        if let (Some(&v2), Some(&w2)) = (self.zout[v].get(&f), other.zout[w].get(&f)) {
                            let t = id(&mut b, (v2, w2), &mut queue);
                            b.zout[me].insert(f, t);
                            b.zin[t].insert(f, me);
                        }
                        if let (Some(&v2), Some(&w2)) = (self.zin[v].get(&f), other.zin[w].get(&f)) {
                            let t = id(&mut b, (v2, w2), &mut queue);
                            b.zin[me].insert(f, t);
                            b.zout[t].insert(f, me);
                        }
                    }
                }
            }
        }
        let mut out = b.finish(0, Vec::new()).prune(g);
        out.generators = out.spanning_generators(g);
        out
    }

    /// A generating set read off a breadth-first spanning tree.
    pub fn spanning_generators(&self, g: &Group) -> Vec<Element> {
        let n = self.len();
        let mut tree: Vec<Option<Element>> = vec![None; n];
        tree[self.base] = Some(g.identity());
        let mut queue = VecDeque::from([self.base]);
        while let Some(v) = queue.pop_front() {
            let tv = tree[v].clone().unwrap();
            let mut next: Vec<(usize, Element)> = Vec::new();
            for (&f, &(o, t)) in &self.member[v] {
                let tb = table(g, f);
                for s in 0..tb.order() as u32 {
                    let w = self.orbits[o].slots[tb.mul(t, s) as usize];
                    next.push((w, g.nf_element(f, FactorElem::Fin(s))));
                }
            }
            for (&f, &w) in &self.zout[v] {
                next.push((w, g.nf_element(f, FactorElem::Int(BigInt::from(1)))));
            }
            for (&f, &w) in &self.zin[v] {
                next.push((w, g.nf_element(f, FactorElem::Int(BigInt::from(-1)))));
            }
            for (w, step) in next {
                if tree[w].is_none() {
                    tree[w] = Some(g.mul(&tv, &step));
                    queue.push_back(w);
                }
            }
        }
        let t = |v: usize| tree[v].clone().unwrap();
        let mut out: Vec<Element> = Vec::new();
        let mut push = |x: Element| {
            if !g.is_identity(&x) && !out.contains(&x) && !out.contains(&g.inv(&x)) {
                out.push(x);
            }
        };
        for o in &self.orbits {
            let tb = table(g, o.factor);
            let a = o.slots[0];
            for s in 1..tb.order() as u32 {
                let step = g.nf_element(o.factor, FactorElem::Fin(s));
                push(g.mul(&g.mul(&t(a), &step), &g.inv(&t(o.slots[s as usize]))));
            }
        }
        for v in 0..n {
            for (&f, &w) in &self.zout[v] {
                let step = g.nf_element(f, FactorElem::Int(BigInt::from(1)));
                push(g.mul(&g.mul(&t(v), &step), &g.inv(&t(w))));
            }
        }
        out
    }

    /// Whether the subgroup is trivial.
    pub fn is_trivial(&self) -> bool {
        self.len() == 1 && self.orbits.is_empty() && self.zout[0].is_empty()
    }

    /// Edge list with a base marker: `base`, `edge v F w` for cyclic
    /// generator edges and `orbit F v0 v1 …` for finite orbits.
    pub fn dump(&self, g: &Group) -> String {
        let mut s = format!("base\t{}\n", self.base);
        for (v, m) in self.zout.iter().enumerate() {
            for (&f, &w) in m {
                let _ = writeln!(s, "edge\t{v}\t{}\t{w}", g.factors[f].id);
            }
        }
        for o in &self.orbits {
            let slots: Vec<String> = o.slots.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(s, "orbit\t{}\t{}", g.factors[o.factor].id, slots.join(","));
        }
        s
    }
}
