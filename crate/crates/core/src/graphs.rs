//! Lazy adjacency oracles for the Cayley graph `Γ(G,X)`, the relative graph
//! `Γ̄(G,ℍ,X)` and the coned-off graph `Γ̂(G,ℍ,X)`.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::algebra::{Backend, Element, FactorElem, FactorKind, Group, Letter};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    Plain,
    Relative,
    Coned,
}

impl GraphKind {
    pub fn name(self) -> &'static str {
        match self {
            GraphKind::Plain => "plain",
            GraphKind::Relative => "relative",
            GraphKind::Coned => "coned",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    Group(Element),
    /// Cone vertex `v(gH)`: factor index and canonical coset key.
    Cone(usize, Element),
}

impl Vertex {
    pub fn element(&self) -> Option<&Element> {
        match self {
            Vertex::Group(g) => Some(g),
            Vertex::Cone(..) => None,
        }
    }

    pub fn is_cone(&self) -> bool {
        matches!(self, Vertex::Cone(..))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Letter(Letter),
    /// A generator of an auxiliary system attached to the oracle.
    Extra { idx: usize, inv: bool },
    ToCone(usize),
    FromCone(usize),
}

impl Label {
    pub fn is_cone(&self) -> bool {
        matches!(self, Label::ToCone(_) | Label::FromCone(_))
    }

    pub fn letter(&self) -> Option<&Letter> {
        match self {
            Label::Letter(l) => Some(l),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub from: Vertex,
    pub label: Label,
    pub to: Vertex,
}

/// A path given by its start vertex and consecutive edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub start: Vertex,
    pub edges: Vec<Edge>,
}

impl Path {
    pub fn empty(start: Vertex) -> Self {
        Path {
            start,
            edges: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn end(&self) -> &Vertex {
        self.edges.last().map(|e| &e.to).unwrap_or(&self.start)
    }

    /// Vertices `p(0), …, p(l)`.
    pub fn vertices(&self) -> Vec<&Vertex> {
        let mut v = vec![&self.start];
        v.extend(self.edges.iter().map(|e| &e.to));
        v
    }

    pub fn sub(&self, i: usize, j: usize) -> Path {
        let start = if i == 0 {
            self.start.clone()
        } else {
            self.edges[i - 1].to.clone()
        };
        Path {
            start,
            edges: self.edges[i..j].to_vec(),
        }
    }
}

/// Exploration parameters shared by the samplers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_vertices: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_vertices: 2_000_000,
        }
    }
}

/// Neighbor function for one of the three graphs, with cyclic factors
/// truncated to exponents `|k| ≤ m`.
pub struct Oracle<'g> {
    pub group: &'g Group,
    pub kind: GraphKind,
    pub m: u64,
    pub extra: Vec<(String, Element)>,
    steps: Vec<(Label, Element)>,
    cones: Vec<usize>,
    pub limits: Limits,
}

impl<'g> Oracle<'g> {
    pub fn new(group: &'g Group, kind: GraphKind, m: u64) -> Self {
        Self::with_system(group, kind, m, Vec::new(), true)
    }

    /// An oracle whose group edges are the X-letters (when `include_x`) and
    /// the given auxiliary generators with their inverses.
    pub fn with_system(
        group: &'g Group,
        kind: GraphKind,
        m: u64,
        extra: Vec<(String, Element)>,
        include_x: bool,
    ) -> Self {
        let mut steps = Vec::new();
        if include_x {
            for l in group.x_letters() {
                let v = group.letter_value(&l);
                steps.push((Label::Letter(l), v));
            }
        }
        for (i, (_, g)) in extra.iter().enumerate() {
            steps.push((Label::Extra { idx: i, inv: false }, g.clone()));
            let gi = group.inv(g);
            if gi != *g {
                steps.push((Label::Extra { idx: i, inv: true }, gi));
            }
        }
        if kind == GraphKind::Relative {
            for f in group.peripheral() {
                for l in group.h_letters(f, m) {
                    let v = group.letter_value(&l);
                    steps.push((Label::Letter(l), v));
                }
            }
        }
        let cones = if kind == GraphKind::Coned {
            group.peripheral()
        } else {
            Vec::new()
        };
        Oracle {
            group,
            kind,
            m,
            extra,
            steps,
            cones,
            limits: Limits::default(),
        }
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn label_value(&self, label: &Label) -> Option<Element> {
        match label {
            Label::Letter(l) => Some(self.group.letter_value(l)),
            Label::Extra { idx, inv } => {
                let g = &self.extra[*idx].1;
                Some(if *inv { self.group.inv(g) } else { g.clone() })
            }
            _ => None,
        }
    }

    pub fn label_inv(&self, label: &Label) -> Label {
        match label {
            Label::Letter(l) => Label::Letter(self.group.letter_inv(l)),
            Label::Extra { idx, inv } => {
                let g = &self.extra[*idx].1;
                if self.group.inv(g) == *g {
                    label.clone()
                } else {
                    Label::Extra {
                        idx: *idx,
                        inv: !inv,
                    }
                }
            }
            Label::ToCone(f) => Label::FromCone(*f),
            Label::FromCone(f) => Label::ToCone(*f),
        }
    }

    pub fn edge_inv(&self, e: &Edge) -> Edge {
        Edge {
            from: e.to.clone(),
            label: self.label_inv(&e.label),
            to: e.from.clone(),
        }
    }

    pub fn path_inv(&self, p: &Path) -> Path {
        Path {
            start: p.end().clone(),
            edges: p.edges.iter().rev().map(|e| self.edge_inv(e)).collect(),
        }
    }

    /// Number of group edges at a group vertex.
    pub fn degree(&self) -> usize {
        self.steps.len() + self.cones.len()
    }

    pub fn cone_vertex(&self, g: &Element, factor: usize) -> Result<Vertex> {
        Ok(Vertex::Cone(factor, self.group.coset_key(g, factor)?))
    }

    pub fn neighbors(&self, v: &Vertex) -> Result<Vec<Edge>> {
        match v {
            Vertex::Group(g) => {
                let mut out = Vec::with_capacity(self.degree());
                for (label, val) in &self.steps {
                    let to = self.group.canonical(&self.group.mul(g, val))?;
                    out.push(Edge {
                        from: v.clone(),
                        label: label.clone(),
                        to: Vertex::Group(to),
                    });
                }
                for &f in &self.cones {
                    out.push(Edge {
                        from: v.clone(),
                        label: Label::ToCone(f),
                        to: self.cone_vertex(g, f)?,
                    });
                }
                Ok(out)
            }
            Vertex::Cone(f, key) => {
                if self.kind != GraphKind::Coned {
                    return Err(Error::ConeVertexInPlainGraph);
                }
                let members: Vec<Element> = match &self.group.factors[*f].kind {
                    FactorKind::Finite(t) => (0..t.order() as u32)
                        .map(|i| self.group.nf_element(*f, crate::FactorElem::Fin(i)))
                        .collect(),
                    FactorKind::Cyclic => {
                        let mut v = vec![self.group.identity()];
                        for k in 1..=self.m as i64 {
                            for s in [k, -k] {
                                v.push(self.group.nf_element(
                                    *f,
                                    crate::FactorElem::Int(BigInt::from(s)),
                                ));
                            }
                        }
                        v
                    }
                };
                members
                    .into_iter()
                    .map(|h| {
                        Ok(Edge {
                            from: v.clone(),
                            label: Label::FromCone(*f),
                            to: Vertex::Group(self.group.canonical(&self.group.mul(key, &h))?),
                        })
                    })
                    .collect()
            }
        }
    }

    /// The unique edge from `v` with the given label.
    pub fn step(&self, v: &Vertex, label: &Label) -> Result<Edge> {
        match (v, label) {
            (Vertex::Group(g), Label::ToCone(f)) => Ok(Edge {
                from: v.clone(),
                label: label.clone(),
                to: self.cone_vertex(g, *f)?,
            }),
            (Vertex::Group(g), _) => {
                let val = self.label_value(label).ok_or(Error::WrongGraph(0))?;
                Ok(Edge {
                    from: v.clone(),
                    label: label.clone(),
                    to: Vertex::Group(self.group.canonical(&self.group.mul(g, &val))?),
                })
            }
            (Vertex::Cone(..), _) => Err(Error::WrongGraph(0)),
        }
    }

    pub fn label_str(&self, label: &Label) -> String {
        match label {
            Label::Letter(l) => self.group.letter_str(l),
            Label::Extra { idx, inv } => {
                if *inv {
                    format!("{}^-1", self.extra[*idx].0)
                } else {
                    self.extra[*idx].0.clone()
                }
            }
            Label::ToCone(f) | Label::FromCone(f) => format!("~{}", self.group.factors[*f].id),
        }
    }

    pub fn vertex_str(&self, v: &Vertex) -> String {
        vertex_str(self.group, v)
    }

    pub fn path_str(&self, p: &Path) -> String {
        if p.is_empty() {
            return format!("[{}]", self.vertex_str(&p.start));
        }
        p.edges
            .iter()
            .map(|e| self.label_str(&e.label))
            .collect::<Vec<_>>()
            .join(".")
    }

    pub fn ball(&self, center: &Vertex, radius: i64) -> Result<Ball> {
        if radius < 0 {
            return Err(Error::NegativeRadius(radius));
        }
        let radius = radius as usize;
        let mut info: HashMap<Vertex, (usize, Option<Edge>)> = HashMap::new();
        let mut order = vec![center.clone()];
        info.insert(center.clone(), (0, None));
        let mut queue = VecDeque::from([center.clone()]);
        while let Some(v) = queue.pop_front() {
            let d = info[&v].0;
            if d >= radius {
                continue;
            }
            for e in self.neighbors(&v)? {
                if !info.contains_key(&e.to) {
                    if info.len() >= self.limits.max_vertices {
                        return Err(Error::BudgetExceeded(self.limits.max_vertices));
                    }
                    info.insert(e.to.clone(), (d + 1, Some(e.clone())));
                    order.push(e.to.clone());
                    queue.push_back(e.to);
                }
            }
        }
        Ok(Ball {
            center: center.clone(),
            radius,
            order,
            info,
        })
    }

    /// Distance from 1 to `g` read off its normal form, when the edges are
    /// per-factor generating sets of a free product: each X-letter a unit
    /// of its own non-peripheral cyclic factor, plus the truncated
    /// peripheral alphabets (relative graph) or cone-biedges (coned graph).
    /// `None` when that shape does not apply. `Some(None)` means `g` is
    /// unreachable.
    fn syllable_metric(&self, g: &Element) -> Option<Option<usize>> {
        let grp = self.group;
        if grp.backend != Backend::FreeProduct || !self.extra.is_empty() {
            return None;
        }
        let mut unit_of = vec![false; grp.factors.len()];
        for nf in &grp.gen_values {
            let [syl] = nf.0.as_slice() else { return None };
            let f = &grp.factors[syl.factor];
            let unit = matches!(&syl.elem, FactorElem::Int(k) if *k == BigInt::from(1) || *k == BigInt::from(-1));
            if f.peripheral || !unit || unit_of[syl.factor] {
                return None;
            }
            unit_of[syl.factor] = true;
        }
        let Element::Nf(nf) = g else { return None };
        let mut total = 0usize;
        for syl in &nf.0 {
            let f = &grp.factors[syl.factor];
            let len = if unit_of[syl.factor] {
                match &syl.elem {
                    FactorElem::Int(k) => k.magnitude().to_usize()?,
                    FactorElem::Fin(_) => return None,
                }
            } else if f.peripheral && self.kind == GraphKind::Coned {
                match &syl.elem {
                    FactorElem::Int(k) if k.magnitude().to_u64()? > self.m => return Some(None),
                    _ => 2,
                }
            } else if f.peripheral && self.kind == GraphKind::Relative {
                match &syl.elem {
                    FactorElem::Fin(_) => 1,
                    FactorElem::Int(k) => {
                        if self.m == 0 {
                            return Some(None);
                        }
                        let k = k.magnitude().to_usize()?;
                        k.div_ceil(self.m as usize)
                    }
                }
            } else {
                return Some(None);
            };
            total = total.checked_add(len)?;
        }
        Some(Some(total))
    }

    /// Exact distance when it is at most `cap`.
    pub fn distance(&self, u: &Vertex, v: &Vertex, cap: usize) -> Result<Option<usize>> {
        if u == v {
            return Ok(Some(0));
        }
        if let (Vertex::Group(a), Vertex::Group(b)) = (u, v) {
            let delta = self.group.mul(&self.group.inv(a), b);
            if let Some(d) = self.syllable_metric(&delta) {
                return Ok(d.filter(|&d| d <= cap));
            }
        }
        let mut seen: HashMap<Vertex, usize> = HashMap::new();
        seen.insert(u.clone(), 0);
        let mut queue = VecDeque::from([u.clone()]);
        while let Some(x) = queue.pop_front() {
            let d = seen[&x];
            if d >= cap {
                continue;
            }
            for e in self.neighbors(&x)? {
                if e.to == *v {
                    return Ok(Some(d + 1));
                }
                if !seen.contains_key(&e.to) {
                    if seen.len() >= self.limits.max_vertices {
                        return Err(Error::BudgetExceeded(self.limits.max_vertices));
                    }
                    seen.insert(e.to.clone(), d + 1);
                    queue.push_back(e.to);
                }
            }
        }
        Ok(None)
    }

    fn layer_distances(&self, from: &Vertex, depth: usize) -> Result<HashMap<Vertex, usize>> {
        Ok(self
            .ball(from, depth as i64)?
            .info
            .into_iter()
            .map(|(k, (d, _))| (k, d))
            .collect())
    }

    /// Geodesics from `u` to `v` in lexicographic order of their label
    /// sequences, at most `max_count`; the flag reports truncation.
    pub fn geodesics(
        &self,
        u: &Vertex,
        v: &Vertex,
        cap: usize,
        max_count: usize,
    ) -> Result<(Vec<Path>, bool)> {
        let d = self
            .distance(u, v, cap)?
            .ok_or(Error::NotWithinCap(cap))?;
        if d == 0 {
            return Ok((vec![Path::empty(u.clone())], false));
        }
        let du = self.layer_distances(u, d)?;
        let dv = self.layer_distances(v, d)?;
        let mut out = Vec::new();
        let mut truncated = false;
        let mut stack: Vec<Edge> = Vec::new();
        self.geo_dfs(u, v, d, &du, &dv, &mut stack, &mut out, max_count, &mut truncated)?;
        Ok((out, truncated))
    }

    #[allow(clippy::too_many_arguments)]
    fn geo_dfs(
        &self,
        cur: &Vertex,
        target: &Vertex,
        d: usize,
        du: &HashMap<Vertex, usize>,
        dv: &HashMap<Vertex, usize>,
        stack: &mut Vec<Edge>,
        out: &mut Vec<Path>,
        max_count: usize,
        truncated: &mut bool,
    ) -> Result<()> {
        if *truncated {
            return Ok(());
        }
        if cur == target {
            if out.len() >= max_count {
                *truncated = true;
                return Ok(());
            }
            out.push(Path {
                start: stack.first().map(|e| e.from.clone()).unwrap_or(cur.clone()),
                edges: stack.clone(),
            });
            return Ok(());
        }
        let level = stack.len();
        let mut next: Vec<(String, Edge)> = self
            .neighbors(cur)?
            .into_iter()
            .filter(|e| {
                du.get(&e.to) == Some(&(level + 1)) && dv.get(&e.to) == Some(&(d - level - 1))
            })
            .map(|e| (self.label_str(&e.label), e))
            .collect();
        next.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| self.vertex_str(&a.1.to).cmp(&self.vertex_str(&b.1.to))));
        for (_, e) in next {
            let to = e.to.clone();
            stack.push(e);
            self.geo_dfs(&to, target, d, du, dv, stack, out, max_count, truncated)?;
            stack.pop();
            if *truncated {
                break;
            }
        }
        Ok(())
    }

    /// The lexicographically first geodesic.
    pub fn first_geodesic(&self, u: &Vertex, v: &Vertex, cap: usize) -> Result<Path> {
        let (mut p, _) = self.geodesics(u, v, cap, 1)?;
        Ok(p.remove(0))
    }
}

pub fn vertex_str(group: &Group, v: &Vertex) -> String {
    match v {
        Vertex::Group(g) => group.elem_str(g),
        Vertex::Cone(f, key) => format!("v({}{})", prefix(group, key), group.factors[*f].id),
    }
}

fn prefix(group: &Group, key: &Element) -> String {
    if group.is_identity(key) {
        String::new()
    } else {
        format!("{}.", group.elem_str(key))
    }
}

/// A breadth-first ball with distances and parent edges.
#[derive(Debug, Clone)]
pub struct Ball {
    pub center: Vertex,
    pub radius: usize,
    /// Vertices in discovery order.
    pub order: Vec<Vertex>,
    pub info: HashMap<Vertex, (usize, Option<Edge>)>,
}

impl Ball {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn dist(&self, v: &Vertex) -> Option<usize> {
        self.info.get(v).map(|x| x.0)
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        self.info.contains_key(v)
    }

    /// Group elements of the ball in discovery order.
    pub fn elements(&self) -> Vec<Element> {
        self.order
            .iter()
            .filter_map(|v| v.element().cloned())
            .collect()
    }

    /// Path from the center along parent edges.
    pub fn tree_path(&self, v: &Vertex) -> Option<Path> {
        let mut edges = Vec::new();
        let mut cur = v.clone();
        loop {
            let (_, parent) = self.info.get(&cur)?;
            match parent {
                None => break,
                Some(e) => {
                    edges.push(e.clone());
                    cur = e.from.clone();
                }
            }
        }
        edges.reverse();
        Some(Path {
            start: self.center.clone(),
            edges,
        })
    }

    /// Vertices lying on some geodesic from the center to `v`.
    pub fn geodesic_closure(&self, oracle: &Oracle, v: &Vertex) -> Result<Vec<Vertex>> {
        let Some(dv) = self.dist(v) else {
            return Ok(Vec::new());
        };
        let mut layer = vec![v.clone()];
        let mut all = vec![v.clone()];
        for d in (1..=dv).rev() {
            let mut next: Vec<Vertex> = Vec::new();
            for x in &layer {
                for e in oracle.neighbors(x)? {
                    if self.dist(&e.to) == Some(d - 1) && !next.contains(&e.to) {
                        next.push(e.to);
                    }
                }
            }
            all.extend(next.iter().cloned());
            layer = next;
        }
        Ok(all)
    }

    /// One line per vertex: `vertex<TAB>distance<TAB>parent edge`.
    pub fn dump(&self, oracle: &Oracle) -> String {
        let mut rows: Vec<(usize, String, String)> = self
            .order
            .iter()
            .map(|v| {
                let (d, p) = &self.info[v];
                let parent = match p {
                    None => "-".to_string(),
                    Some(e) => format!("{}>{}", oracle.vertex_str(&e.from), oracle.label_str(&e.label)),
                };
                (*d, oracle.vertex_str(v), parent)
            })
            .collect();
        rows.sort();
        let mut s = String::new();
        for (d, v, p) in rows {
            let _ = writeln!(s, "{v}\t{d}\t{p}");
        }
        s
    }
}
