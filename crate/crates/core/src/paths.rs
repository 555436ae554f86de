//! Components, phase vertices, penetrations and the map `π` from paths of
//! `Γ̄(G,ℍ,X)` to paths of `Γ̂(G,ℍ,X)`.
//!
//! A cycle is read cyclically: a run of letters that wraps past the base
//! point forms a single component (or penetration).

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::algebra::{Element, Group, Letter};
use crate::error::{Error, Result};
use crate::graphs::{Edge, GraphKind, Label, Oracle, Path, Vertex};
use crate::literal::{parse_letter, tokens};

/// A maximal run of edges labeled by one peripheral factor, or of
/// cone-biedges through one cone vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub factor: usize,
    /// Index of the first edge; the span may wrap around a cycle.
    pub start: usize,
    pub len: usize,
    pub from: Vertex,
    pub to: Vertex,
    /// Canonical key of the coset `(q₋)H`.
    pub key: Element,
}

impl Component {
    /// Edge indices covered, in path order.
    pub fn edge_indices(&self, path_len: usize) -> Vec<usize> {
        (0..self.len).map(|k| (self.start + k) % path_len).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub components: Vec<Component>,
    /// Positions `0..=l` of phase vertices, ascending.
    pub phase_positions: Vec<usize>,
    pub phase_vertices: BTreeSet<Vertex>,
    pub cyclic: bool,
}

impl Decomposition {
    pub fn connected(&self, i: usize, other: &Decomposition, j: usize) -> bool {
        let (a, b) = (&self.components[i], &other.components[j]);
        a.factor == b.factor && a.key == b.key
    }

    pub fn is_isolated(&self, i: usize) -> bool {
        (0..self.components.len()).all(|j| j == i || !self.connected(i, self, j))
    }

    /// Pairs `(i, j)`, `i < j`, of connected components.
    pub fn connected_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.components.len() {
            for j in i + 1..self.components.len() {
                if self.connected(i, self, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn locally_minimal(&self) -> bool {
        self.components.iter().all(|c| c.len == 1)
    }

    pub fn backtracking_free(&self) -> bool {
        (0..self.components.len()).all(|i| self.is_isolated(i))
    }
}

/// Penetrating subpaths of a coned path; spans count single cone edges, so
/// every length is even.
pub type PenetrationRecord = Decomposition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PathClass {
    pub is_cycle: bool,
    pub is_arc: bool,
    pub is_circuit: bool,
    pub locally_minimal: bool,
    pub backtracking_free: bool,
}

pub fn is_cycle(p: &Path) -> bool {
    !p.is_empty() && p.start == *p.end()
}

fn h_factor(g: &Group, e: &Edge) -> Option<usize> {
    match &e.label {
        Label::Letter(Letter::H { factor, .. }) if g.factors[*factor].peripheral => Some(*factor),
        _ => None,
    }
}

fn position_vertex(p: &Path, i: usize) -> &Vertex {
    if i == 0 {
        &p.start
    } else {
        &p.edges[i - 1].to
    }
}

fn cached_key(
    g: &Group,
    cache: &mut HashMap<(Vertex, usize), Element>,
    v: &Vertex,
    f: usize,
) -> Result<Element> {
    if let Some(k) = cache.get(&(v.clone(), f)) {
        return Ok(k.clone());
    }
    let el = v.element().ok_or(Error::ConeVertexInPlainGraph)?;
    let k = g.coset_key(el, f)?;
    cache.insert((v.clone(), f), k.clone());
    Ok(k)
}

/// Runs `(factor, start, len)` over unit positions, merged across the base
/// point of a cycle.
fn runs(units: &[Option<(usize, Element)>], cyclic: bool) -> Vec<(usize, usize, usize)> {
    let mut out: Vec<(usize, usize, usize)> = Vec::new();
    let mut i = 0;
    while i < units.len() {
        if let Some((f, k)) = &units[i] {
            let mut j = i + 1;
            while j < units.len() && units[j].as_ref() == Some(&(*f, k.clone())) {
                j += 1;
            }
            out.push((*f, i, j - i));
            i = j;
        } else {
            i += 1;
        }
    }
    if cyclic && out.len() >= 2 {
        let first = out[0];
        let last = *out.last().unwrap();
        if first.1 == 0
            && last.1 + last.2 == units.len()
            && units[0] == units[units.len() - 1]
        {
            out.remove(0);
            out.last_mut().unwrap().2 += first.2;
        }
    }
    out
}

/// Splits a path of `Γ̄` into its ℍ-components.
pub fn decompose(g: &Group, p: &Path) -> Result<Decomposition> {
    let cyclic = is_cycle(p);
    let mut cache = HashMap::new();
    let mut units = Vec::with_capacity(p.len());
    for e in &p.edges {
        match h_factor(g, e) {
            // Consecutive letters of one factor stay in one coset.
            Some(f) => units.push(Some((f, g.identity()))),
            None => units.push(None),
        }
    }
    let l = p.len();
    let mut components = Vec::new();
    for (f, s, n) in runs(&units, cyclic) {
        let from = position_vertex(p, s).clone();
        let to = position_vertex(p, (s + n - 1) % l + 1).clone();
        let key = cached_key(g, &mut cache, &from, f)?;
        components.push(Component {
            factor: f,
            start: s,
            len: n,
            from,
            to,
            key,
        });
    }
    let mut pos = BTreeSet::new();
    for c in &components {
        pos.insert(c.start);
        pos.insert((c.start + c.len - 1) % l + 1);
    }
    for (i, e) in p.edges.iter().enumerate() {
        if !e.label.is_cone() && h_factor(g, e).is_none() {
            pos.insert(i);
            pos.insert(i + 1);
        }
    }
    Ok(finish(p, components, pos, cyclic))
}

fn finish(
    p: &Path,
    components: Vec<Component>,
    mut pos: BTreeSet<usize>,
    cyclic: bool,
) -> Decomposition {
    if cyclic && (pos.contains(&0) || pos.contains(&p.len())) {
        pos.insert(0);
        pos.insert(p.len());
    }
    let phase_vertices = pos.iter().map(|&i| position_vertex(p, i).clone()).collect();
    Decomposition {
        components,
        phase_positions: pos.into_iter().collect(),
        phase_vertices,
        cyclic,
    }
}

/// Maximal penetrating subpaths of a coned path built from cone-biedges and
/// group edges.
pub fn penetrations(q: &Path) -> Result<PenetrationRecord> {
    let cyclic = is_cycle(q);
    let l = q.len();
    let mut units: Vec<Option<(usize, Element)>> = Vec::with_capacity(l);
    let mut i = 0;
    while i < l {
        match (&q.edges[i].label, &q.edges[i].to) {
            (Label::ToCone(f), Vertex::Cone(cf, key)) if f == cf => {
                match q.edges.get(i + 1).map(|e| &e.label) {
                    Some(Label::FromCone(f2)) if f2 == f => {}
                    _ => return Err(Error::DanglingConeEdge(i)),
                }
                units.push(Some((*f, key.clone())));
                units.push(Some((*f, key.clone())));
                i += 2;
            }
            (Label::ToCone(_), _) | (Label::FromCone(_), _) => {
                return Err(Error::DanglingConeEdge(i));
            }
            _ => {
                units.push(None);
                i += 1;
            }
        }
    }
    let mut components = Vec::new();
    for (f, s, n) in runs(&units, cyclic) {
        let key = match &units[s] {
            Some((_, k)) => k.clone(),
            None => unreachable!(),
        };
        components.push(Component {
            factor: f,
            start: s,
            len: n,
            from: position_vertex(q, s).clone(),
            to: position_vertex(q, (s + n - 1) % l + 1).clone(),
            key,
        });
    }
    let mut pos = BTreeSet::new();
    for c in &components {
        pos.insert(c.start);
        pos.insert((c.start + c.len - 1) % l + 1);
    }
    for (i, u) in units.iter().enumerate() {
        if u.is_none() {
            pos.insert(i);
            pos.insert(i + 1);
        }
    }
    Ok(finish(q, components, pos, cyclic))
}

impl Decomposition {
    /// Number of penetrations of each coset `(factor, key)`.
    pub fn coset_counts(&self) -> BTreeMap<(usize, Element), usize> {
        let mut m = BTreeMap::new();
        for c in &self.components {
            *m.entry((c.factor, c.key.clone())).or_insert(0) += 1;
        }
        m
    }

    /// Penetration-record reading: each penetration is one biedge.
    pub fn biedge_minimal(&self) -> bool {
        self.components.iter().all(|c| c.len == 2)
    }
}

/// Flags of a path in any of the three graphs. Coned paths are read through
/// their penetrations.
pub fn classify(oracle: &Oracle, p: &Path) -> Result<PathClass> {
    let cycle = is_cycle(p);
    let verts = p.vertices();
    let distinct: BTreeSet<&Vertex> = verts.iter().copied().collect();
    let is_arc = distinct.len() == verts.len();
    let is_circuit = cycle && {
        let origins: BTreeSet<&Vertex> = p.edges.iter().map(|e| &e.from).collect();
        origins.len() == p.len() && p.edges[0] != oracle.edge_inv(p.edges.last().unwrap())
    };
    let (locally_minimal, backtracking_free) = if oracle.kind == GraphKind::Coned {
        let r = penetrations(p)?;
        (
            r.biedge_minimal(),
            r.coset_counts().values().all(|&n| n < 2),
        )
    } else {
        let d = decompose(oracle.group, p)?;
        (d.locally_minimal(), d.backtracking_free())
    };
    Ok(PathClass {
        is_cycle: cycle,
        is_arc,
        is_circuit,
        locally_minimal,
        backtracking_free,
    })
}

/// Replaces every ℍ-edge by the cone-biedge through `v(gH)`.
pub fn pi(g: &Group, p: &Path) -> Result<Path> {
    let mut edges = Vec::with_capacity(2 * p.len());
    for e in &p.edges {
        match h_factor(g, e) {
            Some(f) => {
                let el = e.from.element().ok_or(Error::ConeVertexInPlainGraph)?;
                let cone = Vertex::Cone(f, g.coset_key(el, f)?);
                edges.push(Edge {
                    from: e.from.clone(),
                    label: Label::ToCone(f),
                    to: cone.clone(),
                });
                edges.push(Edge {
                    from: cone,
                    label: Label::FromCone(f),
                    to: e.to.clone(),
                });
            }
            None => edges.push(e.clone()),
        }
    }
    Ok(Path {
        start: p.start.clone(),
        edges,
    })
}

/// The unique path of `Γ̄` whose image under `π` is `q`.
pub fn lift(g: &Group, q: &Path) -> Result<Path> {
    let mut edges = Vec::new();
    let mut i = 0;
    while i < q.len() {
        let e = &q.edges[i];
        match &e.label {
            Label::ToCone(f) => {
                let back = match q.edges.get(i + 1) {
                    Some(b) if b.label == Label::FromCone(*f) => b,
                    _ => return Err(Error::DanglingConeEdge(i)),
                };
                let (Some(a), Some(b)) = (e.from.element(), back.to.element()) else {
                    return Err(Error::BrokenPath(i));
                };
                let h = g.mul(&g.inv(a), b);
                let elem = g.factor_member(&h, *f)?.ok_or(Error::BrokenPath(i))?;
                if elem.is_identity() {
                    return Err(Error::ZeroBiedge(i));
                }
                edges.push(Edge {
                    from: e.from.clone(),
                    label: Label::Letter(Letter::H { factor: *f, elem }),
                    to: back.to.clone(),
                });
                i += 2;
            }
            Label::FromCone(_) => return Err(Error::DanglingConeEdge(i)),
            _ => {
                edges.push(e.clone());
                i += 1;
            }
        }
    }
    Ok(Path {
        start: q.start.clone(),
        edges,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuasiGeodesic {
    Yes,
    /// Edge span `(i, j)` of a subpath violating the bound.
    No(usize, usize),
    Unknown,
}

/// Tests `l(q) ≤ μ·d(q₋,q₊) + C` for every subpath `q`, with distances in
/// the oracle's graph explored up to `cap`.
pub fn is_quasigeodesic(oracle: &Oracle, p: &Path, mu: f64, c: f64, cap: usize) -> Result<QuasiGeodesic> {
    let verts = p.vertices();
    let mut unknown = false;
    for i in 0..verts.len() {
        let ball = oracle.ball(verts[i], cap as i64)?;
        for j in i + 1..verts.len() {
            let l = (j - i) as f64;
            match ball.dist(verts[j]) {
                Some(d) => {
                    if l > mu * d as f64 + c + 1e-9 {
                        return Ok(QuasiGeodesic::No(i, j));
                    }
                }
                None => {
                    if l > mu * (cap + 1) as f64 + c + 1e-9 {
                        unknown = true;
                    }
                }
            }
        }
    }
    Ok(if unknown {
        QuasiGeodesic::Unknown
    } else {
        QuasiGeodesic::Yes
    })
}

/// Whether the endpoints of `p` and `q` are pairwise within `k` in the
/// oracle's graph.
pub fn k_similar(oracle: &Oracle, p: &Path, q: &Path, k: usize, cap: usize) -> Result<bool> {
    let mut ok = true;
    for (u, v) in [(&p.start, &q.start), (p.end(), q.end())] {
        let d = oracle.distance(u, v, cap)?.ok_or(Error::NotWithinCap(cap))?;
        ok &= d <= k;
    }
    Ok(ok)
}

/// Builds a path from a dotted literal. Tokens are edge labels of the
/// oracle's graph; `~F:e` is the cone-biedge through `v(gF)` ending at
/// `g·e`, and a bare `~F` is the single cone edge into `v(gF)`.
pub fn parse_path(oracle: &Oracle, start: Vertex, s: &str) -> Result<Path> {
    let g = oracle.group;
    let mut p = Path::empty(start);
    for (i, tok) in tokens(s).iter().enumerate() {
        let cur = p.end().clone();
        if let Some(rest) = tok.strip_prefix('~') {
            let (fid, elem) = match rest.split_once(':') {
                Some((f, e)) => (f, Some(e)),
                None => (rest, None),
            };
            let f = g.factor_index(fid)?;
            let Vertex::Group(el) = &cur else {
                return Err(Error::BrokenPath(i));
            };
            let cone = oracle.cone_vertex(el, f)?;
            p.edges.push(Edge {
                from: cur.clone(),
                label: Label::ToCone(f),
                to: cone.clone(),
            });
            if let Some(e) = elem {
                let h = match parse_letter(g, &format!("{fid}:{e}"), false)? {
                    Some(l) => g.letter_value(&l),
                    None => g.identity(),
                };
                let to = g.canonical(&g.mul(el, &h))?;
                p.edges.push(Edge {
                    from: cone,
                    label: Label::FromCone(f),
                    to: Vertex::Group(to),
                });
            }
            continue;
        }
        let label = match parse_letter(g, tok, true)? {
            Some(l) => Label::Letter(l),
            None => continue,
        };
        p.edges.push(oracle.step(&cur, &label)?);
    }
    Ok(p)
}

/// Path of `Γ̄` (or `Γ(G,X)`) spelled by a word from `start`.
pub fn word_path(oracle: &Oracle, start: &Element, letters: &[Letter]) -> Result<Path> {
    let mut p = Path::empty(Vertex::Group(oracle.group.canonical(start)?));
    for l in letters {
        let e = oracle.step(p.end(), &Label::Letter(l.clone()))?;
        p.edges.push(e);
    }
    Ok(p)
}
