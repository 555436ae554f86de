//! Relative quasiconvexity on desk-scale balls: geodesic coverage by
//! `L ∪ LY`, strong quasiconvexity samples, distortion profiles, witness
//! paths inside `L ∪ LY`, the induced peripheral structure of `L` with its
//! correspondence `ι` into the coned-off graph of `G`, and tree
//! certificates for free products of peripheral factors.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::algebra::{Backend, Element, FactorElem, Group, NormalForm, Syllable};
use crate::conditions::condition_b;
use crate::error::{Error, Result};
use crate::graphs::{Edge, GraphKind, Label, Oracle, Path, Vertex};
use crate::paths::{classify, is_quasigeodesic, PathClass, QuasiGeodesic};
use crate::subgroups::{
    double_coset_members, factor_conjugate_intersection, MemberSet, PeripheralInstance,
    SubgroupGraph, YSet,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    AllGeodesics,
    /// Only the breadth-first tree geodesic; verdicts are heuristic.
    FirstGeodesic,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::AllGeodesics => "all-geodesics",
            Mode::FirstGeodesic => "first-geodesic",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum QcOutcome {
    /// `coverage[i]` counts checked vertices first covered by `L·ys[i]`.
    Pass { coverage: Vec<usize> },
    Fail {
        l: Element,
        vertex: Element,
        geodesic: Path,
    },
    Inconclusive(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConditionBSummary {
    pub pairs: usize,
    /// Largest number of factors meeting one double coset.
    pub max_factors: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QcReport {
    /// `1` followed by the distinct elements of `Y`.
    pub ys: Vec<Element>,
    pub radius: usize,
    pub m: u64,
    pub mode: Mode,
    /// Elements `l ≠ 1` of `L` whose geodesics were checked.
    pub checked: usize,
    /// Elements of `L` in the ball with a peripheral exponent above `m`.
    pub skipped: usize,
    pub vertices: usize,
    pub condition_b: Option<ConditionBSummary>,
    pub outcome: QcOutcome,
}

impl QcReport {
    pub fn passed(&self) -> bool {
        matches!(self.outcome, QcOutcome::Pass { .. })
    }
}

fn with_identity(g: &Group, y: &[Element]) -> Vec<Element> {
    let mut ys = vec![g.identity()];
    for e in y {
        if !ys.contains(e) {
            ys.push(e.clone());
        }
    }
    ys
}

fn require_free(g: &Group) -> Result<()> {
    if g.backend != Backend::FreeProduct {
        return Err(Error::BackendMismatch {
            expected: "free_product",
        });
    }
    Ok(())
}

fn nf(x: &Element) -> &NormalForm {
    match x {
        Element::Nf(n) => n,
        Element::Word(_) => unreachable!("free product elements are normal forms"),
    }
}

/// Whether every peripheral cyclic syllable has exponent at most `m`.
fn within_truncation(g: &Group, x: &Element, m: u64) -> bool {
    nf(x).0.iter().all(|s| match &s.elem {
        FactorElem::Int(k) => !g.factors[s.factor].peripheral || k.abs() <= BigInt::from(m),
        FactorElem::Fin(_) => true,
    })
}

fn cover(g: &Group, l: &SubgroupGraph, ys: &[Element], v: &Element) -> Result<Option<usize>> {
    for (i, y) in ys.iter().enumerate() {
        if l.contains(g, &g.mul(v, &g.inv(y)))? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// Elements `l ≠ 1` of `L` in the relative ball, ordered by distance and
/// then by normal form, and the number skipped for exceeding the truncation.
fn subgroup_targets(
    g: &Group,
    l: &SubgroupGraph,
    ball: &crate::graphs::Ball,
    m: u64,
) -> Result<(Vec<(usize, Element)>, usize)> {
    let mut out = Vec::new();
    let mut skipped = 0;
    for e in ball.elements() {
        if g.is_identity(&e) || !l.contains(g, &e)? {
            continue;
        }
        if !within_truncation(g, &e, m) {
            skipped += 1;
            continue;
        }
        out.push((ball.dist(&Vertex::Group(e.clone())).unwrap_or(0), e));
    }
    out.sort();
    Ok((out, skipped))
}

/// Checks that every vertex of every geodesic of `Γ̄(G,ℍ,X)` from `1` to
/// `l ∈ L` within the radius lies in `L ∪ LY`. By left invariance this
/// covers all pairs `l₁, l₂` of the ball. Cyclic factors are truncated at
/// `M = radius`; elements of `L` with larger peripheral exponents are
/// counted as skipped.
pub fn prequasiconvex(
    g: &Group,
    l: &SubgroupGraph,
    y: &[Element],
    radius: usize,
    mode: Mode,
) -> Result<QcReport> {
    require_free(g)?;
    let m = radius.max(1) as u64;
    let oracle = Oracle::new(g, GraphKind::Relative, m);
    let one = Vertex::Group(g.identity());
    let ball = oracle.ball(&one, radius as i64)?;
    let ys = with_identity(g, y);
    let (targets, skipped) = subgroup_targets(g, l, &ball, m)?;
    let mut seen: HashMap<Vertex, usize> = HashMap::new();
    let mut coverage = vec![0; ys.len()];
    let mut report = QcReport {
        ys: ys.clone(),
        radius,
        m,
        mode,
        checked: 0,
        skipped,
        vertices: 0,
        condition_b: None,
        outcome: QcOutcome::Inconclusive(String::new()),
    };
    for (_, t) in &targets {
        let tv = Vertex::Group(t.clone());
        let mut verts: Vec<Vertex> = match mode {
            Mode::AllGeodesics => ball.geodesic_closure(&oracle, &tv)?,
            Mode::FirstGeodesic => ball
                .tree_path(&tv)
                .map(|p| p.vertices().into_iter().cloned().collect())
                .unwrap_or_default(),
        };
        verts.sort_by_key(|v| (ball.dist(v), v.clone()));
        for v in verts {
            if seen.contains_key(&v) {
                continue;
            }
            let e = v.element().cloned().unwrap_or_else(|| g.identity());
            match cover(g, l, &ys, &e)? {
                Some(i) => {
                    coverage[i] += 1;
                    seen.insert(v, i);
                }
                None => {
                    let head = ball.tree_path(&v).unwrap_or_else(|| Path::empty(one.clone()));
                    let tail = oracle.first_geodesic(&v, &tv, radius)?;
                    let mut geodesic = head;
                    geodesic.edges.extend(tail.edges);
                    report.checked += 1;
                    report.vertices = seen.len() + 1;
                    report.outcome = QcOutcome::Fail {
                        l: t.clone(),
                        vertex: e,
                        geodesic,
                    };
                    return Ok(report);
                }
            }
        }
        report.checked += 1;
    }
    report.vertices = seen.len();
    report.outcome = QcOutcome::Pass { coverage };
    Ok(report)
}

/// Right coset representatives paired for the double-coset condition:
/// `1 ∪ Y` together with the radius-one relative ball.
fn default_pairs(g: &Group, y: &[Element]) -> Result<Vec<(Element, Element)>> {
    let oracle = Oracle::new(g, GraphKind::Relative, 1);
    let ball = oracle.ball(&Vertex::Group(g.identity()), 1)?;
    let mut cands = with_identity(g, y);
    for e in ball.elements() {
        if !cands.contains(&e) {
            cands.push(e);
        }
    }
    let mut out = Vec::new();
    for a in &cands {
        for b in &cands {
            if a != b {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    Ok(out)
}

/// [`prequasiconvex`] together with the double-coset condition evaluated on
/// the given pairs (or on the default candidates).
pub fn quasiconvex(
    g: &Group,
    l: &SubgroupGraph,
    y: &[Element],
    radius: usize,
    mode: Mode,
    pairs: Option<&[(Element, Element)]>,
) -> Result<QcReport> {
    let mut report = prequasiconvex(g, l, y, radius, mode)?;
    let pairs = match pairs {
        Some(p) => p.to_vec(),
        None => default_pairs(g, y)?,
    };
    let mut summary = ConditionBSummary {
        pairs: 0,
        max_factors: 0,
    };
    for (a, b) in &pairs {
        if l.coset_equal(g, a, b)? {
            continue;
        }
        let r = condition_b(g, l, a, b)?;
        summary.pairs += 1;
        summary.max_factors = summary.max_factors.max(r.len());
    }
    report.condition_b = Some(summary);
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongRow {
    pub g: Element,
    pub factor: usize,
    /// `{h ∈ H : g·h·g⁻¹ ∈ L}`.
    pub members: MemberSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongReport {
    pub samples: usize,
    /// Finite non-trivial intersections.
    pub exceptional: Vec<StrongRow>,
    pub infinite: Vec<StrongRow>,
}

impl StrongReport {
    pub fn strong(&self) -> bool {
        self.infinite.is_empty()
    }
}

fn is_infinite(m: &MemberSet) -> bool {
    matches!(m, MemberSet::Progression { period, .. } if !period.is_zero())
}

/// Intersections `L ∩ gHg⁻¹` for sampled `g` and every peripheral factor.
pub fn strong_check(g: &Group, l: &SubgroupGraph, samples: &[Element]) -> Result<StrongReport> {
    require_free(g)?;
    let mut report = StrongReport {
        samples: samples.len(),
        exceptional: Vec::new(),
        infinite: Vec::new(),
    };
    for x in samples {
        for f in g.peripheral() {
            let m = factor_conjugate_intersection(g, l, x, f)?;
            if m.is_trivial() || m.is_empty() {
                continue;
            }
            let row = StrongRow {
                g: x.clone(),
                factor: f,
                members: m,
            };
            if is_infinite(&row.members) {
                report.infinite.push(row);
            } else {
                report.exceptional.push(row);
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineFit {
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
}

/// Least-squares fit of `ys ≈ slope·xs + intercept`.
pub fn fit(points: &[(f64, f64)]) -> AffineFit {
    let n = points.len() as f64;
    if points.is_empty() {
        return AffineFit {
            slope: 0.0,
            intercept: 0.0,
            max_residual: 0.0,
        };
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let max_residual = points
        .iter()
        .map(|p| (p.1 - slope * p.0 - intercept).abs())
        .fold(0.0, f64::max);
    AffineFit {
        slope,
        intercept,
        max_residual,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistortionProfile {
    /// `(l, inner length, outer length)` for `l` in the inner ball.
    pub samples: Vec<(Element, usize, usize)>,
    /// Outer length as a function of inner length.
    pub forward: AffineFit,
    /// Inner length as a function of outer length.
    pub backward: AffineFit,
    /// Largest outer length of an inner letter.
    pub letter_bound: usize,
    pub bound_holds: bool,
    pub radius: usize,
    pub m: u64,
    /// Whether reachability of `L` in the inner graph was checked.
    pub generation_checked: bool,
}

/// The letters of `ℍ_{L,Y}`: every non-trivial element of finite members
/// and the powers `|j| ≤ m` of the generator of cyclic ones.
pub fn induced_letters(g: &Group, family: &[PeripheralInstance], m: u64) -> Vec<(String, Element)> {
    let mut out: Vec<(String, Element)> = Vec::new();
    for (i, inst) in family.iter().enumerate() {
        let conj = |h: FactorElem| {
            let x = g.nf_element(inst.factor, h);
            g.mul(&g.mul(&inst.y, &x), &g.inv(&inst.y))
        };
        let elems: Vec<Element> = match &inst.members {
            MemberSet::Finite(v) => v.iter().filter(|h| !h.is_identity()).cloned().map(conj).collect(),
            MemberSet::Progression { period, .. } => (1..=m as i64)
                .map(|j| conj(FactorElem::Int(period * BigInt::from(j))))
                .collect(),
        };
        for (k, e) in elems.into_iter().enumerate() {
            if !out.iter().any(|(_, x)| *x == e || *x == g.inv(&e)) {
                out.push((format!("K{i}_{k}"), e));
            }
        }
    }
    out
}

/// Inner distances in `Γ̄(L, ·, S)` given by the letters `S ∪ inner_h`
/// against outer distances in `Γ̄(G,ℍ,X)`, both truncated at `m`. When the
/// folded graph of `L` is supplied, every element of `L` in the outer ball
/// of the same radius must be reachable in the inner graph within four
/// times the radius.
pub fn distortion_profile(
    g: &Group,
    s: &[Element],
    inner_h: Vec<(String, Element)>,
    l: Option<&SubgroupGraph>,
    radius: usize,
    m: u64,
) -> Result<DistortionProfile> {
    let mut extra: Vec<(String, Element)> = s
        .iter()
        .enumerate()
        .map(|(i, e)| (format!("s{}", i + 1), e.clone()))
        .collect();
    extra.extend(inner_h);
    let inner = Oracle::with_system(g, GraphKind::Plain, m, extra.clone(), false);
    let outer = Oracle::new(g, GraphKind::Relative, m);
    let one = Vertex::Group(g.identity());
    let mut letter_bound = 0;
    for (_, e) in &extra {
        let d = outer
            .distance(&one, &Vertex::Group(g.canonical(e)?), 4 * radius.max(1) + 16)?
            .ok_or(Error::NotWithinCap(4 * radius.max(1) + 16))?;
        letter_bound = letter_bound.max(d);
    }
    let inner_ball = inner.ball(&one, radius as i64)?;
    let mut generation_checked = false;
    if let Some(lg) = l {
        let probe = outer.ball(&one, radius as i64)?;
        let mut missing: Vec<Element> = Vec::new();
        for e in probe.elements() {
            if lg.contains(g, &e)? && !inner_ball.contains(&Vertex::Group(e.clone())) {
                missing.push(e);
            }
        }
        if !missing.is_empty() {
            let wide = inner.ball(&one, (4 * radius) as i64)?;
            if let Some(e) = missing.iter().find(|e| !wide.contains(&Vertex::Group((*e).clone()))) {
                return Err(Error::GenerationFailure(g.elem_str(e)));
            }
        }
        generation_checked = true;
    }
    let mut samples = Vec::new();
    for v in &inner_ball.order {
        let di = inner_ball.dist(v).unwrap_or(0);
        let dout = outer
            .distance(&one, v, radius * letter_bound)?
            .ok_or(Error::NotWithinCap(radius * letter_bound))?;
        samples.push((v.element().cloned().unwrap_or_else(|| g.identity()), di, dout));
    }
    samples.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));
    let fwd: Vec<(f64, f64)> = samples.iter().map(|s| (s.1 as f64, s.2 as f64)).collect();
    let bwd: Vec<(f64, f64)> = samples.iter().map(|s| (s.2 as f64, s.1 as f64)).collect();
    let bound_holds = samples.iter().all(|s| s.2 <= s.1 * letter_bound);
    Ok(DistortionProfile {
        forward: fit(&fwd),
        backward: fit(&bwd),
        samples,
        letter_bound,
        bound_holds,
        radius,
        m,
        generation_checked,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RundqcRow {
    pub l: Element,
    /// Shortest path from `1` to `l` inside `L ∪ LY`.
    pub path: Option<Path>,
    pub class: Option<PathClass>,
    pub quasi: Option<QuasiGeodesic>,
}

impl RundqcRow {
    /// Locally minimal, without backtracking and a `(μ,C)`-quasigeodesic.
    pub fn qualifies(&self) -> bool {
        match (&self.class, &self.quasi) {
            (Some(c), Some(q)) => c.locally_minimal && c.backtracking_free && *q == QuasiGeodesic::Yes,
            _ => false,
        }
    }
}

/// For every `l ∈ L` in the relative ball, a shortest path from `1` to `l`
/// in the subgraph of `Γ̄(G,ℍ,X)` induced on `L ∪ LY`, of length at most
/// `μ·radius + C`, with its classification.
pub fn rundqc_witness(
    g: &Group,
    l: &SubgroupGraph,
    y: &[Element],
    mu: f64,
    c: f64,
    radius: usize,
) -> Result<Vec<RundqcRow>> {
    require_free(g)?;
    let m = radius.max(1) as u64;
    let oracle = Oracle::new(g, GraphKind::Relative, m);
    let one = Vertex::Group(g.identity());
    let ball = oracle.ball(&one, radius as i64)?;
    let ys = with_identity(g, y);
    let depth = (mu * radius as f64 + c).floor().max(0.0) as usize;
    let mut parent: HashMap<Vertex, (usize, Option<Edge>)> = HashMap::new();
    parent.insert(one.clone(), (0, None));
    let mut queue = VecDeque::from([one.clone()]);
    while let Some(v) = queue.pop_front() {
        let d = parent[&v].0;
        if d >= depth {
            continue;
        }
        for e in oracle.neighbors(&v)? {
            if parent.contains_key(&e.to) {
                continue;
            }
            let x = e.to.element().cloned().unwrap_or_else(|| g.identity());
            if cover(g, l, &ys, &x)?.is_none() {
                continue;
            }
            if parent.len() >= oracle.limits.max_vertices {
                return Err(Error::BudgetExceeded(oracle.limits.max_vertices));
            }
            parent.insert(e.to.clone(), (d + 1, Some(e.clone())));
            queue.push_back(e.to);
        }
    }
    let (targets, _) = subgroup_targets(g, l, &ball, m)?;
    let mut rows = vec![RundqcRow {
        l: g.identity(),
        path: Some(Path::empty(one.clone())),
        class: Some(classify(&oracle, &Path::empty(one.clone()))?),
        quasi: Some(QuasiGeodesic::Yes),
    }];
    for (_, t) in targets {
        let tv = Vertex::Group(t.clone());
        let path = parent.contains_key(&tv).then(|| {
            let mut edges = Vec::new();
            let mut cur = tv.clone();
            while let Some((_, Some(e))) = parent.get(&cur) {
                edges.push(e.clone());
                cur = e.from.clone();
            }
            edges.reverse();
            Path {
                start: one.clone(),
                edges,
            }
        });
        let (class, quasi) = match &path {
            Some(p) => (
                Some(classify(&oracle, p)?),
                Some(is_quasigeodesic(&oracle, p, mu, c, p.len())?),
            ),
            None => (None, None),
        };
        rows.push(RundqcRow {
            l: t,
            path,
            class,
            quasi,
        });
    }
    Ok(rows)
}

/// Where a generator of `S` comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    /// `y·x·y′⁻¹` with `x ∈ X`.
    Edge,
    /// The least element of `L ∩ yHy′⁻¹` for `y ≠ y′`.
    Peripheral,
}

/// The induced structure of `L` with respect to `Y`: the generating system
/// `S`, the families `ℍ_{L,Y}` and `ℍ^r_{L,Y}`, and the truncation used by
/// its graphs.
#[derive(Debug, Clone, PartialEq)]
pub struct InducedStructure {
    pub ys: Vec<Element>,
    pub reduced_y: bool,
    pub s: Vec<(Element, Origin)>,
    pub family: Vec<PeripheralInstance>,
    pub reduced: Vec<PeripheralInstance>,
    pub m: u64,
}

impl InducedStructure {
    /// `ℍ^{r,∞}_{L,Y}`.
    pub fn infinite(&self) -> Vec<&PeripheralInstance> {
        self.reduced.iter().filter(|i| is_infinite(&i.members)).collect()
    }

    pub fn generators(&self) -> Vec<Element> {
        self.s.iter().map(|x| x.0.clone()).collect()
    }

    /// Adjacency of `Γ̂(L, ℍ^r_{L,Y}, S)`.
    pub fn coned<'a>(&'a self, g: &'a Group) -> InducedGraph<'a> {
        InducedGraph { g, st: self }
    }
}

fn family_of(g: &Group, l: &SubgroupGraph, ys: &[Element]) -> Result<Vec<PeripheralInstance>> {
    let mut out = Vec::new();
    for f in g.peripheral() {
        for (j, yj) in ys.iter().enumerate() {
            let m = factor_conjugate_intersection(g, l, yj, f)?;
            if !m.is_trivial() && !m.is_empty() {
                out.push(PeripheralInstance {
                    y_index: j,
                    y: yj.clone(),
                    factor: f,
                    members: m,
                });
            }
        }
    }
    Ok(out)
}

fn least_member(m: &MemberSet) -> Option<FactorElem> {
    match m {
        MemberSet::Finite(v) => v.first().cloned(),
        MemberSet::Progression { offset, .. } => Some(FactorElem::Int(offset.clone())),
    }
}

fn build_structure(
    g: &Group,
    l: &SubgroupGraph,
    ys: Vec<Element>,
    reduced_y: bool,
    m: u64,
) -> Result<InducedStructure> {
    let mut s: Vec<(Element, Origin)> = Vec::new();
    let push = |x: Element, o: Origin, s: &mut Vec<(Element, Origin)>| {
        if !g.is_identity(&x) && !s.iter().any(|(e, _)| *e == x || *e == g.inv(&x)) {
            s.push((x, o));
        }
    };
    let mut xs = Vec::new();
    for letter in g.x_letters() {
        xs.push(g.letter_value(&letter));
    }
    for y in &ys {
        for x in &xs {
            for y2 in &ys {
                let w = g.mul(&g.mul(y, x), &g.inv(y2));
                if l.contains(g, &w)? {
                    push(w, Origin::Edge, &mut s);
                }
            }
        }
    }
    for (i, y) in ys.iter().enumerate() {
        for (j, y2) in ys.iter().enumerate() {
            if i == j {
                continue;
            }
            for f in g.peripheral() {
                let members = double_coset_members(g, l, y, f, y2)?;
                if let Some(h) = least_member(&members) {
                    let w = g.mul(&g.mul(y, &g.nf_element(f, h)), &g.inv(y2));
                    push(w, Origin::Peripheral, &mut s);
                }
            }
        }
    }
    let family = family_of(g, l, &ys)?;
    let reduced = if reduced_y {
        let mut out = Vec::new();
        for inst in &family {
            let mut keep = true;
            for yi in &ys[..inst.y_index] {
                if !double_coset_members(g, l, yi, inst.factor, &inst.y)?.is_empty() {
                    keep = false;
                    break;
                }
            }
            if keep {
                out.push(inst.clone());
            }
        }
        out
    } else {
        family.clone()
    };
    Ok(InducedStructure {
        ys,
        reduced_y,
        s,
        family,
        reduced,
        m,
    })
}

/// `Y` with `1` prepended unless some element of `Y` already lies in `L`.
fn normalise_y(g: &Group, l: &SubgroupGraph, y: &[Element]) -> Result<Vec<Element>> {
    let mut ys: Vec<Element> = Vec::new();
    let mut has_l = false;
    for e in y {
        has_l |= l.contains(g, e)?;
    }
    if !has_l {
        ys.push(g.identity());
    }
    for e in y {
        if !ys.contains(e) {
            ys.push(e.clone());
        }
    }
    Ok(ys)
}

/// Builds `S = W₁ ⊔ W₂` (identities and repeated inverses dropped),
/// `ℍ_{L,Y}` and `ℍ^r_{L,Y}`. Elements of `Y` must lie in distinct right
/// cosets of `L`.
pub fn induced_structure(g: &Group, l: &SubgroupGraph, y: &[Element], m: u64) -> Result<InducedStructure> {
    require_free(g)?;
    let ys = normalise_y(g, l, y)?;
    if !YSet::checked(g, l, ys.clone())?.distinct_right_cosets {
        return Err(Error::YNotReduced);
    }
    build_structure(g, l, ys, true, m)
}

/// The same construction for an arbitrary `Y`, keeping all of `ℍ_{L,Y}`
/// as the cone family. Used as a control for [`iota_check`].
pub fn induced_structure_unreduced(
    g: &Group,
    l: &SubgroupGraph,
    y: &[Element],
    m: u64,
) -> Result<InducedStructure> {
    require_free(g)?;
    let ys = normalise_y(g, l, y)?;
    build_structure(g, l, ys, false, m)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IVertex {
    Elem(Element),
    /// Cone vertex of `l·K` for the member `K` at this index of the cone
    /// family, keyed by a canonical element of `l·K`.
    Cone(usize, Element),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ILabel {
    Gen { idx: usize, inv: bool },
    ToCone(usize),
    FromCone(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IEdge {
    pub from: IVertex,
    pub label: ILabel,
    pub to: IVertex,
}

/// Lazy adjacency of `Γ̂(L, ℍ^r_{L,Y}, S)`; infinite cone vertices are
/// truncated at the structure's `m`.
pub struct InducedGraph<'a> {
    pub g: &'a Group,
    pub st: &'a InducedStructure,
}

impl InducedGraph<'_> {
    fn conj(&self, k: usize, h: FactorElem) -> Element {
        let inst = &self.st.reduced[k];
        let g = self.g;
        g.mul(&g.mul(&inst.y, &g.nf_element(inst.factor, h)), &g.inv(&inst.y))
    }

    /// Canonical element of `x·K` for the cone member `k`.
    pub fn cone_key(&self, x: &Element, k: usize) -> Element {
        let g = self.g;
        let inst = &self.st.reduced[k];
        match &inst.members {
            MemberSet::Finite(v) => v
                .iter()
                .map(|h| g.mul(x, &self.conj(k, h.clone())))
                .min()
                .unwrap_or_else(|| x.clone()),
            MemberSet::Progression { period, .. } => {
                let z = g.mul(x, &inst.y);
                let mut syl = nf(&z).0.clone();
                if let Some(last) = syl.last_mut() {
                    if last.factor == inst.factor {
                        if let FactorElem::Int(a) = &last.elem {
                            let r = a.mod_floor(period);
                            if r.is_zero() {
                                syl.pop();
                            } else {
                                *last = Syllable {
                                    factor: inst.factor,
                                    elem: FactorElem::Int(r),
                                };
                            }
                        }
                    }
                }
                g.mul(&Element::Nf(NormalForm(syl)), &g.inv(&inst.y))
            }
        }
    }

    fn members(&self, k: usize) -> Vec<Element> {
        let inst = &self.st.reduced[k];
        match &inst.members {
            MemberSet::Finite(v) => v.iter().map(|h| self.conj(k, h.clone())).collect(),
            MemberSet::Progression { period, .. } => {
                let mut out = vec![self.g.identity()];
                for j in 1..=self.st.m as i64 {
                    for s in [j, -j] {
                        out.push(self.conj(k, FactorElem::Int(period * BigInt::from(s))));
                    }
                }
                out
            }
        }
    }

    pub fn neighbors(&self, v: &IVertex) -> Vec<IEdge> {
        let g = self.g;
        match v {
            IVertex::Elem(x) => {
                let mut out = Vec::new();
                for (i, (s, _)) in self.st.s.iter().enumerate() {
                    let si = g.inv(s);
                    out.push(IEdge {
                        from: v.clone(),
                        label: ILabel::Gen { idx: i, inv: false },
                        to: IVertex::Elem(g.mul(x, s)),
                    });
                    if si != *s {
                        out.push(IEdge {
                            from: v.clone(),
                            label: ILabel::Gen { idx: i, inv: true },
                            to: IVertex::Elem(g.mul(x, &si)),
                        });
                    }
                }
                for k in 0..self.st.reduced.len() {
                    out.push(IEdge {
                        from: v.clone(),
                        label: ILabel::ToCone(k),
                        to: IVertex::Cone(k, self.cone_key(x, k)),
                    });
                }
                out
            }
            IVertex::Cone(k, key) => self
                .members(*k)
                .into_iter()
                .map(|h| IEdge {
                    from: v.clone(),
                    label: ILabel::FromCone(*k),
                    to: IVertex::Elem(g.mul(key, &h)),
                })
                .collect(),
        }
    }

    fn edge_inv(&self, e: &IEdge) -> IEdge {
        let label = match &e.label {
            ILabel::Gen { idx, inv } => {
                let s = &self.st.s[*idx].0;
                if self.g.inv(s) == *s {
                    e.label.clone()
                } else {
                    ILabel::Gen {
                        idx: *idx,
                        inv: !inv,
                    }
                }
            }
            ILabel::ToCone(k) => ILabel::FromCone(*k),
            ILabel::FromCone(k) => ILabel::ToCone(*k),
        };
        IEdge {
            from: e.to.clone(),
            label,
            to: e.from.clone(),
        }
    }

    /// Breadth-first ball around `1` in discovery order.
    pub fn ball(&self, radius: usize) -> Vec<(IVertex, usize)> {
        let one = IVertex::Elem(self.g.identity());
        let mut dist: HashMap<IVertex, usize> = HashMap::from([(one.clone(), 0)]);
        let mut order = vec![(one.clone(), 0)];
        let mut queue = VecDeque::from([one]);
        while let Some(v) = queue.pop_front() {
            let d = dist[&v];
            if d >= radius {
                continue;
            }
            for e in self.neighbors(&v) {
                if !dist.contains_key(&e.to) {
                    dist.insert(e.to.clone(), d + 1);
                    order.push((e.to.clone(), d + 1));
                    queue.push_back(e.to);
                }
            }
        }
        order
    }

    /// Circuits through `1` of length at most `n`, each listed once per
    /// orientation.
    pub fn circuits(&self, n: usize) -> Vec<Vec<IEdge>> {
        let one = IVertex::Elem(self.g.identity());
        let mut out = Vec::new();
        let mut stack: Vec<IEdge> = Vec::new();
        let mut on_path: BTreeSet<IVertex> = BTreeSet::from([one.clone()]);
        self.circuit_dfs(&one, &one, n, &mut stack, &mut on_path, &mut out);
        out
    }

    fn circuit_dfs(
        &self,
        start: &IVertex,
        cur: &IVertex,
        n: usize,
        stack: &mut Vec<IEdge>,
        on_path: &mut BTreeSet<IVertex>,
        out: &mut Vec<Vec<IEdge>>,
    ) {
        if stack.len() >= n {
            return;
        }
        for e in self.neighbors(cur) {
            if let Some(last) = stack.last() {
                if e == self.edge_inv(last) {
                    continue;
                }
            }
            if e.to == *start {
                if !stack.is_empty() && e != self.edge_inv(&stack[0]) {
                    let mut c = stack.clone();
                    c.push(e);
                    out.push(c);
                }
                continue;
            }
            if on_path.contains(&e.to) {
                continue;
            }
            on_path.insert(e.to.clone());
            stack.push(e.clone());
            self.circuit_dfs(start, &e.to, n, stack, on_path, out);
            stack.pop();
            on_path.remove(&e.to);
        }
    }
}

/// The coned-off graph of `G` with system `X ⊔ Y ⊔ Y⁻¹ ⊔ S` receiving `ι`.
/// Non-trivial elements of `Y` come first among the auxiliary generators.
pub fn iota_target<'g>(g: &'g Group, st: &InducedStructure) -> Oracle<'g> {
    let mut extra = Vec::new();
    for (j, y) in st.ys.iter().enumerate() {
        if !g.is_identity(y) {
            extra.push((format!("y{j}"), y.clone()));
        }
    }
    for (i, (s, _)) in st.s.iter().enumerate() {
        extra.push((format!("s{}", i + 1), s.clone()));
    }
    Oracle::with_system(g, GraphKind::Coned, st.m, extra, true)
}

fn y_extra_index(g: &Group, st: &InducedStructure, j: usize) -> Option<usize> {
    if g.is_identity(&st.ys[j]) {
        return None;
    }
    Some(st.ys[..j].iter().filter(|y| !g.is_identity(y)).count())
}

fn y_count(g: &Group, st: &InducedStructure) -> usize {
    st.ys.iter().filter(|y| !g.is_identity(y)).count()
}

impl InducedGraph<'_> {
    pub fn iota_vertex(&self, v: &IVertex) -> Result<Vertex> {
        match v {
            IVertex::Elem(x) => Ok(Vertex::Group(x.clone())),
            IVertex::Cone(k, key) => {
                let inst = &self.st.reduced[*k];
                let z = self.g.mul(key, &inst.y);
                Ok(Vertex::Cone(inst.factor, self.g.coset_key(&z, inst.factor)?))
            }
        }
    }

    /// The image path of one edge.
    pub fn iota_edge(&self, target: &Oracle, e: &IEdge) -> Result<Vec<Edge>> {
        let g = self.g;
        match &e.label {
            ILabel::Gen { idx, inv } => {
                let label = Label::Extra {
                    idx: y_count(g, self.st) + idx,
                    inv: *inv,
                };
                Ok(vec![target.step(&self.iota_vertex(&e.from)?, &label)?])
            }
            ILabel::ToCone(k) => {
                let inst = &self.st.reduced[*k];
                let x = e.from.clone();
                let IVertex::Elem(l) = x else {
                    return Err(Error::WrongGraph(0));
                };
                let mut out = Vec::new();
                let mut at = Vertex::Group(l);
                if let Some(i) = y_extra_index(g, self.st, inst.y_index) {
                    let step = target.step(&at, &Label::Extra { idx: i, inv: false })?;
                    at = step.to.clone();
                    out.push(step);
                }
                out.push(target.step(&at, &Label::ToCone(inst.factor))?);
                Ok(out)
            }
            ILabel::FromCone(_) => {
                let back = self.iota_edge(target, &self.edge_inv(e))?;
                Ok(back.iter().rev().map(|x| target.edge_inv(x)).collect())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IotaReport {
    pub radius: usize,
    pub vertices: usize,
    /// Distinct vertices with the same image.
    pub collisions: Vec<(IVertex, IVertex, Vertex)>,
    pub circuits: usize,
    pub cone_circuits: usize,
    /// Circuits whose reduced image is not a circuit of at most twice the
    /// length: `(length, image length)`.
    pub bad_images: Vec<(usize, usize)>,
    pub max_ratio: f64,
}

impl IotaReport {
    pub fn ok(&self) -> bool {
        self.collisions.is_empty() && self.bad_images.is_empty()
    }
}

fn is_y_edge(e: &Edge, ny: usize) -> bool {
    matches!(e.label, Label::Extra { idx, .. } if idx < ny)
}

/// Cancels adjacent inverse pairs of `Y`-edges, cyclically.
fn cancel_y(target: &Oracle, edges: Vec<Edge>, ny: usize) -> Vec<Edge> {
    let mut st: Vec<Edge> = Vec::new();
    for e in edges {
        if let Some(top) = st.last() {
            if is_y_edge(&e, ny) && e == target.edge_inv(top) {
                st.pop();
                continue;
            }
        }
        st.push(e);
    }
    while st.len() >= 2 {
        let (a, b) = (&st[0], &st[st.len() - 1]);
        if is_y_edge(a, ny) && *a == target.edge_inv(b) {
            st.remove(0);
            st.pop();
        } else {
            break;
        }
    }
    st
}

fn is_image_circuit(edges: &[Edge]) -> bool {
    if edges.is_empty() || edges[0].from != edges[edges.len() - 1].to {
        return false;
    }
    let origins: BTreeSet<&Vertex> = edges.iter().map(|e| &e.from).collect();
    origins.len() == edges.len()
}

/// Injectivity of `ι` on the radius ball of `Γ̂(L, ℍ^r_{L,Y}, S)` and the
/// images of its circuits through `1` of length at most `radius`.
pub fn iota_check(g: &Group, st: &InducedStructure, radius: usize) -> Result<IotaReport> {
    let graph = st.coned(g);
    let target = iota_target(g, st);
    let ny = y_count(g, st);
    let ball = graph.ball(radius);
    let mut images: BTreeMap<Vertex, IVertex> = BTreeMap::new();
    let mut collisions = Vec::new();
    for (v, _) in &ball {
        let img = graph.iota_vertex(v)?;
        match images.get(&img) {
            Some(u) if u != v => collisions.push((u.clone(), v.clone(), img)),
            Some(_) => {}
            None => {
                images.insert(img, v.clone());
            }
        }
    }
    let circuits = graph.circuits(radius);
    let mut report = IotaReport {
        radius,
        vertices: ball.len(),
        collisions,
        circuits: circuits.len(),
        cone_circuits: 0,
        bad_images: Vec::new(),
        max_ratio: 0.0,
    };
    for c in &circuits {
        if c.iter().any(|e| matches!(e.label, ILabel::ToCone(_) | ILabel::FromCone(_))) {
            report.cone_circuits += 1;
        }
        let mut img = Vec::new();
        for e in c {
            img.extend(graph.iota_edge(&target, e)?);
        }
        let img = cancel_y(&target, img, ny);
        report.max_ratio = report.max_ratio.max(img.len() as f64 / c.len() as f64);
        if !is_image_circuit(&img) || img.len() > 2 * c.len() {
            report.bad_images.push((c.len(), img.len()));
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeCertificate {
    pub structure: InducedStructure,
    /// Distinct edges of the enumerated part of the image of `ι`.
    pub image_edges: usize,
    pub forest: bool,
    pub qc: QcReport,
}

impl TreeCertificate {
    pub fn certified(&self) -> bool {
        self.forest && self.qc.passed()
    }
}

/// Representatives `t(v)` of the folded-graph vertices other than the base
/// that carry at least two factors; `{1}` when there are none.
pub fn tree_y(g: &Group, l: &SubgroupGraph) -> Vec<Element> {
    let n = l.len();
    let mut tree: Vec<Option<Element>> = vec![None; n];
    tree[l.base] = Some(g.identity());
    let mut queue = VecDeque::from([l.base]);
    while let Some(v) = queue.pop_front() {
        let tv = tree[v].clone().unwrap();
        let mut next: Vec<(usize, Element)> = Vec::new();
        for (&f, &(o, t)) in &l.member[v] {
            let order = l.orbits[o].slots.len() as u32;
            for s in 0..order {
                let tb = match &g.factors[f].kind {
                    crate::FactorKind::Finite(tb) => tb,
                    crate::FactorKind::Cyclic => continue,
                };
                let w = l.orbits[o].slots[tb.mul(t, s) as usize];
                next.push((w, g.nf_element(f, FactorElem::Fin(s))));
            }
        }
        for (&f, &w) in &l.zout[v] {
            next.push((w, g.nf_element(f, FactorElem::Int(BigInt::from(1)))));
        }
        for (&f, &w) in &l.zin[v] {
            next.push((w, g.nf_element(f, FactorElem::Int(BigInt::from(-1)))));
        }
        for (w, step) in next {
            if tree[w].is_none() {
                tree[w] = Some(g.mul(&tv, &step));
                queue.push_back(w);
            }
        }
    }
    let mut ys = Vec::new();
    for v in 0..n {
        if v == l.base {
            continue;
        }
        let mut factors: BTreeSet<usize> = l.member[v].keys().copied().collect();
        factors.extend(l.zout[v].keys().copied());
        factors.extend(l.zin[v].keys().copied());
        if factors.len() >= 2 {
            if let Some(t) = &tree[v] {
                ys.push(t.clone());
            }
        }
    }
    if ys.is_empty() {
        ys.push(g.identity());
    }
    ys
}

/// Geodesic of the coned-off graph of a free product of peripheral factors
/// from `x` to `x·s`, one cone-biedge per syllable of `s`.
fn syllable_path(g: &Group, x: &Element, s: &Element) -> Result<Vec<(Vertex, Vertex)>> {
    let mut out = Vec::new();
    let mut cur = x.clone();
    for syl in &nf(s).0 {
        let cone = Vertex::Cone(syl.factor, g.coset_key(&cur, syl.factor)?);
        let next = g.mul(&cur, &g.nf_element(syl.factor, syl.elem.clone()));
        out.push((Vertex::Group(cur.clone()), cone.clone()));
        out.push((cone, Vertex::Group(next.clone())));
        cur = next;
    }
    Ok(out)
}

/// Certificate that `L` is quasiconvex in a free product of its peripheral
/// factors: `Y` from the folded graph, `S` from its spanning tree, the
/// image of `ι` on the elements of `L` in the relative ball checked to be a
/// forest, and [`prequasiconvex`] with that `Y`.
pub fn rel0hyp_certify(g: &Group, l: &SubgroupGraph, radius: usize) -> Result<TreeCertificate> {
    require_free(g)?;
    if !g.x_letters().is_empty() || g.factors.iter().any(|f| !f.peripheral) {
        return Err(Error::BackendMismatch {
            expected: "free product of peripheral factors",
        });
    }
    let m = radius.max(1) as u64;
    let y = tree_y(g, l);
    let mut st = induced_structure(g, l, &y, m)?;
    let spanning = l.spanning_generators(g);
    st.s = spanning.into_iter().map(|s| (s, Origin::Edge)).collect();
    let oracle = Oracle::new(g, GraphKind::Relative, m);
    let ball = oracle.ball(&Vertex::Group(g.identity()), radius as i64)?;
    let mut elems = vec![g.identity()];
    for e in ball.elements() {
        if !g.is_identity(&e) && l.contains(g, &e)? {
            elems.push(e);
        }
    }
    let mut edges: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    for x in &elems {
        let mut pieces = Vec::new();
        for (s, _) in &st.s {
            pieces.extend(syllable_path(g, x, s)?);
        }
        for inst in &st.reduced {
            let xy = g.mul(x, &inst.y);
            pieces.extend(syllable_path(g, x, &inst.y)?);
            pieces.push((
                Vertex::Group(xy.clone()),
                Vertex::Cone(inst.factor, g.coset_key(&xy, inst.factor)?),
            ));
        }
        for (a, b) in pieces {
            edges.insert(if a <= b { (a, b) } else { (b, a) });
        }
    }
    let mut index: HashMap<&Vertex, usize> = HashMap::new();
    for (a, b) in &edges {
        let n = index.len();
        index.entry(a).or_insert(n);
        let n = index.len();
        index.entry(b).or_insert(n);
    }
    let mut parent: Vec<usize> = (0..index.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut forest = true;
    for (a, b) in &edges {
        let (ra, rb) = (find(&mut parent, index[a]), find(&mut parent, index[b]));
        if ra == rb {
            forest = false;
        } else {
            parent[ra] = rb;
        }
    }
    let qc = prequasiconvex(g, l, &y, radius, Mode::AllGeodesics)?;
    Ok(TreeCertificate {
        structure: st,
        image_edges: edges.len(),
        forest,
        qc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;
    use crate::literal::parse_element;

    fn el(g: &Group, s: &str) -> Element {
        parse_element(g, s).unwrap()
    }

    fn sub(g: &Group, gens: &[&str]) -> SubgroupGraph {
        let v: Vec<Element> = gens.iter().map(|s| el(g, s)).collect();
        SubgroupGraph::fold(g, &v).unwrap()
    }

    #[test]
    fn cyclic_subgroup_covered_by_one_translate() {
        let g = instances::free_rel_a();
        let l = sub(&g, &["a:1.b"]);
        let r = prequasiconvex(&g, &l, &[el(&g, "a:1")], 6, Mode::AllGeodesics).unwrap();
        assert!(r.passed(), "{:?}", r.outcome);
        assert!(r.checked > 0);
    }

    #[test]
    fn cyclic_subgroup_without_translates_fails_at_a() {
        let g = instances::free_rel_a();
        let l = sub(&g, &["a:1.b"]);
        let r = prequasiconvex(&g, &l, &[], 4, Mode::AllGeodesics).unwrap();
        match r.outcome {
            QcOutcome::Fail { l: t, vertex, geodesic } => {
                assert_eq!(t, el(&g, "a:1.b"));
                assert_eq!(vertex, el(&g, "a:1"));
                assert_eq!(geodesic.len(), 2);
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn whole_group_and_trivial_subgroup_pass() {
        let g = instances::z2_z3();
        let all = sub(&g, &["a", "b"]);
        assert!(prequasiconvex(&g, &all, &[], 4, Mode::AllGeodesics).unwrap().passed());
        let triv = sub(&g, &[]);
        let r = quasiconvex(&g, &triv, &[], 4, Mode::AllGeodesics, None).unwrap();
        assert!(r.passed());
        assert_eq!(r.checked, 0);
    }

    #[test]
    fn quasiconvex_examples_in_z2_z3() {
        let g = instances::z2_z3();
        let l = sub(&g, &["a.b"]);
        let r = quasiconvex(&g, &l, &[el(&g, "a")], 6, Mode::AllGeodesics, None).unwrap();
        assert!(r.passed());
        assert!(r.condition_b.unwrap().pairs > 0);
        let d = sub(&g, &["a", "b.a.b2"]);
        let r = quasiconvex(&g, &d, &[g.identity(), el(&g, "b")], 6, Mode::AllGeodesics, None).unwrap();
        assert!(r.passed(), "{:?}", r.outcome);
    }

    #[test]
    fn strong_examples() {
        let g = instances::z2_z3();
        let samples: Vec<Element> = ["1", "a", "b", "a.b", "b.a"].iter().map(|s| el(&g, s)).collect();
        let r = strong_check(&g, &sub(&g, &["a.b"]), &samples).unwrap();
        assert!(r.strong() && r.exceptional.is_empty());
        let r = strong_check(&g, &sub(&g, &["a", "b.a.b2"]), &samples).unwrap();
        assert!(r.strong());
        let gs: Vec<String> = r.exceptional.iter().map(|x| g.elem_str(&x.g)).collect();
        assert!(gs.contains(&"1".to_string()) && gs.contains(&"B:b".to_string()), "{gs:?}");
        let g = instances::free_rel_a();
        let r = strong_check(&g, &sub(&g, &["a:1"]), &[g.identity()]).unwrap();
        assert!(!r.strong());
    }

    #[test]
    fn distortion_of_cyclic_subgroup_has_slope_two() {
        let g = instances::z2_z3();
        let l = sub(&g, &["a.b"]);
        let p = distortion_profile(&g, &[el(&g, "a.b")], Vec::new(), Some(&l), 8, 8).unwrap();
        assert!((p.forward.slope - 2.0).abs() < 1e-9);
        assert!(p.forward.max_residual < 1e-9);
        assert!(p.bound_holds && p.generation_checked);
    }

    #[test]
    fn generation_failure_is_reported() {
        let g = instances::z2_z3();
        let l = sub(&g, &["a", "b"]);
        let e = distortion_profile(&g, &[el(&g, "a")], Vec::new(), Some(&l), 3, 3).unwrap_err();
        assert!(matches!(e, Error::GenerationFailure(_)));
    }

    #[test]
    fn witness_paths() {
        let g = instances::free_rel_a();
        let l = sub(&g, &["a:1.b"]);
        let rows = rundqc_witness(&g, &l, &[el(&g, "a:1")], 1.0, 0.0, 4).unwrap();
        assert!(rows[0].qualifies() && rows[0].path.as_ref().unwrap().is_empty());
        assert!(rows.iter().all(|r| r.qualifies()));
        let rows = rundqc_witness(&g, &l, &[], 1.0, 0.0, 4).unwrap();
        let ab = rows.iter().find(|r| r.l == el(&g, "a:1.b")).unwrap();
        assert!(ab.path.is_none());
    }

    #[test]
    fn induced_structure_examples() {
        let g = instances::z2_z3();
        let d = sub(&g, &["a", "b.a.b2"]);
        let st = induced_structure(&g, &d, &[g.identity(), el(&g, "b")], 3).unwrap();
        assert_eq!(st.reduced.len(), 2);
        assert!(st.infinite().is_empty());
        assert!(st.s.is_empty());
        let c = sub(&g, &["a.b"]);
        let st = induced_structure(&g, &c, &[el(&g, "a")], 3).unwrap();
        assert!(st.reduced.is_empty());
        assert_eq!(st.s.len(), 1);
        assert!(c.contains(&g, &st.s[0].0).unwrap());
        let t = sub(&g, &[]);
        let st = induced_structure(&g, &t, &[], 3).unwrap();
        assert!(st.s.is_empty() && st.reduced.is_empty());
        let e = induced_structure(&g, &d, &[el(&g, "b"), el(&g, "a.b")], 3).unwrap_err();
        assert_eq!(e, Error::YNotReduced);
    }

    #[test]
    fn iota_on_dihedral_subgroup() {
        let g = instances::z2_z3();
        let d = sub(&g, &["a", "b.a.b2"]);
        let st = induced_structure(&g, &d, &[g.identity(), el(&g, "b")], 3).unwrap();
        let r = iota_check(&g, &st, 6).unwrap();
        assert!(r.ok(), "{r:?}");
        assert_eq!(r.circuits, 0);
        assert!(r.vertices > 6);
        let bad = induced_structure_unreduced(&g, &d, &[g.identity(), el(&g, "b"), el(&g, "a.b")], 3).unwrap();
        let r = iota_check(&g, &bad, 6).unwrap();
        assert!(!r.collisions.is_empty());
    }

    #[test]
    fn iota_images_of_circuits() {
        let g = instances::z2_z3();
        let l = sub(&g, &["a.b", "b.a"]);
        let st = induced_structure(&g, &l, &[el(&g, "a")], 3).unwrap();
        let r = iota_check(&g, &st, 6).unwrap();
        assert!(r.ok(), "{r:?}");
    }

    #[test]
    fn tree_certificates() {
        let g = instances::z2_z3();
        let c = rel0hyp_certify(&g, &sub(&g, &["a.b"]), 8).unwrap();
        assert!(c.certified());
        assert_eq!(c.structure.ys, vec![g.identity(), el(&g, "a")]);
        let c = rel0hyp_certify(&g, &sub(&g, &["a"]), 8).unwrap();
        assert!(c.certified());
        assert_eq!(c.structure.ys, vec![g.identity()]);
        let f = instances::free_rel_a();
        assert!(matches!(
            rel0hyp_certify(&f, &sub(&f, &["a:1"]), 4),
            Err(Error::BackendMismatch { .. })
        ));
    }
}
