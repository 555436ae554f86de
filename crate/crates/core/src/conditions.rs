//! Double-coset condition, free-splitting detection, fineness and
//! slim-triangle samplers, the bounded coset penetration harness, embedded
//! balls and relative Dehn areas.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Backend, Certificate, Element, FactorKind, Group, Letter, Tri, Word};
use crate::algebra::AreaOutcome;
use crate::error::{Error, Result};
use crate::graphs::{Edge, GraphKind, Label, Oracle, Path, Vertex};
use crate::literal::{parse_element, parse_letter};
use crate::paths::{decompose, is_quasigeodesic, QuasiGeodesic};
use crate::subgroups::{double_coset_members, MemberSet, SubgroupGraph};

/// `ℍ_{L,y,y′}`: factors `H` with `L ∩ yHy′⁻¹ ≠ ∅`, with the members found.
pub fn condition_b(
    g: &Group,
    l: &SubgroupGraph,
    y: &Element,
    y2: &Element,
) -> Result<Vec<(usize, MemberSet)>> {
    if l.coset_equal(g, y, y2)? {
        return Err(Error::SameCoset);
    }
    let mut out = Vec::new();
    for f in g.peripheral() {
        let m = double_coset_members(g, l, y, f, y2)?;
        if !m.is_empty() {
            out.push((f, m));
        }
    }
    Ok(out)
}

/// Three-way split of the peripheral factors with respect to the smallest
/// subfamily over which the group splits freely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionReport {
    pub verified: Vec<usize>,
    pub excluded: Vec<usize>,
    pub undetermined: Vec<usize>,
    /// Per verified factor: a path from 1 to some `h ∈ H∖{1}` avoiding
    /// `H×(H∖{1})`, closed into a cycle by the edge back to 1.
    pub witnesses: BTreeMap<usize, Path>,
    pub radius: usize,
}

fn in_factor(g: &Group, v: &Vertex, f: usize) -> Result<bool> {
    match v {
        Vertex::Group(x) => Ok(g.factor_member(x, f)?.is_some()),
        Vertex::Cone(..) => Ok(false),
    }
}

fn letter_in(l: &Label, f: usize) -> bool {
    matches!(l, Label::Letter(Letter::H { factor, .. }) if *factor == f)
}

/// Vertices reachable from 1 within `n` steps of `Γ̄` without using edges
/// from `H` labeled by `H∖{1}`; cyclic alphabets are truncated at `m`.
fn avoiding_ball(g: &Group, f: usize, n: usize, m: u64) -> Result<(Oracle<'_>, Vec<(Vertex, Option<Edge>)>)> {
    let oracle = Oracle::new(g, GraphKind::Relative, m);
    let start = Vertex::Group(g.identity());
    let mut parent: BTreeMap<Vertex, Option<Edge>> = BTreeMap::new();
    let mut order = vec![start.clone()];
    parent.insert(start.clone(), None);
    let mut layer = vec![start];
    for _ in 0..n {
        let mut next = Vec::new();
        for v in &layer {
            let inside = in_factor(g, v, f)?;
            for e in oracle.neighbors(v)? {
                if inside && letter_in(&e.label, f) {
                    continue;
                }
                if !parent.contains_key(&e.to) {
                    if parent.len() >= oracle.limits.max_vertices {
                        return Err(Error::BudgetExceeded(oracle.limits.max_vertices));
                    }
                    parent.insert(e.to.clone(), Some(e.clone()));
                    order.push(e.to.clone());
                    next.push(e.to);
                }
            }
        }
        layer = next;
    }
    let out = order
        .into_iter()
        .map(|v| {
            let p = parent[&v].clone();
            (v, p)
        })
        .collect();
    Ok((oracle, out))
}

/// Elements of `H∖{1}` joined to 1 by paths of length at most `n` that
/// avoid `H×(H∖{1})`, with cyclic alphabets truncated at `r`.
pub fn embedded_ball(g: &Group, f: usize, n: usize, r: usize) -> Result<Vec<Element>> {
    let (_, reached) = avoiding_ball(g, f, n, r as u64)?;
    let mut out = Vec::new();
    for (v, _) in reached {
        if let Vertex::Group(x) = &v {
            if !g.is_identity(x) && in_factor(g, &v, f)? {
                out.push(x.clone());
            }
        }
    }
    Ok(out)
}

fn trace(reached: &[(Vertex, Option<Edge>)], target: &Vertex, start: Vertex) -> Path {
    let map: BTreeMap<&Vertex, &Option<Edge>> = reached.iter().map(|(v, e)| (v, e)).collect();
    let mut edges = Vec::new();
    let mut cur = target.clone();
    while let Some(Some(e)) = map.get(&cur) {
        edges.push(e.clone());
        cur = e.from.clone();
    }
    edges.reverse();
    Path { start, edges }
}

/// Detects peripheral factors that must belong to every subfamily over
/// which the group splits freely, and factors that can be split off.
pub fn free_decomposition(g: &Group, radius: usize) -> Result<DecompositionReport> {
    let mut rep = DecompositionReport {
        verified: Vec::new(),
        excluded: Vec::new(),
        undetermined: Vec::new(),
        witnesses: BTreeMap::new(),
        radius,
    };
    for f in g.peripheral() {
        let found = match avoiding_ball(g, f, radius, radius as u64) {
            Ok((oracle, reached)) => {
                let mut hit = None;
                for (v, _) in &reached {
                    if let Vertex::Group(x) = v {
                        if !g.is_identity(x) && in_factor(g, v, f)? {
                            hit = Some(v.clone());
                            break;
                        }
                    }
                }
                match hit {
                    Some(h) => {
                        let mut p = trace(&reached, &h, Vertex::Group(g.identity()));
                        let hx = h.element().unwrap();
                        let back = g.factor_member(&g.inv(hx), f)?.expect("member of factor");
                        p.edges.push(oracle.step(&h, &Label::Letter(Letter::H { factor: f, elem: back }))?);
                        // The closing edge must be an isolated component with
                        // distinct ends.
                        let d = decompose(g, &p)?;
                        let last = p.len() - 1;
                        let iso = d.components.iter().enumerate().any(|(i, c)| {
                            c.factor == f
                                && c.edge_indices(p.len()).contains(&last)
                                && c.from != c.to
                                && d.is_isolated(i)
                        });
                        iso.then_some(p)
                    }
                    None => None,
                }
            }
            Err(Error::CosetKeyUnknown) => None,
            Err(e) => return Err(e),
        };
        match found {
            Some(p) => {
                rep.verified.push(f);
                rep.witnesses.insert(f, p);
            }
            None if syllable_free(g, f) => rep.excluded.push(f),
            None => rep.undetermined.push(f),
        }
    }
    Ok(rep)
}

/// No generator value uses a syllable of the factor; then the retraction
/// killing it fixes every generator, which certifies the splitting.
fn syllable_free(g: &Group, f: usize) -> bool {
    if g.backend != Backend::FreeProduct {
        return false;
    }
    g.gen_values.iter().all(|v| v.0.iter().all(|s| s.factor != f))
}

/// Parses `g~F` (cone edge into `v(gF)`) or `g>L` (edge labeled `L`).
pub fn parse_edge(oracle: &Oracle, s: &str) -> Result<Edge> {
    let g = oracle.group;
    if let Some((el, f)) = s.split_once('~') {
        let x = g.canonical(&parse_element(g, el)?)?;
        let f = g.factor_index(f)?;
        return oracle.step(&Vertex::Group(x), &Label::ToCone(f));
    }
    if let Some((el, l)) = s.split_once('>') {
        let x = g.canonical(&parse_element(g, el)?)?;
        let letter = parse_letter(g, l, true)?.ok_or_else(|| Error::InvalidSpec(s.to_string()))?;
        return oracle.step(&Vertex::Group(x), &Label::Letter(letter));
    }
    Err(Error::InvalidSpec(s.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinenessSample {
    pub n: usize,
    /// `(R, circuits)` rows.
    pub growth: Vec<(usize, usize)>,
    pub stabilized: bool,
}

/// Circuits of length at most `n` starting with the edge `e`, in the coned
/// graph whose cyclic cones are truncated at `m`.
pub fn count_circuits(oracle: &Oracle, e: &Edge, n: usize) -> Result<usize> {
    let start = e.from.clone();
    let ball = oracle.ball(&start, (n / 2) as i64)?;
    let back = oracle.edge_inv(e);
    let mut visited: HashSet<Vertex> = HashSet::from([start.clone(), e.to.clone()]);
    let mut count = 0;
    circuit_dfs(oracle, &ball, &start, &e.to, 1, n, &back, &mut visited, &mut count)?;
    Ok(count)
}

#[allow(clippy::too_many_arguments)]
fn circuit_dfs(
    oracle: &Oracle,
    ball: &crate::graphs::Ball,
    start: &Vertex,
    cur: &Vertex,
    depth: usize,
    n: usize,
    back: &Edge,
    visited: &mut HashSet<Vertex>,
    count: &mut usize,
) -> Result<()> {
    if depth >= n {
        return Ok(());
    }
    for e in oracle.neighbors(cur)? {
        if e.to == *start {
            if e != *back {
                *count += 1;
            }
            continue;
        }
        let Some(d) = ball.dist(&e.to) else { continue };
        if visited.contains(&e.to) || depth + 1 + d > n {
            continue;
        }
        visited.insert(e.to.clone());
        circuit_dfs(oracle, ball, start, &e.to, depth + 1, n, back, visited, count)?;
        visited.remove(&e.to);
    }
    Ok(())
}

/// Circuit counts through an edge for each exploration radius `R`, where
/// `R` is also the truncation of cyclic cones.
pub fn fineness_sample(g: &Group, edge: &str, n: usize, radii: &[usize]) -> Result<FinenessSample> {
    let mut growth = Vec::new();
    for &r in radii {
        let oracle = Oracle::new(g, GraphKind::Coned, r as u64);
        let e = parse_edge(&oracle, edge)?;
        growth.push((r, count_circuits(&oracle, &e, n)?));
    }
    let stabilized = growth.len() < 2 || growth[growth.len() - 1].1 == growth[growth.len() - 2].1;
    Ok(FinenessSample {
        n,
        growth,
        stabilized,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BcpRow {
    Rejected(String),
    /// Capped `d_Y` for each component left unmatched; `None` beyond the cap.
    Accepted(Vec<(usize, Option<usize>)>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BcpReport {
    pub rows: Vec<BcpRow>,
    pub max: Option<usize>,
}

/// Checks the bounded coset penetration inequality on given path pairs.
/// `oracle` is the relative graph used for the quasigeodesic test; `y` is
/// the auxiliary generating system measuring `d_Y`.
pub fn bcp_harness(
    oracle: &Oracle,
    pairs: &[(Path, Path)],
    mu: f64,
    c: f64,
    y: Vec<(String, Element)>,
    cap: usize,
) -> Result<BcpReport> {
    let g = oracle.group;
    let dy = Oracle::with_system(g, GraphKind::Plain, 0, y, false);
    let mut rows = Vec::new();
    let mut max = None;
    for (p, q) in pairs {
        if p.start != q.start || p.end() != q.end() {
            rows.push(BcpRow::Rejected("endpoints differ".into()));
            continue;
        }
        let (dp, dq) = (decompose(g, p)?, decompose(g, q)?);
        if !dp.backtracking_free() || !dq.backtracking_free() {
            rows.push(BcpRow::Rejected("backtracking".into()));
            continue;
        }
        let mut qg = true;
        for path in [p, q] {
            match is_quasigeodesic(oracle, path, mu, c, cap)? {
                QuasiGeodesic::Yes => {}
                QuasiGeodesic::No(..) => {
                    rows.push(BcpRow::Rejected("not a quasigeodesic".into()));
                    qg = false;
                    break;
                }
                QuasiGeodesic::Unknown => {
                    rows.push(BcpRow::Rejected("quasigeodesic test beyond cap".into()));
                    qg = false;
                    break;
                }
            }
        }
        if !qg {
            continue;
        }
        let mut out = Vec::new();
        let mut offset = 0;
        for (a, b) in [(&dp, &dq), (&dq, &dp)] {
            for i in 0..a.components.len() {
                let matched = (0..b.components.len()).any(|j| a.connected(i, b, j));
                if !matched {
                    let s = &a.components[i];
                    let d = dy.distance(&s.from, &s.to, cap)?;
                    if let Some(d) = d {
                        max = Some(max.map_or(d, |m: usize| m.max(d)));
                    }
                    out.push((offset + i, d));
                }
            }
            offset += a.components.len();
        }
        rows.push(BcpRow::Accepted(out));
    }
    Ok(BcpReport { rows, max })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaEstimate {
    pub delta: usize,
    pub triangles: usize,
}

/// Thinness of sampled geodesic triangles with corners in the `R`-ball,
/// using lexicographically first geodesics.
pub fn slim_triangle_delta(oracle: &Oracle, r: usize, trials: usize, seed: u64) -> Result<DeltaEstimate> {
    let g = oracle.group;
    let ball = oracle.ball(&Vertex::Group(g.identity()), r as i64)?;
    let pts: Vec<Vertex> = ball.order.iter().filter(|v| !v.is_cone()).cloned().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut delta = 0;
    for _ in 0..trials {
        let corners: Vec<Vertex> = (0..3)
            .map(|_| pts.choose(&mut rng).expect("nonempty ball").clone())
            .collect();
        let sides = [
            oracle.first_geodesic(&corners[0], &corners[1], 2 * r)?,
            oracle.first_geodesic(&corners[1], &corners[2], 2 * r)?,
            oracle.first_geodesic(&corners[2], &corners[0], 2 * r)?,
        ];
        for i in 0..3 {
            let others: HashSet<&Vertex> = (0..3)
                .filter(|&j| j != i)
                .flat_map(|j| sides[j].vertices())
                .collect();
            for v in sides[i].vertices() {
                let near = oracle.ball(v, sides[i].len() as i64)?;
                let d = others
                    .iter()
                    .filter_map(|w| near.dist(w))
                    .min()
                    .unwrap_or(sides[i].len());
                delta = delta.max(d);
            }
        }
    }
    Ok(DeltaEstimate {
        delta,
        triangles: trials,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AreaResult {
    pub word: Word,
    pub area: usize,
    pub certificate: Certificate,
}

/// Length bound for intermediate words of the area search.
pub fn area_length_bound(g: &Group, w: &Word) -> usize {
    let r = g.engine().map(|e| e.max_relator_len()).unwrap_or(0);
    w.len() + r
}

/// Least number of conjugated relators whose product is `w` in the free
/// group, searched breadth-first up to `cap`.
pub fn area(g: &Group, w: &Word, cap: usize) -> Result<AreaResult> {
    let engine = g.engine().ok_or(Error::BackendMismatch {
        expected: "presented",
    })?;
    match engine.area_codes(g, w, cap, area_length_bound(g, w)) {
        AreaOutcome::Found(certificate) => Ok(AreaResult {
            word: w.clone(),
            area: certificate.len(),
            certificate,
        }),
        AreaOutcome::CapExceeded => match g.equal(&g.evaluate(w), &g.identity(), g.budget).verdict {
            Tri::Yes => Err(Error::AreaCapExceeded(cap)),
            _ => Err(Error::NotTrivialWithinBudget),
        },
        AreaOutcome::NotTrivial => Err(Error::NotTrivialWithinBudget),
    }
}

/// Freely reduced words of length at most `n` over `X ⊔ 𝓗` (cyclic
/// alphabets truncated at `m`) that represent the identity.
pub fn trivial_words(g: &Group, n: usize, m: u64) -> Result<Vec<Word>> {
    let mut letters = g.x_letters();
    for f in g.peripheral() {
        letters.extend(g.h_letters(f, m));
    }
    let mut out = Vec::new();
    let mut stack: Vec<Letter> = Vec::new();
    words_dfs(g, &letters, n, &mut stack, &mut out)?;
    Ok(out)
}

fn words_dfs(
    g: &Group,
    letters: &[Letter],
    n: usize,
    stack: &mut Vec<Letter>,
    out: &mut Vec<Word>,
) -> Result<()> {
    let w = Word(stack.clone());
    let x = g.evaluate(&w);
    let trivial = match g.canonical(&x) {
        Ok(c) => g.is_identity(&c),
        Err(_) => g.equal(&x, &g.identity(), g.budget).verdict == Tri::Yes,
    };
    if trivial {
        out.push(w);
    }
    if stack.len() == n {
        return Ok(());
    }
    for l in letters {
        if let Some(last) = stack.last() {
            if g.letter_inv(last) == *l {
                continue;
            }
        }
        stack.push(l.clone());
        words_dfs(g, letters, n, stack, out)?;
        stack.pop();
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DehnTable {
    /// `(n, trivial words of length n, largest area, words beyond the cap)`.
    pub rows: Vec<(usize, usize, usize, usize)>,
    pub entries: Vec<(Word, Option<usize>)>,
}

/// Largest area among trivial words of each length up to `n`.
pub fn dehn_table(g: &Group, n: usize, m: u64, cap: usize) -> Result<DehnTable> {
    let mut rows: Vec<(usize, usize, usize, usize)> = (0..=n).map(|k| (k, 0, 0, 0)).collect();
    let mut entries = Vec::new();
    for w in trivial_words(g, n, m)? {
        let a = match area(g, &w, cap) {
            Ok(r) => Some(r.area),
            Err(Error::AreaCapExceeded(_)) => None,
            Err(e) => return Err(e),
        };
        let row = &mut rows[w.len()];
        row.1 += 1;
        match a {
            Some(a) => row.2 = row.2.max(a),
            None => row.3 += 1,
        }
        entries.push((w, a));
    }
    for k in 1..rows.len() {
        rows[k].2 = rows[k].2.max(rows[k - 1].2);
    }
    Ok(DehnTable { rows, entries })
}

/// Replaces every cone-biedge of a coned circuit by a shortest path in
/// `Γ(G,Y)`, giving a cycle of `Γ(G, X⊔Y)`.
pub fn circuit_transform<'g>(
    oracle: &Oracle<'g>,
    c: &Path,
    y: Vec<(String, Element)>,
    a_bound: usize,
) -> Result<(Oracle<'g>, Path)> {
    let g = oracle.group;
    let combined = Oracle::with_system(g, GraphKind::Plain, 0, y.clone(), true);
    let ys = Oracle::with_system(g, GraphKind::Plain, 0, y, false);
    let mut edges = Vec::new();
    let mut i = 0;
    while i < c.len() {
        let e = &c.edges[i];
        match &e.label {
            Label::ToCone(_) => {
                let back = c.edges.get(i + 1).ok_or(Error::DanglingConeEdge(i))?;
                let rep = ys
                    .first_geodesic(&e.from, &back.to, a_bound)
                    .map_err(|_| Error::ReplacementNotFound(i))?;
                edges.extend(rep.edges);
                i += 2;
            }
            Label::FromCone(_) => return Err(Error::DanglingConeEdge(i)),
            _ => {
                edges.push(e.clone());
                i += 1;
            }
        }
    }
    Ok((
        combined,
        Path {
            start: c.start.clone(),
            edges,
        },
    ))
}

/// Whether the factor is finite.
pub fn is_finite_factor(g: &Group, f: usize) -> bool {
    matches!(g.factors[f].kind, FactorKind::Finite(_))
}

/// Sorted distinct factor ids, for reports.
pub fn factor_ids(g: &Group, fs: &[usize]) -> Vec<String> {
    let set: BTreeSet<&str> = fs.iter().map(|&f| g.factors[f].id.as_str()).collect();
    set.into_iter().map(str::to_string).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;
    use crate::literal::parse_word;
    use crate::paths::parse_path;

    fn el(g: &Group, s: &str) -> Element {
        parse_element(g, s).unwrap()
    }

    #[test]
    fn condition_b_lists() {
        let g = instances::z2_z3();
        let l = SubgroupGraph::fold(&g, &[el(&g, "a.b")]).unwrap();
        let r = condition_b(&g, &l, &g.identity(), &el(&g, "a")).unwrap();
        assert_eq!(r.iter().map(|x| x.0).collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(
            condition_b(&g, &l, &g.identity(), &g.identity()),
            Err(Error::SameCoset)
        );
    }

    #[test]
    fn decomposition_examples() {
        let g = instances::z2_z3_with("c", "a.b");
        let r = free_decomposition(&g, 3).unwrap();
        assert_eq!(r.verified, vec![0, 1]);
        assert_eq!(r.witnesses[&0].len(), 3);
        let g = instances::z2_z3();
        let r = free_decomposition(&g, 3).unwrap();
        assert!(r.verified.is_empty());
        assert_eq!(r.excluded, vec![0, 1]);
        let g = instances::z2_z3_with("c", "a");
        let r = free_decomposition(&g, 3).unwrap();
        assert_eq!(r.verified, vec![0]);
        assert_eq!(r.excluded, vec![1]);
    }

    #[test]
    fn tree_has_no_circuits() {
        let g = instances::z2_z3();
        let s = fineness_sample(&g, "1~A", 6, &[2, 3]).unwrap();
        assert!(s.growth.iter().all(|r| r.1 == 0));
    }

    #[test]
    fn fineness_grows_for_z2() {
        let g = instances::z2_rel_x();
        let s = fineness_sample(&g, "1~A", 6, &[4, 5, 6]).unwrap();
        assert!(s.growth.windows(2).all(|w| w[0].1 < w[1].1));
        assert!(s.growth.iter().all(|&(r, c)| c >= r - 2));
        let two = fineness_sample(&g, "1~A", 2, &[4]).unwrap();
        assert_eq!(two.growth[0].1, 0);
    }

    #[test]
    fn embedded_balls() {
        let g = instances::z2_rel_x();
        let b3 = embedded_ball(&g, 0, 3, 3).unwrap();
        let b5 = embedded_ball(&g, 0, 3, 5).unwrap();
        assert!(b3.len() < b5.len());
        assert!(b5.contains(&el(&g, "x.x.x.x.x")));
        assert!(embedded_ball(&g, 0, 0, 5).unwrap().is_empty());
        let t = instances::z2_z3();
        assert!(embedded_ball(&t, 0, 4, 4).unwrap().is_empty());
    }

    #[test]
    fn bcp_family_grows() {
        let g = instances::z2_rel_x();
        let o = Oracle::new(&g, GraphKind::Relative, 4);
        let one = Vertex::Group(g.identity());
        let y = vec![("x".to_string(), el(&g, "x")), ("t".to_string(), el(&g, "t"))];
        let pairs: Vec<(Path, Path)> = (1..=4)
            .map(|k| {
                (
                    parse_path(&o, one.clone(), &format!("A:{k}.t")).unwrap(),
                    parse_path(&o, one.clone(), &format!("t.A:{k}")).unwrap(),
                )
            })
            .collect();
        let r = bcp_harness(&o, &pairs, 1.0, 0.0, y, 8).unwrap();
        for (k, row) in r.rows.iter().enumerate() {
            match row {
                BcpRow::Accepted(v) => assert!(v.iter().all(|x| x.1 == Some(k + 1))),
                BcpRow::Rejected(why) => panic!("{why}"),
            }
        }
        assert_eq!(r.max, Some(4));
    }

    #[test]
    fn tree_triangles_are_thin() {
        let g = instances::z2_z3();
        let o = Oracle::new(&g, GraphKind::Relative, 1);
        assert_eq!(slim_triangle_delta(&o, 3, 20, 7).unwrap().delta, 0);
        let z = instances::z2();
        let p = Oracle::new(&z, GraphKind::Plain, 0);
        assert!(slim_triangle_delta(&p, 6, 40, 7).unwrap().delta >= 2);
    }

    #[test]
    fn areas() {
        let g = instances::z2();
        for (w, a) in [("x.t.X.T", 1), ("x.x.t.X.X.T", 2), ("1", 0)] {
            let w = parse_word(&g, w).unwrap();
            let r = area(&g, &w, 6).unwrap();
            assert_eq!(r.area, a);
            assert!(r.certificate.verify(&g, &w));
        }
        assert_eq!(
            area(&g, &parse_word(&g, "x").unwrap(), 3),
            Err(Error::NotTrivialWithinBudget)
        );
    }

    #[test]
    fn areas_of_conjugated_powers() {
        let g = instances::z2();
        for n in 1..=4 {
            let s = format!("{}t.{}T", "x.".repeat(n), "X.".repeat(n));
            let r = area(&g, &parse_word(&g, &s).unwrap(), 6).unwrap();
            assert_eq!(r.area, n);
        }
    }

    #[test]
    fn circuit_transform_gives_short_cycles() {
        let g = instances::z2_rel_x();
        let o = Oracle::new(&g, GraphKind::Coned, 2);
        let c = parse_path(&o, Vertex::Group(g.identity()), "~A:1.t.~A:-1.T").unwrap();
        assert!(crate::paths::classify(&o, &c).unwrap().is_circuit);
        let y = vec![("x".to_string(), el(&g, "x")), ("t".to_string(), el(&g, "t"))];
        let (_, p) = circuit_transform(&o, &c, y, 3).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.end(), &p.start);
    }
}
