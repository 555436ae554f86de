use std::path::Path as FsPath;

use anyhow::{anyhow, Context};
use relhyp_core::conditions::{
    area as area_of, bcp_harness, condition_b, dehn_table, embedded_ball, factor_ids, fineness_sample,
    free_decomposition, slim_triangle_delta, BcpRow,
};
use relhyp_core::graphs::{GraphKind, Oracle, Path, Vertex};
use relhyp_core::literal::{parse_element, parse_word};
use relhyp_core::paths::{classify, decompose, lift, parse_path, pi};
use relhyp_core::quasiconvexity::{
    distortion_profile, induced_letters, induced_structure, iota_check, quasiconvex, rel0hyp_certify,
    strong_check, Mode, QcOutcome, QcReport,
};
use relhyp_core::subgroups::{
    parse_subgroup_spec, peripheral_family, reduce_y as reduce_y_set, reduced_family, SubgroupGraph,
    SubgroupSpec, YSet,
};
use relhyp_core::{Error, Group, Report, Status};

use crate::{need_seed, Budget, FinenessArgs, Graph, PathArgs, SubArgs};

type R = anyhow::Result<Report>;

fn report(op: &str, b: &Budget) -> Report {
    let mut r = Report::new(op);
    r.push("budget.radius", b.radius)
        .push("budget.cap", b.cap)
        .push("budget.truncation", b.truncation)
        .push("budget.seed", b.seed.map(|s| s.to_string()).unwrap_or_else(|| "-".into()))
        .push("budget.area_cap", b.area_cap);
    r
}

fn join(g: &Group, xs: &[relhyp_core::Element]) -> String {
    xs.iter().map(|x| g.elem_str(x)).collect::<Vec<_>>().join(",")
}

fn elem(g: &Group, s: &str) -> anyhow::Result<relhyp_core::Element> {
    let e = parse_element(g, s).with_context(|| format!("element `{s}`"))?;
    Ok(g.canonical(&e)?)
}

fn load_sub(g: &Group, path: &FsPath) -> anyhow::Result<(SubgroupSpec, SubgroupGraph)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let spec = parse_subgroup_spec(g, &text).with_context(|| format!("in {}", path.display()))?;
    let l = SubgroupGraph::fold(g, &spec.generators)?;
    Ok((spec, l))
}

pub fn info(g: &Group, b: &Budget) -> Report {
    let mut r = report("info", b);
    r.push("backend", g.backend.name())
        .push("generators", g.gens.iter().map(|s| s.name.as_str()).collect::<Vec<_>>().join(","));
    for f in &g.factors {
        let kind = match f.table() {
            Some(t) => format!("finite order {}", t.order()),
            None => "Z".to_string(),
        };
        r.push("factor", format!("{} {} {}", f.id, kind, if f.peripheral { "peripheral" } else { "free" }));
    }
    r.push("peripheral", factor_ids(g, &g.peripheral()).join(","));
    r.push("relators", g.relators.len());
    for w in &g.warnings {
        r.push("warning", w);
    }
    r.push("exact", g.is_exact());
    r
}

pub fn reduce(g: &Group, word: &str, b: &Budget) -> R {
    let w = parse_word(g, word)?;
    let mut r = report("reduce", b);
    r.push("input", g.word_str(&w));
    let c = g.canonical(&g.evaluate(&w))?;
    r.push("canonical", g.elem_str(&c));
    r.push("identity", g.is_identity(&c));
    Ok(r)
}

pub fn dist(g: &Group, from: &str, to: &str, graph: Graph, b: &Budget) -> R {
    let o = Oracle::new(g, graph.kind(), b.truncation);
    let (u, v) = (Vertex::Group(elem(g, from)?), Vertex::Group(elem(g, to)?));
    let mut r = report("dist", b);
    r.push("graph", graph.kind().name());
    match o.distance(&u, &v, b.cap)? {
        Some(d) => {
            r.push("distance", d);
        }
        None => {
            r.push("distance", format!(">{}", b.cap));
            r.verdict(Status::Inconclusive, Some(b.cap), None);
        }
    }
    Ok(r)
}

pub fn geo(g: &Group, from: &str, to: &str, graph: Graph, max: usize, b: &Budget) -> R {
    let o = Oracle::new(g, graph.kind(), b.truncation);
    let (u, v) = (Vertex::Group(elem(g, from)?), Vertex::Group(elem(g, to)?));
    let mut r = report("geo", b);
    r.push("graph", graph.kind().name());
    let (paths, truncated) = match o.geodesics(&u, &v, b.cap, max) {
        Ok(x) => x,
        Err(Error::NotWithinCap(cap)) => {
            r.push("distance", format!(">{cap}"));
            r.verdict(Status::Inconclusive, Some(cap), None);
            return Ok(r);
        }
        Err(e) => return Err(e.into()),
    };
    r.push("length", paths.first().map(|p| p.len()).unwrap_or(0));
    r.push("count", paths.len());
    r.push("truncated", truncated);
    for p in &paths {
        r.push("geodesic", o.path_str(p));
    }
    Ok(r)
}

pub fn path(op: &str, g: &Group, a: &PathArgs) -> R {
    let kind = match (op, a.graph) {
        ("path-lift", _) => GraphKind::Coned,
        (_, gr) => gr.kind(),
    };
    let o = Oracle::new(g, kind, a.budget.truncation);
    let start = Vertex::Group(elem(g, &a.start)?);
    let p = parse_path(&o, start, &a.path)?;
    let mut r = report(op, &a.budget);
    r.push("graph", kind.name()).push("length", p.len());
    match op {
        "path-classify" => {
            let c = classify(&o, &p)?;
            r.push("cycle", c.is_cycle)
                .push("arc", c.is_arc)
                .push("circuit", c.is_circuit)
                .push("locally_minimal", c.locally_minimal)
                .push("backtracking_free", c.backtracking_free);
        }
        "path-decompose" => {
            let d = decompose(g, &p)?;
            r.push("cyclic", d.cyclic);
            for (i, c) in d.components.iter().enumerate() {
                r.push(
                    "component",
                    format!(
                        "{} {} start={} len={} coset={} isolated={}",
                        i,
                        g.factors[c.factor].id,
                        c.start,
                        c.len,
                        g.elem_str(&c.key),
                        d.is_isolated(i)
                    ),
                );
            }
            r.push(
                "phase",
                d.phase_positions.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
            );
            r.push("locally_minimal", d.locally_minimal())
                .push("backtracking_free", d.backtracking_free());
        }
        "path-pi" => {
            let q = pi(g, &p)?;
            let co = Oracle::new(g, GraphKind::Coned, a.budget.truncation);
            r.push("image", co.path_str(&q)).push("image_length", q.len());
        }
        _ => {
            let q = lift(g, &p)?;
            let ro = Oracle::new(g, GraphKind::Relative, a.budget.truncation);
            r.push("lift", ro.path_str(&q)).push("lift_length", q.len());
        }
    }
    Ok(r)
}

pub fn fold(g: &Group, a: &SubArgs) -> R {
    let (spec, l) = load_sub(g, &a.subgroup)?;
    let mut r = report("subgroup-fold", &a.budget);
    r.push("generators", join(g, &spec.generators))
        .push("vertices", l.len())
        .push("trivial", l.is_trivial())
        .push("spanning_generators", join(g, &l.spanning_generators(g)))
        .push("graph", l.dump(g));
    Ok(r)
}

pub fn contains(g: &Group, a: &SubArgs, element: &str) -> R {
    let (_, l) = load_sub(g, &a.subgroup)?;
    let x = elem(g, element)?;
    let mut r = report("subgroup-contains", &a.budget);
    let yes = l.contains(g, &x)?;
    r.push("element", g.elem_str(&x)).push("member", yes);
    r.verdict(if yes { Status::Pass } else { Status::Fail }, None, None);
    Ok(r)
}

pub fn intersect(g: &Group, a: &SubArgs, other: &FsPath) -> R {
    let (_, l) = load_sub(g, &a.subgroup)?;
    let (_, k) = load_sub(g, other)?;
    let i = l.intersect(g, &k);
    let mut r = report("subgroup-intersect", &a.budget);
    r.push("vertices", i.len())
        .push("trivial", i.is_trivial())
        .push("generators", join(g, &i.spanning_generators(g)));
    Ok(r)
}

pub fn peripherals(g: &Group, a: &SubArgs) -> R {
    let (spec, l) = load_sub(g, &a.subgroup)?;
    let mut ys = vec![g.identity()];
    for y in &spec.y {
        if !ys.contains(y) {
            ys.push(y.clone());
        }
    }
    let y = YSet::checked(g, &l, ys)?;
    let mut r = report("subgroup-peripherals", &a.budget);
    r.push("y", join(g, &y.elems));
    for inst in peripheral_family(g, &l, &y)? {
        r.push("family", inst.render(g));
    }
    for inst in reduced_family(g, &l, &y)? {
        r.push("reduced", inst.render(g));
    }
    Ok(r)
}

pub fn reduce_y(g: &Group, a: &SubArgs) -> R {
    let (spec, l) = load_sub(g, &a.subgroup)?;
    let y = reduce_y_set(g, &l, &spec.y)?;
    let mut r = report("subgroup-reduce-y", &a.budget);
    r.push("input", join(g, &spec.y)).push("reduced", join(g, &y.elems));
    Ok(r)
}

pub fn cond_b(g: &Group, a: &SubArgs, y: &str, y2: &str) -> R {
    let (_, l) = load_sub(g, &a.subgroup)?;
    let (y, y2) = (elem(g, y)?, elem(g, y2)?);
    let mut r = report("cond-b", &a.budget);
    let rows = condition_b(g, &l, &y, &y2)?;
    r.push("factors", rows.len());
    for (f, m) in &rows {
        r.push("meets", format!("{} {}", g.factors[*f].id, m.render(g, *f)));
    }
    Ok(r)
}

pub fn cond_decompose(g: &Group, b: &Budget) -> R {
    let d = free_decomposition(g, b.radius)?;
    let mut r = report("cond-decompose", b);
    r.push("verified", factor_ids(g, &d.verified).join(","))
        .push("excluded", factor_ids(g, &d.excluded).join(","))
        .push("undetermined", factor_ids(g, &d.undetermined).join(","));
    let o = Oracle::new(g, GraphKind::Coned, b.radius as u64);
    for (f, p) in &d.witnesses {
        r.push("witness", format!("{} {}", g.factors[*f].id, o.path_str(p)));
    }
    if !d.undetermined.is_empty() {
        r.verdict(Status::Inconclusive, Some(b.radius), None);
    }
    Ok(r)
}

pub fn fineness(g: &Group, a: &FinenessArgs) -> R {
    let radii: Vec<usize> = (a.budget.radius.saturating_sub(4).max(1)..=a.budget.radius.max(1)).collect();
    let s = fineness_sample(g, &a.edge, a.n, &radii)?;
    let mut r = report("fineness", &a.budget);
    r.push("edge", &a.edge).push("n", s.n);
    for (rad, count) in &s.growth {
        r.push("circuits", format!("R={rad} {count}"));
    }
    r.push("stabilized", s.stabilized);
    let witness = (!s.stabilized).then(|| format!("{} circuits growing with R", a.edge));
    r.verdict(
        if s.stabilized { Status::Pass } else { Status::Fail },
        Some(a.budget.radius),
        witness,
    );
    Ok(r)
}

pub fn embedded(g: &Group, factor: &str, n: usize, b: &Budget) -> R {
    let f = g.factor_index(factor)?;
    let e = embedded_ball(g, f, n, b.truncation as usize)?;
    let mut r = report("cond-embedded", b);
    r.push("factor", factor).push("n", n).push("count", e.len()).push("elements", join(g, &e));
    Ok(r)
}

fn split_pair(s: &str) -> anyhow::Result<(&str, &str)> {
    s.split_once('|').ok_or_else(|| anyhow!("pair `{s}` must be `P|Q`"))
}

pub fn bcp(g: &Group, pairs: &[String], y: &[String], mu: f64, c: f64, b: &Budget) -> R {
    let o = Oracle::new(g, GraphKind::Relative, b.truncation);
    let one = Vertex::Group(g.identity());
    let mut ps: Vec<(Path, Path)> = Vec::new();
    for s in pairs {
        let (p, q) = split_pair(s)?;
        ps.push((parse_path(&o, one.clone(), p)?, parse_path(&o, one.clone(), q)?));
    }
    let mut ys = Vec::new();
    for s in y {
        let (name, lit) = s.split_once('=').ok_or_else(|| anyhow!("`{s}` must be `name=literal`"))?;
        ys.push((name.to_string(), elem(g, lit)?));
    }
    let rep = bcp_harness(&o, &ps, mu, c, ys, b.cap)?;
    let mut r = report("cond-bcp", b);
    r.push("mu", mu).push("c", c);
    for (s, row) in pairs.iter().zip(&rep.rows) {
        let v = match row {
            BcpRow::Rejected(why) => format!("rejected {why}"),
            BcpRow::Accepted(ds) => ds
                .iter()
                .map(|(i, d)| format!("{}:{}", i, d.map(|x| x.to_string()).unwrap_or_else(|| ">cap".into())))
                .collect::<Vec<_>>()
                .join(","),
        };
        r.push("pair", format!("{s} {v}"));
    }
    r.push("max", rep.max.map(|x| x.to_string()).unwrap_or_else(|| "-".into()));
    Ok(r)
}

pub fn delta(g: &Group, graph: Graph, trials: usize, b: &Budget) -> R {
    let seed = need_seed(b)?;
    let o = Oracle::new(g, graph.kind(), b.truncation);
    let d = slim_triangle_delta(&o, b.radius, trials, seed)?;
    let mut r = report("cond-delta", b);
    r.push("graph", graph.kind().name())
        .push("triangles", d.triangles)
        .push("delta", d.delta);
    Ok(r)
}

pub fn area(g: &Group, word: &str, b: &Budget) -> R {
    let w = parse_word(g, word)?;
    let mut r = report("cond-area", b);
    r.push("word", g.word_str(&w));
    match area_of(g, &w, b.area_cap) {
        Ok(a) => {
            r.push("area", a.area);
            for (before, after) in &a.certificate.steps {
                r.push("step", format!("{} -> {}", g.word_str(before), g.word_str(after)));
            }
        }
        Err(e @ (Error::AreaCapExceeded(_) | Error::NotTrivialWithinBudget)) => {
            r.push("area", format!(">{}", b.area_cap));
            r.verdict(Status::Inconclusive, None, Some(e.to_string()));
        }
        Err(e) => return Err(e.into()),
    }
    Ok(r)
}

pub fn dehn(g: &Group, n: usize, b: &Budget) -> R {
    let t = dehn_table(g, n, b.truncation, b.area_cap)?;
    let mut r = report("cond-dehn", b);
    let mut unknown = 0;
    for (len, count, max_area, beyond) in &t.rows {
        unknown += beyond;
        r.push("row", format!("n={len} words={count} max_area={max_area} beyond_cap={beyond}"));
    }
    if unknown > 0 {
        r.verdict(Status::Inconclusive, None, None);
    }
    Ok(r)
}

fn qc_rows(g: &Group, r: &mut Report, q: &QcReport) {
    r.push("y", join(g, &q.ys))
        .push("mode", q.mode.name())
        .push("truncation_used", q.m)
        .push("vertices", q.vertices)
        .push("checked", q.checked)
        .push("skipped", q.skipped);
    if let Some(cb) = &q.condition_b {
        r.push("condition_b.pairs", cb.pairs)
            .push("condition_b.max_factors", cb.max_factors);
    }
}

fn qc_verdict(g: &Group, r: &mut Report, q: &QcReport) {
    let o = Oracle::new(g, GraphKind::Relative, q.m);
    match &q.outcome {
        QcOutcome::Pass { coverage } => {
            r.push(
                "coverage",
                coverage.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","),
            );
            r.verdict(Status::Pass, Some(q.radius), None);
        }
        QcOutcome::Fail { l, vertex, geodesic } => {
            r.push("geodesic", o.path_str(geodesic));
            r.verdict(
                Status::Fail,
                Some(q.radius),
                Some(format!("l={} vertex={}", g.elem_str(l), g.elem_str(vertex))),
            );
        }
        QcOutcome::Inconclusive(why) => {
            r.verdict(Status::Inconclusive, Some(q.radius), Some(why.clone()));
        }
    }
}

pub fn qc_check(g: &Group, a: &SubArgs, first: bool) -> R {
    let (spec, l) = load_sub(g, &a.subgroup)?;
    let mode = if first { Mode::FirstGeodesic } else { Mode::AllGeodesics };
    let q = quasiconvex(g, &l, &spec.y, a.budget.radius, mode, None)?;
    let mut r = report("qc-check", &a.budget);
    qc_rows(g, &mut r, &q);
    r.push("heuristic", first);
    qc_verdict(g, &mut r, &q);
    Ok(r)
}

pub fn qc_strong(g: &Group, a: &SubArgs) -> R {
    let (_, l) = load_sub(g, &a.subgroup)?;
    let o = Oracle::new(g, GraphKind::Relative, a.budget.truncation);
    let samples = o.ball(&Vertex::Group(g.identity()), a.budget.radius as i64)?.elements();
    let s = strong_check(g, &l, &samples)?;
    let mut r = report("qc-strong", &a.budget);
    r.push("samples", s.samples);
    for row in &s.exceptional {
        r.push(
            "exceptional",
            format!("{} {} {}", g.elem_str(&row.g), g.factors[row.factor].id, row.members.render(g, row.factor)),
        );
    }
    for row in &s.infinite {
        r.push(
            "infinite",
            format!("{} {} {}", g.elem_str(&row.g), g.factors[row.factor].id, row.members.render(g, row.factor)),
        );
    }
    let witness = s
        .infinite
        .first()
        .map(|row| format!("{} {}", g.elem_str(&row.g), g.factors[row.factor].id));
    r.verdict(
        if s.strong() { Status::Pass } else { Status::Fail },
        Some(a.budget.radius),
        witness,
    );
    Ok(r)
}

pub fn qc_distortion(g: &Group, a: &SubArgs, inner_factors: &[String]) -> R {
    let text = std::fs::read_to_string(&a.subgroup).with_context(|| format!("reading {}", a.subgroup.display()))?;
    let spec = parse_subgroup_spec(g, &text).with_context(|| format!("in {}", a.subgroup.display()))?;
    let m = a.budget.truncation;
    let (s, inner_h, folded) = if inner_factors.is_empty() {
        let l = SubgroupGraph::fold(g, &spec.generators)?;
        let st = induced_structure(g, &l, &spec.y, m)?;
        let letters = induced_letters(g, &st.family, m);
        (spec.generators.clone(), letters, Some(l))
    } else {
        let mut letters = Vec::new();
        for id in inner_factors {
            let f = g.factor_index(id)?;
            for letter in g.h_letters(f, m) {
                letters.push((g.letter_str(&letter), g.letter_value(&letter)));
            }
        }
        (spec.generators.clone(), letters, None)
    };
    let p = distortion_profile(g, &s, inner_h, folded.as_ref(), a.budget.radius, m)?;
    let mut r = report("qc-distortion", &a.budget);
    r.push("generators", join(g, &s))
        .push("samples", p.samples.len())
        .push("letter_bound", p.letter_bound)
        .push("bound_holds", p.bound_holds)
        .push("generation_checked", p.generation_checked)
        .push(
            "forward",
            format!(
                "slope={:.4} intercept={:.4} residual={:.4}",
                p.forward.slope, p.forward.intercept, p.forward.max_residual
            ),
        )
        .push(
            "backward",
            format!(
                "slope={:.4} intercept={:.4} residual={:.4}",
                p.backward.slope, p.backward.intercept, p.backward.max_residual
            ),
        );
    r.verdict(
        if p.bound_holds { Status::Pass } else { Status::Fail },
        Some(a.budget.radius),
        None,
    );
    Ok(r)
}

pub fn qc_induce(g: &Group, a: &SubArgs) -> R {
    let (spec, l) = load_sub(g, &a.subgroup)?;
    let st = induced_structure(g, &l, &spec.y, a.budget.truncation)?;
    let mut r = report("qc-induce", &a.budget);
    r.push("y", join(g, &st.ys)).push("reduced_y", st.reduced_y);
    for (s, origin) in &st.s {
        r.push("s", format!("{} {:?}", g.elem_str(s), origin));
    }
    for inst in &st.family {
        r.push("family", inst.render(g));
    }
    for inst in &st.reduced {
        r.push("reduced", inst.render(g));
    }
    r.push("infinite", st.infinite().len());
    Ok(r)
}

pub fn qc_iota(g: &Group, a: &SubArgs) -> R {
    let (spec, l) = load_sub(g, &a.subgroup)?;
    let st = induced_structure(g, &l, &spec.y, a.budget.truncation)?;
    let rep = iota_check(g, &st, a.budget.radius)?;
    let mut r = report("qc-iota", &a.budget);
    r.push("vertices", rep.vertices)
        .push("collisions", rep.collisions.len())
        .push("circuits", rep.circuits)
        .push("cone_circuits", rep.cone_circuits)
        .push("bad_images", rep.bad_images.len())
        .push("max_ratio", format!("{:.4}", rep.max_ratio));
    let witness = rep
        .collisions
        .first()
        .map(|(u, v, _)| format!("collision {u:?} {v:?}"))
        .or_else(|| rep.bad_images.first().map(|(n, m)| format!("circuit {n} -> {m}")));
    r.verdict(
        if rep.ok() { Status::Pass } else { Status::Fail },
        Some(a.budget.radius),
        witness,
    );
    Ok(r)
}

pub fn qc_tree(g: &Group, a: &SubArgs) -> R {
    let (_, l) = load_sub(g, &a.subgroup)?;
    let c = rel0hyp_certify(g, &l, a.budget.radius)?;
    let mut r = report("qc-tree-certify", &a.budget);
    r.push("s", join(g, &c.structure.generators()))
        .push("image_edges", c.image_edges)
        .push("forest", c.forest);
    qc_rows(g, &mut r, &c.qc);
    if !c.forest {
        r.verdict(Status::Fail, Some(a.budget.radius), Some("image of iota has a cycle".into()));
    } else {
        qc_verdict(g, &mut r, &c.qc);
    }
    Ok(r)
}
