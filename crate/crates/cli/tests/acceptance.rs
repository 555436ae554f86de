//! Acceptance suite. Prints one `PASS`/`FAIL` line per criterion and exits
//! non-zero when any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relhyp_core::conditions::{
    area, bcp_harness, dehn_table, embedded_ball, fineness_sample, BcpRow,
};
use relhyp_core::graphs::{Ball, GraphKind, Oracle, Path, Vertex};
use relhyp_core::instances;
use relhyp_core::literal::{parse_element, parse_word};
use relhyp_core::paths::{classify, decompose, lift, parse_path, penetrations, pi};
use relhyp_core::quasiconvexity::{
    distortion_profile, induced_letters, induced_structure, iota_check, prequasiconvex, quasiconvex,
    rel0hyp_certify, tree_y, Mode,
};
use relhyp_core::subgroups::{teq_y, SubgroupGraph};
use relhyp_core::{Element, FactorElem, FactorKind, Group, Letter, Word};

type Outcome = Result<String, String>;

fn el(g: &Group, s: &str) -> Element {
    g.canonical(&parse_element(g, s).unwrap()).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn relative_ball<'g>(g: &'g Group, m: u64, r: i64) -> (Oracle<'g>, Ball) {
    let o = Oracle::new(g, GraphKind::Relative, m);
    let b = o.ball(&Vertex::Group(g.identity()), r).unwrap();
    (o, b)
}

// ---------------------------------------------------------------- 1

/// Stack reduction of syllables using only the factor tables.
fn naive_reduce(g: &Group, w: &Word) -> Vec<(usize, FactorElem)> {
    let mut st: Vec<(usize, FactorElem)> = Vec::new();
    for l in &w.0 {
        let Letter::H { factor, elem } = l else {
            panic!("X-letter in a peripheral-only instance")
        };
        let merged = match st.last() {
            Some((f, top)) if f == factor => {
                let e = match (&g.factors[*f].kind, top, elem) {
                    (FactorKind::Finite(t), FactorElem::Fin(a), FactorElem::Fin(b)) => {
                        FactorElem::Fin(t.mul[*a as usize][*b as usize])
                    }
                    (FactorKind::Cyclic, FactorElem::Int(a), FactorElem::Int(b)) => FactorElem::Int(a + b),
                    _ => panic!("mixed factor kinds"),
                };
                st.pop();
                Some(e)
            }
            _ => None,
        };
        let e = merged.unwrap_or_else(|| elem.clone());
        if !e.is_identity() {
            st.push((*factor, e));
        }
    }
    st
}

fn random_word(letters: &[Letter], rng: &mut ChaCha8Rng, max: usize) -> Word {
    let n = rng.gen_range(0..=max);
    Word((0..n).map(|_| letters[rng.gen_range(0..letters.len())].clone()).collect())
}

fn normal_forms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut triples = 0usize;
    for (g, m_ball) in [(instances::z2_z3(), 3), (instances::z_star_z(), 1)] {
        let mut letters = Vec::new();
        for f in g.peripheral() {
            letters.extend(g.h_letters(f, 3));
        }
        let words: Vec<Word> = (0..1000).map(|_| random_word(&letters, &mut rng, 12)).collect();
        for (i, w) in words.iter().enumerate() {
            let nf = g.reduce(w).map_err(|e| e.to_string())?;
            let oracle = naive_reduce(&g, w);
            let got: Vec<(usize, FactorElem)> = nf.0.iter().map(|s| (s.factor, s.elem.clone())).collect();
            ensure(got == oracle, || format!("reduce disagrees with stack oracle on {}", g.word_str(w)))?;
            let again = g.reduce(&g.element_word(&Element::Nf(nf.clone()))).unwrap();
            ensure(again == nf, || format!("reduce not idempotent on {}", g.word_str(w)))?;
            let next = &words[(i + 1) % words.len()];
            let lhs = g.evaluate(&w.concat(next));
            let rhs = g.mul(&g.evaluate(w), &g.evaluate(next));
            ensure(lhs == rhs, || format!("evaluate not multiplicative on {}", g.word_str(w)))?;
        }
        let (_, ball) = relative_ball(&g, m_ball, 3);
        let es = ball.elements();
        for a in &es {
            for b in &es {
                let ab = g.mul(a, b);
                for c in &es {
                    ensure(g.mul(&ab, c) == g.mul(a, &g.mul(b, c)), || "associativity".into())?;
                    triples += 1;
                }
            }
        }
    }
    Ok(format!("2000 words, {triples} triples"))
}

// ---------------------------------------------------------------- 2

fn paths_in_ball(o: &Oracle, ball: &Ball, max: usize) -> Vec<Path> {
    let mut out = Vec::new();
    for v in &ball.order {
        let mut stack = vec![Path::empty(v.clone())];
        while let Some(p) = stack.pop() {
            if !p.is_empty() {
                out.push(p.clone());
            }
            if p.len() == max {
                continue;
            }
            for e in o.neighbors(p.end()).unwrap() {
                if ball.contains(&e.to) {
                    let mut q = p.clone();
                    q.edges.push(e);
                    stack.push(q);
                }
            }
        }
    }
    out
}

fn dictionary() -> Outcome {
    let mut total = 0usize;
    for (g, m) in [(instances::z2_z3(), 3), (instances::z2_rel_x(), 1)] {
        let (o, ball) = relative_ball(&g, m, 3);
        let co = Oracle::new(&g, GraphKind::Coned, m);
        for p in paths_in_ball(&o, &ball, 4) {
            let show = || o.path_str(&p);
            let q = pi(&g, &p).map_err(|e| format!("pi({}): {e}", show()))?;
            let back = lift(&g, &q).map_err(|e| format!("lift(pi({})): {e}", show()))?;
            ensure(back == p, || format!("lift(pi(p)) != p for {}", show()))?;
            ensure(pi(&g, &back).unwrap() == q, || format!("pi(lift(q)) != q for {}", show()))?;
            let d = decompose(&g, &p).unwrap();
            let r = penetrations(&q).unwrap();
            ensure(d.phase_vertices == r.phase_vertices, || format!("phase vertices differ on {}", show()))?;
            // Coned position of each relative edge.
            let mut at = vec![0usize];
            for e in &p.edges {
                let step = if e.label.letter().is_some_and(|l| l.is_h()) { 2 } else { 1 };
                at.push(at.last().unwrap() + step);
            }
            let lhs: BTreeSet<(usize, Element, usize, usize)> = d
                .components
                .iter()
                .map(|c| (c.factor, c.key.clone(), at[c.start], 2 * c.len))
                .collect();
            let rhs: BTreeSet<(usize, Element, usize, usize)> = r
                .components
                .iter()
                .map(|c| (c.factor, c.key.clone(), c.start, c.len))
                .collect();
            ensure(lhs == rhs, || format!("components and penetrations differ on {}", show()))?;
            let cr = classify(&o, &p).unwrap();
            let cc = classify(&co, &q).unwrap();
            ensure(cr.locally_minimal == cc.locally_minimal, || format!("local minimality on {}", show()))?;
            ensure(cr.backtracking_free == cc.backtracking_free, || format!("backtracking on {}", show()))?;
            let good = cr.locally_minimal && cr.backtracking_free;
            ensure((cr.is_circuit && good) == cc.is_circuit, || format!("circuit on {}", show()))?;
            ensure((cr.is_arc && good) == cc.is_arc, || format!("arc on {}", show()))?;
            total += 1;
        }
    }
    Ok(format!("{total} paths"))
}

// ---------------------------------------------------------------- 3

/// Both metrics are measured with alphabets covering every exponent that
/// occurs in the ball, so truncation plays no part.
fn quasi_isometry() -> Outcome {
    let mut n = 0;
    for (g, m) in [(instances::z2_z3(), 3u64), (instances::free_rel_a(), 1)] {
        let (_, rel) = relative_ball(&g, m, 5);
        let (_, exact) = relative_ball(&g, 5 * m, 5);
        let co = Oracle::new(&g, GraphKind::Coned, 5 * m);
        let coned = co.ball(&Vertex::Group(g.identity()), 10).unwrap();
        for v in &rel.order {
            let dr = exact.dist(v).unwrap();
            let dh = coned.dist(v).ok_or_else(|| format!("{} beyond coned radius 10", co.vertex_str(v)))?;
            ensure(dr <= 2 * dh && dh <= 2 * dr, || format!("{}: rel {dr}, coned {dh}", co.vertex_str(v)))?;
            n += 1;
        }
    }
    Ok(format!("{n} elements"))
}

// ---------------------------------------------------------------- 4

fn random_subgroup(g: &Group, rng: &mut ChaCha8Rng) -> Vec<Element> {
    let mut letters = Vec::new();
    for f in g.peripheral() {
        letters.extend(g.h_letters(f, 1));
    }
    let k = rng.gen_range(1..=2);
    let mut out = Vec::new();
    while out.len() < k {
        let n = rng.gen_range(1..=6);
        let w = Word((0..n).map(|_| letters[rng.gen_range(0..letters.len())].clone()).collect());
        let x = g.canonical(&g.evaluate(&w)).unwrap();
        if !g.is_identity(&x) {
            out.push(x);
        }
    }
    out
}

fn products(g: &Group, gens: &[Element], k: usize) -> BTreeSet<Element> {
    let mut alphabet: Vec<Element> = gens.to_vec();
    alphabet.extend(gens.iter().map(|x| g.inv(x)));
    let mut layer = BTreeSet::from([g.identity()]);
    let mut all = layer.clone();
    for _ in 0..k {
        let mut next = BTreeSet::new();
        for x in &layer {
            for a in &alphabet {
                next.insert(g.canonical(&g.mul(x, a)).unwrap());
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

/// Products of at most 4 generators must all be members. Members outside
/// that horizon are confirmed by a product of at most 10 generators, and
/// non-members must not be such a product.
fn folding() -> Outcome {
    let g = instances::z2_z3();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (_, ball) = relative_ball(&g, 3, 5);
    let elems = ball.elements();
    let (mut checked, mut deep) = (0, 0);
    for _ in 0..20 {
        let gens = random_subgroup(&g, &mut rng);
        let l = SubgroupGraph::fold(&g, &gens).unwrap();
        let short = products(&g, &gens, 4);
        let long = products(&g, &gens, 10);
        for e in &elems {
            let fold = l.contains(&g, e).unwrap();
            let why = || format!("L=<{}>: {} fold={fold}", show_all(&g, &gens), g.elem_str(e));
            if short.contains(e) {
                ensure(fold, why)?;
            } else {
                ensure(fold == long.contains(e), why)?;
                deep += fold as usize;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} membership queries, {deep} members beyond 4 generators"))
}

fn show_all(g: &Group, xs: &[Element]) -> String {
    xs.iter().map(|x| g.elem_str(x)).collect::<Vec<_>>().join(",")
}

// ---------------------------------------------------------------- 5

fn intersections() -> Outcome {
    let g = instances::z2_z3();
    let (_, ball) = relative_ball(&g, 3, 5);
    let elems = ball.elements();
    let gens = |ss: &[&str]| ss.iter().map(|s| el(&g, s)).collect::<Vec<_>>();
    let pairs = [
        (gens(&["a.b"]), gens(&["b.a"])),
        (gens(&["a", "b.a.b2"]), gens(&["b"])),
        (gens(&["a.b"]), gens(&["a", "b.a.b2"])),
    ];
    let one = g.identity();
    let mut notes = Vec::new();
    for (kg, lg) in &pairs {
        let k = SubgroupGraph::fold(&g, kg).unwrap();
        let l = SubgroupGraph::fold(&g, lg).unwrap();
        let i = k.intersect(&g, &l);
        for e in &elems {
            let both = k.contains(&g, e).unwrap() && l.contains(&g, e).unwrap();
            ensure(i.contains(&g, e).unwrap() == both, || format!("membership of {}", g.elem_str(e)))?;
        }
        let mut x: Vec<Element> = tree_y(&g, &k);
        for y in tree_y(&g, &l) {
            if !x.contains(&y) {
                x.push(y);
            }
        }
        let teq = teq_y(&g, &one, &k, &one, &l, &x, 6).map_err(|e| e.to_string())?;
        let q = prequasiconvex(&g, &i, &teq.y, 6, Mode::AllGeodesics).map_err(|e| e.to_string())?;
        ensure(q.passed(), || format!("prequasiconvex fails on <{}> ∩ <{}>", show_all(&g, kg), show_all(&g, lg)))?;
        notes.push(format!("|Y|={}{}", teq.y.len(), if teq.truncated { " truncated" } else { "" }));
    }
    Ok(notes.join(", "))
}

// ---------------------------------------------------------------- 6

fn rel0hyp() -> Outcome {
    let g = instances::z2_z3();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut notes = Vec::new();
    for _ in 0..5 {
        let gens = random_subgroup(&g, &mut rng);
        let l = SubgroupGraph::fold(&g, &gens).unwrap();
        let cert = rel0hyp_certify(&g, &l, 8).map_err(|e| e.to_string())?;
        let q = quasiconvex(&g, &l, &tree_y(&g, &l), 8, Mode::AllGeodesics, None).map_err(|e| e.to_string())?;
        ensure(cert.certified(), || format!("no certificate for <{}>", show_all(&g, &gens)))?;
        ensure(q.passed(), || format!("quasiconvex fails for <{}>", show_all(&g, &gens)))?;
        notes.push(format!("<{}>", show_all(&g, &gens)));
    }
    Ok(notes.join(" "))
}

// ---------------------------------------------------------------- 7

fn negative_controls() -> Outcome {
    let g = instances::z2_rel_x();
    let radii: Vec<usize> = (4..=10).collect();
    let s = fineness_sample(&g, "1~A", 6, &radii).map_err(|e| e.to_string())?;
    for w in s.growth.windows(2) {
        ensure(w[0].1 < w[1].1, || format!("circuit counts not increasing: {:?}", s.growth))?;
    }
    for &(r, c) in &s.growth {
        ensure(c + 2 >= r, || format!("only {c} circuits at R={r}"))?;
    }
    let a = g.factor_index("A").unwrap();
    // Below M = 3 the X-paths x^k, |k| ≤ 3, dominate.
    let sizes: Vec<usize> = (3..=9).map(|r| embedded_ball(&g, a, 3, r).unwrap().len()).collect();
    ensure(sizes.windows(2).all(|w| w[0] < w[1]), || format!("embedded ball sizes {sizes:?}"))?;
    let o = Oracle::new(&g, GraphKind::Relative, 6);
    let one = Vertex::Group(g.identity());
    let pairs: Vec<(Path, Path)> = (1..=6)
        .map(|k| {
            (
                parse_path(&o, one.clone(), &format!("A:{k}.t")).unwrap(),
                parse_path(&o, one.clone(), &format!("t.A:{k}")).unwrap(),
            )
        })
        .collect();
    let y = vec![("x".to_string(), el(&g, "x")), ("t".to_string(), el(&g, "t"))];
    let rep = bcp_harness(&o, &pairs, 1.0, 0.0, y, 8).map_err(|e| e.to_string())?;
    let mut ds = Vec::new();
    for (k, row) in (1..=6).zip(&rep.rows) {
        let BcpRow::Accepted(v) = row else {
            return Err(format!("pair {k} rejected: {row:?}"));
        };
        let d = v.iter().map(|(_, d)| d.unwrap_or(usize::MAX)).max().unwrap_or(0);
        ensure(d >= k, || format!("k={k}: d={d}"))?;
        ds.push(d);
    }
    Ok(format!("circuits {:?}, embedded {sizes:?}, bcp d {ds:?}", s.growth))
}

// ---------------------------------------------------------------- 8

/// Sum of absolute winding numbers of a closed lattice path.
fn lattice_area(g: &Group, w: &Word) -> usize {
    let mut p = (0i64, 0i64);
    let mut verticals: Vec<(i64, i64, i64)> = Vec::new();
    for l in &w.0 {
        let (dx, dy) = match l {
            Letter::X { gen, inv } => {
                let s = if *inv { -1 } else { 1 };
                match g.gens[*gen].name.as_str() {
                    "x" => (s, 0),
                    "t" => (0, s),
                    other => panic!("letter {other}"),
                }
            }
            Letter::H { elem: FactorElem::Int(k), .. } => (i64::try_from(k.clone()).unwrap(), 0),
            _ => panic!("finite letter"),
        };
        if dy != 0 {
            verticals.push((p.0, p.1.min(p.1 + dy), dy));
        }
        p = (p.0 + dx, p.1 + dy);
    }
    assert_eq!(p, (0, 0));
    let mut wind: BTreeMap<(i64, i64), i64> = BTreeMap::new();
    let xmin = verticals.iter().map(|v| v.0).min().unwrap_or(0);
    for &(x, y, dy) in &verticals {
        for cx in xmin - 1..x {
            *wind.entry((cx, y)).or_insert(0) += dy;
        }
    }
    wind.values().map(|v| v.unsigned_abs() as usize).sum()
}

fn dehn() -> Outcome {
    let g = instances::z2_rel_x();
    let mut words = vec!["x.t.X.T".to_string(), "x.x.t.X.X.T".to_string()];
    for n in 1..=4 {
        words.push(format!("{}t.{}T", "x.".repeat(n), "X.".repeat(n)));
    }
    for s in &words {
        let w = parse_word(&g, s).unwrap();
        let a = area(&g, &w, 12).map_err(|e| format!("{s}: {e}"))?;
        let want = lattice_area(&g, &w);
        ensure(a.area == want, || format!("area({s}) = {}, lattice {want}", a.area))?;
        ensure(a.certificate.verify(&g, &w), || format!("certificate for {s} does not verify"))?;
    }
    let t = dehn_table(&g, 6, 0, 12).map_err(|e| e.to_string())?;
    for (w, a) in &t.entries {
        let want = lattice_area(&g, w);
        ensure(*a == Some(want), || format!("{}: {a:?} vs lattice {want}", g.word_str(w)))?;
    }
    Ok(format!("{} trivial words up to length 6", t.entries.len()))
}

// ---------------------------------------------------------------- 9

fn iota() -> Outcome {
    let g = instances::z2_z3();
    let l = SubgroupGraph::fold(&g, &[el(&g, "a"), el(&g, "b.a.b2")]).unwrap();
    let st = induced_structure(&g, &l, &[el(&g, "b")], 3).map_err(|e| e.to_string())?;
    let r = iota_check(&g, &st, 6).map_err(|e| e.to_string())?;
    ensure(r.collisions.is_empty(), || format!("{} collisions", r.collisions.len()))?;
    ensure(r.bad_images.is_empty(), || format!("bad images {:?}", r.bad_images))?;
    ensure(st.infinite().is_empty(), || "infinite reduced members".into())?;
    ensure(r.cone_circuits == 0, || format!("{} circuits through cone edges", r.cone_circuits))?;
    Ok(format!("{} vertices, {} circuits", r.vertices, r.circuits))
}

// ---------------------------------------------------------------- 10

fn distortion() -> Outcome {
    let mut notes = Vec::new();
    for (g, lit) in [(instances::free_rel_a(), "a:1.b"), (instances::z2_z3(), "a.b")] {
        let ab = el(&g, lit);
        let l = SubgroupGraph::fold(&g, std::slice::from_ref(&ab)).unwrap();
        let st = induced_structure(&g, &l, &[], 3).map_err(|e| e.to_string())?;
        let letters = induced_letters(&g, &st.family, 3);
        let p = distortion_profile(&g, &[ab], letters, Some(&l), 8, 3).map_err(|e| e.to_string())?;
        ensure((p.forward.slope - 2.0).abs() <= 0.01, || format!("slope {}", p.forward.slope))?;
        ensure(p.forward.max_residual == 0.0, || format!("residual {}", p.forward.max_residual))?;
        ensure(p.samples.iter().all(|s| s.1 <= 8), || "inner length above 8".into())?;
        notes.push(format!("slope {:.3}", p.forward.slope));
    }
    let q = instances::example_q();
    let h = q.factor_index("H").unwrap();
    let inner: Vec<(String, Element)> = q
        .h_letters(h, 3)
        .into_iter()
        .map(|l| (q.letter_str(&l), q.letter_value(&l)))
        .collect();
    let p = distortion_profile(&q, &[el(&q, "t")], inner, None, 4, 3).map_err(|e| e.to_string())?;
    ensure(p.bound_holds, || "Example Q: outer exceeds letter bound".into())?;
    ensure(p.backward.slope.is_finite(), || "Example Q: no backward fit".into())?;
    notes.push(format!(
        "Q: outer ≈ {:.3}·inner + {:.3}, inner ≈ {:.3}·outer + {:.3}",
        p.forward.slope, p.forward.intercept, p.backward.slope, p.backward.intercept
    ));
    Ok(notes.join("; "))
}

// ---------------------------------------------------------------- 11

struct Fixture {
    dir: PathBuf,
}

impl Fixture {
    fn new() -> Self {
        let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
        std::fs::create_dir_all(&dir).unwrap();
        let files = [
            ("z2z3.json", instances::Z2_Z3),
            ("fab.json", instances::FREE_REL_A),
            ("z2x.json", instances::Z2_REL_X),
            ("q.json", instances::EXAMPLE_Q),
            ("ab.json", r#"{"generators": ["a:1.b"], "y": ["a:1"]}"#),
            ("ab0.json", r#"{"generators": ["a:1.b"]}"#),
            ("dih.json", r#"{"generators": ["a", "b.a.b2"], "y": ["b"]}"#),
            ("zab.json", r#"{"generators": ["a.b"], "y": ["a"]}"#),
            ("zba.json", r#"{"generators": ["b.a"]}"#),
            ("qt.json", r#"{"generators": ["t"]}"#),
        ];
        for (name, text) in files {
            std::fs::write(dir.join(name), text).unwrap();
        }
        Fixture { dir }
    }

    fn run(&self, args: &str) -> (i32, Vec<u8>) {
        let args: Vec<String> = args
            .split_whitespace()
            .map(|a| {
                if a.ends_with(".json") {
                    self.dir.join(a).display().to_string()
                } else {
                    a.to_string()
                }
            })
            .collect();
        let out = Command::new(env!("CARGO_BIN_EXE_relhyp")).args(&args).output().unwrap();
        (out.status.code().unwrap_or(-1), out.stdout)
    }
}

const INVOCATIONS: &[&str] = &[
    "info z2z3.json",
    "reduce z2z3.json a.b.b2.a",
    "dist fab.json 1 a:4.b --graph coned",
    "geo z2z3.json 1 a.b.a",
    "path classify z2z3.json a.b.a.b",
    "path decompose z2x.json t.x.T.X -M 1",
    "path pi z2z3.json a.b.a",
    "subgroup fold z2z3.json dih.json",
    "subgroup contains z2z3.json dih.json b.a.b2",
    "subgroup intersect z2z3.json zab.json zba.json",
    "subgroup peripherals z2z3.json dih.json",
    "subgroup reduce-y z2z3.json dih.json",
    "cond b z2z3.json dih.json 1 b",
    "cond decompose z2x.json -R 3",
    "cond fineness z2x.json --edge 1~A -n 4 -R 5",
    "cond embedded z2x.json --factor A -n 3",
    "cond bcp z2x.json --pair A:2.t|t.A:2 --y-gen x=x --y-gen t=t -M 2",
    "cond delta z2z3.json -R 3 --seed 11",
    "cond area z2x.json x.x.t.X.X.T",
    "cond dehn z2x.json -n 4 -M 0",
    "qc check fab.json ab.json -R 4",
    "qc check fab.json ab0.json -R 4 --explain",
    "qc strong z2z3.json dih.json -R 2",
    "qc distortion fab.json ab0.json -R 5",
    "qc distortion q.json qt.json -R 3 --inner-factor H",
    "qc induce z2z3.json dih.json",
    "qc iota z2z3.json dih.json -R 4",
    "qc tree-certify z2z3.json zab.json -R 5",
];

fn determinism() -> Outcome {
    let fx = Fixture::new();
    for inv in INVOCATIONS {
        let a = fx.run(inv);
        let b = fx.run(inv);
        ensure(a == b, || format!("`{inv}` differs between runs"))?;
        ensure(a.0 != 1, || format!("`{inv}` errored"))?;
        ensure(
            String::from_utf8_lossy(&a.1).contains("budget.radius"),
            || format!("`{inv}` report lacks budgets"),
        )?;
    }
    Ok(format!("{} invocations", INVOCATIONS.len()))
}

fn exit_codes() -> Outcome {
    let fx = Fixture::new();
    let cases = [
        ("qc check fab.json ab.json --radius 6", 0),
        ("fineness z2x.json --edge 1~A -n 6 -R 8", 2),
        ("info missing.json", 1),
        ("cond delta z2z3.json -R 2", 1),
    ];
    for (inv, want) in cases {
        let (code, _) = fx.run(inv);
        ensure(code == want, || format!("`{inv}` exited {code}, expected {want}"))?;
    }
    let (_, out) = fx.run("fineness z2x.json --edge 1~A -n 6 -R 8");
    let text = String::from_utf8(out).unwrap();
    let report = relhyp_core::Report::parse(&text).map_err(|e| e.to_string())?;
    ensure(report.get_all("circuits").len() == 5, || "growth table missing".into())?;
    ensure(report.render() == text, || "report does not round-trip".into())?;
    Ok(format!("{} cases", cases.len()))
}

// ----------------------------------------------------------------

fn main() {
    let criteria: Vec<(&str, &str, fn() -> Outcome, Option<Duration>)> = vec![
        ("1", "normal-form soundness", normal_forms, Some(Duration::from_secs(10))),
        ("2", "relative/coned dictionary", dictionary, Some(Duration::from_secs(60))),
        ("3", "(2,0)-quasi-isometry", quasi_isometry, None),
        ("4", "folding vs brute force", folding, None),
        ("5", "intersections", intersections, None),
        ("6", "tree certificates", rel0hyp, Some(Duration::from_secs(120))),
        ("7", "negative controls", negative_controls, None),
        ("8", "Dehn area", dehn, None),
        ("9", "induced coned graph embedding", iota, None),
        ("10", "distortion", distortion, None),
        ("11", "CLI determinism", determinism, None),
        ("cli", "CLI exit codes", exit_codes, None),
    ];
    let mut failed = 0;
    for (id, name, f, limit) in criteria {
        let start = Instant::now();
        let res = std::panic::catch_unwind(f).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let took = start.elapsed();
        let res = match (res, limit) {
            (Ok(_), Some(l)) if took > l => Err(format!("took {took:.1?}, limit {l:?}")),
            (r, _) => r,
        };
        match res {
            Ok(detail) => println!("PASS {id:>3} {name}: {detail} [{took:.1?}]"),
            Err(why) => {
                failed += 1;
                println!("FAIL {id:>3} {name}: {why} [{took:.1?}]");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
