use proptest::prelude::*;
use relhyp_core::conditions::{area, embedded_ball};
use relhyp_core::graphs::{GraphKind, Oracle, Path, Vertex};
use relhyp_core::instances;
use relhyp_core::literal::{parse_element, parse_word};
use relhyp_core::paths::{decompose, lift, pi};
use relhyp_core::subgroups::SubgroupGraph;
use relhyp_core::{Element, EqBudget, Group, Letter, Report, Status, Tri, Word};

fn letters(g: &Group, m: u64) -> Vec<Letter> {
    let mut v = g.x_letters();
    for f in g.peripheral() {
        v.extend(g.h_letters(f, m));
    }
    v
}

fn word_strategy(g: &Group, m: u64, max: usize) -> impl Strategy<Value = Word> {
    let ls = letters(g, m);
    prop::collection::vec(0..ls.len(), 0..=max).prop_map(move |ix| Word(ix.into_iter().map(|i| ls[i].clone()).collect()))
}

fn elem(g: &Group, w: &Word) -> Element {
    g.canonical(&g.evaluate(w)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reduce_is_idempotent(w in word_strategy(&instances::z2_z3(), 1, 12)) {
        let g = instances::z2_z3();
        let nf = g.reduce(&w).unwrap();
        let again = g.reduce(&g.element_word(&Element::Nf(nf.clone()))).unwrap();
        prop_assert_eq!(again, nf);
    }

    #[test]
    fn inverse_cancels(w in word_strategy(&instances::free_rel_a(), 3, 10)) {
        let g = instances::free_rel_a();
        let x = elem(&g, &w);
        prop_assert!(g.is_identity(&g.mul(&x, &g.inv(&x))));
        prop_assert!(g.is_identity(&g.mul(&g.inv(&x), &x)));
    }

    #[test]
    fn multiplication_is_associative(
        a in word_strategy(&instances::z_star_z(), 3, 6),
        b in word_strategy(&instances::z_star_z(), 3, 6),
        c in word_strategy(&instances::z_star_z(), 3, 6),
    ) {
        let g = instances::z_star_z();
        let (a, b, c) = (elem(&g, &a), elem(&g, &b), elem(&g, &c));
        prop_assert_eq!(g.mul(&g.mul(&a, &b), &c), g.mul(&a, &g.mul(&b, &c)));
    }

    #[test]
    fn serialization_round_trips(w in word_strategy(&instances::free_rel_a(), 4, 10)) {
        let g = instances::free_rel_a();
        let x = elem(&g, &w);
        let back = g.canonical(&parse_element(&g, &g.elem_str(&x)).unwrap()).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn distance_is_a_metric(
        a in word_strategy(&instances::z2_z3(), 1, 6),
        b in word_strategy(&instances::z2_z3(), 1, 6),
        c in word_strategy(&instances::z2_z3(), 1, 6),
    ) {
        let g = instances::z2_z3();
        let o = Oracle::new(&g, GraphKind::Relative, 1);
        let [a, b, c] = [a, b, c].map(|w| Vertex::Group(elem(&g, &w)));
        let d = |u: &Vertex, v: &Vertex| o.distance(u, v, 64).unwrap().unwrap();
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c));
        prop_assert_eq!(d(&a, &a), 0);
    }

    #[test]
    fn larger_truncation_never_increases_distance(w in word_strategy(&instances::free_rel_a(), 4, 8), m in 1u64..4) {
        let g = instances::free_rel_a();
        let one = Vertex::Group(g.identity());
        let x = Vertex::Group(elem(&g, &w));
        let lo = Oracle::new(&g, GraphKind::Relative, m).distance(&one, &x, 64).unwrap();
        let hi = Oracle::new(&g, GraphKind::Relative, m + 1).distance(&one, &x, 64).unwrap();
        prop_assert!(hi.unwrap() <= lo.unwrap());
    }

    #[test]
    fn folded_subgroup_contains_its_products(
        gens in prop::collection::vec(word_strategy(&instances::z2_z3(), 1, 6), 1..=2),
        picks in prop::collection::vec((0usize..2, any::<bool>()), 0..6),
    ) {
        let g = instances::z2_z3();
        let gens: Vec<Element> = gens.iter().map(|w| elem(&g, w)).collect();
        let l = SubgroupGraph::fold(&g, &gens).unwrap();
        let mut x = g.identity();
        for (i, inv) in picks {
            let s = &gens[i % gens.len()];
            x = g.mul(&x, &if inv { g.inv(s) } else { s.clone() });
        }
        let x = g.canonical(&x).unwrap();
        prop_assert!(l.contains(&g, &x).unwrap());
        prop_assert!(l.contains(&g, &g.inv(&x)).unwrap());
    }

    #[test]
    fn refold_is_stable(gens in prop::collection::vec(word_strategy(&instances::z2_z3(), 1, 6), 1..=3)) {
        let g = instances::z2_z3();
        let gens: Vec<Element> = gens.iter().map(|w| elem(&g, w)).collect();
        let l = SubgroupGraph::fold(&g, &gens).unwrap();
        let again = l.refold(&g);
        prop_assert_eq!(again.len(), l.len());
        prop_assert_eq!(again.dump(&g), l.dump(&g));
    }

    #[test]
    fn membership_is_inverse_closed(
        gens in prop::collection::vec(word_strategy(&instances::free_rel_a(), 2, 5), 1..=2),
        probe in word_strategy(&instances::free_rel_a(), 2, 6),
    ) {
        let g = instances::free_rel_a();
        let gens: Vec<Element> = gens.iter().map(|w| elem(&g, w)).collect();
        let l = SubgroupGraph::fold(&g, &gens).unwrap();
        let x = elem(&g, &probe);
        prop_assert_eq!(l.contains(&g, &x).unwrap(), l.contains(&g, &g.inv(&x)).unwrap());
    }

    #[test]
    fn pi_and_lift_are_inverse(ix in prop::collection::vec(0usize..64, 0..=6)) {
        let g = instances::free_rel_a();
        let o = Oracle::new(&g, GraphKind::Relative, 2);
        let mut p = Path::empty(Vertex::Group(g.identity()));
        for i in ix {
            let es = o.neighbors(p.end()).unwrap();
            p.edges.push(es[i % es.len()].clone());
        }
        let q = pi(&g, &p).unwrap();
        let h = p.edges.iter().filter(|e| e.label.letter().is_some_and(|l| l.is_h())).count();
        prop_assert_eq!(q.len(), p.len() + h);
        prop_assert_eq!(lift(&g, &q).unwrap(), p.clone());
        let d = decompose(&g, &p).unwrap();
        let covered: usize = d.components.iter().map(|c| c.len).sum();
        prop_assert_eq!(covered, h);
    }

    #[test]
    fn report_round_trips(
        rows in prop::collection::vec(("[a-z._]{1,8}", "\\PC{0,12}"), 0..6),
        witness in prop::option::of("\\PC{0,10}"),
        radius in prop::option::of(0usize..100),
        status in 0usize..4,
    ) {
        // `-` is the placeholder for an absent witness.
        prop_assume!(witness.as_deref() != Some("-"));
        let mut r = Report::new("probe");
        for (k, v) in &rows {
            r.push(k, v);
        }
        let s = [Status::Computed, Status::Pass, Status::Fail, Status::Inconclusive][status];
        r.verdict(s, radius, witness);
        prop_assert_eq!(Report::parse(&r.render()).unwrap(), r.clone());
        prop_assert_eq!(Report::parse_explained(&r.explain()).unwrap(), r);
    }
}

#[test]
fn embedded_ball_is_monotone() {
    let g = instances::z2_rel_x();
    let a = g.factor_index("A").unwrap();
    for n in 0..3 {
        for r in 1..5 {
            let small = embedded_ball(&g, a, n, r).unwrap();
            for bigger in [embedded_ball(&g, a, n + 1, r).unwrap(), embedded_ball(&g, a, n, r + 1).unwrap()] {
                assert!(small.iter().all(|x| bigger.contains(x)), "n={n} r={r}");
            }
        }
    }
}

#[test]
fn area_does_not_grow_with_the_cap() {
    let g = instances::z2_rel_x();
    for s in ["x.t.X.T", "x.x.t.X.X.T", "x.t.t.X.T.T"] {
        let w = parse_word(&g, s).unwrap();
        let areas: Vec<usize> = (4..9).filter_map(|c| area(&g, &w, c).ok().map(|a| a.area)).collect();
        assert!(!areas.is_empty(), "{s}");
        assert!(areas.windows(2).all(|p| p[1] <= p[0]), "{s}: {areas:?}");
    }
}

#[test]
fn presented_equality_is_transitive() {
    let g = instances::z2_rel_x();
    let b = EqBudget { area: 4, max_len: 16 };
    let sum = EqBudget { area: 8, max_len: 32 };
    let words = ["x.t", "t.x", "t.A:1", "A:1.t", "x.x.t", "t.x.x", "A:2.t"];
    let es: Vec<Element> = words.iter().map(|s| parse_element(&g, s).unwrap()).collect();
    for x in &es {
        for y in &es {
            if g.equal(x, y, b).verdict != Tri::Yes {
                continue;
            }
            for z in &es {
                if g.equal(y, z, b).verdict == Tri::Yes {
                    assert_eq!(g.equal(x, z, sum).verdict, Tri::Yes);
                }
            }
        }
    }
}

#[test]
fn omega_is_the_inverse_closed_set_of_relator_letters() {
    for g in [instances::example_q(), instances::z2_rel_x(), instances::z2_z3()] {
        let mut seen = std::collections::BTreeSet::new();
        for r in &g.relators {
            for l in r.0.iter().filter(|l| l.is_h()) {
                seen.insert(l.clone());
                seen.insert(g.letter_inv(l));
            }
        }
        assert_eq!(seen, g.omega);
    }
}
