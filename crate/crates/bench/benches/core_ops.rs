use criterion::{black_box, criterion_group, criterion_main, Criterion};
use relhyp_bench::{dihedral_generators, long_word};
use relhyp_core::graphs::{GraphKind, Oracle, Vertex};
use relhyp_core::instances;
use relhyp_core::subgroups::SubgroupGraph;

fn reduce(c: &mut Criterion) {
    let (g, w) = long_word(200);
    c.bench_function("reduce 400 letters", |b| b.iter(|| g.reduce(black_box(&w)).unwrap()));
}

fn fold(c: &mut Criterion) {
    let g = instances::z2_z3();
    let gens = dihedral_generators(&g);
    c.bench_function("fold three generators", |b| {
        b.iter(|| SubgroupGraph::fold(&g, black_box(&gens)).unwrap())
    });
}

fn ball(c: &mut Criterion) {
    let g = instances::free_rel_a();
    let o = Oracle::new(&g, GraphKind::Relative, 3);
    let one = Vertex::Group(g.identity());
    c.bench_function("relative ball radius 4", |b| b.iter(|| o.ball(black_box(&one), 4).unwrap()));
}

criterion_group!(benches, reduce, fold, ball);
criterion_main!(benches);
