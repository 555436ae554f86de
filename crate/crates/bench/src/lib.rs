//! Inputs shared by the benchmarks in `benches/`.

use relhyp_core::instances;
use relhyp_core::literal::{parse_element, parse_word};
use relhyp_core::{Element, Group, Word};

/// An alternating word `(a·b)^n` in `ℤ/2 ∗ ℤ/3`, with a cancelling tail.
pub fn long_word(n: usize) -> (Group, Word) {
    let g = instances::z2_z3();
    let mut s = vec!["a.b"; n].join(".");
    s.push_str(".b2.a.a");
    let w = parse_word(&g, &s).expect("valid word");
    (g, w)
}

/// Generators of a finite-index subgroup of `ℤ/2 ∗ ℤ/3`.
pub fn dihedral_generators(g: &Group) -> Vec<Element> {
    ["a", "b.a.b2", "b2.a.b.a.b"]
        .iter()
        .map(|s| g.canonical(&parse_element(g, s).expect("valid literal")).expect("canonical"))
        .collect()
}
