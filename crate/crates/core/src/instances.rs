//! Bundled instances used by tests, benches and the command line.

use crate::algebra::Group;

pub const Z2_Z3: &str = include_str!("../data/z2z3.json");
pub const FREE_REL_A: &str = include_str!("../data/fab_rel_a.json");
pub const Z_STAR_Z: &str = include_str!("../data/z_star_z.json");
pub const Z2: &str = include_str!("../data/z2.json");
pub const Z2_REL_X: &str = include_str!("../data/z2_rel_x.json");
pub const EXAMPLE_Q: &str = include_str!("../data/example_q.json");

fn load(text: &str) -> Group {
    Group::from_json(text).expect("bundled instance is valid")
}

/// `ℤ/2 ∗ ℤ/3` with `X = ∅`, factors `A = {1,a}` and `B = {1,b,b2}`.
pub fn z2_z3() -> Group {
    load(Z2_Z3)
}

/// `F(a,b) = ⟨a⟩ ∗ ⟨b⟩` with peripheral `⟨a⟩` and `X = {b}`.
pub fn free_rel_a() -> Group {
    load(FREE_REL_A)
}

/// `⟨a⟩ ∗ ⟨b⟩` with both cyclic factors peripheral and `X = ∅`.
pub fn z_star_z() -> Group {
    load(Z_STAR_Z)
}

/// `ℤ² = ⟨x,t | xtx⁻¹t⁻¹⟩` with no peripheral subgroups.
pub fn z2() -> Group {
    load(Z2)
}

/// `ℤ²` relative to `⟨x⟩`, the peripheral factor `A` embedded as `x`.
pub fn z2_rel_x() -> Group {
    load(Z2_REL_X)
}

/// `⟨t⟩ × H` presented relative to the cyclic factor `H`.
pub fn example_q() -> Group {
    load(EXAMPLE_Q)
}

/// `ℤ/2 ∗ ℤ/3` with one extra generator of the given value.
pub fn z2_z3_with(name: &str, value: &str) -> Group {
    let mut v: serde_json::Value = serde_json::from_str(Z2_Z3).expect("bundled json");
    v["generators"] = serde_json::json!([{ "name": name, "inverse": name.to_uppercase() }]);
    v["embeddings"] = serde_json::json!({ name: value });
    load(&v.to_string())
}
