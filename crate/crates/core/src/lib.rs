//! Exact desk-scale computations for groups hyperbolic relative to a family
//! of peripheral subgroups: relative and coned-off Cayley graphs, the path
//! calculus between them, folded subgroup graphs over free products, and
//! relative quasiconvexity checks.

pub mod algebra;
pub mod conditions;
pub mod error;
pub mod graphs;
pub mod instances;
pub mod literal;
pub mod paths;
pub mod quasiconvexity;
pub mod report;
pub mod subgroups;

pub use algebra::{
    Backend, Element, EqBudget, Equality, Factor, FactorElem, FactorKind, FiniteTable,
    GeneratorSymbol, Group, Letter, NormalForm, Syllable, Tri, Word,
};
pub use error::{Error, Result};
pub use report::{Report, Status};
