//! Finite categories, functors, natural transformations, and finite limits.

mod build;
mod core;
mod groupoid;
mod validate;

pub use build::{
    count_chains, free_category_on_acyclic_graph, full_subcategory, opposite, product,
    pullback_cat, relabel,
};
pub use core::{CatBuilder, FinCat, FinFunctor, MorData, NatTrans};
pub use groupoid::{
    all_functors, components, inverses, is_groupoid, skeletal_component, Components,
    SkeletalComponent,
};
pub use validate::{validate_cat, CatReport, CatViolation};
