//! Relative and k-relative structures over finite categories: masks,
//! shapes, generation axioms, 3-arrow calculi, strict homotopies, and the
//! higher equivalence functor `w_*`.

mod axioms;
mod calculus;
pub mod grid;
mod homotopy;
mod structure;
mod wstar;

pub use axioms::{validate_krel, AxiomVerdict, KrelReport};
pub use calculus::{
    chain_calculus, check_three_arrow_calculus, iso_calculus, CalculusReport, ThreeArrowCalculus,
};
pub use homotopy::{check_strict_homotopy, cylinder, Cylinder, HomotopyVerdict, WeOracle};
pub use structure::{generated_subcategory, shape_chain, KRelStructure, MaskSet, ShapeFlavor};
pub use wstar::{
    parse_nt_components, w_star_at, w_star_map, w_star_map_into, w_star_objects, MultiDim,
};
