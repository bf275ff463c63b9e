//! Truncated (multi)simplicial sets and the nerve functors.

mod diagram;
mod nerves;
mod sset;

pub use diagram::{
    check_levelwise_coherence, levelwise_nerve, w_star_grid, SCatDiagram,
};
pub use nerves::{
    chain_degen, chain_face, chain_id, k_nerve_map, k_simplicial_nerve,
    k_simplicial_nerve_with_grids, nerve, nerve_map, nerve_restricted, nerve_with_chains,
    simplicial_nerve, Chain, SSetMap,
};
pub use sset::{all_degrees, degree_rank, diagonal, Level, MultiSSetBuilder, TruncMultiSSet};
