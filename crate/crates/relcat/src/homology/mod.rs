//! Integral chain complexes, Smith normal form, homology signatures, and
//! weak-equivalence verdicts.

mod complex;
mod signature;
mod snf;
mod verdict;

pub use complex::{ChainComplex, SparseMat};
pub use signature::{DegreeSignature, HomologySignature};
pub use snf::{smith_normal_form, verify_snf, IntMat, Snf};
pub use verdict::{
    homology, induced_we_verdict, normalized_complex, signature_of_category, WEVerdict,
    HONEST_CELL_CAP,
};
