//! Topological analysis of skeleta: pseudo-manifold classification, rational
//! Betti numbers and elementary collapses.

mod collapse;
mod homology;
mod pseudomanifold;

use thiserror::Error;

pub use collapse::{
    find_collapse_sequence, verify_collapse_sequence, CollapseOutcome, CollapseSearch,
    CollapseSequence, CollapseStep, CollapseVerdict,
};
pub use homology::{betti_numbers, is_q_homology_sphere, rank_over_rationals, HomologyProfile};
pub use pseudomanifold::{classify_pseudo_manifold, Classification, PseudoManifoldReport, Witness};

use crate::model::{DualComplex, Subcomplex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("the complex is empty")]
    EmptyComplex,
    #[error("the cell set is not closed under taking faces")]
    NotFaceClosed,
    #[error("the target is not a subcomplex of the complex")]
    TargetNotContained,
}

fn check_input(complex: &DualComplex, sub: &Subcomplex) -> Result<(), TopologyError> {
    if sub.is_empty() {
        return Err(TopologyError::EmptyComplex);
    }
    if !sub.is_face_closed(complex) {
        return Err(TopologyError::NotFaceClosed);
    }
    Ok(())
}
