//! Combinatorial skeleta of degenerations.
//!
//! Starting from the stratification of a special fiber (components with
//! multiplicities plus the connected components of their intersections) this
//! crate builds the dual Δ-complex with its exact affine charts, evaluates
//! weight functions of pluricanonical forms on it, extracts Kontsevich–Soibelman
//! and essential skeleta, and classifies the results topologically.
//!
//! All arithmetic is exact; rationals are arbitrary precision.

pub mod model;
pub mod rational;
pub mod topology;
pub mod weight;

pub use model::{
    barycentric_subdivision, blowup_surface_model, build_dual_complex, random_fiber,
    validate_fiber, BlowupCenter, BlowupResult, Cell, CellId, Component, ComponentId,
    DualComplex, ModelError, SimplicialComplex, SkeletonPoint, StratifiedFiber, Stratum,
    StratumId, Subcomplex, ValidationReport, Violation,
};
pub use rational::Rational;
pub use topology::{
    betti_numbers, classify_pseudo_manifold, find_collapse_sequence, is_q_homology_sphere,
    verify_collapse_sequence, Classification, CollapseOutcome, CollapseSearch, CollapseSequence, CollapseStep,
    CollapseVerdict, HomologyProfile, PseudoManifoldReport, TopologyError, Witness,
};
pub use weight::{
    essential_skeleton, lc_subcomplex, minimality_locus, monomial_valuation, rescale_weight,
    vertex_weight, weight_at_point, DeltaAssignment, MinimalityResult, PluricanonicalForm,
    VerticalDivisor, WeightError,
};
