//! Truncation of convex bodies and the equilibrium bookkeeping built on it:
//! plane and sphere clipping of triangle meshes, geometric realization of
//! vertex splits by targeted truncation, and chipping sequences tracked
//! through the genealogy of complexes.

mod clip;
mod ratio;
mod sequence;
mod split;

pub use clip::{plane_clip, polar_dual, sphere_clip, PlaneCut, SphereCut};
pub use ratio::{circle_ratio_oracle, limit_ratio};
pub use sequence::{
    chip_event, chip_sequence, step_relation, ChipPolicy, ChipRecord, StepRelation,
};
pub use split::{split_equilibrium, SplitRequest};

use thiserror::Error;

use crate::geometry::HullError;
use crate::mesh::ms_complex::MsError;
use crate::mesh::MeshError;

#[derive(Debug, Error)]
pub enum ChipError {
    /// The cut does not remove any part of the body.
    #[error("cut removes nothing")]
    EmptyCut,
    /// The cut removes the body entirely (or leaves nothing with volume).
    #[error("cut removes the entire body")]
    FullCut,
    /// The sphere boundary does not meet the surface in one simple closed
    /// curve bounding a single cap.
    #[error("cut boundary is not a single simple curve on the surface")]
    CurveNotSimple,
    /// The clipped mesh came out non-convex beyond tolerance.
    #[error("clipped mesh lost convexity beyond tolerance")]
    ConvexityLost,
    /// A numeric parameter lies outside its valid range.
    #[error("parameter outside valid domain: {0}")]
    DomainError(String),
    /// The truncation schedule exhausted its retries without producing the
    /// requested complex.  Both graphs are carried as JSON.
    #[error("split not realized by the retry schedule (achieved {achieved_signature}, wanted {target_signature})")]
    RealizationFailed {
        achieved_signature: String,
        target_signature: String,
        achieved: Option<String>,
        target: String,
    },
    /// The configuration does not admit the construction (no valid radius
    /// window, ambiguous correspondence, or a non-extremal target).
    #[error("nongeneric configuration: {0}")]
    NonGeneric(String),
    /// Unexpected geometric breakdown; carries a diagnostic.
    #[error("degenerate geometry: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Extraction(#[from] MsError),
    #[error(transparent)]
    Hull(#[from] HullError),
}
