//! Persistence-driven simplification of a quadrangulation whose vertices
//! and faces carry field values.
//!
//! Every saddle face offers up to two cancellations: contracting its
//! stable diagonal pairs the saddle with the *higher* of the two minima
//! (persistence = saddle value minus that minimum), contracting its
//! unstable diagonal pairs it with the *lower* of the two maxima
//! (persistence = that maximum minus the saddle value).  A coincident
//! diagonal offers no cancellation on that side.  Simplification greedily
//! cancels the globally cheapest pair while its persistence stays within
//! the threshold; merged minima keep the smaller value and merged maxima
//! the larger, so surviving pairs only ever get more expensive and the
//! cancelled persistences come out in non-decreasing order.

use thiserror::Error;

use crate::genealogy::{face_contract, Diagonal, OpError};
use crate::mesh::MsComplex;
use crate::quad_ms::{QuadComplex, VertexKind};

#[derive(Debug, Error)]
pub enum SimplifyError {
    #[error("expected one value per vertex")]
    VertexValueCount,
    #[error("expected one value per saddle face")]
    FaceValueCount,
    #[error("cancellation surgery failed: {0}")]
    Surgery(#[from] OpError),
}

/// One available cancellation: contract `face` along `diagonal` at the
/// given persistence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub face: usize,
    pub diagonal: Diagonal,
    pub persistence: f64,
}

/// One executed cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cancellation {
    pub persistence: f64,
    pub diagonal: Diagonal,
    /// Value of the cancelled saddle.
    pub saddle_value: f64,
    /// Value of the cancelled extremum (the one absorbed by its partner).
    pub extremum_value: f64,
}

/// A simplified complex with its surviving values and the trail of
/// cancellations that produced it.
#[derive(Debug)]
pub struct SimplifiedComplex {
    pub quad: QuadComplex,
    /// Field value at each surviving vertex.
    pub vertex_values: Vec<f64>,
    /// Field value at the saddle of each surviving face.
    pub face_values: Vec<f64>,
    /// Cancellations in the order they were applied.
    pub cancellations: Vec<Cancellation>,
    /// Vertex of the input complex -> the surviving vertex it merged into.
    pub vertex_map: Vec<usize>,
}

/// All cancellations available on `quad`, in face order with the
/// stable-diagonal candidate first.
pub fn candidates(
    quad: &QuadComplex,
    vertex_values: &[f64],
    face_values: &[f64],
) -> Vec<Candidate> {
    let mut out = Vec::new();
    for face in 0..quad.n_saddle_faces() {
        let (s1, s2) = quad.stable_diagonal(face);
        if s1 != s2 {
            let dying = vertex_values[s1].max(vertex_values[s2]);
            out.push(Candidate {
                face,
                diagonal: Diagonal::Stable,
                persistence: face_values[face] - dying,
            });
        }
        let (u1, u2) = quad.unstable_diagonal(face);
        if u1 != u2 {
            let dying = vertex_values[u1].min(vertex_values[u2]);
            out.push(Candidate {
                face,
                diagonal: Diagonal::Unstable,
                persistence: dying - face_values[face],
            });
        }
    }
    out
}

/// Cancel minimum-persistence pairs while one exists with persistence at
/// most `threshold` (ties broken by face index, stable diagonal first).
/// With an infinite threshold the result is the two-vertex base path.
pub fn simplify(
    quad: &QuadComplex,
    vertex_values: &[f64],
    face_values: &[f64],
    threshold: f64,
) -> Result<SimplifiedComplex, SimplifyError> {
    let n = quad.kinds().len();
    if vertex_values.len() != n {
        return Err(SimplifyError::VertexValueCount);
    }
    if face_values.len() != quad.n_saddle_faces() {
        return Err(SimplifyError::FaceValueCount);
    }

    let mut cur = quad.clone();
    let mut vv = vertex_values.to_vec();
    let mut fv = face_values.to_vec();
    let mut composed: Vec<usize> = (0..n).collect();
    let mut cancellations = Vec::new();

    loop {
        let mut best: Option<Candidate> = None;
        for c in candidates(&cur, &vv, &fv) {
            if best.is_none_or(|b| c.persistence < b.persistence) {
                best = Some(c);
            }
        }
        let Some(pick) = best.filter(|c| c.persistence <= threshold) else {
            break;
        };

        let saddle_value = fv[pick.face];
        let extremum_value = match pick.diagonal {
            Diagonal::Stable => saddle_value - pick.persistence,
            Diagonal::Unstable => saddle_value + pick.persistence,
        };
        let step = face_contract(&cur, pick.face, pick.diagonal)?;

        let n_new = step.quad.kinds().len();
        let mut new_vv = vec![f64::NAN; n_new];
        for (old, &value) in vv.iter().enumerate() {
            let target = step.vertex_map[old];
            let slot = &mut new_vv[target];
            *slot = if slot.is_nan() {
                value
            } else {
                match step.quad.kind(target) {
                    VertexKind::Stable => slot.min(value),
                    VertexKind::Unstable => slot.max(value),
                    VertexKind::Saddle => unreachable!("quadrangulation has no saddle vertices"),
                }
            };
        }
        let mut new_fv = vec![f64::NAN; step.quad.n_saddle_faces()];
        for (old, &value) in fv.iter().enumerate() {
            if let Some(target) = step.face_map[old] {
                new_fv[target] = value;
            }
        }
        for slot in &mut composed {
            *slot = step.vertex_map[*slot];
        }

        cancellations.push(Cancellation {
            persistence: pick.persistence,
            diagonal: pick.diagonal,
            saddle_value,
            extremum_value,
        });
        cur = step.quad;
        vv = new_vv;
        fv = new_fv;
    }

    Ok(SimplifiedComplex {
        quad: cur,
        vertex_values: vv,
        face_values: fv,
        cancellations,
        vertex_map: composed,
    })
}

/// Simplify the quadrangulation of an extracted field complex, reading the
/// vertex and saddle values off the extraction.
pub fn simplify_ms_complex(
    ms: &MsComplex,
    threshold: f64,
) -> Result<SimplifiedComplex, SimplifyError> {
    let vv: Vec<f64> =
        (0..ms.quasi.kinds().len()).map(|j| ms.quasi_vertex_value(j)).collect();
    let fv: Vec<f64> = (0..ms.quasi.n_saddle_faces())
        .map(|f| ms.quasi_face_value(f).expect("every saddle face carries a saddle"))
        .collect();
    simplify(&ms.quasi, &vv, &fv, threshold)
}
