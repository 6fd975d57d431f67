//! Chipping events and multi-event chipping simulation.
//!
//! A chipping event removes a thin cap by a cut parallel to a support plane
//! of the body.  [`chip_sequence`] iterates seeded random support-vertex
//! chips, recomputes the resting viewpoint (the centroid of volume) after
//! every event, and classifies each step against the previous
//! critical-point graph: a small chip leaves the graph unchanged or acts as
//! one or two consecutive vertex splittings, and anything else is recorded
//! as [`StepRelation::Anomaly`] rather than rejected.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chipping::{plane_clip, ChipError, PlaneCut};
use crate::genealogy::{enumerate_splits, vertex_split};
use crate::geometry::Vec3;
use crate::mesh::{extract_ms_complex, TriMesh};
use crate::quad_ms::{QuadComplex, Signature};

/// Parameters shared by every event of a chipping run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChipPolicy {
    /// Absolute cut depth of each chip, in body length units.
    pub depth: f64,
}

/// How one event changed the critical-point graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepRelation {
    /// The graph is canonically unchanged.
    Identity,
    /// The graph is a single vertex splitting of its predecessor.
    OneSplit,
    /// The graph is two consecutive vertex splittings of its predecessor.
    TwoSplits,
    /// None of the above: the chip was too large to act locally.
    Anomaly,
}

/// The state after one chipping event.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChipRecord {
    /// 1-based event index within the run.
    pub event: usize,
    /// The cutting plane of the event.
    pub plane: PlaneCut,
    /// Critical-point counts after the event.
    pub signature: Signature,
    /// Canonical code of the quasi-dual graph after the event, hex encoded.
    pub code: String,
    /// Relation of the graph to the previous one.
    pub relation: StepRelation,
}

fn hex(code: &[u8]) -> String {
    use std::fmt::Write;
    code.iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Area-weighted outward normal at vertex `v` (twice the vector area of
/// its incident fan); lies in the normal cone of the vertex, so the
/// perpendicular plane through `v` supports the body.
fn vertex_normal(mesh: &TriMesh, v: usize) -> Result<Vec3, ChipError> {
    let p = mesh.position(v);
    let ring = mesh.ring(v);
    let mut n = Vec3::ZERO;
    for i in 0..ring.len() {
        let a = mesh.position(ring[i]) - p;
        let b = mesh.position(ring[(i + 1) % ring.len()]) - p;
        n = n + a.cross(b);
    }
    n.normalized()
        .ok_or_else(|| ChipError::Degenerate("degenerate vertex fan".into()))
}

/// Remove a cap of thickness `depth` behind the support plane at the mesh
/// vertex nearest to `point`.  A cut too shallow to remove any vertex
/// (including `depth == 0`) returns the body unchanged.
pub fn chip_event(mesh: &TriMesh, point: Vec3, depth: f64) -> Result<TriMesh, ChipError> {
    let (_, cut) = chip_cut(mesh, point, depth)?;
    match plane_clip(mesh, &cut) {
        Err(ChipError::EmptyCut) => Ok(mesh.clone()),
        other => other,
    }
}

/// The cutting plane of [`chip_event`] together with the chipped vertex.
fn chip_cut(mesh: &TriMesh, point: Vec3, depth: f64) -> Result<(usize, PlaneCut), ChipError> {
    if !depth.is_finite() || depth < 0.0 {
        return Err(ChipError::DomainError(
            "chip depth must be finite and nonnegative".into(),
        ));
    }
    let v = (0..mesh.n_vertices())
        .min_by(|&i, &j| {
            mesh.position(i)
                .dist(point)
                .partial_cmp(&mesh.position(j).dist(point))
                .unwrap()
        })
        .ok_or_else(|| ChipError::DomainError("empty mesh".into()))?;
    let n = vertex_normal(mesh, v)?;
    let cut = PlaneCut {
        normal: n,
        offset: n.dot(mesh.position(v)) - depth,
    };
    Ok((v, cut))
}

/// Classify how `next` relates to `prev`: canonically equal, one vertex
/// splitting away, two splittings away, or neither.
pub fn step_relation(prev: &QuadComplex, next: &QuadComplex) -> StepRelation {
    let target = next.canonical_code();
    if prev.canonical_code() == target {
        return StepRelation::Identity;
    }
    let children = split_closure(prev);
    if children.contains_key(&target) {
        return StepRelation::OneSplit;
    }
    // Splits only ever add vertices, so prune children that are already
    // as large as the target before expanding a second generation.
    let next_size = next.kinds().len();
    for child in children.values() {
        if child.kinds().len() >= next_size {
            continue;
        }
        if split_closure(child).contains_key(&target) {
            return StepRelation::TwoSplits;
        }
    }
    StepRelation::Anomaly
}

/// All graphs one splitting away from `q`, deduplicated by canonical code.
fn split_closure(q: &QuadComplex) -> HashMap<Vec<u8>, QuadComplex> {
    let mut out = HashMap::new();
    for choice in enumerate_splits(q) {
        if let Ok(split) = vertex_split(q, choice.vertex, choice.a, choice.b) {
            out.entry(split.quad.canonical_code()).or_insert(split.quad);
        }
    }
    out
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let v = Vec3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let q = v.norm_squared();
        if q > 1e-4 && q <= 1.0 {
            return v * (1.0 / q.sqrt());
        }
    }
}

/// Run `steps` chipping events on `mesh`, each at the support vertex of a
/// seeded random direction, recomputing the centroid-of-volume viewpoint
/// after every event.  Returns one record per event and the final body.
pub fn chip_sequence(
    mesh: &TriMesh,
    policy: &ChipPolicy,
    steps: usize,
    seed: u64,
) -> Result<(Vec<ChipRecord>, TriMesh), ChipError> {
    if !policy.depth.is_finite() || policy.depth <= 0.0 {
        return Err(ChipError::DomainError(
            "chip depth must be finite and positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut body = mesh.clone();
    let mut w = body.centroid_of_volume();
    let mut prev = extract_ms_complex(&body, w)?.quasi;
    let mut records = Vec::with_capacity(steps);
    for event in 1..=steps {
        let dir = random_unit(&mut rng);
        let sv = (0..body.n_vertices())
            .max_by(|&i, &j| {
                (body.position(i) - w)
                    .dot(dir)
                    .partial_cmp(&(body.position(j) - w).dot(dir))
                    .unwrap()
            })
            .expect("nonempty body");
        let (_, cut) = chip_cut(&body, body.position(sv), policy.depth)?;
        match plane_clip(&body, &cut) {
            Ok(next) => body = next,
            Err(ChipError::EmptyCut) => {}
            Err(e) => return Err(e),
        }
        w = body.centroid_of_volume();
        let quad = extract_ms_complex(&body, w)?.quasi;
        let relation = step_relation(&prev, &quad);
        records.push(ChipRecord {
            event,
            plane: cut,
            signature: quad.signature(),
            code: hex(&quad.canonical_code()),
            relation,
        });
        prev = quad;
    }
    Ok((records, body))
}

/// Run one chipping simulation per seed, concurrently when the `parallel`
/// feature is enabled.  Each simulation owns its mesh exclusively, so the
/// results match [`chip_sequence`] seed by seed.
pub fn chip_sequences(
    mesh: &TriMesh,
    policy: &ChipPolicy,
    steps: usize,
    seeds: &[u64],
) -> Vec<Result<(Vec<ChipRecord>, TriMesh), ChipError>> {
    crate::par::map_indexed(seeds.len(), |i| chip_sequence(mesh, policy, steps, seeds[i]))
}

/// Sequential reference version of [`chip_sequences`]; same output.
pub fn chip_sequences_serial(
    mesh: &TriMesh,
    policy: &ChipPolicy,
    steps: usize,
    seeds: &[u64],
) -> Vec<Result<(Vec<ChipRecord>, TriMesh), ChipError>> {
    crate::par::map_indexed_serial(seeds.len(), |i| chip_sequence(mesh, policy, steps, seeds[i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::shapes::ellipsoid_mesh;
    use crate::quad_ms::Signature;

    #[test]
    fn a_zero_depth_chip_leaves_the_body_unchanged() {
        let mesh = ellipsoid_mesh(1.0, 0.98, 0.9, 3);
        let out = chip_event(&mesh, Vec3::new(0.0, 0.0, 1.0), 0.0).unwrap();
        assert_eq!(out.n_vertices(), mesh.n_vertices());
        assert!((out.volume() - mesh.volume()).abs() < 1e-12);
    }

    #[test]
    fn a_chip_beside_a_stable_point_acts_as_one_splitting() {
        let mesh = ellipsoid_mesh(1.0, 0.98, 0.9, 4);
        let w = Vec3::ZERO;
        let before = extract_ms_complex(&mesh, w).unwrap().quasi;
        assert_eq!(before.signature(), Signature::new(2, 2, 2));
        // Aim beside the +z stable pole: far enough that the pole survives,
        // close enough that the facet is nearly tangent and keeps its own
        // interior minimum.
        let aim = Vec3::new(0.12f64.sin(), 0.0, 0.12f64.cos());
        let out = chip_event(&mesh, aim, 2e-3).unwrap();
        let after = extract_ms_complex(&out, w).unwrap().quasi;
        assert_eq!(after.signature(), Signature::new(3, 2, 3));
        assert_eq!(step_relation(&before, &after), StepRelation::OneSplit);
    }

    #[test]
    fn a_short_chipping_run_stays_on_split_transitions() {
        let mesh = ellipsoid_mesh(1.0, 0.98, 0.9, 4);
        let policy = ChipPolicy { depth: 2e-3 };
        let (records, body) = chip_sequence(&mesh, &policy, 12, 7).unwrap();
        assert_eq!(records.len(), 12);
        let mut extrema = 2;
        for r in &records {
            assert_ne!(
                r.relation,
                StepRelation::Anomaly,
                "event {} jumped to {}",
                r.event,
                r.signature
            );
            assert!(r.signature.extrema() >= extrema, "extrema decreased");
            extrema = r.signature.extrema();
        }
        assert!(body.volume() < mesh.volume());
    }
}
