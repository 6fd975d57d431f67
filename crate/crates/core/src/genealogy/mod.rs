//! Combinatorial moves on quasi-dual quadrangulations: face contraction,
//! vertex splitting, diagonal slides, reduction to the base path, and the
//! bifurcation metagraph built from them.
//!
//! Every move is carried out on the planar encoding (stables as vertices,
//! faces as edges, unstables as faces) or directly on the quadrangulation,
//! via token-list surgery, then revalidated from scratch.

mod enumerate;
mod surgery;

pub use enumerate::{
    metagraph, metagraph_serial, split_reachable, MetaNode, Metagraph, SlideEdge, SplitEdge,
};

use surgery::CycleSurgery;
use thiserror::Error;

use crate::quad_ms::{
    convert::{from_planar, to_planar},
    QuadComplex, VertexKind,
};
use crate::surface_map::PlanarMap;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OpError {
    #[error("face index out of range")]
    InvalidFace,
    #[error("vertex index out of range")]
    InvalidVertex,
    #[error("edge index out of range")]
    InvalidEdge,
    #[error("requested diagonal has coincident endpoints; not a contractible pair")]
    NotDiagonalPair,
    #[error("split position out of range for this vertex")]
    InvalidChoice,
    #[error("slide region is not an embedded hexagon")]
    InvalidRegion,
    #[error("surgery produced an invalid complex: {0}")]
    ResultInvalid(String),
    #[error("no contractible diagonal in any face")]
    NoValidContraction,
}

/// Which diagonal of a face an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Diagonal {
    Stable,
    Unstable,
}

/// Which of the two new diagonals a slide installs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SlideChoice {
    /// Rotate the diagonal one corner counterclockwise.
    One,
    /// Rotate the diagonal two corners counterclockwise.
    Two,
}

/// Result of a face contraction, with tracking maps into the new complex.
#[derive(Debug)]
pub struct Contraction {
    pub quad: QuadComplex,
    /// Old vertex -> new vertex (the merged pair maps to one vertex).
    pub vertex_map: Vec<usize>,
    /// Old face -> new face; `None` exactly for the contracted face.
    pub face_map: Vec<Option<usize>>,
}

/// Result of a vertex split.
#[derive(Debug)]
pub struct SplitOutcome {
    pub quad: QuadComplex,
    /// The face created by the split.
    pub new_face: usize,
    /// The two copies of the split vertex (the matching diagonal of the
    /// new face).
    pub clones: (usize, usize),
}

/// Result of a diagonal slide.
#[derive(Debug)]
pub struct SlideOutcome {
    pub quad: QuadComplex,
    /// The edge installed as the new diagonal.
    pub new_edge: usize,
}

/// One step of a reduction to the base path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContractionStep {
    pub face: usize,
    pub diagonal: Diagonal,
}

/// A split choice: pull vertex `vertex` apart between gaps `a <= b`, where
/// gap `i` precedes the `i`-th edge of the vertex rotation.  `a == b`
/// detaches a pendant copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SplitChoice {
    pub vertex: usize,
    pub a: usize,
    pub b: usize,
}

/// Contract `face` along its stable or unstable diagonal, merging the two
/// endpoints (stable) or the two flanking regions (unstable).  Fails with
/// [`OpError::NotDiagonalPair`] when that diagonal's endpoints coincide.
pub fn face_contract(q: &QuadComplex, face: usize, diag: Diagonal) -> Result<Contraction, OpError> {
    if face >= q.n_saddle_faces() {
        return Err(OpError::InvalidFace);
    }
    let pair = match diag {
        Diagonal::Stable => q.stable_diagonal(face),
        Diagonal::Unstable => q.unstable_diagonal(face),
    };
    if pair.0 == pair.1 {
        return Err(OpError::NotDiagonalPair);
    }

    let enc = to_planar(q);
    let m = match &enc.planar {
        PlanarMap::Map(m) => m,
        PlanarMap::Trivial => unreachable!("non-base complexes encode as a real map"),
    };
    let e = enc.medge_of_face[face];
    let (t1, t2) = m.edge_darts()[e];

    let mut s = CycleSurgery::from_map(m);
    let kept_slot = match diag {
        Diagonal::Stable => Some(s.contract_edge(t1, t2)),
        Diagonal::Unstable => {
            s.delete_edge(t1, t2);
            None
        }
    };
    let r = s.rebuild().map_err(|e| OpError::ResultInvalid(e.to_string()))?;
    let dec = from_planar(&r.planar);

    // New planar face for each old planar face, via surviving walk darts
    // (tokens); the two sides of a deleted edge merge, and a side whose
    // whole walk was the deleted edge inherits from its partner.
    let mut new_face_of = vec![None; m.n_faces()];
    for (g, walk) in m.face_walks().iter().enumerate() {
        for &t in walk {
            if let Some(f) = r.face_of_token(t) {
                debug_assert!(new_face_of[g].map_or(true, |f0| f0 == f));
                new_face_of[g] = Some(f);
            }
        }
    }
    if diag == Diagonal::Unstable {
        let (g1, g2) = (m.face_of(t1), m.face_of(t2));
        if new_face_of[g1].is_none() {
            new_face_of[g1] = new_face_of[g2];
        }
        if new_face_of[g2].is_none() {
            new_face_of[g2] = new_face_of[g1];
        }
    }

    let vertex_map: Vec<usize> = (0..q.map().n_vertices())
        .map(|v| match q.kind(v) {
            VertexKind::Stable => {
                let slot = enc.mvertex_of_stable[v].unwrap();
                let slot = match (r.vertex_of_slot[slot], kept_slot) {
                    (Some(_), _) => slot,
                    (None, Some((kept, _))) => kept,
                    (None, None) => unreachable!("deletion never removes a vertex"),
                };
                match r.vertex_of_slot[slot] {
                    Some(new_m) => new_m,
                    // Trivial result: the base path's single stable.
                    None => 0,
                }
            }
            VertexKind::Unstable => {
                let g = enc.mface_of_unstable[v].unwrap();
                match (&r.planar, new_face_of[g]) {
                    (PlanarMap::Map(_), Some(f)) => dec.n_mvertices + f,
                    // Trivial result: the base path's single unstable.
                    _ => 1,
                }
            }
            VertexKind::Saddle => unreachable!("quasi-dual has no saddle vertices"),
        })
        .collect();

    let edge_table = s.edge_index_table(&r);
    let face_map: Vec<Option<usize>> = (0..q.n_saddle_faces())
        .map(|f| {
            if f == face {
                None
            } else {
                let id = enc.medge_of_face[f];
                Some(dec.qface_of_medge[edge_table[&id]])
            }
        })
        .collect();

    Ok(Contraction { quad: dec.quad, vertex_map, face_map })
}

/// Split vertex `v` between rotation gaps `a` and `b` (each in
/// `0..degree(v)`, order irrelevant), creating one new vertex of the same
/// kind and one new face between the two copies.
pub fn vertex_split(q: &QuadComplex, v: usize, a: usize, b: usize) -> Result<SplitOutcome, OpError> {
    let rs = q.map();
    if v >= rs.n_vertices() {
        return Err(OpError::InvalidVertex);
    }
    let deg = rs.degree(v);
    if a >= deg || b >= deg {
        return Err(OpError::InvalidChoice);
    }
    let (a, b) = (a.min(b), a.max(b));
    let kind = q.kind(v);

    if q.is_base_path() {
        // Planar picture: split the trivial map's single vertex into two.
        let map = crate::surface_map::path3();
        let kinds = match kind {
            VertexKind::Stable => {
                vec![VertexKind::Stable, VertexKind::Unstable, VertexKind::Stable]
            }
            VertexKind::Unstable => {
                vec![VertexKind::Unstable, VertexKind::Stable, VertexKind::Unstable]
            }
            VertexKind::Saddle => unreachable!(),
        };
        let quad = QuadComplex::new(map, kinds).expect("three-vertex path is valid");
        let clones = match kind {
            VertexKind::Stable => quad.stable_diagonal(0),
            _ => quad.unstable_diagonal(0),
        };
        return Ok(SplitOutcome { quad, new_face: 0, clones });
    }

    let enc = to_planar(q);
    let m = match &enc.planar {
        PlanarMap::Map(m) => m,
        PlanarMap::Trivial => unreachable!(),
    };
    let mut s = CycleSurgery::from_map(m);

    let new_edge_id = match kind {
        VertexKind::Stable => {
            let j = enc.mvertex_of_stable[v].unwrap();
            let (_, edge_id, _, _) = s.split_vertex(j, a, b);
            edge_id
        }
        VertexKind::Unstable => {
            // Corner of the planar face at gap i: the planar dart opposite
            // the one aligned with the i-th quasi-dual dart into v.
            let corner_token = |i: usize| -> usize {
                let e_i = rs.vertex_cycles()[v][i];
                let c_i = rs.alpha(e_i);
                let w = rs.vertex_of(c_i);
                let m_dart = enc.slots[enc.mvertex_of_stable[w].unwrap()][rs.cycle_position(c_i)];
                debug_assert_eq!(m.face_of(m_dart), enc.mface_of_unstable[v].unwrap());
                m.alpha(m_dart)
            };
            let (ca, cb) = (corner_token(a), corner_token(b));
            let (edge_id, _, _) = s.insert_chord(ca, cb);
            edge_id
        }
        VertexKind::Saddle => unreachable!(),
    };

    let r = s.rebuild().map_err(|e| OpError::ResultInvalid(e.to_string()))?;
    let dec = from_planar(&r.planar);
    let edge_table = s.edge_index_table(&r);
    let new_face = dec.qface_of_medge[edge_table[&new_edge_id]];
    let clones = match kind {
        VertexKind::Stable => dec.quad.stable_diagonal(new_face),
        _ => dec.quad.unstable_diagonal(new_face),
    };
    Ok(SplitOutcome { quad: dec.quad, new_face, clones })
}

/// Slide the diagonal `edge`: remove it, merge its two flanking faces into
/// a hexagon, and install the diagonal one or two corners around.  Requires
/// the two flanking faces to be distinct.
pub fn diagonal_slide(
    q: &QuadComplex,
    edge: usize,
    choice: SlideChoice,
) -> Result<SlideOutcome, OpError> {
    let rs = q.map();
    if edge >= rs.n_edges() {
        return Err(OpError::InvalidEdge);
    }
    let (d, d2) = rs.edge_darts()[edge];
    if q.is_base_path() || rs.face_of(d) == rs.face_of(d2) {
        return Err(OpError::InvalidRegion);
    }

    // Corner anchors absorbing the removed diagonal's sectors.
    let anchor_s = rs.sigma_inv(d);
    let anchor_u = rs.sigma_inv(d2);
    debug_assert!(anchor_s != d && anchor_u != d2, "flanking faces distinct => degree >= 2");

    let mut s = CycleSurgery::from_map(rs);
    s.delete_edge(d, d2);
    let r1 = s.rebuild().map_err(|e| OpError::ResultInvalid(e.to_string()))?;
    let m1 = r1.map().expect("hexagon stage keeps at least two edges");

    let corner_dart = |t: usize| m1.alpha(r1.dart_of_token[t].unwrap());
    let hex = m1.face_of(corner_dart(anchor_s));
    debug_assert_eq!(hex, m1.face_of(corner_dart(anchor_u)));
    let walk = &m1.face_walks()[hex];
    debug_assert_eq!(walk.len(), 6);

    // Corner i of the hexagon sits at the head of walk dart i.
    let token_of_dart: std::collections::HashMap<usize, usize> = r1
        .dart_of_token
        .iter()
        .enumerate()
        .filter_map(|(t, d)| d.map(|d| (d, t)))
        .collect();
    let pos_s = walk
        .iter()
        .position(|&w| m1.alpha(w) == r1.dart_of_token[anchor_s].unwrap())
        .expect("removed endpoint is a hexagon corner");
    let pos_u = walk
        .iter()
        .position(|&w| m1.alpha(w) == r1.dart_of_token[anchor_u].unwrap())
        .expect("removed endpoint is a hexagon corner");
    debug_assert_eq!((pos_s + 3) % 6, pos_u, "old diagonal endpoints sit opposite");

    let off = match choice {
        SlideChoice::One => 1,
        SlideChoice::Two => 2,
    };
    let ta = token_of_dart[&m1.alpha(walk[(pos_s + off) % 6])];
    let tb = token_of_dart[&m1.alpha(walk[(pos_s + off + 3) % 6])];
    let (new_edge_id, _, _) = s.insert_chord(ta, tb);

    let r2 = s.rebuild().map_err(|e| OpError::ResultInvalid(e.to_string()))?;
    let m2 = r2.map().expect("slide result is a real map").clone();
    debug_assert!(r2.vertex_of_slot.iter().enumerate().all(|(i, v)| *v == Some(i)));
    let quad = QuadComplex::new(m2, q.kinds().to_vec())
        .map_err(|e| OpError::ResultInvalid(e.to_string()))?;
    let new_edge = {
        let table = s.edge_index_table(&r2);
        table[&new_edge_id]
    };
    Ok(SlideOutcome { quad, new_edge })
}

/// Contract faces until the base path remains, preferring stable diagonals.
/// Returns the steps taken; each names a face of the complex current at
/// that step.  Every quadrangulation reduces: each face has at least one
/// non-coincident diagonal.
pub fn contract_to_base(q: &QuadComplex) -> Result<Vec<ContractionStep>, OpError> {
    let mut cur = q.clone();
    let mut steps = Vec::new();
    while !cur.is_base_path() {
        let n = cur.n_saddle_faces();
        let pick = (0..n)
            .map(|f| (f, Diagonal::Stable))
            .find(|&(f, _)| {
                let (a, b) = cur.stable_diagonal(f);
                a != b
            })
            .or_else(|| {
                (0..n).map(|f| (f, Diagonal::Unstable)).find(|&(f, _)| {
                    let (a, b) = cur.unstable_diagonal(f);
                    a != b
                })
            })
            .ok_or(OpError::NoValidContraction)?;
        cur = face_contract(&cur, pick.0, pick.1)?.quad;
        steps.push(ContractionStep { face: pick.0, diagonal: pick.1 });
    }
    Ok(steps)
}

/// All split choices available on `q`: for each vertex of degree `k`,
/// the `k(k+1)/2` unordered gap pairs.
pub fn enumerate_splits(q: &QuadComplex) -> Vec<SplitChoice> {
    let rs = q.map();
    let mut out = Vec::new();
    for v in 0..rs.n_vertices() {
        let deg = rs.degree(v);
        for a in 0..deg {
            for b in a..deg {
                out.push(SplitChoice { vertex: v, a, b });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad_ms::{quad_cycle4, quad_path3, Signature};

    fn quad_from_kinds(map: crate::surface_map::RotationSystem, kinds: &[VertexKind]) -> QuadComplex {
        QuadComplex::new(map, kinds.to_vec()).unwrap()
    }

    #[test]
    fn contracting_a_stable_pair_of_the_four_cycle_gives_the_unstable_path() {
        let q = quad_cycle4();
        // Face 0 of the 4-cycle: stable diagonal = the two stables.
        let c = face_contract(&q, 0, Diagonal::Stable).unwrap();
        assert_eq!(c.quad.signature(), Signature::new(1, 2, 1));
        let expect = quad_from_kinds(
            crate::surface_map::path3(),
            &[VertexKind::Unstable, VertexKind::Stable, VertexKind::Unstable],
        );
        assert_eq!(c.quad.canonical_code(), expect.canonical_code());
        // The two stables merged; both unstables survive distinct.
        let stables: Vec<usize> =
            (0..4).filter(|&v| q.kind(v) == VertexKind::Stable).collect();
        assert_eq!(c.vertex_map[stables[0]], c.vertex_map[stables[1]]);
        let unstables: Vec<usize> =
            (0..4).filter(|&v| q.kind(v) == VertexKind::Unstable).collect();
        assert_ne!(c.vertex_map[unstables[0]], c.vertex_map[unstables[1]]);
        // One face contracted, one survives.
        assert_eq!(c.face_map.iter().filter(|f| f.is_none()).count(), 1);
    }

    #[test]
    fn contracting_an_unstable_pair_of_the_four_cycle_gives_the_stable_path() {
        let q = quad_cycle4();
        let c = face_contract(&q, 0, Diagonal::Unstable).unwrap();
        assert_eq!(c.quad.signature(), Signature::new(2, 1, 1));
    }

    #[test]
    fn path_contracts_to_base_in_one_step() {
        let q = quad_path3(); // S-U-S: unstable diagonal coincides.
        assert_eq!(
            face_contract(&q, 0, Diagonal::Unstable).unwrap_err(),
            OpError::NotDiagonalPair
        );
        let c = face_contract(&q, 0, Diagonal::Stable).unwrap();
        assert!(c.quad.is_base_path());
        assert_eq!(c.quad.signature(), Signature::new(1, 1, 0));
        // Both old stables land on the base stable, the unstable on the
        // base unstable.
        assert_eq!(c.vertex_map[0], c.vertex_map[2]);
        assert_eq!(c.quad.kind(c.vertex_map[0]), VertexKind::Stable);
        assert_eq!(c.quad.kind(c.vertex_map[1]), VertexKind::Unstable);
    }

    #[test]
    fn unstable_path_contracts_to_base_by_deletion() {
        let q = quad_from_kinds(
            crate::surface_map::path3(),
            &[VertexKind::Unstable, VertexKind::Stable, VertexKind::Unstable],
        );
        assert_eq!(
            face_contract(&q, 0, Diagonal::Stable).unwrap_err(),
            OpError::NotDiagonalPair
        );
        let c = face_contract(&q, 0, Diagonal::Unstable).unwrap();
        assert!(c.quad.is_base_path());
        assert_eq!(c.vertex_map[0], c.vertex_map[2]);
        assert_eq!(c.quad.kind(c.vertex_map[0]), VertexKind::Unstable);
    }

    #[test]
    fn split_counts_follow_the_degree_formula() {
        assert_eq!(enumerate_splits(&QuadComplex::base_path()).len(), 2);
        assert_eq!(enumerate_splits(&quad_cycle4()).len(), 12);
    }

    #[test]
    fn every_split_choice_is_realizable_and_contracts_back() {
        for q in [QuadComplex::base_path(), quad_path3(), quad_cycle4()] {
            let before = q.canonical_code();
            for c in enumerate_splits(&q) {
                let out = vertex_split(&q, c.vertex, c.a, c.b).unwrap();
                let sig = q.signature();
                assert_eq!(
                    out.quad.signature(),
                    match q.kind(c.vertex) {
                        VertexKind::Stable => Signature::new(
                            sig.stable + 1,
                            sig.unstable,
                            sig.saddle + 1
                        ),
                        _ => Signature::new(sig.stable, sig.unstable + 1, sig.saddle + 1),
                    }
                );
                // Contracting the new face along the matching diagonal
                // restores the original complex.
                let diag = match q.kind(c.vertex) {
                    VertexKind::Stable => Diagonal::Stable,
                    _ => Diagonal::Unstable,
                };
                let back = face_contract(&out.quad, out.new_face, diag).unwrap();
                assert_eq!(back.quad.canonical_code(), before);
            }
        }
    }

    #[test]
    fn splitting_the_base_path_yields_both_three_vertex_paths() {
        let base = QuadComplex::base_path();
        let s = vertex_split(&base, 0, 0, 0).unwrap();
        assert_eq!(s.quad.signature(), Signature::new(2, 1, 1));
        let u = vertex_split(&base, 1, 0, 0).unwrap();
        assert_eq!(u.quad.signature(), Signature::new(1, 2, 1));
    }

    #[test]
    fn degree_four_vertex_offers_ten_splits() {
        // Planar bouquet of two loops: its quasi-dual has one stable of
        // degree four.
        let m = crate::surface_map::RotationSystem::new(
            vec![1, 2, 3, 0],
            vec![1, 0, 3, 2],
        )
        .unwrap();
        assert_eq!(m.n_vertices(), 1);
        let dec = from_planar(&PlanarMap::Map(m));
        let q = dec.quad;
        assert_eq!(q.signature(), Signature::new(1, 3, 2));
        let stable = (0..q.map().n_vertices())
            .find(|&v| q.kind(v) == VertexKind::Stable)
            .unwrap();
        assert_eq!(q.map().degree(stable), 4);
        let choices: Vec<_> = enumerate_splits(&q)
            .into_iter()
            .filter(|c| c.vertex == stable)
            .collect();
        assert_eq!(choices.len(), 10);
        for c in choices {
            vertex_split(&q, c.vertex, c.a, c.b).unwrap();
        }
    }

    #[test]
    fn slide_preserves_signature_and_reverses() {
        let q = quad_cycle4();
        for edge in 0..q.map().n_edges() {
            for choice in [SlideChoice::One, SlideChoice::Two] {
                let out = match diagonal_slide(&q, edge, choice) {
                    Ok(out) => out,
                    Err(OpError::InvalidRegion) => continue,
                    Err(e) => panic!("unexpected slide failure: {e}"),
                };
                assert_eq!(out.quad.signature(), q.signature());
                // Some reverse slide on the new edge restores the start.
                let restored = [SlideChoice::One, SlideChoice::Two].iter().any(|&c2| {
                    diagonal_slide(&out.quad, out.new_edge, c2)
                        .map(|r| r.quad.canonical_code() == q.canonical_code())
                        .unwrap_or(false)
                });
                assert!(restored, "slide on edge {edge} not reversible");
            }
        }
    }

    #[test]
    fn contract_to_base_reaches_the_base_path_within_the_extrema_bound() {
        let m = crate::surface_map::RotationSystem::new(
            vec![1, 2, 3, 0],
            vec![1, 0, 3, 2],
        )
        .unwrap();
        let q = from_planar(&PlanarMap::Map(m)).quad;
        let steps = contract_to_base(&q).unwrap();
        let sig = q.signature();
        assert_eq!(steps.len(), sig.stable + sig.unstable - 2);
    }

    #[test]
    fn base_path_rejects_face_operations() {
        let base = QuadComplex::base_path();
        assert_eq!(face_contract(&base, 0, Diagonal::Stable).unwrap_err(), OpError::InvalidFace);
        assert_eq!(
            diagonal_slide(&base, 0, SlideChoice::One).unwrap_err(),
            OpError::InvalidRegion
        );
        assert_eq!(vertex_split(&base, 5, 0, 0).unwrap_err(), OpError::InvalidVertex);
        assert_eq!(vertex_split(&base, 0, 1, 0).unwrap_err(), OpError::InvalidChoice);
    }
}
