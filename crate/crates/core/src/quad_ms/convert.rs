//! Conversions between the three representations, and the bijection
//! between quasi-dual quadrangulations and unrestricted planar maps.
//!
//! Everything here is an instance of one radial construction: given a map,
//! build a new map whose vertices are the old vertices plus the old faces,
//! with one new edge per old corner.  Applied to a quasi-dual complex with
//! the new face-vertices labeled as saddles it yields the primal complex;
//! applied to a planar map with old vertices labeled stable and face
//! vertices unstable it yields the quasi-dual complex encoded by that map.
//!
//! The planar encoding is the workhorse of all surgery: contracting a face
//! of the quadrangulation at its stable diagonal is contracting the
//! corresponding planar edge, contracting at the unstable diagonal is
//! deleting it, and the two kinds of vertex splitting are the two inverse
//! moves.  A coincident stable diagonal corresponds exactly to a planar
//! loop and a coincident unstable diagonal to a bridge; since no edge is
//! both, every face admits at least one contraction.

use super::{ClassError, PrimalComplex, QuadComplex, TriangulatedComplex, VertexKind};
use crate::surface_map::{BuiltMap, Dart, MapBuilder, PlanarMap, RotationSystem};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum RKey {
    /// The corner counterclockwise from the given dart (an edge between the
    /// dart's source vertex and the face-vertex of `face_of(alpha(dart))`).
    Corner(Dart),
    /// A retained original edge (triangulated refinement only).
    Link(usize),
}

/// Radial construction: new vertices are old vertices `0..V` followed by
/// old faces `V..V+F`; one new edge per old corner; with `with_links`, the
/// original edges are retained, interleaved with the corners.  Returns the
/// built map plus the map from old edge to the new face surrounding it.
fn radial(rs: &RotationSystem, with_links: bool) -> (BuiltMap, Vec<usize>) {
    let mut b: MapBuilder<RKey> = MapBuilder::new();
    for cycle in rs.vertex_cycles() {
        let mut keys = Vec::with_capacity(cycle.len() * 2);
        for &d in cycle {
            if with_links {
                keys.push(RKey::Link(rs.edge_of(d)));
            }
            keys.push(RKey::Corner(d));
        }
        b.add_vertex(keys);
    }
    for walk in rs.face_walks() {
        // Face walks run clockwise around the interior (seen from outside),
        // so the counterclockwise rotation at the inserted face-vertex is
        // the reversed walk; the corner at the head of walk dart w is the
        // corner of alpha(w).
        let keys: Vec<RKey> = walk.iter().rev().map(|&w| RKey::Corner(rs.alpha(w))).collect();
        b.add_vertex(keys);
    }
    let built = b.build().expect("radial of a sphere map is a sphere map");
    if with_links {
        // With the original edges retained there is no face surrounding an
        // old edge; callers of this variant do not use the mapping.
        return (built, Vec::new());
    }

    // The new face surrounding old edge e = {m, alpha(m)} is the face
    // containing the corner dart of m on the source side.
    let face_of_edge: Vec<usize> = rs
        .edge_darts()
        .iter()
        .map(|&(m, _)| {
            let v = rs.vertex_of(m);
            let new_dart = built.slots[v][rs.cycle_position(m)];
            built.map.face_of(new_dart)
        })
        .collect();
    debug_assert_eq!(
        {
            let mut seen: Vec<bool> = vec![false; built.map.n_faces()];
            let mut distinct = 0;
            for &f in &face_of_edge {
                if !seen[f] {
                    seen[f] = true;
                    distinct += 1;
                }
            }
            distinct
        },
        built.map.n_faces(),
        "old edges must biject with the new faces that surround them"
    );
    (built, face_of_edge)
}

/// Primal complex of a quasi-dual quadrangulation: one saddle per face,
/// separatrices from each saddle to the four corner extrema.  Vertices
/// `0..V` are the quasi-dual vertices in order; vertex `V + f` is the
/// saddle of face `f`.
pub fn to_primal(q: &QuadComplex) -> PrimalComplex {
    if q.is_base_path() {
        return PrimalComplex::new(q.map().clone(), q.kinds().to_vec())
            .expect("base path is a valid primal complex");
    }
    let (built, _) = radial(q.map(), false);
    let mut kinds = q.kinds().to_vec();
    kinds.extend(std::iter::repeat(VertexKind::Saddle).take(q.map().n_faces()));
    PrimalComplex::new(built.map, kinds).expect("radial of a quasi-dual is a valid primal complex")
}

/// Triangulated refinement: the primal complex with the quasi-dual edges
/// retained.  Vertex numbering as in [`to_primal`].
pub fn to_triangulated(q: &QuadComplex) -> TriangulatedComplex {
    if q.is_base_path() {
        return TriangulatedComplex::new(q.map().clone(), q.kinds().to_vec())
            .expect("base path is a valid triangulated complex");
    }
    let (built, _) = radial(q.map(), true);
    let mut kinds = q.kinds().to_vec();
    kinds.extend(std::iter::repeat(VertexKind::Saddle).take(q.map().n_faces()));
    TriangulatedComplex::new(built.map, kinds)
        .expect("refined radial of a quasi-dual is a valid triangulated complex")
}

/// Recover the quasi-dual from a primal complex: extrema keep their
/// relative order; one quasi-dual edge per primal face.
pub fn primal_to_quasi(p: &PrimalComplex) -> QuadComplex {
    primal_to_quasi_with_maps(p).0
}

/// Correspondence between a primal complex and its recovered quasi-dual.
#[derive(Debug, Clone)]
pub struct QuasiCorrespondence {
    /// Primal vertex -> quasi-dual vertex (`None` for saddles).
    pub quasi_of_primal: Vec<Option<usize>>,
    /// Quasi-dual vertex -> the primal extremum it came from.
    pub primal_of_quasi: Vec<usize>,
    /// Primal face -> the quasi-dual edge crossing it.
    pub quasi_edge_of_face: Vec<usize>,
    /// Primal saddle -> the quasi-dual face around it (`None` for extrema).
    pub quasi_face_of_saddle: Vec<Option<usize>>,
}

/// [`primal_to_quasi`] together with the vertex, edge and face
/// correspondence between the two pictures.
pub fn primal_to_quasi_with_maps(p: &PrimalComplex) -> (QuadComplex, QuasiCorrespondence) {
    let rs = p.map();
    if p.is_base_path() {
        let quad = QuadComplex::new(rs.clone(), p.kinds().to_vec())
            .expect("base path is a valid quasi-dual");
        let corr = QuasiCorrespondence {
            quasi_of_primal: vec![Some(0), Some(1)],
            primal_of_quasi: vec![0, 1],
            quasi_edge_of_face: vec![0; rs.n_faces()],
            quasi_face_of_saddle: vec![None; rs.n_vertices()],
        };
        return (quad, corr);
    }

    let mut b: MapBuilder<usize> = MapBuilder::new();
    let mut kinds = Vec::new();
    let mut extrema = Vec::new();
    for (v, cycle) in rs.vertex_cycles().iter().enumerate() {
        if p.kinds()[v] == VertexKind::Saddle {
            continue;
        }
        // Around an extremum, each corner lies in one primal face; that
        // face becomes a quasi-dual edge.
        b.add_vertex(cycle.iter().map(|&d| rs.face_of(rs.alpha(d))).collect());
        kinds.push(p.kinds()[v]);
        extrema.push(v);
    }
    let built = b.build().expect("quasi-dual of a primal complex is a sphere map");
    let m = &built.map;

    let mut quasi_of_primal = vec![None; rs.n_vertices()];
    for (j, &v) in extrema.iter().enumerate() {
        quasi_of_primal[v] = Some(j);
    }

    // The quasi-dual dart aligned with primal cycle dart d runs through the
    // corner face of d; the quasi-dual face on its walk side is the region
    // around the saddle at the head of d.
    let mut quasi_edge_of_face = vec![usize::MAX; rs.n_faces()];
    let mut quasi_face_of_saddle = vec![None; rs.n_vertices()];
    for (j, &v) in extrema.iter().enumerate() {
        for (k, &d) in rs.vertex_cycles()[v].iter().enumerate() {
            let f = rs.face_of(rs.alpha(d));
            let e = m.edge_of(built.slots[j][k]);
            debug_assert!(quasi_edge_of_face[f] == usize::MAX || quasi_edge_of_face[f] == e);
            quasi_edge_of_face[f] = e;

            let s = rs.head_of(d);
            debug_assert_eq!(p.kinds()[s], VertexKind::Saddle);
            let g = m.face_of(built.slots[j][k]);
            debug_assert!(quasi_face_of_saddle[s].map_or(true, |g0| g0 == g));
            quasi_face_of_saddle[s] = Some(g);
        }
    }
    debug_assert_eq!(
        quasi_face_of_saddle.iter().filter(|g| g.is_some()).count(),
        m.n_faces(),
        "saddles must biject with the quasi-dual faces around them"
    );

    let quad = QuadComplex::new(built.map, kinds)
        .expect("quasi-dual recovered from primal must validate");
    (quad, QuasiCorrespondence { quasi_of_primal, primal_of_quasi: extrema, quasi_edge_of_face, quasi_face_of_saddle })
}

/// Recover the quasi-dual from the triangulated refinement by dropping
/// saddles and separatrices.
pub fn triangulated_to_quasi(t: &TriangulatedComplex) -> QuadComplex {
    if t.is_base_path() {
        return QuadComplex::new(t.map().clone(), t.kinds().to_vec())
            .expect("base path is a valid quasi-dual");
    }
    let rs = t.map();
    let mut b: MapBuilder<usize> = MapBuilder::new();
    let mut kinds = Vec::new();
    for (v, cycle) in rs.vertex_cycles().iter().enumerate() {
        if t.kinds()[v] == VertexKind::Saddle {
            continue;
        }
        let keys: Vec<usize> = cycle
            .iter()
            .filter(|&&d| t.kinds()[rs.head_of(d)] != VertexKind::Saddle)
            .map(|&d| rs.edge_of(d))
            .collect();
        b.add_vertex(keys);
        kinds.push(t.kinds()[v]);
    }
    let built = b.build().expect("quasi-dual of a triangulated complex is a sphere map");
    QuadComplex::new(built.map, kinds).expect("quasi-dual recovered from refinement must validate")
}

pub fn primal_to_triangulated(p: &PrimalComplex) -> TriangulatedComplex {
    to_triangulated(&primal_to_quasi(p))
}

pub fn triangulated_to_primal(t: &TriangulatedComplex) -> PrimalComplex {
    to_primal(&triangulated_to_quasi(t))
}

/// The planar map encoding a quasi-dual quadrangulation, with enough
/// bookkeeping to translate surgery between the two pictures.
pub struct PlanarEncoding {
    /// Vertices are the stable quasi-dual vertices (in quasi-dual order),
    /// edges are the quadrangulation's faces, faces are the unstable
    /// vertices.  The base path encodes as the trivial map.
    pub planar: PlanarMap,
    /// Planar vertex index -> quasi-dual vertex id of that stable.
    pub stable_of_mvertex: Vec<usize>,
    /// Quasi-dual vertex id -> planar vertex index (stables only).
    pub mvertex_of_stable: Vec<Option<usize>>,
    /// `slots[j][k]`: planar dart aligned with the `k`-th cycle dart of the
    /// `j`-th stable vertex (empty for the base path).
    pub slots: Vec<Vec<Dart>>,
    /// Quasi-dual face id -> planar edge id (empty for the base path).
    pub medge_of_face: Vec<usize>,
    /// Quasi-dual vertex id -> planar face index (unstables only).
    pub mface_of_unstable: Vec<Option<usize>>,
    /// Planar face index -> quasi-dual vertex id of that unstable.
    pub unstable_of_mface: Vec<usize>,
}

/// Encode a quasi-dual quadrangulation as a planar map on its stable
/// vertices: one planar edge per face, joining the face's stable diagonal.
pub fn to_planar(q: &QuadComplex) -> PlanarEncoding {
    let rs = q.map();
    let stables: Vec<usize> =
        (0..rs.n_vertices()).filter(|&v| q.kind(v) == VertexKind::Stable).collect();
    let mut mvertex_of_stable = vec![None; rs.n_vertices()];
    for (j, &v) in stables.iter().enumerate() {
        mvertex_of_stable[v] = Some(j);
    }

    if q.is_base_path() {
        let mut mface_of_unstable = vec![None; rs.n_vertices()];
        let unstable = (0..rs.n_vertices()).find(|&v| q.kind(v) == VertexKind::Unstable).unwrap();
        mface_of_unstable[unstable] = Some(0);
        return PlanarEncoding {
            planar: PlanarMap::Trivial,
            stable_of_mvertex: stables,
            mvertex_of_stable,
            slots: Vec::new(),
            medge_of_face: Vec::new(),
            mface_of_unstable,
            unstable_of_mface: vec![unstable],
        };
    }

    let mut b: MapBuilder<usize> = MapBuilder::new();
    for &v in &stables {
        // One planar edge per face incident at each corner of the stable.
        b.add_vertex(rs.vertex_cycles()[v].iter().map(|&d| rs.face_of(rs.alpha(d))).collect());
    }
    let built = b.build().expect("planar encoding of a quasi-dual is a sphere map");
    let m = built.map;

    let mut medge_of_face = vec![usize::MAX; rs.n_faces()];
    for (j, &v) in stables.iter().enumerate() {
        for (k, &d) in rs.vertex_cycles()[v].iter().enumerate() {
            let f = rs.face_of(rs.alpha(d));
            let e = m.edge_of(built.slots[j][k]);
            debug_assert!(medge_of_face[f] == usize::MAX || medge_of_face[f] == e);
            medge_of_face[f] = e;
        }
    }

    // The planar face containing the dart aligned with quasi-dual dart d
    // is the one encoding the unstable vertex at the head of d.
    let mut mface_of_unstable = vec![None; rs.n_vertices()];
    let mut unstable_of_mface = vec![usize::MAX; m.n_faces()];
    for (j, &v) in stables.iter().enumerate() {
        for (k, &d) in rs.vertex_cycles()[v].iter().enumerate() {
            let u = rs.head_of(d);
            let g = m.face_of(built.slots[j][k]);
            debug_assert!(mface_of_unstable[u].map_or(true, |g0| g0 == g));
            mface_of_unstable[u] = Some(g);
            debug_assert!(unstable_of_mface[g] == usize::MAX || unstable_of_mface[g] == u);
            unstable_of_mface[g] = u;
        }
    }
    debug_assert!(unstable_of_mface.iter().all(|&u| u != usize::MAX));

    PlanarEncoding {
        planar: PlanarMap::Map(m),
        stable_of_mvertex: stables,
        mvertex_of_stable,
        slots: built.slots,
        medge_of_face,
        mface_of_unstable,
        unstable_of_mface,
    }
}

/// A quasi-dual quadrangulation decoded from a planar map.
pub struct DecodedQuad {
    pub quad: QuadComplex,
    /// Number of planar vertices: quasi-dual vertex `j < n_mvertices` is
    /// planar vertex `j` (stable); vertex `n_mvertices + g` is planar face
    /// `g` (unstable).
    pub n_mvertices: usize,
    /// Planar edge id -> quasi-dual face id.
    pub qface_of_medge: Vec<usize>,
}

/// Decode a planar map into the quasi-dual quadrangulation it encodes (the
/// radial construction).
pub fn from_planar(m: &PlanarMap) -> DecodedQuad {
    match m {
        PlanarMap::Trivial => DecodedQuad {
            quad: QuadComplex::base_path(),
            n_mvertices: 1,
            qface_of_medge: Vec::new(),
        },
        PlanarMap::Map(rs) => {
            let (built, face_of_edge) = radial(rs, false);
            let mut kinds = vec![VertexKind::Stable; rs.n_vertices()];
            kinds.extend(std::iter::repeat(VertexKind::Unstable).take(rs.n_faces()));
            let quad = QuadComplex::new(built.map, kinds)
                .expect("radial of a planar map is a valid quasi-dual");
            DecodedQuad { quad, n_mvertices: rs.n_vertices(), qface_of_medge: face_of_edge }
        }
    }
}

/// Convert a labeled map into whichever representation it is, then to the
/// quasi-dual.  Used by callers that accept any representation as input.
pub fn any_to_quasi(
    map: RotationSystem,
    kinds: Vec<VertexKind>,
) -> Result<QuadComplex, ClassError> {
    match super::detect_representation(&map, &kinds) {
        super::Representation::QuasiDual => QuadComplex::new(map, kinds),
        super::Representation::Primal => Ok(primal_to_quasi(&PrimalComplex::new(map, kinds)?)),
        super::Representation::Triangulated => {
            Ok(triangulated_to_quasi(&TriangulatedComplex::new(map, kinds)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad_ms::{quad_cycle4, quad_path3, Signature};
    use crate::surface_map::MapBuilder;

    fn quad_cube() -> QuadComplex {
        // Cube graph, bipartite 2-coloring: the (4, 4, 6) class.
        let nbrs: [[usize; 3]; 8] = [
            [1, 4, 3],
            [0, 2, 5],
            [3, 6, 1],
            [2, 0, 7],
            [5, 7, 0],
            [4, 1, 6],
            [7, 5, 2],
            [6, 3, 4],
        ];
        let mut b = MapBuilder::new();
        for (v, ns) in nbrs.iter().enumerate() {
            b.add_vertex(ns.iter().map(|&u| (v.min(u), v.max(u))).collect());
        }
        let built = b.build().unwrap();
        // Coordinate-parity 2-coloring: vertices {0,2,5,7} form one class.
        let kinds = [0, 1, 0, 1, 1, 0, 1, 0]
            .iter()
            .map(|&c| if c == 0 { VertexKind::Stable } else { VertexKind::Unstable })
            .collect::<Vec<_>>();
        QuadComplex::new(built.map, kinds).unwrap()
    }

    #[test]
    fn cube_class_has_expected_signature() {
        let q = quad_cube();
        assert_eq!(q.signature(), Signature::new(4, 4, 6));
    }

    #[test]
    fn primal_of_four_cycle_has_six_vertices_and_quadrilateral_regions() {
        let p = to_primal(&quad_cycle4());
        assert_eq!(p.map().n_vertices(), 6);
        assert_eq!(p.map().n_edges(), 8);
        assert_eq!(p.map().n_faces(), 4);
        assert_eq!(p.signature(), Signature::new(2, 2, 2));
    }

    #[test]
    fn primal_of_three_vertex_path_has_doubled_saddle_edge() {
        let p = to_primal(&quad_path3());
        assert_eq!(p.map().n_vertices(), 4);
        assert_eq!(p.map().n_edges(), 4);
        assert_eq!(p.map().n_faces(), 2);
        // The middle (coincident-diagonal) vertex is joined to the saddle
        // by two parallel separatrices.
        let rs = p.map();
        let mut pair_counts = std::collections::HashMap::new();
        for &(d, ad) in rs.edge_darts() {
            let mut pair = [rs.vertex_of(d), rs.vertex_of(ad)];
            pair.sort();
            *pair_counts.entry(pair).or_insert(0) += 1;
        }
        assert!(pair_counts.values().any(|&c| c == 2));
    }

    #[test]
    fn triangulated_counts_scale_with_saddles() {
        let q = quad_cube();
        let t = to_triangulated(&q);
        // V = S+U+H, E = 6H, F = 4H.
        assert_eq!(t.map().n_vertices(), 14);
        assert_eq!(t.map().n_edges(), 36);
        assert_eq!(t.map().n_faces(), 24);
    }

    #[test]
    fn representation_round_trips_are_canonical_identities() {
        for q in [QuadComplex::base_path(), quad_path3(), quad_cycle4(), quad_cube()] {
            let code = q.canonical_code();
            let p = to_primal(&q);
            assert_eq!(primal_to_quasi(&p).canonical_code(), code);
            let t = to_triangulated(&q);
            assert_eq!(triangulated_to_quasi(&t).canonical_code(), code);
            let t2 = primal_to_triangulated(&p);
            assert_eq!(t2.canonical_code(), t.canonical_code());
            assert_eq!(triangulated_to_primal(&t).canonical_code(), p.canonical_code());
        }
    }

    #[test]
    fn four_cycle_encodes_as_double_edge_between_two_vertices() {
        let enc = to_planar(&quad_cycle4());
        match &enc.planar {
            PlanarMap::Map(m) => {
                assert_eq!(m.n_vertices(), 2);
                assert_eq!(m.n_edges(), 2);
                assert_eq!(m.n_faces(), 2);
            }
            PlanarMap::Trivial => panic!("expected a nontrivial encoding"),
        }
    }

    #[test]
    fn path3_colorings_encode_as_single_edge_and_single_loop() {
        let enc = to_planar(&quad_path3());
        match &enc.planar {
            PlanarMap::Map(m) => {
                assert_eq!((m.n_vertices(), m.n_edges(), m.n_faces()), (2, 1, 1));
            }
            PlanarMap::Trivial => panic!(),
        }
        // Recolor: unstable at the ends, stable in the middle.
        let flipped = QuadComplex::new(
            crate::surface_map::path3(),
            vec![VertexKind::Unstable, VertexKind::Stable, VertexKind::Unstable],
        )
        .unwrap();
        let enc = to_planar(&flipped);
        match &enc.planar {
            PlanarMap::Map(m) => {
                assert_eq!((m.n_vertices(), m.n_edges(), m.n_faces()), (1, 1, 2));
            }
            PlanarMap::Trivial => panic!(),
        }
    }

    #[test]
    fn planar_round_trip_is_canonical_identity() {
        for q in [QuadComplex::base_path(), quad_path3(), quad_cycle4(), quad_cube()] {
            let enc = to_planar(&q);
            let dec = from_planar(&enc.planar);
            assert_eq!(dec.quad.canonical_code(), q.canonical_code());
            assert_eq!(dec.quad.signature(), q.signature());
        }
    }

    #[test]
    fn decoded_face_edge_correspondence_is_consistent() {
        let enc = to_planar(&quad_cycle4());
        let dec = from_planar(&enc.planar);
        // Faces biject with planar edges; each decoded face's stable
        // diagonal must be the corresponding edge's endpoints.
        let m = match &enc.planar {
            PlanarMap::Map(m) => m,
            PlanarMap::Trivial => unreachable!(),
        };
        for (e, &f) in dec.qface_of_medge.iter().enumerate() {
            let (d, ad) = m.edge_darts()[e];
            let (a, b) = dec.quad.stable_diagonal(f);
            let expect = {
                let mut p = [m.vertex_of(d), m.vertex_of(ad)];
                p.sort();
                p
            };
            let mut got = [a, b];
            got.sort();
            assert_eq!(got, expect);
        }
    }

    #[test]
    fn single_loop_decodes_to_flipped_three_path() {
        let loop_map = RotationSystem::new(vec![1, 0], vec![1, 0]);
        // sigma swaps the two darts of one loop at a single vertex.
        let rs = loop_map.unwrap();
        assert_eq!((rs.n_vertices(), rs.n_edges(), rs.n_faces()), (1, 1, 2));
        let dec = from_planar(&PlanarMap::Map(rs));
        assert_eq!(dec.quad.signature(), Signature::new(1, 2, 1));
    }

    #[test]
    fn any_to_quasi_accepts_all_representations() {
        let q = quad_cycle4();
        let code = q.canonical_code();
        let p = to_primal(&q);
        let t = to_triangulated(&q);
        for (map, kinds) in [
            (q.map().clone(), q.kinds().to_vec()),
            (p.map().clone(), p.kinds().to_vec()),
            (t.map().clone(), t.kinds().to_vec()),
        ] {
            let back = any_to_quasi(map, kinds).unwrap();
            assert_eq!(back.canonical_code(), code);
        }
    }
}
