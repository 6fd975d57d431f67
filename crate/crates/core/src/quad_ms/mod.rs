//! The three equivalent combinatorial representations of a Morse-Smale
//! complex on the sphere.
//!
//! * **Quasi-dual quadrangulation** ([`QuadComplex`]): vertices are the
//!   stable (minimum-like) and unstable (maximum-like) equilibria, edges
//!   join stable to unstable, and every face is a quadrilateral carrying
//!   one saddle.  The base case with no saddle is the two-vertex path.
//! * **Primal complex** ([`PrimalComplex`]): vertices of all three kinds;
//!   edges are the saddle separatrices; saddles have degree 4.
//! * **Triangulated refinement** ([`TriangulatedComplex`]): the primal
//!   complex plus the quasi-dual edges, cutting every region into
//!   triangles with one vertex of each kind.
//!
//! Conversions between the representations, and the bijection with
//! unrestricted planar maps that underlies all surgery, live in
//! [`convert`].

pub mod convert;
mod dot;

pub use dot::labeled_map_to_dot;

use crate::surface_map::{
    canonical_form, map_from_json, map_to_json, CanonicalForm, JsonError, RotationSystem,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexKind {
    Stable,
    Unstable,
    Saddle,
}

impl VertexKind {
    pub fn letter(self) -> &'static str {
        match self {
            VertexKind::Stable => "S",
            VertexKind::Unstable => "U",
            VertexKind::Saddle => "H",
        }
    }

    pub fn from_letter(s: &str) -> Option<VertexKind> {
        match s {
            "S" => Some(VertexKind::Stable),
            "U" => Some(VertexKind::Unstable),
            "H" => Some(VertexKind::Saddle),
            _ => None,
        }
    }

    /// Label byte used in canonical codes.
    fn code_byte(self) -> u8 {
        match self {
            VertexKind::Stable => 1,
            VertexKind::Unstable => 2,
            VertexKind::Saddle => 3,
        }
    }

    /// The opposite extremum kind (saddles are self-opposite).
    pub fn opposite(self) -> VertexKind {
        match self {
            VertexKind::Stable => VertexKind::Unstable,
            VertexKind::Unstable => VertexKind::Stable,
            VertexKind::Saddle => VertexKind::Saddle,
        }
    }
}

/// Equilibrium counts `(S, U, H)`; on the sphere `S + U - H = 2`.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize,
)]
pub struct Signature {
    pub stable: usize,
    pub unstable: usize,
    pub saddle: usize,
}

impl Signature {
    pub fn new(stable: usize, unstable: usize, saddle: usize) -> Self {
        Signature { stable, unstable, saddle }
    }

    /// Number of extrema `S + U`.
    pub fn extrema(&self) -> usize {
        self.stable + self.unstable
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.stable, self.unstable, self.saddle)
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ClassError {
    #[error("kind list must have one entry per vertex")]
    KindCount,
    #[error("vertex {0} is missing a kind label")]
    MissingLabel(usize),
    #[error("vertex {0} has a kind not allowed in this representation")]
    KindNotAllowed(usize),
    #[error("edge {0} joins vertices of incompatible kinds")]
    EdgeKindClash(usize),
    #[error("face {0} is not a quadrilateral")]
    FaceNotQuadrilateral(usize),
    #[error("face {0} is not a triangle with one vertex of each kind")]
    FaceNotTriangle(usize),
    #[error("face {0} has both diagonals coincident")]
    BothDiagonalsCoincident(usize),
    #[error("saddle vertex {0} does not have degree 4")]
    SaddleDegree(usize),
    #[error("a saddle-free complex must be the two-vertex path")]
    BasePathShape,
    #[error("edges at vertex {0} do not alternate between the expected kinds")]
    NotAlternating(usize),
    #[error("invalid underlying map: {0}")]
    Map(#[from] crate::surface_map::MapError),
    #[error("invalid JSON input: {0}")]
    Json(String),
}

fn parse_kinds(labels: &[Option<String>]) -> Result<Vec<VertexKind>, ClassError> {
    labels
        .iter()
        .enumerate()
        .map(|(v, l)| {
            let s = l.as_ref().ok_or(ClassError::MissingLabel(v))?;
            VertexKind::from_letter(s).ok_or(ClassError::KindNotAllowed(v))
        })
        .collect()
}

fn kinds_to_labels(kinds: &[VertexKind]) -> Vec<Option<String>> {
    kinds.iter().map(|k| Some(k.letter().to_string())).collect()
}

fn kind_bytes(kinds: &[VertexKind]) -> Vec<u8> {
    kinds.iter().map(|k| k.code_byte()).collect()
}

// ---------------------------------------------------------------------------
// Quasi-dual quadrangulation
// ---------------------------------------------------------------------------

/// A 2-colored quadrangulation of the sphere: the quasi-dual representation
/// of a Morse-Smale complex.  Each face carries one saddle; the saddle-free
/// base case is the two-vertex path (one edge, one face of walk length 2).
#[derive(Debug, Clone)]
pub struct QuadComplex {
    map: RotationSystem,
    kinds: Vec<VertexKind>,
}

impl QuadComplex {
    pub fn new(map: RotationSystem, kinds: Vec<VertexKind>) -> Result<Self, ClassError> {
        if kinds.len() != map.n_vertices() {
            return Err(ClassError::KindCount);
        }
        for (v, k) in kinds.iter().enumerate() {
            if *k == VertexKind::Saddle {
                return Err(ClassError::KindNotAllowed(v));
            }
        }
        for (e, &(d, ad)) in map.edge_darts().iter().enumerate() {
            if kinds[map.vertex_of(d)] == kinds[map.vertex_of(ad)] {
                return Err(ClassError::EdgeKindClash(e));
            }
        }
        if map.n_edges() == 1 {
            // Two-vertex path: the unique saddle-free complex.
            return Ok(QuadComplex { map, kinds });
        }
        for (f, walk) in map.face_walks().iter().enumerate() {
            if walk.len() != 4 {
                return Err(ClassError::FaceNotQuadrilateral(f));
            }
            let v: Vec<usize> = walk.iter().map(|&d| map.vertex_of(d)).collect();
            if v[0] == v[2] && v[1] == v[3] {
                return Err(ClassError::BothDiagonalsCoincident(f));
            }
        }
        Ok(QuadComplex { map, kinds })
    }

    /// The canonical two-vertex path (stable vertex 0, unstable vertex 1).
    pub fn base_path() -> QuadComplex {
        let map = RotationSystem::new(vec![0, 1], vec![1, 0]).unwrap();
        QuadComplex { map, kinds: vec![VertexKind::Stable, VertexKind::Unstable] }
    }

    pub fn map(&self) -> &RotationSystem {
        &self.map
    }

    pub fn kinds(&self) -> &[VertexKind] {
        &self.kinds
    }

    pub fn kind(&self, v: usize) -> VertexKind {
        self.kinds[v]
    }

    /// True for the saddle-free base case.
    pub fn is_base_path(&self) -> bool {
        self.map.n_edges() == 1
    }

    /// Number of saddle-carrying faces (0 for the base path).
    pub fn n_saddle_faces(&self) -> usize {
        if self.is_base_path() {
            0
        } else {
            self.map.n_faces()
        }
    }

    pub fn signature(&self) -> Signature {
        let stable = self.kinds.iter().filter(|k| **k == VertexKind::Stable).count();
        Signature::new(stable, self.kinds.len() - stable, self.n_saddle_faces())
    }

    /// Corner vertices of face `f` in walk order (alternating kinds).
    pub fn face_corner_vertices(&self, f: usize) -> [usize; 4] {
        let w = &self.map.face_walks()[f];
        [
            self.map.vertex_of(w[0]),
            self.map.vertex_of(w[1]),
            self.map.vertex_of(w[2]),
            self.map.vertex_of(w[3]),
        ]
    }

    fn diagonal(&self, f: usize, kind: VertexKind) -> (usize, usize) {
        let v = self.face_corner_vertices(f);
        if self.kinds[v[0]] == kind {
            (v[0], v[2])
        } else {
            (v[1], v[3])
        }
    }

    /// The two stable corners of face `f` (equal when coincident).
    pub fn stable_diagonal(&self, f: usize) -> (usize, usize) {
        self.diagonal(f, VertexKind::Stable)
    }

    /// The two unstable corners of face `f` (equal when coincident).
    pub fn unstable_diagonal(&self, f: usize) -> (usize, usize) {
        self.diagonal(f, VertexKind::Unstable)
    }

    /// Which diagonal of face `f` is coincident, if either.
    pub fn coincident_diagonal(&self, f: usize) -> Option<VertexKind> {
        let (a, b) = self.stable_diagonal(f);
        if a == b {
            return Some(VertexKind::Stable);
        }
        let (a, b) = self.unstable_diagonal(f);
        if a == b {
            return Some(VertexKind::Unstable);
        }
        None
    }

    pub fn canonical(&self) -> CanonicalForm {
        canonical_form(&self.map, &kind_bytes(&self.kinds))
    }

    pub fn canonical_code(&self) -> Vec<u8> {
        self.canonical().code
    }

    pub fn to_json(&self) -> String {
        map_to_json(Some(&self.map), &kinds_to_labels(&self.kinds))
    }

    pub fn from_json(text: &str) -> Result<Self, ClassError> {
        let data = map_from_json(text).map_err(|e| match e {
            JsonError::Map(m) => ClassError::Map(m),
            other => ClassError::Json(other.to_string()),
        })?;
        let map = data.map.ok_or(ClassError::BasePathShape)?;
        let kinds = parse_kinds(&data.labels)?;
        QuadComplex::new(map, kinds)
    }

    pub fn to_dot(&self) -> String {
        labeled_map_to_dot(&self.map, &self.kinds)
    }
}

// ---------------------------------------------------------------------------
// Primal complex
// ---------------------------------------------------------------------------

/// The primal Morse-Smale complex: extrema and saddles as vertices,
/// separatrices as edges.  Every saddle has degree 4 and every face is a
/// quadrilateral `extremum-saddle-extremum-saddle` with the two extrema of
/// opposite kinds.  The saddle-free base case is the two-vertex path.
#[derive(Debug, Clone)]
pub struct PrimalComplex {
    map: RotationSystem,
    kinds: Vec<VertexKind>,
}

impl PrimalComplex {
    pub fn new(map: RotationSystem, kinds: Vec<VertexKind>) -> Result<Self, ClassError> {
        if kinds.len() != map.n_vertices() {
            return Err(ClassError::KindCount);
        }
        let has_saddle = kinds.iter().any(|k| *k == VertexKind::Saddle);
        if !has_saddle {
            // Base path: one stable, one unstable, one edge.
            if map.n_edges() != 1
                || kinds.len() != 2
                || kinds.iter().filter(|k| **k == VertexKind::Stable).count() != 1
            {
                return Err(ClassError::BasePathShape);
            }
            return Ok(PrimalComplex { map, kinds });
        }
        for (e, &(d, ad)) in map.edge_darts().iter().enumerate() {
            let (ka, kb) = (kinds[map.vertex_of(d)], kinds[map.vertex_of(ad)]);
            let saddles = [ka, kb].iter().filter(|k| **k == VertexKind::Saddle).count();
            if saddles != 1 {
                return Err(ClassError::EdgeKindClash(e));
            }
        }
        for (v, k) in kinds.iter().enumerate() {
            if *k == VertexKind::Saddle && map.degree(v) != 4 {
                return Err(ClassError::SaddleDegree(v));
            }
        }
        for (f, walk) in map.face_walks().iter().enumerate() {
            if walk.len() != 4 {
                return Err(ClassError::FaceNotQuadrilateral(f));
            }
            let ks: Vec<VertexKind> = walk.iter().map(|&d| kinds[map.vertex_of(d)]).collect();
            let (x, y) = if ks[0] == VertexKind::Saddle { (ks[1], ks[3]) } else { (ks[0], ks[2]) };
            let (h1, h2) = if ks[0] == VertexKind::Saddle { (ks[0], ks[2]) } else { (ks[1], ks[3]) };
            if h1 != VertexKind::Saddle
                || h2 != VertexKind::Saddle
                || x == VertexKind::Saddle
                || y != x.opposite()
            {
                return Err(ClassError::FaceNotQuadrilateral(f));
            }
        }
        Ok(PrimalComplex { map, kinds })
    }

    pub fn map(&self) -> &RotationSystem {
        &self.map
    }

    pub fn kinds(&self) -> &[VertexKind] {
        &self.kinds
    }

    pub fn is_base_path(&self) -> bool {
        !self.kinds.iter().any(|k| *k == VertexKind::Saddle)
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::new(0, 0, 0);
        for k in &self.kinds {
            match k {
                VertexKind::Stable => sig.stable += 1,
                VertexKind::Unstable => sig.unstable += 1,
                VertexKind::Saddle => sig.saddle += 1,
            }
        }
        sig
    }

    pub fn canonical_code(&self) -> Vec<u8> {
        canonical_form(&self.map, &kind_bytes(&self.kinds)).code
    }

    pub fn to_json(&self) -> String {
        map_to_json(Some(&self.map), &kinds_to_labels(&self.kinds))
    }

    pub fn from_json(text: &str) -> Result<Self, ClassError> {
        let data = map_from_json(text).map_err(|e| match e {
            JsonError::Map(m) => ClassError::Map(m),
            other => ClassError::Json(other.to_string()),
        })?;
        let map = data.map.ok_or(ClassError::BasePathShape)?;
        let kinds = parse_kinds(&data.labels)?;
        PrimalComplex::new(map, kinds)
    }

    pub fn to_dot(&self) -> String {
        labeled_map_to_dot(&self.map, &self.kinds)
    }
}

// ---------------------------------------------------------------------------
// Triangulated refinement
// ---------------------------------------------------------------------------

/// The common triangulated refinement: primal separatrices plus quasi-dual
/// edges.  Every face is a triangle with one vertex of each kind; around
/// each extremum the edges alternate between quasi-dual edges and
/// separatrices.  The saddle-free base case is the two-vertex path.
#[derive(Debug, Clone)]
pub struct TriangulatedComplex {
    map: RotationSystem,
    kinds: Vec<VertexKind>,
}

impl TriangulatedComplex {
    pub fn new(map: RotationSystem, kinds: Vec<VertexKind>) -> Result<Self, ClassError> {
        if kinds.len() != map.n_vertices() {
            return Err(ClassError::KindCount);
        }
        let has_saddle = kinds.iter().any(|k| *k == VertexKind::Saddle);
        if !has_saddle {
            if map.n_edges() != 1
                || kinds.len() != 2
                || kinds.iter().filter(|k| **k == VertexKind::Stable).count() != 1
            {
                return Err(ClassError::BasePathShape);
            }
            return Ok(TriangulatedComplex { map, kinds });
        }
        for (e, &(d, ad)) in map.edge_darts().iter().enumerate() {
            if kinds[map.vertex_of(d)] == kinds[map.vertex_of(ad)] {
                return Err(ClassError::EdgeKindClash(e));
            }
        }
        for (v, k) in kinds.iter().enumerate() {
            match k {
                VertexKind::Saddle => {
                    if map.degree(v) != 4 {
                        return Err(ClassError::SaddleDegree(v));
                    }
                    // All four edges go to extrema, alternating S and U.
                    let cycle = &map.vertex_cycles()[v];
                    for (i, &d) in cycle.iter().enumerate() {
                        let k1 = kinds[map.head_of(d)];
                        let k2 = kinds[map.head_of(cycle[(i + 1) % 4])];
                        if k1 == VertexKind::Saddle || k2 != k1.opposite() {
                            return Err(ClassError::NotAlternating(v));
                        }
                    }
                }
                _ => {
                    // Around an extremum: alternate opposite-extremum and
                    // saddle neighbors.
                    let cycle = &map.vertex_cycles()[v];
                    if cycle.len() % 2 != 0 {
                        return Err(ClassError::NotAlternating(v));
                    }
                    for (i, &d) in cycle.iter().enumerate() {
                        let k1 = kinds[map.head_of(d)];
                        let k2 = kinds[map.head_of(cycle[(i + 1) % cycle.len()])];
                        let ok = (k1 == k.opposite() && k2 == VertexKind::Saddle)
                            || (k1 == VertexKind::Saddle && k2 == k.opposite());
                        if !ok {
                            return Err(ClassError::NotAlternating(v));
                        }
                    }
                }
            }
        }
        for (f, walk) in map.face_walks().iter().enumerate() {
            if walk.len() != 3 {
                return Err(ClassError::FaceNotTriangle(f));
            }
            let mut seen = [false; 3];
            for &d in walk {
                seen[kinds[map.vertex_of(d)].code_byte() as usize - 1] = true;
            }
            if seen != [true, true, true] {
                return Err(ClassError::FaceNotTriangle(f));
            }
        }
        Ok(TriangulatedComplex { map, kinds })
    }

    pub fn map(&self) -> &RotationSystem {
        &self.map
    }

    pub fn kinds(&self) -> &[VertexKind] {
        &self.kinds
    }

    pub fn is_base_path(&self) -> bool {
        !self.kinds.iter().any(|k| *k == VertexKind::Saddle)
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::new(0, 0, 0);
        for k in &self.kinds {
            match k {
                VertexKind::Stable => sig.stable += 1,
                VertexKind::Unstable => sig.unstable += 1,
                VertexKind::Saddle => sig.saddle += 1,
            }
        }
        sig
    }

    pub fn canonical_code(&self) -> Vec<u8> {
        canonical_form(&self.map, &kind_bytes(&self.kinds)).code
    }

    pub fn to_json(&self) -> String {
        map_to_json(Some(&self.map), &kinds_to_labels(&self.kinds))
    }

    pub fn from_json(text: &str) -> Result<Self, ClassError> {
        let data = map_from_json(text).map_err(|e| match e {
            JsonError::Map(m) => ClassError::Map(m),
            other => ClassError::Json(other.to_string()),
        })?;
        let map = data.map.ok_or(ClassError::BasePathShape)?;
        let kinds = parse_kinds(&data.labels)?;
        TriangulatedComplex::new(map, kinds)
    }

    pub fn to_dot(&self) -> String {
        labeled_map_to_dot(&self.map, &self.kinds)
    }
}

/// Which of the three representations a labeled map most plausibly is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    QuasiDual,
    Primal,
    Triangulated,
}

/// Guess the representation of a labeled map: no saddles means quasi-dual
/// (or the base path); with saddles, a map whose every edge touches a
/// saddle is primal, otherwise triangulated.
pub fn detect_representation(map: &RotationSystem, kinds: &[VertexKind]) -> Representation {
    if !kinds.iter().any(|k| *k == VertexKind::Saddle) {
        return Representation::QuasiDual;
    }
    let all_touch_saddle = map.edge_darts().iter().all(|&(d, ad)| {
        kinds[map.vertex_of(d)] == VertexKind::Saddle
            || kinds[map.vertex_of(ad)] == VertexKind::Saddle
    });
    if all_touch_saddle {
        Representation::Primal
    } else {
        Representation::Triangulated
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface_map::{cycle4, path3};

    pub fn quad_cycle4() -> QuadComplex {
        QuadComplex::new(
            cycle4(),
            vec![
                VertexKind::Stable,
                VertexKind::Unstable,
                VertexKind::Stable,
                VertexKind::Unstable,
            ],
        )
        .unwrap()
    }

    pub fn quad_path3() -> QuadComplex {
        QuadComplex::new(
            path3(),
            vec![VertexKind::Stable, VertexKind::Unstable, VertexKind::Stable],
        )
        .unwrap()
    }

    #[test]
    fn base_path_signature() {
        let p2 = QuadComplex::base_path();
        assert!(p2.is_base_path());
        assert_eq!(p2.signature(), Signature::new(1, 1, 0));
    }

    #[test]
    fn three_vertex_path_is_valid_with_pendant_corners() {
        let q = quad_path3();
        assert_eq!(q.signature(), Signature::new(2, 1, 1));
        // The unstable diagonal is coincident (middle vertex used twice).
        assert_eq!(q.coincident_diagonal(0), Some(VertexKind::Unstable));
        let (a, b) = q.stable_diagonal(0);
        assert_ne!(a, b);
    }

    #[test]
    fn four_cycle_is_generic() {
        let q = quad_cycle4();
        assert_eq!(q.signature(), Signature::new(2, 2, 2));
        for f in 0..q.n_saddle_faces() {
            assert_eq!(q.coincident_diagonal(f), None);
        }
    }

    #[test]
    fn monochromatic_edge_is_rejected() {
        let err = QuadComplex::new(
            cycle4(),
            vec![
                VertexKind::Stable,
                VertexKind::Unstable,
                VertexKind::Unstable,
                VertexKind::Stable,
            ],
        )
        .unwrap_err();
        assert!(matches!(err, ClassError::EdgeKindClash(_)));
    }

    #[test]
    fn saddle_label_rejected_in_quasi_dual() {
        let err = QuadComplex::new(
            path3(),
            vec![VertexKind::Stable, VertexKind::Saddle, VertexKind::Stable],
        )
        .unwrap_err();
        assert!(matches!(err, ClassError::KindNotAllowed(1)));
    }

    #[test]
    fn json_round_trip_preserves_canonical_code() {
        let q = quad_cycle4();
        let q2 = QuadComplex::from_json(&q.to_json()).unwrap();
        assert_eq!(q.canonical_code(), q2.canonical_code());
        assert_eq!(q2.signature(), Signature::new(2, 2, 2));
    }

    #[test]
    fn the_two_base_path_colorings_are_isomorphic() {
        // Swapping S and U on the two-vertex path gives the same canonical
        // code because the dart swap is a map automorphism exchanging the
        // vertices; the code only sees the label multiset through it.
        let p = QuadComplex::base_path();
        let swapped = QuadComplex::new(
            RotationSystem::new(vec![0, 1], vec![1, 0]).unwrap(),
            vec![VertexKind::Unstable, VertexKind::Stable],
        )
        .unwrap();
        assert_eq!(p.canonical_code(), swapped.canonical_code());
    }
}

#[cfg(test)]
pub use tests::{quad_cycle4, quad_path3};
