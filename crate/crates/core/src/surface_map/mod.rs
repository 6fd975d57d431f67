//! Rotation systems: combinatorial maps on closed oriented surfaces.
//!
//! A map with `E` edges is stored as two permutations of the dart set
//! `0..2E`: the fixed-point-free involution `alpha` swapping the two darts
//! of each edge, and `sigma` giving the next dart counterclockwise around
//! the dart's source vertex (counterclockwise as seen from outside the
//! sphere).  Faces are the orbits of `phi = sigma . alpha`.  With this
//! convention a face walk runs clockwise around the face interior (seen
//! from outside), the face lies to the right of each of its walk darts,
//! and the angular corner swept from dart `d` counterclockwise to
//! `sigma(d)` belongs to `face_of(alpha(d))`; the corner of a face at the
//! head of its walk dart `w` is the corner of `alpha(w)`.
//!
//! Only maps of genus 0 pass validation: everything in this crate lives on
//! the sphere.

mod builder;
mod canonical;
mod json;

pub use builder::{BuiltMap, MapBuilder};
pub use canonical::{canonical_form, CanonicalForm};
pub use json::{map_from_json, map_to_json, JsonError, MapJsonData};

pub type Dart = usize;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum MapError {
    #[error("sigma and alpha must be permutations of the same even-sized dart set")]
    NotPermutation,
    #[error("alpha must be a fixed-point-free involution")]
    NotInvolution,
    #[error("map is not connected")]
    NotConnected,
    #[error("map has genus {0}, expected a sphere")]
    NotSphere(usize),
    #[error("array lengths are inconsistent")]
    LengthMismatch,
    #[error("edge key appears {0} times, expected exactly 2")]
    EdgeKeyCount(usize),
}

/// A validated rotation system on the sphere with at least one edge.
#[derive(Debug, Clone)]
pub struct RotationSystem {
    sigma: Vec<Dart>,
    sigma_inv: Vec<Dart>,
    alpha: Vec<Dart>,
    vertex_of: Vec<usize>,
    face_of: Vec<usize>,
    edge_of: Vec<usize>,
    vertex_cycles: Vec<Vec<Dart>>,
    face_walks: Vec<Vec<Dart>>,
    edge_darts: Vec<(Dart, Dart)>,
    cycle_pos: Vec<usize>,
}

fn orbits(perm: &[Dart]) -> (Vec<usize>, Vec<Vec<Dart>>) {
    let mut owner = vec![usize::MAX; perm.len()];
    let mut cycles = Vec::new();
    for start in 0..perm.len() {
        if owner[start] != usize::MAX {
            continue;
        }
        let idx = cycles.len();
        let mut cycle = Vec::new();
        let mut d = start;
        loop {
            owner[d] = idx;
            cycle.push(d);
            d = perm[d];
            if d == start {
                break;
            }
        }
        cycles.push(cycle);
    }
    (owner, cycles)
}

impl RotationSystem {
    /// Validate and index a rotation system.  `sigma` and `alpha` are
    /// permutations of `0..2E`; `alpha` must be a fixed-point-free
    /// involution; the map must be connected and of genus 0.
    pub fn new(sigma: Vec<Dart>, alpha: Vec<Dart>) -> Result<Self, MapError> {
        let n = sigma.len();
        if n == 0 || n % 2 != 0 || alpha.len() != n {
            return Err(MapError::NotPermutation);
        }
        for perm in [&sigma, &alpha] {
            let mut seen = vec![false; n];
            for &d in perm.iter() {
                if d >= n || seen[d] {
                    return Err(MapError::NotPermutation);
                }
                seen[d] = true;
            }
        }
        for d in 0..n {
            if alpha[d] == d || alpha[alpha[d]] != d {
                return Err(MapError::NotInvolution);
            }
        }
        // Connectivity under the group generated by sigma and alpha.
        let mut reached = vec![false; n];
        let mut stack = vec![0];
        reached[0] = true;
        while let Some(d) = stack.pop() {
            for nd in [sigma[d], alpha[d]] {
                if !reached[nd] {
                    reached[nd] = true;
                    stack.push(nd);
                }
            }
        }
        if reached.iter().any(|r| !r) {
            return Err(MapError::NotConnected);
        }

        let mut sigma_inv = vec![0; n];
        for d in 0..n {
            sigma_inv[sigma[d]] = d;
        }
        let phi: Vec<Dart> = (0..n).map(|d| sigma[alpha[d]]).collect();
        let (vertex_of, vertex_cycles) = orbits(&sigma);
        let (face_of, face_walks) = orbits(&phi);

        let e = n / 2;
        let euler = vertex_cycles.len() as i64 - e as i64 + face_walks.len() as i64;
        if euler != 2 {
            let genus = ((2 - euler) / 2) as usize;
            return Err(MapError::NotSphere(genus));
        }

        let mut edge_of = vec![usize::MAX; n];
        let mut edge_darts = Vec::with_capacity(e);
        for d in 0..n {
            if d < alpha[d] {
                edge_of[d] = edge_darts.len();
                edge_of[alpha[d]] = edge_darts.len();
                edge_darts.push((d, alpha[d]));
            }
        }

        let mut cycle_pos = vec![0; n];
        for cycle in &vertex_cycles {
            for (k, &d) in cycle.iter().enumerate() {
                cycle_pos[d] = k;
            }
        }

        Ok(RotationSystem {
            sigma,
            sigma_inv,
            alpha,
            vertex_of,
            face_of,
            edge_of,
            vertex_cycles,
            face_walks,
            edge_darts,
            cycle_pos,
        })
    }

    pub fn n_darts(&self) -> usize {
        self.sigma.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edge_darts.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.vertex_cycles.len()
    }

    pub fn n_faces(&self) -> usize {
        self.face_walks.len()
    }

    pub fn sigma(&self, d: Dart) -> Dart {
        self.sigma[d]
    }

    pub fn sigma_inv(&self, d: Dart) -> Dart {
        self.sigma_inv[d]
    }

    pub fn alpha(&self, d: Dart) -> Dart {
        self.alpha[d]
    }

    /// Next dart along the face walk: `phi(d) = sigma(alpha(d))`.
    pub fn phi(&self, d: Dart) -> Dart {
        self.sigma[self.alpha[d]]
    }

    pub fn phi_inv(&self, d: Dart) -> Dart {
        self.alpha[self.sigma_inv[d]]
    }

    pub fn vertex_of(&self, d: Dart) -> usize {
        self.vertex_of[d]
    }

    /// Face whose walk contains `d` (the face to the right of `d`).  The
    /// corner swept counterclockwise from `d` to `sigma(d)` at the source
    /// vertex lies in `face_of(alpha(d))`.
    pub fn face_of(&self, d: Dart) -> usize {
        self.face_of[d]
    }

    pub fn edge_of(&self, d: Dart) -> usize {
        self.edge_of[d]
    }

    /// Vertex orbits of `sigma`, each listed from its minimum dart; vertex
    /// indices are positions in this list.
    pub fn vertex_cycles(&self) -> &[Vec<Dart>] {
        &self.vertex_cycles
    }

    /// Face orbits of `phi`, each listed from its minimum dart; face
    /// indices are positions in this list.
    pub fn face_walks(&self) -> &[Vec<Dart>] {
        &self.face_walks
    }

    /// The pair `(d, alpha(d))` (with `d` minimal) for each edge index.
    pub fn edge_darts(&self) -> &[(Dart, Dart)] {
        &self.edge_darts
    }

    pub fn degree(&self, v: usize) -> usize {
        self.vertex_cycles[v].len()
    }

    /// Index of `d` within its vertex cycle.
    pub fn cycle_position(&self, d: Dart) -> usize {
        self.cycle_pos[d]
    }

    /// Target vertex of dart `d` (source of its opposite dart).
    pub fn head_of(&self, d: Dart) -> usize {
        self.vertex_of[self.alpha[d]]
    }
}

/// A connected map on the sphere that may be edgeless: the trivial map has
/// one vertex, no edges, and one face.
#[derive(Debug, Clone)]
pub enum PlanarMap {
    Trivial,
    Map(RotationSystem),
}

impl PlanarMap {
    pub fn n_vertices(&self) -> usize {
        match self {
            PlanarMap::Trivial => 1,
            PlanarMap::Map(rs) => rs.n_vertices(),
        }
    }

    pub fn n_edges(&self) -> usize {
        match self {
            PlanarMap::Trivial => 0,
            PlanarMap::Map(rs) => rs.n_edges(),
        }
    }

    pub fn n_faces(&self) -> usize {
        match self {
            PlanarMap::Trivial => 1,
            PlanarMap::Map(rs) => rs.n_faces(),
        }
    }

    /// Canonical isomorphism code (reflections identified); empty for the
    /// trivial map.
    pub fn canonical_code(&self) -> Vec<u8> {
        match self {
            PlanarMap::Trivial => Vec::new(),
            PlanarMap::Map(rs) => canonical_form(rs, &vec![0u8; rs.n_vertices()]).code,
        }
    }
}

/// Path with two vertices: darts {0, 1}, one edge, one face of walk
/// length 2.
pub fn path2() -> RotationSystem {
    RotationSystem::new(vec![0, 1], vec![1, 0]).unwrap()
}

/// Path a-b-c: darts 0,1 on edge ab (0 at a) and 2,3 on edge bc (2 at
/// b); single face of walk length 4.
pub fn path3() -> RotationSystem {
    RotationSystem::new(vec![0, 2, 1, 3], vec![1, 0, 3, 2]).unwrap()
}

/// 4-cycle: vertex i has darts 2i (to i+1) and 2i+1 (to i-1); two faces
/// of walk length 4.
pub fn cycle4() -> RotationSystem {
    let sigma = vec![1, 0, 3, 2, 5, 4, 7, 6];
    let alpha = vec![3, 6, 5, 0, 7, 2, 1, 4];
    RotationSystem::new(sigma, alpha).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path2_counts() {
        let m = path2();
        assert_eq!((m.n_vertices(), m.n_edges(), m.n_faces()), (2, 1, 1));
        assert_eq!(m.face_walks()[0].len(), 2);
    }

    #[test]
    fn path3_single_face_of_length_four() {
        let m = path3();
        assert_eq!((m.n_vertices(), m.n_edges(), m.n_faces()), (3, 2, 1));
        assert_eq!(m.face_walks()[0].len(), 4);
        assert_eq!(m.degree(m.vertex_of(1)), 2);
    }

    #[test]
    fn cycle4_two_quadrilateral_faces() {
        let m = cycle4();
        assert_eq!((m.n_vertices(), m.n_edges(), m.n_faces()), (4, 4, 2));
        for w in m.face_walks() {
            assert_eq!(w.len(), 4);
        }
        // Each edge borders both faces.
        for &(d, ad) in m.edge_darts() {
            assert_ne!(m.face_of(d), m.face_of(ad));
        }
    }

    #[test]
    fn torus_map_is_rejected() {
        // Single vertex with two loops interleaved (a b a b): the standard
        // genus-1 one-vertex map.
        let sigma = vec![1, 2, 3, 0];
        let alpha = vec![2, 3, 0, 1];
        assert_eq!(RotationSystem::new(sigma, alpha), Err(MapError::NotSphere(1)));
    }

    #[test]
    fn disconnected_map_is_rejected() {
        // Two disjoint single-edge components.
        let sigma = vec![0, 1, 2, 3];
        let alpha = vec![1, 0, 3, 2];
        assert_eq!(RotationSystem::new(sigma, alpha), Err(MapError::NotConnected));
    }

    #[test]
    fn fixed_point_alpha_is_rejected() {
        let sigma = vec![0, 1];
        let alpha = vec![0, 1];
        assert_eq!(RotationSystem::new(sigma, alpha), Err(MapError::NotInvolution));
    }

    #[test]
    fn sphere_bouquet_of_two_loops_is_accepted() {
        // One vertex, two nested loops (a a b b): genus 0.
        let sigma = vec![1, 2, 3, 0];
        let alpha = vec![1, 0, 3, 2];
        let m = RotationSystem::new(sigma, alpha).unwrap();
        assert_eq!((m.n_vertices(), m.n_edges(), m.n_faces()), (1, 2, 3));
    }
}

impl PartialEq for RotationSystem {
    /// Dart-level equality (same permutations), not isomorphism.
    fn eq(&self, other: &Self) -> bool {
        self.sigma == other.sigma && self.alpha == other.alpha
    }
}
impl Eq for RotationSystem {}
