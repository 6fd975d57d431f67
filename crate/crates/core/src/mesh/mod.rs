//! Triangle meshes of closed convex surfaces and the analyses built on
//! them: equilibrium detection, discrete Morse-Smale extraction, and the
//! analytic ellipsoid reference.

pub mod equilibria;
pub mod ellipsoid;
pub mod ms_complex;
pub mod shapes;

pub use ms_complex::{extract_ms_complex, MsComplex};

use thiserror::Error;

use crate::geometry::{Vec3, GEOM_EPS};

#[derive(Debug, Error, PartialEq)]
pub enum MeshError {
    #[error("mesh needs at least four vertices and four faces")]
    TooSmall,
    #[error("face references vertex {0} out of range")]
    IndexOutOfRange(usize),
    #[error("face {0} repeats a vertex")]
    DegenerateFace(usize),
    #[error("directed edge ({0}, {1}) appears more than once")]
    DuplicateEdge(usize, usize),
    #[error("directed edge ({0}, {1}) has no opposite; surface not closed")]
    OpenEdge(usize, usize),
    #[error("vertex {0} has a disconnected or pinched neighborhood")]
    PinchedVertex(usize),
    #[error("surface is not connected")]
    NotConnected,
    #[error("Euler characteristic is {0}, not 2")]
    NotSphere(i64),
    #[error("faces are not consistently oriented outward")]
    InsideOut,
    #[error("vertex {0} is unused")]
    UnusedVertex(usize),
}

/// A closed, outward-oriented triangle mesh of sphere topology.
///
/// Face windings are counterclockwise seen from outside; the stored
/// neighbor ring of each vertex is likewise counterclockwise from outside.
#[derive(Debug, Clone)]
pub struct TriMesh {
    vertices: Vec<Vec3>,
    faces: Vec<[usize; 3]>,
    rings: Vec<Vec<usize>>,
}

impl TriMesh {
    pub fn new(vertices: Vec<Vec3>, faces: Vec<[usize; 3]>) -> Result<Self, MeshError> {
        if vertices.len() < 4 || faces.len() < 4 {
            return Err(MeshError::TooSmall);
        }
        let nv = vertices.len();
        let mut succ: Vec<std::collections::HashMap<usize, usize>> =
            vec![std::collections::HashMap::new(); nv];
        for (fi, f) in faces.iter().enumerate() {
            for k in 0..3 {
                if f[k] >= nv {
                    return Err(MeshError::IndexOutOfRange(f[k]));
                }
                if f[k] == f[(k + 1) % 3] {
                    return Err(MeshError::DegenerateFace(fi));
                }
            }
            if f[0] == f[2] {
                return Err(MeshError::DegenerateFace(fi));
            }
            // Face (v, a, b) contributes a -> b to the ring of v.
            for k in 0..3 {
                let (v, a, b) = (f[k], f[(k + 1) % 3], f[(k + 2) % 3]);
                if succ[v].insert(a, b).is_some() {
                    return Err(MeshError::DuplicateEdge(v, a));
                }
            }
        }

        // Closedness: the ring successor map must be a permutation whose
        // inverse comes from the twin faces.
        let mut rings = Vec::with_capacity(nv);
        for v in 0..nv {
            if succ[v].is_empty() {
                return Err(MeshError::UnusedVertex(v));
            }
            for (&a, _) in &succ[v] {
                if !succ[a].contains_key(&v) {
                    return Err(MeshError::OpenEdge(a, v));
                }
            }
            let start = *succ[v].keys().min().unwrap();
            let mut ring = vec![start];
            let mut cur = start;
            loop {
                let Some(&next) = succ[v].get(&cur) else {
                    return Err(MeshError::OpenEdge(v, cur));
                };
                if next == start {
                    break;
                }
                ring.push(next);
                cur = next;
                if ring.len() > succ[v].len() {
                    return Err(MeshError::PinchedVertex(v));
                }
            }
            if ring.len() != succ[v].len() {
                return Err(MeshError::PinchedVertex(v));
            }
            rings.push(ring);
        }

        // Connectivity over the edge graph.
        let mut seen = vec![false; nv];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &x in &rings[v] {
                if !seen[x] {
                    seen[x] = true;
                    stack.push(x);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(MeshError::NotConnected);
        }

        let ne: usize = rings.iter().map(|r| r.len()).sum::<usize>() / 2;
        let chi = nv as i64 - ne as i64 + faces.len() as i64;
        if chi != 2 {
            return Err(MeshError::NotSphere(chi));
        }

        // Outward orientation: positive enclosed volume.
        let volume: f64 = faces
            .iter()
            .map(|f| {
                vertices[f[0]].dot(vertices[f[1]].cross(vertices[f[2]])) / 6.0
            })
            .sum();
        if volume <= GEOM_EPS {
            return Err(MeshError::InsideOut);
        }

        Ok(TriMesh { vertices, faces, rings })
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn n_edges(&self) -> usize {
        self.rings.iter().map(|r| r.len()).sum::<usize>() / 2
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn position(&self, v: usize) -> Vec3 {
        self.vertices[v]
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    /// Neighbors of `v`, counterclockwise seen from outside.
    pub fn ring(&self, v: usize) -> &[usize] {
        &self.rings[v]
    }

    pub fn face_normal(&self, f: usize) -> Vec3 {
        let [a, b, c] = self.faces[f];
        (self.vertices[b] - self.vertices[a])
            .cross(self.vertices[c] - self.vertices[a])
            .unit()
    }

    pub fn face_centroid(&self, f: usize) -> Vec3 {
        let [a, b, c] = self.faces[f];
        (self.vertices[a] + self.vertices[b] + self.vertices[c]) / 3.0
    }

    /// Enclosed volume by the divergence theorem.
    pub fn volume(&self) -> f64 {
        self.faces
            .iter()
            .map(|f| {
                self.vertices[f[0]]
                    .dot(self.vertices[f[1]].cross(self.vertices[f[2]]))
                    / 6.0
            })
            .sum()
    }

    pub fn centroid_of_volume(&self) -> Vec3 {
        // Weighted tetrahedron centroids against the origin.
        let mut num = Vec3::ZERO;
        let mut den = 0.0;
        for f in &self.faces {
            let (a, b, c) = (self.vertices[f[0]], self.vertices[f[1]], self.vertices[f[2]]);
            let vol = a.dot(b.cross(c)) / 6.0;
            num += (a + b + c) * (vol / 4.0);
            den += vol;
        }
        num / den
    }

    pub fn scale(&self) -> f64 {
        self.vertices.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Maximum outward violation of convexity: how far any vertex sits
    /// outside any face plane.  Zero (up to `tol`) for convex meshes.
    pub fn convexity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (fi, f) in self.faces.iter().enumerate() {
            let n = self.face_normal(fi);
            let base = self.vertices[f[0]];
            for v in &self.vertices {
                worst = worst.max((*v - base).dot(n));
            }
        }
        worst
    }
}
