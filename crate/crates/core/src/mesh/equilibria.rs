//! Static equilibrium detection on convex polyhedra: where the body rests
//! (faces), rocks (edges), or tips (vertices) when balanced over a fixed
//! weight point.
//!
//! Triangles are first merged into maximal coplanar patches and their
//! shared boundaries into maximal straight creases; equilibria live on the
//! merged complex.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::geometry::Vec3;
use crate::quad_ms::{Signature, VertexKind};

use super::TriMesh;

/// Classification margins, relative to body scale.
pub const GENERICITY_EPS: f64 = 1e-9;
/// Two adjacent triangles merge when their normals agree to this.
pub const COPLANAR_EPS: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum EquilibriumError {
    #[error("configuration is not generic: {0}")]
    NotGeneric(String),
}

/// Maximal coplanar patches and the straight creases between them.
pub struct Patches {
    pub patch_of_face: Vec<usize>,
    pub n_patches: usize,
    /// Unit outward normal of each patch.
    pub normals: Vec<Vec3>,
    /// All mesh vertices lying on each patch.
    pub vertex_sets: Vec<BTreeSet<usize>>,
    pub creases: Vec<Crease>,
}

/// A maximal straight boundary segment between two patches.
pub struct Crease {
    pub patches: (usize, usize),
    pub ends: (Vec3, Vec3),
    /// All mesh vertices on the crease.
    pub vertex_set: BTreeSet<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquilibriumSite {
    Face { patch: usize },
    Edge { crease: usize },
    Vertex { vertex: usize },
}

#[derive(Debug, Clone, Copy)]
pub struct Equilibrium {
    pub kind: VertexKind,
    pub site: EquilibriumSite,
    pub position: Vec3,
    /// Distance from the weight point.
    pub value: f64,
}

pub struct EquilibriumSet {
    pub equilibria: Vec<Equilibrium>,
    pub patches: Patches,
}

impl EquilibriumSet {
    pub fn signature(&self) -> Signature {
        let mut s = Signature::new(0, 0, 0);
        for e in &self.equilibria {
            match e.kind {
                VertexKind::Stable => s.stable += 1,
                VertexKind::Unstable => s.unstable += 1,
                VertexKind::Saddle => s.saddle += 1,
            }
        }
        s
    }

    pub fn of_kind(&self, kind: VertexKind) -> impl Iterator<Item = &Equilibrium> {
        self.equilibria.iter().filter(move |e| e.kind == kind)
    }

    /// Mesh vertices spanning the carrier of an equilibrium: the patch's
    /// vertex set, the crease's vertex set, or the vertex itself.
    pub fn carrier_vertices(&self, e: &Equilibrium) -> BTreeSet<usize> {
        match e.site {
            EquilibriumSite::Face { patch } => self.patches.vertex_sets[patch].clone(),
            EquilibriumSite::Edge { crease } => self.patches.creases[crease].vertex_set.clone(),
            EquilibriumSite::Vertex { vertex } => BTreeSet::from([vertex]),
        }
    }
}

/// Union-find with path halving.
struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }
}

/// Merge coplanar triangles into patches and boundary edges into creases.
pub fn merge_coplanar(mesh: &TriMesh) -> Patches {
    let nf = mesh.n_faces();
    let normals: Vec<Vec3> = (0..nf).map(|f| mesh.face_normal(f)).collect();

    // Face adjacency through directed edge twins.
    let mut face_of_edge: HashMap<(usize, usize), usize> = HashMap::new();
    for (fi, f) in mesh.faces().iter().enumerate() {
        for k in 0..3 {
            face_of_edge.insert((f[k], f[(k + 1) % 3]), fi);
        }
    }

    let mut dsu = Dsu::new(nf);
    for (fi, f) in mesh.faces().iter().enumerate() {
        for k in 0..3 {
            let twin = face_of_edge[&(f[(k + 1) % 3], f[k])];
            if normals[fi].dot(normals[twin]) > 1.0 - COPLANAR_EPS {
                dsu.union(fi, twin);
            }
        }
    }

    let mut patch_of_face = vec![usize::MAX; nf];
    let mut patch_ids: HashMap<usize, usize> = HashMap::new();
    for f in 0..nf {
        let root = dsu.find(f);
        let next = patch_ids.len();
        patch_of_face[f] = *patch_ids.entry(root).or_insert(next);
    }
    let n_patches = patch_ids.len();

    let mut patch_normals = vec![Vec3::ZERO; n_patches];
    let mut vertex_sets = vec![BTreeSet::new(); n_patches];
    for (fi, f) in mesh.faces().iter().enumerate() {
        let p = patch_of_face[fi];
        patch_normals[p] = normals[fi];
        for &v in f {
            vertex_sets[p].insert(v);
        }
    }

    // Boundary edges grouped by patch pair; each group is one straight
    // crease on a convex body.
    let mut groups: HashMap<(usize, usize), BTreeSet<usize>> = HashMap::new();
    for (fi, f) in mesh.faces().iter().enumerate() {
        for k in 0..3 {
            let (a, b) = (f[k], f[(k + 1) % 3]);
            if a > b {
                continue;
            }
            let (p1, p2) = (patch_of_face[fi], patch_of_face[face_of_edge[&(b, a)]]);
            if p1 != p2 {
                let key = (p1.min(p2), p1.max(p2));
                let set = groups.entry(key).or_default();
                set.insert(a);
                set.insert(b);
            }
        }
    }
    let mut creases: Vec<Crease> = groups
        .into_iter()
        .map(|((p1, p2), vertex_set)| {
            // Extreme points along the crease direction.
            let pts: Vec<Vec3> = vertex_set.iter().map(|&v| mesh.position(v)).collect();
            let dir = {
                let mut best = Vec3::ZERO;
                for p in &pts[1..] {
                    let d = *p - pts[0];
                    if d.norm() > best.norm() {
                        best = d;
                    }
                }
                best.unit()
            };
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            let (mut lo_p, mut hi_p) = (pts[0], pts[0]);
            for p in &pts {
                let t = p.dot(dir);
                if t < lo {
                    lo = t;
                    lo_p = *p;
                }
                if t > hi {
                    hi = t;
                    hi_p = *p;
                }
            }
            Crease { patches: (p1, p2), ends: (lo_p, hi_p), vertex_set }
        })
        .collect();
    creases.sort_by(|a, b| a.patches.cmp(&b.patches));

    Patches { patch_of_face, n_patches, normals: patch_normals, vertex_sets, creases }
}

/// Detect all equilibria of the convex polyhedron `mesh` balanced over
/// weight point `w` (which must lie strictly inside).
pub fn polyhedron_equilibria(mesh: &TriMesh, w: Vec3) -> Result<EquilibriumSet, EquilibriumError> {
    let scale = mesh.scale();
    let tol = GENERICITY_EPS * scale;
    let patches = merge_coplanar(mesh);
    let mut equilibria: Vec<Equilibrium> = Vec::new();

    // Stable: perpendicular foot strictly inside a patch.
    for p in 0..patches.n_patches {
        let n = patches.normals[p];
        let any = *patches.vertex_sets[p].iter().next().unwrap();
        let offset = n.dot(mesh.position(any));
        let dist = offset - n.dot(w);
        if dist <= tol {
            return Err(EquilibriumError::NotGeneric(format!(
                "weight point sits on or outside patch {p}"
            )));
        }
        let foot = w + n * dist;
        // Inward margin over the patch's boundary creases.
        let mut margin = f64::INFINITY;
        for c in &patches.creases {
            if c.patches.0 != p && c.patches.1 != p {
                continue;
            }
            let t = (c.ends.1 - c.ends.0).unit();
            let mut inward = n.cross(t);
            // Orient toward the patch interior: the patch centroid side.
            let centroid = patches.vertex_sets[p]
                .iter()
                .fold(Vec3::ZERO, |acc, &v| acc + mesh.position(v))
                / patches.vertex_sets[p].len() as f64;
            if inward.dot(centroid - c.ends.0) < 0.0 {
                inward = -inward;
            }
            margin = margin.min(inward.dot(foot - c.ends.0));
        }
        if margin.abs() <= tol {
            return Err(EquilibriumError::NotGeneric(format!(
                "face foot lies on the boundary of patch {p}"
            )));
        }
        if margin > 0.0 {
            equilibria.push(Equilibrium {
                kind: VertexKind::Stable,
                site: EquilibriumSite::Face { patch: p },
                position: foot,
                value: dist,
            });
        }
    }

    // Saddle: perpendicular foot strictly inside a crease, with the drop
    // direction inside the wedge of the two patch normals.
    for (ci, c) in patches.creases.iter().enumerate() {
        let (a, b) = c.ends;
        let len = (b - a).norm();
        let t = ((w - a).dot(b - a) / len.powi(2)).clamp(-1.0, 2.0);
        let inner = t * len > tol && (1.0 - t) * len > tol;
        if !inner {
            if (t * len).abs() <= tol || ((1.0 - t) * len).abs() <= tol {
                return Err(EquilibriumError::NotGeneric(format!(
                    "edge foot lies at a crease endpoint (crease {ci})"
                )));
            }
            continue;
        }
        let foot = a + (b - a) * t;
        let u = foot - w;
        let (n1, n2) = (patches.normals[c.patches.0], patches.normals[c.patches.1]);
        let (g11, g12, g22) = (n1.dot(n1), n1.dot(n2), n2.dot(n2));
        let det = g11 * g22 - g12 * g12;
        let (b1, b2) = (n1.dot(u), n2.dot(u));
        let l1 = (g22 * b1 - g12 * b2) / det;
        let l2 = (g11 * b2 - g12 * b1) / det;
        let rel = u.norm();
        if l1.abs() <= tol * rel.max(1.0) || l2.abs() <= tol * rel.max(1.0) {
            return Err(EquilibriumError::NotGeneric(format!(
                "edge foot direction degenerate at crease {ci}"
            )));
        }
        if l1 > 0.0 && l2 > 0.0 {
            equilibria.push(Equilibrium {
                kind: VertexKind::Saddle,
                site: EquilibriumSite::Edge { crease: ci },
                position: foot,
                value: u.norm(),
            });
        }
    }

    // Unstable: a vertex all of whose neighbors sit strictly closer to the
    // weight point (radial local maximum).
    for v in 0..mesh.n_vertices() {
        let p = mesh.position(v);
        let radial = p - w;
        let here = radial.norm();
        // Strict local maximum of distance from the weight point: descent
        // along every star edge is decisive for, a strictly farther ring
        // neighbor is decisive against (even when first order vanishes,
        // as on a straight crease through the vertex).
        let mut descends_all = true;
        let mut ascends_some = false;
        for &x in mesh.ring(v) {
            let d = mesh.position(x) - p;
            let slope = d.dot(radial) / (d.norm() * here);
            if slope >= -GENERICITY_EPS {
                descends_all = false;
            }
            if slope > GENERICITY_EPS || (mesh.position(x) - w).norm() > here + tol {
                ascends_some = true;
            }
        }
        if !descends_all && !ascends_some {
            return Err(EquilibriumError::NotGeneric(format!(
                "vertex {v} is on the margin of being a distance maximum"
            )));
        }
        if descends_all {
            equilibria.push(Equilibrium {
                kind: VertexKind::Unstable,
                site: EquilibriumSite::Vertex { vertex: v },
                position: p,
                value: radial.norm(),
            });
        }
    }

    let set = EquilibriumSet { equilibria, patches };
    let sig = set.signature();
    if sig.stable + sig.unstable != sig.saddle + 2 {
        return Err(EquilibriumError::NotGeneric(format!(
            "balance violated: found {sig}"
        )));
    }
    Ok(set)
}
