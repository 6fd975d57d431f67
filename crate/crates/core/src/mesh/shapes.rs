//! Reference meshes: platonic starters, subdivided cubes, icospheres,
//! ellipsoids, and random inscribed polytopes.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{convex_hull, Vec3};

use super::TriMesh;

/// Flip triangles that wind clockwise seen from outside.  Valid for any
/// body star-shaped around the origin.
fn wind_outward(vertices: &[Vec3], faces: &mut [[usize; 3]]) {
    for f in faces.iter_mut() {
        let (a, b, c) = (vertices[f[0]], vertices[f[1]], vertices[f[2]]);
        let n = (b - a).cross(c - a);
        if n.dot(a + b + c) < 0.0 {
            f.swap(1, 2);
        }
    }
}

fn assemble(vertices: Vec<Vec3>, mut faces: Vec<[usize; 3]>) -> TriMesh {
    wind_outward(&vertices, &mut faces);
    TriMesh::new(vertices, faces).expect("generated mesh is a valid closed surface")
}

/// Regular tetrahedron with centroid at the origin.
pub fn tetrahedron() -> TriMesh {
    let vertices = vec![
        Vec3::new(1.0, 1.0, 1.0),
        Vec3::new(1.0, -1.0, -1.0),
        Vec3::new(-1.0, 1.0, -1.0),
        Vec3::new(-1.0, -1.0, 1.0),
    ];
    let faces = vec![[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]];
    assemble(vertices, faces)
}

/// Unit cube `[-1/2, 1/2]^3` with each square face split into a `k x k`
/// grid of quads, each quad into two triangles.
pub fn cube_mesh(k: usize) -> TriMesh {
    assert!(k >= 1);
    let mut index: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let mut vertices: Vec<Vec3> = Vec::new();
    let mut faces: Vec<[usize; 3]> = Vec::new();
    let coord = |i: usize| i as f64 / k as f64 - 0.5;
    // One entry per cube face: lattice origin and the two lattice axes.
    let sides: [([usize; 3], [usize; 3], [usize; 3]); 6] = [
        ([k, 0, 0], [0, 1, 0], [0, 0, 1]),
        ([0, 0, 0], [0, 0, 1], [0, 1, 0]),
        ([0, k, 0], [0, 0, 1], [1, 0, 0]),
        ([0, 0, 0], [1, 0, 0], [0, 0, 1]),
        ([0, 0, k], [1, 0, 0], [0, 1, 0]),
        ([0, 0, 0], [0, 1, 0], [1, 0, 0]),
    ];
    for (origin, eu, ev) in sides {
        let at = |u: usize, v: usize| {
            (
                origin[0] + u * eu[0] + v * ev[0],
                origin[1] + u * eu[1] + v * ev[1],
                origin[2] + u * eu[2] + v * ev[2],
            )
        };
        let mut id = |key: (usize, usize, usize), vertices: &mut Vec<Vec3>| -> usize {
            *index.entry(key).or_insert_with(|| {
                vertices.push(Vec3::new(coord(key.0), coord(key.1), coord(key.2)));
                vertices.len() - 1
            })
        };
        for u in 0..k {
            for v in 0..k {
                let p00 = id(at(u, v), &mut vertices);
                let p10 = id(at(u + 1, v), &mut vertices);
                let p11 = id(at(u + 1, v + 1), &mut vertices);
                let p01 = id(at(u, v + 1), &mut vertices);
                faces.push([p00, p10, p11]);
                faces.push([p00, p11, p01]);
            }
        }
    }
    assemble(vertices, faces)
}

/// Unit icosphere: regular icosahedron subdivided `k` times, vertices
/// projected to the unit sphere.
pub fn icosphere(k: usize) -> TriMesh {
    let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
    let mut vertices: Vec<Vec3> = [
        (-1.0, phi, 0.0),
        (1.0, phi, 0.0),
        (-1.0, -phi, 0.0),
        (1.0, -phi, 0.0),
        (0.0, -1.0, phi),
        (0.0, 1.0, phi),
        (0.0, -1.0, -phi),
        (0.0, 1.0, -phi),
        (phi, 0.0, -1.0),
        (phi, 0.0, 1.0),
        (-phi, 0.0, -1.0),
        (-phi, 0.0, 1.0),
    ]
    .iter()
    .map(|&(x, y, z)| Vec3::new(x, y, z).unit())
    .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..k {
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next: Vec<[usize; 3]> = Vec::with_capacity(faces.len() * 4);
        for f in &faces {
            let mut mid = |a: usize, b: usize, vertices: &mut Vec<Vec3>| -> usize {
                let key = (a.min(b), a.max(b));
                *midpoint.entry(key).or_insert_with(|| {
                    vertices.push(((vertices[a] + vertices[b]) / 2.0).unit());
                    vertices.len() - 1
                })
            };
            let [a, b, c] = *f;
            let ab = mid(a, b, &mut vertices);
            let bc = mid(b, c, &mut vertices);
            let ca = mid(c, a, &mut vertices);
            next.push([a, ab, ca]);
            next.push([b, bc, ab]);
            next.push([c, ca, bc]);
            next.push([ab, bc, ca]);
        }
        faces = next;
    }
    assemble(vertices, faces)
}

/// Ellipsoid with semi-axes `(a, b, c)`, as a per-axis scaled icosphere.
pub fn ellipsoid_mesh(a: f64, b: f64, c: f64, k: usize) -> TriMesh {
    let sphere = icosphere(k);
    let vertices: Vec<Vec3> =
        sphere.vertices().iter().map(|v| Vec3::new(v.x * a, v.y * b, v.z * c)).collect();
    let faces = sphere.faces().to_vec();
    assemble(vertices, faces)
}

/// Split every face into `k^2` congruent triangles (no projection: the
/// surface itself is unchanged).  Shared corners and edge points are
/// merged exactly, so the result is again closed.
pub fn refine(mesh: &TriMesh, k: usize) -> TriMesh {
    assert!(k >= 1);
    #[derive(Clone, Copy, PartialEq, Eq, Hash)]
    enum Key {
        Corner(usize),
        /// `i` of `k` steps along the edge, measured from the lower vertex.
        Edge(usize, usize, usize),
        Interior(usize, usize, usize),
    }
    let mut index: HashMap<Key, usize> = HashMap::new();
    let mut vertices: Vec<Vec3> = Vec::new();
    let mut faces: Vec<[usize; 3]> = Vec::new();
    for (fi, &[a, b, c]) in mesh.faces().iter().enumerate() {
        // Barycentric lattice: point (i, j) carries weight i on b, j on c.
        let key_at = |i: usize, j: usize| -> Key {
            let rest = k - i - j;
            match (rest, i, j) {
                (_, 0, 0) => Key::Corner(a),
                (0, _, 0) => Key::Corner(b),
                (0, 0, _) => Key::Corner(c),
                (_, _, 0) => {
                    if a < b { Key::Edge(a, b, i) } else { Key::Edge(b, a, k - i) }
                }
                (_, 0, _) => {
                    if a < c { Key::Edge(a, c, j) } else { Key::Edge(c, a, k - j) }
                }
                (0, _, _) => {
                    if b < c { Key::Edge(b, c, j) } else { Key::Edge(c, b, k - j) }
                }
                _ => Key::Interior(fi, i, j),
            }
        };
        let mut id = |i: usize, j: usize, vertices: &mut Vec<Vec3>| -> usize {
            *index.entry(key_at(i, j)).or_insert_with(|| {
                let rest = (k - i - j) as f64;
                let p = (mesh.position(a) * rest
                    + mesh.position(b) * i as f64
                    + mesh.position(c) * j as f64)
                    / k as f64;
                vertices.push(p);
                vertices.len() - 1
            })
        };
        for i in 0..k {
            for j in 0..k - i {
                let p00 = id(i, j, &mut vertices);
                let p10 = id(i + 1, j, &mut vertices);
                let p01 = id(i, j + 1, &mut vertices);
                faces.push([p00, p10, p01]);
                if i + j + 2 <= k {
                    let p11 = id(i + 1, j + 1, &mut vertices);
                    faces.push([p10, p11, p01]);
                }
            }
        }
    }
    // Orientation is inherited from the parent faces, so this is valid for
    // any closed mesh, star-shaped or not.
    TriMesh::new(vertices, faces).expect("refinement of a closed surface stays closed")
}

/// Convex hull of `n` random unit directions: a random polytope inscribed
/// in the unit sphere.  Deterministic in `seed`.
pub fn random_hull(n: usize, seed: u64) -> TriMesh {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(n);
    while points.len() < n {
        let v = Vec3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let r = v.norm();
        if r > 1e-3 && r <= 1.0 {
            points.push(v / r);
        }
    }
    from_points(&points).expect("points in general position have a hull mesh")
}

/// Triangle mesh of the convex hull of arbitrary points (unused input
/// points are dropped and indices compacted).
pub fn from_points(points: &[Vec3]) -> Result<TriMesh, crate::geometry::HullError> {
    let tris = convex_hull(points)?;
    let mut remap: HashMap<usize, usize> = HashMap::new();
    let mut vertices: Vec<Vec3> = Vec::new();
    let mut faces: Vec<[usize; 3]> = Vec::with_capacity(tris.len());
    for t in &tris {
        let mut f = [0usize; 3];
        for (k, &old) in t.iter().enumerate() {
            f[k] = *remap.entry(old).or_insert_with(|| {
                vertices.push(points[old]);
                vertices.len() - 1
            });
        }
        faces.push(f);
    }
    Ok(TriMesh::new(vertices, faces).expect("hull output is a closed surface"))
}
