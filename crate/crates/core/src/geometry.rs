//! Small 3D vector/plane toolkit plus an incremental convex hull.
//!
//! Everything downstream (mesh generators, equilibrium predicates, clipping)
//! is built on these primitives.  Tolerances are relative to the length
//! scale of the inputs wherever a scale is available.

use serde::{Deserialize, Serialize};
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

/// Default absolute tolerance for geometric coincidence tests on unit-scale
/// data.
pub const GEOM_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3 {
            x: self.y * o.z - self.z * o.y,
            y: self.z * o.x - self.x * o.z,
            z: self.x * o.y - self.y * o.x,
        }
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn dist(self, o: Vec3) -> f64 {
        (self - o).norm()
    }

    /// Unit vector in the same direction; `None` for (near-)zero input.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        if n < 1e-300 {
            None
        } else {
            Some(self / n)
        }
    }

    /// Unit vector, panicking on zero input (for contexts where zero is a bug).
    pub fn unit(self) -> Vec3 {
        self.normalized().expect("cannot normalize zero vector")
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

/// Oriented plane `{ x : n·x = d }` with unit normal `n`; positive side is
/// the side the normal points into.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Plane {
    pub normal: Vec3,
    pub offset: f64,
}

impl Plane {
    /// Plane through `point` with the given (not necessarily unit) normal.
    pub fn from_point_normal(point: Vec3, normal: Vec3) -> Plane {
        let n = normal.unit();
        Plane { normal: n, offset: n.dot(point) }
    }

    pub fn signed_distance(&self, p: Vec3) -> f64 {
        self.normal.dot(p) - self.offset
    }
}

/// Any orthonormal pair `(e1, e2)` completing the unit vector `u` to a
/// right-handed frame (`e1 x e2 = u`).
pub fn orthonormal_basis(u: Vec3) -> (Vec3, Vec3) {
    let pick = if u.x.abs() < 0.9 { Vec3::new(1.0, 0.0, 0.0) } else { Vec3::new(0.0, 1.0, 0.0) };
    let e1 = u.cross(pick).unit();
    let e2 = u.cross(e1);
    (e1, e2)
}

/// Rodrigues rotation of `v` about the unit `axis` by `angle` radians
/// (counterclockwise when viewed against the axis direction).
pub fn rotate_about_axis(v: Vec3, axis: Vec3, angle: f64) -> Vec3 {
    let (s, c) = angle.sin_cos();
    v * c + axis.cross(v) * s + axis * (axis.dot(v) * (1.0 - c))
}

/// Area vector (normal scaled by area) of triangle `abc`; points along the
/// normal for counterclockwise `a, b, c`.
pub fn triangle_area_vector(a: Vec3, b: Vec3, c: Vec3) -> Vec3 {
    (b - a).cross(c - a) * 0.5
}

/// Foot of the perpendicular from `p` onto the line through `a`, `b`,
/// returned as `(t, foot)` with `foot = a + t (b - a)`.
pub fn foot_on_line(p: Vec3, a: Vec3, b: Vec3) -> (f64, Vec3) {
    let ab = b - a;
    let t = (p - a).dot(ab) / ab.norm_squared();
    (t, a + ab * t)
}

/// Minimum, over the polygon's edges, of the signed distance from `p` to
/// the edge line measured inside the polygon's supporting plane.
/// Positive means strictly inside the convex polygon; `vertices` must wind
/// counterclockwise around `normal`.
pub fn convex_polygon_margin(p: Vec3, vertices: &[Vec3], normal: Vec3) -> f64 {
    let n = normal.unit();
    let mut margin = f64::INFINITY;
    for i in 0..vertices.len() {
        let a = vertices[i];
        let b = vertices[(i + 1) % vertices.len()];
        let edge = b - a;
        let inward = n.cross(edge).unit();
        margin = margin.min(inward.dot(p - a));
    }
    margin
}

/// Area centroid of a planar convex polygon.
pub fn polygon_centroid(vertices: &[Vec3]) -> Vec3 {
    let origin = vertices[0];
    let mut weighted = Vec3::ZERO;
    let mut total = 0.0;
    for i in 1..vertices.len() - 1 {
        let a = vertices[i] - origin;
        let b = vertices[i + 1] - origin;
        let area = a.cross(b).norm() * 0.5;
        weighted += (a + b) * (area / 3.0);
        total += area;
    }
    if total < 1e-300 {
        // Degenerate sliver: fall back to the vertex average.
        let mut s = Vec3::ZERO;
        for &v in vertices {
            s += v;
        }
        return s / vertices.len() as f64;
    }
    origin + weighted / total
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum HullError {
    #[error("need at least 4 points with nonzero volume to build a hull")]
    Degenerate,
}

/// Convex hull of a 3D point set as outward-oriented triangles
/// (counterclockwise when viewed from outside).  Incremental insertion;
/// suitable for point sets in general position such as samples of a smooth
/// convex surface.
pub fn convex_hull(points: &[Vec3]) -> Result<Vec<[usize; 3]>, HullError> {
    if points.len() < 4 {
        return Err(HullError::Degenerate);
    }
    let mut scale: f64 = 0.0;
    for p in points {
        scale = scale.max(p.norm());
    }
    let eps = (scale.max(1e-12)) * 1e-10;

    // Initial tetrahedron from four affinely independent points.
    let i0 = 0;
    let i1 = (0..points.len())
        .max_by(|&a, &b| {
            points[a].dist(points[i0]).partial_cmp(&points[b].dist(points[i0])).unwrap()
        })
        .unwrap();
    if points[i1].dist(points[i0]) < eps {
        return Err(HullError::Degenerate);
    }
    let line_dist = |i: usize| {
        let d = points[i1] - points[i0];
        (points[i] - points[i0]).cross(d).norm() / d.norm()
    };
    let i2 = (0..points.len())
        .max_by(|&a, &b| line_dist(a).partial_cmp(&line_dist(b)).unwrap())
        .unwrap();
    if line_dist(i2) < eps {
        return Err(HullError::Degenerate);
    }
    let base_n = (points[i1] - points[i0]).cross(points[i2] - points[i0]);
    let plane_dist = |i: usize| (points[i] - points[i0]).dot(base_n).abs() / base_n.norm();
    let i3 = (0..points.len())
        .max_by(|&a, &b| plane_dist(a).partial_cmp(&plane_dist(b)).unwrap())
        .unwrap();
    if plane_dist(i3) < eps {
        return Err(HullError::Degenerate);
    }

    // Orient the initial faces outward.
    let mut faces: Vec<[usize; 3]> = if (points[i3] - points[i0]).dot(base_n) < 0.0 {
        vec![[i0, i1, i2], [i1, i0, i3], [i2, i1, i3], [i0, i2, i3]]
    } else {
        vec![[i2, i1, i0], [i0, i1, i3], [i1, i2, i3], [i2, i0, i3]]
    };

    let face_plane = |f: &[usize; 3]| -> (Vec3, Vec3) {
        let n = (points[f[1]] - points[f[0]]).cross(points[f[2]] - points[f[0]]);
        (n, points[f[0]])
    };

    for (p_idx, &p) in points.iter().enumerate() {
        if p_idx == i0 || p_idx == i1 || p_idx == i2 || p_idx == i3 {
            continue;
        }
        let visible: Vec<usize> = (0..faces.len())
            .filter(|&fi| {
                let (n, base) = face_plane(&faces[fi]);
                (p - base).dot(n) > eps * n.norm().max(1e-300)
            })
            .collect();
        if visible.is_empty() {
            continue;
        }
        // Horizon: directed edges of visible faces whose reversal is not in a
        // visible face.
        use std::collections::HashSet;
        let mut vis_edges: HashSet<(usize, usize)> = HashSet::new();
        for &fi in &visible {
            let f = faces[fi];
            for k in 0..3 {
                vis_edges.insert((f[k], f[(k + 1) % 3]));
            }
        }
        let horizon: Vec<(usize, usize)> = vis_edges
            .iter()
            .copied()
            .filter(|&(u, v)| !vis_edges.contains(&(v, u)))
            .collect();
        let vis_set: HashSet<usize> = visible.iter().copied().collect();
        faces = faces
            .into_iter()
            .enumerate()
            .filter(|(fi, _)| !vis_set.contains(fi))
            .map(|(_, f)| f)
            .collect();
        for (u, v) in horizon {
            faces.push([u, v, p_idx]);
        }
    }
    Ok(faces)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_is_orthonormal_right_handed() {
        for u in [
            Vec3::new(0.0, 0.0, 1.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.3, -0.8, 0.52).unit(),
        ] {
            let (e1, e2) = orthonormal_basis(u);
            assert!(e1.dot(e2).abs() < 1e-12);
            assert!(e1.dot(u).abs() < 1e-12);
            assert!((e1.norm() - 1.0).abs() < 1e-12);
            assert!((e1.cross(e2) - u).norm() < 1e-12);
        }
    }

    #[test]
    fn rotation_preserves_norm_and_quarter_turn() {
        let z = Vec3::new(0.0, 0.0, 1.0);
        let r = rotate_about_axis(Vec3::new(1.0, 0.0, 0.0), z, std::f64::consts::FRAC_PI_2);
        assert!((r - Vec3::new(0.0, 1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn polygon_margin_detects_inside_and_outside() {
        let square = [
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(1.0, 1.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
        ];
        let n = Vec3::new(0.0, 0.0, 1.0);
        assert!(convex_polygon_margin(Vec3::new(0.5, 0.5, 0.0), &square, n) > 0.4);
        assert!(convex_polygon_margin(Vec3::new(1.5, 0.5, 0.0), &square, n) < 0.0);
    }

    #[test]
    fn hull_of_octahedron_has_eight_outward_faces() {
        let pts = vec![
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(-1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.0, -1.0, 0.0),
            Vec3::new(0.0, 0.0, 1.0),
            Vec3::new(0.0, 0.0, -1.0),
        ];
        let faces = convex_hull(&pts).unwrap();
        assert_eq!(faces.len(), 8);
        for f in &faces {
            let n = triangle_area_vector(pts[f[0]], pts[f[1]], pts[f[2]]);
            let c = (pts[f[0]] + pts[f[1]] + pts[f[2]]) / 3.0;
            assert!(n.dot(c) > 0.0, "face oriented inward");
        }
    }

    #[test]
    fn hull_of_random_sphere_samples_is_closed() {
        // Deterministic pseudo-random points on a sphere.
        let mut pts = Vec::new();
        let mut s = 1u64;
        for _ in 0..200 {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let a = (s >> 11) as f64 / (1u64 << 53) as f64;
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let b = (s >> 11) as f64 / (1u64 << 53) as f64;
            let z = 2.0 * a - 1.0;
            let phi = std::f64::consts::TAU * b;
            let r = (1.0 - z * z).max(0.0).sqrt();
            pts.push(Vec3::new(r * phi.cos(), r * phi.sin(), z));
        }
        let faces = convex_hull(&pts).unwrap();
        // Closed 2-manifold: every directed edge appears exactly once.
        use std::collections::HashMap;
        let mut dir: HashMap<(usize, usize), usize> = HashMap::new();
        for f in &faces {
            for k in 0..3 {
                *dir.entry((f[k], f[(k + 1) % 3])).or_insert(0) += 1;
            }
        }
        for (&(u, v), &cnt) in &dir {
            assert_eq!(cnt, 1);
            assert_eq!(dir.get(&(v, u)), Some(&1));
        }
        // Euler: V - E + F = 2 with all points on the sphere (so V = 200).
        let e = dir.len() / 2;
        assert_eq!(200 - e as i64 + faces.len() as i64, 2);
    }
}
