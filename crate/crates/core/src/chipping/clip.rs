//! Plane and sphere truncation of convex triangle meshes, and the polar
//! dual about an interior point.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::geometry::{polygon_centroid, Vec3, GEOM_EPS};
use crate::mesh::{shapes, TriMesh};

use super::ChipError;

/// Convexity gate for sphere-clipped meshes, relative to scale.  The rim
/// of the cut sits on body-edge chords, so its radial jitter is of the
/// order of the squared mesh edge; folds between the inscribed patch and
/// such a rim are benign and admitted, while a patch on the wrong side or
/// outside the body fails by orders of magnitude.
const CLIP_CONVEXITY_TOL: f64 = 1e-4;

/// Patch vertices must stay inside the original body by this relative
/// tolerance, or the cut is rejected: the result must be an inscription
/// of the intersection of body and ball.
const PATCH_CONTAINMENT_TOL: f64 = 1e-7;

/// A truncating halfspace: points with `normal . x > offset` are removed
/// and the hole is closed by a flat facet.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PlaneCut {
    /// Outward unit normal of the new facet.
    pub normal: Vec3,
    /// The cutting plane is `normal . x = offset`.
    pub offset: f64,
}

impl PlaneCut {
    pub fn through_point(point: Vec3, normal: Vec3) -> PlaneCut {
        let n = normal.unit();
        PlaneCut { normal: n, offset: n.dot(point) }
    }
}

/// A truncating ball: points with `|x - center| > radius` are removed and
/// the hole is closed by a triangulated patch inscribed in the sphere.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SphereCut {
    pub center: Vec3,
    pub radius: f64,
}

/// Vertex state against the cut field.
#[derive(Clone, Copy, PartialEq)]
enum Side {
    Keep,
    On,
    Out,
}

/// Result of clipping the surface against a signed field (`> 0` removed),
/// before the hole is closed.
struct ClipOutcome {
    vertices: Vec<Vec3>,
    faces: Vec<[usize; 3]>,
    /// Hole boundaries as vertex cycles, wound like the kept surface
    /// (so a facet closing the hole must use the reversed cycle).
    rim_cycles: Vec<Vec<usize>>,
    /// Mesh vertices strictly removed, for locating the hole.
    removed: Vec<usize>,
}

/// Clip the mesh surface against a signed cut field given per vertex.
/// `crossing(u, v)` returns the cut point of edge `u -> v` where `u` is
/// strictly kept and `v` strictly removed.
fn clip_by_field(
    mesh: &TriMesh,
    dist: &[f64],
    tol: f64,
    crossing: impl Fn(usize, usize) -> Vec3,
) -> Result<ClipOutcome, ChipError> {
    let side: Vec<Side> = dist
        .iter()
        .map(|&d| {
            if d > tol {
                Side::Out
            } else if d >= -tol {
                Side::On
            } else {
                Side::Keep
            }
        })
        .collect();
    if !side.iter().any(|&s| s == Side::Out) {
        return Err(ChipError::EmptyCut);
    }
    if !side.iter().any(|&s| s == Side::Keep) {
        return Err(ChipError::FullCut);
    }

    let mut vertices: Vec<Vec3> = Vec::new();
    let mut remap: Vec<Option<usize>> = vec![None; mesh.n_vertices()];
    for v in 0..mesh.n_vertices() {
        if side[v] != Side::Out {
            remap[v] = Some(vertices.len());
            vertices.push(mesh.position(v));
        }
    }

    // One cut point per crossed edge, shared by its two faces.  An edge
    // with an `On` endpoint is cut at that endpoint and creates nothing.
    let mut cut_of_edge: HashMap<(usize, usize), usize> = HashMap::new();
    let mut cut_id = |u: usize, v: usize, vertices: &mut Vec<Vec3>| -> usize {
        debug_assert!(side[u] != Side::Out && side[v] == Side::Out);
        if side[u] == Side::On {
            return remap[u].unwrap();
        }
        let key = (u.min(v), u.max(v));
        *cut_of_edge.entry(key).or_insert_with(|| {
            vertices.push(crossing(u, v));
            vertices.len() - 1
        })
    };

    let mut faces: Vec<[usize; 3]> = Vec::new();
    let push_poly = |poly: &[usize], faces: &mut Vec<[usize; 3]>| {
        // Drop cyclically repeated ids, then fan-triangulate (the polygon
        // is a convex clip of a triangle).
        let mut ids: Vec<usize> = Vec::with_capacity(poly.len());
        for &p in poly {
            if ids.last() != Some(&p) {
                ids.push(p);
            }
        }
        while ids.len() > 1 && ids.first() == ids.last() {
            ids.pop();
        }
        for k in 1..ids.len().saturating_sub(1) {
            faces.push([ids[0], ids[k], ids[k + 1]]);
        }
    };

    // Chords exit -> entry per clipped face chain into the hole cycles.
    let mut next_on_rim: HashMap<usize, usize> = HashMap::new();
    for f in mesh.faces() {
        if f.iter().all(|&v| side[v] != Side::Out) {
            faces.push([remap[f[0]].unwrap(), remap[f[1]].unwrap(), remap[f[2]].unwrap()]);
            continue;
        }
        if f.iter().all(|&v| side[v] == Side::Out) {
            continue;
        }
        let mut poly: Vec<usize> = Vec::with_capacity(5);
        let mut exit_entry: (Option<usize>, Option<usize>) = (None, None);
        for k in 0..3 {
            let (u, v) = (f[k], f[(k + 1) % 3]);
            if side[u] != Side::Out {
                poly.push(remap[u].unwrap());
                if side[v] == Side::Out {
                    let x = cut_id(u, v, &mut vertices);
                    poly.push(x);
                    exit_entry.0 = Some(x);
                }
            } else if side[v] != Side::Out {
                let x = cut_id(v, u, &mut vertices);
                poly.push(x);
                exit_entry.1 = Some(x);
            }
        }
        push_poly(&poly, &mut faces);
        let (Some(exit), Some(entry)) = exit_entry else {
            return Err(ChipError::Degenerate("clipped face without a full chord".into()));
        };
        if exit != entry && next_on_rim.insert(exit, entry).is_some() {
            return Err(ChipError::CurveNotSimple);
        }
    }

    // Assemble chords into closed cycles.
    let mut rim_cycles: Vec<Vec<usize>> = Vec::new();
    let mut seen: HashMap<usize, bool> = HashMap::new();
    let starts: Vec<usize> = next_on_rim.keys().copied().collect();
    for start in starts {
        if seen.contains_key(&start) {
            continue;
        }
        let mut cycle = vec![start];
        seen.insert(start, true);
        let mut cur = start;
        loop {
            let Some(&nxt) = next_on_rim.get(&cur) else {
                return Err(ChipError::CurveNotSimple);
            };
            if nxt == start {
                break;
            }
            if seen.insert(nxt, true).is_some() {
                return Err(ChipError::CurveNotSimple);
            }
            cycle.push(nxt);
            cur = nxt;
        }
        if cycle.len() < 3 {
            return Err(ChipError::CurveNotSimple);
        }
        rim_cycles.push(cycle);
    }
    if rim_cycles.is_empty() {
        return Err(ChipError::CurveNotSimple);
    }

    let removed: Vec<usize> =
        (0..mesh.n_vertices()).filter(|&v| side[v] == Side::Out).collect();
    Ok(ClipOutcome { vertices, faces, rim_cycles, removed })
}

/// Remove the cap `normal . x > offset` and close the hole with a flat
/// facet, fan-triangulated from the cut polygon's centroid.  All facet
/// vertices land on the cutting plane exactly (post-snapped).
pub fn plane_clip(mesh: &TriMesh, cut: &PlaneCut) -> Result<TriMesh, ChipError> {
    let n = cut
        .normal
        .normalized()
        .ok_or_else(|| ChipError::DomainError("cut normal must be nonzero".into()))?;
    let tol = GEOM_EPS * mesh.scale().max(1.0);
    let dist: Vec<f64> =
        mesh.vertices().iter().map(|&x| n.dot(x) - cut.offset).collect();
    let mut out = clip_by_field(mesh, &dist, tol, |u, v| {
        let (a, b) = (mesh.position(u), mesh.position(v));
        let (da, db) = (dist[u], dist[v]);
        let x = a + (b - a) * (da / (da - db));
        x - n * (n.dot(x) - cut.offset)
    })?;
    if out.rim_cycles.len() != 1 {
        // A convex body meets a halfspace in one cap; several rims mean
        // the input was not convex where it mattered.
        return Err(ChipError::Degenerate("plane cut with several boundary curves".into()));
    }
    let cycle = out.rim_cycles.pop().unwrap();
    let pts: Vec<Vec3> = cycle.iter().map(|&i| out.vertices[i]).collect();
    let c = polygon_centroid(&pts);
    let c = c - n * (n.dot(c) - cut.offset);
    let c_id = out.vertices.len();
    out.vertices.push(c);
    for k in 0..cycle.len() {
        // Reversed hole cycle gives the facet its outward winding.
        let a = cycle[(k + 1) % cycle.len()];
        let b = cycle[k];
        out.faces.push([c_id, a, b]);
    }
    Ok(TriMesh::new(out.vertices, out.faces)?)
}

/// Remove everything outside the ball and close the hole with a patch
/// inscribed in the sphere: the rim is slerped toward the apex of the
/// removed cap in `facet_count` bands.  Requires the sphere boundary to
/// meet the surface in a single simple curve.
pub fn sphere_clip(
    mesh: &TriMesh,
    cut: &SphereCut,
    facet_count: usize,
) -> Result<TriMesh, ChipError> {
    let q = cut.center;
    let r = cut.radius;
    if !(r > 0.0) {
        return Err(ChipError::DomainError("sphere radius must be positive".into()));
    }
    let bands = facet_count.max(1);
    let tol = GEOM_EPS * mesh.scale().max(1.0);
    let dist: Vec<f64> =
        mesh.vertices().iter().map(|&x| (x - q).norm() - r).collect();
    let mut out = clip_by_field(mesh, &dist, tol, |u, v| {
        let (a, b) = (mesh.position(u), mesh.position(v));
        let d = b - a;
        let m = a - q;
        let qa = d.norm_squared();
        let qb = 2.0 * m.dot(d);
        let qc = m.norm_squared() - r * r;
        let s = (-qb + (qb * qb - 4.0 * qa * qc).max(0.0).sqrt()) / (2.0 * qa);
        let x = a + d * s;
        q + (x - q).unit() * r
    })?;
    if out.rim_cycles.len() != 1 {
        return Err(ChipError::CurveNotSimple);
    }
    // The removed region must be one cap: strictly removed vertices form
    // a single edge-connected component.
    if !out.removed.is_empty() {
        let in_removed: std::collections::HashSet<usize> =
            out.removed.iter().copied().collect();
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![out.removed[0]];
        seen.insert(out.removed[0]);
        while let Some(v) = stack.pop() {
            for &x in mesh.ring(v) {
                if in_removed.contains(&x) && seen.insert(x) {
                    stack.push(x);
                }
            }
        }
        if seen.len() != out.removed.len() {
            return Err(ChipError::CurveNotSimple);
        }
    }

    let cycle = out.rim_cycles.pop().unwrap();
    let apex_dir = {
        let mean = out
            .removed
            .iter()
            .map(|&v| mesh.position(v))
            .fold(Vec3::ZERO, |acc, p| acc + p)
            / out.removed.len() as f64;
        (mean - q)
            .normalized()
            .ok_or_else(|| ChipError::Degenerate("cap apex direction undefined".into()))?
    };

    let slerp = |a: Vec3, b: Vec3, t: f64| -> Vec3 {
        let dot = a.dot(b).clamp(-1.0, 1.0);
        let omega = dot.acos();
        if omega < 1e-9 {
            return (a * (1.0 - t) + b * t).unit();
        }
        (a * ((1.0 - t) * omega).sin() + b * (t * omega).sin()) / omega.sin()
    };

    // Bands of ring vertices between the rim (band 0) and the apex.
    let rim: Vec<usize> = cycle.iter().rev().copied().collect();
    let m = rim.len();
    let rim_dirs: Vec<Vec3> =
        rim.iter().map(|&i| (out.vertices[i] - q).unit()).collect();
    let first_patch_id = out.vertices.len();
    let mut band_ids: Vec<Vec<usize>> = vec![rim.clone()];
    for j in 1..bands {
        let t = j as f64 / bands as f64;
        let mut ids = Vec::with_capacity(m);
        for dir in &rim_dirs {
            ids.push(out.vertices.len());
            out.vertices.push(q + slerp(*dir, apex_dir, t) * r);
        }
        band_ids.push(ids);
    }
    let apex_id = out.vertices.len();
    out.vertices.push(q + apex_dir * r);

    for j in 0..bands - 1 {
        let (lo, hi) = (&band_ids[j], &band_ids[j + 1]);
        for i in 0..m {
            let (a, b) = (lo[i], lo[(i + 1) % m]);
            let (c, d) = (hi[(i + 1) % m], hi[i]);
            out.faces.push([a, b, c]);
            out.faces.push([a, c, d]);
        }
    }
    let last = &band_ids[bands - 1];
    for i in 0..m {
        out.faces.push([last[i], last[(i + 1) % m], apex_id]);
    }

    // The patch must stay inside the original body: the kept solid is an
    // inscription of the intersection of body and ball.
    let tol_in = PATCH_CONTAINMENT_TOL * mesh.scale().max(1.0);
    let planes: Vec<(Vec3, Vec3)> = (0..mesh.n_faces())
        .map(|f| (mesh.face_normal(f), mesh.position(mesh.faces()[f][0])))
        .collect();
    for x in &out.vertices[first_patch_id..] {
        for (n, base) in &planes {
            if (*x - *base).dot(*n) > tol_in {
                return Err(ChipError::ConvexityLost);
            }
        }
    }

    let clipped = TriMesh::new(out.vertices, out.faces)?;
    if clipped.convexity_defect() > CLIP_CONVEXITY_TOL * mesh.scale().max(1.0) {
        return Err(ChipError::ConvexityLost);
    }
    Ok(clipped)
}

/// Polar dual of the body about an interior point `w`: one dual vertex per
/// face plane at `w + n / h` (support distance `h` from `w`), welded over
/// coplanar fans and closed by its convex hull.  The dual of the dual
/// recovers the body up to triangulation.
pub fn polar_dual(mesh: &TriMesh, w: Vec3) -> Result<TriMesh, ChipError> {
    let scale = mesh.scale().max(1.0);
    let mut points: Vec<Vec3> = Vec::with_capacity(mesh.n_faces());
    for f in 0..mesh.n_faces() {
        let n = mesh.face_normal(f);
        let h = n.dot(mesh.face_centroid(f) - w);
        if h <= GEOM_EPS * scale {
            return Err(ChipError::Degenerate(
                "dual point must lie strictly inside the body".into(),
            ));
        }
        points.push(n / h);
    }

    // Weld near-identical dual points (coplanar facet fans collapse to a
    // single dual vertex).
    let dual_scale = points.iter().map(|p| p.norm()).fold(0.0, f64::max);
    let eps = 1e-9 * dual_scale.max(1.0);
    let cell = |p: &Vec3| -> (i64, i64, i64) {
        ((p.x / eps).round() as i64, (p.y / eps).round() as i64, (p.z / eps).round() as i64)
    };
    let mut reps: Vec<Vec3> = Vec::with_capacity(points.len());
    let mut by_cell: HashMap<(i64, i64, i64), Vec<usize>> = HashMap::new();
    'outer: for p in &points {
        let (cx, cy, cz) = cell(p);
        for dx in -1..=1i64 {
            for dy in -1..=1i64 {
                for dz in -1..=1i64 {
                    if let Some(ids) = by_cell.get(&(cx + dx, cy + dy, cz + dz)) {
                        for &i in ids {
                            if reps[i].dist(*p) <= eps {
                                continue 'outer;
                            }
                        }
                    }
                }
            }
        }
        by_cell.entry((cx, cy, cz)).or_default().push(reps.len());
        reps.push(*p);
    }

    let shifted: Vec<Vec3> = reps.iter().map(|&p| w + p).collect();
    Ok(shapes::from_points(&shifted)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::shapes;

    const VOLUME_TOL: f64 = 1e-9;

    fn side_one_cube() -> TriMesh {
        // The [-0.5, 0.5]^3 cube, subdivided so cuts cross interior edges.
        shapes::cube_mesh(4)
    }

    #[test]
    fn corner_cut_of_a_cube_gives_a_seven_facet_solid() {
        let cube = shapes::cube_mesh(1);
        let n = Vec3::new(1.0, 1.0, 1.0).unit();
        // Plane x + y + z = 1.5 - s with s = 0.45 cuts the (.5,.5,.5) corner.
        let cut = PlaneCut { normal: n, offset: (1.5 - 0.45) / 3.0f64.sqrt() };
        let clipped = plane_clip(&cube, &cut).unwrap();
        let mut normals: Vec<[i64; 3]> = clipped
            .faces()
            .iter()
            .enumerate()
            .map(|(f, _)| {
                let n = clipped.face_normal(f);
                [
                    (n.x * 1e6).round() as i64,
                    (n.y * 1e6).round() as i64,
                    (n.z * 1e6).round() as i64,
                ]
            })
            .collect();
        normals.sort_unstable();
        normals.dedup();
        assert_eq!(normals.len(), 7);
        assert!(clipped.convexity_defect() < 1e-9);
    }

    #[test]
    fn cut_volume_matches_the_divergence_integral_of_the_cap() {
        // The corner cap x + y + z > 3 - s of the cube is a right corner
        // tetrahedron with legs s, so its volume is s^3 / 6.
        let cube = side_one_cube();
        let s = 0.3;
        let n = Vec3::new(1.0, 1.0, 1.0).unit();
        let cut = PlaneCut { normal: n, offset: (1.5 - s) / 3.0f64.sqrt() };
        let clipped = plane_clip(&cube, &cut).unwrap();
        let removed = cube.volume() - clipped.volume();
        assert!((removed - s * s * s / 6.0).abs() < VOLUME_TOL, "removed {removed}");
    }

    #[test]
    fn plane_outside_the_body_is_an_empty_cut() {
        let cube = side_one_cube();
        let cut = PlaneCut { normal: Vec3::new(0.0, 0.0, 1.0), offset: 0.75 };
        assert!(matches!(plane_clip(&cube, &cut), Err(ChipError::EmptyCut)));
        // Tangent plane through the top face removes nothing either.
        let tangent = PlaneCut { normal: Vec3::new(0.0, 0.0, 1.0), offset: 0.5 };
        assert!(matches!(plane_clip(&cube, &tangent), Err(ChipError::EmptyCut)));
    }

    #[test]
    fn plane_below_the_body_removes_everything() {
        let cube = side_one_cube();
        let cut = PlaneCut { normal: Vec3::new(0.0, 0.0, 1.0), offset: -0.75 };
        assert!(matches!(plane_clip(&cube, &cut), Err(ChipError::FullCut)));
    }

    #[test]
    fn facet_vertices_land_on_the_cutting_plane() {
        let cube = side_one_cube();
        let n = Vec3::new(0.3, -0.2, 0.93).unit();
        let cut = PlaneCut { normal: n, offset: 0.42 };
        let clipped = plane_clip(&cube, &cut).unwrap();
        let mut on_plane = 0;
        for v in clipped.vertices() {
            let d = n.dot(*v) - cut.offset;
            assert!(d < 1e-12, "vertex beyond the cut plane by {d}");
            if d.abs() < 1e-12 {
                on_plane += 1;
            }
        }
        assert!(on_plane >= 4);
        assert!(clipped.convexity_defect() < 1e-9);
    }

    #[test]
    fn deep_sphere_clip_of_a_sphere_keeps_a_lens_of_the_right_volume() {
        // Ball of radius 1 at the origin cut by a ball of radius 1 at
        // distance 1: the kept lens volume is known in closed form.
        let ball = shapes::icosphere(4);
        let cut = SphereCut { center: Vec3::new(0.0, 0.0, 1.0), radius: 1.0 };
        let clipped = sphere_clip(&ball, &cut, 24).unwrap();
        // Lens of two unit balls with centers distance d = 1 apart:
        // pi (4R + d)(2R - d)^2 / 12 = 5 pi / 12.
        let lens = std::f64::consts::PI * 5.0 / 12.0;
        let vol = clipped.volume();
        // Inscribed mesh under-estimates; a 2% band is enough here.
        assert!((vol - lens).abs() < 0.02 * lens, "lens {lens} vs {vol}");
        assert!(clipped.convexity_defect() < 2e-4);
    }

    #[test]
    fn sphere_clip_far_from_the_body_is_empty_and_tiny_sphere_swallows_it() {
        let ball = shapes::icosphere(2);
        let all = SphereCut { center: Vec3::ZERO, radius: 2.0 };
        assert!(matches!(sphere_clip(&ball, &all, 4), Err(ChipError::EmptyCut)));
        let none = SphereCut { center: Vec3::ZERO, radius: 0.5 };
        assert!(matches!(sphere_clip(&ball, &none, 4), Err(ChipError::FullCut)));
    }

    #[test]
    fn sphere_clip_through_a_waist_is_rejected_as_not_simple() {
        // A ball beside the waist of a rod that keeps the waist but loses
        // both tips leaves two boundary curves.
        let rod = shapes::ellipsoid_mesh(0.4, 0.4, 1.6, 4);
        let cut = SphereCut { center: Vec3::new(2.0, 0.0, 0.0), radius: 2.45 };
        match sphere_clip(&rod, &cut, 4) {
            Err(ChipError::CurveNotSimple) => {}
            other => panic!("expected CurveNotSimple, got {:?}", other.map(|m| m.n_vertices())),
        }
    }

    #[test]
    fn large_radius_sphere_clip_approaches_the_plane_clip() {
        let body = shapes::ellipsoid_mesh(1.0, 0.8, 0.6, 4);
        let n = Vec3::new(0.0, 0.0, 1.0);
        let depth = 0.05;
        let plane = PlaneCut { normal: n, offset: 0.6 - depth };
        let flat = plane_clip(&body, &plane).unwrap();
        // Sphere tangent to the same plane from far below.
        let r = 1e5;
        let cut = SphereCut { center: Vec3::new(0.0, 0.0, 0.6 - depth - r), radius: r };
        let round = sphere_clip(&body, &cut, 8).unwrap();
        assert!((flat.volume() - round.volume()).abs() < 1e-5 * flat.volume());
        let zmax = round.vertices().iter().map(|v| v.z).fold(f64::MIN, f64::max);
        assert!((zmax - (0.6 - depth)).abs() < 2e-6);
    }

    #[test]
    fn polar_dual_of_a_cube_is_an_octahedron_and_dualizes_back() {
        let cube = shapes::cube_mesh(2);
        let dual = polar_dual(&cube, Vec3::ZERO).unwrap();
        // Six face planes at support 1/2: the dual is the octahedron with
        // apexes at distance 2 on the axes.
        assert_eq!(dual.n_vertices(), 6);
        assert_eq!(dual.n_faces(), 8);
        assert!((dual.volume() - 32.0 / 3.0).abs() < 1e-9);
        let back = polar_dual(&dual, Vec3::ZERO).unwrap();
        assert_eq!(back.n_vertices(), 8);
        assert!((back.volume() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn polar_dual_about_an_off_center_point_inverts_support_distances() {
        let body = shapes::ellipsoid_mesh(1.0, 0.9, 0.8, 4);
        let w = Vec3::new(0.1, -0.05, 0.02);
        let dual = polar_dual(&body, w).unwrap();
        // Every dual vertex y satisfies (y - w) . (x - w) <= 1 for all
        // body points x, with equality on the touching face plane.
        for y in dual.vertices() {
            let mut worst = f64::MIN;
            for x in body.vertices() {
                worst = worst.max((*y - w).dot(*x - w));
            }
            assert!(worst <= 1.0 + 1e-9);
            assert!(worst > 1.0 - 1e-3);
        }
    }
}
