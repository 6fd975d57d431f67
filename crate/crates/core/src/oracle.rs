//! Independent cross-checks implemented by exhaustive or analytic means,
//! deliberately sharing no machinery with the code they validate.

use std::collections::{BTreeMap, BTreeSet};

use crate::geometry::{convex_polygon_margin, foot_on_line, orthonormal_basis, Vec3};
use crate::mesh::TriMesh;
use crate::par;
use crate::quad_ms::convert::from_planar;
use crate::quad_ms::VertexKind;
use crate::surface_map::{PlanarMap, RotationSystem};

/// Support ties closer than this fraction of the body scale are read as
/// exact when a carrier is extracted at a refined direction.
const TIE_REL: f64 = 1e-7;
/// Affine-rank decisions over carrier points, as a fraction of scale.
const SPAN_REL: f64 = 1e-7;
/// Alignment and strict-interior margin for accepting a balance point, the
/// same relative margin the exact detector treats as generic.
const ACCEPT_REL: f64 = 1e-9;

/// Canonical codes of every quadrangulation class whose planar encoding
/// has at most `max_edges` edges, found by brute force: try every rotation
/// permutation over the fixed involution and keep the sphere maps.  The
/// zero-edge case contributes the base path.
pub fn planar_census(max_edges: usize) -> BTreeSet<Vec<u8>> {
    let mut codes = BTreeSet::new();
    codes.insert(from_planar(&PlanarMap::Trivial).quad.canonical_code());
    for e in 1..=max_edges {
        let n = 2 * e;
        let alpha: Vec<usize> = (0..n).map(|d| d ^ 1).collect();
        let mut sigma: Vec<usize> = (0..n).collect();
        permute_all(&mut sigma, n, &mut |sigma| {
            if let Ok(m) = RotationSystem::new(sigma.to_vec(), alpha.clone()) {
                codes.insert(from_planar(&PlanarMap::Map(m)).quad.canonical_code());
            }
        });
    }
    codes
}

/// A balance direction of the support function.
#[derive(Debug, Clone)]
pub struct SupportCritical {
    pub kind: VertexKind,
    /// Exact balance direction: the support point lies on the ray from the
    /// weight point along it.
    pub direction: Vec3,
    /// Support value `max <x - w, u>` along `direction`.
    pub support: f64,
    /// Mesh vertices of the support set there: the face the body would
    /// rest on, the rocking edge, or the tip vertex.
    pub carrier: BTreeSet<usize>,
}

/// Affine span of a point cloud, up to a tolerance.  `None` means the
/// cloud is full-dimensional, which no support set of a convex body is.
enum Span {
    Point,
    Line { a: Vec3, b: Vec3 },
    Plane { origin: Vec3, normal: Vec3 },
}

fn span_of(pts: &[Vec3], tol: f64) -> Option<Span> {
    let p0 = pts[0];
    let (mut far_d, mut far) = (0.0, p0);
    for &x in pts {
        let d = (x - p0).norm();
        if d > far_d {
            far_d = d;
            far = x;
        }
    }
    if far_d <= tol {
        return Some(Span::Point);
    }
    let t = (far - p0) / far_d;
    let (mut off_d, mut off) = (0.0, Vec3::ZERO);
    for &x in pts {
        let r = x - p0;
        let perp = r - t * r.dot(t);
        if perp.norm() > off_d {
            off_d = perp.norm();
            off = perp;
        }
    }
    if off_d <= tol {
        return Some(Span::Line { a: p0, b: far });
    }
    let normal = t.cross(off).unit();
    if pts.iter().any(|&x| (x - p0).dot(normal).abs() > tol) {
        return None;
    }
    Some(Span::Plane { origin: p0, normal })
}

/// Try to turn a proposed generator set (mesh vertex indices) into a
/// verified balance point.  The generators' affine span gives a refined
/// direction (the perpendicular from the weight point), the carrier is
/// read off as the support tie closure along that direction, and the
/// candidate is accepted only if the support point lies strictly inside
/// the closure's convex hull.
fn refine_and_verify(mesh: &TriMesh, w: Vec3, cand: &[usize]) -> Option<SupportCritical> {
    let points = mesh.vertices();
    let scale = mesh.scale();
    let span_tol = SPAN_REL * scale;
    let tie_tol = TIE_REL * scale;
    let accept_tol = ACCEPT_REL * scale;
    let pts: Vec<Vec3> = cand.iter().map(|&i| points[i]).collect();
    let q = match span_of(&pts, span_tol)? {
        Span::Point => pts[0],
        Span::Line { a, b } => foot_on_line(w, a, b).1,
        Span::Plane { origin, normal } => w + normal * (origin - w).dot(normal),
    };
    let radial = q - w;
    if radial.norm() <= span_tol {
        // The weight point sits on the span itself; nothing to refine.
        return None;
    }
    let u = radial.unit();
    let h = points.iter().map(|&x| (x - w).dot(u)).fold(f64::NEG_INFINITY, f64::max);
    let closure: Vec<usize> =
        (0..points.len()).filter(|&k| (points[k] - w).dot(u) >= h - tie_tol).collect();
    let p = w + u * h;
    verify(points, u, h, p, &closure, span_tol, accept_tol)
}

/// Feed every subset of up to three proposal members through refinement.
/// A true carrier line is spanned by any two of its vertices and a true
/// carrier plane by any non-collinear three, and the tie closure restores
/// the rest, so a near-tying intruder among the members cannot hide a
/// balance point; spurious subsets simply fail verification.
fn propose_subsets(
    mesh: &TriMesh,
    w: Vec3,
    members: &[usize],
    found: &mut BTreeMap<BTreeSet<usize>, SupportCritical>,
) {
    let m = members.len();
    for i in 0..m {
        if let Some(hit) = refine_and_verify(mesh, w, &[members[i]]) {
            found.entry(hit.carrier.clone()).or_insert(hit);
        }
        for j in i + 1..m {
            if let Some(hit) = refine_and_verify(mesh, w, &[members[i], members[j]]) {
                found.entry(hit.carrier.clone()).or_insert(hit);
            }
            for k in j + 1..m {
                if let Some(hit) =
                    refine_and_verify(mesh, w, &[members[i], members[j], members[k]])
                {
                    found.entry(hit.carrier.clone()).or_insert(hit);
                }
            }
        }
    }
}

/// Accept the refined direction `u` if the support point `p` lies strictly
/// inside the convex hull of the tie closure; the closure's affine rank
/// decides the kind (face, edge or vertex carrier).
fn verify(
    points: &[Vec3],
    u: Vec3,
    h: f64,
    p: Vec3,
    closure: &[usize],
    span_tol: f64,
    accept_tol: f64,
) -> Option<SupportCritical> {
    let pts: Vec<Vec3> = closure.iter().map(|&i| points[i]).collect();
    let kind = match span_of(&pts, span_tol)? {
        Span::Point => {
            if (p - pts[0]).norm() > accept_tol {
                return None;
            }
            VertexKind::Unstable
        }
        Span::Line { a, b } => {
            let (_, q) = foot_on_line(p, a, b);
            if (p - q).norm() > accept_tol {
                return None;
            }
            let dir = (b - a).unit();
            let params: Vec<f64> = pts.iter().map(|&x| (x - a).dot(dir)).collect();
            let lo = params.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = params.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let t = (p - a).dot(dir);
            if t - lo <= accept_tol || hi - t <= accept_tol {
                return None;
            }
            VertexKind::Saddle
        }
        Span::Plane { origin, normal } => {
            if (p - origin).dot(normal).abs() > accept_tol {
                return None;
            }
            let n = if normal.dot(u) > 0.0 { normal } else { -normal };
            let (e1, e2) = orthonormal_basis(n);
            let flat: Vec<(f64, f64, usize)> = pts
                .iter()
                .enumerate()
                .map(|(i, &x)| ((x - origin).dot(e1), (x - origin).dot(e2), i))
                .collect();
            let hull: Vec<Vec3> = hull_2d(&flat).into_iter().map(|i| pts[i]).collect();
            if convex_polygon_margin(p, &hull, n) <= accept_tol {
                return None;
            }
            VertexKind::Stable
        }
    };
    Some(SupportCritical {
        kind,
        direction: u,
        support: h,
        carrier: closure.iter().copied().collect(),
    })
}

/// Indices of the convex hull of a planar point cloud, counterclockwise
/// (Andrew's monotone chain); collinear boundary points are dropped.
fn hull_2d(pts: &[(f64, f64, usize)]) -> Vec<usize> {
    let mut p = pts.to_vec();
    p.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let cross = |o: &(f64, f64, usize), a: &(f64, f64, usize), b: &(f64, f64, usize)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let chain = |iter: &mut dyn Iterator<Item = &(f64, f64, usize)>| {
        let mut out: Vec<(f64, f64, usize)> = Vec::new();
        for pt in iter {
            while out.len() >= 2 && cross(&out[out.len() - 2], &out[out.len() - 1], pt) <= 0.0 {
                out.pop();
            }
            out.push(*pt);
        }
        out.pop();
        out
    };
    let mut hull = chain(&mut p.iter());
    hull.extend(chain(&mut p.iter().rev()));
    hull.into_iter().map(|(_, _, i)| i).collect()
}

/// Brute-force balance finder driven by support sampling: over all
/// `10 * 4^level + 2` directions of a geodesic grid, evaluate the support
/// function `h(u) = max_x <x - w, u>` and let each sample propose the
/// carrier it sees (every vertex within a grid-resolution tolerance of the
/// maximum).  Proposals go through `verified_candidate`, so anything
/// reported satisfies the balance condition exactly; completeness rests on
/// the grid being finer than every carrier's angular footprint.  Distinct
/// equilibria are distinct verified carriers.  No face adjacency or
/// normal-cone bookkeeping enters, so the result is an independent check
/// of the exact predicates.
pub fn support_grid_critical_points(
    mesh: &TriMesh,
    w: Vec3,
    level: usize,
) -> Vec<SupportCritical> {
    support_grid_impl(mesh, w, level, false)
}

/// Sequential reference version of [`support_grid_critical_points`]; same
/// output, single-threaded classification pass.
pub fn support_grid_critical_points_serial(
    mesh: &TriMesh,
    w: Vec3,
    level: usize,
) -> Vec<SupportCritical> {
    support_grid_impl(mesh, w, level, true)
}

fn support_grid_impl(mesh: &TriMesh, w: Vec3, level: usize, serial: bool) -> Vec<SupportCritical> {
    let grid = crate::mesh::shapes::icosphere(level);
    let dirs = grid.vertices();
    let points = mesh.vertices();
    // Gather tolerance: the full carrier of a balance direction ties within
    // (covering radius) x (body diameter) at the nearest grid sample.
    let spacing = 1.11 / (1u64 << level) as f64;
    let gather_tol = 2.0 * spacing * mesh.scale();

    let kernel = |i: usize| {
        let u = dirs[i];
        let (mut best, mut arg) = (f64::NEG_INFINITY, 0usize);
        for (k, &x) in points.iter().enumerate() {
            let s = (x - w).dot(u);
            if s > best {
                best = s;
                arg = k;
            }
        }
        let multi = points
            .iter()
            .enumerate()
            .any(|(k, &x)| k != arg && (x - w).dot(u) > best - gather_tol);
        (arg as u32, multi)
    };
    let class: Vec<(u32, bool)> = if serial {
        par::map_indexed_serial(dirs.len(), kernel)
    } else {
        par::map_indexed(dirs.len(), kernel)
    };

    let mut found: BTreeMap<BTreeSet<usize>, SupportCritical> = BTreeMap::new();
    let mut tested = vec![false; points.len()];
    for (i, &(arg, multi)) in class.iter().enumerate() {
        if multi {
            let u = dirs[i];
            let best = (points[arg as usize] - w).dot(u);
            let members: Vec<usize> =
                (0..points.len()).filter(|&k| (points[k] - w).dot(u) > best - gather_tol).collect();
            propose_subsets(mesh, w, &members, &mut found);
        } else if !tested[arg as usize] {
            tested[arg as usize] = true;
            if let Some(hit) = refine_and_verify(mesh, w, &[arg as usize]) {
                found.entry(hit.carrier.clone()).or_insert(hit);
            }
        }
    }
    found.into_values().collect()
}

/// Heap's algorithm over the first `k` entries of `items`.
fn permute_all<T, F: FnMut(&[T])>(items: &mut [T], k: usize, visit: &mut F) {
    if k <= 1 {
        visit(items);
        return;
    }
    for i in 0..k {
        permute_all(items, k - 1, visit);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}
