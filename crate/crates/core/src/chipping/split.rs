//! Splitting one equilibrium of a convex body into two by a targeted cut.
//!
//! [`split_equilibrium`] realizes a prescribed combinatorial vertex split
//! geometrically.  For a stable target the surface is first ground down to a
//! sphere pocket tangent to the body from inside (when a safe radius window
//! exists), and a tilted facet is then cut into the pocket so that the facet
//! captures exactly the prescribed fan of separatrices: the foot of the facet
//! becomes the new stable point, the facet rim carries the new saddle, and
//! the surviving pocket apex keeps the rest of the fan.  Unstable targets go
//! through the polar dual, where the cut lands on the flat facet dual to the
//! target vertex; polarity is exact for polytopes, so dualizing back changes
//! the body only near the cut.
//!
//! The construction is retried on a halving depth ladder; exhausting the
//! ladder yields [`ChipError::RealizationFailed`] carrying both the achieved
//! and the requested graph.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::chipping::{plane_clip, polar_dual, sphere_clip, ChipError, PlaneCut, SphereCut};
use crate::genealogy::vertex_split;
use crate::geometry::{orthonormal_basis, Vec3};
use crate::mesh::{extract_ms_complex, MsComplex, TriMesh};
use crate::quad_ms::{QuadComplex, VertexKind};

/// Length of the halving depth ladder.
const RETRY_ATTEMPTS: usize = 8;
/// Hard cap on the full wedge opening.  At `pi` the tilted facet would
/// degenerate into a half-space cut.
const MAX_WEDGE: f64 = 0.92 * PI;
/// Smallest admissible angle (radians) between a wedge ray and the nearest
/// separatrix stub; below this the capture is ambiguous at mesh resolution.
const MIN_CLEARANCE: f64 = 0.01;
/// Base angular margin (radians) granted around the captured stubs.  The
/// wedge widens past this only when the curvature spread demands it; a
/// narrow wedge keeps the surviving apex well clear of the facet.
const BASE_MARGIN: f64 = 0.35;
/// Fraction of a flanking gap the wedge may consume at most.
const FLANK_CAP: f64 = 0.45;
/// Safety pad (radians) on the minimum admissible half-opening.
const GAMMA_PAD: f64 = 0.03;
/// Pocket sink depth as a fraction of the requested truncation depth.
const SINK_FRACTION: f64 = 0.75;
/// Safety factor on the aperture bound that keeps the facet foot strictly
/// interior to the facet.
const SENSITIVITY_MARGIN: f64 = 0.8;
/// Locality radius of the curvature probes, in units of the cut reach
/// `sqrt(2 * support * depth)`; everything farther out must survive the cut.
const LOCALITY_FACTOR: f64 = 4.0;

/// A request to split one extremum of the quasi-dual graph of a body.
///
/// `sector_a` and `sector_b` select rotation gaps at `target` (gap `i`
/// precedes the `i`-th incident edge, order irrelevant); equal selectors
/// detach a pendant copy.  `depth` is the absolute depth of the facet cut.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplitRequest {
    pub target: usize,
    pub sector_a: usize,
    pub sector_b: usize,
    pub depth: f64,
}

/// Realize the vertex split requested by `req` on the body `mesh` viewed
/// from `w`, returning the cut body together with its new critical-point
/// structure.  The achieved graph is always verified against the requested
/// one by canonical code; the depth is halved up to [`RETRY_ATTEMPTS`] times
/// before giving up.
pub fn split_equilibrium(
    mesh: &TriMesh,
    w: Vec3,
    req: &SplitRequest,
) -> Result<(TriMesh, MsComplex), ChipError> {
    let ms = extract_ms_complex(mesh, w)?;
    let nq = ms.quasi.kinds().len();
    if req.target >= nq {
        return Err(ChipError::DomainError(format!(
            "target {} out of range ({nq} extrema)",
            req.target
        )));
    }
    let deg = ms.quasi.map().degree(req.target);
    let (a, b) = (
        req.sector_a.min(req.sector_b),
        req.sector_a.max(req.sector_b),
    );
    if b >= deg {
        return Err(ChipError::DomainError(format!(
            "sector {b} out of range (degree {deg})"
        )));
    }
    if !req.depth.is_finite() || req.depth <= 0.0 {
        return Err(ChipError::DomainError("depth must be positive".into()));
    }
    let support = mesh
        .position(ms.mesh_vertex[ms.correspondence.primal_of_quasi[req.target]])
        .dist(w);
    if req.depth >= 0.5 * support {
        return Err(ChipError::DomainError(
            "depth must stay below half the support distance of the target".into(),
        ));
    }
    let target_quad = vertex_split(&ms.quasi, req.target, a, b)
        .map_err(|e| ChipError::DomainError(format!("split selectors rejected: {e}")))?
        .quad;
    let target_code = target_quad.canonical_code();
    let kind = ms.quasi.kind(req.target);

    let mut depth = req.depth;
    let mut achieved: Option<QuadComplex> = None;
    let mut note = String::from("every attempt failed before extraction");
    for _ in 0..RETRY_ATTEMPTS {
        let outcome = match kind {
            VertexKind::Stable => realize_stable_on(mesh, w, &ms, req.target, a, b, depth),
            _ => realize_unstable(mesh, w, &ms, req.target, a, b, depth),
        };
        match outcome {
            Ok(cut_mesh) => match extract_ms_complex(&cut_mesh, w) {
                Ok(ms2) => {
                    if ms2.quasi.canonical_code() == target_code {
                        return Ok((cut_mesh, ms2));
                    }
                    note = format!("last extraction gave {}", ms2.quasi.signature());
                    achieved = Some(ms2.quasi.clone());
                }
                Err(e) => note = format!("extraction failed: {e}"),
            },
            // A nongeneric configuration does not improve under halving.
            Err(e @ ChipError::NonGeneric(_)) => return Err(e),
            Err(e) => note = format!("cut failed: {e}"),
        }
        depth *= 0.5;
    }
    Err(ChipError::RealizationFailed {
        achieved_signature: achieved
            .as_ref()
            .map(|q| q.signature().to_string())
            .unwrap_or(note),
        target_signature: target_quad.signature().to_string(),
        achieved: achieved.map(|q| q.to_json()),
        target: target_quad.to_json(),
    })
}

fn cyc(x: f64) -> f64 {
    x.rem_euclid(TAU)
}

/// Azimuths of the separatrix stubs around a quasi-dual extremum in the
/// basis `(e1, e2)`, each probed where its path crosses `probe_radius`.
fn stub_azimuths(
    mesh: &TriMesh,
    ms: &MsComplex,
    quasi_vertex: usize,
    probe_radius: f64,
    e1: Vec3,
    e2: Vec3,
) -> Result<Vec<f64>, ChipError> {
    let pv = ms.correspondence.primal_of_quasi[quasi_vertex];
    let vm = ms.mesh_vertex[pv];
    let p = mesh.position(vm);
    let cycle = &ms.primal.map().vertex_cycles()[pv];
    let mut phis = Vec::with_capacity(cycle.len());
    for &dart in cycle {
        let path = &ms.separatrices[ms.primal.map().edge_of(dart)];
        if path.last() != Some(&vm) {
            return Err(ChipError::Degenerate(
                "separatrix does not terminate at the target".into(),
            ));
        }
        // Walk outward from the extremum until the stub clears the probe
        // radius; the last edge alone is too coarse a direction sample.
        let mut probe = path[0];
        for &mv in path.iter().rev().skip(1) {
            probe = mv;
            if mesh.position(mv).dist(p) >= probe_radius {
                break;
            }
        }
        let dir = mesh.position(probe) - p;
        let (x, y) = (dir.dot(e1), dir.dot(e2));
        if x.hypot(y) < 1e-12 * p.dist(Vec3::ZERO).max(1.0) {
            return Err(ChipError::Degenerate(
                "separatrix stub has no tangential direction".into(),
            ));
        }
        phis.push(cyc(y.atan2(x)));
    }
    Ok(phis)
}

/// An angular wedge `[g1, g2]` (with `g2 > g1`) whose rays clear every
/// separatrix stub by at least `clearance`.
struct Wedge {
    g1: f64,
    g2: f64,
    clearance: f64,
}

/// Admissible half-opening range for the wedge capturing the cyclic stub
/// run `[a, b)` (`a == b` captures none, inside gap `a`).
struct SideBounds {
    pendant: bool,
    /// Azimuth of the first captured stub, or of the gap center for a
    /// pendant wedge.
    phi_first: f64,
    span_min: f64,
    flank1: f64,
    flank2: f64,
    gamma_floor: f64,
    gamma_max: f64,
}

fn side_bounds(phis: &[f64], a: usize, b: usize) -> Option<SideBounds> {
    let d = phis.len();
    if a == b {
        let prev = (a + d - 1) % d;
        let width = if d == 1 { TAU } else { cyc(phis[a] - phis[prev]) };
        let gamma_max = (FLANK_CAP * width).min(0.5 * MAX_WEDGE);
        let gamma_floor = (0.2 * width).min(0.3).max(MIN_CLEARANCE);
        if gamma_floor > gamma_max {
            return None;
        }
        return Some(SideBounds {
            pendant: true,
            phi_first: phis[prev] + 0.5 * width,
            span_min: 0.0,
            flank1: width,
            flank2: width,
            gamma_floor,
            gamma_max,
        });
    }
    let first = a;
    let last = (b + d - 1) % d;
    let prev = (a + d - 1) % d;
    let span_min = cyc(phis[last] - phis[first]);
    let flank1 = cyc(phis[first] - phis[prev]);
    let flank2 = cyc(phis[b] - phis[last]);
    let m1 = (0.3 * flank1).min(BASE_MARGIN);
    let m2 = (0.3 * flank2).min(BASE_MARGIN);
    if m1 < MIN_CLEARANCE || m2 < MIN_CLEARANCE {
        return None;
    }
    let gamma_floor = 0.5 * (span_min + m1 + m2);
    let gamma_max =
        (0.5 * (span_min + FLANK_CAP * (flank1 + flank2))).min(0.5 * MAX_WEDGE);
    if gamma_floor > gamma_max {
        return None;
    }
    Some(SideBounds {
        pendant: false,
        phi_first: phis[first],
        span_min,
        flank1,
        flank2,
        gamma_floor,
        gamma_max,
    })
}

fn build_wedge(sb: &SideBounds, gamma: f64) -> Wedge {
    if sb.pendant {
        return Wedge {
            g1: sb.phi_first - gamma,
            g2: sb.phi_first + gamma,
            clearance: 0.5 * sb.flank1 - gamma,
        };
    }
    let extra = (2.0 * gamma - sb.span_min).max(0.0);
    let mut m1 = extra * sb.flank1 / (sb.flank1 + sb.flank2);
    let mut m2 = extra - m1;
    let (c1, c2) = (FLANK_CAP * sb.flank1, FLANK_CAP * sb.flank2);
    if m1 > c1 {
        m2 = (m2 + (m1 - c1)).min(c2);
        m1 = c1;
    } else if m2 > c2 {
        m1 = (m1 + (m2 - c2)).min(c1);
        m2 = c2;
    }
    Wedge {
        g1: sb.phi_first - m1,
        g2: sb.phi_first + sb.span_min + m2,
        clearance: m1.min(m2).min((sb.flank1 - m1).min(sb.flank2 - m2)),
    }
}

/// Either side of the split works combinatorially (the two clones are
/// exchangeable), so pick the side whose flanking gaps are wider.
fn pick_side(
    phis: &[f64],
    a: usize,
    b: usize,
    gamma_needed: f64,
) -> Result<(Wedge, f64), ChipError> {
    let sides = [
        side_bounds(phis, a, b),
        if a == b { None } else { side_bounds(phis, b, a) },
    ];
    let pick = |sb: &SideBounds| -> Option<(Wedge, f64, f64)> {
        let want = gamma_needed + GAMMA_PAD;
        if want > sb.gamma_max {
            return None;
        }
        let gamma = want.max(sb.gamma_floor);
        let wedge = build_wedge(sb, gamma);
        if wedge.clearance < MIN_CLEARANCE {
            return None;
        }
        Some((wedge, gamma, sb.flank1.min(sb.flank2)))
    };
    let best = sides
        .iter()
        .flatten()
        .filter_map(pick)
        .max_by(|x, y| x.2.partial_cmp(&y.2).unwrap());
    match best {
        Some((wedge, gamma, _)) => Ok((wedge, gamma)),
        None => Err(ChipError::Degenerate(
            "no capture wedge clears the separatrix fan at this depth".into(),
        )),
    }
}

/// Radius of the sphere through `x` tangent at `p` to the plane with inward
/// normal `-n`; infinite when `x` does not drop below the tangent plane.
fn tangent_radius(x: Vec3, p: Vec3, n: Vec3, floor: f64) -> f64 {
    let d = x - p;
    let h = -d.dot(n);
    if h <= floor {
        f64::INFINITY
    } else {
        d.norm_squared() / (2.0 * h)
    }
}

/// The deepest kept vertex near `p`: the apex of the ground pocket.
fn pocket_apex(mesh: &TriMesh, w: Vec3, p: Vec3, radius: f64) -> Option<Vec3> {
    let mut best: Option<(f64, Vec3)> = None;
    for v in 0..mesh.n_vertices() {
        let x = mesh.position(v);
        if x.dist(p) > radius {
            continue;
        }
        let val = x.dist(w);
        if best.map_or(true, |(bv, _)| val < bv) {
            best = Some((val, x));
        }
    }
    best.map(|(_, x)| x)
}

/// Aperture half-opening needed so the foot of the facet plane stays
/// strictly interior to the facet: the offset of the viewpoint projection
/// scales with `|re - support|`, the facet radius with `sin(gamma)`.
fn gamma_needed_for(re: f64, support: f64) -> Result<f64, ChipError> {
    let s_needed = 2.0 * (re - support).abs() / re / SENSITIVITY_MARGIN;
    if s_needed > 0.98 {
        return Err(ChipError::NonGeneric(format!(
            "curvature spread needs aperture sine {s_needed:.3}, out of range"
        )));
    }
    Ok(s_needed.asin())
}

/// Where a cut lands: a support point `p` of `mesh` in direction `normal`
/// from `w`, with a tangent basis and a neighborhood radius for the local
/// curvature probes.  `p` need not be a mesh vertex (on a flat facet it is
/// the interior foot point).
struct CutSite<'a> {
    mesh: &'a TriMesh,
    w: Vec3,
    p: Vec3,
    dist: f64,
    normal: Vec3,
    e1: Vec3,
    e2: Vec3,
    near_radius: f64,
}

/// Ground-and-cut construction at a stable site.  `phis` are the stub
/// azimuths at the nominal reach; `reprobe` re-measures them at a larger
/// radius when the pocket rim extends past the reach.
fn realize_at(
    site: &CutSite,
    phis: &[f64],
    reprobe: &dyn Fn(f64) -> Result<Vec<f64>, ChipError>,
    a: usize,
    b: usize,
    depth: f64,
) -> Result<TriMesh, ChipError> {
    let mesh = site.mesh;
    let d_sup = site.dist;
    if depth >= 0.45 * d_sup {
        return Err(ChipError::Degenerate(
            "depth too large for the site support distance".into(),
        ));
    }
    let reach = (2.0 * d_sup * depth).sqrt();

    // Curvature probes: the tightest local radius bounds the ball from
    // above, the loosest radius over the far vertices bounds it from below
    // (the ball is the kept region, so far vertices must sit inside it).
    let scale = mesh.scale();
    let floor = 1e-9 * scale;
    let mut rho_tight = f64::INFINITY;
    let r_keep = LOCALITY_FACTOR * reach;
    let mut r_swallow: f64 = 0.0;
    for v in 0..mesh.n_vertices() {
        let x = mesh.position(v);
        let r = tangent_radius(x, site.p, site.normal, floor);
        if x.dist(site.p) <= site.near_radius && r.is_finite() {
            rho_tight = rho_tight.min(r);
        }
        if x.dist(site.p) > r_keep {
            r_swallow = r_swallow.max(r);
        }
    }

    let gamma_cap = (0.5 * MAX_WEDGE).sin();
    let lo = (d_sup * 1.001).max(r_swallow * 1.005);
    let hi = (0.98 * rho_tight).min(2.0 * d_sup / (2.0 - SENSITIVITY_MARGIN * gamma_cap));
    let h0 = SINK_FRACTION * depth;

    if lo < hi {
        // Bias the ball radius toward the small end of the window: the
        // smaller the ball, the smaller the aperture the facet needs.
        let r_ball = lo * (hi / lo).powf(0.25);
        let gamma_needed = gamma_needed_for(r_ball, d_sup)?;
        let q = site.p - site.normal * (r_ball + h0);
        let rho_for = rho_tight.min(1e9 * d_sup);
        let s_star = (2.0 * r_ball * h0 * rho_for / (rho_for - r_ball)).sqrt();
        let theta_rim = (s_star / r_ball).min(1.2);
        // The capture happens where the stubs enter the pocket rim, so the
        // azimuths must be probed there rather than at the facet reach.
        let rim_probe = (r_ball * theta_rim).min(0.8 * d_sup);
        let rim_phis;
        let phis = if rim_probe > reach {
            rim_phis = reprobe(rim_probe)?;
            &rim_phis[..]
        } else {
            phis
        };
        let (wedge, gamma) = pick_side(phis, a, b, gamma_needed)?;
        let theta_eps = (2.0 * depth / r_ball).sqrt().min(1.0);
        let r_c = theta_eps * gamma.sin() / (1.0 + gamma.sin());
        let bands = ((3.0 * theta_rim / r_c).ceil() as usize).clamp(8, 48);
        let cut = SphereCut {
            center: q,
            radius: r_ball,
        };
        let clipped = sphere_clip(mesh, &cut, bands)?;
        // Aim the facet cone at the vertex that actually survived as the
        // pocket apex; the nominal axis drifts with the patch sampling.
        let apex = pocket_apex(&clipped, site.w, site.p, r_keep.max(3.0 * s_star))
            .ok_or_else(|| ChipError::Degenerate("pocket apex not found".into()))?;
        let axis = (apex - q)
            .normalized()
            .ok_or_else(|| ChipError::Degenerate("pocket apex at ball center".into()))?;
        finish_plane_cut(&clipped, q, r_ball, axis, site, &wedge, gamma, depth)
    } else {
        // No admissible ball radius: cut the body directly, which is sound
        // only when the local curvature spread is already small enough.
        if !rho_tight.is_finite() {
            return Err(ChipError::NonGeneric(
                "no tangent-ball window and no finite local curvature".into(),
            ));
        }
        let gamma_needed = gamma_needed_for(rho_tight, d_sup)?;
        let (wedge, gamma) = pick_side(phis, a, b, gamma_needed)?;
        let qe = site.p - site.normal * rho_tight;
        finish_plane_cut(mesh, qe, rho_tight, site.normal, site, &wedge, gamma, depth)
    }
}

/// Cut the facet: the incircle of the wedge on the effective sphere
/// `(qe, re)`, tilted off `axis` toward the wedge bisector so that the disk
/// touches both wedge rays at the depth contour.
#[allow(clippy::too_many_arguments)]
fn finish_plane_cut(
    work: &TriMesh,
    qe: Vec3,
    re: f64,
    axis: Vec3,
    site: &CutSite,
    wedge: &Wedge,
    gamma: f64,
    depth: f64,
) -> Result<TriMesh, ChipError> {
    let sin_g = gamma.sin();
    let theta_eps = (2.0 * depth / re).sqrt().min(0.5);
    let theta_c = theta_eps / (1.0 + sin_g);
    let r_c = theta_eps * sin_g / (1.0 + sin_g);
    let beta = 0.5 * (wedge.g1 + wedge.g2);
    let e_beta = site.e1 * beta.cos() + site.e2 * beta.sin();
    let e_beta = (e_beta - axis * e_beta.dot(axis))
        .normalized()
        .ok_or_else(|| ChipError::Degenerate("wedge bisector parallel to the axis".into()))?;
    let c_hat = axis * theta_c.cos() + e_beta * theta_c.sin();
    let cut = PlaneCut {
        normal: c_hat,
        offset: c_hat.dot(qe) + re * r_c.cos(),
    };
    plane_clip(work, &cut)
}

/// Carry out the cut construction for a stable target on `mesh`.
fn realize_stable_on(
    mesh: &TriMesh,
    w: Vec3,
    ms: &MsComplex,
    target: usize,
    a: usize,
    b: usize,
    depth: f64,
) -> Result<TriMesh, ChipError> {
    let pv = ms.correspondence.primal_of_quasi[target];
    let vm = ms.mesh_vertex[pv];
    let p = mesh.position(vm);
    let dist = p.dist(w);
    let normal = (p - w)
        .normalized()
        .ok_or_else(|| ChipError::Degenerate("target coincides with the viewpoint".into()))?;
    let (e1, e2) = orthonormal_basis(normal);
    // Local scale from the second neighborhood of the target vertex.
    let mut near_radius: f64 = 0.0;
    for &u in mesh.ring(vm) {
        for &v2 in mesh.ring(u) {
            near_radius = near_radius.max(mesh.position(v2).dist(p));
        }
    }
    let site = CutSite {
        mesh,
        w,
        p,
        dist,
        normal,
        e1,
        e2,
        near_radius: 1.2 * near_radius,
    };
    let reach = (2.0 * dist * depth).sqrt();
    let phis = stub_azimuths(mesh, ms, target, reach, e1, e2)?;
    let reprobe = |r: f64| stub_azimuths(mesh, ms, target, r, e1, e2);
    realize_at(&site, &phis, &reprobe, a, b, depth)
}

/// Realize a split at an unstable target through the polar dual.  The dual
/// facet of the target vertex is flat with its foot at `w + normal / dist`;
/// its separatrix fan points toward the duals of the same saddles, so the
/// primal stub azimuths place the wedge on the dual side directly.
fn realize_unstable(
    mesh: &TriMesh,
    w: Vec3,
    ms: &MsComplex,
    target: usize,
    a: usize,
    b: usize,
    depth: f64,
) -> Result<TriMesh, ChipError> {
    let dual = polar_dual(mesh, w)?;
    let pv = ms.correspondence.primal_of_quasi[target];
    let p = mesh.position(ms.mesh_vertex[pv]);
    let dist = p.dist(w);
    let normal = (p - w)
        .normalized()
        .ok_or_else(|| ChipError::Degenerate("target coincides with the viewpoint".into()))?;
    let (e1, e2) = orthonormal_basis(normal);
    let d_star = 1.0 / dist;
    let p_star = w + normal * d_star;
    let depth_dual = depth * d_star / dist;
    let site = CutSite {
        mesh: &dual,
        w,
        p: p_star,
        dist: d_star,
        normal,
        e1,
        e2,
        near_radius: 0.25 * d_star,
    };
    // Angular scales agree between the two sides, so a dual probe radius
    // maps back to the primal at the ratio of the support distances.
    let reach = (2.0 * dist * depth).sqrt();
    let phis = stub_azimuths(mesh, ms, target, reach, e1, e2)?;
    let reprobe = |r: f64| stub_azimuths(mesh, ms, target, r * dist / d_star, e1, e2);
    let clipped_dual = realize_at(&site, &phis, &reprobe, a, b, depth_dual)?;
    polar_dual(&clipped_dual, w)
}
