//! Analytic reference solver for the distance field on a triaxial
//! ellipsoid: exact critical points, principal curvatures and focal
//! (caustic) points, and location of the signature changes as the
//! reference point travels across the caustic surfaces.
//!
//! A point `x` on the ellipsoid is critical for `|x - w|` exactly when
//! `x - w` is parallel to the surface normal, which written out per
//! coordinate gives `x_i = w_i a_i^2 / (a_i^2 - lambda)` for a scalar
//! `lambda`.  Substituting into the surface equation turns the problem
//! into root isolation of
//!
//! ```text
//! g(lambda) = sum_i  w_i^2 a_i^2 / (a_i^2 - lambda)^2  -  1
//! ```
//!
//! which is strictly convex on every interval between its poles, so every
//! interval carries zero, one (simple, by monotonicity on the outer
//! intervals) or two roots, all findable by bisection.  Coordinates with
//! `w_i = 0` instead allow `lambda = a_i^2` with `x_i` free, producing the
//! familiar axis-endpoint equilibria of a centered weight.

use thiserror::Error;

use crate::geometry::{orthonormal_basis, Vec3};
use crate::quad_ms::{Signature, VertexKind};

/// Absolute tolerances, calibrated for unit-scale semi-axes.
/// Surface membership for externally supplied points.
const ON_SURFACE_TOL: f64 = 1e-7;
/// A restricted-Hessian eigenvalue this close to zero means the reference
/// point sits on a caustic sheet.
const DEGENERATE_TOL: f64 = 1e-9;
/// A root-pair birth margin this small (minimum of `g`, or the squared
/// free coordinate of an axis family) also counts as on-caustic.
const BIRTH_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum EllipsoidError {
    #[error("semi-axes must satisfy a > b > c > 0")]
    Axes,
    #[error("reference point lies on a caustic sheet: {0}")]
    OnCaustic(String),
    #[error("point is not on the ellipsoid surface (residual {0:.3e})")]
    NotOnSurface(f64),
    #[error("root isolation failed: {0}")]
    RootIsolation(String),
}

/// A critical point of the distance field `|x - w|` on the surface.
#[derive(Debug, Clone, Copy)]
pub struct CriticalPoint {
    pub position: Vec3,
    pub kind: VertexKind,
    /// Distance from the reference point.
    pub value: f64,
    /// The normal-line parameter: `x_i (a_i^2 - lambda) = w_i a_i^2`.
    pub lambda: f64,
}

/// One signature change along a straight path of the reference point.
#[derive(Debug, Clone, Copy)]
pub struct Transition {
    /// Path parameter in `[0, 1]`.
    pub parameter: f64,
    pub before: Signature,
    pub after: Signature,
}

/// A triaxial ellipsoid `x^2/a^2 + y^2/b^2 + z^2/c^2 = 1` with strictly
/// ordered semi-axes `a > b > c > 0`.
#[derive(Debug, Clone, Copy)]
pub struct Ellipsoid {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Ellipsoid {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self, EllipsoidError> {
        if !(a > b && b > c && c > 0.0) {
            return Err(EllipsoidError::Axes);
        }
        Ok(Ellipsoid { a, b, c })
    }

    fn axes(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    fn coord(p: Vec3, i: usize) -> f64 {
        match i {
            0 => p.x,
            1 => p.y,
            _ => p.z,
        }
    }

    /// `sum x_i^2 / a_i^2 - 1`; zero on the surface.
    pub fn surface_residual(&self, p: Vec3) -> f64 {
        let al = self.axes();
        (0..3).map(|i| (Self::coord(p, i) / al[i]).powi(2)).sum::<f64>() - 1.0
    }

    /// Outward normal direction (not unit): gradient of the quadric, halved.
    pub fn normal_dir(&self, p: Vec3) -> Vec3 {
        Vec3::new(p.x / (self.a * self.a), p.y / (self.b * self.b), p.z / (self.c * self.c))
    }

    /// Principal curvatures at a surface point, largest first (both are
    /// positive: the surface is convex).
    pub fn principal_curvatures(&self, p: Vec3) -> Result<(f64, f64), EllipsoidError> {
        let res = self.surface_residual(p);
        if res.abs() > ON_SURFACE_TOL {
            return Err(EllipsoidError::NotOnSurface(res));
        }
        let grad = self.normal_dir(p);
        let scale = grad.norm();
        let n = grad / scale;
        let (t1, t2) = orthonormal_basis(n);
        // Shape operator = tangential part of diag(1/a_i^2) / |grad|.
        let d = |v: Vec3| {
            Vec3::new(v.x / (self.a * self.a), v.y / (self.b * self.b), v.z / (self.c * self.c))
        };
        let m11 = t1.dot(d(t1)) / scale;
        let m12 = t1.dot(d(t2)) / scale;
        let m22 = t2.dot(d(t2)) / scale;
        let mean = 0.5 * (m11 + m22);
        let disc = (0.25 * (m11 - m22) * (m11 - m22) + m12 * m12).sqrt();
        Ok((mean + disc, mean - disc))
    }

    /// The two centers of principal curvature of a surface point, nearest
    /// sheet (largest curvature) first.  These sweep out the two caustic
    /// sheets as the point moves over the surface.
    pub fn focal_points(&self, p: Vec3) -> Result<(Vec3, Vec3), EllipsoidError> {
        let (k1, k2) = self.principal_curvatures(p)?;
        let n = self.normal_dir(p).unit();
        Ok((p - n / k1, p - n / k2))
    }

    /// All critical points of `|x - w|` on the surface, sorted by the
    /// normal-line parameter (ties by position).  The reference point may
    /// lie anywhere off the caustic surfaces, inside or outside the body.
    pub fn critical_points(&self, w: Vec3) -> Result<Vec<CriticalPoint>, EllipsoidError> {
        let solved = self.solve(w)?;
        if let Some(reason) = solved.degenerate {
            return Err(EllipsoidError::OnCaustic(reason));
        }
        Ok(solved.points)
    }

    /// Signature of the critical point set.
    pub fn signature(&self, w: Vec3) -> Result<Signature, EllipsoidError> {
        Ok(count_kinds(&self.critical_points(w)?))
    }

    /// Locate every signature change along the straight path
    /// `w(s) = start + s (end - start)`, `s` in `[0, 1]`, by scanning and
    /// bisection.  Endpoints must be generic; changes closer together than
    /// the scan resolution (1/512 of the path) may be missed.
    pub fn caustic_transitions(
        &self,
        start: Vec3,
        end: Vec3,
    ) -> Result<Vec<Transition>, EllipsoidError> {
        const SCAN: usize = 512;
        let at = |s: f64| start + (end - start) * s;
        // Strict endpoint checks; interior samples classify leniently.
        self.critical_points(start)?;
        self.critical_points(end)?;
        let sig = |s: f64| -> Signature {
            count_kinds(&self.solve(at(s)).expect("interval solve is total").points)
        };

        let mut out = Vec::new();
        let mut prev_s = 0.0;
        let mut prev_sig = sig(0.0);
        for i in 1..=SCAN {
            let cur_s = i as f64 / SCAN as f64;
            let cur_sig = sig(cur_s);
            if cur_sig != prev_sig {
                let (mut lo, mut hi) = (prev_s, cur_s);
                let (lo_sig, mut hi_sig) = (prev_sig, cur_sig);
                while hi - lo > 1e-9 {
                    let mid = 0.5 * (lo + hi);
                    let mid_sig = sig(mid);
                    if mid_sig == lo_sig {
                        lo = mid;
                    } else {
                        hi = mid;
                        hi_sig = mid_sig;
                    }
                }
                out.push(Transition {
                    parameter: 0.5 * (lo + hi),
                    before: lo_sig,
                    after: hi_sig,
                });
            }
            prev_s = cur_s;
            prev_sig = cur_sig;
        }
        Ok(out)
    }

    /// Core solver; `degenerate` reports the first on-caustic symptom
    /// instead of failing, so path bisection can keep classifying.
    fn solve(&self, w: Vec3) -> Result<Solved, EllipsoidError> {
        let al = self.axes();
        let al2: Vec<f64> = al.iter().map(|a| a * a).collect();
        let wv = [w.x, w.y, w.z];
        let present: Vec<usize> = (0..3).filter(|&i| wv[i] != 0.0).collect();
        let mut degenerate: Option<String> = None;
        let mut points: Vec<CriticalPoint> = Vec::new();

        // Families with lambda pinned at a squared axis of a vanishing
        // coordinate: the remaining coordinates are forced, and the free
        // one takes both signs of whatever the surface equation leaves.
        for &j in (0..3).filter(|j| wv[*j] == 0.0).collect::<Vec<_>>().iter() {
            let lambda = al2[j];
            let mut x = [0.0; 3];
            let mut used = 0.0;
            for &i in &present {
                x[i] = wv[i] * al2[i] / (al2[i] - lambda);
                used += x[i] * x[i] / al2[i];
            }
            let q = 1.0 - used;
            if q.abs() <= BIRTH_TOL {
                degenerate
                    .get_or_insert_with(|| format!("axis family {j} at its birth circle"));
                continue;
            }
            if q < 0.0 {
                continue;
            }
            let free = al[j] * q.sqrt();
            for sign in [1.0, -1.0] {
                x[j] = sign * free;
                let pos = Vec3::new(x[0], x[1], x[2]);
                points.push(self.classify(pos, w, lambda, &mut degenerate));
            }
        }

        // Generic roots of g between (and beyond) the poles of the present
        // coordinates.
        let g = |lam: f64| -> f64 {
            present.iter().map(|&i| (wv[i] * al[i] / (al2[i] - lam)).powi(2)).sum::<f64>() - 1.0
        };
        let dg = |lam: f64| -> f64 {
            present
                .iter()
                .map(|&i| 2.0 * wv[i] * wv[i] * al2[i] / (al2[i] - lam).powi(3))
                .sum::<f64>()
        };
        let mut poles: Vec<f64> = present.iter().map(|&i| al2[i]).collect();
        poles.sort_by(|x, y| x.partial_cmp(y).unwrap());
        poles.dedup();
        let mut lambdas: Vec<f64> = Vec::new();
        if !poles.is_empty() {
            let span = al2[0] + 1.0;
            // Outer intervals: g is monotone toward its limit of -1.
            let lo_anchor = outward_anchor(&g, poles[0], -span);
            let lo_inner = inward_anchor(&g, &dg, poles[0], -1.0);
            lambdas.push(bisect_root(&g, lo_anchor, lo_inner));
            let hi_anchor = outward_anchor(&g, poles[poles.len() - 1], span);
            let hi_inner = inward_anchor(&g, &dg, poles[poles.len() - 1], 1.0);
            lambdas.push(bisect_root(&g, hi_anchor, hi_inner));
            // Bounded intervals: g is strictly convex, so the minimum
            // (located through the increasing derivative) decides between
            // zero and two roots.
            for k in 0..poles.len() - 1 {
                let left = inward_anchor(&g, &dg, poles[k], 1.0);
                let right = inward_anchor(&g, &dg, poles[k + 1], -1.0);
                if left >= right {
                    return Err(EllipsoidError::RootIsolation(format!(
                        "cannot separate poles {} and {}",
                        poles[k],
                        poles[k + 1]
                    )));
                }
                let valley = bisect_root(&dg, left, right);
                let depth = g(valley);
                if depth.abs() <= BIRTH_TOL {
                    degenerate.get_or_insert_with(|| {
                        format!("double root of the normal-line equation near lambda {valley}")
                    });
                    continue;
                }
                if depth < 0.0 {
                    lambdas.push(bisect_root(&g, left, valley));
                    lambdas.push(bisect_root(&g, valley, right));
                }
            }
        }
        for lambda in lambdas {
            let mut x = [0.0; 3];
            for &i in &present {
                x[i] = wv[i] * al2[i] / (al2[i] - lambda);
            }
            let pos = Vec3::new(x[0], x[1], x[2]);
            points.push(self.classify(pos, w, lambda, &mut degenerate));
        }

        points.sort_by(|p, q| {
            (p.lambda, p.position.x, p.position.y, p.position.z)
                .partial_cmp(&(q.lambda, q.position.x, q.position.y, q.position.z))
                .unwrap()
        });
        Ok(Solved { points, degenerate })
    }

    /// Classify a critical point by the sign pattern of the restricted
    /// second form: eigenvalues are proportional to `1 - s r k_i` with
    /// `r` the distance, `k_i` the principal curvatures, and `s` the side
    /// of the surface the reference point sees (sign of lambda).
    fn classify(
        &self,
        pos: Vec3,
        w: Vec3,
        lambda: f64,
        degenerate: &mut Option<String>,
    ) -> CriticalPoint {
        let (k1, k2) = self
            .principal_curvatures(pos)
            .expect("solver output lies on the surface");
        let r = (pos - w).norm();
        let s = if lambda >= 0.0 { 1.0 } else { -1.0 };
        let mu1 = 1.0 - s * r * k1;
        let mu2 = 1.0 - s * r * k2;
        if mu1.abs() <= DEGENERATE_TOL || mu2.abs() <= DEGENERATE_TOL {
            degenerate.get_or_insert_with(|| {
                format!("degenerate second form at ({}, {}, {})", pos.x, pos.y, pos.z)
            });
        }
        let kind = match (mu1 > 0.0, mu2 > 0.0) {
            (true, true) => VertexKind::Stable,
            (false, false) => VertexKind::Unstable,
            _ => VertexKind::Saddle,
        };
        CriticalPoint { position: pos, kind, value: r, lambda }
    }
}

struct Solved {
    points: Vec<CriticalPoint>,
    degenerate: Option<String>,
}

fn count_kinds(points: &[CriticalPoint]) -> Signature {
    let mut sig = Signature::new(0, 0, 0);
    for p in points {
        match p.kind {
            VertexKind::Stable => sig.stable += 1,
            VertexKind::Unstable => sig.unstable += 1,
            VertexKind::Saddle => sig.saddle += 1,
        }
    }
    sig
}

/// Walk away from `pole` (by `step`, doubling) until `g` has settled below
/// zero; `g` tends to -1 in that direction.
fn outward_anchor(g: &dyn Fn(f64) -> f64, pole: f64, step: f64) -> f64 {
    let mut offset = step;
    for _ in 0..200 {
        if g(pole + offset) < 0.0 {
            return pole + offset;
        }
        offset *= 2.0;
    }
    unreachable!("g tends to -1 away from all poles")
}

/// Walk toward `pole` from inside the adjacent interval until both `g` is
/// positive and `g` is still sloping away from the pole, i.e. the point is
/// on the pole side of both the roots and the valley.  `side` is +1 when
/// the interval lies right of the pole.
fn inward_anchor(
    g: &dyn Fn(f64) -> f64,
    dg: &dyn Fn(f64) -> f64,
    pole: f64,
    side: f64,
) -> f64 {
    let mut offset = side * 0.25;
    for _ in 0..2000 {
        let lam = pole + offset;
        let slope_ok = if side > 0.0 { dg(lam) < 0.0 } else { dg(lam) > 0.0 };
        if g(lam) > 0.0 && slope_ok {
            return lam;
        }
        offset *= 0.5;
    }
    unreachable!("g blows up at its poles")
}

/// Plain bisection of a sign change of `f` between `lo` and `hi`, run to
/// floating-point exhaustion.
fn bisect_root(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let (mut lo, mut hi) = (lo, hi);
    let neg_lo = f(lo) < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo.min(hi) || mid >= lo.max(hi) {
            break;
        }
        if (f(mid) < 0.0) == neg_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::ms_complex::extract_ms_complex;
    use crate::mesh::shapes;

    const TOL: f64 = 1e-10;

    fn body() -> Ellipsoid {
        Ellipsoid::new(1.0, 0.8, 0.6).unwrap()
    }

    /// Angle residual of the parallelism condition between `x - w` and the
    /// surface normal.
    fn lagrange_residual(e: &Ellipsoid, p: &CriticalPoint, w: Vec3) -> f64 {
        let u = p.position - w;
        let n = e.normal_dir(p.position);
        u.cross(n).norm() / (u.norm() * n.norm())
    }

    #[test]
    fn axes_must_be_strictly_ordered() {
        assert_eq!(Ellipsoid::new(1.0, 1.0, 0.6).unwrap_err(), EllipsoidError::Axes);
        assert_eq!(Ellipsoid::new(0.6, 0.8, 1.0).unwrap_err(), EllipsoidError::Axes);
        assert_eq!(Ellipsoid::new(1.0, 0.8, -0.6).unwrap_err(), EllipsoidError::Axes);
    }

    #[test]
    fn centered_weight_finds_the_six_axis_endpoints() {
        let e = body();
        let pts = e.critical_points(Vec3::ZERO).unwrap();
        assert_eq!(pts.len(), 6);
        assert_eq!(e.signature(Vec3::ZERO).unwrap(), Signature::new(2, 2, 2));
        for p in &pts {
            let pos = p.position;
            let on_axis = [
                (Vec3::new(1.0, 0.0, 0.0), VertexKind::Unstable, 1.0),
                (Vec3::new(0.0, 0.8, 0.0), VertexKind::Saddle, 0.8),
                (Vec3::new(0.0, 0.0, 0.6), VertexKind::Stable, 0.6),
            ]
            .iter()
            .any(|&(axis, kind, value)| {
                ((pos - axis).norm() < 1e-8 || (pos + axis).norm() < 1e-8)
                    && p.kind == kind
                    && (p.value - value).abs() < 1e-8
            });
            assert!(on_axis, "unexpected critical point at {pos:?}");
        }
    }

    #[test]
    fn every_critical_point_satisfies_the_parallelism_condition() {
        let e = body();
        for w in [
            Vec3::new(0.2, 0.1, 0.05),
            Vec3::new(-0.31, 0.22, 0.11),
            Vec3::new(0.05, -0.03, 0.4),
            Vec3::new(0.55, 0.21, -0.08),
        ] {
            let pts = e.critical_points(w).unwrap();
            let sig = count_kinds(&pts);
            assert_eq!(sig.stable + sig.unstable, sig.saddle + 2, "at {w:?}");
            assert!(pts.len() == 2 || pts.len() == 4 || pts.len() == 6);
            for p in &pts {
                assert!(e.surface_residual(p.position).abs() < 1e-12);
                assert!(lagrange_residual(&e, p, w) < TOL, "residual at {:?}", p.position);
            }
        }
    }

    #[test]
    fn classification_matches_a_finite_difference_hessian() {
        let e = body();
        let project = |y: Vec3| {
            let rho = (y.x / e.a).powi(2) + (y.y / e.b).powi(2) + (y.z / e.c).powi(2);
            y / rho.sqrt()
        };
        for w in [Vec3::new(0.2, 0.1, 0.05), Vec3::new(-0.31, 0.22, 0.11)] {
            for p in e.critical_points(w).unwrap() {
                let n = e.normal_dir(p.position).unit();
                let (t1, t2) = orthonormal_basis(n);
                let h = 1e-4;
                let f = |u: f64, v: f64| (project(p.position + t1 * u + t2 * v) - w).norm();
                let f00 = f(0.0, 0.0);
                let huu = (f(h, 0.0) + f(-h, 0.0) - 2.0 * f00) / (h * h);
                let hvv = (f(0.0, h) + f(0.0, -h) - 2.0 * f00) / (h * h);
                let huv =
                    (f(h, h) + f(-h, -h) - f(h, -h) - f(-h, h)) / (4.0 * h * h);
                let mean = 0.5 * (huu + hvv);
                let disc = (0.25 * (huu - hvv) * (huu - hvv) + huv * huv).sqrt();
                let (e1, e2) = (mean + disc, mean - disc);
                assert!(e1.abs() > 1e-4 && e2.abs() > 1e-4, "test point too degenerate");
                let expected = match (e1 > 0.0, e2 > 0.0) {
                    (true, true) => VertexKind::Stable,
                    (false, false) => VertexKind::Unstable,
                    _ => VertexKind::Saddle,
                };
                assert_eq!(p.kind, expected, "at {:?}", p.position);
            }
        }
    }

    #[test]
    fn short_axis_weight_walks_through_both_caustic_sheets() {
        let e = body();
        // Curvature centers of the far short-axis endpoint: the signature
        // loses a pair each time the weight passes one.
        let t1 = (e.b * e.b - e.c * e.c) / e.c;
        let t2 = (e.a * e.a - e.c * e.c) / e.c;
        assert!((t1 - 0.28 / 0.6).abs() < 1e-12);
        assert!((t2 - 0.64 / 0.6).abs() < 1e-12);
        let sig = |t: f64| e.signature(Vec3::new(0.0, 0.0, t)).unwrap();
        assert_eq!(sig(0.3), Signature::new(2, 2, 2));
        assert_eq!(sig(0.7), Signature::new(1, 2, 1));
        assert_eq!(sig(1.2), Signature::new(1, 1, 0));
    }

    #[test]
    fn long_axis_weight_walks_through_both_caustic_sheets() {
        let e = body();
        let t1 = (e.a * e.a - e.b * e.b) / e.a;
        let t2 = (e.a * e.a - e.c * e.c) / e.a;
        assert!((t1 - 0.36).abs() < 1e-12);
        assert!((t2 - 0.64).abs() < 1e-12);
        let sig = |t: f64| e.signature(Vec3::new(t, 0.0, 0.0)).unwrap();
        assert_eq!(sig(0.2), Signature::new(2, 2, 2));
        assert_eq!(sig(0.5), Signature::new(2, 1, 1));
        assert_eq!(sig(0.8), Signature::new(1, 1, 0));
    }

    #[test]
    fn transition_parameters_match_the_focal_points() {
        let e = body();
        // The z-axis pierces the caustic sheets at the curvature centers
        // of the south pole.
        let (f1, f2) = e.focal_points(Vec3::new(0.0, 0.0, -e.c)).unwrap();
        assert!((f1.z - (e.b * e.b - e.c * e.c) / e.c).abs() < 1e-12);
        assert!((f2.z - (e.a * e.a - e.c * e.c) / e.c).abs() < 1e-12);

        let (start, end) = (Vec3::new(0.0, 0.0, 0.7), Vec3::new(0.0, 0.0, 1.2));
        let trans = e.caustic_transitions(start, end).unwrap();
        assert_eq!(trans.len(), 1);
        let t = trans[0];
        let crossing_z = start.z + t.parameter * (end.z - start.z);
        assert!((crossing_z - f2.z).abs() < 1e-6, "crossing at {crossing_z}");
        assert_eq!(t.before, Signature::new(1, 2, 1));
        assert_eq!(t.after, Signature::new(1, 1, 0));
        // A maximum and a saddle annihilate: U and H both drop by one.
        assert_eq!(t.before.unstable - t.after.unstable, 1);
        assert_eq!(t.before.saddle - t.after.saddle, 1);

        // The inner sheet crossing pairs a minimum with a saddle instead.
        let trans = e
            .caustic_transitions(Vec3::new(0.0, 0.0, 0.3), Vec3::new(0.0, 0.0, 0.7))
            .unwrap();
        assert_eq!(trans.len(), 1);
        let t = trans[0];
        let crossing_z = 0.3 + t.parameter * 0.4;
        assert!((crossing_z - f1.z).abs() < 1e-6);
        assert_eq!(t.before, Signature::new(2, 2, 2));
        assert_eq!(t.after, Signature::new(1, 2, 1));
    }

    #[test]
    fn generic_paths_report_every_crossing_in_order() {
        let e = body();
        let trans = e
            .caustic_transitions(Vec3::new(0.05, 0.02, 0.01), Vec3::new(0.05, 0.02, 1.3))
            .unwrap();
        assert_eq!(trans.len(), 2);
        assert!(trans[0].parameter < trans[1].parameter);
        assert_eq!(trans[0].before, Signature::new(2, 2, 2));
        assert_eq!(trans[1].after, Signature::new(1, 1, 0));
        for t in &trans {
            let drop = (t.before.extrema() + t.before.saddle)
                - (t.after.extrema() + t.after.saddle);
            assert_eq!(drop, 2, "each crossing annihilates one pair");
        }
    }

    #[test]
    fn on_caustic_weight_is_rejected() {
        let e = body();
        let t1 = (e.b * e.b - e.c * e.c) / e.c;
        let err = e.critical_points(Vec3::new(0.0, 0.0, t1)).unwrap_err();
        assert!(matches!(err, EllipsoidError::OnCaustic(_)));
    }

    #[test]
    fn discrete_extraction_agrees_with_the_analytic_signature() {
        let e = body();
        for w in [Vec3::ZERO, Vec3::new(0.0, 0.0, 0.55), Vec3::new(0.5, 0.0, 0.0)] {
            let analytic = e.signature(w).unwrap();
            let mesh = shapes::ellipsoid_mesh(e.a, e.b, e.c, 4);
            let ms = extract_ms_complex(&mesh, w).unwrap();
            assert_eq!(ms.quasi.signature(), analytic, "at {w:?}");
        }
    }
}
