//! Discrete analysis of the support distance field on a closed mesh:
//! critical vertices, steepest separatrices, and the resulting cell
//! decomposition of the surface, exported as a labeled complex.
//!
//! The field is `|x - w|` sampled at mesh vertices.  Ties are broken by
//! vertex index, so every comparison is strict and every vertex is either
//! regular or critical; a vertex whose ring splits into `m >= 2` lower
//! arcs counts as `m - 1` simple saddles and is unfolded into that many
//! copies before assembly.

use std::cmp::Ordering;
use std::collections::HashMap;

use thiserror::Error;

use crate::geometry::Vec3;
use crate::quad_ms::convert::{primal_to_quasi_with_maps, QuasiCorrespondence};
use crate::quad_ms::{PrimalComplex, QuadComplex, VertexKind};
use crate::surface_map::{MapBuilder, RotationSystem};

use super::TriMesh;

#[derive(Debug, Error)]
pub enum MsError {
    /// The traced separatrices do not assemble into a sphere decomposition.
    /// This can only happen when unfolded multiple saddles overlap in a way
    /// that leaves their cyclic order underdetermined.
    #[error("separatrices do not assemble into a valid complex: {0}")]
    Structure(String),
}

/// The cell decomposition induced by the distance field of a weight point,
/// in both the saddle-carrying and the quadrangulation picture, together
/// with everything tying it back to the mesh.
#[derive(Debug)]
pub struct MsComplex {
    pub primal: PrimalComplex,
    pub quasi: QuadComplex,
    pub correspondence: QuasiCorrespondence,
    /// Primal vertex -> the mesh vertex it sits on.
    pub mesh_vertex: Vec<usize>,
    /// Primal vertex -> field value there.
    pub value: Vec<f64>,
    /// Primal edge -> its path on the mesh, saddle end first (for the
    /// saddle-free base complex: from the maximum down to the minimum).
    pub separatrices: Vec<Vec<usize>>,
    /// Quadrangulation face -> the primal saddle it carries (`None` only
    /// for the saddle-free base complex).
    pub saddle_of_quasi_face: Vec<Option<usize>>,
}

impl MsComplex {
    /// Field value at a quadrangulation vertex.
    pub fn quasi_vertex_value(&self, j: usize) -> f64 {
        self.value[self.correspondence.primal_of_quasi[j]]
    }

    /// Field value at the saddle carried by a quadrangulation face.
    pub fn quasi_face_value(&self, f: usize) -> Option<f64> {
        self.saddle_of_quasi_face[f].map(|s| self.value[s])
    }
}

/// Strict total order on vertices: by field value, ties by index.
fn below(f: &[f64], a: usize, b: usize) -> bool {
    f[a] < f[b] || (f[a] == f[b] && a < b)
}

/// Maximal runs of equal mask value around a ring, in ring order starting
/// at a run boundary; a uniform mask is a single run.
fn cyclic_runs(mask: &[bool], ring: &[usize]) -> Vec<(bool, Vec<usize>)> {
    let n = mask.len();
    let start = match (0..n).find(|&i| mask[i] != mask[(i + n - 1) % n]) {
        Some(i) => i,
        None => return vec![(mask[0], ring.to_vec())],
    };
    let mut runs = Vec::new();
    let mut i = start;
    loop {
        let val = mask[i];
        let mut members = Vec::new();
        while mask[i] == val {
            members.push(ring[i]);
            i = (i + 1) % n;
            if i == start {
                break;
            }
        }
        runs.push((val, members));
        if i == start {
            return runs;
        }
    }
}

/// Steepest vertex among candidates (lowest for descents, highest for
/// ascents), under the strict tie-broken order.
fn steepest(f: &[f64], cands: &[usize], descending: bool) -> usize {
    let mut best = cands[0];
    for &c in &cands[1..] {
        let better = if descending { below(f, c, best) } else { below(f, best, c) };
        if better {
            best = c;
        }
    }
    best
}

/// Routing table of one saddle vertex: the ring positions of its arc
/// entries ("stubs"), in cyclic arc order.  A monotone path that runs over
/// the vertex must leave alongside a stub of the sector it arrives in, or
/// it would cross one of the saddle's own separatrices.
struct SaddleTable {
    stub_pos: Vec<usize>,
    stub_lower: Vec<bool>,
    stub_target: Vec<usize>,
    ring_len: usize,
}

impl SaddleTable {
    /// Index of the last stub at or counterclockwise-before the arrival
    /// position (the sector boundary the arrival direction belongs to).
    fn sector_floor(&self, arrival_pos: usize) -> usize {
        let l = self.ring_len;
        (0..self.stub_pos.len())
            .min_by_key(|&j| (arrival_pos + l - self.stub_pos[j]) % l)
            .unwrap()
    }

    /// Next vertex for a monotone path arriving from the given ring
    /// position: the entry of the matching-direction arc bounding the
    /// arrival sector.
    fn route(&self, arrival_pos: usize, descending: bool) -> usize {
        let j = self.sector_floor(arrival_pos);
        let k = if self.stub_lower[j] == descending { j } else { (j + 1) % self.stub_pos.len() };
        self.stub_target[k]
    }
}

/// Is ring position `x` strictly inside the counterclockwise interval
/// from `lo` to `hi`?
fn strictly_inside(lo: usize, x: usize, hi: usize, l: usize) -> bool {
    let span = (hi + l - lo) % l;
    let off = (x + l - lo) % l;
    0 < off && off < span
}

/// Monotone path from a saddle through `entry`, extended until it hits a
/// vertex with no strictly lower (resp. higher) neighbor.  Over regular
/// vertices it takes the steepest step; over other saddle vertices it is
/// routed around the pinch by its arrival sector.
fn trace(
    mesh: &TriMesh,
    f: &[f64],
    tables: &HashMap<usize, SaddleTable>,
    start: usize,
    entry: usize,
    descending: bool,
) -> Vec<usize> {
    let mut path = vec![start, entry];
    loop {
        let u = *path.last().unwrap();
        if let Some(tbl) = tables.get(&u) {
            let prev = path[path.len() - 2];
            let ap = mesh.ring(u).iter().position(|&r| r == prev).unwrap();
            path.push(tbl.route(ap, descending));
        } else {
            let next = steepest(f, mesh.ring(u), descending);
            let done = if descending { !below(f, next, u) } else { !below(f, u, next) };
            if done {
                return path;
            }
            path.push(next);
        }
    }
}

/// Ascending path from a saddle through `entry`, traced after every
/// descending separatrix is known.  Steepest ascent and steepest descent
/// paths can otherwise cross at a shared vertex, which no cyclic order at
/// the endpoints can embed.  An ascending path therefore treats the
/// descending paths as walls: it may ride along them, but when its
/// steepest step would cross one (or a separatrix stub of a saddle it
/// runs over) it instead climbs the blocking wall, remembering which
/// flank it is on, and peels off at the first vertex where the steepest
/// step falls back inside its own wedge.
fn trace_ascending(
    mesh: &TriMesh,
    f: &[f64],
    tables: &HashMap<usize, SaddleTable>,
    walls: &HashMap<usize, Vec<usize>>,
    start: usize,
    entry: usize,
) -> Vec<usize> {
    let on_wall = |v: usize, t: usize| {
        walls.get(&v).is_some_and(|dirs| {
            let p = mesh.ring(v).iter().position(|&r| r == t).unwrap();
            dirs.binary_search(&p).is_ok()
        })
    };
    // A stub whose first edge doubles as a wall keeps the descending
    // river on the flank fixed by that river's rounding of the saddle,
    // which lands the climb on the counterclockwise flank one step up.
    let mut lane: Option<bool> = if on_wall(start, entry) { Some(true) } else { None };
    let mut path = vec![start, entry];
    loop {
        let v = *path.last().unwrap();
        let prev = path[path.len() - 2];
        let ring = mesh.ring(v);
        let l = ring.len();
        if ring.iter().all(|&r| below(f, r, v)) {
            return path;
        }
        let pos = |t: usize| ring.iter().position(|&r| r == t).unwrap();
        let pe = pos(prev);
        let mut bounds: Vec<usize> = walls.get(&v).cloned().unwrap_or_default();
        if let Some(tbl) = tables.get(&v) {
            bounds.extend_from_slice(&tbl.stub_pos);
            bounds.sort_unstable();
            bounds.dedup();
        }
        let px = pos(steepest(f, ring, false));
        let exit = if bounds.is_empty() {
            lane = None;
            px
        } else {
            debug_assert!(bounds.len() >= 2, "a crossed wall presents at least two directions");
            let next_ccw =
                |p: usize| bounds.iter().copied().find(|&b| b > p).unwrap_or(bounds[0]);
            let next_cw = |p: usize| {
                bounds.iter().rev().copied().find(|&b| b < p).unwrap_or(*bounds.last().unwrap())
            };
            match lane {
                None => {
                    debug_assert!(
                        bounds.binary_search(&pe).is_err(),
                        "free arrival cannot ride a wall edge"
                    );
                    let (w_lo, w_hi) = (next_cw(pe), next_ccw(pe));
                    if strictly_inside(w_lo, px, w_hi, l) {
                        px
                    } else {
                        let asc_hi = below(f, v, ring[w_hi]);
                        let asc_lo = below(f, v, ring[w_lo]);
                        let hug_hi = match (asc_hi, asc_lo) {
                            (true, false) => true,
                            (false, true) => false,
                            // Both flanks climb: press toward the one
                            // blocking the steepest direction.
                            (true, true) => (px + l - w_hi) % l <= (w_lo + l - px) % l,
                            (false, false) => {
                                unreachable!("wedge without an ascending flank")
                            }
                        };
                        lane = Some(hug_hi);
                        if hug_hi {
                            w_hi
                        } else {
                            w_lo
                        }
                    }
                }
                Some(ccw) => {
                    debug_assert!(
                        bounds.binary_search(&pe).is_ok(),
                        "riding a wall requires a wall edge"
                    );
                    let bound = if ccw { next_ccw(pe) } else { next_cw(pe) };
                    let inside = if ccw {
                        strictly_inside(pe, px, bound, l)
                    } else {
                        strictly_inside(bound, px, pe, l)
                    };
                    if inside {
                        lane = None;
                        px
                    } else {
                        debug_assert!(below(f, v, ring[bound]), "wall continuation must ascend");
                        bound
                    }
                }
            }
        };
        let next = ring[exit];
        debug_assert!(below(f, v, next), "ascending path must climb");
        path.push(next);
    }
}

/// Order, at the far extremum, of a separatrix that ends at a saddle
/// against one that runs over that same saddle and on alongside it.  The
/// passing strand rides the flank given by its arrival sector: arriving
/// counterclockwise-after the shared stub puts it ahead after transit,
/// counterclockwise-before puts it behind.
fn prefix_order(
    mesh: &TriMesh,
    tables: &HashMap<usize, SaddleTable>,
    short: &[usize],
    upstream: usize,
) -> Ordering {
    let n = short.len();
    let (saddle, entry) = (short[n - 1], short[n - 2]);
    let tbl = &tables[&saddle];
    let ring = mesh.ring(saddle);
    let l = ring.len();
    let pos = |t: usize| ring.iter().position(|&r| r == t).unwrap();
    let pe = pos(entry);
    let dp = (pos(upstream) + l - pe) % l;
    let (mut next, mut prev) = (l, 0);
    for &sp in &tbl.stub_pos {
        let d = (sp + l - pe) % l;
        if d > 0 {
            next = next.min(d);
            prev = prev.max(d);
        }
    }
    // Equality with a neighbouring stub position means the passing strand
    // climbed that stub's corridor and rounded the saddle onto this side.
    debug_assert!(dp <= next || dp >= prev, "a passing strand must flank the stub it follows");
    if dp <= next {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// Cyclic order of two separatrices that arrive at an extremum through the
/// same final edge: walk backward together, and at the first divergence
/// order the branches counterclockwise around the shared vertex, starting
/// from the direction back toward the extremum.  Fully equal paths are
/// adjacent strands of one unfolded multiple saddle and reverse their copy
/// order in transit.
fn bundle_order(
    mesh: &TriMesh,
    tables: &HashMap<usize, SaddleTable>,
    a: &[usize],
    b: &[usize],
    copy_a: usize,
    copy_b: usize,
) -> Ordering {
    let mut i = 2;
    loop {
        match (a.get(i), b.get(i)) {
            (None, None) => return copy_b.cmp(&copy_a),
            (None, Some(&p)) => return prefix_order(mesh, tables, a, p),
            (Some(&p), None) => return prefix_order(mesh, tables, b, p).reverse(),
            (Some(&x), Some(&y)) if x == y => i += 1,
            (Some(&x), Some(&y)) => {
                let at = a[i - 1];
                let back = a[i - 2];
                let ring = mesh.ring(at);
                let pos = |t: usize| ring.iter().position(|&r| r == t).unwrap();
                let d = ring.len();
                let da = (pos(x) + d - pos(back)) % d;
                let db = (pos(y) + d - pos(back)) % d;
                return da.cmp(&db);
            }
        }
    }
}

/// Extract the cell decomposition of the distance field around weight `w`.
pub fn extract_ms_complex(mesh: &TriMesh, w: Vec3) -> Result<MsComplex, MsError> {
    let n = mesh.n_vertices();
    let f: Vec<f64> = (0..n).map(|v| (mesh.position(v) - w).norm()).collect();

    let mut minima: Vec<usize> = Vec::new();
    let mut maxima: Vec<usize> = Vec::new();
    // Saddle mesh vertex together with its interleaved arcs, lower first.
    let mut saddles: Vec<(usize, Vec<(bool, Vec<usize>)>)> = Vec::new();
    for v in 0..n {
        let ring = mesh.ring(v);
        let mask: Vec<bool> = ring.iter().map(|&r| below(&f, r, v)).collect();
        let mut runs = cyclic_runs(&mask, ring);
        let lower = runs.iter().filter(|r| r.0).count();
        if lower == runs.len() {
            maxima.push(v);
        } else if lower == 0 {
            minima.push(v);
        } else if lower >= 2 {
            if !runs[0].0 {
                runs.rotate_left(1);
            }
            saddles.push((v, runs));
        }
    }

    let folds: usize = saddles.iter().map(|(_, runs)| runs.len() / 2 - 1).sum();
    debug_assert_eq!(minima.len() + maxima.len(), folds + 2, "index theorem on the sphere");

    if folds == 0 {
        // Saddle-free field: one minimum, one maximum, the base complex.
        let map = RotationSystem::new(vec![0, 1], vec![1, 0]).expect("base path map");
        let kinds = vec![VertexKind::Stable, VertexKind::Unstable];
        let primal = PrimalComplex::new(map, kinds).expect("base path is a valid complex");
        let (quasi, correspondence) = primal_to_quasi_with_maps(&primal);
        let (lo, hi) = (minima[0], maxima[0]);
        let mut path = vec![hi];
        while *path.last().unwrap() != lo {
            let u = *path.last().unwrap();
            let ring = mesh.ring(u);
            let mut best = ring[0];
            for &c in &ring[1..] {
                if below(&f, c, best) {
                    best = c;
                }
            }
            path.push(best);
        }
        let value = vec![f[lo], f[hi]];
        return Ok(MsComplex {
            primal,
            quasi,
            correspondence,
            mesh_vertex: vec![lo, hi],
            value,
            separatrices: vec![path],
            saddle_of_quasi_face: vec![None],
        });
    }

    // The arc entries of every saddle, for routing paths that run over it.
    let mut tables: HashMap<usize, SaddleTable> = HashMap::new();
    for (v, runs) in &saddles {
        let ring = mesh.ring(*v);
        let pos = |t: usize| ring.iter().position(|&r| r == t).unwrap();
        let mut tbl = SaddleTable {
            stub_pos: Vec::with_capacity(runs.len()),
            stub_lower: Vec::with_capacity(runs.len()),
            stub_target: Vec::with_capacity(runs.len()),
            ring_len: ring.len(),
        };
        for (is_lower, arc) in runs {
            let entry = steepest(&f, arc, *is_lower);
            tbl.stub_pos.push(pos(entry));
            tbl.stub_lower.push(*is_lower);
            tbl.stub_target.push(entry);
        }
        tables.insert(*v, tbl);
    }

    // Unfold multiple saddles and trace the four separatrices of each
    // simple copy: chained arc pairs (L_i, U_i, L_{i+1}, U_{i+1}) in ring
    // order, so each copy's rotation is already counterclockwise.
    let mut copies: Vec<usize> = Vec::new();
    let mut copy_branches: Vec<[usize; 4]> = Vec::new();
    let mut branch_seed: Vec<(usize, usize, bool)> = Vec::new();
    let mut branch_copy: Vec<usize> = Vec::new();
    for &(v, ref runs) in &saddles {
        let m = runs.len() / 2;
        for i in 0..m - 1 {
            let copy = copies.len();
            let mut slots = [0usize; 4];
            for (slot, off) in (0..4).zip(2 * i..) {
                let (is_lower, arc) = &runs[off];
                debug_assert_eq!(*is_lower, slot % 2 == 0);
                slots[slot] = branch_seed.len();
                branch_seed.push((v, steepest(&f, arc, *is_lower), *is_lower));
                branch_copy.push(copy);
            }
            copies.push(v);
            copy_branches.push(slots);
        }
    }

    // Descending separatrices run free; ascending ones are traced second
    // and treat the descending edges as walls they may ride but not cross.
    let mut branch_paths: Vec<Vec<usize>> = vec![Vec::new(); branch_seed.len()];
    for (bid, &(v, entry, is_lower)) in branch_seed.iter().enumerate() {
        if is_lower {
            branch_paths[bid] = trace(mesh, &f, &tables, v, entry, true);
        }
    }
    let mut walls: HashMap<usize, Vec<usize>> = HashMap::new();
    for path in branch_paths.iter().filter(|p| !p.is_empty()) {
        for pair in path.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let pa = mesh.ring(a).iter().position(|&r| r == b).unwrap();
            let pb = mesh.ring(b).iter().position(|&r| r == a).unwrap();
            walls.entry(a).or_default().push(pa);
            walls.entry(b).or_default().push(pb);
        }
    }
    for dirs in walls.values_mut() {
        dirs.sort_unstable();
        dirs.dedup();
    }
    for (bid, &(v, entry, is_lower)) in branch_seed.iter().enumerate() {
        if !is_lower {
            branch_paths[bid] = trace_ascending(mesh, &f, &tables, &walls, v, entry);
        }
    }

    // Group arriving separatrices per extremum.
    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (bid, path) in branch_paths.iter().enumerate() {
        incoming[*path.last().unwrap()].push(bid);
    }

    let mut builder: MapBuilder<usize> = MapBuilder::new();
    let mut kinds: Vec<VertexKind> = Vec::new();
    let mut mesh_vertex: Vec<usize> = Vec::new();
    for (extrema, kind) in [(&minima, VertexKind::Stable), (&maxima, VertexKind::Unstable)] {
        for &v in extrema.iter() {
            let ring = mesh.ring(v);
            let ring_pos = |bid: usize| {
                let p = &branch_paths[bid];
                let arrival = p[p.len() - 2];
                ring.iter().position(|&r| r == arrival).unwrap()
            };
            let mut ids = incoming[v].clone();
            ids.sort_by(|&x, &y| {
                ring_pos(x).cmp(&ring_pos(y)).then_with(|| {
                    let rx: Vec<usize> = branch_paths[x].iter().rev().copied().collect();
                    let ry: Vec<usize> = branch_paths[y].iter().rev().copied().collect();
                    bundle_order(mesh, &tables, &rx, &ry, branch_copy[x], branch_copy[y])
                })
            });
            builder.add_vertex(ids);
            kinds.push(kind);
            mesh_vertex.push(v);
        }
    }
    for (ci, &v) in copies.iter().enumerate() {
        builder.add_vertex(copy_branches[ci].to_vec());
        kinds.push(VertexKind::Saddle);
        mesh_vertex.push(v);
    }

    let built = builder.build().map_err(|e| MsError::Structure(e.to_string()))?;
    let n_extrema = minima.len() + maxima.len();
    let mut separatrices: Vec<Vec<usize>> = vec![Vec::new(); built.map.n_edges()];
    for (ci, slots) in copy_branches.iter().enumerate() {
        for (k, &bid) in slots.iter().enumerate() {
            let e = built.map.edge_of(built.slots[n_extrema + ci][k]);
            separatrices[e] = branch_paths[bid].clone();
        }
    }
    let value: Vec<f64> = mesh_vertex.iter().map(|&v| f[v]).collect();
    let primal =
        PrimalComplex::new(built.map, kinds).map_err(|e| MsError::Structure(e.to_string()))?;
    let (quasi, correspondence) = primal_to_quasi_with_maps(&primal);
    let mut saddle_of_quasi_face = vec![None; quasi.map().n_faces()];
    for (s, g) in correspondence.quasi_face_of_saddle.iter().enumerate() {
        if let Some(g) = *g {
            saddle_of_quasi_face[g] = Some(s);
        }
    }

    Ok(MsComplex {
        primal,
        quasi,
        correspondence,
        mesh_vertex,
        value,
        separatrices,
        saddle_of_quasi_face,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::shapes;
    use crate::quad_ms::convert::from_planar;
    use crate::quad_ms::Signature;
    use crate::surface_map::PlanarMap;

    const TOL: f64 = 1e-12;

    /// Build a simple-graph map from explicit counterclockwise neighbor
    /// lists and check it is a sphere map.
    fn map_from_rotations(rot: &[&[usize]]) -> RotationSystem {
        let mut b: MapBuilder<(usize, usize)> = MapBuilder::new();
        for (v, nbrs) in rot.iter().enumerate() {
            b.add_vertex(nbrs.iter().map(|&u| (v.min(u), v.max(u))).collect());
        }
        let rs = b.build().unwrap().map;
        assert_eq!(
            rs.n_vertices() as i64 - rs.n_edges() as i64 + rs.n_faces() as i64,
            2,
            "oracle rotations must describe a sphere map"
        );
        rs
    }

    /// Octahedron graph: vertices +x,-x,+y,-y,+z,-z with counterclockwise
    /// rotations seen from outside.
    fn octahedron_map() -> RotationSystem {
        map_from_rotations(&[
            &[2, 4, 3, 5],
            &[2, 5, 3, 4],
            &[4, 0, 5, 1],
            &[4, 1, 5, 0],
            &[0, 2, 1, 3],
            &[0, 3, 1, 2],
        ])
    }

    /// Tetrahedron graph on the vertices of [`shapes::tetrahedron`].
    fn tetrahedron_map() -> RotationSystem {
        map_from_rotations(&[&[1, 2, 3], &[0, 3, 2], &[0, 1, 3], &[1, 0, 2]])
    }

    fn check_separatrices(mesh: &TriMesh, ms: &MsComplex) {
        let f: Vec<f64> = (0..mesh.n_vertices())
            .map(|v| mesh.position(v).norm())
            .collect();
        let rs = ms.primal.map();
        for (e, &(d, ad)) in rs.edge_darts().iter().enumerate() {
            let (u, v) = (rs.vertex_of(d), rs.vertex_of(ad));
            let path = &ms.separatrices[e];
            let (saddle, extremum) = if ms.primal.kinds()[u] == VertexKind::Saddle {
                (u, v)
            } else {
                (v, u)
            };
            assert_eq!(path[0], ms.mesh_vertex[saddle]);
            assert_eq!(*path.last().unwrap(), ms.mesh_vertex[extremum]);
            let descending = ms.primal.kinds()[extremum] == VertexKind::Stable;
            for pair in path.windows(2) {
                let ok =
                    if descending { below(&f, pair[1], pair[0]) } else { below(&f, pair[0], pair[1]) };
                assert!(ok, "separatrix {e} is not monotone at {pair:?}");
            }
        }
    }

    #[test]
    fn cube_field_extracts_the_face_vertex_quadrangulation() {
        let mesh = shapes::cube_mesh(4);
        let ms = extract_ms_complex(&mesh, Vec3::new(0.0, 0.0, 0.0)).unwrap();
        assert_eq!(ms.quasi.signature(), Signature::new(6, 8, 12));
        // Quadrangulation of the cube: 6 face regions, 8 vertex regions,
        // one quad per edge; equivalently the radial of the octahedron.
        let expected = from_planar(&PlanarMap::Map(octahedron_map())).quad;
        assert_eq!(ms.quasi.canonical_code(), expected.canonical_code());
        for (pv, kind) in ms.primal.kinds().iter().enumerate() {
            let expect = match kind {
                VertexKind::Stable => 0.5,
                VertexKind::Saddle => 0.5f64.sqrt(),
                VertexKind::Unstable => 0.75f64.sqrt(),
            };
            assert!((ms.value[pv] - expect).abs() < TOL);
        }
        check_separatrices(&mesh, &ms);
    }

    #[test]
    fn tetrahedron_field_extracts_the_self_dual_complex() {
        let mesh = shapes::refine(&shapes::tetrahedron(), 3);
        let ms = extract_ms_complex(&mesh, Vec3::new(0.0, 0.0, 0.0)).unwrap();
        assert_eq!(ms.quasi.signature(), Signature::new(4, 4, 6));
        let expected = from_planar(&PlanarMap::Map(tetrahedron_map())).quad;
        assert_eq!(ms.quasi.canonical_code(), expected.canonical_code());
        // Face feet and corners are lattice vertices; the true edge feet
        // fall between lattice points, so each saddle sits at the nearest
        // one, a third of the way along its edge.
        for (pv, kind) in ms.primal.kinds().iter().enumerate() {
            let expect = match kind {
                VertexKind::Stable => 1.0 / 3.0f64.sqrt(),
                VertexKind::Saddle => 11.0f64.sqrt() / 3.0,
                VertexKind::Unstable => 3.0f64.sqrt(),
            };
            assert!((ms.value[pv] - expect).abs() < TOL, "{kind:?}: {}", ms.value[pv]);
        }
        check_separatrices(&mesh, &ms);
    }


    #[test]
    fn tie_broken_constant_field_still_assembles() {
        // Every vertex of the unit sphere mesh has the same field value, so
        // the classification runs purely on index tie-breaking; the result
        // is arbitrary but must still be a valid balanced complex.
        for level in [2, 3] {
            let mesh = shapes::icosphere(level);
            let ms = extract_ms_complex(&mesh, Vec3::new(0.0, 0.0, 0.0)).unwrap();
            let sig = ms.quasi.signature();
            assert_eq!(sig.stable + sig.unstable, sig.saddle + 2);
        }
    }

    #[test]
    fn off_center_weight_in_a_sphere_gives_the_base_complex() {
        // From an off-center weight the distance field on a sphere has one
        // minimum and one maximum and nothing else.
        let mesh = shapes::icosphere(3);
        let ms = extract_ms_complex(&mesh, Vec3::new(0.21, 0.13, 0.09)).unwrap();
        assert!(ms.quasi.is_base_path());
        assert_eq!(ms.separatrices.len(), 1);
        let path = &ms.separatrices[0];
        assert_eq!(path[0], ms.mesh_vertex[1]);
        assert_eq!(*path.last().unwrap(), ms.mesh_vertex[0]);
    }

    #[test]
    fn ellipsoid_field_finds_the_six_axis_equilibria() {
        let mesh = shapes::ellipsoid_mesh(1.0, 0.8, 0.6, 3);
        let ms = extract_ms_complex(&mesh, Vec3::new(0.0, 0.0, 0.0)).unwrap();
        assert_eq!(ms.quasi.signature(), Signature::new(2, 2, 2));
        // Minima at the short axis, maxima at the long one, saddles at the
        // middle; positions only up to mesh resolution.
        for (pv, kind) in ms.primal.kinds().iter().enumerate() {
            let p = mesh.position(ms.mesh_vertex[pv]);
            let (axis, half) = match kind {
                VertexKind::Stable => (Vec3::new(0.0, 0.0, p.z.signum() * 0.6), 0.6),
                VertexKind::Saddle => (Vec3::new(0.0, p.y.signum() * 0.8, 0.0), 0.8),
                VertexKind::Unstable => (Vec3::new(p.x.signum() * 1.0, 0.0, 0.0), 1.0),
            };
            assert!(
                (p - axis).norm() < 0.25 * half,
                "{kind:?} vertex at {:?} is far from its axis point",
                (p.x, p.y, p.z)
            );
        }
        check_separatrices(&mesh, &ms);
    }

    #[test]
    fn refined_random_hulls_extract_balanced_complexes() {
        for seed in 0..3 {
            let hull = shapes::random_hull(30, seed);
            let mesh = shapes::refine(&hull, 4);
            let ms = extract_ms_complex(&mesh, Vec3::new(0.0, 0.0, 0.0)).unwrap();
            let sig = ms.quasi.signature();
            assert_eq!(sig.stable + sig.unstable, sig.saddle + 2, "seed {seed}");
            check_separatrices(&mesh, &ms);
        }
    }
}
