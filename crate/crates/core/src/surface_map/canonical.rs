//! Canonical forms for labeled rotation systems.
//!
//! Two maps receive the same code exactly when they are isomorphic as
//! labeled maps on the sphere, with orientation-reversing (mirror)
//! isomorphisms identified.  The code is the lexicographic minimum, over
//! every root dart and both orientations (`sigma` and its inverse), of a
//! breadth-first relabeling certificate.

use super::{Dart, RotationSystem};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    /// Flattened certificate: for each dart `i` in canonical order, the
    /// canonical indices of `sigma(i)` and `alpha(i)` (two bytes each,
    /// big-endian) followed by the label byte of the source vertex.
    pub code: Vec<u8>,
    /// Map from original vertex index to canonical vertex index (order of
    /// first appearance as a source along the winning relabeling).
    pub vertex_map: Vec<usize>,
}

fn candidate(
    rs: &RotationSystem,
    labels: &[u8],
    root: Dart,
    mirrored: bool,
    buf: &mut Vec<u8>,
    order: &mut Vec<Dart>,
    new_of_old: &mut Vec<usize>,
) {
    let n = rs.n_darts();
    buf.clear();
    order.clear();
    new_of_old.clear();
    new_of_old.resize(n, usize::MAX);

    new_of_old[root] = 0;
    order.push(root);
    let mut head = 0;
    while head < order.len() {
        let d = order[head];
        head += 1;
        let succ_sigma = if mirrored { rs.sigma_inv(d) } else { rs.sigma(d) };
        for nd in [succ_sigma, rs.alpha(d)] {
            if new_of_old[nd] == usize::MAX {
                new_of_old[nd] = order.len();
                order.push(nd);
            }
        }
    }
    debug_assert_eq!(order.len(), n);

    for &old in order.iter() {
        let s = if mirrored { rs.sigma_inv(old) } else { rs.sigma(old) };
        let sv = new_of_old[s] as u16;
        let av = new_of_old[rs.alpha(old)] as u16;
        buf.extend_from_slice(&sv.to_be_bytes());
        buf.extend_from_slice(&av.to_be_bytes());
        buf.push(labels[rs.vertex_of(old)]);
    }
}

/// Compute the canonical form of `rs` with one label byte per vertex.
pub fn canonical_form(rs: &RotationSystem, labels: &[u8]) -> CanonicalForm {
    assert_eq!(labels.len(), rs.n_vertices(), "one label byte per vertex");
    assert!(rs.n_darts() <= u16::MAX as usize, "map too large for 16-bit canonical code");

    let mut best: Option<Vec<u8>> = None;
    let mut best_order: Vec<Dart> = Vec::new();
    let mut buf = Vec::new();
    let mut order = Vec::new();
    let mut new_of_old = Vec::new();

    for mirrored in [false, true] {
        for root in 0..rs.n_darts() {
            candidate(rs, labels, root, mirrored, &mut buf, &mut order, &mut new_of_old);
            if best.as_ref().map_or(true, |b| buf < *b) {
                best = Some(buf.clone());
                best_order = order.clone();
            }
        }
    }

    let mut vertex_map = vec![usize::MAX; rs.n_vertices()];
    let mut next = 0;
    for &old in &best_order {
        let v = rs.vertex_of(old);
        if vertex_map[v] == usize::MAX {
            vertex_map[v] = next;
            next += 1;
        }
    }
    debug_assert!(vertex_map.iter().all(|&v| v != usize::MAX));

    CanonicalForm { code: best.unwrap(), vertex_map }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface_map::{cycle4, path3};

    fn relabel_darts(rs: &RotationSystem, perm: &[Dart]) -> RotationSystem {
        let n = rs.n_darts();
        let mut sigma = vec![0; n];
        let mut alpha = vec![0; n];
        for d in 0..n {
            sigma[perm[d]] = perm[rs.sigma(d)];
            alpha[perm[d]] = perm[rs.alpha(d)];
        }
        RotationSystem::new(sigma, alpha).unwrap()
    }

    #[test]
    fn code_invariant_under_dart_relabeling() {
        let m = cycle4();
        let labels = vec![0u8; 4];
        let base = canonical_form(&m, &labels).code;
        let perm = vec![5, 2, 7, 0, 3, 6, 1, 4];
        let relabeled = relabel_darts(&m, &perm);
        assert_eq!(canonical_form(&relabeled, &labels).code, base);
    }

    #[test]
    fn mirror_image_is_identified() {
        let m = path3();
        let n = m.n_darts();
        let mirror = RotationSystem::new(
            (0..n).map(|d| m.sigma_inv(d)).collect(),
            (0..n).map(|d| m.alpha(d)).collect(),
        )
        .unwrap();
        let labels = vec![0u8; 3];
        assert_eq!(canonical_form(&m, &labels).code, canonical_form(&mirror, &labels).code);
    }

    #[test]
    fn labels_distinguish_colorings() {
        let m = path3();
        // Middle vertex is the one of degree 2 (vertex index 1 here).
        let a = canonical_form(&m, &[1, 2, 1]).code;
        let b = canonical_form(&m, &[2, 1, 2]).code;
        assert_ne!(a, b);
        // Swapping the end labels is an automorphism, so no difference.
        let c = canonical_form(&m, &[1, 2, 3]).code;
        let d = canonical_form(&m, &[3, 2, 1]).code;
        assert_eq!(c, d);
    }

    #[test]
    fn different_maps_get_different_codes() {
        let labels3 = vec![0u8; 3];
        let labels4 = vec![0u8; 4];
        assert_ne!(
            canonical_form(&path3(), &labels3).code,
            canonical_form(&cycle4(), &labels4).code
        );
    }
}
