//! Assemble a rotation system from per-vertex cyclic lists of edge keys.
//!
//! Each vertex contributes its incident edge keys in counterclockwise
//! order; every key must occur exactly twice overall (twice at one vertex
//! for a loop).  Darts are numbered consecutively vertex by vertex, so the
//! builder can report which dart landed in each slot.

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use super::{Dart, MapError, RotationSystem};

pub struct MapBuilder<K> {
    vertices: Vec<Vec<K>>,
}

/// The built map together with the slot-to-dart assignment.
pub struct BuiltMap {
    pub map: RotationSystem,
    /// `slots[v][k]` is the dart sitting in the `k`-th slot of vertex `v`;
    /// `v` is also `map.vertex_of(slots[v][k])`.
    pub slots: Vec<Vec<Dart>>,
}

impl<K: Eq + Hash + Clone + Debug> MapBuilder<K> {
    pub fn new() -> Self {
        MapBuilder { vertices: Vec::new() }
    }

    /// Append a vertex with its counterclockwise list of incident edge
    /// keys; returns the vertex's position in insertion order.
    pub fn add_vertex(&mut self, keys: Vec<K>) -> usize {
        self.vertices.push(keys);
        self.vertices.len() - 1
    }

    pub fn build(self) -> Result<BuiltMap, MapError> {
        let mut slots = Vec::with_capacity(self.vertices.len());
        let mut next = 0;
        for keys in &self.vertices {
            let v_slots: Vec<Dart> = (next..next + keys.len()).collect();
            next += keys.len();
            slots.push(v_slots);
        }
        let n = next;

        let mut sigma = vec![0; n];
        let mut key_darts: HashMap<&K, Vec<Dart>> = HashMap::new();
        for (v, keys) in self.vertices.iter().enumerate() {
            for (k, key) in keys.iter().enumerate() {
                let d = slots[v][k];
                sigma[d] = slots[v][(k + 1) % keys.len()];
                key_darts.entry(key).or_default().push(d);
            }
        }

        let mut alpha = vec![0; n];
        for (_key, darts) in key_darts {
            if darts.len() != 2 {
                return Err(MapError::EdgeKeyCount(darts.len()));
            }
            alpha[darts[0]] = darts[1];
            alpha[darts[1]] = darts[0];
        }

        let map = RotationSystem::new(sigma, alpha)?;
        // Insertion order must agree with the map's min-dart vertex order,
        // which it does because slots are assigned consecutively.
        debug_assert!((0..slots.len()).all(|v| map.vertex_of(slots[v][0]) == v));
        Ok(BuiltMap { map, slots })
    }
}

impl<K: Eq + Hash + Clone + Debug> Default for MapBuilder<K> {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_cube_graph() {
        // Cube vertices 0..7 (0..3 bottom, i+4 above i), keyed by sorted
        // endpoint pair; neighbor lists in counterclockwise order viewed
        // from outside the cube.
        let nbrs: [[usize; 3]; 8] = [
            [1, 4, 3],
            [0, 2, 5],
            [3, 6, 1],
            [2, 0, 7],
            [5, 7, 0],
            [4, 1, 6],
            [7, 5, 2],
            [6, 3, 4],
        ];
        let mut b = MapBuilder::new();
        for (v, ns) in nbrs.iter().enumerate() {
            b.add_vertex(ns.iter().map(|&u| (v.min(u), v.max(u))).collect());
        }
        let built = b.build().unwrap();
        assert_eq!(built.map.n_vertices(), 8);
        assert_eq!(built.map.n_edges(), 12);
        assert_eq!(built.map.n_faces(), 6);
        for w in built.map.face_walks() {
            assert_eq!(w.len(), 4);
        }
    }

    #[test]
    fn unmatched_key_is_reported() {
        let mut b = MapBuilder::new();
        b.add_vertex(vec!["e"]);
        b.add_vertex(vec!["e", "f"]);
        assert_eq!(b.build().err(), Some(MapError::EdgeKeyCount(1)));
    }

    #[test]
    fn loop_at_single_vertex() {
        let mut b = MapBuilder::new();
        b.add_vertex(vec!["l", "l"]);
        let built = b.build().unwrap();
        assert_eq!(built.map.n_vertices(), 1);
        assert_eq!(built.map.n_edges(), 1);
        assert_eq!(built.map.n_faces(), 2);
    }
}
