//! Low-level rotation-system surgery on token lists.
//!
//! A map under surgery is a list of vertex rotations, each a cyclic list
//! of dart *tokens*; every token carries an edge id, and each edge id is
//! carried by exactly two tokens.  Operations are plain list edits;
//! [`CycleSurgery::rebuild`] reassembles and revalidates a map and reports
//! where every surviving token landed.

use std::collections::HashMap;

use crate::surface_map::{Dart, MapBuilder, MapError, PlanarMap, RotationSystem};

pub(crate) struct CycleSurgery {
    /// Rotation of each vertex as a list of tokens; `None` for vertices
    /// removed by contraction.
    cycles: Vec<Option<Vec<usize>>>,
    /// Token -> edge id (tokens of removed edges keep a stale entry).
    edge_of: Vec<usize>,
    next_edge: usize,
}

pub(crate) struct Rebuilt {
    pub planar: PlanarMap,
    /// Token -> dart in the rebuilt map (`None` for removed tokens or when
    /// the result is trivial).
    pub dart_of_token: Vec<Option<Dart>>,
    /// Surgery vertex slot -> rebuilt vertex index.
    pub vertex_of_slot: Vec<Option<usize>>,
}

impl Rebuilt {
    pub fn map(&self) -> Option<&RotationSystem> {
        match &self.planar {
            PlanarMap::Trivial => None,
            PlanarMap::Map(m) => Some(m),
        }
    }

    /// Edge index (in the rebuilt map) of the edge id carried by `token`.
    pub fn edge_of_token(&self, token: usize) -> Option<usize> {
        let d = self.dart_of_token.get(token).copied().flatten()?;
        Some(self.map()?.edge_of(d))
    }

    pub fn face_of_token(&self, token: usize) -> Option<usize> {
        let d = self.dart_of_token.get(token).copied().flatten()?;
        Some(self.map()?.face_of(d))
    }
}

impl CycleSurgery {
    /// Tokens are the darts of `m`; vertex slots are `m`'s vertex indices.
    pub fn from_map(m: &RotationSystem) -> Self {
        CycleSurgery {
            cycles: m.vertex_cycles().iter().map(|c| Some(c.clone())).collect(),
            edge_of: (0..m.n_darts()).map(|d| m.edge_of(d)).collect(),
            next_edge: m.n_edges(),
        }
    }

    fn fresh_tokens(&mut self, edge_id: usize) -> (usize, usize) {
        let t1 = self.edge_of.len();
        self.edge_of.push(edge_id);
        let t2 = self.edge_of.len();
        self.edge_of.push(edge_id);
        (t1, t2)
    }

    fn fresh_edge(&mut self) -> usize {
        self.next_edge += 1;
        self.next_edge - 1
    }

    fn position(&self, slot: usize, token: usize) -> usize {
        self.cycles[slot]
            .as_ref()
            .unwrap()
            .iter()
            .position(|&t| t == token)
            .expect("token must be present at its vertex")
    }

    pub fn slot_of_token(&self, token: usize) -> usize {
        self.cycles
            .iter()
            .position(|c| c.as_ref().is_some_and(|c| c.contains(&token)))
            .expect("token must be live")
    }

    /// Remove the edge with tokens `t1`, `t2` (must not be a bridge, which
    /// is the caller's invariant; a disconnection would fail revalidation).
    pub fn delete_edge(&mut self, t1: usize, t2: usize) {
        for t in [t1, t2] {
            let slot = self.slot_of_token(t);
            let pos = self.position(slot, t);
            self.cycles[slot].as_mut().unwrap().remove(pos);
        }
    }

    /// Contract the non-loop edge with tokens `t1`, `t2`: the vertex of
    /// `t2` is spliced into the vertex of `t1` (which keeps its slot).
    /// Returns `(kept_slot, removed_slot)`.
    pub fn contract_edge(&mut self, t1: usize, t2: usize) -> (usize, usize) {
        let s1 = self.slot_of_token(t1);
        let s2 = self.slot_of_token(t2);
        assert_ne!(s1, s2, "cannot contract a loop");
        let rotate_out = |list: &[usize], t: usize| -> Vec<usize> {
            let pos = list.iter().position(|&x| x == t).unwrap();
            let mut out = Vec::with_capacity(list.len() - 1);
            for i in 1..list.len() {
                out.push(list[(pos + i) % list.len()]);
            }
            out
        };
        let arc1 = rotate_out(self.cycles[s1].as_ref().unwrap(), t1);
        let arc2 = rotate_out(self.cycles[s2].as_ref().unwrap(), t2);
        let mut merged = arc1;
        merged.extend(arc2);
        self.cycles[s1] = Some(merged);
        self.cycles[s2] = None;
        (s1, s2)
    }

    /// Split the vertex in `slot` at gap positions `g1 <= g2` (gap `i`
    /// precedes the `i`-th rotation entry).  The slot keeps the arc
    /// starting at `g1`; a new slot receives the complementary arc; both
    /// get one end of a fresh edge, inserted at the cut.  Returns
    /// `(new_slot, new_edge_id, token_at_kept, token_at_new)`.
    pub fn split_vertex(&mut self, slot: usize, g1: usize, g2: usize) -> (usize, usize, usize, usize) {
        let cycle = self.cycles[slot].clone().unwrap();
        let deg = cycle.len();
        assert!(g1 <= g2 && (g2 < deg || (deg == 0 && g2 == 0)));
        let edge = self.fresh_edge();
        let (t1, t2) = self.fresh_tokens(edge);
        let mut kept = vec![t1];
        let mut fresh = vec![t2];
        for i in g1..g2 {
            kept.push(cycle[i]);
        }
        for i in g2..g2 + (deg - (g2 - g1)) {
            fresh.push(cycle[i % deg.max(1)]);
        }
        self.cycles[slot] = Some(kept);
        self.cycles.push(Some(fresh));
        (self.cycles.len() - 1, edge, t1, t2)
    }

    /// Insert a chord whose ends land in the corners counterclockwise of
    /// tokens `a` and `b` (immediately after them in their rotations).
    /// With `a == b` the chord is a loop around an empty corner.  Returns
    /// `(new_edge_id, token_after_a, token_after_b)`.
    pub fn insert_chord(&mut self, a: usize, b: usize) -> (usize, usize, usize) {
        let edge = self.fresh_edge();
        let (t1, t2) = self.fresh_tokens(edge);
        let slot_b = self.slot_of_token(b);
        let pos_b = self.position(slot_b, b);
        self.cycles[slot_b].as_mut().unwrap().insert(pos_b + 1, t2);
        let slot_a = self.slot_of_token(a);
        let pos_a = self.position(slot_a, a);
        self.cycles[slot_a].as_mut().unwrap().insert(pos_a + 1, t1);
        (edge, t1, t2)
    }

    /// Reassemble into a validated map.  A single empty vertex (and no
    /// edges) yields the trivial map.
    pub fn rebuild(&self) -> Result<Rebuilt, MapError> {
        let live: Vec<(usize, &Vec<usize>)> = self
            .cycles
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.as_ref().map(|c| (i, c)))
            .collect();
        let mut vertex_of_slot = vec![None; self.cycles.len()];
        let n_tokens = self.edge_of.len();

        if live.iter().all(|(_, c)| c.is_empty()) {
            if live.len() != 1 {
                return Err(MapError::NotConnected);
            }
            vertex_of_slot[live[0].0] = Some(0);
            return Ok(Rebuilt {
                planar: PlanarMap::Trivial,
                dart_of_token: vec![None; n_tokens],
                vertex_of_slot,
            });
        }

        let mut b: MapBuilder<usize> = MapBuilder::new();
        for (built_idx, (slot, cycle)) in live.iter().enumerate() {
            vertex_of_slot[*slot] = Some(built_idx);
            b.add_vertex(cycle.iter().map(|&t| self.edge_of[t]).collect());
        }
        let built = b.build()?;
        let mut dart_of_token = vec![None; n_tokens];
        for (built_idx, (_, cycle)) in live.iter().enumerate() {
            for (k, &t) in cycle.iter().enumerate() {
                dart_of_token[t] = Some(built.slots[built_idx][k]);
            }
        }
        Ok(Rebuilt { planar: PlanarMap::Map(built.map), dart_of_token, vertex_of_slot })
    }

    /// New edge index for each live edge id, after a rebuild.
    pub fn edge_index_table(&self, rebuilt: &Rebuilt) -> HashMap<usize, usize> {
        let mut table = HashMap::new();
        for (t, &e) in self.edge_of.iter().enumerate() {
            if let Some(idx) = rebuilt.edge_of_token(t) {
                table.insert(e, idx);
            }
        }
        table
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface_map::{cycle4, path3};

    #[test]
    fn rebuild_without_edits_reproduces_the_map() {
        let m = cycle4();
        let s = CycleSurgery::from_map(&m);
        let r = s.rebuild().unwrap();
        let m2 = r.map().unwrap();
        assert_eq!(m2.n_vertices(), 4);
        assert_eq!(m2.n_edges(), 4);
        for t in 0..8 {
            assert!(r.dart_of_token[t].is_some());
        }
    }

    #[test]
    fn contract_then_rebuild_shrinks_by_one_vertex() {
        let m = path3();
        let mut s = CycleSurgery::from_map(&m);
        // Contract edge {0,1} (between vertices 0 and 1).
        s.contract_edge(0, 1);
        let r = s.rebuild().unwrap();
        let m2 = r.map().unwrap();
        assert_eq!((m2.n_vertices(), m2.n_edges()), (2, 1));
    }

    #[test]
    fn contracting_the_last_edge_gives_the_trivial_map() {
        let m = RotationSystem::new(vec![0, 1], vec![1, 0]).unwrap();
        let mut s = CycleSurgery::from_map(&m);
        s.contract_edge(0, 1);
        let r = s.rebuild().unwrap();
        assert!(matches!(r.planar, PlanarMap::Trivial));
    }

    #[test]
    fn split_then_contract_is_identity() {
        let m = cycle4();
        let mut s = CycleSurgery::from_map(&m);
        let before = {
            let r = s.rebuild().unwrap();
            crate::surface_map::canonical_form(r.map().unwrap(), &[0; 4]).code
        };
        let (_, _, t1, t2) = s.split_vertex(2, 0, 1);
        let mid = s.rebuild().unwrap();
        assert_eq!(mid.map().unwrap().n_vertices(), 5);
        s.contract_edge(t1, t2);
        let r = s.rebuild().unwrap();
        let after = crate::surface_map::canonical_form(r.map().unwrap(), &[0; 4]).code;
        assert_eq!(before, after);
    }

    #[test]
    fn chord_then_delete_is_identity() {
        let m = cycle4();
        let mut s = CycleSurgery::from_map(&m);
        let before = {
            let r = s.rebuild().unwrap();
            crate::surface_map::canonical_form(r.map().unwrap(), &[0; 4]).code
        };
        // Corners counterclockwise of darts 0 and 4 both lie on the same
        // face of the 4-cycle, so the chord stays planar.
        let (_, t1, t2) = s.insert_chord(0, 4);
        let mid = s.rebuild().unwrap();
        assert_eq!(mid.map().unwrap().n_edges(), 5);
        s.delete_edge(t1, t2);
        let r = s.rebuild().unwrap();
        let after = crate::surface_map::canonical_form(r.map().unwrap(), &[0; 4]).code;
        assert_eq!(before, after);
    }

    #[test]
    fn loop_chord_creates_a_monogon() {
        let m = path3();
        let mut s = CycleSurgery::from_map(&m);
        let (_, _, _) = s.insert_chord(2, 2);
        let r = s.rebuild().unwrap();
        let m2 = r.map().unwrap();
        assert_eq!(m2.n_edges(), 3);
        assert!(m2.face_walks().iter().any(|w| w.len() == 1));
    }
}
