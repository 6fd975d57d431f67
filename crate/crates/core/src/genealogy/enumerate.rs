//! The bifurcation metagraph: one node per isomorphism class of
//! quadrangulation, split edges (oriented, with a replayable choice) and
//! slide edges (unoriented) between them.

use std::collections::{HashMap, VecDeque};

use super::{diagonal_slide, enumerate_splits, vertex_split, SlideChoice, SplitChoice};
use crate::quad_ms::{QuadComplex, Signature};

pub struct MetaNode {
    pub quad: QuadComplex,
    pub signature: Signature,
    pub code: Vec<u8>,
}

/// An oriented split edge with one representative choice that realizes it.
pub struct SplitEdge {
    pub from: usize,
    pub to: usize,
    pub choice: SplitChoice,
    /// How many distinct choices on `from` land in `to`'s class.
    pub multiplicity: usize,
}

/// An unoriented slide edge with one representative move.
pub struct SlideEdge {
    pub a: usize,
    pub b: usize,
    pub edge: usize,
    pub choice: SlideChoice,
}

pub struct Metagraph {
    pub nodes: Vec<MetaNode>,
    pub splits: Vec<SplitEdge>,
    pub slides: Vec<SlideEdge>,
}

impl Metagraph {
    pub fn node_by_code(&self, code: &[u8]) -> Option<usize> {
        self.nodes.iter().position(|n| n.code == code)
    }

    pub fn nodes_with_signature(&self, sig: Signature) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].signature == sig).collect()
    }
}

/// Breadth-first closure of the base path under vertex splits, up to
/// `max_extrema` extrema per class, with slide edges filled in afterwards.
/// The per-node batch of split outcomes is canonically coded in parallel.
pub fn metagraph(max_extrema: usize) -> Metagraph {
    metagraph_impl(max_extrema, false)
}

/// Sequential reference version of [`metagraph`]; same output.
pub fn metagraph_serial(max_extrema: usize) -> Metagraph {
    metagraph_impl(max_extrema, true)
}

fn metagraph_impl(max_extrema: usize, serial: bool) -> Metagraph {
    let base = QuadComplex::base_path();
    let mut nodes = vec![MetaNode {
        signature: base.signature(),
        code: base.canonical_code(),
        quad: base,
    }];
    let mut index: HashMap<Vec<u8>, usize> = HashMap::new();
    index.insert(nodes[0].code.clone(), 0);
    let mut splits: Vec<SplitEdge> = Vec::new();
    let mut queue = VecDeque::from([0usize]);

    while let Some(i) = queue.pop_front() {
        let sig = nodes[i].signature;
        if sig.extrema() >= max_extrema {
            continue;
        }
        let parent = nodes[i].quad.clone();
        let choices = enumerate_splits(&parent);
        let kernel = |k: usize| {
            let c = choices[k];
            let out = vertex_split(&parent, c.vertex, c.a, c.b)
                .expect("enumerated split choices are valid");
            let code = out.quad.canonical_code();
            (c, out.quad, code)
        };
        let coded = if serial {
            crate::par::map_indexed_serial(choices.len(), kernel)
        } else {
            crate::par::map_indexed(choices.len(), kernel)
        };
        let mut targets: HashMap<usize, (SplitChoice, usize)> = HashMap::new();
        for (c, quad, code) in coded {
            let j = *index.entry(code.clone()).or_insert_with(|| {
                nodes.push(MetaNode {
                    signature: quad.signature(),
                    code,
                    quad,
                });
                queue.push_back(nodes.len() - 1);
                nodes.len() - 1
            });
            targets.entry(j).and_modify(|(_, m)| *m += 1).or_insert((c, 1));
        }
        let mut targets: Vec<(usize, (SplitChoice, usize))> = targets.into_iter().collect();
        targets.sort_by_key(|&(j, _)| j);
        for (j, (choice, multiplicity)) in targets {
            splits.push(SplitEdge { from: i, to: j, choice, multiplicity });
        }
    }

    // Slides stay within a signature class, so both ends are present.
    let mut slides: Vec<SlideEdge> = Vec::new();
    let mut seen: HashMap<(usize, usize), ()> = HashMap::new();
    for i in 0..nodes.len() {
        let q = &nodes[i].quad;
        for edge in 0..q.map().n_edges() {
            for choice in [SlideChoice::One, SlideChoice::Two] {
                let Ok(out) = diagonal_slide(q, edge, choice) else { continue };
                let j = *index
                    .get(&out.quad.canonical_code())
                    .expect("slide target class is split-reachable");
                if i == j {
                    continue;
                }
                let key = (i.min(j), i.max(j));
                if seen.insert(key, ()).is_none() {
                    slides.push(SlideEdge { a: key.0, b: key.1, edge, choice });
                }
            }
        }
    }

    Metagraph { nodes, splits, slides }
}

/// Shortest chain of split edges from node `from` to node `to`, as indices
/// into `meta.splits`.
pub fn split_reachable(meta: &Metagraph, from: usize, to: usize) -> Option<Vec<usize>> {
    let mut prev: Vec<Option<usize>> = vec![None; meta.nodes.len()];
    let mut seen = vec![false; meta.nodes.len()];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(i) = queue.pop_front() {
        if i == to {
            let mut path = Vec::new();
            let mut cur = to;
            while cur != from {
                let e = prev[cur].unwrap();
                path.push(e);
                cur = meta.splits[e].from;
            }
            path.reverse();
            return Some(path);
        }
        for (e, s) in meta.splits.iter().enumerate() {
            if s.from == i && !seen[s.to] {
                seen[s.to] = true;
                prev[s.to] = Some(e);
                queue.push_back(s.to);
            }
        }
    }
    None
}
