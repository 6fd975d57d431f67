//! Graphviz export of labeled maps.

use super::VertexKind;
use crate::surface_map::RotationSystem;

/// Render a labeled map in DOT format: stable vertices as filled circles,
/// unstable as open circles, saddles as diamonds.  Parallel edges and
/// loops are kept; the embedding itself is not encoded.
pub fn labeled_map_to_dot(map: &RotationSystem, kinds: &[VertexKind]) -> String {
    let mut out = String::from("graph ms {\n  node [fontsize=10];\n");
    for (v, k) in kinds.iter().enumerate() {
        let attrs = match k {
            VertexKind::Stable => "shape=circle, style=filled, fillcolor=black, fontcolor=white",
            VertexKind::Unstable => "shape=circle",
            VertexKind::Saddle => "shape=diamond",
        };
        out.push_str(&format!("  v{} [label=\"{}{}\", {}];\n", v, k.letter(), v, attrs));
    }
    for &(d, ad) in map.edge_darts() {
        out.push_str(&format!("  v{} -- v{};\n", map.vertex_of(d), map.vertex_of(ad)));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface_map::path3;

    #[test]
    fn dot_output_lists_all_vertices_and_edges() {
        let dot = labeled_map_to_dot(
            &path3(),
            &[VertexKind::Stable, VertexKind::Unstable, VertexKind::Stable],
        );
        assert_eq!(dot.matches(" -- ").count(), 2);
        assert!(dot.contains("v0"));
        assert!(dot.contains("diamond") == false);
        assert!(dot.starts_with("graph ms {"));
    }
}
