//! GEXF 1.2 and plain edge-list export.

use std::fmt::Write as _;

use dyncomm_core::{InteractionGraph, NodeId};

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Undirected static graph; nodes carry `origin` and `community`, edges a
/// `weight` attribute mirrored in the standard weight field.
pub fn to_gexf(
    graph: &InteractionGraph,
    community: impl Fn(NodeId) -> Option<usize>,
    description: &str,
) -> String {
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    s.push_str("<gexf xmlns=\"http://www.gexf.net/1.2draft\" version=\"1.2\">\n");
    let _ = writeln!(
        s,
        "  <meta>\n    <creator>dyncomm</creator>\n    <description>{}</description>\n  </meta>",
        escape(description)
    );
    s.push_str("  <graph mode=\"static\" defaultedgetype=\"undirected\">\n");
    s.push_str("    <attributes class=\"node\">\n");
    s.push_str("      <attribute id=\"0\" title=\"origin\" type=\"long\"/>\n");
    s.push_str("      <attribute id=\"1\" title=\"community\" type=\"integer\"/>\n");
    s.push_str("    </attributes>\n");
    s.push_str("    <attributes class=\"edge\">\n");
    s.push_str("      <attribute id=\"0\" title=\"weight\" type=\"double\"/>\n");
    s.push_str("    </attributes>\n");

    s.push_str("    <nodes>\n");
    for v in graph.nodes() {
        let origin = graph.origin(v).expect("live vertex");
        let _ = write!(
            s,
            "      <node id=\"{}\" label=\"{origin}\">\n        <attvalues>\n          <attvalue for=\"0\" value=\"{origin}\"/>\n",
            v.0
        );
        if let Some(c) = community(v) {
            let _ = writeln!(s, "          <attvalue for=\"1\" value=\"{c}\"/>");
        }
        s.push_str("        </attvalues>\n      </node>\n");
    }
    s.push_str("    </nodes>\n");

    s.push_str("    <edges>\n");
    for (i, (key, state)) in graph.edges().enumerate() {
        let _ = writeln!(
            s,
            "      <edge id=\"{i}\" source=\"{}\" target=\"{}\" weight=\"{w}\">\n        <attvalues>\n          <attvalue for=\"0\" value=\"{w}\"/>\n        </attvalues>\n      </edge>",
            key.lo().0,
            key.hi().0,
            w = state.weight
        );
    }
    s.push_str("    </edges>\n  </graph>\n</gexf>\n");
    s
}

/// One `u v w` line per edge, using the same node ids as the GEXF file.
pub fn to_edge_list(graph: &InteractionGraph) -> String {
    let mut s = String::from("# u v w (node ids; see the GEXF labels for dataset ids)\n");
    for (key, state) in graph.edges() {
        let _ = writeln!(s, "{} {} {}", key.lo().0, key.hi().0, state.weight);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_nodes_and_edges() {
        let g = InteractionGraph::from_weighted_edges([(1, 2, 1.5), (2, 3, 2.0)]).unwrap();
        let x = to_gexf(&g, |_| Some(0), "t");
        assert_eq!(x.matches("<node ").count(), 3);
        assert_eq!(x.matches("<edge ").count(), 2);
        assert!(x.contains("weight=\"1.5\""));
        let e = to_edge_list(&g);
        assert_eq!(e.lines().filter(|l| !l.starts_with('#')).count(), 2);
    }
}
