//! DOT export. Edges are drawn source to range and styled per colour;
//! factorisation squares are not drawable as edges, so they ride along in a
//! trailing comment block.

use kgraph::Skeleton;

const PALETTE: [(&str, &str); 6] = [
    ("black", "solid"),
    ("red", "dashed"),
    ("blue", "dotted"),
    ("forestgreen", "solid"),
    ("orange", "dashed"),
    ("purple", "dotted"),
];

pub fn export(sk: &Skeleton) -> String {
    let mut out = String::from("digraph skeleton {\n");
    for v in sk.vertex_ids() {
        out.push_str(&format!("  \"{}\";\n", sk.vertex_name(v)));
    }
    for e in sk.edge_ids() {
        let d = sk.edge_data(e);
        let (colour, style) = PALETTE[(d.colour - 1) % PALETTE.len()];
        out.push_str(&format!(
            "  \"{}\" -> \"{}\" [label=\"{}\" color=\"{}\" style=\"{}\"];\n",
            sk.vertex_name(d.source),
            sk.vertex_name(d.range),
            d.name,
            colour,
            style
        ));
    }
    if !sk.squares().is_empty() {
        out.push_str("  // factorisation rules:\n");
        for sq in sk.squares() {
            out.push_str(&format!(
                "  //   {} {} = {} {}\n",
                sk.edge_data(sq.first.0).name,
                sk.edge_data(sq.first.1).name,
                sk.edge_data(sq.second.0).name,
                sk.edge_data(sq.second.1).name
            ));
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use kgraph::constructions;

    #[test]
    fn export_mentions_every_edge() {
        let sk = constructions::torus(2);
        let dot = super::export(&sk);
        assert!(dot.contains("\"v\" -> \"v\" [label=\"a\""));
        assert!(dot.contains("// factorisation rules:"));
    }
}
