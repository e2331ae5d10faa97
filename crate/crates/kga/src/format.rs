//! The `.kg` presentation format: UTF-8, line-oriented, `#` comments.
//!
//! ```text
//! rank <k>
//! vertex <name>
//! edge <name> <colour 1..k> <source-vertex> <range-vertex>
//! square <a> <b> = <c> <d>
//! ```
//!
//! A square line declares the composite a·b (with s(a) = r(b)) equal to c·d,
//! where colour(a) = colour(d) differs from colour(b) = colour(c). Tokens
//! are drawn from `[A-Za-z0-9_^,()\-]+`; duplicate names are parse errors.

use std::collections::HashSet;
use std::fmt;

use kgraph::{Skeleton, SkeletonBuilder};

#[derive(Debug)]
pub enum ParseError {
    /// Malformed text, bad tokens, duplicate or unknown names: exit code 1.
    Syntax { line: usize, message: String },
    /// Structurally broken presentation (square endpoint or colour pattern
    /// violations): exit code 2.
    Build(kgraph::Error),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { line, message } => write!(f, "line {line}: {message}"),
            ParseError::Build(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ParseError {}

fn valid_token(tok: &str) -> bool {
    !tok.is_empty()
        && tok.chars().all(|c| {
            c.is_ascii_alphanumeric() || matches!(c, '_' | '^' | ',' | '(' | ')' | '-')
        })
}

pub fn parse(text: &str) -> Result<Skeleton, ParseError> {
    let syntax = |line: usize, message: String| ParseError::Syntax { line, message };
    let mut rank: Option<usize> = None;
    let mut builder: Option<SkeletonBuilder> = None;
    let mut vertex_names: HashSet<String> = HashSet::new();
    let mut edge_names: HashSet<String> = HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        match tokens[0] {
            "rank" => {
                if rank.is_some() {
                    return Err(syntax(line_no, "duplicate rank line".into()));
                }
                if tokens.len() != 2 {
                    return Err(syntax(line_no, "expected `rank <k>`".into()));
                }
                let k: usize = tokens[1]
                    .parse()
                    .map_err(|_| syntax(line_no, format!("bad rank `{}`", tokens[1])))?;
                if k == 0 {
                    return Err(syntax(line_no, "rank must be at least 1".into()));
                }
                rank = Some(k);
                builder = Some(SkeletonBuilder::new(k));
            }
            "vertex" => {
                let b = builder
                    .as_mut()
                    .ok_or_else(|| syntax(line_no, "rank line must come first".into()))?;
                if tokens.len() != 2 || !valid_token(tokens[1]) {
                    return Err(syntax(line_no, "expected `vertex <name>`".into()));
                }
                if !vertex_names.insert(tokens[1].to_string()) {
                    return Err(syntax(line_no, format!("duplicate vertex `{}`", tokens[1])));
                }
                b.vertex(tokens[1]);
            }
            "edge" => {
                let k = rank.ok_or_else(|| syntax(line_no, "rank line must come first".into()))?;
                let b = builder.as_mut().unwrap();
                if tokens.len() != 5 {
                    return Err(syntax(
                        line_no,
                        "expected `edge <name> <colour> <source> <range>`".into(),
                    ));
                }
                if !valid_token(tokens[1]) {
                    return Err(syntax(line_no, format!("bad edge name `{}`", tokens[1])));
                }
                if !edge_names.insert(tokens[1].to_string()) {
                    return Err(syntax(line_no, format!("duplicate edge `{}`", tokens[1])));
                }
                let colour: usize = tokens[2]
                    .parse()
                    .map_err(|_| syntax(line_no, format!("bad colour `{}`", tokens[2])))?;
                if colour < 1 || colour > k {
                    return Err(syntax(
                        line_no,
                        format!("colour {colour} out of range 1..={k}"),
                    ));
                }
                for endpoint in [tokens[3], tokens[4]] {
                    if !vertex_names.contains(endpoint) {
                        return Err(syntax(line_no, format!("unknown vertex `{endpoint}`")));
                    }
                }
                b.edge(tokens[1], colour, tokens[3], tokens[4]);
            }
            "square" => {
                let b = builder
                    .as_mut()
                    .ok_or_else(|| syntax(line_no, "rank line must come first".into()))?;
                if tokens.len() != 6 || tokens[3] != "=" {
                    return Err(syntax(
                        line_no,
                        "expected `square <a> <b> = <c> <d>`".into(),
                    ));
                }
                for name in [tokens[1], tokens[2], tokens[4], tokens[5]] {
                    if !edge_names.contains(name) {
                        return Err(syntax(line_no, format!("unknown edge `{name}`")));
                    }
                }
                b.square(tokens[1], tokens[2], tokens[4], tokens[5]);
            }
            other => {
                return Err(syntax(line_no, format!("unknown directive `{other}`")));
            }
        }
    }
    let builder = builder.ok_or_else(|| ParseError::Syntax {
        line: 0,
        message: "missing rank line".into(),
    })?;
    builder.finish().map_err(ParseError::Build)
}

/// Canonical text form: vertices, then edges by (colour, name), then squares
/// in canonical orientation. Parsing the output reproduces the skeleton.
pub fn print(sk: &Skeleton) -> String {
    let mut out = String::new();
    out.push_str(&format!("rank {}\n", sk.rank()));
    for v in sk.vertex_ids() {
        out.push_str(&format!("vertex {}\n", sk.vertex_name(v)));
    }
    for e in sk.edge_ids() {
        let d = sk.edge_data(e);
        out.push_str(&format!(
            "edge {} {} {} {}\n",
            d.name,
            d.colour,
            sk.vertex_name(d.source),
            sk.vertex_name(d.range)
        ));
    }
    for sq in sk.squares() {
        out.push_str(&format!(
            "square {} {} = {} {}\n",
            sk.edge_data(sq.first.0).name,
            sk.edge_data(sq.first.1).name,
            sk.edge_data(sq.second.0).name,
            sk.edge_data(sq.second.1).name
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use kgraph::constructions;

    #[test]
    fn round_trip_every_fixture() {
        for name in constructions::fixture_names() {
            let sk = constructions::fixture(name).unwrap();
            let text = print(&sk);
            let back = parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(back, sk, "{name}");
        }
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "# a loop\nrank 1\n\nvertex v # the vertex\nedge a 1 v v\n";
        let sk = parse(text).unwrap();
        assert_eq!(sk.vertex_count(), 1);
        assert_eq!(sk.edge_count(), 1);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse("vertex v\n"),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse("rank 2\nvertex v\nvertex v\n"),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse("rank 2\nvertex v\nedge a 3 v v\n"),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse("rank 2\nvertex v\nedge a 1 v w\n"),
            Err(ParseError::Syntax { .. })
        ));
    }

    #[test]
    fn malformed_square_is_a_build_error() {
        let text = "rank 2\nvertex v\nedge a 1 v v\nedge b 1 v v\nsquare a b = b a\n";
        assert!(matches!(parse(text), Err(ParseError::Build(_))));
    }
}
