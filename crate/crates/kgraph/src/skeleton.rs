//! The skeleton data model: a k-coloured directed multigraph together with
//! its factorisation squares, plus the validator that decides whether the
//! presentation defines a k-graph.
//!
//! Edges run from `source` to `range`; a path extends at its source end, and
//! a word `[x, y]` denotes the composite x·y with s(x) = r(y). Squares are
//! stored with the ascending-colour word first and looked up by the ordered
//! pair of edges, in either colour order.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;

use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct VertexId(pub(crate) u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct EdgeId(pub(crate) u32);

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub name: String,
    /// 1-based colour index.
    pub colour: usize,
    pub source: VertexId,
    pub range: VertexId,
}

/// A factorisation rule first = second, both words read range-most edge
/// first. `first` carries the ascending colour pair.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Square {
    pub first: (EdgeId, EdgeId),
    pub second: (EdgeId, EdgeId),
}

/// Resource caps for the search-like operations.
#[derive(Copy, Clone, Debug)]
pub struct Limits {
    /// Per-coordinate cap on enumerated degrees.
    pub max_degree: u32,
    /// Cap on visited states in the exhaustiveness automaton.
    pub max_states: usize,
    /// Cap on candidate generating sets in the hereditary sweep.
    pub max_subsets: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_degree: 12,
            max_states: 1_000_000,
            max_subsets: 1 << 16,
        }
    }
}

#[derive(Clone)]
pub struct Skeleton {
    rank: usize,
    vertices: Vec<String>,
    edges: Vec<Edge>,
    squares: Vec<Square>,
    vertex_lookup: HashMap<String, VertexId>,
    edge_lookup: HashMap<String, EdgeId>,
    /// Both orientations of every declared square.
    partner: HashMap<(EdgeId, EdgeId), (EdgeId, EdgeId)>,
    /// Words covered by more than one declared square.
    duplicated_words: Vec<(EdgeId, EdgeId)>,
    by_range: Vec<Vec<EdgeId>>,
    by_source: Vec<Vec<EdgeId>>,
    limits: Limits,
}

pub struct SkeletonBuilder {
    rank: usize,
    vertices: Vec<String>,
    edges: Vec<(String, usize, String, String)>,
    squares: Vec<[String; 4]>,
    limits: Limits,
}

impl SkeletonBuilder {
    pub fn new(rank: usize) -> Self {
        SkeletonBuilder {
            rank,
            vertices: Vec::new(),
            edges: Vec::new(),
            squares: Vec::new(),
            limits: Limits::default(),
        }
    }

    pub fn vertex(&mut self, name: impl Into<String>) -> &mut Self {
        self.vertices.push(name.into());
        self
    }

    /// Add an edge of the given colour from `source` to `range`.
    pub fn edge(
        &mut self,
        name: impl Into<String>,
        colour: usize,
        source: impl Into<String>,
        range: impl Into<String>,
    ) -> &mut Self {
        self.edges
            .push((name.into(), colour, source.into(), range.into()));
        self
    }

    /// Declare the rule a·b = c·d (s(a) = r(b), colours of a and b distinct).
    pub fn square(
        &mut self,
        a: impl Into<String>,
        b: impl Into<String>,
        c: impl Into<String>,
        d: impl Into<String>,
    ) -> &mut Self {
        self.squares.push([a.into(), b.into(), c.into(), d.into()]);
        self
    }

    pub fn limits(&mut self, limits: Limits) -> &mut Self {
        self.limits = limits;
        self
    }

    pub fn finish(&self) -> Result<Skeleton> {
        if self.rank == 0 {
            return Err(Error::Invalid("rank must be at least 1".into()));
        }
        let mut vertices = self.vertices.clone();
        vertices.sort();
        for w in vertices.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateName(w[0].clone()));
            }
        }
        let vertex_lookup: HashMap<String, VertexId> = vertices
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), VertexId(i as u32)))
            .collect();

        let mut edges: Vec<Edge> = Vec::with_capacity(self.edges.len());
        for (name, colour, source, range) in &self.edges {
            if *colour < 1 || *colour > self.rank {
                return Err(Error::ColourOutOfRange {
                    colour: *colour,
                    rank: self.rank,
                });
            }
            let source = *vertex_lookup
                .get(source)
                .ok_or_else(|| Error::UnknownVertex(source.clone()))?;
            let range = *vertex_lookup
                .get(range)
                .ok_or_else(|| Error::UnknownVertex(range.clone()))?;
            edges.push(Edge {
                name: name.clone(),
                colour: *colour,
                source,
                range,
            });
        }
        edges.sort_by(|a, b| (a.colour, &a.name).cmp(&(b.colour, &b.name)));
        let edge_lookup: HashMap<String, EdgeId> = edges
            .iter()
            .enumerate()
            .map(|(i, e)| (e.name.clone(), EdgeId(i as u32)))
            .collect();
        if edge_lookup.len() != edges.len() {
            let mut names: Vec<&str> = edges.iter().map(|e| e.name.as_str()).collect();
            names.sort();
            let dup = names
                .windows(2)
                .find(|w| w[0] == w[1])
                .map(|w| w[0].to_string())
                .unwrap_or_default();
            return Err(Error::DuplicateName(dup));
        }

        let mut squares: Vec<Square> = Vec::with_capacity(self.squares.len());
        for [a, b, c, d] in &self.squares {
            let ids: Vec<EdgeId> = [a, b, c, d]
                .iter()
                .map(|n| {
                    edge_lookup
                        .get(*n)
                        .copied()
                        .ok_or_else(|| Error::UnknownEdge((*n).clone()))
                })
                .collect::<Result<_>>()?;
            let (ea, eb, ec, ed) = (ids[0], ids[1], ids[2], ids[3]);
            let sq_err = |reason: &str| Error::MalformedSquare {
                a: a.clone(),
                b: b.clone(),
                c: c.clone(),
                d: d.clone(),
                reason: reason.into(),
            };
            let (da, db, dc, dd) = (
                &edges[ea.index()],
                &edges[eb.index()],
                &edges[ec.index()],
                &edges[ed.index()],
            );
            if da.colour == db.colour {
                return Err(sq_err("both words must be bicoloured"));
            }
            if da.colour != dd.colour || db.colour != dc.colour {
                return Err(sq_err("colour pattern must be ij = ji"));
            }
            if da.source != dc.range || dc.source != dd.range {
                // s(a) = r(b), s(c) = r(d) checked below; this guards the
                // cross conditions via the shared corners.
            }
            if da.source != db.range {
                return Err(sq_err("left word not composable"));
            }
            if dc.source != dd.range {
                return Err(sq_err("right word not composable"));
            }
            if da.range != dc.range {
                return Err(sq_err("words have different ranges"));
            }
            if db.source != dd.source {
                return Err(sq_err("words have different sources"));
            }
            let square = if da.colour < db.colour {
                Square {
                    first: (ea, eb),
                    second: (ec, ed),
                }
            } else {
                Square {
                    first: (ec, ed),
                    second: (ea, eb),
                }
            };
            squares.push(square);
        }
        squares.sort();

        let mut partner = HashMap::new();
        let mut coverage: HashMap<(EdgeId, EdgeId), usize> = HashMap::new();
        for sq in &squares {
            *coverage.entry(sq.first).or_insert(0) += 1;
            *coverage.entry(sq.second).or_insert(0) += 1;
            partner.entry(sq.first).or_insert(sq.second);
            partner.entry(sq.second).or_insert(sq.first);
        }
        let mut duplicated_words: Vec<(EdgeId, EdgeId)> = coverage
            .iter()
            .filter(|&(_, &c)| c > 1)
            .map(|(&w, _)| w)
            .collect();
        duplicated_words.sort();

        let mut by_range = vec![Vec::new(); vertices.len()];
        let mut by_source = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            by_range[e.range.index()].push(EdgeId(i as u32));
            by_source[e.source.index()].push(EdgeId(i as u32));
        }

        Ok(Skeleton {
            rank: self.rank,
            vertices,
            edges,
            squares,
            vertex_lookup,
            edge_lookup,
            partner,
            duplicated_words,
            by_range,
            by_source,
            limits: self.limits,
        })
    }
}

impl Skeleton {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len() as u32).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.vertex_lookup.get(name).copied()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.index()]
    }

    pub fn edge(&self, name: &str) -> Option<EdgeId> {
        self.edge_lookup.get(name).copied()
    }

    pub fn edge_data(&self, e: EdgeId) -> &Edge {
        &self.edges[e.index()]
    }

    pub fn colour(&self, e: EdgeId) -> usize {
        self.edges[e.index()].colour
    }

    pub fn source(&self, e: EdgeId) -> VertexId {
        self.edges[e.index()].source
    }

    pub fn range(&self, e: EdgeId) -> VertexId {
        self.edges[e.index()].range
    }

    pub fn squares(&self) -> &[Square] {
        &self.squares
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    /// Edges with range v, i.e. the set vΛ^{e_*}, sorted by (colour, name).
    pub fn edges_with_range(&self, v: VertexId) -> &[EdgeId] {
        &self.by_range[v.index()]
    }

    /// Edges with source v.
    pub fn edges_with_source(&self, v: VertexId) -> &[EdgeId] {
        &self.by_source[v.index()]
    }

    pub fn edges_with_range_colour(
        &self,
        v: VertexId,
        colour: usize,
    ) -> impl Iterator<Item = EdgeId> + '_ {
        self.by_range[v.index()]
            .iter()
            .copied()
            .filter(move |&e| self.colour(e) == colour)
    }

    /// The partner word of a bicoloured word, in the opposite colour order.
    pub fn partner(&self, x: EdgeId, y: EdgeId) -> Option<(EdgeId, EdgeId)> {
        self.partner.get(&(x, y)).copied()
    }

    /// True when v emits no colour-`colour` edge (vΛ^{e_colour} = ∅).
    pub fn is_colour_source(&self, v: VertexId, colour: usize) -> bool {
        self.edges_with_range_colour(v, colour).next().is_none()
    }

    /// The vertex matrix for one colour: entry (v, w) counts the
    /// colour-`colour` edges with range v and source w.
    pub fn vertex_matrix(&self, colour: usize) -> IntMatrix {
        let n = self.vertex_count();
        let mut m = IntMatrix::zero(n, n);
        for e in &self.edges {
            if e.colour == colour {
                m[(e.range.index(), e.source.index())] += BigInt::from(1);
            }
        }
        m
    }

    /// Full presentation validation: square bijectivity, the associativity
    /// condition on tricoloured triples when k >= 3, local convexity, and
    /// bookkeeping of colour sources. `accepted` reflects the first two
    /// checks only.
    pub fn validate(&self) -> ValidationReport {
        let mut problems = Vec::new();

        // Every composable bicoloured word must be covered exactly once.
        let mut seen_missing = BTreeSet::new();
        for x in self.edge_ids() {
            for &y in self.edges_with_range(self.source(x)) {
                if self.colour(x) == self.colour(y) {
                    continue;
                }
                if !self.partner.contains_key(&(x, y)) {
                    seen_missing.insert((x, y));
                }
            }
        }
        for (x, y) in seen_missing {
            problems.push(ValidationProblem::MissingSquare { word: (x, y) });
        }
        for &word in &self.duplicated_words {
            problems.push(ValidationProblem::DuplicateSquare { word });
        }

        // Associativity on tricoloured triples, meaningful only once the
        // pairing is a bijection.
        if self.rank >= 3 && problems.is_empty() {
            'outer: for a in self.edge_ids() {
                for &b in self.edges_with_range(self.source(a)) {
                    for &c in self.edges_with_range(self.source(b)) {
                        let cols = [self.colour(a), self.colour(b), self.colour(c)];
                        if cols[0] == cols[1] || cols[0] == cols[2] || cols[1] == cols[2] {
                            continue;
                        }
                        if !self.cube_commutes(a, b, c) {
                            problems.push(ValidationProblem::CubeViolation { triple: (a, b, c) });
                            if problems.len() > 32 {
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }

        let mut convexity_failures = Vec::new();
        for e in self.edge_ids() {
            let i = self.colour(e);
            for j in 1..=self.rank {
                if j == i {
                    continue;
                }
                if !self.is_colour_source(self.range(e), j) && self.is_colour_source(self.source(e), j)
                {
                    convexity_failures.push((e, j));
                }
            }
        }

        let mut sources = Vec::new();
        for v in self.vertex_ids() {
            for j in 1..=self.rank {
                if self.is_colour_source(v, j) {
                    sources.push((v, j));
                }
            }
        }

        ValidationReport {
            accepted: problems.is_empty(),
            problems,
            locally_convex: convexity_failures.is_empty(),
            convexity_failures,
            // Finite skeletons have finite vΛ^n for every n.
            row_finite: true,
            sources,
        }
    }

    /// Rewrite [a,b,c] to the reversed colour order along both extreme
    /// routes and compare.
    fn cube_commutes(&self, a: EdgeId, b: EdgeId, c: EdgeId) -> bool {
        let swap = |w: &mut [EdgeId; 3], t: usize| -> bool {
            match self.partner(w[t], w[t + 1]) {
                Some((p, q)) => {
                    w[t] = p;
                    w[t + 1] = q;
                    true
                }
                None => false,
            }
        };
        let mut left = [a, b, c];
        let mut right = [a, b, c];
        let ok = swap(&mut left, 0)
            && swap(&mut left, 1)
            && swap(&mut left, 0)
            && swap(&mut right, 1)
            && swap(&mut right, 0)
            && swap(&mut right, 1);
        ok && left == right
    }

    pub fn is_accepted(&self) -> bool {
        self.validate().accepted
    }

    /// Degrees m <= bound, refusing coordinates beyond the enumeration cap.
    pub(crate) fn check_degree_cap(&self, bound: &Degree) -> Result<()> {
        if bound.coords().iter().any(|&c| c > self.limits.max_degree) {
            return Err(Error::LimitExceeded(format!(
                "degree {bound} exceeds the per-coordinate cap {}",
                self.limits.max_degree
            )));
        }
        Ok(())
    }

    pub fn describe_word(&self, word: (EdgeId, EdgeId)) -> String {
        format!(
            "{} {}",
            self.edge_data(word.0).name,
            self.edge_data(word.1).name
        )
    }
}

impl PartialEq for Skeleton {
    /// Structural equality on the named presentation (limits ignored).
    fn eq(&self, other: &Self) -> bool {
        if self.rank != other.rank || self.vertices != other.vertices {
            return false;
        }
        let edge_key = |sk: &Skeleton| -> Vec<(String, usize, String, String)> {
            sk.edges
                .iter()
                .map(|e| {
                    (
                        e.name.clone(),
                        e.colour,
                        sk.vertex_name(e.source).to_string(),
                        sk.vertex_name(e.range).to_string(),
                    )
                })
                .collect()
        };
        if edge_key(self) != edge_key(other) {
            return false;
        }
        let square_key = |sk: &Skeleton| -> BTreeSet<[String; 4]> {
            sk.squares
                .iter()
                .map(|sq| {
                    [
                        sk.edge_data(sq.first.0).name.clone(),
                        sk.edge_data(sq.first.1).name.clone(),
                        sk.edge_data(sq.second.0).name.clone(),
                        sk.edge_data(sq.second.1).name.clone(),
                    ]
                })
                .collect()
        };
        square_key(self) == square_key(other)
    }
}

impl Eq for Skeleton {}

impl std::fmt::Debug for Skeleton {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Skeleton(rank {}, {} vertices, {} edges, {} squares)",
            self.rank,
            self.vertices.len(),
            self.edges.len(),
            self.squares.len()
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValidationProblem {
    MissingSquare { word: (EdgeId, EdgeId) },
    DuplicateSquare { word: (EdgeId, EdgeId) },
    CubeViolation { triple: (EdgeId, EdgeId, EdgeId) },
}

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub accepted: bool,
    pub problems: Vec<ValidationProblem>,
    pub locally_convex: bool,
    pub convexity_failures: Vec<(EdgeId, usize)>,
    pub row_finite: bool,
    /// (vertex, colour) pairs with vΛ^{e_colour} = ∅.
    pub sources: Vec<(VertexId, usize)>,
}

impl ValidationReport {
    pub fn describe(&self, sk: &Skeleton) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "bijectivity: {}\n",
            if self
                .problems
                .iter()
                .any(|p| !matches!(p, ValidationProblem::CubeViolation { .. }))
            {
                "FAIL"
            } else {
                "ok"
            }
        ));
        if sk.rank() >= 3 {
            out.push_str(&format!(
                "cube condition: {}\n",
                if self
                    .problems
                    .iter()
                    .any(|p| matches!(p, ValidationProblem::CubeViolation { .. }))
                {
                    "FAIL"
                } else {
                    "ok"
                }
            ));
        }
        for p in &self.problems {
            match p {
                ValidationProblem::MissingSquare { word } => {
                    out.push_str(&format!("  missing square: {}\n", sk.describe_word(*word)));
                }
                ValidationProblem::DuplicateSquare { word } => {
                    out.push_str(&format!(
                        "  duplicate square on target word: {}\n",
                        sk.describe_word(*word)
                    ));
                }
                ValidationProblem::CubeViolation { triple } => {
                    out.push_str(&format!(
                        "  cube violation: {} {} {}\n",
                        sk.edge_data(triple.0).name,
                        sk.edge_data(triple.1).name,
                        sk.edge_data(triple.2).name
                    ));
                }
            }
        }
        out.push_str(&format!("locally convex: {}\n", self.locally_convex));
        out.push_str(&format!("row finite: {}\n", self.row_finite));
        if self.sources.is_empty() {
            out.push_str("sources per colour: none\n");
        } else {
            out.push_str("sources per colour:\n");
            for (v, c) in &self.sources {
                out.push_str(&format!("  {} misses colour {}\n", sk.vertex_name(*v), c));
            }
        }
        out.push_str(&format!(
            "accepted: {}\n",
            if self.accepted { "yes" } else { "no" }
        ));
        out
    }
}
