//! Builders for standard graph constructions (grid categories, pullbacks,
//! skew-product windows, products, the length-functor examples) and a
//! curated fixture catalogue exposed by name.

use std::collections::{BTreeMap, BTreeSet};

use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::paths::{paths_from, Path};
use crate::skeleton::{EdgeId, Skeleton, SkeletonBuilder, VertexId};

fn coords_name(prefix: &str, coords: &[i64]) -> String {
    let inner: Vec<String> = coords.iter().map(i64::to_string).collect();
    format!("{prefix}({})", inner.join(","))
}

/// The grid category with vertices p <= m and one edge per colour step.
/// Between any two vertices there is at most one bicoloured path per colour
/// pair, so the squares are forced.
pub fn build_omega(k: usize, m: &Degree) -> Skeleton {
    assert_eq!(m.rank(), k);
    let mut b = SkeletonBuilder::new(k);
    let points = m.box_iter();
    let name_of = |p: &Degree| {
        coords_name(
            "v",
            &p.coords().iter().map(|&c| c as i64).collect::<Vec<_>>(),
        )
    };
    for p in &points {
        b.vertex(name_of(p));
    }
    let edge_name = |colour: usize, p: &Degree| {
        coords_name(
            &format!("e{colour}"),
            &p.coords().iter().map(|&c| c as i64).collect::<Vec<_>>(),
        )
    };
    for p in &points {
        for colour in 1..=k {
            let q = p.plus(&Degree::basis(k, colour));
            if q.leq(m) {
                b.edge(edge_name(colour, p), colour, name_of(&q), name_of(p));
            }
        }
    }
    for p in &points {
        for i in 1..=k {
            for j in i + 1..=k {
                let pi = p.plus(&Degree::basis(k, i));
                let pj = p.plus(&Degree::basis(k, j));
                let pij = pi.plus(&Degree::basis(k, j));
                if pij.leq(m) {
                    // (i at p)·(j at p+e_i) = (j at p)·(i at p+e_j)
                    b.square(
                        edge_name(i, p),
                        edge_name(j, &pi),
                        edge_name(j, p),
                        edge_name(i, &pj),
                    );
                }
            }
        }
    }
    b.finish().expect("grid construction is well-formed")
}

/// Pullback along a surjective homomorphism N^k -> N^l given by its columns
/// f(e_i), each a standard generator of N^l. Edges of base colour c lift to
/// every colour i with f(e_i) = e_c; squares lift accordingly, with the
/// colour-swap rule on same-base-colour pairs.
pub fn build_pullback(base: &Skeleton, f_columns: &[usize]) -> Result<Skeleton> {
    let k = f_columns.len();
    let l = base.rank();
    for &c in f_columns {
        if c < 1 || c > l {
            return Err(Error::ColourOutOfRange { colour: c, rank: l });
        }
    }
    for c in 1..=l {
        if !f_columns.contains(&c) {
            return Err(Error::NotSurjective);
        }
    }
    let mut b = SkeletonBuilder::new(k);
    for v in base.vertex_ids() {
        b.vertex(base.vertex_name(v));
    }
    let lift_name = |e: EdgeId, i: usize| format!("{}^{}", base.edge_data(e).name, i);
    for e in base.edge_ids() {
        let d = base.edge_data(e);
        for (idx, &c) in f_columns.iter().enumerate() {
            let i = idx + 1;
            if c == d.colour {
                b.edge(
                    lift_name(e, i),
                    i,
                    base.vertex_name(d.source),
                    base.vertex_name(d.range),
                );
            }
        }
    }
    // Squares: for lifted colours i != j on a composable base pair (x, y).
    let lifts = |colour: usize| -> Vec<usize> {
        f_columns
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c == colour)
            .map(|(idx, _)| idx + 1)
            .collect()
    };
    for x in base.edge_ids() {
        for &y in base.edges_with_range(base.source(x)) {
            let (cx, cy) = (base.colour(x), base.colour(y));
            for &i in &lifts(cx) {
                for &j in &lifts(cy) {
                    if i >= j {
                        continue;
                    }
                    if cx == cy {
                        // Unique factorisation in the base forces the same
                        // edges in swapped colours.
                        b.square(lift_name(x, i), lift_name(y, j), lift_name(x, j), lift_name(y, i));
                    } else {
                        let (p, q) = base
                            .partner(x, y)
                            .ok_or_else(|| Error::MissingRule(
                                base.edge_data(x).name.clone(),
                                base.edge_data(y).name.clone(),
                            ))?;
                        b.square(lift_name(x, i), lift_name(y, j), lift_name(p, j), lift_name(q, i));
                    }
                }
            }
        }
    }
    b.finish()
}

/// An edge-generated assignment into Z^dim, extended additively to paths.
/// Functoriality holds exactly when both sides of every square agree.
#[derive(Clone, Debug)]
pub struct Functor {
    pub dim: usize,
    pub edge_values: BTreeMap<EdgeId, Vec<i64>>,
}

impl Functor {
    pub fn new(dim: usize, edge_values: BTreeMap<EdgeId, Vec<i64>>) -> Self {
        Functor { dim, edge_values }
    }

    pub fn value_of_edge(&self, e: EdgeId) -> Result<&Vec<i64>> {
        self.edge_values
            .get(&e)
            .ok_or_else(|| Error::FunctorIncomplete(format!("edge #{}", e.index())))
    }

    pub fn value_of_path(&self, p: &Path) -> Result<Vec<i64>> {
        let mut out = vec![0i64; self.dim];
        for &e in p.word() {
            for (o, v) in out.iter_mut().zip(self.value_of_edge(e)?) {
                *o += v;
            }
        }
        Ok(out)
    }

    /// Check totality and square compatibility against a skeleton.
    pub fn validate(&self, sk: &Skeleton) -> Result<()> {
        for e in sk.edge_ids() {
            let v = self
                .edge_values
                .get(&e)
                .ok_or_else(|| Error::FunctorIncomplete(sk.edge_data(e).name.clone()))?;
            if v.len() != self.dim {
                return Err(Error::Invalid(format!(
                    "functor value on `{}` has wrong dimension",
                    sk.edge_data(e).name
                )));
            }
        }
        for sq in sk.squares() {
            let sum = |a: EdgeId, b: EdgeId| -> Result<Vec<i64>> {
                Ok(self
                    .value_of_edge(a)?
                    .iter()
                    .zip(self.value_of_edge(b)?)
                    .map(|(x, y)| x + y)
                    .collect())
            };
            if sum(sq.first.0, sq.first.1)? != sum(sq.second.0, sq.second.1)? {
                return Err(Error::FunctorIncompatible(
                    sk.edge_data(sq.first.0).name.clone(),
                    sk.edge_data(sq.first.1).name.clone(),
                    sk.edge_data(sq.second.0).name.clone(),
                    sk.edge_data(sq.second.1).name.clone(),
                ));
            }
        }
        Ok(())
    }
}

/// Result of a windowed skew product, with repair bookkeeping. `interior`
/// holds the vertices that kept their full edge neighbourhood, where the
/// infinite graph and the window agree locally.
#[derive(Clone, Debug)]
pub struct WindowBuild {
    pub skeleton: Skeleton,
    pub skipped_boundary_edges: usize,
    pub repaired_edges: usize,
    pub dropped_squares: usize,
    pub interior: BTreeSet<VertexId>,
}

fn in_box(m: &[i64], lo: &[i64], hi: &[i64]) -> bool {
    m.iter()
        .zip(lo.iter().zip(hi))
        .all(|(&x, (&l, &h))| l <= x && x <= h)
}

fn box_points(lo: &[i64], hi: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for (l, h) in lo.iter().zip(hi) {
        let mut next = Vec::new();
        for p in &out {
            for x in *l..=*h {
                let mut q = p.clone();
                q.push(x);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// The window of the skew product of `base` by the functor `c` over the box
/// lo..hi: one vertex per (base vertex, offset), an edge per (base edge,
/// offset) whose endpoints stay inside, and the offset copies of the base
/// squares. Boundary-orphaned bicoloured words are repaired by deleting
/// their edges, iterated until the validator accepts.
///
/// The repair protects the window core: the greatest set of (vertex, offset)
/// pairs whose outgoing edges leave the box only all at once. Words inside
/// the core always close up (the partner word stays inside it), so deleting
/// only non-core edges reaches a valid skeleton that agrees with the
/// unwindowed graph on the core.
pub fn build_skew_window(
    base: &Skeleton,
    c: &Functor,
    lo: &[i64],
    hi: &[i64],
) -> Result<WindowBuild> {
    let dim = base.rank();
    if c.dim != dim || lo.len() != dim || hi.len() != dim {
        return Err(Error::RankMismatch {
            expected: dim,
            got: c.dim,
        });
    }
    if lo.iter().zip(hi).any(|(l, h)| l > h) {
        return Err(Error::EmptyWindow);
    }
    c.validate(base)?;

    let offsets = box_points(lo, hi);
    let vname = |v: VertexId, m: &[i64]| coords_name(base.vertex_name(v), m);
    let ename = |e: EdgeId, m: &[i64]| coords_name(&base.edge_data(e).name, m);
    let shifted = |m: &[i64], by: &[i64]| -> Vec<i64> {
        m.iter().zip(by).map(|(a, b)| a + b).collect()
    };

    // (base edge, offset) pairs still alive.
    let mut alive: BTreeSet<(EdgeId, Vec<i64>)> = BTreeSet::new();
    let mut skipped_boundary_edges = 0usize;
    for e in base.edge_ids() {
        let ce = c.value_of_edge(e)?;
        for m in &offsets {
            if in_box(&shifted(m, ce), lo, hi) {
                alive.insert((e, m.clone()));
            } else {
                skipped_boundary_edges += 1;
            }
        }
    }

    // Greatest fixpoint of the all-or-nothing exit rule.
    let mut core: BTreeSet<(VertexId, Vec<i64>)> = base
        .vertex_ids()
        .flat_map(|v| offsets.iter().map(move |m| (v, m.clone())))
        .collect();
    loop {
        let mut shrink = Vec::new();
        for (v, m) in &core {
            let mut inside = 0usize;
            let mut outside = 0usize;
            let mut broken = false;
            for &e in base.edges_with_range(*v) {
                let target = shifted(m, c.value_of_edge(e)?);
                if in_box(&target, lo, hi) {
                    inside += 1;
                    if !core.contains(&(base.source(e), target)) {
                        broken = true;
                    }
                } else {
                    outside += 1;
                }
            }
            if broken || (inside > 0 && outside > 0) {
                shrink.push((*v, m.clone()));
            }
        }
        if shrink.is_empty() {
            break;
        }
        for key in shrink {
            core.remove(&key);
        }
    }
    let edge_in_core = |e: EdgeId, m: &[i64], c: &Functor| -> bool {
        core.contains(&(base.range(e), m.to_vec()))
            && c
                .value_of_edge(e)
                .map(|ce| core.contains(&(base.source(e), shifted(m, ce))))
                .unwrap_or(false)
    };

    let mut repaired_edges = 0usize;
    loop {
        let mut b = SkeletonBuilder::new(dim);
        b.limits(*base.limits());
        for v in base.vertex_ids() {
            for m in &offsets {
                b.vertex(vname(v, m));
            }
        }
        for (e, m) in &alive {
            let d = base.edge_data(*e);
            let src = shifted(m, c.value_of_edge(*e)?);
            b.edge(ename(*e, m), d.colour, vname(d.source, &src), vname(d.range, m));
        }
        let mut dropped_squares = 0usize;
        for sq in base.squares() {
            let (a, bb) = sq.first;
            let (p, q) = sq.second;
            for m in &offsets {
                let mb = shifted(m, c.value_of_edge(a)?);
                let mq = shifted(m, c.value_of_edge(p)?);
                let all_alive = alive.contains(&(a, m.clone()))
                    && alive.contains(&(bb, mb.clone()))
                    && alive.contains(&(p, m.clone()))
                    && alive.contains(&(q, mq.clone()));
                if all_alive {
                    b.square(ename(a, m), ename(bb, &mb), ename(p, m), ename(q, &mq));
                } else if alive.contains(&(a, m.clone())) || alive.contains(&(p, m.clone())) {
                    dropped_squares += 1;
                }
            }
        }
        let sk = b.finish()?;
        let report = sk.validate();
        if report.accepted {
            // Interior: every outgoing base edge survived, so the defining
            // relations at the vertex match the unwindowed graph.
            let mut interior = BTreeSet::new();
            for v in base.vertex_ids() {
                'offsets: for m in &offsets {
                    if base.edges_with_range(v).is_empty() {
                        continue;
                    }
                    for &e in base.edges_with_range(v) {
                        if !alive.contains(&(e, m.clone())) {
                            continue 'offsets;
                        }
                    }
                    interior.insert(sk.vertex(&vname(v, m)).expect("window vertex"));
                }
            }
            return Ok(WindowBuild {
                skeleton: sk,
                skipped_boundary_edges,
                repaired_edges,
                dropped_squares,
                interior,
            });
        }
        // Delete the non-core edges of every uncovered bicoloured word and
        // retry; core words always have live partners, so each orphan offers
        // a deletable edge.
        let mut removed = false;
        for problem in &report.problems {
            if let crate::skeleton::ValidationProblem::MissingSquare { word } = problem {
                for part in [word.0, word.1] {
                    let data = sk.edge_data(part);
                    // Decode "{base}({m})" back to the (edge, offset) key.
                    let (stem, rest) = data.name.split_at(data.name.find('(').unwrap());
                    let coords: Vec<i64> = rest
                        .trim_start_matches('(')
                        .trim_end_matches(')')
                        .split(',')
                        .map(|t| t.parse().unwrap())
                        .collect();
                    let e = base.edge(stem).expect("window edge stems from the base");
                    if edge_in_core(e, &coords, c) {
                        continue;
                    }
                    if alive.remove(&(e, coords)) {
                        repaired_edges += 1;
                        removed = true;
                    }
                }
            }
        }
        if !removed {
            return Err(Error::QuotientNotAccepted(report.describe(&sk)));
        }
    }
}

/// The product of a j-graph and an l-graph: a (j+l)-graph on vertex pairs,
/// with mixed squares commuting by construction.
pub fn build_product(left: &Skeleton, right: &Skeleton) -> Result<Skeleton> {
    let j = left.rank();
    let k = j + right.rank();
    let mut b = SkeletonBuilder::new(k);
    let vname = |v: VertexId, w: VertexId| {
        format!("({},{})", left.vertex_name(v), right.vertex_name(w))
    };
    for v in left.vertex_ids() {
        for w in right.vertex_ids() {
            b.vertex(vname(v, w));
        }
    }
    let lname = |e: EdgeId, w: VertexId| {
        format!("({},{})", left.edge_data(e).name, right.vertex_name(w))
    };
    let rname = |v: VertexId, g: EdgeId| {
        format!("({},{})", left.vertex_name(v), right.edge_data(g).name)
    };
    for e in left.edge_ids() {
        let d = left.edge_data(e);
        for w in right.vertex_ids() {
            b.edge(lname(e, w), d.colour, vname(d.source, w), vname(d.range, w));
        }
    }
    for g in right.edge_ids() {
        let d = right.edge_data(g);
        for v in left.vertex_ids() {
            b.edge(rname(v, g), j + d.colour, vname(v, d.source), vname(v, d.range));
        }
    }
    // Factor squares at every vertex of the other factor.
    for sq in left.squares() {
        for w in right.vertex_ids() {
            b.square(
                lname(sq.first.0, w),
                lname(sq.first.1, w),
                lname(sq.second.0, w),
                lname(sq.second.1, w),
            );
        }
    }
    for sq in right.squares() {
        for v in left.vertex_ids() {
            b.square(
                rname(v, sq.first.0),
                rname(v, sq.first.1),
                rname(v, sq.second.0),
                rname(v, sq.second.1),
            );
        }
    }
    // Mixed squares: (e at r(g))·(g at s(e)) = (g at r(e))·(e at s(g)).
    for e in left.edge_ids() {
        let de = left.edge_data(e);
        for g in right.edge_ids() {
            let dg = right.edge_data(g);
            b.square(
                lname(e, dg.range),
                rname(de.source, g),
                rname(de.range, g),
                lname(e, dg.source),
            );
        }
    }
    b.finish()
}

/// The length-functor construction over a finite 1-graph: the pullback along
/// n -> |n| together with the functor whose first k-1 coordinates twist by
/// the chosen edge weights and whose last coordinate is the base length.
#[derive(Clone, Debug)]
pub struct LengthFunctorGraph {
    pub base: Skeleton,
    pub pullback: Skeleton,
    pub functor: Functor,
    /// Per base edge: 0 for the zero vector, or j in 1..k for e_j (j < k).
    pub c0: BTreeMap<String, usize>,
    pub k: usize,
}

pub fn build_length_functor_graph(
    base: &Skeleton,
    c0: &BTreeMap<String, usize>,
    k: usize,
) -> Result<LengthFunctorGraph> {
    if base.rank() != 1 {
        return Err(Error::UnsupportedRank(base.rank()));
    }
    if k < 2 {
        return Err(Error::UnsupportedRank(k));
    }
    for e in base.edge_ids() {
        let name = &base.edge_data(e).name;
        match c0.get(name) {
            None => return Err(Error::FunctorIncomplete(name.clone())),
            Some(&j) if j >= k => {
                return Err(Error::Invalid(format!(
                    "c0({name}) must be 0 or a generator index below {k}"
                )))
            }
            _ => {}
        }
    }
    let pullback = build_pullback(base, &vec![1; k])?;
    let mut edge_values = BTreeMap::new();
    for e in pullback.edge_ids() {
        let data = pullback.edge_data(e);
        let (stem, colour_tag) = data.name.rsplit_once('^').ok_or(Error::NotExample42Graph)?;
        let i: usize = colour_tag.parse().map_err(|_| Error::NotExample42Graph)?;
        let c0_j = c0[stem];
        let mut value = vec![0i64; k];
        for (j, slot) in value.iter_mut().enumerate().take(k - 1) {
            let base_coord = i64::from(c0_j == j + 1);
            *slot = base_coord - 1 + i64::from(i == j + 1);
        }
        value[k - 1] = 1;
        edge_values.insert(e, value);
    }
    let functor = Functor::new(k, edge_values);
    functor.validate(&pullback)?;
    Ok(LengthFunctorGraph {
        base: base.clone(),
        pullback,
        functor,
        c0: c0.clone(),
        k,
    })
}

#[derive(Clone, Debug, Default)]
pub struct SkewIdentityReport {
    pub equal_source_pairs: usize,
    pub functor_cross_checks: usize,
    pub degree_quadruples: usize,
    pub failures: Vec<String>,
}

impl SkewIdentityReport {
    pub fn all_pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Exercise the bookkeeping identities of the length-functor construction:
/// for base paths of equal length the canonical lifted degrees give equal
/// functor values exactly on equal sources, and equal-value degree pairs
/// satisfy a + n = m + b.
pub fn verify_skew_identities(g: &LengthFunctorGraph, n_max: u32) -> Result<SkewIdentityReport> {
    let mut report = SkewIdentityReport::default();
    let k = g.k;
    let c0_of_path = |p: &Path| -> Vec<i64> {
        let mut out = vec![0i64; k];
        for &e in p.word() {
            let j = g.c0[&g.base.edge_data(e).name];
            if j > 0 {
                out[j - 1] += 1;
            }
        }
        out
    };
    // c(lambda, n)_j = c0(lambda)_j - sum_{i != j} n_i for j < k, |lambda| at k.
    let c_of = |p: &Path, n: &[i64]| -> Vec<i64> {
        let c0 = c0_of_path(p);
        let total: i64 = n.iter().sum();
        let mut out = vec![0i64; k];
        for j in 0..k - 1 {
            out[j] = c0[j] - (total - n[j]);
        }
        out[k - 1] = p.len() as i64;
        out
    };
    let degrees_of_total = |total: u32| -> Vec<Vec<i64>> {
        Degree::constant(k, total)
            .box_iter()
            .into_iter()
            .filter(|d| d.total() == u64::from(total))
            .map(|d| d.coords().iter().map(|&c| c as i64).collect())
            .collect()
    };

    for n in 1..=n_max {
        for v in g.base.vertex_ids() {
            let pool = paths_from(&g.base, v, &Degree::new(vec![n]))?;
            for alpha in &pool {
                for beta in &pool {
                    let c0a = c0_of_path(alpha);
                    let c0b = c0_of_path(beta);
                    let total = |v: &[i64]| -> i64 { v.iter().sum() };
                    let mut a: Vec<i64> = c0b.clone();
                    a[k - 1] = i64::from(n) - total(&c0b);
                    let mut bv: Vec<i64> = c0a.clone();
                    bv[k - 1] = i64::from(n) - total(&c0a);
                    if a.iter().any(|&x| x < 0) || bv.iter().any(|&x| x < 0) {
                        continue;
                    }
                    report.equal_source_pairs += 1;
                    let ca = c_of(alpha, &a);
                    let cb = c_of(beta, &bv);
                    if ca != cb {
                        report.failures.push(format!(
                            "value mismatch on paths {} / {}",
                            alpha.display(&g.base),
                            beta.display(&g.base)
                        ));
                    }
                    // Cross-check one side through the lifted path's functor
                    // value.
                    if let Some(lifted) = lift_to_degree(g, alpha, &a)? {
                        report.functor_cross_checks += 1;
                        if g.functor.value_of_path(&lifted)? != ca {
                            report
                                .failures
                                .push(format!("functor disagrees on {}", alpha.display(&g.base)));
                        }
                    }
                }
            }
        }
    }

    // a + n = m + b whenever the twisted values agree pairwise.
    for n in 1..=n_max {
        let degrees = degrees_of_total(n);
        for v in g.base.vertex_ids() {
            let pool = paths_from(&g.base, v, &Degree::new(vec![n]))?;
            for x in &pool {
                for y in &pool {
                    if x.source() != y.source() {
                        continue;
                    }
                    for m in &degrees {
                        for nn in &degrees {
                            if c_of(x, m) != c_of(y, nn) {
                                continue;
                            }
                            for a in &degrees {
                                for b in &degrees {
                                    if c_of(x, a) != c_of(y, b) {
                                        continue;
                                    }
                                    report.degree_quadruples += 1;
                                    let lhs: Vec<i64> =
                                        a.iter().zip(nn).map(|(p, q)| p + q).collect();
                                    let rhs: Vec<i64> =
                                        m.iter().zip(b).map(|(p, q)| p + q).collect();
                                    if lhs != rhs {
                                        report.failures.push(format!(
                                            "degree bookkeeping fails on {} / {}",
                                            x.display(&g.base),
                                            y.display(&g.base)
                                        ));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

/// The unique pullback path over `base_path` with the given lifted degree,
/// when the degree is admissible.
fn lift_to_degree(
    g: &LengthFunctorGraph,
    base_path: &Path,
    degree: &[i64],
) -> Result<Option<Path>> {
    if degree.iter().any(|&x| x < 0)
        || degree.iter().sum::<i64>() != base_path.len() as i64
    {
        return Ok(None);
    }
    // Canonical colour sequence: colours non-decreasing.
    let mut colours = Vec::new();
    for (j, &count) in degree.iter().enumerate() {
        colours.extend(std::iter::repeat(j + 1).take(count as usize));
    }
    let mut word = Vec::new();
    for (t, &e) in base_path.word().iter().enumerate() {
        let name = format!("{}^{}", g.base.edge_data(e).name, colours[t]);
        word.push(
            g.pullback
                .edge(&name)
                .ok_or(Error::NotExample42Graph)?,
        );
    }
    if word.is_empty() {
        let v = g
            .pullback
            .vertex(g.base.vertex_name(base_path.range()))
            .ok_or(Error::NotExample42Graph)?;
        return Ok(Some(Path::vertex(&g.pullback, v)));
    }
    Ok(Some(crate::paths::normalize(&g.pullback, &word)?))
}

// ---------------------------------------------------------------------------
// Fixture catalogue
// ---------------------------------------------------------------------------

/// One vertex with one commuting loop per colour.
pub fn torus(k: usize) -> Skeleton {
    let mut b = SkeletonBuilder::new(k);
    b.vertex("v");
    let name = |i: usize| ((b'a' + (i - 1) as u8) as char).to_string();
    for i in 1..=k {
        b.edge(name(i), i, "v", "v");
    }
    for i in 1..=k {
        for j in i + 1..=k {
            b.square(name(i), name(j), name(j), name(i));
        }
    }
    b.finish().expect("torus is well-formed")
}

/// Directed cycle on n vertices, single colour.
pub fn ncycle(n: usize) -> Skeleton {
    let mut b = SkeletonBuilder::new(1);
    for i in 0..n {
        b.vertex(format!("v{i}"));
    }
    for i in 0..n {
        // g{i}: range v{i}, source v{i+1}.
        b.edge(format!("g{i}"), 1, format!("v{}", (i + 1) % n), format!("v{i}"));
    }
    b.finish().expect("cycle is well-formed")
}

/// One vertex, n loops of one colour.
pub fn bouquet(n: usize) -> Skeleton {
    assert!(n >= 1 && n <= 26);
    let mut b = SkeletonBuilder::new(1);
    b.vertex("v");
    for i in 0..n {
        b.edge(((b'a' + i as u8) as char).to_string(), 1, "v", "v");
    }
    b.finish().expect("bouquet is well-formed")
}

fn loop_with_exit(cofinal: bool) -> Skeleton {
    let mut b = SkeletonBuilder::new(1);
    b.vertex("v");
    b.vertex("w");
    b.edge("l", 1, "v", "v");
    b.edge("x", 1, "w", "v");
    if cofinal {
        b.edge("y", 1, "v", "w");
    }
    b.finish().expect("loop graph is well-formed")
}

/// Ladder truncation: i parallel edges of each colour from level i down to
/// level i-1, with the index-shifting factorisation rules.
pub fn ladder(levels: usize, capped: bool) -> Skeleton {
    let mut b = SkeletonBuilder::new(2);
    for i in 0..=levels {
        b.vertex(format!("v{i}"));
    }
    for i in 1..=levels {
        for j in 0..i {
            b.edge(format!("a^{i}_{j}"), 1, format!("v{i}"), format!("v{}", i - 1));
            b.edge(format!("b^{i}_{j}"), 2, format!("v{i}"), format!("v{}", i - 1));
        }
    }
    for i in 1..levels {
        for j in 0..i {
            for k in 0..=i {
                b.square(
                    format!("a^{i}_{j}"),
                    format!("b^{}_{}", i + 1, k),
                    format!("b^{i}_{}", (j + 1) % i),
                    format!("a^{}_{}", i + 1, (k + 1) % (i + 1)),
                );
            }
        }
    }
    if capped {
        b.edge("a_cap", 1, format!("v{levels}"), format!("v{levels}"));
        b.edge("b_cap", 2, format!("v{levels}"), format!("v{levels}"));
        b.square("a_cap", "b_cap", "b_cap", "a_cap");
        for j in 0..levels {
            b.square(
                format!("a^{levels}_{j}"),
                "b_cap",
                format!("b^{levels}_{}", (j + 1) % levels),
                "a_cap",
            );
        }
    }
    b.finish().expect("ladder is well-formed")
}

/// A commuting pair of loops fed by a terminal vertex: the feeder edges make
/// the loop pair fail the cycle-pair test upstairs while the quotient by the
/// feeder vertex restores it.
pub fn torus_with_feeder() -> Skeleton {
    let mut b = SkeletonBuilder::new(2);
    b.vertex("w");
    b.vertex("u");
    b.edge("alpha", 1, "w", "w");
    b.edge("beta", 2, "w", "w");
    b.edge("x", 1, "u", "w");
    b.edge("y", 2, "u", "w");
    b.square("alpha", "beta", "beta", "alpha");
    b.square("alpha", "y", "beta", "x");
    b.finish().expect("feeder graph is well-formed")
}

/// Four-edge one-vertex 2-graph with the index-matching rules
/// e_i f_j = f_i e_j.
pub fn p1() -> Skeleton {
    let mut b = SkeletonBuilder::new(2);
    b.vertex("v");
    for name in ["e1", "e2"] {
        b.edge(name, 1, "v", "v");
    }
    for name in ["f1", "f2"] {
        b.edge(name, 2, "v", "v");
    }
    for i in 1..=2 {
        for j in 1..=2 {
            b.square(format!("e{i}"), format!("f{j}"), format!("f{i}"), format!("e{j}"));
        }
    }
    b.finish().expect("p1 is well-formed")
}

/// Same skeleton with the flip rules e_i f_j = f_j e_i; isomorphic to the
/// product of two bouquets.
pub fn p2() -> Skeleton {
    let mut b = SkeletonBuilder::new(2);
    b.vertex("v");
    for name in ["e1", "e2"] {
        b.edge(name, 1, "v", "v");
    }
    for name in ["f1", "f2"] {
        b.edge(name, 2, "v", "v");
    }
    for i in 1..=2 {
        for j in 1..=2 {
            b.square(format!("e{i}"), format!("f{j}"), format!("f{j}"), format!("e{i}"));
        }
    }
    b.finish().expect("p2 is well-formed")
}

/// The standard twisting functor on the four-edge one-vertex graphs.
pub fn standard_window_functor(sk: &Skeleton) -> Functor {
    let mut values = BTreeMap::new();
    values.insert(sk.edge("e1").unwrap(), vec![0, 1]);
    values.insert(sk.edge("e2").unwrap(), vec![1, 1]);
    values.insert(sk.edge("f1").unwrap(), vec![-1, 1]);
    values.insert(sk.edge("f2").unwrap(), vec![0, 1]);
    Functor::new(2, values)
}

/// The skew-product window of `p1`/`p2` over |i| <= 3, 0 <= j <= 3.
pub fn skew_window_fixture(which: &str) -> Result<WindowBuild> {
    let base = match which {
        "p1" => p1(),
        "p2" => p2(),
        _ => return Err(Error::Invalid(format!("no window base named `{which}`"))),
    };
    let c = standard_window_functor(&base);
    build_skew_window(&base, &c, &[-3, 0], &[3, 3])
}

/// Disjoint union of a rank-2 torus and a single-colour 3-cycle, inside one
/// 2-graph.
pub fn mixed_cycles() -> Skeleton {
    let mut b = SkeletonBuilder::new(2);
    b.vertex("v");
    b.edge("a", 1, "v", "v");
    b.edge("b", 2, "v", "v");
    b.square("a", "b", "b", "a");
    for i in 0..3 {
        b.vertex(format!("w{i}"));
    }
    for i in 0..3 {
        b.edge(format!("c{i}"), 1, format!("w{}", (i + 1) % 3), format!("w{i}"));
    }
    b.finish().expect("mixed fixture is well-formed")
}

/// Look up a fixture by its catalogue name. Parameterised families accept
/// any size: `torus-3`, `ncycle-7`, `omega-2-2-1`, `ladder-open-5`,
/// `bouquet-4`.
pub fn fixture(name: &str) -> Option<Skeleton> {
    let parts: Vec<&str> = name.split('-').collect();
    match parts.as_slice() {
        ["torus", "feeder"] => Some(torus_with_feeder()),
        ["torus", k] => k.parse().ok().filter(|&k| (1..=26).contains(&k)).map(torus),
        ["ncycle", n] => n.parse().ok().filter(|&n| n >= 1).map(ncycle),
        ["bouquet", n] => n.parse().ok().filter(|&n| (1..=26).contains(&n)).map(bouquet),
        ["loop", "with", "exit"] => Some(loop_with_exit(false)),
        ["loop", "with", "exit", "cofinal"] => Some(loop_with_exit(true)),
        ["ladder", "open", n] => n.parse().ok().filter(|&n| n >= 1).map(|n| ladder(n, false)),
        ["ladder", "capped", n] => n.parse().ok().filter(|&n| n >= 2).map(|n| ladder(n, true)),
        ["p1"] => Some(p1()),
        ["p2"] => Some(p2()),
        ["p1", "window"] => skew_window_fixture("p1").ok().map(|w| w.skeleton),
        ["p2", "window"] => skew_window_fixture("p2").ok().map(|w| w.skeleton),
        ["mixed", "cycles"] => Some(mixed_cycles()),
        ["omega", rest @ ..] if rest.len() >= 2 => {
            let k: usize = rest[0].parse().ok()?;
            if rest.len() != k + 1 {
                return None;
            }
            let coords: Option<Vec<u32>> = rest[1..].iter().map(|t| t.parse().ok()).collect();
            Some(build_omega(k, &Degree::new(coords?)))
        }
        _ => None,
    }
}

/// The canonical catalogue, in display order.
pub fn fixture_names() -> Vec<&'static str> {
    vec![
        "torus-2",
        "torus-3",
        "ncycle-3",
        "bouquet-2",
        "loop-with-exit",
        "loop-with-exit-cofinal",
        "omega-1-3",
        "omega-2-1-1",
        "omega-2-2-1",
        "ladder-open-4",
        "ladder-capped-4",
        "torus-feeder",
        "p1",
        "p2",
        "p1-window",
        "p2-window",
        "mixed-cycles",
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::paths_from_upto;

    #[test]
    fn every_fixture_is_accepted() {
        for name in fixture_names() {
            let sk = fixture(name).unwrap();
            let report = sk.validate();
            assert!(report.accepted, "{name}: {}", report.describe(&sk));
        }
    }

    #[test]
    fn omega_shapes() {
        let o = fixture("omega-2-1-1").unwrap();
        assert_eq!(o.vertex_count(), 4);
        assert_eq!(o.edge_count(), 4);
        let line = fixture("omega-1-3").unwrap();
        assert_eq!(line.vertex_count(), 4);
        assert_eq!(line.edge_count(), 3);
        let o21 = fixture("omega-2-2-1").unwrap();
        assert_eq!(o21.vertex_count(), 6);
        // colour-1: m1(m2+1) = 4, colour-2: (m1+1)m2 = 3.
        assert_eq!(o21.edge_ids().filter(|&e| o21.colour(e) == 1).count(), 4);
        assert_eq!(o21.edge_ids().filter(|&e| o21.colour(e) == 2).count(), 3);
    }

    #[test]
    fn pullback_of_bouquet_matches_p1() {
        let b2 = bouquet(2);
        let pulled = build_pullback(&b2, &[1, 1]).unwrap();
        assert!(pulled.validate().accepted);
        let reference = p1();
        // e1 -> a^1, e2 -> b^1, f1 -> a^2, f2 -> b^2.
        let rename = BTreeMap::from([
            ("e1", "a^1"),
            ("e2", "b^1"),
            ("f1", "a^2"),
            ("f2", "b^2"),
        ]);
        assert!(isomorphic_under(&rename, &reference, &pulled));
    }

    #[test]
    fn pullback_of_identity_is_isomorphic_copy() {
        let base = ncycle(3);
        let pulled = build_pullback(&base, &[1]).unwrap();
        assert_eq!(pulled.vertex_count(), base.vertex_count());
        assert_eq!(pulled.edge_count(), base.edge_count());
        assert!(pulled.validate().accepted);
    }

    #[test]
    fn pullback_of_segment_doubles_colours() {
        let line = fixture("omega-1-1").unwrap_or_else(|| build_omega(1, &Degree::new(vec![1])));
        let pulled = build_pullback(&line, &[1, 1]).unwrap();
        assert_eq!(pulled.vertex_count(), 2);
        assert_eq!(pulled.edge_count(), 2);
    }

    #[test]
    fn product_of_bouquets_matches_p2() {
        let b2 = bouquet(2);
        let prod = build_product(&b2, &b2).unwrap();
        assert!(prod.validate().accepted);
        let rename = BTreeMap::from([
            ("e1", "(a,v)"),
            ("e2", "(b,v)"),
            ("f1", "(v,a)"),
            ("f2", "(v,b)"),
        ]);
        assert!(isomorphic_under(&rename, &p2(), &prod));
    }

    #[test]
    fn product_of_cycles() {
        let prod = build_product(&ncycle(3), &ncycle(3)).unwrap();
        assert_eq!(prod.vertex_count(), 9);
        assert_eq!(prod.rank(), 2);
        assert!(prod.validate().accepted);
    }

    #[test]
    fn window_edges_follow_the_offset_pattern() {
        let built = skew_window_fixture("p2").unwrap();
        let sk = &built.skeleton;
        // e1(i,j): range v(i,j), source v(i,j+1); e2: source v(i+1,j+1);
        // f1: source v(i-1,j+1); f2: source v(i,j+1).
        for e in sk.edge_ids() {
            let data = sk.edge_data(e);
            let (stem, rest) = data.name.split_at(data.name.find('(').unwrap());
            let coords: Vec<i64> = rest
                .trim_start_matches('(')
                .trim_end_matches(')')
                .split(',')
                .map(|t| t.parse().unwrap())
                .collect();
            let (i, j) = (coords[0], coords[1]);
            assert_eq!(sk.vertex_name(data.range), format!("v({i},{j})"));
            let expected_source = match stem {
                "e1" | "f2" => format!("v({},{})", i, j + 1),
                "e2" => format!("v({},{})", i + 1, j + 1),
                "f1" => format!("v({},{})", i - 1, j + 1),
                other => panic!("unexpected stem {other}"),
            };
            assert_eq!(sk.vertex_name(data.source), expected_source);
        }
    }

    #[test]
    fn window_squares_match_the_shifted_rules() {
        // Flip rules shift offsets by the functor values, e.g.
        // e2(i,j)·f1(i+1,j+1) = f1(i,j)·e2(i-1,j+1).
        let built = skew_window_fixture("p2").unwrap();
        let sk = &built.skeleton;
        let e2 = |i: i64, j: i64| format!("e2({i},{j})");
        let f1 = |i: i64, j: i64| format!("f1({i},{j})");
        let a = sk.edge(&e2(0, 0)).unwrap();
        let bb = sk.edge(&f1(1, 1)).unwrap();
        let (p, q) = sk.partner(a, bb).expect("covered interior word");
        assert_eq!(sk.edge_data(p).name, f1(0, 0));
        assert_eq!(sk.edge_data(q).name, e2(-1, 1));
    }

    #[test]
    fn window_with_zero_functor_is_the_base() {
        let base = p2();
        let mut values = BTreeMap::new();
        for e in base.edge_ids() {
            values.insert(e, vec![0, 0]);
        }
        let c = Functor::new(2, values);
        let built = build_skew_window(&base, &c, &[0, 0], &[0, 0]).unwrap();
        assert_eq!(built.skeleton.vertex_count(), 1);
        assert_eq!(built.skeleton.edge_count(), 4);
        assert_eq!(built.skeleton.squares().len(), 4);
        assert!(built.skeleton.validate().accepted);
    }

    #[test]
    fn length_functor_graph_recovers_the_standard_twist() {
        // c0(a) = 0, c0(b) = e_1 reproduces the window functor exactly.
        let b2 = bouquet(2);
        let c0 = BTreeMap::from([("a".to_string(), 0), ("b".to_string(), 1)]);
        let g = build_length_functor_graph(&b2, &c0, 2).unwrap();
        let expect = BTreeMap::from([
            ("a^1", vec![0, 1]),
            ("b^1", vec![1, 1]),
            ("a^2", vec![-1, 1]),
            ("b^2", vec![0, 1]),
        ]);
        for (name, value) in expect {
            let e = g.pullback.edge(name).unwrap();
            assert_eq!(g.functor.value_of_edge(e).unwrap(), &value, "{name}");
        }
    }

    #[test]
    fn skew_identities_hold_exhaustively() {
        let b2 = bouquet(2);
        let c0 = BTreeMap::from([("a".to_string(), 1), ("b".to_string(), 0)]);
        let g = build_length_functor_graph(&b2, &c0, 2).unwrap();
        let report = verify_skew_identities(&g, 3).unwrap();
        assert!(report.all_pass(), "{:?}", report.failures);
        assert!(report.equal_source_pairs > 0);
        assert!(report.degree_quadruples > 0);
    }

    #[test]
    fn ladder_square_rule_spot_check() {
        let sk = ladder(4, false);
        let a = sk.edge("a^2_1").unwrap();
        let bb = sk.edge("b^3_2").unwrap();
        let (p, q) = sk.partner(a, bb).unwrap();
        // a^2_1 b^3_2 = b^2_{(1+1)%2} a^3_{(2+1)%3}.
        assert_eq!(sk.edge_data(p).name, "b^2_0");
        assert_eq!(sk.edge_data(q).name, "a^3_0");
    }

    #[test]
    fn feeder_square_pairing_is_complete() {
        let sk = torus_with_feeder();
        let alpha = sk.edge("alpha").unwrap();
        let y = sk.edge("y").unwrap();
        let (p, q) = sk.partner(alpha, y).unwrap();
        assert_eq!(sk.edge_data(p).name, "beta");
        assert_eq!(sk.edge_data(q).name, "x");
    }

    #[test]
    fn window_interior_is_nonempty_and_off_boundary() {
        let built = skew_window_fixture("p2").unwrap();
        for &v in &built.interior {
            let name = built.skeleton.vertex_name(v);
            let inner = name.trim_start_matches("v(").trim_end_matches(')');
            let mut parts = inner.split(',');
            let i: i64 = parts.next().unwrap().parse().unwrap();
            let j: i64 = parts.next().unwrap().parse().unwrap();
            assert!(j < 3, "top row cannot be interior: {name}");
            assert!(i.abs() < 3 || j < 3, "{name}");
        }
        assert!(!built.interior.is_empty());
    }

    fn isomorphic_under(
        rename: &BTreeMap<&str, &str>,
        reference: &Skeleton,
        other: &Skeleton,
    ) -> bool {
        if reference.rank() != other.rank()
            || reference.vertex_count() != other.vertex_count()
            || reference.edge_count() != other.edge_count()
            || reference.squares().len() != other.squares().len()
        {
            return false;
        }
        // Edge map must respect colours and (up to the unique vertex map on
        // one-vertex graphs) endpoints; compare the square sets.
        let map_edge = |e: EdgeId| -> Option<EdgeId> {
            let name = &reference.edge_data(e).name;
            other.edge(rename.get(name.as_str())?)
        };
        for e in reference.edge_ids() {
            match map_edge(e) {
                Some(o) => {
                    if reference.colour(e) != other.colour(o) {
                        return false;
                    }
                }
                None => return false,
            }
        }
        let reference_squares: BTreeSet<[EdgeId; 4]> = reference
            .squares()
            .iter()
            .map(|sq| {
                [
                    map_edge(sq.first.0).unwrap(),
                    map_edge(sq.first.1).unwrap(),
                    map_edge(sq.second.0).unwrap(),
                    map_edge(sq.second.1).unwrap(),
                ]
            })
            .collect();
        let other_squares: BTreeSet<[EdgeId; 4]> = other
            .squares()
            .iter()
            .map(|sq| [sq.first.0, sq.first.1, sq.second.0, sq.second.1])
            .collect();
        reference_squares == other_squares
    }

    #[test]
    fn builders_validate_and_project() {
        // Pullback degree law: the lift of a colour-c edge to colour i exists
        // exactly when column i is e_c, and the projection drops the tag.
        let b2 = bouquet(2);
        let pulled = build_pullback(&b2, &[1, 1]).unwrap();
        for e in pulled.edge_ids() {
            let name = &pulled.edge_data(e).name;
            let (stem, tag) = name.rsplit_once('^').unwrap();
            assert!(b2.edge(stem).is_some());
            let colour: usize = tag.parse().unwrap();
            assert_eq!(colour, pulled.colour(e));
        }
        // Square projections commute with the degree map on every declared
        // square of the pullback.
        for sq in pulled.squares() {
            let stem = |e: EdgeId| {
                pulled
                    .edge_data(e)
                    .name
                    .rsplit_once('^')
                    .unwrap()
                    .0
                    .to_string()
            };
            let left = [stem(sq.first.0), stem(sq.first.1)];
            let right = [stem(sq.second.0), stem(sq.second.1)];
            // Both sides project to the same base morphism of length two.
            let mut l = left.to_vec();
            let mut r = right.to_vec();
            l.sort();
            r.sort();
            assert_eq!(l, r);
        }
    }

    #[test]
    fn enumeration_smoke_on_windows() {
        let sk = fixture("p2-window").unwrap();
        let v = sk.vertex("v(0,0)").unwrap();
        let pool = paths_from_upto(&sk, v, &Degree::new(vec![2, 2])).unwrap();
        assert!(!pool.is_empty());
    }
}
