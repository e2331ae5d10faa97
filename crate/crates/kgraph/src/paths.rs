//! Path calculus over an accepted skeleton: canonical forms, composition,
//! segment extraction, and exact enumeration.
//!
//! The canonical word of a path lists its edges with colours non-decreasing
//! from the range end. Rewriting an adjacent descending pair by its square
//! partner strictly reduces colour inversions, so normalisation terminates;
//! on accepted skeletons it is confluent and the canonical word is unique
//! per morphism, which makes path equality a word comparison.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::skeleton::{EdgeId, Skeleton, VertexId};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Path {
    word: Vec<EdgeId>,
    range: VertexId,
    source: VertexId,
    degree: Degree,
}

/// A deduplicated, deterministically ordered set of paths.
pub type PathSet = BTreeSet<Path>;

impl Path {
    /// The degree-zero path at a vertex.
    pub fn vertex(sk: &Skeleton, v: VertexId) -> Path {
        Path {
            word: Vec::new(),
            range: v,
            source: v,
            degree: Degree::zero(sk.rank()),
        }
    }

    pub fn from_edge(sk: &Skeleton, e: EdgeId) -> Path {
        let data = sk.edge_data(e);
        Path {
            word: vec![e],
            range: data.range,
            source: data.source,
            degree: Degree::basis(sk.rank(), data.colour),
        }
    }

    pub fn word(&self) -> &[EdgeId] {
        &self.word
    }

    pub fn degree(&self) -> &Degree {
        &self.degree
    }

    pub fn range(&self) -> VertexId {
        self.range
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn is_vertex(&self) -> bool {
        self.word.is_empty()
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn is_cycle(&self) -> bool {
        !self.word.is_empty() && self.range == self.source
    }

    pub fn edge_names(&self, sk: &Skeleton) -> Vec<String> {
        self.word
            .iter()
            .map(|&e| sk.edge_data(e).name.clone())
            .collect()
    }

    pub fn display(&self, sk: &Skeleton) -> String {
        if self.is_vertex() {
            format!("[{}]", sk.vertex_name(self.range))
        } else {
            self.edge_names(sk).join(".")
        }
    }
}

fn check_composable(sk: &Skeleton, word: &[EdgeId]) -> Result<()> {
    for t in 0..word.len().saturating_sub(1) {
        if sk.source(word[t]) != sk.range(word[t + 1]) {
            return Err(Error::NotComposable { position: t });
        }
    }
    Ok(())
}

fn word_degree(sk: &Skeleton, word: &[EdgeId]) -> Degree {
    let mut d = Degree::zero(sk.rank());
    for &e in word {
        d = d.plus(&Degree::basis(sk.rank(), sk.colour(e)));
    }
    d
}

/// Sort a composable word into canonical colour order by square rewrites.
/// Fails with `NotComposable` on a broken word and `MissingRule` when the
/// presentation does not cover a needed bicoloured pair.
pub fn normalize(sk: &Skeleton, word: &[EdgeId]) -> Result<Path> {
    if word.is_empty() {
        return Err(Error::Invalid(
            "empty word has no range; use Path::vertex".into(),
        ));
    }
    check_composable(sk, word)?;
    let degree = word_degree(sk, word);
    let range = sk.range(word[0]);
    let source = sk.source(word[word.len() - 1]);
    let mut w = word.to_vec();
    loop {
        let mut swapped = false;
        for t in 0..w.len() - 1 {
            if sk.colour(w[t]) > sk.colour(w[t + 1]) {
                let (p, q) = sk.partner(w[t], w[t + 1]).ok_or_else(|| {
                    Error::MissingRule(
                        sk.edge_data(w[t]).name.clone(),
                        sk.edge_data(w[t + 1]).name.clone(),
                    )
                })?;
                w[t] = p;
                w[t + 1] = q;
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    Ok(Path {
        word: w,
        range,
        source,
        degree,
    })
}

/// Compose mu·nu (requires s(mu) = r(nu)).
pub fn compose(sk: &Skeleton, mu: &Path, nu: &Path) -> Result<Path> {
    if mu.source() != nu.range() {
        return Err(Error::NotComposable {
            position: mu.len().saturating_sub(1),
        });
    }
    if mu.is_vertex() {
        return Ok(nu.clone());
    }
    if nu.is_vertex() {
        return Ok(mu.clone());
    }
    let mut w = mu.word.clone();
    w.extend_from_slice(&nu.word);
    normalize(sk, &w)
}

/// Factor `path` as head·tail with d(head) = m.
pub fn split(sk: &Skeleton, path: &Path, m: &Degree) -> Result<(Path, Path)> {
    if m.rank() != sk.rank() || !m.leq(path.degree()) {
        return Err(Error::OutOfRange);
    }
    if m.is_zero() {
        return Ok((Path::vertex(sk, path.range()), path.clone()));
    }
    if m == path.degree() {
        return Ok((path.clone(), Path::vertex(sk, path.source())));
    }
    let cut = m.total() as usize;
    let mut w = path.word.clone();
    let mut need = m.clone();
    for t in 0..cut {
        // Leftmost edge of a colour the head still needs; everything before
        // it has a different colour, so each bubble step is a square rewrite.
        let p = (t..w.len())
            .find(|&p| need.get(sk.colour(w[p])) > 0)
            .expect("degree accounting guarantees a needed colour");
        for q in (t..p).rev() {
            let (a, b) = sk.partner(w[q], w[q + 1]).ok_or_else(|| {
                Error::MissingRule(
                    sk.edge_data(w[q]).name.clone(),
                    sk.edge_data(w[q + 1]).name.clone(),
                )
            })?;
            w[q] = a;
            w[q + 1] = b;
        }
        need = need.minus(&Degree::basis(sk.rank(), sk.colour(w[t])))?;
    }
    let head = normalize(sk, &w[..cut])?;
    let tail = normalize(sk, &w[cut..])?;
    Ok((head, tail))
}

/// The unique segment path(m, n): the middle factor of path = a·s·b with
/// d(a) = m and d(b) = d(path) − n.
pub fn segment(sk: &Skeleton, path: &Path, m: &Degree, n: &Degree) -> Result<Path> {
    if !m.leq(n) || !n.leq(path.degree()) {
        return Err(Error::OutOfRange);
    }
    let (head, _) = split(sk, path, n)?;
    let (_, seg) = split(sk, &head, m)?;
    Ok(seg)
}

/// The vertex path(m) visited at position m of the path's grid.
pub fn vertex_at(sk: &Skeleton, path: &Path, m: &Degree) -> Result<VertexId> {
    Ok(split(sk, path, m)?.0.source())
}

struct Enumerator<'a> {
    sk: &'a Skeleton,
    memo: HashMap<(VertexId, Degree), std::rc::Rc<Vec<Path>>>,
}

impl<'a> Enumerator<'a> {
    fn new(sk: &'a Skeleton) -> Self {
        Enumerator {
            sk,
            memo: HashMap::new(),
        }
    }

    /// All of vΛ^n, sorted by canonical word. Peeling the least present
    /// colour keeps every emitted word canonical, so no deduplication is
    /// needed.
    fn paths(&mut self, v: VertexId, n: &Degree) -> std::rc::Rc<Vec<Path>> {
        if let Some(hit) = self.memo.get(&(v, n.clone())) {
            return hit.clone();
        }
        let result = match n.first_nonzero_colour() {
            None => vec![Path::vertex(self.sk, v)],
            Some(colour) => {
                let rest = n
                    .minus(&Degree::basis(self.sk.rank(), colour))
                    .expect("nonzero coordinate");
                let mut out = Vec::new();
                let edges: Vec<EdgeId> =
                    self.sk.edges_with_range_colour(v, colour).collect();
                for e in edges {
                    let tails = self.paths(self.sk.source(e), &rest);
                    for tail in tails.iter() {
                        let mut word = Vec::with_capacity(1 + tail.len());
                        word.push(e);
                        word.extend_from_slice(tail.word());
                        out.push(Path {
                            word,
                            range: v,
                            source: tail.source(),
                            degree: n.clone(),
                        });
                    }
                }
                out.sort();
                out
            }
        };
        let rc = std::rc::Rc::new(result);
        self.memo.insert((v, n.clone()), rc.clone());
        rc
    }

    fn count(&mut self, v: VertexId, n: &Degree, counts: &mut HashMap<(VertexId, Degree), BigUint>) -> BigUint {
        if let Some(hit) = counts.get(&(v, n.clone())) {
            return hit.clone();
        }
        let result = match n.first_nonzero_colour() {
            None => BigUint::from(1u8),
            Some(colour) => {
                let rest = n
                    .minus(&Degree::basis(self.sk.rank(), colour))
                    .expect("nonzero coordinate");
                let edges: Vec<EdgeId> =
                    self.sk.edges_with_range_colour(v, colour).collect();
                let mut total = BigUint::zero();
                for e in edges {
                    total += self.count(self.sk.source(e), &rest, counts);
                }
                total
            }
        };
        counts.insert((v, n.clone()), result.clone());
        result
    }
}

/// Exact enumeration of vΛ^n. Degrees beyond the per-coordinate cap are a
/// hard error so accidental blowups fail loudly.
pub fn paths_from(sk: &Skeleton, v: VertexId, n: &Degree) -> Result<Vec<Path>> {
    sk.check_degree_cap(n)?;
    if n.rank() != sk.rank() {
        return Err(Error::RankMismatch {
            expected: sk.rank(),
            got: n.rank(),
        });
    }
    Ok(Enumerator::new(sk).paths(v, n).as_ref().clone())
}

/// |vΛ^n| with arbitrary-precision counting.
pub fn count_paths_from(sk: &Skeleton, v: VertexId, n: &Degree) -> Result<BigUint> {
    sk.check_degree_cap(n)?;
    Ok(Enumerator::new(sk).count(v, n, &mut HashMap::new()))
}

/// The boundary-style set vΛ^{<=n}: paths of degree m <= n whose source
/// emits no colour-i edge for every colour with m_i < n_i.
pub fn paths_from_leq(sk: &Skeleton, v: VertexId, n: &Degree) -> Result<Vec<Path>> {
    sk.check_degree_cap(n)?;
    let mut en = Enumerator::new(sk);
    let mut out = PathSet::new();
    for m in n.box_iter() {
        for p in en.paths(v, &m).iter() {
            let stunted_ok = (1..=sk.rank()).all(|i| {
                m.get(i) >= n.get(i) || sk.is_colour_source(p.source(), i)
            });
            if stunted_ok {
                out.insert(p.clone());
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// The plain union of vΛ^m over all m <= bound.
pub fn paths_from_upto(sk: &Skeleton, v: VertexId, bound: &Degree) -> Result<Vec<Path>> {
    sk.check_degree_cap(bound)?;
    let mut en = Enumerator::new(sk);
    let mut out = Vec::new();
    for m in bound.box_iter() {
        out.extend(en.paths(v, &m).iter().cloned());
    }
    Ok(out)
}

/// Every path of the k-graph presented by an acyclic skeleton. Errors with
/// `HasCycle` otherwise (the path category would be infinite).
pub fn all_paths(sk: &Skeleton) -> Result<Vec<Path>> {
    if let Some(cycle) = crate::cycles::has_conventional_cycle(sk) {
        return Err(Error::HasCycle(
            sk.vertex_name(cycle.range()).to_string(),
        ));
    }
    // Without cycles, any path visits each vertex at most once per step, so
    // |d(λ)| < |Λ^0|.
    let max_len = sk.vertex_count().saturating_sub(1) as u32;
    let mut out = Vec::new();
    let mut en = Enumerator::new(sk);
    let bound = Degree::constant(sk.rank(), max_len);
    for m in bound.box_iter() {
        if m.total() > max_len as u64 {
            continue;
        }
        for v in sk.vertex_ids() {
            out.extend(en.paths(v, &m).iter().cloned());
        }
    }
    Ok(out)
}

/// |Λv|: the number of paths with source v, over all degrees. Requires an
/// acyclic skeleton.
pub fn count_paths_into(sk: &Skeleton, v: VertexId) -> Result<BigUint> {
    if let Some(cycle) = crate::cycles::has_conventional_cycle(sk) {
        return Err(Error::HasCycle(
            sk.vertex_name(cycle.range()).to_string(),
        ));
    }
    let max_len = sk.vertex_count().saturating_sub(1) as u64;
    let mut total = BigUint::zero();
    let mut en = Enumerator::new(sk);
    let bound = Degree::constant(sk.rank(), max_len as u32);
    for m in bound.box_iter() {
        if m.total() > max_len {
            continue;
        }
        for w in sk.vertex_ids() {
            for p in en.paths(w, &m).iter() {
                if p.source() == v {
                    total += BigUint::from(1u8);
                }
            }
        }
    }
    Ok(total)
}

/// Every word reachable from `word` by square rewrites, in any direction.
/// Test and verification helper; the closure is small for short words.
pub fn rewrite_class(sk: &Skeleton, word: &[EdgeId]) -> Result<Vec<Vec<EdgeId>>> {
    check_composable(sk, word)?;
    let mut seen: BTreeSet<Vec<EdgeId>> = BTreeSet::new();
    let mut queue = vec![word.to_vec()];
    seen.insert(word.to_vec());
    while let Some(w) = queue.pop() {
        for t in 0..w.len().saturating_sub(1) {
            if sk.colour(w[t]) == sk.colour(w[t + 1]) {
                continue;
            }
            if let Some((p, q)) = sk.partner(w[t], w[t + 1]) {
                let mut next = w.clone();
                next[t] = p;
                next[t + 1] = q;
                if seen.insert(next.clone()) {
                    queue.push(next);
                }
            }
        }
    }
    Ok(seen.into_iter().collect())
}
