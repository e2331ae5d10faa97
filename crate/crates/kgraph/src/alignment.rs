//! Minimal common extensions, Ext sets, and a sound-and-complete decision
//! procedure for exhaustiveness of finite path sets.
//!
//! A set F ⊆ vΛ is exhaustive when every path from v has a common extension
//! with some member of F. No uniform degree bound on counterexamples exists
//! (a witness can be long in one colour while short in another), so the
//! decider walks a finite automaton whose states are the tuples of residual
//! extension sets Ext(prefix; {mu}), mu in F. Residual paths always have
//! degree at most max d(mu), which makes the state space finite.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::hash::{Hash, Hasher};

use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::paths::{compose, paths_from, segment, split, Path, PathSet};
use crate::skeleton::{EdgeId, Skeleton, VertexId};

/// MCE(mu, nu): all common extensions of degree d(mu) ∨ d(nu).
pub fn mce(sk: &Skeleton, mu: &Path, nu: &Path) -> Result<Vec<Path>> {
    if mu.range() != nu.range() {
        return Err(Error::RangeMismatch);
    }
    let target = mu.degree().join(nu.degree());
    let rest = target.minus(mu.degree())?;
    let mut out = PathSet::new();
    for tau in paths_from(sk, mu.source(), &rest)? {
        let lambda = compose(sk, mu, &tau)?;
        if &segment(sk, &lambda, &Degree::zero(sk.rank()), nu.degree())? == nu {
            out.insert(lambda);
        }
    }
    Ok(out.into_iter().collect())
}

/// The pairs (alpha, beta) with mu·alpha = nu·beta in MCE(mu, nu).
pub fn mce_pairs(sk: &Skeleton, mu: &Path, nu: &Path) -> Result<Vec<(Path, Path)>> {
    let mut out = Vec::new();
    for lambda in mce(sk, mu, nu)? {
        let alpha = split(sk, &lambda, mu.degree())?.1;
        let beta = split(sk, &lambda, nu.degree())?.1;
        out.push((alpha, beta));
    }
    Ok(out)
}

/// Ext(lambda; E): the paths tau from s(lambda) with lambda·tau a minimal
/// common extension of lambda and some member of E.
pub fn ext(sk: &Skeleton, lambda: &Path, e: &[Path]) -> Result<PathSet> {
    let mut out = PathSet::new();
    for mu in e {
        if mu.range() != lambda.range() {
            return Err(Error::RangeMismatch);
        }
        for (alpha, _) in mce_pairs(sk, lambda, mu)? {
            out.insert(alpha);
        }
    }
    Ok(out)
}

/// Outcome of the exhaustiveness decision, with the witness when the set is
/// not exhaustive and a transcript fingerprint for certificates.
#[derive(Clone, Debug)]
pub struct Exhaustiveness {
    pub exhaustive: bool,
    /// A shortest path incompatible with every member of F.
    pub witness: Option<Path>,
    pub states_explored: usize,
    pub transcript_hash: u64,
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct State {
    vertex: VertexId,
    residuals: Vec<Vec<Path>>,
}

impl State {
    fn all_empty(&self) -> bool {
        self.residuals.iter().all(Vec::is_empty)
    }

    /// Some residual contains a degree-zero path: the current prefix extends
    /// a member of F, so every future stays compatible.
    fn safe(&self) -> bool {
        self.residuals
            .iter()
            .any(|r| r.iter().any(Path::is_vertex))
    }
}

/// Decide whether F ⊆ vΛ is exhaustive. BFS over residual states: the
/// transition along an edge g maps each residual R to Ext(g; R); a state with
/// every residual empty yields a witness (read off stored parent edges, so
/// the witness is shortest in the BFS layering); a safe state is pruned.
/// Memoisation over the finite state space guarantees termination.
pub fn is_exhaustive(sk: &Skeleton, v: VertexId, f: &[Path]) -> Result<Exhaustiveness> {
    let f: Vec<Path> = {
        let mut set = BTreeSet::new();
        for mu in f {
            if mu.range() != v {
                return Err(Error::RangeMismatch);
            }
            set.insert(mu.clone());
        }
        set.into_iter().collect()
    };

    let finish = |exhaustive: bool, witness: Option<Path>, states: usize| {
        let mut h = DefaultHasher::new();
        v.hash(&mut h);
        for mu in &f {
            mu.hash(&mut h);
        }
        exhaustive.hash(&mut h);
        witness.hash(&mut h);
        states.hash(&mut h);
        Exhaustiveness {
            exhaustive,
            witness,
            states_explored: states,
            transcript_hash: h.finish(),
        }
    };

    if f.is_empty() {
        // Vacuously fails: the degree-zero path at v has no compatible member.
        return Ok(finish(false, Some(Path::vertex(sk, v)), 0));
    }

    let initial = State {
        vertex: v,
        residuals: f.iter().map(|mu| vec![mu.clone()]).collect(),
    };
    if initial.safe() {
        return Ok(finish(true, None, 1));
    }

    let mut seen: HashMap<State, usize> = HashMap::new();
    let mut parents: Vec<(usize, EdgeId)> = Vec::new();
    let mut order: Vec<State> = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(initial.clone(), 0);
    parents.push((usize::MAX, EdgeId(0)));
    order.push(initial);
    queue.push_back(0usize);

    while let Some(idx) = queue.pop_front() {
        let state = order[idx].clone();
        for &g in sk.edges_with_range(state.vertex) {
            let gp = Path::from_edge(sk, g);
            let mut residuals = Vec::with_capacity(state.residuals.len());
            for r in &state.residuals {
                let stepped = ext(sk, &gp, r)?;
                residuals.push(stepped.into_iter().collect::<Vec<Path>>());
            }
            let next = State {
                vertex: sk.source(g),
                residuals,
            };
            if next.all_empty() {
                // Reconstruct the failing prefix.
                let mut edges = vec![g];
                let mut cur = idx;
                while parents[cur].0 != usize::MAX {
                    edges.push(parents[cur].1);
                    cur = parents[cur].0;
                }
                edges.reverse();
                let witness = crate::paths::normalize(sk, &edges)?;
                return Ok(finish(false, Some(witness), order.len()));
            }
            if next.safe() || seen.contains_key(&next) {
                continue;
            }
            if order.len() >= sk.limits().max_states {
                return Err(Error::LimitExceeded(format!(
                    "exhaustiveness automaton passed {} states",
                    sk.limits().max_states
                )));
            }
            seen.insert(next.clone(), order.len());
            parents.push((idx, g));
            queue.push_back(order.len());
            order.push(next);
        }
    }
    let states = order.len();
    Ok(finish(true, None, states))
}
