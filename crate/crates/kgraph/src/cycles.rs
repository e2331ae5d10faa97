//! Conventional cycles, generalised cycles, and entrances, each with a
//! machine-checkable certificate.

use std::collections::VecDeque;

use crate::alignment::{ext, is_exhaustive};
use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::paths::{normalize, paths_from_upto, Path};
use crate::skeleton::{EdgeId, Skeleton, VertexId};

/// A certified generalised-cycle pair. `has_entrance` records that the
/// reversed pair fails the test; the entrance is the failing witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenCycle {
    pub mu: Path,
    pub nu: Path,
    pub has_entrance: bool,
    pub entrance: Option<Path>,
    /// Fingerprint of the exhaustiveness transcript that certified the pair.
    pub transcript_hash: u64,
}

/// Search the underlying directed multigraph (all colours) for a closed
/// walk; the certificate is a shortest one, normalised, with ties broken by
/// the edge-name sequence.
pub fn has_conventional_cycle(sk: &Skeleton) -> Option<Path> {
    let mut best: Option<(usize, Vec<String>, Vec<EdgeId>)> = None;
    for v in sk.vertex_ids() {
        // BFS forward from v: a path extends at its source end.
        let mut dist: Vec<Option<(usize, usize, EdgeId)>> = vec![None; sk.vertex_count()];
        let mut queue = VecDeque::new();
        dist[v.index()] = Some((0, usize::MAX, EdgeId(0)));
        queue.push_back(v);
        let mut closing: Option<(usize, VertexId, EdgeId)> = None;
        while let Some(u) = queue.pop_front() {
            let du = dist[u.index()].unwrap().0;
            if closing.is_some_and(|(l, _, _)| du + 1 > l) {
                break;
            }
            for &g in sk.edges_with_range(u) {
                let t = sk.source(g);
                if t == v {
                    let len = du + 1;
                    if closing.map_or(true, |(l, _, _)| len < l) {
                        closing = Some((len, u, g));
                    }
                    continue;
                }
                if dist[t.index()].is_none() {
                    dist[t.index()] = Some((du + 1, u.index(), g));
                    queue.push_back(t);
                }
            }
        }
        if let Some((len, u, g)) = closing {
            let mut edges = vec![g];
            let mut cur = u.index();
            while dist[cur].unwrap().1 != usize::MAX {
                let (_, p, e) = dist[cur].unwrap();
                edges.push(e);
                cur = p;
            }
            edges.reverse();
            let names: Vec<String> = edges
                .iter()
                .map(|&e| sk.edge_data(e).name.clone())
                .collect();
            if best
                .as_ref()
                .map_or(true, |(l, n, _)| (len, &names) < (*l, n))
            {
                best = Some((len, names, edges));
            }
        }
    }
    best.map(|(_, _, edges)| normalize(sk, &edges).expect("closed walk is composable"))
}

/// The full test with witness and transcript.
pub fn gen_cycle_test(sk: &Skeleton, mu: &Path, nu: &Path) -> Result<GenCycleTest> {
    if mu == nu || mu.source() != nu.source() || mu.range() != nu.range() {
        return Err(Error::EndpointMismatch);
    }
    let e: Vec<Path> = ext(sk, mu, std::slice::from_ref(nu))?.into_iter().collect();
    if e.is_empty() {
        // The degree-zero extension already has an empty MCE with nu.
        return Ok(GenCycleTest {
            holds: false,
            witness: Some(Path::vertex(sk, mu.source())),
            transcript_hash: 0,
            states_explored: 0,
        });
    }
    let out = is_exhaustive(sk, mu.source(), &e)?;
    Ok(GenCycleTest {
        holds: out.exhaustive,
        witness: out.witness,
        transcript_hash: out.transcript_hash,
        states_explored: out.states_explored,
    })
}

#[derive(Clone, Debug)]
pub struct GenCycleTest {
    pub holds: bool,
    /// When the test fails, a tau with MCE(mu·tau, nu) empty.
    pub witness: Option<Path>,
    pub transcript_hash: u64,
    pub states_explored: usize,
}

/// Is (mu, nu) a generalised cycle? Decided through exhaustiveness of
/// Ext(mu; {nu}).
pub fn is_generalised_cycle(sk: &Skeleton, mu: &Path, nu: &Path) -> Result<bool> {
    Ok(gen_cycle_test(sk, mu, nu)?.holds)
}

/// All generalised cycles with both degrees at most `bound`, reported once
/// per unordered pair, oriented so that d(mu) is lexicographically largest
/// when both orientations pass. By default only reduced pairs (meet of the
/// degrees zero) are searched: every generalised cycle factors through one
/// by stripping the common prefix.
pub fn find_generalised_cycles(
    sk: &Skeleton,
    bound: &Degree,
    include_non_reduced: bool,
) -> Result<Vec<GenCycle>> {
    if bound.rank() != sk.rank() {
        return Err(Error::RankMismatch {
            expected: sk.rank(),
            got: bound.rank(),
        });
    }
    let mut out = Vec::new();
    for v in sk.vertex_ids() {
        let pool = paths_from_upto(sk, v, bound)?;
        // Group by source so only same-endpoint pairs are tested.
        let mut by_source: std::collections::BTreeMap<VertexId, Vec<&Path>> =
            std::collections::BTreeMap::new();
        for p in &pool {
            by_source.entry(p.source()).or_default().push(p);
        }
        for group in by_source.values() {
            for i in 0..group.len() {
                for j in i + 1..group.len() {
                    let (mu, nu) = (group[i], group[j]);
                    if mu.degree() == nu.degree() {
                        continue;
                    }
                    if !include_non_reduced && !mu.degree().meet(nu.degree()).is_zero() {
                        continue;
                    }
                    let fwd = gen_cycle_test(sk, mu, nu)?;
                    let bwd = gen_cycle_test(sk, nu, mu)?;
                    let found = match (fwd.holds, bwd.holds) {
                        (true, true) => {
                            let (m, n) = if mu.degree() >= nu.degree() {
                                (mu, nu)
                            } else {
                                (nu, mu)
                            };
                            Some(GenCycle {
                                mu: m.clone(),
                                nu: n.clone(),
                                has_entrance: false,
                                entrance: None,
                                transcript_hash: fwd.transcript_hash ^ bwd.transcript_hash,
                            })
                        }
                        (true, false) => Some(GenCycle {
                            mu: mu.clone(),
                            nu: nu.clone(),
                            has_entrance: true,
                            entrance: bwd.witness.clone(),
                            transcript_hash: fwd.transcript_hash,
                        }),
                        (false, true) => Some(GenCycle {
                            mu: nu.clone(),
                            nu: mu.clone(),
                            has_entrance: true,
                            entrance: fwd.witness.clone(),
                            transcript_hash: bwd.transcript_hash,
                        }),
                        (false, false) => None,
                    };
                    out.extend(found);
                }
            }
        }
    }
    out.sort_by(|a, b| (a.mu.clone(), a.nu.clone()).cmp(&(b.mu.clone(), b.nu.clone())));
    Ok(out)
}

/// An entrance to a cycle rho: a path from r(rho) with no common extension
/// with rho, i.e. an exhaustiveness witness for {rho}.
pub fn cycle_has_entrance(sk: &Skeleton, rho: &Path) -> Result<Option<Path>> {
    if !rho.is_cycle() {
        return Err(Error::NotACycle);
    }
    let out = is_exhaustive(sk, rho.range(), std::slice::from_ref(rho))?;
    Ok(out.witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alignment::mce;
    use crate::constructions;
    use crate::paths::compose;

    fn edge_path(sk: &Skeleton, name: &str) -> Path {
        Path::from_edge(sk, sk.edge(name).unwrap())
    }

    #[test]
    fn omega_is_acyclic() {
        for name in ["omega-2-1-1", "omega-2-2-1", "omega-1-3"] {
            let sk = constructions::fixture(name).unwrap();
            assert!(has_conventional_cycle(&sk).is_none(), "{name}");
        }
    }

    #[test]
    fn torus_cycle_certificate() {
        let sk = constructions::torus(2);
        let cert = has_conventional_cycle(&sk).unwrap();
        assert_eq!(cert.edge_names(&sk), vec!["a".to_string()]);
    }

    #[test]
    fn capped_ladder_cycle_certificate_is_the_cap_loop() {
        let sk = constructions::fixture("ladder-capped-4").unwrap();
        let cert = has_conventional_cycle(&sk).unwrap();
        assert_eq!(cert.edge_names(&sk), vec!["a_cap".to_string()]);
    }

    #[test]
    fn conventional_cycle_paired_with_its_range() {
        for name in ["torus-2", "ncycle-3", "ladder-capped-4", "torus-feeder"] {
            let sk = constructions::fixture(name).unwrap();
            let cycle = has_conventional_cycle(&sk).unwrap();
            let id = Path::vertex(&sk, cycle.range());
            assert!(is_generalised_cycle(&sk, &cycle, &id).unwrap(), "{name}");
        }
    }

    #[test]
    fn torus_pair_is_a_generalised_cycle_without_entrance() {
        let sk = constructions::torus(2);
        let a = edge_path(&sk, "a");
        let b = edge_path(&sk, "b");
        assert!(is_generalised_cycle(&sk, &a, &b).unwrap());
        assert!(is_generalised_cycle(&sk, &b, &a).unwrap());
        let found = find_generalised_cycles(&sk, &Degree::new(vec![1, 1]), false).unwrap();
        let hit = found
            .iter()
            .find(|g| g.mu == a && g.nu == b)
            .expect("(a, b) reported");
        assert!(!hit.has_entrance);
    }

    #[test]
    fn feeder_pair_fails_with_witness_x() {
        let sk = constructions::fixture("torus-feeder").unwrap();
        let alpha = edge_path(&sk, "alpha");
        let beta = edge_path(&sk, "beta");
        let test = gen_cycle_test(&sk, &alpha, &beta).unwrap();
        assert!(!test.holds);
        let witness = test.witness.unwrap();
        assert_eq!(witness.edge_names(&sk), vec!["x".to_string()]);
        // The witness really is incompatible: MCE(alpha·x, beta) is empty.
        let ax = compose(&sk, &alpha, &witness).unwrap();
        assert!(mce(&sk, &ax, &beta).unwrap().is_empty());
    }

    #[test]
    fn acyclic_search_is_empty() {
        let sk = constructions::fixture("omega-2-1-1").unwrap();
        let found = find_generalised_cycles(&sk, &Degree::new(vec![2, 2]), false).unwrap();
        assert!(found.is_empty());
    }

    #[test]
    fn capped_ladder_contains_the_level_one_pair() {
        let sk = constructions::fixture("ladder-capped-4").unwrap();
        let found = find_generalised_cycles(&sk, &Degree::new(vec![1, 1]), false).unwrap();
        let alpha = edge_path(&sk, "a^1_0");
        let beta = edge_path(&sk, "b^1_0");
        assert!(found
            .iter()
            .any(|g| (g.mu == alpha && g.nu == beta) || (g.mu == beta && g.nu == alpha)));
    }

    #[test]
    fn loop_with_exit_has_an_entrance() {
        let sk = constructions::fixture("loop-with-exit").unwrap();
        let l = edge_path(&sk, "l");
        let entrance = cycle_has_entrance(&sk, &l).unwrap().unwrap();
        assert_eq!(entrance.edge_names(&sk), vec!["x".to_string()]);
    }

    #[test]
    fn torus_loop_has_no_entrance() {
        let sk = constructions::torus(2);
        let a = edge_path(&sk, "a");
        assert!(cycle_has_entrance(&sk, &a).unwrap().is_none());
    }

    #[test]
    fn full_cycle_of_ncycle_has_no_entrance() {
        let sk = constructions::fixture("ncycle-3").unwrap();
        let cycle = has_conventional_cycle(&sk).unwrap();
        assert_eq!(cycle.len(), 3);
        assert!(cycle_has_entrance(&sk, &cycle).unwrap().is_none());
    }

    #[test]
    fn entrance_matches_reversed_pair_failure() {
        // has_entrance == reversed pair fails, on every reported pair.
        for name in ["torus-2", "ladder-capped-4", "torus-feeder", "loop-with-exit"] {
            let sk = constructions::fixture(name).unwrap();
            for g in find_generalised_cycles(&sk, &Degree::constant(sk.rank(), 1), false).unwrap() {
                let reversed = is_generalised_cycle(&sk, &g.nu, &g.mu).unwrap();
                assert_eq!(g.has_entrance, !reversed, "{name}");
            }
        }
    }
}
