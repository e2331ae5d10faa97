//! Hereditary and saturated vertex sets, quotient skeletons, and the
//! quotient-based generalised-cycle sweep.

use std::collections::{BTreeSet, VecDeque};

use crate::alignment::{is_exhaustive, mce};
use crate::cycles::{find_generalised_cycles, GenCycle};
use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::paths::{compose, paths_from_upto, Path};
use crate::skeleton::{Skeleton, SkeletonBuilder, VertexId};

/// A vertex set with its computed closure flags. `saturation_bound` records
/// the degree bound the saturation pass used; saturation is complete only up
/// to that bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSet {
    pub members: BTreeSet<VertexId>,
    pub hereditary: bool,
    pub saturation_bound: Option<Degree>,
}

impl VertexSet {
    pub fn names(&self, sk: &Skeleton) -> Vec<String> {
        self.members
            .iter()
            .map(|&v| sk.vertex_name(v).to_string())
            .collect()
    }
}

pub fn is_hereditary(sk: &Skeleton, members: &BTreeSet<VertexId>) -> bool {
    members.iter().all(|&v| {
        sk.edges_with_range(v)
            .iter()
            .all(|&g| members.contains(&sk.source(g)))
    })
}

/// Least hereditary superset: close under edge sources, range to source.
pub fn hereditary_closure(sk: &Skeleton, seed: &BTreeSet<VertexId>) -> VertexSet {
    let mut members = seed.clone();
    let mut queue: VecDeque<VertexId> = members.iter().copied().collect();
    while let Some(v) = queue.pop_front() {
        for &g in sk.edges_with_range(v) {
            if members.insert(sk.source(g)) {
                queue.push_back(sk.source(g));
            }
        }
    }
    VertexSet {
        hereditary: true,
        members,
        saturation_bound: None,
    }
}

/// Bounded saturation: absorb any vertex carrying a nonempty exhaustive set
/// of paths of degree <= bound with sources already absorbed, iterated to a
/// fixed point. Sound; complete only up to the bound. The result is
/// re-closed hereditarily after each round so the output keeps both flags.
pub fn saturate(sk: &Skeleton, set: &VertexSet, bound: &Degree) -> Result<VertexSet> {
    if !set.hereditary || !is_hereditary(sk, &set.members) {
        return Err(Error::NotHereditary);
    }
    sk.check_degree_cap(bound)?;
    let mut members = set.members.clone();
    loop {
        let mut grew = false;
        for v in sk.vertex_ids() {
            if members.contains(&v) {
                continue;
            }
            // The canonical candidate: all bounded nonzero-degree paths with
            // absorbed sources. Exhaustiveness is monotone under supersets,
            // so testing the maximal candidate decides every sub-candidate.
            let candidate: Vec<Path> = paths_from_upto(sk, v, bound)?
                .into_iter()
                .filter(|p| !p.is_vertex() && members.contains(&p.source()))
                .collect();
            if candidate.is_empty() {
                continue;
            }
            if is_exhaustive(sk, v, &candidate)?.exhaustive {
                members.insert(v);
                grew = true;
            }
        }
        if !grew {
            break;
        }
        let reclosed = hereditary_closure(sk, &members);
        members = reclosed.members;
    }
    Ok(VertexSet {
        hereditary: is_hereditary(sk, &members),
        members,
        saturation_bound: Some(bound.clone()),
    })
}

/// The skeleton on the complementary vertices, keeping edges and squares
/// whose constituents all survive. Re-validated before return; a rejection
/// is reported, not silently repaired.
pub fn quotient(sk: &Skeleton, set: &VertexSet) -> Result<Skeleton> {
    if !set.hereditary || !is_hereditary(sk, &set.members) {
        return Err(Error::NotHereditary);
    }
    let keep = |v: VertexId| !set.members.contains(&v);
    let mut b = SkeletonBuilder::new(sk.rank());
    b.limits(*sk.limits());
    for v in sk.vertex_ids() {
        if keep(v) {
            b.vertex(sk.vertex_name(v));
        }
    }
    for e in sk.edge_ids() {
        let data = sk.edge_data(e);
        if keep(data.source) && keep(data.range) {
            b.edge(
                data.name.clone(),
                data.colour,
                sk.vertex_name(data.source),
                sk.vertex_name(data.range),
            );
        }
    }
    for sq in sk.squares() {
        let edges = [sq.first.0, sq.first.1, sq.second.0, sq.second.1];
        let alive = edges.iter().all(|&e| {
            let d = sk.edge_data(e);
            keep(d.source) && keep(d.range)
        });
        if alive {
            b.square(
                sk.edge_data(sq.first.0).name.clone(),
                sk.edge_data(sq.first.1).name.clone(),
                sk.edge_data(sq.second.0).name.clone(),
                sk.edge_data(sq.second.1).name.clone(),
            );
        }
    }
    let quotient = b.finish()?;
    let report = quotient.validate();
    if !report.accepted {
        return Err(Error::QuotientNotAccepted(report.describe(&quotient)));
    }
    Ok(quotient)
}

/// One hit of the sweep: a saturated hereditary set whose quotient contains
/// a generalised cycle. Any hit certifies that the algebra is not AF.
#[derive(Clone, Debug)]
pub struct SweepHit {
    pub hereditary: VertexSet,
    pub gen_cycle: GenCycle,
    pub quotient: Skeleton,
}

/// Enumerate hereditary sets as unions of vertex closures (every hereditary
/// set is such a union), saturate each up to `bound`, and search each
/// quotient for generalised cycles of degree at most `bound`.
pub fn quotient_gencycle_sweep(sk: &Skeleton, bound: &Degree) -> Result<Vec<SweepHit>> {
    let closures: Vec<BTreeSet<VertexId>> = {
        let mut distinct = BTreeSet::new();
        for v in sk.vertex_ids() {
            distinct.insert(hereditary_closure(sk, &BTreeSet::from([v])).members);
        }
        distinct.into_iter().collect()
    };
    if closures.len() >= usize::BITS as usize
        || (1usize << closures.len()) > sk.limits().max_subsets
    {
        return Err(Error::LimitExceeded(format!(
            "{} closure generators exceed the sweep cap",
            closures.len()
        )));
    }
    let mut candidates: BTreeSet<BTreeSet<VertexId>> = BTreeSet::new();
    for mask in 0usize..(1 << closures.len()) {
        let mut union = BTreeSet::new();
        for (i, c) in closures.iter().enumerate() {
            if mask & (1 << i) != 0 {
                union.extend(c.iter().copied());
            }
        }
        candidates.insert(union);
    }

    let mut hits = Vec::new();
    let mut seen_saturated: BTreeSet<BTreeSet<VertexId>> = BTreeSet::new();
    for members in candidates {
        let set = VertexSet {
            hereditary: true,
            members,
            saturation_bound: None,
        };
        let saturated = saturate(sk, &set, bound)?;
        if !seen_saturated.insert(saturated.members.clone()) {
            continue;
        }
        if saturated.members.len() == sk.vertex_count() {
            continue;
        }
        let q = quotient(sk, &saturated)?;
        for gen_cycle in find_generalised_cycles(&q, bound, false)? {
            hits.push(SweepHit {
                hereditary: saturated.clone(),
                gen_cycle,
                quotient: q.clone(),
            });
        }
    }
    Ok(hits)
}

/// Search for tau from s(eta), avoiding the absorbed vertices, of degree at
/// most `bound`, such that every minimal common extension of eta·tau and
/// zeta·tau is absorbed. Absence for every tau up to the bound is evidence
/// of periodicity relative to the quotient.
pub fn periodicity_witness(
    sk: &Skeleton,
    set: &VertexSet,
    eta: &Path,
    zeta: &Path,
    bound: &Degree,
) -> Result<Option<Path>> {
    if eta == zeta || eta.source() != zeta.source() {
        return Err(Error::EndpointMismatch);
    }
    if set.members.contains(&eta.source())
        || set.members.contains(&eta.range())
        || set.members.contains(&zeta.range())
    {
        return Err(Error::Invalid(
            "paths must avoid the absorbed vertex set".into(),
        ));
    }
    for tau in paths_from_upto(sk, eta.source(), bound)? {
        if set.members.contains(&tau.source()) {
            continue;
        }
        let a = compose(sk, eta, &tau)?;
        let b = compose(sk, zeta, &tau)?;
        if a.range() != b.range() {
            return Ok(Some(tau));
        }
        let survivors = mce(sk, &a, &b)?
            .into_iter()
            .filter(|lambda| !set.members.contains(&lambda.source()))
            .count();
        if survivors == 0 {
            return Ok(Some(tau));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions;

    fn vertex_set(sk: &Skeleton, names: &[&str]) -> BTreeSet<VertexId> {
        names.iter().map(|n| sk.vertex(n).unwrap()).collect()
    }

    fn edge_path(sk: &Skeleton, name: &str) -> Path {
        Path::from_edge(sk, sk.edge(name).unwrap())
    }

    #[test]
    fn closure_of_nothing_is_nothing() {
        let sk = constructions::torus(2);
        let h = hereditary_closure(&sk, &BTreeSet::new());
        assert!(h.members.is_empty());
        assert!(h.hereditary);
    }

    #[test]
    fn feeder_sink_is_already_closed() {
        let sk = constructions::fixture("torus-feeder").unwrap();
        let h = hereditary_closure(&sk, &vertex_set(&sk, &["u"]));
        assert_eq!(h.names(&sk), vec!["u".to_string()]);
    }

    #[test]
    fn window_closure_collects_everything_reachable() {
        let sk = constructions::fixture("p2-window").unwrap();
        let origin = vertex_set(&sk, &["v(0,0)"]);
        let h = hereditary_closure(&sk, &origin);
        // Everything the origin reaches sits weakly above it in the second
        // coordinate and within the light cone in the first.
        for &v in &h.members {
            let name = sk.vertex_name(v);
            let inner = name.trim_start_matches("v(").trim_end_matches(')');
            let mut parts = inner.split(',');
            let i: i64 = parts.next().unwrap().parse().unwrap();
            let j: i64 = parts.next().unwrap().parse().unwrap();
            assert!(j >= 0 && i.abs() <= j, "unexpected member {name}");
        }
        // Within the window the trace of the cone is complete.
        for i in -3i64..=3 {
            for j in 0i64..=3 {
                if i.abs() <= j {
                    let name = format!("v({i},{j})");
                    assert!(
                        h.members.contains(&sk.vertex(&name).unwrap()),
                        "missing {name}"
                    );
                }
            }
        }
    }

    #[test]
    fn closure_operator_laws() {
        let sk = constructions::fixture("ladder-open-4").unwrap();
        let seeds = [
            BTreeSet::new(),
            vertex_set(&sk, &["v0"]),
            vertex_set(&sk, &["v2"]),
            vertex_set(&sk, &["v1", "v3"]),
        ];
        for seed in &seeds {
            let once = hereditary_closure(&sk, seed);
            let twice = hereditary_closure(&sk, &once.members);
            assert_eq!(once.members, twice.members, "idempotent");
            assert!(seed.is_subset(&once.members), "extensive");
        }
        let small = hereditary_closure(&sk, &vertex_set(&sk, &["v3"]));
        let large = hereditary_closure(&sk, &vertex_set(&sk, &["v1", "v3"]));
        assert!(small.members.is_subset(&large.members), "monotone");
    }

    #[test]
    fn saturate_full_set_is_fixed() {
        let sk = constructions::torus(2);
        let all = hereditary_closure(&sk, &vertex_set(&sk, &["v"]));
        let s = saturate(&sk, &all, &Degree::new(vec![2, 2])).unwrap();
        assert_eq!(s.members, all.members);
    }

    #[test]
    fn feeder_sink_stays_saturated() {
        // Pure loop powers at w escape every bounded candidate set, so w is
        // never absorbed.
        let sk = constructions::fixture("torus-feeder").unwrap();
        let h = hereditary_closure(&sk, &vertex_set(&sk, &["u"]));
        for bound in [Degree::new(vec![1, 1]), Degree::new(vec![3, 3])] {
            let s = saturate(&sk, &h, &bound).unwrap();
            assert_eq!(s.names(&sk), vec!["u".to_string()]);
        }
    }

    #[test]
    fn one_graph_interior_vertex_joins() {
        // All edges from the middle vertex land in H, so it is absorbed.
        let mut b = crate::skeleton::SkeletonBuilder::new(1);
        b.vertex("a");
        b.vertex("m");
        b.vertex("z");
        b.edge("g", 1, "m", "a");
        b.edge("h", 1, "z", "m");
        let sk = b.finish().unwrap();
        let h = hereditary_closure(&sk, &vertex_set(&sk, &["z"]));
        let s = saturate(&sk, &h, &Degree::new(vec![2])).unwrap();
        assert!(s.members.contains(&sk.vertex("m").unwrap()));
        assert!(s.members.contains(&sk.vertex("a").unwrap()));
    }

    #[test]
    fn quotient_by_nothing_is_identity() {
        let sk = constructions::fixture("torus-feeder").unwrap();
        let empty = VertexSet {
            members: BTreeSet::new(),
            hereditary: true,
            saturation_bound: None,
        };
        assert_eq!(quotient(&sk, &empty).unwrap(), sk);
    }

    #[test]
    fn feeder_quotient_is_the_torus() {
        let sk = constructions::fixture("torus-feeder").unwrap();
        let h = hereditary_closure(&sk, &vertex_set(&sk, &["u"]));
        let q = quotient(&sk, &h).unwrap();
        assert_eq!(q.vertex_count(), 1);
        assert_eq!(q.edge_count(), 2);
        assert!(q.validate().accepted);
        assert!(q.edge("alpha").is_some() && q.edge("beta").is_some());
    }

    #[test]
    fn quotient_mce_restriction_law() {
        // MCE in the quotient = MCE upstairs minus absorbed paths.
        let sk = constructions::fixture("torus-feeder").unwrap();
        let h = hereditary_closure(&sk, &vertex_set(&sk, &["u"]));
        let q = quotient(&sk, &h).unwrap();
        let bound = Degree::new(vec![2, 2]);
        let w_dn = q.vertex("w").unwrap();
        let dn_pool = paths_from_upto(&q, w_dn, &bound).unwrap();
        for a_dn in &dn_pool {
            for b_dn in &dn_pool {
                let a_up = lift(&sk, &q, a_dn);
                let b_up = lift(&sk, &q, b_dn);
                let down: BTreeSet<Vec<String>> = mce(&q, a_dn, b_dn)
                    .unwrap()
                    .iter()
                    .map(|p| p.edge_names(&q))
                    .collect();
                let up: BTreeSet<Vec<String>> = mce(&sk, &a_up, &b_up)
                    .unwrap()
                    .iter()
                    .filter(|p| !h.members.contains(&p.source()))
                    .map(|p| p.edge_names(&sk))
                    .collect();
                assert_eq!(down, up);
            }
        }
    }

    fn lift(sk: &Skeleton, q: &Skeleton, p: &Path) -> Path {
        if p.is_vertex() {
            return Path::vertex(sk, sk.vertex(q.vertex_name(p.range())).unwrap());
        }
        let word: Vec<_> = p
            .word()
            .iter()
            .map(|&e| sk.edge(&q.edge_data(e).name).unwrap())
            .collect();
        crate::paths::normalize(sk, &word).unwrap()
    }

    #[test]
    fn sweep_finds_the_feeder_quotient_pair() {
        let sk = constructions::fixture("torus-feeder").unwrap();
        let hits = quotient_gencycle_sweep(&sk, &Degree::new(vec![2, 2])).unwrap();
        let mut matching = hits.iter().filter(|hit| {
            let names = (
                hit.gen_cycle.mu.edge_names(&hit.quotient),
                hit.gen_cycle.nu.edge_names(&hit.quotient),
            );
            names == (vec!["alpha".to_string()], vec!["beta".to_string()])
                || names == (vec!["beta".to_string()], vec!["alpha".to_string()])
        });
        let hit = matching.next().expect("the quotient pair is reported");
        assert_eq!(hit.hereditary.names(&sk), vec!["u".to_string()]);
        assert!(matching.next().is_none(), "reported under exactly one H");
    }

    #[test]
    fn sweep_on_torus_reports_the_empty_set() {
        let sk = constructions::torus(2);
        let hits = quotient_gencycle_sweep(&sk, &Degree::new(vec![1, 1])).unwrap();
        assert!(hits.iter().any(|hit| {
            hit.hereditary.members.is_empty()
                && hit.gen_cycle.mu.edge_names(&hit.quotient) == vec!["a".to_string()]
                && hit.gen_cycle.nu.edge_names(&hit.quotient) == vec!["b".to_string()]
        }));
    }

    #[test]
    fn sweep_on_acyclic_graph_is_empty() {
        let sk = constructions::fixture("omega-2-1-1").unwrap();
        let hits = quotient_gencycle_sweep(&sk, &Degree::new(vec![1, 1])).unwrap();
        assert!(hits.is_empty());
    }

    #[test]
    fn periodicity_witness_cases() {
        let empty = |_sk: &Skeleton| VertexSet {
            members: BTreeSet::new(),
            hereditary: true,
            saturation_bound: None,
        };

        // Distinct same-degree edges: the identity works immediately.
        let mut b = crate::skeleton::SkeletonBuilder::new(1);
        b.vertex("v");
        b.vertex("w");
        b.edge("e", 1, "w", "v");
        b.edge("f", 1, "w", "v");
        let siblings = b.finish().unwrap();
        let tau = periodicity_witness(
            &siblings,
            &empty(&siblings),
            &edge_path(&siblings, "e"),
            &edge_path(&siblings, "f"),
            &Degree::new(vec![2]),
        )
        .unwrap()
        .expect("identity witness");
        assert!(tau.is_vertex());

        // The torus is periodic: no witness at any tested bound.
        let torus = constructions::torus(2);
        let a = edge_path(&torus, "a");
        let bb = edge_path(&torus, "b");
        for bound in [Degree::new(vec![2, 2]), Degree::new(vec![4, 4])] {
            assert!(periodicity_witness(&torus, &empty(&torus), &a, &bb, &bound)
                .unwrap()
                .is_none());
        }

        // On the feeder graph, x kills every common extension of the loops.
        let feeder = constructions::fixture("torus-feeder").unwrap();
        let alpha = edge_path(&feeder, "alpha");
        let beta = edge_path(&feeder, "beta");
        let tau = periodicity_witness(
            &feeder,
            &empty(&feeder),
            &alpha,
            &beta,
            &Degree::new(vec![2, 2]),
        )
        .unwrap()
        .expect("witness exists");
        assert_eq!(tau.edge_names(&feeder), vec!["x".to_string()]);
    }
}
