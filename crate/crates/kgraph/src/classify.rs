//! AF verdicts and structure theory for finite-vertex skeletons: on a finite
//! vertex set the algebra is AF exactly when the graph has no conventional
//! cycle, and in the no-entrance regime the structure is governed by initial
//! cycles and their periodicity groups.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};

use crate::alignment::mce;
use crate::cycles::{
    cycle_has_entrance, find_generalised_cycles, has_conventional_cycle, is_generalised_cycle,
    GenCycle,
};
use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::ideals::{quotient_gencycle_sweep, VertexSet};
use crate::matrix::lattice_basis;
use crate::paths::{compose, count_paths_into, paths_from_upto, segment, vertex_at, Path};
use crate::skeleton::{Skeleton, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AfStatus {
    Af,
    NotAf,
    Unknown,
}

/// A machine-checkable witness backing a verdict.
#[derive(Clone, Debug)]
pub enum Certificate {
    ConventionalCycle { cycle: Path },
    GeneralisedCycle { gen_cycle: GenCycle },
    QuotientGenCycle {
        hereditary: VertexSet,
        gen_cycle: GenCycle,
        quotient: Skeleton,
    },
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub status: AfStatus,
    pub reasons: Vec<Certificate>,
    pub bound_used: Degree,
}

/// AF or not, for a finite vertex set: decided by conventional-cycle search,
/// with generalised-cycle and quotient certificates attached up to the
/// bound. Every certificate is re-verified before it is attached.
pub fn classify_af(sk: &Skeleton, bound: &Degree) -> Result<Verdict> {
    match has_conventional_cycle(sk) {
        None => Ok(Verdict {
            status: AfStatus::Af,
            reasons: Vec::new(),
            bound_used: bound.clone(),
        }),
        Some(cycle) => {
            let mut reasons = Vec::new();
            assert!(cycle.is_cycle());
            let id = Path::vertex(sk, cycle.range());
            assert!(is_generalised_cycle(sk, &cycle, &id)?);
            reasons.push(Certificate::ConventionalCycle { cycle });
            for gen_cycle in find_generalised_cycles(sk, bound, false)? {
                assert!(is_generalised_cycle(sk, &gen_cycle.mu, &gen_cycle.nu)?);
                reasons.push(Certificate::GeneralisedCycle { gen_cycle });
            }
            for hit in quotient_gencycle_sweep(sk, bound)? {
                assert!(is_generalised_cycle(
                    &hit.quotient,
                    &hit.gen_cycle.mu,
                    &hit.gen_cycle.nu
                )?);
                reasons.push(Certificate::QuotientGenCycle {
                    hereditary: hit.hereditary,
                    gen_cycle: hit.gen_cycle,
                    quotient: hit.quotient,
                });
            }
            Ok(Verdict {
                status: AfStatus::NotAf,
                reasons,
                bound_used: bound.clone(),
            })
        }
    }
}

/// The matrix-algebra decomposition of an acyclic finite skeleton: one
/// summand per vertex that emits nothing, of dimension the number of paths
/// ending there.
pub fn finite_dim_decomposition(sk: &Skeleton) -> Result<Vec<(VertexId, BigUint)>> {
    if let Some(cycle) = has_conventional_cycle(sk) {
        return Err(Error::HasCycle(sk.vertex_name(cycle.range()).to_string()));
    }
    let mut out = Vec::new();
    for v in sk.vertex_ids() {
        if sk.edges_with_range(v).is_empty() {
            out.push((v, count_paths_into(sk, v)?));
        }
    }
    Ok(out)
}

/// The left-shift along a cycle: mu maps to the front segment of rho·mu of
/// the same degree. Defined on degrees disjoint from d(rho); for a cycle
/// with no entrance this is a bijection of r(rho)Λ^m.
pub fn rho_shift(sk: &Skeleton, rho: &Path, mu: &Path) -> Result<Path> {
    if !rho.is_cycle() {
        return Err(Error::NotACycle);
    }
    if mu.range() != rho.range() {
        return Err(Error::RangeMismatch);
    }
    let overlap = mu.degree().meet(rho.degree());
    if let Some(colour) = overlap.first_nonzero_colour() {
        return Err(Error::DegreeOverlap { colour });
    }
    let whole = compose(sk, rho, mu)?;
    segment(sk, &whole, &Degree::zero(sk.rank()), mu.degree())
}

/// A cycle whose range sees no edges in its missing colours, together with
/// its vertex orbit and periodicity group data.
#[derive(Clone, Debug)]
pub struct InitialCycle {
    pub cycle: Path,
    pub orbit: BTreeSet<VertexId>,
    pub group_basis: Vec<Vec<BigInt>>,
    pub torus_rank: usize,
}

#[derive(Clone, Debug)]
pub struct InitialCycles {
    pub classes: Vec<InitialCycle>,
    /// False when some enumerated cycle has an entrance; the orbit and
    /// group computations are only meaningful in the entranceless regime.
    pub entranceless: bool,
    pub bound_used: Degree,
}

/// All cycles of degree at most `bound`, shortest first.
pub fn cycles_up_to(sk: &Skeleton, bound: &Degree) -> Result<Vec<Path>> {
    let mut out = Vec::new();
    for v in sk.vertex_ids() {
        for p in paths_from_upto(sk, v, bound)? {
            if p.is_cycle() {
                out.push(p);
            }
        }
    }
    out.sort_by_key(|p| (p.len(), p.clone()));
    Ok(out)
}

/// Representatives of the initial-cycle classes (grouped by vertex orbit),
/// searched through degree (|Λ^0|, ..., |Λ^0|).
pub fn initial_cycles(sk: &Skeleton) -> Result<InitialCycles> {
    let n = sk.vertex_count() as u32;
    let bound = Degree::constant(sk.rank(), n);
    if has_conventional_cycle(sk).is_none() {
        return Ok(InitialCycles {
            classes: Vec::new(),
            entranceless: true,
            bound_used: bound,
        });
    }
    sk.check_degree_cap(&bound)?;
    let mut entranceless = true;
    let mut by_orbit: BTreeMap<BTreeSet<VertexId>, InitialCycle> = BTreeMap::new();
    for cycle in cycles_up_to(sk, &bound)? {
        if cycle_has_entrance(sk, &cycle)?.is_some() {
            entranceless = false;
        }
        let initial = (1..=sk.rank()).all(|i| {
            cycle.degree().get(i) > 0 || sk.is_colour_source(cycle.range(), i)
        });
        if !initial {
            continue;
        }
        let orbit = cycle_orbit(sk, &cycle)?;
        if by_orbit.contains_key(&orbit) {
            continue;
        }
        let group = periodicity_group(sk, &cycle)?;
        by_orbit.insert(
            orbit.clone(),
            InitialCycle {
                cycle,
                orbit,
                group_basis: group.basis,
                torus_rank: group.rank,
            },
        );
    }
    Ok(InitialCycles {
        classes: by_orbit.into_values().collect(),
        entranceless,
        bound_used: bound,
    })
}

/// The vertices on the periodic grid of the cycle: grid positions within one
/// period box.
pub fn cycle_orbit(sk: &Skeleton, cycle: &Path) -> Result<BTreeSet<VertexId>> {
    if !cycle.is_cycle() {
        return Err(Error::NotACycle);
    }
    let mut orbit = BTreeSet::new();
    for m in cycle.degree().box_iter() {
        orbit.insert(vertex_at(sk, cycle, &m)?);
    }
    Ok(orbit)
}

#[derive(Clone, Debug)]
pub struct PeriodicityGroup {
    /// Triangular basis rows of the subgroup of Z^k.
    pub basis: Vec<Vec<BigInt>>,
    pub rank: usize,
    pub generators: Vec<Vec<BigInt>>,
}

/// The subgroup of Z^k generated by d(cycle) together with all differences
/// of equal-vertex positions within the period box, reduced to a triangular
/// basis over the integers.
pub fn periodicity_group(sk: &Skeleton, cycle: &Path) -> Result<PeriodicityGroup> {
    if !cycle.is_cycle() {
        return Err(Error::NotACycle);
    }
    let k = sk.rank();
    let mut generators: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    generators.insert(
        cycle
            .degree()
            .coords()
            .iter()
            .map(|&c| BigInt::from(c))
            .collect(),
    );
    let mut by_vertex: BTreeMap<VertexId, Vec<Degree>> = BTreeMap::new();
    for m in cycle.degree().box_iter() {
        by_vertex
            .entry(vertex_at(sk, cycle, &m)?)
            .or_default()
            .push(m);
    }
    for positions in by_vertex.values() {
        for a in positions {
            for b in positions {
                if a == b {
                    continue;
                }
                let diff: Vec<BigInt> = (0..k)
                    .map(|i| BigInt::from(a.coords()[i]) - BigInt::from(b.coords()[i]))
                    .collect();
                generators.insert(diff);
            }
        }
    }
    let gens: Vec<Vec<BigInt>> = generators.into_iter().collect();
    let (basis, rank) = lattice_basis(&gens);
    Ok(PeriodicityGroup {
        basis,
        rank,
        generators: gens,
    })
}

/// Eventually periodic path head·cycle^∞, the finite presentation of the
/// boundary paths this library can evaluate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventuallyPeriodicPath {
    pub head: Path,
    pub cycle: Path,
}

impl EventuallyPeriodicPath {
    pub fn new(sk: &Skeleton, head: Path, cycle: Path) -> Result<Self> {
        if !cycle.is_cycle() || head.source() != cycle.range() {
            return Err(Error::NotACycle);
        }
        let _ = sk;
        Ok(EventuallyPeriodicPath { head, cycle })
    }

    /// The vertex at position m of the infinite grid. Defined whenever m is
    /// within d(head) plus the cone spanned by d(cycle): unroll enough cycle
    /// copies to cover the position and read the grid vertex off the finite
    /// path.
    pub fn vertex_at(&self, sk: &Skeleton, m: &Degree) -> Result<VertexId> {
        let d = self.cycle.degree();
        let h = self.head.degree();
        let mut copies = 0u32;
        for i in 1..=sk.rank() {
            let over = m.get(i).saturating_sub(h.get(i));
            if over > 0 {
                if d.get(i) == 0 {
                    return Err(Error::OutOfRange);
                }
                copies = copies.max(over.div_ceil(d.get(i)));
            }
        }
        let mut full = self.head.clone();
        for _ in 0..copies {
            full = compose(sk, &full, &self.cycle)?;
        }
        vertex_at(sk, &full, m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Aperiodicity {
    /// Every distinct same-source pair up to the bound had a separating tau.
    WitnessedUpTo(Degree),
    /// Some pair resisted every tau up to the bound.
    PeriodicPairUpTo(Degree, Path, Path),
    /// No pairs to test.
    Inconclusive,
}

/// Bounded aperiodicity test: for each distinct same-source pair search for
/// tau with MCE(mu·tau, nu·tau) empty.
pub fn aperiodicity_bounded(sk: &Skeleton, bound: &Degree) -> Result<Aperiodicity> {
    let mut tested_any = false;
    for v in sk.vertex_ids() {
        let pool = paths_from_upto(sk, v, bound)?;
        let mut by_source: BTreeMap<VertexId, Vec<&Path>> = BTreeMap::new();
        for p in &pool {
            by_source.entry(p.source()).or_default().push(p);
        }
        for group in by_source.values() {
            for i in 0..group.len() {
                for j in i + 1..group.len() {
                    tested_any = true;
                    let (mu, nu) = (group[i], group[j]);
                    let mut witnessed = false;
                    for tau in paths_from_upto(sk, mu.source(), bound)? {
                        let a = compose(sk, mu, &tau)?;
                        let b = compose(sk, nu, &tau)?;
                        if a.range() != b.range() || mce(sk, &a, &b)?.is_empty() {
                            witnessed = true;
                            break;
                        }
                    }
                    if !witnessed {
                        return Ok(Aperiodicity::PeriodicPairUpTo(
                            bound.clone(),
                            (*mu).clone(),
                            (*nu).clone(),
                        ));
                    }
                }
            }
        }
    }
    if tested_any {
        Ok(Aperiodicity::WitnessedUpTo(bound.clone()))
    } else {
        Ok(Aperiodicity::Inconclusive)
    }
}

/// Sufficient cofinality proxy: vΛw nonempty for every ordered vertex pair.
pub fn strongly_connected(sk: &Skeleton) -> bool {
    let n = sk.vertex_count();
    if n <= 1 {
        return true;
    }
    // Reachability along edges, range to source.
    let mut reach = vec![vec![false; n]; n];
    for v in 0..n {
        reach[v][v] = true;
    }
    for e in sk.edge_ids() {
        reach[sk.range(e).index()][sk.source(e).index()] = true;
    }
    for m in 0..n {
        for a in 0..n {
            if !reach[a][m] {
                continue;
            }
            for b in 0..n {
                if reach[m][b] {
                    reach[a][b] = true;
                }
            }
        }
    }
    reach.iter().all(|row| row.iter().all(|&x| x))
}

#[derive(Clone, Debug)]
pub enum StructureOutcome {
    /// No cycles: a direct sum of matrix algebras.
    FiniteDimensional {
        summands: Vec<(VertexId, BigUint)>,
        unique_source: bool,
    },
    /// Some cycle has an entrance: an infinite projection exists; with the
    /// simplicity proxy the algebra is purely infinite.
    InfiniteProjection {
        cycle: Path,
        entrance: Path,
        cofinal_proxy: bool,
        aperiodicity: Aperiodicity,
        purely_infinite: bool,
    },
    /// Cycles, none with an entrance: Morita equivalent to a direct sum of
    /// torus function algebras, one per initial-cycle class.
    ToriDecomposition { classes: Vec<InitialCycle> },
}

#[derive(Clone, Debug)]
pub struct StructureReport {
    pub outcome: StructureOutcome,
    pub cycle_search_bound: Degree,
    pub aperiodicity_bound: Degree,
}

/// Structure of the algebra of a row-finite locally convex skeleton with
/// finitely many vertices. The no-entrance check runs over cycles of degree
/// at most (|Λ^0|, ..., |Λ^0|); the report records the bounds used.
pub fn structure_report(sk: &Skeleton, bound: &Degree) -> Result<StructureReport> {
    let report = sk.validate();
    if !report.locally_convex {
        return Err(Error::NotLocallyConvex);
    }
    let n = sk.vertex_count() as u32;
    let cycle_bound = Degree::constant(sk.rank(), n);
    if has_conventional_cycle(sk).is_none() {
        let summands = finite_dim_decomposition(sk)?;
        return Ok(StructureReport {
            outcome: StructureOutcome::FiniteDimensional {
                unique_source: summands.len() == 1,
                summands,
            },
            cycle_search_bound: cycle_bound,
            aperiodicity_bound: bound.clone(),
        });
    }
    sk.check_degree_cap(&cycle_bound)?;
    let mut entrance_hit: Option<(Path, Path)> = None;
    for cycle in cycles_up_to(sk, &cycle_bound)? {
        if let Some(entrance) = cycle_has_entrance(sk, &cycle)? {
            entrance_hit = Some((cycle, entrance));
            break;
        }
    }
    match entrance_hit {
        Some((cycle, entrance)) => {
            let cofinal_proxy = strongly_connected(sk);
            let aperiodicity = aperiodicity_bounded(sk, bound)?;
            let aperiodic = matches!(aperiodicity, Aperiodicity::WitnessedUpTo(_));
            Ok(StructureReport {
                outcome: StructureOutcome::InfiniteProjection {
                    cycle,
                    entrance,
                    cofinal_proxy,
                    purely_infinite: cofinal_proxy && aperiodic,
                    aperiodicity,
                },
                cycle_search_bound: cycle_bound,
                aperiodicity_bound: bound.clone(),
            })
        }
        None => {
            let classes = initial_cycles(sk)?.classes;
            Ok(StructureReport {
                outcome: StructureOutcome::ToriDecomposition { classes },
                cycle_search_bound: cycle_bound,
                aperiodicity_bound: bound.clone(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions;
    use crate::paths::paths_from;

    fn edge_path(sk: &Skeleton, name: &str) -> Path {
        Path::from_edge(sk, sk.edge(name).unwrap())
    }

    #[test]
    fn omega_is_af_and_m4() {
        let sk = constructions::fixture("omega-2-1-1").unwrap();
        let verdict = classify_af(&sk, &Degree::new(vec![2, 2])).unwrap();
        assert_eq!(verdict.status, AfStatus::Af);
        let dims = finite_dim_decomposition(&sk).unwrap();
        assert_eq!(dims.len(), 1);
        assert_eq!(sk.vertex_name(dims[0].0), "v(1,1)");
        assert_eq!(dims[0].1, BigUint::from(4u8));
    }

    #[test]
    fn omega_2_2_1_is_m6() {
        let sk = constructions::fixture("omega-2-2-1").unwrap();
        let dims = finite_dim_decomposition(&sk).unwrap();
        assert_eq!(dims.len(), 1);
        assert_eq!(dims[0].1, BigUint::from(6u8));
    }

    #[test]
    fn single_vertex_no_edges_is_scalar() {
        let mut b = crate::skeleton::SkeletonBuilder::new(1);
        b.vertex("v");
        let sk = b.finish().unwrap();
        let dims = finite_dim_decomposition(&sk).unwrap();
        assert_eq!(dims.len(), 1);
        assert_eq!(dims[0].1, BigUint::from(1u8));
    }

    #[test]
    fn torus_is_not_af_with_certificates() {
        let sk = constructions::torus(2);
        let verdict = classify_af(&sk, &Degree::new(vec![1, 1])).unwrap();
        assert_eq!(verdict.status, AfStatus::NotAf);
        let has_cycle_cert = verdict
            .reasons
            .iter()
            .any(|c| matches!(c, Certificate::ConventionalCycle { cycle } if cycle.edge_names(&sk) == vec!["a".to_string()]));
        assert!(has_cycle_cert);
        let has_pair = verdict.reasons.iter().any(|c| match c {
            Certificate::GeneralisedCycle { gen_cycle } => {
                gen_cycle.mu.edge_names(&sk) == vec!["a".to_string()]
                    && gen_cycle.nu.edge_names(&sk) == vec!["b".to_string()]
                    && !gen_cycle.has_entrance
            }
            _ => false,
        });
        assert!(has_pair);
    }

    #[test]
    fn loop_with_exit_carries_an_infinite_projection() {
        let sk = constructions::fixture("loop-with-exit").unwrap();
        let verdict = classify_af(&sk, &Degree::new(vec![2])).unwrap();
        assert_eq!(verdict.status, AfStatus::NotAf);
        let entrance_cert = verdict.reasons.iter().any(|c| match c {
            Certificate::GeneralisedCycle { gen_cycle } => gen_cycle.has_entrance,
            _ => false,
        });
        assert!(entrance_cert);
    }

    #[test]
    fn rho_shift_cases() {
        let sk = constructions::torus(2);
        let a = edge_path(&sk, "a");
        let b = edge_path(&sk, "b");
        assert_eq!(rho_shift(&sk, &a, &b).unwrap(), b);
        let id = Path::vertex(&sk, a.range());
        assert_eq!(rho_shift(&sk, &a, &id).unwrap(), id);
        assert!(matches!(
            rho_shift(&sk, &a, &a),
            Err(Error::DegreeOverlap { colour: 1 })
        ));

        let ladder = constructions::fixture("ladder-capped-4").unwrap();
        let a_cap = edge_path(&ladder, "a_cap");
        let b_cap = edge_path(&ladder, "b_cap");
        assert_eq!(rho_shift(&ladder, &a_cap, &b_cap).unwrap(), b_cap);
    }

    #[test]
    fn rho_shift_bijective_without_entrance() {
        let sk = constructions::torus(2);
        let rho = edge_path(&sk, "a");
        assert!(cycle_has_entrance(&sk, &rho).unwrap().is_none());
        for m in Degree::new(vec![0, 3]).box_iter() {
            if !m.meet(rho.degree()).is_zero() {
                continue;
            }
            let dom = paths_from(&sk, rho.range(), &m).unwrap();
            let image: BTreeSet<Path> = dom
                .iter()
                .map(|mu| rho_shift(&sk, &rho, mu).unwrap())
                .collect();
            assert_eq!(image.len(), dom.len());
            assert_eq!(image, dom.into_iter().collect());
        }
    }

    #[test]
    fn torus_initial_cycles() {
        let sk = constructions::torus(2);
        let found = initial_cycles(&sk).unwrap();
        assert!(found.entranceless);
        assert_eq!(found.classes.len(), 1);
        let class = &found.classes[0];
        assert_eq!(class.cycle.degree(), &Degree::new(vec![1, 1]));
        assert_eq!(class.orbit.len(), 1);
        assert_eq!(class.torus_rank, 2);
    }

    #[test]
    fn ncycle_initial_cycle() {
        let sk = constructions::fixture("ncycle-3").unwrap();
        let found = initial_cycles(&sk).unwrap();
        assert_eq!(found.classes.len(), 1);
        assert_eq!(found.classes[0].orbit.len(), 3);
        assert_eq!(found.classes[0].torus_rank, 1);
        // G = 3Z.
        assert_eq!(found.classes[0].group_basis[0][0], BigInt::from(3));
    }

    #[test]
    fn mixed_fixture_has_two_classes() {
        let sk = constructions::fixture("mixed-cycles").unwrap();
        let found = initial_cycles(&sk).unwrap();
        assert!(found.entranceless);
        assert_eq!(found.classes.len(), 2);
        let ranks: BTreeSet<usize> = found.classes.iter().map(|c| c.torus_rank).collect();
        assert_eq!(ranks, BTreeSet::from([1, 2]));
        // The rank-1 class comes from the single-colour 3-cycle: G = 3Z x {0}.
        let rank1 = found.classes.iter().find(|c| c.torus_rank == 1).unwrap();
        assert_eq!(rank1.group_basis.len(), 1);
        assert_eq!(rank1.group_basis[0][0], BigInt::from(3));
        assert_eq!(rank1.group_basis[0][1], BigInt::from(0));
        // Orbits are disjoint and no paths join them.
        let rank2 = found.classes.iter().find(|c| c.torus_rank == 2).unwrap();
        assert!(rank1.orbit.is_disjoint(&rank2.orbit));
    }

    #[test]
    fn group_closure_verified_on_the_periodic_grid() {
        // Sums of generators still satisfy the defining vertex-equality
        // condition, checked on an unrolled grid.
        for name in ["torus-2", "ncycle-3", "mixed-cycles"] {
            let sk = constructions::fixture(name).unwrap();
            for class in initial_cycles(&sk).unwrap().classes {
                let group = periodicity_group(&sk, &class.cycle).unwrap();
                let ep = EventuallyPeriodicPath::new(
                    &sk,
                    Path::vertex(&sk, class.cycle.range()),
                    class.cycle.clone(),
                )
                .unwrap();
                for g1 in &group.generators {
                    for g2 in &group.generators {
                        let sum: Vec<BigInt> =
                            g1.iter().zip(g2).map(|(a, b)| a + b).collect();
                        // Find nonnegative positions m, n with m - n = sum in
                        // the doubled box and compare grid vertices.
                        let d = class.cycle.degree();
                        let offset: Vec<i64> = sum
                            .iter()
                            .map(|x| i64::try_from(x).unwrap())
                            .collect();
                        let base: Vec<u32> = offset
                            .iter()
                            .enumerate()
                            .map(|(i, &o)| {
                                let need = (-o).max(0) as u32;
                                need.div_ceil(d.coords()[i].max(1)) * d.coords()[i]
                            })
                            .collect();
                        let n = Degree::new(base);
                        let m = Degree::new(
                            offset
                                .iter()
                                .zip(n.coords())
                                .map(|(&o, &b)| (b as i64 + o) as u32)
                                .collect(),
                        );
                        assert_eq!(
                            ep.vertex_at(&sk, &m).unwrap(),
                            ep.vertex_at(&sk, &n).unwrap(),
                            "{name}: sum of generators leaves the group"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn unique_power_paths_along_entranceless_cycles() {
        // |s(mu)Λ^{n d(rho)}| = 1 for disjoint-degree mu, and some power of
        // the cycle degree closes up into a cycle.
        for name in ["torus-2", "ncycle-3", "ladder-capped-4"] {
            let sk = constructions::fixture(name).unwrap();
            let rho = has_conventional_cycle(&sk).unwrap();
            if cycle_has_entrance(&sk, &rho).unwrap().is_some() {
                continue;
            }
            let pool = paths_from_upto(&sk, rho.range(), &Degree::constant(sk.rank(), 2)).unwrap();
            for mu in pool {
                if !mu.degree().meet(rho.degree()).is_zero() {
                    continue;
                }
                for n in 1..=3u32 {
                    let target = rho.degree().scale(n);
                    let unique = paths_from(&sk, mu.source(), &target).unwrap();
                    assert_eq!(unique.len(), 1, "{name}");
                }
                // Some power p <= |r(rho)Λ^{d(mu)}| closes into a cycle.
                let upper = paths_from(&sk, rho.range(), mu.degree()).unwrap().len() as u32;
                let mut closes = false;
                for p in 1..=upper.max(1) {
                    let unique = paths_from(&sk, mu.source(), &rho.degree().scale(p)).unwrap();
                    if unique.len() == 1 && unique[0].is_cycle() {
                        closes = true;
                        break;
                    }
                }
                assert!(closes, "{name}");
            }
        }
    }

    #[test]
    fn structure_of_the_torus() {
        let sk = constructions::torus(2);
        let report = structure_report(&sk, &Degree::new(vec![2, 2])).unwrap();
        match report.outcome {
            StructureOutcome::ToriDecomposition { classes } => {
                assert_eq!(classes.len(), 1);
                assert_eq!(classes[0].torus_rank, 2);
            }
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn structure_of_omega_is_matrix_algebra() {
        let sk = constructions::fixture("omega-2-1-1").unwrap();
        let report = structure_report(&sk, &Degree::new(vec![2, 2])).unwrap();
        match report.outcome {
            StructureOutcome::FiniteDimensional {
                summands,
                unique_source,
            } => {
                assert!(unique_source);
                assert_eq!(summands[0].1, BigUint::from(4u8));
            }
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn structure_of_connected_loop_graph_is_purely_infinite() {
        let sk = constructions::fixture("loop-with-exit-cofinal").unwrap();
        let report = structure_report(&sk, &Degree::new(vec![3])).unwrap();
        match report.outcome {
            StructureOutcome::InfiniteProjection {
                purely_infinite,
                cofinal_proxy,
                ..
            } => {
                assert!(cofinal_proxy);
                assert!(purely_infinite);
            }
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn plain_loop_with_exit_is_not_marked_simple() {
        let sk = constructions::fixture("loop-with-exit").unwrap();
        let report = structure_report(&sk, &Degree::new(vec![3])).unwrap();
        match report.outcome {
            StructureOutcome::InfiniteProjection {
                cofinal_proxy,
                purely_infinite,
                ..
            } => {
                assert!(!cofinal_proxy);
                assert!(!purely_infinite);
            }
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn eventually_periodic_evaluation() {
        let sk = constructions::fixture("ncycle-3").unwrap();
        let cycle = has_conventional_cycle(&sk).unwrap();
        let ep =
            EventuallyPeriodicPath::new(&sk, Path::vertex(&sk, cycle.range()), cycle.clone())
                .unwrap();
        let v0 = ep.vertex_at(&sk, &Degree::new(vec![0])).unwrap();
        let v3 = ep.vertex_at(&sk, &Degree::new(vec![3])).unwrap();
        let v7 = ep.vertex_at(&sk, &Degree::new(vec![7])).unwrap();
        let v1 = ep.vertex_at(&sk, &Degree::new(vec![1])).unwrap();
        assert_eq!(v0, v3);
        assert_eq!(v7, v1);
        assert_ne!(v0, v1);
    }
}
