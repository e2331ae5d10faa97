//! K-groups for rank one and two, through integer matrix normal forms.
//!
//! The defining relation at a vertex holds per colour only where the vertex
//! emits that colour, so the boundary maps restrict their domains to the
//! colour-regular vertices. With V the vertex set, R_i = {v : vΛ^{e_i} ≠ ∅}
//! and A_i = 1 - M_i^t:
//!
//!   rank 1:  K_0 = coker(A_1|_{R_1}),  K_1 = ker(A_1|_{R_1});
//!   rank 2:  Z^{R_1 ∩ R_2} --d2--> Z^{R_1} ⊕ Z^{R_2} --d1--> Z^V,
//!            d1 = (A_1 | A_2), d2 = (-A_2 ; A_1) projected blockwise,
//!            K_0 = coker(d1) ⊕ ker(d2),  K_1 = ker(d1)/im(d2).
//!
//! Local convexity makes the projections harmless (the twisted columns stay
//! supported on the regular sets) and commutation of the vertex matrices
//! gives the chain property. Everything runs in exact integers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{kernel_basis, smith_normal_form, IntMatrix};
use crate::skeleton::Skeleton;

/// A finitely generated abelian group presented as free rank plus torsion
/// divisors in divisibility order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn free(rank: usize) -> Self {
        AbelianGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl std::fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KGroups {
    pub k0: AbelianGroup,
    pub k1: AbelianGroup,
    /// Whether the vertex classes generate K_0 (always for rank one; decided
    /// by the coordinate-graph criterion for rank two).
    pub generators_from_vertices: bool,
}

fn cokernel(a: &IntMatrix) -> AbelianGroup {
    let s = smith_normal_form(a);
    AbelianGroup {
        free_rank: a.rows() - s.rank,
        torsion: s.diag.iter().filter(|d| !d.is_one()).cloned().collect(),
    }
}

fn regular(sk: &Skeleton, colour: usize) -> Vec<usize> {
    sk.vertex_ids()
        .filter(|&v| !sk.is_colour_source(v, colour))
        .map(|v| v.index())
        .collect()
}

fn restrict_columns(a: &IntMatrix, cols: &[usize]) -> IntMatrix {
    let mut out = IntMatrix::zero(a.rows(), cols.len());
    for (j, &c) in cols.iter().enumerate() {
        for i in 0..a.rows() {
            out[(i, j)] = a[(i, c)].clone();
        }
    }
    out
}

/// The two boundary maps of the rank-2 complex, domains restricted to the
/// colour-regular vertices. On a locally convex skeleton the inner domain is
/// exactly R_1 ∩ R_2; at convexity failures the twisted column of a vertex
/// can escape the regular blocks, and such vertices are dropped from the
/// inner domain so the complex stays a complex.
pub fn boundary_maps(sk: &Skeleton) -> Result<(IntMatrix, IntMatrix)> {
    if sk.rank() != 2 {
        return Err(Error::UnsupportedRank(sk.rank()));
    }
    let n = sk.vertex_count();
    let a1 = sk.vertex_matrix(1).transpose().one_minus();
    let a2 = sk.vertex_matrix(2).transpose().one_minus();
    let r1 = regular(sk, 1);
    let r2 = regular(sk, 2);
    let supported = |a: &IntMatrix, v: usize, inside: &[usize]| {
        (0..n).all(|i| a[(i, v)].is_zero() || inside.contains(&i))
    };
    let r12: Vec<usize> = r1
        .iter()
        .copied()
        .filter(|&v| r2.contains(&v) && supported(&a2, v, &r1) && supported(&a1, v, &r2))
        .collect();

    let d1 = restrict_columns(&a1, &r1).augment(&restrict_columns(&a2, &r2));

    let mut d2 = IntMatrix::zero(r1.len() + r2.len(), r12.len());
    for (j, &v) in r12.iter().enumerate() {
        // Top block: -(A_2 e_v) read off the R_1 coordinates; bottom block:
        // A_1 e_v on the R_2 coordinates.
        for i in 0..n {
            if !a2[(i, v)].is_zero() {
                let p = r1.iter().position(|&r| r == i).expect("supported");
                d2[(p, j)] = -a2[(i, v)].clone();
            }
            if !a1[(i, v)].is_zero() {
                let p = r2.iter().position(|&r| r == i).expect("supported");
                d2[(r1.len() + p, j)] = a1[(i, v)].clone();
            }
        }
    }
    if !d1.mul(&d2).is_zero() {
        return Err(Error::Invalid(
            "boundary maps do not compose to zero; vertex matrices do not commute".into(),
        ));
    }
    Ok((d1, d2))
}

/// K-groups of the algebra of an accepted skeleton with k at most two.
pub fn kgroups(sk: &Skeleton) -> Result<KGroups> {
    match sk.rank() {
        1 => {
            let a = sk.vertex_matrix(1).transpose().one_minus();
            let restricted = restrict_columns(&a, &regular(sk, 1));
            let k0 = cokernel(&restricted);
            let k1 = AbelianGroup::free(kernel_basis(&restricted).len());
            Ok(KGroups {
                k0,
                k1,
                generators_from_vertices: true,
            })
        }
        2 => {
            let (d1, d2) = boundary_maps(sk)?;
            let coker_d1 = cokernel(&d1);
            let ker_d2 = kernel_basis(&d2).len();
            let k0 = AbelianGroup {
                free_rank: coker_d1.free_rank + ker_d2,
                torsion: coker_d1.torsion,
            };

            // K_1 = ker(d1) / im(d2), in kernel-lattice coordinates.
            let s1 = smith_normal_form(&d1);
            let dom = d1.cols();
            let z = s1.v_inv.mul(&d2);
            for r in 0..s1.rank {
                for c in 0..d2.cols() {
                    if !z[(r, c)].is_zero() {
                        return Err(Error::Invalid(
                            "image escapes the kernel lattice".into(),
                        ));
                    }
                }
            }
            let kernel_rank = dom - s1.rank;
            let k1 = if kernel_rank == 0 {
                AbelianGroup::free(0)
            } else if d2.cols() == 0 {
                AbelianGroup::free(kernel_rank)
            } else {
                let mut rows = Vec::with_capacity(kernel_rank);
                for r in s1.rank..dom {
                    rows.push((0..d2.cols()).map(|c| z[(r, c)].clone()).collect());
                }
                cokernel(&IntMatrix::from_rows(rows))
            };
            Ok(KGroups {
                k0,
                k1,
                generators_from_vertices: vertex_class_criterion(sk)?,
            })
        }
        k => Err(Error::UnsupportedRank(k)),
    }
}

/// For rank two: true when some single-colour coordinate graph is acyclic.
/// Then 1 - M_i^t is injective on the regular columns, the block column has
/// trivial kernel, and the vertex classes generate K_0.
pub fn vertex_class_criterion(sk: &Skeleton) -> Result<bool> {
    if sk.rank() != 2 {
        return Err(Error::UnsupportedRank(sk.rank()));
    }
    Ok((1..=2).any(|colour| coordinate_graph_acyclic(sk, colour)))
}

fn coordinate_graph_acyclic(sk: &Skeleton, colour: usize) -> bool {
    // Kahn count on the single-colour subgraph.
    let n = sk.vertex_count();
    let mut indeg = vec![0usize; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in sk.edge_ids() {
        if sk.colour(e) == colour {
            out[sk.range(e).index()].push(sk.source(e).index());
            indeg[sk.source(e).index()] += 1;
        }
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = stack.pop() {
        seen += 1;
        for &w in &out[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                stack.push(w);
            }
        }
    }
    seen == n
}
