//! Graph traces over exact rationals: a trace assigns each vertex a value
//! reproducing itself under summing over edge sources, one equation per
//! colour wherever the vertex emits that colour. Vertices missing a colour
//! contribute no equation for it (the stunted-path convention), which keeps
//! truncated window fixtures solvable.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::degree::Degree;
use crate::error::Result;
use crate::paths::paths_from_leq;
use crate::skeleton::{Skeleton, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphTrace {
    pub values: BTreeMap<VertexId, BigRational>,
    pub normalised: bool,
    pub faithful: bool,
}

impl GraphTrace {
    pub fn value(&self, v: VertexId) -> BigRational {
        self.values.get(&v).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Check the defining equations directly for an arbitrary assignment.
    pub fn satisfies_colour_equations(sk: &Skeleton, values: &BTreeMap<VertexId, BigRational>) -> bool {
        trace_equations(sk).iter().all(|(v, colour)| {
            colour_equation_holds(sk, values, *v, *colour)
        })
    }

    /// The composite-degree equations: the value at v equals the sum of
    /// values over sources of vΛ^{<=n}.
    pub fn satisfies_composite_equation(
        &self,
        sk: &Skeleton,
        v: VertexId,
        n: &Degree,
    ) -> Result<bool> {
        let total: BigRational = paths_from_leq(sk, v, n)?
            .iter()
            .map(|p| self.value(p.source()))
            .sum();
        Ok(total == self.value(v))
    }
}

fn colour_equation_holds(
    sk: &Skeleton,
    values: &BTreeMap<VertexId, BigRational>,
    v: VertexId,
    colour: usize,
) -> bool {
    let get = |v: VertexId| values.get(&v).cloned().unwrap_or_else(BigRational::zero);
    let sum: BigRational = sk
        .edges_with_range_colour(v, colour)
        .map(|e| get(sk.source(e)))
        .sum();
    sum == get(v)
}

/// The (vertex, colour) pairs carrying an equation.
fn trace_equations(sk: &Skeleton) -> Vec<(VertexId, usize)> {
    let mut out = Vec::new();
    for v in sk.vertex_ids() {
        for colour in 1..=sk.rank() {
            if !sk.is_colour_source(v, colour) {
                out.push((v, colour));
            }
        }
    }
    out
}

/// A rational basis of the space of solutions of the single-colour trace
/// equations, by exact Gaussian elimination. One basis vector per free
/// vertex variable, entries indexed by vertex id.
pub fn graph_trace_space(sk: &Skeleton) -> Vec<Vec<BigRational>> {
    let n = sk.vertex_count();
    let eqs = trace_equations(sk);
    // Row per equation: g(v) - sum over colour edges of g(s(e)) = 0.
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(eqs.len());
    for (v, colour) in eqs {
        let mut row = vec![BigRational::zero(); n];
        row[v.index()] += BigRational::one();
        for e in sk.edges_with_range_colour(v, colour) {
            row[sk.source(e).index()] -= BigRational::one();
        }
        rows.push(row);
    }
    rational_kernel(&rows, n)
}

/// Kernel basis of a rational matrix given as rows, over `n` variables.
fn rational_kernel(rows: &[Vec<BigRational>], n: usize) -> Vec<Vec<BigRational>> {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].clone();
        for x in &mut m[r] {
            *x /= inv.clone();
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for cc in 0..n {
                    let t = &m[r][cc] * &f;
                    m[i][cc] -= t;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Vec::new();
    for &f in &free {
        let mut vec = vec![BigRational::zero(); n];
        vec[f] = BigRational::one();
        for (row_idx, &p) in pivot_cols.iter().enumerate() {
            vec[p] = -m[row_idx][f].clone();
        }
        basis.push(vec);
    }
    basis
}

/// A strictly positive solution normalised to total mass one, when one
/// exists; decided exactly by Fourier-Motzkin elimination over the solution
/// basis, no floating point involved.
pub fn normalized_faithful_trace(sk: &Skeleton) -> Option<GraphTrace> {
    let n = sk.vertex_count();
    if n == 0 {
        return None;
    }
    let basis = graph_trace_space(sk);
    if basis.is_empty() {
        return None;
    }
    // Feasibility of B·x > 0 componentwise.
    let constraints: Vec<Vec<BigRational>> = (0..n)
        .map(|v| basis.iter().map(|b| b[v].clone()).collect())
        .collect();
    let x = strict_positive_point(&constraints)?;
    let mut values: BTreeMap<VertexId, BigRational> = BTreeMap::new();
    for v in sk.vertex_ids() {
        let val: BigRational = basis
            .iter()
            .zip(&x)
            .map(|(b, xi)| &b[v.index()] * xi)
            .sum();
        if !val.is_positive() {
            return None;
        }
        values.insert(v, val);
    }
    let total: BigRational = values.values().cloned().sum();
    for val in values.values_mut() {
        *val /= total.clone();
    }
    Some(GraphTrace {
        values,
        normalised: true,
        faithful: true,
    })
}

/// Find x with a·x > 0 for every row a, or None. Strict Fourier-Motzkin:
/// eliminate the last variable repeatedly, then back-substitute, choosing a
/// point inside each open interval. A row of `layers[l]` has coefficients
/// for variables 0..=j at indices 0..=j and the constant term last, where
/// j = d - 1 - l.
fn strict_positive_point(rows: &[Vec<BigRational>]) -> Option<Vec<BigRational>> {
    let d = rows.first()?.len();
    let mut layers: Vec<Vec<Vec<BigRational>>> = Vec::with_capacity(d);
    let mut current: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|a| {
            let mut row = a.clone();
            row.push(BigRational::zero());
            row
        })
        .collect();
    for j in (0..d).rev() {
        layers.push(current.clone());
        let mut next: Vec<Vec<BigRational>> = Vec::new();
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for row in &current {
            if row[j].is_zero() {
                let mut r = row.clone();
                r.remove(j);
                next.push(r);
            } else if row[j].is_positive() {
                pos.push(row.clone());
            } else {
                neg.push(row.clone());
            }
        }
        for p in &pos {
            for q in &neg {
                // p gives x_j > lower, q gives x_j < upper; feasibility of
                // the pair is lower < upper, i.e. sum of the scaled rows > 0.
                let mut r = Vec::with_capacity(j + 1);
                for c in 0..=j + 1 {
                    if c == j {
                        continue;
                    }
                    r.push(&p[c] / &p[j] - &q[c] / &q[j]);
                }
                next.push(r);
            }
        }
        current = next;
    }
    // Every variable eliminated: rows are bare constants requiring c > 0.
    for r in &current {
        if !r[0].is_positive() {
            return None;
        }
    }

    let mut x = vec![BigRational::zero(); d];
    for j in 0..d {
        let layer = &layers[d - 1 - j];
        let konst = j + 1;
        let mut lower: Option<BigRational> = None;
        let mut upper: Option<BigRational> = None;
        for row in layer {
            if row[j].is_zero() {
                continue;
            }
            let mut rest = row[konst].clone();
            for (c, xc) in x.iter().enumerate().take(j) {
                if !row[c].is_zero() {
                    rest += &row[c] * xc;
                }
            }
            let bound = -rest / row[j].clone();
            if row[j].is_positive() {
                lower = Some(match lower {
                    Some(l) if l >= bound => l,
                    _ => bound,
                });
            } else {
                upper = Some(match upper {
                    Some(u) if u <= bound => u,
                    _ => bound,
                });
            }
        }
        x[j] = match (lower, upper) {
            (None, None) => BigRational::one(),
            (Some(l), None) => l + BigRational::one(),
            (None, Some(u)) => u - BigRational::one(),
            (Some(l), Some(u)) => {
                if l >= u {
                    return None;
                }
                (l + u) / BigRational::from(BigInt::from(2))
            }
        };
    }
    Some(x)
}
