//! Exact integer matrices: multiplication, Smith normal form, and
//! Hermite-style lattice bases. Entries are arbitrary-precision integers so
//! path counting and normal-form pivoting never overflow.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c));
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                if self[(i, l)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = &self[(i, l)] * &other[(l, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    /// `self - other`.
    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    /// Identity minus self (square only).
    pub fn one_minus(&self) -> IntMatrix {
        IntMatrix::identity(self.rows).sub(self)
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    /// Stack `self` on top of `other` (same column count).
    pub fn stack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Place `self` and `other` side by side (same row count).
    pub fn augment(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = IntMatrix::zero(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row a += c * row b
    fn add_row(&mut self, a: usize, b: usize, c: &BigInt) {
        for j in 0..self.cols {
            let t = &self[(b, j)] * c;
            self[(a, j)] += t;
        }
    }

    /// col a += c * col b
    fn add_col(&mut self, a: usize, b: usize, c: &BigInt) {
        for i in 0..self.rows {
            let t = &self[(i, b)] * c;
            self[(i, a)] += t;
        }
    }

    fn negate_col(&mut self, a: usize) {
        for i in 0..self.rows {
            let t = -self[(i, a)].clone();
            self[(i, a)] = t;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl std::fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            writeln!(
                f,
                "[{}]",
                (0..self.cols)
                    .map(|j| self[(i, j)].to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            )?;
        }
        Ok(())
    }
}

/// Smith normal form `U A V = D` with the right transform and its inverse
/// tracked. `diag` holds the nonzero invariant factors, in divisibility
/// order; `rank` is their count.
pub struct Smith {
    pub diag: Vec<BigInt>,
    pub rank: usize,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

/// Smith normal form by pivoting on a least-absolute-value entry and
/// clearing its row and column. Left transforms are not tracked; column
/// transforms are, together with their inverse.
pub fn smith_normal_form(a: &IntMatrix) -> Smith {
    let mut m = a.clone();
    let (rows, cols) = (m.rows, m.cols);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);

    // col a += c*col b on m and v pairs with row b -= c*row a on v_inv.
    macro_rules! col_op {
        ($a:expr, $b:expr, $c:expr) => {{
            let c: BigInt = $c;
            m.add_col($a, $b, &c);
            v.add_col($a, $b, &c);
            v_inv.add_row($b, $a, &(-c));
        }};
    }

    let mut t = 0;
    while t < rows.min(cols) {
        // Least-absolute-value nonzero pivot in the remaining block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if m[(i, j)].is_zero() {
                    continue;
                }
                match pivot {
                    Some((pi, pj)) if m[(pi, pj)].abs() <= m[(i, j)].abs() => {}
                    _ => pivot = Some((i, j)),
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap_rows(t, pi);
        if pj != t {
            m.swap_cols(t, pj);
            v.swap_cols(t, pj);
            v_inv.swap_rows(t, pj);
        }

        loop {
            // Clear column t below the pivot by row operations.
            let mut dirty = false;
            for i in t + 1..rows {
                if m[(i, t)].is_zero() {
                    continue;
                }
                let q = div_round(&m[(i, t)], &m[(t, t)]);
                m.add_row(i, t, &(-q));
                if !m[(i, t)].is_zero() {
                    // Remainder smaller than the pivot: swap it up.
                    m.swap_rows(t, i);
                    dirty = true;
                }
            }
            // Clear row t to the right of the pivot by column operations.
            for j in t + 1..cols {
                if m[(t, j)].is_zero() {
                    continue;
                }
                let q = div_round(&m[(t, j)], &m[(t, t)]);
                col_op!(j, t, -q);
                if !m[(t, j)].is_zero() {
                    m.swap_cols(t, j);
                    v.swap_cols(t, j);
                    v_inv.swap_rows(t, j);
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }

        // Divisibility: pull any non-multiple into the pivot column and redo.
        let mut redo = false;
        'scan: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(&m[(i, j)] % &m[(t, t)]).is_zero() {
                    m.add_row(t, i, &BigInt::one());
                    redo = true;
                    break 'scan;
                }
            }
        }
        if redo {
            continue;
        }

        if m[(t, t)].is_negative() {
            m.negate_col(t);
            v.negate_col(t);
            for j in 0..cols {
                let neg = -v_inv[(t, j)].clone();
                v_inv[(t, j)] = neg;
            }
        }
        t += 1;
    }

    let diag: Vec<BigInt> = (0..t).map(|i| m[(i, i)].clone()).collect();
    Smith {
        rank: t,
        diag,
        v,
        v_inv,
    }
}

/// Quotient that leaves a remainder of minimal absolute value.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let q = a / b;
    let r = a - &q * b;
    if r.abs() * 2u8 > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Basis of the integer kernel lattice of `a` (columns x with a.x = 0).
pub fn kernel_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let s = smith_normal_form(a);
    (s.rank..a.cols()).map(|j| s.v.column(j)).collect()
}

/// Triangular basis of the lattice spanned by `gens` (as rows), by integer
/// row reduction. Returns the basis rows and the lattice rank.
pub fn lattice_basis(gens: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, usize) {
    if gens.is_empty() {
        return (Vec::new(), 0);
    }
    let cols = gens[0].len();
    let mut rows: Vec<Vec<BigInt>> = gens.to_vec();
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    let mut pivot_row = 0;
    for col in 0..cols {
        loop {
            let mut nonzero: Vec<usize> = (pivot_row..rows.len())
                .filter(|&i| !rows[i][col].is_zero())
                .collect();
            if nonzero.is_empty() {
                break;
            }
            // Reduce everything against a least-absolute-value pivot.
            nonzero.sort_by_key(|&i| rows[i][col].abs());
            let p = nonzero[0];
            rows.swap(pivot_row, p);
            let mut changed = false;
            for i in pivot_row + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = div_round(&rows[i][col], &rows[pivot_row][col]);
                for c in 0..cols {
                    let t = &rows[pivot_row][c] * &q;
                    rows[i][c] -= t;
                }
                if !rows[i][col].is_zero() {
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if pivot_row < rows.len() && !rows[pivot_row][col].is_zero() {
            if rows[pivot_row][col].is_negative() {
                for c in 0..cols {
                    let t = -rows[pivot_row][c].clone();
                    rows[pivot_row][c] = t;
                }
            }
            basis.push(rows[pivot_row].clone());
            pivot_row += 1;
        }
    }
    let rank = basis.len();
    (basis, rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn smith_small() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.rank, 3);
        let d: Vec<i64> = s.diag.iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(d, vec![2, 6, 12]);
    }

    #[test]
    fn smith_divisibility_chain() {
        let a = m(&[&[6, 0], &[0, 10]]);
        let s = smith_normal_form(&a);
        let d: Vec<i64> = s.diag.iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(d, vec![2, 30]);
    }

    #[test]
    fn kernel_of_rank_one() {
        let a = m(&[&[1, 1, 1]]);
        let k = kernel_basis(&a);
        assert_eq!(k.len(), 2);
        for v in &k {
            let s: BigInt = v.iter().sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn v_tracks_column_ops() {
        let a = m(&[&[4, 6], &[2, 8]]);
        let s = smith_normal_form(&a);
        // A.V has the diagonal shape up to row operations; check V.V_inv = I.
        let prod = s.v.mul(&s.v_inv);
        assert_eq!(prod, IntMatrix::identity(2));
    }

    #[test]
    fn lattice_rank() {
        let gens = vec![
            vec![BigInt::from(2), BigInt::from(0)],
            vec![BigInt::from(0), BigInt::from(3)],
            vec![BigInt::from(2), BigInt::from(3)],
        ];
        let (basis, rank) = lattice_basis(&gens);
        assert_eq!(rank, 2);
        assert_eq!(basis[0][0], BigInt::from(2));
        let (_, rank1) = lattice_basis(&[vec![BigInt::from(3), BigInt::from(0)]]);
        assert_eq!(rank1, 1);
    }
}
