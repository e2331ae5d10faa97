//! Lattice arithmetic on multi-degrees in N^k.
//!
//! A [`Degree`] records, per colour, how many edges of that colour a path
//! uses. Join and meet are coordinatewise max and min; `leq` is the
//! coordinatewise partial order. The derived `Ord` is lexicographic and is
//! used only for deterministic container ordering, never as the lattice
//! order.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Degree(Vec<u32>);

impl Degree {
    pub fn new(coords: Vec<u32>) -> Self {
        Degree(coords)
    }

    pub fn zero(rank: usize) -> Self {
        Degree(vec![0; rank])
    }

    /// The generator for `colour` (1-based).
    pub fn basis(rank: usize, colour: usize) -> Self {
        let mut c = vec![0; rank];
        c[colour - 1] = 1;
        Degree(c)
    }

    /// The constant degree (n, n, ..., n).
    pub fn constant(rank: usize, n: u32) -> Self {
        Degree(vec![n; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    /// Coordinate for `colour` (1-based).
    pub fn get(&self, colour: usize) -> u32 {
        self.0[colour - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Total length |n|.
    pub fn total(&self) -> u64 {
        self.0.iter().map(|&c| c as u64).sum()
    }

    /// Coordinatewise partial order.
    pub fn leq(&self, other: &Degree) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn join(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn meet(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn plus(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn minus(&self, other: &Degree) -> Result<Degree> {
        if !other.leq(self) {
            return Err(Error::OutOfRange);
        }
        Ok(Degree(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    pub fn scale(&self, n: u32) -> Degree {
        Degree(self.0.iter().map(|c| c * n).collect())
    }

    /// Colours (1-based) with a nonzero coordinate.
    pub fn support(&self) -> Vec<usize> {
        (1..=self.rank()).filter(|&i| self.get(i) > 0).collect()
    }

    /// Least colour (1-based) with a nonzero coordinate.
    pub fn first_nonzero_colour(&self) -> Option<usize> {
        (1..=self.rank()).find(|&i| self.get(i) > 0)
    }

    /// All degrees m with m <= self, graded by |m| and preferring weight on
    /// the lower colours within a grade.
    pub fn box_iter(&self) -> Vec<Degree> {
        let mut out = vec![Degree::zero(self.rank())];
        for colour in 1..=self.rank() {
            let mut next = Vec::new();
            for prefix in &out {
                for c in 0..=self.get(colour) {
                    let mut coords = prefix.0.clone();
                    coords[colour - 1] = c;
                    next.push(Degree(coords));
                }
            }
            out = next;
        }
        out.sort_by_key(|d| {
            let tail: Vec<u32> = d.0.iter().rev().copied().collect();
            (d.total(), tail)
        });
        out
    }
}

impl fmt::Debug for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
