//! Sparse multi-indices: the exponent patterns of chaos terms.
//!
//! A `MultiIndex` maps dimension indices to positive exponents and stands for
//! the product term `He_{a_0}(x_0) * He_{a_1}(x_1) * ...` (equivalently, the
//! monomial `xi^alpha` on the transform side). The empty index is the constant
//! term.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::fmt;

/// Degrees above this would overflow the exact 64-bit factorial.
pub const DEGREE_CAP: usize = 20;

/// Sparse exponent map, kept sorted by dimension index with no zero exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex {
    entries: Vec<(u32, u32)>,
}

impl MultiIndex {
    /// The empty index (degree 0).
    pub fn empty() -> Self {
        MultiIndex {
            entries: Vec::new(),
        }
    }

    /// Single dimension raised to `exponent`.
    pub fn single(dim_index: usize, exponent: u32) -> Self {
        if exponent == 0 {
            return Self::empty();
        }
        MultiIndex {
            entries: vec![(dim_index as u32, exponent)],
        }
    }

    /// Build from arbitrary (dimension, exponent) pairs. Pairs are sorted;
    /// duplicate dimensions and zero exponents are rejected.
    pub fn from_pairs(pairs: &[(usize, u32)]) -> Result<Self> {
        let mut entries: Vec<(u32, u32)> = Vec::with_capacity(pairs.len());
        for &(d, e) in pairs {
            if e == 0 {
                return Err(Error::InvalidExpansion {
                    detail: format!("zero exponent at dimension {d} (sparse form stores none)"),
                    term_index: None,
                });
            }
            entries.push((d as u32, e));
        }
        entries.sort_by_key(|&(d, _)| d);
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidExpansion {
                    detail: format!("duplicate dimension {} in multi-index", w[0].0),
                    term_index: None,
                });
            }
        }
        Ok(MultiIndex { entries })
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total degree: the sum of all exponents.
    pub fn degree(&self) -> usize {
        self.entries.iter().map(|&(_, e)| e as usize).sum()
    }

    /// Largest dimension index used, if any.
    pub fn max_dim_index(&self) -> Option<usize> {
        self.entries.last().map(|&(d, _)| d as usize)
    }

    pub fn exponent(&self, dim_index: usize) -> u32 {
        match self.entries.binary_search_by_key(&(dim_index as u32), |&(d, _)| d) {
            Ok(pos) => self.entries[pos].1,
            Err(_) => 0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.entries.iter().map(|&(d, e)| (d as usize, e))
    }

    /// `alpha! = prod_i (alpha_i)!`, exact for degrees up to [`DEGREE_CAP`].
    pub fn factorial(&self) -> u64 {
        debug_assert!(self.degree() <= DEGREE_CAP);
        self.entries
            .iter()
            .map(|&(_, e)| factorial_u64(e))
            .product()
    }

    /// Component-wise sum (the index of a product term).
    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        let mut entries = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() && j < other.entries.len() {
            let (da, ea) = self.entries[i];
            let (db, eb) = other.entries[j];
            match da.cmp(&db) {
                Ordering::Less => {
                    entries.push((da, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    entries.push((db, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    entries.push((da, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        entries.extend_from_slice(&self.entries[i..]);
        entries.extend_from_slice(&other.entries[j..]);
        MultiIndex { entries }
    }

    /// Raise the exponent at `dim_index` by one.
    pub fn incremented(&self, dim_index: usize) -> MultiIndex {
        self.add(&MultiIndex::single(dim_index, 1))
    }

    /// Lower the exponent at `dim_index` by one; `None` if it is already 0.
    pub fn decremented(&self, dim_index: usize) -> Option<MultiIndex> {
        let pos = self
            .entries
            .binary_search_by_key(&(dim_index as u32), |&(d, _)| d)
            .ok()?;
        let mut entries = self.entries.clone();
        if entries[pos].1 == 1 {
            entries.remove(pos);
        } else {
            entries[pos].1 -= 1;
        }
        Some(MultiIndex { entries })
    }

    /// Replace the exponent at one dimension (0 removes it).
    pub fn with_exponent(&self, dim_index: usize, exponent: u32) -> MultiIndex {
        let mut entries: Vec<(u32, u32)> = self
            .entries
            .iter()
            .copied()
            .filter(|&(d, _)| d as usize != dim_index)
            .collect();
        if exponent > 0 {
            entries.push((dim_index as u32, exponent));
            entries.sort_by_key(|&(d, _)| d);
        }
        MultiIndex { entries }
    }
}

pub(crate) fn factorial_u64(n: u32) -> u64 {
    (1..=n as u64).product()
}

/// Exact binomial coefficient for the small arguments that show up in
/// Hermite linearization (n <= DEGREE_CAP).
pub(crate) fn binomial_u64(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc: u64 = 1;
    for i in 1..=k {
        acc = acc * (n - k + i) / i;
    }
    acc
}

/// All multi-indices over `dim` dimensions with total degree at most
/// `max_degree`, in canonical (graded lexicographic) order.
pub fn enumerate_multi_indices(dim: usize, max_degree: usize) -> Vec<MultiIndex> {
    fn rec(
        dim: usize,
        next: usize,
        remaining: u32,
        cur: &mut Vec<(u32, u32)>,
        out: &mut Vec<MultiIndex>,
    ) {
        if next == dim {
            out.push(MultiIndex {
                entries: cur.clone(),
            });
            return;
        }
        rec(dim, next + 1, remaining, cur, out);
        for e in 1..=remaining {
            cur.push((next as u32, e));
            rec(dim, next + 1, remaining - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, 0, max_degree as u32, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Number of multi-indices over `dim` dimensions with degree at most
/// `max_degree`: the binomial coefficient C(dim + max_degree, dim).
/// Saturates at `u128::MAX` instead of overflowing.
pub fn count_multi_indices(dim: usize, max_degree: usize) -> u128 {
    let n = (dim + max_degree) as u128;
    let k = (dim.min(max_degree)) as u128;
    let mut acc: u128 = 1;
    for i in 1..=k {
        // acc * (n - k + i) is always divisible by i at this point.
        match acc.checked_mul(n - k + i) {
            Some(v) => acc = v / i,
            None => return u128::MAX,
        }
    }
    acc
}

/// Graded lexicographic order: lower total degree first; within a degree,
/// the index with the larger exponent at the earliest differing dimension
/// comes first (`x0^2 < x0*x1 < x1^2`). This is the canonical term order
/// used for all iteration and accumulation.
impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() && j < other.entries.len() {
            let (da, ea) = self.entries[i];
            let (db, eb) = other.entries[j];
            match da.cmp(&db) {
                // A nonzero exponent where the other has zero: earlier dim wins.
                Ordering::Less => return Ordering::Less,
                Ordering::Greater => return Ordering::Greater,
                Ordering::Equal => match ea.cmp(&eb) {
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
        // Equal degrees exhaust both entry lists together.
        debug_assert!(i == self.entries.len() && j == other.entries.len());
        Ordering::Equal
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "1");
        }
        for (k, &(d, e)) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "x{d}")?;
            } else {
                write!(f, "x{d}^{e}")?;
            }
        }
        Ok(())
    }
}
