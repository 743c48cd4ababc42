//! Truncated chaos expansions: the working representation of Hida
//! distributions.
//!
//! A `ChaosExpansion` is a finite sum `sum_alpha c_alpha H_alpha` over N
//! independent standard Gaussian coordinates, where `H_alpha` is the product
//! of probabilists' Hermite polynomials with exponent pattern `alpha` and the
//! total degree is capped at `max_degree`. Coefficients are complex doubles.
//!
//! Terms are stored in a `BTreeMap` keyed by the graded-lexicographic order,
//! so iteration, reductions and serialization are canonical: identical inputs
//! produce bit-identical results no matter how a computation is scheduled.
//! Exact zero coefficients are pruned; nothing else is (there is no epsilon
//! cleanup that could mask a genuinely nonzero term).

use crate::error::{Error, Result};
use crate::multi_index::{MultiIndex, DEGREE_CAP};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct ChaosExpansion {
    dim: usize,
    max_degree: usize,
    terms: BTreeMap<MultiIndex, Complex64>,
}

impl ChaosExpansion {
    /// The zero expansion (no terms).
    pub fn zero(dim: usize, max_degree: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyInput("dimension must be at least 1"));
        }
        if max_degree > DEGREE_CAP {
            return Err(Error::DegreeCapExceeded {
                degree: max_degree,
                cap: DEGREE_CAP,
            });
        }
        Ok(ChaosExpansion {
            dim,
            max_degree,
            terms: BTreeMap::new(),
        })
    }

    /// The Wick unit `1`: a single constant term, independent of N and D.
    pub fn unit(dim: usize, max_degree: usize) -> Result<Self> {
        let mut e = Self::zero(dim, max_degree)?;
        e.terms.insert(MultiIndex::empty(), Complex64::new(1.0, 0.0));
        Ok(e)
    }

    /// The first-order term `x_i` (a single Hermite factor `He_1(x_i)`).
    pub fn coordinate(dim: usize, max_degree: usize, index: usize) -> Result<Self> {
        Self::single_term(dim, max_degree, MultiIndex::single(index, 1), Complex64::new(1.0, 0.0))
    }

    /// Expansion with a single term.
    pub fn single_term(
        dim: usize,
        max_degree: usize,
        index: MultiIndex,
        coeff: Complex64,
    ) -> Result<Self> {
        let mut e = Self::zero(dim, max_degree)?;
        e.check_index(&index)?;
        if !is_exact_zero(coeff) {
            e.terms.insert(index, coeff);
        }
        Ok(e)
    }

    /// Build from a term list; indices are validated against `dim` and
    /// `max_degree` and coefficients on repeated indices are summed.
    pub fn from_terms(
        dim: usize,
        max_degree: usize,
        terms: impl IntoIterator<Item = (MultiIndex, Complex64)>,
    ) -> Result<Self> {
        let mut e = Self::zero(dim, max_degree)?;
        for (index, coeff) in terms {
            e.check_index(&index)?;
            e.add_term(index, coeff);
        }
        Ok(e)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient on `index` (0 when the term is absent).
    pub fn coeff(&self, index: &MultiIndex) -> Complex64 {
        self.terms.get(index).copied().unwrap_or(Complex64::ZERO)
    }

    /// Constant term `c_∅` (the mean under the Gaussian measure).
    pub fn constant_term(&self) -> Complex64 {
        self.coeff(&MultiIndex::empty())
    }

    /// Terms in canonical (graded lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.terms.iter()
    }

    /// Degree of the lowest nonzero homogeneous component, if any.
    pub fn lowest_degree(&self) -> Option<usize> {
        // Graded order puts a minimal-degree term first.
        self.terms.keys().next().map(|a| a.degree())
    }

    /// Highest degree actually present (not `max_degree`, which is the cap).
    pub fn top_degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(|a| a.degree())
    }

    /// Homogeneous component of minimal degree. Errors on the zero expansion.
    pub fn lowest_part(&self) -> Result<ChaosExpansion> {
        let d = self.lowest_degree().ok_or(Error::ZeroExpansion)?;
        let terms = self
            .terms
            .iter()
            .take_while(|(a, _)| a.degree() == d)
            .map(|(a, c)| (a.clone(), *c))
            .collect();
        Ok(ChaosExpansion {
            dim: self.dim,
            max_degree: self.max_degree,
            terms,
        })
    }

    /// Term-wise sum.
    pub fn add(&self, other: &ChaosExpansion) -> Result<ChaosExpansion> {
        self.check_dim(other)?;
        let mut out = ChaosExpansion {
            dim: self.dim,
            max_degree: self.max_degree.max(other.max_degree),
            terms: self.terms.clone(),
        };
        for (a, c) in &other.terms {
            out.add_term(a.clone(), *c);
        }
        Ok(out)
    }

    /// Term-wise difference.
    pub fn sub(&self, other: &ChaosExpansion) -> Result<ChaosExpansion> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Scalar multiple.
    pub fn scale(&self, factor: Complex64) -> ChaosExpansion {
        if is_exact_zero(factor) {
            return ChaosExpansion {
                dim: self.dim,
                max_degree: self.max_degree,
                terms: BTreeMap::new(),
            };
        }
        let terms = self
            .terms
            .iter()
            .filter_map(|(a, c)| {
                let v = c * factor;
                (!is_exact_zero(v)).then(|| (a.clone(), v))
            })
            .collect();
        ChaosExpansion {
            dim: self.dim,
            max_degree: self.max_degree,
            terms,
        }
    }

    /// Drop all terms of degree above `new_max_degree` and reset the cap.
    /// The cap may also be raised; existing terms are untouched then.
    pub fn truncate(&self, new_max_degree: usize) -> Result<ChaosExpansion> {
        if new_max_degree > DEGREE_CAP {
            return Err(Error::DegreeCapExceeded {
                degree: new_max_degree,
                cap: DEGREE_CAP,
            });
        }
        let terms = self
            .terms
            .iter()
            .filter(|(a, _)| a.degree() <= new_max_degree)
            .map(|(a, c)| (a.clone(), *c))
            .collect();
        Ok(ChaosExpansion {
            dim: self.dim,
            max_degree: new_max_degree,
            terms,
        })
    }

    /// Squared chaos norm `sum_alpha alpha! |c_alpha|^2` (the L^2(mu) norm
    /// squared of the represented functional).
    pub fn l2_norm_sq(&self) -> f64 {
        let mut acc = 0.0;
        for (a, c) in &self.terms {
            acc += a.factorial() as f64 * c.norm_sqr();
        }
        acc
    }

    /// L^2 mass per homogeneous degree, indexed by degree `0..=max_degree`.
    pub fn l2_mass_by_degree(&self) -> Vec<f64> {
        let mut mass = vec![0.0; self.max_degree + 1];
        for (a, c) in &self.terms {
            mass[a.degree()] += a.factorial() as f64 * c.norm_sqr();
        }
        mass
    }

    /// Largest coefficient magnitude of the term-wise difference; 0 when the
    /// expansions agree exactly.
    pub fn coeff_sup_distance(&self, other: &ChaosExpansion) -> f64 {
        let mut sup: f64 = 0.0;
        for (a, c) in &self.terms {
            sup = sup.max((c - other.coeff(a)).norm());
        }
        for (a, c) in &other.terms {
            if !self.terms.contains_key(a) {
                sup = sup.max(c.norm());
            }
        }
        sup
    }

    /// Largest coefficient magnitude.
    pub fn coeff_sup_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub(crate) fn check_dim(&self, other: &ChaosExpansion) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(())
    }

    pub(crate) fn check_index(&self, index: &MultiIndex) -> Result<()> {
        if let Some(d) = index.max_dim_index() {
            if d >= self.dim {
                return Err(Error::IndexOutOfRange {
                    index: d,
                    dim: self.dim,
                });
            }
        }
        let deg = index.degree();
        if deg > self.max_degree {
            return Err(Error::DegreeTooHigh {
                degree: deg,
                max_degree: self.max_degree,
            });
        }
        Ok(())
    }

    /// Accumulate `coeff` onto `index`, pruning an exact-zero result.
    pub(crate) fn add_term(&mut self, index: MultiIndex, coeff: Complex64) {
        if is_exact_zero(coeff) {
            return;
        }
        let entry = self.terms.entry(index);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let v = *o.get() + coeff;
                if is_exact_zero(v) {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
        }
    }

}

pub(crate) fn is_exact_zero(c: Complex64) -> bool {
    c.re == 0.0 && c.im == 0.0
}

impl fmt::Display for ChaosExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (a, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if a.is_empty() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*{a}")?;
            }
        }
        Ok(())
    }
}
