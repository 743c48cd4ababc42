//! Wick algebra on truncated chaos expansions.
//!
//! On coefficients the Wick product is a convolution over exponent
//! patterns: `(a <> b)_gamma = sum_{alpha + beta = gamma} a_alpha b_beta`.
//! It corresponds to pointwise multiplication of S-transforms; the
//! convolution product `a * b` corresponds to pointwise multiplication of
//! T-transforms and reduces here to `a <> b <> g`, where `g` is the
//! positive Gaussian kernel (its S-transform is `exp(+|eta|^2/2)`). The
//! negative kernel is the point mass at the origin, the unit of `*`.
//!
//! Products accumulate in a fixed nested-loop order over canonically sorted
//! terms. Besides making everything reproducible, that order gives the
//! graded-ring identity teeth: the lowest homogeneous part of `a <> b` adds
//! up exactly the same floating-point products, in the same order, as the
//! product of the lowest parts of `a` and `b`, so [`lowest_part_check`]
//! compares the two sides for bit-for-bit equality, not approximate
//! equality. A nonzero match certifies that truncation introduced no zero
//! divisors for that pair.

use crate::chaos::ChaosExpansion;
use crate::error::{Error, Result};
use crate::multi_index::{enumerate_multi_indices, factorial_u64, MultiIndex};
use num_complex::Complex64;

/// Constant terms at or below this magnitude are treated as Wick
/// non-invertible: the geometric series for the inverse would amplify
/// coefficients by more than ~1e12 per degree.
pub const WICK_INVERSE_THRESHOLD: f64 = 1e-12;

/// Wick product truncated at the smaller of the two operands' caps.
pub fn wick_product(a: &ChaosExpansion, b: &ChaosExpansion) -> Result<ChaosExpansion> {
    wick_product_with_cap(a, b, a.max_degree().min(b.max_degree()))
}

/// Untruncated Wick product: the output cap is the sum of the operand caps,
/// so no term can fall off the end. Errors when the sum exceeds
/// [`crate::multi_index::DEGREE_CAP`].
pub fn wick_product_full(a: &ChaosExpansion, b: &ChaosExpansion) -> Result<ChaosExpansion> {
    wick_product_with_cap(a, b, a.max_degree() + b.max_degree())
}

/// Wick product with an explicit output degree cap; terms above the cap are
/// dropped.
pub fn wick_product_with_cap(
    a: &ChaosExpansion,
    b: &ChaosExpansion,
    cap: usize,
) -> Result<ChaosExpansion> {
    a.check_dim(b)?;
    let mut out = ChaosExpansion::zero(a.dim(), cap)?;
    for (alpha, ca) in a.terms() {
        let da = alpha.degree();
        if da > cap {
            break; // canonical order is graded: everything further is larger
        }
        for (beta, cb) in b.terms() {
            if da + beta.degree() > cap {
                break;
            }
            out.add_term(alpha.add(beta), ca * cb);
        }
    }
    Ok(out)
}

/// `a^{<> k}`, truncated at `a`'s own cap. `k = 0` gives the unit.
pub fn wick_power(a: &ChaosExpansion, k: usize) -> Result<ChaosExpansion> {
    let mut acc = ChaosExpansion::unit(a.dim(), a.max_degree())?;
    for _ in 0..k {
        acc = wick_product_with_cap(&acc, a, a.max_degree())?;
    }
    Ok(acc)
}

/// Wick exponential `exp^{<>}(a) = sum_k a^{<> k} / k!`.
///
/// The constant term is treated analytically (`exp(a_0)` as a scalar
/// factor); the rest of the series terminates because `a - a_0` has lowest
/// degree >= 1, so its k-th Wick power vanishes above degree cap `D` once
/// `k > D`.
pub fn wick_exp(a: &ChaosExpansion) -> Result<ChaosExpansion> {
    let cap = a.max_degree();
    let c0 = a.constant_term();
    let u = a.sub(&ChaosExpansion::single_term(
        a.dim(),
        cap,
        MultiIndex::empty(),
        c0,
    )?)?;
    let mut acc = ChaosExpansion::unit(a.dim(), cap)?;
    let mut pow = ChaosExpansion::unit(a.dim(), cap)?;
    for k in 1..=cap {
        pow = wick_product_with_cap(&pow, &u, cap)?;
        if pow.is_zero() {
            break;
        }
        let inv_kfact = 1.0 / factorial_u64(k as u32) as f64;
        acc = acc.add(&pow.scale(Complex64::new(inv_kfact, 0.0)))?;
    }
    Ok(acc.scale(c0.exp()))
}

/// Wick inverse: the unique `b` with `a <> b = 1` in the truncated algebra,
/// given by the geometric series `a_0^{-1} sum_k (1 - a/a_0)^{<> k}`.
/// Fails with [`Error::NonInvertible`] when the constant term is too small
/// in magnitude for the series to be meaningful.
pub fn wick_inverse(a: &ChaosExpansion) -> Result<ChaosExpansion> {
    let cap = a.max_degree();
    let c0 = a.constant_term();
    if c0.norm() < WICK_INVERSE_THRESHOLD {
        return Err(Error::NonInvertible {
            magnitude: c0.norm(),
            threshold: WICK_INVERSE_THRESHOLD,
        });
    }
    let inv_c0 = Complex64::new(1.0, 0.0) / c0;
    // neg_u = 1 - a / a_0 has zero constant term.
    let neg_u = ChaosExpansion::unit(a.dim(), cap)?.sub(&a.scale(inv_c0))?;
    let mut acc = ChaosExpansion::unit(a.dim(), cap)?;
    let mut pow = ChaosExpansion::unit(a.dim(), cap)?;
    for _ in 1..=cap {
        pow = wick_product_with_cap(&pow, &neg_u, cap)?;
        if pow.is_zero() {
            break;
        }
        acc = acc.add(&pow)?;
    }
    Ok(acc.scale(inv_c0))
}

/// Gaussian kernel `exp^{<>}((s/2) sum_i x_i^{<> 2})` in closed form: the
/// coefficient on the doubled pattern `2k` is `(s/2)^{|k|} / prod_i k_i!`.
/// `s = +1` is the convolution kernel (S-transform `exp(+|eta|^2/2)`);
/// `s = -1` is the point mass at the origin, [`delta0`].
pub fn gaussian_kernel(dim: usize, max_degree: usize, s: f64) -> Result<ChaosExpansion> {
    let half_s = 0.5 * s;
    let mut terms = Vec::new();
    for pattern in enumerate_multi_indices(dim, max_degree / 2) {
        let total: u32 = pattern.iter().map(|(_, e)| e).sum();
        let denom: f64 = pattern
            .iter()
            .map(|(_, e)| factorial_u64(e) as f64)
            .product();
        let coeff = half_s.powi(total as i32) / denom;
        let doubled: Vec<(usize, u32)> = pattern.iter().map(|(d, e)| (d, 2 * e)).collect();
        terms.push((
            MultiIndex::from_pairs(&doubled).expect("doubling keeps the pattern valid"),
            Complex64::new(coeff, 0.0),
        ));
    }
    ChaosExpansion::from_terms(dim, max_degree, terms)
}

/// The point mass at the origin: unit of the convolution product.
pub fn delta0(dim: usize, max_degree: usize) -> Result<ChaosExpansion> {
    gaussian_kernel(dim, max_degree, -1.0)
}

/// Convolution product `a * b = a <> b <> g`, truncated at the smaller of
/// the two operands' caps.
pub fn convolution(a: &ChaosExpansion, b: &ChaosExpansion) -> Result<ChaosExpansion> {
    let cap = a.max_degree().min(b.max_degree());
    let g = gaussian_kernel(a.dim(), cap, 1.0)?;
    let ab = wick_product_with_cap(a, b, cap)?;
    wick_product_with_cap(&ab, &g, cap)
}

/// Outcome of the graded lowest-part comparison for one pair.
#[derive(Debug, Clone)]
pub struct LowestPartCheck {
    /// Untruncated Wick product of the pair.
    pub product: ChaosExpansion,
    /// Lowest homogeneous part of the product (zero expansion if the
    /// product vanished).
    pub product_lowest: ChaosExpansion,
    /// Product of the operands' lowest parts, computed independently.
    pub parts_product: ChaosExpansion,
    /// Whether the full product is nonzero.
    pub product_nonzero: bool,
    /// Whether `product_lowest` and `parts_product` agree bit for bit.
    pub exact_match: bool,
}

impl LowestPartCheck {
    /// A pair passes when its product is nonzero and the graded identity
    /// holds exactly.
    pub fn passed(&self) -> bool {
        self.product_nonzero && self.exact_match
    }
}

/// Compare `lowest(a <> b)` against `lowest(a) <> lowest(b)` for bit-exact
/// equality. Both operands must be nonzero; the product is taken without
/// truncation so the lowest part cannot be cut off.
pub fn lowest_part_check(a: &ChaosExpansion, b: &ChaosExpansion) -> Result<LowestPartCheck> {
    let a_low = a.lowest_part()?;
    let b_low = b.lowest_part()?;
    let product = wick_product_full(a, b)?;
    let parts_product = wick_product_full(&a_low, &b_low)?;
    let product_nonzero = !product.is_zero();
    let product_lowest = if product_nonzero {
        product.lowest_part()?
    } else {
        ChaosExpansion::zero(product.dim(), product.max_degree())?
    };
    let exact_match = product_lowest == parts_product;
    Ok(LowestPartCheck {
        product,
        product_lowest,
        parts_product,
        product_nonzero,
        exact_match,
    })
}
