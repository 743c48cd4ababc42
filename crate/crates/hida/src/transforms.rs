//! S- and T-transforms, with quadrature oracles to back them.
//!
//! On chaos coefficients the transforms are algebraic:
//!
//! * `S(a)(eta) = sum_alpha c_alpha eta^alpha` — the monomial symbol, since
//!   the S-transform shifts the path argument and
//!   `integral H_alpha(x + eta) dmu(x) = eta^alpha`;
//! * `T(a)(xi) = exp(-|xi|^2/2) * S(a)(i xi)` — the Fourier side, fixed by
//!   the Gaussian characteristic function
//!   `integral exp(i<x, xi>) dmu(x) = exp(-|xi|^2/2)`.
//!
//! Both also have an integral form that knows nothing about coefficients:
//! S integrates the realization over a shifted Gaussian, T integrates it
//! against `exp(i<x, xi>)`. [`s_transform_quadrature`] and
//! [`t_transform_quadrature`] evaluate those integrals with tensorized
//! Gauss-Hermite rules (dimension <= 3, where tensor grids are still cheap)
//! and exist purely as independent cross-checks of the algebraic routines.
//!
//! The S integrand is a polynomial, so a rule of order `max_degree + 8`
//! integrates it exactly up to roundoff. The T integrand oscillates; its
//! Gauss-Hermite error scales like `|xi|^(2Q) Q! / (2Q)!`, so use a rule of
//! order ~40 to reach 1e-10 accuracy for `|xi| <= 3`.

use crate::chaos::ChaosExpansion;
use crate::error::{Error, Result};
use crate::quadrature::QuadratureRule;
use num_complex::Complex64;

/// Largest dimension for which the tensor-product oracles will build a
/// grid.
pub const ORACLE_DIM_LIMIT: usize = 3;

/// Probabilists' Hermite polynomial `He_n(x)` via the three-term
/// recurrence `He_{n+1} = x He_n - n He_{n-1}`.
pub fn hermite_he(n: u32, x: f64) -> f64 {
    let mut prev = 0.0; // He_{-1}, unused at n = 0
    let mut cur = 1.0; // He_0
    for k in 0..n {
        let next = x * cur - k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `He_n` at a complex argument, same recurrence.
pub fn hermite_eval(n: u32, z: Complex64) -> Complex64 {
    let mut prev = Complex64::ZERO;
    let mut cur = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let next = z * cur - k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `He_0(x) .. He_max_n(x)` in one sweep.
pub fn hermite_values(max_n: u32, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(max_n as usize + 1);
    out.push(1.0);
    if max_n == 0 {
        return out;
    }
    out.push(x);
    for k in 1..max_n {
        let next = x * out[k as usize] - k as f64 * out[k as usize - 1];
        out.push(next);
    }
    out
}

/// Evaluate the realization `sum_alpha c_alpha prod_i He_{alpha_i}(x_i)` at
/// a real path point (fast path for quadrature and sampling).
pub fn eval_realization(a: &ChaosExpansion, x: &[f64]) -> Result<Complex64> {
    if x.len() != a.dim() {
        return Err(Error::LengthMismatch {
            expected: a.dim(),
            got: x.len(),
        });
    }
    let top = a.top_degree().unwrap_or(0) as u32;
    let tables: Vec<Vec<f64>> = x.iter().map(|&xi| hermite_values(top, xi)).collect();
    let mut acc = Complex64::ZERO;
    for (alpha, c) in a.terms() {
        let mut factor = 1.0;
        for (d, e) in alpha.iter() {
            factor *= tables[d][e as usize];
        }
        acc += c * factor;
    }
    Ok(acc)
}

/// Pointwise realization at a complex point, canonical-order accumulation.
pub fn chaos_eval(a: &ChaosExpansion, x: &[Complex64]) -> Result<Complex64> {
    if x.len() != a.dim() {
        return Err(Error::LengthMismatch {
            expected: a.dim(),
            got: x.len(),
        });
    }
    let mut acc = Complex64::ZERO;
    for (alpha, c) in a.terms() {
        let mut factor = Complex64::new(1.0, 0.0);
        for (d, e) in alpha.iter() {
            factor *= hermite_eval(e, x[d]);
        }
        acc += c * factor;
    }
    Ok(acc)
}

/// Algebraic S-transform: the symbol `sum_alpha c_alpha eta^alpha`
/// evaluated at a complex point.
pub fn s_transform_eval(a: &ChaosExpansion, eta: &[Complex64]) -> Result<Complex64> {
    if eta.len() != a.dim() {
        return Err(Error::LengthMismatch {
            expected: a.dim(),
            got: eta.len(),
        });
    }
    let mut acc = Complex64::ZERO;
    for (alpha, c) in a.terms() {
        let mut factor = Complex64::new(1.0, 0.0);
        for (d, e) in alpha.iter() {
            factor *= eta[d].powu(e);
        }
        acc += c * factor;
    }
    Ok(acc)
}

/// Algebraic T-transform `exp(-sum xi_i^2 / 2) * S(a)(i xi)`, extended to
/// complex arguments.
pub fn t_transform_eval(a: &ChaosExpansion, xi: &[Complex64]) -> Result<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    let rotated: Vec<Complex64> = xi.iter().map(|&z| i * z).collect();
    let s = s_transform_eval(a, &rotated)?;
    let half_norm_sq: Complex64 = xi.iter().map(|&z| z * z).sum::<Complex64>() * 0.5;
    Ok((-half_norm_sq).exp() * s)
}

/// Wrap a real point for the complex-argument transforms.
pub fn to_complex(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

/// Integral-form S-transform `integral a(x + eta) dmu(x)` on a tensor
/// Gauss-Hermite grid. Real shift only; dimension at most
/// [`ORACLE_DIM_LIMIT`]; the rule must have order >= max_degree + 4.
pub fn s_transform_quadrature(
    a: &ChaosExpansion,
    eta: &[f64],
    rule: &QuadratureRule,
) -> Result<Complex64> {
    check_oracle_args(a, eta.len(), rule, a.max_degree() + 4)?;
    tensor_integral(a.dim(), rule, |x| {
        let shifted: Vec<f64> = x.iter().zip(eta).map(|(xi, ei)| xi + ei).collect();
        eval_realization(a, &shifted)
    })
}

/// Integral-form T-transform `integral a(x) exp(i <x, xi>) dmu(x)` on a
/// tensor Gauss-Hermite grid. Real frequency only; dimension at most
/// [`ORACLE_DIM_LIMIT`]; the oscillatory integrand demands order >=
/// max_degree + 8 (and materially more for |xi| beyond ~2; see module
/// docs).
pub fn t_transform_quadrature(
    a: &ChaosExpansion,
    xi: &[f64],
    rule: &QuadratureRule,
) -> Result<Complex64> {
    check_oracle_args(a, xi.len(), rule, a.max_degree() + 8)?;
    tensor_integral(a.dim(), rule, |x| {
        let phase: f64 = x.iter().zip(xi).map(|(xi, fi)| xi * fi).sum();
        Ok(eval_realization(a, x)? * Complex64::new(0.0, phase).exp())
    })
}

fn check_oracle_args(
    a: &ChaosExpansion,
    point_len: usize,
    rule: &QuadratureRule,
    required_order: usize,
) -> Result<()> {
    if a.dim() > ORACLE_DIM_LIMIT {
        return Err(Error::DimensionTooLarge {
            max: ORACLE_DIM_LIMIT,
            got: a.dim(),
        });
    }
    if point_len != a.dim() {
        return Err(Error::LengthMismatch {
            expected: a.dim(),
            got: point_len,
        });
    }
    if rule.order() < required_order {
        return Err(Error::QuadratureTooCoarse {
            order: rule.order(),
            required: required_order,
        });
    }
    Ok(())
}

/// Tensor-product integral over `dim` independent standard Gaussians,
/// walking the grid in a fixed row-major order.
fn tensor_integral(
    dim: usize,
    rule: &QuadratureRule,
    mut f: impl FnMut(&[f64]) -> Result<Complex64>,
) -> Result<Complex64> {
    let q = rule.order();
    let mut point = vec![0.0; dim];
    let mut acc = Complex64::ZERO;
    let total = q.pow(dim as u32);
    for flat in 0..total {
        let mut rest = flat;
        let mut weight = 1.0;
        for d in (0..dim).rev() {
            let idx = rest % q;
            rest /= q;
            point[d] = rule.nodes()[idx];
            weight *= rule.weights()[idx];
        }
        acc += f(&point)? * weight;
    }
    Ok(acc)
}
