//! Annihilation and creation operators, pointwise multiplication, and the
//! duality pairing.
//!
//! On a chaos term `c H_alpha` the annihilator along dimension i acts as
//! `c H_alpha -> alpha_i c H_{alpha - e_i}` (the discrete Hida derivative;
//! on the S-transform side it is d/d eta_i). Its adjoint, the creator,
//! shifts the index up without touching the coefficient:
//! `c H_alpha -> c H_{alpha + e_i}`. Together they satisfy the canonical
//! commutation relation `[A_i, C_j] = delta_ij Id` below the degree cap,
//! and their sum is multiplication by the coordinate:
//! `x_i . = A_i + C_i` (the quantum decomposition).
//!
//! Floating-point discipline: all these operators have integer matrix
//! elements in the Hermite basis. [`ccr_commutator`] therefore combines
//! the two compositions' integer elements per term *before* the single
//! float multiplication, which makes the commutation relation hold bit for
//! bit on arbitrary coefficients. Composing [`annihilate`] and [`create`]
//! by hand gives the same operator up to one rounding per path (about 1 ulp;
//! roughly three quarters of random coefficients show a last-bit defect),
//! which is exactly the artifact the combined form eliminates.

use crate::chaos::ChaosExpansion;
use crate::error::{Error, Result};
use crate::multi_index::{binomial_u64, factorial_u64, MultiIndex};
use num_complex::Complex64;

/// Annihilator (discrete Hida derivative) along dimension `i`:
/// `c H_alpha -> alpha_i c H_{alpha - e_i}`; terms without the coordinate
/// drop.
pub fn annihilate(i: usize, a: &ChaosExpansion) -> Result<ChaosExpansion> {
    check_dim_index(i, a)?;
    let mut out = ChaosExpansion::zero(a.dim(), a.max_degree())?;
    for (alpha, c) in a.terms() {
        let e = alpha.exponent(i);
        if e == 0 {
            continue;
        }
        let lowered = alpha.decremented(i).expect("exponent checked nonzero");
        out.add_term(lowered, c * e as f64);
    }
    Ok(out)
}

/// Creator (adjoint of [`annihilate`]) along dimension `i`:
/// `c H_alpha -> c H_{alpha + e_i}`. Terms pushed past the degree cap are
/// dropped, consistent with every other truncating operation; use
/// [`create_checked`] where silent truncation would corrupt an identity.
pub fn create(i: usize, a: &ChaosExpansion) -> Result<ChaosExpansion> {
    check_dim_index(i, a)?;
    let mut out = ChaosExpansion::zero(a.dim(), a.max_degree())?;
    for (alpha, c) in a.terms() {
        if alpha.degree() >= a.max_degree() {
            continue;
        }
        out.add_term(alpha.incremented(i), *c);
    }
    Ok(out)
}

/// [`create`] that refuses inputs with terms at the degree cap instead of
/// silently dropping their images.
pub fn create_checked(i: usize, a: &ChaosExpansion) -> Result<ChaosExpansion> {
    require_headroom(a)?;
    create(i, a)
}

/// The commutator `[A_i, C_j] = A_i C_j - C_j A_i` applied to `a`.
///
/// Requires one degree of headroom so creation is not clipped. Both
/// compositions send `c H_alpha` to the same target index
/// `alpha + e_j - e_i` with integer factors `(alpha + e_j)_i` and
/// `alpha_i`; their difference is combined in integer arithmetic, so the
/// result equals `delta_ij * a` exactly, bit for bit.
pub fn ccr_commutator(i: usize, j: usize, a: &ChaosExpansion) -> Result<ChaosExpansion> {
    check_dim_index(i, a)?;
    check_dim_index(j, a)?;
    require_headroom(a)?;
    let mut out = ChaosExpansion::zero(a.dim(), a.max_degree())?;
    for (alpha, c) in a.terms() {
        let raised = alpha.incremented(j);
        let first = raised.exponent(i) as i64; // A_i C_j path
        let second = alpha.exponent(i) as i64; // C_j A_i path
        let element = first - second;
        if element == 0 {
            continue;
        }
        let target = raised
            .decremented(i)
            .expect("first path has a positive exponent when element != 0");
        out.add_term(target, c * element as f64);
    }
    Ok(out)
}

/// Pointwise (ordinary) product of the realizations, exact: the output cap
/// is the sum of the operands' top degrees.
pub fn pointwise_product(a: &ChaosExpansion, b: &ChaosExpansion) -> Result<ChaosExpansion> {
    let cap = a.top_degree().unwrap_or(0) + b.top_degree().unwrap_or(0);
    pointwise_product_with_cap(a, b, cap)
}

/// Pointwise product truncated at `cap`, by per-dimension Hermite
/// linearization
/// `He_m He_n = sum_k C(m,k) C(n,k) k! He_{m+n-2k}`.
///
/// Linearization weights are products of exact small integers and stay well
/// below 2^53, so each contribution costs one rounded multiplication.
pub fn pointwise_product_with_cap(
    a: &ChaosExpansion,
    b: &ChaosExpansion,
    cap: usize,
) -> Result<ChaosExpansion> {
    a.check_dim(b)?;
    let mut out = ChaosExpansion::zero(a.dim(), cap)?;
    for (alpha, ca) in a.terms() {
        for (beta, cb) in b.terms() {
            let base = ca * cb;
            // Union of dimensions with exponents in either factor,
            // ascending (both entry lists are sorted).
            let mut dims: Vec<(usize, u32, u32)> = Vec::new();
            for (d, e) in alpha.iter() {
                dims.push((d, e, beta.exponent(d)));
            }
            for (d, e) in beta.iter() {
                if alpha.exponent(d) == 0 {
                    dims.push((d, 0, e));
                }
            }
            dims.sort_by_key(|&(d, _, _)| d);
            expand_linearization(&dims, 0, &mut Vec::new(), 1.0, base, cap, &mut out);
        }
    }
    Ok(out)
}

/// Depth-first expansion of the per-dimension linearization sums, k
/// ascending in each dimension: a fixed traversal order, so accumulation
/// is deterministic.
fn expand_linearization(
    dims: &[(usize, u32, u32)],
    pos: usize,
    pairs: &mut Vec<(usize, u32)>,
    weight: f64,
    base: Complex64,
    cap: usize,
    out: &mut ChaosExpansion,
) {
    if pos == dims.len() {
        let degree: u32 = pairs.iter().map(|&(_, e)| e).sum();
        if degree as usize <= cap {
            let index = MultiIndex::from_pairs(pairs).expect("dims unique and exponents positive");
            out.add_term(index, base * weight);
        }
        return;
    }
    let (d, m, n) = dims[pos];
    for k in 0..=m.min(n) {
        let w = (binomial_u64(m, k) * binomial_u64(n, k) * factorial_u64(k)) as f64;
        let exponent = m + n - 2 * k;
        if exponent > 0 {
            pairs.push((d, exponent));
        }
        expand_linearization(dims, pos + 1, pairs, weight * w, base, cap, out);
        if exponent > 0 {
            pairs.pop();
        }
    }
}

/// Multiplication by the coordinate `x_i`, computed through the pointwise
/// product; equals `annihilate(i, a) + create(i, a)` exactly. Needs one
/// degree of headroom so the creation half is not clipped.
pub fn multiply_coordinate(i: usize, a: &ChaosExpansion) -> Result<ChaosExpansion> {
    check_dim_index(i, a)?;
    require_headroom(a)?;
    let xi = ChaosExpansion::coordinate(a.dim(), a.max_degree(), i)?;
    pointwise_product_with_cap(&xi, a, a.max_degree())
}

/// Duality pairing `<<a, b>> = sum_alpha alpha! a_alpha b_alpha` —
/// bilinear, no conjugation.
pub fn pairing(a: &ChaosExpansion, b: &ChaosExpansion) -> Result<Complex64> {
    a.check_dim(b)?;
    let mut acc = Complex64::ZERO;
    for (alpha, ca) in a.terms() {
        let cb = b.coeff(alpha);
        if cb == Complex64::ZERO {
            continue;
        }
        acc += alpha.factorial() as f64 * ca * cb;
    }
    Ok(acc)
}

fn check_dim_index(i: usize, a: &ChaosExpansion) -> Result<()> {
    if i >= a.dim() {
        return Err(Error::IndexOutOfRange {
            index: i,
            dim: a.dim(),
        });
    }
    Ok(())
}

fn require_headroom(a: &ChaosExpansion) -> Result<()> {
    if let Some(d) = a.top_degree() {
        if d >= a.max_degree() {
            return Err(Error::DegreeTooHigh {
                degree: d,
                max_degree: a.max_degree(),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multi_index::enumerate_multi_indices;
    use crate::sample::{random_nonzero_expansion, trial_rng, SampleConfig};
    use crate::transforms::eval_realization;
    use crate::wick::wick_product;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn mi(pairs: &[(usize, u32)]) -> MultiIndex {
        MultiIndex::from_pairs(pairs).unwrap()
    }

    fn random_complex(dim: usize, deg: usize, stream: u64) -> ChaosExpansion {
        let cfg = SampleConfig {
            density: 0.7,
            complex: true,
        };
        random_nonzero_expansion(&mut trial_rng(97, stream), dim, deg, cfg).unwrap()
    }

    /// Random expansion with terms up to `deg` but cap `deg + 1`, so
    /// creation has headroom.
    fn random_with_headroom(dim: usize, deg: usize, stream: u64) -> ChaosExpansion {
        random_complex(dim, deg, stream).truncate(deg + 1).unwrap()
    }

    #[test]
    fn annihilate_examples() {
        let h2 = ChaosExpansion::single_term(1, 3, mi(&[(0, 2)]), c(1.0)).unwrap();
        let d = annihilate(0, &h2).unwrap();
        assert_eq!(d.num_terms(), 1);
        assert_eq!(d.coeff(&mi(&[(0, 1)])), c(2.0));
        let one = ChaosExpansion::unit(2, 2).unwrap();
        assert!(annihilate(0, &one).unwrap().is_zero());
        assert!(annihilate(2, &one).is_err());
    }

    #[test]
    fn annihilate_is_the_gateaux_derivative() {
        let a = random_complex(2, 4, 0);
        let da = annihilate(0, &a).unwrap();
        let x = [0.4, -0.9];
        let exact = eval_realization(&da, &x).unwrap();
        let mut last_err = f64::INFINITY;
        for eps in [1e-2, 1e-3, 1e-4] {
            let plus = eval_realization(&a, &[x[0] + eps, x[1]]).unwrap();
            let minus = eval_realization(&a, &[x[0] - eps, x[1]]).unwrap();
            let diff = (plus - minus) / (2.0 * eps);
            let err = (diff - exact).norm() / exact.norm().max(1.0);
            assert!(err < last_err, "difference error should shrink with eps");
            last_err = err;
        }
        assert!(last_err < 1e-6, "final relative error {last_err}");
    }

    #[test]
    fn create_examples() {
        let one = ChaosExpansion::unit(2, 3).unwrap();
        let x1 = create(1, &one).unwrap();
        assert_eq!(x1.coeff(&mi(&[(1, 1)])), c(1.0));
        assert_eq!(x1.num_terms(), 1);
        let x1sq = create(1, &x1).unwrap();
        assert_eq!(x1sq.coeff(&mi(&[(1, 2)])), c(1.0));
        // At the cap the pushed-out term drops...
        let top = ChaosExpansion::single_term(1, 2, mi(&[(0, 2)]), c(1.0)).unwrap();
        assert!(create(0, &top).unwrap().is_zero());
        // ...and the checked variant refuses instead.
        assert!(matches!(
            create_checked(0, &top),
            Err(Error::DegreeTooHigh { .. })
        ));
    }

    #[test]
    fn creation_is_wick_multiplication_bitwise() {
        for stream in 0..20 {
            let a = random_complex(3, 4, stream);
            for i in 0..3 {
                let xi = ChaosExpansion::coordinate(3, 4, i).unwrap();
                assert_eq!(
                    create(i, &a).unwrap(),
                    wick_product(&xi, &a).unwrap(),
                    "stream {stream}, i {i}"
                );
            }
        }
    }

    #[test]
    fn ccr_exhaustive_on_basis_terms() {
        for dim in 1..=3usize {
            for max_degree in 1..=5usize {
                for alpha in enumerate_multi_indices(dim, max_degree - 1) {
                    let a = ChaosExpansion::single_term(dim, max_degree, alpha, c(1.0)).unwrap();
                    for i in 0..dim {
                        for j in 0..dim {
                            let got = ccr_commutator(i, j, &a).unwrap();
                            if i == j {
                                assert_eq!(got, a);
                            } else {
                                assert!(got.is_zero());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn ccr_exact_on_random_expansions() {
        for stream in 0..100 {
            let a = random_with_headroom(3, 3, 100 + stream);
            for i in 0..3 {
                for j in 0..3 {
                    let got = ccr_commutator(i, j, &a).unwrap();
                    if i == j {
                        assert_eq!(got, a, "stream {stream}: [A_{i}, C_{i}] != Id");
                    } else {
                        assert!(got.is_zero(), "stream {stream}: [A_{i}, C_{j}] != 0");
                    }
                }
            }
        }
    }

    #[test]
    fn ccr_refuses_terms_at_the_cap() {
        let top = ChaosExpansion::single_term(1, 3, mi(&[(0, 3)]), c(1.0)).unwrap();
        assert!(matches!(
            ccr_commutator(0, 0, &top),
            Err(Error::DegreeTooHigh { .. })
        ));
    }

    #[test]
    fn ccr_matches_operator_composition_to_one_ulp() {
        // The combined form is the same operator as the literal
        // composition, up to one rounding on each path.
        let a = random_with_headroom(2, 3, 7);
        let composed = annihilate(0, &create_checked(0, &a).unwrap())
            .unwrap()
            .sub(&create(0, &annihilate(0, &a).unwrap()).unwrap())
            .unwrap();
        let combined = ccr_commutator(0, 0, &a).unwrap();
        let scale = a.coeff_sup_norm();
        assert!(composed.coeff_sup_distance(&combined) <= 1e-14 * scale);
    }

    #[test]
    fn annihilators_commute_and_creators_commute() {
        for alpha in enumerate_multi_indices(3, 4) {
            let a = ChaosExpansion::single_term(3, 5, alpha, c(1.0)).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    let aij = annihilate(i, &annihilate(j, &a).unwrap()).unwrap();
                    let aji = annihilate(j, &annihilate(i, &a).unwrap()).unwrap();
                    assert_eq!(aij, aji);
                    let cij = create(i, &create(j, &a).unwrap()).unwrap();
                    let cji = create(j, &create(i, &a).unwrap()).unwrap();
                    assert_eq!(cij, cji);
                }
            }
        }
    }

    #[test]
    fn pointwise_product_examples() {
        // x * x = He_2 + 1.
        let x = ChaosExpansion::coordinate(1, 1, 0).unwrap();
        let sq = pointwise_product(&x, &x).unwrap();
        assert_eq!(sq.coeff(&MultiIndex::empty()), c(1.0));
        assert_eq!(sq.coeff(&mi(&[(0, 2)])), c(1.0));
        assert_eq!(sq.num_terms(), 2);
        // unit * a = a.
        let a = random_complex(2, 3, 11);
        let one = ChaosExpansion::unit(2, 3).unwrap();
        let p = pointwise_product(&one, &a).unwrap();
        assert_eq!(p.truncate(3).unwrap(), a);
    }

    #[test]
    fn pointwise_product_matches_pointwise_oracle() {
        let a = random_complex(2, 3, 12);
        let b = random_complex(2, 3, 13);
        let p = pointwise_product(&a, &b).unwrap();
        for x in [[0.3, -0.8], [1.1, 0.4], [-0.2, -0.1]] {
            let lhs = eval_realization(&p, &x).unwrap();
            let rhs =
                eval_realization(&a, &x).unwrap() * eval_realization(&b, &x).unwrap();
            assert!(
                (lhs - rhs).norm() <= 1e-10 * rhs.norm().max(1.0),
                "at {x:?}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn quantum_decomposition_exact() {
        for dim in 1..=3usize {
            for max_degree in 1..=5usize {
                for alpha in enumerate_multi_indices(dim, max_degree - 1) {
                    let a = ChaosExpansion::single_term(dim, max_degree, alpha, c(1.0)).unwrap();
                    for i in 0..dim {
                        let lhs = multiply_coordinate(i, &a).unwrap();
                        let rhs = annihilate(i, &a)
                            .unwrap()
                            .add(&create(i, &a).unwrap())
                            .unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
        // And on random complex coefficients: the two routes perform the
        // same single multiplications and commutative additions.
        for stream in 0..20 {
            let a = random_with_headroom(3, 3, 200 + stream);
            for i in 0..3 {
                let lhs = multiply_coordinate(i, &a).unwrap();
                let rhs = annihilate(i, &a)
                    .unwrap()
                    .add(&create(i, &a).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs, "stream {stream}, i {i}");
            }
        }
    }

    #[test]
    fn quantum_decomposition_example() {
        // x * He_1 = 1 + He_2 = (A + C) He_1.
        let x1 = ChaosExpansion::coordinate(2, 3, 1).unwrap();
        let m = multiply_coordinate(1, &x1).unwrap();
        assert_eq!(m.coeff(&MultiIndex::empty()), c(1.0));
        assert_eq!(m.coeff(&mi(&[(1, 2)])), c(1.0));
        assert_eq!(m.num_terms(), 2);
        let one = ChaosExpansion::unit(2, 3).unwrap();
        assert_eq!(
            multiply_coordinate(0, &one).unwrap(),
            ChaosExpansion::coordinate(2, 3, 0).unwrap()
        );
    }

    #[test]
    fn pairing_examples() {
        let one = ChaosExpansion::unit(2, 3).unwrap();
        assert_eq!(pairing(&one, &one).unwrap(), c(1.0));
        let a = random_complex(2, 3, 31);
        assert_eq!(pairing(&a, &one).unwrap(), a.constant_term());
        // <<H_alpha, H_alpha>> = alpha!.
        let h = ChaosExpansion::single_term(2, 4, mi(&[(0, 2), (1, 1)]), c(1.0)).unwrap();
        assert_eq!(pairing(&h, &h).unwrap(), c(2.0));
    }

    #[test]
    fn duality_identity() {
        // <<x_i . y, phi>> = <<x_i, y . phi>> with exact headroom.
        let y = random_complex(2, 2, 41).truncate(2).unwrap();
        let phi = random_complex(2, 2, 42).truncate(2).unwrap();
        for i in 0..2 {
            let y5 = y.truncate(5).unwrap();
            let lhs = pairing(&multiply_coordinate(i, &y5).unwrap(), &phi.truncate(5).unwrap())
                .unwrap();
            let xi = ChaosExpansion::coordinate(2, 5, i).unwrap();
            let rhs = pairing(&xi, &pointwise_product(&y, &phi).unwrap().truncate(5).unwrap())
                .unwrap();
            assert!(
                (lhs - rhs).norm() <= 1e-10 * lhs.norm().max(1.0),
                "i = {i}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn s_transform_intertwines_annihilation_with_differentiation() {
        // Coefficient-level check: the S-transform of A_i a is the i-th
        // partial derivative of the polynomial S a, differentiated
        // coefficient by coefficient.
        let a = random_complex(2, 4, 51);
        for i in 0..2 {
            let mut derived = ChaosExpansion::zero(2, 4).unwrap();
            for (alpha, coeff) in a.terms() {
                let e = alpha.exponent(i);
                if e > 0 {
                    derived.add_term(
                        alpha.decremented(i).unwrap(),
                        coeff * e as f64,
                    );
                }
            }
            assert_eq!(annihilate(i, &a).unwrap(), derived);
        }
    }
}
