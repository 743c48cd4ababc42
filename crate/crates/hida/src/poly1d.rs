//! One-variable polynomials under the Gaussian measure: the operators
//! `d/dx` and `x - d/dx`, symbolic Hermite generation, and the shift
//! transform `S1`.
//!
//! This is the one-dimensional model of the operator calculus in [`crate::ccr`].
//! With respect to the standard Gaussian measure `dmu = e^{-x^2/2} dx / sqrt(2 pi)`,
//! the raising operator `x - d/dx` is the adjoint of `d/dx`:
//!
//! ```text
//!   integral ((x - d/dx) f) g dmu  =  integral f (dg/dx) dmu,
//! ```
//!
//! and iterating it on the constant one generates the probabilists' Hermite
//! polynomials: `He_n = (x - d/dx)^n 1`. Under the shift transform
//! `(S1 f)(xi) = integral f(x + xi) dmu(x)`, differentiation becomes
//! `d/d xi` and the raising operator becomes multiplication by `xi` — the
//! same dictionary the full S-transform uses, one dimension at a time.
//!
//! [`hermite_generate`] runs the symbolic iteration in 128-bit integer
//! arithmetic, so it is an exact oracle independent of the evaluation
//! recurrence in [`crate::transforms`].

use crate::error::{Error, Result};
use crate::quadrature::QuadratureRule;
use num_complex::Complex64;

/// Largest `n` accepted by [`hermite_generate`]. The symbolic coefficients
/// stay far inside `i128` through this point.
pub const HERMITE_GENERATE_CAP: usize = 30;

/// Dense one-variable polynomial with complex coefficients,
/// `coeffs[k]` multiplying `x^k`. The zero polynomial is the empty list;
/// otherwise the trailing coefficient is nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial1D {
    coeffs: Vec<Complex64>,
}

impl Polynomial1D {
    /// The zero polynomial.
    pub fn zero() -> Self {
        Polynomial1D { coeffs: Vec::new() }
    }

    /// The constant polynomial `c`.
    pub fn constant(c: Complex64) -> Self {
        Polynomial1D::from_coeffs(vec![c])
    }

    /// Build from dense coefficients, low power first; trailing zeros are
    /// trimmed to restore the representation invariant.
    pub fn from_coeffs(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last() == Some(&Complex64::ZERO) {
            coeffs.pop();
        }
        Polynomial1D { coeffs }
    }

    /// Real-coefficient convenience constructor.
    pub fn from_real_coeffs(coeffs: &[f64]) -> Self {
        Polynomial1D::from_coeffs(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `x^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(Complex64::ZERO)
    }

    /// Dense coefficient slice, low power first.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Horner evaluation at a complex point.
    pub fn eval(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// The derivative `df/dx`.
    pub fn derivative(&self) -> Polynomial1D {
        if self.coeffs.len() <= 1 {
            return Polynomial1D::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        Polynomial1D::from_coeffs(coeffs)
    }

    /// The raising operator `(x - d/dx) f` — the Gaussian adjoint of
    /// [`Polynomial1D::derivative`].
    pub fn raise(&self) -> Polynomial1D {
        if self.coeffs.is_empty() {
            return Polynomial1D::zero();
        }
        let n = self.coeffs.len();
        let mut coeffs = vec![Complex64::ZERO; n + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            coeffs[k + 1] += c; // x * x^k
            if k >= 1 {
                coeffs[k - 1] -= c * k as f64; // -(x^k)'
            }
        }
        Polynomial1D::from_coeffs(coeffs)
    }

    /// Sum of two polynomials.
    pub fn add(&self, other: &Polynomial1D) -> Polynomial1D {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Polynomial1D::from_coeffs(coeffs)
    }

    /// Scalar multiple.
    pub fn scale(&self, s: Complex64) -> Polynomial1D {
        Polynomial1D::from_coeffs(self.coeffs.iter().map(|&c| c * s).collect())
    }
}

/// The `n`-th probabilists' Hermite polynomial `He_n = (x - d/dx)^n 1`,
/// generated symbolically in exact `i128` arithmetic and converted to
/// floats only at the end. Requires `n <= 30`.
///
/// All coefficients through `n = 29` are below `2^53` and convert exactly;
/// at `n = 30` two of them round (deterministically, to nearest).
pub fn hermite_generate(n: usize) -> Result<Polynomial1D> {
    if n > HERMITE_GENERATE_CAP {
        return Err(Error::DegreeTooHigh {
            degree: n,
            max_degree: HERMITE_GENERATE_CAP,
        });
    }
    let mut coeffs: Vec<i128> = vec![1];
    for _ in 0..n {
        // (x - d/dx): new[k] = old[k - 1] - (k + 1) * old[k + 1].
        let mut next = vec![0i128; coeffs.len() + 1];
        for (k, slot) in next.iter_mut().enumerate() {
            let from_x = if k >= 1 { coeffs[k - 1] } else { 0 };
            let from_d = coeffs
                .get(k + 1)
                .map_or(0, |&c| (k as i128 + 1) * c);
            *slot = from_x - from_d;
        }
        coeffs = next;
    }
    Ok(Polynomial1D::from_coeffs(
        coeffs
            .into_iter()
            .map(|c| Complex64::new(c as f64, 0.0))
            .collect(),
    ))
}

/// Both sides of the Gaussian adjointness identity
/// `integral ((x - d/dx) f) g dmu = integral f g' dmu`, evaluated with the
/// supplied quadrature rule, returned as `(left, right)`.
///
/// The left integrand has degree `deg f + deg g + 1`, so the rule must
/// satisfy `order >= (deg f + deg g + 2) / 2 + 1`; coarser rules are
/// rejected rather than silently integrating inexactly.
pub fn adjointness_check(
    f: &Polynomial1D,
    g: &Polynomial1D,
    rule: &QuadratureRule,
) -> Result<(Complex64, Complex64)> {
    let df = f.degree().unwrap_or(0);
    let dg = g.degree().unwrap_or(0);
    let required = (df + dg + 2).div_ceil(2) + 1;
    if rule.order() < required {
        return Err(Error::QuadratureTooCoarse {
            order: rule.order(),
            required,
        });
    }
    let raised = f.raise();
    let g_prime = g.derivative();
    let mut left = Complex64::ZERO;
    let mut right = Complex64::ZERO;
    for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
        let z = Complex64::new(x, 0.0);
        left += w * raised.eval(z) * g.eval(z);
        right += w * f.eval(z) * g_prime.eval(z);
    }
    Ok((left, right))
}

/// The shift transform evaluated by quadrature:
/// `(S1 f)(xi) = integral f(x + xi) dmu(x) = sum_j w_j f(x_j + xi)`.
///
/// The rule must integrate the shifted polynomial exactly:
/// `order >= deg f / 2 + 1`.
pub fn s1_transform_eval(
    f: &Polynomial1D,
    xi: Complex64,
    rule: &QuadratureRule,
) -> Result<Complex64> {
    check_s1_order(f, rule)?;
    let mut acc = Complex64::ZERO;
    for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
        acc += w * f.eval(Complex64::new(x, 0.0) + xi);
    }
    Ok(acc)
}

/// The shift transform as a polynomial in the shift variable:
/// expanding `f(x + xi)` in powers of `xi` gives
/// `(S1 f)(xi) = sum_k (integral f^(k) dmu / k!) xi^k`,
/// with each Gaussian expectation computed by quadrature.
///
/// Same order requirement as [`s1_transform_eval`]; the two agree up to
/// rounding, by different routes.
pub fn s1_transform(f: &Polynomial1D, rule: &QuadratureRule) -> Result<Polynomial1D> {
    check_s1_order(f, rule)?;
    let mut coeffs = Vec::new();
    let mut derivative = f.clone();
    let mut factorial = 1.0f64;
    let mut k = 0usize;
    loop {
        let mut expect = Complex64::ZERO;
        for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
            expect += w * derivative.eval(Complex64::new(x, 0.0));
        }
        coeffs.push(expect / factorial);
        if derivative.degree().is_none() || derivative.degree() == Some(0) {
            break;
        }
        derivative = derivative.derivative();
        k += 1;
        factorial *= k as f64;
    }
    Ok(Polynomial1D::from_coeffs(coeffs))
}

fn check_s1_order(f: &Polynomial1D, rule: &QuadratureRule) -> Result<()> {
    let required = f.degree().unwrap_or(0) / 2 + 1;
    if rule.order() < required {
        return Err(Error::QuadratureTooCoarse {
            order: rule.order(),
            required,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::trial_rng;
    use crate::transforms::hermite_eval;
    use rand::Rng;
    use rand_distr::StandardNormal;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn random_poly(stream: u64, max_degree: usize) -> Polynomial1D {
        let mut rng = trial_rng(311, stream);
        let deg = rng.random_range(0..=max_degree);
        let coeffs: Vec<Complex64> = (0..=deg)
            .map(|_| {
                Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
            })
            .collect();
        Polynomial1D::from_coeffs(coeffs)
    }

    #[test]
    fn representation_invariant() {
        let p = Polynomial1D::from_coeffs(vec![c(1.0), c(2.0), c(0.0), c(0.0)]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(Polynomial1D::zero().degree(), None);
        assert_eq!(Polynomial1D::from_coeffs(vec![c(0.0)]), Polynomial1D::zero());
    }

    #[test]
    fn eval_and_derivative() {
        // f = 1 + 2x + 3x^2: f(2) = 17, f' = 2 + 6x.
        let f = Polynomial1D::from_real_coeffs(&[1.0, 2.0, 3.0]);
        assert_eq!(f.eval(c(2.0)), c(17.0));
        let fp = f.derivative();
        assert_eq!(fp.coeffs(), &[c(2.0), c(6.0)]);
        assert_eq!(Polynomial1D::constant(c(5.0)).derivative(), Polynomial1D::zero());
    }

    #[test]
    fn raise_examples() {
        // (x - d/dx) 1 = x; (x - d/dx) x = x^2 - 1.
        let one = Polynomial1D::constant(c(1.0));
        let x = one.raise();
        assert_eq!(x.coeffs(), &[c(0.0), c(1.0)]);
        let h2 = x.raise();
        assert_eq!(h2.coeffs(), &[c(-1.0), c(0.0), c(1.0)]);
    }

    #[test]
    fn hermite_generate_small_cases() {
        assert_eq!(hermite_generate(0).unwrap().coeffs(), &[c(1.0)]);
        assert_eq!(
            hermite_generate(2).unwrap().coeffs(),
            &[c(-1.0), c(0.0), c(1.0)]
        );
        // He_3 = x^3 - 3x.
        assert_eq!(
            hermite_generate(3).unwrap().coeffs(),
            &[c(0.0), c(-3.0), c(0.0), c(1.0)]
        );
        assert!(matches!(
            hermite_generate(31),
            Err(Error::DegreeTooHigh { .. })
        ));
    }

    #[test]
    fn hermite_generate_matches_recurrence() {
        // Symbolic route against the three-term evaluation recurrence at
        // 20 spread-out points, all n through 10.
        let points: Vec<f64> = (0..20).map(|k| -3.0 + 0.315 * k as f64).collect();
        for n in 0..=10usize {
            let p = hermite_generate(n).unwrap();
            for &x in &points {
                let sym = p.eval(c(x));
                let rec = hermite_eval(n as u32, c(x));
                let scale = rec.norm().max(1.0);
                assert!(
                    (sym - rec).norm() <= 1e-12 * scale,
                    "n = {n}, x = {x}: {sym} vs {rec}"
                );
            }
        }
    }

    #[test]
    fn hermite_generate_leading_and_parity() {
        for n in 0..=30usize {
            let p = hermite_generate(n).unwrap();
            assert_eq!(p.degree(), Some(n));
            assert_eq!(p.coeff(n), c(1.0), "monic");
            // He_n has the parity of n: alternating coefficients vanish.
            for k in (1 - n % 2..=n).step_by(2).skip(0) {
                if (n - k) % 2 == 1 {
                    assert_eq!(p.coeff(k), Complex64::ZERO);
                }
            }
        }
    }

    #[test]
    fn adjointness_known_case() {
        // f = x, g = x^2: left = E[(x^2 - 1) x^2] = 3 - 1 = 2,
        // right = E[x * 2x] = 2.
        let f = Polynomial1D::from_real_coeffs(&[0.0, 1.0]);
        let g = Polynomial1D::from_real_coeffs(&[0.0, 0.0, 1.0]);
        let rule = QuadratureRule::gauss_hermite(6).unwrap();
        let (left, right) = adjointness_check(&f, &g, &rule).unwrap();
        assert!((left - c(2.0)).norm() <= 1e-12);
        assert!((right - c(2.0)).norm() <= 1e-12);
    }

    #[test]
    fn adjointness_constant_g() {
        // g constant: right side integrates against g' = 0 and the left
        // side is E[(x - d/dx) f] = 0 (the raised polynomial has zero mean).
        let f = random_poly(5, 6);
        let g = Polynomial1D::constant(c(3.0));
        let rule = QuadratureRule::gauss_hermite(10).unwrap();
        let (left, right) = adjointness_check(&f, &g, &rule).unwrap();
        assert_eq!(right, Complex64::ZERO);
        assert!(left.norm() <= 1e-12 * 3.0 * poly_scale(&f));
    }

    #[test]
    fn adjointness_random_pairs() {
        let rule = QuadratureRule::gauss_hermite(12).unwrap();
        for stream in 0..50 {
            let f = random_poly(100 + stream, 6);
            let g = random_poly(200 + stream, 6);
            let (left, right) = adjointness_check(&f, &g, &rule).unwrap();
            assert!(
                (left - right).norm() <= 1e-10 * (1.0 + left.norm()),
                "stream {stream}: {left} vs {right}"
            );
        }
    }

    #[test]
    fn adjointness_rejects_coarse_rules() {
        let f = Polynomial1D::from_real_coeffs(&[0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        let rule = QuadratureRule::gauss_hermite(6).unwrap();
        // deg f + deg g + 2 = 14, so order 8 is required.
        assert!(matches!(
            adjointness_check(&f, &f, &rule),
            Err(Error::QuadratureTooCoarse {
                order: 6,
                required: 8
            })
        ));
    }

    #[test]
    fn s1_of_hermite_is_the_monomial() {
        // S1 He_n = xi^n: the one-dimensional version of H_alpha -> xi^alpha.
        let rule = QuadratureRule::gauss_hermite(12).unwrap();
        for n in 0..=6usize {
            let p = hermite_generate(n).unwrap();
            let s1 = s1_transform(&p, &rule).unwrap();
            assert_eq!(s1.degree(), Some(n));
            for k in 0..n {
                assert!(s1.coeff(k).norm() <= 1e-10, "n = {n}, k = {k}");
            }
            assert!((s1.coeff(n) - c(1.0)).norm() <= 1e-12);
        }
    }

    #[test]
    fn s1_eval_agrees_with_polynomial_route() {
        let rule = QuadratureRule::gauss_hermite(10).unwrap();
        let f = random_poly(7, 6);
        let s1 = s1_transform(&f, &rule).unwrap();
        for k in 0..10 {
            let xi = Complex64::new(-2.0 + 0.45 * k as f64, 0.3);
            let direct = s1_transform_eval(&f, xi, &rule).unwrap();
            let via_poly = s1.eval(xi);
            assert!(
                (direct - via_poly).norm() <= 1e-10 * (1.0 + direct.norm()),
                "xi = {xi}: {direct} vs {via_poly}"
            );
        }
    }

    #[test]
    fn s1_turns_raising_into_multiplication() {
        // S1((x - d/dx) f)(xi) = xi * S1(f)(xi) at 10 shift points,
        // direct quadrature on the left, polynomial route on the right.
        let rule = QuadratureRule::gauss_hermite(12).unwrap();
        for stream in 0..5 {
            let f = random_poly(300 + stream, 6);
            let s1 = s1_transform(&f, &rule).unwrap();
            for k in 0..10 {
                let xi = Complex64::new(-1.8 + 0.4 * k as f64, 0.2);
                let lhs = s1_transform_eval(&f.raise(), xi, &rule).unwrap();
                let rhs = xi * s1.eval(xi);
                assert!(
                    (lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()),
                    "stream {stream}, xi = {xi}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn s1_turns_derivative_into_derivative() {
        // S1(df/dx) = d/dxi S1(f): direct quadrature of the derivative on
        // the left, symbolic derivative of the transform polynomial on the
        // right.
        let rule = QuadratureRule::gauss_hermite(12).unwrap();
        for stream in 0..5 {
            let f = random_poly(400 + stream, 6);
            let s1_prime = s1_transform(&f, &rule).unwrap().derivative();
            for k in 0..10 {
                let xi = Complex64::new(-1.8 + 0.4 * k as f64, -0.15);
                let lhs = s1_transform_eval(&f.derivative(), xi, &rule).unwrap();
                let rhs = s1_prime.eval(xi);
                assert!(
                    (lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()),
                    "stream {stream}, xi = {xi}: {lhs} vs {rhs}"
                );
            }
        }
    }

    #[test]
    fn s1_rejects_coarse_rules() {
        let f = hermite_generate(10).unwrap();
        let rule = QuadratureRule::gauss_hermite(4).unwrap();
        assert!(matches!(
            s1_transform_eval(&f, c(1.0), &rule),
            Err(Error::QuadratureTooCoarse {
                order: 4,
                required: 6
            })
        ));
    }

    fn poly_scale(f: &Polynomial1D) -> f64 {
        f.coeffs().iter().map(|c| c.norm()).fold(1.0, f64::max)
    }
}
