//! Growth diagnostics for candidate S-transforms: harmonic-oscillator
//! weighted norms and ray-growth fitting of the bound
//! `|F(z xi)| <= K exp(a |z|^2 ||H^p xi||^2)`.
//!
//! A functional arising as an S-transform is entire in `z` along every ray
//! and grows at most like `exp(quadratic)`; a functional that outruns every
//! such bound (the cubic exponential below is the canonical control) cannot
//! be one. The weight `||H^p xi||` uses the harmonic-oscillator spectrum
//! `2k + 2` on the Hermite-function coordinates of `xi`.
//!
//! [`ray_growth_fit`] samples `M_r = max_theta log|F(r e^{i theta} xi)|` on
//! a radius ladder and fits `M_r ~ log K + a r^2 ||H^p xi||^2` by least
//! squares on `(r^2, M_r)`. The verdict looks at the fit residuals over
//! the top quartile of radii: for quadratically bounded data (polynomials,
//! `e^r`, `e^{r^2/2}`) the residuals shrink or stay level toward the
//! largest radius, while for genuinely super-quadratic data `M_r` is
//! convex in `r^2`, so the residual at the largest radius climbs away from
//! its predecessors by orders of magnitude. Residual growth beyond
//! [`GROWTH_TOLERANCE_LOG`] log-units flags the functional. The verdict
//! reports consistency with the bound on the sampled range only — no
//! finite sample can decide the full characterization, and the tolerance
//! is a declared heuristic of this tool.

use crate::chaos::ChaosExpansion;
use crate::error::{Error, Result};
use crate::transforms::s_transform_eval;
use num_complex::Complex64;
use serde::Serialize;

/// Default radius ladder: geometric, `0.5 * 2^k` for `k = 0..5`.
pub const DEFAULT_RADII: [f64; 6] = [0.5, 1.0, 2.0, 4.0, 8.0, 16.0];

/// Default number of equispaced phases per radius.
pub const DEFAULT_PHASES: usize = 32;

/// Tolerance, in log-units, on the growth of fit residuals across the top
/// quartile of radii; larger growth flags a functional as super-quadratic.
pub const GROWTH_TOLERANCE_LOG: f64 = 0.5;

/// Floor substituted for `log 0` when a functional vanishes at a sample
/// point (about `log` of the smallest subnormal).
const LOG_FLOOR: f64 = -745.0;

/// Real coordinates of a test direction `xi` in the Hermite-function basis
/// of `L^2`; entry `k` sits on the oscillator eigenvalue `2k + 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteCoordVector {
    coords: Vec<f64>,
}

impl HermiteCoordVector {
    /// Wrap a nonempty coordinate list.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyInput("coords"));
        }
        Ok(HermiteCoordVector { coords })
    }

    /// Number of coordinates.
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    /// Never true: construction requires at least one coordinate. Present
    /// for the conventional `len`/`is_empty` pairing.
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Coordinate slice.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// The complex vector `z * xi`.
    pub fn scaled(&self, z: Complex64) -> Vec<Complex64> {
        self.coords.iter().map(|&c| z * c).collect()
    }

    /// The complex vector `z * xi + eta`, aligning lengths by
    /// zero-padding the shorter of the two.
    pub fn line_point(&self, z: Complex64, eta: &HermiteCoordVector) -> Vec<Complex64> {
        let n = self.coords.len().max(eta.coords.len());
        (0..n)
            .map(|k| {
                z * self.coords.get(k).copied().unwrap_or(0.0)
                    + eta.coords.get(k).copied().unwrap_or(0.0)
            })
            .collect()
    }
}

/// The weighted norm `||H^p xi|| = sqrt(sum_k (2k+2)^{2p} xi_k^2)` built
/// from the harmonic-oscillator spectrum `{2k + 2}`.
pub fn osc_norm(xi: &HermiteCoordVector, p: u32) -> f64 {
    xi.coords
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            let lambda = (2 * k + 2) as f64;
            lambda.powi(2 * p as i32) * c * c
        })
        .sum::<f64>()
        .sqrt()
}

/// A functional of a complex Hermite-coordinate argument: either the
/// S-transform of a chaos expansion, or one of a small registry of closed
/// forms used as positive and negative controls.
#[derive(Debug, Clone)]
pub enum Functional {
    /// `F = S(a)`: a polynomial in the coordinates, entire by construction.
    ChaosBacked(ChaosExpansion),
    /// `F(eta) = exp(eta_1)` — quadratically bounded control.
    ExpLinear,
    /// `F(eta) = exp(eta_1^3)` — super-quadratic negative control.
    ExpCubic,
    /// `F(eta) = |eta_1|` — not complex-differentiable anywhere.
    AbsZ,
    /// `F(eta) = exp(+(1/2) sum eta_k^2)` — exactly quadratic growth.
    GaussianKernelS,
}

impl Functional {
    /// Look up a registered closed form by name. The registry is
    /// `exp_linear`, `exp_cubic`, `abs_z`, `gaussian_kernel_s`.
    pub fn from_name(name: &str) -> Option<Functional> {
        match name {
            "exp_linear" => Some(Functional::ExpLinear),
            "exp_cubic" => Some(Functional::ExpCubic),
            "abs_z" => Some(Functional::AbsZ),
            "gaussian_kernel_s" => Some(Functional::GaussianKernelS),
            _ => None,
        }
    }

    /// Names accepted by [`Functional::from_name`].
    pub fn registry() -> &'static [&'static str] {
        &["exp_linear", "exp_cubic", "abs_z", "gaussian_kernel_s"]
    }

    /// Evaluate `F(eta)`.
    pub fn eval(&self, eta: &[Complex64]) -> Result<Complex64> {
        match self {
            Functional::ChaosBacked(a) => s_transform_eval(a, eta),
            Functional::ExpLinear => Ok(first(eta).exp()),
            Functional::ExpCubic => Ok(cube(first(eta)).exp()),
            Functional::AbsZ => Ok(Complex64::new(first(eta).norm(), 0.0)),
            Functional::GaussianKernelS => Ok(half_square_sum(eta).exp()),
        }
    }

    /// `log |F(eta)|`, computed in log space where the closed form allows,
    /// so controlled super-quadratic growth does not overflow the sampling.
    /// Zero values clamp to a large negative floor; a non-finite result
    /// signals genuine overflow to the caller.
    pub fn log_abs(&self, eta: &[Complex64]) -> Result<f64> {
        let v = match self {
            Functional::ChaosBacked(a) => s_transform_eval(a, eta)?.norm().ln(),
            Functional::ExpLinear => first(eta).re,
            Functional::ExpCubic => cube(first(eta)).re,
            Functional::AbsZ => first(eta).norm().ln(),
            Functional::GaussianKernelS => half_square_sum(eta).re,
        };
        Ok(if v == f64::NEG_INFINITY { LOG_FLOOR } else { v })
    }

    /// Whether entirety holds structurally (polynomials in the
    /// coordinates) rather than needing a numerical check.
    pub fn entire_by_construction(&self) -> bool {
        matches!(self, Functional::ChaosBacked(_))
    }

    /// Dimension constraint on arguments, if any.
    fn required_len(&self) -> Option<usize> {
        match self {
            Functional::ChaosBacked(a) => Some(a.dim()),
            _ => None,
        }
    }
}

fn first(eta: &[Complex64]) -> Complex64 {
    eta.first().copied().unwrap_or(Complex64::ZERO)
}

fn cube(z: Complex64) -> Complex64 {
    z * z * z
}

fn half_square_sum(eta: &[Complex64]) -> Complex64 {
    0.5 * eta.iter().map(|&z| z * z).sum::<Complex64>()
}

/// Verdict of a ray-growth fit: consistent with a quadratic-exponential
/// bound on the sampled radii, or demonstrably outrunning it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "bounded")]
    Bounded,
    #[serde(rename = "super-quadratic")]
    SuperQuadratic,
}

/// Result of [`ray_growth_fit`].
#[derive(Debug, Clone, Serialize)]
pub struct GrowthReport {
    /// Fitted intercept `log K`.
    pub fitted_log_k: f64,
    /// Fitted quadratic coefficient `a`, clipped at zero from below.
    pub fitted_a: f64,
    /// The oscillator power `p` the weight was computed with.
    pub p_used: u32,
    /// Largest increase of the fit residual between two radii in the top
    /// quartile, in log-units; zero when residuals only shrink with `r`.
    pub max_residual: f64,
    /// The `(r, M_r)` samples actually evaluated.
    pub samples: Vec<(f64, f64)>,
    /// First radius at which evaluation overflowed, if any.
    pub overflow_radius: Option<f64>,
    /// The verdict.
    pub verdict: Verdict,
}

/// Sample `M_r = max_theta log|F(r e^{i theta} xi)|` over the given radii
/// (32 phases each) and fit the quadratic-exponential bound; see the
/// module docs for the fit and verdict rules.
///
/// Radii must be nonempty, positive, and strictly increasing. Overflow at
/// some radius is not an error: it is decisive evidence, reported as a
/// super-quadratic verdict with the witness radius.
pub fn ray_growth_fit(
    functional: &Functional,
    xi: &HermiteCoordVector,
    p: u32,
    radii: &[f64],
) -> Result<GrowthReport> {
    ray_growth_fit_with_phases(functional, xi, p, radii, DEFAULT_PHASES)
}

/// [`ray_growth_fit`] with an explicit phase count per radius.
pub fn ray_growth_fit_with_phases(
    functional: &Functional,
    xi: &HermiteCoordVector,
    p: u32,
    radii: &[f64],
    phases: usize,
) -> Result<GrowthReport> {
    if radii.is_empty() {
        return Err(Error::EmptyInput("radii"));
    }
    if phases == 0 {
        return Err(Error::InvalidConfig("phases must be at least 1".into()));
    }
    for pair in radii.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::InvalidConfig(format!(
                "radii must be strictly increasing, got {} then {}",
                pair[0], pair[1]
            )));
        }
    }
    if !(radii[0] > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "radii must be positive, got {}",
            radii[0]
        )));
    }
    if let Some(required) = functional.required_len() {
        if xi.len() != required {
            return Err(Error::DimensionMismatch {
                expected: required,
                got: xi.len(),
            });
        }
    }

    let mut samples: Vec<(f64, f64)> = Vec::with_capacity(radii.len());
    let mut overflow_radius = None;
    'radius: for &r in radii {
        let mut best = f64::NEG_INFINITY;
        for j in 0..phases {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / phases as f64;
            let z = Complex64::from_polar(r, theta);
            let v = functional.log_abs(&xi.scaled(z))?;
            if !v.is_finite() {
                overflow_radius = Some(r);
                break 'radius;
            }
            if v > best {
                best = v;
            }
        }
        samples.push((r, best.max(LOG_FLOOR)));
    }

    let weight_sq = {
        let w = osc_norm(xi, p);
        w * w
    };
    let (fitted_log_k, slope, max_residual) = fit_and_check(&samples);
    let fitted_a = if weight_sq > 0.0 { slope / weight_sq } else { 0.0 };
    let verdict = if overflow_radius.is_some() || max_residual > GROWTH_TOLERANCE_LOG {
        Verdict::SuperQuadratic
    } else {
        Verdict::Bounded
    };
    Ok(GrowthReport {
        fitted_log_k,
        fitted_a,
        p_used: p,
        max_residual,
        samples,
        overflow_radius,
        verdict,
    })
}

/// Least-squares line through all `(r^2, M_r)` pairs, slope clipped at
/// zero from below, then the largest increase of the residual between any
/// ordered pair of radii in the top quartile (at least two radii; all of
/// them when there are fewer than four samples).
fn fit_and_check(samples: &[(f64, f64)]) -> (f64, f64, f64) {
    if samples.is_empty() {
        return (0.0, 0.0, 0.0);
    }
    let xs: Vec<f64> = samples.iter().map(|&(r, _)| r * r).collect();
    let ms: Vec<f64> = samples.iter().map(|&(_, m)| m).collect();
    let n = samples.len();
    let mean_x = xs.iter().sum::<f64>() / n as f64;
    let mean_m = ms.iter().sum::<f64>() / n as f64;
    let mut cov = 0.0;
    let mut var = 0.0;
    for (&x, &m) in xs.iter().zip(&ms) {
        cov += (x - mean_x) * (m - mean_m);
        var += (x - mean_x) * (x - mean_x);
    }
    let slope = if var > 0.0 { (cov / var).max(0.0) } else { 0.0 };
    let intercept = mean_m - slope * mean_x;

    let quartile = n.div_ceil(4).max(2).min(n);
    let residuals: Vec<f64> = (n - quartile..n)
        .map(|k| ms[k] - (intercept + slope * xs[k]))
        .collect();
    let mut max_residual = 0.0f64;
    let mut lowest_so_far = f64::INFINITY;
    for &e in &residuals {
        if e - lowest_so_far > max_residual {
            max_residual = e - lowest_so_far;
        }
        if e < lowest_so_far {
            lowest_so_far = e;
        }
    }
    (intercept, slope, max_residual)
}

/// Entirety check for `z -> F(z xi + eta)`.
///
/// Chaos-backed functionals are polynomials in `z` and pass structurally.
/// Closed forms are probed numerically: the Cauchy-Riemann residual
/// `|G_x + i G_y| / (1 + |G_x| + |G_y|)` from central differences
/// (`h = 1e-5`) must stay below `1e-6` on a 16 x 16 grid over the disc
/// `|z| <= 2`.
pub fn entirety_check(
    functional: &Functional,
    xi: &HermiteCoordVector,
    eta: &HermiteCoordVector,
) -> Result<bool> {
    if functional.entire_by_construction() {
        return Ok(true);
    }
    let h = 1e-5;
    let grid = 16;
    for gx in 0..grid {
        for gy in 0..grid {
            // Cell-centered grid on [-2, 2]^2, intersected with the disc;
            // centering avoids the axes, where |.| is non-smooth in a way
            // central differences would read as zero residual.
            let x = -2.0 + 4.0 * (gx as f64 + 0.5) / grid as f64;
            let y = -2.0 + 4.0 * (gy as f64 + 0.5) / grid as f64;
            if x * x + y * y > 4.0 {
                continue;
            }
            let z = Complex64::new(x, y);
            let gxp = functional.eval(&xi.line_point(z + h, eta))?;
            let gxm = functional.eval(&xi.line_point(z - h, eta))?;
            let gyp = functional.eval(&xi.line_point(z + Complex64::new(0.0, h), eta))?;
            let gym = functional.eval(&xi.line_point(z - Complex64::new(0.0, h), eta))?;
            let dx = (gxp - gxm) / (2.0 * h);
            let dy = (gyp - gym) / (2.0 * h);
            let residual = (dx + Complex64::i() * dy).norm() / (1.0 + dx.norm() + dy.norm());
            if residual >= 1e-6 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{random_nonzero_expansion, trial_rng, SampleConfig};
    use crate::wick::wick_exp;
    use rand::Rng;

    fn xi(coords: &[f64]) -> HermiteCoordVector {
        HermiteCoordVector::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn osc_norm_spectrum_values() {
        assert_eq!(osc_norm(&xi(&[1.0, 0.0, 0.0]), 1), 2.0);
        assert_eq!(osc_norm(&xi(&[0.0, 1.0]), 2), 16.0);
        // p = 0 is the Euclidean norm.
        let v = xi(&[3.0, 4.0]);
        assert_eq!(osc_norm(&v, 0), 5.0);
    }

    #[test]
    fn osc_norm_monotone_in_p() {
        let mut rng = trial_rng(5, 0);
        for _ in 0..10 {
            let coords: Vec<f64> = (0..6).map(|_| rng.random_range(-2.0..2.0)).collect();
            let v = HermiteCoordVector::new(coords).unwrap();
            if osc_norm(&v, 0) == 0.0 {
                continue;
            }
            let mut last = 0.0;
            for p in 0..=5 {
                let n = osc_norm(&v, p);
                assert!(n >= last, "p = {p}");
                last = n;
            }
        }
    }

    #[test]
    fn coord_vector_validation() {
        assert!(HermiteCoordVector::new(vec![]).is_err());
        assert_eq!(xi(&[1.0]).len(), 1);
    }

    #[test]
    fn registry_lookup() {
        for name in Functional::registry() {
            assert!(Functional::from_name(name).is_some(), "{name}");
        }
        assert!(Functional::from_name("nope").is_none());
    }

    #[test]
    fn truncated_exponential_is_bounded() {
        // S(wick_exp(x_1)) is the degree-14 Taylor polynomial of e^eta;
        // its growth must be absorbed by a finite quadratic bound.
        let x = ChaosExpansion::coordinate(1, 14, 0).unwrap();
        let f = Functional::ChaosBacked(wick_exp(&x).unwrap());
        let report =
            ray_growth_fit(&f, &xi(&[1.0]), 0, &[0.5, 1.0, 2.0, 4.0, 8.0, 10.0]).unwrap();
        assert_eq!(report.verdict, Verdict::Bounded);
        assert!(report.fitted_a <= 1.0, "a = {}", report.fitted_a);
        assert!(report.fitted_a >= 0.0);
        assert!(report.overflow_radius.is_none());
        assert_eq!(report.samples.len(), 6);
    }

    #[test]
    fn constant_functional_fits_trivially() {
        let one = ChaosExpansion::unit(1, 3).unwrap();
        let f = Functional::ChaosBacked(one);
        let report = ray_growth_fit(&f, &xi(&[1.0]), 0, &DEFAULT_RADII).unwrap();
        assert_eq!(report.verdict, Verdict::Bounded);
        assert!(report.fitted_a.abs() <= 1e-9);
        assert!(report.fitted_log_k.abs() <= 1e-9);
        assert!(report.max_residual.abs() <= 1e-9);
    }

    #[test]
    fn cubic_exponential_flagged_super_quadratic() {
        let f = Functional::ExpCubic;
        let report = ray_growth_fit(&f, &xi(&[1.0]), 0, &[0.5, 1.0, 2.0, 4.0, 8.0]).unwrap();
        assert_eq!(report.verdict, Verdict::SuperQuadratic);
        assert!(report.max_residual > GROWTH_TOLERANCE_LOG);
        // The log-space evaluation keeps even r = 16 finite.
        let report = ray_growth_fit(&f, &xi(&[1.0]), 0, &DEFAULT_RADII).unwrap();
        assert_eq!(report.verdict, Verdict::SuperQuadratic);
        assert!(report.overflow_radius.is_none());
    }

    #[test]
    fn gaussian_kernel_growth_is_exactly_quadratic() {
        let f = Functional::GaussianKernelS;
        let report = ray_growth_fit(&f, &xi(&[0.6, 0.8]), 0, &DEFAULT_RADII).unwrap();
        assert_eq!(report.verdict, Verdict::Bounded);
        // M_r = r^2 ||xi||^2 / 2, so the fitted a is 1/2 regardless of xi.
        assert!((report.fitted_a - 0.5).abs() <= 1e-9, "a = {}", report.fitted_a);
        assert!(report.max_residual.abs() <= 1e-9);
    }

    #[test]
    fn overflow_is_reported_as_super_quadratic_with_witness() {
        // A quadratic S-transform at astronomically large radius
        // overflows evaluation; that is decisive, not an error.
        let h2 = ChaosExpansion::single_term(
            1,
            3,
            crate::multi_index::MultiIndex::single(0, 2),
            Complex64::new(1.0, 0.0),
        )
        .unwrap();
        let f = Functional::ChaosBacked(h2);
        let report = ray_growth_fit(&f, &xi(&[1.0]), 0, &[1e155, 2e155]).unwrap();
        assert_eq!(report.verdict, Verdict::SuperQuadratic);
        assert_eq!(report.overflow_radius, Some(1e155));
    }

    #[test]
    fn random_s_transforms_all_bounded() {
        let cfg = SampleConfig {
            density: 0.6,
            complex: true,
        };
        for stream in 0..20 {
            let mut rng = trial_rng(2024, stream);
            let dim = rng.random_range(1..=3);
            let deg = rng.random_range(1..=6);
            let a = random_nonzero_expansion(&mut rng, dim, deg, cfg).unwrap();
            let coords: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.5..1.5)).collect();
            let direction = HermiteCoordVector::new(coords).unwrap();
            let f = Functional::ChaosBacked(a);
            let report = ray_growth_fit(&f, &direction, 1, &DEFAULT_RADII).unwrap();
            assert_eq!(
                report.verdict,
                Verdict::Bounded,
                "stream {stream}: residual {}",
                report.max_residual
            );
            assert!(report.fitted_a.is_finite() && report.fitted_a >= 0.0);
            assert!(report.fitted_log_k.is_finite());
        }
    }

    #[test]
    fn scaling_covariance() {
        // Replacing xi by c*xi and radii by radii/c samples the identical
        // points, scales ||H^p xi||^2 by c^2, and must reproduce the same
        // fitted a, residual, and verdict.
        let x = ChaosExpansion::coordinate(1, 12, 0).unwrap();
        let f = Functional::ChaosBacked(wick_exp(&x).unwrap());
        let c = 2.5;
        let base: Vec<f64> = DEFAULT_RADII.to_vec();
        let scaled: Vec<f64> = base.iter().map(|r| r / c).collect();
        let r1 = ray_growth_fit(&f, &xi(&[0.7]), 1, &base).unwrap();
        let r2 = ray_growth_fit(&f, &xi(&[0.7 * c]), 1, &scaled).unwrap();
        assert_eq!(r1.verdict, r2.verdict);
        assert!((r1.fitted_a - r2.fitted_a).abs() <= 1e-9 * (1.0 + r1.fitted_a.abs()));
        assert!(
            (r1.max_residual - r2.max_residual).abs()
                <= 1e-9 * (1.0 + r1.max_residual.abs())
        );
    }

    #[test]
    fn fit_input_validation() {
        let f = Functional::ExpLinear;
        let v = xi(&[1.0]);
        assert!(matches!(
            ray_growth_fit(&f, &v, 0, &[]),
            Err(Error::EmptyInput("radii"))
        ));
        assert!(matches!(
            ray_growth_fit(&f, &v, 0, &[1.0, 1.0]),
            Err(Error::InvalidConfig(_))
        ));
        assert!(matches!(
            ray_growth_fit(&f, &v, 0, &[-1.0, 1.0]),
            Err(Error::InvalidConfig(_))
        ));
        let a = ChaosExpansion::unit(2, 2).unwrap();
        assert!(matches!(
            ray_growth_fit(&Functional::ChaosBacked(a), &v, 0, &[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn entirety_verdicts() {
        let direction = xi(&[1.0, 0.5]);
        let offset = xi(&[0.3, -0.2]);
        let poly = Functional::ChaosBacked(ChaosExpansion::unit(2, 2).unwrap());
        assert!(entirety_check(&poly, &direction, &offset).unwrap());
        assert!(entirety_check(&Functional::ExpLinear, &direction, &offset).unwrap());
        assert!(entirety_check(&Functional::ExpCubic, &direction, &offset).unwrap());
        assert!(entirety_check(&Functional::GaussianKernelS, &direction, &offset).unwrap());
        assert!(!entirety_check(&Functional::AbsZ, &direction, &offset).unwrap());
    }

    #[test]
    fn report_serializes() {
        let f = Functional::GaussianKernelS;
        let report = ray_growth_fit(&f, &xi(&[1.0]), 0, &DEFAULT_RADII).unwrap();
        let text = serde_json::to_string(&report).unwrap();
        assert!(text.contains("\"verdict\":\"bounded\""));
        assert!(text.contains("\"samples\""));
    }
}
