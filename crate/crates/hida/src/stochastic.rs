//! Time-grid white-noise calculus: Brownian chaos vectors, the discrete
//! Hitsuda-Skorohod integral, Wick-division solving, a Wick-type SDE
//! solver, and moment reporting with Monte Carlo validation.
//!
//! A [`TimeGrid`] splits the horizon `[0, T]` into `M` cells and places
//! one Gaussian coordinate on the orthonormal indicator
//! `e_i = 1_{[t_i, t_{i+1})} / sqrt(dt)` of each cell, so chaos expansions
//! built on the grid always have dimension `M`. In this basis
//! `B_t = <x, 1_{[0,t]}>` becomes the first-order vector with coefficient
//! `sqrt(dt)` on every cell before `t`, and the white noise of cell `i` is
//! the coordinate `x_i` itself (the continuum `d/dt`-density corresponds
//! to `x_i / sqrt(dt)`; the scaling lives in the integral weights, not in
//! the vectors).
//!
//! The Skorohod integral uses the identity that creation equals Wick
//! multiplication by the coordinate: both routes are computed and must
//! agree bit for bit. Only grid-aligned times are accepted anywhere — no
//! interpolation — so every claimed identity is a finite exact sum.

use crate::ccr::create_checked;
use crate::chaos::ChaosExpansion;
use crate::error::{Error, Result};
use crate::sample::trial_rng;
use crate::transforms::eval_realization;
use crate::wick::{wick_exp, wick_inverse, wick_product};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

/// Tolerance on imaginary parts when an operation requires real
/// coefficients.
pub const REAL_TOLERANCE: f64 = 1e-12;

/// Uniform partition of `[0, T]` into `M` cells, each carrying one
/// orthonormal-indicator Gaussian coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    horizon: f64,
    cells: usize,
}

impl TimeGrid {
    /// A grid over `[0, T]` with `M` cells. `T` must be positive and
    /// finite, `M` at least one.
    pub fn new(horizon: f64, cells: usize) -> Result<Self> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "horizon must be positive and finite, got {horizon}"
            )));
        }
        if cells == 0 {
            return Err(Error::InvalidConfig("grid needs at least one cell".into()));
        }
        Ok(TimeGrid { horizon, cells })
    }

    /// The horizon `T`.
    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// The cell count `M`, which is also the chaos dimension of every
    /// expansion built on this grid.
    pub fn cells(&self) -> usize {
        self.cells
    }

    /// The cell width `dt = T / M`.
    pub fn dt(&self) -> f64 {
        self.horizon / self.cells as f64
    }

    /// Map an aligned time `t = k * dt` to its cell count `k`; times off
    /// the grid are rejected, not interpolated.
    pub fn aligned_index(&self, t: f64) -> Result<usize> {
        let dt = self.dt();
        let k = (t / dt).round();
        let aligned = k >= 0.0 && k <= self.cells as f64 && k * dt == t;
        if !aligned {
            return Err(Error::UnalignedTime { t, dt });
        }
        Ok(k as usize)
    }
}

/// The Brownian motion value `B_t` as a first-order chaos vector:
/// coefficient `sqrt(dt)` on every cell completed before `t`.
pub fn brownian(grid: &TimeGrid, t: f64, max_degree: usize) -> Result<ChaosExpansion> {
    let k = grid.aligned_index(t)?;
    let root_dt = grid.dt().sqrt();
    let mut out = ChaosExpansion::zero(grid.cells(), max_degree)?;
    if max_degree == 0 && k > 0 {
        return Err(Error::DegreeTooHigh {
            degree: 1,
            max_degree: 0,
        });
    }
    for i in 0..k {
        out.add_term(
            crate::multi_index::MultiIndex::single(i, 1),
            root_dt.into(),
        );
    }
    Ok(out)
}

/// The white noise of cell `i`: the coordinate vector `x_i`, a single
/// first-order term with coefficient one. Satisfies
/// `brownian(t_{k+1}) - brownian(t_k) == sqrt(dt) * white_noise(k)`
/// bit for bit.
pub fn white_noise(grid: &TimeGrid, i: usize, max_degree: usize) -> Result<ChaosExpansion> {
    if i >= grid.cells() {
        return Err(Error::IndexOutOfRange {
            index: i,
            dim: grid.cells(),
        });
    }
    ChaosExpansion::coordinate(grid.cells(), max_degree, i)
}

/// The discrete Hitsuda-Skorohod integral of one integrand per cell:
/// `sum_i sqrt(dt) * create(i, f_i)`.
///
/// The same value is computed a second time as
/// `sum_i sqrt(dt) * (x_i <> f_i)` and the two routes are asserted
/// identical — creation and Wick multiplication by the coordinate perform
/// the same arithmetic, so a mismatch is an internal bug, not rounding.
/// Integrands with terms at the degree cap are an error (their images
/// would silently vanish).
pub fn hs_integral(grid: &TimeGrid, integrands: &[ChaosExpansion]) -> Result<ChaosExpansion> {
    if integrands.len() != grid.cells() {
        return Err(Error::LengthMismatch {
            expected: grid.cells(),
            got: integrands.len(),
        });
    }
    let root_dt = grid.dt().sqrt();
    let max_degree = integrands[0].max_degree();
    let mut by_creation = ChaosExpansion::zero(grid.cells(), max_degree)?;
    let mut by_wick = ChaosExpansion::zero(grid.cells(), max_degree)?;
    for (i, f) in integrands.iter().enumerate() {
        if f.dim() != grid.cells() {
            return Err(Error::DimensionMismatch {
                expected: grid.cells(),
                got: f.dim(),
            });
        }
        if f.max_degree() != max_degree {
            return Err(Error::InvalidExpansion {
                detail: format!(
                    "integrand {i} has degree cap {} but cell 0 has {max_degree}",
                    f.max_degree()
                ),
                term_index: None,
            });
        }
        let scaled = f.scale(root_dt.into());
        by_creation = by_creation.add(&create_checked(i, &scaled)?)?;
        let xi = white_noise(grid, i, max_degree)?;
        by_wick = by_wick.add(&wick_product(&xi, &scaled)?)?;
    }
    assert_eq!(
        by_creation, by_wick,
        "creation route and Wick route diverged; this is a bug"
    );
    Ok(by_creation)
}

/// Solve the Wick-linear equation `a <> X = b` by `X = a^{<>-1} <> b`
/// (capped at the operands' degree). Requires `a` Wick-invertible.
pub fn wick_solve_linear(a: &ChaosExpansion, b: &ChaosExpansion) -> Result<ChaosExpansion> {
    let inv = wick_inverse(a)?;
    wick_product(&inv, b)
}

/// How [`solve_gbm`] integrates the equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GbmMethod {
    /// The exact solution `exp^{<>}(B_T)`, truncated at the degree cap.
    ClosedForm,
    /// Wick-Euler stepping `X_{k+1} = X_k + sqrt(dt) (x_k <> X_k)`.
    WickEuler,
}

impl GbmMethod {
    /// Parse a CLI-style method name (`closed_form` or `wick_euler`).
    pub fn from_name(name: &str) -> Option<GbmMethod> {
        match name {
            "closed_form" => Some(GbmMethod::ClosedForm),
            "wick_euler" => Some(GbmMethod::WickEuler),
            _ => None,
        }
    }
}

/// Solve the Skorohod linear equation `dX = X <> dB`, `X_0 = 1` (Wick
/// geometric Brownian motion) on the grid, truncated at `max_degree`.
///
/// Both methods keep the constant term exactly one: every increment has
/// zero constant term, coefficient by coefficient.
pub fn solve_gbm(grid: &TimeGrid, max_degree: usize, method: GbmMethod) -> Result<ChaosExpansion> {
    if max_degree == 0 {
        return Err(Error::InvalidConfig(
            "geometric Brownian motion needs degree at least 1".into(),
        ));
    }
    match method {
        GbmMethod::ClosedForm => wick_exp(&brownian(grid, grid.horizon(), max_degree)?),
        GbmMethod::WickEuler => {
            let root_dt = grid.dt().sqrt();
            let mut state = ChaosExpansion::unit(grid.cells(), max_degree)?;
            for k in 0..grid.cells() {
                let noise = white_noise(grid, k, max_degree)?;
                let increment = wick_product(&noise, &state)?.scale(root_dt.into());
                state = state.add(&increment)?;
            }
            Ok(state)
        }
    }
}

/// Exact and Monte Carlo moments of a real chaos expansion.
#[derive(Debug, Clone, Serialize)]
pub struct MomentReport {
    /// `E[a] = c_0`, the constant coefficient.
    pub mean: f64,
    /// `E[a^2]`, the chaos norm `sum_alpha alpha! c_alpha^2`.
    pub second_moment: f64,
    /// `second_moment - mean^2`.
    pub variance: f64,
    /// Monte Carlo estimate of the mean (zero when no samples were drawn).
    pub mc_mean: f64,
    /// Standard error of `mc_mean` (zero for fewer than two samples or a
    /// deterministic integrand).
    pub mc_stderr: f64,
    /// Number of Monte Carlo samples drawn.
    pub samples: usize,
    /// Master seed the sample streams derive from.
    pub seed: u64,
}

/// Exact first and second moments of `a` under the Gaussian measure, plus
/// an optional Monte Carlo estimate of the mean from `mc_samples` seeded
/// standard-normal draws.
///
/// Coefficients must be real (imaginary parts below [`REAL_TOLERANCE`]).
/// Sample `s` draws from the dedicated stream `(seed, s)`, so the result
/// is independent of evaluation order and thread count.
pub fn moments(a: &ChaosExpansion, mc_samples: usize, seed: u64) -> Result<MomentReport> {
    for (_, c) in a.terms() {
        if c.im.abs() > REAL_TOLERANCE {
            return Err(Error::ComplexCoefficients {
                magnitude: c.im.abs(),
                tolerance: REAL_TOLERANCE,
            });
        }
    }
    let mean = a.constant_term().re;
    let second_moment = a.l2_norm_sq();
    let variance = second_moment - mean * mean;

    let (mc_mean, mc_stderr) = if mc_samples == 0 {
        (0.0, 0.0)
    } else {
        let dim = a.dim();
        let values: Vec<f64> = (0..mc_samples)
            .into_par_iter()
            .map(|s| {
                let mut rng = trial_rng(seed, s as u64);
                let x: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
                eval_realization(a, &x).expect("dimension matches by construction").re
            })
            .collect();
        let n = values.len() as f64;
        let mean_hat = values.iter().sum::<f64>() / n;
        let stderr = if values.len() > 1 {
            let ss = values.iter().map(|v| (v - mean_hat) * (v - mean_hat)).sum::<f64>();
            (ss / (n * (n - 1.0))).sqrt()
        } else {
            0.0
        };
        (mean_hat, stderr)
    };

    Ok(MomentReport {
        mean,
        second_moment,
        variance,
        mc_mean,
        mc_stderr,
        samples: mc_samples,
        seed,
    })
}
