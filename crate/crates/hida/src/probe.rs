//! Randomized zero-divisor probe for the truncated Wick algebra.
//!
//! In the untruncated algebra the Wick product has no zero divisors: the
//! lowest homogeneous parts multiply like polynomials, and a product of
//! nonzero polynomials is nonzero. The probe stress-tests the finite
//! analogue of that argument. Each trial draws a random nonzero pair,
//! multiplies without truncation, and demands that
//!
//! 1. the product is nonzero, and
//! 2. its lowest part equals the product of the operands' lowest parts,
//!    bit for bit (see [`crate::wick::lowest_part_check`] for why exact
//!    equality is the right comparison).
//!
//! Trials use independent ChaCha streams keyed by the master seed, so the
//! run is reproducible and embarrassingly parallel: results are collected
//! in trial order and reduced sequentially, making the report identical no
//! matter how many threads participate.

use crate::error::{Error, Result};
use crate::multi_index::DEGREE_CAP;
use crate::sample::{random_nonzero_expansion, trial_rng, SampleConfig};
use crate::wick::lowest_part_check;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Copy)]
pub struct ProbeConfig {
    pub trials: u64,
    /// Each trial draws its dimension uniformly from `1..=dim_max`.
    pub dim_max: usize,
    /// Each operand's degree cap is drawn uniformly from `1..=degree_max`.
    pub degree_max: usize,
    /// Term density passed to the sampler.
    pub density: f64,
    /// Sample complex coefficients (the stress case) or real ones.
    pub complex: bool,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub trials: u64,
    /// Total failing trials: `zero_products_found + lowest_part_mismatches`.
    pub failures: u64,
    /// Trials whose untruncated product vanished outright.
    pub zero_products_found: u64,
    /// Trials with a nonzero product whose lowest part differed from the
    /// product of the operands' lowest parts.
    pub lowest_part_mismatches: u64,
    /// Indices of failing trials (empty on a clean run).
    pub failed_trials: Vec<u64>,
    /// Smallest coefficient magnitude leading a product's lowest part —
    /// the margin by which the worst trial cleared zero.
    pub min_lowest_coeff: f64,
    /// How often each lowest-part degree of the product occurred,
    /// indexed by degree.
    pub lowest_degree_counts: Vec<u64>,
}

enum TrialOutcome {
    Passed {
        lowest_degree: usize,
        lowest_coeff_sup: f64,
    },
    ZeroProduct,
    LowestPartMismatch,
}

/// Run the probe. Fails fast on nonsensical configuration; a finished run
/// reports violations in the returned record instead of erroring, so a
/// falsifying example would surface with its trial index.
pub fn zero_divisor_probe(config: ProbeConfig) -> Result<ProbeReport> {
    if config.trials == 0 {
        return Err(Error::InvalidConfig("probe needs at least one trial".into()));
    }
    if config.dim_max == 0 {
        return Err(Error::InvalidConfig("dim_max must be at least 1".into()));
    }
    if config.degree_max == 0 || 2 * config.degree_max > DEGREE_CAP {
        return Err(Error::InvalidConfig(format!(
            "degree_max must lie in 1..={} so untruncated products stay within the degree cap",
            DEGREE_CAP / 2
        )));
    }
    if !(0.0..=1.0).contains(&config.density) {
        return Err(Error::InvalidConfig(
            "density must lie in [0, 1]".into(),
        ));
    }

    let sample_cfg = SampleConfig {
        density: config.density,
        complex: config.complex,
    };
    let outcomes: Vec<Result<TrialOutcome>> = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(t, &config, sample_cfg))
        .collect();

    let mut report = ProbeReport {
        trials: config.trials,
        failures: 0,
        zero_products_found: 0,
        lowest_part_mismatches: 0,
        failed_trials: Vec::new(),
        min_lowest_coeff: f64::INFINITY,
        lowest_degree_counts: vec![0; 2 * config.degree_max + 1],
    };
    for (t, outcome) in outcomes.into_iter().enumerate() {
        match outcome? {
            TrialOutcome::Passed {
                lowest_degree,
                lowest_coeff_sup,
            } => {
                report.lowest_degree_counts[lowest_degree] += 1;
                report.min_lowest_coeff = report.min_lowest_coeff.min(lowest_coeff_sup);
            }
            TrialOutcome::ZeroProduct => {
                report.failures += 1;
                report.zero_products_found += 1;
                report.failed_trials.push(t as u64);
            }
            TrialOutcome::LowestPartMismatch => {
                report.failures += 1;
                report.lowest_part_mismatches += 1;
                report.failed_trials.push(t as u64);
            }
        }
    }
    Ok(report)
}

fn run_trial(t: u64, config: &ProbeConfig, sample_cfg: SampleConfig) -> Result<TrialOutcome> {
    let mut rng = trial_rng(config.seed, t);
    let dim = rng.random_range(1..=config.dim_max);
    let deg_a = rng.random_range(1..=config.degree_max);
    let deg_b = rng.random_range(1..=config.degree_max);
    let a = random_nonzero_expansion(&mut rng, dim, deg_a, sample_cfg)?;
    let b = random_nonzero_expansion(&mut rng, dim, deg_b, sample_cfg)?;
    let check = lowest_part_check(&a, &b)?;
    if !check.product_nonzero {
        return Ok(TrialOutcome::ZeroProduct);
    }
    if !check.exact_match {
        return Ok(TrialOutcome::LowestPartMismatch);
    }
    Ok(TrialOutcome::Passed {
        lowest_degree: check
            .product_lowest
            .lowest_degree()
            .expect("nonzero product has a lowest part"),
        lowest_coeff_sup: check.product_lowest.coeff_sup_norm(),
    })
}
