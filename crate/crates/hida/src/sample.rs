//! Seeded random chaos expansions for probes and statistical tests.
//!
//! Reproducibility scheme: every independent trial (and every Monte Carlo
//! sample) gets its own ChaCha8 stream derived from a master seed via
//! [`trial_rng`]. Streams are independent by construction, so trials may be
//! evaluated on any number of threads in any order and still see exactly the
//! draws they would see sequentially. Within one stream, draws happen in
//! canonical term order, which pins the generated expansion bit for bit.

use crate::chaos::ChaosExpansion;
use crate::error::Result;
use crate::multi_index::enumerate_multi_indices;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// RNG for one trial: master seed selects the key, `stream` the counter
/// stream, so (seed, stream) pairs never collide or correlate.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// How random expansions are drawn.
#[derive(Debug, Clone, Copy)]
pub struct SampleConfig {
    /// Probability that any given admissible term receives a coefficient.
    pub density: f64,
    /// Coefficients get an imaginary part too when set.
    pub complex: bool,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            density: 0.5,
            complex: false,
        }
    }
}

/// Draw an expansion with standard normal coefficients on a random subset of
/// all terms of degree <= `max_degree`. May be zero when the density is low.
pub fn random_expansion(
    rng: &mut ChaCha8Rng,
    dim: usize,
    max_degree: usize,
    config: SampleConfig,
) -> Result<ChaosExpansion> {
    let mut terms = Vec::new();
    for index in enumerate_multi_indices(dim, max_degree) {
        // Draw the inclusion flag unconditionally so the stream position
        // depends only on (dim, max_degree), not on earlier outcomes.
        let keep = rng.random::<f64>() < config.density;
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = if config.complex {
            rng.sample(StandardNormal)
        } else {
            0.0
        };
        if keep {
            terms.push((index, Complex64::new(re, im)));
        }
    }
    ChaosExpansion::from_terms(dim, max_degree, terms)
}

/// Like [`random_expansion`] but guaranteed nonzero: an empty draw falls
/// back to a single random term.
pub fn random_nonzero_expansion(
    rng: &mut ChaCha8Rng,
    dim: usize,
    max_degree: usize,
    config: SampleConfig,
) -> Result<ChaosExpansion> {
    let e = random_expansion(rng, dim, max_degree, config)?;
    if !e.is_zero() {
        return Ok(e);
    }
    let all = enumerate_multi_indices(dim, max_degree);
    let pick = rng.random_range(0..all.len());
    let re: f64 = rng.sample(StandardNormal);
    // A standard normal draw is zero with probability zero, but the
    // guarantee should not hinge on that.
    let re = if re == 0.0 { 1.0 } else { re };
    ChaosExpansion::single_term(dim, max_degree, all[pick].clone(), Complex64::new(re, 0.0))
}
