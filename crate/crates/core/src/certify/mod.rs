//! Samplers, exhaustive enumerators and property certifiers.
//!
//! Every trial draws its randomness from a ChaCha stream selected by the
//! trial index under the master seed, so outcomes do not depend on how
//! trials are scheduled. With the `parallel` feature trials run on rayon;
//! results are always collected in trial order.

mod certifiers;
mod enumerate;
mod report;
mod sample;

pub use certifiers::{
    certify_bicommutativity, certify_cylinder_pinning, certify_openness, certify_surjectivity,
    compatible_families_on_grid, Neighborhood, OpennessCenter, TrialPlan,
};
pub use enumerate::{enumerate_capacities, for_each_capacity, ENUMERATION_LIMIT};
pub use report::{CertificateReport, Counterexample};
pub use sample::{sample_capacity, sample_compatible_family, sample_function};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Default rational resolution of uniform draws: values are multiples of
/// `1/resolution`.
pub const DEFAULT_RESOLUTION: u32 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SamplerMethod {
    /// Uniform values, then the monotone closure `v(A) ← max_{B⊆A} v(B)`.
    RectifiedUniform,
    /// `g ∘ P` for a random probability vector `P` and a random monotone
    /// piecewise-linear distortion `g` with `g(0) = 0`, `g(1) = 1`.
    DistortedAdditive,
    /// Uniform choice among all grid capacities with values in
    /// `{0, 1/k, …, 1}`.
    Grid,
}

impl std::str::FromStr for SamplerMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rectified-uniform" => Ok(Self::RectifiedUniform),
            "distorted-additive" => Ok(Self::DistortedAdditive),
            "grid-enumeration" | "grid" => Ok(Self::Grid),
            other => Err(Error::Format(format!("unknown sampler method {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplerConfig {
    pub seed: u64,
    pub method: SamplerMethod,
    /// Grid denominator `k` for [`SamplerMethod::Grid`].
    pub grid_k: u32,
    pub resolution: u32,
}

impl SamplerConfig {
    pub fn new(seed: u64, method: SamplerMethod) -> Self {
        Self {
            seed,
            method,
            grid_k: 2,
            resolution: DEFAULT_RESOLUTION,
        }
    }

    pub fn with_grid(mut self, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::PreconditionFailed("grid k must be at least 1".into()));
        }
        self.grid_k = k;
        Ok(self)
    }

    /// The random stream for one trial.
    pub fn trial_rng(&self, trial: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial);
        rng
    }
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self::new(0, SamplerMethod::RectifiedUniform)
    }
}
