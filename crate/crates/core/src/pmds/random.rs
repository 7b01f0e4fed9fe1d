use num_rational::BigRational;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    assemble_standard_form, probability_bound, verify_tkl, CodeArtifact, Method, PmdsParams, StandardFormFill,
};
use crate::field::FieldSpec;
use crate::rng::{seeded, RNG_NAME};

/// Uniform `(α, β) ∈ GF(q)^{sk} × GF(q)^{ℓR}`.
pub fn random_fill<R: Rng + ?Sized>(params: &PmdsParams, field: &FieldSpec, rng: &mut R) -> StandardFormFill {
    let alpha = (0..params.s * params.k()).map(|_| field.random(rng)).collect();
    let beta = (0..params.ell * params.big_r()).map(|_| field.random(rng)).collect();
    StandardFormFill { alpha, beta }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RandomFailure {
    pub attempts: u64,
    /// Lower bound on the per-attempt success probability.
    pub bound: BigRational,
}

/// Random standard-form fills, verified one by one, until one is PMDS.
///
/// All attempts draw from a single generator keyed by `seed` (stream 0).
pub fn construct_random(
    params: &PmdsParams,
    field: &FieldSpec,
    seed: u64,
    max_attempts: u64,
) -> Result<CodeArtifact, RandomFailure> {
    let mut rng = seeded(seed, 0);
    let layout = params.layout();
    for attempt in 1..=max_attempts {
        let fill = random_fill(params, field, &mut rng);
        let code = assemble_standard_form(params, field, &fill).expect("fill matches params");
        if verify_tkl(&code.generator, &layout).pmds {
            let mut code = code;
            code.provenance.method = Method::Random;
            code.provenance.seed = Some(seed);
            code.provenance.attempts = Some(attempt);
            code.provenance.rng = Some(RNG_NAME.to_string());
            return Ok(code);
        }
    }
    Err(RandomFailure { attempts: max_attempts, bound: probability_bound(params, u64::from(field.order())) })
}

/// Outcome of independent single-attempt random fills.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub trials: u64,
    pub successes: u64,
}

impl Estimate {
    pub fn rate(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }

    /// Binomial standard error `sqrt(p̂(1 − p̂)/T)`.
    pub fn std_error(&self) -> f64 {
        let p = self.rate();
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    /// Wilson score interval at normal quantile `z`.
    pub fn wilson_interval(&self, z: f64) -> (f64, f64) {
        let n = self.trials as f64;
        let p = self.rate();
        let denom = 1.0 + z * z / n;
        let centre = (p + z * z / (2.0 * n)) / denom;
        let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
        ((centre - half).max(0.0), (centre + half).min(1.0))
    }
}

/// Trial `t` fills from stream `t + 1` of `seed`; trials run in parallel.
pub fn estimate_success_rate(params: &PmdsParams, field: &FieldSpec, trials: u64, seed: u64) -> Estimate {
    let layout = params.layout();
    let successes = (0..trials)
        .into_par_iter()
        .filter(|&t| {
            let mut rng = seeded(seed, t + 1);
            let fill = random_fill(params, field, &mut rng);
            let code = assemble_standard_form(params, field, &fill).expect("fill matches params");
            verify_tkl(&code.generator, &layout).pmds
        })
        .count() as u64;
    Estimate { trials, successes }
}
