use serde::{Deserialize, Serialize};

use super::{check_alpha, FuzzyError};

/// Normalized Gaussian fuzzy number over the key domain `[0, 255]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianFuzzyNumber {
    mean: f64,
    sigma: f64,
}

impl GaussianFuzzyNumber {
    pub fn new(mean: f64, sigma: f64) -> Result<Self, FuzzyError> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(FuzzyError::InvalidSigma(sigma));
        }
        Ok(GaussianFuzzyNumber { mean, sigma })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// `exp(-(x - mean)² / (2σ²))`; peaks at 1 on the mean.
    pub fn membership(&self, x: f64) -> f64 {
        let d = x - self.mean;
        (-(d * d) / (2.0 * self.sigma * self.sigma)).exp()
    }

    /// Closed-form α-cut `mean ± σ·√(−2 ln α)`.
    pub fn alpha_interval(&self, alpha: f64) -> Result<(f64, f64), FuzzyError> {
        check_alpha(alpha)?;
        let half = self.sigma * (-2.0 * alpha.ln()).sqrt();
        Ok((self.mean - half, self.mean + half))
    }

    /// Rounds both parameters to `places` decimal digits.
    pub fn quantized(&self, places: u32) -> Result<Self, FuzzyError> {
        GaussianFuzzyNumber::new(
            quantize_decimal(self.mean, places),
            quantize_decimal(self.sigma, places),
        )
    }
}

/// Attacker estimate of a leak target before and after observations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LeakEstimate {
    /// No observation yet: every key-domain value is fully possible.
    NonInformative,
    Gaussian(GaussianFuzzyNumber),
}

impl LeakEstimate {
    pub fn sigma(&self) -> Option<f64> {
        match self {
            LeakEstimate::NonInformative => None,
            LeakEstimate::Gaussian(g) => Some(g.sigma()),
        }
    }
}

/// Product-T-norm fusion of a prior estimate with one Gaussian observation.
///
/// The product of two Gaussian memberships is, up to height, the Gaussian
/// with precision-weighted mean and `σ' = σ₁σ₂ / √(σ₁² + σ₂²)`.
pub fn fuse(prior: LeakEstimate, obs: GaussianFuzzyNumber) -> Result<GaussianFuzzyNumber, FuzzyError> {
    GaussianFuzzyNumber::new(obs.mean, obs.sigma)?;
    match prior {
        LeakEstimate::NonInformative => Ok(obs),
        LeakEstimate::Gaussian(p) => {
            let v1 = p.sigma * p.sigma;
            let v2 = obs.sigma * obs.sigma;
            let sigma = (p.sigma * obs.sigma) / (v1 + v2).sqrt();
            let mean = (v2 * p.mean + v1 * obs.mean) / (v1 + v2);
            GaussianFuzzyNumber::new(mean, sigma)
        }
    }
}

/// [`fuse`] followed by parameter quantisation to `places` decimals.
pub fn fuse_quantized(
    prior: LeakEstimate,
    obs: GaussianFuzzyNumber,
    places: u32,
) -> Result<GaussianFuzzyNumber, FuzzyError> {
    fuse(prior, obs)?.quantized(places)
}

/// Rounds half away from zero to `places` fractional digits.
pub fn quantize_decimal(x: f64, places: u32) -> f64 {
    let scale = 10f64.powi(places as i32);
    (x * scale).round() / scale
}
