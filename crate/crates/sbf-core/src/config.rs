//! Pipeline configuration with validated defaults.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// All tunable constants of the pipeline. `Config::default()` carries the
/// reference values; `validate` enforces the cross-field ordering
/// `0 < gamma < epsilon < beta < 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Config {
    /// Bounding-box padding in map pixels for the background set.
    pub rho: u32,
    /// Positive samples per joint for the scale head.
    pub n_pos: usize,
    /// Negative samples per joint for the scale head.
    pub n_neg: usize,
    /// Samples per class for the body head.
    pub n_body: usize,
    /// Samples per class for the flow head.
    pub n_flow: usize,
    /// Negative-side weight in the scale loss.
    pub alpha: f64,
    /// Upper flow threshold fraction (positives above `beta * max`).
    pub beta: f64,
    /// Lower flow threshold fraction (negatives below `gamma * max`).
    pub gamma: f64,
    /// Flow-map threshold fraction, must lie in `(gamma, beta)`.
    pub epsilon: f64,
    /// Weight of the smoothed scale volume in the fused volume.
    pub mu: f64,
    /// Gaussian standard deviation in map pixels.
    pub sigma: f64,
    /// Weight of the body loss in the total loss.
    pub lambda_body: f64,
    /// Frames per clip.
    pub t_clip: usize,
    /// Square crop size for downstream clips.
    pub crop: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            rho: 10,
            n_pos: 32,
            n_neg: 128,
            n_body: 256,
            n_flow: 256,
            alpha: 19.0,
            beta: 0.8,
            gamma: 0.2,
            epsilon: 0.5,
            mu: 0.1,
            sigma: 0.4,
            lambda_body: 1.0,
            t_clip: 48,
            crop: 56,
        }
    }
}

impl Config {
    /// Validate all invariants and return the config unchanged. Idempotent.
    pub fn validate(self) -> Result<Config> {
        fn positive(field: &'static str, value: f64) -> Result<()> {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::RangeViolation {
                    field,
                    value,
                    constraint: "must be finite and > 0",
                });
            }
            Ok(())
        }
        fn nonnegative(field: &'static str, value: f64) -> Result<()> {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::RangeViolation {
                    field,
                    value,
                    constraint: "must be finite and >= 0",
                });
            }
            Ok(())
        }
        fn count(field: &'static str, value: usize) -> Result<()> {
            if value == 0 {
                return Err(Error::RangeViolation {
                    field,
                    value: 0.0,
                    constraint: "must be >= 1",
                });
            }
            Ok(())
        }

        count("n_pos", self.n_pos)?;
        count("n_neg", self.n_neg)?;
        count("n_body", self.n_body)?;
        count("n_flow", self.n_flow)?;
        count("t_clip", self.t_clip)?;
        count("crop", self.crop)?;
        nonnegative("alpha", self.alpha)?;
        nonnegative("mu", self.mu)?;
        nonnegative("lambda_body", self.lambda_body)?;
        positive("sigma", self.sigma)?;

        for (field, value) in [
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("epsilon", self.epsilon),
        ] {
            if !value.is_finite() || value <= 0.0 || value >= 1.0 {
                return Err(Error::RangeViolation {
                    field,
                    value,
                    constraint: "must lie in (0, 1)",
                });
            }
        }
        if !(self.gamma < self.epsilon && self.epsilon < self.beta) {
            return Err(Error::OrderingViolation {
                gamma: self.gamma,
                epsilon: self.epsilon,
                beta: self.beta,
            });
        }
        Ok(self)
    }
}
