use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Shared SINR model parameters. Every station uses the same power.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SinrParams {
    /// Path-loss exponent, > 2.
    pub alpha: f64,
    /// Reception threshold, >= 1.
    pub beta: f64,
    /// Ambient noise power, >= 0.
    pub noise: f64,
    /// Weak-device sensitivity, > 0.
    pub epsilon: f64,
    /// Common transmission power, > 0.
    pub power: f64,
}

impl SinrParams {
    /// Parameters with unit noise and the power that makes the range exactly 1.
    pub fn unit_range(alpha: f64, beta: f64, epsilon: f64) -> Self {
        SinrParams {
            alpha,
            beta,
            noise: 1.0,
            epsilon,
            power: (1.0 + epsilon) * beta,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParams(msg.to_string()));
        let all = [self.alpha, self.beta, self.noise, self.epsilon, self.power];
        if all.iter().any(|v| !v.is_finite()) {
            return bad("all parameters must be finite");
        }
        if self.alpha <= 2.0 {
            return bad("alpha must exceed 2");
        }
        if self.beta < 1.0 {
            return bad("beta must be at least 1");
        }
        if self.noise < 0.0 {
            return bad("noise must be non-negative");
        }
        if self.epsilon <= 0.0 {
            return bad("epsilon must be positive (weak devices)");
        }
        if self.power <= 0.0 {
            return bad("power must be positive");
        }
        Ok(())
    }

    /// Right-hand side of the weak-device condition, `(1+ε)·β·𝒩`.
    pub fn weak_threshold(&self) -> f64 {
        (1.0 + self.epsilon) * self.beta * self.noise
    }
}

impl Default for SinrParams {
    fn default() -> Self {
        SinrParams::unit_range(4.0, 1.0, 0.5)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        SinrParams::default().validate().unwrap();
    }

    #[test]
    fn rejects_out_of_model_values() {
        let base = SinrParams::default();
        for p in [
            SinrParams { alpha: 2.0, ..base },
            SinrParams { beta: 0.5, ..base },
            SinrParams {
                noise: -1.0,
                ..base
            },
            SinrParams {
                epsilon: 0.0,
                ..base
            },
            SinrParams { power: 0.0, ..base },
            SinrParams {
                alpha: f64::NAN,
                ..base
            },
        ] {
            assert!(p.validate().is_err(), "{p:?}");
        }
    }
}
