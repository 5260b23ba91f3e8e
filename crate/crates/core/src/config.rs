use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical tolerances shared by every solver in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Relative bracket width at which bisection stops.
    pub root_tol: f64,
    /// Acceptance bound for certificate residuals.
    pub residual_tol: f64,
    pub max_iter: usize,
    /// Step used when marching `r1` to find a bracket.
    pub march_step: f64,
    /// Shrink applied to open intervals before sampling their ends.
    pub boundary_eps: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            root_tol: 1e-13,
            residual_tol: 1e-9,
            max_iter: 200,
            march_step: 1e-2,
            boundary_eps: 1e-9,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("root_tol", self.root_tol),
            ("residual_tol", self.residual_tol),
            ("march_step", self.march_step),
            ("boundary_eps", self.boundary_eps),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "{name} must be positive and finite, got {value}"
                )));
            }
        }
        if self.max_iter < 64 {
            return Err(Error::InvalidInput(format!(
                "max_iter must be at least 64, got {}",
                self.max_iter
            )));
        }
        Ok(())
    }
}
