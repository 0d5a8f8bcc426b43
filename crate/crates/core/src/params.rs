use crate::error::{Error, Result};

/// Physical parameters of the regularized equation
/// `i ψ_t + ½ ψ_xx = λ ψ log(|ψ|² + ε) + (μ / 2i) ψ log(ψ / ψ*)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    /// Signed strength of the logarithmic nonlinearity (λ < 0 focusing).
    pub lambda: f64,
    /// Friction coefficient.
    pub mu: f64,
    /// Saturation constant inside the logarithm.
    pub eps: f64,
}

impl PhysParams {
    pub fn new(lambda: f64, mu: f64, eps: f64) -> Result<Self> {
        let p = Self { lambda, mu, eps };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda.is_finite() && self.mu.is_finite() && self.eps.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite parameters {self:?}")));
        }
        if self.mu < 0.0 {
            return Err(Error::InvalidParameter(format!("mu must be >= 0, got {}", self.mu)));
        }
        if self.eps < 0.0 {
            return Err(Error::InvalidParameter(format!("eps must be >= 0, got {}", self.eps)));
        }
        Ok(())
    }

    pub fn is_focusing(&self) -> bool {
        self.lambda < 0.0
    }

    pub fn is_defocusing(&self) -> bool {
        self.lambda > 0.0
    }
}
