//! The practical limit `N_max^k · ℓ^α = c`: the largest problem size a
//! `N^k` algorithm reaches on hardware with feature size `ℓ`.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ScalingError {
    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
}

fn positive(name: &'static str, value: f64) -> Result<f64, ScalingError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(ScalingError::NonPositive { name, value })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingLaw {
    k: f64,
    alpha: f64,
    c: f64,
}

impl ScalingLaw {
    /// `k` may be a fitted, non-integer exponent.
    pub fn new(k: f64, alpha: f64, c: f64) -> Result<ScalingLaw, ScalingError> {
        Ok(ScalingLaw {
            k: positive("k", k)?,
            alpha: positive("alpha", alpha)?,
            c: positive("c", c)?,
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn c(&self) -> f64 {
        self.c
    }
}

/// `N_max = (c / ℓ^α)^(1/k)`.
pub fn scaling_nmax(law: &ScalingLaw, ell: f64) -> Result<f64, ScalingError> {
    let ell = positive("ell", ell)?;
    Ok((law.c / ell.powf(law.alpha)).powf(1.0 / law.k))
}
