use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Complex64;

/// Model record `(r, Ω, σ²)` of the complex OU process
/// `dZ = -(r + iΩ) Z dt + sqrt(2σ²) dζ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OUParams {
    r: f64,
    omega: f64,
    sigma2: f64,
}

impl OUParams {
    pub fn new(r: f64, omega: f64, sigma2: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidArgument(format!("r must be positive, got {r}")));
        }
        if !omega.is_finite() {
            return Err(Error::InvalidArgument(format!("omega must be finite, got {omega}")));
        }
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "sigma2 must be positive, got {sigma2}"
            )));
        }
        let params = Self { r, omega, sigma2 };
        crate::error::check_rho(params.rho())?;
        Ok(params)
    }

    /// Parameters with a prescribed `ρ` and `c = Ω/r`, taking `r = 1`.
    pub fn from_rho_c(rho: f64, c: f64) -> Result<Self> {
        Self::new(1.0, c, rho / 2.0)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    /// `ρ = 2σ²/r`, the total variance `E|Z|²` under the stationary law.
    pub fn rho(&self) -> f64 {
        2.0 * self.sigma2 / self.r
    }

    /// `c = Ω/r`.
    pub fn c(&self) -> f64 {
        self.omega / self.r
    }

    /// Complex drift rate `α = r + iΩ`.
    pub fn alpha(&self) -> Complex64 {
        Complex64::new(self.r, self.omega)
    }

    /// Eigenvalue `-(m+n) r - i (m-n) Ω` belonging to `J_{m,n}`.
    pub fn eigenvalue(&self, m: u32, n: u32) -> Complex64 {
        let level = f64::from(m + n);
        let twist = f64::from(m) - f64::from(n);
        // `0.0 - x` rather than `-x` keeps the ground state at +0
        Complex64::new(0.0 - level * self.r, 0.0 - twist * self.omega)
    }

    /// Same model with the rotation switched off.
    pub fn symmetric(&self) -> Self {
        Self {
            omega: 0.0,
            ..*self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_quantities() {
        let p = OUParams::new(2.0, 0.5, 1.0).unwrap();
        assert_eq!(p.rho(), 1.0);
        assert_eq!(p.c(), 0.25);
        assert_eq!(p.eigenvalue(0, 0), Complex64::new(0.0, 0.0));
        assert_eq!(p.eigenvalue(2, 0), Complex64::new(-4.0, -1.0));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(OUParams::new(0.0, 1.0, 1.0).is_err());
        assert!(OUParams::new(1.0, f64::NAN, 1.0).is_err());
        assert!(OUParams::new(1.0, 1.0, -1.0).is_err());
    }
}
