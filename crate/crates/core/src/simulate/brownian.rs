//! Complex Brownian motion `ζ_t = B₁(t) + i B₂(t)` and the martingales
//! `F_{m,n}(ζ_t) = (-1)^{m∧n} J_{m,n}(ζ_t, 2t) / (m! n!)`.
//!
//! Differentiating with `∂J_{m,n} = m J_{m-1,n}` gives
//! `dF_{m,n} = ε₁ F_{m-1,n} dζ + ε₂ F_{m,n-1} dζ̄`, where `ε₁ = -1` when
//! `m ≤ n` and `ε₂ = -1` when `n ≤ m` (the sign `(-1)^{m∧n}` flips exactly
//! when lowering the smaller index), and `+1` otherwise. [`ito_sum_check`]
//! compares both this and the unsigned form against simulated Itô sums.

use rayon::prelude::*;

use super::rng::{complex_normal, path_rng};
use super::McEstimate;
use crate::combinatorics::factorial_f64;
use crate::error::{Error, Result};
use crate::hlito_poly::hlito_values_unchecked;
use crate::Complex64;

fn sign(m: u32, n: u32) -> f64 {
    if m.min(n).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `F_{m,n}` at every index `m + n ≤ level`, from one value table.
fn f_table(z: Complex64, t: f64, level: u32) -> Vec<Vec<Complex64>> {
    let mut table = hlito_values_unchecked(z, 2.0 * t, level);
    for (m, row) in table.iter_mut().enumerate() {
        for (n, v) in row.iter_mut().enumerate() {
            let (m, n) = (m as u32, n as u32);
            *v *= sign(m, n) / (factorial_f64(u64::from(m)) * factorial_f64(u64::from(n)));
        }
    }
    table
}

fn validate(m: u32, n: u32, t: f64, n_paths: usize) -> Result<()> {
    if m == 0 && n == 0 {
        return Err(Error::InvalidArgument(
            "F_{0,0} is constant; the martingale test needs (m, n) != (0, 0)".into(),
        ));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("t must be positive, got {t}")));
    }
    if n_paths == 0 {
        return Err(Error::InvalidArgument("at least one path is required".into()));
    }
    Ok(())
}

/// Ensemble mean of `F_{m,n}(ζ_t)`; zero for a martingale started at the origin.
pub fn complex_bm_martingale(m: u32, n: u32, t: f64, n_paths: usize, seed: u64) -> Result<McEstimate> {
    validate(m, n, t, n_paths)?;
    let values: Vec<Complex64> = (0..n_paths as u64)
        .into_par_iter()
        .map(|path| {
            let zeta = complex_normal(&mut path_rng(seed, path)) * t.sqrt();
            f_table(zeta, t, m + n)[m as usize][n as usize]
        })
        .collect();
    Ok(McEstimate::from_samples(&values))
}

/// Which stochastic differential is integrated in [`ito_sum_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ItoSigns {
    /// `ε₁, ε₂` as derived from the lowering relation.
    Derived,
    /// `dF_{m,n} = F_{m-1,n} dζ + F_{m,n-1} dζ̄` with no signs.
    Unsigned,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ItoCheck {
    /// RMS over paths of `F(ζ_T) - F(0) - Σ (Itô increments)`.
    pub rms_residual: f64,
    /// RMS over paths of `F(ζ_T) - F(0)`, for scale.
    pub rms_change: f64,
}

impl ItoCheck {
    pub fn relative(&self) -> f64 {
        self.rms_residual / self.rms_change
    }
}

/// Left-point Itô sums of the chosen differential along simulated paths.
pub fn ito_sum_check(
    m: u32,
    n: u32,
    t: f64,
    n_steps: usize,
    n_paths: usize,
    seed: u64,
    signs: ItoSigns,
) -> Result<ItoCheck> {
    validate(m, n, t, n_paths)?;
    if n_steps == 0 {
        return Err(Error::InvalidArgument("at least one step is required".into()));
    }
    let (e1, e2) = match signs {
        ItoSigns::Derived => (
            if m <= n { -1.0 } else { 1.0 },
            if n <= m { -1.0 } else { 1.0 },
        ),
        ItoSigns::Unsigned => (1.0, 1.0),
    };
    let dt = t / n_steps as f64;
    let sq = dt.sqrt();
    let level = m + n;
    let (mu, nu) = (m as usize, n as usize);
    let per_path: Vec<(f64, f64)> = (0..n_paths as u64)
        .into_par_iter()
        .map(|path| {
            let mut rng = path_rng(seed, path);
            let mut zeta = Complex64::new(0.0, 0.0);
            let start = f_table(zeta, 0.0, level)[mu][nu];
            let mut sum = Complex64::new(0.0, 0.0);
            for k in 0..n_steps {
                let table = f_table(zeta, k as f64 * dt, level);
                let d = complex_normal(&mut rng) * sq;
                if m > 0 {
                    sum += table[mu - 1][nu] * d * e1;
                }
                if n > 0 {
                    sum += table[mu][nu - 1] * d.conj() * e2;
                }
                zeta += d;
            }
            let change = f_table(zeta, t, level)[mu][nu] - start;
            ((change - sum).norm_sqr(), change.norm_sqr())
        })
        .collect();
    let np = n_paths as f64;
    let (res, chg) = per_path.iter().fold((0.0, 0.0), |acc, v| (acc.0 + v.0, acc.1 + v.1));
    Ok(ItoCheck {
        rms_residual: (res / np).sqrt(),
        rms_change: (chg / np).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero() -> Complex64 {
        Complex64::new(0.0, 0.0)
    }

    #[test]
    fn martingale_examples() {
        assert!(complex_bm_martingale(0, 0, 1.0, 10, 0).is_err());
        let e = complex_bm_martingale(1, 0, 1.0, 100_000, 1).unwrap();
        assert!(e.within(zero(), 3.0));
        let e = complex_bm_martingale(1, 1, 1.0, 100_000, 2).unwrap();
        assert!(e.within(zero(), 3.0));
        let e = complex_bm_martingale(2, 1, 0.5, 100_000, 3).unwrap();
        assert!(e.within(zero(), 3.0));
    }

    #[test]
    fn f_values_at_the_origin() {
        let tbl = f_table(zero(), 0.0, 3);
        assert_eq!(tbl[0][0], Complex64::new(1.0, 0.0));
        assert_eq!(tbl[1][1], zero());
        assert_eq!(tbl[2][1], zero());
    }

    #[test]
    fn f_11_is_minus_the_centred_modulus() {
        let z = Complex64::new(0.8, -1.1);
        let t = 0.6;
        let f = f_table(z, t, 2)[1][1];
        assert!((f - Complex64::new(-(z.norm_sqr() - 2.0 * t), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn derived_signs_match_ito_sums() {
        for (m, n) in [(1, 0), (1, 1), (2, 1), (1, 2), (3, 1)] {
            let check = ito_sum_check(m, n, 1.0, 2000, 200, 7, ItoSigns::Derived).unwrap();
            assert!(check.relative() < 0.1, "({m},{n}): {check:?}");
        }
    }

    #[test]
    fn unsigned_differential_fails_when_min_index_is_positive() {
        let check = ito_sum_check(1, 1, 1.0, 2000, 200, 7, ItoSigns::Unsigned).unwrap();
        assert!(check.relative() > 1.0, "{check:?}");
        // with m ∧ n = 0 below, the two forms coincide
        let a = ito_sum_check(2, 0, 1.0, 500, 50, 7, ItoSigns::Unsigned).unwrap();
        let b = ito_sum_check(2, 0, 1.0, 500, 50, 7, ItoSigns::Derived).unwrap();
        assert_eq!(a, b);
    }
}
