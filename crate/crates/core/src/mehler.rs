//! The OU semigroup `P_t` and its Mehler form, with `u = e^{-rt}`.
//!
//! Three routes to the same operator are kept side by side: the closed
//! kernel, the eigen-series over `J_{m,n}`, and Gaussian quadrature of
//! `f(e^{-rt} B_0(t) x + sqrt(1 - e^{-2rt}) z)` against `μ`.

use crate::combinatorics::factorial_f64;
use crate::error::{Error, Result};
use crate::expansion::{ComplexNeumaier, QuadratureGrid, SampledFn};
use crate::hlito_poly::hlito_values;
use crate::{Complex64, OUParams};

/// Highest truncation level accepted by [`mehler_series`].
pub const MAX_SERIES_LEVEL: u32 = 60;

/// Above this `u` the eigen-series converges slowly; see [`MehlerPoint::is_near_singular`].
pub const SLOW_CONVERGENCE_U: f64 = 0.9;

pub type Mat2 = [[f64; 2]; 2];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MehlerPoint {
    pub u: f64,
    pub x: [f64; 2],
    pub y: [f64; 2],
}

impl MehlerPoint {
    /// Accepts `0 ≤ u < 1`; `u = 0` is the `t → ∞` limit.
    pub fn new(u: f64, x: [f64; 2], y: [f64; 2]) -> Result<Self> {
        if !(0.0..1.0).contains(&u) {
            return Err(Error::InvalidArgument(format!("u must lie in [0, 1), got {u}")));
        }
        Ok(Self { u, x, y })
    }

    pub fn is_near_singular(&self) -> bool {
        self.u >= SLOW_CONVERGENCE_U
    }
}

/// Clockwise rotation by `θ`: `[[cos θ, sin θ], [-sin θ, cos θ]]`. In complex
/// form this is multiplication by `e^{-iθ}`.
pub fn rotation_by(theta: f64) -> Mat2 {
    let (s, c) = theta.sin_cos();
    [[c, s], [-s, c]]
}

/// `B̃_0(u) = B_0(-ln u / r)`, the rotation by `θ = -c ln u`.
pub fn rotation(u: f64, params: &OUParams) -> Result<Mat2> {
    if !(u > 0.0 && u <= 1.0) {
        return Err(Error::InvalidArgument(format!("u must lie in (0, 1], got {u}")));
    }
    Ok(rotation_by(-params.c() * u.ln()))
}

fn apply(m: &Mat2, x: [f64; 2]) -> [f64; 2] {
    [m[0][0] * x[0] + m[0][1] * x[1], m[1][0] * x[0] + m[1][1] * x[1]]
}

/// Closed-form kernel
/// `(1-u²)^{-1} exp{-[u²|y|² + u²|x|² - 2u (B̃_0(u) x, y)] / (ρ (1-u²))}`.
pub fn mehler_kernel(pt: &MehlerPoint, params: &OUParams) -> Result<f64> {
    if pt.u == 0.0 {
        return Ok(1.0);
    }
    let u = pt.u;
    let bx = apply(&rotation(u, params)?, pt.x);
    let x2 = pt.x[0] * pt.x[0] + pt.x[1] * pt.x[1];
    let y2 = pt.y[0] * pt.y[0] + pt.y[1] * pt.y[1];
    let cross = bx[0] * pt.y[0] + bx[1] * pt.y[1];
    let one_minus = 1.0 - u * u;
    let exponent = -(u * u * (x2 + y2) - 2.0 * u * cross) / (params.rho() * one_minus);
    Ok(exponent.exp() / one_minus)
}

fn series_impl(pt: &MehlerPoint, params: &OUParams, n_max: u32, conj_y: bool) -> Result<Complex64> {
    if n_max > MAX_SERIES_LEVEL {
        return Err(Error::InvalidArgument(format!(
            "series level {n_max} exceeds {MAX_SERIES_LEVEL}"
        )));
    }
    let rho = params.rho();
    let zx = Complex64::new(pt.x[0], pt.x[1]);
    let zy = Complex64::new(pt.y[0], pt.y[1]);
    let jx = hlito_values(zx, rho, n_max)?;
    let jy = hlito_values(zy, rho, n_max)?;
    let log_u = if pt.u > 0.0 { pt.u.ln() } else { f64::NEG_INFINITY };
    let mut acc = ComplexNeumaier::default();
    for level in 0..=n_max {
        let radial = pt.u.powi(level as i32);
        if radial == 0.0 && level > 0 {
            break;
        }
        for m in 0..=level {
            let n = level - m;
            let twist = f64::from(m) - f64::from(n);
            // u^{i(m-n)c} on the principal branch; ln u is real for u in (0, 1)
            let phase = if twist == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::from_polar(1.0, twist * params.c() * log_u)
            };
            let norm = factorial_f64(u64::from(m)) * factorial_f64(u64::from(n)) * rho.powi(level as i32);
            let right = jy[m as usize][n as usize];
            let right = if conj_y { right.conj() } else { right };
            acc.add(phase * jx[m as usize][n as usize] * right * (radial / norm));
        }
    }
    Ok(acc.value())
}

/// `Σ_{m+n ≤ N} u^{m+n+i(m-n)c} J_{m,n}(x) conj(J_{m,n}(y)) / (m! n! ρ^{m+n})`,
/// truncated by total degree so conjugate pairs stay together.
///
/// The second factor is conjugated, as the inner-product expansion of `P_t`
/// requires. [`mehler_series_unconjugated`] keeps the factor as written
/// without the bar; it equals this series evaluated at `(y₁, -y₂)`.
pub fn mehler_series(pt: &MehlerPoint, params: &OUParams, n_max: u32) -> Result<Complex64> {
    series_impl(pt, params, n_max, true)
}

pub fn mehler_series_unconjugated(pt: &MehlerPoint, params: &OUParams, n_max: u32) -> Result<Complex64> {
    series_impl(pt, params, n_max, false)
}

fn check_grid(grid: &QuadratureGrid, params: &OUParams) -> Result<()> {
    let (g, m) = (grid.rho(), params.rho());
    if (g - m).abs() > 1e-12 * m {
        return Err(Error::GridMismatch { grid: g, model: m });
    }
    Ok(())
}

/// `e^{-rt} B_0(t) x`, the conditional mean of `X_t` given `X_0 = x`.
pub fn transported_mean(t: f64, x: [f64; 2], params: &OUParams) -> [f64; 2] {
    let decay = (-params.r() * t).exp();
    let rx = apply(&rotation_by(params.omega() * t), x);
    [decay * rx[0], decay * rx[1]]
}

/// `P_t f(x) = ∫ f(e^{-rt} B_0(t) x + sqrt(1 - e^{-2rt}) z) μ(dz)`.
pub fn semigroup_apply<F>(
    f: &F,
    t: f64,
    x: [f64; 2],
    params: &OUParams,
    grid: &QuadratureGrid,
) -> Result<Complex64>
where
    F: SampledFn + ?Sized,
{
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("t must be positive, got {t}")));
    }
    check_grid(grid, params)?;
    if let Some(d) = f.degree() {
        grid.check_exact(d)?;
    }
    let mean = transported_mean(t, x, params);
    let spread = (-(-2.0 * params.r() * t).exp_m1()).sqrt();
    Ok(grid.integrate(|z| f.value([mean[0] + spread * z[0], mean[1] + spread * z[1]])))
}

/// `P^s_t f(x)`: the same semigroup with the rotation switched off.
pub fn symmetric_semigroup_apply<F>(
    f: &F,
    t: f64,
    x: [f64; 2],
    params: &OUParams,
    grid: &QuadratureGrid,
) -> Result<Complex64>
where
    F: SampledFn + ?Sized,
{
    semigroup_apply(f, t, x, &params.symmetric(), grid)
}

/// `(P_t f(x), P^s_t f(B_0(t) x))`.
pub fn symmetric_relation_check<F>(
    f: &F,
    t: f64,
    x: [f64; 2],
    params: &OUParams,
    grid: &QuadratureGrid,
) -> Result<(Complex64, Complex64)>
where
    F: SampledFn + ?Sized,
{
    let lhs = semigroup_apply(f, t, x, params, grid)?;
    let rotated = apply(&rotation_by(params.omega() * t), x);
    let rhs = symmetric_semigroup_apply(f, t, rotated, params, grid)?;
    Ok((lhs, rhs))
}
