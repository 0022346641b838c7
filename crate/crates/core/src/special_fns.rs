//! Classical real special functions with the variance-scaled conventions
//! used throughout the crate.
//!
//! * `H_n(x, ρ)`: Hermite polynomials orthogonal under `N(0, ρ)`, monic,
//!   `H_{n+1} = x H_n - n ρ H_{n-1}`.
//! * `L_n^α(x, ρ) = ρ^n L_n^α(x/ρ)` in terms of the standard Laguerre family.
//! * `J_n(x)`: integer-order Bessel functions of the first kind from their
//!   periodic integral over one period.

use num_traits::ToPrimitive;
use std::f64::consts::PI;

use crate::combinatorics::{binomial, factorial_big};
use crate::error::{check_rho, Error, Result};

/// Default number of trapezoid nodes used by [`bessel_jn`].
pub const BESSEL_GRID: usize = 512;

/// Positive variance-like scale `ρ` shared by the polynomial families.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct VarianceScale(f64);

impl VarianceScale {
    pub fn new(rho: f64) -> Result<Self> {
        check_rho(rho)?;
        Ok(Self(rho))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// `H_n(x, ρ)` by the three-term recursion.
pub fn hermite(n: u32, x: f64, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    Ok(hermite_unchecked(n, x, rho))
}

/// `H_0(x, ρ), ..., H_n(x, ρ)`.
pub fn hermite_sequence(n: u32, x: f64, rho: f64) -> Result<Vec<f64>> {
    check_rho(rho)?;
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(1.0);
    if n >= 1 {
        out.push(x);
    }
    for k in 1..n as usize {
        let next = x * out[k] - k as f64 * rho * out[k - 1];
        out.push(next);
    }
    Ok(out)
}

pub(crate) fn hermite_unchecked(n: u32, x: f64, rho: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let (mut prev, mut cur) = (1.0, x);
    for k in 1..n {
        let next = x * cur - f64::from(k) * rho * prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > -1.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange(alpha))
    }
}

/// Signed coefficients `c_r` of `L_n^α(x, ρ) = Σ_r c_r x^{n-r} ρ^r`.
///
/// For integer `α` the rational values `(-1)^{n+r} C(n+α, r) / (n-r)!` are
/// formed from exact integers; real `α` falls back to a floating product for
/// the generalized binomial.
pub(crate) fn laguerre_coefficients(n: u32, alpha: f64) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    let top = f64::from(n) + alpha;
    if top > 64.0 {
        return Err(Error::ExactRangeExceeded(top.ceil() as u64));
    }
    let integer_alpha = alpha.fract() == 0.0;
    let n64 = u64::from(n);
    let mut coeffs = Vec::with_capacity(n as usize + 1);
    for r in 0..=n64 {
        let denom = factorial_big(n64 - r).to_f64().unwrap_or(f64::INFINITY);
        let binom = if integer_alpha {
            // alpha >= 0 here, or alpha == -0.0 which is the same integer
            let upper = (top as i64) as u64;
            binomial(upper, r).ok_or(Error::ExactRangeExceeded(upper))? as f64
        } else {
            (0..r).fold(1.0, |acc, j| acc * (top - j as f64) / (j + 1) as f64)
        };
        let sign = if (n64 + r) % 2 == 0 { 1.0 } else { -1.0 };
        coeffs.push(sign * binom / denom);
    }
    Ok(coeffs)
}

/// `L_n^α(x, ρ)` from its power series.
pub fn laguerre(n: u32, alpha: f64, x: f64, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    let coeffs = laguerre_coefficients(n, alpha)?;
    // Horner in x with the ρ^r weights folded into the coefficients.
    let mut rho_pow = 1.0;
    let weighted: Vec<f64> = coeffs
        .iter()
        .map(|c| {
            let w = c * rho_pow;
            rho_pow *= rho;
            w
        })
        .collect();
    Ok(weighted.iter().fold(0.0, |acc, w| acc * x + w))
}

/// `Σ_r |c_r x^{n-r} ρ^r|`, the natural magnitude scale for comparing
/// Laguerre values that may sit near a root.
pub fn laguerre_term_scale(n: u32, alpha: f64, x: f64, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    let coeffs = laguerre_coefficients(n, alpha)?;
    Ok(coeffs
        .iter()
        .enumerate()
        .map(|(r, c)| (c * x.powi((n as usize - r) as i32) * rho.powi(r as i32)).abs())
        .sum())
}

/// `J_n(x)` with the default grid of [`BESSEL_GRID`] nodes.
pub fn bessel_jn(n: i32, x: f64) -> f64 {
    bessel_jn_with_grid(n, x, BESSEL_GRID)
}

/// `J_n(x) = (1/2π) ∫_{-π}^{π} cos(nτ - x sin τ) dτ` by the periodic
/// trapezoid rule on `grid` nodes.
pub fn bessel_jn_with_grid(n: i32, x: f64, grid: usize) -> f64 {
    let grid = grid.max(1);
    let h = 2.0 * PI / grid as f64;
    let nf = f64::from(n);
    let sum: f64 = (0..grid)
        .map(|k| {
            let tau = -PI + k as f64 * h;
            (nf * tau - x * tau.sin()).cos()
        })
        .sum();
    sum / grid as f64
}

/// Maximum bisection depth allowed in [`laguerre_via_bessel`].
pub const MAX_REFINEMENT_DEPTH: u32 = 40;

/// `L_n^α(x, ρ)` from its Bessel-kernel integral over `(0, ∞)`.
///
/// Slow; meant as an independent cross-check of [`laguerre`].
pub fn laguerre_via_bessel(n: u32, alpha: u32, x: f64, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::InvalidArgument(format!("x must be positive, got {x}")));
    }
    let power = f64::from(n) + f64::from(alpha) / 2.0;
    let t_max = envelope_cutoff(power, rho, 1e-16);
    let order = alpha as i32;
    // t = s² removes the square-root behaviour of t^{α/2} and J_α(c sqrt t) at 0
    let integrand = |s: f64| {
        let t = s * s;
        2.0 * s * t.powf(power) * bessel_jn(order, 2.0 / rho * x.sqrt() * s) * (-t / rho).exp()
    };
    let integral =
        adaptive_gauss_kronrod(integrand, 0.0, t_max.sqrt(), 1e-13, MAX_REFINEMENT_DEPTH)?;
    let n_fact = factorial_big(u64::from(n)).to_f64().unwrap_or(f64::INFINITY);
    Ok((x / rho).exp() * x.powf(-f64::from(alpha) / 2.0) / (n_fact * rho) * integral)
}

/// Smallest `t` past the peak with `e^{-t/ρ} t^k ≤ threshold · peak`.
fn envelope_cutoff(k: f64, rho: f64, threshold: f64) -> f64 {
    let log_env = |t: f64| -t / rho + if k > 0.0 { k * t.ln() } else { 0.0 };
    let peak_t = k * rho;
    let target = if k > 0.0 { log_env(peak_t) } else { 0.0 } + threshold.ln();
    let mut lo = peak_t.max(0.0);
    let mut hi = lo + rho;
    while log_env(hi) > target {
        hi = lo + 2.0 * (hi - lo);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if log_env(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

// 15-point Kronrod extension of the 7-point Gauss rule.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// `(integral, error estimate, integral of |f|)` on `[a, b]`.
fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut abs = WGK[7] * fc.abs();
    for j in 0..7 {
        let dx = half * XGK[j];
        let (lo, hi) = (f(center - dx), f(center + dx));
        kronrod += WGK[j] * (lo + hi);
        abs += WGK[j] * (lo.abs() + hi.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (lo + hi);
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs(), abs * half.abs())
}

/// Globally adaptive G7-K15 quadrature: bisect the worst interval until the
/// summed error estimate falls below `rel_tol · ∫|f|`. Measuring against
/// `∫|f|` rather than `|∫f|` keeps oscillatory integrands with heavy
/// cancellation from refining forever.
pub(crate) fn adaptive_gauss_kronrod<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    max_depth: u32,
) -> Result<f64> {
    struct Piece {
        a: f64,
        b: f64,
        value: f64,
        error: f64,
        abs: f64,
        depth: u32,
    }
    let (value, error, abs) = gauss_kronrod_15(&f, a, b);
    let mut pieces = vec![Piece { a, b, value, error, abs, depth: 0 }];
    loop {
        let total: f64 = pieces.iter().map(|p| p.value).sum();
        let err: f64 = pieces.iter().map(|p| p.error).sum();
        let scale: f64 = pieces.iter().map(|p| p.abs).sum();
        if err <= rel_tol * scale || err < f64::MIN_POSITIVE {
            return Ok(total);
        }
        let (worst, _) = pieces
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, p)| {
                if p.error > best.1 {
                    (i, p.error)
                } else {
                    best
                }
            });
        let piece = pieces.swap_remove(worst);
        if piece.depth >= max_depth {
            return Err(Error::NonConvergence(max_depth));
        }
        let mid = 0.5 * (piece.a + piece.b);
        for (lo, hi) in [(piece.a, mid), (mid, piece.b)] {
            let (value, error, abs) = gauss_kronrod_15(&f, lo, hi);
            pieces.push(Piece { a: lo, b: hi, value, error, abs, depth: piece.depth + 1 });
        }
    }
}
