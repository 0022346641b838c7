//! The eigenproblem restricted to a level `l = m + n`.
//!
//! On polynomials of degree `l` written as `Σ_k β_k H_k(x, ρ/2) H_{l-k}(y, ρ/2)`,
//! the rotational part of the generator acts through the tridiagonal matrix
//! `M(λ)` below. Its null vectors at `λ = -(m-n)i` recover `J_{m,n}`.
//!
//! Convention: `null_vector(l, m)` seeds the eigenvalue `λ = -(m-n)i` and
//! expands to a multiple of `J_{m,n}`, not `J_{n,m}`. This is checked
//! numerically against the generator in the tests.

use nalgebra::{linalg::Schur, DMatrix};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, hlito_coefficient_f64};
use crate::error::{check_rho, Error, Result};
use crate::{Complex64, ComplexPoly, OUParams};

/// Largest level accepted by [`det_m`].
pub const MAX_DET_LEVEL: u32 = 60;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EigenIndex {
    pub m: u32,
    pub n: u32,
}

impl EigenIndex {
    pub fn new(m: u32, n: u32) -> Self {
        Self { m, n }
    }

    pub fn level(self) -> u32 {
        self.m + self.n
    }

    pub fn twist(self) -> i64 {
        i64::from(self.m) - i64::from(self.n)
    }

    pub fn eigenvalue(self, params: &OUParams) -> Complex64 {
        params.eigenvalue(self.m, self.n)
    }
}

/// All `(m, n)` with `m + n ≤ max_level` and their eigenvalues, ordered by
/// level and then by `m - n`.
pub fn spectrum(params: &OUParams, max_level: u32) -> Vec<(EigenIndex, Complex64)> {
    let mut out: Vec<_> = (0..=max_level)
        .flat_map(|m| (0..=(max_level - m)).map(move |n| EigenIndex::new(m, n)))
        .map(|idx| (idx, idx.eigenvalue(params)))
        .collect();
    out.sort_by_key(|(idx, _)| (idx.level(), idx.twist()));
    out
}

/// Eigenvalues of the generator acting on real polynomials `x^a y^b` of total
/// degree `≤ max_level`, from a dense nonsymmetric eigensolve. Independent of
/// every `J_{m,n}` identity; used as an oracle for [`spectrum`].
pub fn dense_generator_matrix(params: &OUParams, max_level: u32) -> DMatrix<f64> {
    let basis: Vec<(u32, u32)> = (0..=max_level)
        .flat_map(|d| (0..=d).map(move |a| (a, d - a)))
        .collect();
    let pos = |a: u32, b: u32| basis.iter().position(|&k| k == (a, b));
    let dim = basis.len();
    let (r, omega, s2) = (params.r(), params.omega(), params.sigma2());
    let mut mat = DMatrix::<f64>::zeros(dim, dim);
    // A = σ²Δ + (-r x + Ω y)∂_x + (-Ω x - r y)∂_y, column j is A applied to basis j
    for (j, &(a, b)) in basis.iter().enumerate() {
        let (af, bf) = (f64::from(a), f64::from(b));
        mat[(j, j)] -= r * (af + bf);
        if a >= 2 {
            mat[(pos(a - 2, b).unwrap(), j)] += s2 * af * (af - 1.0);
        }
        if b >= 2 {
            mat[(pos(a, b - 2).unwrap(), j)] += s2 * bf * (bf - 1.0);
        }
        if a >= 1 {
            mat[(pos(a - 1, b + 1).unwrap(), j)] += omega * af;
        }
        if b >= 1 {
            mat[(pos(a + 1, b - 1).unwrap(), j)] -= omega * bf;
        }
    }
    mat
}

const SCHUR_EPS: f64 = 1e-14;
const SCHUR_MAX_ITER: usize = 10_000;

/// Eigenvalues of [`dense_generator_matrix`] from a real Schur form.
///
/// The matrix is exactly block triangular with integer-like entries, a shape on
/// which shifted QR can stall. When it does, the solve is repeated on
/// `QᵀMQ` for a fixed dense orthogonal `Q`, which has the same spectrum.
pub fn dense_generator_spectrum(params: &OUParams, max_level: u32) -> Result<Vec<Complex64>> {
    let mat = dense_generator_matrix(params, max_level);
    let dim = mat.nrows();
    let Some(schur) = Schur::try_new(mat.clone(), SCHUR_EPS, SCHUR_MAX_ITER).or_else(|| {
        let seed = DMatrix::from_fn(dim, dim, |i, j| ((i * dim + j + 1) as f64).sin());
        let q = seed.qr().q();
        Schur::try_new(q.transpose() * mat * q, SCHUR_EPS, SCHUR_MAX_ITER)
    }) else {
        return Err(Error::InvalidArgument(format!(
            "dense eigensolve did not converge at level {max_level}"
        )));
    };
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

/// Largest distance from each expected eigenvalue to an unused computed one,
/// pairing greedily by closeness. `None` when the counts differ.
pub fn spectrum_mismatch(expected: &[Complex64], computed: &[Complex64]) -> Option<f64> {
    if expected.len() != computed.len() {
        return None;
    }
    let mut used = vec![false; computed.len()];
    let mut worst: f64 = 0.0;
    for e in expected {
        let (k, d) = computed
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, c)| (k, (c - e).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        used[k] = true;
        worst = worst.max(d);
    }
    Some(worst)
}

/// `M(λ)` of size `(l+1) × (l+1)`: subdiagonal `-(l-k+1)` on row `k`,
/// diagonal `-λ`, superdiagonal `k+1` on row `k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TridiagonalSystem {
    pub l: u32,
    pub lambda: Complex64,
}

impl TridiagonalSystem {
    pub fn new(l: u32, lambda: Complex64) -> Self {
        Self { l, lambda }
    }

    pub fn sub(&self, k: u32) -> f64 {
        -f64::from(self.l - k + 1)
    }

    pub fn sup(&self, k: u32) -> f64 {
        f64::from(k + 1)
    }

    pub fn matrix(&self) -> DMatrix<Complex64> {
        let n = self.l as usize + 1;
        DMatrix::from_fn(n, n, |i, j| {
            let k = i as u32;
            if i == j {
                -self.lambda
            } else if j + 1 == i {
                Complex64::new(self.sub(k), 0.0)
            } else if i + 1 == j {
                Complex64::new(self.sup(k), 0.0)
            } else {
                ZERO
            }
        })
    }

    pub fn apply(&self, beta: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.l as usize + 1;
        if beta.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: beta.len(),
            });
        }
        Ok((0..n)
            .map(|i| {
                let k = i as u32;
                let mut v = -self.lambda * beta[i];
                if i > 0 {
                    v += beta[i - 1] * self.sub(k);
                }
                if i + 1 < n {
                    v += beta[i + 1] * self.sup(k);
                }
                v
            })
            .collect())
    }

    /// Determinant by the continuant `D_k = -λ D_{k-1} - sub_k sup_{k-1} D_{k-2}`.
    pub fn determinant(&self) -> Complex64 {
        let mut prev = ONE;
        let mut cur = -self.lambda;
        for k in 1..=self.l {
            let next = -self.lambda * cur - prev * (self.sub(k) * self.sup(k - 1));
            prev = cur;
            cur = next;
        }
        cur
    }

    /// `(-1)^{l+1} Π_{m=0}^{l} (λ + (2m - l) i)`.
    pub fn product_determinant(&self) -> Complex64 {
        let sign = if self.l.is_multiple_of(2) { -1.0 } else { 1.0 };
        (0..=self.l).fold(Complex64::new(sign, 0.0), |acc, m| {
            acc * (self.lambda + I * (2.0 * f64::from(m) - f64::from(self.l)))
        })
    }
}

/// Both determinant routes for `M(λ)`: `(continuant, product form)`.
pub fn det_m(l: u32, lambda: Complex64) -> Result<(Complex64, Complex64)> {
    if l > MAX_DET_LEVEL {
        return Err(Error::InvalidArgument(format!(
            "level {l} exceeds the supported maximum {MAX_DET_LEVEL}"
        )));
    }
    let sys = TridiagonalSystem::new(l, lambda);
    Ok((sys.determinant(), sys.product_determinant()))
}

/// Null vector of `M(λ)` at `λ = -(m-n)i`, `n = l - m`, seeded with `β_0 = 1`:
/// `β_{k+1} = [λ β_k + (l-k+1) β_{k-1}] / (k+1)`.
pub fn null_vector(l: u32, m: u32) -> Result<Vec<Complex64>> {
    if m > l {
        return Err(Error::InvalidArgument(format!("m = {m} exceeds level {l}")));
    }
    let lambda = -I * (2.0 * f64::from(m) - f64::from(l));
    let mut beta = Vec::with_capacity(l as usize + 1);
    beta.push(ONE);
    let mut prev = ZERO;
    for k in 0..l {
        let cur = beta[k as usize];
        let next = (lambda * cur + prev * f64::from(l - k + 1)) / f64::from(k + 1);
        prev = cur;
        beta.push(next);
    }
    Ok(beta)
}

/// `‖M(λ)β‖_∞ / ‖β‖_∞` for the null vector of `(l, m)`.
pub fn null_vector_residual(l: u32, m: u32) -> Result<f64> {
    let beta = null_vector(l, m)?;
    let lambda = -I * (2.0 * f64::from(m) - f64::from(l));
    let image = TridiagonalSystem::new(l, lambda).apply(&beta)?;
    let sup = |v: &[Complex64]| v.iter().map(|c| c.norm()).fold(0.0, f64::max);
    Ok(sup(&image) / sup(&beta))
}

/// `H_0, …, H_l` of scale `ρ/2` as polynomials in `z, z̄`, for the variable
/// `x = (z + z̄)/2` or `y = (z - z̄)/(2i)`.
fn hermite_polys(l: u32, var: &ComplexPoly, rho: f64) -> Result<Vec<ComplexPoly>> {
    let half = rho / 2.0;
    let mut out = vec![ComplexPoly::one()];
    if l == 0 {
        return Ok(out);
    }
    out.push(var.clone());
    for k in 1..l {
        let raised = var.try_mul(&out[k as usize])?;
        let lowered = out[k as usize - 1].scale(Complex64::new(f64::from(k) * half, 0.0));
        out.push(&raised - &lowered);
    }
    Ok(out)
}

/// `Σ_k β_k H_k(x, ρ/2) H_{l-k}(y, ρ/2)` expanded in `z, z̄`.
pub fn beta_to_poly(beta: &[Complex64], l: u32, rho: f64) -> Result<ComplexPoly> {
    check_rho(rho)?;
    let n = l as usize + 1;
    if beta.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: beta.len(),
        });
    }
    let half = Complex64::new(0.5, 0.0);
    let x = ComplexPoly::from_terms([(1, 0, half), (0, 1, half)])?;
    let y = ComplexPoly::from_terms([(1, 0, -I * 0.5), (0, 1, I * 0.5)])?;
    let hx = hermite_polys(l, &x, rho)?;
    let hy = hermite_polys(l, &y, rho)?;
    let mut out = ComplexPoly::zero();
    for (k, &b) in beta.iter().enumerate() {
        if b == ZERO {
            continue;
        }
        let term = hx[k].try_mul(&hy[n - 1 - k])?.scale(b);
        out = &out + &term;
    }
    Ok(out)
}

/// Coefficients of `J_{m,l-m}` in the basis `H_k(x, ρ/2) H_{l-k}(y, ρ/2)`,
/// `k = 0..=l`: `i^{l-k} Σ_{u+v=k} C(m,u) C(l-m,v) (-1)^{l-m-v}`.
pub fn hermite_basis_of_j(m: u32, l: u32) -> Result<Vec<Complex64>> {
    if m > l {
        return Err(Error::InvalidArgument(format!("m = {m} exceeds level {l}")));
    }
    let n = l - m;
    let pow_i = [ONE, I, -ONE, -I];
    (0..=l)
        .map(|k| {
            let mut sum: i128 = 0;
            for u in k.saturating_sub(n)..=k.min(m) {
                let v = k - u;
                let a = binomial(u64::from(m), u64::from(u))
                    .zip(binomial(u64::from(n), u64::from(v)))
                    .and_then(|(a, b)| a.checked_mul(b))
                    .and_then(|p| i128::try_from(p).ok())
                    .ok_or(Error::CoefficientOverflow { m, n })?;
                sum += if (n - v).is_multiple_of(2) { a } else { -a };
            }
            Ok(pow_i[((l - k) % 4) as usize] * sum as f64)
        })
        .collect()
}

/// `z^m z̄^n = Σ_k C(m,k) C(n,k) k! ρ^k J_{m-k,n-k}`.
pub fn monomial_in_j_basis(m: u32, n: u32, rho: f64) -> Result<Vec<(EigenIndex, Complex64)>> {
    check_rho(rho)?;
    (0..=m.min(n))
        .map(|k| {
            let int = hlito_coefficient_f64(u64::from(m), u64::from(n), u64::from(k));
            Ok((EigenIndex::new(m - k, n - k), Complex64::new(int * rho.powi(k as i32), 0.0)))
        })
        .collect()
}
