//! Coupled diffusion on the circle lattice `Z/nZ`:
//! `dX = (C - rI) X dt + sqrt(2σ²) dW` with the circulant coupling
//! `(C X)_i = -(a+b) X_i + a X_{i+1} + b X_{i-1}`.
//!
//! `C` is normal. The real and imaginary parts of the Fourier vectors
//! `φ_k = n^{-1/2} (1, ω^k, ω^{2k}, …)` split `R^n` into invariant planes on
//! which `C - rI` acts as `[[α_k, β_k], [-β_k, α_k]]` with
//! `α_k = -r + (a+b)(cos(2πk/n) - 1)` and `β_k = (a-b) sin(2πk/n)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use super::rng::{normal, path_rng};
use crate::error::{Error, Result};
use crate::spectral::spectrum_mismatch;
use crate::Complex64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticeModel {
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub r: f64,
    /// May be zero, giving the deterministic flow.
    pub sigma2: f64,
}

impl LatticeModel {
    pub fn new(n: usize, a: f64, b: f64, r: f64, sigma2: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument(format!("lattice needs n >= 3, got {n}")));
        }
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidArgument("couplings must be finite".into()));
        }
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidArgument(format!("r must be positive, got {r}")));
        }
        if !(sigma2 >= 0.0 && sigma2.is_finite()) {
            return Err(Error::InvalidArgument(format!("sigma2 must be nonnegative, got {sigma2}")));
        }
        Ok(Self { n, a, b, r, sigma2 })
    }

    pub fn coupling(&self) -> DMatrix<f64> {
        let n = self.n;
        let mut c = DMatrix::zeros(n, n);
        for i in 0..n {
            c[(i, i)] = -(self.a + self.b);
            c[(i, (i + 1) % n)] += self.a;
            c[(i, (i + n - 1) % n)] += self.b;
        }
        c
    }

    /// `C - rI`.
    pub fn drift(&self) -> DMatrix<f64> {
        let mut d = self.coupling();
        for i in 0..self.n {
            d[(i, i)] -= self.r;
        }
        d
    }

    /// `‖C Cᵀ - Cᵀ C‖_∞` (maximum absolute row sum).
    pub fn normality_residual(&self) -> f64 {
        let c = self.coupling();
        let comm = &c * c.transpose() - c.transpose() * &c;
        comm.row_iter().map(|row| row.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// Eigenvalues of `C - rI` from a dense nonsymmetric solve.
    pub fn dense_eigenvalues(&self) -> Vec<Complex64> {
        self.drift().complex_eigenvalues().iter().copied().collect()
    }
}

/// One invariant subspace. `dim` is 1 for `k = 0` and for `k = n/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticeBlock {
    pub k: usize,
    pub dim: usize,
    pub alpha: f64,
    pub beta: f64,
}

impl LatticeBlock {
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        if self.dim == 1 {
            vec![Complex64::new(self.alpha, 0.0)]
        } else {
            vec![Complex64::new(self.alpha, self.beta), Complex64::new(self.alpha, -self.beta)]
        }
    }

    /// Per-coordinate variance of the exact block noise over `dt`:
    /// `σ² (1 - e^{2α dt}) / (-α)`.
    pub fn noise_variance(&self, sigma2: f64, dt: f64) -> f64 {
        sigma2 * -(2.0 * self.alpha * dt).exp_m1() / -self.alpha
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeDecomposition {
    pub blocks: Vec<LatticeBlock>,
    /// Orthogonal `n × n` matrix; its columns follow the block order.
    pub basis: DMatrix<f64>,
}

impl LatticeDecomposition {
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.blocks.iter().flat_map(|b| b.eigenvalues()).collect()
    }

    /// `Qᵀ (C - rI) Q` assembled from the closed-form block parameters.
    pub fn block_matrix(&self) -> DMatrix<f64> {
        let n = self.basis.nrows();
        let mut out = DMatrix::zeros(n, n);
        let mut col = 0;
        for b in &self.blocks {
            out[(col, col)] = b.alpha;
            if b.dim == 2 {
                out[(col + 1, col + 1)] = b.alpha;
                out[(col, col + 1)] = b.beta;
                out[(col + 1, col)] = -b.beta;
            }
            col += b.dim;
        }
        out
    }

    /// `‖QᵀQ - I‖_∞` entrywise.
    pub fn orthogonality_residual(&self) -> f64 {
        let n = self.basis.nrows();
        let gram = self.basis.transpose() * &self.basis;
        (gram - DMatrix::<f64>::identity(n, n)).amax()
    }
}

pub fn lattice_decompose(model: &LatticeModel) -> LatticeDecomposition {
    let n = model.n;
    let nf = n as f64;
    let mut blocks = Vec::new();
    let mut columns: Vec<DVector<f64>> = Vec::with_capacity(n);
    for k in 0..=n / 2 {
        let theta = 2.0 * PI * k as f64 / nf;
        let alpha = -model.r + (model.a + model.b) * (theta.cos() - 1.0);
        let pair = k != 0 && 2 * k != n;
        let beta = if pair { (model.a - model.b) * theta.sin() } else { 0.0 };
        let scale = if pair { (2.0 / nf).sqrt() } else { nf.sqrt().recip() };
        columns.push(DVector::from_fn(n, |j, _| scale * (theta * j as f64).cos()));
        if pair {
            columns.push(DVector::from_fn(n, |j, _| scale * (theta * j as f64).sin()));
        }
        blocks.push(LatticeBlock {
            k,
            dim: if pair { 2 } else { 1 },
            alpha,
            beta,
        });
    }
    LatticeDecomposition {
        blocks,
        basis: DMatrix::from_columns(&columns),
    }
}

/// Largest distance between the block eigenvalues and a dense eigensolve.
pub fn block_spectrum_mismatch(model: &LatticeModel) -> f64 {
    let blocks = lattice_decompose(model).eigenvalues();
    spectrum_mismatch(&blocks, &model.dense_eigenvalues()).unwrap_or(f64::INFINITY)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeRun {
    /// States `X(k dt)`, `k = 0..=steps`, from the dense exact scheme.
    pub direct: Vec<Vec<f64>>,
    /// The same states rebuilt from independently stepped block coordinates.
    pub reassembled: Vec<Vec<f64>>,
    /// Block coordinates `QᵀX` of the reassembled run.
    pub block_coords: Vec<Vec<f64>>,
}

impl LatticeRun {
    pub fn max_discrepancy(&self) -> f64 {
        self.direct
            .iter()
            .zip(&self.reassembled)
            .flat_map(|(d, r)| d.iter().zip(r).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }
}

/// Symmetric square root of a positive semidefinite matrix.
fn psd_sqrt(m: DMatrix<f64>) -> DMatrix<f64> {
    let eig = m.symmetric_eigen();
    let roots = eig.eigenvalues.map(|v| v.max(0.0).sqrt());
    &eig.eigenvectors * DMatrix::from_diagonal(&roots) * eig.eigenvectors.transpose()
}

/// Exact transition `(Φ, V)` of the dense system over `dt`, with
/// `Φ = e^{(C-rI)dt}` and the noise covariance `V` from Van Loan's block
/// exponential.
fn dense_transition(model: &LatticeModel, dt: f64) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = model.n;
    let a = model.drift();
    let mut van_loan = DMatrix::zeros(2 * n, 2 * n);
    van_loan.view_mut((0, 0), (n, n)).copy_from(&(-&a * dt));
    van_loan
        .view_mut((0, n), (n, n))
        .copy_from(&(DMatrix::<f64>::identity(n, n) * (2.0 * model.sigma2 * dt)));
    van_loan.view_mut((n, n), (n, n)).copy_from(&(a.transpose() * dt));
    let e = van_loan.exp();
    let phi_t = e.view((n, n), (n, n)).clone_owned();
    let phi = phi_t.transpose();
    let cov = &phi * e.view((0, n), (n, n));
    let cov = (&cov + cov.transpose()) * 0.5;
    (phi, cov)
}

/// Runs the dense scheme and the blockwise scheme on the same Gaussian draws
/// `η_k ~ N(0, I_n)`: the dense step adds `V^{1/2} η_k`, the block step adds
/// `sqrt(v_j) (Qᵀ η_k)_j`. The two agree because `V = Q diag(v) Qᵀ`.
pub fn lattice_simulate_and_reassemble(
    model: &LatticeModel,
    x0: &[f64],
    dt: f64,
    steps: usize,
    seed: u64,
) -> Result<LatticeRun> {
    let n = model.n;
    if x0.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: x0.len(),
        });
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
    }
    let decomposition = lattice_decompose(model);
    let q = &decomposition.basis;
    let (phi, cov) = dense_transition(model, dt);
    let noise = psd_sqrt(cov);

    let mut block_steps = Vec::with_capacity(n);
    for b in &decomposition.blocks {
        let decay = (b.alpha * dt).exp();
        let sd = b.noise_variance(model.sigma2, dt).sqrt();
        let (s, c) = (b.beta * dt).sin_cos();
        block_steps.push((b.dim, decay * c, decay * s, sd));
    }

    let mut rng = path_rng(seed, 0);
    let mut x = DVector::from_column_slice(x0);
    let mut y = q.transpose() * &x;
    let mut direct = vec![x.as_slice().to_vec()];
    let mut reassembled = vec![(q * &y).as_slice().to_vec()];
    let mut block_coords = vec![y.as_slice().to_vec()];
    for _ in 0..steps {
        let eta = DVector::from_fn(n, |_, _| normal(&mut rng));
        x = &phi * &x + &noise * &eta;

        let eta_blocks = q.transpose() * &eta;
        let mut next = DVector::zeros(n);
        let mut col = 0;
        for &(dim, ec, es, sd) in &block_steps {
            if dim == 1 {
                next[col] = ec * y[col] + sd * eta_blocks[col];
            } else {
                // e^{D dt} = e^{α dt} [[cos, sin], [-sin, cos]](β dt)
                next[col] = ec * y[col] + es * y[col + 1] + sd * eta_blocks[col];
                next[col + 1] = -es * y[col] + ec * y[col + 1] + sd * eta_blocks[col + 1];
            }
            col += dim;
        }
        y = next;
        direct.push(x.as_slice().to_vec());
        reassembled.push((q * &y).as_slice().to_vec());
        block_coords.push(y.as_slice().to_vec());
    }
    Ok(LatticeRun {
        direct,
        reassembled,
        block_coords,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_examples() {
        let m = LatticeModel::new(6, 2.0, 1.0, 1.0, 0.5).unwrap();
        let d = lattice_decompose(&m);
        assert_eq!(d.blocks.len(), 4);
        assert_eq!(d.blocks[0].dim, 1);
        assert_eq!(d.blocks[0].alpha, -1.0);
        assert_eq!(d.blocks[0].beta, 0.0);
        assert!((d.blocks[1].alpha + 2.5).abs() < 1e-14);
        assert!((d.blocks[1].beta - 3f64.sqrt() / 2.0).abs() < 1e-14);
        assert_eq!(d.blocks[3].dim, 1);

        let sym = LatticeModel::new(7, 1.3, 1.3, 0.4, 1.0).unwrap();
        assert!(lattice_decompose(&sym).blocks.iter().all(|b| b.beta == 0.0));
        assert!(LatticeModel::new(2, 1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn basis_is_orthogonal_and_block_diagonalizes() {
        for (n, a, b) in [(3, 0.7, 0.2), (6, 2.0, 1.0), (9, -0.5, 1.5), (10, 1.0, 1.0)] {
            let m = LatticeModel::new(n, a, b, 0.8, 1.0).unwrap();
            let d = lattice_decompose(&m);
            assert!(d.orthogonality_residual() < 1e-13);
            let conj = d.basis.transpose() * m.drift() * &d.basis;
            assert!((conj - d.block_matrix()).amax() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn normality_and_spectrum() {
        let mut s = 1u64;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..20 {
            let n = 3 + (next() * 10.0) as usize;
            let m = LatticeModel::new(n, 4.0 * next() - 2.0, 4.0 * next() - 2.0, 0.5, 1.0).unwrap();
            assert!(m.normality_residual() <= 1e-12);
            assert!(block_spectrum_mismatch(&m) <= 1e-10, "{m:?}");
        }
    }

    #[test]
    fn deterministic_flow() {
        let m = LatticeModel::new(6, 1.5, 0.3, 0.7, 0.0).unwrap();
        let x0 = [1.0, -0.5, 0.25, 2.0, 0.0, -1.0];
        let dt = 0.05;
        let run = lattice_simulate_and_reassemble(&m, &x0, dt, 100, 9).unwrap();
        let x0v = DVector::from_column_slice(&x0);
        for (k, state) in run.direct.iter().enumerate() {
            let flow = (m.drift() * (k as f64 * dt)).exp() * &x0v;
            for i in 0..6 {
                assert!((state[i] - flow[i]).abs() < 1e-10);
                assert!((run.reassembled[k][i] - flow[i]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn shared_draws_reassemble() {
        let m = LatticeModel::new(6, 1.7, 0.4, 0.9, 0.8).unwrap();
        let x0 = [0.3, -1.2, 0.8, 0.0, 1.1, -0.4];
        let run = lattice_simulate_and_reassemble(&m, &x0, 0.1, 100, 21).unwrap();
        assert_eq!(run.direct.len(), 101);
        assert!(run.max_discrepancy() <= 1e-10, "{}", run.max_discrepancy());
        let again = lattice_simulate_and_reassemble(&m, &x0, 0.1, 100, 21).unwrap();
        assert_eq!(run, again);
    }

    #[test]
    fn symmetric_blocks_decouple() {
        let m = LatticeModel::new(6, 1.0, 1.0, 1.0, 1.0).unwrap();
        let run = lattice_simulate_and_reassemble(&m, &[0.0; 6], 0.5, 20_000, 4).unwrap();
        // block k = 1 occupies coordinates 1 and 2
        let (u, v): (Vec<f64>, Vec<f64>) =
            run.block_coords.iter().skip(100).map(|y| (y[1], y[2])).unzip();
        let mean = |s: &[f64]| s.iter().sum::<f64>() / s.len() as f64;
        let (mu, mv) = (mean(&u), mean(&v));
        let cov: f64 = u.iter().zip(&v).map(|(a, b)| (a - mu) * (b - mv)).sum::<f64>();
        let su: f64 = u.iter().map(|a| (a - mu).powi(2)).sum::<f64>();
        let sv: f64 = v.iter().map(|b| (b - mv).powi(2)).sum::<f64>();
        let corr = cov / (su * sv).sqrt();
        assert!(corr.abs() < 0.05, "{corr}");
    }

    #[test]
    fn rejects_bad_initial_state() {
        let m = LatticeModel::new(4, 1.0, 0.0, 1.0, 1.0).unwrap();
        assert!(matches!(
            lattice_simulate_and_reassemble(&m, &[0.0; 3], 0.1, 1, 0),
            Err(Error::LengthMismatch { .. })
        ));
    }
}
