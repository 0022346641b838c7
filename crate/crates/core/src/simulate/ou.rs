use rayon::prelude::*;

use super::rng::{complex_normal, path_rng};
use super::McEstimate;
use crate::error::{Error, Result};
use crate::hlito_poly::hlito_values;
use crate::{Complex64, OUParams};

/// Initial condition of every path.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Start {
    Point(Complex64),
    /// Drawn from `μ` with the path's own stream before the first step.
    Stationary,
}

impl From<Complex64> for Start {
    fn from(z: Complex64) -> Self {
        Start::Point(z)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Scheme {
    /// Gaussian transition kernel of the process, unbiased for any `dt`.
    #[default]
    Exact,
    /// Euler-Maruyama. Biased; kept for comparison only.
    Euler,
}

/// Batch of complex trajectories on a uniform grid. Each path holds
/// `n_steps + 1` states, the first being the initial condition.
#[derive(Clone, Debug, PartialEq)]
pub struct PathEnsemble {
    pub paths: Vec<Vec<Complex64>>,
    pub dt: f64,
    pub seed: u64,
    pub params: OUParams,
}

impl PathEnsemble {
    pub fn n_paths(&self) -> usize {
        self.paths.len()
    }

    pub fn n_steps(&self) -> usize {
        self.paths.first().map_or(0, |p| p.len() - 1)
    }

    pub fn t_grid(&self) -> Vec<f64> {
        (0..=self.n_steps()).map(|k| k as f64 * self.dt).collect()
    }

    pub fn states_at(&self, step: usize) -> Vec<Complex64> {
        self.paths.iter().map(|p| p[step]).collect()
    }

    /// Ensemble mean of `Z` at a step.
    pub fn mean_at(&self, step: usize) -> McEstimate {
        McEstimate::from_samples(&self.states_at(step))
    }
}

/// Per-step map `Z ↦ a Z + s G` with `G = N₁ + i N₂`.
fn step_coefficients(params: &OUParams, dt: f64, scheme: Scheme) -> (Complex64, f64) {
    match scheme {
        Scheme::Exact => {
            let a = (-params.alpha() * dt).exp();
            let var = params.sigma2() / params.r() * -(-2.0 * params.r() * dt).exp_m1();
            (a, var.sqrt())
        }
        Scheme::Euler => {
            let a = Complex64::new(1.0, 0.0) - params.alpha() * dt;
            (a, (2.0 * params.sigma2() * dt).sqrt())
        }
    }
}

fn validate(dt: f64, n_paths: usize) -> Result<()> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
    }
    if n_paths == 0 {
        return Err(Error::InvalidArgument("at least one path is required".into()));
    }
    Ok(())
}

fn initial_state(start: Start, params: &OUParams, rng: &mut rand_chacha::ChaCha8Rng) -> Complex64 {
    match start {
        Start::Point(z) => z,
        Start::Stationary => complex_normal(rng) * (params.rho() / 2.0).sqrt(),
    }
}

/// Exact-transition ensemble of `dZ = -(r + iΩ) Z dt + sqrt(2σ²) dζ`.
pub fn sample_ou(
    params: &OUParams,
    start: impl Into<Start>,
    dt: f64,
    n_steps: usize,
    n_paths: usize,
    seed: u64,
) -> Result<PathEnsemble> {
    sample_ou_with(params, start, dt, n_steps, n_paths, seed, Scheme::Exact)
}

pub fn sample_ou_with(
    params: &OUParams,
    start: impl Into<Start>,
    dt: f64,
    n_steps: usize,
    n_paths: usize,
    seed: u64,
    scheme: Scheme,
) -> Result<PathEnsemble> {
    validate(dt, n_paths)?;
    let start = start.into();
    let (a, s) = step_coefficients(params, dt, scheme);
    let paths = (0..n_paths as u64)
        .into_par_iter()
        .map(|path| {
            let mut rng = path_rng(seed, path);
            let mut z = initial_state(start, params, &mut rng);
            let mut states = Vec::with_capacity(n_steps + 1);
            states.push(z);
            for _ in 0..n_steps {
                z = a * z + complex_normal(&mut rng) * s;
                states.push(z);
            }
            states
        })
        .collect();
    Ok(PathEnsemble {
        paths,
        dt,
        seed,
        params: *params,
    })
}

/// Monte Carlo estimate of `E[J_{m,n}(Z_t, ρ) | Z_0]` using one exact
/// transition of length `t` per path.
pub fn semigroup_mc(
    m: u32,
    n: u32,
    t: f64,
    start: impl Into<Start>,
    params: &OUParams,
    n_paths: usize,
    seed: u64,
) -> Result<McEstimate> {
    let ensemble = sample_ou(params, start, t, 1, n_paths, seed)?;
    let rho = params.rho();
    let values: Vec<Complex64> = ensemble
        .paths
        .par_iter()
        .map(|p| hlito_values(p[1], rho, m + n).map(|tbl| tbl[m as usize][n as usize]))
        .collect::<Result<_>>()?;
    Ok(McEstimate::from_samples(&values))
}

/// `e^{λ_{m,n} t} J_{m,n}(z0, ρ)`, the exact value [`semigroup_mc`] estimates
/// from a point start.
pub fn semigroup_target(m: u32, n: u32, t: f64, z0: Complex64, params: &OUParams) -> Result<Complex64> {
    let table = hlito_values(z0, params.rho(), m + n)?;
    Ok((params.eigenvalue(m, n) * t).exp() * table[m as usize][n as usize])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn noiseless_limit_is_the_spiral() {
        let p = OUParams::new(1.0, 2.0, 1e-30).unwrap();
        let z0 = c(1.0, -0.5);
        let e = sample_ou(&p, z0, 0.1, 30, 3, 1).unwrap();
        for path in &e.paths {
            for (k, z) in path.iter().enumerate() {
                let exact = (-p.alpha() * (k as f64 * 0.1)).exp() * z0;
                assert!((z - exact).norm() < 1e-12);
            }
        }
        assert_eq!(e.t_grid().len(), 31);
    }

    #[test]
    fn runs_are_reproducible() {
        let p = OUParams::new(1.0, 1.0, 1.0).unwrap();
        let a = sample_ou(&p, Start::Stationary, 0.2, 10, 50, 42).unwrap();
        let b = sample_ou(&p, Start::Stationary, 0.2, 10, 50, 42).unwrap();
        assert_eq!(a, b);
        let c = sample_ou(&p, Start::Stationary, 0.2, 10, 50, 43).unwrap();
        assert_ne!(a, c);
        // a path does not depend on how many others are simulated
        let d = sample_ou(&p, Start::Stationary, 0.2, 10, 7, 42).unwrap();
        assert_eq!(d.paths[..], a.paths[..7]);
    }

    #[test]
    fn exact_step_moments() {
        let p = OUParams::new(1.5, -0.8, 0.7).unwrap();
        let z0 = c(0.9, 0.4);
        let dt = 0.3;
        let e = sample_ou(&p, z0, dt, 1, 100_000, 11).unwrap();
        let mean = e.mean_at(1);
        let expected = (-p.alpha() * dt).exp() * z0;
        assert!(mean.within(expected, 4.0), "{mean:?} vs {expected}");

        let var = p.sigma2() / p.r() * (1.0 - (-2.0 * p.r() * dt).exp());
        let dev: Vec<_> = e.states_at(1).iter().map(|z| z - expected).collect();
        let sq_re: Vec<_> = dev.iter().map(|d| c(d.re * d.re, d.im * d.im)).collect();
        let m2 = McEstimate::from_samples(&sq_re);
        assert!(m2.within(c(var, var), 4.0), "{m2:?} vs {var}");
    }

    #[test]
    fn stationary_second_moment() {
        let p = OUParams::new(1.0, 1.0, 1.0).unwrap();
        let e = sample_ou(&p, Start::Stationary, 0.5, 4, 100_000, 3).unwrap();
        for step in [0, 4] {
            let sq: Vec<_> = e.states_at(step).iter().map(|z| c(z.norm_sqr(), 0.0)).collect();
            assert!(McEstimate::from_samples(&sq).within(c(p.rho(), 0.0), 3.0));
        }
    }

    #[test]
    fn semigroup_examples() {
        let p = OUParams::new(1.0, 1.0, 1.0).unwrap();
        let e = semigroup_mc(0, 0, 1.0, c(0.3, 0.3), &p, 1000, 1).unwrap();
        assert_eq!(e.mean, c(1.0, 0.0));
        assert_eq!(e.stderr(), 0.0);

        let e = semigroup_mc(1, 0, 1.0, c(1.0, 0.0), &p, 100_000, 2).unwrap();
        assert!(e.within(c(-1.0, -1.0).exp(), 3.0));

        let e = semigroup_mc(1, 1, 0.5, Start::Stationary, &p, 100_000, 3).unwrap();
        assert!(e.within(c(0.0, 0.0), 3.0));
    }

    #[test]
    fn euler_is_biased_but_close() {
        let p = OUParams::new(1.0, 0.0, 1.0).unwrap();
        let e = sample_ou_with(&p, c(1.0, 0.0), 0.5, 2, 10, 1, Scheme::Euler).unwrap();
        let free = sample_ou_with(&OUParams::new(1.0, 0.0, 1e-30).unwrap(), c(1.0, 0.0), 0.5, 2, 1, 1, Scheme::Euler).unwrap();
        assert!((free.paths[0][2] - c(0.25, 0.0)).norm() < 1e-14);
        assert_eq!(e.n_steps(), 2);
    }

    #[test]
    fn rejects_bad_arguments() {
        let p = OUParams::new(1.0, 1.0, 1.0).unwrap();
        assert!(sample_ou(&p, c(0.0, 0.0), 0.0, 1, 1, 0).is_err());
        assert!(sample_ou(&p, c(0.0, 0.0), 0.1, 1, 0, 0).is_err());
    }
}
