//! Gauss-Hermite quadrature against the stationary law `μ` and the
//! `J_{m,n}` expansion of functions in `L²(μ)`.
//!
//! `μ` has density `(πρ)^{-1} exp(-|x|²/ρ)`: two independent centred normals
//! of variance `ρ/2`. A tensor grid of `n` nodes per axis integrates every
//! polynomial of total degree `≤ 2n - 1` exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use crate::combinatorics::factorial_f64;
use crate::error::{check_rho, Error, Result};
use crate::hlito_poly::hlito_values;
use crate::spectral::EigenIndex;
use crate::{Complex64, ComplexPoly};

/// Nodes per axis used when no size is requested.
pub const DEFAULT_NODES: usize = 80;

/// Largest supported rule; the Christoffel sums stay finite below this.
pub const MAX_NODES: usize = 256;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Compensated (Neumaier) accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub(crate) fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct ComplexNeumaier {
    re: Neumaier,
    im: Neumaier,
}

impl ComplexNeumaier {
    pub(crate) fn add(&mut self, v: Complex64) {
        self.re.add(v.re);
        self.im.add(v.im);
    }

    pub(crate) fn value(self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// One-dimensional Gauss rule for a centred normal law.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    /// Rule for the standard normal law; weights sum to one.
    ///
    /// Nodes come from the Golub-Welsch eigenproblem and are then polished
    /// by Newton steps on the orthonormal recurrence. Weights use the
    /// Christoffel form `1 / Σ_k p_k(x)²`, which keeps the tiny outer
    /// weights accurate to relative precision.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_NODES {
            return Err(Error::InvalidArgument(format!(
                "quadrature size must be in 1..={MAX_NODES}, got {n}"
            )));
        }
        let jacobi = DMatrix::from_fn(n, n, |i, j| {
            if i + 1 == j || j + 1 == i {
                (i.max(j) as f64).sqrt()
            } else {
                0.0
            }
        });
        let mut nodes: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
        nodes.sort_by(f64::total_cmp);

        for x in nodes.iter_mut() {
            for _ in 0..3 {
                let (p_n, p_nm1, _) = orthonormal_hermite(n, *x);
                let step = p_n / ((n as f64).sqrt() * p_nm1);
                if !step.is_finite() {
                    break;
                }
                *x -= step;
            }
        }
        for i in 0..n / 2 {
            let half = 0.5 * (nodes[n - 1 - i] - nodes[i]);
            nodes[i] = -half;
            nodes[n - 1 - i] = half;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }

        let mut weights: Vec<f64> = nodes
            .iter()
            .map(|&x| 1.0 / orthonormal_hermite(n, x).2)
            .collect();
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        Ok(Self { nodes, weights })
    }

    /// Rule for a centred normal law of the given variance.
    pub fn gaussian(n: usize, variance: f64) -> Result<Self> {
        check_rho(variance)?;
        let mut rule = Self::new(n)?;
        let scale = variance.sqrt();
        rule.nodes.iter_mut().for_each(|x| *x *= scale);
        Ok(rule)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let mut acc = Neumaier::default();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc.add(w * f(x));
        }
        acc.value()
    }
}

/// `(p_n(x), p_{n-1}(x), Σ_{k<n} p_k(x)²)` for the orthonormal probabilists'
/// Hermite polynomials `p_k = He_k / sqrt(k!)`.
fn orthonormal_hermite(n: usize, x: f64) -> (f64, f64, f64) {
    let mut prev = 0.0;
    let mut cur = 1.0;
    let mut sum_sq = 0.0;
    for k in 0..n {
        sum_sq += cur * cur;
        let next = (x * cur - (k as f64).sqrt() * prev) / ((k + 1) as f64).sqrt();
        prev = cur;
        cur = next;
    }
    (cur, prev, sum_sq)
}

/// Tensor Gauss-Hermite grid realizing `μ` for a given `ρ`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureGrid {
    nodes_1d: Vec<f64>,
    weights_1d: Vec<f64>,
    rho: f64,
}

/// Grid with `nodes` points per axis for the measure with scale `ρ`.
pub fn build_grid(nodes: usize, rho: f64) -> Result<QuadratureGrid> {
    QuadratureGrid::new(nodes, rho)
}

impl QuadratureGrid {
    pub fn new(nodes: usize, rho: f64) -> Result<Self> {
        check_rho(rho)?;
        // x = s sqrt(ρ) maps exp(-s²)/sqrt(π) onto the N(0, ρ/2) marginal
        let rule = GaussHermite::gaussian(nodes, rho / 2.0)?;
        Ok(Self {
            nodes_1d: rule.nodes,
            weights_1d: rule.weights,
            rho,
        })
    }

    pub fn nodes_1d(&self) -> &[f64] {
        &self.nodes_1d
    }

    pub fn weights_1d(&self) -> &[f64] {
        &self.weights_1d
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn size(&self) -> usize {
        self.nodes_1d.len()
    }

    /// Highest total degree integrated exactly.
    pub fn exact_degree(&self) -> usize {
        2 * self.size() - 1
    }

    pub fn check_exact(&self, required: u32) -> Result<()> {
        let required = required as usize;
        if required > self.exact_degree() {
            Err(Error::QuadratureNotExact {
                nodes: self.size(),
                exact: self.exact_degree(),
                required,
            })
        } else {
            Ok(())
        }
    }

    /// `∫ f dμ`. Rows are summed in parallel, each with a compensated
    /// accumulator, and combined in a fixed order, so the result does not
    /// depend on the thread count.
    pub fn integrate<F>(&self, f: F) -> Complex64
    where
        F: Fn([f64; 2]) -> Complex64 + Sync,
    {
        let rows: Vec<Complex64> = self
            .nodes_1d
            .par_iter()
            .zip(self.weights_1d.par_iter())
            .map(|(&x, &wx)| {
                let mut acc = ComplexNeumaier::default();
                for (&y, &wy) in self.nodes_1d.iter().zip(&self.weights_1d) {
                    acc.add(f([x, y]) * (wx * wy));
                }
                acc.value()
            })
            .collect();
        let mut acc = ComplexNeumaier::default();
        rows.into_iter().for_each(|v| acc.add(v));
        acc.value()
    }

    /// All grid points with their product weights, row-major.
    pub fn points(&self) -> impl Iterator<Item = ([f64; 2], f64)> + '_ {
        self.nodes_1d
            .iter()
            .zip(&self.weights_1d)
            .flat_map(move |(&x, &wx)| {
                self.nodes_1d
                    .iter()
                    .zip(&self.weights_1d)
                    .map(move |(&y, &wy)| ([x, y], wx * wy))
            })
    }
}

/// Anything that can be sampled at a point of the plane. Polynomials report
/// their degree so that quadrature exactness can be checked.
pub trait SampledFn: Sync {
    fn value(&self, x: [f64; 2]) -> Complex64;

    fn degree(&self) -> Option<u32> {
        None
    }
}

impl<F> SampledFn for F
where
    F: Fn([f64; 2]) -> Complex64 + Sync,
{
    fn value(&self, x: [f64; 2]) -> Complex64 {
        self(x)
    }
}

impl SampledFn for ComplexPoly {
    fn value(&self, x: [f64; 2]) -> Complex64 {
        self.eval(Complex64::new(x[0], x[1]))
    }

    fn degree(&self) -> Option<u32> {
        Some(ComplexPoly::degree(self).unwrap_or(0))
    }
}

/// `⟨f, g⟩ = ∫ f ḡ dμ`.
pub fn inner_product<F, G>(f: &F, g: &G, grid: &QuadratureGrid) -> Result<Complex64>
where
    F: SampledFn + ?Sized,
    G: SampledFn + ?Sized,
{
    if let (Some(df), Some(dg)) = (f.degree(), g.degree()) {
        grid.check_exact(df + dg)?;
    }
    Ok(grid.integrate(|x| f.value(x) * g.value(x).conj()))
}

/// `a_{m,n} = ⟨f, J_{m,n}⟩` for every `m + n ≤ max_level`.
#[derive(Clone, Debug, PartialEq)]
pub struct Expansion {
    coeffs: BTreeMap<EigenIndex, Complex64>,
    rho: f64,
    max_level: u32,
}

impl Expansion {
    pub fn coeffs(&self) -> &BTreeMap<EigenIndex, Complex64> {
        &self.coeffs
    }

    pub fn coeff(&self, m: u32, n: u32) -> Complex64 {
        self.coeffs.get(&EigenIndex::new(m, n)).copied().unwrap_or(ZERO)
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn max_level(&self) -> u32 {
        self.max_level
    }

    /// `Σ a_{m,n} J_{m,n}(z) / (m! n! ρ^{m+n})`.
    pub fn reconstruct(&self, z: Complex64) -> Complex64 {
        let table = hlito_values(z, self.rho, self.max_level)
            .expect("rho was validated when the expansion was built");
        let mut acc = ComplexNeumaier::default();
        for (idx, &a) in &self.coeffs {
            let j = table[idx.m as usize][idx.n as usize];
            acc.add(a * j / norm_sq(idx.m, idx.n, self.rho));
        }
        acc.value()
    }

    /// `{"m,n": [re, im], ...}` in index order.
    pub fn to_json(&self) -> String {
        let map: serde_json::Map<String, serde_json::Value> = self
            .coeffs
            .iter()
            .map(|(idx, c)| (format!("{},{}", idx.m, idx.n), serde_json::json!([c.re, c.im])))
            .collect();
        serde_json::Value::Object(map).to_string()
    }
}

/// `‖J_{m,n}‖² = m! n! ρ^{m+n}`.
pub fn norm_sq(m: u32, n: u32, rho: f64) -> f64 {
    factorial_f64(u64::from(m)) * factorial_f64(u64::from(n)) * rho.powi((m + n) as i32)
}

/// Coefficients of `f` against every `J_{m,n}` with `m + n ≤ max_level`.
pub fn expand<F>(f: &F, max_level: u32, grid: &QuadratureGrid) -> Result<Expansion>
where
    F: SampledFn + ?Sized,
{
    if let Some(d) = f.degree() {
        grid.check_exact(d + max_level)?;
    }
    let index: Vec<(u32, u32)> = (0..=max_level)
        .flat_map(|m| (0..=(max_level - m)).map(move |n| (m, n)))
        .collect();
    let rho = grid.rho;

    // per-row partial sums, combined in row order
    let rows: Vec<Vec<ComplexNeumaier>> = grid
        .nodes_1d
        .par_iter()
        .zip(grid.weights_1d.par_iter())
        .map(|(&x, &wx)| {
            let mut acc = vec![ComplexNeumaier::default(); index.len()];
            for (&y, &wy) in grid.nodes_1d.iter().zip(&grid.weights_1d) {
                let z = Complex64::new(x, y);
                let fw = f.value([x, y]) * (wx * wy);
                let table = hlito_values(z, rho, max_level).expect("rho validated by the grid");
                for (slot, &(m, n)) in acc.iter_mut().zip(&index) {
                    slot.add(fw * table[m as usize][n as usize].conj());
                }
            }
            acc
        })
        .collect();

    let mut total = vec![ComplexNeumaier::default(); index.len()];
    for row in rows {
        for (t, r) in total.iter_mut().zip(row) {
            t.add(r.value());
        }
    }
    let coeffs = index
        .iter()
        .zip(total)
        .map(|(&(m, n), acc)| (EigenIndex::new(m, n), acc.value()))
        .collect();
    Ok(Expansion {
        coeffs,
        rho,
        max_level,
    })
}

/// Quadrature norm of `f` and the cumulative Parseval sums by level.
#[derive(Clone, Debug, PartialEq)]
pub struct ParsevalReport {
    pub norm2: f64,
    /// `(level, Σ_{m+n ≤ level} |a_{m,n}|² / (m! n! ρ^{m+n}))`.
    pub partial_sums: Vec<(u32, f64)>,
}

impl ParsevalReport {
    pub fn partial_sum(&self) -> f64 {
        self.partial_sums.last().map_or(0.0, |&(_, s)| s)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("level,partial_sum\n");
        for (level, s) in &self.partial_sums {
            let _ = writeln!(out, "{level},{s:?}");
        }
        let _ = writeln!(out, "norm2,{:?}", self.norm2);
        out
    }
}

pub fn parseval_check<F>(f: &F, max_level: u32, grid: &QuadratureGrid) -> Result<ParsevalReport>
where
    F: SampledFn + ?Sized,
{
    if let Some(d) = f.degree() {
        grid.check_exact(2 * d)?;
    }
    let norm2 = grid.integrate(|x| Complex64::new(f.value(x).norm_sqr(), 0.0)).re;
    let expansion = expand(f, max_level, grid)?;
    let mut by_level = vec![Neumaier::default(); max_level as usize + 1];
    for (idx, a) in &expansion.coeffs {
        by_level[idx.level() as usize].add(a.norm_sqr() / norm_sq(idx.m, idx.n, grid.rho));
    }
    let mut running = Neumaier::default();
    let partial_sums = by_level
        .into_iter()
        .enumerate()
        .map(|(level, acc)| {
            running.add(acc.value());
            (level as u32, running.value())
        })
        .collect();
    Ok(ParsevalReport {
        norm2,
        partial_sums,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hlito;
    use crate::special_fns::hermite;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rule_moments() {
        let rule = GaussHermite::new(10).unwrap();
        assert!((rule.integrate(|_| 1.0) - 1.0).abs() < 1e-14);
        assert!((rule.integrate(|x| x * x) - 1.0).abs() < 1e-13);
        assert!((rule.integrate(|x| x.powi(4)) - 3.0).abs() < 1e-12);
        assert!((rule.integrate(|x| x.powi(18)) - 34_459_425.0).abs() < 1e-6);
        let one = GaussHermite::new(1).unwrap();
        assert_eq!(one.nodes(), &[0.0]);
        assert!(GaussHermite::new(0).is_err());
    }

    #[test]
    fn nodes_are_symmetric_and_weights_positive() {
        for n in [2usize, 7, 80, 200] {
            let rule = GaussHermite::new(n).unwrap();
            for i in 0..n {
                assert_eq!(rule.nodes()[i], -rule.nodes()[n - 1 - i]);
                assert!(rule.weights()[i] > 0.0);
            }
        }
    }

    #[test]
    fn outer_weights_keep_relative_accuracy() {
        // exact for x^(2k) up to the rule order, even where the tails dominate
        let rule = GaussHermite::new(80).unwrap();
        let mut double_fact = 1.0;
        for k in 1..=40u32 {
            double_fact *= f64::from(2 * k - 1);
            let moment = rule.integrate(|x| x.powi(2 * k as i32));
            assert!((moment - double_fact).abs() <= 1e-11 * double_fact, "k={k}");
        }
    }

    #[test]
    fn grid_examples() {
        for &rho in &[0.5, 1.0, 2.0] {
            let grid = build_grid(1, rho).unwrap();
            assert!((grid.integrate(|_| c(1.0, 0.0)) - c(1.0, 0.0)).norm() < 1e-14);
            let grid = build_grid(DEFAULT_NODES, rho).unwrap();
            let second = grid.integrate(|x| c(x[0] * x[0], 0.0));
            assert!((second.re - rho / 2.0).abs() < 1e-12);
            let modulus = grid.integrate(|x| c(x[0] * x[0] + x[1] * x[1], 0.0));
            assert!((modulus.re - rho).abs() < 1e-12);
        }
        assert!(build_grid(0, 1.0).is_err());
        assert!(build_grid(4, -1.0).is_err());
    }

    #[test]
    fn inner_product_examples() {
        let rho = 1.3;
        let grid = build_grid(DEFAULT_NODES, rho).unwrap();
        let j11 = hlito(1, 1, rho).unwrap();
        let j20 = hlito(2, 0, rho).unwrap();
        let d = inner_product(&j11, &j11, &grid).unwrap();
        assert!((d - c(rho * rho, 0.0)).norm() < 1e-12);
        assert!(inner_product(&j20, &j11, &grid).unwrap().norm() < 1e-12);
        let one = ComplexPoly::one();
        assert!((inner_product(&one, &one, &grid).unwrap() - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn inner_product_flags_insufficient_grid() {
        let grid = build_grid(3, 1.0).unwrap();
        let j = hlito(2, 1, 1.0).unwrap();
        assert!(matches!(
            inner_product(&j, &j, &grid),
            Err(Error::QuadratureNotExact { required: 6, .. })
        ));
        let grid = build_grid(4, 1.0).unwrap();
        let got = inner_product(&j, &j, &grid).unwrap();
        assert!((got.re - 2.0).abs() < 1e-12);
    }

    #[test]
    fn gram_matrix() {
        for &rho in &[0.5, 1.0, 2.0] {
            let grid = build_grid(DEFAULT_NODES, rho).unwrap();
            let basis: Vec<_> = (0..=6u32)
                .flat_map(|m| (0..=(6 - m)).map(move |n| (m, n)))
                .map(|(m, n)| (m, n, hlito(m, n, rho).unwrap()))
                .collect();
            for (m, n, jf) in &basis {
                for (k, l, jg) in &basis {
                    let ip = inner_product(jf, jg, &grid).unwrap();
                    let scale = norm_sq(*m, *n, rho).max(norm_sq(*k, *l, rho));
                    let expected = if (m, n) == (k, l) { norm_sq(*m, *n, rho) } else { 0.0 };
                    assert!(
                        (ip - c(expected, 0.0)).norm() <= 1e-8 * scale,
                        "({m},{n}) vs ({k},{l}) rho={rho}: {ip}"
                    );
                }
            }
        }
    }

    #[test]
    fn expansion_examples() {
        let rho = 0.8;
        let grid = build_grid(DEFAULT_NODES, rho).unwrap();
        let one = expand(&ComplexPoly::one(), 4, &grid).unwrap();
        for (idx, a) in one.coeffs() {
            let expected = if idx.level() == 0 { 1.0 } else { 0.0 };
            assert!((a - c(expected, 0.0)).norm() < 1e-13);
        }

        let zz = ComplexPoly::monomial(1, 1, c(1.0, 0.0)).unwrap();
        let e = expand(&zz, 4, &grid).unwrap();
        assert!((e.coeff(1, 1) - c(rho * rho, 0.0)).norm() < 1e-13);
        assert!((e.coeff(0, 0) - c(rho, 0.0)).norm() < 1e-13);
        for (idx, a) in e.coeffs() {
            if idx.level() != 2 && idx.level() != 0 || (idx.level() == 2 && idx.m != 1) {
                assert!(a.norm() < 1e-12, "{idx:?} {a}");
            }
        }

        // x² - ρ/2 = (J_{2,0} + 2 J_{1,1} + J_{0,2}) / 4
        let h2 = |x: [f64; 2]| c(hermite(2, x[0], rho / 2.0).unwrap(), 0.0);
        let e = expand(&h2, 4, &grid).unwrap();
        let half = rho * rho / 2.0;
        assert!((e.coeff(2, 0) - c(half, 0.0)).norm() < 1e-12);
        assert!((e.coeff(1, 1) - c(half, 0.0)).norm() < 1e-12);
        assert!((e.coeff(0, 2) - c(half, 0.0)).norm() < 1e-12);
        assert!(e.coeff(0, 0).norm() < 1e-12);
        assert!(e.coeff(1, 0).norm() < 1e-12);
    }

    #[test]
    fn expansion_json() {
        let grid = build_grid(8, 1.0).unwrap();
        let e = expand(&ComplexPoly::one(), 1, &grid).unwrap();
        let json = e.to_json();
        assert!(json.starts_with(r#"{"0,0":[1.0"#), "{json}");
        assert!(json.contains(r#""1,0":"#));
    }

    #[test]
    fn parseval_examples() {
        let rho = 1.5;
        let grid = build_grid(DEFAULT_NODES, rho).unwrap();
        let j21 = hlito(2, 1, rho).unwrap();
        let report = parseval_check(&j21, 3, &grid).unwrap();
        let exact = 2.0 * rho.powi(3);
        assert!((report.norm2 - exact).abs() <= 1e-10 * exact);
        assert!((report.partial_sum() - exact).abs() <= 1e-10 * exact);

        let one = parseval_check(&ComplexPoly::one(), 2, &grid).unwrap();
        assert!((one.norm2 - 1.0).abs() < 1e-14);
        assert!((one.partial_sum() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn parseval_generating_function() {
        let rho = 1.0;
        let lambda = c(0.3, 0.0);
        let grid = build_grid(DEFAULT_NODES, rho).unwrap();
        let w = move |x: [f64; 2]| {
            let z = c(x[0], x[1]);
            (lambda * z.conj() + lambda.conj() * z - rho * lambda.norm_sqr()).exp()
        };
        let report = parseval_check(&w, 10, &grid).unwrap();
        let exact = (2.0 * rho * lambda.norm_sqr()).exp();
        assert!((report.norm2 - exact).abs() < 1e-12);
        let sums: Vec<f64> = report.partial_sums.iter().map(|&(_, s)| s).collect();
        assert!(sums.windows(2).all(|w| w[1] >= w[0]));
        assert!(report.partial_sum() <= report.norm2 + 1e-8);
        assert!((report.partial_sum() - exact).abs() < 1e-10);
        assert!(report.to_csv().starts_with("level,partial_sum\n0,"));
    }

    fn arb_poly() -> impl Strategy<Value = ComplexPoly> {
        prop::collection::vec((0u32..=6, 0u32..=6, -3.0f64..3.0, -3.0f64..3.0), 1..10).prop_map(
            |ts| {
                ComplexPoly::from_terms(
                    ts.into_iter()
                        .filter(|(p, q, _, _)| p + q <= 6)
                        .map(|(p, q, re, im)| (p, q, c(re, im))),
                )
                .unwrap()
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn reconstruction(p in arb_poly(), pts in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 50)) {
            let rho = 1.0;
            let grid = build_grid(DEFAULT_NODES, rho).unwrap();
            let e = expand(&p, 6, &grid).unwrap();
            let scale = p.max_abs_coeff().max(1.0);
            for (x, y) in pts {
                let z = c(x, y);
                let direct = p.eval(z);
                let back = e.reconstruct(z);
                let tol = 1e-8 * direct.norm().max(scale);
                prop_assert!((direct - back).norm() <= tol);
            }
        }

        #[test]
        fn bessel_inequality(p in arb_poly(), level in 0u32..8) {
            let grid = build_grid(40, 0.7).unwrap();
            let report = parseval_check(&p, level, &grid).unwrap();
            let sums: Vec<f64> = report.partial_sums.iter().map(|&(_, s)| s).collect();
            prop_assert!(sums.windows(2).all(|w| w[1] >= w[0]));
            prop_assert!(report.partial_sum() <= report.norm2 * (1.0 + 1e-10) + 1e-8);
        }
    }
}
