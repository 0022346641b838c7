//! Sparse polynomials in `z` and `z̄` and the Hermite-Laguerre-Ito family.
//!
//! A [`ComplexPoly`] maps exponent pairs `(p, q)`, meaning `z^p z̄^q`, to
//! complex coefficients. Only exact zeros are dropped after arithmetic, so
//! the integer identities satisfied by `J_{m,n}` can be compared exactly.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::de::Deserializer;
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{factorial_f64, hlito_coefficient_f64};
use crate::error::{check_rho, Error, Result};
use crate::{Complex64, OUParams};

/// Largest total degree `p + q` a polynomial may carry unless configured.
pub const DEFAULT_DEGREE_CAP: u32 = 64;

/// Relative per-coefficient tolerance for comparing polynomials built by
/// different floating-point routes.
pub const POLY_REL_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPoly {
    terms: BTreeMap<(u32, u32), Complex64>,
    cap: u32,
}

impl Default for ComplexPoly {
    fn default() -> Self {
        Self::zero()
    }
}

impl ComplexPoly {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
            cap: DEFAULT_DEGREE_CAP,
        }
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        let mut p = Self::zero();
        p.accumulate(0, 0, c);
        p
    }

    /// `c z^p z̄^q`.
    pub fn monomial(p: u32, q: u32, c: Complex64) -> Result<Self> {
        Self::from_terms([(p, q, c)])
    }

    /// Sums the given terms; repeated exponents accumulate.
    pub fn from_terms<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, u32, Complex64)>,
    {
        let mut poly = Self::zero();
        for (p, q, c) in terms {
            poly.check_degree(p + q)?;
            poly.accumulate(p, q, c);
        }
        Ok(poly)
    }

    pub fn with_degree_cap(mut self, cap: u32) -> Result<Self> {
        if let Some(deg) = self.degree() {
            if deg > cap {
                return Err(Error::DegreeCapExceeded { degree: deg, cap });
            }
        }
        self.cap = cap;
        Ok(self)
    }

    pub fn degree_cap(&self) -> u32 {
        self.cap
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(p, q)| p + q).max()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, p: u32, q: u32) -> Complex64 {
        self.terms.get(&(p, q)).copied().unwrap_or(ZERO)
    }

    /// Terms in canonical order: descending total degree, then descending `p`.
    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, Complex64)> + '_ {
        let mut keys: Vec<_> = self.terms.iter().map(|(&(p, q), &c)| (p, q, c)).collect();
        keys.sort_by(|a, b| (b.0 + b.1, b.0).cmp(&(a.0 + a.1, a.0)));
        keys.into_iter()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn check_degree(&self, degree: u32) -> Result<()> {
        if degree > self.cap {
            Err(Error::DegreeCapExceeded {
                degree,
                cap: self.cap,
            })
        } else {
            Ok(())
        }
    }

    fn accumulate(&mut self, p: u32, q: u32, c: Complex64) {
        if c == ZERO {
            return;
        }
        let slot = self.terms.entry((p, q)).or_insert(ZERO);
        *slot += c;
        if *slot == ZERO {
            self.terms.remove(&(p, q));
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self {
            terms: BTreeMap::new(),
            cap: self.cap,
        };
        for (&(p, q), &a) in &self.terms {
            out.accumulate(p, q, a * c);
        }
        out
    }

    /// `c z^p z̄^q · self`.
    pub fn mul_monomial(&self, p: u32, q: u32, c: Complex64) -> Result<Self> {
        if let Some(deg) = self.degree() {
            self.check_degree(deg + p + q)?;
        }
        Ok(self.mul_monomial_unchecked(p, q, c))
    }

    fn mul_monomial_unchecked(&self, p: u32, q: u32, c: Complex64) -> Self {
        let mut out = Self {
            terms: BTreeMap::new(),
            cap: self.cap,
        };
        for (&(a, b), &v) in &self.terms {
            out.accumulate(a + p, b + q, v * c);
        }
        out
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let cap = self.cap.max(other.cap);
        let mut out = Self {
            terms: BTreeMap::new(),
            cap,
        };
        if let (Some(d1), Some(d2)) = (self.degree(), other.degree()) {
            out.check_degree(d1 + d2)?;
        }
        for (&(p1, q1), &a) in &self.terms {
            for (&(p2, q2), &b) in &other.terms {
                out.accumulate(p1 + p2, q1 + q2, a * b);
            }
        }
        Ok(out)
    }

    /// Formal `∂/∂z`.
    pub fn annihilate(&self) -> Self {
        let mut out = Self {
            terms: BTreeMap::new(),
            cap: self.cap,
        };
        for (&(p, q), &a) in &self.terms {
            if p > 0 {
                out.accumulate(p - 1, q, a * f64::from(p));
            }
        }
        out
    }

    /// Formal `∂/∂z̄`.
    pub fn bar_annihilate(&self) -> Self {
        let mut out = Self {
            terms: BTreeMap::new(),
            cap: self.cap,
        };
        for (&(p, q), &a) in &self.terms {
            if q > 0 {
                out.accumulate(p, q - 1, a * f64::from(q));
            }
        }
        out
    }

    /// `∂*φ = -∂φ/∂z̄ + (z/ρ) φ`, the adjoint of `∂` in `L²(μ)`.
    pub fn creation_op(&self, rho: f64) -> Result<Self> {
        check_rho(rho)?;
        let raised = self.mul_monomial(1, 0, Complex64::new(1.0 / rho, 0.0))?;
        Ok(&raised - &self.bar_annihilate())
    }

    /// `∂̄*φ = -∂φ/∂z + (z̄/ρ) φ`.
    pub fn bar_creation_op(&self, rho: f64) -> Result<Self> {
        check_rho(rho)?;
        let raised = self.mul_monomial(0, 1, Complex64::new(1.0 / rho, 0.0))?;
        Ok(&raised - &self.annihilate())
    }

    /// The OU generator in complex form,
    /// `A = -r [(1 + ic) z∂ + (1 - ic) z̄∂̄ - 2ρ ∂∂̄]`.
    pub fn apply_generator(&self, params: &OUParams) -> Self {
        let c = params.c();
        let rho = params.rho();
        let radial = self
            .annihilate()
            .mul_monomial_unchecked(1, 0, Complex64::new(1.0, c));
        let bar_radial = self
            .bar_annihilate()
            .mul_monomial_unchecked(0, 1, Complex64::new(1.0, -c));
        let laplace = self
            .annihilate()
            .bar_annihilate()
            .scale(Complex64::new(-2.0 * rho, 0.0));
        (&(&radial + &bar_radial) + &laplace).scale(Complex64::new(-params.r(), 0.0))
    }

    /// Complex conjugate as a function: `(p, q, a) ↦ (q, p, ā)`.
    pub fn conjugate(&self) -> Self {
        let mut out = Self {
            terms: BTreeMap::new(),
            cap: self.cap,
        };
        for (&(p, q), &a) in &self.terms {
            out.accumulate(q, p, a.conj());
        }
        out
    }

    /// Value at `(z, z̄)`; nested Horner in `z̄` per row, then in `z`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let Some(&(max_p, _)) = self.terms.keys().next_back() else {
            return ZERO;
        };
        let zb = z.conj();
        let mut acc = ZERO;
        let mut last_p = max_p;
        // rows are visited with descending p; `last_p` tracks the pending z power
        let mut p = max_p as i64;
        while p >= 0 {
            let row = self.terms.range((p as u32, 0)..=(p as u32, u32::MAX));
            let mut inner = ZERO;
            let mut last_q: Option<u32> = None;
            for (&(_, q), &a) in row.rev() {
                inner = match last_q {
                    None => a,
                    Some(prev) => inner * zb.powu(prev - q) + a,
                };
                last_q = Some(q);
            }
            if let Some(q) = last_q {
                inner *= zb.powu(q);
                acc = acc * z.powu(last_p - p as u32) + inner;
                last_p = p as u32;
            }
            p -= 1;
        }
        acc * z.powu(last_p)
    }

    /// Largest coefficient difference over the union of both key sets.
    pub fn max_coeff_delta(&self, other: &Self) -> f64 {
        self.terms
            .keys()
            .chain(other.terms.keys())
            .map(|&(p, q)| (self.coeff(p, q) - other.coeff(p, q)).norm())
            .fold(0.0, f64::max)
    }

    /// Same key set and every coefficient within `rel_tol` of the largest
    /// coefficient magnitude of the pair.
    pub fn approx_eq(&self, other: &Self, rel_tol: f64) -> bool {
        if !self.terms.keys().eq(other.terms.keys()) {
            return false;
        }
        let scale = self.max_abs_coeff().max(other.max_abs_coeff());
        self.max_coeff_delta(other) <= rel_tol * scale
    }

    /// Scalar `s` with `self ≈ s · other`, taken from the dominant coefficient
    /// of `other`, together with the relative residual
    /// `max|self - s·other| / max|self|`.
    pub fn proportional_to(&self, other: &Self) -> Option<(Complex64, f64)> {
        let (&key, &dominant) = other
            .terms
            .iter()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))?;
        let s = self.coeff(key.0, key.1) / dominant;
        let scale = self.max_abs_coeff();
        if scale == 0.0 {
            return None;
        }
        let residual = self.max_coeff_delta(&other.scale(s)) / scale;
        Some((s, residual))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polynomial serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl<'a> Add<&'a ComplexPoly> for &'a ComplexPoly {
    type Output = ComplexPoly;

    fn add(self, rhs: &'a ComplexPoly) -> ComplexPoly {
        let mut out = self.clone();
        out.cap = self.cap.max(rhs.cap);
        for (&(p, q), &a) in &rhs.terms {
            out.accumulate(p, q, a);
        }
        out
    }
}

impl<'a> Sub<&'a ComplexPoly> for &'a ComplexPoly {
    type Output = ComplexPoly;

    fn sub(self, rhs: &'a ComplexPoly) -> ComplexPoly {
        let mut out = self.clone();
        out.cap = self.cap.max(rhs.cap);
        for (&(p, q), &a) in &rhs.terms {
            out.accumulate(p, q, -a);
        }
        out
    }
}

impl Add for ComplexPoly {
    type Output = ComplexPoly;

    fn add(self, rhs: ComplexPoly) -> ComplexPoly {
        &self + &rhs
    }
}

impl Sub for ComplexPoly {
    type Output = ComplexPoly;

    fn sub(self, rhs: ComplexPoly) -> ComplexPoly {
        &self - &rhs
    }
}

impl Neg for &ComplexPoly {
    type Output = ComplexPoly;

    fn neg(self) -> ComplexPoly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul<Complex64> for &ComplexPoly {
    type Output = ComplexPoly;

    fn mul(self, rhs: Complex64) -> ComplexPoly {
        self.scale(rhs)
    }
}

impl Mul<f64> for &ComplexPoly {
    type Output = ComplexPoly;

    fn mul(self, rhs: f64) -> ComplexPoly {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

impl fmt::Display for ComplexPoly {
    /// One `p q re im` row per term, canonical order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>3} {:>3} {:>24} {:>24}", "p", "q", "re", "im")?;
        for (p, q, c) in self.terms() {
            writeln!(f, "{p:>3} {q:>3} {:>24} {:>24}", c.re, c.im)?;
        }
        Ok(())
    }
}

/// Serializes integral values as JSON integers so that polynomials with
/// integer coefficients print as `1`, not `1.0`.
struct JsonNumber(f64);

impl Serialize for JsonNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v = self.0;
        if v.fract() == 0.0 && v.abs() < 9.007_199_254_740_992e15 {
            s.serialize_i64(v as i64)
        } else {
            s.serialize_f64(v)
        }
    }
}

#[derive(Serialize)]
struct TermOut {
    p: u32,
    q: u32,
    re: JsonNumber,
    im: JsonNumber,
}

#[derive(Serialize)]
struct PolyOut {
    terms: Vec<TermOut>,
}

#[derive(Deserialize)]
struct TermIn {
    p: u32,
    q: u32,
    re: f64,
    im: f64,
}

#[derive(Deserialize)]
struct PolyIn {
    terms: Vec<TermIn>,
}

impl Serialize for ComplexPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyOut {
            terms: self
                .terms()
                .map(|(p, q, c)| TermOut {
                    p,
                    q,
                    re: JsonNumber(c.re),
                    im: JsonNumber(c.im),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PolyIn::deserialize(d)?;
        ComplexPoly::from_terms(
            raw.terms
                .into_iter()
                .map(|t| (t.p, t.q, Complex64::new(t.re, t.im))),
        )
        .map_err(serde::de::Error::custom)
    }
}

/// `J_{m,n}(z, ρ) = Σ_r (-1)^r r! C(m,r) C(n,r) z^{m-r} z̄^{n-r} ρ^r`.
pub fn hlito(m: u32, n: u32, rho: f64) -> Result<ComplexPoly> {
    hlito_with_cap(m, n, rho, DEFAULT_DEGREE_CAP)
}

pub fn hlito_with_cap(m: u32, n: u32, rho: f64, cap: u32) -> Result<ComplexPoly> {
    check_rho(rho)?;
    if m + n > cap {
        return Err(Error::DegreeCapExceeded { degree: m + n, cap });
    }
    let mut poly = ComplexPoly::zero().with_degree_cap(cap)?;
    for r in 0..=m.min(n) {
        let int = hlito_coefficient_f64(u64::from(m), u64::from(n), u64::from(r));
        let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
        let coef = sign * int * rho.powi(r as i32);
        poly.accumulate(m - r, n - r, Complex64::new(coef, 0.0));
    }
    Ok(poly)
}

/// `J_{m,n} = ρ^{m+n} (∂*)^m (∂̄*)^n 1`, built one operator at a time.
pub fn hlito_by_creation(m: u32, n: u32, rho: f64) -> Result<ComplexPoly> {
    check_rho(rho)?;
    let scale = Complex64::new(rho, 0.0);
    let mut poly = ComplexPoly::one();
    for _ in 0..n {
        poly = poly.bar_creation_op(rho)?.scale(scale);
    }
    for _ in 0..m {
        poly = poly.creation_op(rho)?.scale(scale);
    }
    Ok(poly)
}

/// Table `values[m][n] = J_{m,n}(z, ρ)` for all `m + n ≤ max_level`, from
/// `J_{0,n} = z̄^n` and `J_{m+1,n} = z J_{m,n} - n ρ J_{m,n-1}`.
pub fn hlito_values(z: Complex64, rho: f64, max_level: u32) -> Result<Vec<Vec<Complex64>>> {
    check_rho(rho)?;
    Ok(hlito_values_unchecked(z, rho, max_level))
}

/// As [`hlito_values`] but also accepts `ρ = 0`, where `J_{m,n} = z^m z̄^n`.
pub(crate) fn hlito_values_unchecked(z: Complex64, rho: f64, max_level: u32) -> Vec<Vec<Complex64>> {
    let levels = max_level as usize;
    let zb = z.conj();
    let mut table: Vec<Vec<Complex64>> = Vec::with_capacity(levels + 1);
    let mut first = Vec::with_capacity(levels + 1);
    let mut power = Complex64::new(1.0, 0.0);
    for _ in 0..=levels {
        first.push(power);
        power *= zb;
    }
    table.push(first);
    for m in 0..levels {
        let prev = &table[m];
        let mut row = Vec::with_capacity(levels - m);
        for n in 0..(levels - m) {
            let lower = if n > 0 { prev[n - 1] * (n as f64 * rho) } else { ZERO };
            row.push(z * prev[n] - lower);
        }
        table.push(row);
    }
    table
}

/// Both sides of the generating-function identity
/// `exp(λz̄ + λ̄z - ρ|λ|²) = Σ_{m,n} λ̄^m λ^n J_{m,n}(z, ρ) / (m! n!)`,
/// with the double sum truncated at `m, n ≤ n_max`.
pub fn generating_function_check(
    lambda: Complex64,
    z: Complex64,
    rho: f64,
    n_max: u32,
) -> Result<(Complex64, Complex64)> {
    check_rho(rho)?;
    let exponent = lambda * z.conj() + lambda.conj() * z - rho * lambda.norm_sqr();
    let lhs = exponent.exp();
    let mut rhs = ZERO;
    for m in 0..=n_max {
        let weight_m = lambda.conj().powu(m) / factorial_f64(u64::from(m));
        for n in 0..=n_max {
            let weight = weight_m * lambda.powu(n) / factorial_f64(u64::from(n));
            if weight == ZERO {
                continue;
            }
            rhs += weight * hlito(m, n, rho)?.eval(z);
        }
    }
    Ok((lhs, rhs))
}
