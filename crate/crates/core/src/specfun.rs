//! Special-function primitives: Hermite polynomials and functions, Stirling
//! numbers of the second kind, Touchard polynomials, Pochhammer symbols and the
//! `2pF2p(1,...,1; 2,...,2; z)` series.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::compensated::DdComplex;
use crate::error::{Error, Result};

/// Largest `n` for which Stirling numbers and Touchard polynomials are served.
pub const STIRLING_MAX_N: usize = 30;

/// `(2 pi)^(-1/4)`, the value of `xi_0(0)`.
pub fn xi0_scale() -> f64 {
    (2.0 * std::f64::consts::PI).powf(-0.25)
}

/// Probabilists' Hermite polynomial `He_n(z)` by
/// `He_{k+1} = z He_k - k He_{k-1}`.
pub fn hermite_he(n: usize, z: Complex64) -> Complex64 {
    let mut prev = Complex64::new(0.0, 0.0);
    let mut cur = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let next = z * cur - prev * k as f64;
        prev = cur;
        cur = next;
    }
    cur
}

/// `He_n(z)` in exact integer arithmetic, same recurrence as [`hermite_he`].
pub fn hermite_he_exact(n: usize, z: &BigInt) -> BigInt {
    let mut prev = BigInt::zero();
    let mut cur = BigInt::from(1);
    for k in 0..n {
        let next = z * &cur - &prev * BigInt::from(k);
        prev = cur;
        cur = next;
    }
    cur
}

/// Normalized Hermite functions `xi_0(x) ..= xi_N(x)` at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteEval {
    pub x: f64,
    pub values: Vec<f64>,
}

impl HermiteEval {
    pub fn new(n_max: usize, x: f64) -> Self {
        let mut values = Vec::with_capacity(n_max + 1);
        let mut prev = 0.0;
        let mut cur = xi0_scale() * (-x * x / 4.0).exp();
        values.push(cur);
        for n in 0..n_max {
            // xi_{n+1} = (x xi_n - sqrt(n) xi_{n-1}) / sqrt(n+1)
            let next = (x * cur - (n as f64).sqrt() * prev) / ((n + 1) as f64).sqrt();
            prev = cur;
            cur = next;
            values.push(cur);
        }
        HermiteEval { x, values }
    }

    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }
}

/// `xi_n(x) = e^{-x^2/4} He_n(x) / ((2 pi)^{1/4} sqrt(n!))`.
pub fn hermite_fn(n: usize, x: f64) -> f64 {
    HermiteEval::new(n, x).values[n]
}

/// Unnormalized `h_n(x) = e^{-x^2/4} He_n(x)`, rescaled from `xi_n` in the log domain.
pub fn hermite_h(n: usize, x: f64) -> f64 {
    let log_fact: f64 = (2..=n).map(|k| (k as f64).ln()).sum();
    let scale = (0.25 * (2.0 * std::f64::consts::PI).ln() + 0.5 * log_fact).exp();
    hermite_fn(n, x) * scale
}

/// Triangle of Stirling numbers of the second kind, `S(n, k)` for `k <= n <= max_n`.
#[derive(Debug, Clone)]
pub struct StirlingTable {
    rows: Vec<Vec<BigUint>>,
}

impl StirlingTable {
    pub fn new(max_n: usize) -> Result<Self> {
        if max_n > STIRLING_MAX_N {
            return Err(Error::OutOfRange(format!(
                "Stirling table limited to n <= {STIRLING_MAX_N}, asked for {max_n}"
            )));
        }
        let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::from(1u32)]];
        for n in 1..=max_n {
            let prev = &rows[n - 1];
            let mut row = vec![BigUint::zero(); n + 1];
            for k in 1..=n {
                let stay = if k < n { &prev[k] * BigUint::from(k) } else { BigUint::zero() };
                row[k] = stay + &prev[k - 1];
            }
            rows.push(row);
        }
        Ok(StirlingTable { rows })
    }

    /// Shared table up to [`STIRLING_MAX_N`].
    pub fn global() -> &'static StirlingTable {
        static TABLE: OnceLock<StirlingTable> = OnceLock::new();
        TABLE.get_or_init(|| StirlingTable::new(STIRLING_MAX_N).expect("within limit"))
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn get(&self, n: usize, k: usize) -> Result<&BigUint> {
        if n > self.max_n() {
            return Err(Error::OutOfRange(format!("S({n}, {k}): table ends at n = {}", self.max_n())));
        }
        self.rows[n]
            .get(k)
            .ok_or_else(|| Error::OutOfRange(format!("S({n}, {k}) needs k <= n")))
    }

    pub fn row(&self, n: usize) -> Result<&[BigUint]> {
        self.rows
            .get(n)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::OutOfRange(format!("row {n}: table ends at n = {}", self.max_n())))
    }
}

/// `S(n, k)` from the recurrence table.
pub fn stirling2(n: usize, k: usize) -> Result<BigUint> {
    StirlingTable::global().get(n, k).cloned()
}

/// `S(n, k) = (1/k!) sum_i (-1)^i C(k, i) (k - i)^n`, evaluated directly.
pub fn stirling2_explicit(n: usize, k: usize) -> Result<BigUint> {
    if k > n {
        return Err(Error::OutOfRange(format!("S({n}, {k}) needs k <= n")));
    }
    if n > STIRLING_MAX_N {
        return Err(Error::OutOfRange(format!("S({n}, {k}): limited to n <= {STIRLING_MAX_N}")));
    }
    let mut sum = BigInt::zero();
    let mut binom = BigInt::from(1);
    for i in 0..=k {
        let term = &binom * BigInt::from(k - i).pow(n as u32);
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        binom = binom * BigInt::from(k - i) / BigInt::from(i + 1);
    }
    let k_fact: BigInt = (1..=k as u64).map(BigInt::from).product();
    (sum / k_fact)
        .to_biguint()
        .ok_or_else(|| Error::InvalidArgument("negative Stirling sum".into()))
}

/// Coefficients of `T_n(x) = sum_k S(n, k) x^k`, index `k`.
pub fn touchard_coeffs(n: usize) -> Result<Vec<BigUint>> {
    Ok(StirlingTable::global().row(n)?.to_vec())
}

/// Coefficients of `T_n(x) / x` for `n >= 1` (the constant term of `T_n` vanishes).
pub fn touchard_deflated_coeffs(n: usize) -> Result<Vec<BigUint>> {
    if n == 0 {
        return Err(Error::InvalidArgument("T_0 = 1 is not divisible by x".into()));
    }
    let row = StirlingTable::global().row(n)?;
    debug_assert!(row[0].is_zero());
    Ok(row[1..].to_vec())
}

/// Horner evaluation of an integer-coefficient polynomial at a complex point.
pub(crate) fn horner_biguint(coeffs: &[BigUint], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| {
        acc * z + c.to_f64().expect("finite")
    })
}

/// `T_n(z)`, by Horner in exact rationals on the binary value of `z`; only
/// the result is rounded.
pub fn touchard(n: usize, z: Complex64) -> Result<Complex64> {
    let row = StirlingTable::global().row(n)?;
    let exact = |v: f64| {
        BigRational::from_float(v).ok_or_else(|| Error::InvalidArgument(format!("non-finite argument {v}")))
    };
    let (x, y) = (exact(z.re)?, exact(z.im)?);
    let (mut re, mut im) = (BigRational::zero(), BigRational::zero());
    for c in row.iter().rev() {
        let next_re = &re * &x - &im * &y + BigRational::from_integer(BigInt::from(c.clone()));
        im = &re * &y + &im * &x;
        re = next_re;
    }
    let f = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);
    Ok(Complex64::new(f(&re), f(&im)))
}

/// `T_n(x)` at a rational point, exactly.
pub fn touchard_exact(n: usize, x: &BigRational) -> Result<BigRational> {
    let row = StirlingTable::global().row(n)?;
    Ok(row.iter().rev().fold(BigRational::zero(), |acc, c| {
        acc * x + BigRational::from_integer(BigInt::from(c.clone()))
    }))
}

/// Generating-function form `e^{-z} sum_{k <= terms} k^n z^k / k!`.
pub fn touchard_series(n: usize, z: Complex64, terms: usize) -> Complex64 {
    let mut zk_over_kfact = DdComplex::from_c64(Complex64::new(1.0, 0.0));
    let mut sum = if n == 0 { zk_over_kfact } else { DdComplex::default() };
    for k in 1..=terms {
        zk_over_kfact = zk_over_kfact.mul_c64(z).div_f64(k as f64);
        sum = sum.add(zk_over_kfact.scale((k as f64).powi(n as i32)));
    }
    sum.mul_c64((-z).exp()).to_c64()
}

/// Rising factorial `(a)_n = a (a+1) ... (a+n-1)`.
pub fn pochhammer(a: f64, n: usize) -> f64 {
    (0..n).map(|k| a + k as f64).product()
}

/// Partial sum through `z^terms` of `2pF2p(1,...,1; 2,...,2; z)`, built from
/// the hypergeometric term ratio
/// `t_{n+1}/t_n = [(1)_{n+1}/(1)_n]^{2p} / [(2)_{n+1}/(2)_n]^{2p} * z/(n+1)`.
///
/// The series reduces to `sum z^n / ((n+1)^{2p} n!)`; for `p = 0` it is the
/// truncated exponential.
pub fn hyper_1s2s(p: u32, z: Complex64, terms: usize) -> Complex64 {
    let q = 2 * p as i32;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for n in 0..terms {
        let upper = (1.0 + n as f64).powi(q);
        let lower = (2.0 + n as f64).powi(q);
        term = term * z * (upper / lower) / (n + 1) as f64;
        sum += term;
    }
    sum
}
