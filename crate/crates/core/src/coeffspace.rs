//! Truncated power-series coefficients and the weighted inner products of the
//! Fock, `H_p` and `F_p` spaces.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which weighted space a computation lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Fock,
    Hp,
    Fp,
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Space::Fock => "fock",
            Space::Hp => "hp",
            Space::Fp => "fp",
        })
    }
}

impl FromStr for Space {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fock" | "f" => Ok(Space::Fock),
            "hp" | "h" => Ok(Space::Hp),
            "fp" => Ok(Space::Fp),
            other => Err(Error::InvalidArgument(format!("unknown space `{other}`"))),
        }
    }
}

/// A space together with its integer parameter `p`.
///
/// `p` is ignored for [`Space::Fock`]; with `p = 0` all three spaces carry the
/// Fock weight `n!`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KernelSpec {
    pub space: Space,
    pub p: u32,
}

impl KernelSpec {
    pub const FOCK: KernelSpec = KernelSpec {
        space: Space::Fock,
        p: 0,
    };

    pub fn new(space: Space, p: u32) -> Self {
        KernelSpec { space, p }
    }

    pub fn hp(p: u32) -> Self {
        Self::new(Space::Hp, p)
    }

    pub fn fp(p: u32) -> Self {
        Self::new(Space::Fp, p)
    }

    /// Exponent `e` such that the weight is `n! * (n+1)^e`.
    pub fn power(&self) -> i64 {
        match self.space {
            Space::Fock => 0,
            Space::Hp => -2 * self.p as i64,
            Space::Fp => 2 * self.p as i64,
        }
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.space {
            Space::Fock => f.write_str("fock"),
            s => write!(f, "{s}(p={})", self.p),
        }
    }
}

/// Natural log of the weight of `z^n`. Valid for every `n`.
pub fn log_weight(spec: KernelSpec, n: usize) -> f64 {
    let log_fact: f64 = (2..=n).map(|k| (k as f64).ln()).sum();
    log_fact + spec.power() as f64 * ((n + 1) as f64).ln()
}

/// Weights of `z^0 ..= z^n`, built by the running recurrence
/// `w_{k+1} = w_k * (k+1) * ((k+2)/(k+1))^e`.
///
/// Entries past the `f64` range come out as `inf`; use [`weight`] when that
/// must be an error.
pub fn weights(spec: KernelSpec, n: usize) -> Vec<f64> {
    let e = spec.power() as i32;
    let mut out = Vec::with_capacity(n + 1);
    let mut w = 1.0_f64;
    out.push(w);
    for k in 0..n {
        let ratio = (k + 2) as f64 / (k + 1) as f64;
        w *= (k + 1) as f64 * ratio.powi(e);
        out.push(w);
    }
    out
}

/// Weight of `z^n` in the linear domain.
pub fn weight(spec: KernelSpec, n: usize) -> Result<f64> {
    let lw = log_weight(spec, n);
    if lw >= f64::MAX.ln() {
        return Err(Error::WeightOverflow { n, log_weight: lw });
    }
    Ok(*weights(spec, n).last().expect("non-empty"))
}

/// Weight of `z^n` as an exact rational.
pub fn weight_exact(spec: KernelSpec, n: usize) -> BigRational {
    let fact: BigInt = (1..=n as u64).map(BigInt::from).product();
    let base = BigRational::from_integer(BigInt::from(n as u64 + 1));
    let e = spec.power();
    let scale: BigRational = if e >= 0 {
        base.pow(e as u32)
    } else {
        BigRational::one() / base.pow((-e) as u32)
    };
    BigRational::from_integer(fact) * scale
}

/// Coefficients `a_0 ..= a_N` of a truncated power series `sum a_n z^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffSeq {
    coeffs: Vec<Complex64>,
}

impl CoeffSeq {
    /// Fails if `coeffs` is empty or holds a non-finite entry.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidCoeffs("at least one coefficient required".into()));
        }
        if let Some(i) = coeffs.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidCoeffs(format!("coefficient {i} is not finite")));
        }
        Ok(CoeffSeq { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zeros(truncation: usize) -> Self {
        CoeffSeq {
            coeffs: vec![Complex64::new(0.0, 0.0); truncation + 1],
        }
    }

    /// `c * z^n` truncated at `max(n, truncation)`.
    pub fn monomial(n: usize, c: Complex64, truncation: usize) -> Self {
        let mut s = Self::zeros(truncation.max(n));
        s.coeffs[n] = c;
        s
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of `z^n`, zero past the truncation.
    pub fn get(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    /// Zero-padded or cut copy with the given truncation.
    pub fn resized(&self, truncation: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(truncation + 1, Complex64::new(0.0, 0.0));
        CoeffSeq { coeffs }
    }

    pub fn map_indexed(&self, mut f: impl FnMut(usize, Complex64) -> Complex64) -> Self {
        CoeffSeq {
            coeffs: self.coeffs.iter().enumerate().map(|(n, &c)| f(n, c)).collect(),
        }
    }

    /// `alpha * self + beta * other`, zero-padding to the larger truncation.
    pub fn lin_comb(&self, alpha: Complex64, other: &CoeffSeq, beta: Complex64) -> Self {
        let n = self.truncation().max(other.truncation());
        let coeffs = (0..=n)
            .map(|k| alpha * self.get(k) + beta * other.get(k))
            .collect();
        CoeffSeq { coeffs }
    }

    /// Horner evaluation of `sum a_n z^n`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// `sum_n w_n a_n conj(b_n)` over the common range; missing coefficients are zero.
pub fn inner(spec: KernelSpec, f: &CoeffSeq, g: &CoeffSeq) -> Complex64 {
    let n = f.truncation().min(g.truncation());
    weights(spec, n)
        .iter()
        .zip(f.coeffs.iter().zip(&g.coeffs))
        .map(|(&w, (a, b))| a * b.conj() * w)
        .sum()
}

pub fn norm_sq(spec: KernelSpec, f: &CoeffSeq) -> f64 {
    weights(spec, f.truncation())
        .iter()
        .zip(&f.coeffs)
        .map(|(&w, a)| w * a.norm_sqr())
        .sum()
}

pub fn norm(spec: KernelSpec, f: &CoeffSeq) -> f64 {
    norm_sq(spec, f).sqrt()
}

pub fn eval(f: &CoeffSeq, z: Complex64) -> Complex64 {
    f.eval(z)
}

#[derive(Serialize, Deserialize)]
struct CoeffSeqJson {
    truncation: usize,
    coeffs: Vec<[f64; 2]>,
}

impl Serialize for CoeffSeq {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CoeffSeqJson {
            truncation: self.truncation(),
            coeffs: self.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoeffSeq {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CoeffSeqJson::deserialize(d)?;
        if raw.coeffs.len() != raw.truncation + 1 {
            return Err(serde::de::Error::custom(format!(
                "truncation {} needs {} coefficients, got {}",
                raw.truncation,
                raw.truncation + 1,
                raw.coeffs.len()
            )));
        }
        CoeffSeq::new(raw.coeffs.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
            .map_err(serde::de::Error::custom)
    }
}
