//! Hankel-matrix certificates for Stieltjes moment sequences.
//!
//! A sequence `s` is a Stieltjes sequence iff every Hankel matrix
//! `H_N(s) = (s_{i+j})` and every shifted one `H_N(Es) = (s_{i+j+1})` is
//! positive semidefinite. Built-in sequences are exact rationals and their
//! verdicts come from exact determinants.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::operators::Rat;

type Generator = Arc<dyn Fn(usize) -> Rat + Send + Sync>;

#[derive(Clone)]
enum Source {
    Exact(Generator),
    Finite(Arc<Vec<Rat>>),
    Float(Vec<f64>),
}

/// A real moment sequence `s_0, s_1, ...`.
#[derive(Clone)]
pub struct MomentSeq {
    label: String,
    source: Source,
}

impl fmt::Debug for MomentSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MomentSeq").field("label", &self.label).finish()
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

impl MomentSeq {
    pub fn exact(label: impl Into<String>, f: impl Fn(usize) -> Rat + Send + Sync + 'static) -> Self {
        MomentSeq {
            label: label.into(),
            source: Source::Exact(Arc::new(f)),
        }
    }

    /// A finite floating-point sequence; only the float path applies to it.
    pub fn float(label: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("moment sequence has non-finite entries".into()));
        }
        Ok(MomentSeq {
            label: label.into(),
            source: Source::Float(values),
        })
    }

    /// `n! / (n+1)^{2p}`, the moments of the radial measure of `H_p`.
    pub fn hp(p: u32) -> Self {
        Self::exact(format!("hp:{p}"), move |n| {
            Rat::new(factorial(n), BigInt::from(n + 1).pow(2 * p))
        })
    }

    /// `n! (n+1)^{2p}`.
    pub fn fp(p: u32) -> Self {
        Self::exact(format!("fp:{p}"), move |n| {
            Rat::from_integer(factorial(n) * BigInt::from(n + 1).pow(2 * p))
        })
    }

    /// `n!`, the Fock moments.
    pub fn factorial() -> Self {
        Self::exact("factorial", |n| Rat::from_integer(factorial(n)))
    }

    /// `1 / (n+1)`, moments of Lebesgue measure on `[0, 1]`.
    pub fn hausdorff() -> Self {
        Self::exact("hausdorff", |n| Rat::new(BigInt::one(), BigInt::from(n + 1)))
    }

    /// Parses `hp:P`, `fp:P`, `factorial` or `hausdorff`.
    pub fn builtin(spec: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("unknown moment sequence `{spec}`"));
        match spec.split_once(':') {
            Some(("hp", p)) => Ok(Self::hp(p.parse().map_err(|_| bad())?)),
            Some(("fp", p)) => Ok(Self::fp(p.parse().map_err(|_| bad())?)),
            None if spec == "factorial" => Ok(Self::factorial()),
            None if spec == "hausdorff" => Ok(Self::hausdorff()),
            _ => Err(bad()),
        }
    }

    /// A JSON array of moments. Integers and `"a/b"` strings give an exact
    /// sequence; any other number makes it a float sequence.
    pub fn from_json(label: impl Into<String>, v: &serde_json::Value) -> Result<Self> {
        let label = label.into();
        let arr = v
            .as_array()
            .ok_or_else(|| Error::InvalidArgument("moment file must hold a JSON array".into()))?;
        if arr.is_empty() {
            return Err(Error::InvalidArgument("moment file is empty".into()));
        }
        let exact: Option<Vec<Rat>> = arr
            .iter()
            .map(|e| match e {
                serde_json::Value::Number(n) => n.as_i64().map(|i| Rat::from_integer(i.into())),
                serde_json::Value::String(s) => parse_rat(s),
                _ => None,
            })
            .collect();
        if let Some(values) = exact {
            return Ok(MomentSeq {
                label,
                source: Source::Finite(Arc::new(values)),
            });
        }
        let floats: Option<Vec<f64>> = arr.iter().map(|e| e.as_f64()).collect();
        let floats = floats.ok_or_else(|| Error::InvalidArgument("moments must be numbers or \"a/b\" strings".into()))?;
        Self::float(label, floats)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self.source, Source::Float(_))
    }

    /// Number of stored moments, `None` for generated sequences.
    pub fn stored_len(&self) -> Option<usize> {
        match &self.source {
            Source::Exact(_) => None,
            Source::Finite(v) => Some(v.len()),
            Source::Float(v) => Some(v.len()),
        }
    }

    fn check_index(&self, n: usize) -> Result<()> {
        match self.stored_len() {
            Some(len) if n >= len => Err(Error::OutOfRange(format!(
                "moment s_{n} requested but `{}` has {len} entries",
                self.label
            ))),
            _ => Ok(()),
        }
    }

    pub fn get_exact(&self, n: usize) -> Result<Rat> {
        self.check_index(n)?;
        match &self.source {
            Source::Exact(g) => Ok(g(n)),
            Source::Finite(v) => Ok(v[n].clone()),
            Source::Float(_) => Err(Error::InvalidArgument(format!(
                "`{}` is a floating-point sequence; use the float mode",
                self.label
            ))),
        }
    }

    pub fn get_f64(&self, n: usize) -> Result<f64> {
        self.check_index(n)?;
        match &self.source {
            Source::Exact(g) => Ok(rat_to_f64(&g(n))),
            Source::Finite(v) => Ok(rat_to_f64(&v[n])),
            Source::Float(v) => Ok(v[n]),
        }
    }
}

fn parse_rat(s: &str) -> Option<Rat> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.trim().parse().ok()?;
    let d: BigInt = d.trim().parse().ok()?;
    (!d.is_zero()).then(|| Rat::new(n, d))
}

/// `f64` value of a rational whose numerator or denominator may exceed the `f64` range.
pub fn rat_to_f64(r: &Rat) -> f64 {
    if let Some(v) = r.to_f64().filter(|v| v.is_finite() && *v != 0.0) {
        return v;
    }
    if r.is_zero() {
        return 0.0;
    }
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    sign * (big_ln(&r.numer().abs()) - big_ln(r.denom())).exp()
}

/// Natural log of a positive big integer.
fn big_ln(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits").ln();
    }
    let shift = bits - 900;
    (x >> shift).to_f64().expect("fits").ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive rational.
pub fn rat_ln(r: &Rat) -> f64 {
    big_ln(r.numer()) - big_ln(r.denom())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PsdMode {
    ExactMinors,
    FloatEig,
}

impl std::str::FromStr for PsdMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" | "exact_minors" => Ok(PsdMode::ExactMinors),
            "float" | "float_eig" => Ok(PsdMode::FloatEig),
            other => Err(Error::InvalidArgument(format!("unknown PSD mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HankelKind {
    /// `H(s)`
    #[serde(rename = "H(s)")]
    Plain,
    /// `H(Es)`
    #[serde(rename = "H(Es)")]
    Shifted,
}

/// Square matrix of moments: exact or floating.
#[derive(Debug, Clone, PartialEq)]
pub enum MomentMatrix {
    Exact(Vec<Vec<Rat>>),
    Float(Vec<Vec<f64>>),
}

impl MomentMatrix {
    pub fn dim(&self) -> usize {
        match self {
            MomentMatrix::Exact(m) => m.len(),
            MomentMatrix::Float(m) => m.len(),
        }
    }

    fn to_f64(&self) -> DMatrix<f64> {
        let n = self.dim();
        match self {
            MomentMatrix::Exact(m) => DMatrix::from_fn(n, n, |i, j| rat_to_f64(&m[i][j])),
            MomentMatrix::Float(m) => DMatrix::from_fn(n, n, |i, j| m[i][j]),
        }
    }
}

/// `(s_{i+j})` or `(s_{i+j+1})`, `0 <= i, j <= order`.
pub fn hankel(s: &MomentSeq, order: usize, shifted: bool) -> Result<MomentMatrix> {
    let off = usize::from(shifted);
    let dim = order + 1;
    if s.is_exact() {
        let vals: Vec<Rat> = (0..2 * order + 1).map(|k| s.get_exact(k + off)).collect::<Result<_>>()?;
        Ok(MomentMatrix::Exact((0..dim).map(|i| (0..dim).map(|j| vals[i + j].clone()).collect()).collect()))
    } else {
        let vals: Vec<f64> = (0..2 * order + 1).map(|k| s.get_f64(k + off)).collect::<Result<_>>()?;
        Ok(MomentMatrix::Float((0..dim).map(|i| (0..dim).map(|j| vals[i + j]).collect()).collect()))
    }
}

fn ser_rats<S: Serializer>(v: &Option<Vec<Rat>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.collect_seq(v.iter().map(|r| r.to_string())),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsdResult {
    pub mode: PsdMode,
    pub min_eigenvalue: f64,
    /// Leading principal minors `det H[0..k, 0..k]`, `k = 1..=dim`, exact path only.
    #[serde(serialize_with = "ser_rats")]
    pub leading_minors: Option<Vec<Rat>>,
    /// Whether the all-principal-minors fallback was needed.
    pub used_all_minors: bool,
    pub psd: bool,
}

/// Determinant by Bareiss fraction-free elimination with row pivoting.
pub fn det_bareiss(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Exact determinant of a rational matrix: rows are scaled to integers first.
pub fn det_exact(m: &[Vec<Rat>]) -> Rat {
    let mut scale = BigInt::one();
    let rows: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
            scale *= &l;
            row.iter().map(|r| (r * Rat::from_integer(l.clone())).to_integer()).collect()
        })
        .collect();
    Rat::new(det_bareiss(&rows), scale)
}

fn submatrix(m: &[Vec<Rat>], idx: &[usize]) -> Vec<Vec<Rat>> {
    idx.iter().map(|&i| idx.iter().map(|&j| m[i][j].clone()).collect()).collect()
}

/// Largest dimension for which the all-principal-minors fallback is attempted.
pub const MAX_FALLBACK_DIM: usize = 16;

/// PSD test. The exact path checks leading principal minors and falls back to
/// every principal minor when one of them vanishes; the float path uses the
/// smallest eigenvalue against `1e-10 (1 + trace)`.
pub fn psd_check(m: &MomentMatrix, mode: PsdMode) -> Result<PsdResult> {
    let dim = m.dim();
    let f = m.to_f64();
    let min_eigenvalue = if dim == 0 {
        0.0
    } else {
        f.clone().symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    };
    match (mode, m) {
        (PsdMode::FloatEig, _) => {
            let tol = 1e-10 * (1.0 + f.trace().abs());
            Ok(PsdResult {
                mode,
                min_eigenvalue,
                leading_minors: None,
                used_all_minors: false,
                psd: min_eigenvalue >= -tol,
            })
        }
        (PsdMode::ExactMinors, MomentMatrix::Float(_)) => Err(Error::InvalidArgument(
            "exact minors need an exact matrix; use the float mode".into(),
        )),
        (PsdMode::ExactMinors, MomentMatrix::Exact(a)) => {
            let minors: Vec<Rat> = (1..=dim).map(|k| det_exact(&submatrix(a, &(0..k).collect::<Vec<_>>()))).collect();
            let degenerate = minors.iter().any(Zero::is_zero);
            let psd = if !degenerate {
                minors.iter().all(|d| d.is_positive())
            } else {
                if dim > MAX_FALLBACK_DIM {
                    return Err(Error::InvalidArgument(format!(
                        "singular leading minor in a {dim}x{dim} matrix; all-minors fallback limited to {MAX_FALLBACK_DIM}"
                    )));
                }
                (1u32..(1 << dim)).all(|mask| {
                    let idx: Vec<usize> = (0..dim).filter(|i| mask & (1 << i) != 0).collect();
                    !det_exact(&submatrix(a, &idx)).is_negative()
                })
            };
            Ok(PsdResult {
                mode,
                min_eigenvalue,
                leading_minors: Some(minors),
                used_all_minors: degenerate,
                psd,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HankelReport {
    pub order: usize,
    pub kind: HankelKind,
    #[serde(flatten)]
    pub result: PsdResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub sequence: String,
    pub n_max: usize,
    pub reports: Vec<HankelReport>,
    /// Conjunction of all report verdicts.
    pub stieltjes: bool,
}

impl Certificate {
    /// First failing report in order of `(order, kind)`.
    pub fn first_failure(&self) -> Option<&HankelReport> {
        self.reports.iter().find(|r| !r.result.psd)
    }
}

/// Hankel reports for `H_N(s)` and `H_N(Es)`, `0 <= N <= n_max`.
pub fn stieltjes_certificate(s: &MomentSeq, n_max: usize, mode: PsdMode) -> Result<Certificate> {
    let jobs: Vec<(usize, HankelKind)> = (0..=n_max)
        .flat_map(|n| [(n, HankelKind::Plain), (n, HankelKind::Shifted)])
        .collect();
    let reports = jobs
        .par_iter()
        .map(|&(order, kind)| {
            let m = hankel(s, order, kind == HankelKind::Shifted)?;
            Ok(HankelReport {
                order,
                kind,
                result: psd_check(&m, mode)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let stieltjes = reports.iter().all(|r| r.result.psd);
    Ok(Certificate {
        sequence: s.label.clone(),
        n_max,
        reports,
        stieltjes,
    })
}

fn log_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `s_n <= M^n (2n)!` for every `n <= n_max`, compared in the log domain;
/// near-ties are settled exactly.
pub fn carleman_bound_check(s: &MomentSeq, m: f64, n_max: usize) -> Result<bool> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::InvalidArgument(format!("Carleman constant must be positive, got {m}")));
    }
    for n in 0..=n_max {
        let rhs = n as f64 * m.ln() + log_factorial(2 * n);
        let ok = if s.is_exact() {
            let sn = s.get_exact(n)?;
            if !sn.is_positive() {
                true
            } else {
                let lhs = rat_ln(&sn);
                if (lhs - rhs).abs() > 1e-9 * rhs.abs().max(1.0) {
                    lhs < rhs
                } else {
                    let mr = Rat::from_float(m).expect("finite");
                    let bound = num_traits::Pow::pow(&mr, n as u32) * Rat::from_integer(factorial(2 * n));
                    sn <= bound
                }
            }
        } else {
            let sn = s.get_f64(n)?;
            sn <= 0.0 || sn.ln() <= rhs + 1e-12 * rhs.abs().max(1.0)
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}
