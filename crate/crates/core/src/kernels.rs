//! Reproducing kernels of the Fock, `H_p` and `F_p` spaces.
//!
//! Every kernel value is produced twice: once by summing its defining power
//! series in `t = z conj(w)`, once by a closed form (Touchard polynomial for
//! `H_p`, hypergeometric term recurrence for `F_p`). The gap between the two is
//! reported alongside the values.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::coeffspace::{inner, CoeffSeq, KernelSpec, Space};
use crate::compensated::DdComplex;
use crate::error::{Error, Result};
use crate::specfun::{horner_biguint, hyper_1s2s, touchard_deflated_coeffs};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelValue {
    #[serde(rename = "series")]
    pub series_value: Complex64,
    #[serde(rename = "closed")]
    pub closed_value: Complex64,
    #[serde(rename = "gap")]
    pub abs_gap: f64,
    pub terms_used: usize,
    /// Magnitude of the last series term kept; a truncation diagnostic.
    pub last_term: f64,
}

impl KernelValue {
    fn new(series_value: Complex64, closed_value: Complex64, terms: usize, last_term: f64) -> Self {
        KernelValue {
            series_value,
            closed_value,
            abs_gap: (series_value - closed_value).norm(),
            terms_used: terms + 1,
            last_term,
        }
    }
}

/// `sum_{n <= terms} (n+1)^e t^n / n!`, summed in double-double so that the
/// cancellation for `Re t < 0` does not eat the result.
fn weighted_exp_series(t: Complex64, e: i32, terms: usize) -> (Complex64, f64) {
    let mut tn = DdComplex::from_c64(Complex64::new(1.0, 0.0));
    let mut sum = tn;
    let mut last = 1.0;
    for n in 1..=terms {
        tn = tn.mul_c64(t).div_f64(n as f64);
        let term = tn.scale(((n + 1) as f64).powi(e));
        last = term.to_c64().norm();
        sum = sum.add(term);
    }
    (sum.to_c64(), last)
}

/// `e^t T_{2p+1}(t) / t` with the division done on the coefficients, so `t = 0` is regular.
pub fn kernel_hp_closed(p: u32, t: Complex64) -> Result<Complex64> {
    let deflated = touchard_deflated_coeffs(2 * p as usize + 1)?;
    Ok(t.exp() * horner_biguint(&deflated, t))
}

/// Reproducing kernel of `H_p`: `sum (n+1)^{2p} (z conj w)^n / n!`.
pub fn kernel_hp(p: u32, z: Complex64, w: Complex64, terms: usize) -> Result<KernelValue> {
    let t = z * w.conj();
    let (series, last) = weighted_exp_series(t, 2 * p as i32, terms);
    let closed = kernel_hp_closed(p, t)?;
    Ok(KernelValue::new(series, closed, terms, last))
}

/// Reproducing kernel of `F_p`: `sum (z conj w)^n / ((n+1)^{2p} n!)`.
pub fn kernel_fp(p: u32, z: Complex64, w: Complex64, terms: usize) -> KernelValue {
    let t = z * w.conj();
    let (series, last) = weighted_exp_series(t, -2 * p as i32, terms);
    let closed = hyper_1s2s(p, t, terms);
    KernelValue::new(series, closed, terms, last)
}

pub fn kernel(spec: KernelSpec, z: Complex64, w: Complex64, terms: usize) -> Result<KernelValue> {
    match spec.space {
        Space::Fock => kernel_hp(0, z, w, terms),
        Space::Hp => kernel_hp(spec.p, z, w, terms),
        Space::Fp => Ok(kernel_fp(spec.p, z, w, terms)),
    }
}

/// Coefficients of `K(., w)`: `conj(w)^n / weight_n` for `n <= truncation`.
pub fn kernel_section(spec: KernelSpec, w: Complex64, truncation: usize) -> CoeffSeq {
    let e = -spec.power() as i32;
    let wc = w.conj();
    let mut term = Complex64::new(1.0, 0.0);
    let mut coeffs = Vec::with_capacity(truncation + 1);
    for n in 0..=truncation {
        if n > 0 {
            term = term * wc / n as f64;
        }
        coeffs.push(term * ((n + 1) as f64).powi(e));
    }
    CoeffSeq::new(coeffs).expect("finite kernel section")
}

/// `|<f, K(., w)> - f(w)|` with the kernel section materialized at degree `truncation`.
pub fn reproduce_check(spec: KernelSpec, f: &CoeffSeq, w: Complex64, truncation: usize) -> Result<f64> {
    if let Some(d) = (truncation + 1..=f.truncation()).find(|&d| f.get(d) != Complex64::default()) {
        return Err(Error::InvalidArgument(format!(
            "f has a nonzero coefficient at degree {d} beyond truncation {truncation}"
        )));
    }
    let section = kernel_section(spec, w, truncation);
    Ok((inner(spec, f, &section) - f.eval(w)).norm())
}

/// Gram matrix `[K(z_i, z_j)]` from the closed-form kernel.
pub fn gram_matrix(spec: KernelSpec, points: &[Complex64], terms: usize) -> Result<DMatrix<Complex64>> {
    let n = points.len();
    let mut m = DMatrix::from_element(n, n, Complex64::default());
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = kernel(spec, points[i], points[j], terms)?.closed_value;
        }
    }
    Ok(m)
}

/// Smallest eigenvalue of a Hermitian matrix (the upper triangle is trusted).
pub fn hermitian_min_eigenvalue(m: &DMatrix<Complex64>) -> f64 {
    let sym = (m + m.adjoint()).scale(0.5);
    sym.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}
