//! Segal-Bargmann transforms and their generalizations onto `H_p` and `F_p`.
//!
//! The kernels are expanded in `z` with the normalized Hermite functions:
//! `A(z,x) = sum z^n xi_n(x) / sqrt(n!)`, and the `p`-deformed kernels insert
//! the diagonal factor `(n+1)^p` (onto `H_p`) or `(n+1)^{-p}` (onto `F_p`).

mod quadrature;
mod transform;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;

pub use quadrature::{QuadratureRule, DEFAULT_NODES};
pub use transform::{inverse_b, transform, transform_coeffs, L2Function, TransformValue, TAIL_TOLERANCE};

use crate::coeffspace::{CoeffSeq, Space};
use crate::error::{Error, Result};
use crate::operators::{diag_d0, lambda_table, BaseOp, LinearOp, Rat};
use crate::specfun::{hermite_he, xi0_scale, HermiteEval, StirlingTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BargmannKind {
    /// Classical, onto Fock.
    B,
    /// Onto `H_p`.
    Bp,
    /// Onto `F_p`.
    SBp,
}

impl BargmannKind {
    /// Diagonal factor applied to the `n`-th coefficient.
    pub fn factor(self, p: u32, n: usize) -> f64 {
        match self {
            BargmannKind::B => 1.0,
            BargmannKind::Bp => ((n + 1) as f64).powi(p as i32),
            BargmannKind::SBp => ((n + 1) as f64).powi(-(p as i32)),
        }
    }

    /// Target space of the transform.
    pub fn space(self) -> Space {
        match self {
            BargmannKind::B => Space::Fock,
            BargmannKind::Bp => Space::Hp,
            BargmannKind::SBp => Space::Fp,
        }
    }
}

impl std::str::FromStr for BargmannKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "b" => Ok(BargmannKind::B),
            "bp" => Ok(BargmannKind::Bp),
            "sbp" => Ok(BargmannKind::SBp),
            other => Err(Error::InvalidArgument(format!("unknown transform kind `{other}`"))),
        }
    }
}

/// `A(z,x) = (2 pi)^{-1/4} exp(-x^2/4 - z^2/2 + z x)`.
pub fn kernel_a(z: Complex64, x: f64) -> Complex64 {
    (Complex64::new(-x * x / 4.0, 0.0) - z * z / 2.0 + z * x).exp() * xi0_scale()
}

/// Coefficients of `A(., x)` in `z`: `xi_n(x) / sqrt(n!)`, `n <= truncation`.
pub fn kernel_a_coeffs(x: f64, truncation: usize) -> CoeffSeq {
    let xi = HermiteEval::new(truncation, x);
    let mut inv_sqrt_fact = 1.0;
    let coeffs = xi
        .values
        .iter()
        .enumerate()
        .map(|(n, v)| {
            if n > 0 {
                inv_sqrt_fact /= (n as f64).sqrt();
            }
            Complex64::new(v * inv_sqrt_fact, 0.0)
        })
        .collect();
    CoeffSeq::new(coeffs).expect("finite Hermite values")
}

/// `sum_{n <= truncation} d_n z^n xi_n(x) / sqrt(n!)` with the factor of `kind`.
pub fn kernel_series(kind: BargmannKind, p: u32, z: Complex64, x: f64, truncation: usize) -> Complex64 {
    let xi = HermiteEval::new(truncation, x);
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::default();
    for (n, v) in xi.values.iter().enumerate() {
        if n > 0 {
            term = term * z / (n as f64).sqrt();
        }
        sum += term * (v * kind.factor(p, n));
    }
    sum
}

/// Truncated generating series of `A`.
pub fn kernel_a_series(z: Complex64, x: f64, truncation: usize) -> Complex64 {
    kernel_series(BargmannKind::B, 0, z, x, truncation)
}

/// `A_p(z,x) = sum (n+1)^p z^n xi_n(x) / sqrt(n!)`.
pub fn kernel_ap(p: u32, z: Complex64, x: f64, truncation: usize) -> Complex64 {
    kernel_series(BargmannKind::Bp, p, z, x, truncation)
}

/// `calA_p(z,x) = sum z^n xi_n(x) / ((n+1)^p sqrt(n!))`.
pub fn kernel_cal_ap(p: u32, z: Complex64, x: f64, truncation: usize) -> Complex64 {
    kernel_series(BargmannKind::SBp, p, z, x, truncation)
}

/// `d^k/dz^k A(z,x) = He_k(x - z) A(z,x)`.
pub fn dka(k: usize, z: Complex64, x: f64) -> Complex64 {
    hermite_he(k, Complex64::new(x, 0.0) - z) * kernel_a(z, x)
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `sum_{j<=p} sum_{k<=j} C(p,j) S(j,k) Mz^k D^k`, the normal-ordered form of
/// `(Id + Mz D)^p`.
pub fn stirling_form_op(p: u32) -> Result<LinearOp> {
    let table = StirlingTable::global();
    if p as usize > table.max_n() {
        return Err(Error::OutOfRange(format!("p = {p} exceeds the Stirling table (max {})", table.max_n())));
    }
    let (mz, d) = (BaseOp::Mz.op(), BaseOp::Dz.op());
    let mut acc = LinearOp::zero();
    for j in 0..=p {
        let c = binomial(p, j);
        for k in 0..=j {
            let s = BigInt::from(table.get(j as usize, k as usize)?.clone());
            if s.is_zero() {
                continue;
            }
            let coeff = Rat::from_integer(&c * s);
            let term = mz.pow(k).compose(&d.pow(k));
            acc = acc.add(&LinearOp::from(term).scaled(&coeff));
        }
    }
    Ok(acc)
}

/// Applies [`stirling_form_op`] to a Bargmann-side sequence, keeping degree `truncation`.
pub fn stirling_form_bp(p: u32, f_b: &CoeffSeq, truncation: usize) -> Result<CoeffSeq> {
    Ok(stirling_form_op(p)?.apply(&f_b.resized(truncation)))
}

/// Exact version of [`stirling_form_bp`].
pub fn stirling_form_bp_exact(p: u32, f_b: &[Rat]) -> Result<Vec<Rat>> {
    Ok(stirling_form_op(p)?.apply_exact(f_b))
}

/// `|A_{p+1} - A_p - Mz (Id + D Mz)^p D A|` at `(z, x)`, the left side by the
/// kernel series and the right by applying the operator to the coefficients of `A`.
pub fn recurrence_gap(p: u32, z: Complex64, x: f64, truncation: usize) -> f64 {
    let lhs = kernel_ap(p + 1, z, x, truncation) - kernel_ap(p, z, x, truncation);
    let mz = LinearOp::from(BaseOp::Mz.op());
    let d = LinearOp::from(BaseOp::Dz.op());
    let op = mz.compose(&LinearOp::identity().add(&d.compose(&mz)).pow(p)).compose(&d);
    let rhs = op.apply(&kernel_a_coeffs(x, truncation)).eval(z);
    (lhs - rhs).norm()
}

/// `<A_p^z, A_p^w>_{L^2}` (for `Space::Hp`) or `<calA_p^z, calA_p^w>_{L^2}`
/// (for `Space::Fp`) by quadrature in `x`.
pub fn kernel_gram(
    space: Space,
    p: u32,
    z: Complex64,
    w: Complex64,
    quad: &QuadratureRule,
    truncation: usize,
) -> Complex64 {
    let kind = match space {
        Space::Fock => BargmannKind::B,
        Space::Hp => BargmannKind::Bp,
        Space::Fp => BargmannKind::SBp,
    };
    quad.integrate_complex(|x| kernel_series(kind, p, z, x, truncation) * kernel_series(kind, p, w, x, truncation).conj())
}

/// `(D0 + I R0)^p`, which equals `(R0 I)^p`.
pub fn d0_ir0_power(p: u32) -> LinearOp {
    let ir0 = BaseOp::I.op().compose(&BaseOp::R0.op());
    LinearOp::from(diag_d0().to_shift()).add(&ir0.into()).pow(p)
}

/// `sum_{j<=p} sum_{k<=j} C(p,j) D0^{p-j} Lambda_{k,j} I^k R0^k`, the expansion of
/// `(D0 + I R0)^p` through the coefficients of `(I R0)^j`.
///
/// The `j = 0` term contributes `D0^p` through `Lambda_{0,0} = Id`.
pub fn lambda_expansion(p: u32) -> LinearOp {
    let table = lambda_table(p as usize);
    let d0 = diag_d0();
    let (i, r0) = (BaseOp::I.op(), BaseOp::R0.op());
    let mut acc = LinearOp::zero();
    for j in 0..=p {
        let c = Rat::from_integer(binomial(p, j));
        for k in 0..=j {
            let lam = table.get(k as usize, j as usize);
            let term = d0
                .pow(p - j)
                .mul(&lam)
                .to_shift()
                .compose(&i.pow(k))
                .compose(&r0.pow(k));
            acc = acc.add(&LinearOp::from(term).scaled(&c));
        }
    }
    acc
}

/// Both sides of the generating identity `sum_{p<=P} A_p / p! = exp(Id + Mz D) A`,
/// at degree `<= truncation`: the partial sum over `p`, then the diagonal `e^{n+1}`
/// applied to the coefficients of `A`.
pub fn generating_probe(p_max: u32, z: Complex64, x: f64, truncation: usize) -> (Complex64, Complex64) {
    let mut inv_fact = 1.0;
    let mut partial = Complex64::default();
    for p in 0..=p_max {
        if p > 0 {
            inv_fact /= p as f64;
        }
        partial += kernel_ap(p, z, x, truncation) * inv_fact;
    }
    let exp_route = kernel_a_coeffs(x, truncation)
        .map_indexed(|n, a| a * ((n + 1) as f64).exp())
        .eval(z);
    (partial, exp_route)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{kernel_fp, kernel_hp};
    use crate::operators::{diag_unitary, UnitaryKind};
    use std::f64::consts::E;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kernel_a_values() {
        assert!((kernel_a(c(0.0, 0.0), 0.0).re - xi0_scale()).abs() < 1e-16);
        assert!((kernel_a(c(1.0, 0.0), 0.0).re - xi0_scale() * (-0.5f64).exp()).abs() < 1e-15);
        let x = 1.3;
        assert!((kernel_a(c(0.0, 0.0), x).re - crate::specfun::hermite_fn(0, x)).abs() < 1e-16);
    }

    #[test]
    fn series_matches_closed_a() {
        for &z in &[c(2.0, 0.0), c(-1.0, 1.5), c(0.3, -2.0)] {
            for &x in &[-4.0, -1.0, 0.0, 2.5, 4.0] {
                let got = kernel_a_series(z, x, 60);
                let want = kernel_a(z, x);
                assert!((got - want).norm() < 1e-12, "z={z} x={x}");
            }
        }
    }

    #[test]
    fn p0_kernels_collapse() {
        let (z, x) = (c(0.4, 0.9), -0.7);
        assert!((kernel_ap(0, z, x, 60) - kernel_a(z, x)).norm() < 1e-12);
        assert!((kernel_cal_ap(0, z, x, 60) - kernel_a(z, x)).norm() < 1e-12);
    }

    #[test]
    fn ap_at_origin_is_xi0() {
        let x = 0.8;
        let want = xi0_scale() * (-x * x / 4.0f64).exp();
        for p in 0..4 {
            assert!((kernel_ap(p, c(0.0, 0.0), x, 30).re - want).abs() < 1e-16);
            assert!((kernel_cal_ap(p, c(0.0, 0.0), x, 30).re - want).abs() < 1e-16);
        }
    }

    #[test]
    fn ap_by_operator_route() {
        let (z, x) = (c(0.5, 0.0), 0.0);
        let op = LinearOp::identity().add(&BaseOp::Mz.op().compose(&BaseOp::Dz.op()).into());
        let via_op = op.apply(&kernel_a_coeffs(x, 60)).eval(z);
        assert!((via_op - kernel_ap(1, z, x, 60)).norm() < 1e-14);
    }

    #[test]
    fn cal_ap_by_diagonal_route() {
        let (z, x) = (c(1.0, 0.0), 1.0);
        let v = diag_unitary(UnitaryKind::Vp, 2).to_shift();
        let via_diag = v.apply(&kernel_a_coeffs(x, 60)).eval(z);
        assert!((via_diag - kernel_cal_ap(2, z, x, 60)).norm() <= 1e-11);
    }

    #[test]
    fn derivative_examples() {
        let (z, x) = (c(0.2, 0.1), 1.1);
        assert_eq!(dka(0, z, x), kernel_a(z, x));
        assert!((dka(1, z, x) - (c(x, 0.0) - z) * kernel_a(z, x)).norm() < 1e-15);
    }

    #[test]
    fn derivative_by_finite_difference() {
        let (z, x, h) = (c(0.2, 0.0), 1.1, 1e-3);
        let f = |z: Complex64| dka(2, z, x);
        let fd = (f(z - 2.0 * h) - 8.0 * f(z - h) + 8.0 * f(z + h) - f(z + 2.0 * h)) / (12.0 * h);
        assert!((fd - dka(3, z, x)).norm() < 1e-6 * dka(3, z, x).norm().max(1.0));
    }

    #[test]
    fn stirling_form_examples() {
        let z3 = CoeffSeq::monomial(3, c(1.0, 0.0), 5);
        let out = stirling_form_bp(1, &z3, 5).unwrap();
        assert_eq!(out.get(3), c(4.0, 0.0));
        let f = CoeffSeq::from_real(&[1.0, -2.0, 0.5]).unwrap();
        assert_eq!(stirling_form_bp(0, &f, 2).unwrap(), f);
        let op = stirling_form_op(3).unwrap();
        let w = op.as_shift().unwrap();
        for n in 0..20 {
            assert_eq!(w.weight(n), Rat::from_integer(BigInt::from((n + 1).pow(3))));
        }
    }

    #[test]
    fn recurrence_examples() {
        assert!(recurrence_gap(0, c(0.7, -0.3), 0.4, 60) < 1e-10);
        assert_eq!(recurrence_gap(3, c(0.0, 0.0), 1.2, 40), 0.0);
        assert!(recurrence_gap(2, c(0.8, 0.0), 0.3, 60) < 1e-9);
    }

    #[test]
    fn gram_integrals() {
        let q = QuadratureRule::gauss_hermite(DEFAULT_NODES).unwrap();
        let one = c(1.0, 0.0);
        let g = kernel_gram(Space::Hp, 1, one, one, &q, 40);
        assert!((g - 5.0 * E).norm() < 1e-7);
        let g = kernel_gram(Space::Fp, 1, one, one, &q, 40);
        assert!((g - kernel_fp(1, one, one, 60).closed_value).norm() < 1e-7);
        let g = kernel_gram(Space::Hp, 2, c(0.5, 0.3), c(0.0, 0.0), &q, 40);
        assert!((g - 1.0).norm() < 1e-9);
        let k = kernel_hp(2, c(0.5, 0.3), c(1.2, 0.0), 60).unwrap();
        let g = kernel_gram(Space::Hp, 2, c(0.5, 0.3), c(1.2, 0.0), &q, 40);
        assert!((g - k.closed_value).norm() < 1e-7);
    }

    #[test]
    fn lambda_expansion_is_r0i_power() {
        for p in 0..=3 {
            let direct = d0_ir0_power(p);
            let expanded = lambda_expansion(p);
            let (a, b) = (direct.as_shift().unwrap(), expanded.as_shift().unwrap());
            for n in 0..=25 {
                let want = Rat::new(BigInt::from(1), BigInt::from(n + 1).pow(p));
                assert_eq!(a.weight(n), want, "p={p} n={n}");
                assert_eq!(b.weight(n), want, "p={p} n={n}");
            }
        }
    }

    #[test]
    fn generating_identity() {
        let (lhs, rhs) = generating_probe(20, c(0.1, 0.05), 0.6, 20);
        assert!((lhs - rhs).norm() < 1e-8);
    }
}
