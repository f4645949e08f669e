use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use super::quadrature::QuadratureRule;
use super::{kernel_a, kernel_series, BargmannKind};
use crate::coeffspace::CoeffSeq;
use crate::error::{Error, Result};
use crate::specfun::HermiteEval;

type Sampler = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// An element of `L^2(R)`, held as Hermite coefficients `c_n = <phi, xi_n>`,
/// as a callable, or both.
#[derive(Clone)]
pub struct L2Function {
    hermite: Option<CoeffSeq>,
    samples: Option<Sampler>,
}

impl fmt::Debug for L2Function {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("L2Function")
            .field("hermite", &self.hermite)
            .field("samples", &self.samples.as_ref().map(|_| "<fn>"))
            .finish()
    }
}

impl L2Function {
    pub fn from_hermite(coeffs: CoeffSeq) -> Self {
        L2Function {
            hermite: Some(coeffs),
            samples: None,
        }
    }

    pub fn from_fn(f: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        L2Function {
            hermite: None,
            samples: Some(Arc::new(f)),
        }
    }

    /// Both representations; see [`L2Function::consistency`].
    pub fn with_both(coeffs: CoeffSeq, f: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        L2Function {
            hermite: Some(coeffs),
            samples: Some(Arc::new(f)),
        }
    }

    /// `xi_n`.
    pub fn hermite_basis(n: usize) -> Self {
        Self::from_hermite(CoeffSeq::monomial(n, Complex64::new(1.0, 0.0), n))
    }

    /// `pi^{-1/4} e^{-x^2/2}`, unit norm.
    pub fn gaussian() -> Self {
        let c = std::f64::consts::PI.powf(-0.25);
        Self::from_fn(move |x| Complex64::new(c * (-x * x / 2.0).exp(), 0.0))
    }

    pub fn stored_coeffs(&self) -> Option<&CoeffSeq> {
        self.hermite.as_ref()
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        if let Some(f) = &self.samples {
            return f(x);
        }
        let c = self.hermite.as_ref().expect("one representation is always present");
        let xi = HermiteEval::new(c.truncation(), x);
        c.coeffs().iter().zip(&xi.values).map(|(a, v)| a * v).sum()
    }

    /// `c_0 ..= c_N`, from storage when available, otherwise by quadrature.
    pub fn hermite_coeffs(&self, truncation: usize, quad: &QuadratureRule) -> CoeffSeq {
        match &self.hermite {
            Some(c) => c.resized(truncation),
            None => extract_coeffs(|x| self.eval(x), truncation, quad),
        }
    }

    /// Largest deviation between stored coefficients and quadrature-extracted
    /// ones; `None` unless both representations are present.
    pub fn consistency(&self, quad: &QuadratureRule) -> Option<f64> {
        let (c, f) = (self.hermite.as_ref()?, self.samples.as_ref()?);
        let got = extract_coeffs(|x| f(x), c.truncation(), quad);
        Some(
            c.coeffs()
                .iter()
                .zip(got.coeffs())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max),
        )
    }

    /// `||phi||_{L^2}^2` from the Hermite coefficients (Parseval) or by quadrature.
    pub fn norm_sq(&self, quad: &QuadratureRule) -> f64 {
        match &self.hermite {
            Some(c) => c.coeffs().iter().map(|a| a.norm_sqr()).sum(),
            None => quad.integrate(|x| self.eval(x).norm_sqr()),
        }
    }
}

fn extract_coeffs(f: impl Fn(f64) -> Complex64, truncation: usize, quad: &QuadratureRule) -> CoeffSeq {
    let mut c = vec![Complex64::default(); truncation + 1];
    for (&x, &w) in quad.nodes().iter().zip(quad.weights()) {
        let fx = f(x) * w;
        if fx == Complex64::default() {
            continue;
        }
        let xi = HermiteEval::new(truncation, x);
        for (cn, v) in c.iter_mut().zip(&xi.values) {
            *cn += fx * v;
        }
    }
    CoeffSeq::new(c).expect("finite quadrature sums")
}

/// Transform value with its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransformValue {
    pub value: Complex64,
    /// Kernel integral evaluated by quadrature.
    pub direct: Complex64,
    pub route_gap: f64,
    /// `|c_N| / max_n |c_n|`.
    pub tail_diag: f64,
    pub tail_unresolved: bool,
}

/// Tail ratio above which the truncation is reported as unresolved.
pub const TAIL_TOLERANCE: f64 = 1e-8;

/// Coefficient-side image of `phi`: `c_n d_n / sqrt(n!)` with `d_n = 1`,
/// `(n+1)^p` or `(n+1)^{-p}` for `B`, `B_p`, `SB_p`.
pub fn transform_coeffs(kind: BargmannKind, p: u32, c: &CoeffSeq) -> CoeffSeq {
    let mut inv_sqrt_fact = 1.0;
    c.map_indexed(|n, a| {
        if n > 0 {
            inv_sqrt_fact /= (n as f64).sqrt();
        }
        a * kind.factor(p, n) * inv_sqrt_fact
    })
}

/// `B`, `B_p` or `SB_p` of `phi` at `z`, by the Hermite-coefficient route with
/// the kernel integral as a cross-check.
pub fn transform(
    kind: BargmannKind,
    p: u32,
    phi: &L2Function,
    z: Complex64,
    truncation: usize,
    quad: &QuadratureRule,
) -> Result<TransformValue> {
    let c = phi.hermite_coeffs(truncation, quad);
    let image = transform_coeffs(kind, p, &c);
    let value = image.eval(z);
    let direct = quad.integrate_complex(|x| {
        let k = match kind {
            BargmannKind::B => kernel_a(z, x),
            _ => kernel_series(kind, p, z, x, truncation),
        };
        k * phi.eval(x)
    });
    if !direct.is_finite() {
        return Err(Error::InvalidArgument(format!("kernel integral overflowed at z = {z}")));
    }
    let max = c.max_abs();
    let tail_diag = if max == 0.0 { 0.0 } else { c.get(truncation).norm() / max };
    Ok(TransformValue {
        value,
        direct,
        route_gap: (value - direct).norm(),
        tail_diag,
        tail_unresolved: tail_diag > TAIL_TOLERANCE,
    })
}

/// `B^{-1}`: Hermite coefficients `c_n = b_n sqrt(n!)`.
pub fn inverse_b(f: &CoeffSeq) -> L2Function {
    let mut sqrt_fact = 1.0;
    L2Function::from_hermite(f.map_indexed(|n, b| {
        if n > 0 {
            sqrt_fact *= (n as f64).sqrt();
        }
        b * sqrt_fact
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bargmann::quadrature::DEFAULT_NODES;

    fn quad() -> QuadratureRule {
        QuadratureRule::gauss_hermite(DEFAULT_NODES).unwrap()
    }

    #[test]
    fn hermite_basis_goes_to_monomials() {
        let q = quad();
        let z = Complex64::new(0.7, -0.4);
        for n in [0usize, 3, 10] {
            let phi = L2Function::from_fn(move |x| Complex64::new(crate::specfun::hermite_fn(n, x), 0.0));
            let t = transform(BargmannKind::B, 0, &phi, z, 24, &q).unwrap();
            let fact: f64 = (1..=n).map(|k| k as f64).product();
            let want = z.powu(n as u32) / fact.sqrt();
            assert!((t.value - want).norm() < 1e-10, "n={n}");
            assert!(t.route_gap < 1e-10);
        }
    }

    #[test]
    fn bp_of_xi2() {
        let q = quad();
        let z = Complex64::new(1.1, 0.3);
        let t = transform(BargmannKind::Bp, 1, &L2Function::hermite_basis(2), z, 10, &q).unwrap();
        let want = z * z * 3.0 / 2f64.sqrt();
        assert!((t.value - want).norm() < 1e-12);
        assert!(t.route_gap < 1e-9);
    }

    #[test]
    fn zero_function() {
        let q = quad();
        let phi = L2Function::from_hermite(CoeffSeq::zeros(5));
        let t = transform(BargmannKind::SBp, 2, &phi, Complex64::new(1.0, 1.0), 5, &q).unwrap();
        assert_eq!(t.value, Complex64::default());
        assert_eq!(t.tail_diag, 0.0);
    }

    #[test]
    fn gaussian_tail_flags() {
        let q = quad();
        let phi = L2Function::gaussian();
        let short = transform(BargmannKind::B, 0, &phi, Complex64::new(0.5, 0.0), 4, &q).unwrap();
        assert!(short.tail_unresolved);
        let long = transform(BargmannKind::B, 0, &phi, Complex64::new(0.5, 0.0), 60, &q).unwrap();
        assert!(!long.tail_unresolved);
        assert!(long.route_gap < 1e-9);
    }

    #[test]
    fn inverse_round_trip() {
        let f = CoeffSeq::new((0..=20).map(|n| Complex64::new(n as f64 * 0.1 - 1.0, 1.0 / (n + 1) as f64)).collect()).unwrap();
        let phi = inverse_b(&f);
        let back = transform_coeffs(BargmannKind::B, 0, phi.stored_coeffs().unwrap());
        for n in 0..=20 {
            assert!((back.get(n) - f.get(n)).norm() <= 1e-12 * f.get(n).norm().max(1.0));
        }
    }

    #[test]
    fn stored_and_sampled_agree() {
        let q = quad();
        let c = CoeffSeq::from_real(&[0.5, -0.25, 0.0, 1.0]).unwrap();
        let sampled = L2Function::from_hermite(c.clone());
        let both = L2Function::with_both(c, move |x| sampled.eval(x));
        assert!(both.consistency(&q).unwrap() < 1e-9);
    }
}
