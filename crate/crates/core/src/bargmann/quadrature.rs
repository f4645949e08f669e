use num_complex::Complex64;

use crate::error::{Error, Result};

/// Gauss-Hermite rule rescaled to integrate over `dx` on the real line.
///
/// Built for the weight `e^{-t^2}` and mapped by `x = sqrt(2) t`; the stored
/// weights already include the factor `sqrt(2) e^{t^2}`, so
/// `int f(x) dx ~ sum_i W_i f(x_i)`, exact when `f(x) = q(x) e^{-x^2/2}` with
/// `deg q <= 2M - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Default node count.
pub const DEFAULT_NODES: usize = 200;

impl QuadratureRule {
    pub fn gauss_hermite(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("quadrature needs at least one node".into()));
        }
        let mut t = vec![0.0; m];
        let mut w = vec![0.0; m];
        let half = m.div_ceil(2);
        let mut z = 0.0f64;
        for i in 0..half {
            z = match i {
                0 => {
                    let s = (2 * m + 1) as f64;
                    s.sqrt() - 1.85575 * s.powf(-0.16667)
                }
                1 => z - 1.14 * (m as f64).powf(0.426) / z,
                2 => 1.86 * z - 0.86 * t[0],
                3 => 1.91 * z - 0.91 * t[1],
                _ => 2.0 * z - t[i - 2],
            };
            let mut converged = false;
            for _ in 0..100 {
                let (psi_m, psi_m1) = hermite_fn_pair(m, z);
                // psi_m' = sqrt(2m) psi_{m-1} - z psi_m; at a root only the first term survives
                let dz = psi_m / ((2.0 * m as f64).sqrt() * psi_m1 - z * psi_m);
                z -= dz;
                if dz.abs() <= 1e-15 * z.abs().max(1.0) {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::InvalidArgument(format!("Gauss-Hermite Newton iteration failed for M = {m}")));
            }
            let (_, psi_m1) = hermite_fn_pair(m, z);
            // w_i e^{t_i^2} = 2 / (sqrt(2m) psi_{m-1}(t_i))^2 = 1 / (m psi_{m-1}^2)
            let we = 1.0 / (m as f64 * psi_m1 * psi_m1);
            t[i] = z;
            w[i] = we;
            t[m - 1 - i] = -z;
            w[m - 1 - i] = we;
        }
        if m % 2 == 1 {
            t[m / 2] = 0.0;
        }
        let s2 = std::f64::consts::SQRT_2;
        let mut pairs: Vec<(f64, f64)> = t.iter().zip(&w).map(|(&ti, &wi)| (s2 * ti, s2 * wi)).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (nodes, weights) = pairs.into_iter().unzip();
        Ok(QuadratureRule { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    pub fn integrate_complex(&self, f: impl Fn(f64) -> Complex64) -> Complex64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| f(x) * w).sum()
    }
}

/// `(psi_m(t), psi_{m-1}(t))` for the Hermite functions orthonormal in `dt`,
/// `psi_n = e^{-t^2/2} H_n / sqrt(2^n n! sqrt(pi))`.
fn hermite_fn_pair(m: usize, t: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = std::f64::consts::PI.powf(-0.25) * (-t * t / 2.0).exp();
    for j in 1..=m {
        let next = t * (2.0 / j as f64).sqrt() * cur - ((j - 1) as f64 / j as f64).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}
