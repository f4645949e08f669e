use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use super::{OpMatrix, Rat};
use crate::coeffspace::CoeffSeq;

type WeightFn = Arc<dyn Fn(usize) -> Rat + Send + Sync>;

/// `z^n -> c(n) z^{n + shift}`; monomials whose image degree would be negative map to zero.
#[derive(Clone)]
pub struct WeightedShiftOp {
    shift: i64,
    weight: WeightFn,
    label: String,
}

impl fmt::Debug for WeightedShiftOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightedShiftOp")
            .field("shift", &self.shift)
            .field("label", &self.label)
            .finish()
    }
}

impl WeightedShiftOp {
    pub fn new(
        shift: i64,
        label: impl Into<String>,
        weight: impl Fn(usize) -> Rat + Send + Sync + 'static,
    ) -> Self {
        WeightedShiftOp {
            shift,
            weight: Arc::new(weight),
            label: label.into(),
        }
    }

    pub fn identity() -> Self {
        Self::new(0, "Id", |_| Rat::one())
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Degree of `T z^n`, or `None` when `T z^n = 0` structurally.
    pub fn image_degree(&self, n: usize) -> Option<usize> {
        let d = n as i64 + self.shift;
        (d >= 0).then_some(d as usize)
    }

    /// `c(n)`; zero where the image degree is negative.
    pub fn weight(&self, n: usize) -> Rat {
        match self.image_degree(n) {
            Some(_) => (self.weight)(n),
            None => Rat::zero(),
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &WeightedShiftOp) -> WeightedShiftOp {
        let (outer, inner_op) = (self.clone(), inner.clone());
        let label = format!("{}*{}", self.label, inner.label);
        WeightedShiftOp::new(self.shift + inner.shift, label, move |n| {
            match inner_op.image_degree(n) {
                Some(m) => outer.weight(m) * inner_op.weight(n),
                None => Rat::zero(),
            }
        })
    }

    pub fn pow(&self, k: u32) -> WeightedShiftOp {
        let mut acc = WeightedShiftOp::identity();
        for _ in 0..k {
            acc = self.compose(&acc);
        }
        acc.with_label(format!("({})^{k}", self.label))
    }

    pub fn scaled(&self, c: Rat) -> WeightedShiftOp {
        let op = self.clone();
        WeightedShiftOp::new(self.shift, format!("{c}*{}", self.label), move |n| op.weight(n) * &c)
    }

    /// Sum of two shifts with the same degree change.
    pub fn plus(&self, other: &WeightedShiftOp) -> WeightedShiftOp {
        assert_eq!(self.shift, other.shift, "weighted shifts must share a shift to be added");
        let (a, b) = (self.clone(), other.clone());
        WeightedShiftOp::new(self.shift, format!("{}+{}", self.label, other.label), move |n| {
            a.weight(n) + b.weight(n)
        })
    }

    /// Applies to a float sequence, keeping its truncation. The second value
    /// reports whether a nonzero coefficient was pushed past the truncation.
    pub fn apply_flagged(&self, f: &CoeffSeq) -> (CoeffSeq, bool) {
        let n_max = f.truncation();
        let mut out = vec![Complex64::default(); n_max + 1];
        let mut dropped = false;
        for (n, &a) in f.coeffs().iter().enumerate() {
            if a == Complex64::default() {
                continue;
            }
            let Some(m) = self.image_degree(n) else { continue };
            let c = self.weight(n);
            if c.is_zero() {
                continue;
            }
            if m > n_max {
                dropped = true;
                continue;
            }
            out[m] += a * c.to_f64().expect("finite weight");
        }
        (CoeffSeq::new(out).expect("finite image"), dropped)
    }

    pub fn apply(&self, f: &CoeffSeq) -> CoeffSeq {
        self.apply_flagged(f).0
    }

    /// Applies to an exact sequence, keeping its length.
    pub fn apply_exact(&self, a: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); a.len()];
        for (n, an) in a.iter().enumerate() {
            if an.is_zero() {
                continue;
            }
            if let Some(m) = self.image_degree(n).filter(|&m| m < a.len()) {
                out[m] += an * self.weight(n);
            }
        }
        out
    }

    pub fn matrix(&self, truncation: usize) -> OpMatrix {
        OpMatrix::from_shift(self, truncation)
    }
}

/// A finite sum of weighted shifts, kept with one term per distinct shift.
#[derive(Debug, Clone, Default)]
pub struct LinearOp {
    terms: BTreeMap<i64, WeightedShiftOp>,
}

impl From<WeightedShiftOp> for LinearOp {
    fn from(op: WeightedShiftOp) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(op.shift, op);
        LinearOp { terms }
    }
}

impl LinearOp {
    pub fn zero() -> Self {
        LinearOp::default()
    }

    pub fn identity() -> Self {
        WeightedShiftOp::identity().into()
    }

    pub fn terms(&self) -> impl Iterator<Item = &WeightedShiftOp> {
        self.terms.values()
    }

    /// The single weighted shift, when the sum has exactly one term.
    pub fn as_shift(&self) -> Option<&WeightedShiftOp> {
        match self.terms.len() {
            1 => self.terms.values().next(),
            _ => None,
        }
    }

    fn push(&mut self, op: WeightedShiftOp) {
        let merged = match self.terms.remove(&op.shift) {
            Some(prev) => prev.plus(&op),
            None => op,
        };
        self.terms.insert(merged.shift, merged);
    }

    pub fn add(&self, other: &LinearOp) -> LinearOp {
        let mut out = self.clone();
        for t in other.terms() {
            out.push(t.clone());
        }
        out
    }

    pub fn scaled(&self, c: &Rat) -> LinearOp {
        let mut out = LinearOp::zero();
        for t in self.terms() {
            out.push(t.scaled(c.clone()));
        }
        out
    }

    pub fn sub(&self, other: &LinearOp) -> LinearOp {
        self.add(&other.scaled(&-Rat::one()))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinearOp) -> LinearOp {
        let mut out = LinearOp::zero();
        for a in self.terms() {
            for b in inner.terms() {
                out.push(a.compose(b));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> LinearOp {
        let mut acc = LinearOp::identity();
        for _ in 0..k {
            acc = self.compose(&acc);
        }
        acc
    }

    pub fn apply(&self, f: &CoeffSeq) -> CoeffSeq {
        self.terms().fold(CoeffSeq::zeros(f.truncation()), |acc, t| {
            acc.lin_comb(Complex64::new(1.0, 0.0), &t.apply(f), Complex64::new(1.0, 0.0))
        })
    }

    pub fn apply_exact(&self, a: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); a.len()];
        for t in self.terms() {
            for (o, v) in out.iter_mut().zip(t.apply_exact(a)) {
                *o += v;
            }
        }
        out
    }

    pub fn matrix(&self, truncation: usize) -> OpMatrix {
        self.terms()
            .map(|t| t.matrix(truncation))
            .reduce(|a, b| a.add(&b).expect("same truncation"))
            .unwrap_or_else(|| OpMatrix::zeros(truncation))
    }
}
