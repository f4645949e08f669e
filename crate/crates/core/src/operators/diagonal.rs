use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::{int, powi, ratio, Rat, WeightedShiftOp};

type EntryFn = Arc<dyn Fn(usize) -> Rat + Send + Sync>;

/// `diag(d_0, d_1, ...)` acting as `z^n -> d_n z^n`.
#[derive(Clone)]
pub struct DiagonalOp {
    entry: EntryFn,
    label: String,
}

impl fmt::Debug for DiagonalOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("DiagonalOp").field(&self.label).finish()
    }
}

impl DiagonalOp {
    pub fn new(label: impl Into<String>, entry: impl Fn(usize) -> Rat + Send + Sync + 'static) -> Self {
        DiagonalOp {
            entry: Arc::new(entry),
            label: label.into(),
        }
    }

    pub fn identity() -> Self {
        Self::new("Id", |_| Rat::one())
    }

    pub fn zero() -> Self {
        Self::new("0", |_| Rat::zero())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn entry(&self, n: usize) -> Rat {
        (self.entry)(n)
    }

    pub fn entries(&self, len: usize) -> Vec<Rat> {
        (0..len).map(|n| self.entry(n)).collect()
    }

    /// `D^{(1)} = diag(0, d_0, d_1, ...)`.
    pub fn forward(&self) -> DiagonalOp {
        self.forward_by(1)
    }

    /// `D^{(l)}`: the forward shift applied `l` times.
    pub fn forward_by(&self, l: usize) -> DiagonalOp {
        let d = self.clone();
        DiagonalOp::new(format!("{}^({l})", self.label), move |n| {
            if n < l {
                Rat::zero()
            } else {
                d.entry(n - l)
            }
        })
    }

    /// `D^{(-1)} = diag(d_1, d_2, ...)`.
    pub fn backward(&self) -> DiagonalOp {
        self.backward_by(1)
    }

    pub fn backward_by(&self, l: usize) -> DiagonalOp {
        let d = self.clone();
        DiagonalOp::new(format!("{}^(-{l})", self.label), move |n| d.entry(n + l))
    }

    pub fn mul(&self, other: &DiagonalOp) -> DiagonalOp {
        let (a, b) = (self.clone(), other.clone());
        DiagonalOp::new(format!("{}{}", self.label, other.label), move |n| a.entry(n) * b.entry(n))
    }

    pub fn add(&self, other: &DiagonalOp) -> DiagonalOp {
        let (a, b) = (self.clone(), other.clone());
        DiagonalOp::new(format!("({}+{})", self.label, other.label), move |n| a.entry(n) + b.entry(n))
    }

    pub fn sub(&self, other: &DiagonalOp) -> DiagonalOp {
        let (a, b) = (self.clone(), other.clone());
        DiagonalOp::new(format!("({}-{})", self.label, other.label), move |n| a.entry(n) - b.entry(n))
    }

    pub fn scaled(&self, c: Rat) -> DiagonalOp {
        let a = self.clone();
        DiagonalOp::new(format!("{c}{}", self.label), move |n| a.entry(n) * &c)
    }

    pub fn pow(&self, k: u32) -> DiagonalOp {
        let a = self.clone();
        DiagonalOp::new(format!("{}^{k}", self.label), move |n| powi(&a.entry(n), k as i64))
    }

    /// Entrywise inverse; only meaningful where no entry vanishes.
    pub fn inverse(&self) -> DiagonalOp {
        let a = self.clone();
        DiagonalOp::new(format!("{}^-1", self.label), move |n| Rat::one() / a.entry(n))
    }

    pub fn to_shift(&self) -> WeightedShiftOp {
        let a = self.clone();
        WeightedShiftOp::new(0, self.label.clone(), move |n| a.entry(n))
    }

    /// Entrywise equality on `0..len`.
    pub fn agrees_with(&self, other: &DiagonalOp, len: usize) -> bool {
        (0..len).all(|n| self.entry(n) == other.entry(n))
    }
}

/// `D_0 = [R0, I] = diag(1, -1/2, -1/6, ..., -1/(n(n+1)), ...)`.
pub fn diag_d0() -> DiagonalOp {
    DiagonalOp::new("D0", |n| {
        if n == 0 {
            Rat::one()
        } else {
            ratio(-1, (n * (n + 1)) as i64)
        }
    })
}

/// `A = diag(0, 1, 2, ...)`.
pub fn diag_a() -> DiagonalOp {
    DiagonalOp::new("A", |n| int(n as i64))
}

/// `E = diag(1, 1, 1/2, 1/3, ..., 1/n, ...)`.
pub fn diag_e() -> DiagonalOp {
    DiagonalOp::new("E", |n| if n == 0 { Rat::one() } else { ratio(1, n as i64) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitaryKind {
    /// `(n+1)^p`, maps Fock onto `H_p`.
    Ep,
    /// `(n+1)^{-p}`, maps Fock onto `F_p`.
    Vp,
    /// `(n+1)^{2p} = (I + Mz D)^{2p}`, maps `F_p` onto `H_p`.
    Thetap,
    /// `(n+1)^{-2p} = (R0 I)^{2p}`, inverse of `Thetap`.
    Lambdap,
}

impl std::str::FromStr for UnitaryKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "Ep" => Ok(UnitaryKind::Ep),
            "Vp" => Ok(UnitaryKind::Vp),
            "Thetap" => Ok(UnitaryKind::Thetap),
            "Lambdap" => Ok(UnitaryKind::Lambdap),
            other => Err(crate::Error::InvalidArgument(format!("unknown diagonal unitary `{other}`"))),
        }
    }
}

pub fn diag_unitary(kind: UnitaryKind, p: u32) -> DiagonalOp {
    let (e, name) = match kind {
        UnitaryKind::Ep => (p as i64, "Ep"),
        UnitaryKind::Vp => (-(p as i64), "Vp"),
        UnitaryKind::Thetap => (2 * p as i64, "Thetap"),
        UnitaryKind::Lambdap => (-2 * p as i64, "Lambdap"),
    };
    DiagonalOp::new(format!("{name}({p})"), move |n| powi(&int(n as i64 + 1), e))
}

/// Diagonal coefficients `Lambda_{k,n}` of `(I R0)^n = sum_k Lambda_{k,n} I^k R0^k`.
#[derive(Debug, Clone)]
pub struct LambdaTable {
    n_max: usize,
    table: BTreeMap<(usize, usize), DiagonalOp>,
}

impl LambdaTable {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// `Lambda_{k,n}`; zero outside the stored triangle.
    pub fn get(&self, k: usize, n: usize) -> DiagonalOp {
        self.table.get(&(k, n)).cloned().unwrap_or_else(DiagonalOp::zero)
    }
}

/// Builds `Lambda_{k,n}` for `0 <= k <= n <= n_max` by
/// `Lambda_{k,n} = Lambda_{k-1,n-1} + (sum_{l=1}^{k} D0^{(l)}) Lambda_{k,n-1}`,
/// with `Lambda_{n,n} = Id` and `Lambda_{0,n} = 0` for `n >= 1`.
/// `Lambda_{0,0} = Id`, so that `(I R0)^0 = Id` is covered by the same sum.
pub fn lambda_table(n_max: usize) -> LambdaTable {
    let d0 = diag_d0();
    let mut table: BTreeMap<(usize, usize), DiagonalOp> = BTreeMap::new();
    table.insert((0, 0), DiagonalOp::identity());
    for n in 1..=n_max {
        table.insert((0, n), DiagonalOp::zero());
        table.insert((n, n), DiagonalOp::identity());
        for k in 1..n {
            let shifts = (1..=k)
                .map(|l| d0.forward_by(l))
                .reduce(|a, b| a.add(&b))
                .expect("k >= 1");
            let prev_diag = table[&(k - 1, n - 1)].clone();
            let prev_same = table[&(k, n - 1)].clone();
            let op = prev_diag.add(&shifts.mul(&prev_same));
            table.insert((k, n), op.with_label(format!("Lambda({k},{n})")));
        }
    }
    LambdaTable { n_max, table }
}
