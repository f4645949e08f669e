use num_traits::{Signed, Zero};

use super::{Rat, WeightedShiftOp};
use crate::error::{Error, Result};

/// Finite section of an operator: column `j` holds the coefficients of `T z^j`
/// truncated to degree `N`.
///
/// Products of sections of degree-raising operators are wrong near the
/// truncation edge. Each matrix carries a conservative count `exact_cols` of
/// leading columns that agree with the untruncated operator, and `reach`, an
/// upper bound on how far a column's support extends past its own degree.
#[derive(Debug, Clone, PartialEq)]
pub struct OpMatrix {
    truncation: usize,
    cols: Vec<Vec<Rat>>,
    exact_cols: usize,
    reach: i64,
}

impl OpMatrix {
    pub fn zeros(truncation: usize) -> Self {
        let dim = truncation + 1;
        OpMatrix {
            truncation,
            cols: vec![vec![Rat::zero(); dim]; dim],
            exact_cols: dim,
            reach: 0,
        }
    }

    pub fn identity(truncation: usize) -> Self {
        let mut m = Self::zeros(truncation);
        for j in 0..m.dim() {
            m.cols[j][j] = Rat::from_integer(1.into());
        }
        m
    }

    pub fn from_shift(op: &WeightedShiftOp, truncation: usize) -> Self {
        let mut m = Self::zeros(truncation);
        for j in 0..m.dim() {
            if let Some(i) = op.image_degree(j).filter(|&i| i <= truncation) {
                m.cols[j][i] = op.weight(j);
            }
        }
        m.reach = op.shift();
        m.exact_cols = (m.dim() as i64 - op.shift().max(0)).max(0) as usize;
        m
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn dim(&self) -> usize {
        self.truncation + 1
    }

    /// Number of leading columns unaffected by truncation.
    pub fn exact_cols(&self) -> usize {
        self.exact_cols
    }

    pub fn reach(&self) -> i64 {
        self.reach
    }

    /// Entry in row `i`, column `j`.
    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.cols[j][i]
    }

    pub fn column(&self, j: usize) -> &[Rat] {
        &self.cols[j]
    }

    fn check_dim(&self, other: &OpMatrix) -> Result<()> {
        if self.truncation != other.truncation {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    /// `self * other`, i.e. the section of `self ∘ other`.
    pub fn mul(&self, other: &OpMatrix) -> Result<OpMatrix> {
        self.check_dim(other)?;
        let dim = self.dim();
        let mut cols = vec![vec![Rat::zero(); dim]; dim];
        for (j, out) in cols.iter_mut().enumerate() {
            for (k, b) in other.cols[j].iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                for (i, a) in self.cols[k].iter().enumerate() {
                    if !a.is_zero() {
                        out[i] += a * b;
                    }
                }
            }
        }
        let exact = (self.exact_cols as i64 - other.reach).clamp(0, dim as i64) as usize;
        Ok(OpMatrix {
            truncation: self.truncation,
            cols,
            exact_cols: exact.min(other.exact_cols),
            reach: self.reach + other.reach,
        })
    }

    fn zip_with(&self, other: &OpMatrix, f: impl Fn(&Rat, &Rat) -> Rat) -> Result<OpMatrix> {
        self.check_dim(other)?;
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| f(x, y)).collect())
            .collect();
        Ok(OpMatrix {
            truncation: self.truncation,
            cols,
            exact_cols: self.exact_cols.min(other.exact_cols),
            reach: self.reach.max(other.reach),
        })
    }

    pub fn add(&self, other: &OpMatrix) -> Result<OpMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &OpMatrix) -> Result<OpMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn pow(&self, k: u32) -> OpMatrix {
        let mut acc = OpMatrix::identity(self.truncation);
        for _ in 0..k {
            acc = self.mul(&acc).expect("same truncation");
        }
        acc
    }

    /// Equality on the first `cols` columns.
    pub fn agrees_on(&self, other: &OpMatrix, cols: usize) -> bool {
        self.truncation == other.truncation
            && self.cols.iter().zip(&other.cols).take(cols).all(|(a, b)| a == b)
    }

    /// Largest `|a_ij - b_ij|` over the first `cols` columns, exactly.
    pub fn max_defect(&self, other: &OpMatrix, cols: usize) -> Result<Rat> {
        self.check_dim(other)?;
        let mut worst = Rat::zero();
        for (a, b) in self.cols.iter().zip(&other.cols).take(cols) {
            for (x, y) in a.iter().zip(b) {
                let d = (x - y).abs();
                if d > worst {
                    worst = d;
                }
            }
        }
        Ok(worst)
    }

    /// CSV with exact `num/den` entries, rows by output degree.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for i in 0..self.dim() {
            let row: Vec<String> = (0..self.dim()).map(|j| self.cols[j][i].to_string()).collect();
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }
}

/// `A B - B A`.
pub fn commutator_matrix(a: &OpMatrix, b: &OpMatrix) -> Result<OpMatrix> {
    a.mul(b)?.sub(&b.mul(a)?)
}
