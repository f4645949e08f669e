//! Operator algebra on coefficient sequences.
//!
//! Every operator in play acts on monomials as `z^n -> c(n) z^{n+s}` (a
//! weighted shift) or is a finite sum of such operators. Weights are exact
//! rationals; floating point only enters when an operator is applied to a
//! [`CoeffSeq`](crate::CoeffSeq).

mod adjoint;
mod diagonal;
pub mod expr;
mod matrix;
mod shift;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};

pub use adjoint::{
    adjoint_generic, adjoint_of, adjoint_pairing_check, commutator_diag_formula,
    commutator_diag_operator, composed_adjoint, CommutatorPair,
};
pub use diagonal::{
    diag_a, diag_d0, diag_e, diag_unitary, lambda_table, DiagonalOp, LambdaTable, UnitaryKind,
};
pub use matrix::{commutator_matrix, OpMatrix};
pub use shift::{LinearOp, WeightedShiftOp};

pub type Rat = BigRational;

/// The four base operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseOp {
    /// Backward shift `(f(z) - f(0)) / z`.
    R0,
    /// Integration `int_0^z f`.
    I,
    /// Differentiation.
    Dz,
    /// Multiplication by `z`.
    Mz,
}

impl BaseOp {
    pub const ALL: [BaseOp; 4] = [BaseOp::R0, BaseOp::I, BaseOp::Dz, BaseOp::Mz];

    pub fn name(self) -> &'static str {
        match self {
            BaseOp::R0 => "R0",
            BaseOp::I => "I",
            BaseOp::Dz => "D",
            BaseOp::Mz => "Mz",
        }
    }

    pub fn op(self) -> WeightedShiftOp {
        match self {
            BaseOp::R0 => WeightedShiftOp::new(-1, "R0", |_| Rat::one()),
            BaseOp::I => WeightedShiftOp::new(1, "I", |n| ratio(1, n as i64 + 1)),
            BaseOp::Dz => WeightedShiftOp::new(-1, "D", |n| int(n as i64)),
            BaseOp::Mz => WeightedShiftOp::new(1, "Mz", |_| Rat::one()),
        }
    }
}

impl std::str::FromStr for BaseOp {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "R0" => Ok(BaseOp::R0),
            "I" => Ok(BaseOp::I),
            "D" | "Dz" => Ok(BaseOp::Dz),
            "Mz" => Ok(BaseOp::Mz),
            other => Err(crate::Error::InvalidArgument(format!("unknown base operator `{other}`"))),
        }
    }
}

pub(crate) fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub(crate) fn ratio(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// `base^e` for a possibly negative exponent; `base` must be nonzero when `e < 0`.
pub(crate) fn powi(base: &Rat, e: i64) -> Rat {
    if e >= 0 {
        Pow::pow(base, e as u32)
    } else {
        Rat::one() / Pow::pow(base, (-e) as u32)
    }
}
