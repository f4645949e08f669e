//! Generalized Fock spaces of entire functions.
//!
//! Three weighted spaces of power series share one coefficient representation
//! ([`CoeffSeq`]) and differ only in the weight attached to `z^n`:
//!
//! | space  | weight of `z^n`        |
//! |--------|------------------------|
//! | Fock   | `n!`                   |
//! | `H_p`  | `n! / (n+1)^(2p)`      |
//! | `F_p`  | `n! * (n+1)^(2p)`      |
//!
//! On top of that the crate provides the reproducing kernels of each space
//! (evaluated by two independent routes), the algebra of weighted shift
//! operators with space-dependent adjoints, the generalized Segal-Bargmann
//! transforms from `L^2(R)`, and exact Hankel certificates for the associated
//! Stieltjes moment sequences.

pub mod bargmann;
pub mod cli;
pub mod coeffspace;
mod compensated;
pub mod error;
pub mod kernels;
pub mod moments;
pub mod operators;
pub mod specfun;
pub mod verify;

pub use coeffspace::{CoeffSeq, KernelSpec, Space};
pub use error::{Error, Result};
pub use num_complex::Complex64;
