//! Bell and restricted Bell polynomials, exactly and asymptotically, and the
//! concentration of vertex degrees in Erdős–Rényi graphs `G(n, ρ/n)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`partitions`] builds Stirling-type tables and the exact polynomials
//!   `B_k(x)`, `B̃_k(x)` (no singleton blocks) and the even-block family, with
//!   a brute-force set-partition enumerator as an independent oracle.
//! * [`evalnum`] evaluates them at real `x`: high-precision Horner, the
//!   Poisson-moment (Dobinski) series, and log-domain evaluation for large `k`.
//! * [`lambert`] solves `u e^u = β` and `u (e^u − 1) = β`.
//! * [`asymptotics`] evaluates the limiting forms of `(1/k) ln B_k(x)` in the
//!   sublinear, linear and superlinear regimes and compares them to exact values.
//! * [`moments`] computes exact moments of Bernoulli sums.
//! * [`tailsim`] turns restricted Bell values into Markov-type tail bounds and
//!   checks them against seeded Monte Carlo over vertex degrees.
//! * [`cli`] and [`verify`] back the `bellcord` binary.
//!
//! See the `examples/` directory for one runnable program per capability.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod evalnum;
pub mod lambert;
pub mod moments;
pub mod partitions;
pub mod tailsim;
pub mod verify;

pub use error::{Error, Result};

pub use evalnum::LogValue;
pub use partitions::{ExactPolynomial, StirlingTable, TableKind};
