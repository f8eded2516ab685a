//! Binary Egyptian fractions: exact counts of the solutions of
//! `a/n = 1/x + 1/y`, the Dirichlet-character and Euler-factor identities
//! behind them, and parallel range scans of their moments and distribution.
//!
//! * [`arith`]: smallest-prime-factor sieve, factorizations, `d(n^2)`, `omega`, `Omega`.
//! * [`characters`] / [`cyclo`]: Dirichlet characters mod `a` with exact values.
//! * [`egyptian`]: `R(n;a)` by brute force, divisor counting and character sums.
//! * [`dirichlet_series`]: `F(p^k)`, the coefficient identity, the leading Euler product.
//! * [`moments`]: `sum R`, `sum R^2`, the quadratic-character deviation, Turan sums.
//! * [`distribution`]: empirical CDFs against the normal law, normal-order fractions.
//! * [`cli`] / [`verify`]: the command-line experiments and invariant suites.

pub mod arith;
pub mod characters;
pub mod cli;
pub mod cyclo;
pub mod dirichlet_series;
pub mod distribution;
pub mod egyptian;
pub mod error;
pub mod moments;
pub mod par;
pub mod verify;

pub use error::{Error, Result};
