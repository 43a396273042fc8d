//! Exact arithmetic on rationals written as signed factorial-base located
//! words, plus the combinatorics built on top of that representation:
//!
//! * [`rational`]: canonical big rationals and rational enclosures of `1/e`.
//! * [`codec`]: the bijection between rationals and [`FactorialWord`]s.
//! * [`words`]: words, variable words, combinatorial lines, the coefficient
//!   map `g` and arithmetic-progression extraction from lines.
//! * [`dynamics`]: commuting permutations of finite uniform spaces acting as
//!   IP-systems and rational systems, with exhaustive recurrence search.
//! * [`density`]: Følner sequences in `(Q,+)`, finite-horizon densities and
//!   progression witness verification.
//! * [`cli`]: the command-line front end.

pub mod cli;
pub mod codec;
pub mod density;
pub mod dynamics;
mod error;
pub mod rational;
pub mod words;

pub use codec::{decode, encode, FactorialWord};
pub use error::{Error, Result};
pub use rational::{inv_e_enclosure, Enclosure, Rational};
