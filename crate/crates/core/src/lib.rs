//! Constructive toolkit for f-differential-privacy noise.
//!
//! The pieces, bottom to top:
//!
//! - [`tradeoff`]: tradeoff-function algebra — the `(eps, delta)` and
//!   Gaussian-DP curves, shift families of log-concave bases, pointwise
//!   composition, fixed points `f(1-c) = c` with their total-variation
//!   and pure-DP summaries, exact Neyman-Pearson ROC curves for finite
//!   distributions, and the Cauchy-vs-Cauchy curve.
//! - [`cnd`]: continuous canonical noise distributions built from the
//!   cdf recurrence `F(x) = f(F(x+1))`, with quantiles, seeded
//!   sampling, window concentration, and sub-exponential tail/moment
//!   audits; the Tulap reference cdf as an independent oracle.
//! - [`logconcave`]: the log-concave CND of an infinitely divisible
//!   family via `F(-t) = f_t(1/2)`, and stochastic-dominance audits
//!   against rival noises.
//! - [`discrete`]: integer-valued CNDs — rounding construction, the
//!   unique sensitivity-1 pmf, named comparison distributions, the
//!   sensitivity-2 pure-DP family, property verification, and discrete
//!   dominance audits.
//! - [`audit`]: anti-concentration window bounds and the radius ratio
//!   check, applied to arbitrary noise descriptions.
//! - [`cli`]: command frontend emitting golden values, tables, and the
//!   figure datasets.
//!
//! Everything is immutable after construction and evaluation is pure;
//! sampling takes an explicit seed.

pub mod audit;
pub mod cli;
pub mod cnd;
pub mod discrete;
pub mod error;
pub mod logconcave;
pub mod normal;
pub mod report;
pub mod rng;
pub mod spec;
pub mod tradeoff;

pub use error::{Error, Result};
