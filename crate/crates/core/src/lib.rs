//! Exact formal power series engine and numerical harness for the
//! functional differential equation `f' = exp(f^-1)` (compositional
//! inverse) and its self-composition relatives.
//!
//! - [`fps`]: truncated series over exact rationals (multiply, compose,
//!   revert, exp, derivative).
//! - [`funcsolve`]: degree-by-degree formal solvers and coefficient
//!   diagnostics.
//! - [`picard`]: numerical Picard iteration on a grid.
//! - [`rungekutta`]: fixed-step explicit Runge-Kutta integration.
//! - [`pade`]: exact Padé approximants.

pub mod error;
pub mod fps;
pub mod funcsolve;
pub mod pade;
pub mod picard;
mod powers;
pub mod rational;
pub mod rungekutta;

pub use error::{Error, Result};
pub use fps::TruncatedSeries;
pub use funcsolve::{EquationKind, Residual, SequenceReport, SequenceRow};
pub use pade::RationalFunction;
pub use picard::{GridFunction, PicardOrbit};
pub use rational::Rational;
pub use rungekutta::{ButcherTableau, IvpSystem};
