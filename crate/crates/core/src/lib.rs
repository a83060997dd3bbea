//! Symbolic regression by exhaustive search over generalized expression trees.
//!
//! A candidate model is a small expression tree whose internal nodes are
//! arithmetic operators (ADD, SUB, MUL, DIV, SQRT, EXP) and whose leaves are
//! Laurent monomials `h * x1^p1 * ... * xn^pn` with bounded integer powers.
//! The search enumerates tree shapes in complexity order ([`enumerate`]),
//! discards algebraically redundant shapes, restricts leaf powers to
//! dimensionally consistent assignments when units are supplied
//! ([`dimension`]), fits the discrete and continuous parameters of each tree
//! ([`solver`]), and drives the per-tree solves as a round-robin portfolio
//! ([`scheduler`]). Data loading, noise injection, and the benchmark problem
//! registry live in [`io`] and [`bench`].

pub mod bench;
pub mod data;
pub mod dimension;
pub mod enumerate;
pub mod expr;
mod interval;
pub mod io;
pub mod report;
pub mod rng;
pub mod scheduler;
pub mod solver;

use std::fmt;

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::{de::DeserializeOwned, Serialize};

/// Scalar the numeric core is generic over. Implemented for `f32` and `f64`;
/// the search itself is specified on `f64` and the type aliases below pin
/// that choice for the I/O and benchmark layers.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + fmt::Debug
    + fmt::Display
    + fmt::LowerExp
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Shorthand for lossless construction from an `f64` literal.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("scalar conversion from f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Exact rational used for unit exponents and dimensional constraint rows.
pub type Rat = num_rational::Ratio<i64>;

pub use expr::{CandidateModel, Gentree, LMonomial, Op, ParamAssignment};

/// Default-precision instantiations used by the CLI and benchmarks.
pub type Dataset64 = data::Dataset<f64>;
pub type Model64 = expr::CandidateModel<f64>;
pub type SolverConfig64 = solver::SolverConfig<f64>;
pub type SearchReport64 = report::SearchReport<f64>;
