//! q-arithmetic primitives and the truncated power series engine.

pub mod ddouble;
mod qarith;
mod series;

pub use qarith::{
    q_binomial, q_binomial_with, q_bracket, q_factorial, q_factorial_with, q_pochhammer, q_pochhammer_inf,
    q_pochhammer_with, Precision, QParam, ROOT_OF_UNITY_GUARD,
};
pub use series::{SafeRadius, TruncatedSeries, DEFAULT_TAIL_TOL};
