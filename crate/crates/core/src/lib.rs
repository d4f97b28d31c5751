//! Jackson q-difference calculus, q-special functions, a series solver for
//! linear Jackson q-difference equations, and numerical Nevanlinna
//! functionals for meromorphic functions of zero order.

pub mod error;
pub mod exec;
pub mod nevanlinna;
pub mod poly;
pub mod qcore;
pub mod qode;
pub mod qoperator;
pub mod qspecial;

pub use error::{Error, Result};
pub use exec::Exec;
pub use num_complex::Complex64;
