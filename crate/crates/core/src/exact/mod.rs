//! Exact arithmetic kernel.

pub mod frac;
pub mod gcd;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod scalar;
pub mod var;

pub use frac::Frac;
pub use gcd::QPoly;
pub use linalg::Matrix;
pub use poly::{Coeff, Mono, Poly};
pub use rational::Q;
pub use scalar::{ArithError, SPoly, Scalar};
pub use var::Var;
