pub mod error;
pub mod extract;
pub mod harness;
pub mod linkpat;
pub mod poly;
pub mod qkz;
pub mod tsscpp;

pub use error::Error;
pub use poly::{ExactPoly, Monomial, PolyMatrix, Var};
