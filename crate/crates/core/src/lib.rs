pub mod catalog;
pub mod cli;
pub mod error;
pub mod expr;
pub mod maxent;
pub mod quadrature;
pub mod scale;
pub mod sim;
pub mod transforms;

pub use error::{Error, ErrorKind, Result};
