pub mod bundle;
pub mod ce;
pub mod error;
pub mod fixtures;
pub mod linalg;
pub mod multilinear;
pub mod point;
pub mod sym;
pub mod transfer;

pub use error::{Error, Result};
pub use linalg::*;
