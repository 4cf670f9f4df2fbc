pub mod error;
pub mod flagbasis;
pub mod geometry;
pub mod orthocell;
pub mod report;
pub mod scalars;
pub mod suite;
pub mod uqrep;
pub mod weyl;

pub use error::{Error, Result};
