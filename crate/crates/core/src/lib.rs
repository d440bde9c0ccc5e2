pub mod arithmetic;
pub mod cli;
pub mod config;
pub mod correlations;
pub mod error;
pub mod field;
pub mod kacrice;
pub mod nodal;
pub mod special;

pub use error::{Error, Result};
