pub mod cli;
pub mod conv;
pub mod entropy;
pub mod error;
pub mod experiments;
pub mod jsonfmt;
pub mod linalg;
pub mod magic;
pub mod states;
pub mod weyl;
pub mod zmod;

pub use error::{Error, Result};
