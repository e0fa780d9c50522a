pub mod angle;
pub mod arith;
pub mod cijump;
pub mod cli;
pub mod error;
pub mod hiprec;
pub mod indexiter;
pub mod json;
pub mod reebcount;
pub mod symplin;

pub use error::{Error, Result};
