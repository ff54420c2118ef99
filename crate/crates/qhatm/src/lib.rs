//! File formats, emitters and the command-line frontend for [`qhatm_core`].

pub mod cli;
pub mod emit;
mod error;
pub mod schema;

pub use error::{Error, Result};
