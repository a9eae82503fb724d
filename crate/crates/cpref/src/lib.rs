//! File formats, an external model checker bridge and the command-line
//! front end for the `cpref-core` reasoner.

pub mod cli;
mod error;
pub mod external;
pub mod xml;

pub use error::{Error, Result};
