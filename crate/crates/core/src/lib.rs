pub mod circuit;
pub mod cli;
pub mod cnf;
pub mod error;
pub mod invgen;
pub mod pqe;
pub mod propgen;
pub mod reductions;
pub mod sat;
pub mod verify;

pub use error::{Error, Result};
