pub mod basis;
pub mod cli;
pub mod criteria;
pub mod error;
pub mod io;
pub mod matkernel;
pub mod povm;
pub mod random;
pub mod reproduce;
pub mod states;
pub mod sweep;

pub use error::{Error, Result};
