pub mod error;
pub mod ab_core;
pub mod freemodule;
pub mod instances;
pub mod outcome;
pub mod signs;
pub mod sym_coalgebra;
pub mod tensor_coalgebra;
pub mod verify;

pub use error::{Error, Result};
