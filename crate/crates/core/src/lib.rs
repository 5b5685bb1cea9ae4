pub mod cli;
pub mod equivariant;
pub mod error;
pub mod fincat;
pub mod holim;
pub mod io;
pub mod simpl;
pub mod validation;

pub use error::{Error, Result};
