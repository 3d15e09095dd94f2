pub mod algebra;
pub mod cli;
pub mod coeffs;
pub mod dd;
pub mod domains;
pub mod error;
pub mod eval;
pub mod gamma;
pub mod gti;
pub mod oracle;
pub mod quad;
pub mod real;
pub mod zeros;

pub use error::{Error, Result};
