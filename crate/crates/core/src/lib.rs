pub mod error;
pub mod fock;
pub mod gauge;
pub mod linalg;
pub mod spectra;
pub mod twolevel;

pub use error::{Error, Result};
