pub mod asymptotic;
pub mod error;
pub mod laplace;
pub mod modal;
pub mod signal;
pub mod solver;
pub mod transform;
pub mod verify;
pub mod specfun;

pub use error::{Error, Result};
