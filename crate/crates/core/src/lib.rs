pub mod cli;
pub mod combinat;
pub mod ensembles;
pub mod error;
pub mod growth;
pub mod kernels;
pub mod linalg;
pub mod quadrature;
pub mod rng;
pub mod specfun;
pub mod stats;
pub mod verify;
pub mod zeta;

pub use error::{Error, Result};
