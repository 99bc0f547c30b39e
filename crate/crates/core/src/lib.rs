pub mod diagnostics;
pub mod error;
pub mod evolution;
pub mod experiment;
pub mod functionals;
pub mod ground_state;
pub mod params;
pub mod quadrature;
pub mod spectral;

pub use error::{Error, Result};
pub use params::PhysParams;
