pub mod enumerate;
pub mod error;
pub mod experiment;
pub mod intmat;
pub mod lattice;
pub mod limits;
pub mod pairs;
pub mod quadrature;
pub mod reduce;
pub mod rng;
pub mod sampler;
pub mod special;
pub mod stats;

pub use error::{LabError, Result};
