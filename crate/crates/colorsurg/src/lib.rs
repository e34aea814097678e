//! Color-code lattice surgery toolkit.

pub mod anyons;
pub mod decoder;
pub mod error;
pub mod estimator;
pub mod geometry;
pub mod gf2;
pub mod group;
pub mod lattice;
pub mod layout;
pub mod matching;
pub mod pauli;
pub mod surgery;
pub mod tableau;


pub use error::{Error, Result};
pub use pauli::{Pauli, PauliOperator};
pub use tableau::{Measurement, StabilizerTableau};
