//! Fidelity lower bounds for entangled multi-qubit states from a small number
//! of Pauli expectations.

pub mod bounds;
pub mod decomposition;
pub mod dense;
pub mod error;
pub mod export;
pub mod gcs;
pub mod iontrap;
pub mod linalg;
pub mod pauli;
pub mod space;
pub mod states;
pub mod stats;

pub use error::{Error, Result};
