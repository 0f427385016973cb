//! Exact computation with complete filtered shifted A-infinity algebras:
//! Maurer-Cartan sets, nerves and their homotopy groups, gauge actions,
//! homotopy transfer, and the commutator L-infinity structure, over Q or F_p.

pub mod error;
pub mod scalar;
pub mod linalg;
pub mod dga;
pub mod cochains;
pub mod ainfty;
pub mod mc;
pub mod nerve;
pub mod homotopy;
pub mod linfty;
pub mod defrep;
pub mod doc;
pub mod gen;
pub mod suite;

pub use error::{Error, Result};
