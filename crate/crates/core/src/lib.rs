//! Exact return-set analysis for monomial-affine self-maps of the torus
//! G_m^N over F_p(t).

pub mod analyzer;
pub mod dynamics;
pub mod error;
pub mod fp;
pub mod lattice;
pub mod linalg;
pub mod lrs;
pub mod reduction;
pub mod seq;

pub use error::{Error, Result};
