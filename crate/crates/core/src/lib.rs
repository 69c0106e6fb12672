//! Exact counting of representations of canonical and squid algebras over
//! finite fields, and the identities relating those counts to Kac
//! polynomials.

pub mod enumerate;
pub mod error;
pub mod gf;
pub mod kacpoly;
pub mod lattice;
pub mod presentations;
pub mod series;
pub mod suite;
pub mod torsionpair;

pub use error::{Error, Result};
