//! Exact matching, covering and hypermatching polynomials.

pub mod corpus;
pub mod coverings;
pub mod distributions;
mod error;
pub mod graphs;
pub mod hypermatchings;
pub mod matchings;
pub mod poly;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
