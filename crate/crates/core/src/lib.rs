//! Primality proofs from rings of elliptic periods.

pub mod arith;
pub mod basis;
pub mod cm;
pub mod convolution;
pub mod criteria;
pub mod curve;
pub mod demo;
pub mod error;
pub mod interval;
pub mod lattice;
pub mod periods;
pub mod rng;
pub mod selftest;
pub mod velu;

pub use error::{Error, Result};
