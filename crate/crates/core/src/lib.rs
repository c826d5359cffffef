//! Trisection diagrams of 4-manifolds and the invariants built from Hopf
//! triplets, weak Hopf triplets and admissible-labelling counts.

pub mod bracket;
pub mod diagram;
pub mod error;
pub mod group;
pub mod hopf;
pub mod labelcount;
pub mod linalg;
pub mod moves;
pub mod pairing;
pub mod rational;
pub mod scalar;
pub mod selftest;
pub mod tensor;
pub mod triplet;

pub use error::{Error, Result};
pub use scalar::Scalar;
