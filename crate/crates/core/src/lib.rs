//! Hardcore-bit list decoding over GF(2).
//!
//! The crate is `no_std` (it needs `alloc`) and contains only pure
//! algorithms: packed bit algebra, the integer Walsh–Hadamard transform,
//! oracle models for one-way functions and bit guessers, the list-decoding
//! inverter, and the extractor / generator corollaries. File formats, the
//! CLI and parallel trial scheduling live in the `gl-decode` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod error;
pub mod gf2;
pub mod inverter;
pub mod kit;
pub mod oracle;
pub mod seed;
pub mod walsh;

pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector, FieldElement, ToeplitzMatrix};
pub use walsh::Spectrum;
