//! Exact linear algebra over GF(2) and the small binary fields GF(2^m).

mod bitvec;
pub mod field;
mod matrix;
mod toeplitz;

pub use bitvec::{dot, hardcore_bit, BitVector, MAX_LEN};
pub use field::{field_mul, FieldElement};
pub use matrix::{mat_vec, random_matrix, BitMatrix};
pub use toeplitz::{toeplitz_apply, ToeplitzMatrix};
