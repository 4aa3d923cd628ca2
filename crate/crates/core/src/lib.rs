//! Random linear code based public-key encryption (RLCE) over GF(2^m).
//!
//! The scheme hides a generalized Reed-Solomon generator by inserting `r`
//! random columns after every code column, mixing each block of `r + 1`
//! columns with a random invertible matrix, scrambling rows and permuting
//! columns. Alongside the scheme the crate carries the tools used to audit
//! it: the square-code distinguisher, the block-equivalence construction
//! and an information-set-decoding cost model.

pub mod analysis;
pub mod gf;
pub mod grs;
pub mod linalg;
pub mod rlce;

pub use gf::{Elem, Field, GfError};
pub use grs::{Decoded, GrsCode, GrsError};
pub use linalg::{LinalgError, Matrix, Permutation};
pub use rlce::{Ciphertext, PrivateKey, PublicKey, RlceError, RlceParams};
