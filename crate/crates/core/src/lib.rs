//! Exact toric geometry for divisibility of the anticanonical class:
//! fans, torus-invariant divisors, intersection numbers, Mori cones,
//! contractions and the classification of complete toric varieties whose
//! anticanonical class is divisible by `n` or `n + 1`.
//!
//! All arithmetic is exact over `BigInt` and `BigRational`.

pub mod classifier;
pub mod constructions;
pub mod divisor;
pub mod error;
pub mod fan;
pub mod lattice;
pub mod mori;
pub mod verification;

pub use error::{Error, Result};
pub use fan::Fan;
