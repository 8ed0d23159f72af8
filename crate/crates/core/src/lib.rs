//! Building blocks for a hardware-efficient variational quantum eigensolver.
//!
//! The crate is `no_std` compatible (it needs `alloc`); disable the default
//! `std` feature to build it for targets without an operating system. File IO,
//! configuration and experiment orchestration live in the `hevqe` crate.
//!
//! Conventions used throughout:
//! - qubit 0 is the leftmost letter of a textual Pauli string;
//! - state vectors and density matrices are big-endian in the qubit index, so
//!   qubit 0 is the most significant bit of a basis index;
//! - spin-orbitals are listed spin-up first, then spin-down.

#![cfg_attr(not(feature = "std"), no_std)]
#![allow(clippy::needless_range_loop, clippy::manual_is_multiple_of)]

extern crate alloc;

pub mod ansatz;
pub mod error;
pub mod estimator;
pub mod fermion;
pub mod hamiltonian;
pub mod linalg;
pub mod pauli;
pub mod sim;
pub mod spsa;

pub use error::{Error, Result};
pub use hamiltonian::{PauliTerm, QubitHamiltonian, TpbGrouping};
pub use pauli::{Pauli, PauliString, Phase};

/// Chemical accuracy in Hartree.
pub const CHEMICAL_ACCURACY: f64 = 0.0016;

/// Random generator used for every stochastic routine in the crate.
///
/// ChaCha is counter based, so independent streams are obtained with
/// [`rand_chacha::ChaCha8Rng::set_stream`] on a shared seed.
pub type Rng = rand_chacha::ChaCha8Rng;

/// Seeded generator for stream `stream` of `seed`.
pub fn rng_stream(seed: u64, stream: u64) -> Rng {
    use rand::SeedableRng;
    let mut rng = Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub(crate) mod prelude {
    pub use alloc::collections::BTreeMap;
    pub use alloc::format;
    pub use alloc::string::{String, ToString};
    pub use alloc::vec;
    pub use alloc::vec::Vec;
    #[allow(unused_imports)]
    pub use num_traits::Float;
}
