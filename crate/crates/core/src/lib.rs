//! Free-fermion Hamiltonians, their symmetries, and the tenfold-way
//! classification.
//!
//! The crate is organised bottom-up: [`linalg`] supplies dense complex
//! matrices and anti-linear maps, [`fock`] and [`nambu`] build second- and
//! first-quantized Hamiltonians, [`clifford`] and [`symmetry`] carry the
//! algebraic machinery, and [`classify`] and [`homotopy`] put the pieces
//! together. [`conformance`] runs the end-to-end checks shared by the test
//! suite and the command-line self test.

pub mod linalg;
pub mod fock;
pub mod nambu;
pub mod clifford;
pub mod symmetry;
pub mod homotopy;
pub mod classify;
pub mod conformance;
