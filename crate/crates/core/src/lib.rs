//! Exact generation of number-theoretic and combinatorial sequences, and
//! rigorous finite-range verification of monotonicity laws for their n-th
//! roots and root ratios.

pub mod harness;
pub mod kernel;
pub mod sequences;
pub mod verify;
