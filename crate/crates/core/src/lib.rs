//! Compiler and evaluator for first-order Trotter circuits of Pauli-sum
//! Hamiltonians.
//!
//! The pipeline orders a Hamiltonian's terms with one of several strategies
//! ([`ordering`]), synthesizes the Trotter circuit with an ancilla-parity
//! construction and interface gate cancellation ([`circuit`]), and scores
//! the result by CNOT count, diamond distance to the exact evolution, and
//! Hellinger metrics under depolarizing noise ([`simulation`], [`bench`]).

pub mod bench;
pub mod circuit;
pub mod error;
pub mod grouping;
pub mod hamiltonian;
pub mod ordering;
pub mod pauli;
pub mod sequencer;
pub mod simulation;
pub mod tsp;

pub use error::{HsimError, Result};
pub use hamiltonian::{parse_hamiltonian, random_hamiltonian, serialize_hamiltonian, Hamiltonian};
pub use ordering::{order, Ordering, Strategy};
pub use pauli::{sequence_cnot_cost, Pauli, PauliString, PauliTerm};
