//! Quantum search for feasible job schedules on a dense state-vector simulator.
//!
//! The crate builds two search pipelines for a scheduling satisfiability problem
//! (machines × jobs, spacing windows, unit-capacity resources):
//!
//! * **full search**: a Hadamard wall over every data qubit, with an oracle that
//!   checks time windows and spacing via Fourier-basis arithmetic plus resource
//!   overlaps;
//! * **reduced search**: a quantum-walk preparation that produces the uniform
//!   superposition over feasible paths only, so the oracle checks resources alone.
//!
//! Both run fixed-point amplitude amplification on [`statevector::StateVector`],
//! and are cross-checked against brute-force counts from [`problem`].
//!
//! Wire order is little-endian throughout: bit `j` of a basis index is wire `j`.

pub mod analysis;
pub mod circuits;
pub mod error;
pub mod io;
mod par;
pub mod problem;
pub mod qarith;
pub mod search;
pub mod statevector;

pub use error::{Error, Result};
pub use par::ExecPolicy;
