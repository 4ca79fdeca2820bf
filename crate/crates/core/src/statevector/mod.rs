//! Dense state-vector simulation.
//!
//! Multi-controlled gates are applied natively: a gate only visits the basis
//! indices whose control bits match, so a 20-control phase costs `2^(n-21)`
//! updates. Gate loops may run on the rayon pool; every loop index owns a
//! disjoint set of amplitudes so results do not depend on the thread count.

mod circuit;
mod gate;
mod mask;
mod state;

pub use circuit::{Circuit, Segment};
pub use gate::{GateKind, GateOp};
pub use mask::BasisMask;
pub use state::{StateVector, MAX_QUBITS};

/// `|0…0⟩` on `n_qubits` wires.
pub fn init_state(n_qubits: usize) -> crate::Result<StateVector> {
    StateVector::new(n_qubits)
}
