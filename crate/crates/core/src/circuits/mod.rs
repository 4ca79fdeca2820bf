//! State preparations, constraint oracles and the two reflections of
//! amplitude amplification.
//!
//! Both oracles are folded into a single marked reflection: compute every
//! condition onto ancillas, apply one multi-controlled phase, uncompute.

mod oracle;
mod prep;

pub use oracle::{
    build_condition, build_path_flags, build_resource_flags, build_violation_counter, Condition,
};
pub use prep::{build_prep, build_uniform_prep, build_walk_prep};

use crate::error::Result;
use crate::problem::{Instance, LayoutOptions, Mode, QubitLayout};
use crate::statevector::{Circuit, GateKind, GateOp};

/// Preparation and marked condition of one instance, ready for search.
#[derive(Clone, Debug)]
pub struct PreparedPipeline {
    pub prep: Circuit,
    /// Computes the condition onto ancillas; its inverse uncomputes it.
    pub marked_condition: Circuit,
    pub condition: Condition,
    pub layout: QubitLayout,
    pub mode: Mode,
}

impl PreparedPipeline {
    pub fn build(instance: &Instance, mode: Mode, options: LayoutOptions) -> Result<Self> {
        let layout = QubitLayout::build(instance, mode, options)?;
        Self::from_layout(instance, layout)
    }

    pub fn from_layout(instance: &Instance, layout: QubitLayout) -> Result<Self> {
        let prep = build_prep(instance, &layout)?;
        let (marked_condition, condition) = build_condition(instance, &layout)?;
        Ok(PreparedPipeline {
            prep,
            marked_condition,
            condition,
            mode: layout.mode(),
            layout,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.layout.total_wires()
    }
}

/// Ops multiplying by `e^{i·angle}` exactly the basis states where every
/// `controls` wire is `|1⟩` and every `anti` wire is `|0⟩`.
pub fn pattern_phase(controls: &[usize], anti: &[usize], angle: f64) -> Vec<GateOp> {
    if let Some((&t, rest)) = controls.split_last() {
        vec![GateOp {
            kind: GateKind::Phase(angle),
            targets: vec![t],
            controls: rest.to_vec(),
            anti_controls: anti.to_vec(),
        }]
    } else if let Some((&t, rest)) = anti.split_last() {
        vec![
            GateOp::x(t),
            GateOp::phase(t, angle).anti_controlled_by(rest),
            GateOp::x(t),
        ]
    } else {
        Vec::new()
    }
}

fn phase_circuit(n: usize, controls: &[usize], anti: &[usize], angle: f64) -> Result<Circuit> {
    let mut c = Circuit::new(n);
    for op in pattern_phase(controls, anti, angle) {
        c.push(op)?;
    }
    Ok(c)
}

/// Multiplies the all-zero state of wires `0..n` by `e^{i·angle}`.
pub fn zero_phase(n: usize, angle: f64) -> Result<Circuit> {
    let wires: Vec<usize> = (0..n).collect();
    phase_circuit(n, &[], &wires, angle)
}

/// Compute conditions, phase the marked pattern, uncompute.
pub fn build_marked_reflection(pipeline: &PreparedPipeline, angle: f64) -> Result<Circuit> {
    let n = pipeline.n_qubits();
    let cond = &pipeline.condition;
    let mut c = Circuit::new(n);
    c.append_segment("condition", &pipeline.marked_condition)?;
    c.append_segment("marked phase", &phase_circuit(n, &cond.controls, &cond.anti, angle)?)?;
    c.append_segment("condition†", &pipeline.marked_condition.inverse())?;
    Ok(c)
}

/// `prep† · phase(|0…0⟩) · prep`: multiplies the prepared state by
/// `e^{i·angle}` and fixes its orthogonal complement.
pub fn build_initial_reflection(pipeline: &PreparedPipeline, angle: f64) -> Result<Circuit> {
    let n = pipeline.n_qubits();
    let mut c = Circuit::new(n);
    c.append_segment("prep†", &pipeline.prep.inverse())?;
    c.append_segment("zero phase", &zero_phase(n, angle)?)?;
    c.append_segment("prep", &pipeline.prep)?;
    Ok(c)
}

/// Text dump, one gate per line.
pub fn dump(circuit: &Circuit) -> String {
    circuit.to_string()
}
