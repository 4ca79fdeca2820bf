use std::fmt;

use serde::{Deserialize, Serialize};

use super::gate::GateOp;
use crate::error::{Error, Result};

/// Named half-open span `[start, end)` of a circuit's op list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub name: String,
    pub start: usize,
    pub end: usize,
}

/// Ordered gate list over a fixed number of wires.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    n_qubits: usize,
    ops: Vec<GateOp>,
    segments: Vec<Segment>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            n_qubits,
            ops: Vec::new(),
            segments: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn push(&mut self, op: GateOp) -> Result<()> {
        op.validate(self.n_qubits)?;
        self.ops.push(op);
        Ok(())
    }

    /// Appends every op of `other`, carrying its segments along.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.n_qubits > self.n_qubits {
            return Err(Error::Wiring(format!(
                "cannot append a {}-qubit circuit to a {}-qubit circuit",
                other.n_qubits, self.n_qubits
            )));
        }
        let offset = self.ops.len();
        self.ops.extend(other.ops.iter().cloned());
        self.segments.extend(other.segments.iter().map(|s| Segment {
            name: s.name.clone(),
            start: s.start + offset,
            end: s.end + offset,
        }));
        Ok(())
    }

    /// Appends `other` and records it as one named segment.
    pub fn append_segment(&mut self, name: &str, other: &Circuit) -> Result<()> {
        let start = self.ops.len();
        self.append(other)?;
        self.segments.push(Segment {
            name: name.to_string(),
            start,
            end: self.ops.len(),
        });
        Ok(())
    }

    /// Reversed op list with each op inverted; segments are mirrored.
    pub fn inverse(&self) -> Circuit {
        let len = self.ops.len();
        Circuit {
            n_qubits: self.n_qubits,
            ops: self.ops.iter().rev().map(GateOp::inverse).collect(),
            segments: self
                .segments
                .iter()
                .rev()
                .map(|s| Segment {
                    name: format!("{}†", s.name),
                    start: len - s.end,
                    end: len - s.start,
                })
                .collect(),
        }
    }

    /// Same ops on a register of `n_qubits` wires (must not shrink below use).
    pub fn widened(&self, n_qubits: usize) -> Result<Circuit> {
        let mut out = Circuit::new(n_qubits);
        for op in &self.ops {
            out.push(op.clone())?;
        }
        out.segments = self.segments.clone();
        Ok(out)
    }

    /// Set of wires any op touches, sorted.
    pub fn touched_wires(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n_qubits];
        for w in self.ops.iter().flat_map(GateOp::wires) {
            seen[w] = true;
        }
        (0..self.n_qubits).filter(|&w| seen[w]).collect()
    }
}

/// One gate per line in the dump format of [`GateOp`]'s `Display`.
impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for op in &self.ops {
            writeln!(f, "{op}")?;
        }
        Ok(())
    }
}
