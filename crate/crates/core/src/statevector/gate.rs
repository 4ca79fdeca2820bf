use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Primitive gate kinds understood by the simulator.
///
/// `Phase` and `PhaseRotation` share the unitary `diag(1, e^{iθ})`; the
/// rotation variant marks gates emitted by Fourier-basis arithmetic so the
/// resource estimator can price them separately.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum GateKind {
    Hadamard,
    PauliX,
    PauliZ,
    Phase(f64),
    PhaseRotation(f64),
    Swap,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::Swap => 2,
            _ => 1,
        }
    }

    /// True for kinds whose unitary is diagonal in the computational basis.
    pub fn is_diagonal(self) -> bool {
        matches!(
            self,
            GateKind::PauliZ | GateKind::Phase(_) | GateKind::PhaseRotation(_)
        )
    }

    /// True for kinds that permute basis states without phases.
    pub fn is_classical(self) -> bool {
        matches!(self, GateKind::PauliX | GateKind::Swap)
    }

    pub fn inverse(self) -> Self {
        match self {
            GateKind::Phase(t) => GateKind::Phase(-t),
            GateKind::PhaseRotation(t) => GateKind::PhaseRotation(-t),
            other => other,
        }
    }

    /// Phase applied to the `|1⟩` component of a diagonal kind.
    pub(crate) fn diagonal_phase(self) -> Option<Complex64> {
        match self {
            GateKind::PauliZ => Some(Complex64::new(-1.0, 0.0)),
            GateKind::Phase(t) | GateKind::PhaseRotation(t) => Some(Complex64::from_polar(1.0, t)),
            _ => None,
        }
    }

    /// 2×2 matrix in row-major order, for single-target kinds.
    pub fn matrix(self) -> Option<[[Complex64; 2]; 2]> {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        match self {
            GateKind::Hadamard => {
                let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
                Some([[h, h], [h, -h]])
            }
            GateKind::PauliX => Some([[zero, one], [one, zero]]),
            GateKind::Swap => None,
            k => k.diagonal_phase().map(|p| [[one, zero], [zero, p]]),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::Hadamard => "H",
            GateKind::PauliX => "X",
            GateKind::PauliZ => "Z",
            GateKind::Phase(_) => "PHASE",
            GateKind::PhaseRotation(_) => "ROT",
            GateKind::Swap => "SWAP",
        }
    }

    pub fn angle(self) -> Option<f64> {
        match self {
            GateKind::Phase(t) | GateKind::PhaseRotation(t) => Some(t),
            _ => None,
        }
    }
}

/// One gate with its target wires and (anti-)control conditions.
///
/// The gate acts when every control wire is `|1⟩` and every anti-control wire
/// is `|0⟩`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateOp {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    pub controls: Vec<usize>,
    pub anti_controls: Vec<usize>,
}

impl GateOp {
    fn single(kind: GateKind, target: usize) -> Self {
        GateOp {
            kind,
            targets: vec![target],
            controls: Vec::new(),
            anti_controls: Vec::new(),
        }
    }

    pub fn h(target: usize) -> Self {
        Self::single(GateKind::Hadamard, target)
    }

    pub fn x(target: usize) -> Self {
        Self::single(GateKind::PauliX, target)
    }

    pub fn z(target: usize) -> Self {
        Self::single(GateKind::PauliZ, target)
    }

    pub fn phase(target: usize, angle: f64) -> Self {
        Self::single(GateKind::Phase(angle), target)
    }

    pub fn rotation(target: usize, angle: f64) -> Self {
        Self::single(GateKind::PhaseRotation(angle), target)
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self::x(target).controlled_by(&[control])
    }

    pub fn swap(a: usize, b: usize) -> Self {
        GateOp {
            kind: GateKind::Swap,
            targets: vec![a, b],
            controls: Vec::new(),
            anti_controls: Vec::new(),
        }
    }

    pub fn controlled_by(mut self, wires: &[usize]) -> Self {
        self.controls.extend_from_slice(wires);
        self
    }

    pub fn anti_controlled_by(mut self, wires: &[usize]) -> Self {
        self.anti_controls.extend_from_slice(wires);
        self
    }

    pub fn inverse(&self) -> Self {
        GateOp {
            kind: self.kind.inverse(),
            ..self.clone()
        }
    }

    pub fn n_conditions(&self) -> usize {
        self.controls.len() + self.anti_controls.len()
    }

    /// Every wire the gate reads or writes.
    pub fn wires(&self) -> impl Iterator<Item = usize> + '_ {
        self.targets
            .iter()
            .chain(&self.controls)
            .chain(&self.anti_controls)
            .copied()
    }

    /// Checks target count, range and pairwise disjointness.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        if self.targets.len() != self.kind.arity() {
            return Err(Error::Wiring(format!(
                "{} expects {} target(s), got {:?}",
                self.kind.name(),
                self.kind.arity(),
                self.targets
            )));
        }
        let mut wires: Vec<usize> = self.wires().collect();
        if let Some(&w) = wires.iter().find(|&&w| w >= n_qubits) {
            return Err(Error::Wiring(format!(
                "wire {w} out of range for {n_qubits} qubits"
            )));
        }
        wires.sort_unstable();
        if let Some(pair) = wires.windows(2).find(|p| p[0] == p[1]) {
            return Err(Error::Wiring(format!(
                "wire {} used twice in {self}",
                pair[0]
            )));
        }
        Ok(())
    }

    pub(crate) fn control_mask(&self) -> usize {
        self.controls.iter().fold(0, |m, &w| m | (1 << w))
    }
}

fn fmt_list(f: &mut fmt::Formatter<'_>, wires: &[usize]) -> fmt::Result {
    for (i, w) in wires.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{w}")?;
    }
    Ok(())
}

/// Text dump format: `KIND targets=<list> controls=<list> anti=<list> angle=<radians>`.
impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} targets=", self.kind.name())?;
        fmt_list(f, &self.targets)?;
        f.write_str(" controls=")?;
        fmt_list(f, &self.controls)?;
        f.write_str(" anti=")?;
        fmt_list(f, &self.anti_controls)?;
        write!(f, " angle={}", self.kind.angle().unwrap_or(0.0))
    }
}
