use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::circuit::Circuit;
use super::gate::{GateKind, GateOp};
use super::mask::BasisMask;
use crate::error::{Error, Result};
use crate::par::{chunked_sum, for_each_index, ExecPolicy};

/// Largest register the simulator accepts (2^26 amplitudes ≈ 1 GiB).
pub const MAX_QUBITS: usize = 26;

/// Dense vector of `2^n` complex amplitudes; bit `j` of an index is wire `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
    policy: ExecPolicy,
}

/// Raw amplitude pointer shared across the index loop of one gate.
///
/// Each loop index addresses a distinct set of amplitudes, so concurrent
/// writes never alias.
#[derive(Clone, Copy)]
struct AmpPtr(*mut Complex64);

unsafe impl Send for AmpPtr {}
unsafe impl Sync for AmpPtr {}

impl AmpPtr {
    /// # Safety
    /// `i` must be in bounds and not touched by any other loop index.
    #[inline(always)]
    unsafe fn at(self, i: usize) -> &'static mut Complex64 {
        &mut *self.0.add(i)
    }
}

/// Spreads the bits of `r` over the positions not listed in `fixed` (ascending).
#[inline(always)]
fn deposit(mut r: usize, fixed: &[usize]) -> usize {
    for &p in fixed {
        let low = r & ((1 << p) - 1);
        r = ((r >> p) << (p + 1)) | low;
    }
    r
}

fn check_qubits(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::Capacity(format!(
            "register of {n_qubits} qubits outside 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

impl StateVector {
    /// `|0…0⟩` on `n_qubits` wires.
    pub fn new(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_qubits(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::Parameter(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            n_qubits,
            amps,
            policy: ExecPolicy::default(),
        })
    }

    /// Wraps explicit amplitudes; the length must be a power of two and the
    /// vector normalized within 1e-9.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(Error::Parameter(format!(
                "amplitude count {len} is not a power of two"
            )));
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_qubits(n_qubits)?;
        let norm: f64 = amps.iter().map(Complex64::norm_sqr).sum();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::Parameter(format!("state norm² is {norm}, not 1")));
        }
        Ok(StateVector {
            n_qubits,
            amps,
            policy: ExecPolicy::default(),
        })
    }

    pub fn with_policy(mut self, policy: ExecPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn set_policy(&mut self, policy: ExecPolicy) {
        self.policy = policy;
    }

    pub fn policy(&self) -> ExecPolicy {
        self.policy
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        let amps = &self.amps;
        chunked_sum(self.policy, amps.len(), |r| {
            amps[r].iter().map(Complex64::norm_sqr).sum()
        })
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn apply(&mut self, op: &GateOp) -> Result<()> {
        op.validate(self.n_qubits)?;
        self.apply_unchecked(op);
        Ok(())
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.n_qubits() != self.n_qubits {
            return Err(Error::Wiring(format!(
                "circuit on {} qubits applied to a {}-qubit state",
                circuit.n_qubits(),
                self.n_qubits
            )));
        }
        // ops were validated when pushed
        for op in circuit.ops() {
            self.apply_unchecked(op);
        }
        Ok(())
    }

    fn apply_unchecked(&mut self, op: &GateOp) {
        let mut fixed: Vec<usize> = op.wires().collect();
        fixed.sort_unstable();
        let count = 1usize << (self.n_qubits - fixed.len());
        let ctrl = op.control_mask();
        let ptr = AmpPtr(self.amps.as_mut_ptr());
        let fixed = fixed.as_slice();
        let policy = self.policy;

        match op.kind {
            GateKind::Swap => {
                let a = 1usize << op.targets[0];
                let b = 1usize << op.targets[1];
                for_each_index(policy, count, |r| {
                    let base = deposit(r, fixed) | ctrl;
                    // SAFETY: `base` has both target bits clear, so (base|a, base|b)
                    // is unique to `r`.
                    unsafe { std::mem::swap(ptr.at(base | a), ptr.at(base | b)) };
                });
            }
            GateKind::PauliX => {
                let bit = 1usize << op.targets[0];
                for_each_index(policy, count, |r| {
                    let base = deposit(r, fixed) | ctrl;
                    // SAFETY: pair (base, base|bit) is unique to `r`.
                    unsafe { std::mem::swap(ptr.at(base), ptr.at(base | bit)) };
                });
            }
            GateKind::Hadamard => {
                let bit = 1usize << op.targets[0];
                let s = std::f64::consts::FRAC_1_SQRT_2;
                for_each_index(policy, count, |r| {
                    let base = deposit(r, fixed) | ctrl;
                    // SAFETY: pair (base, base|bit) is unique to `r`.
                    unsafe {
                        let a = *ptr.at(base);
                        let b = *ptr.at(base | bit);
                        *ptr.at(base) = (a + b) * s;
                        *ptr.at(base | bit) = (a - b) * s;
                    }
                });
            }
            kind => {
                let phase = kind.diagonal_phase().expect("diagonal kind");
                let set = ctrl | (1usize << op.targets[0]);
                for_each_index(policy, count, |r| {
                    let i = deposit(r, fixed) | set;
                    // SAFETY: `i` is unique to `r`.
                    unsafe { *ptr.at(i) *= phase };
                });
            }
        }
    }

    /// Multiplies by `e^{i·angle}` every amplitude whose low `mask.width()`
    /// wires hold a pattern in `mask`.
    pub fn phase_mask(&mut self, mask: &BasisMask, angle: f64) -> Result<()> {
        if mask.width() > self.n_qubits {
            return Err(Error::Parameter(format!(
                "mask over {} wires on a {}-qubit state",
                mask.width(),
                self.n_qubits
            )));
        }
        let phase = Complex64::from_polar(1.0, angle);
        let ptr = AmpPtr(self.amps.as_mut_ptr());
        for_each_index(self.policy, self.amps.len(), |i| {
            if mask.contains(i) {
                // SAFETY: each index is visited once.
                unsafe { *ptr.at(i) *= phase };
            }
        });
        Ok(())
    }

    /// Total probability of the listed basis indices (duplicates count once).
    pub fn marked_probability(&self, marked: &[usize]) -> Result<f64> {
        let dim = self.amps.len();
        if let Some(&bad) = marked.iter().find(|&&i| i >= dim) {
            return Err(Error::Parameter(format!(
                "marked index {bad} out of range for {} qubits",
                self.n_qubits
            )));
        }
        let mut sorted = marked.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        Ok(sorted.iter().map(|&i| self.amps[i].norm_sqr()).sum())
    }

    /// Probability that the low `mask.width()` wires hold a pattern in `mask`.
    pub fn mask_probability(&self, mask: &BasisMask) -> Result<f64> {
        if mask.width() > self.n_qubits {
            return Err(Error::Parameter(format!(
                "mask over {} wires on a {}-qubit state",
                mask.width(),
                self.n_qubits
            )));
        }
        let amps = &self.amps;
        Ok(chunked_sum(self.policy, amps.len(), |r| {
            r.filter(|&i| mask.contains(i))
                .map(|i| amps[i].norm_sqr())
                .sum()
        }))
    }

    /// Probability of each pattern of the lowest `width` wires.
    pub fn marginal(&self, width: usize) -> Vec<f64> {
        let low = (1usize << width.min(self.n_qubits)) - 1;
        let mut out = vec![0.0; low + 1];
        for (i, a) in self.amps.iter().enumerate() {
            out[i & low] += a.norm_sqr();
        }
        out
    }

    /// Multinomial draw of `shots` basis indices, reproducible for a fixed seed.
    pub fn sample(&self, shots: usize, seed: u64) -> BTreeMap<usize, usize> {
        let mut cumulative = Vec::with_capacity(self.amps.len());
        let mut acc = 0.0;
        for a in &self.amps {
            acc += a.norm_sqr();
            cumulative.push(acc);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut hist = BTreeMap::new();
        let last = cumulative.len() - 1;
        for _ in 0..shots {
            let u = rng.gen::<f64>() * acc;
            let idx = cumulative.partition_point(|&c| c <= u).min(last);
            *hist.entry(idx).or_insert(0) += 1;
        }
        hist
    }
}
