//! Space-size ratios, qubit budgets and basic-gate estimates.

use serde::{Deserialize, Serialize};

use crate::circuits::{build_initial_reflection, build_marked_reflection, PreparedPipeline};
use crate::error::Result;
use crate::par::{map_collect, ExecPolicy};
use crate::problem::{
    count_solutions, full_space_size, reduced_space_size, Dimensions, Instance, LayoutOptions,
    Mode, QubitLayout,
};
use crate::statevector::{Circuit, GateKind, GateOp};

/// One point of a space-size curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    #[serde(rename = "I")]
    pub machines: usize,
    #[serde(rename = "K")]
    pub jobs: usize,
    #[serde(rename = "C")]
    pub window: u64,
    pub mode: Mode,
    pub space_size: u64,
    pub solutions: u64,
    pub sqrt_ratio: f64,
}

/// A sweep point that could not be evaluated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkippedPoint {
    pub machines: usize,
    pub jobs: usize,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RatioSweep {
    pub rows: Vec<RatioRow>,
    pub skipped: Vec<SkippedPoint>,
}

fn ratio_point(window: u64, machines: usize, jobs: usize) -> Result<Vec<RatioRow>> {
    let inst = Instance::uniform(machines, jobs, window)?;
    let m = count_solutions(&inst)?;
    let sizes = [
        (Mode::Full, full_space_size(&inst)?),
        (Mode::Reduced, reduced_space_size(&inst)?),
    ];
    Ok(sizes
        .into_iter()
        .map(|(mode, n)| RatioRow {
            machines,
            jobs,
            window,
            mode,
            space_size: n,
            solutions: m,
            sqrt_ratio: (n as f64 / m as f64).sqrt(),
        })
        .collect())
}

/// Full and reduced rows for every `(I, K)`, in input order; points that fail
/// (typically over the enumeration budget) are listed as skipped.
pub fn ratio_curves(window: u64, machines: &[usize], jobs: &[usize]) -> RatioSweep {
    ratio_curves_with(window, machines, jobs, ExecPolicy::default())
}

pub fn ratio_curves_with(
    window: u64,
    machines: &[usize],
    jobs: &[usize],
    policy: ExecPolicy,
) -> RatioSweep {
    let points: Vec<(usize, usize)> = machines
        .iter()
        .flat_map(|&i| jobs.iter().map(move |&k| (i, k)))
        .collect();
    let results = map_collect(policy, points.clone(), |(i, k)| ratio_point(window, i, k));
    let mut sweep = RatioSweep::default();
    for ((i, k), r) in points.into_iter().zip(results) {
        match r {
            Ok(rows) => sweep.rows.extend(rows),
            Err(e) => sweep.skipped.push(SkippedPoint {
                machines: i,
                jobs: k,
                reason: e.to_string(),
            }),
        }
    }
    sweep
}

/// Wire budget of one layout.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResourceReport {
    pub label: String,
    pub mode: Mode,
    pub ancilla: crate::problem::AncillaStrategy,
    pub data_qubits: usize,
    pub offset_qubits: usize,
    /// Two per consecutive-job pair per machine.
    pub flag_qubits: usize,
    /// Two per machine for the first-window check (offsets present).
    pub window_flag_qubits: usize,
    #[serde(rename = "groupA")]
    pub group_a: usize,
    #[serde(rename = "groupB")]
    pub group_b: usize,
    pub coin_qubits: usize,
    pub counter_qubits: usize,
    pub sign_qubits: usize,
    pub total: usize,
    /// `I·Σ_{k=1..K} log2((C−1)k + 1) + I(I−1)K/2 + 1`, without ceilings.
    pub formula_estimate: f64,
    pub basic_gate_count_per_iteration: Option<u64>,
    pub gate_rules: Option<String>,
}

/// Counts for any geometry, without capacity limits.
pub fn qubit_report_for(dims: &Dimensions, mode: Mode, options: LayoutOptions) -> ResourceReport {
    let layout = QubitLayout::plan(dims, mode, options);
    report_from_layout(dims, &layout, format!("I{}K{}C{}O{}", dims.machines, dims.jobs, dims.window, dims.max_offset))
}

fn report_from_layout(dims: &Dimensions, layout: &QubitLayout, label: String) -> ResourceReport {
    let windowed = layout
        .path_checks()
        .iter()
        .filter(|c| c.job.is_none())
        .count();
    let pair_checks = layout.path_checks().len() - windowed;
    let (flag_qubits, window_flag_qubits) = if layout.flag_wires().is_empty() {
        (0, 0)
    } else {
        (2 * pair_checks, 2 * windowed)
    };
    let i = dims.machines as f64;
    let data_formula: f64 = (1..=dims.jobs)
        .map(|k| (((dims.window - 1) * k as u64 + 1) as f64).log2())
        .sum();
    ResourceReport {
        label,
        mode: layout.mode(),
        ancilla: layout.strategy(),
        data_qubits: layout.data_width(),
        offset_qubits: layout.offset_registers().iter().map(|r| r.width()).sum(),
        flag_qubits,
        window_flag_qubits,
        group_a: layout.group_a().len(),
        group_b: usize::from(layout.group_b().is_some()),
        coin_qubits: layout.coin_wires(),
        counter_qubits: layout.counter_wires_owned(),
        sign_qubits: layout.dedicated_sign_wires(),
        total: layout.total_wires(),
        formula_estimate: i * data_formula + (dims.overlap_checks() as f64) + 1.0,
        basic_gate_count_per_iteration: None,
        gate_rules: None,
    }
}

/// Exact wire counts of the flag-based layout plus the per-iteration gate
/// estimate under the default rule table.
pub fn qubit_report(instance: &Instance, mode: Mode) -> Result<ResourceReport> {
    qubit_report_with(instance, mode, LayoutOptions::default(), DecompositionRules::default())
}

pub fn qubit_report_with(
    instance: &Instance,
    mode: Mode,
    options: LayoutOptions,
    rules: DecompositionRules,
) -> Result<ResourceReport> {
    let dims = instance.dimensions();
    let layout = QubitLayout::plan(&dims, mode, options);
    let mut report = report_from_layout(&dims, &layout, instance.label());
    let count = gate_count_for_layout(instance, layout, rules)?;
    report.basic_gate_count_per_iteration = Some(count.per_iteration);
    report.gate_rules = Some(rules.version().to_string());
    Ok(report)
}

/// Decomposition of multi-controlled gates into one-qubit gates and CNOTs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecompositionRules {
    /// `m`-controlled X as `2(m−2)+1` ancilla-assisted Toffolis of 15 gates;
    /// `m`-controlled one-qubit gates as two such ladders around a 3-gate
    /// controlled rotation.
    #[default]
    AncillaToffoli,
    /// Ancilla-free Gray-code ladder: an `m`-controlled phase costs
    /// `2^m − 1` controlled rotations and `2^m − 2` CNOTs.
    GrayCode,
}

impl DecompositionRules {
    pub const ALL: [DecompositionRules; 2] =
        [DecompositionRules::AncillaToffoli, DecompositionRules::GrayCode];

    pub fn version(self) -> &'static str {
        match self {
            DecompositionRules::AncillaToffoli => "ancilla-toffoli/v1",
            DecompositionRules::GrayCode => "gray-code/v1",
        }
    }

    /// Basic gates of an `m`-controlled X.
    pub fn mcx(self, m: usize) -> u64 {
        match (self, m) {
            (_, 0) | (_, 1) => 1,
            (DecompositionRules::AncillaToffoli, m) => (2 * (m as u64 - 2) + 1) * 15,
            (DecompositionRules::GrayCode, m) => 2 + self.mc_phase(m),
        }
    }

    /// Basic gates of an `m`-controlled single-qubit phase or rotation.
    pub fn mc_phase(self, m: usize) -> u64 {
        match (self, m) {
            (_, 0) => 1,
            (_, 1) => 3,
            (DecompositionRules::AncillaToffoli, m) => 2 * self.mcx(m) + 3,
            (DecompositionRules::GrayCode, m) => {
                let p = 1u64.checked_shl(m as u32).unwrap_or(u64::MAX);
                3 * (p - 1) + (p - 2)
            }
        }
    }

    pub fn op_cost(self, op: &GateOp) -> u64 {
        let m = op.controls.len() + op.anti_controls.len();
        let flips = 2 * op.anti_controls.len() as u64;
        let core = match op.kind {
            GateKind::PauliX => self.mcx(m),
            GateKind::Swap => match m {
                0 => 3,
                _ => 2 + self.mcx(m + 1),
            },
            GateKind::Hadamard
            | GateKind::PauliZ
            | GateKind::Phase(_)
            | GateKind::PhaseRotation(_) => self.mc_phase(m),
        };
        core.saturating_add(flips)
    }

    pub fn circuit_cost(self, circuit: &Circuit) -> u64 {
        circuit
            .ops()
            .iter()
            .fold(0u64, |acc, op| acc.saturating_add(self.op_cost(op)))
    }
}

/// Basic gates of one (marked reflection, initial reflection) pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCountReport {
    pub label: String,
    pub mode: Mode,
    pub rules: String,
    pub marked_reflection: u64,
    pub initial_reflection: u64,
    pub per_iteration: u64,
}

fn gate_count_for_layout(
    instance: &Instance,
    layout: QubitLayout,
    rules: DecompositionRules,
) -> Result<GateCountReport> {
    let mode = layout.mode();
    let pipeline = PreparedPipeline::from_layout(instance, layout)?;
    let marked = rules.circuit_cost(&build_marked_reflection(&pipeline, std::f64::consts::PI)?);
    let initial = rules.circuit_cost(&build_initial_reflection(&pipeline, std::f64::consts::PI)?);
    Ok(GateCountReport {
        label: instance.label(),
        mode,
        rules: rules.version().to_string(),
        marked_reflection: marked,
        initial_reflection: initial,
        per_iteration: marked.saturating_add(initial),
    })
}

/// Gate estimate of the flag-based layout.
pub fn gate_count_report(instance: &Instance, mode: Mode) -> Result<u64> {
    Ok(gate_count_with(instance, mode, LayoutOptions::default(), DecompositionRules::default())?.per_iteration)
}

pub fn gate_count_with(
    instance: &Instance,
    mode: Mode,
    options: LayoutOptions,
    rules: DecompositionRules,
) -> Result<GateCountReport> {
    let layout = QubitLayout::plan(&instance.dimensions(), mode, options);
    gate_count_for_layout(instance, layout, rules)
}
