use serde::{Deserialize, Serialize};

use super::instance::{ceil_log2, Dimensions, Instance, Mode, Schedule};
use crate::error::{Error, Result};
use crate::qarith::RegisterSpan;
use crate::statevector::MAX_QUBITS;

/// How the marked condition is stored on ancillas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AncillaStrategy {
    /// Two flags per range check, group-A overlap wires and the group-B wire.
    Flags,
    /// One violation counter held in the Fourier basis; marked iff it reads 0.
    Counter,
    /// Whichever of the two needs fewer wires (ties go to `Flags`).
    Auto,
}

/// Coin registers of the walk preparation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoinPolicy {
    /// One coin register, disentangled and reused after every step.
    Reuse,
    /// A fresh coin register per walk step, left entangled.
    PerStep,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LayoutOptions {
    pub ancilla: AncillaStrategy,
    pub coins: CoinPolicy,
}

impl Default for LayoutOptions {
    fn default() -> Self {
        LayoutOptions {
            ancilla: AncillaStrategy::Flags,
            coins: CoinPolicy::Reuse,
        }
    }
}

impl LayoutOptions {
    /// Fewest wires: lets the strategy be chosen per instance.
    pub fn compact() -> Self {
        LayoutOptions {
            ancilla: AncillaStrategy::Auto,
            coins: CoinPolicy::Reuse,
        }
    }
}

/// One range check of the feasible-path oracle: `upper − lower ∈ [0, C−1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathCheck {
    pub machine: usize,
    /// `None` for the first-window check against the offset register,
    /// otherwise the job index of `lower`.
    pub job: Option<usize>,
    pub lower: RegisterSpan,
    pub upper: RegisterSpan,
    /// `(flag_lo, flag_hi)` under [`AncillaStrategy::Flags`].
    pub flags: Option<(usize, usize)>,
}

/// One resource check: job `job` of machines `a < b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlapCheck {
    pub a: usize,
    pub b: usize,
    pub job: usize,
    /// Group-A wire under [`AncillaStrategy::Flags`].
    pub flag: Option<usize>,
}

/// Wire assignment for one instance and mode.
///
/// Data registers occupy the lowest wires, machine-major then job-major, so a
/// data pattern is the low `data_width` bits of a basis index. Offset and coin
/// registers follow, then the ancillas.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QubitLayout {
    mode: Mode,
    strategy: AncillaStrategy,
    coin_policy: CoinPolicy,
    dims: Dimensions,
    data: Vec<Vec<RegisterSpan>>,
    data_width: usize,
    offset_regs: Vec<RegisterSpan>,
    coins: Vec<RegisterSpan>,
    path_checks: Vec<PathCheck>,
    overlap_checks: Vec<OverlapCheck>,
    flag_wires: Vec<usize>,
    group_a: Vec<usize>,
    group_b: Option<usize>,
    counter: Option<RegisterSpan>,
    signs: Vec<usize>,
    active_width: usize,
    total: usize,
}

struct Alloc(usize);

impl Alloc {
    fn take(&mut self, n: usize) -> Vec<usize> {
        let v = (self.0..self.0 + n).collect();
        self.0 += n;
        v
    }

    fn one(&mut self) -> usize {
        self.0 += 1;
        self.0 - 1
    }
}

impl QubitLayout {
    /// Assigns wires without any capacity limit.
    pub fn plan(dims: &Dimensions, mode: Mode, options: LayoutOptions) -> QubitLayout {
        match options.ancilla {
            AncillaStrategy::Auto => {
                let flags = Self::plan_with(dims, mode, AncillaStrategy::Flags, options.coins);
                let counter = Self::plan_with(dims, mode, AncillaStrategy::Counter, options.coins);
                if counter.total < flags.total {
                    counter
                } else {
                    flags
                }
            }
            s => Self::plan_with(dims, mode, s, options.coins),
        }
    }

    fn plan_with(
        dims: &Dimensions,
        mode: Mode,
        strategy: AncillaStrategy,
        coin_policy: CoinPolicy,
    ) -> QubitLayout {
        let (machines, jobs) = (dims.machines, dims.jobs);
        let mut alloc = Alloc(0);
        let data: Vec<Vec<RegisterSpan>> = (0..machines)
            .map(|_| {
                (0..jobs)
                    .map(|k| RegisterSpan::contiguous(alloc.take(dims.date_width(k))[0], dims.date_width(k)))
                    .collect()
            })
            .collect();
        let data_width = alloc.0;

        let windowed = mode == Mode::Full && dims.offset_width() > 0;
        let offset_regs: Vec<RegisterSpan> = if windowed {
            (0..machines)
                .map(|_| RegisterSpan::contiguous(alloc.take(dims.offset_width())[0], dims.offset_width()))
                .collect()
        } else {
            Vec::new()
        };

        let coin_width = dims.coin_width();
        let coins: Vec<RegisterSpan> = match (mode, coin_policy) {
            (Mode::Full, _) => Vec::new(),
            (Mode::Reduced, CoinPolicy::Reuse) => {
                vec![RegisterSpan::contiguous(alloc.take(coin_width)[0], coin_width)]
            }
            (Mode::Reduced, CoinPolicy::PerStep) => (0..machines * (jobs - 1))
                .map(|_| RegisterSpan::contiguous(alloc.take(coin_width)[0], coin_width))
                .collect(),
        };
        let active_width = alloc.0;

        let mut path_checks = Vec::new();
        if mode == Mode::Full {
            for i in 0..machines {
                if windowed {
                    path_checks.push(PathCheck {
                        machine: i,
                        job: None,
                        lower: offset_regs[i].clone(),
                        upper: data[i][0].clone(),
                        flags: None,
                    });
                }
                for k in 0..jobs - 1 {
                    path_checks.push(PathCheck {
                        machine: i,
                        job: Some(k),
                        lower: data[i][k].clone(),
                        upper: data[i][k + 1].clone(),
                        flags: None,
                    });
                }
            }
        }
        let mut overlap_checks = Vec::new();
        for a in 0..machines {
            for b in a + 1..machines {
                for job in 0..jobs {
                    overlap_checks.push(OverlapCheck {
                        a,
                        b,
                        job,
                        flag: None,
                    });
                }
            }
        }

        let mut flag_wires = Vec::new();
        let mut group_a = Vec::new();
        let mut group_b = None;
        let mut counter = None;
        let mut signs = Vec::new();
        match strategy {
            AncillaStrategy::Flags => {
                for check in &mut path_checks {
                    let lo = alloc.one();
                    let hi = alloc.one();
                    flag_wires.extend([lo, hi]);
                    check.flags = Some((lo, hi));
                }
                for check in &mut overlap_checks {
                    let w = alloc.one();
                    group_a.push(w);
                    check.flag = Some(w);
                }
                let b = alloc.one();
                group_b = Some(b);
                // B is still |0⟩ while path flags are computed, so it doubles as
                // the comparison sign.
                if !path_checks.is_empty() {
                    signs.push(b);
                }
            }
            AncillaStrategy::Counter => {
                let violations = path_checks.len() + overlap_checks.len();
                let width = ceil_log2(violations as u64 + 1).max(1);
                let wires = match coin_policy {
                    CoinPolicy::Reuse if mode == Mode::Reduced => {
                        let mut w: Vec<usize> =
                            coins[0].wires().iter().copied().take(width).collect();
                        w.extend(alloc.take(width.saturating_sub(coin_width)));
                        w
                    }
                    _ => alloc.take(width),
                };
                counter = Some(RegisterSpan::new(wires).expect("fresh wires"));
                if !path_checks.is_empty() {
                    signs = alloc.take(2);
                }
            }
            AncillaStrategy::Auto => unreachable!("resolved by plan"),
        }

        QubitLayout {
            mode,
            strategy,
            coin_policy,
            dims: *dims,
            data,
            data_width,
            offset_regs,
            coins,
            path_checks,
            overlap_checks,
            flag_wires,
            group_a,
            group_b,
            counter,
            signs,
            active_width,
            total: alloc.0,
        }
    }

    /// Plans the layout and rejects it when it exceeds the simulator.
    pub fn build(instance: &Instance, mode: Mode, options: LayoutOptions) -> Result<QubitLayout> {
        let layout = Self::plan(&instance.dimensions(), mode, options);
        if layout.total > MAX_QUBITS {
            return Err(Error::Capacity(format!(
                "{} {mode} layout needs {} wires, simulator limit is {MAX_QUBITS}",
                instance.label(),
                layout.total
            )));
        }
        Ok(layout)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Resolved strategy (never `Auto`).
    pub fn strategy(&self) -> AncillaStrategy {
        self.strategy
    }

    pub fn coin_policy(&self) -> CoinPolicy {
        self.coin_policy
    }

    pub fn dimensions(&self) -> &Dimensions {
        &self.dims
    }

    pub fn data_register(&self, machine: usize, job: usize) -> &RegisterSpan {
        &self.data[machine][job]
    }

    pub fn data_width(&self) -> usize {
        self.data_width
    }

    pub fn offset_registers(&self) -> &[RegisterSpan] {
        &self.offset_regs
    }

    pub fn coin_registers(&self) -> &[RegisterSpan] {
        &self.coins
    }

    /// Coin used by walk step `step` (`1..K`) of `machine`.
    pub fn coin_for(&self, machine: usize, step: usize) -> &RegisterSpan {
        match self.coin_policy {
            CoinPolicy::Reuse => &self.coins[0],
            CoinPolicy::PerStep => &self.coins[machine * (self.dims.jobs - 1) + step - 1],
        }
    }

    pub fn coin_wires(&self) -> usize {
        self.coins.iter().map(RegisterSpan::width).sum()
    }

    pub fn path_checks(&self) -> &[PathCheck] {
        &self.path_checks
    }

    pub fn overlap_checks(&self) -> &[OverlapCheck] {
        &self.overlap_checks
    }

    pub fn flag_wires(&self) -> &[usize] {
        &self.flag_wires
    }

    pub fn group_a(&self) -> &[usize] {
        &self.group_a
    }

    pub fn group_b(&self) -> Option<usize> {
        self.group_b
    }

    pub fn counter(&self) -> Option<&RegisterSpan> {
        self.counter.as_ref()
    }

    /// Wires holding comparison signs (the top one is the sign bit).
    pub fn sign_wires(&self) -> &[usize] {
        &self.signs
    }

    /// Wires the counter adds beyond the coin register.
    pub fn counter_wires_owned(&self) -> usize {
        match &self.counter {
            None => 0,
            Some(c) => c.wires().iter().filter(|&&w| w >= self.active_width).count(),
        }
    }

    /// Sign wires that are not shared with another role.
    pub fn dedicated_sign_wires(&self) -> usize {
        match self.strategy {
            AncillaStrategy::Flags => 0,
            _ => self.signs.len(),
        }
    }

    /// Wires touched by state preparation: data, offsets and coins. They form
    /// the prefix `0..active_width`.
    pub fn active_width(&self) -> usize {
        self.active_width
    }

    pub fn total_wires(&self) -> usize {
        self.total
    }

    /// Wires that must be `|0⟩` between reflections.
    pub fn ancilla_wires(&self) -> Vec<usize> {
        let mut w: Vec<usize> = (self.active_width..self.total).collect();
        if self.coin_policy == CoinPolicy::Reuse {
            for c in &self.coins {
                w.extend_from_slice(c.wires());
            }
        }
        w.sort_unstable();
        w
    }

    /// Dates encoded in the data wires of `index`; value `v` is date `v`.
    pub fn decode_basis(&self, index: usize) -> Schedule {
        Schedule {
            dates: self
                .data
                .iter()
                .map(|regs| regs.iter().map(|r| r.read(index) as u64).collect())
                .collect(),
        }
    }

    /// Data pattern of a schedule; dates must fit their registers.
    pub fn encode(&self, schedule: &Schedule) -> Result<usize> {
        if schedule.dates.len() != self.dims.machines
            || schedule.dates.iter().any(|r| r.len() != self.dims.jobs)
        {
            return Err(Error::Parameter("schedule shape does not match layout".into()));
        }
        let mut index = 0;
        for (regs, row) in self.data.iter().zip(&schedule.dates) {
            for (reg, &d) in regs.iter().zip(row) {
                if d >= reg.capacity() as u64 {
                    return Err(Error::Parameter(format!(
                        "date {d} does not fit a {}-wire register",
                        reg.width()
                    )));
                }
                index = reg.write(index, d as usize);
            }
        }
        Ok(index)
    }

    /// Data registers of `index`, most-significant bit first, e.g. `01 010`;
    /// machines are separated by ` | `.
    pub fn render_data(&self, index: usize) -> String {
        self.data
            .iter()
            .map(|regs| {
                regs.iter()
                    .map(|r| {
                        let v = r.read(index);
                        (0..r.width())
                            .rev()
                            .map(|b| if (v >> b) & 1 == 1 { '1' } else { '0' })
                            .collect::<String>()
                    })
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join(" | ")
    }
}

/// Layout with the default (flag-based) ancillas.
pub fn build_layout(instance: &Instance, mode: Mode) -> Result<QubitLayout> {
    QubitLayout::build(instance, mode, LayoutOptions::default())
}
