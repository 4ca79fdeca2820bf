use serde::{Deserialize, Serialize};

use super::instance::{Instance, Mode, Schedule};
use super::layout::QubitLayout;
use crate::error::{Error, Result};
use crate::par::{map_collect, ExecPolicy};
use crate::statevector::{BasisMask, MAX_QUBITS};

/// Largest reduced space (`C^{KI}`) the brute-force counter will walk.
pub const DEFAULT_BUDGET: u64 = 1 << 34;

/// Sizes of the two search spaces and the solution count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceSizes {
    pub n_full: u64,
    pub n_reduced: u64,
    pub m_solutions: u64,
}

impl SpaceSizes {
    pub fn size(&self, mode: Mode) -> u64 {
        match mode {
            Mode::Full => self.n_full,
            Mode::Reduced => self.n_reduced,
        }
    }

    /// `√(N/M)` for the given mode.
    pub fn sqrt_ratio(&self, mode: Mode) -> f64 {
        (self.size(mode) as f64 / self.m_solutions as f64).sqrt()
    }
}

/// `2^{Σ data widths}`.
pub fn full_space_size(instance: &Instance) -> Result<u64> {
    let bits = instance.dimensions().data_width();
    if bits >= 64 {
        return Err(Error::Capacity(format!("full space 2^{bits} overflows u64")));
    }
    Ok(1 << bits)
}

/// `C^{K·I}`.
pub fn reduced_space_size(instance: &Instance) -> Result<u64> {
    let exp = (instance.jobs() * instance.machines()) as u32;
    instance
        .window()
        .checked_pow(exp)
        .ok_or_else(|| Error::Capacity(format!("reduced space C^{exp} overflows u64")))
}

/// Every feasible date sequence of one machine, in lexicographic order.
pub fn feasible_paths(instance: &Instance, machine: usize) -> Vec<Vec<u64>> {
    let c = instance.window();
    let o = instance.offset(machine);
    let mut paths: Vec<Vec<u64>> = (o..o + c).map(|d| vec![d]).collect();
    for _ in 1..instance.jobs() {
        paths = paths
            .into_iter()
            .flat_map(|p| {
                let last = *p.last().expect("non-empty path");
                (last..last + c).map(move |d| {
                    let mut q = p.clone();
                    q.push(d);
                    q
                })
            })
            .collect();
    }
    paths
}

fn check_budget(instance: &Instance, budget: u64) -> Result<()> {
    let n = reduced_space_size(instance)?;
    if n > budget {
        return Err(Error::Capacity(format!(
            "{}: {n} path combinations exceed the enumeration budget {budget}",
            instance.label()
        )));
    }
    Ok(())
}

/// Depth-first search over machines then jobs, pruning columnwise collisions.
struct Search<'a> {
    instance: &'a Instance,
    dates: Vec<Vec<u64>>,
}

impl Search<'_> {
    fn free(&self, machine: usize, job: usize, date: u64) -> bool {
        (0..machine).all(|m| self.dates[m][job] != date)
    }

    fn visit(&mut self, machine: usize, job: usize, leaf: &mut dyn FnMut(&[Vec<u64>])) {
        let inst = self.instance;
        if machine == inst.machines() {
            leaf(&self.dates);
            return;
        }
        let (next_m, next_k) = if job + 1 == inst.jobs() {
            (machine + 1, 0)
        } else {
            (machine, job + 1)
        };
        let lo = if job == 0 {
            inst.offset(machine)
        } else {
            self.dates[machine][job - 1]
        };
        for d in lo..lo + inst.window() {
            if self.free(machine, job, d) {
                self.dates[machine][job] = d;
                self.visit(next_m, next_k, leaf);
            }
        }
    }
}

fn for_each_solution_from(
    instance: &Instance,
    first: &[u64],
    leaf: &mut dyn FnMut(&[Vec<u64>]),
) {
    let mut s = Search {
        instance,
        dates: vec![vec![0; instance.jobs()]; instance.machines()],
    };
    s.dates[0].copy_from_slice(first);
    s.visit(1, 0, leaf);
}

/// Exact number of solutions (feasible paths on every machine, no resource
/// collisions), by backtracking; the first machine's paths are split across
/// threads.
pub fn count_solutions(instance: &Instance) -> Result<u64> {
    count_solutions_with(instance, DEFAULT_BUDGET, ExecPolicy::default())
}

pub fn count_solutions_with(instance: &Instance, budget: u64, policy: ExecPolicy) -> Result<u64> {
    check_budget(instance, budget)?;
    let firsts = feasible_paths(instance, 0);
    let counts = map_collect(policy, firsts, |p| {
        let mut n = 0u64;
        for_each_solution_from(instance, &p, &mut |_| n += 1);
        n
    });
    Ok(counts.iter().sum())
}

/// Calls `f` on every solution in lexicographic order.
pub fn for_each_solution(instance: &Instance, budget: u64, f: &mut dyn FnMut(&Schedule)) -> Result<()> {
    check_budget(instance, budget)?;
    for p in feasible_paths(instance, 0) {
        for_each_solution_from(instance, &p, &mut |dates| {
            f(&Schedule {
                dates: dates.to_vec(),
            })
        });
    }
    Ok(())
}

pub fn space_sizes(instance: &Instance) -> Result<SpaceSizes> {
    Ok(SpaceSizes {
        n_full: full_space_size(instance)?,
        n_reduced: reduced_space_size(instance)?,
        m_solutions: count_solutions(instance)?,
    })
}

/// Data patterns (low `data_width` wires) that decode to a solution.
pub fn marked_mask(instance: &Instance, layout: &QubitLayout) -> Result<BasisMask> {
    let width = layout.data_width();
    if width > MAX_QUBITS {
        return Err(Error::Capacity(format!(
            "mask over {width} data wires exceeds {MAX_QUBITS}"
        )));
    }
    let mut mask = BasisMask::empty(width);
    let mut err = None;
    for_each_solution(instance, DEFAULT_BUDGET, &mut |s| match layout.encode(s) {
        Ok(i) => mask.insert(i),
        Err(e) => err = Some(e),
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(mask),
    }
}

/// Data patterns on the support of the walk preparation (all feasible paths).
pub fn path_mask(instance: &Instance, layout: &QubitLayout) -> Result<BasisMask> {
    let width = layout.data_width();
    if width > MAX_QUBITS {
        return Err(Error::Capacity(format!(
            "mask over {width} data wires exceeds {MAX_QUBITS}"
        )));
    }
    check_budget(instance, DEFAULT_BUDGET)?;
    let per_machine: Vec<Vec<Vec<u64>>> = (0..instance.machines())
        .map(|i| feasible_paths(instance, i))
        .collect();
    let mut mask = BasisMask::empty(width);
    let mut choice = vec![0usize; instance.machines()];
    loop {
        let schedule = Schedule {
            dates: choice
                .iter()
                .enumerate()
                .map(|(i, &c)| per_machine[i][c].clone())
                .collect(),
        };
        mask.insert(layout.encode(&schedule)?);
        let mut i = 0;
        loop {
            if i == choice.len() {
                return Ok(mask);
            }
            choice[i] += 1;
            if choice[i] < per_machine[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}
