use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest `w` with `2^w ≥ n` (`ceil_log2(1) = 0`).
pub fn ceil_log2(n: u64) -> usize {
    assert!(n >= 1, "ceil_log2 of zero");
    (64 - (n - 1).leading_zeros()) as usize
}

/// Which search pipeline an instance is encoded for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Hadamard wall over all data wires; the oracle checks paths and resources.
    Full,
    /// Quantum-walk preparation over feasible paths; the oracle checks resources.
    Reduced,
}

impl Mode {
    pub const ALL: [Mode; 2] = [Mode::Full, Mode::Reduced];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Full => "full",
            Mode::Reduced => "reduced",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Mode::Full),
            "reduced" => Ok(Mode::Reduced),
            other => Err(Error::Validation(format!(
                "unknown mode {other:?} (expected full or reduced)"
            ))),
        }
    }
}

/// Problem geometry without per-machine offsets, enough to size registers.
///
/// Unlike [`Instance`] the window need not be a power of two, so register
/// counts can be tabulated for any `C ≥ 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dimensions {
    pub machines: usize,
    pub jobs: usize,
    pub window: u64,
    pub max_offset: u64,
}

impl Dimensions {
    pub fn new(machines: usize, jobs: usize, window: u64, max_offset: u64) -> Result<Self> {
        if machines == 0 || jobs == 0 {
            return Err(Error::Validation("need at least one machine and one job".into()));
        }
        if window < 2 {
            return Err(Error::Validation(format!("window {window} below 2")));
        }
        Ok(Dimensions {
            machines,
            jobs,
            window,
            max_offset,
        })
    }

    /// Latest date job `k` (0-based) can take on any machine.
    pub fn max_date(&self, job: usize) -> u64 {
        self.max_offset + (self.window - 1) * (job as u64 + 1)
    }

    /// Wires of the job-`k` register: enough for dates `0..=max_date(k)`.
    pub fn date_width(&self, job: usize) -> usize {
        ceil_log2(self.max_date(job) + 1)
    }

    pub fn machine_data_width(&self) -> usize {
        (0..self.jobs).map(|k| self.date_width(k)).sum()
    }

    pub fn data_width(&self) -> usize {
        self.machines * self.machine_data_width()
    }

    /// Wires of a per-machine offset register; zero when all offsets vanish.
    pub fn offset_width(&self) -> usize {
        if self.max_offset == 0 {
            0
        } else {
            ceil_log2(self.max_offset + 1)
        }
    }

    pub fn coin_width(&self) -> usize {
        ceil_log2(self.window)
    }

    /// Number of (machine pair, job) overlap checks.
    pub fn overlap_checks(&self) -> usize {
        self.machines * (self.machines - 1) / 2 * self.jobs
    }
}

/// Dates of every job: `dates[i][k]` for machine `i`, job `k`, on the global
/// scale where the earliest first-job date is 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Schedule {
    pub dates: Vec<Vec<u64>>,
}

/// A validated scheduling instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "InstanceFile")]
pub struct Instance {
    machines: usize,
    jobs: usize,
    window: u64,
    offsets: Vec<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    machines: usize,
    jobs: usize,
    window: u64,
    offsets: Vec<i64>,
}

impl TryFrom<InstanceFile> for Instance {
    type Error = Error;

    fn try_from(raw: InstanceFile) -> Result<Self> {
        Instance::new(raw.machines, raw.jobs, raw.window, &raw.offsets)
    }
}

impl Instance {
    /// Checks ranges and shifts offsets so the smallest is 0.
    pub fn new(machines: usize, jobs: usize, window: u64, offsets: &[i64]) -> Result<Self> {
        Dimensions::new(machines, jobs, window, 0)?;
        if !window.is_power_of_two() {
            return Err(Error::Validation(format!(
                "window {window} is not a power of two"
            )));
        }
        if offsets.len() != machines {
            return Err(Error::Validation(format!(
                "{} offsets for {machines} machines",
                offsets.len()
            )));
        }
        if let Some(o) = offsets.iter().find(|&&o| o < 0) {
            return Err(Error::Validation(format!("negative offset {o}")));
        }
        let min = offsets.iter().copied().min().unwrap_or(0);
        Ok(Instance {
            machines,
            jobs,
            window,
            offsets: offsets.iter().map(|&o| (o - min) as u64).collect(),
        })
    }

    /// Instance with every offset zero.
    pub fn uniform(machines: usize, jobs: usize, window: u64) -> Result<Self> {
        Self::new(machines, jobs, window, &vec![0; machines])
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Validation(format!("instance: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Validation(format!("cannot read instance {}: {e}", path.display()))
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance serializes")
    }

    pub fn machines(&self) -> usize {
        self.machines
    }

    pub fn jobs(&self) -> usize {
        self.jobs
    }

    pub fn window(&self) -> u64 {
        self.window
    }

    pub fn offsets(&self) -> &[u64] {
        &self.offsets
    }

    pub fn offset(&self, machine: usize) -> u64 {
        self.offsets[machine]
    }

    /// `O`: largest offset after normalization.
    pub fn max_offset(&self) -> u64 {
        self.offsets.iter().copied().max().unwrap_or(0)
    }

    pub fn dimensions(&self) -> Dimensions {
        Dimensions {
            machines: self.machines,
            jobs: self.jobs,
            window: self.window,
            max_offset: self.max_offset(),
        }
    }

    /// Short label such as `I2K3C4`.
    pub fn label(&self) -> String {
        let mut s = format!("I{}K{}C{}", self.machines, self.jobs, self.window);
        if self.max_offset() > 0 {
            s.push_str(&format!("O{}", self.max_offset()));
        }
        s
    }

    /// First date in `[O_i, O_i + C − 1]` and every increment in `[0, C − 1]`.
    pub fn is_feasible_path(&self, machine: usize, dates: &[u64]) -> bool {
        let c = self.window;
        let o = self.offsets[machine];
        match dates.first() {
            Some(&d0) if d0 >= o && d0 < o + c => {}
            _ => return false,
        }
        dates.windows(2).all(|p| p[1] >= p[0] && p[1] - p[0] < c)
    }

    /// No two machines run the same-index job on the same date.
    pub fn satisfies_resources(&self, schedule: &Schedule) -> bool {
        let d = &schedule.dates;
        (0..self.jobs).all(|k| {
            (0..d.len()).all(|i| (i + 1..d.len()).all(|j| d[i][k] != d[j][k]))
        })
    }

    /// Every machine follows a feasible path and resources never collide.
    pub fn is_solution(&self, schedule: &Schedule) -> bool {
        schedule.dates.len() == self.machines
            && schedule
                .dates
                .iter()
                .enumerate()
                .all(|(i, row)| row.len() == self.jobs && self.is_feasible_path(i, row))
            && self.satisfies_resources(schedule)
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "I={} K={} C={} offsets={:?}",
            self.machines, self.jobs, self.window, self.offsets
        )
    }
}
