//! Scheduling instances, qubit layouts and the brute-force solution counter.
//!
//! Dates live on one global scale whose origin is the earliest first-job date,
//! so equal register values on two machines mean equal dates. Jobs are
//! 0-based: job `k` of a machine may take dates up to `O + (C−1)(k+1)`.

mod enumerate;
mod instance;
mod layout;

pub use enumerate::{
    count_solutions, count_solutions_with, feasible_paths, for_each_solution, full_space_size,
    marked_mask, path_mask, reduced_space_size, space_sizes, SpaceSizes, DEFAULT_BUDGET,
};
pub use instance::{ceil_log2, Dimensions, Instance, Mode, Schedule};
pub use layout::{
    build_layout, AncillaStrategy, CoinPolicy, LayoutOptions, OverlapCheck, PathCheck, QubitLayout,
};

/// Validated instance; see [`Instance::new`].
pub fn new_instance(machines: usize, jobs: usize, window: u64, offsets: &[i64]) -> crate::Result<Instance> {
    Instance::new(machines, jobs, window, offsets)
}
