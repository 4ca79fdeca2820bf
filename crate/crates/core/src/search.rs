//! Fixed-point amplitude amplification (and plain Grover for cross-checks).
//!
//! The fixed-point schedule with `l` reflection pairs makes `L = 2l + 1`
//! oracle queries. With `γ⁻¹ = cosh(arccosh(1/δ)/L)` the pair angles are
//! `α_j = 2·arccot(tan(2πj/L)·√(1−γ²))` and `β_j = −α_{l−j+1}`; pair `j`
//! applies the marked reflection with phase `β_j` and then the initial
//! reflection with phase `−α_j`. For initial marked fraction `λ` the final
//! success probability is `1 − δ²·T_L(γ⁻¹·√(1−λ))²`, which is at least `1 − δ²`
//! whenever `L ≥ ln(2/δ)/√λ`.
//!
//! A fixed-point trace records, for each odd query count `L`, the final
//! probability of a fresh run of length `L`; iteration 0 is the prepared state.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::circuits::{
    build_initial_reflection, build_marked_reflection, zero_phase, PreparedPipeline,
};
use crate::error::{Error, Result};
use crate::par::{map_collect, ExecPolicy};
use crate::problem::{
    marked_mask, space_sizes, AncillaStrategy, Instance, LayoutOptions, Mode, SpaceSizes,
};
use crate::statevector::{BasisMask, Circuit, StateVector};

/// Phase angles of one fixed-point run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleSequence {
    /// Reflection pairs `l`.
    pub pairs: usize,
    /// Oracle queries `L = 2l + 1`.
    pub queries: usize,
    pub delta: f64,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Parameter(format!("delta {delta} outside (0, 1)")));
    }
    Ok(())
}

/// `γ` of the schedule with `queries` oracle calls.
pub fn gamma(queries: usize, delta: f64) -> f64 {
    1.0 / ((1.0 / delta).acosh() / queries as f64).cosh()
}

pub fn fixed_point_angles(pairs: usize, delta: f64) -> Result<AngleSequence> {
    check_delta(delta)?;
    let queries = 2 * pairs + 1;
    let g = gamma(queries, delta);
    let s = (1.0 - g * g).max(0.0).sqrt();
    let alphas: Vec<f64> = (1..=pairs)
        .map(|j| {
            let t = (2.0 * PI * j as f64 / queries as f64).tan();
            2.0 * 1f64.atan2(t * s)
        })
        .collect();
    let betas = (1..=pairs).map(|j| -alphas[pairs - j]).collect();
    Ok(AngleSequence {
        pairs,
        queries,
        delta,
        alphas,
        betas,
    })
}

/// Chebyshev polynomial `T_n(x)` for any real `x`.
pub fn chebyshev(n: usize, x: f64) -> f64 {
    let n = n as f64;
    if x.abs() <= 1.0 {
        (n * x.acos()).cos()
    } else if x > 1.0 {
        (n * x.acosh()).cosh()
    } else {
        let sign = if (n as u64).is_multiple_of(2) { 1.0 } else { -1.0 };
        sign * (n * (-x).acosh()).cosh()
    }
}

/// Closed-form success probability of the `queries`-query schedule.
pub fn fixed_point_success(lambda: f64, queries: usize, delta: f64) -> f64 {
    let x = (1.0 - lambda).max(0.0).sqrt() / gamma(queries, delta);
    1.0 - delta * delta * chebyshev(queries, x).powi(2)
}

/// Smallest odd query count `L ≥ ln(2/δ)/√w_min`.
pub fn required_rounds(w_min: f64, delta: f64) -> Result<usize> {
    check_delta(delta)?;
    if !(w_min > 0.0 && w_min <= 1.0) {
        return Err(Error::Parameter(format!("w_min {w_min} outside (0, 1]")));
    }
    let bound = (2.0 / delta).ln() / w_min.sqrt();
    let mut l = (bound - 1e-12).ceil().max(1.0) as usize;
    if l.is_multiple_of(2) {
        l += 1;
    }
    Ok(l)
}

/// Default trace length: the required count plus roughly half as much again.
pub fn default_max_queries(w: f64, delta: f64) -> Result<usize> {
    let r = required_rounds(w, delta)?;
    Ok(r + 2 * (r / 4 + 2))
}

/// How reflections are simulated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    /// Every gate of both reflections on the full layout.
    Circuit,
    /// The marked reflection is simulated once on a phase-tagged superposition
    /// of every clean-ancilla basis state; the diagonal it implements is then
    /// applied directly on the preparation wires.
    Compiled,
}

/// Which amplification schedule produced a trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Schedule {
    FixedPoint,
    Grover,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub delta: f64,
    pub layout: LayoutOptions,
    pub engine: Engine,
    #[serde(skip)]
    pub policy: ExecPolicy,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            delta: 0.1,
            layout: LayoutOptions::compact(),
            engine: Engine::Compiled,
            policy: ExecPolicy::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iteration: usize,
    pub marked_probability: f64,
}

/// Marked probability per recorded iteration of a search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchTrace {
    pub instance: Instance,
    pub label: String,
    pub mode: Mode,
    pub schedule: Schedule,
    pub engine: Engine,
    pub ancilla: AncillaStrategy,
    pub layout_wires: usize,
    pub simulated_wires: usize,
    pub space_size: u64,
    pub solutions: u64,
    /// `max_queries` for fixed-point traces, iterations for Grover traces.
    pub rounds: usize,
    pub delta: Option<f64>,
    pub seed: Option<u64>,
    pub records: Vec<TraceRecord>,
}

impl SearchTrace {
    /// Initial marked fraction `M/N`.
    pub fn initial_fraction(&self) -> f64 {
        self.solutions as f64 / self.space_size as f64
    }

    /// First recorded iteration whose probability reaches `threshold`.
    pub fn first_crossing(&self, threshold: f64) -> Option<usize> {
        self.records
            .iter()
            .find(|r| r.marked_probability >= threshold)
            .map(|r| r.iteration)
    }

    /// Lowest probability recorded from iteration `from` on.
    pub fn min_from(&self, from: usize) -> Option<f64> {
        self.records
            .iter()
            .filter(|r| r.iteration >= from)
            .map(|r| r.marked_probability)
            .reduce(f64::min)
    }
}

/// A pipeline ready to run: circuits, marked mask and space sizes.
pub struct Searcher {
    instance: Instance,
    pipeline: PreparedPipeline,
    sizes: SpaceSizes,
    data_mask: BasisMask,
    engine: Engine,
    policy: ExecPolicy,
    compiled: Option<Compiled>,
}

struct Compiled {
    width: usize,
    prep: Circuit,
    prep_inv: Circuit,
    marked: BasisMask,
}

/// Maximum deviation tolerated when reading the compiled diagonal.
const COMPILE_TOL: f64 = 1e-9;
/// Probe phase of the compilation run.
const PROBE_ANGLE: f64 = 1.0;

fn tag(index: usize) -> f64 {
    // Weyl sequence: distinct phases for distinct indices.
    let x = (index as f64 * 0.618_033_988_749_894_9).fract();
    2.0 * PI * x
}

impl Searcher {
    pub fn new(instance: &Instance, mode: Mode, config: &SearchConfig) -> Result<Self> {
        let pipeline = PreparedPipeline::build(instance, mode, config.layout)?;
        let sizes = space_sizes(instance)?;
        let data_mask = marked_mask(instance, &pipeline.layout)?;
        let mut s = Searcher {
            instance: instance.clone(),
            pipeline,
            sizes,
            data_mask,
            engine: config.engine,
            policy: config.policy,
            compiled: None,
        };
        if config.engine == Engine::Compiled {
            s.compiled = Some(s.compile()?);
        }
        Ok(s)
    }

    pub fn pipeline(&self) -> &PreparedPipeline {
        &self.pipeline
    }

    pub fn sizes(&self) -> &SpaceSizes {
        &self.sizes
    }

    pub fn data_mask(&self) -> &BasisMask {
        &self.data_mask
    }

    /// `M/N` of this mode.
    pub fn initial_fraction(&self) -> f64 {
        self.sizes.m_solutions as f64 / self.sizes.size(self.pipeline.mode) as f64
    }

    pub fn simulated_wires(&self) -> usize {
        match &self.compiled {
            Some(c) => c.width,
            None => self.pipeline.n_qubits(),
        }
    }

    fn compile(&self) -> Result<Compiled> {
        let layout = &self.pipeline.layout;
        let width = layout.active_width();
        let n = layout.total_wires();
        let clean: usize = layout
            .ancilla_wires()
            .iter()
            .filter(|&&w| w < width)
            .fold(0, |m, &w| m | (1 << w));
        let inputs: Vec<usize> = (0..1usize << width).filter(|a| a & clean == 0).collect();
        let norm = 1.0 / (inputs.len() as f64).sqrt();
        let mut amps = vec![num_complex::Complex64::new(0.0, 0.0); 1 << n];
        for &a in &inputs {
            amps[a] = num_complex::Complex64::from_polar(norm, tag(a));
        }
        let mut state = StateVector::from_amplitudes(amps)?.with_policy(self.policy);
        state.apply_circuit(&build_marked_reflection(&self.pipeline, PROBE_ANGLE)?)?;

        let probe = num_complex::Complex64::from_polar(1.0, PROBE_ANGLE);
        let mut marked = BasisMask::empty(width);
        let mut kept = 0.0;
        for &a in &inputs {
            let before = num_complex::Complex64::from_polar(norm, tag(a));
            let after = state.amplitude(a);
            kept += after.norm_sqr();
            if (after - before).norm() < COMPILE_TOL {
                continue;
            }
            if (after - before * probe).norm() < COMPILE_TOL {
                marked.insert(a);
                continue;
            }
            return Err(Error::Wiring(format!(
                "marked reflection is not diagonal on clean-ancilla state {a}"
            )));
        }
        if (kept - 1.0).abs() > COMPILE_TOL {
            return Err(Error::Wiring(format!(
                "marked reflection leaks {:.3e} probability out of the clean-ancilla subspace",
                1.0 - kept
            )));
        }
        let prep = self.pipeline.prep.widened(width)?;
        let prep_inv = prep.inverse();
        Ok(Compiled {
            width,
            prep,
            prep_inv,
            marked,
        })
    }

    /// State after preparation.
    pub fn prepared_state(&self) -> Result<StateVector> {
        let (n, prep) = match &self.compiled {
            Some(c) => (c.width, &c.prep),
            None => (self.pipeline.n_qubits(), &self.pipeline.prep),
        };
        let mut s = StateVector::new(n)?.with_policy(self.policy);
        s.apply_circuit(prep)?;
        Ok(s)
    }

    pub fn apply_marked(&self, state: &mut StateVector, angle: f64) -> Result<()> {
        match &self.compiled {
            Some(c) => state.phase_mask(&c.marked, angle),
            None => state.apply_circuit(&build_marked_reflection(&self.pipeline, angle)?),
        }
    }

    pub fn apply_initial(&self, state: &mut StateVector, angle: f64) -> Result<()> {
        match &self.compiled {
            Some(c) => {
                state.apply_circuit(&c.prep_inv)?;
                state.apply_circuit(&zero_phase(c.width, angle)?)?;
                state.apply_circuit(&c.prep)
            }
            None => state.apply_circuit(&build_initial_reflection(&self.pipeline, angle)?),
        }
    }

    pub fn marked_probability(&self, state: &StateVector) -> Result<f64> {
        state.mask_probability(&self.data_mask)
    }

    /// Final state of one fixed-point run with `pairs` reflection pairs.
    pub fn fixed_point_state(&self, pairs: usize, delta: f64) -> Result<StateVector> {
        let angles = fixed_point_angles(pairs, delta)?;
        let mut state = self.prepared_state()?;
        for (a, b) in angles.alphas.iter().zip(&angles.betas) {
            self.apply_marked(&mut state, *b)?;
            self.apply_initial(&mut state, -a)?;
        }
        Ok(state)
    }

    fn trace(&self, schedule: Schedule, rounds: usize, delta: Option<f64>, records: Vec<TraceRecord>) -> SearchTrace {
        SearchTrace {
            instance: self.instance.clone(),
            label: self.instance.label(),
            mode: self.pipeline.mode,
            schedule,
            engine: self.engine,
            ancilla: self.pipeline.layout.strategy(),
            layout_wires: self.pipeline.n_qubits(),
            simulated_wires: self.simulated_wires(),
            space_size: self.sizes.size(self.pipeline.mode),
            solutions: self.sizes.m_solutions,
            rounds,
            delta,
            seed: None,
            records,
        }
    }

    /// Iteration 0 plus every odd query count `3 ≤ L ≤ max_queries`.
    pub fn fixed_point_trace(&self, max_queries: usize, delta: f64) -> Result<SearchTrace> {
        check_delta(delta)?;
        let mut points = vec![0usize];
        points.extend((3..=max_queries).step_by(2));
        let probs = map_collect(self.policy, points.clone(), |q| {
            let pairs = q.saturating_sub(1) / 2;
            self.fixed_point_state(pairs, delta)
                .and_then(|s| self.marked_probability(&s))
        });
        let records = points
            .into_iter()
            .zip(probs)
            .map(|(iteration, p)| {
                p.map(|marked_probability| TraceRecord {
                    iteration,
                    marked_probability,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.trace(Schedule::FixedPoint, max_queries, Some(delta), records))
    }

    /// Probability after each of `iterations` Grover pairs (all phases π).
    pub fn grover_trace(&self, iterations: usize) -> Result<SearchTrace> {
        let mut state = self.prepared_state()?;
        let mut records = vec![TraceRecord {
            iteration: 0,
            marked_probability: self.marked_probability(&state)?,
        }];
        for t in 1..=iterations {
            self.apply_marked(&mut state, PI)?;
            self.apply_initial(&mut state, PI)?;
            records.push(TraceRecord {
                iteration: t,
                marked_probability: self.marked_probability(&state)?,
            });
        }
        Ok(self.trace(Schedule::Grover, iterations, None, records))
    }
}

/// Fixed-point trace up to `max_queries` oracle calls.
pub fn run_fixed_point(
    instance: &Instance,
    mode: Mode,
    max_queries: usize,
    config: &SearchConfig,
) -> Result<SearchTrace> {
    Searcher::new(instance, mode, config)?.fixed_point_trace(max_queries, config.delta)
}

/// Grover trace of `iterations` pairs.
pub fn run_grover(
    instance: &Instance,
    mode: Mode,
    iterations: usize,
    config: &SearchConfig,
) -> Result<SearchTrace> {
    Searcher::new(instance, mode, config)?.grover_trace(iterations)
}
