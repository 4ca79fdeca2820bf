//! `qsched` command-line front-end.
//!
//! Exit codes: 0 success, 1 internal or verification failure, 2 invalid
//! input, 3 capacity exceeded.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qsched::analysis::{self, DecompositionRules};
use qsched::io;
use qsched::problem::{
    path_mask, AncillaStrategy, CoinPolicy, Instance, LayoutOptions, Mode, QubitLayout,
};
use qsched::search::{self, Engine, SearchConfig, Searcher};
use qsched::statevector::StateVector;
use qsched::Error;
use serde_json::json;

#[derive(Parser)]
#[command(name = "qsched", version, about = "Quantum search for feasible job schedules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Space-size ratio curves √(N/M) for both modes.
    Analyze(AnalyzeArgs),
    /// Fixed-point (or Grover) marked-probability trace.
    Simulate(SimulateArgs),
    /// Qubit budget and basic-gate estimate per iteration.
    Resources(ResourcesArgs),
    /// Sample the final state of a fixed-point run and check the samples.
    Verify(VerifyArgs),
    /// Check the walk preparation's support, magnitudes and coin register.
    PrepCheck(PrepCheckArgs),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value = "full")]
    mode: String,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
struct LayoutArgs {
    /// flags, counter or auto.
    #[arg(long, default_value = "auto")]
    ancilla: String,
    /// reuse or per-step.
    #[arg(long, default_value = "reuse")]
    coins: String,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long, default_value_t = 4)]
    window: u64,
    /// Machine counts, e.g. `2` or `2,3,4` or `2..4`.
    #[arg(long, default_value = "2")]
    machines: String,
    /// Job counts, e.g. `1..6`.
    #[arg(long, default_value = "1..4")]
    jobs: String,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    layout: LayoutArgs,
    /// Largest query count of a fixed-point trace, or Grover iterations.
    #[arg(long)]
    rounds: Option<usize>,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Plain Grover iterations instead of the fixed-point schedule.
    #[arg(long)]
    grover: bool,
    /// circuit or compiled.
    #[arg(long, default_value = "compiled")]
    engine: String,
}

#[derive(Args)]
struct ResourcesArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value = "flags")]
    ancilla: String,
    /// ancilla-toffoli or gray-code.
    #[arg(long, default_value = "ancilla-toffoli")]
    rules: String,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    layout: LayoutArgs,
    /// Query count of the run (odd); defaults to the required count.
    #[arg(long)]
    rounds: Option<usize>,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    shots: usize,
}

#[derive(Args)]
struct PrepCheckArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value = "reduced")]
    mode: String,
    #[arg(long, default_value = "reuse")]
    coins: String,
    /// Largest support printed pattern by pattern.
    #[arg(long, default_value_t = 256)]
    list_limit: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
    Text,
}

fn parse_format(raw: &Option<String>, default: Format, allowed: &[Format]) -> qsched::Result<Format> {
    let f = match raw.as_deref() {
        None => default,
        Some("csv") => Format::Csv,
        Some("json") => Format::Json,
        Some("text") => Format::Text,
        Some(other) => return Err(Error::Validation(format!("unknown format {other:?}"))),
    };
    if !allowed.contains(&f) {
        return Err(Error::Validation("format not supported by this command".into()));
    }
    Ok(f)
}

fn parse_layout(args: &LayoutArgs) -> qsched::Result<LayoutOptions> {
    Ok(LayoutOptions {
        ancilla: parse_ancilla(&args.ancilla)?,
        coins: parse_coins(&args.coins)?,
    })
}

fn parse_ancilla(s: &str) -> qsched::Result<AncillaStrategy> {
    match s {
        "flags" => Ok(AncillaStrategy::Flags),
        "counter" => Ok(AncillaStrategy::Counter),
        "auto" => Ok(AncillaStrategy::Auto),
        other => Err(Error::Validation(format!("unknown ancilla strategy {other:?}"))),
    }
}

fn parse_coins(s: &str) -> qsched::Result<CoinPolicy> {
    match s {
        "reuse" => Ok(CoinPolicy::Reuse),
        "per-step" => Ok(CoinPolicy::PerStep),
        other => Err(Error::Validation(format!("unknown coin policy {other:?}"))),
    }
}

fn parse_engine(s: &str) -> qsched::Result<Engine> {
    match s {
        "circuit" => Ok(Engine::Circuit),
        "compiled" => Ok(Engine::Compiled),
        other => Err(Error::Validation(format!("unknown engine {other:?}"))),
    }
}

fn parse_rules(s: &str) -> qsched::Result<DecompositionRules> {
    DecompositionRules::ALL
        .into_iter()
        .find(|r| r.version().split('/').next() == Some(s))
        .ok_or_else(|| Error::Validation(format!("unknown rule table {s:?}")))
}

/// `3`, `1,2,5` or `1..4` (inclusive).
fn parse_list(s: &str) -> qsched::Result<Vec<usize>> {
    let bad = || Error::Validation(format!("bad list {s:?}"));
    if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    s.split(',')
        .map(|p| p.trim().parse().map_err(|_| bad()))
        .collect()
}

fn check_delta(delta: f64) -> qsched::Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Validation(format!("delta {delta} outside (0, 1)")));
    }
    Ok(())
}

fn analyze(args: &AnalyzeArgs) -> qsched::Result<()> {
    let format = parse_format(&args.format, Format::Csv, &[Format::Csv, Format::Json])?;
    let machines = parse_list(&args.machines)?;
    let jobs = parse_list(&args.jobs)?;
    let sweep = analysis::ratio_curves(args.window, &machines, &jobs);
    for s in &sweep.skipped {
        eprintln!("skipped I={} K={}: {}", s.machines, s.jobs, s.reason);
    }
    if sweep.rows.is_empty() && !sweep.skipped.is_empty() {
        return Err(Error::Capacity("every sweep point was skipped".into()));
    }
    let text = match format {
        Format::Json => io::to_json(&sweep)? + "\n",
        _ => io::ratio_csv(&sweep.rows),
    };
    io::emit(args.out.as_deref(), &text)
}

fn simulate(args: &SimulateArgs) -> qsched::Result<()> {
    let format = parse_format(&args.common.format, Format::Csv, &[Format::Csv, Format::Json])?;
    let instance = Instance::load(&args.common.instance)?;
    let mode: Mode = args.common.mode.parse()?;
    check_delta(args.delta)?;
    let config = SearchConfig {
        delta: args.delta,
        layout: parse_layout(&args.layout)?,
        engine: parse_engine(&args.engine)?,
        ..SearchConfig::default()
    };
    let searcher = Searcher::new(&instance, mode, &config)?;
    let w = searcher.initial_fraction();
    let mut trace = if args.grover {
        let rounds = match args.rounds {
            Some(r) => r,
            None => ((std::f64::consts::FRAC_PI_4 / w.sqrt() - 0.5).round().max(0.0) as usize) + 3,
        };
        searcher.grover_trace(rounds)?
    } else {
        let rounds = match args.rounds {
            Some(r) => r,
            None => search::default_max_queries(w, args.delta)?,
        };
        searcher.fixed_point_trace(rounds, args.delta)?
    };
    trace.seed = Some(args.seed);
    let text = match format {
        Format::Json => io::trace_json(&trace)? + "\n",
        _ => io::trace_csv(&trace),
    };
    io::emit(args.common.out.as_deref(), &text)
}

fn resources(args: &ResourcesArgs) -> qsched::Result<()> {
    parse_format(&args.common.format, Format::Json, &[Format::Json])?;
    let instance = Instance::load(&args.common.instance)?;
    let mode: Mode = args.common.mode.parse()?;
    let options = LayoutOptions {
        ancilla: parse_ancilla(&args.ancilla)?,
        coins: CoinPolicy::Reuse,
    };
    let rules = parse_rules(&args.rules)?;
    let report = analysis::qubit_report_with(&instance, mode, options, rules)?;
    io::emit(args.common.out.as_deref(), &(io::resource_json(&report)? + "\n"))
}

struct VerifyReport {
    value: serde_json::Value,
    ok: bool,
}

fn verify_run(args: &VerifyArgs) -> qsched::Result<VerifyReport> {
    let instance = Instance::load(&args.common.instance)?;
    let mode: Mode = args.common.mode.parse()?;
    check_delta(args.delta)?;
    if args.shots == 0 {
        return Err(Error::Validation("shots must be at least 1".into()));
    }
    let config = SearchConfig {
        delta: args.delta,
        layout: parse_layout(&args.layout)?,
        ..SearchConfig::default()
    };
    let searcher = Searcher::new(&instance, mode, &config)?;
    let queries = match args.rounds {
        Some(r) if r % 2 == 1 => r,
        Some(r) => {
            return Err(Error::Validation(format!("query count {r} must be odd")));
        }
        None => search::required_rounds(searcher.initial_fraction(), args.delta)?,
    };
    let state = searcher.fixed_point_state((queries - 1) / 2, args.delta)?;
    let exact = searcher.marked_probability(&state)?;
    let layout = &searcher.pipeline().layout;
    let data = (1usize << layout.data_width()) - 1;
    let hist = state.sample(args.shots, args.seed);
    let passed: usize = hist
        .iter()
        .filter(|(&i, _)| instance.is_solution(&layout.decode_basis(i & data)))
        .map(|(_, &n)| n)
        .sum();
    let fraction = passed as f64 / args.shots as f64;
    let p = exact.clamp(0.0, 1.0);
    let sigma = (p * (1.0 - p) / args.shots as f64).sqrt();
    let ok = (fraction - exact).abs() <= 5.0 * sigma + 1e-12;
    Ok(VerifyReport {
        value: json!({
            "label": instance.label(),
            "mode": mode,
            "queries": queries,
            "delta": args.delta,
            "shots": args.shots,
            "seed": args.seed,
            "exact_probability": exact,
            "pass_fraction": fraction,
            "sigma": sigma,
            "within_5_sigma": ok,
        }),
        ok,
    })
}

fn verify(args: &VerifyArgs) -> qsched::Result<bool> {
    let format = parse_format(&args.common.format, Format::Json, &[Format::Json, Format::Text])?;
    let report = verify_run(args)?;
    let text = match format {
        Format::Text => {
            let v = &report.value;
            format!(
                "{} {} queries {} shots {} seed {}\nexact {} pass {} sigma {}\nstatus {}\n",
                v["label"].as_str().unwrap_or_default(),
                v["mode"].as_str().unwrap_or_default(),
                v["queries"],
                v["shots"],
                v["seed"],
                io::sig10(v["exact_probability"].as_f64().unwrap_or(0.0)),
                io::sig10(v["pass_fraction"].as_f64().unwrap_or(0.0)),
                io::sig10(v["sigma"].as_f64().unwrap_or(0.0)),
                if report.ok { "ok" } else { "FAIL" }
            )
        }
        _ => io::to_json(&report.value)? + "\n",
    };
    io::emit(args.common.out.as_deref(), &text)?;
    Ok(report.ok)
}

fn prep_check(args: &PrepCheckArgs) -> qsched::Result<bool> {
    let format = parse_format(&args.format, Format::Text, &[Format::Text, Format::Json])?;
    let instance = Instance::load(&args.instance)?;
    let mode: Mode = args.mode.parse()?;
    if mode != Mode::Reduced {
        return Err(Error::Validation("prep-check needs --mode reduced".into()));
    }
    let options = LayoutOptions {
        ancilla: AncillaStrategy::Flags,
        coins: parse_coins(&args.coins)?,
    };
    let layout = QubitLayout::build(&instance, mode, options)?;
    let prep = qsched::circuits::build_walk_prep(&instance, &layout)?;
    let width = layout.active_width();
    let mut state = StateVector::new(width)?;
    state.apply_circuit(&prep.widened(width)?)?;

    let probs = state.marginal(layout.data_width());
    let support: Vec<usize> = (0..probs.len()).filter(|&i| probs[i] > 1e-12).collect();
    let expected = path_mask(&instance, &layout)?;
    let matches = support.len() == expected.len() && support.iter().all(|&i| expected.contains(i));
    let target = (instance.window() as f64).powf(-((instance.jobs() * instance.machines()) as f64) / 2.0);
    let mags: Vec<f64> = support.iter().map(|&i| probs[i].sqrt()).collect();
    let min = mags.iter().copied().fold(f64::INFINITY, f64::min);
    let max = mags.iter().copied().fold(0.0, f64::max);
    let uniform = mags.iter().all(|m| (m - target).abs() <= 1e-9);
    let coin_zero = match layout.coin_policy() {
        CoinPolicy::Reuse => {
            let coin_bits: usize = layout.coin_registers()[0]
                .wires()
                .iter()
                .fold(0, |m, &w| m | (1 << w));
            Some(
                state
                    .amplitudes()
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| i & coin_bits == 0)
                    .map(|(_, a)| a.norm_sqr())
                    .sum::<f64>(),
            )
        }
        CoinPolicy::PerStep => None,
    };
    let ok = matches && uniform && coin_zero.is_none_or(|p| p >= 1.0 - 1e-9);
    let listed: Vec<(usize, f64)> = if support.len() <= args.list_limit {
        support.iter().copied().zip(mags.iter().copied()).collect()
    } else {
        Vec::new()
    };

    let text = match format {
        Format::Json => {
            let patterns: Vec<_> = listed
                .iter()
                .map(|&(i, m)| json!({"pattern": layout.render_data(i), "index": i, "magnitude": m}))
                .collect();
            io::to_json(&json!({
                "label": instance.label(),
                "support_size": support.len(),
                "expected_support": expected.len(),
                "support_matches": matches,
                "expected_magnitude": target,
                "min_magnitude": min,
                "max_magnitude": max,
                "coin_zero_probability": coin_zero,
                "ok": ok,
                "patterns": patterns,
            }))? + "\n"
        }
        _ => {
            let mut t = format!(
                "instance {} wires {}\nsupport {} expected {} match {}\nmagnitude min {} max {} expected {}\n",
                instance.label(),
                width,
                support.len(),
                expected.len(),
                if matches { "yes" } else { "no" },
                io::sig10(min),
                io::sig10(max),
                io::sig10(target),
            );
            match coin_zero {
                Some(p) => t.push_str(&format!("coin_zero_probability {}\n", io::sig10(p))),
                None => t.push_str("coin_zero_probability n/a\n"),
            }
            t.push_str(&format!("status {}\n", if ok { "ok" } else { "FAIL" }));
            if !listed.is_empty() {
                t.push_str("patterns\n");
                for (i, m) in &listed {
                    t.push_str(&format!("{} {}\n", layout.render_data(*i), io::sig10(*m)));
                }
            }
            t
        }
    };
    io::emit(args.out.as_deref(), &text)?;
    Ok(ok)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Capacity(_) => 3,
        Error::Validation(_) | Error::Parameter(_) | Error::Layout(_) | Error::Json(_) => 2,
        Error::Io(_) | Error::Wiring(_) => 1,
    }
}

fn run(cli: &Cli) -> qsched::Result<bool> {
    match &cli.command {
        Command::Analyze(a) => analyze(a).map(|_| true),
        Command::Simulate(a) => simulate(a).map(|_| true),
        Command::Resources(a) => resources(a).map(|_| true),
        Command::Verify(a) => verify(a),
        Command::PrepCheck(a) => prep_check(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("qsched: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

