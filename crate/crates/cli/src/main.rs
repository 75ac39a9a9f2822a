//! `mallows`: command-line front end for the Mallows cycle-statistics laboratory.
//!
//! Exit codes: 0 all checks passed, 1 a check failed, 2 usage or config error,
//! 3 a resource cap was hit.

mod config;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use mallows_core::constants::{
    alpha1, estimate_renewal_constants, estimate_symmetric_constants, stationary_mu, DEFAULT_AMBIENT_N,
    DEFAULT_BATCHES, DEFAULT_I_MAX, DEFAULT_TOL,
};
use mallows_core::exact::exact_distribution;
use mallows_core::harness::{
    clt_check, mean_variance_scaling, parity_limit_check, size_bias_convergence, CycleSelection, CycleStatistic,
    ShapeThresholds,
};
use mallows_core::perm::{cycle_counts, Permutation};
use mallows_core::regen::{
    decompose_additive, decompose_antiadditive, occupation_distribution, sample_excursions,
    sample_symmetric_blocks, HarvestPolicy, DEFAULT_STEP_CAP,
};
use mallows_core::sampler::FiniteSampler;
use mallows_core::statistic::BlockStatistic;
use mallows_core::stats::tv_distance;
use mallows_core::validate::{run_validation, Profile, ValidateConfig};
use mallows_core::{Executor, Plan, RngStream};

use config::{CommonArgs, Format, RunConfig};
use output::{csv_bytes, Sink};

/// Mallows permutations with q != 1: exact laws, samplers, regenerative
/// decompositions, limit constants and CLT checks.
///
/// Config files hold `key = value` lines (or one JSON object) using the long
/// flag names: q, n, sizes, reps, imax, seed, workers, chunks, out, format,
/// profile, tol. Unknown keys are rejected and flags override the file.
#[derive(Parser, Debug)]
#[command(name = "mallows", version)]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dump Mallows(n, q) samples, one permutation per line.
    Sample,
    /// Exact law on S_n, or an exact expectation with --stat.
    Exact {
        /// C or C<i>.
        #[arg(long)]
        stat: Option<String>,
    },
    /// Additive and symmetric cut points of a permutation.
    Decompose {
        /// One-line notation, comma-separated; sampled from --n and --q when absent.
        #[arg(long)]
        perm: Option<String>,
        #[arg(long)]
        include_perms: bool,
    },
    /// Consecutive excursions of the Mallows process (q < 1).
    Excursions,
    /// Interior pair blocks and central blocks of Mallows(n, q) samples (q > 1).
    SymmetricBlocks,
    /// Renewal-reward limit constants; the regime follows the sign of q - 1.
    Constants,
    /// Fixed-point density series.
    Alpha1,
    /// Chain occupation frequencies against the stationary law.
    MuCheck,
    /// Gaussian-shape checks of cycle statistics.
    Clt {
        /// Comma-separated statistics, e.g. C,C1,C2.
        #[arg(long, value_delimiter = ',')]
        stats: Option<Vec<String>>,
    },
    /// Mean and variance of a statistic across sizes.
    Scaling {
        #[arg(long)]
        stat: Option<String>,
    },
    /// Odd-cycle laws at n against n + 2 and n + 1 (q > 1).
    Parity,
    /// Length of the block covering n against the size-biased mean.
    SizeBias,
    /// The full acceptance battery.
    Validate {
        /// Comma-separated criterion ids; all when absent.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<usize>>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Sample => "sample",
            Command::Exact { .. } => "exact",
            Command::Decompose { .. } => "decompose",
            Command::Excursions => "excursions",
            Command::SymmetricBlocks => "symmetric-blocks",
            Command::Constants => "constants",
            Command::Alpha1 => "alpha1",
            Command::MuCheck => "mu-check",
            Command::Clt { .. } => "clt",
            Command::Scaling { .. } => "scaling",
            Command::Parity => "parity",
            Command::SizeBias => "size-bias",
            Command::Validate { .. } => "validate",
        }
    }
}

enum Failure {
    Usage(String),
    Core(mallows_core::Error),
    Cap(String),
    Io(std::io::Error),
}

impl From<mallows_core::Error> for Failure {
    fn from(e: mallows_core::Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = Result<bool, Failure>;

struct Run {
    config: RunConfig,
    exec: Executor,
    profile: Profile,
}

impl Run {
    fn q(&self) -> Result<f64, Failure> {
        self.config.q.ok_or_else(|| Failure::Usage("--q is required".into()))
    }

    fn n_or(&self, default: usize) -> usize {
        self.config.n.unwrap_or(default)
    }

    fn reps_or(&self, default: u64) -> u64 {
        self.config.reps.unwrap_or(default * self.profile.scale())
    }

    fn sizes_or(&self, default: &[usize]) -> Vec<usize> {
        self.config.sizes.clone().unwrap_or_else(|| default.to_vec())
    }

    fn stream(&self, label: &str) -> RngStream {
        RngStream::for_task(self.config.seed(), label)
    }

    fn json_only(&self, what: &str) -> Result<(), Failure> {
        match self.config.format() {
            Format::Json => Ok(()),
            Format::Csv => Err(Failure::Usage(format!("{what} has no CSV form; use --format json"))),
        }
    }
}

fn parse_stat(s: &str) -> Result<CycleStatistic, Failure> {
    s.parse().map_err(|e: mallows_core::Error| Failure::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match RunConfig::resolve(&cli.common) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("mallows: config error: {e}");
            return ExitCode::from(2);
        }
    };
    let profile = match config.profile.as_deref().map(str::parse::<Profile>).transpose() {
        Ok(p) => p.unwrap_or(Profile::Desk),
        Err(e) => {
            eprintln!("mallows: config error: {e}");
            return ExitCode::from(2);
        }
    };
    let plan = config.chunks.map(Plan::new).unwrap_or_default();
    let run = Run {
        exec: Executor::new(config.workers(), plan),
        config,
        profile,
    };
    let name = cli.command.name();
    let mut sink = match Sink::new(run.config.out.clone()) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("mallows: cannot create output directory: {e}");
            return ExitCode::from(2);
        }
    };
    let outcome = dispatch(&cli.command, &run, &mut sink);
    let finished = sink.finish(name, &run.config);
    let outcome = outcome.and_then(|ok| finished.map(|_| ok).map_err(Failure::Io));
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("mallows {name}: a check failed");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("mallows {name}: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) if e.is_resource_cap() => {
            eprintln!("mallows {name}: {e}");
            ExitCode::from(3)
        }
        Err(Failure::Cap(msg)) => {
            eprintln!("mallows {name}: resource cap hit: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Core(e)) => {
            eprintln!("mallows {name}: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("mallows {name}: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: &Command, run: &Run, sink: &mut Sink) -> Outcome {
    match command {
        Command::Sample => sample(run, sink),
        Command::Exact { stat } => exact(run, sink, stat.as_deref()),
        Command::Decompose { perm, include_perms } => decompose(run, sink, perm.as_deref(), *include_perms),
        Command::Excursions => excursions(run, sink),
        Command::SymmetricBlocks => symmetric_blocks(run, sink),
        Command::Constants => constants(run, sink),
        Command::Alpha1 => alpha1_cmd(run, sink),
        Command::MuCheck => mu_check(run, sink),
        Command::Clt { stats } => clt(run, sink, stats.as_deref()),
        Command::Scaling { stat } => scaling(run, sink, stat.as_deref()),
        Command::Parity => parity(run, sink),
        Command::SizeBias => size_bias(run, sink),
        Command::Validate { only } => validate(run, sink, only.clone()),
    }
}

fn sample(run: &Run, sink: &mut Sink) -> Outcome {
    let q = run.q()?;
    let n = run.config.n.ok_or_else(|| Failure::Usage("--n is required".into()))?;
    let sampler = FiniteSampler::new(n, q)?;
    let parts = run.exec.map_chunks(run.reps_or(10), run.stream("sample"), |_, share, s| {
        let mut rng = s.rng();
        let mut text = String::new();
        for _ in 0..share {
            text.push_str(&sampler.sample(&mut rng).one_line());
            text.push('\n');
        }
        text
    });
    sink.emit("samples.txt", parts.concat().into_bytes())?;
    Ok(true)
}

fn exact(run: &Run, sink: &mut Sink, stat: Option<&str>) -> Outcome {
    let q = run.q()?;
    let n = run.config.n.ok_or_else(|| Failure::Usage("--n is required".into()))?;
    let dist = exact_distribution(n, q)?;
    if let Some(stat) = stat {
        let sel = CycleSelection(vec![parse_stat(stat)?]);
        let value = dist.expectation(|w| {
            let mut out = [0i64];
            sel.evaluate(w.as_slice(), &mut out);
            vec![out[0] as f64]
        })[0];
        sink.emit("expectation.txt", format!("{value}\n").into_bytes())?;
        return Ok(true);
    }
    match run.config.format() {
        Format::Csv => {
            let mut bytes = Vec::new();
            dist.write_csv(&mut bytes).map_err(|e| Failure::Io(std::io::Error::other(e)))?;
            sink.emit("exact.csv", bytes)?;
        }
        Format::Json => sink.emit_json("exact.json", &dist)?,
    }
    Ok(true)
}

fn decompose(run: &Run, sink: &mut Sink, perm: Option<&str>, include_perms: bool) -> Outcome {
    run.json_only("decompose")?;
    let w = match perm {
        Some(text) => Permutation::parse_one_line(text).map_err(|e| Failure::Usage(e.to_string()))?,
        None => {
            let q = run.q()?;
            let n = run.config.n.ok_or_else(|| Failure::Usage("--perm or --n is required".into()))?;
            FiniteSampler::new(n, q)?.sample(&mut run.stream("decompose").rng())
        }
    };
    #[derive(Serialize)]
    struct Out {
        perm: Option<Permutation>,
        additive: mallows_core::regen::DecompositionSummary,
        symmetric: mallows_core::regen::DecompositionSummary,
    }
    let out = Out {
        perm: include_perms.then(|| w.clone()),
        additive: decompose_additive(&w).summary(include_perms),
        symmetric: decompose_antiadditive(&w).summary(include_perms),
    };
    sink.emit_json("decomposition.json", &out)?;
    Ok(true)
}

#[derive(Serialize)]
struct BlockRow {
    kind: String,
    length: usize,
    cycles: u64,
    perm: String,
}

fn block_rows(run: &Run, sink: &mut Sink, name: &str, rows: &[BlockRow]) -> Outcome {
    match run.config.format() {
        Format::Csv => sink.emit(&format!("{name}.csv"), csv_bytes(rows)?)?,
        Format::Json => sink.emit_json(&format!("{name}.json"), &rows)?,
    }
    Ok(true)
}

fn excursions(run: &Run, sink: &mut Sink) -> Outcome {
    let q = run.q()?;
    let count = run.reps_or(1000) as usize;
    let ex = sample_excursions(q, count, DEFAULT_STEP_CAP, run.stream("excursions").rng())?;
    let rows: Vec<BlockRow> = ex
        .iter()
        .map(|e| BlockRow {
            kind: "excursion".into(),
            length: e.length(),
            cycles: cycle_counts(&e.block).total(),
            perm: e.block.one_line(),
        })
        .collect();
    block_rows(run, sink, "excursions", &rows)
}

fn symmetric_blocks(run: &Run, sink: &mut Sink) -> Outcome {
    let q = run.q()?;
    let n = run.n_or(10_000);
    let reps = run.reps_or(100) as usize;
    let h = sample_symmetric_blocks(q, n, reps, HarvestPolicy::default(), &mut run.stream("symmetric-blocks").rng())?;
    let tag = match h.parity {
        mallows_core::regen::Parity::Even => "central_even",
        mallows_core::regen::Parity::Odd => "central_odd",
    };
    let rows: Vec<BlockRow> = h
        .pair_blocks
        .iter()
        .map(|b| ("pair", b))
        .chain(h.centrals.iter().map(|b| (tag, b)))
        .map(|(kind, b)| BlockRow {
            kind: kind.into(),
            length: b.length(),
            cycles: cycle_counts(&b.block).total(),
            perm: b.block.one_line(),
        })
        .collect();
    block_rows(run, sink, "symmetric_blocks", &rows)
}

fn constants(run: &Run, sink: &mut Sink) -> Outcome {
    run.json_only("constants")?;
    let q = run.q()?;
    let imax = run.config.imax.unwrap_or(DEFAULT_I_MAX);
    let count = run.reps_or(1_000_000);
    let stream = run.stream("constants");
    let report = if q < 1.0 {
        estimate_renewal_constants(q, count, imax, DEFAULT_BATCHES, &run.exec, stream)?
    } else {
        estimate_symmetric_constants(q, count, imax, run.n_or(DEFAULT_AMBIENT_N), DEFAULT_BATCHES, &run.exec, stream)?
    };
    sink.emit_json("constants.json", &report)?;
    let diagonal_positive = (0..report.beta.len()).all(|i| report.beta[i][i] > 0.0);
    Ok(report.is_symmetric() && diagonal_positive)
}

fn alpha1_cmd(run: &Run, sink: &mut Sink) -> Outcome {
    run.json_only("alpha1")?;
    let q = run.q()?;
    let value = alpha1(q, run.config.tol.unwrap_or(DEFAULT_TOL))?;
    #[derive(Serialize)]
    struct Out {
        q: f64,
        #[serde(flatten)]
        value: mallows_core::constants::QSeriesValue,
    }
    sink.emit_json("alpha1.json", &Out { q, value })?;
    Ok(true)
}

fn mu_check(run: &Run, sink: &mut Sink) -> Outcome {
    run.json_only("mu-check")?;
    let q = run.q()?;
    let steps = run.reps_or(10_000_000);
    let tol = run.config.tol.unwrap_or(0.005);
    let law = stationary_mu(q, None, DEFAULT_TOL)?;
    let occ = occupation_distribution(q, steps, 10_000, &mut run.stream("mu-check").rng())?;
    let tv = tv_distance(&occ.pmf, &law.pmf);
    #[derive(Serialize)]
    struct Out {
        q: f64,
        steps: u64,
        burn_in: u64,
        tv: f64,
        tolerance: f64,
        mu0: f64,
        occupation0: f64,
        occupation0_se: f64,
        stationary: Vec<f64>,
        occupation: Vec<f64>,
        passed: bool,
    }
    let out = Out {
        q,
        steps,
        burn_in: occ.burn_in,
        tv,
        tolerance: tol,
        mu0: law.mu0(),
        occupation0: occ.pmf[0],
        occupation0_se: occ.zero_std_error,
        stationary: law.pmf,
        occupation: occ.pmf,
        passed: tv < tol,
    };
    sink.emit_json("mu_check.json", &out)?;
    Ok(out.passed)
}

fn clt(run: &Run, sink: &mut Sink, stats: Option<&[String]>) -> Outcome {
    run.json_only("clt")?;
    let q = run.q()?;
    let stats: Vec<CycleStatistic> = match stats {
        Some(list) => list.iter().map(|s| parse_stat(s)).collect::<Result<_, _>>()?,
        None if q > 1.0 => vec![CycleStatistic::Total, CycleStatistic::Length(2)],
        None => vec![CycleStatistic::Total, CycleStatistic::Length(1), CycleStatistic::Length(2)],
    };
    let report = clt_check(
        q,
        run.n_or(10_000),
        run.reps_or(10_000),
        &stats,
        ShapeThresholds::default(),
        &run.exec,
        run.stream("clt"),
    )
    .map_err(|e| match e {
        mallows_core::Error::BadStatistic(m) => Failure::Usage(m),
        e => Failure::Core(e),
    })?;
    sink.emit_json("clt.json", &report)?;
    Ok(report.passed())
}

fn scaling(run: &Run, sink: &mut Sink, stat: Option<&str>) -> Outcome {
    let q = run.q()?;
    let stat = parse_stat(stat.unwrap_or("C1"))?;
    let table = mean_variance_scaling(
        q,
        &run.sizes_or(&[2500, 5000, 10_000]),
        run.reps_or(10_000),
        stat,
        &run.exec,
        run.stream("scaling"),
    )?;
    let per_n = !(q > 1.0 && stat.is_odd_cycle());
    let ok = table.stabilization(per_n, 3.0).iter().all(|a| a.passed);
    match run.config.format() {
        Format::Json => sink.emit_json("scaling.json", &table)?,
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                n: usize,
                reps: usize,
                mean: f64,
                mean_se: f64,
                variance: f64,
                variance_se: f64,
                mean_over_n: f64,
                mean_over_n_se: f64,
                variance_over_n: f64,
                variance_over_n_se: f64,
            }
            let rows: Vec<Row> = table
                .raw
                .iter()
                .zip(&table.per_n)
                .map(|(r, s)| Row {
                    n: r.n,
                    reps: r.reps,
                    mean: r.mean,
                    mean_se: r.mean_se,
                    variance: r.variance,
                    variance_se: r.variance_se,
                    mean_over_n: s.mean,
                    mean_over_n_se: s.mean_se,
                    variance_over_n: s.variance,
                    variance_over_n_se: s.variance_se,
                })
                .collect();
            sink.emit("scaling.csv", csv_bytes(&rows)?)?;
        }
    }
    Ok(ok)
}

fn parity(run: &Run, sink: &mut Sink) -> Outcome {
    run.json_only("parity")?;
    let q = run.q()?;
    let report = parity_limit_check(
        q,
        run.n_or(1000),
        run.reps_or(100_000),
        run.config.imax.unwrap_or(3),
        &run.exec,
        run.stream("parity"),
    )?;
    sink.emit_json("parity.json", &report)?;
    let tol = run.config.tol.unwrap_or(0.02);
    Ok(report.same.pmfs.iter().all(|p| p.tv < tol) && report.same.odd_total.passed)
}

fn size_bias(run: &Run, sink: &mut Sink) -> Outcome {
    let q = run.q()?;
    let table = size_bias_convergence(
        q,
        &run.sizes_or(&[1000, 10_000]),
        run.reps_or(20_000),
        1_000_000 * run.profile.scale(),
        DEFAULT_STEP_CAP,
        &run.exec,
        run.stream("size-bias"),
    )?;
    match run.config.format() {
        Format::Json => sink.emit_json("size_bias.json", &table)?,
        Format::Csv => sink.emit("size_bias.csv", csv_bytes(&table.rows)?)?,
    }
    Ok(table.final_agreement.passed)
}

fn validate(run: &Run, sink: &mut Sink, only: Option<Vec<usize>>) -> Outcome {
    run.json_only("validate")?;
    let config = ValidateConfig {
        seed: run.config.seed(),
        profile: run.profile,
        only,
    };
    let report = run_validation(&config, &run.exec).map_err(|e| Failure::Usage(e.to_string()))?;
    for c in &report.criteria {
        let status = if c.passed { "PASS" } else { "FAIL" };
        eprintln!("criterion {:>2} {status}  {}", c.id, c.title);
        if let Some(e) = &c.error {
            eprintln!("    error: {e}");
        }
        for check in c.checks.iter().filter(|k| !k.passed) {
            eprintln!("    {}: {} vs {}", check.name, check.value, check.threshold);
        }
    }
    sink.emit_json("validate.json", &report)?;
    if report.cap_hit {
        let msg = report
            .criteria
            .iter()
            .filter(|c| c.cap_hit)
            .filter_map(|c| c.error.clone())
            .collect::<Vec<_>>()
            .join("; ");
        return Err(Failure::Cap(msg));
    }
    Ok(report.passed)
}
