//! Commands behind the `bursty-relay` binary: formula tables, condition
//! checks, Monte-Carlo runs and CSV sweeps over the arrival probability.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use bursty_relay::sim::{repetition_seed, run_logged};
use bursty_relay::{
    achievable_per_user, bounds, classify, estimate_dof, interference_free_check,
    necessary_condition, numeric_necessity_oracle, probability_from_f64, stability_report,
    AntennaConfig, FormulaError, Metrics, SchemeKind, SimConfig, SimError, StabilityVerdict,
    TrafficModel, TrafficTrace, Q,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Environment variable naming the directory that relative output paths
/// are resolved against.
pub const OUT_DIR_ENV: &str = "BURSTY_RELAY_OUT";

/// Fixed sweep CSV header.
pub const SWEEP_HEADER: [&str; 10] = [
    "p",
    "M",
    "N",
    "L",
    "ind_bound",
    "sum_bound",
    "achievable_per_user",
    "empirical_dof_user1",
    "empirical_dof_user2",
    "stderr",
];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) | CliError::Sim(_) | CliError::Runtime(_) => 3,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

/// A run or sweep description, read from JSON. Every field is optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSpec {
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub p: f64,
    pub epsilon: f64,
    /// Pins the throttle probability; `1.0` switches throttling off.
    pub q: Option<f64>,
    /// Defaults to the scheme of the configuration's regime.
    pub scheme: Option<SchemeKind>,
    pub slots: usize,
    pub drain_slots: usize,
    pub prime: u64,
    pub seed: u64,
    pub repetitions: usize,
    pub window: usize,
    pub warmup: usize,
    pub p_min: f64,
    pub p_max: f64,
    pub p_steps: usize,
    #[serde(rename = "L_list")]
    pub l_list: Option<Vec<usize>>,
    /// Fill the empirical sweep columns.
    pub simulate: bool,
    /// Use M = 2N + L at every sweep point.
    pub large_m_proxy: bool,
}

impl Default for RunSpec {
    fn default() -> Self {
        let base = SimConfig::new(
            AntennaConfig::new(4, 1, 2),
            TrafficModel::default(),
            SchemeKind::CoopNullC2,
            200_000,
            7,
        );
        Self {
            m: 4,
            n: 1,
            l: 2,
            p: base.model.p,
            epsilon: base.model.epsilon,
            q: None,
            scheme: None,
            slots: base.slots,
            drain_slots: base.drain_slots,
            prime: base.prime,
            seed: base.seed,
            repetitions: 5,
            window: base.window,
            warmup: base.warmup,
            p_min: 0.0,
            p_max: 1.0,
            p_steps: 21,
            l_list: None,
            simulate: false,
            large_m_proxy: false,
        }
    }
}

impl RunSpec {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let spec: RunSpec =
            serde_json::from_str(text).map_err(|e| usage(format!("bad run spec: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        for (name, v) in [("p", self.p), ("p_min", self.p_min), ("p_max", self.p_max)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(usage(format!("{name} = {v} is outside [0, 1]")));
            }
        }
        if self.p_min > self.p_max {
            return Err(usage("p_min exceeds p_max"));
        }
        if self.p_steps == 0 {
            return Err(usage("p_steps must be at least 1"));
        }
        if self.repetitions == 0 {
            return Err(usage("repetitions must be at least 1"));
        }
        self.config().validate().map_err(usage)?;
        Ok(())
    }

    pub fn config(&self) -> AntennaConfig {
        AntennaConfig::new(self.m, self.n, self.l)
    }

    pub fn scheme(&self) -> Result<SchemeKind, CliError> {
        let config = self.config();
        match self.scheme.or_else(|| SchemeKind::for_config(config)) {
            Some(s) => Ok(s),
            None => Err(usage(format!(
                "no scheme is known for {config} (regime {})",
                classify(config)
            ))),
        }
    }

    /// Simulation settings at probability `p` on `config`.
    pub fn sim_config(&self, config: AntennaConfig, scheme: SchemeKind, p: f64) -> SimConfig {
        let mut model = TrafficModel::new(p, self.epsilon);
        model.q_override = self.q;
        let mut sim = SimConfig::new(config, model, scheme, self.slots, self.seed);
        sim.drain_slots = self.drain_slots;
        sim.prime = self.prime;
        sim.window = self.window;
        sim.warmup = self.warmup;
        sim
    }

    /// The exact sweep grid, evenly spaced from `p_min` to `p_max`.
    pub fn p_grid(&self) -> Result<Vec<Q>, CliError> {
        let lo = probability_from_f64(self.p_min).map_err(usage)?;
        let hi = probability_from_f64(self.p_max).map_err(usage)?;
        if self.p_steps == 1 {
            return Ok(vec![lo]);
        }
        let span = hi - lo;
        let last = self.p_steps as i64 - 1;
        Ok((0..=last).map(|k| lo + span * Q::new(k, last)).collect())
    }

    fn sweep_configs(&self) -> Vec<AntennaConfig> {
        let ls = self.l_list.clone().unwrap_or_else(|| vec![self.l]);
        ls.into_iter()
            .map(|l| {
                let m = if self.large_m_proxy {
                    2 * self.n + l
                } else {
                    self.m
                };
                AntennaConfig::new(m, self.n, l)
            })
            .collect()
    }
}

pub fn q_to_f64(q: Q) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

fn fmt_q(q: Q) -> String {
    format!("{}", q_to_f64(q))
}

/// Resolves a relative output path against `$BURSTY_RELAY_OUT`, if set.
pub fn output_path(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    if let Some(parent) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

pub fn cmd_formulas(config: AntennaConfig, p: &str) -> Result<String, CliError> {
    config.validate().map_err(usage)?;
    let p = bursty_relay::parse_probability(p).map_err(usage)?;
    let b = bounds(config, p);
    let mut out = String::new();
    let _ = writeln!(out, "config            {config}");
    let _ = writeln!(out, "p                 {p} ({})", fmt_q(p));
    let _ = writeln!(
        out,
        "individual cap    {} ({})",
        b.individual_cap,
        fmt_q(b.individual_cap)
    );
    let _ = writeln!(
        out,
        "sum cap           {} ({})",
        b.sum_cap,
        fmt_q(b.sum_cap)
    );
    match achievable_per_user(config, p) {
        Ok(a) => {
            let _ = writeln!(out, "achievable        {a} ({})", fmt_q(a));
        }
        Err(FormulaError::NoScheme { .. }) => {
            let _ = writeln!(out, "achievable        NA");
        }
        Err(e) => return Err(CliError::Runtime(e.to_string())),
    }
    let _ = writeln!(out, "regime            {}", classify(config));
    let verdict = match interference_free_check(config, p) {
        Ok(v) => v.to_string(),
        Err(_) => "NA".to_string(),
    };
    let _ = writeln!(out, "interference-free {verdict}");
    Ok(out)
}

/// One row of the sweep CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub p: Q,
    pub config: AntennaConfig,
    pub ind_bound: Q,
    pub sum_bound: Q,
    pub achievable: Option<Q>,
    pub empirical: Option<([f64; 2], f64)>,
}

impl SweepRow {
    fn record(&self, simulate: bool) -> Vec<String> {
        let AntennaConfig { m, n, l } = self.config;
        let na = || "NA".to_string();
        let (e1, e2, se) = match (&self.empirical, simulate, self.achievable) {
            (Some((d, se)), _, _) => (d[0].to_string(), d[1].to_string(), se.to_string()),
            (None, true, None) => (na(), na(), na()),
            _ => (String::new(), String::new(), String::new()),
        };
        vec![
            fmt_q(self.p),
            m.to_string(),
            n.to_string(),
            l.to_string(),
            fmt_q(self.ind_bound),
            fmt_q(self.sum_bound),
            self.achievable.map(fmt_q).unwrap_or_else(na),
            e1,
            e2,
            se,
        ]
    }
}

fn sweep_point(spec: &RunSpec, config: AntennaConfig, p: Q) -> Result<SweepRow, CliError> {
    let b = bounds(config, p);
    let achievable = achievable_per_user(config, p).ok();
    let mut empirical = None;
    if spec.simulate && achievable.is_some() {
        if let Some(scheme) = SchemeKind::for_config(config) {
            let sim = spec.sim_config(config, scheme, q_to_f64(p));
            // a throttle outside [0, 1] leaves the point without an estimate
            if sim.throttle().is_ok() {
                let est = estimate_dof(&sim, spec.repetitions)?;
                if let Some(bad) = est.runs.iter().find(|m| !m.exact()) {
                    return Err(CliError::Runtime(format!(
                        "inexact run at {config}, p = {p}: {bad:?}"
                    )));
                }
                empirical = Some((est.mean, est.stderr[0].max(est.stderr[1])));
            }
        }
    }
    Ok(SweepRow {
        p,
        config,
        ind_bound: b.individual_cap,
        sum_bound: b.sum_cap,
        achievable,
        empirical,
    })
}

/// Evaluates every `(L, p)` point of the spec, in parallel, sorted by `(L, p)`.
pub fn sweep_rows(spec: &RunSpec) -> Result<Vec<SweepRow>, CliError> {
    spec.validate()?;
    let grid = spec.p_grid()?;
    let mut points: Vec<(AntennaConfig, Q)> = spec
        .sweep_configs()
        .into_iter()
        .flat_map(|c| grid.iter().map(move |&p| (c, p)))
        .collect();
    points.sort_by(|a, b| (a.0.l, a.1, a.0.m).cmp(&(b.0.l, b.1, b.0.m)));
    points.dedup();
    points
        .into_par_iter()
        .map(|(c, p)| sweep_point(spec, c, p))
        .collect()
}

/// Renders the sweep as CSV text.
pub fn cmd_sweep(spec: &RunSpec) -> Result<String, CliError> {
    let rows = sweep_rows(spec)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SWEEP_HEADER).map_err(io::Error::from)?;
    for row in &rows {
        w.write_record(row.record(spec.simulate))
            .map_err(io::Error::from)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Outcome of scanning antenna configurations against the numeric oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub scanned: usize,
    pub grid: usize,
    pub disagreements: Vec<(AntennaConfig, bool, bool)>,
}

impl CheckReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (c, closed, oracle) in &self.disagreements {
            let _ = writeln!(
                out,
                "disagreement at {c}: condition {closed}, oracle {oracle}"
            );
        }
        let _ = writeln!(
            out,
            "scanned {} configurations on a {}-point grid, {} disagreements",
            self.scanned,
            self.grid,
            self.disagreements.len()
        );
        out
    }
}

/// Compares the closed-form necessary condition with the numeric oracle for
/// `1 <= M <= m_max`, `1 <= N <= n_max`, `0 <= L <= l_max`.
pub fn cmd_check(
    m_max: usize,
    n_max: usize,
    l_max: usize,
    grid: usize,
) -> Result<CheckReport, CliError> {
    if grid < 2 {
        return Err(usage(format!("grid must be at least 2, got {grid}")));
    }
    if m_max == 0 || n_max == 0 {
        return Err(usage("M_max and N_max must be positive"));
    }
    let configs: Vec<AntennaConfig> = (1..=m_max)
        .flat_map(|m| {
            (1..=n_max).flat_map(move |n| (0..=l_max).map(move |l| AntennaConfig::new(m, n, l)))
        })
        .collect();
    let scanned = configs.len();
    let disagreements = configs
        .into_par_iter()
        .filter_map(|c| {
            let closed = necessary_condition(c);
            let oracle = numeric_necessity_oracle(c, grid).expect("grid checked above");
            (closed != oracle).then_some((c, closed, oracle))
        })
        .collect();
    Ok(CheckReport {
        scanned,
        grid,
        disagreements,
    })
}

/// What `simulate` produced.
#[derive(Debug, Clone)]
pub struct SimulateReport {
    pub sim: SimConfig,
    pub mean: [f64; 2],
    pub stderr: [f64; 2],
    pub sum_mean: f64,
    pub verdict: StabilityVerdict,
    pub runs: Vec<Metrics>,
}

impl SimulateReport {
    pub fn queue_maxima(&self) -> Vec<(&'static str, usize)> {
        let mut out: Vec<(&'static str, usize)> = Vec::new();
        for m in &self.runs {
            for q in &m.queues {
                match out.iter_mut().find(|(n, _)| *n == q.name) {
                    Some(e) => e.1 = e.1.max(q.max),
                    None => out.push((q.name, q.max)),
                }
            }
        }
        out
    }

    pub fn render(&self) -> String {
        let s = &self.sim;
        let mut out = String::new();
        let _ = writeln!(out, "config      {} scheme {}", s.config, s.scheme);
        match &s.forced_trace {
            Some(t) => {
                let _ = writeln!(out, "traffic     forced trace of {} slots", t.len());
            }
            None => {
                let throttle = self.runs.first().map(|m| m.throttle).unwrap_or(1.0);
                let _ = writeln!(
                    out,
                    "traffic     p = {} epsilon = {} q = {throttle:.6}",
                    s.model.p, s.model.epsilon
                );
            }
        }
        let _ = writeln!(
            out,
            "horizon     {} slots x {} runs, seed {}",
            s.slots,
            self.runs.len(),
            s.seed
        );
        let _ = writeln!(
            out,
            "dof user 1  {:.6} +- {:.6}",
            self.mean[0], self.stderr[0]
        );
        let _ = writeln!(
            out,
            "dof user 2  {:.6} +- {:.6}",
            self.mean[1], self.stderr[1]
        );
        let _ = writeln!(out, "sum dof     {:.6}", self.sum_mean);
        let _ = writeln!(out, "stability   {}", self.verdict);
        for (name, max) in self.queue_maxima() {
            let _ = writeln!(out, "queue max   {name} {max}");
        }
        let mismatches: u64 = self.runs.iter().map(|m| m.decode_mismatches).sum();
        let zf: u64 = self.runs.iter().map(|m| m.zf_violations).sum();
        let _ = writeln!(
            out,
            "exactness   {mismatches} decode mismatches, {zf} zero-forcing violations"
        );
        if s.record_events {
            for m in &self.runs {
                let last = m.events.iter().map(|e| e.slot).max().unwrap_or(0);
                for slot in 1..=last {
                    for rx in bursty_relay::User::BOTH {
                        let d = m.decoded_at(slot, rx);
                        if !d.is_empty() {
                            let _ = writeln!(out, "slot {slot} rx{rx} decodes {}", d.join(" "));
                        }
                    }
                }
            }
        }
        out
    }
}

/// Runs the spec (or `trace`, if given) and optionally writes a JSONL slot log
/// of the first repetition.
pub fn cmd_simulate(
    spec: &RunSpec,
    trace: Option<TrafficTrace>,
    log: Option<&Path>,
) -> Result<SimulateReport, CliError> {
    spec.validate()?;
    let config = spec.config();
    let scheme = spec.scheme()?;
    let mut sim = spec.sim_config(config, scheme, spec.p);
    let forced = trace.is_some();
    if let Some(trace) = trace {
        let mut f = SimConfig::forced(config, scheme, trace, spec.seed);
        f.drain_slots = spec.drain_slots;
        f.prime = spec.prime;
        sim = f;
    }
    sim.validate()?;
    sim.throttle().map_err(usage)?;

    let runs = if forced {
        let mut sink = log.map(create).transpose()?;
        let m = run_logged(&sim, sink.as_mut().map(|w| w as &mut dyn Write))?;
        if let Some(mut w) = sink {
            w.flush()?;
        }
        vec![m]
    } else {
        if let Some(path) = log {
            let mut first = sim.clone();
            first.seed = repetition_seed(sim.seed, 0);
            let mut w = create(path)?;
            run_logged(&first, Some(&mut w))?;
            w.flush()?;
        }
        estimate_dof(&sim, spec.repetitions)?.runs
    };

    let n = runs.len() as f64;
    let mean_of = |f: &dyn Fn(&Metrics) -> f64| runs.iter().map(f).sum::<f64>() / n;
    let mean = [
        mean_of(&|m| m.empirical_dof[0]),
        mean_of(&|m| m.empirical_dof[1]),
    ];
    let stderr_of = |k: usize| {
        if runs.len() < 2 {
            return 0.0;
        }
        let var = runs
            .iter()
            .map(|m| (m.empirical_dof[k] - mean[k]).powi(2))
            .sum::<f64>()
            / (n - 1.0);
        (var / n).sqrt()
    };
    let stderr = [stderr_of(0), stderr_of(1)];
    let verdict = runs
        .iter()
        .map(stability_report)
        .find(|v| !v.is_stable())
        .unwrap_or(StabilityVerdict::Stable);
    let report = SimulateReport {
        sum_mean: mean[0] + mean[1],
        mean,
        stderr,
        verdict,
        runs,
        sim,
    };
    if report.runs.iter().any(|m| !m.exact()) {
        return Err(CliError::Runtime(format!(
            "exactness check failed\n{}",
            report.render()
        )));
    }
    Ok(report)
}

pub fn read_trace(path: &Path) -> Result<TrafficTrace, CliError> {
    TrafficTrace::parse(&std::fs::read_to_string(path)?).map_err(usage)
}

/// Writes `text` to `path` in one go, or to stdout when `path` is `None`.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let mut w = create(p)?;
            w.write_all(text.as_bytes())?;
            w.flush()?;
        }
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}
