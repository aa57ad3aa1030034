//! Strategy tournaments: Trotter-number sweeps against an error threshold
//! and depolarizing-noise runs, with JSON/CSV reports.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::trotterize;
use crate::error::{HsimError, Result};
use crate::hamiltonian::Hamiltonian;
use crate::ordering::{order, Strategy};
use crate::simulation::{
    exact_evolution, hellinger_distance, hellinger_infidelity, ideal_distribution,
    noisy_distribution, trotter_error_against, InfidelityConvention, InitialState, NoiseModel,
    UnitaryMatrix,
};

pub const REPORT_SCHEMA: u32 = 1;

/// Error rates of the reference noise study: 0.1%, 0.5%, 1% and 2%.
pub const DEFAULT_ERROR_RATES: [f64; 4] = [0.001, 0.005, 0.01, 0.02];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub t_values: Vec<f64>,
    pub epsilon: f64,
    pub r_max: usize,
    pub strategies: Vec<Strategy>,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            t_values: vec![1.0],
            epsilon: 0.1,
            r_max: 64,
            strategies: Strategy::all(0).to_vec(),
            seed: 0,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epsilon.is_nan() || self.epsilon <= 0.0 || self.epsilon.is_infinite() {
            return Err(HsimError::input(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if self.t_values.is_empty() || self.t_values.iter().any(|t| !t.is_finite()) {
            return Err(HsimError::input(
                "t values must be a non-empty list of finite numbers",
            ));
        }
        if self.r_max == 0 {
            return Err(HsimError::input("r_max must be at least 1"));
        }
        if self.strategies.is_empty() {
            return Err(HsimError::input("no strategies selected"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseConfig {
    pub p_values: Vec<f64>,
    pub strategies: Vec<Strategy>,
    pub init: InitialState,
    pub model: NoiseModel,
    pub t: f64,
    pub r: usize,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            p_values: DEFAULT_ERROR_RATES.to_vec(),
            strategies: vec![
                Strategy::Lexicographic,
                Strategy::Magnitude,
                Strategy::MaxCommuteTsp,
            ],
            init: InitialState::GhzLike,
            model: NoiseModel::PairReplacement,
            t: 1.0,
            r: 1,
        }
    }
}

/// One (input, strategy, t) cell of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub input: String,
    pub strategy: Strategy,
    pub t: f64,
    /// Smallest accepted Trotter number, or `r_max` if none met the threshold.
    pub r: usize,
    pub diamond_distance: Option<f64>,
    pub cnot_count: usize,
    pub threshold_met: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseCell {
    pub input: String,
    pub strategy: Strategy,
    pub p: f64,
    pub cnot_count: usize,
    pub hellinger_distance: Option<f64>,
    /// `1 − (1 − H²)²`.
    pub hellinger_infidelity: Option<f64>,
    /// `1 − H`.
    pub hellinger_infidelity_literal: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Per-strategy aggregate over accepted sweep cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategySummary {
    pub strategy: Strategy,
    pub cells: usize,
    pub mean_cnot_count: f64,
    /// Geometric mean of CNOT counts across cells.
    pub geomean_cnot_count: f64,
    pub threshold_not_met: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub schema: u32,
    pub tool: String,
    pub version: String,
    /// Seconds since the Unix epoch; the only field that varies between runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_config: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_config: Option<NoiseConfig>,
    pub sweep: Vec<SweepCell>,
    pub noise: Vec<NoiseCell>,
    pub summary: Vec<StrategySummary>,
}

impl EvaluationReport {
    pub fn empty() -> EvaluationReport {
        EvaluationReport {
            schema: REPORT_SCHEMA,
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            generated_at: None,
            sweep_config: None,
            noise_config: None,
            sweep: Vec::new(),
            noise: Vec::new(),
            summary: Vec::new(),
        }
    }

    pub fn stamp_now(&mut self) {
        self.generated_at = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .ok()
            .map(|d| d.as_secs());
    }

    pub fn has_errors(&self) -> bool {
        self.sweep.iter().any(|c| c.error.is_some()) || self.noise.iter().any(|c| c.error.is_some())
    }

    /// Appends the cells of `other`, keeping this report's metadata.
    pub fn merge(&mut self, other: EvaluationReport) {
        self.sweep.extend(other.sweep);
        self.noise.extend(other.noise);
        self.summary = summarize(&self.sweep);
    }
}

fn sweep_cell(
    h: &Hamiltonian,
    input: &str,
    strategy: Strategy,
    t: f64,
    exact: &Result<UnitaryMatrix>,
    config: &SweepConfig,
) -> SweepCell {
    let mut cell = SweepCell {
        input: input.to_string(),
        strategy,
        t,
        r: config.r_max,
        diamond_distance: None,
        cnot_count: 0,
        threshold_met: false,
        error: None,
    };
    let run = || -> Result<(usize, f64, bool)> {
        let exact = exact.as_ref().map_err(Clone::clone)?;
        let ordering = order(h, strategy);
        let mut last = f64::NAN;
        for r in 1..=config.r_max {
            last = trotter_error_against(h, &ordering, t, r, exact)?;
            if last < config.epsilon {
                return Ok((r, last, true));
            }
        }
        Ok((config.r_max, last, false))
    };
    match run() {
        Ok((r, dist, met)) => {
            cell.r = r;
            cell.diamond_distance = Some(dist);
            cell.threshold_met = met;
            cell.cnot_count = trotterize(h, &order(h, strategy), t, r)
                .map(|c| c.cnot_count())
                .unwrap_or(0);
        }
        Err(e) => cell.error = Some(e.to_string()),
    }
    cell
}

/// Linear scan `r = 1, 2, …, r_max` per (strategy, t), accepting the first
/// `r` whose diamond distance to `exp(-iHt)` is below `epsilon`.
pub fn sweep(config: &SweepConfig, h: &Hamiltonian, input: &str) -> Result<EvaluationReport> {
    config.validate()?;
    let exacts: Vec<Result<UnitaryMatrix>> = config
        .t_values
        .par_iter()
        .map(|&t| exact_evolution(h, t))
        .collect();
    let jobs: Vec<(Strategy, usize)> = config
        .strategies
        .iter()
        .flat_map(|&s| (0..config.t_values.len()).map(move |k| (s, k)))
        .collect();
    let cells: Vec<SweepCell> = jobs
        .par_iter()
        .map(|&(s, k)| sweep_cell(h, input, s, config.t_values[k], &exacts[k], config))
        .collect();
    let mut report = EvaluationReport::empty();
    report.sweep_config = Some(config.clone());
    report.summary = summarize(&cells);
    report.sweep = cells;
    Ok(report)
}

pub fn summarize(cells: &[SweepCell]) -> Vec<StrategySummary> {
    let mut strategies: Vec<Strategy> = Vec::new();
    for c in cells {
        if !strategies.contains(&c.strategy) {
            strategies.push(c.strategy);
        }
    }
    strategies
        .into_iter()
        .map(|s| {
            let ok: Vec<&SweepCell> = cells
                .iter()
                .filter(|c| c.strategy == s && c.error.is_none())
                .collect();
            let n = ok.len();
            let mean = ok.iter().map(|c| c.cnot_count as f64).sum::<f64>() / n.max(1) as f64;
            let geo = if n == 0 {
                0.0
            } else {
                (ok.iter()
                    .map(|c| (c.cnot_count.max(1) as f64).ln())
                    .sum::<f64>()
                    / n as f64)
                    .exp()
            };
            StrategySummary {
                strategy: s,
                cells: n,
                mean_cnot_count: mean,
                geomean_cnot_count: geo,
                threshold_not_met: ok.iter().filter(|c| !c.threshold_met).count(),
            }
        })
        .collect()
}

/// Hellinger metrics between noisy and noiseless output distributions for
/// every (strategy, p) pair.
pub fn noise_run(h: &Hamiltonian, config: &NoiseConfig, input: &str) -> Result<EvaluationReport> {
    if config.p_values.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(HsimError::input("error rates must lie in [0, 1]"));
    }
    if config.strategies.is_empty() {
        return Err(HsimError::input("no strategies selected"));
    }
    let init = config.init.amplitudes(h.width())?;
    let jobs: Vec<(Strategy, f64)> = config
        .strategies
        .iter()
        .flat_map(|&s| config.p_values.iter().map(move |&p| (s, p)))
        .collect();
    let cells = jobs
        .par_iter()
        .map(|&(strategy, p)| {
            let run = || -> Result<(usize, f64, f64, f64)> {
                let circuit = trotterize(h, &order(h, strategy), config.t, config.r)?;
                let ideal = ideal_distribution(&circuit, &init)?;
                let noisy = noisy_distribution(&circuit, &init, p, config.model)?;
                Ok((
                    circuit.cnot_count(),
                    hellinger_distance(&noisy, &ideal)?,
                    hellinger_infidelity(&noisy, &ideal, InfidelityConvention::SquaredFidelity)?,
                    hellinger_infidelity(&noisy, &ideal, InfidelityConvention::Literal)?,
                ))
            };
            let mut cell = NoiseCell {
                input: input.to_string(),
                strategy,
                p,
                cnot_count: 0,
                hellinger_distance: None,
                hellinger_infidelity: None,
                hellinger_infidelity_literal: None,
                error: None,
            };
            match run() {
                Ok((cx, d, inf, lit)) => {
                    cell.cnot_count = cx;
                    cell.hellinger_distance = Some(d);
                    cell.hellinger_infidelity = Some(inf);
                    cell.hellinger_infidelity_literal = Some(lit);
                }
                Err(e) => cell.error = Some(e.to_string()),
            }
            cell
        })
        .collect();
    let mut report = EvaluationReport::empty();
    report.noise_config = Some(config.clone());
    report.noise = cells;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

/// Column order of the CSV report. Sweep rows leave the noise columns empty
/// and vice versa.
pub const CSV_COLUMNS: [&str; 14] = [
    "kind",
    "input",
    "strategy",
    "seed",
    "t",
    "r",
    "threshold_met",
    "diamond_distance",
    "cnot_count",
    "p",
    "hellinger_distance",
    "hellinger_infidelity",
    "hellinger_infidelity_literal",
    "error",
];

fn seed_of(s: Strategy) -> String {
    match s {
        Strategy::Random(seed) => seed.to_string(),
        _ => String::new(),
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn report_emit(report: &EvaluationReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report)
                .map_err(|e| HsimError::Internal(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        ReportFormat::Csv => write_csv(report).map_err(|e| HsimError::Internal(e.to_string())),
    }
}

fn write_csv(report: &EvaluationReport) -> std::result::Result<String, Box<dyn std::error::Error>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_COLUMNS)?;
    for c in &report.sweep {
        w.write_record([
            "sweep".to_string(),
            c.input.clone(),
            c.strategy.cli_name().into(),
            seed_of(c.strategy),
            c.t.to_string(),
            c.r.to_string(),
            c.threshold_met.to_string(),
            opt(c.diamond_distance),
            c.cnot_count.to_string(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            c.error.clone().unwrap_or_default(),
        ])?;
    }
    for c in &report.noise {
        w.write_record([
            "noise".to_string(),
            c.input.clone(),
            c.strategy.cli_name().into(),
            seed_of(c.strategy),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            c.cnot_count.to_string(),
            c.p.to_string(),
            opt(c.hellinger_distance),
            opt(c.hellinger_infidelity),
            opt(c.hellinger_infidelity_literal),
            c.error.clone().unwrap_or_default(),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
