//! Seeded Monte Carlo sweeps over the noise strength.

use std::io::Write;

use bellforge_core::protocol::{distill, target};
use bellforge_core::states::{classify_input, random_density, random_pure};
use bellforge_core::{NoiseModel, PureState2Q};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::format::{fmt_f64, State, StateFile};
use crate::params::{NoiseArg, SignArg};

pub const DEFAULT_MARGIN: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HaarRandom {
    #[serde(rename = "haar-random")]
    HaarRandom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BaseState {
    HaarRandom(HaarRandom),
    File(Box<StateFile>),
}

fn default_margin() -> f64 {
    DEFAULT_MARGIN
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub base_state: BaseState,
    pub noise: NoiseArg,
    pub epsilons: Vec<f64>,
    pub steps: usize,
    pub sign: SignArg,
    pub trials: usize,
    pub seed: u64,
    /// Haar bases are redrawn until `|c₁c₄ ± c₂c₃| ≥ margin` for both signs.
    #[serde(default = "default_margin")]
    pub margin: f64,
}

impl SweepSpec {
    pub fn parse(text: &str, context: &str) -> CliResult<Self> {
        let spec: SweepSpec = serde_json::from_str(text)
            .map_err(|e| CliError::Parse { context: context.to_owned(), message: e.to_string() })?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.epsilons.is_empty() {
            return Err(CliError::Usage("epsilons must not be empty".into()));
        }
        if self.epsilons.iter().any(|e| !(*e > 0.0 && *e < 1.0)) {
            return Err(CliError::Usage("epsilons must lie in (0, 1)".into()));
        }
        if self.epsilons.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::Usage("epsilons must be strictly ascending".into()));
        }
        if !(2..=3).contains(&self.steps) {
            return Err(CliError::Usage(format!("steps must be 2 or 3, got {}", self.steps)));
        }
        if self.trials == 0 {
            return Err(CliError::Usage("trials must be at least 1".into()));
        }
        if !(0.0..0.5).contains(&self.margin) {
            return Err(CliError::Usage("margin must lie in [0, 0.5)".into()));
        }
        if let BaseState::File(f) = &self.base_state {
            if let State::Mixed(_) = f.to_state()? {
                return Err(CliError::InvalidState("sweep base state must be pure".into()));
            }
        }
        Ok(())
    }
}

/// Independent stream for each trial index.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ trial as u64)
}

/// Haar-random state away from both blind-spot and separable sets.
pub fn generic_entangled(rng: &mut ChaCha8Rng, margin: f64) -> PureState2Q {
    loop {
        let s = random_pure(rng);
        let c = classify_input(&s, 0.0);
        if c.residual_minus >= margin && c.residual_plus >= margin {
            return s;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub epsilon: f64,
    pub trial: usize,
    pub steps: usize,
    pub sign: SignArg,
    pub p_cumulative: f64,
    /// `None` when the run failed.
    pub fidelity: Option<f64>,
    pub failed_at_step: Option<usize>,
}

impl SweepRow {
    pub fn infidelity(&self) -> Option<f64> {
        self.fidelity.map(|f| 1.0 - f)
    }
}

fn run_trial(spec: &SweepSpec, epsilon: f64, trial: usize) -> CliResult<SweepRow> {
    let mut rng = trial_rng(spec.seed, trial);
    let base = match &spec.base_state {
        BaseState::HaarRandom(_) => generic_entangled(&mut rng, spec.margin),
        BaseState::File(f) => match f.to_state()? {
            State::Pure(s) => s,
            State::Mixed(_) => return Err(CliError::InvalidState("sweep base state must be pure".into())),
        },
    };
    let rho = random_density(&NoiseModel::new(spec.noise.0, epsilon)?, &base, &mut rng)?;
    let trace = distill(&rho, spec.sign.0, spec.steps)?;
    Ok(SweepRow {
        epsilon,
        trial,
        steps: spec.steps,
        sign: spec.sign,
        p_cumulative: trace.cumulative_success_probability,
        fidelity: trace.final_fidelity(&target()),
        failed_at_step: trace.failed_at_step,
    })
}

/// Rows ordered by `epsilon`, then `trial`. Trial `t` reuses the same base
/// state and noise draw at every `epsilon`.
pub fn run_sweep(spec: &SweepSpec) -> CliResult<Vec<SweepRow>> {
    spec.validate()?;
    let jobs: Vec<(f64, usize)> = spec.epsilons.iter().flat_map(|&e| (0..spec.trials).map(move |t| (e, t))).collect();
    jobs.par_iter().map(|&(e, t)| run_trial(spec, e, t)).collect()
}

pub const SWEEP_HEADER: [&str; 8] =
    ["epsilon", "trial", "steps", "sign", "p_cumulative", "fidelity", "infidelity", "failed_at_step"];

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for r in rows {
        w.write_record([
            fmt_f64(r.epsilon),
            r.trial.to_string(),
            r.steps.to_string(),
            r.sign.to_string(),
            fmt_f64(r.p_cumulative),
            r.fidelity.map(fmt_f64).unwrap_or_default(),
            r.infidelity().map(fmt_f64).unwrap_or_default(),
            r.failed_at_step.map(|s| s.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonSummary {
    pub epsilon: f64,
    /// Over successful trials only.
    pub mean_infidelity: f64,
    pub successes: usize,
    pub trials: usize,
}

pub fn summarize(spec: &SweepSpec, rows: &[SweepRow]) -> Vec<EpsilonSummary> {
    spec.epsilons
        .iter()
        .map(|&e| {
            let inf: Vec<f64> = rows.iter().filter(|r| r.epsilon == e).filter_map(SweepRow::infidelity).collect();
            let mean = if inf.is_empty() { f64::NAN } else { inf.iter().sum::<f64>() / inf.len() as f64 };
            EpsilonSummary { epsilon: e, mean_infidelity: mean, successes: inf.len(), trials: spec.trials }
        })
        .collect()
}

/// Least-squares slope of `y` against `x`.
pub fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Slope of `log(1 − F)` against `log ε`, skipping non-positive infidelities.
pub fn log_log_slope(pairs: impl IntoIterator<Item = (f64, f64)>) -> Option<f64> {
    let points: Vec<(f64, f64)> =
        pairs.into_iter().filter(|(e, i)| *e > 0.0 && *i > 0.0).map(|(e, i)| (e.ln(), i.ln())).collect();
    fit_slope(&points)
}

pub fn summary_slope(summary: &[EpsilonSummary]) -> Option<f64> {
    log_log_slope(summary.iter().map(|s| (s.epsilon, s.mean_infidelity)))
}

/// One slope per trial; `None` if that trial failed at some `epsilon`.
pub fn per_trial_slopes(spec: &SweepSpec, rows: &[SweepRow]) -> Vec<Option<f64>> {
    (0..spec.trials)
        .map(|t| {
            let mine: Vec<&SweepRow> = rows.iter().filter(|r| r.trial == t).collect();
            let pairs: Option<Vec<(f64, f64)>> = mine.iter().map(|r| r.infidelity().map(|i| (r.epsilon, i))).collect();
            pairs.and_then(|p| if p.len() == spec.epsilons.len() { log_log_slope(p) } else { None })
        })
        .collect()
}

pub fn write_summary<W: Write>(summary: &[EpsilonSummary], mut out: W) -> CliResult<()> {
    for s in summary {
        writeln!(
            out,
            "epsilon={} mean_infidelity={} successes={}/{}",
            fmt_f64(s.epsilon),
            fmt_f64(s.mean_infidelity),
            s.successes,
            s.trials
        )?;
    }
    match summary_slope(summary) {
        Some(k) => writeln!(out, "slope={k:.6}")?,
        None => writeln!(out, "slope=undefined")?,
    }
    Ok(())
}
