//! Haar-random pure inputs through two-step concentration.

use std::io::Write;

use bellforge_core::protocol::{concentrate, target};
use bellforge_core::states::{classify_input, concurrence_pure, random_pure};
use bellforge_core::{InputClass, Sign};
use rayon::prelude::*;

use crate::error::{CliError, CliResult};
use crate::format::fmt_f64;
use crate::sweep::trial_rng;

#[derive(Debug, Clone, PartialEq)]
pub struct SampleRow {
    pub trial: usize,
    pub concurrence: f64,
    pub class: InputClass,
    pub p_step1: f64,
    /// `None` if step 1 already failed.
    pub p_step2: Option<f64>,
    pub p_cumulative: f64,
    pub fidelity: Option<f64>,
}

fn run_trial(seed: u64, trial: usize, sign: Sign, tol: f64) -> CliResult<SampleRow> {
    let mut rng = trial_rng(seed, trial);
    let s = random_pure(&mut rng);
    let trace = concentrate(&s, sign)?;
    let probs = trace.step_probabilities();
    Ok(SampleRow {
        trial,
        concurrence: concurrence_pure(&s)?,
        class: classify_input(&s, tol).class,
        p_step1: probs[0],
        p_step2: probs.get(1).copied(),
        p_cumulative: trace.cumulative_success_probability,
        fidelity: trace.final_fidelity(&target()),
    })
}

pub fn run_sample(trials: usize, seed: u64, sign: Sign, tol: f64) -> CliResult<Vec<SampleRow>> {
    if trials == 0 {
        return Err(CliError::Usage("trials must be at least 1".into()));
    }
    (0..trials).into_par_iter().map(|t| run_trial(seed, t, sign, tol)).collect()
}

pub const SAMPLE_HEADER: [&str; 7] =
    ["trial", "concurrence", "class", "p_step1", "p_step2", "p_cumulative", "fidelity"];

pub fn write_sample_csv<W: Write>(rows: &[SampleRow], out: W) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SAMPLE_HEADER)?;
    for r in rows {
        w.write_record([
            r.trial.to_string(),
            fmt_f64(r.concurrence),
            r.class.name().to_owned(),
            fmt_f64(r.p_step1),
            r.p_step2.map(fmt_f64).unwrap_or_default(),
            fmt_f64(r.p_cumulative),
            r.fidelity.map(fmt_f64).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
