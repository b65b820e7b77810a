//! Human-readable reports for `step`, `concentrate` and `distill`.

use std::fmt::Write as _;

use bellforge_core::protocol::{concentrate, distill, expected_cost, scramble_and_retry, target, ScrambleStatus};
use bellforge_core::states::{classify_input, fidelity_with_pure, overlap, random_density};
use bellforge_core::step::{step_mixed_closed, step_mixed_oracle, step_pure_closed, step_pure_oracle};
use bellforge_core::{BellState, Density2Q, IterationTrace, NoiseModel, PureState2Q, Sign, C64};
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, CliResult};
use crate::format::{fmt_f64, State};

/// Report text plus whether the protocol succeeded.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub text: String,
    pub output: Option<State>,
    pub success: bool,
}

impl Report {
    /// `Ok` on success, otherwise a protocol failure carrying the last line.
    pub fn into_result(self) -> CliResult<Report> {
        if self.success {
            return Ok(self);
        }
        let last = self.text.lines().last().unwrap_or("FAILURE").to_owned();
        Err(CliError::ProtocolFailure(last))
    }
}

fn fmt_c(z: C64) -> String {
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{} {sign} {}i", fmt_f64(z.re), fmt_f64(z.im.abs()))
}

fn write_amplitudes(out: &mut String, title: &str, s: &PureState2Q) {
    let _ = writeln!(out, "{title}:");
    for (k, a) in s.amplitudes().iter().enumerate() {
        let _ = writeln!(out, "  c{} = {}", k + 1, fmt_c(*a));
    }
}

fn write_matrix(out: &mut String, title: &str, rho: &Density2Q) {
    let _ = writeln!(out, "{title}:");
    let m = rho.matrix();
    for r in 0..4 {
        let row: Vec<String> = (0..4).map(|c| fmt_c(m[(r, c)])).collect();
        let _ = writeln!(out, "  [{}]", row.join(", "));
    }
}

fn write_bell_fidelities(out: &mut String, f: impl Fn(&PureState2Q) -> f64) {
    for b in BellState::ALL {
        let _ = writeln!(out, "fidelity[{}] = {}", b.name(), fmt_f64(f(&b.state())));
    }
}

pub fn step_report(state: &State, sign: Sign, mixed_oracle: bool) -> CliResult<Report> {
    let mut text = String::new();
    let _ = writeln!(text, "input: {}, sign {sign}", state.kind());
    let (p, output) = match state {
        State::Pure(s) => {
            let out = step_pure_closed(s, sign)?;
            write_amplitudes(&mut text, "unnormalized output", &out.state);
            let p = out.success_probability;
            let _ = writeln!(text, "P = {}", fmt_f64(p));
            if mixed_oracle {
                let oracle = step_pure_oracle(s, sign)?;
                let d = out.state.max_abs_diff(&oracle.state).max((p - oracle.success_probability).abs());
                let _ = writeln!(text, "oracle discrepancy = {d:e}");
            }
            let normalized = if out.is_failure() { None } else { Some(out.normalized_state()?) };
            if let Some(n) = &normalized {
                write_amplitudes(&mut text, "normalized output", n);
                write_bell_fidelities(&mut text, |b| overlap(n, b));
            }
            (p, normalized.map(State::Pure))
        }
        State::Mixed(rho) => {
            let out = step_mixed_closed(rho, sign)?;
            write_matrix(&mut text, "unnormalized output", &out.state);
            let p = out.success_probability;
            let _ = writeln!(text, "P = {}", fmt_f64(p));
            if mixed_oracle {
                let oracle = step_mixed_oracle(rho, sign)?;
                let d = out.state.matrix().max_abs_diff(oracle.state.matrix());
                let _ = writeln!(text, "oracle discrepancy = {d:e}");
            }
            let normalized = if out.is_failure() { None } else { Some(out.normalized_state()?) };
            if let Some(n) = &normalized {
                write_matrix(&mut text, "normalized output", n);
                write_bell_fidelities(&mut text, |b| fidelity_with_pure(n, b).unwrap_or(f64::NAN));
            }
            (p, normalized.map(State::Mixed))
        }
    };
    if output.is_none() {
        let _ = writeln!(text, "FAILURE (probability {})", if p == 0.0 { "0".to_owned() } else { fmt_f64(p) });
    }
    Ok(Report { success: output.is_some(), output, text })
}

fn write_trace<S>(out: &mut String, trace: &IterationTrace<S>) {
    for (j, s) in trace.steps.iter().enumerate() {
        let _ = writeln!(out, "p_step{} = {}", j + 1, fmt_f64(s.success_probability));
    }
    let _ = writeln!(out, "p_cumulative = {}", fmt_f64(trace.cumulative_success_probability));
    let _ = writeln!(out, "pairs_consumed = {}", trace.pairs_consumed);
    let cost = expected_cost(trace);
    let _ = writeln!(out, "expected_cost = {}", if cost.is_finite() { fmt_f64(cost) } else { "inf".into() });
}

pub fn concentrate_report(
    state: &State,
    sign: Sign,
    scramble: Option<(&mut ChaCha8Rng, usize)>,
    classify_tol: f64,
) -> CliResult<Report> {
    let s = match state {
        State::Pure(s) => s,
        State::Mixed(_) => return Err(CliError::InvalidState("mixed input: use distill".into())),
    };
    let mut text = String::new();
    let c = classify_input(s, classify_tol);
    let _ = writeln!(text, "class = {}", c.class);
    let _ = writeln!(text, "residual_minus = {}", fmt_f64(c.residual_minus));
    let _ = writeln!(text, "residual_plus = {}", fmt_f64(c.residual_plus));
    let trace = match scramble {
        None => concentrate(s, sign)?,
        Some((rng, max_attempts)) => {
            let r = scramble_and_retry(s, sign, rng, max_attempts)?;
            let status = match r.status {
                ScrambleStatus::Concentrated => "concentrated",
                ScrambleStatus::NotBlindSpot => "not-blind-spot",
                ScrambleStatus::Exhausted => "exhausted",
            };
            let _ = writeln!(text, "attempts = {}", r.attempts);
            let _ = writeln!(text, "scramble = {status}");
            if r.attempts > 1 {
                write_amplitudes(&mut text, "scrambled input", &r.input);
            }
            r.trace
        }
    };
    write_trace(&mut text, &trace);
    let output = trace.output();
    match (&output, trace.failed_at_step) {
        (Some(out), _) => {
            let _ = writeln!(text, "fidelity = {}", fmt_f64(overlap(out, &target())));
        }
        (None, Some(k)) => {
            let _ = writeln!(text, "FAILURE failed_at_step={k}");
        }
        (None, None) => unreachable!("a trace without output has a failed step"),
    }
    Ok(Report { success: output.is_some(), output: output.map(State::Pure), text })
}

/// `noise` is applied only to pure inputs; mixed inputs are used as given.
pub fn distill_report(
    state: &State,
    noise: Option<NoiseModel>,
    sign: Sign,
    steps: usize,
    rng: &mut ChaCha8Rng,
) -> CliResult<Report> {
    let rho = match (state, noise) {
        (State::Pure(s), Some(model)) => random_density(&model, s, rng)?,
        (State::Pure(s), None) => Density2Q::from_pure(s),
        (State::Mixed(rho), None) => rho.clone(),
        (State::Mixed(_), Some(_)) => {
            return Err(CliError::Usage("--epsilon applies to pure inputs only".into()));
        }
    };
    let mut text = String::new();
    let _ = writeln!(text, "input fidelity = {}", fmt_f64(fidelity_with_pure(&rho, &target())?));
    let trace = distill(&rho, sign, steps)?;
    write_trace(&mut text, &trace);
    let output = trace.output();
    match (&output, trace.failed_at_step) {
        (Some(out), _) => {
            write_matrix(&mut text, "output", out);
            let _ = writeln!(text, "fidelity = {}", fmt_f64(fidelity_with_pure(out, &target())?));
        }
        (None, k) => {
            let _ = writeln!(text, "FAILURE failed_at_step={}", k.unwrap_or(steps));
        }
    }
    Ok(Report { success: output.is_some(), output: output.map(State::Mixed), text })
}
