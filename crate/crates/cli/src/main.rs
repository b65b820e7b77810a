use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bellforge::error::{CliError, CliResult};
use bellforge::format::{State, StateFile};
use bellforge::params::{NoiseArg, SignArg};
use bellforge::report::{concentrate_report, distill_report, step_report, Report};
use bellforge::sample::{run_sample, write_sample_csv};
use bellforge::sweep::{generic_entangled, run_sweep, summarize, write_summary, write_sweep_csv, SweepSpec};
use bellforge::sweep::{trial_rng, DEFAULT_MARGIN};
use bellforge_core::states::CLASSIFY_TOL;
use bellforge_core::{BellState, NoiseModel};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bellforge", version, about = "Bell-pair concentration and distillation simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SignOpt {
    /// Protocol unitary: + or -
    #[arg(long, default_value = "+", allow_hyphen_values = true)]
    sign: SignArg,
}

#[derive(Args)]
struct SeedOpt {
    #[arg(long, env = "BELLFORGE_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// One protocol step on a state file
    Step {
        state_file: PathBuf,
        #[command(flatten)]
        sign: SignOpt,
        /// Also run the brute-force simulation and print the discrepancy
        #[arg(long)]
        mixed_oracle: bool,
        /// Write the normalized output state here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two-step concentration of a pure state
    Concentrate {
        state_file: PathBuf,
        #[command(flatten)]
        sign: SignOpt,
        /// Retry blind-spot inputs after random local unitaries
        #[arg(long)]
        scramble: bool,
        #[arg(long, default_value_t = 10)]
        max_attempts: usize,
        #[command(flatten)]
        seed: SeedOpt,
        #[arg(long, default_value_t = CLASSIFY_TOL)]
        classify_tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Iterated distillation of a noisy state
    Distill {
        #[arg(required_unless_present = "generate", conflicts_with = "generate")]
        state_file: Option<PathBuf>,
        /// Base state instead of a file
        #[arg(long, value_enum)]
        generate: Option<Generate>,
        /// Noise weight mixed into a pure base
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, default_value = "white")]
        noise: NoiseArg,
        #[arg(long, default_value_t = 2)]
        steps: usize,
        #[command(flatten)]
        sign: SignOpt,
        #[command(flatten)]
        seed: SeedOpt,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo sweep over noise strength, CSV output
    Sweep {
        spec_file: PathBuf,
        /// CSV destination (stdout if omitted; summary then goes to stderr)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Haar-random pure inputs through concentration, CSV output
    Sample {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[command(flatten)]
        seed: SeedOpt,
        #[command(flatten)]
        sign: SignOpt,
        #[arg(long, default_value_t = CLASSIFY_TOL)]
        classify_tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Generate {
    PhiPlus,
    /// Haar-random state away from the blind spot, drawn from the seed
    HaarRandom,
}

fn load_state(path: &Path) -> CliResult<State> {
    StateFile::load(path)?.to_state()
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::io(path, e))
}

fn finish(report: Report, out: Option<&Path>) -> CliResult<()> {
    print!("{}", report.text);
    let report = report.into_result()?;
    if let (Some(path), Some(state)) = (out, &report.output) {
        let file = match state {
            State::Pure(s) => StateFile::from_pure(s, None),
            State::Mixed(rho) => StateFile::from_density(rho, None),
        };
        file.save(path)?;
    }
    Ok(())
}

fn check_epsilon(eps: f64) -> CliResult<()> {
    if (0.0..1.0).contains(&eps) {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--epsilon must lie in [0, 1), got {eps}")))
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Step { state_file, sign, mixed_oracle, out } => {
            let state = load_state(&state_file)?;
            finish(step_report(&state, sign.sign.0, mixed_oracle)?, out.as_deref())
        }
        Command::Concentrate { state_file, sign, scramble, max_attempts, seed, classify_tol, out } => {
            let state = load_state(&state_file)?;
            let mut rng = trial_rng(seed.seed, 0);
            let scramble = scramble.then_some((&mut rng, max_attempts));
            finish(concentrate_report(&state, sign.sign.0, scramble, classify_tol)?, out.as_deref())
        }
        Command::Distill { state_file, generate, epsilon, noise, steps, sign, seed, out } => {
            let mut rng = trial_rng(seed.seed, 0);
            let state = match (state_file, generate) {
                (Some(path), _) => load_state(&path)?,
                (None, Some(Generate::PhiPlus)) => State::Pure(BellState::PhiPlus.state()),
                (None, Some(Generate::HaarRandom)) => State::Pure(generic_entangled(&mut rng, DEFAULT_MARGIN)),
                (None, None) => unreachable!("clap requires a state source"),
            };
            let model = match epsilon {
                Some(e) => {
                    check_epsilon(e)?;
                    Some(NoiseModel::new(noise.0, e)?)
                }
                None => None,
            };
            finish(distill_report(&state, model, sign.sign.0, steps, &mut rng)?, out.as_deref())
        }
        Command::Sweep { spec_file, out } => {
            let text = std::fs::read_to_string(&spec_file).map_err(|e| CliError::io(&spec_file, e))?;
            let spec = SweepSpec::parse(&text, &spec_file.display().to_string())?;
            let rows = run_sweep(&spec)?;
            let summary = summarize(&spec, &rows);
            match out {
                Some(path) => {
                    let mut w = create(&path)?;
                    write_sweep_csv(&rows, &mut w)?;
                    w.flush().map_err(|e| CliError::io(&path, e))?;
                    write_summary(&summary, io::stdout().lock())
                }
                None => {
                    write_sweep_csv(&rows, io::stdout().lock())?;
                    write_summary(&summary, io::stderr().lock())
                }
            }
        }
        Command::Sample { trials, seed, sign, classify_tol, out } => {
            let rows = run_sample(trials, seed.seed, sign.sign.0, classify_tol)?;
            match out {
                Some(path) => {
                    let mut w = create(&path)?;
                    write_sample_csv(&rows, &mut w)?;
                    w.flush().map_err(|e| CliError::io(&path, e))
                }
                None => write_sample_csv(&rows, io::stdout().lock()),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
