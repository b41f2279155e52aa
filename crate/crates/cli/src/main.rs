mod commands;
mod failure;
mod inputs;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bellrep::qstate::{check_cutoff, DEFAULT_CUTOFF};
use commands::{EtaGrid, Globals, OperatorKind, Outcome, VerifyArgs};
use failure::{usage, Failure};
use inputs::{MethodChoice, StateArgs};
use output::Format;

/// Bell-operator representations from mode pairings, CHSH values and their
/// cross-checks.
#[derive(Debug, Parser)]
#[command(name = "bellrep", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Emit JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,

    /// Emit CSV (12 significant digits).
    #[arg(long, global = true)]
    csv: bool,

    /// Agreement tolerance between the dense oracle and the closed form.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,

    /// Number of retained Fock modes for squeezed states and pseudospin
    /// operators. Must be even.
    #[arg(long, global = true, default_value_t = DEFAULT_CUTOFF)]
    cutoff: usize,

    /// Seed for randomized sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Maximal CHSH value of every pair count on the maximal state of a dimension.
    Reps {
        #[arg(long)]
        dim: usize,
    },

    /// CHSH value of a state under a pairing and four angles.
    Chsh {
        #[command(flatten)]
        state: StateArgs,

        /// `canonical` or `a1,a2,b1,b2` in radians.
        #[arg(long, default_value = "canonical", allow_hyphen_values = true)]
        angles: String,

        #[arg(long, value_enum, default_value = "both")]
        method: MethodChoice,
    },

    /// CHSH value of a squeezed setup over a grid of η.
    SweepEta {
        /// single_pair or all_pairs.
        #[arg(long, default_value = "single_pair")]
        mode: String,

        /// Explicit comma-separated η values; overrides the range flags.
        #[arg(long)]
        etas: Option<String>,

        #[arg(long, default_value_t = 0.0)]
        start: f64,

        #[arg(long, default_value_t = 0.95)]
        stop: f64,

        #[arg(long, default_value_t = 20)]
        steps: usize,
    },

    /// Purity and entanglement entropy of the squeezed vacuum.
    Entropy {
        /// One η, or a comma-separated list.
        #[arg(long)]
        eta: String,
    },

    /// Maximize CHSH over the angles, or over η for a squeezed setup.
    Optimize {
        #[command(flatten)]
        state: StateArgs,

        #[arg(long, value_enum, default_value = "both")]
        method: MethodChoice,

        /// Optimize η for `single_pair` or `all_pairs` instead.
        #[arg(long)]
        eta_mode: Option<String>,
    },

    /// Check that an operator is Hermitian, squares to one and has the expected trace.
    VerifyOp {
        #[arg(long, value_enum, default_value = "pairing")]
        kind: OperatorKind,

        #[arg(long)]
        dim: Option<usize>,

        /// Pair count or explicit pairs such as `0:1,2:3`.
        #[arg(long)]
        pairs: Option<String>,

        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        angle: f64,

        /// Check this many random pairings instead, drawn from `--seed`.
        #[arg(long)]
        random: Option<usize>,

        /// Include the operator entries in the JSON output.
        #[arg(long)]
        emit_matrix: bool,
    },

    /// Recompute every headline number and compare it with its expected value.
    ReproducePaper {
        #[arg(long, hide = true, default_value_t = 0.0, allow_hyphen_values = true)]
        perturb_angles: f64,
    },
}

fn globals(g: &GlobalArgs) -> Result<Globals, Failure> {
    if !(g.tol.is_finite() && g.tol > 0.0) {
        return Err(usage(format!(
            "--tol must be a positive real, got {}",
            g.tol
        )));
    }
    check_cutoff(g.cutoff)?;
    let format = match (g.json, g.csv) {
        (true, _) => Format::Json,
        (_, true) => Format::Csv,
        _ => Format::Native,
    };
    Ok(Globals {
        format,
        tol: g.tol,
        cutoff: g.cutoff,
        seed: g.seed,
    })
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let g = globals(&cli.global)?;
    match &cli.command {
        Command::Reps { dim } => commands::reps(&g, *dim),
        Command::Chsh {
            state,
            angles,
            method,
        } => commands::chsh(&g, state, angles, *method),
        Command::SweepEta {
            mode,
            etas,
            start,
            stop,
            steps,
        } => commands::sweep_eta(
            &g,
            mode,
            &EtaGrid {
                etas: etas.clone(),
                start: *start,
                stop: *stop,
                steps: *steps,
            },
        ),
        Command::Entropy { eta } => commands::entropy_cmd(&g, eta),
        Command::Optimize {
            state,
            method,
            eta_mode,
        } => commands::optimize(&g, state, *method, eta_mode.as_deref()),
        Command::VerifyOp {
            kind,
            dim,
            pairs,
            angle,
            random,
            emit_matrix,
        } => commands::verify_op(
            &g,
            &VerifyArgs {
                kind: *kind,
                dim: *dim,
                pairs: pairs.as_deref(),
                angle: *angle,
                random: *random,
                emit_matrix: *emit_matrix,
            },
        ),
        Command::ReproducePaper { perturb_angles } => {
            commands::reproduce_table(&g, *perturb_angles)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            if out
                .write_all(outcome.payload.as_bytes())
                .and_then(|_| out.flush())
                .is_err()
            {
                return ExitCode::from(2);
            }
            match outcome.deferred {
                Some(f) => {
                    eprintln!("{f}");
                    f.exit_code()
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(f) => {
            eprintln!("{f}");
            f.exit_code()
        }
    }
}
