use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use worst_hedge::Interpolation;
use worst_hedge_cli::{run, Command, Format, PlanKind, RunConfig};

/// Worst-case adversaries for the Hedge algorithm.
#[derive(Parser, Debug)]
#[command(name = "worst-hedge", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Hedge discount factor, in (0, 1).
    #[arg(long, global = true, default_value_t = worst_hedge_cli::DEFAULT_BETA)]
    beta: f64,
    /// Number of rounds T.
    #[arg(long, global = true, default_value_t = worst_hedge_cli::DEFAULT_ROUNDS)]
    rounds: usize,
    /// Number of options N.
    #[arg(long, global = true, default_value_t = 2)]
    options: usize,
    /// Initial first-option weight, or a comma-separated weight vector.
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    w0: Option<Vec<f64>>,
    /// Weight grid size M for value curves.
    #[arg(long, global = true, default_value_t = worst_hedge::dp::DEFAULT_GRID)]
    grid: usize,
    /// Penalty grid size P for value curves.
    #[arg(long, global = true, default_value_t = worst_hedge::dp::DEFAULT_PENALTY_GRID)]
    penalty_grid: usize,
    /// Penalty grid resolution q for the brute-force oracle.
    #[arg(long, global = true, default_value_t = worst_hedge_cli::DEFAULT_ORACLE_GRID)]
    oracle_grid: usize,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format; tables default to csv, reports to json.
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Per-round weights, penalties and losses of one plan.
    Trace {
        #[arg(long, value_enum, default_value_t = PlanArg::Greedy)]
        plan: PlanArg,
        /// Explicit first-option penalties, one per round (overrides --plan).
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        penalties: Option<Vec<f64>>,
    },
    /// Best plan found by the pattern planner, with its loss.
    Solve,
    /// Worst-case value curves for every horizon.
    Curve {
        #[arg(long, value_enum, default_value_t = InterpArg::Linear)]
        interp: InterpArg,
        /// Skip golden-section refinement of the penalty grid.
        #[arg(long)]
        no_refine: bool,
    },
    /// Exhaustive grid search (at most 6 rounds).
    Oracle {
        /// Report the grid optimum without coordinate refinement.
        #[arg(long)]
        no_refine: bool,
    },
    /// Bounds on the gain of the optimal adversary over greedy play.
    Bounds,
    /// Equal-start optimum x* and loss for T = 1 ..= rounds.
    Equalweights,
    /// Rotation cycle losses for N = 2 ..= options.
    Rotation {
        /// Comma-separated β values (default: --beta).
        #[arg(long, value_delimiter = ',')]
        betas: Option<Vec<f64>>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum PlanArg {
    Greedy,
    Optimal,
    Rotating,
    Equalweights,
    Dp,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum InterpArg {
    Linear,
    Nearest,
}

impl Cli {
    fn into_config(self) -> RunConfig {
        let command = match self.command {
            Cmd::Trace { plan, penalties } => Command::Trace {
                plan: match plan {
                    PlanArg::Greedy => PlanKind::Greedy,
                    PlanArg::Optimal => PlanKind::Optimal,
                    PlanArg::Rotating => PlanKind::Rotating,
                    PlanArg::Equalweights => PlanKind::EqualWeights,
                    PlanArg::Dp => PlanKind::Dp,
                },
                penalties,
            },
            Cmd::Solve => Command::Solve,
            Cmd::Curve { interp, no_refine } => Command::Curve {
                interpolation: match interp {
                    InterpArg::Linear => Interpolation::Linear,
                    InterpArg::Nearest => Interpolation::Nearest,
                },
                refine: !no_refine,
            },
            Cmd::Oracle { no_refine } => Command::Oracle { refine: !no_refine },
            Cmd::Bounds => Command::Bounds,
            Cmd::Equalweights => Command::EqualWeights,
            Cmd::Rotation { betas } => Command::Rotation { betas },
        };
        RunConfig {
            command,
            beta: self.beta,
            t_rounds: self.rounds,
            n_options: self.options,
            w0: self.w0,
            grid_m: self.grid,
            penalty_grid_p: self.penalty_grid,
            oracle_q: self.oracle_grid,
            output_path: self.out,
            format: self.format.map(|f| match f {
                FormatArg::Csv => Format::Csv,
                FormatArg::Json => Format::Json,
            }),
        }
    }
}

fn main() -> ExitCode {
    let config = Cli::parse().into_config();
    match run(&config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("worst-hedge: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
