//! Library side of the `worst-hedge` command: a [`RunConfig`] goes in, a
//! [`Report`] comes out and is written as CSV or JSON.
//!
//! ```no_run
//! use worst_hedge_cli::{run, Command, RunConfig};
//!
//! let mut cfg = RunConfig::new(Command::Solve);
//! cfg.w0 = Some(vec![0.883]);
//! run(&cfg).unwrap();
//! ```

use std::io::Write;
use std::path::PathBuf;

use serde_json::{json, Map, Value};
use worst_hedge::adversary::{equal_weights_loss, equal_weights_x_star};
use worst_hedge::analysis::{binary_error_bounds, cycle_loss_equal_closed, cycle_loss_equal_direct};
use worst_hedge::dp::MIN_GRID;
use worst_hedge::oracle::{MAX_ROUNDS, MIN_RESOLUTION};
use worst_hedge::{
    brute_force_max, equal_weights_plan, greedy_binary_plan, ideal_rotation, optimal_plan,
    play_game, recover_penalties, rotating_plan, solve_curve_with, DpConfig, GameParams,
    Interpolation, PenaltyPlan, PenaltyVector, WeightVector,
};

mod error;
mod report;

pub use error::{CliError, CliResult};
pub use report::{format_real, Cell, Format, Report, Table};

/// Which adversary drives a `trace`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PlanKind {
    #[default]
    Greedy,
    Optimal,
    Rotating,
    EqualWeights,
    /// Penalties recovered from a solved value curve.
    Dp,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    /// Per-round weights, penalties and losses. `penalties`, when given,
    /// overrides `plan` with explicit first-option penalties.
    Trace {
        plan: PlanKind,
        penalties: Option<Vec<f64>>,
    },
    Solve,
    Curve {
        interpolation: Interpolation,
        refine: bool,
    },
    Oracle {
        refine: bool,
    },
    Bounds,
    /// `x*` and loss for every horizon `1 ..= rounds`.
    EqualWeights,
    /// Uniform-start and ideal cycle losses for `N = 2 ..= options` at each β.
    Rotation {
        betas: Option<Vec<f64>>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub beta: f64,
    pub t_rounds: usize,
    pub n_options: usize,
    /// One first-option weight (two options only) or a full weight vector.
    /// `None` means uniform.
    pub w0: Option<Vec<f64>>,
    pub grid_m: usize,
    pub penalty_grid_p: usize,
    pub oracle_q: usize,
    /// `None` writes to stdout.
    pub output_path: Option<PathBuf>,
    /// `None` picks CSV for tables and JSON for documents.
    pub format: Option<Format>,
}

pub const DEFAULT_BETA: f64 = 0.8;
pub const DEFAULT_ROUNDS: usize = 10;
pub const DEFAULT_ORACLE_GRID: usize = 30;

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            beta: DEFAULT_BETA,
            t_rounds: DEFAULT_ROUNDS,
            n_options: 2,
            w0: None,
            grid_m: worst_hedge::dp::DEFAULT_GRID,
            penalty_grid_p: worst_hedge::dp::DEFAULT_PENALTY_GRID,
            oracle_q: DEFAULT_ORACLE_GRID,
            output_path: None,
            format: None,
        }
    }

    fn params(&self) -> CliResult<GameParams> {
        Ok(GameParams::new(self.beta, self.n_options, self.t_rounds)?)
    }

    fn require_two_options(&self, what: &str) -> CliResult<()> {
        if self.n_options == 2 {
            Ok(())
        } else {
            Err(invalid(format!("{what} needs --options 2, got {}", self.n_options)))
        }
    }

    fn initial_weights(&self) -> CliResult<WeightVector> {
        match self.w0.as_deref() {
            None => Ok(WeightVector::uniform(self.n_options)?),
            Some(&[w]) if self.n_options == 2 => {
                if (0.0..=1.0).contains(&w) {
                    Ok(WeightVector::two(w)?)
                } else {
                    Err(invalid(format!("--w0 {w} must lie in [0, 1]")))
                }
            }
            Some(ws) if ws.len() == self.n_options => {
                if ws.iter().any(|w| !(0.0..=1.0).contains(w)) {
                    return Err(invalid("--w0 entries must lie in [0, 1]".into()));
                }
                Ok(WeightVector::new(ws.to_vec())?)
            }
            Some(ws) => Err(invalid(format!(
                "--w0 has {} entries but the game has {} options",
                ws.len(),
                self.n_options
            ))),
        }
    }

    fn dp_config(&self, interpolation: Interpolation, refine: bool) -> CliResult<DpConfig> {
        if self.grid_m < MIN_GRID {
            return Err(invalid(format!("--grid must be at least {MIN_GRID}, got {}", self.grid_m)));
        }
        if self.penalty_grid_p < MIN_GRID {
            return Err(invalid(format!(
                "--penalty-grid must be at least {MIN_GRID}, got {}",
                self.penalty_grid_p
            )));
        }
        Ok(DpConfig {
            grid_size: self.grid_m,
            penalty_grid: self.penalty_grid_p,
            interpolation,
            refine,
        })
    }

    /// Checks every parameter the chosen command uses.
    pub fn validate(&self) -> CliResult<()> {
        let _ = self.params()?;
        self.initial_weights()?;
        match &self.command {
            Command::Trace { plan, penalties } => {
                if let Some(p) = penalties {
                    self.require_two_options("--penalties")?;
                    if p.len() != self.t_rounds {
                        return Err(invalid(format!(
                            "--penalties has {} entries but --rounds is {}",
                            p.len(),
                            self.t_rounds
                        )));
                    }
                    if p.iter().any(|x| !(0.0..=1.0).contains(x)) {
                        return Err(invalid("--penalties entries must lie in [0, 1]".into()));
                    }
                } else {
                    match plan {
                        PlanKind::Optimal => self.require_two_options("the optimal plan")?,
                        PlanKind::EqualWeights => {
                            self.require_two_options("the equal-weights plan")?;
                            if self.initial_weights()?.first() != 0.5 {
                                return Err(invalid("the equal-weights plan starts from --w0 0.5".into()));
                            }
                        }
                        PlanKind::Dp => {
                            self.require_two_options("the dp plan")?;
                            self.dp_config(Interpolation::Linear, true)?;
                        }
                        PlanKind::Greedy | PlanKind::Rotating => {}
                    }
                }
            }
            Command::Solve => self.require_two_options("solve")?,
            Command::Curve { interpolation, refine } => {
                self.require_two_options("curve")?;
                self.dp_config(*interpolation, *refine)?;
            }
            Command::Oracle { .. } => {
                self.require_two_options("oracle")?;
                if self.t_rounds > MAX_ROUNDS {
                    return Err(invalid(format!(
                        "oracle enumerates at most {MAX_ROUNDS} rounds, got --rounds {}",
                        self.t_rounds
                    )));
                }
                if self.oracle_q < MIN_RESOLUTION {
                    return Err(invalid(format!(
                        "--oracle-grid must be at least {MIN_RESOLUTION}, got {}",
                        self.oracle_q
                    )));
                }
            }
            Command::Bounds => {
                self.require_two_options("bounds")?;
                let w = self.initial_weights()?.first();
                if !(w > 0.5 && w < 1.0) {
                    return Err(invalid(format!("bounds needs --w0 in (1/2, 1), got {w}")));
                }
            }
            Command::EqualWeights => self.require_two_options("equalweights")?,
            Command::Rotation { betas } => {
                for &b in betas.iter().flatten() {
                    GameParams::new(b, self.n_options, 1)?;
                }
            }
        }
        Ok(())
    }
}

fn invalid(msg: String) -> CliError {
    CliError::Validation(msg)
}

/// Validates, computes and writes the artifact.
pub fn run(config: &RunConfig) -> CliResult<()> {
    let report = execute(config)?;
    let text = report.render(config.format.unwrap_or_else(|| report.default_format()))?;
    match &config.output_path {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

/// Validates and computes the artifact without writing it.
pub fn execute(config: &RunConfig) -> CliResult<Report> {
    config.validate()?;
    match &config.command {
        Command::Trace { plan, penalties } => trace(config, *plan, penalties.as_deref()),
        Command::Solve => solve(config),
        Command::Curve { interpolation, refine } => curve(config, *interpolation, *refine),
        Command::Oracle { refine } => oracle(config, *refine),
        Command::Bounds => bounds(config),
        Command::EqualWeights => equal_weights(config),
        Command::Rotation { betas } => rotation(config, betas.as_deref()),
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> CliResult<Value> {
    serde_json::to_value(x).map_err(|e| CliError::Encode(e.to_string()))
}

fn game_header(config: &RunConfig, w0: &WeightVector) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("beta".into(), json!(config.beta));
    m.insert("rounds".into(), json!(config.t_rounds));
    m.insert("options".into(), json!(config.n_options));
    m.insert("w0".into(), json!(w0.as_slice()));
    m
}

fn trace(config: &RunConfig, kind: PlanKind, penalties: Option<&[f64]>) -> CliResult<Report> {
    let params = config.params()?;
    let w0 = config.initial_weights()?;
    let plan = match (penalties, kind) {
        (Some(p), _) => PenaltyPlan::from_first_option(p)?,
        (None, PlanKind::Greedy) => greedy_binary_plan(&w0, &params)?,
        (None, PlanKind::Optimal) => optimal_plan(&w0, &params)?,
        (None, PlanKind::Rotating) => {
            rotating_plan(&params, &PenaltyVector::unit(params.n_options(), w0.argmax())?)?
        }
        (None, PlanKind::EqualWeights) => equal_weights_plan(&params)?,
        (None, PlanKind::Dp) => {
            let curve = solve_curve_with(&params, &config.dp_config(Interpolation::Linear, true)?)?;
            recover_penalties(&curve, w0.first(), &params)?
        }
    };
    let game = play_game(&w0, &plan, &params)?;

    let n = params.n_options();
    let columns = std::iter::once("round".to_string())
        .chain((1..=n).map(|i| format!("w_{i}")))
        .chain((1..=n).map(|i| format!("l_{i}")))
        .chain(["loss".to_string(), "cumulative".to_string()]);
    let mut table = Table::new(columns);
    let mut cumulative = 0.0;
    for (t, ((w, l), &loss)) in game
        .weights_per_round()
        .iter()
        .zip(game.penalties_per_round())
        .zip(game.loss_per_round())
        .enumerate()
    {
        cumulative += loss;
        let mut row = vec![Cell::Int(t as i64 + 1)];
        row.extend(w.as_slice().iter().map(|&x| Cell::Real(x)));
        row.extend(l.as_slice().iter().map(|&x| Cell::Real(x)));
        row.push(Cell::Real(loss));
        row.push(Cell::Real(cumulative));
        table.push(row);
    }
    Ok(Report::Table(table))
}

fn solve(config: &RunConfig) -> CliResult<Report> {
    let params = config.params()?;
    let w0 = config.initial_weights()?;
    let plan = optimal_plan(&w0, &params)?;
    let loss = play_game(&w0, &plan, &params)?.cumulative_loss();
    let greedy = play_game(&w0, &greedy_binary_plan(&w0, &params)?, &params)?.cumulative_loss();
    let mut doc = game_header(config, &w0);
    doc.insert("pattern".into(), to_value(&plan.pattern())?);
    doc.insert("adjustment".into(), json!(plan.adjustment()));
    doc.insert("transition_length".into(), json!(plan.transition_length()));
    doc.insert("total_loss".into(), json!(loss));
    doc.insert("greedy_loss".into(), json!(greedy));
    doc.insert("first_option_penalties".into(), json!(plan.first_option_penalties()));
    Ok(Report::Document(Value::Object(doc)))
}

fn curve(config: &RunConfig, interpolation: Interpolation, refine: bool) -> CliResult<Report> {
    let params = config.params()?;
    let curve = solve_curve_with(&params, &config.dp_config(interpolation, refine)?)?;
    let mut table = Table::new(["horizon", "w", "value", "argmax_penalty"]);
    for t in 0..curve.horizons() {
        for (k, (&v, &a)) in curve.values(t).iter().zip(curve.argmax_penalties(t)).enumerate() {
            table.push(vec![
                Cell::Int(t as i64 + 1),
                Cell::Real(curve.grid_weight(k)),
                Cell::Real(v),
                Cell::Real(a),
            ]);
        }
    }
    Ok(Report::Table(table))
}

fn oracle(config: &RunConfig, refine: bool) -> CliResult<Report> {
    let params = config.params()?;
    let w0 = config.initial_weights()?;
    let result = brute_force_max(&w0, &params, config.oracle_q, refine)?;
    let mut doc = game_header(config, &w0);
    doc.insert("result".into(), to_value(&result)?);
    doc.insert(
        "first_option_penalties".into(),
        json!(result.best_plan.first_option_penalties()),
    );
    Ok(Report::Document(Value::Object(doc)))
}

fn bounds(config: &RunConfig) -> CliResult<Report> {
    let params = config.params()?;
    let w0 = config.initial_weights()?;
    let report = binary_error_bounds(w0.first(), &params)?;
    let mut doc = game_header(config, &w0);
    doc.insert("report".into(), to_value(&report)?);
    Ok(Report::Document(Value::Object(doc)))
}

fn equal_weights(config: &RunConfig) -> CliResult<Report> {
    let mut table = Table::new(["rounds", "x_star", "loss"]);
    for t in 1..=config.t_rounds {
        let params = GameParams::two_options(config.beta, t)?;
        let x = equal_weights_x_star(&params);
        table.push(vec![
            Cell::Int(t as i64),
            Cell::Real(x),
            Cell::Real(equal_weights_loss(x, &params)),
        ]);
    }
    Ok(Report::Table(table))
}

fn rotation(config: &RunConfig, betas: Option<&[f64]>) -> CliResult<Report> {
    let betas = betas.unwrap_or(std::slice::from_ref(&config.beta));
    let mut table = Table::new([
        "options",
        "beta",
        "cycle_loss_equal",
        "cycle_loss_equal_direct",
        "ideal_cycle_loss",
        "ideal_per_round",
    ]);
    for n in 2..=config.n_options {
        for &beta in betas {
            let ideal = ideal_rotation(&GameParams::new(beta, n, n)?);
            table.push(vec![
                Cell::Int(n as i64),
                Cell::Real(beta),
                Cell::Real(cycle_loss_equal_closed(n, beta)?),
                Cell::Real(cycle_loss_equal_direct(n, beta)),
                Cell::Real(ideal.per_cycle_loss),
                Cell::Real(ideal.per_round_loss()),
            ]);
        }
    }
    Ok(Report::Table(table))
}
