//! Subcommand definitions and dispatch.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::{json, Value};

use lambda_thermo_core::{
    dimension, measures, spectra, stochastic, Error as CoreError, OperatorKind,
};

use crate::envelope::ResultEnvelope;
use crate::grid::{cartesian, GridSpec};
use crate::output::{fmt_f64, CsvTable};

/// Hard cap on sweep sizes.
pub const GRID_CAP: usize = 100_000;

#[derive(Debug, Parser)]
#[command(
    name = "lambda-thermo",
    about = "Thermodynamics of the countably piecewise linear interval map family",
    long_about = "Pressure functions, conformal and invariant measures, recurrence \
                  classification, partition functions and Hausdorff dimensions for the \
                  lambda-parameterised interval maps.\n\nGrids use `start:stop:step` \
                  (start inclusive, stop exclusive up to a rounding guard); a bare \
                  number is a one-point grid.  JSON is the canonical output, CSV a \
                  lossy projection.  Exit codes: 0 success, 2 validation error, 3 \
                  numerical non-convergence."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output file (stdout when omitted)
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct ParamGrid {
    /// Map parameter lambda in (0,1), or a lambda grid `start:stop:step`
    #[arg(long, visible_alias = "lambda-grid", value_parser = GridSpec::from_str)]
    pub lambda: GridSpec,

    /// Potential exponent t, or a t grid `start:stop:step`
    #[arg(
        long,
        visible_alias = "t-grid",
        default_value = "1",
        value_parser = GridSpec::from_str,
        allow_hyphen_values = true
    )]
    pub t: GridSpec,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form pressure and truncated leading eigenvalues on a grid
    Pressure {
        #[command(flatten)]
        params: ParamGrid,
        /// Truncation sizes for x_{t,K}, comma separated
        #[arg(long, default_value = "16,64,256", value_delimiter = ',')]
        k_schedule: Vec<usize>,
    },
    /// Conformal measure at shift p (defaults to the conformal pressure)
    Conformal {
        /// Map parameter lambda in (0,1)
        #[arg(long)]
        lambda: f64,
        /// Potential exponent
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        t: f64,
        /// Potential shift; defaults to the conformal pressure
        #[arg(long)]
        p: Option<f64>,
        /// Check the functional equations up to this state
        #[arg(long, default_value_t = 100)]
        residual_k_max: u32,
    },
    /// Invariant measure absolutely continuous w.r.t. the conformal one
    Invariant {
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        t: f64,
    },
    /// Recurrence/transience classification with certificates
    Classify {
        #[command(flatten)]
        params: ParamGrid,
    },
    /// Ensemble random-walk simulation (state chain or exact interval map)
    Simulate {
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, default_value_t = 10_000)]
        steps: u64,
        #[arg(long, default_value_t = 1_000)]
        walkers: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Escape threshold state (hysteresis at half this value)
        #[arg(long, default_value_t = 50)]
        threshold: u32,
        /// Drive the abstract chain or the exact interval map
        #[arg(long, value_enum, default_value_t = SimulateMode::Chain)]
        mode: SimulateMode,
        /// Fixed initial state (uniform-on-(0,1] start when omitted)
        #[arg(long)]
        initial_state: Option<u32>,
    },
    /// Hausdorff dimensions of escaping and hyperbolic sets
    Dimension {
        /// Map parameter lambda in (0,1), or a grid
        #[arg(long, value_parser = GridSpec::from_str)]
        lambda: GridSpec,
        /// Also compute truncated dimensions at these K
        #[arg(long, value_delimiter = ',')]
        k_schedule: Option<Vec<usize>>,
    },
    /// Pressure-normalised partition functions and the null-recurrent columns
    Partition {
        #[arg(long, default_value_t = 0.25)]
        lambda: f64,
        /// Potential exponent; the default pairs with lambda = 1/4 to sit at
        /// the null-recurrent point lambda^t = 1/2
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        t: f64,
        /// Number of steps k
        #[arg(long, default_value_t = 10)]
        k: u32,
        /// Base state
        #[arg(long, default_value_t = 1)]
        e0: u32,
        /// Exact rational lambda^t as `num/den`; adds exact values to the output
        #[arg(long)]
        u_rational: Option<String>,
        /// Emit the exact first column of the null matrix power
        #[arg(long)]
        null_column: bool,
        /// Partial sums of the normalised series up to N
        #[arg(long)]
        series: Option<u64>,
    },
    /// Run a verification suite (nonzero exit on any failure)
    Verify {
        #[arg(long, default_value = "acceptance")]
        suite: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimulateMode {
    Chain,
    Interval,
}

/// Everything a command produces.
#[derive(Debug)]
pub struct CommandOutput {
    pub envelope: ResultEnvelope,
    pub csv: CsvTable,
    pub exit_code: i32,
}

impl CommandOutput {
    fn ok(envelope: ResultEnvelope, csv: CsvTable) -> Self {
        CommandOutput {
            envelope,
            csv,
            exit_code: 0,
        }
    }
}

/// Dispatch a parsed invocation; returns the envelope and the CSV projection.
pub fn run(cli: &Cli) -> Result<CommandOutput, CliError> {
    match &cli.command {
        Command::Pressure { params, k_schedule } => pressure_cmd(params, k_schedule),
        Command::Conformal {
            lambda,
            t,
            p,
            residual_k_max,
        } => conformal_cmd(*lambda, *t, *p, *residual_k_max),
        Command::Invariant { lambda, t } => invariant_cmd(*lambda, *t),
        Command::Classify { params } => classify_cmd(params),
        Command::Simulate {
            lambda,
            t,
            steps,
            walkers,
            seed,
            threshold,
            mode,
            initial_state,
        } => simulate_cmd(
            *lambda,
            *t,
            *steps,
            *walkers,
            *seed,
            *threshold,
            *mode,
            *initial_state,
        ),
        Command::Dimension { lambda, k_schedule } => dimension_cmd(lambda, k_schedule.as_deref()),
        Command::Partition {
            lambda,
            t,
            k,
            e0,
            u_rational,
            null_column,
            series,
        } => partition_cmd(
            *lambda,
            *t,
            *k,
            *e0,
            u_rational.as_deref(),
            *null_column,
            *series,
        ),
        Command::Verify { suite } => verify_cmd(suite),
    }
}

/// CLI-level error carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub message: String,
    pub exit_code: i32,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        CliError {
            exit_code: crate::exit_code_for(&err),
            message: err.to_string(),
        }
    }
}

fn validation(message: impl Into<String>) -> CliError {
    CliError {
        message: message.into(),
        exit_code: crate::EXIT_VALIDATION,
    }
}

fn sweep(params: &ParamGrid) -> Result<Vec<(f64, f64)>, CliError> {
    cartesian(&params.lambda, &params.t, GRID_CAP).map_err(validation)
}

/// Parallel map over grid points with deterministic (row-major) output order.
fn parallel_rows<T: Send>(
    points: &[(f64, f64)],
    f: impl Fn(f64, f64) -> Result<T, CliError> + Sync,
) -> Result<Vec<T>, CliError>
where
    CliError: Send,
{
    points
        .par_iter()
        .map(|&(lam, t)| f(lam, t))
        .collect::<Result<Vec<_>, _>>()
}

fn pressure_cmd(params: &ParamGrid, k_schedule: &[usize]) -> Result<CommandOutput, CliError> {
    if k_schedule.is_empty() || k_schedule.iter().any(|&k| k < 1) {
        return Err(validation("k-schedule must be nonempty with K >= 1"));
    }
    let points = sweep(params)?;
    let rows = parallel_rows(&points, |lam, t| {
        if !(lam > 0.0 && lam < 1.0) {
            return Err(validation(format!("lambda must lie in (0,1), got {lam}")));
        }
        let p_closed = spectra::pressure_closed(lam, t);
        let x_by_k: Result<Vec<f64>, CliError> = k_schedule
            .iter()
            .map(|&k| spectra::leading_root(OperatorKind::B, k, lam, t).map_err(CliError::from))
            .collect();
        Ok(json!({
            "lambda": lam,
            "t": t,
            "p_closed": p_closed,
            "p_conformal": measures::conformal_pressure(lam, t),
            "t0": spectra::t0(lam),
            "x_by_k": x_by_k?,
        }))
    })?;
    let mut csv_rows = Vec::new();
    for row in &rows {
        let mut r = vec![
            fmt_f64(row["lambda"].as_f64().unwrap()),
            fmt_f64(row["t"].as_f64().unwrap()),
            fmt_f64(row["p_closed"].as_f64().unwrap()),
        ];
        for x in row["x_by_k"].as_array().unwrap() {
            r.push(fmt_f64(x.as_f64().unwrap()));
        }
        csv_rows.push(r);
    }
    let mut header = vec!["lambda".into(), "t".into(), "p_closed".into()];
    for k in k_schedule {
        header.push(format!("x_K{k}"));
    }
    let envelope = ResultEnvelope::new(
        "pressure",
        json!({
            "lambda": grid_echo(&params.lambda),
            "t": grid_echo(&params.t),
            "k_schedule": k_schedule,
        }),
        json!({ "rows": rows }),
        vec![],
    );
    Ok(CommandOutput::ok(
        envelope,
        CsvTable {
            header,
            rows: csv_rows,
        },
    ))
}

fn measure_json(m: &measures::StateMeasure) -> Value {
    let (law, parameters) = match m.law() {
        measures::TailLaw::Geometric { coef, ratio } => {
            ("geometric", json!({ "coef": coef, "ratio": ratio }))
        }
        measures::TailLaw::PolyGeometric { a, b, ratio } => {
            ("poly_geometric", json!({ "a": a, "b": b, "ratio": ratio }))
        }
        measures::TailLaw::TwoTerm {
            a_plus,
            r_plus,
            a_minus,
            r_minus,
        } => (
            "two_term",
            json!({ "a_plus": a_plus, "r_plus": r_plus, "a_minus": a_minus, "r_minus": r_minus }),
        ),
    };
    json!({
        "law": law,
        "parameters": parameters,
        "masses": m.prefix(32),
    })
}

fn measure_csv(m: &measures::StateMeasure) -> CsvTable {
    CsvTable {
        header: vec!["state".into(), "mass".into()],
        rows: (1..=32u32)
            .map(|k| vec![k.to_string(), fmt_f64(m.mass(k))])
            .collect(),
    }
}

fn conformal_cmd(
    lambda: f64,
    t: f64,
    p: Option<f64>,
    residual_k_max: u32,
) -> Result<CommandOutput, CliError> {
    let p_conf = measures::conformal_pressure(lambda, t);
    let shift = p.unwrap_or(p_conf);
    let m = measures::conformal_measure(lambda, t, shift)?;
    let residual = measures::conformal_residual(&m, lambda, t, shift, residual_k_max.max(2));
    let mut payload = measure_json(&m);
    payload["p"] = json!(shift);
    payload["p_conformal"] = json!(p_conf);
    payload["residual"] = json!(residual);
    payload["residual_k_max"] = json!(residual_k_max.max(2));
    let envelope = ResultEnvelope::new(
        "conformal",
        json!({ "lambda": lambda, "t": t, "p": shift, "residual_k_max": residual_k_max }),
        payload,
        vec![],
    );
    Ok(CommandOutput::ok(envelope, measure_csv(&m)))
}

fn invariant_cmd(lambda: f64, t: f64) -> Result<CommandOutput, CliError> {
    let m = if t == 1.0 {
        measures::acip(lambda)?
    } else {
        measures::invariant_measure(lambda, t)?
    };
    let mut payload = measure_json(&m);
    payload["density_ratio_first_states"] = json!((1..=8u32)
        .map(|n| measures::density_ratio(n, lambda, t).unwrap_or(f64::NAN))
        .collect::<Vec<_>>());
    let envelope = ResultEnvelope::new(
        "invariant",
        json!({ "lambda": lambda, "t": t }),
        payload,
        vec![],
    );
    Ok(CommandOutput::ok(envelope, measure_csv(&m)))
}

fn classify_cmd(params: &ParamGrid) -> Result<CommandOutput, CliError> {
    let points = sweep(params)?;
    let rows = parallel_rows(&points, |lam, t| {
        let c = stochastic::classify(lam, t)?;
        let rho = match c.rho_integral {
            Some(measures::RhoIntegral::Finite(v)) => json!({ "finite": true, "value": v }),
            Some(measures::RhoIntegral::Divergent) => json!({ "finite": false }),
            None => Value::Null,
        };
        Ok(json!({
            "lambda": lam,
            "t": t,
            "class": c.class.as_str(),
            "lambda_pow_t": c.lambda_pow_t,
            "certificates": {
                "rho_integral": rho,
                "drift_deep": c.drift_deep,
            },
        }))
    })?;
    let csv_rows = rows
        .iter()
        .map(|r| {
            vec![
                fmt_f64(r["lambda"].as_f64().unwrap()),
                fmt_f64(r["t"].as_f64().unwrap()),
                r["class"].as_str().unwrap().to_string(),
                fmt_f64(r["lambda_pow_t"].as_f64().unwrap()),
            ]
        })
        .collect();
    let envelope = ResultEnvelope::new(
        "classify",
        json!({ "lambda": grid_echo(&params.lambda), "t": grid_echo(&params.t) }),
        json!({ "rows": rows }),
        vec![],
    );
    Ok(CommandOutput::ok(
        envelope,
        CsvTable {
            header: vec![
                "lambda".into(),
                "t".into(),
                "class".into(),
                "lambda_pow_t".into(),
            ],
            rows: csv_rows,
        },
    ))
}

/// Parallel ensemble with merging in walker order; bit-identical to the
/// sequential run for any thread count.
pub fn simulate_parallel(
    config: &stochastic::WalkConfig,
    mode: SimulateMode,
) -> Result<stochastic::WalkStats, CoreError> {
    let per: Result<Vec<_>, CoreError> = (0..config.n_walkers)
        .into_par_iter()
        .map(|w| match mode {
            SimulateMode::Chain => stochastic::simulate_chain_walker(config, w),
            SimulateMode::Interval => stochastic::simulate_interval_walker(config, w),
        })
        .collect();
    let per = per?;
    let mut iter = per.into_iter();
    let mut total = iter.next().expect("n_walkers >= 1");
    for s in iter {
        total.merge(&s);
    }
    Ok(total)
}

pub fn walk_stats_json(stats: &stochastic::WalkStats) -> Value {
    let occupation: Vec<Value> = stats
        .state_counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(i, &c)| {
            json!({
                "state": i + 1,
                "count": c,
                "frequency": c as f64 / stats.total_state_samples() as f64,
            })
        })
        .collect();
    json!({
        "n_walkers": stats.n_walkers,
        "steps_per_walker": stats.steps_per_walker,
        "occupation": occupation,
        "occupation_overflow": {
            "count": stats.state_overflow,
            "frequency": stats.overflow_frequency(),
        },
        "escape_fraction": stats.escape_fraction(),
        "displacement": {
            "mean": stats.displacement_mean(),
            "variance": stats.displacement_variance(),
        },
        "returns_to_one": {
            "count": stats.return_count,
            "mean_time": stats.mean_return_time(),
        },
        "max_state": stats.max_state,
    })
}

fn walk_stats_csv(stats: &stochastic::WalkStats) -> CsvTable {
    let mut rows: Vec<Vec<String>> = stats
        .state_counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(i, &c)| {
            vec![
                format!("{}", i + 1),
                format!("{c}"),
                fmt_f64(c as f64 / stats.total_state_samples() as f64),
            ]
        })
        .collect();
    // summary block
    rows.push(vec![
        "overflow".into(),
        format!("{}", stats.state_overflow),
        fmt_f64(stats.overflow_frequency()),
    ]);
    rows.push(vec![
        "escape_fraction".into(),
        String::new(),
        fmt_f64(stats.escape_fraction()),
    ]);
    rows.push(vec![
        "displacement_mean".into(),
        String::new(),
        fmt_f64(stats.displacement_mean()),
    ]);
    rows.push(vec![
        "displacement_variance".into(),
        String::new(),
        fmt_f64(stats.displacement_variance()),
    ]);
    rows.push(vec![
        "max_state".into(),
        format!("{}", stats.max_state),
        String::new(),
    ]);
    CsvTable {
        header: vec!["state".into(), "count".into(), "frequency".into()],
        rows,
    }
}

#[allow(clippy::too_many_arguments)]
fn simulate_cmd(
    lambda: f64,
    t: f64,
    steps: u64,
    walkers: u64,
    seed: u64,
    threshold: u32,
    mode: SimulateMode,
    initial_state: Option<u32>,
) -> Result<CommandOutput, CliError> {
    let config = stochastic::WalkConfig {
        lambda,
        t,
        n_steps: steps,
        n_walkers: walkers,
        seed,
        escape_threshold: threshold,
        initial: match initial_state {
            Some(s) => stochastic::InitialState::Fixed(s),
            None => stochastic::InitialState::UniformUnit,
        },
    };
    let stats = simulate_parallel(&config, mode)?;
    let mut warnings = Vec::new();
    if stats.state_overflow > 0 {
        warnings.push(format!(
            "{} step(s) beyond state {} were accumulated in the overflow bin",
            stats.state_overflow,
            stochastic::STATE_HISTOGRAM_CAP
        ));
    }
    let envelope = ResultEnvelope::new(
        "simulate",
        json!({
            "lambda": lambda,
            "t": t,
            "steps": steps,
            "walkers": walkers,
            "seed": seed,
            "threshold": threshold,
            "mode": match mode { SimulateMode::Chain => "chain", SimulateMode::Interval => "interval" },
            "initial_state": initial_state,
        }),
        walk_stats_json(&stats),
        warnings,
    );
    Ok(CommandOutput::ok(envelope, walk_stats_csv(&stats)))
}

fn dimension_cmd(
    lambda: &GridSpec,
    k_schedule: Option<&[usize]>,
) -> Result<CommandOutput, CliError> {
    let lams = lambda.values();
    if lams.len() > GRID_CAP {
        return Err(validation(format!("grid exceeds cap of {GRID_CAP}")));
    }
    let rows = lams
        .par_iter()
        .map(|&lam| {
            let rep = dimension::dimension_report(lam)?;
            let truncated: Result<Vec<Value>, CoreError> = match k_schedule {
                None => Ok(vec![]),
                Some(ks) => ks
                    .iter()
                    .map(|&k| dimension::dim_truncated(lam, k).map(|d| json!({ "k": k, "dim": d })))
                    .collect(),
            };
            Ok::<Value, CliError>(json!({
                "lambda": lam,
                "dim_escaping": rep.dim_escaping,
                "dim_hyperbolic": rep.dim_hyperbolic,
                "t1": rep.t1,
                "method": "closed_form",
                "truncated": truncated?,
            }))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let csv_rows = rows
        .iter()
        .map(|r| {
            vec![
                fmt_f64(r["lambda"].as_f64().unwrap()),
                fmt_f64(r["dim_escaping"].as_f64().unwrap()),
                fmt_f64(r["dim_hyperbolic"].as_f64().unwrap()),
                fmt_f64(r["t1"].as_f64().unwrap()),
            ]
        })
        .collect();
    let envelope = ResultEnvelope::new(
        "dimension",
        json!({ "lambda": grid_echo(lambda), "k_schedule": k_schedule }),
        json!({ "rows": rows }),
        vec![],
    );
    Ok(CommandOutput::ok(
        envelope,
        CsvTable {
            header: vec![
                "lambda".into(),
                "dim_escaping".into(),
                "dim_hyperbolic".into(),
                "t1".into(),
            ],
            rows: csv_rows,
        },
    ))
}

fn parse_rational(s: &str) -> Result<BigRational, CliError> {
    let parts: Vec<&str> = s.split('/').collect();
    let make = |n: &str, d: &str| -> Result<BigRational, CliError> {
        let num = n
            .parse::<num_bigint::BigInt>()
            .map_err(|e| validation(format!("bad numerator {n:?}: {e}")))?;
        let den = d
            .parse::<num_bigint::BigInt>()
            .map_err(|e| validation(format!("bad denominator {d:?}: {e}")))?;
        if den == num_bigint::BigInt::from(0) {
            return Err(validation("zero denominator"));
        }
        Ok(BigRational::new(num, den))
    };
    match parts.as_slice() {
        [n] => make(n, "1"),
        [n, d] => make(n, d),
        _ => Err(validation(format!("expected `num/den`, got {s:?}"))),
    }
}

fn partition_cmd(
    lambda: f64,
    t: f64,
    k: u32,
    e0: u32,
    u_rational: Option<&str>,
    null_column: bool,
    series: Option<u64>,
) -> Result<CommandOutput, CliError> {
    let mut payload = json!({
        "lambda": lambda,
        "t": t,
        "k": k,
        "e0": e0,
        "z": stochastic::partition_z(k, e0, lambda, t)?,
        "z_column_sum": stochastic::partition_z_column_sum(k, e0, lambda, t)?,
    });
    if let Some(u_str) = u_rational {
        let u = parse_rational(u_str)?;
        let exact = stochastic::partition_z_exact(k, e0, &u)?;
        payload["z_exact"] = json!(stochastic::rational_string(&exact));
        payload["u_rational"] = json!(u_str);
    }
    if null_column {
        let col = stochastic::null_column(k);
        payload["null_column"] = json!(col
            .iter()
            .map(stochastic::rational_string)
            .collect::<Vec<_>>());
        payload["null_column_closed_form"] = json!(stochastic::null_column_closed_form(k)
            .iter()
            .map(stochastic::rational_string)
            .collect::<Vec<_>>());
        payload["central_binomial_top"] = json!(stochastic::rational_string(
            &stochastic::central_binomial_ratio(k)
        ));
    }
    if let Some(n_max) = series {
        let s = stochastic::recurrence_series(lambda, t, n_max)?;
        let verdict = match s.verdict {
            stochastic::SeriesVerdict::DivergentSqrt { sqrt_scaled_term } => json!({
                "kind": "divergent_sqrt",
                "sqrt_scaled_term": sqrt_scaled_term,
            }),
            stochastic::SeriesVerdict::DivergentPositiveTerms { limit_term } => json!({
                "kind": "divergent_positive_terms",
                "limit_term": limit_term,
            }),
            stochastic::SeriesVerdict::Convergent { tail_ratio } => json!({
                "kind": "convergent",
                "tail_ratio": tail_ratio,
            }),
        };
        payload["series"] = json!({
            "n_max": s.n_max,
            "verdict": verdict,
            "partial_sums": s.checkpoints,
            "last_term": s.last_term,
        });
    }
    let csv = CsvTable {
        header: vec!["k".into(), "e0".into(), "z".into(), "z_column_sum".into()],
        rows: vec![vec![
            k.to_string(),
            e0.to_string(),
            fmt_f64(payload["z"].as_f64().unwrap()),
            fmt_f64(payload["z_column_sum"].as_f64().unwrap()),
        ]],
    };
    let envelope = ResultEnvelope::new(
        "partition",
        json!({
            "lambda": lambda, "t": t, "k": k, "e0": e0,
            "u_rational": u_rational, "null_column": null_column, "series": series,
        }),
        payload,
        vec![],
    );
    Ok(CommandOutput::ok(envelope, csv))
}

fn verify_cmd(suite: &str) -> Result<CommandOutput, CliError> {
    if suite != "acceptance" {
        return Err(validation(format!(
            "unknown suite {suite:?} (available: acceptance)"
        )));
    }
    // human-readable progress on stderr; stdout stays valid JSON/CSV
    let results = crate::acceptance::run_all();
    for r in &results {
        eprintln!("{}", r.line());
    }
    let all_passed = results.iter().all(|r| r.passed);
    let payload = json!({
        "suite": "acceptance",
        "passed": all_passed,
        "criteria": results.iter().map(|r| json!({
            "id": r.id,
            "name": r.name,
            "passed": r.passed,
            "details": r.details,
        })).collect::<Vec<_>>(),
    });
    let csv = CsvTable {
        header: vec!["id".into(), "name".into(), "passed".into()],
        rows: results
            .iter()
            .map(|r| vec![r.id.to_string(), r.name.clone(), r.passed.to_string()])
            .collect(),
    };
    let envelope = ResultEnvelope::new("verify", json!({ "suite": suite }), payload, vec![]);
    Ok(CommandOutput {
        envelope,
        csv,
        exit_code: if all_passed { 0 } else { 1 },
    })
}

fn grid_echo(g: &GridSpec) -> Value {
    if g.is_single() {
        json!(g.start)
    } else {
        json!({ "start": g.start, "stop": g.stop, "step": g.step })
    }
}
