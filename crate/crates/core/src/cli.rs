//! Command-line front end. Reports go to the output stream as JSON (default)
//! or CSV with a header row, comma separators and LF line endings.
//!
//! Exit codes: 0 success, 2 usage error, 3 validation error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::engine::{
    lsp_best_threshold, lsp_odds_value, reciprocal_n_limit, reciprocal_n_value, solve_dp,
    threshold_index, win_probability, GameSpec,
};
use crate::error::Error;
use crate::markov::{
    conjecture_check, conjectured_decisions, counterexample_search, markov_optimal, MarkovSpec,
};
use crate::oracle::{enumerate_value, minimax_value};
use crate::simulate::{
    simulate_multiplayer_sharded, simulate_random_params_sharded, simulate_sharded, DEFAULT_SHARDS,
};
use crate::variants::{
    multiplayer_loss_distribution, poisson_mod_limit, repeat_value, repeat_value_limit,
    repeat_value_reciprocal, repeat_value_reciprocal_conditional, rp_expected_assembled,
    rp_expected_value, rp_pivot_value, rp_suffix_value,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

/// On-disk spec document. Exactly one of the three shapes:
/// `{"p": [..]}`, `{"equal_p": {"p": x, "n": k}}` or
/// `{"markov": {"p1": x, "alpha": [..], "beta": [..]}}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SpecFile {
    P(Vec<f64>),
    EqualP { p: f64, n: usize },
    Markov(MarkovSpec<f64>),
}

#[derive(Debug, Parser)]
#[command(
    name = "lastsuccess",
    version,
    about = "Adversarial last-success game solver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
}

#[derive(Debug, Args)]
#[group(multiple = false)]
struct SpecSource {
    /// Comma-separated success probabilities p_1..p_n.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    p: Option<Vec<f64>>,
    /// JSON spec document.
    #[arg(long)]
    spec_file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact value table, threshold and parity check.
    Value {
        #[command(flatten)]
        source: SpecSource,
        #[command(flatten)]
        common: Common,
    },
    /// Single-player last-success threshold and value.
    Odds {
        #[command(flatten)]
        source: SpecSource,
        #[command(flatten)]
        common: Common,
    },
    /// Brute-force minimax over all pure pass-set pairs (n <= 8).
    Oracle {
        #[command(flatten)]
        source: SpecSource,
        #[command(flatten)]
        common: Common,
    },
    /// Variant games.
    Variant {
        #[command(subcommand)]
        which: VariantCommand,
    },
    /// Markov-dependent trials.
    Markov {
        #[command(subcommand)]
        which: MarkovCommand,
    },
    /// Monte Carlo play. With --m, hot-potato loss frequencies; with --n and
    /// no spec, uniformly random parameters.
    Simulate {
        #[command(flatten)]
        source: SpecSource,
        /// Number of trials for uniformly random parameters when no spec is given.
        #[arg(long)]
        n: Option<usize>,
        /// Player count; reports per-seat loss frequencies.
        #[arg(long)]
        m: Option<usize>,
        /// Total number of simulated games.
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        /// RNG seed.
        #[arg(long)]
        seed: u64,
        /// Independent RNG streams, one per shard.
        #[arg(long, default_value_t = DEFAULT_SHARDS)]
        shards: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Closed-form values over a range of n, one row per n.
    Sweep {
        family: SweepFamily,
        /// Last n (inclusive).
        #[arg(long)]
        n: u64,
        /// First n; defaults to the smallest n the family admits.
        #[arg(long)]
        from: Option<u64>,
        /// Player count for the multiplayer family.
        #[arg(long, default_value_t = 3)]
        m: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
}

#[derive(Debug, Subcommand)]
enum VariantCommand {
    /// All-zero rounds are replayed.
    Repeat {
        /// Use p_i = 1/n and also report the closed form.
        #[arg(long)]
        n: Option<u64>,
        #[command(flatten)]
        source: SpecSource,
        #[command(flatten)]
        common: Common,
    },
    /// Loss distribution for m players under always-pass play.
    Multiplayer {
        /// Player count (at least 2).
        #[arg(long)]
        m: usize,
        /// Large-n limit for p_i = 1/n.
        #[arg(long)]
        limit: bool,
        /// Use n trials with p_i = 1/n.
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        source: SpecSource,
        #[command(flatten)]
        common: Common,
    },
    /// Expected value with parameters drawn from U[0, 1].
    RandomParams {
        /// Number of trials.
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Subcommand)]
enum MarkovCommand {
    /// Exact optimum against the conjectured pass rule.
    Check {
        #[command(flatten)]
        source: SpecSource,
        #[command(flatten)]
        common: Common,
    },
    /// Grid and random search for conjecture violations.
    Search {
        /// Largest horizon (<= 6).
        #[arg(long)]
        n: usize,
        /// Grid spacing for p_1, alpha and beta, in (0, 1].
        #[arg(long)]
        grid_step: f64,
        /// Extra uniformly random specs after the grid.
        #[arg(long, default_value_t = 0)]
        random_trials: u64,
        /// Seed for the random specs.
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepFamily {
    ReciprocalN,
    Repeat,
    RandomParams,
    Multiplayer,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Invalid(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

/// A report renderable as JSON or as a CSV table.
struct Report {
    json: Value,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Report {
    /// Single-row table from the scalar fields of a JSON object.
    fn flat(json: Value) -> Self {
        let mut header = Vec::new();
        let mut row = Vec::new();
        if let Value::Object(map) = &json {
            for (k, v) in map {
                match v {
                    Value::Number(_) | Value::Bool(_) | Value::String(_) => {
                        header.push(k.clone());
                        row.push(cell(v));
                    }
                    _ => {}
                }
            }
        }
        Self {
            json,
            header,
            rows: vec![row],
        }
    }

    fn table(json: Value, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        Self {
            json,
            header: header.iter().map(|s| s.to_string()).collect(),
            rows,
        }
    }

    fn write(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Json => {
                let text =
                    serde_json::to_string_pretty(&self.json).map_err(std::io::Error::other)?;
                writeln!(out, "{text}")
            }
            Format::Csv => {
                let mut w = csv::WriterBuilder::new()
                    .terminator(csv::Terminator::Any(b'\n'))
                    .from_writer(out);
                w.write_record(&self.header)?;
                for row in &self.rows {
                    w.write_record(row)?;
                }
                w.flush()
            }
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn num(x: f64) -> String {
    format!("{x}")
}

fn read_spec_file(path: &Path) -> CliResult<SpecFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Invalid(format!("bad spec file {}: {e}", path.display())))
}

impl SpecSource {
    fn is_given(&self) -> bool {
        self.p.is_some() || self.spec_file.is_some()
    }

    fn load(&self) -> CliResult<SpecFile> {
        match (&self.p, &self.spec_file) {
            (Some(p), None) => Ok(SpecFile::P(p.clone())),
            (None, Some(path)) => read_spec_file(path),
            _ => Err(CliError::Usage(
                "exactly one of --p or --spec-file is required".into(),
            )),
        }
    }

    fn game(&self) -> CliResult<GameSpec<f64>> {
        match self.load()? {
            SpecFile::P(p) => Ok(GameSpec::new(p)?),
            SpecFile::EqualP { p, n } => Ok(GameSpec::equal(p, n)?),
            SpecFile::Markov(_) => Err(CliError::Invalid(
                "expected an independent-trials spec, got a markov spec".into(),
            )),
        }
    }

    fn markov(&self) -> CliResult<MarkovSpec<f64>> {
        match self.load()? {
            SpecFile::Markov(m) => {
                m.validate()?;
                Ok(m)
            }
            SpecFile::P(p) => Ok(MarkovSpec::independent(&GameSpec::new(p)?)),
            SpecFile::EqualP { p, n } => Ok(MarkovSpec::independent(&GameSpec::equal(p, n)?)),
        }
    }
}

fn spec_json(spec: &GameSpec<f64>) -> Value {
    json!(SpecFile::P(spec.params().to_vec()))
}

fn cmd_value(source: &SpecSource) -> CliResult<Report> {
    let spec = source.game()?;
    let table = solve_dp(&spec);
    let threshold = threshold_index(&spec, 1)?;
    let pass_set = threshold.pass_set(spec.len());
    let parity = win_probability(&spec);
    let json = json!({
        "spec": spec_json(&spec),
        "n": spec.len(),
        "v1": table.v1(),
        "threshold": threshold.threshold,
        "parity": parity,
        "values": table.values(),
        "pass_set": pass_set,
    });
    let rows = (1..=spec.len())
        .map(|k| {
            let action = if k == spec.len() {
                "final"
            } else if pass_set.contains(k) {
                "pass"
            } else {
                "keep"
            };
            vec![
                k.to_string(),
                num(spec.p(k)),
                num(table.value(k)),
                action.to_string(),
            ]
        })
        .collect();
    Ok(Report::table(
        json,
        &["stage", "p", "value", "action_after_success"],
        rows,
    ))
}

fn cmd_odds(source: &SpecSource) -> CliResult<Report> {
    let spec = source.game()?;
    let (result, method) = match lsp_odds_value(&spec) {
        Ok(r) => (r, "odds"),
        Err(Error::DegenerateOdds { .. }) => (lsp_best_threshold(&spec), "threshold_search"),
        Err(e) => return Err(e.into()),
    };
    Ok(Report::flat(json!({
        "spec": spec_json(&spec),
        "stop_index": result.stop_index,
        "win_probability": result.win_probability,
        "method": method,
        "game_value": solve_dp(&spec).v1(),
    })))
}

fn cmd_oracle(source: &SpecSource) -> CliResult<Report> {
    let spec = source.game()?;
    let minimax = minimax_value(&spec)?;
    let dp = solve_dp(&spec).v1();
    let threshold = threshold_index(&spec, 1)?.pass_set(spec.len());
    let threshold_value = enumerate_value(&spec, &threshold, &threshold)?;
    Ok(Report::flat(json!({
        "spec": spec_json(&spec),
        "minimax": minimax.value,
        "dp": dp,
        "difference": (minimax.value - dp).abs(),
        "agrees": (minimax.value - dp).abs() <= 1e-10 && (threshold_value - dp).abs() <= 1e-10,
        "pass_a": minimax.pass_a,
        "pass_b": minimax.pass_b,
        "threshold_pass_set": threshold,
        "threshold_value": threshold_value,
    })))
}

fn cmd_repeat(n: Option<u64>, source: &SpecSource) -> CliResult<Report> {
    match (n, source.is_given()) {
        (Some(n), false) => Ok(Report::flat(json!({
            "n": n,
            "closed_form": repeat_value_reciprocal::<f64>(n)?,
            "conditional": repeat_value_reciprocal_conditional::<f64>(n)?,
            "limit": repeat_value_limit::<f64>(),
        }))),
        (None, true) => {
            let spec = source.game()?;
            Ok(Report::flat(json!({
                "spec": spec_json(&spec),
                "value": repeat_value(&spec)?,
            })))
        }
        _ => Err(CliError::Usage(
            "variant repeat needs exactly one of --n or a spec".into(),
        )),
    }
}

fn loss_report(json: Value, loss: &[f64]) -> Report {
    let rows = loss
        .iter()
        .enumerate()
        .map(|(j, &l)| vec![(j + 1).to_string(), num(l)])
        .collect();
    Report::table(json, &["player", "loss"], rows)
}

fn cmd_multiplayer(
    m: usize,
    limit: bool,
    n: Option<usize>,
    source: &SpecSource,
) -> CliResult<Report> {
    let chosen = usize::from(limit) + usize::from(n.is_some()) + usize::from(source.is_given());
    if chosen != 1 {
        return Err(CliError::Usage(
            "variant multiplayer needs exactly one of --limit, --n or a spec".into(),
        ));
    }
    if limit {
        let d = poisson_mod_limit::<f64>(m)?;
        return Ok(loss_report(
            json!({ "m": m, "limit": true, "loss": d }),
            &d.per_player,
        ));
    }
    let spec = match n {
        Some(n) => GameSpec::reciprocal(n)?,
        None => source.game()?,
    };
    let d = multiplayer_loss_distribution(&spec, m)?;
    Ok(loss_report(
        json!({ "m": m, "limit": false, "spec": spec_json(&spec), "loss": d }),
        &d.per_player,
    ))
}

fn cmd_random_params(n: u64) -> CliResult<Report> {
    if n == 0 {
        return Err(Error::BelowMinimum {
            what: "n",
            min: 1,
            value: 0,
        }
        .into());
    }
    Ok(Report::flat(json!({
        "n": n,
        "expected": rp_expected_value::<f64>(n),
        "assembled": rp_expected_assembled::<f64>(n),
        "suffix": rp_suffix_value::<f64>(n),
        "pivot": rp_pivot_value::<f64>(n),
        "limit": 2.0 / 3.0,
    })))
}

fn cmd_markov_check(source: &SpecSource) -> CliResult<Report> {
    let spec = source.markov()?;
    let solution = markov_optimal(&spec);
    let report = conjecture_check(&spec);
    let conjectured = conjectured_decisions(&spec);
    let json = json!({
        "value": solution.value,
        "decisions": solution.decisions,
        "report": report,
    });
    let rows = solution
        .decisions
        .iter()
        .map(|d| {
            let rule = conjectured[d.stage - 1]
                .1
                .map_or("either".to_string(), |a| format!("{a:?}").to_lowercase());
            vec![
                d.stage.to_string(),
                format!("{:?}", d.action).to_lowercase(),
                rule,
                num(d.keep_value),
                num(d.pass_value),
            ]
        })
        .collect();
    Ok(Report::table(
        json,
        &[
            "stage",
            "optimal",
            "conjectured",
            "keep_value",
            "pass_value",
        ],
        rows,
    ))
}

fn cmd_markov_search(n: usize, step: f64, trials: u64, seed: u64) -> CliResult<Report> {
    let outcome = counterexample_search(n, step, trials, seed)?;
    let rows = outcome
        .violations
        .iter()
        .flat_map(|r| {
            let spec = serde_json::to_string(&r.spec).unwrap_or_default();
            r.violations()
                .map(|m| {
                    vec![
                        spec.clone(),
                        m.stage.to_string(),
                        format!("{:?}", m.conjectured).to_lowercase(),
                        format!("{:?}", m.optimal).to_lowercase(),
                        num(m.gap),
                    ]
                })
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(Report::table(
        json!(outcome),
        &["spec", "stage", "conjectured", "optimal", "gap"],
        rows,
    ))
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    source: &SpecSource,
    n: Option<usize>,
    m: Option<usize>,
    samples: u64,
    seed: u64,
    shards: u64,
) -> CliResult<Report> {
    if !source.is_given() {
        let n = n.ok_or_else(|| CliError::Usage("simulate needs a spec or --n".into()))?;
        if m.is_some() {
            return Err(CliError::Usage("--m needs a spec".into()));
        }
        let report = simulate_random_params_sharded(n, samples, seed, shards)?;
        return Ok(Report::flat(json!({
            "mode": "random_params",
            "n": n,
            "exact": rp_expected_value::<f64>(n as u64),
            "estimate": report.estimate,
            "half_width_95": report.half_width_95,
            "samples": report.samples,
            "seed": report.seed,
            "shards": shards,
        })));
    }
    if n.is_some() {
        return Err(CliError::Usage("--n conflicts with a spec".into()));
    }
    let spec = source.game()?;
    if let Some(m) = m {
        let reports = simulate_multiplayer_sharded(&spec, m, samples, seed, shards)?;
        let exact = multiplayer_loss_distribution(&spec, m)?;
        let rows = reports
            .iter()
            .enumerate()
            .map(|(j, r)| {
                vec![
                    (j + 1).to_string(),
                    num(exact.per_player[j]),
                    num(r.estimate),
                    num(r.half_width_95),
                ]
            })
            .collect();
        let json = json!({
            "mode": "multiplayer",
            "spec": spec_json(&spec),
            "m": m,
            "shards": shards,
            "exact": exact,
            "reports": reports,
        });
        return Ok(Report::table(
            json,
            &["player", "exact", "estimate", "half_width_95"],
            rows,
        ));
    }
    let threshold = threshold_index(&spec, 1)?.pass_set(spec.len());
    let report = simulate_sharded(&spec, &threshold, &threshold, samples, seed, shards)?;
    Ok(Report::flat(json!({
        "mode": "game",
        "spec": spec_json(&spec),
        "exact": solve_dp(&spec).v1(),
        "estimate": report.estimate,
        "half_width_95": report.half_width_95,
        "samples": report.samples,
        "seed": report.seed,
        "shards": shards,
    })))
}

fn cmd_sweep(family: SweepFamily, from: Option<u64>, to: u64, m: usize) -> CliResult<Report> {
    let min = match family {
        SweepFamily::ReciprocalN | SweepFamily::Repeat => 2,
        SweepFamily::RandomParams | SweepFamily::Multiplayer => 1,
    };
    let from = from.unwrap_or(min);
    if from < min {
        return Err(Error::BelowMinimum {
            what: "n",
            min: min as usize,
            value: from as usize,
        }
        .into());
    }
    if family == SweepFamily::Multiplayer && m < 2 {
        return Err(Error::BelowMinimum {
            what: "player count",
            min: 2,
            value: m,
        }
        .into());
    }
    let header: Vec<String> = match family {
        SweepFamily::ReciprocalN => vec!["n".into(), "value".into()],
        SweepFamily::Repeat => vec!["n".into(), "closed_form".into(), "conditional".into()],
        SweepFamily::RandomParams => vec!["n".into(), "expected".into(), "assembled".into()],
        SweepFamily::Multiplayer => std::iter::once("n".to_string())
            .chain((1..=m).map(|j| format!("loss_{j}")))
            .collect(),
    };
    let mut rows = Vec::new();
    for n in from..=to {
        let values: Vec<f64> = match family {
            SweepFamily::ReciprocalN => vec![reciprocal_n_value(n)],
            SweepFamily::Repeat => vec![
                repeat_value_reciprocal(n)?,
                repeat_value_reciprocal_conditional(n)?,
            ],
            SweepFamily::RandomParams => vec![rp_expected_value(n), rp_expected_assembled(n)],
            SweepFamily::Multiplayer => {
                multiplayer_loss_distribution(&GameSpec::reciprocal(n as usize)?, m)?.per_player
            }
        };
        rows.push((n, values));
    }
    let json_rows: Vec<Value> = rows
        .iter()
        .map(|(n, values)| {
            let mut obj = serde_json::Map::new();
            obj.insert("n".into(), json!(n));
            for (h, v) in header.iter().skip(1).zip(values) {
                obj.insert(h.clone(), json!(v));
            }
            Value::Object(obj)
        })
        .collect();
    let limit = match family {
        SweepFamily::ReciprocalN => json!(reciprocal_n_limit::<f64>()),
        SweepFamily::Repeat => json!(repeat_value_limit::<f64>()),
        SweepFamily::RandomParams => json!(2.0 / 3.0),
        SweepFamily::Multiplayer => json!(poisson_mod_limit::<f64>(m)?),
    };
    let family_name = family.to_possible_value().map(|v| v.get_name().to_string());
    let json = json!({ "family": family_name, "limit": limit, "rows": json_rows });
    let table_rows = rows
        .into_iter()
        .map(|(n, values)| {
            std::iter::once(n.to_string())
                .chain(values.into_iter().map(num))
                .collect()
        })
        .collect();
    Ok(Report {
        json,
        header,
        rows: table_rows,
    })
}

fn dispatch(cli: &Cli) -> CliResult<(Report, Format)> {
    Ok(match &cli.command {
        Command::Value { source, common } => (cmd_value(source)?, common.format),
        Command::Odds { source, common } => (cmd_odds(source)?, common.format),
        Command::Oracle { source, common } => (cmd_oracle(source)?, common.format),
        Command::Variant { which } => match which {
            VariantCommand::Repeat { n, source, common } => {
                (cmd_repeat(*n, source)?, common.format)
            }
            VariantCommand::Multiplayer {
                m,
                limit,
                n,
                source,
                common,
            } => (cmd_multiplayer(*m, *limit, *n, source)?, common.format),
            VariantCommand::RandomParams { n, common } => (cmd_random_params(*n)?, common.format),
        },
        Command::Markov { which } => match which {
            MarkovCommand::Check { source, common } => (cmd_markov_check(source)?, common.format),
            MarkovCommand::Search {
                n,
                grid_step,
                random_trials,
                seed,
                common,
            } => (
                cmd_markov_search(*n, *grid_step, *random_trials, *seed)?,
                common.format,
            ),
        },
        Command::Simulate {
            source,
            n,
            m,
            samples,
            seed,
            shards,
            common,
        } => (
            cmd_simulate(source, *n, *m, *samples, *seed, *shards)?,
            common.format,
        ),
        Command::Sweep {
            family,
            n,
            from,
            m,
            format,
        } => (cmd_sweep(*family, *from, *n, *m)?, *format),
    })
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(&cli) {
        Ok((report, format)) => match report.write(format, out) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                EXIT_INVALID
            }
        },
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Invalid(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INVALID
        }
    }
}
