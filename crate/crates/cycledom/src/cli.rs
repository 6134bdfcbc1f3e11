//! Command-line front end. Parsing and validation belong to clap (usage
//! problems exit 2); everything after parsing returns the library's error
//! type (runtime failures print to stderr and exit 1). With `--format json`
//! standard output carries exactly one JSON document.

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::json;

use cycledom::analytics::{
    exact_expectation_classical, exact_expectation_quantum, exact_expectation_random,
    extract_series,
};
use cycledom::graph::{CycleGame, DominationTable, Move};
use cycledom::montecarlo::{
    achieved_advantage, calibrate_werner, run_simulation, write_trace_csv, AdvantageOutcome,
    CheckpointSchedule, NoiseKind, NoiseModel, PlayStrategy,
};
use cycledom::optimizer::{
    classical_optimum, default_grid_size, optimize_full, optimize_theta, theta_step_scan,
    write_scan_csv, SearchMode, EXHAUSTIVE_MAX_N,
};
use cycledom::strategy::{
    ansatz_strategy, schedule_theta, AngleStrategy, AnsatzParams, ClassicalStrategy,
};
use cycledom::Result;

#[derive(Parser)]
#[command(
    name = "cycledom",
    version,
    about = "Two-player one-step domination on cycle graphs: exact analytics, optimization, and seeded simulation"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    format: Format,

    /// Write the output to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    /// Decimal places for floats in pretty/csv output
    /// (default 6; the exact command defaults to 9).
    #[arg(long, global = true, value_name = "DIGITS")]
    precision: Option<usize>,

    /// Worker threads for parallel sections (0 = one per core).
    #[arg(
        long,
        global = true,
        env = "CYCLEDOM_WORKERS",
        default_value_t = 0,
        value_name = "COUNT"
    )]
    workers: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Pretty,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OptimizeMode {
    /// Sweep the linear-increment angle.
    Theta,
    /// Quasi-Newton search over all 2n angles.
    Full,
    /// Best deterministic strategy.
    Classical,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SearchFlag {
    Exhaustive,
    Local,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyFlag {
    /// Correlated angle strategy (the scheduled increment unless --theta).
    Quantum,
    /// Best deterministic strategy for this n.
    Classical,
    /// Independent fair coins.
    Random,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NoiseFlag {
    Ideal,
    Werner,
    Readout,
}

fn parse_unit_interval(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is outside [0, 1]"))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the exact dominated-count table for C_n.
    Table {
        /// Cycle length (at least 3).
        #[arg(long, value_parser = clap::value_parser!(u32).range(3..))]
        n: u32,
    },

    /// Exact expected score of a chosen strategy, and/or the cosine-series
    /// coefficients of the linear-increment family.
    Exact {
        /// Cycle length (at least 3).
        #[arg(long, value_parser = clap::value_parser!(u32).range(3..))]
        n: u32,

        /// Evaluate the linear-increment strategy at this angle.
        #[arg(long, group = "source", value_name = "THETA")]
        ansatz_theta: Option<f64>,

        /// Evaluate the linear-increment strategy at the scheduled optimum
        /// (n = 5..13).
        #[arg(long, group = "source")]
        schedule: bool,

        /// Evaluate a strategy loaded from a JSON file.
        #[arg(long, group = "source", value_name = "PATH")]
        strategy_file: Option<PathBuf>,

        /// Also extract the exact series coefficients (csv output emits
        /// only these, as harmonic,coefficient rows with 0 = offset).
        #[arg(long)]
        series: bool,
    },

    /// Optimize a strategy family on C_n.
    Optimize {
        /// Cycle length (at least 3).
        #[arg(long, value_parser = clap::value_parser!(u32).range(3..))]
        n: u32,

        #[arg(long, value_enum)]
        mode: OptimizeMode,

        /// Sweep grid size for --mode theta (default max(512, 8n)).
        #[arg(long, value_name = "POINTS")]
        grid: Option<usize>,

        /// Independent starts for --mode full.
        #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u64).range(1..))]
        restarts: u64,

        /// Seed for --mode full.
        #[arg(long, default_value_t = 0)]
        seed: u64,

        /// Search kind for --mode classical (default: exhaustive up to
        /// n = 12, local beyond).
        #[arg(long, value_enum)]
        search: Option<SearchFlag>,
    },

    /// Scan the optimal increment across cycle lengths n_min..=n_max.
    Scan {
        #[arg(value_parser = clap::value_parser!(u32).range(5..))]
        n_min: u32,
        #[arg(value_parser = clap::value_parser!(u32).range(5..))]
        n_max: u32,
    },

    /// Seeded Monte-Carlo simulation of repeated games.
    Simulate {
        /// Cycle length (at least 3).
        #[arg(long, value_parser = clap::value_parser!(u32).range(3..))]
        n: u32,

        /// What the players do.
        #[arg(long, value_enum, default_value_t = StrategyFlag::Quantum)]
        strategy: StrategyFlag,

        /// Load the strategy from a JSON file instead (angle lists, or a
        /// tagged {"kind": ...} document).
        #[arg(long, value_name = "PATH", conflicts_with = "strategy")]
        strategy_file: Option<PathBuf>,

        /// Increment for the quantum strategy (default: the schedule).
        #[arg(long, value_name = "THETA")]
        theta: Option<f64>,

        #[arg(long, value_enum, default_value_t = NoiseFlag::Ideal)]
        noise: NoiseFlag,

        /// Noise strength in [0, 1] (used by werner/readout).
        #[arg(long, default_value_t = 0.0, value_parser = parse_unit_interval)]
        p: f64,

        #[arg(long, default_value_t = 0)]
        seed: u64,

        #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
        games: u64,

        /// Record running statistics every K games (default: powers of
        /// two).
        #[arg(long, value_name = "K", value_parser = clap::value_parser!(u64).range(1..))]
        checkpoint_every: Option<u64>,
    },

    /// Simulate the scheduled strategy under noise and report its
    /// advantage over the exact deterministic and coin-flip references.
    Advantage {
        /// Cycle length (5..=13: the scheduled-increment range).
        #[arg(long, value_parser = clap::value_parser!(u32).range(5..=13))]
        n: u32,

        #[arg(long, value_enum, default_value_t = NoiseFlag::Ideal)]
        noise: NoiseFlag,

        /// Noise strength in [0, 1].
        #[arg(long, default_value_t = 0.0, value_parser = parse_unit_interval)]
        p: f64,

        /// Solve for the mixing strength whose expected advantage is this
        /// ratio (e.g. 0.14), then simulate with it.
        #[arg(long, value_name = "TARGET", conflicts_with_all = ["noise", "p"])]
        calibrate: Option<f64>,

        #[arg(long, default_value_t = 0)]
        seed: u64,

        #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
        games: u64,
    },
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    if let Command::Exact {
        ansatz_theta,
        schedule,
        strategy_file,
        series,
        ..
    } = &cli.command
    {
        let has_source = ansatz_theta.is_some() || *schedule || strategy_file.is_some();
        if !has_source && !series {
            Cli::command()
                .error(
                    ErrorKind::MissingRequiredArgument,
                    "exact needs a strategy source (--ansatz-theta, --schedule, \
                     --strategy-file) or --series",
                )
                .exit();
        }
    }
    if cli.workers > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.workers)
            .build_global();
    }
    match execute(&cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            1
        }
    }
}

fn emit(cli: &Cli, text: String) -> Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn precision(cli: &Cli) -> usize {
    cli.precision.unwrap_or(match cli.command {
        Command::Exact { .. } => 9,
        _ => 6,
    })
}

fn noise_model(flag: NoiseFlag, p: f64) -> Result<NoiseModel> {
    match flag {
        NoiseFlag::Ideal => Ok(NoiseModel::ideal()),
        NoiseFlag::Werner => NoiseModel::werner(p),
        NoiseFlag::Readout => NoiseModel::readout(p),
    }
}

fn kind_name(kind: NoiseKind) -> &'static str {
    match kind {
        NoiseKind::Ideal => "ideal",
        NoiseKind::Werner => "werner",
        NoiseKind::Readout => "readout",
    }
}

fn auto_search_mode(n: u32, flag: Option<SearchFlag>) -> SearchMode {
    match flag {
        Some(SearchFlag::Exhaustive) => SearchMode::Exhaustive,
        Some(SearchFlag::Local) => SearchMode::LocalSearch,
        None if n <= EXHAUSTIVE_MAX_N => SearchMode::Exhaustive,
        None => SearchMode::LocalSearch,
    }
}

/// A strategy file is either bare angle lists `{"alice": [...], "bob":
/// [...]}` or a tagged document `{"kind": "quantum" | "classical" |
/// "random", ...}`.
fn load_strategy_file(path: &PathBuf) -> Result<PlayStrategy> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    match value.get("kind").and_then(|k| k.as_str()) {
        Some("classical") => Ok(PlayStrategy::Classical(ClassicalStrategy::from_json(&text)?)),
        Some("random") => Ok(PlayStrategy::Random),
        _ => Ok(PlayStrategy::Quantum(AngleStrategy::from_json(&text)?)),
    }
}

fn execute(cli: &Cli) -> Result<()> {
    let prec = precision(cli);
    match &cli.command {
        Command::Table { n } => cmd_table(cli, *n, prec),
        Command::Exact {
            n,
            ansatz_theta,
            schedule,
            strategy_file,
            series,
        } => cmd_exact(cli, *n, *ansatz_theta, *schedule, strategy_file, *series, prec),
        Command::Optimize {
            n,
            mode,
            grid,
            restarts,
            seed,
            search,
        } => match mode {
            OptimizeMode::Theta => cmd_optimize_theta(cli, *n, *grid, prec),
            OptimizeMode::Full => cmd_optimize_full(cli, *n, *restarts as usize, *seed, prec),
            OptimizeMode::Classical => cmd_optimize_classical(cli, *n, *search, prec),
        },
        Command::Scan { n_min, n_max } => cmd_scan(cli, *n_min, *n_max, prec),
        Command::Simulate {
            n,
            strategy,
            strategy_file,
            theta,
            noise,
            p,
            seed,
            games,
            checkpoint_every,
        } => cmd_simulate(
            cli,
            *n,
            *strategy,
            strategy_file.as_ref(),
            *theta,
            noise_model(*noise, *p)?,
            *seed,
            *games,
            *checkpoint_every,
            prec,
        ),
        Command::Advantage {
            n,
            noise,
            p,
            calibrate,
            seed,
            games,
        } => cmd_advantage(cli, *n, *noise, *p, *calibrate, *seed, *games, prec),
    }
}

fn cmd_table(cli: &Cli, n: u32, prec: usize) -> Result<()> {
    let table = DominationTable::build(CycleGame::new(n)?);
    let text = match cli.format {
        Format::Csv => {
            let mut out = Vec::new();
            table.write_csv(&mut out)?;
            String::from_utf8(out).expect("csv is ascii")
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = table
                .rows()
                .map(|(i, a, j, b, count)| {
                    json!({
                        "alice_site": i,
                        "alice_bit": a,
                        "bob_site": j,
                        "bob_bit": b,
                        "count": count,
                    })
                })
                .collect();
            let mean = table.mean();
            let doc = json!({
                "n": n,
                "mean": *mean.numer() as f64 / *mean.denom() as f64,
                "rows": rows,
            });
            format!("{doc}\n")
        }
        Format::Pretty => {
            let mean = table.mean();
            let mut out = format!(
                "dominated-count table for C_{n} (mean {:.prec$})\n",
                *mean.numer() as f64 / *mean.denom() as f64
            );
            out.push_str("      ");
            for j in 1..=n {
                for b in 0..2 {
                    out.push_str(&format!(" B{j},{b}"));
                }
            }
            out.push('\n');
            for i in 1..=n {
                for a in 0..2 {
                    out.push_str(&format!("A{i},{a} "));
                    if i < 10 {
                        out.push(' ');
                    }
                    for j in 1..=n {
                        for b in 0..2 {
                            let pad = if j < 10 { 4 } else { 5 };
                            out.push_str(&format!(
                                "{:>pad$}",
                                table.count(i, Move::from_bit(a), j, Move::from_bit(b))?
                            ));
                        }
                    }
                    out.push('\n');
                }
            }
            out
        }
    };
    emit(cli, text)
}

fn cmd_exact(
    cli: &Cli,
    n: u32,
    ansatz_theta: Option<f64>,
    schedule: bool,
    strategy_file: &Option<PathBuf>,
    series: bool,
    prec: usize,
) -> Result<()> {
    let table = DominationTable::build(CycleGame::new(n)?);

    // (kind, theta used, float value, exact rational if the value is one)
    let mut evaluated: Option<(&str, Option<f64>, f64, Option<String>)> = None;
    if let Some(path) = strategy_file {
        match load_strategy_file(path)? {
            PlayStrategy::Quantum(s) => {
                let d = exact_expectation_quantum(&table, &s)?;
                evaluated = Some(("quantum", None, d, None));
            }
            PlayStrategy::Classical(s) => {
                let v = exact_expectation_classical(&table, &s)?;
                let d = *v.numer() as f64 / *v.denom() as f64;
                evaluated = Some(("classical", None, d, Some(format!("{v}"))));
            }
            PlayStrategy::Random => {
                let v = exact_expectation_random(n)?;
                let d = *v.numer() as f64 / *v.denom() as f64;
                evaluated = Some(("random", None, d, Some(format!("{v}"))));
            }
        }
    } else if let Some(theta) = ansatz_theta.or(if schedule {
        Some(schedule_theta(n)?)
    } else {
        None
    }) {
        let strategy = ansatz_strategy(&AnsatzParams::new(n, theta)?);
        let d = exact_expectation_quantum(&table, &strategy)?;
        evaluated = Some(("quantum", Some(theta), d, None));
    }

    let coeffs = if series { Some(extract_series(n)?) } else { None };

    let text = match cli.format {
        Format::Csv => {
            let mut out = String::new();
            if let Some(s) = &coeffs {
                out.push_str("harmonic,coefficient\n");
                out.push_str(&format!("0,{}\n", s.lambda));
                for (idx, mu) in s.mu.iter().enumerate() {
                    out.push_str(&format!("{},{}\n", idx + 1, mu));
                }
            } else if let Some((kind, theta, d, _)) = &evaluated {
                out.push_str("n,kind,theta,d\n");
                let theta_col =
                    theta.map_or(String::new(), |t| format!("{t:.prec$}"));
                out.push_str(&format!("{n},{kind},{theta_col},{d:.prec$}\n"));
            }
            out
        }
        Format::Json => {
            let mut doc = serde_json::Map::new();
            doc.insert("n".into(), json!(n));
            if let Some((kind, theta, d, exact)) = &evaluated {
                doc.insert("kind".into(), json!(kind));
                if let Some(t) = theta {
                    doc.insert("theta".into(), json!(t));
                }
                doc.insert("d".into(), json!(d));
                if let Some(e) = exact {
                    doc.insert("d_exact".into(), json!(e));
                }
            }
            if let Some(s) = &coeffs {
                doc.insert("lambda".into(), json!(format!("{}", s.lambda)));
                doc.insert(
                    "mu".into(),
                    json!(s.mu.iter().map(|m| format!("{m}")).collect::<Vec<_>>()),
                );
            }
            format!("{}\n", serde_json::Value::Object(doc))
        }
        Format::Pretty => {
            let mut out = format!("n        {n}\n");
            if let Some((kind, theta, d, exact)) = &evaluated {
                out.push_str(&format!("kind     {kind}\n"));
                if let Some(t) = theta {
                    out.push_str(&format!("theta    {t:.prec$}\n"));
                }
                out.push_str(&format!("d        {d:.prec$}\n"));
                if let Some(e) = exact {
                    out.push_str(&format!("exact    {e}\n"));
                }
            }
            if let Some(s) = &coeffs {
                out.push_str(&format!("lambda   {}\n", s.lambda));
                let mu: Vec<String> = s.mu.iter().map(|m| format!("{m}")).collect();
                out.push_str(&format!("mu       {}\n", mu.join(", ")));
            }
            out
        }
    };
    emit(cli, text)
}

fn cmd_optimize_theta(cli: &Cli, n: u32, grid: Option<usize>, prec: usize) -> Result<()> {
    let sweep = optimize_theta(n, grid.unwrap_or_else(|| default_grid_size(n)))?;
    let text = match cli.format {
        Format::Csv => {
            // Plot-ready sweep curve.
            let mut out = String::from("theta,value\n");
            for (t, v) in sweep.theta_grid.iter().zip(&sweep.values) {
                out.push_str(&format!("{t:.prec$},{v:.prec$}\n"));
            }
            out
        }
        Format::Json => {
            let doc = json!({
                "n": sweep.n,
                "theta_star": sweep.theta_star,
                "n_theta_star": sweep.n_theta_star,
                "d_star": sweep.d_star,
                "ties": sweep.ties,
            });
            format!("{doc}\n")
        }
        Format::Pretty => {
            let mut out = String::new();
            out.push_str(&format!("n             {}\n", sweep.n));
            out.push_str(&format!("theta_star    {:.prec$}\n", sweep.theta_star));
            out.push_str(&format!("n_theta_star  {:.prec$}\n", sweep.n_theta_star));
            out.push_str(&format!("d_star        {:.prec$}\n", sweep.d_star));
            if sweep.ties.len() > 1 {
                let ties: Vec<String> =
                    sweep.ties.iter().map(|t| format!("{t:.prec$}")).collect();
                out.push_str(&format!("ties          {}\n", ties.join(", ")));
            }
            out
        }
    };
    emit(cli, text)
}

fn cmd_optimize_full(cli: &Cli, n: u32, restarts: usize, seed: u64, prec: usize) -> Result<()> {
    let found = optimize_full(n, restarts, seed)?;
    let gauge_fixed = found.strategy.gauge_fixed();
    let text = match cli.format {
        Format::Csv => {
            let mut out = String::from("site,alice_angle,bob_angle\n");
            for site in 0..n as usize {
                out.push_str(&format!(
                    "{},{:.prec$},{:.prec$}\n",
                    site + 1,
                    gauge_fixed.alice_angles()[site],
                    gauge_fixed.bob_angles()[site],
                ));
            }
            out
        }
        Format::Json => {
            let doc = json!({
                "n": n,
                "restarts": found.restarts,
                "converged": found.converged,
                "value": found.value,
                "seed": seed,
                "strategy": gauge_fixed,
            });
            format!("{doc}\n")
        }
        Format::Pretty => {
            let mut out = String::new();
            out.push_str(&format!("n          {n}\n"));
            out.push_str(&format!("restarts   {}\n", found.restarts));
            out.push_str(&format!("converged  {}\n", found.converged));
            out.push_str(&format!("value      {:.prec$}\n", found.value));
            out.push_str("site       alice       bob\n");
            for site in 0..n as usize {
                out.push_str(&format!(
                    "{:<10} {:<11.prec$} {:.prec$}\n",
                    site + 1,
                    gauge_fixed.alice_angles()[site],
                    gauge_fixed.bob_angles()[site],
                ));
            }
            out
        }
    };
    emit(cli, text)
}

fn cmd_optimize_classical(
    cli: &Cli,
    n: u32,
    search: Option<SearchFlag>,
    prec: usize,
) -> Result<()> {
    let found = classical_optimum(n, auto_search_mode(n, search))?;
    let value = *found.value.numer() as f64 / *found.value.denom() as f64;
    let mode_name = match found.mode {
        SearchMode::Exhaustive => "exhaustive",
        SearchMode::LocalSearch => "local",
    };
    let bits = |map: &[Move]| -> Vec<u8> { map.iter().map(|m| m.bit()).collect() };
    let text = match cli.format {
        Format::Csv => {
            let mut out = String::from("site,alice_bit,bob_bit\n");
            for site in 0..n as usize {
                out.push_str(&format!(
                    "{},{},{}\n",
                    site + 1,
                    found.strategy.alice_map()[site].bit(),
                    found.strategy.bob_map()[site].bit(),
                ));
            }
            out
        }
        Format::Json => {
            let doc = json!({
                "n": n,
                "search": mode_name,
                "value": value,
                "value_exact": format!("{}", found.value),
                "strategy": found.strategy,
            });
            format!("{doc}\n")
        }
        Format::Pretty => {
            let mut out = String::new();
            out.push_str(&format!("n       {n}\n"));
            out.push_str(&format!("search  {mode_name}\n"));
            out.push_str(&format!(
                "value   {:.prec$} (exactly {})\n",
                value, found.value
            ));
            out.push_str(&format!("alice   {:?}\n", bits(found.strategy.alice_map())));
            out.push_str(&format!("bob     {:?}\n", bits(found.strategy.bob_map())));
            out
        }
    };
    emit(cli, text)
}

fn cmd_scan(cli: &Cli, n_min: u32, n_max: u32, prec: usize) -> Result<()> {
    let rows = theta_step_scan(n_min, n_max)?;
    let text = match cli.format {
        Format::Csv => {
            let mut out = Vec::new();
            write_scan_csv(&mut out, &rows, prec)?;
            String::from_utf8(out).expect("csv is ascii")
        }
        Format::Json => {
            let doc = json!({
                "n_min": n_min,
                "n_max": n_max,
                "rows": rows,
            });
            format!("{doc}\n")
        }
        Format::Pretty => {
            let mut out = String::from("n     theta_star   n_theta_star   d_star\n");
            for row in &rows {
                out.push_str(&format!(
                    "{:<5} {:<12.prec$} {:<14.prec$} {:.prec$}\n",
                    row.n, row.theta_star, row.n_theta_star, row.d_star
                ));
            }
            out
        }
    };
    emit(cli, text)
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    cli: &Cli,
    n: u32,
    strategy: StrategyFlag,
    strategy_file: Option<&PathBuf>,
    theta: Option<f64>,
    noise: NoiseModel,
    seed: u64,
    games: u64,
    checkpoint_every: Option<u64>,
    prec: usize,
) -> Result<()> {
    let play = if let Some(path) = strategy_file {
        load_strategy_file(path)?
    } else {
        match strategy {
            StrategyFlag::Quantum => {
                let t = match theta {
                    Some(t) => t,
                    None => schedule_theta(n)?,
                };
                PlayStrategy::Quantum(ansatz_strategy(&AnsatzParams::new(n, t)?))
            }
            StrategyFlag::Classical => {
                PlayStrategy::Classical(classical_optimum(n, auto_search_mode(n, None))?.strategy)
            }
            StrategyFlag::Random => PlayStrategy::Random,
        }
    };
    let schedule = match checkpoint_every {
        Some(k) => CheckpointSchedule::Every(k),
        None => CheckpointSchedule::PowersOfTwo,
    };
    let run = run_simulation(n, &play, noise, seed, games, schedule)?;

    let text = match cli.format {
        Format::Csv => {
            let mut out = Vec::new();
            write_trace_csv(&mut out, &run, prec)?;
            String::from_utf8(out).expect("csv is ascii")
        }
        Format::Json => format!("{}\n", serde_json::to_string(&run)?),
        Format::Pretty => {
            let strategy_name = match &run.strategy {
                PlayStrategy::Quantum(_) => "quantum",
                PlayStrategy::Classical(_) => "classical",
                PlayStrategy::Random => "random",
            };
            let mut out = String::new();
            out.push_str(&format!("n           {n}\n"));
            out.push_str(&format!("strategy    {strategy_name}\n"));
            out.push_str(&format!(
                "noise       {} (p = {:.prec$})\n",
                kind_name(run.noise.kind()),
                run.noise.p()
            ));
            out.push_str(&format!("seed        {seed}\n"));
            out.push_str(&format!("games       {games}\n"));
            out.push_str(&format!("final_mean  {:.prec$}\n", run.final_mean));
            out.push_str(&format!("std_error   {:.prec$}\n", run.std_error));
            out
        }
    };
    emit(cli, text)
}

#[allow(clippy::too_many_arguments)]
fn cmd_advantage(
    cli: &Cli,
    n: u32,
    noise: NoiseFlag,
    p: f64,
    calibrate: Option<f64>,
    seed: u64,
    games: u64,
    prec: usize,
) -> Result<()> {
    let model = match calibrate {
        Some(target) => NoiseModel::werner(calibrate_werner(n, target)?)?,
        None => noise_model(noise, p)?,
    };
    let out: AdvantageOutcome = achieved_advantage(n, model, seed, games)?;

    let text = match cli.format {
        Format::Csv => {
            let mut s =
                String::from("n,noise_kind,p,q,c,r,a,a_percent,seed,num_games\n");
            s.push_str(&format!(
                "{},{},{:.prec$},{:.prec$},{:.prec$},{:.prec$},{:.prec$},{},{},{}\n",
                out.n,
                kind_name(out.noise_kind),
                out.p,
                out.q,
                out.c,
                out.r,
                out.a,
                out.a_percent,
                out.seed,
                out.num_games,
            ));
            s
        }
        Format::Json => format!("{}\n", serde_json::to_string(&out)?),
        Format::Pretty => {
            let mut s = String::new();
            s.push_str(&format!("n          {}\n", out.n));
            s.push_str(&format!("noise      {}\n", kind_name(out.noise_kind)));
            s.push_str(&format!("p          {:.prec$}\n", out.p));
            s.push_str(&format!("q          {:.prec$}\n", out.q));
            s.push_str(&format!("c          {:.prec$}\n", out.c));
            s.push_str(&format!("r          {:.prec$}\n", out.r));
            s.push_str(&format!("a          {:.prec$}\n", out.a));
            s.push_str(&format!("a_percent  {}\n", out.a_percent));
            s.push_str(&format!("seed       {}\n", out.seed));
            s.push_str(&format!("games      {}\n", out.num_games));
            s
        }
    };
    emit(cli, text)
}
