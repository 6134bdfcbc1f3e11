//! Seeded Monte-Carlo simulation of the game, with optional noise.
//!
//! Reproducibility contract: a run is fully determined by `(seed,
//! num_games)` and the inputs — never by worker count or scheduling. Games
//! are split into fixed-size shards; shard `s` draws from stream `s` of a
//! counter-based generator seeded with the run seed, and shard statistics
//! are integer sums combined in shard order, so every reduction is exact
//! and order-independent in effect.
//!
//! Per-game draw order (one generator, fixed): Alice's site, Bob's site,
//! then — for strategies with random bits — one uniform draw placed against
//! the cumulative bit distribution, then two readout-flip draws if (and
//! only if) the noise model is readout.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analytics::{advantage, exact_expectation_quantum, exact_expectation_random};
use crate::graph::{CycleGame, DominationTable, Move};
use crate::optimizer::{classical_optimum, ClassicalSearchResult, SearchMode, EXHAUSTIVE_MAX_N};
use crate::strategy::{
    ansatz_strategy, schedule_theta, AngleStrategy, AnsatzParams, ClassicalStrategy,
    OutcomeDistribution,
};
use crate::{Error, Result};

/// Which noise process disturbs the shared correlation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseKind {
    /// No disturbance.
    Ideal,
    /// With probability `p` the players' bit pair is replaced by two
    /// independent fair coins (the joint distribution is mixed toward
    /// uniform). Acts only on strategies with correlated random bits.
    Werner,
    /// Each player's bit is flipped independently with probability `p`
    /// after it is produced, whatever the strategy.
    Readout,
}

/// A noise kind plus its strength `p ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseModel {
    kind: NoiseKind,
    p: f64,
}

impl NoiseModel {
    pub fn ideal() -> Self {
        NoiseModel {
            kind: NoiseKind::Ideal,
            p: 0.0,
        }
    }

    pub fn werner(p: f64) -> Result<Self> {
        Self::checked(NoiseKind::Werner, p)
    }

    pub fn readout(p: f64) -> Result<Self> {
        Self::checked(NoiseKind::Readout, p)
    }

    fn checked(kind: NoiseKind, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidNoiseStrength(p));
        }
        Ok(NoiseModel { kind, p })
    }

    pub fn kind(self) -> NoiseKind {
        self.kind
    }

    pub fn p(self) -> f64 {
        self.p
    }
}

/// What the simulated players actually do.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PlayStrategy {
    /// Correlated bits from per-site angles.
    Quantum(AngleStrategy),
    /// Fixed move per site.
    Classical(ClassicalStrategy),
    /// Both players flip independent fair coins.
    Random,
}

impl PlayStrategy {
    fn n(&self) -> Option<u32> {
        match self {
            PlayStrategy::Quantum(s) => Some(s.n()),
            PlayStrategy::Classical(s) => Some(s.n()),
            PlayStrategy::Random => None,
        }
    }
}

/// Where running statistics are recorded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CheckpointSchedule {
    /// After games 1, 2, 4, 8, … and once more at the end.
    PowersOfTwo,
    /// After every `k` games and once more at the end.
    Every(u64),
}

fn checkpoint_list(schedule: CheckpointSchedule, num_games: u64) -> Result<Vec<u64>> {
    let mut points = match schedule {
        CheckpointSchedule::PowersOfTwo => {
            let mut p = Vec::new();
            let mut c = 1u64;
            while c <= num_games {
                p.push(c);
                match c.checked_mul(2) {
                    Some(next) => c = next,
                    None => break,
                }
            }
            p
        }
        CheckpointSchedule::Every(k) => {
            if k == 0 {
                return Err(Error::InvalidSimulationSize(
                    "checkpoint stride must be positive",
                ));
            }
            (1..=num_games / k).map(|m| m * k).collect()
        }
    };
    if points.last() != Some(&num_games) {
        points.push(num_games);
    }
    Ok(points)
}

/// Complete record of one simulation: inputs, checkpointed running
/// statistics, and final statistics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationRun {
    pub n: u32,
    pub strategy: PlayStrategy,
    pub noise: NoiseModel,
    pub seed: u64,
    pub num_games: u64,
    /// Game counts at which the running statistics were recorded;
    /// always ends with `num_games`.
    pub checkpoints: Vec<u64>,
    pub running_mean: Vec<f64>,
    /// Standard error of the mean at each checkpoint (0 before two games).
    pub running_std_error: Vec<f64>,
    pub final_mean: f64,
    pub std_error: f64,
}

/// Cumulative bit-pair thresholds: a uniform draw below `t[0]` yields bits
/// (0,0), below `t[1]` bits (0,1), below `t[2]` bits (1,0), else (1,1).
fn cumulative_thresholds(dist: OutcomeDistribution, noise: NoiseModel) -> [f64; 3] {
    let mix = |q: f64| match noise.kind {
        NoiseKind::Werner => (1.0 - noise.p) * q + noise.p * 0.25,
        _ => q,
    };
    let p00 = mix(dist.p00);
    let p01 = mix(dist.p01);
    let p10 = mix(dist.p10);
    [p00, p00 + p01, p00 + p01 + p10]
}

/// Two independent fair coins, written as the exact constants so that a
/// fully mixed correlated strategy produces bit-identical draws.
const UNIFORM_THRESHOLDS: [f64; 3] = [0.25, 0.5, 0.75];

#[inline]
fn bits_from_draw(t: &[f64; 3], u: f64) -> (u8, u8) {
    if u < t[0] {
        (0, 0)
    } else if u < t[1] {
        (0, 1)
    } else if u < t[2] {
        (1, 0)
    } else {
        (1, 1)
    }
}

/// Per-strategy sampling state with everything angle-dependent precomputed.
enum Sampler<'a> {
    /// Thresholds for every (Alice site, Bob site) pair, row-major.
    Joint(Vec<[f64; 3]>),
    Deterministic(&'a [Move], &'a [Move]),
    Uniform,
}

impl<'a> Sampler<'a> {
    fn build(strategy: &'a PlayStrategy, noise: NoiseModel, n: usize) -> Sampler<'a> {
        match strategy {
            PlayStrategy::Quantum(s) => {
                let alice = s.alice_angles();
                let bob = s.bob_angles();
                let mut grid = Vec::with_capacity(n * n);
                for i0 in 0..n {
                    for j0 in 0..n {
                        let dist = OutcomeDistribution::from_angle_difference(
                            bob[j0] - alice[i0],
                        );
                        grid.push(cumulative_thresholds(dist, noise));
                    }
                }
                Sampler::Joint(grid)
            }
            PlayStrategy::Classical(s) => Sampler::Deterministic(s.alice_map(), s.bob_map()),
            PlayStrategy::Random => Sampler::Uniform,
        }
    }

    #[inline]
    fn play(&self, table: &DominationTable, noise: NoiseModel, rng: &mut ChaCha8Rng) -> u32 {
        let n = table.n();
        let i0 = rng.random_range(0..n) as usize;
        let j0 = rng.random_range(0..n) as usize;
        let (mut a, mut b) = match self {
            Sampler::Joint(grid) => bits_from_draw(&grid[i0 * n as usize + j0], rng.random()),
            Sampler::Deterministic(alice, bob) => (alice[i0].bit(), bob[j0].bit()),
            Sampler::Uniform => bits_from_draw(&UNIFORM_THRESHOLDS, rng.random()),
        };
        if noise.kind == NoiseKind::Readout {
            if rng.random::<f64>() < noise.p {
                a ^= 1;
            }
            if rng.random::<f64>() < noise.p {
                b ^= 1;
            }
        }
        table.at(i0, a, j0, b)
    }
}

/// Play a single game, advancing `rng` by this game's draws.
pub fn play_once(
    table: &DominationTable,
    strategy: &PlayStrategy,
    noise: NoiseModel,
    rng: &mut ChaCha8Rng,
) -> Result<u32> {
    check_dims(table.n(), strategy)?;
    let sampler = Sampler::build(strategy, noise, table.n() as usize);
    Ok(sampler.play(table, noise, rng))
}

fn check_dims(n: u32, strategy: &PlayStrategy) -> Result<()> {
    if let Some(sn) = strategy.n() {
        if sn != n {
            return Err(Error::DimensionMismatch {
                table_n: n,
                strategy_n: sn,
            });
        }
    }
    Ok(())
}

/// Games per generator stream. Fixing this decouples the draw sequence
/// from the worker count.
const SHARD_SIZE: u64 = 1 << 16;

struct ShardStats {
    sum: u64,
    sum_sq: u64,
    /// (game count, prefix sum, prefix sum of squares) at every checkpoint
    /// inside this shard.
    marks: Vec<(u64, u64, u64)>,
}

/// Run `num_games` seeded games and record running statistics at the given
/// checkpoints. Bit-identical for fixed inputs at any worker count.
pub fn run_simulation(
    n: u32,
    strategy: &PlayStrategy,
    noise: NoiseModel,
    seed: u64,
    num_games: u64,
    schedule: CheckpointSchedule,
) -> Result<SimulationRun> {
    let game = CycleGame::new(n)?;
    check_dims(n, strategy)?;
    if num_games == 0 {
        return Err(Error::InvalidSimulationSize("need at least one game"));
    }
    let checkpoints = checkpoint_list(schedule, num_games)?;
    let table = DominationTable::build(game);

    let shard_count = num_games.div_ceil(SHARD_SIZE);
    let stats: Vec<ShardStats> = (0..shard_count)
        .into_par_iter()
        .map(|s| {
            let sampler = Sampler::build(strategy, noise, n as usize);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(s);
            let start = s * SHARD_SIZE;
            let end = (start + SHARD_SIZE).min(num_games);
            let mut cp_idx = checkpoints.partition_point(|&c| c <= start);
            let (mut sum, mut sum_sq) = (0u64, 0u64);
            let mut marks = Vec::new();
            for played in start..end {
                let score = sampler.play(&table, noise, &mut rng) as u64;
                sum += score;
                sum_sq += score * score;
                if checkpoints.get(cp_idx) == Some(&(played + 1)) {
                    marks.push((played + 1, sum, sum_sq));
                    cp_idx += 1;
                }
            }
            ShardStats { sum, sum_sq, marks }
        })
        .collect();

    // Integer prefix reduction in shard order: exact and schedule-free.
    let mut running_mean = Vec::with_capacity(checkpoints.len());
    let mut running_std_error = Vec::with_capacity(checkpoints.len());
    let (mut prefix_sum, mut prefix_sq) = (0u64, 0u64);
    for shard in &stats {
        for &(count, sum, sum_sq) in &shard.marks {
            let (mean, se) = mean_and_se(prefix_sum + sum, prefix_sq + sum_sq, count);
            running_mean.push(mean);
            running_std_error.push(se);
        }
        prefix_sum += shard.sum;
        prefix_sq += shard.sum_sq;
    }
    debug_assert_eq!(running_mean.len(), checkpoints.len());
    let (final_mean, std_error) = mean_and_se(prefix_sum, prefix_sq, num_games);

    Ok(SimulationRun {
        n,
        strategy: strategy.clone(),
        noise,
        seed,
        num_games,
        checkpoints,
        running_mean,
        running_std_error,
        final_mean,
        std_error,
    })
}

fn mean_and_se(sum: u64, sum_sq: u64, count: u64) -> (f64, f64) {
    let mean = sum as f64 / count as f64;
    if count < 2 {
        return (mean, 0.0);
    }
    // Sample variance from the exact integer sums.
    let num = sum_sq as f64 - (sum as f64) * (sum as f64) / count as f64;
    let var = (num / (count - 1) as f64).max(0.0);
    (mean, (var / count as f64).sqrt())
}

/// Write the convergence trace as CSV (`games,running_mean`).
pub fn write_trace_csv<W: std::io::Write>(
    w: &mut W,
    run: &SimulationRun,
    precision: usize,
) -> Result<()> {
    writeln!(w, "games,running_mean")?;
    for (games, mean) in run.checkpoints.iter().zip(&run.running_mean) {
        writeln!(w, "{games},{mean:.precision$}")?;
    }
    Ok(())
}

/// One advantage measurement: simulated correlated value against the exact
/// deterministic optimum and coin-flip baseline.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdvantageOutcome {
    pub n: u32,
    pub noise_kind: NoiseKind,
    pub p: f64,
    /// Simulated mean of the correlated strategy (noise applies here only).
    pub q: f64,
    /// Exact deterministic optimum.
    pub c: f64,
    /// Exact coin-flip baseline.
    pub r: f64,
    pub a: f64,
    pub a_percent: i64,
    pub seed: u64,
    pub num_games: u64,
}

fn best_classical(n: u32) -> Result<ClassicalSearchResult> {
    let mode = if n <= EXHAUSTIVE_MAX_N {
        SearchMode::Exhaustive
    } else {
        SearchMode::LocalSearch
    };
    classical_optimum(n, mode)
}

/// Simulate the scheduled angle strategy under `noise` and report its
/// advantage over the exact references. Only the correlated strategy is
/// noisy; the deterministic optimum and the coin-flip baseline are computed
/// exactly.
pub fn achieved_advantage(
    n: u32,
    noise: NoiseModel,
    seed: u64,
    num_games: u64,
) -> Result<AdvantageOutcome> {
    let theta = schedule_theta(n)?;
    let strategy = PlayStrategy::Quantum(ansatz_strategy(&AnsatzParams::new(n, theta)?));
    let run = run_simulation(
        n,
        &strategy,
        noise,
        seed,
        num_games,
        CheckpointSchedule::PowersOfTwo,
    )?;
    let c = best_classical(n)?.value;
    let r = exact_expectation_random(n)?;
    let c = *c.numer() as f64 / *c.denom() as f64;
    let r = *r.numer() as f64 / *r.denom() as f64;
    let report = advantage(run.final_mean, c, r)?;
    Ok(AdvantageOutcome {
        n,
        noise_kind: noise.kind(),
        p: noise.p(),
        q: report.q,
        c: report.c,
        r: report.r,
        a: report.a,
        a_percent: report.a_percent(),
        seed,
        num_games,
    })
}

/// Solve for the mixing strength whose *expected* advantage equals
/// `target_a` (a ratio, e.g. `0.14`): with mixing `p` the correlated value
/// interpolates linearly between its ideal value and the coin-flip
/// baseline, so the solution is closed-form. Errors if no `p ∈ [0, 1]`
/// reaches the target.
pub fn calibrate_werner(n: u32, target_a: f64) -> Result<f64> {
    let theta = schedule_theta(n)?;
    let table = DominationTable::build(CycleGame::new(n)?);
    let q0 = exact_expectation_quantum(&table, &ansatz_strategy(&AnsatzParams::new(n, theta)?))?;
    let c_rat = best_classical(n)?.value;
    let r_rat = exact_expectation_random(n)?;
    let c = *c_rat.numer() as f64 / *c_rat.denom() as f64;
    let r = *r_rat.numer() as f64 / *r_rat.denom() as f64;
    let p = (q0 - c - target_a * (c - r)) / (q0 - r);
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::CalibrationOutOfRange { target: target_a, p });
    }
    Ok(p)
}
