//! Two-player, one-step domination game on cycle graphs.
//!
//! Alice and Bob are dropped on uniformly random vertices of the cycle `C_n`
//! and must each step to a neighboring vertex without communicating. Their
//! score is the number of vertices dominated by their end positions (a vertex
//! is dominated if a player stands on it or next to it). The crate provides:
//!
//! - [`graph`]: the cycle, the move convention, and the exact table of
//!   dominated counts for every (site, move) combination of both players;
//! - [`strategy`]: angle-based correlated strategies (each player reads one
//!   bit whose joint distribution is set by a per-site angle pair),
//!   deterministic strategies, and the uniform-coin baseline;
//! - [`analytics`]: exact expected scores for all strategy kinds, the cosine
//!   closed form for the linear-increment angle family, coefficient
//!   extraction, and the advantage ratio `(Q - C) / (C - R)`;
//! - [`optimizer`]: 1-D sweep of the angle increment, multi-start
//!   quasi-Newton optimization over all `2n` angles, and exhaustive / local
//!   search over deterministic strategies;
//! - [`montecarlo`]: seeded, shardable game simulation with optional noise
//!   models, reproducible bit-for-bit at any worker count.
//!
//! Everything deterministic is exact (integer or rational arithmetic where
//! the quantity is rational); everything stochastic is seeded and
//! reproducible.

pub mod analytics;
pub mod graph;
pub mod montecarlo;
pub mod optimizer;
pub mod strategy;

use thiserror::Error;

/// Unified error type for all fallible operations in the crate.
#[derive(Debug, Error)]
#[non_exhaustive]
pub enum Error {
    /// Cycle length below the minimum of 3.
    #[error("cycle length {0} is too small: the game needs n >= 3")]
    CycleTooSmall(u32),

    /// A 1-based site label outside `1..=n`.
    #[error("site {site} is not a vertex of C_{n} (valid labels: 1..={n})")]
    InvalidSite { n: u32, site: u32 },

    /// Inputs built for different cycle lengths were combined.
    #[error("dimension mismatch: table is for n={table_n} but strategy is for n={strategy_n}")]
    DimensionMismatch { table_n: u32, strategy_n: u32 },

    /// Angle lists of unequal or zero length.
    #[error("angle lists must have equal nonzero length (got {alice} and {bob})")]
    BadStrategyShape { alice: usize, bob: usize },

    /// The fixed increment schedule covers only `5..=13`.
    #[error("no known optimal increment for n={0} (schedule covers 5..=13); use optimize_theta")]
    OutOfSchedule(u32),

    /// The cosine closed form is defined for `n >= 5`.
    #[error("closed form requires n >= 5 (got n={0})")]
    BelowClosedFormRange(u32),

    /// Sweep grid below the Nyquist-safe minimum of `4n` points.
    #[error("grid of {grid_size} points is too coarse for n={n}: need at least {min}")]
    GridTooCoarse { n: u32, grid_size: usize, min: usize },

    /// Scan bounds out of order or below the closed form's range.
    #[error("invalid scan range {n_min}..={n_max}: need 5 <= n_min <= n_max")]
    BadScanRange { n_min: u32, n_max: u32 },

    /// Exhaustive deterministic search is capped at `2^12` maps.
    #[error("exhaustive search is limited to n <= {max} (got n={n}); use local search")]
    ExhaustiveTooLarge { n: u32, max: u32 },

    /// `restarts` must be at least 1.
    #[error("optimizer needs at least one restart")]
    NoRestarts,

    /// A fitted series coefficient was not a half-integer: the sampled values
    /// do not obey the assumed `(offset + cosine polynomial) / n^2` shape.
    #[error(
        "series normalization mismatch: coefficient for harmonic {harmonic} is {raw}, \
         off a half-integer by {residual:e} (tolerance {tolerance:e})"
    )]
    SeriesNormalizationMismatch {
        harmonic: usize,
        raw: f64,
        residual: f64,
        tolerance: f64,
    },

    /// The rounded series fails to reproduce the exact sampled values.
    #[error(
        "series round-trip mismatch: reconstruction differs from the exact value \
         at sample {sample} by {residual:e} (tolerance {tolerance:e})"
    )]
    SeriesRoundTripMismatch {
        sample: usize,
        residual: f64,
        tolerance: f64,
    },

    /// Advantage ratio undefined when the deterministic optimum does not beat
    /// the coin-flip baseline.
    #[error("degenerate baseline: classical value {c} does not exceed random value {r}")]
    DegenerateBaseline { c: f64, r: f64 },

    /// Noise strength outside `[0, 1]`.
    #[error("noise strength {0} is outside [0, 1]")]
    InvalidNoiseStrength(f64),

    /// No noise strength in `[0, 1]` reaches the requested advantage.
    #[error("no noise strength in [0, 1] yields target advantage {target} (solved p = {p})")]
    CalibrationOutOfRange { target: f64, p: f64 },

    /// Simulation needs at least one game and a positive checkpoint stride.
    #[error("invalid simulation size: {0}")]
    InvalidSimulationSize(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
