//! Optimizers on three levels: the 1-D sweep over the linear-increment
//! angle, a scan of that sweep across cycle lengths, a multi-start
//! quasi-Newton search over all `2n` angles, and exhaustive / local search
//! over deterministic strategies.
//!
//! Every search here is deterministic: the sweep and the exhaustive search
//! use no randomness at all, and the stochastic searches derive every draw
//! from an explicit seed with one independent stream per restart, so results
//! are identical at any worker count.

use num_rational::Rational64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::{PI, TAU};

use crate::graph::{CycleGame, DominationTable, Move};
use crate::strategy::{AngleStrategy, ClassicalStrategy};
use crate::{Error, Result};

/// `n²·D(θ)` for the linear-increment family is a short cosine polynomial;
/// precomputing its coefficients once makes each evaluation O(n).
struct SweepEvaluator {
    n_sq: f64,
    constant: f64,
    /// `cos_coef[l-1]` multiplies `cos(lθ)`, `l = 1..=n-1`.
    cos_coef: Vec<f64>,
}

impl SweepEvaluator {
    fn build(table: &DominationTable) -> Self {
        let n = table.n() as usize;
        let mut constant = 0.0;
        let mut cos_coef = vec![0.0; n - 1];
        for i0 in 0..n {
            for j0 in 0..n {
                let t00 = table.at(i0, 0, j0, 0) as f64;
                let t01 = table.at(i0, 0, j0, 1) as f64;
                let t10 = table.at(i0, 1, j0, 0) as f64;
                let t11 = table.at(i0, 1, j0, 1) as f64;
                let s4 = (t00 + t01 + t10 + t11) / 4.0;
                let k4 = (t00 + t11 - t01 - t10) / 4.0;
                constant += s4;
                // The angle gap at this pair is π + (j-i)θ, and
                // cos(π + x) = -cos(x).
                match j0.abs_diff(i0) {
                    0 => constant -= k4,
                    l => cos_coef[l - 1] -= k4,
                }
            }
        }
        SweepEvaluator {
            n_sq: (n * n) as f64,
            constant,
            cos_coef,
        }
    }

    fn value(&self, theta: f64) -> f64 {
        let mut acc = self.constant;
        for (idx, c) in self.cos_coef.iter().enumerate() {
            acc += c * ((idx + 1) as f64 * theta).cos();
        }
        acc / self.n_sq
    }

    fn derivative(&self, theta: f64) -> f64 {
        let mut acc = 0.0;
        for (idx, c) in self.cos_coef.iter().enumerate() {
            let l = (idx + 1) as f64;
            acc -= c * l * (l * theta).sin();
        }
        acc / self.n_sq
    }

    /// Pin down the maximum inside a grid bracket. Comparing values can
    /// only localize a smooth peak to ~√ε, so the workhorse is bisection on
    /// the analytic derivative, which reaches ~1e-13.
    fn refine_max(&self, lo: f64, hi: f64) -> f64 {
        let d_lo = self.derivative(lo);
        let d_hi = self.derivative(hi);
        if d_lo > 0.0 && d_hi < 0.0 {
            let (mut lo, mut hi) = (lo, hi);
            for _ in 0..100 {
                if hi - lo <= 1e-13 {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                if self.derivative(mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
        if d_hi >= 0.0 {
            // Still rising at the right edge: the maximum sits there (the
            // θ = π boundary, where the derivative vanishes).
            return hi;
        }
        // No clean sign change; let the comparison search decide.
        golden_section_max(lo, hi, |t| self.value(t))
    }
}

/// Golden-section maximization of a unimodal bracket, to sub-1e-10 accuracy.
fn golden_section_max(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    const INV_PHI_SQ: f64 = 0.381_966_011_250_105_1;
    let mut x1 = lo + INV_PHI_SQ * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > 1e-12 {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = lo + INV_PHI_SQ * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Outcome of the 1-D sweep over the linear-increment angle on `(0, π]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaSweepResult {
    pub n: u32,
    /// The evaluation grid over `(0, π]`.
    pub theta_grid: Vec<f64>,
    /// Expected score at each grid angle.
    pub values: Vec<f64>,
    /// The best increment found (the smallest one on a tie).
    pub theta_star: f64,
    /// Expected score at `theta_star`.
    pub d_star: f64,
    /// `n · theta_star`, the natural scale for comparing cycle lengths.
    pub n_theta_star: f64,
    /// All maximizers whose value is within 1e-9 of the best, ascending;
    /// always contains `theta_star`.
    pub ties: Vec<f64>,
}

const TIE_VALUE_TOL: f64 = 1e-9;
const TIE_THETA_TOL: f64 = 1e-8;

/// Sweep the linear-increment angle over `(0, π]` on a grid of `grid_size`
/// points, then refine every local maximum to within 1e-10.
///
/// The objective is even and 2π-periodic in the increment, so `(0, π]`
/// covers all distinct values. `grid_size` must be at least `4n` so the
/// grid resolves the fastest harmonic `cos((n-1)θ)`.
pub fn optimize_theta(n: u32, grid_size: usize) -> Result<ThetaSweepResult> {
    let game = CycleGame::new(n)?;
    let min = 4 * n as usize;
    if grid_size < min {
        return Err(Error::GridTooCoarse { n, grid_size, min });
    }
    let eval = SweepEvaluator::build(&DominationTable::build(game));

    // Grid over (0, π]; keep the θ = 0 value separately as the left
    // neighbor of the first point.
    let theta_grid: Vec<f64> = (1..=grid_size)
        .map(|g| PI * g as f64 / grid_size as f64)
        .collect();
    let values: Vec<f64> = theta_grid.iter().map(|&t| eval.value(t)).collect();

    let left_of = |g: usize| -> f64 {
        if g == 0 {
            eval.value(0.0)
        } else {
            values[g - 1]
        }
    };
    let mut candidates: Vec<(f64, f64)> = Vec::new();
    for g in 0..grid_size {
        let here = values[g];
        let rises = here >= left_of(g);
        let falls = g + 1 == grid_size || here >= values[g + 1];
        if rises && falls {
            let lo = if g == 0 { 0.0 } else { theta_grid[g - 1] };
            let hi = if g + 1 == grid_size {
                PI
            } else {
                theta_grid[g + 1]
            };
            let theta = eval.refine_max(lo, hi).min(PI);
            candidates.push((theta, eval.value(theta)));
        }
    }

    // Neighboring brackets can refine to the same maximum; merge them.
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
    candidates.dedup_by(|next, kept| {
        if (next.0 - kept.0).abs() <= TIE_THETA_TOL {
            if next.1 > kept.1 {
                *kept = *next;
            }
            true
        } else {
            false
        }
    });

    let d_star = candidates
        .iter()
        .map(|&(_, v)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    let ties: Vec<f64> = candidates
        .iter()
        .filter(|&&(_, v)| d_star - v <= TIE_VALUE_TOL)
        .map(|&(t, _)| t)
        .collect();
    let theta_star = ties[0];
    Ok(ThetaSweepResult {
        n,
        theta_grid,
        values,
        theta_star,
        d_star,
        n_theta_star: n as f64 * theta_star,
        ties,
    })
}

/// One row of the cycle-length scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaSweepSummary {
    pub n: u32,
    pub theta_star: f64,
    pub n_theta_star: f64,
    pub d_star: f64,
}

/// Default sweep grid: at least 512 points, denser for longer cycles.
pub fn default_grid_size(n: u32) -> usize {
    (8 * n as usize).max(512)
}

/// Run [`optimize_theta`] for every `n` in `n_min..=n_max` (both at least 5)
/// and collect the per-length optima. The interesting output is the step
/// structure of `n_theta_star`, which jumps between plateaus near `2π` and
/// `4π` as `n` grows.
pub fn theta_step_scan(n_min: u32, n_max: u32) -> Result<Vec<ThetaSweepSummary>> {
    if n_min < 5 || n_min > n_max {
        return Err(Error::BadScanRange { n_min, n_max });
    }
    (n_min..=n_max)
        .map(|n| {
            let sweep = optimize_theta(n, default_grid_size(n))?;
            Ok(ThetaSweepSummary {
                n,
                theta_star: sweep.theta_star,
                n_theta_star: sweep.n_theta_star,
                d_star: sweep.d_star,
            })
        })
        .collect()
}

/// Write scan rows as CSV with the given float precision.
pub fn write_scan_csv<W: std::io::Write>(
    w: &mut W,
    rows: &[ThetaSweepSummary],
    precision: usize,
) -> Result<()> {
    writeln!(w, "n,theta_star,n_theta_star,d_star")?;
    for row in rows {
        writeln!(
            w,
            "{},{:.p$},{:.p$},{:.p$}",
            row.n,
            row.theta_star,
            row.n_theta_star,
            row.d_star,
            p = precision
        )?;
    }
    Ok(())
}

/// Objective for the unconstrained angle search: expected score as a
/// function of all angles, with Alice's first angle pinned to zero to
/// remove the gauge direction. Coordinates are
/// `[alice_2..alice_n, bob_1..bob_n]`, dimension `2n - 1`.
struct AngleObjective {
    n: usize,
    /// Per-pair quarter-difference `(T00 + T11 - T01 - T10)/4`, row-major.
    k4: Vec<f64>,
    /// Σ (sum of the four entries)/4, the distribution-independent part.
    s4_total: f64,
}

impl AngleObjective {
    fn build(table: &DominationTable) -> Self {
        let n = table.n() as usize;
        let mut k4 = vec![0.0; n * n];
        let mut s4_total = 0.0;
        for i0 in 0..n {
            for j0 in 0..n {
                let t00 = table.at(i0, 0, j0, 0) as f64;
                let t01 = table.at(i0, 0, j0, 1) as f64;
                let t10 = table.at(i0, 1, j0, 0) as f64;
                let t11 = table.at(i0, 1, j0, 1) as f64;
                k4[i0 * n + j0] = (t00 + t11 - t01 - t10) / 4.0;
                s4_total += (t00 + t01 + t10 + t11) / 4.0;
            }
        }
        AngleObjective { n, k4, s4_total }
    }

    fn dim(&self) -> usize {
        2 * self.n - 1
    }

    fn split(&self, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut alice = Vec::with_capacity(self.n);
        alice.push(0.0);
        alice.extend_from_slice(&x[..self.n - 1]);
        let bob = x[self.n - 1..].to_vec();
        (alice, bob)
    }

    /// Expected score and its gradient in the pinned coordinates.
    fn value_and_grad(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let n = self.n;
        let (alice, bob) = self.split(x);
        let mut acc = self.s4_total;
        let mut g_alice = vec![0.0; n];
        let mut g_bob = vec![0.0; n];
        for i0 in 0..n {
            for j0 in 0..n {
                let k4 = self.k4[i0 * n + j0];
                let (sin_d, cos_d) = (bob[j0] - alice[i0]).sin_cos();
                acc += k4 * cos_d;
                g_alice[i0] += k4 * sin_d;
                g_bob[j0] -= k4 * sin_d;
            }
        }
        let n_sq = (n * n) as f64;
        let mut grad = Vec::with_capacity(self.dim());
        grad.extend(g_alice[1..].iter().map(|g| g / n_sq));
        grad.extend(g_bob.iter().map(|g| g / n_sq));
        (acc / n_sq, grad)
    }
}

/// Result of the multi-start quasi-Newton search over all angles.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FullOptimizationResult {
    /// Best strategy found, gauge-fixed (Alice's first angle is zero).
    pub strategy: AngleStrategy,
    /// Its exact expected score.
    pub value: f64,
    /// Number of independent restarts performed.
    pub restarts: usize,
    /// Whether the best restart reached gradient norm ≤ 1e-8. A `false`
    /// here is an answer, not an error: it reports the best point found.
    pub converged: bool,
}

const GRAD_TOL: f64 = 1e-8;
const MAX_ITERS: usize = 1_000;
/// Restart values closer than this are the same optimum up to rounding.
const VALUE_NOISE_TOL: f64 = 1e-12;

struct RestartOutcome {
    x: Vec<f64>,
    value: f64,
    converged: bool,
}

/// BFGS ascent (implemented as descent on the negated objective) with
/// Armijo backtracking, from the given start point.
fn bfgs_maximize(obj: &AngleObjective, x0: Vec<f64>) -> RestartOutcome {
    const ARMIJO_C1: f64 = 1e-4;
    // Near a maximum the sufficient-decrease requirement shrinks below
    // the rounding noise of the objective itself; without a noise floor
    // the line search stalls with the gradient just above tolerance.
    const ARMIJO_NOISE: f64 = 1e-14;
    let dim = obj.dim();
    let mut x = x0;
    let (mut value, mut grad) = {
        let (v, g) = obj.value_and_grad(&x);
        (-v, g.iter().map(|gi| -gi).collect::<Vec<f64>>())
    };

    // Inverse-Hessian approximation, row-major, starting from identity.
    let mut h = vec![0.0; dim * dim];
    let reset = |h: &mut Vec<f64>| {
        h.fill(0.0);
        for a in 0..dim {
            h[a * dim + a] = 1.0;
        }
    };
    reset(&mut h);

    let norm = |v: &[f64]| v.iter().map(|e| e * e).sum::<f64>().sqrt();
    let mut converged = norm(&grad) <= GRAD_TOL;

    for _ in 0..MAX_ITERS {
        if converged {
            break;
        }
        let mut dir: Vec<f64> = (0..dim)
            .map(|a| -(0..dim).map(|b| h[a * dim + b] * grad[b]).sum::<f64>())
            .collect();
        let mut slope: f64 = dir.iter().zip(&grad).map(|(d, g)| d * g).sum();
        if slope >= 0.0 {
            // Curvature got corrupted; restart from steepest descent.
            reset(&mut h);
            dir = grad.iter().map(|g| -g).collect();
            slope = -grad.iter().map(|g| g * g).sum::<f64>();
        }

        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> =
                x.iter().zip(&dir).map(|(xi, di)| xi + step * di).collect();
            let (v, g) = obj.value_and_grad(&trial);
            let (fv, fg): (f64, Vec<f64>) = (-v, g.iter().map(|gi| -gi).collect());
            if fv <= value + ARMIJO_C1 * step * slope + ARMIJO_NOISE {
                accepted = Some((trial, fv, fg));
                break;
            }
            step *= 0.5;
        }
        let Some((x_new, f_new, g_new)) = accepted else {
            // Line search exhausted: no further progress possible.
            break;
        };

        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&grad).map(|(a, b)| a - b).collect();
        let sy: f64 = s.iter().zip(&y).map(|(a, b)| a * b).sum();
        if sy > 1e-12 {
            let rho = 1.0 / sy;
            let hy: Vec<f64> = (0..dim)
                .map(|a| (0..dim).map(|b| h[a * dim + b] * y[b]).sum::<f64>())
                .collect();
            let yhy: f64 = y.iter().zip(&hy).map(|(a, b)| a * b).sum();
            for a in 0..dim {
                for b in 0..dim {
                    h[a * dim + b] += -rho * (s[a] * hy[b] + hy[a] * s[b])
                        + (rho * rho * yhy + rho) * s[a] * s[b];
                }
            }
        } else {
            reset(&mut h);
        }

        x = x_new;
        value = f_new;
        grad = g_new;
        converged = norm(&grad) <= GRAD_TOL;
    }

    RestartOutcome {
        x,
        value: -value,
        converged,
    }
}

/// Search over all `2n` angles with `restarts` independent BFGS runs from
/// uniform random starts in `[0, 2π)`. Restart `r` draws from stream `r` of
/// the seeded generator, so the outcome is independent of scheduling and
/// worker count; the best restart wins, earliest on exact ties.
pub fn optimize_full(n: u32, restarts: usize, seed: u64) -> Result<FullOptimizationResult> {
    let game = CycleGame::new(n)?;
    if restarts == 0 {
        return Err(Error::NoRestarts);
    }
    let obj = AngleObjective::build(&DominationTable::build(game));
    let dim = obj.dim();

    let outcomes: Vec<RestartOutcome> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            let x0: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() * TAU).collect();
            bfgs_maximize(&obj, x0)
        })
        .collect();

    // Restarts that all land in the optimal basin differ only by
    // floating-point noise; among those ties, prefer one whose gradient
    // went below tolerance so the flag describes the search outcome
    // rather than which run edged ahead by a few ulps.
    let top = outcomes
        .iter()
        .map(|o| o.value)
        .fold(f64::NEG_INFINITY, f64::max);
    let pick = |flagged: bool| {
        outcomes
            .iter()
            .filter(|o| o.converged == flagged && o.value >= top - VALUE_NOISE_TOL)
            .reduce(|best, next| if next.value > best.value { next } else { best })
    };
    let best = pick(true)
        .or_else(|| pick(false))
        .expect("at least one restart");

    let (alice, bob) = obj.split(&best.x);
    Ok(FullOptimizationResult {
        strategy: AngleStrategy::new(alice, bob)?,
        value: best.value,
        restarts,
        converged: best.converged,
    })
}

/// How to search the space of deterministic strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SearchMode {
    /// Enumerate every Alice map with Bob's per-site best response;
    /// guaranteed optimal, capped at `n <= 12`.
    Exhaustive,
    /// Seeded multi-start single-flip hill climbing; works for any length
    /// but only guarantees a local optimum.
    LocalSearch,
}

/// Upper bound for [`SearchMode::Exhaustive`].
pub const EXHAUSTIVE_MAX_N: u32 = 12;

/// Best deterministic strategy found and its exact expected score.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalSearchResult {
    pub strategy: ClassicalStrategy,
    pub value: Rational64,
    pub mode: SearchMode,
}

/// Total table score of a deterministic pair (the expectation times `n²`).
fn classical_total(table: &DominationTable, alice: &[Move], bob: &[Move]) -> i64 {
    let n = alice.len();
    let mut total = 0i64;
    for i0 in 0..n {
        for j0 in 0..n {
            total += table.at(i0, alice[i0].bit(), j0, bob[j0].bit()) as i64;
        }
    }
    total
}

fn exhaustive_search(table: &DominationTable) -> (Vec<Move>, Vec<Move>, i64) {
    let n = table.n() as usize;
    let mut best_total = i64::MIN;
    let mut best: Option<(Vec<Move>, Vec<Move>)> = None;
    for mask in 0u32..1 << n {
        let alice: Vec<Move> =
            (0..n).map(|i| Move::from_bit((mask >> i & 1) as u8)).collect();
        // Bob's sites decouple once Alice is fixed: pick each column's best
        // response independently (preferring bit 0 on ties).
        let mut total = 0i64;
        let mut bob = Vec::with_capacity(n);
        for j0 in 0..n {
            let col = |b: u8| -> i64 {
                (0..n).map(|i0| table.at(i0, alice[i0].bit(), j0, b) as i64).sum()
            };
            let (c0, c1) = (col(0), col(1));
            if c1 > c0 {
                total += c1;
                bob.push(Move::ToSuccessor);
            } else {
                total += c0;
                bob.push(Move::ToPredecessor);
            }
        }
        if total > best_total {
            best_total = total;
            best = Some((alice, bob));
        }
    }
    let (alice, bob) = best.expect("mask space is never empty");
    (alice, bob, best_total)
}

const LOCAL_SEARCH_STARTS: u64 = 64;
const LOCAL_SEARCH_SEED: u64 = 0x5eed_ca11;

fn local_search(table: &DominationTable) -> (Vec<Move>, Vec<Move>, i64) {
    let n = table.n() as usize;
    let mut best_total = i64::MIN;
    let mut best: Option<(Vec<Move>, Vec<Move>)> = None;
    for start in 0..LOCAL_SEARCH_STARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(LOCAL_SEARCH_SEED);
        rng.set_stream(start);
        let mut alice: Vec<Move> =
            (0..n).map(|_| Move::from_bit(rng.random::<bool>() as u8)).collect();
        let mut bob: Vec<Move> =
            (0..n).map(|_| Move::from_bit(rng.random::<bool>() as u8)).collect();
        let mut total = classical_total(table, &alice, &bob);

        loop {
            // Best single-site flip; a flip only shifts its own row or
            // column sum, so each neighbor is scored in O(n).
            let mut best_gain = 0i64;
            let mut best_flip: Option<(bool, usize)> = None;
            for i0 in 0..n {
                let old_bit = alice[i0].bit();
                let gain: i64 = (0..n)
                    .map(|j0| {
                        table.at(i0, 1 - old_bit, j0, bob[j0].bit()) as i64
                            - table.at(i0, old_bit, j0, bob[j0].bit()) as i64
                    })
                    .sum();
                if gain > best_gain {
                    best_gain = gain;
                    best_flip = Some((true, i0));
                }
            }
            for j0 in 0..n {
                let old_bit = bob[j0].bit();
                let gain: i64 = (0..n)
                    .map(|i0| {
                        table.at(i0, alice[i0].bit(), j0, 1 - old_bit) as i64
                            - table.at(i0, alice[i0].bit(), j0, old_bit) as i64
                    })
                    .sum();
                if gain > best_gain {
                    best_gain = gain;
                    best_flip = Some((false, j0));
                }
            }
            match best_flip {
                Some((is_alice, site)) => {
                    if is_alice {
                        alice[site] = alice[site].flipped();
                    } else {
                        bob[site] = bob[site].flipped();
                    }
                    total += best_gain;
                }
                None => break,
            }
        }

        if total > best_total {
            best_total = total;
            best = Some((alice, bob));
        }
    }
    let (alice, bob) = best.expect("at least one start");
    (alice, bob, best_total)
}

/// Find the best deterministic strategy on `C_n`.
///
/// [`SearchMode::Exhaustive`] is exact but limited to `n <= 12` (the Alice
/// side of the space doubles with each vertex); [`SearchMode::LocalSearch`]
/// handles longer cycles with seeded hill climbing.
pub fn classical_optimum(n: u32, mode: SearchMode) -> Result<ClassicalSearchResult> {
    let game = CycleGame::new(n)?;
    let table = DominationTable::build(game);
    let (alice, bob, total) = match mode {
        SearchMode::Exhaustive => {
            if n > EXHAUSTIVE_MAX_N {
                return Err(Error::ExhaustiveTooLarge {
                    n,
                    max: EXHAUSTIVE_MAX_N,
                });
            }
            exhaustive_search(&table)
        }
        SearchMode::LocalSearch => local_search(&table),
    };
    Ok(ClassicalSearchResult {
        strategy: ClassicalStrategy::new(alice, bob)?,
        value: Rational64::new(total, (n as i64) * (n as i64)),
        mode,
    })
}
