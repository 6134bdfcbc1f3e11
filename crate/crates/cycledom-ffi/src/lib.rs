//! C ABI for the cycle-domination game library. Every entry point returns
//! a [`CdStatus`]; results come back through out-pointers, and the one
//! heap-owning type ([`CdTable`]) is an opaque handle with an explicit
//! `free`. No call unwinds across the boundary: panics are caught and
//! reported as [`CdStatus::Panic`].

use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use cycledom::analytics::{closed_form_long, exact_expectation_quantum};
use cycledom::graph::{CycleGame, DominationTable, Move};
use cycledom::montecarlo::{
    achieved_advantage, run_simulation, CheckpointSchedule, NoiseModel, PlayStrategy,
};
use cycledom::optimizer::{
    classical_optimum, default_grid_size, optimize_theta, SearchMode, EXHAUSTIVE_MAX_N,
};
use cycledom::strategy::{ansatz_strategy, schedule_theta, AnsatzParams};
use cycledom::Error;

/// Result code of every call in this interface.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CdStatus {
    /// The call succeeded.
    Ok = 0,
    /// A parameter was outside its documented domain.
    InvalidArgument = 1,
    /// The cycle length has no entry in the optimal-increment schedule
    /// or closed-form range.
    OutOfSchedule = 2,
    /// The request is valid but beyond a built-in limit.
    Unsupported = 3,
    /// The computation itself failed.
    RuntimeError = 4,
    /// An internal panic was caught at the boundary.
    Panic = 5,
    /// A required pointer was null.
    NullPointer = 6,
}

fn status_of(err: &Error) -> CdStatus {
    match err {
        Error::CycleTooSmall(_)
        | Error::InvalidSite { .. }
        | Error::DimensionMismatch { .. }
        | Error::BadStrategyShape { .. }
        | Error::GridTooCoarse { .. }
        | Error::BadScanRange { .. }
        | Error::NoRestarts
        | Error::InvalidNoiseStrength(_)
        | Error::InvalidSimulationSize(_) => CdStatus::InvalidArgument,
        Error::OutOfSchedule(_) | Error::BelowClosedFormRange(_) => CdStatus::OutOfSchedule,
        Error::ExhaustiveTooLarge { .. } | Error::CalibrationOutOfRange { .. } => {
            CdStatus::Unsupported
        }
        _ => CdStatus::RuntimeError,
    }
}

fn guard<F: FnOnce() -> CdStatus>(body: F) -> CdStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or(CdStatus::Panic)
}

/// Static description of a status code, always a valid NUL-terminated
/// string. Never needs to be freed.
#[no_mangle]
pub extern "C" fn cd_status_message(status: CdStatus) -> *const c_char {
    let text: &'static [u8] = match status {
        CdStatus::Ok => b"ok\0",
        CdStatus::InvalidArgument => b"a parameter is outside its documented domain\0",
        CdStatus::OutOfSchedule => b"no scheduled increment or closed form for this length\0",
        CdStatus::Unsupported => b"the request exceeds a built-in limit\0",
        CdStatus::RuntimeError => b"the computation failed\0",
        CdStatus::Panic => b"an internal panic was caught\0",
        CdStatus::NullPointer => b"a required pointer was null\0",
    };
    text.as_ptr().cast()
}

/// Noise channel selector for the simulation calls.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CdNoiseKind {
    /// Play the strategy exactly as specified.
    Ideal = 0,
    /// Mix the joint outcome distribution toward uniform with weight `p`.
    Werner = 1,
    /// Flip each reported bit independently with probability `p`.
    Readout = 2,
}

fn noise_model(kind: CdNoiseKind, p: f64) -> cycledom::Result<NoiseModel> {
    match kind {
        CdNoiseKind::Ideal => Ok(NoiseModel::ideal()),
        CdNoiseKind::Werner => NoiseModel::werner(p),
        CdNoiseKind::Readout => NoiseModel::readout(p),
    }
}

/// Exact expected score of the scheduled strategy against the two
/// references, from one seeded simulation.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CdAdvantage {
    /// Simulated mean score of the correlated strategy.
    pub q: f64,
    /// Exact optimum over deterministic strategies.
    pub c: f64,
    /// Exact coin-flip baseline.
    pub r: f64,
    /// Advantage ratio `(q - c) / (c - r)`.
    pub a: f64,
    /// The ratio as a rounded percentage.
    pub a_percent: i64,
    /// Noise strength actually applied.
    pub p: f64,
}

/// Opaque handle to a precomputed dominated-count table.
pub struct CdTable {
    table: DominationTable,
}

/// Build the dominated-count table for the cycle of length `n` (at
/// least 3) and store a handle in `*out`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
/// On success the caller owns the handle and must release it with
/// [`cd_table_free`].
#[no_mangle]
pub unsafe extern "C" fn cd_table_new(n: u32, out: *mut *mut CdTable) -> CdStatus {
    if out.is_null() {
        return CdStatus::NullPointer;
    }
    guard(|| match CycleGame::new(n) {
        Ok(game) => {
            let handle = Box::new(CdTable {
                table: DominationTable::build(game),
            });
            unsafe { *out = Box::into_raw(handle) };
            CdStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Release a handle obtained from [`cd_table_new`]. A null handle is a
/// no-op.
///
/// # Safety
/// `table` must be null or a handle returned by [`cd_table_new`] that
/// has not been freed already; it is invalid after the call.
#[no_mangle]
pub unsafe extern "C" fn cd_table_free(table: *mut CdTable) {
    if !table.is_null() {
        drop(unsafe { Box::from_raw(table) });
    }
}

/// Cycle length behind a table handle.
///
/// # Safety
/// `table` must be a live handle from [`cd_table_new`]; `out` must be
/// valid for one `uint32_t`.
#[no_mangle]
pub unsafe extern "C" fn cd_table_n(table: *const CdTable, out: *mut u32) -> CdStatus {
    if table.is_null() || out.is_null() {
        return CdStatus::NullPointer;
    }
    guard(|| {
        unsafe { *out = (*table).table.n() };
        CdStatus::Ok
    })
}

/// Number of vertices dominated when Alice at site `alice_site` plays
/// move bit `alice_bit` (0 = toward the predecessor, 1 = toward the
/// successor) and Bob at `bob_site` plays `bob_bit`. Sites are 1-based.
///
/// # Safety
/// `table` must be a live handle from [`cd_table_new`]; `out` must be
/// valid for one `uint32_t`.
#[no_mangle]
pub unsafe extern "C" fn cd_table_count(
    table: *const CdTable,
    alice_site: u32,
    alice_bit: u8,
    bob_site: u32,
    bob_bit: u8,
    out: *mut u32,
) -> CdStatus {
    if table.is_null() || out.is_null() {
        return CdStatus::NullPointer;
    }
    if alice_bit > 1 || bob_bit > 1 {
        return CdStatus::InvalidArgument;
    }
    guard(|| {
        let t = unsafe { &(*table).table };
        match t.count(
            alice_site,
            Move::from_bit(alice_bit),
            bob_site,
            Move::from_bit(bob_bit),
        ) {
            Ok(count) => {
                unsafe { *out = count };
                CdStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Mean table entry — the exact expected score when both players flip
/// fair coins.
///
/// # Safety
/// `table` must be a live handle from [`cd_table_new`]; `out` must be
/// valid for one `double`.
#[no_mangle]
pub unsafe extern "C" fn cd_table_mean(table: *const CdTable, out: *mut f64) -> CdStatus {
    if table.is_null() || out.is_null() {
        return CdStatus::NullPointer;
    }
    guard(|| {
        let mean = unsafe { (*table).table.mean() };
        unsafe { *out = *mean.numer() as f64 / *mean.denom() as f64 };
        CdStatus::Ok
    })
}

/// Optimal angle increment for lengths 5 through 13.
///
/// # Safety
/// `out` must be valid for one `double`.
#[no_mangle]
pub unsafe extern "C" fn cd_schedule_theta(n: u32, out: *mut f64) -> CdStatus {
    if out.is_null() {
        return CdStatus::NullPointer;
    }
    guard(|| match schedule_theta(n) {
        Ok(theta) => {
            unsafe { *out = theta };
            CdStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Exact expected score of the linear-increment strategy with step
/// `theta` on the table's cycle.
///
/// # Safety
/// `table` must be a live handle from [`cd_table_new`]; `out` must be
/// valid for one `double`.
#[no_mangle]
pub unsafe extern "C" fn cd_exact_quantum_ansatz(
    table: *const CdTable,
    theta: f64,
    out: *mut f64,
) -> CdStatus {
    if table.is_null() || out.is_null() {
        return CdStatus::NullPointer;
    }
    guard(|| {
        let t = unsafe { &(*table).table };
        let result = AnsatzParams::new(t.n(), theta)
            .map(|params| ansatz_strategy(&params))
            .and_then(|strategy| exact_expectation_quantum(t, &strategy));
        match result {
            Ok(d) => {
                unsafe { *out = d };
                CdStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Closed-form expected score of the linear-increment strategy, valid
/// for cycle lengths of at least 5.
///
/// # Safety
/// `out` must be valid for one `double`.
#[no_mangle]
pub unsafe extern "C" fn cd_closed_form(n: u32, theta: f64, out: *mut f64) -> CdStatus {
    if out.is_null() {
        return CdStatus::NullPointer;
    }
    guard(|| match closed_form_long(n, theta) {
        Ok(d) => {
            unsafe { *out = d };
            CdStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Sweep and refine the optimal increment for length `n`. Pass
/// `grid_size` 0 for the default grid (`max(512, 8n)` points).
///
/// # Safety
/// `theta_star` and `d_star` must each be valid for one `double`.
#[no_mangle]
pub unsafe extern "C" fn cd_optimize_theta(
    n: u32,
    grid_size: usize,
    theta_star: *mut f64,
    d_star: *mut f64,
) -> CdStatus {
    if theta_star.is_null() || d_star.is_null() {
        return CdStatus::NullPointer;
    }
    guard(|| {
        let points = if grid_size == 0 {
            default_grid_size(n)
        } else {
            grid_size
        };
        match optimize_theta(n, points) {
            Ok(sweep) => {
                unsafe {
                    *theta_star = sweep.theta_star;
                    *d_star = sweep.d_star;
                }
                CdStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Exact optimum over deterministic strategies (exhaustive up to length
/// 12, seeded hill climbing beyond).
///
/// # Safety
/// `out` must be valid for one `double`.
#[no_mangle]
pub unsafe extern "C" fn cd_classical_optimum(n: u32, out: *mut f64) -> CdStatus {
    if out.is_null() {
        return CdStatus::NullPointer;
    }
    guard(|| {
        let mode = if n <= EXHAUSTIVE_MAX_N {
            SearchMode::Exhaustive
        } else {
            SearchMode::LocalSearch
        };
        match classical_optimum(n, mode) {
            Ok(found) => {
                unsafe { *out = *found.value.numer() as f64 / *found.value.denom() as f64 };
                CdStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Seeded Monte-Carlo estimate of the linear-increment strategy's score
/// under the given noise channel. Identical inputs always produce
/// identical results, whatever the thread count.
///
/// # Safety
/// `mean` and `std_error` must each be valid for one `double`.
#[no_mangle]
pub unsafe extern "C" fn cd_simulate_ansatz(
    n: u32,
    theta: f64,
    noise_kind: CdNoiseKind,
    p: f64,
    seed: u64,
    games: u64,
    mean: *mut f64,
    std_error: *mut f64,
) -> CdStatus {
    if mean.is_null() || std_error.is_null() {
        return CdStatus::NullPointer;
    }
    guard(|| {
        let result = noise_model(noise_kind, p).and_then(|noise| {
            let strategy = PlayStrategy::Quantum(ansatz_strategy(&AnsatzParams::new(n, theta)?));
            run_simulation(n, &strategy, noise, seed, games, CheckpointSchedule::PowersOfTwo)
        });
        match result {
            Ok(run) => {
                unsafe {
                    *mean = run.final_mean;
                    *std_error = run.std_error;
                }
                CdStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Simulate the scheduled strategy for length `n` (5 through 13) under
/// noise and compare it with the exact references.
///
/// # Safety
/// `out` must be valid for one `CdAdvantage`.
#[no_mangle]
pub unsafe extern "C" fn cd_advantage(
    n: u32,
    noise_kind: CdNoiseKind,
    p: f64,
    seed: u64,
    games: u64,
    out: *mut CdAdvantage,
) -> CdStatus {
    if out.is_null() {
        return CdStatus::NullPointer;
    }
    guard(|| {
        let result = noise_model(noise_kind, p)
            .and_then(|noise| achieved_advantage(n, noise, seed, games));
        match result {
            Ok(report) => {
                unsafe {
                    *out = CdAdvantage {
                        q: report.q,
                        c: report.c,
                        r: report.r,
                        a: report.a,
                        a_percent: report.a_percent,
                        p: report.p,
                    };
                }
                CdStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}
