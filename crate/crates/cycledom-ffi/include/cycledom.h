#ifndef CYCLEDOM_H
#define CYCLEDOM_H

/* Generated from the Rust sources by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every call in this interface.
typedef enum CdStatus {
  // The call succeeded.
  CD_STATUS_OK = 0,
  // A parameter was outside its documented domain.
  CD_STATUS_INVALID_ARGUMENT = 1,
  // The cycle length has no entry in the optimal-increment schedule
  // or closed-form range.
  CD_STATUS_OUT_OF_SCHEDULE = 2,
  // The request is valid but beyond a built-in limit.
  CD_STATUS_UNSUPPORTED = 3,
  // The computation itself failed.
  CD_STATUS_RUNTIME_ERROR = 4,
  // An internal panic was caught at the boundary.
  CD_STATUS_PANIC = 5,
  // A required pointer was null.
  CD_STATUS_NULL_POINTER = 6,
} CdStatus;

// Noise channel selector for the simulation calls.
typedef enum CdNoiseKind {
  // Play the strategy exactly as specified.
  CD_NOISE_KIND_IDEAL = 0,
  // Mix the joint outcome distribution toward uniform with weight `p`.
  CD_NOISE_KIND_WERNER = 1,
  // Flip each reported bit independently with probability `p`.
  CD_NOISE_KIND_READOUT = 2,
} CdNoiseKind;

// Opaque handle to a precomputed dominated-count table.
typedef struct CdTable CdTable;

// Exact expected score of the scheduled strategy against the two
// references, from one seeded simulation.
typedef struct CdAdvantage {
  // Simulated mean score of the correlated strategy.
  double q;
  // Exact optimum over deterministic strategies.
  double c;
  // Exact coin-flip baseline.
  double r;
  // Advantage ratio `(q - c) / (c - r)`.
  double a;
  // The ratio as a rounded percentage.
  int64_t a_percent;
  // Noise strength actually applied.
  double p;
} CdAdvantage;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static description of a status code, always a valid NUL-terminated
// string. Never needs to be freed.
const char *cd_status_message(enum CdStatus status);

// Build the dominated-count table for the cycle of length `n` (at
// least 3) and store a handle in `*out`.
//
// # Safety
// `out` must be a valid pointer to writable storage for one pointer.
// On success the caller owns the handle and must release it with
// [`cd_table_free`].
enum CdStatus cd_table_new(uint32_t n, struct CdTable **out);

// Release a handle obtained from [`cd_table_new`]. A null handle is a
// no-op.
//
// # Safety
// `table` must be null or a handle returned by [`cd_table_new`] that
// has not been freed already; it is invalid after the call.
void cd_table_free(struct CdTable *table);

// Cycle length behind a table handle.
//
// # Safety
// `table` must be a live handle from [`cd_table_new`]; `out` must be
// valid for one `uint32_t`.
enum CdStatus cd_table_n(const struct CdTable *table, uint32_t *out);

// Number of vertices dominated when Alice at site `alice_site` plays
// move bit `alice_bit` (0 = toward the predecessor, 1 = toward the
// successor) and Bob at `bob_site` plays `bob_bit`. Sites are 1-based.
//
// # Safety
// `table` must be a live handle from [`cd_table_new`]; `out` must be
// valid for one `uint32_t`.
enum CdStatus cd_table_count(const struct CdTable *table,
                             uint32_t alice_site,
                             uint8_t alice_bit,
                             uint32_t bob_site,
                             uint8_t bob_bit,
                             uint32_t *out);

// Mean table entry — the exact expected score when both players flip
// fair coins.
//
// # Safety
// `table` must be a live handle from [`cd_table_new`]; `out` must be
// valid for one `double`.
enum CdStatus cd_table_mean(const struct CdTable *table, double *out);

// Optimal angle increment for lengths 5 through 13.
//
// # Safety
// `out` must be valid for one `double`.
enum CdStatus cd_schedule_theta(uint32_t n, double *out);

// Exact expected score of the linear-increment strategy with step
// `theta` on the table's cycle.
//
// # Safety
// `table` must be a live handle from [`cd_table_new`]; `out` must be
// valid for one `double`.
enum CdStatus cd_exact_quantum_ansatz(const struct CdTable *table, double theta, double *out);

// Closed-form expected score of the linear-increment strategy, valid
// for cycle lengths of at least 5.
//
// # Safety
// `out` must be valid for one `double`.
enum CdStatus cd_closed_form(uint32_t n, double theta, double *out);

// Sweep and refine the optimal increment for length `n`. Pass
// `grid_size` 0 for the default grid (`max(512, 8n)` points).
//
// # Safety
// `theta_star` and `d_star` must each be valid for one `double`.
enum CdStatus cd_optimize_theta(uint32_t n, size_t grid_size, double *theta_star, double *d_star);

// Exact optimum over deterministic strategies (exhaustive up to length
// 12, seeded hill climbing beyond).
//
// # Safety
// `out` must be valid for one `double`.
enum CdStatus cd_classical_optimum(uint32_t n, double *out);

// Seeded Monte-Carlo estimate of the linear-increment strategy's score
// under the given noise channel. Identical inputs always produce
// identical results, whatever the thread count.
//
// # Safety
// `mean` and `std_error` must each be valid for one `double`.
enum CdStatus cd_simulate_ansatz(uint32_t n,
                                 double theta,
                                 enum CdNoiseKind noise_kind,
                                 double p,
                                 uint64_t seed,
                                 uint64_t games,
                                 double *mean,
                                 double *std_error);

// Simulate the scheduled strategy for length `n` (5 through 13) under
// noise and compare it with the exact references.
//
// # Safety
// `out` must be valid for one `CdAdvantage`.
enum CdStatus cd_advantage(uint32_t n,
                           enum CdNoiseKind noise_kind,
                           double p,
                           uint64_t seed,
                           uint64_t games,
                           struct CdAdvantage *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CYCLEDOM_H */
