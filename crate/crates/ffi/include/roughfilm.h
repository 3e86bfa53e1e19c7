#ifndef ROUGHFILM_H
#define ROUGHFILM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every function.
typedef enum RfStatus {
  RF_STATUS_OK = 0,
  // A required pointer argument was null.
  RF_STATUS_NULL_POINTER = 1,
  // Arguments, configuration text or buffer sizes were rejected.
  RF_STATUS_INVALID_INPUT = 2,
  // The solve or a quadrature failed numerically.
  RF_STATUS_NUMERICAL = 3,
  RF_STATUS_IO = 4,
  // A Rust panic was caught at the boundary.
  RF_STATUS_INTERNAL = 5,
} RfStatus;

// Scenario configuration handle.
typedef struct RfScenario RfScenario;

// Solved pressure field handle.
typedef struct RfSolution RfSolution;

// Norms of the rough-minus-smooth pressure difference.
typedef struct RfComparison {
  double l2;
  double linf;
  double l2_outside_rough;
} RfComparison;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or null if none.
//
// The pointer stays valid until the next failing call on the same thread.
const char *rf_last_error(void);

// Poiseuille and Couette coefficients for roughness intensity `n`.
//
// # Safety
// `a` and `b` must be valid for writes.
enum RfStatus rf_coefficients(double n, double *a, double *b);

// Through-gap velocity profile at `z_count + 1` equally spaced heights.
//
// Writes `(z, ux, uy)` triples into `out`, which must hold
// `3 * (z_count + 1)` values.
//
// # Safety
// `grad_p` and `u_b` must point to two doubles; `out` must be valid for
// `out_len` writes.
enum RfStatus rf_velocity_profile(double h1,
                                  double n,
                                  const double *grad_p,
                                  const double *u_b,
                                  size_t z_count,
                                  double *out,
                                  size_t out_len);

// Parses a `key = value` configuration document into a new scenario.
//
// Relative table paths resolve against the working directory.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be valid for writes.
enum RfStatus rf_scenario_from_config(const char *text, struct RfScenario **out);

// Creates a scenario from a built-in preset (`fig2` .. `fig5`).
//
// # Safety
// `name` must be a NUL-terminated string; `out` must be valid for writes.
enum RfStatus rf_scenario_from_preset(const char *name, struct RfScenario **out);

// Overrides the grid resolution of a scenario.
//
// # Safety
// `scenario` must be a live handle.
enum RfStatus rf_scenario_set_grid(struct RfScenario *scenario, size_t nx, size_t ny);

// Releases a scenario. Null is ignored.
//
// # Safety
// `scenario` must be null or a handle not yet freed.
void rf_scenario_free(struct RfScenario *scenario);

// Solves the pressure equation for a scenario.
//
// # Safety
// `scenario` must be a live handle; `out` must be valid for writes.
enum RfStatus rf_solve(const struct RfScenario *scenario, struct RfSolution **out);

// Grid size and solver statistics of a solution. Any out pointer may be null.
//
// # Safety
// `solution` must be a live handle; non-null out pointers must be valid for writes.
enum RfStatus rf_solution_info(const struct RfSolution *solution,
                               size_t *nx,
                               size_t *ny,
                               size_t *iterations,
                               double *relative_residual);

// Copies nodal pressure, row-major with `y` outer, into `buffer`.
//
// `len` must be at least `(nx + 1) * (ny + 1)`.
//
// # Safety
// `solution` must be a live handle; `buffer` must be valid for `len` writes.
enum RfStatus rf_solution_pressure(const struct RfSolution *solution, double *buffer, size_t len);

// Releases a solution. Null is ignored.
//
// # Safety
// `solution` must be null or a handle not yet freed.
void rf_solution_free(struct RfSolution *solution);

// Solves a scenario with and without its roughness and compares the fields.
//
// # Safety
// `scenario` must be a live handle; `out` must be valid for writes.
enum RfStatus rf_compare(const struct RfScenario *scenario, struct RfComparison *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ROUGHFILM_H */
