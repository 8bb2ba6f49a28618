#ifndef PCOSIM_H
#define PCOSIM_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum PcoStatus {
  PCO_STATUS_OK = 0,
  PCO_STATUS_NULL_POINTER = 1,
  PCO_STATUS_INVALID_UTF8 = 2,
  PCO_STATUS_INVALID_CONFIG = 3,
  PCO_STATUS_SIMULATION = 4,
  PCO_STATUS_NOT_RUN = 5,
  PCO_STATUS_BUFFER_TOO_SMALL = 6,
  PCO_STATUS_IO = 7,
  PCO_STATUS_INVALID_ARGUMENT = 8,
  PCO_STATUS_PANIC = 99,
} PcoStatus;

/**
 * Opaque simulation handle.
 */
typedef struct PcoSim PcoSim;

/**
 * Summary of a finished run. Absent times and couplings are NaN.
 */
typedef struct PcoSyncReport {
  bool synced;
  double sync_time;
  double tolerance;
  double final_lambda;
  bool monotone;
  uintptr_t firings;
  uintptr_t coupling_records;
  double min_alpha_effective;
} PcoSyncReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parse scenario TOML and create a handle. Relative edge-file paths
 * resolve against the working directory.
 *
 * # Safety
 * `toml` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PcoStatus pco_sim_new(const char *toml, struct PcoSim **out);

/**
 * Release a handle. Null is ignored.
 *
 * # Safety
 * `sim` must come from `pco_sim_new` and not be used afterwards.
 */
void pco_sim_free(struct PcoSim *sim);

/**
 * Replace the seed of random initial phases and coupling draws. Discards
 * any previous result.
 *
 * # Safety
 * `sim` must be a live handle.
 */
enum PcoStatus pco_sim_set_seed(struct PcoSim *sim, uint64_t seed);

/**
 * Run the simulation to its horizon (or early stop).
 *
 * # Safety
 * `sim` must be a live handle.
 */
enum PcoStatus pco_sim_run(struct PcoSim *sim);

/**
 * # Safety
 * `sim` must be a live handle and `out` a valid pointer.
 */
enum PcoStatus pco_sim_oscillator_count(const struct PcoSim *sim, uintptr_t *out);

/**
 * # Safety
 * `sim` must be a live handle and `out` a valid pointer.
 */
enum PcoStatus pco_sim_sample_count(const struct PcoSim *sim, uintptr_t *out);

/**
 * Copy sample times (`sample_count` values) and phases (row-major,
 * `sample_count * oscillator_count` values). Either buffer may be null
 * with length 0 to skip it.
 *
 * # Safety
 * Buffers must be valid for their stated lengths.
 */
enum PcoStatus pco_sim_samples(const struct PcoSim *sim,
                               double *times,
                               uintptr_t times_len,
                               double *phases,
                               uintptr_t phases_len);

/**
 * # Safety
 * `sim` must be a live handle and `out` a valid pointer.
 */
enum PcoStatus pco_sim_arc_count(const struct PcoSim *sim, uintptr_t *out);

/**
 * Copy the containing-arc series.
 *
 * # Safety
 * Both buffers must hold `len` values.
 */
enum PcoStatus pco_sim_arc(const struct PcoSim *sim, double *times, double *lambdas, uintptr_t len);

/**
 * # Safety
 * `sim` must be a live handle and `out` a valid pointer.
 */
enum PcoStatus pco_sim_firing_count(const struct PcoSim *sim, uintptr_t *out);

/**
 * Copy firing times and zero-based oscillator indices.
 *
 * # Safety
 * Both buffers must hold `len` values.
 */
enum PcoStatus pco_sim_firings(const struct PcoSim *sim,
                               double *times,
                               uintptr_t *oscillators,
                               uintptr_t len);

/**
 * # Safety
 * `sim` must be a live handle and `out` a valid pointer.
 */
enum PcoStatus pco_sim_report(const struct PcoSim *sim, struct PcoSyncReport *out);

/**
 * Write the CSV files, report and plot script into `dir`.
 *
 * # Safety
 * `sim` must be a live handle and `dir` a NUL-terminated string.
 */
enum PcoStatus pco_sim_write_outputs(const struct PcoSim *sim, const char *dir);

/**
 * Containing arc of `n` phases in `[0, 1)`.
 *
 * # Safety
 * `phases` must hold `n` values and `out` be a valid pointer.
 */
enum PcoStatus pco_containing_arc(const double *phases, uintptr_t n, double *out);

/**
 * Coupling strength realized by an adjustment that ran `t0` of `tau_i`
 * seconds; `alpha` when `tau_i <= 0`.
 */
double pco_effective_coupling(double t0, double tau_i, double alpha);

/**
 * Message of the last failed call on this thread, or null. Valid until
 * the next call into this library on the same thread.
 */
const char *pco_last_error_message(void);

/**
 * Library version, NUL-terminated and static.
 */
const char *pco_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PCOSIM_H */
