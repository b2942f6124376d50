#ifndef COFLOW_FFI_H
#define COFLOW_FFI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum CoflowStatus {
  COFLOW_STATUS_OK = 0,
  COFLOW_STATUS_NULL_ARGUMENT = 1,
  COFLOW_STATUS_INVALID_UTF8 = 2,
  COFLOW_STATUS_PARSE = 3,
  COFLOW_STATUS_INVALID_INSTANCE = 4,
  COFLOW_STATUS_NETWORK_MISMATCH = 5,
  COFLOW_STATUS_OVER_LIMIT = 6,
  COFLOW_STATUS_INVALID_ARGUMENT = 7,
  COFLOW_STATUS_IO = 8,
  COFLOW_STATUS_INTERNAL = 9,
  COFLOW_STATUS_PANIC = 10,
} CoflowStatus;

/**
 * Values accepted by the `scheduler` argument of [`coflow_schedule_run`].
 */
typedef enum CoflowScheduler {
  COFLOW_SCHEDULER_FLS = 0,
  COFLOW_SCHEDULER_FLPT = 1,
  COFLOW_SCHEDULER_CLS = 2,
  COFLOW_SCHEDULER_FLPT_H = 3,
  COFLOW_SCHEDULER_CLS_H = 4,
  COFLOW_SCHEDULER_WEAVER = 5,
} CoflowScheduler;

/**
 * Values accepted by the `granularity` argument of [`coflow_oracle`].
 */
typedef enum CoflowGranularity {
  COFLOW_GRANULARITY_FLOW = 0,
  COFLOW_GRANULARITY_COFLOW = 1,
} CoflowGranularity;

/**
 * Opaque instance handle.
 */
typedef struct CoflowInstance CoflowInstance;

/**
 * Opaque handle to a scheduler run and its realized schedule.
 */
typedef struct CoflowSchedule CoflowSchedule;

/**
 * Exact rational `num / den`, `den > 0`.
 */
typedef struct CoflowRational {
  int64_t num;
  int64_t den;
} CoflowRational;

typedef struct CoflowBounds {
  struct CoflowRational port_lb;
  struct CoflowRational flow_lb;
  struct CoflowRational combined;
} CoflowBounds;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread. The pointer stays valid
 * until the next failing call on the same thread.
 */
const char *coflow_last_error(void);

/**
 * Parses an instance in the native text format.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a writable pointer.
 */
enum CoflowStatus coflow_instance_parse(const char *text, struct CoflowInstance **out);

/**
 * Loads an instance file in the native text format.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a writable pointer.
 */
enum CoflowStatus coflow_instance_load(const char *path, struct CoflowInstance **out);

/**
 * Generates `coflows` coflows from the standard mixture on `cores`
 * unit-speed `ports x ports` cores. Same seed, same instance.
 *
 * # Safety
 * `out` must be a writable pointer.
 */
enum CoflowStatus coflow_instance_generate(uint64_t seed,
                                           uint32_t coflows,
                                           uint32_t ports,
                                           uint32_t cores,
                                           struct CoflowInstance **out);

/**
 * Releases an instance. Null is ignored.
 *
 * # Safety
 * `instance` must come from a `coflow_instance_*` constructor and not be
 * freed twice.
 */
void coflow_instance_free(struct CoflowInstance *instance);

/**
 * # Safety
 * `instance` must be a live handle and `out` a writable pointer.
 */
enum CoflowStatus coflow_instance_flow_count(const struct CoflowInstance *instance, size_t *out);

/**
 * # Safety
 * `instance` must be a live handle and `out` a writable pointer.
 */
enum CoflowStatus coflow_instance_coflow_count(const struct CoflowInstance *instance, size_t *out);

/**
 * # Safety
 * `instance` must be a live handle and `out` a writable pointer.
 */
enum CoflowStatus coflow_instance_core_count(const struct CoflowInstance *instance, size_t *out);

/**
 * Lower bounds on the optimal makespan.
 *
 * # Safety
 * `instance` must be a live handle and `out` a writable pointer.
 */
enum CoflowStatus coflow_lower_bounds(const struct CoflowInstance *instance,
                                      struct CoflowBounds *out);

/**
 * Runs a scheduler (a [`CoflowScheduler`] value) and realizes its schedule.
 *
 * # Safety
 * `instance` must be a live handle and `out` a writable pointer.
 */
enum CoflowStatus coflow_schedule_run(const struct CoflowInstance *instance,
                                      uint32_t scheduler,
                                      struct CoflowSchedule **out);

/**
 * Releases a schedule. Null is ignored.
 *
 * # Safety
 * `schedule` must come from [`coflow_schedule_run`] and not be freed twice.
 */
void coflow_schedule_free(struct CoflowSchedule *schedule);

/**
 * # Safety
 * `schedule` must be a live handle and `out` a writable pointer.
 */
enum CoflowStatus coflow_schedule_makespan(const struct CoflowSchedule *schedule,
                                           struct CoflowRational *out);

/**
 * Completion time of one core.
 *
 * # Safety
 * `schedule` must be a live handle and `out` a writable pointer.
 */
enum CoflowStatus coflow_schedule_core_span(const struct CoflowSchedule *schedule,
                                            size_t core,
                                            struct CoflowRational *out);

/**
 * Core a flow was placed on.
 *
 * # Safety
 * `schedule` must be a live handle and `out` a writable pointer.
 */
enum CoflowStatus coflow_schedule_core_of(const struct CoflowSchedule *schedule,
                                          size_t flow,
                                          size_t *out);

/**
 * Slice dump, one `core,start,duration,i->j@k[,...]` line per slice. The
 * string is owned by the schedule.
 *
 * # Safety
 * `schedule` must be a live handle; null is returned otherwise.
 */
const char *coflow_schedule_dump(const struct CoflowSchedule *schedule);

/**
 * Exhaustive optimum (a [`CoflowGranularity`] value selects the level).
 * Fails with `OverLimit` when `m^items` exceeds `max_states`.
 *
 * # Safety
 * `instance` must be a live handle and `out` a writable pointer.
 */
enum CoflowStatus coflow_oracle(const struct CoflowInstance *instance,
                                uint32_t granularity,
                                uint64_t max_states,
                                struct CoflowRational *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COFLOW_FFI_H */
