#ifndef IFSP_H
#define IFSP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum IfspStatus {
  IFSP_STATUS_OK = 0,
  IFSP_STATUS_NULL_POINTER = 1,
  IFSP_STATUS_INVALID_ARGUMENT = 2,
  IFSP_STATUS_DOMAIN = 3,
  IFSP_STATUS_CONSTRUCTION = 4,
  IFSP_STATUS_NUMERIC = 5,
  IFSP_STATUS_INTEGRITY = 6,
  IFSP_STATUS_PARSE = 7,
  IFSP_STATUS_IO = 8,
  IFSP_STATUS_PANIC = 9,
} IfspStatus;

/**
 * Opaque handle to a continuous distribution.
 */
typedef struct IfspDistribution IfspDistribution;

/**
 * Opaque handle to an iterated function system with probabilities.
 */
typedef struct IfspSystem IfspSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next `ifsp_*` call on the same thread.
 */
const char *ifsp_last_error_message(void);

/**
 * Parses a specifier such as `exp:1`, `triangular`, `cantor`,
 * `tabulated:<csv>` or `empirical:<csv>`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string; `out` must be writable.
 */
enum IfspStatus ifsp_distribution_from_spec(const char *spec, struct IfspDistribution **out);

/**
 * # Safety
 * `dist` must come from this library and not be used afterwards.
 */
void ifsp_distribution_free(struct IfspDistribution *dist);

/**
 * `F(x)` for finite `x`.
 *
 * # Safety
 * `dist` must be a live handle; `out` must be writable.
 */
enum IfspStatus ifsp_distribution_cdf(const struct IfspDistribution *dist, double x, double *out);

/**
 * `F⁻¹(u)` for `u` in `[0, 1]`; `F⁻¹(1)` may be `+inf`.
 *
 * # Safety
 * `dist` must be a live handle; `out` must be writable.
 */
enum IfspStatus ifsp_distribution_quantile(const struct IfspDistribution *dist,
                                           double u,
                                           double *out);

/**
 * The `n`-map system `F⁻¹ ∘ u_i ∘ F` with equal probabilities.
 *
 * # Safety
 * `dist` must be a live handle; `out` must be writable.
 */
enum IfspStatus ifsp_system_theorem(const struct IfspDistribution *dist,
                                    size_t n,
                                    struct IfspSystem **out);

/**
 * `cantor` or `triangular`.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum IfspStatus ifsp_system_builtin(const char *name, struct IfspSystem **out);

/**
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum IfspStatus ifsp_system_from_json(const char *json, struct IfspSystem **out);

/**
 * Serializes a system; release the string with [`ifsp_string_free`].
 *
 * # Safety
 * `sys` must be a live handle; `out` must be writable.
 */
enum IfspStatus ifsp_system_to_json(const struct IfspSystem *sys, char **out);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void ifsp_string_free(char *s);

/**
 * # Safety
 * `sys` must come from this library and not be used afterwards.
 */
void ifsp_system_free(struct IfspSystem *sys);

/**
 * Number of maps, or 0 for a null handle.
 *
 * # Safety
 * `sys` must be null or a live handle.
 */
size_t ifsp_system_len(const struct IfspSystem *sys);

/**
 * Applies map `index` (1-based) to `x`.
 *
 * # Safety
 * `sys` must be a live handle; `out` must be writable.
 */
enum IfspStatus ifsp_system_apply(const struct IfspSystem *sys,
                                  size_t index,
                                  double x,
                                  double *out);

/**
 * Runs `steps` forward steps from `x0` on stream `(seed, stream_index)`.
 * `states` receives `steps + 1` values; `indices`, if not null, receives the
 * `steps` 1-based map indices.
 *
 * # Safety
 * `sys` must be a live handle; the buffers must hold the stated lengths.
 */
enum IfspStatus ifsp_simulate_forward(const struct IfspSystem *sys,
                                      double x0,
                                      size_t steps,
                                      uint64_t seed,
                                      uint64_t stream_index,
                                      double *states,
                                      uint32_t *indices);

/**
 * `count` independent reversed iterates of depth `depth`; sample `j` uses
 * stream `(seed, j)`. `out` receives `count` values.
 *
 * # Safety
 * `sys` must be a live handle; `out` must hold `count` values.
 */
enum IfspStatus ifsp_backward_batch(const struct IfspSystem *sys,
                                    double x0,
                                    size_t depth,
                                    size_t count,
                                    uint64_t seed,
                                    double *out);

/**
 * Exact one-sample KS distance of `len` samples to `dist`.
 *
 * # Safety
 * `samples` must hold `len` values; `dist` must be a live handle.
 */
enum IfspStatus ifsp_ks_distance(const double *samples,
                                 size_t len,
                                 const struct IfspDistribution *dist,
                                 double *out);

/**
 * One-step stationarity distance of `sys` against `dist` on a grid of
 * `grid_size` quantile midpoints.
 *
 * # Safety
 * `sys` and `dist` must be live handles; `out` must be writable.
 */
enum IfspStatus ifsp_one_step_distance(const struct IfspSystem *sys,
                                       const struct IfspDistribution *dist,
                                       size_t grid_size,
                                       double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IFSP_H */
