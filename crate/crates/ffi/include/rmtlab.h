#ifndef RMTLAB_H
#define RMTLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum RmtlabStatus {
  RMTLAB_STATUS_OK = 0,
  RMTLAB_STATUS_NULL_POINTER = 1,
  RMTLAB_STATUS_RANGE = 2,
  RMTLAB_STATUS_INSTABILITY = 3,
  RMTLAB_STATUS_ACCURACY = 4,
  RMTLAB_STATUS_NUMERICAL = 5,
  RMTLAB_STATUS_INSUFFICIENT_DATA = 6,
  RMTLAB_STATUS_PARSE = 7,
  RMTLAB_STATUS_INPUT = 8,
  RMTLAB_STATUS_FEASIBILITY = 9,
  RMTLAB_STATUS_LOGIC = 10,
  RMTLAB_STATUS_CONFIG = 11,
  RMTLAB_STATUS_IO = 12,
  RMTLAB_STATUS_PANIC = 13,
} RmtlabStatus;

typedef enum RmtlabWalker {
  RMTLAB_WALKER_ONE_SIDED = 0,
  RMTLAB_WALKER_RETURNING = 1,
} RmtlabWalker;

/**
 * Tabulated CDF.
 */
typedef struct RmtlabTable RmtlabTable;

/**
 * Ascending zeta zero heights.
 */
typedef struct RmtlabZeros RmtlabZeros;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *rmtlab_version(void);

/**
 * Copies the last error message of this thread into `buf` (truncated,
 * always NUL-terminated) and returns the full message length, or 0 when
 * no error has been recorded.
 *
 * # Safety
 * `buf` must be valid for `cap` bytes or null.
 */
size_t rmtlab_last_error(char *buf, size_t cap);

/**
 * Tracy–Widom table for `beta` in {1, 2, 4} on `[t_min, t_max]`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum RmtlabStatus rmtlab_tw_table_new(uint8_t beta,
                                      double t_min,
                                      double t_max,
                                      double step,
                                      struct RmtlabTable **out);

/**
 * Sine-kernel nearest-neighbour spacing CDF on `[0, u_max]`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum RmtlabStatus rmtlab_spacing_table_new(double u_max, double step, struct RmtlabTable **out);

/**
 * # Safety
 * `table` must come from a `_new` function and not be used afterwards.
 */
void rmtlab_table_free(struct RmtlabTable *table);

/**
 * # Safety
 * Pointers must be valid.
 */
enum RmtlabStatus rmtlab_table_len(const struct RmtlabTable *table, size_t *out);

/**
 * CDF at `t`, clamped to the end values outside the grid.
 *
 * # Safety
 * Pointers must be valid.
 */
enum RmtlabStatus rmtlab_table_eval(const struct RmtlabTable *table, double t, double *out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum RmtlabStatus rmtlab_table_quantile(const struct RmtlabTable *table, double p, double *out);

/**
 * Mean and variance of the tabulated law.
 *
 * # Safety
 * Pointers must be valid.
 */
enum RmtlabStatus rmtlab_table_moments(const struct RmtlabTable *table,
                                       double *mean,
                                       double *variance);

/**
 * Kolmogorov–Smirnov distance of `n` values against the table.
 *
 * # Safety
 * `values` must hold `n` doubles; other pointers must be valid.
 */
enum RmtlabStatus rmtlab_ks_distance(const double *values,
                                     size_t n,
                                     const struct RmtlabTable *table,
                                     double *out);

/**
 * Sine-kernel gap probability of `(-x, x)`.
 *
 * # Safety
 * `out` must be valid.
 */
enum RmtlabStatus rmtlab_gap_probability(double x, double *out);

/**
 * Airy-kernel Fredholm determinant on `(t, inf)`, i.e. F2(t).
 *
 * # Safety
 * `out` must be valid.
 */
enum RmtlabStatus rmtlab_airy_det(double t, double *out);

/**
 * # Safety
 * `out` must be valid.
 */
enum RmtlabStatus rmtlab_number_variance(double s, double *out);

/**
 * Pile counts of `draws` uniform permutations of size `n`.
 *
 * # Safety
 * `out` must hold `draws` values.
 */
enum RmtlabStatus rmtlab_patience_sample(size_t n, size_t draws, uint64_t seed, uint32_t *out);

/**
 * Walker distance statistics.
 *
 * # Safety
 * `out` must hold `draws` values.
 */
enum RmtlabStatus rmtlab_walkers_sample(enum RmtlabWalker variant,
                                        size_t n,
                                        size_t draws,
                                        uint64_t seed,
                                        uint32_t *out);

/**
 * Edge statistics `(lambda_max - z_N) / s_N` of `draws` Gaussian-ensemble
 * matrices.
 *
 * # Safety
 * `out` must hold `draws` values.
 */
enum RmtlabStatus rmtlab_edge_sample(uint8_t beta,
                                     size_t n,
                                     size_t draws,
                                     uint64_t seed,
                                     double *out);

/**
 * Loads a zero table (one height per line, `#` comments).
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be valid.
 */
enum RmtlabStatus rmtlab_zeros_load(const char *path, struct RmtlabZeros **out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum RmtlabStatus rmtlab_zeros_len(const struct RmtlabZeros *zeros, size_t *out);

/**
 * Writes `γ log γ / 2π` for every zero into `out`.
 *
 * # Safety
 * `out` must hold as many values as the table.
 */
enum RmtlabStatus rmtlab_zeros_unfold(const struct RmtlabZeros *zeros, double *out);

/**
 * # Safety
 * `zeros` must come from `rmtlab_zeros_load` and not be used afterwards.
 */
void rmtlab_zeros_free(struct RmtlabZeros *zeros);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RMTLAB_H */
