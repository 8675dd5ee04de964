#ifndef SCALEKIT_H
#define SCALEKIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes. Zero is success.
typedef enum ScalekitStatus {
  SCALEKIT_STATUS_OK = 0,
  SCALEKIT_STATUS_NULL_POINTER = 1,
  SCALEKIT_STATUS_INVALID_UTF8 = 2,
  SCALEKIT_STATUS_BUFFER_TOO_SMALL = 3,
  SCALEKIT_STATUS_PANIC = 4,
  SCALEKIT_STATUS_DOMAIN_ERROR = 10,
  SCALEKIT_STATUS_DIVERGENT_INTEGRAL = 11,
  SCALEKIT_STATUS_DEGENERATE_INPUT = 12,
  SCALEKIT_STATUS_NO_BRACKET = 13,
  SCALEKIT_STATUS_INFEASIBLE_CONSTRAINT = 14,
  SCALEKIT_STATUS_UNKNOWN_DISTRIBUTION = 15,
  SCALEKIT_STATUS_PARAMETER_OUT_OF_DOMAIN = 16,
  SCALEKIT_STATUS_NON_MONOTONE_MAP = 17,
  SCALEKIT_STATUS_GRID_TOO_NARROW = 18,
  SCALEKIT_STATUS_RINGING_EXCEEDS_TOLERANCE = 19,
  SCALEKIT_STATUS_RENORMALIZATION_DRIFT = 20,
  SCALEKIT_STATUS_INVALID_SPEC = 21,
  SCALEKIT_STATUS_UNKNOWN_SCENARIO = 22,
  SCALEKIT_STATUS_MALFORMED = 23,
  SCALEKIT_STATUS_IO = 24,
} ScalekitStatus;

// A normalized density on a grid.
typedef struct ScalekitDistribution ScalekitDistribution;

// Result of fitting a scenario against its predicted law.
typedef struct ScalekitFit {
  double ks_statistic;
  double threshold;
  size_t sample_count;
  bool pass;
} ScalekitFit;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copy the last error message of this thread into `buf` (NUL-terminated,
// truncated to `len`). Returns the full message length without the NUL.
size_t scalekit_last_error_message(char *buf, size_t len);

// Number of catalog entries.
size_t scalekit_catalog_len(void);

// Name of catalog entry `index` as a static NUL-terminated string, or null
// when out of range.
const char *scalekit_catalog_name(size_t index);

// Normalize catalog entry `name` with `count` named parameters.
enum ScalekitStatus scalekit_distribution_from_catalog(const char *name,
                                                       const char *const *param_names,
                                                       const double *param_values,
                                                       size_t count,
                                                       struct ScalekitDistribution **out);

// Normalize a `DistributionSpec` given as JSON.
enum ScalekitStatus scalekit_distribution_from_spec_json(const char *json,
                                                         struct ScalekitDistribution **out);

// Symmetric stable density with characteristic function `e^{-phi |x|^gamma}`.
// `points = 0` or `half_width <= 0` selects the default layout.
enum ScalekitStatus scalekit_levy_stable(double gamma,
                                         double phi,
                                         size_t points,
                                         double half_width,
                                         struct ScalekitDistribution **out);

// Release a handle. Null is ignored.
void scalekit_distribution_free(struct ScalekitDistribution *dist);

// Number of grid points, 0 for a null handle.
size_t scalekit_distribution_len(const struct ScalekitDistribution *dist);

// Copy grid and density into caller buffers of `capacity` values each.
// Either buffer may be null to skip it.
enum ScalekitStatus scalekit_distribution_table(const struct ScalekitDistribution *dist,
                                                double *grid,
                                                double *density,
                                                size_t capacity);

// Density at `y`.
enum ScalekitStatus scalekit_distribution_density_at(const struct ScalekitDistribution *dist,
                                                     double y,
                                                     double *out);

// Normalization constant `psi` and the reported quadrature error.
enum ScalekitStatus scalekit_distribution_normalization(const struct ScalekitDistribution *dist,
                                                        double *psi,
                                                        double *quadrature_error);

// Differential entropy.
enum ScalekitStatus scalekit_distribution_entropy(const struct ScalekitDistribution *dist,
                                                  double *out);

// Laplace transform `E[e^{-sY}]` of a density on `y >= 0`.
enum ScalekitStatus scalekit_distribution_laplace(const struct ScalekitDistribution *dist,
                                                  double s,
                                                  double *out);

// Compare a catalog recipe with its closed form.
enum ScalekitStatus scalekit_verify_entry(const char *name,
                                          const char *const *param_names,
                                          const double *param_values,
                                          size_t count,
                                          double *max_relerr,
                                          bool *pass);

// Simulate a shipped scenario and fit it against its predicted law.
enum ScalekitStatus scalekit_run_scenario(const char *name,
                                          size_t sample_count,
                                          uint64_t seed,
                                          struct ScalekitFit *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SCALEKIT_H */
