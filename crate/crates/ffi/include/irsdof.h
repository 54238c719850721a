#ifndef IRSDOF_H
#define IRSDOF_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum IrsdofStatus {
  IRSDOF_STATUS_OK = 0,
  IRSDOF_STATUS_NULL_POINTER = 1,
  IRSDOF_STATUS_INVALID_ARGUMENT = 2,
  IRSDOF_STATUS_SINGULAR_MATRIX = 3,
  IRSDOF_STATUS_RANK_DEFICIENT = 4,
  IRSDOF_STATUS_NON_CONVERGENT = 5,
  IRSDOF_STATUS_TOO_MANY_TARGETS = 6,
  IRSDOF_STATUS_TOO_FEW_ELEMENTS = 7,
  IRSDOF_STATUS_WEIGHT_SUM = 8,
  IRSDOF_STATUS_SIZE_OVERFLOW = 9,
  IRSDOF_STATUS_NOT_DECODABLE = 10,
  IRSDOF_STATUS_ZERO_SAMPLES = 11,
  IRSDOF_STATUS_DIMENSION = 12,
  IRSDOF_STATUS_CONFIG = 13,
  IRSDOF_STATUS_IO = 14,
  IRSDOF_STATUS_BUFFER_TOO_SMALL = 15,
  IRSDOF_STATUS_PANIC = 16,
} IrsdofStatus;

/**
 * One channel draw.
 */
typedef struct IrsdofChannel IrsdofChannel;

/**
 * System parameters (K, Q, geometry, blockage, SNR).
 */
typedef struct IrsdofConfig IrsdofConfig;

/**
 * A K×K network matrix.
 */
typedef struct IrsdofNetwork IrsdofNetwork;

/**
 * Monte Carlo estimate with its 95% interval.
 */
typedef struct IrsdofEstimate {
  double mean;
  double ci_low;
  double ci_high;
  uint64_t samples;
  uint64_t seed;
} IrsdofEstimate;

/**
 * Per-receiver outcome of an alignment check.
 */
typedef struct IrsdofReceiverReport {
  uint64_t dim_message;
  uint64_t dim_interference;
  uint64_t joint_rank;
  bool decodable;
} IrsdofReceiverReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next failing call on the same thread.
 */
const char *irsdof_last_error_message(void);

/**
 * Static name of a status code.
 */
const char *irsdof_status_name(enum IrsdofStatus status);

/**
 * Closed-form active lower bound on the sum DoF.
 */
double irsdof_active_lower_sum(size_t k, size_t q);

/**
 * Closed-form active upper bound on the sum DoF (NaN for K < 2).
 */
double irsdof_active_upper_sum(size_t k, size_t q);

/**
 * Reference outdoor geometry with blockage `hhat`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum IrsdofStatus irsdof_config_reference(size_t k,
                                          size_t q,
                                          double hhat,
                                          struct IrsdofConfig **out);

/**
 * Geometry scaled to unit-variance channel entries.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum IrsdofStatus irsdof_config_unit_variance(size_t k, size_t q, struct IrsdofConfig **out);

/**
 * Sets transmit SNR ρ and noise power N₀.
 *
 * # Safety
 * `cfg` must be a live handle from this library.
 */
enum IrsdofStatus irsdof_config_set_snr(struct IrsdofConfig *cfg, double rho, double n0);

/**
 * # Safety
 * `cfg` must be NULL or a handle from this library not yet freed.
 */
void irsdof_config_free(struct IrsdofConfig *cfg);

/**
 * Passive lower bound on the sum DoF. `workers == 0` uses all cores.
 *
 * # Safety
 * `cfg` must be a live handle; `out` must point to writable storage.
 */
enum IrsdofStatus irsdof_passive_lower_sum(const struct IrsdofConfig *cfg,
                                           size_t samples,
                                           uint64_t seed,
                                           size_t workers,
                                           struct IrsdofEstimate *out);

/**
 * Passive upper bound on the sum DoF.
 *
 * # Safety
 * `cfg` must be a live handle; `out` must point to writable storage.
 */
enum IrsdofStatus irsdof_passive_upper_sum(const struct IrsdofConfig *cfg,
                                           size_t samples,
                                           uint64_t seed,
                                           size_t workers,
                                           struct IrsdofEstimate *out);

/**
 * ε-relaxed lossless lower bound on the sum DoF.
 *
 * # Safety
 * `cfg` must be a live handle; `out` must point to writable storage.
 */
enum IrsdofStatus irsdof_eps_relaxed_lower_sum(const struct IrsdofConfig *cfg,
                                               double epsilon,
                                               size_t samples,
                                               uint64_t seed,
                                               size_t workers,
                                               struct IrsdofEstimate *out);

/**
 * Probability that an ε-relaxed lossless surface cancels every cross link.
 *
 * # Safety
 * `cfg` must be a live handle; `out` must point to writable storage.
 */
enum IrsdofStatus irsdof_lambda_probability(const struct IrsdofConfig *cfg,
                                            double epsilon,
                                            size_t samples,
                                            uint64_t seed,
                                            size_t workers,
                                            struct IrsdofEstimate *out);

/**
 * Mean fraction of users whose real-part SINR falls below `margin` under
 * phase alignment.
 *
 * # Safety
 * `cfg` must be a live handle; `out` must point to writable storage.
 */
enum IrsdofStatus irsdof_sinr_outage(const struct IrsdofConfig *cfg,
                                     double margin,
                                     size_t samples,
                                     uint64_t seed,
                                     size_t workers,
                                     struct IrsdofEstimate *out);

/**
 * Draws the channel of substream `index` under `seed`.
 *
 * # Safety
 * `cfg` must be a live handle; `out` must point to writable storage.
 */
enum IrsdofStatus irsdof_channel_sample(const struct IrsdofConfig *cfg,
                                        uint64_t seed,
                                        uint64_t index,
                                        struct IrsdofChannel **out);

/**
 * Writes `K` and `Q` of a channel.
 *
 * # Safety
 * `ch` must be a live handle; `k` and `q` must be writable.
 */
enum IrsdofStatus irsdof_channel_dims(const struct IrsdofChannel *ch, size_t *k, size_t *q);

/**
 * # Safety
 * `ch` must be NULL or a handle from this library not yet freed.
 */
void irsdof_channel_free(struct IrsdofChannel *ch);

/**
 * Parses K rows of `0`/`1` separated by newlines, `/` or `;`.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must point to writable storage.
 */
enum IrsdofStatus irsdof_network_parse(const char *text, struct IrsdofNetwork **out);

/**
 * # Safety
 * `net` must be NULL or a handle from this library not yet freed.
 */
void irsdof_network_free(struct IrsdofNetwork *net);

/**
 * Solves for active IRS coefficients realizing `net` and writes the
 * resulting K×K effective channel, row-major with entry `(j, i)` the gain
 * from transmitter `i` to receiver `j`. `tau_re`/`tau_im` receive the `Q`
 * coefficients and may be NULL when not needed.
 *
 * # Safety
 * Handles must be live. Non-null buffers must hold `tau_len` (≥ Q) and
 * `h_len` (≥ K²) doubles respectively.
 */
enum IrsdofStatus irsdof_solve_active(const struct IrsdofChannel *ch,
                                      const struct IrsdofNetwork *net,
                                      double *tau_re,
                                      double *tau_im,
                                      size_t tau_len,
                                      double *h_re,
                                      double *h_im,
                                      size_t h_len);

/**
 * Alignment check of the four-user preset at auxiliary size `n`. Writes up
 * to `len` receiver reports and the slot count T.
 *
 * # Safety
 * `reports` must hold `len` (≥ 4) entries; `slots` must be writable.
 */
enum IrsdofStatus irsdof_ia_check_example1(size_t n,
                                           uint64_t seed,
                                           struct IrsdofReceiverReport *reports,
                                           size_t len,
                                           uint64_t *slots);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IRSDOF_H */
