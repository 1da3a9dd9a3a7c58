/* C interface to the pseudoae packing networks. */

#ifndef PSEUDOAE_H
#define PSEUDOAE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call. Anything other than `Ok` leaves the out
 * parameters untouched; `pae_last_error_message` explains the failure.
 */
typedef enum {
  /**
   * The call succeeded.
   */
  PAE_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  PAE_STATUS_NULL_POINTER = 1,
  /**
   * An argument failed validation (radix, precision, rounding, sizes).
   */
  PAE_STATUS_INVALID_ARGUMENT = 2,
  /**
   * A JSON document did not describe a valid network.
   */
  PAE_STATUS_INVALID_DOCUMENT = 3,
  /**
   * The input count does not match the network.
   */
  PAE_STATUS_SHAPE_MISMATCH = 4,
  /**
   * Exhaustive verification would exceed the case budget.
   */
  PAE_STATUS_BUDGET_EXCEEDED = 5,
  /**
   * The library panicked; treat the handle as poisoned.
   */
  PAE_STATUS_PANIC = 6,
} PaeStatus;

/**
 * A synthesized or loaded network. Created by `pae_network_synthesize` or
 * `pae_network_from_json`, released with `pae_network_free`.
 */
typedef struct PaeNetwork PaeNetwork;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Returns the library version as a static string; do not free it.
 */
const char *pae_version(void);

/**
 * Returns the message for the most recent failure on this thread as a fresh
 * string (free with `pae_string_free`), or null if nothing failed yet.
 */
char *pae_last_error_message(void);

/**
 * Frees a string returned by this library. Passing null is a no-op.
 *
 * # Safety
 * `text` must be null or a pointer previously returned by this library and
 * not yet freed.
 */
void pae_string_free(char *text);

/**
 * Builds the packing network for `n` inputs of `m` radix digits each.
 * `rounding` is "trunc" or "rne". On success `*out` owns the network.
 *
 * # Safety
 * `rounding` must be a NUL-terminated string and `out` a valid pointer.
 */
PaeStatus pae_network_synthesize(uint32_t n,
                                 uint32_t m,
                                 uint32_t radix,
                                 uint32_t precision,
                                 const char *rounding,
                                 PaeNetwork **out);

/**
 * Parses a network document produced by `pae_network_to_json` or the CLI.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
PaeStatus pae_network_from_json(const char *json, PaeNetwork **out);

/**
 * Serializes the network as a JSON document (free with `pae_string_free`).
 *
 * # Safety
 * `network` must come from this library and `out` must be a valid pointer.
 */
PaeStatus pae_network_to_json(const PaeNetwork *network, char **out);

/**
 * Releases a network handle. Passing null is a no-op.
 *
 * # Safety
 * `network` must be null or an unfreed handle from this library.
 */
void pae_network_free(PaeNetwork *network);

/**
 * Writes the number of network inputs to `*out`.
 *
 * # Safety
 * `network` must come from this library and `out` must be a valid pointer.
 */
PaeStatus pae_network_input_count(const PaeNetwork *network, uint32_t *out);

/**
 * Writes whether every tuple of the leading-zero domain reconstructs, that
 * is whether n*m fits the significand.
 *
 * # Safety
 * `network` must come from this library and `out` must be a valid pointer.
 */
PaeStatus pae_network_capacity_safe(const PaeNetwork *network, bool *out);

/**
 * Runs a forward pass and writes the reconstructed integers to `outputs`.
 * `output_count` must equal the input count of the network.
 *
 * # Safety
 * `inputs` must point to `input_count` values and `outputs` must have room
 * for `output_count` values.
 */
PaeStatus pae_network_forward(const PaeNetwork *network,
                              const int64_t *inputs,
                              uintptr_t input_count,
                              int64_t *outputs,
                              uintptr_t output_count);

/**
 * Runs a forward pass and returns the layer-by-layer trace as text (free
 * with `pae_string_free`).
 *
 * # Safety
 * `inputs` must point to `input_count` values and `out` must be valid.
 */
PaeStatus pae_network_trace_text(const PaeNetwork *network,
                                 const int64_t *inputs,
                                 uintptr_t input_count,
                                 char **out);

/**
 * Checks every tuple of the domain ("leading-zero" or "full") and returns
 * the verification report as JSON (free with `pae_string_free`).
 *
 * # Safety
 * `rounding`, `domain`, and `report_out` must be valid pointers.
 */
PaeStatus pae_verify_exhaustive(uint32_t n,
                                uint32_t m,
                                uint32_t radix,
                                uint32_t precision,
                                const char *rounding,
                                const char *domain,
                                uint64_t budget,
                                char **report_out);

/**
 * Checks `count` seeded random tuples of the domain and returns the
 * verification report as JSON (free with `pae_string_free`).
 *
 * # Safety
 * `rounding`, `domain`, and `report_out` must be valid pointers.
 */
PaeStatus pae_verify_sampled(uint32_t n,
                             uint32_t m,
                             uint32_t radix,
                             uint32_t precision,
                             const char *rounding,
                             const char *domain,
                             uint64_t count,
                             uint64_t seed,
                             char **report_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PSEUDOAE_H */
