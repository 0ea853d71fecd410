#ifndef NUMEVENT_H
#define NUMEVENT_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum NumeventStatus {
  NUMEVENT_STATUS_OK = 0,
  NUMEVENT_STATUS_NULL_POINTER = 1,
  NUMEVENT_STATUS_INVALID_ARGUMENT = 2,
  /**
   * An event of the family is comparable to its complement.
   */
  NUMEVENT_STATUS_IMPROPER_EVENT = 3,
  /**
   * The request exceeds an enumeration cap or supported size.
   */
  NUMEVENT_STATUS_UNSUPPORTED = 4,
  NUMEVENT_STATUS_PANIC = 5,
} NumeventStatus;

typedef enum NumeventVerdict {
  NUMEVENT_VERDICT_EMBEDDABLE = 0,
  NUMEVENT_VERDICT_NOT_EMBEDDABLE = 1,
  NUMEVENT_VERDICT_UNDECIDED = 2,
} NumeventVerdict;

typedef enum NumeventContainerKind {
  NUMEVENT_CONTAINER_KIND_NONE = 0,
  /**
   * `size` holds `n` of `MO_n`.
   */
  NUMEVENT_CONTAINER_KIND_MO = 1,
  NUMEVENT_CONTAINER_KIND_BOOLEAN8 = 2,
  NUMEVENT_CONTAINER_KIND_BOOLEAN16 = 3,
  /**
   * `size` holds the number of elements of the closure.
   */
  NUMEVENT_CONTAINER_KIND_GFE_CLOSURE = 4,
} NumeventContainerKind;

/**
 * Opaque family of events over a numbered state space.
 */
typedef struct NumeventFamily NumeventFamily;

/**
 * Opaque complete correlation table.
 */
typedef struct NumeventTable NumeventTable;

typedef struct NumeventContainer {
  enum NumeventContainerKind kind;
  size_t size;
} NumeventContainer;

typedef struct NumeventClassification {
  enum NumeventVerdict verdict;
  struct NumeventContainer container;
  /**
   * Smallest Boolean algebra around the family when reported alongside
   * `container`, otherwise `None`.
   */
  struct NumeventContainer boolean_container;
} NumeventClassification;

typedef struct NumeventInequality {
  double min_value;
  double max_value;
  bool violated;
} NumeventInequality;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null after a
 * success. Valid until the next call into the library on the same thread.
 */
const char *numevent_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *numevent_version(void);

/**
 * Builds a family from `num_events * num_states` values, one event per row.
 *
 * # Safety
 * `values` must point to that many doubles and `out` must be writable.
 */
enum NumeventStatus numevent_family_new(const double *values,
                                        size_t num_events,
                                        size_t num_states,
                                        double eps,
                                        struct NumeventFamily **out);

/**
 * # Safety
 * `family` must come from [`numevent_family_new`] and not be used again.
 */
void numevent_family_free(struct NumeventFamily *family);

/**
 * Decides whether the family embeds into a classical model.
 *
 * # Safety
 * `family` must be a live handle and `out` writable.
 */
enum NumeventStatus numevent_classify(const struct NumeventFamily *family,
                                      struct NumeventClassification *out);

/**
 * Whether the family members at `family_indices` (2 to 4 of them) lie in a
 * Boolean subalgebra of the concrete logic whose members are the rows of
 * `logic`.
 *
 * # Safety
 * `logic` must hold `num_members * num_states` doubles, `family_indices`
 * `family_len` indices, and `out` must be writable.
 */
enum NumeventStatus numevent_logic_is_boolean(const double *logic,
                                              size_t num_members,
                                              size_t num_states,
                                              double eps,
                                              const size_t *family_indices,
                                              size_t family_len,
                                              bool *out);

/**
 * Subset sums: `out[I] = Σ_{J ⊆ I} h(J)`.
 *
 * # Safety
 * `values` and `out` must each hold `2^n - 1` doubles.
 */
enum NumeventStatus numevent_g_transform(size_t n, const double *values, double *out);

/**
 * Inverse of [`numevent_g_transform`].
 *
 * # Safety
 * `values` and `out` must each hold `2^n - 1` doubles.
 */
enum NumeventStatus numevent_f_transform(size_t n, const double *values, double *out);

/**
 * Whether every subset sum of the coefficients lies in `[0, 1]`.
 *
 * # Safety
 * `values` must hold `2^n - 1` doubles and `out` must be writable.
 */
enum NumeventStatus numevent_is_bell_valuation(size_t n, const double *values, bool *out);

/**
 * Number of integer Bell valuations for `n`, `2^(2^n - 1) - 1`.
 *
 * # Safety
 * `out` must be writable.
 */
enum NumeventStatus numevent_valuation_count(size_t n, uint64_t *out);

/**
 * Builds a complete table from `(2^n - 1) * num_states` values: row `k`
 * holds the correlation of the subset with mask `k + 1` at every state.
 *
 * # Safety
 * `values` must point to that many doubles and `out` must be writable.
 */
enum NumeventStatus numevent_table_new(size_t n,
                                       const double *values,
                                       size_t num_states,
                                       double eps,
                                       struct NumeventTable **out);

/**
 * # Safety
 * `table` must come from [`numevent_table_new`] and not be used again.
 */
void numevent_table_free(struct NumeventTable *table);

/**
 * Checks the pairwise Bell-like inequalities; `violations` receives how many
 * fail.
 *
 * # Safety
 * `table` must be a live handle and both outputs writable.
 */
enum NumeventStatus numevent_table_check_pairs(const struct NumeventTable *table,
                                               bool *consistent,
                                               size_t *violations);

/**
 * Evaluates `0 <= Σ f(I) p_I <= 1` at every state.
 *
 * # Safety
 * `coefficients` must hold `2^n - 1` doubles for the table's `n`.
 */
enum NumeventStatus numevent_table_evaluate(const struct NumeventTable *table,
                                            const double *coefficients,
                                            struct NumeventInequality *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NUMEVENT_H */
