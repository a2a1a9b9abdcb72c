#ifndef HARDWINDOW_H
#define HARDWINDOW_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HwStatus {
  HW_STATUS_OK = 0,
  HW_STATUS_INVALID_ARGUMENT = 1,
  HW_STATUS_NOT_OBTUSE = 2,
  HW_STATUS_NOT_LOWEST_TERMS = 3,
  HW_STATUS_SHARES_LARGEST_PRIME = 4,
  HW_STATUS_BELOW_ASYMPTOTIC_DOMAIN = 5,
  HW_STATUS_NUMERICAL = 6,
  HW_STATUS_NULL_POINTER = 7,
  HW_STATUS_INDEX_OUT_OF_RANGE = 8,
  HW_STATUS_PANIC = 9,
} HwStatus;

typedef enum HwMode {
  HW_MODE_TWO_PQ = 0,
  HW_MODE_TWO_OF_THREE = 1,
} HwMode;

typedef enum HwFilter {
  HW_FILTER_ALL = 0,
  HW_FILTER_PRIMES = 1,
  HW_FILTER_OMEGA_PLUS = 2,
} HwFilter;

/**
 * Opaque exceptional set of residue classes.
 */
typedef struct HwExceptionalSet HwExceptionalSet;

/**
 * Opaque survey result.
 */
typedef struct HwSurvey HwSurvey;

/**
 * Witness search result. `witness` is 0 when the triangle is not ruled out.
 */
typedef struct HwWitness {
  bool ruled_out;
  uint64_t witness;
  bool held_p;
  bool held_q;
  bool held_r;
  uint64_t s_count;
} HwWitness;

typedef struct HwSpectral {
  uint64_t s_direct;
  double main_term;
  double error_term;
  double spectral_sum;
  double residual;
} HwSpectral;

typedef struct HwErrorBound {
  uint64_t prime;
  uint64_t d;
  uint64_t exceptional_size;
  double exceptional_bound;
  double mean_s;
  double mean_bound;
  uint64_t checked;
  uint64_t excluded;
  double max_ratio;
  bool pass;
} HwErrorBound;

/**
 * One survey row. Fields that are not available are -1.
 */
typedef struct HwSurveyRecord {
  uint64_t n;
  uint64_t p_plus;
  int8_t omega_plus;
  uint64_t h_size;
  uint64_t ruled_two_pq;
  uint64_t ruled_two_of_three;
  uint64_t s_ge5;
  int64_t in_c;
  uint64_t q_div_p;
  double frac_ruled;
  int64_t in_e;
} HwSurveyRecord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message on this thread as a new string, or NULL if none.
 * Free with [`hw_string_free`].
 */
char *hw_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library and not yet freed.
 */
void hw_string_free(char *s);

/**
 * # Safety
 * `out` must be valid for writing one `int64_t`.
 */
enum HwStatus hw_ramanujan(uint64_t n, int64_t t, int64_t *out);

/**
 * # Safety
 * `out` must be valid for writing one `uint64_t`.
 */
enum HwStatus hw_count_s(uint64_t p, uint64_t q, uint64_t n, uint64_t *out);

/**
 * `mode` is an `HwMode` value.
 *
 * # Safety
 * `out` must be valid for writing one `HwWitness`.
 */
enum HwStatus hw_find_witness(uint64_t p, uint64_t q, uint64_t n, uint32_t mode, struct HwWitness *out);

/**
 * # Safety
 * `out` must be valid for writing one `HwSpectral`.
 */
enum HwStatus hw_spectral(uint64_t p, uint64_t q, uint64_t n, struct HwSpectral *out);

/**
 * # Safety
 * `out` must be valid for writing one `HwErrorBound`.
 */
enum HwStatus hw_verify_error_bound(uint64_t n, uint64_t q, double r, struct HwErrorBound *out);

/**
 * Build the exceptional set for `(n, q, R)`.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum HwStatus hw_exceptional_set_new(uint64_t n, uint64_t q, double r, struct HwExceptionalSet **out);

/**
 * `d = P^α` of the set.
 *
 * # Safety
 * `set` must be a live handle from [`hw_exceptional_set_new`].
 */
uint64_t hw_exceptional_set_modulus(const struct HwExceptionalSet *set);

/**
 * Copy up to `cap` member classes into `buf` and return the total number
 * of members. Pass `buf = NULL` to query the size.
 *
 * # Safety
 * `set` must be a live handle; `buf` must be NULL or valid for `cap` writes.
 */
size_t hw_exceptional_set_members(const struct HwExceptionalSet *set, uint64_t *buf, size_t cap);

/**
 * # Safety
 * `set` must be NULL or a handle from [`hw_exceptional_set_new`] that has
 * not been freed.
 */
void hw_exceptional_set_free(struct HwExceptionalSet *set);

/**
 * Survey every admissible denominator in `[n_min, n_max]`. `eta_num/eta_den`
 * truncates to `min(p, q) > eta·n`; pass `0/1` for none. `filter` is an
 * `HwFilter` value.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum HwStatus hw_survey_new(uint64_t n_min, uint64_t n_max, uint32_t filter, uint64_t eta_num, uint64_t eta_den, bool deep_audit, struct HwSurvey **out);

/**
 * # Safety
 * `survey` must be a live handle from [`hw_survey_new`].
 */
size_t hw_survey_len(const struct HwSurvey *survey);

/**
 * # Safety
 * `survey` must be a live handle; `out` valid for one `HwSurveyRecord`.
 */
enum HwStatus hw_survey_get(const struct HwSurvey *survey, size_t index, struct HwSurveyRecord *out);

/**
 * The survey as CSV text (header included). Free with [`hw_string_free`].
 * Returns NULL if `survey` is NULL.
 *
 * # Safety
 * `survey` must be NULL or a live handle.
 */
char *hw_survey_csv(const struct HwSurvey *survey);

/**
 * # Safety
 * `survey` must be NULL or a handle from [`hw_survey_new`] that has not
 * been freed.
 */
void hw_survey_free(struct HwSurvey *survey);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HARDWINDOW_H */
