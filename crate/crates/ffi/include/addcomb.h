#ifndef ADDCOMB_H
#define ADDCOMB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AcStatus {
  AC_STATUS_OK = 0,
  /**
   * A `verify` run finished with at least one failed check.
   */
  AC_STATUS_CHECK_FAILED = 1,
  AC_STATUS_PARSE = 2,
  AC_STATUS_FAMILY_TOO_LARGE = 3,
  AC_STATUS_CONSTRUCTION_FAILED = 4,
  AC_STATUS_NULL_POINTER = 5,
  AC_STATUS_OUT_OF_RANGE = 6,
  AC_STATUS_GROUP_MISMATCH = 7,
  AC_STATUS_EMPTY_SET = 8,
  AC_STATUS_INVALID_ARGUMENT = 9,
  /**
   * The value does not fit the output type.
   */
  AC_STATUS_OVERFLOW = 10,
  AC_STATUS_BUFFER_TOO_SMALL = 11,
  AC_STATUS_PANIC = 12,
} AcStatus;

typedef enum AcExactness {
  AC_EXACTNESS_EXACT = 0,
  AC_EXACTNESS_LOWER_BOUND = 1,
  AC_EXACTNESS_UPPER_BOUND = 2,
} AcExactness;

/**
 * Opaque group handle.
 */
typedef struct AcGroup AcGroup;

/**
 * Opaque set handle.
 */
typedef struct AcSet AcSet;

/**
 * `num / den` in lowest terms with `den > 0`; `is_infinite` marks `+inf`.
 */
typedef struct AcValue {
  int64_t num;
  int64_t den;
  bool is_infinite;
  enum AcExactness exactness;
} AcValue;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `cap`). Returns the full message length.
 *
 * # Safety
 * `buf` must be null or point to `cap` writable bytes.
 */
size_t ac_last_error(char *buf, size_t cap);

/**
 * Parses a group spec such as `Z/4xZ/6` or `F2^7`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` a valid pointer.
 */
enum AcStatus ac_group_parse(const char *spec, struct AcGroup **out);

/**
 * # Safety
 * `g` must be null or a handle from [`ac_group_parse`] not yet freed.
 */
void ac_group_free(struct AcGroup *g);

/**
 * # Safety
 * `g` must be a live group handle and `out` a valid pointer.
 */
enum AcStatus ac_group_order(const struct AcGroup *g, uint64_t *out);

/**
 * Builds a set from canonical element indices.
 *
 * # Safety
 * `indices` must point to `n` values (or be null with `n == 0`).
 */
enum AcStatus ac_set_from_indices(const struct AcGroup *g,
                                  const uint64_t *indices,
                                  size_t n,
                                  struct AcSet **out);

/**
 * Parses a set body such as `{0, 5, (1,2)}`.
 *
 * # Safety
 * `body` must be a NUL-terminated string.
 */
enum AcStatus ac_set_parse(const struct AcGroup *g, const char *body, struct AcSet **out);

/**
 * # Safety
 * `s` must be null or a live set handle.
 */
void ac_set_free(struct AcSet *s);

/**
 * # Safety
 * `s` must be a live set handle.
 */
enum AcStatus ac_set_len(const struct AcSet *s, size_t *out);

/**
 * Writes the members in increasing index order. With `buf` too small, nothing
 * is written, `*len` receives the size and the call returns `BufferTooSmall`.
 *
 * # Safety
 * `buf` must point to `cap` writable values (or be null with `cap == 0`).
 */
enum AcStatus ac_set_indices(const struct AcSet *s, uint64_t *buf, size_t cap, size_t *len);

/**
 * `A + B`.
 *
 * # Safety
 * `a`, `b` must be live set handles and `out` a valid pointer.
 */
enum AcStatus ac_sumset(const struct AcSet *a, const struct AcSet *b, struct AcSet **out);

/**
 * `A - B`.
 *
 * # Safety
 * `a`, `b` must be live set handles and `out` a valid pointer.
 */
enum AcStatus ac_difference_set(const struct AcSet *a, const struct AcSet *b, struct AcSet **out);

/**
 * `E(A, B)`.
 *
 * # Safety
 * `a`, `b` must be live set handles and `out` a valid pointer.
 */
enum AcStatus ac_energy(const struct AcSet *a, const struct AcSet *b, uint64_t *out);

/**
 * `D[A;B] = |A+B| / |A|`.
 *
 * # Safety
 * `a`, `b` must be live set handles and `out` a valid pointer.
 */
enum AcStatus ac_doubling(const struct AcSet *a, const struct AcSet *b, struct AcValue *out);

/**
 * `S_T[A;B]`; `t` is a rational `>= 1`, `"inf"`, or null for `inf`.
 *
 * # Safety
 * `a`, `b` must be live set handles, `t` null or NUL-terminated.
 */
enum AcStatus ac_s_quantity(const struct AcSet *a,
                            const struct AcSet *b,
                            const char *t,
                            uint32_t budget_bits,
                            struct AcValue *out);

/**
 * `E_T[A;B]`; `t` as for [`ac_s_quantity`].
 *
 * # Safety
 * `a`, `b` must be live set handles, `t` null or NUL-terminated.
 */
enum AcStatus ac_e_quantity(const struct AcSet *a,
                            const struct AcSet *b,
                            const char *t,
                            uint32_t budget_bits,
                            struct AcValue *out);

/**
 * `K(A)`.
 *
 * # Safety
 * `a` must be a live set handle.
 */
enum AcStatus ac_shift_ratio(const struct AcSet *a, struct AcValue *out);

/**
 * `k(A)`.
 *
 * # Safety
 * `a` must be a live set handle.
 */
enum AcStatus ac_longest_ap(const struct AcSet *a, struct AcValue *out);

/**
 * `dim(A)`.
 *
 * # Safety
 * `a` must be a live set handle.
 */
enum AcStatus ac_additive_dimension(const struct AcSet *a,
                                    uint32_t budget_bits,
                                    struct AcValue *out);

/**
 * `min |A+X|/|X|` over nonempty `X ⊆ A`.
 *
 * # Safety
 * `a` must be a live set handle.
 */
enum AcStatus ac_petridis_ratio(const struct AcSet *a, uint32_t budget_bits, struct AcValue *out);

/**
 * Runs `checks` (comma-separated, or `all`) over `family` and stores the
 * JSON summary in `*json_out`, to be released with [`ac_string_free`].
 * Returns `CheckFailed` when any check failed.
 *
 * # Safety
 * `family` and `checks` must be NUL-terminated; `json_out` a valid pointer.
 */
enum AcStatus ac_verify_family(const char *family,
                               const char *checks,
                               uint32_t budget_bits,
                               char **json_out);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void ac_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ADDCOMB_H */
