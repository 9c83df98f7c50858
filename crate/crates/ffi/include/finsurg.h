#ifndef FINSURG_H
#define FINSURG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum FinsurgMatchKind {
  FINSURG_MATCH_KIND_TORUS = 0,
  FINSURG_MATCH_KIND_CABLE = 1,
  FINSURG_MATCH_KIND_HYPERBOLIC = 2,
  FINSURG_MATCH_KIND_UNEXPECTED = 3,
} FinsurgMatchKind;

typedef enum FinsurgStatus {
  FINSURG_STATUS_OK = 0,
  FINSURG_STATUS_NULL_POINTER = 1,
  FINSURG_STATUS_INVALID_ARGUMENT = 2,
  FINSURG_STATUS_INDEX_OUT_OF_RANGE = 3,
  FINSURG_STATUS_NOT_ADMISSIBLE = 4,
  FINSURG_STATUS_OVERFLOW = 5,
  FINSURG_STATUS_BUFFER_TOO_SMALL = 6,
  FINSURG_STATUS_INTERNAL = 7,
} FinsurgStatus;

/**
 * A table of correction terms.
 */
typedef struct FinsurgDTable FinsurgDTable;

/**
 * Search output together with catalog matches.
 */
typedef struct FinsurgSearchResult FinsurgSearchResult;

/**
 * One search candidate. The t-sequence and match label are read separately.
 */
typedef struct FinsurgCandidateView {
  uint64_t p;
  uint64_t q;
  /**
   * +1 or -1.
   */
  int32_t epsilon;
  uint64_t a;
  uint64_t b;
  uint32_t genus;
  /**
   * Length of the t-sequence, `genus + 1`.
   */
  size_t t_len;
  enum FinsurgMatchKind match_kind;
} FinsurgCandidateView;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Free with
 * [`finsurg_string_free`].
 */
char *finsurg_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void finsurg_string_free(char *s);

/**
 * Static version string.
 */
const char *finsurg_version(void);

/**
 * `d(L(p,q), i)` as a reduced fraction `num/den`, `den > 0`.
 *
 * # Safety
 * `num` and `den` must be valid for writes.
 */
enum FinsurgStatus finsurg_d_lens(uint64_t p, int64_t q, uint64_t i, int64_t *num, int64_t *den);

/**
 * `d(L(p,q), ·)`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum FinsurgStatus finsurg_d_table_lens(uint64_t p, int64_t q, struct FinsurgDTable **out);

/**
 * `d(T(p/q), ·)` for the trefoil-exterior filling, `p >= q >= 1`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum FinsurgStatus finsurg_d_table_trefoil(uint64_t p, uint64_t q, struct FinsurgDTable **out);

/**
 * Number of entries; 0 for a null handle.
 *
 * # Safety
 * `t` must be null or a live table handle.
 */
size_t finsurg_d_table_len(const struct FinsurgDTable *t);

/**
 * # Safety
 * `t` must be a live table handle; `num` and `den` valid for writes.
 */
enum FinsurgStatus finsurg_d_table_get(const struct FinsurgDTable *t,
                                       size_t i,
                                       int64_t *num,
                                       int64_t *den);

/**
 * # Safety
 * `t` must be null or a live table handle; it is invalid afterwards.
 */
void finsurg_d_table_free(struct FinsurgDTable *t);

/**
 * Runs the search up to `p_max`. `full_scan` disables pruning;
 * `prune_threshold` is ignored when it is set. `jobs = 0` uses all cores.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum FinsurgStatus finsurg_search(uint64_t p_max,
                                  bool full_scan,
                                  uint64_t prune_threshold,
                                  uint32_t jobs,
                                  struct FinsurgSearchResult **out);

/**
 * # Safety
 * `r` must be null or a live search handle.
 */
size_t finsurg_search_len(const struct FinsurgSearchResult *r);

/**
 * # Safety
 * `r` must be a live search handle; `out` valid for writes.
 */
enum FinsurgStatus finsurg_search_get(const struct FinsurgSearchResult *r,
                                      size_t idx,
                                      struct FinsurgCandidateView *out);

/**
 * Copies the t-sequence into `buf` (capacity `cap`); `*out_len` always
 * receives the full length, so a short buffer can be retried.
 *
 * # Safety
 * `r` must be a live search handle, `buf` valid for `cap` writes, `out_len`
 * valid for writes.
 */
enum FinsurgStatus finsurg_search_tseq(const struct FinsurgSearchResult *r,
                                       size_t idx,
                                       uint32_t *buf,
                                       size_t cap,
                                       size_t *out_len);

/**
 * Match label such as `T(3,2)`, `[9,2;3,2]` or the hyperbolic references;
 * empty for unexpected candidates. Null on error. Free with
 * [`finsurg_string_free`].
 *
 * # Safety
 * `r` must be a live search handle.
 */
char *finsurg_search_match_label(const struct FinsurgSearchResult *r, size_t idx);

/**
 * # Safety
 * `r` must be null or a live search handle; it is invalid afterwards.
 */
void finsurg_search_free(struct FinsurgSearchResult *r);

/**
 * Torsion coefficients of the polynomial `a_0 + sum a_i (T^i + T^-i)` given
 * as `coeffs[0..len]`. Fails with `NotAdmissible` unless it is the
 * polynomial of an L-space knot, with `*out_len` set to 0.
 *
 * # Safety
 * `coeffs` valid for `len` reads, `buf` for `cap` writes, `out_len` for a write.
 */
enum FinsurgStatus finsurg_tseq_from_alexander(const int64_t *coeffs,
                                               size_t len,
                                               uint32_t *buf,
                                               size_t cap,
                                               size_t *out_len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FINSURG_H */
