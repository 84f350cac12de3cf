#ifndef ZERODENSITY_H
#define ZERODENSITY_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ZdStatus {
  ZD_STATUS_OK = 0,
  ZD_STATUS_NULL_POINTER = 1,
  ZD_STATUS_INVALID_ARGUMENT = 2,
  ZD_STATUS_IO = 3,
  ZD_STATUS_PARSE = 4,
  ZD_STATUS_TABLE = 5,
  ZD_STATUS_INCONCLUSIVE = 6,
  ZD_STATUS_NUMERIC = 7,
  ZD_STATUS_PANIC = 8,
} ZdStatus;

/**
 * Ranked candidates from a Newton scan.
 */
typedef struct ZdCandidates ZdCandidates;

/**
 * A parsed certificate.
 */
typedef struct ZdCertificate ZdCertificate;

/**
 * A loaded zero table.
 */
typedef struct ZdTable ZdTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *zd_version(void);

/**
 * Message for the last failure on this thread; empty if none.
 */
const char *zd_last_error_message(void);

/**
 * Loads a zero table. `declared_error` may be NULL to use the file header.
 *
 * # Safety
 * `path` must be a NUL-terminated string, `declared_error` NULL or one, and
 * `out` a valid pointer.
 */
enum ZdStatus zd_table_load(const char *path, const char *declared_error, struct ZdTable **out);

/**
 * # Safety
 * `table` must come from `zd_table_load` and not be used afterwards.
 */
void zd_table_free(struct ZdTable *table);

/**
 * # Safety
 * `table` must be a live handle and `out` valid.
 */
enum ZdStatus zd_table_len(const struct ZdTable *table, size_t *out);

/**
 * The `n`-th ordinate (1-based) rounded to double.
 *
 * # Safety
 * `table` must be a live handle and `out` valid.
 */
enum ZdStatus zd_table_ordinate(const struct ZdTable *table, size_t n, double *out);

/**
 * Writes the sha256 hex digest of the table file (64 chars plus NUL) into
 * `buf`, which must hold at least 65 bytes.
 *
 * # Safety
 * `table` must be a live handle and `buf` writable for `len` bytes.
 */
enum ZdStatus zd_table_digest(const struct ZdTable *table, char *buf, size_t len);

/**
 * Encloses `F_N(re + i im)` at `prec` bits. Writes the midpoint to
 * `out_re`/`out_im` and a bound on the distance to the true value in
 * `out_rad` (all rounded to double; the radius rounded up).
 *
 * # Safety
 * `table` must be a live handle and the out pointers valid.
 */
enum ZdStatus zd_eval_fn(const struct ZdTable *table,
                         size_t n,
                         double re,
                         double im,
                         uint32_t prec,
                         double *out_re,
                         double *out_im,
                         double *out_rad);

/**
 * First-term domination test on `Im z = y0` with `k` explicit zeros.
 * `zero_free` is set to 1 when certified, 0 when inconclusive.
 *
 * # Safety
 * `table` must be a live handle and the out pointers valid.
 */
enum ZdStatus zd_zero_free_check(const struct ZdTable *table,
                                 double y0,
                                 size_t k,
                                 uint32_t prec,
                                 int *zero_free,
                                 double *first_term_lower,
                                 double *remainder_upper);

/**
 * Newton scan of `F_{n_search}` from `t + 0.04 i`, `t` in `[t_min, t_max]`
 * with step 0.1, 25 iterations and a 0.085 cap on `Im z`.
 *
 * # Safety
 * `table` must be a live handle and `out` valid.
 */
enum ZdStatus zd_newton_scan(const struct ZdTable *table,
                             size_t n_search,
                             double t_min,
                             double t_max,
                             struct ZdCandidates **out);

/**
 * # Safety
 * `cands` must be a live handle.
 */
size_t zd_candidates_len(const struct ZdCandidates *cands);

/**
 * Position of the `i`-th candidate (0-based, best first).
 *
 * # Safety
 * `cands` must be a live handle and the out pointers valid.
 */
enum ZdStatus zd_candidates_get(const struct ZdCandidates *cands, size_t i, double *re, double *im);

/**
 * # Safety
 * `cands` must come from `zd_newton_scan` and not be used afterwards.
 */
void zd_candidates_free(struct ZdCandidates *cands);

/**
 * Reads a JSON certificate.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` valid.
 */
enum ZdStatus zd_certificate_load(const char *path, struct ZdCertificate **out);

/**
 * Re-checks the certificate; `passed` is 1 when every check holds. The
 * first failing check is available through `zd_last_error_message`.
 *
 * # Safety
 * `cert` must be a live handle and `passed` valid.
 */
enum ZdStatus zd_certificate_verify(const struct ZdCertificate *cert, int *passed);

/**
 * # Safety
 * `cert` must be a live handle and `out` valid.
 */
enum ZdStatus zd_certificate_q0(const struct ZdCertificate *cert, uint64_t *out);

/**
 * Certified lower bound for `2 kappa`, rounded down to double.
 *
 * # Safety
 * `cert` must be a live handle and `out` valid.
 */
enum ZdStatus zd_certificate_two_kappa_lower(const struct ZdCertificate *cert, double *out);

/**
 * # Safety
 * `cert` must come from `zd_certificate_load` and not be used afterwards.
 */
void zd_certificate_free(struct ZdCertificate *cert);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ZERODENSITY_H */
