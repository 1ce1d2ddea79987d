#ifndef REGGE_H
#define REGGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RgMode {
  RG_MODE_EUCLIDEAN = 0,
  RG_MODE_QUANTUM = 1,
} RgMode;

typedef enum RgMove {
  RG_MOVE_ONE_FOUR = 0,
  RG_MOVE_FOUR_ONE = 1,
  RG_MOVE_TWO_THREE = 2,
  RG_MOVE_THREE_TWO = 3,
} RgMove;

typedef enum RgStatus {
  RG_STATUS_OK = 0,
  RG_STATUS_NULL_ARGUMENT = 1,
  RG_STATUS_PARSE = 2,
  RG_STATUS_INVALID_ARGUMENT = 3,
  RG_STATUS_DOMAIN = 4,
  RG_STATUS_BUFFER_TOO_SMALL = 5,
  RG_STATUS_INTERNAL = 6,
} RgStatus;

/**
 * Opaque degeneracy histogram handle.
 */
typedef struct RgHistogram RgHistogram;

/**
 * Opaque triangulation handle.
 */
typedef struct RgTriangulation RgTriangulation;

typedef struct RgBracket {
  uint64_t k;
  uint64_t n1_minus;
  uint64_t n1_plus;
  double a_minus;
  double a_plus;
  double delta_a;
  bool guaranteed;
} RgBracket;

typedef struct RgLambda {
  double planck_volume;
  double k_equiv;
  double delta_a;
  double expected_action_re;
  double expected_action_im;
  double lambda;
  double beta_g;
} RgLambda;

typedef struct RgSamplerOptions {
  uint64_t seed;
  uint64_t target;
  uint64_t band;
  double pin;
  uint64_t steps;
  uint64_t burn_in;
  uint64_t thinning;
  uint32_t chains;
} RgSamplerOptions;

typedef struct RgRatio {
  uint64_t visits_minus;
  uint64_t visits_plus;
  double estimate;
  double std_error;
} RgRatio;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *rg_version(void);

/**
 * Copies the calling thread's last error message.
 *
 * # Safety
 * `buf` must point to `len` writable bytes; `needed` may be null.
 */
enum RgStatus rg_last_error(char *buf, size_t len, size_t *needed);

/**
 * Parses a gluing file.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum RgStatus rg_triangulation_parse(const char *text, struct RgTriangulation **out);

/**
 * The boundary of the 4-simplex (5 tetrahedra).
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum RgStatus rg_triangulation_boundary_4_simplex(struct RgTriangulation **out);

/**
 * # Safety
 * `t` must be null or a handle not yet freed.
 */
void rg_triangulation_free(struct RgTriangulation *t);

/**
 * `(N0, N1, N2, N3)`.
 *
 * # Safety
 * `t` must be a live handle and `out` point to 4 writable `uint64_t`.
 */
enum RgStatus rg_triangulation_f_vector(const struct RgTriangulation *t, uint64_t *out);

/**
 * Mean bone-degree `6·N3 / N1`, unreduced.
 *
 * # Safety
 * `t` must be a live handle; `num` and `den` valid pointers.
 */
enum RgStatus rg_triangulation_mean_bone_degree(const struct RgTriangulation *t,
                                                uint64_t *num,
                                                uint64_t *den);

/**
 * Volume-normalized action at edge length `ell`.
 *
 * # Safety
 * `t` must be a live handle and `out` a valid pointer.
 */
enum RgStatus rg_triangulation_normalized_action(const struct RgTriangulation *t,
                                                 double ell,
                                                 double *out);

/**
 * Writes `valid`, `orientable` and `simplicial` flags.
 *
 * # Safety
 * `t` must be a live handle; each output pointer must be valid.
 */
enum RgStatus rg_triangulation_flags(const struct RgTriangulation *t,
                                     bool *valid,
                                     bool *orientable,
                                     bool *simplicial);

/**
 * Isomorphism signature.
 *
 * # Safety
 * `t` must be a live handle, `buf` point to `len` writable bytes; `needed`
 * may be null.
 */
enum RgStatus rg_triangulation_signature(const struct RgTriangulation *t,
                                         char *buf,
                                         size_t len,
                                         size_t *needed);

/**
 * Number of valid moves of kind `kind`.
 *
 * # Safety
 * `t` must be a live handle and `out` a valid pointer.
 */
enum RgStatus rg_triangulation_move_count(const struct RgTriangulation *t,
                                          enum RgMove kind,
                                          size_t *out);

/**
 * Applies move `index` (in enumeration order) of kind `kind` and returns a
 * new handle; `t` is unchanged.
 *
 * # Safety
 * `t` must be a live handle and `out` a valid pointer.
 */
enum RgStatus rg_triangulation_apply_move(const struct RgTriangulation *t,
                                          enum RgMove kind,
                                          size_t index,
                                          struct RgTriangulation **out);

/**
 * Volume-normalized action at `μ = num/den`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum RgStatus rg_action_at_mu(uint64_t num, uint64_t den, double ell, double *out);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum RgStatus rg_delta_action(uint64_t k, double ell, double *out);

/**
 * Almost-flat bracket at volume `k`. Returns `RG_STATUS_DOMAIN` when no
 * negative-action level exists.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum RgStatus rg_bracket(uint64_t k, double ell, int64_t gamma_star, struct RgBracket *out);

/**
 * Cosmological-constant estimate. A `ratio` of zero or less selects the
 * default `N∓ = 2.5`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum RgStatus rg_lambda_estimate(double ell_m,
                                 double vol_m3,
                                 double ratio,
                                 enum RgMode ensemble,
                                 struct RgLambda *out);

/**
 * Parses a histogram CSV.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum RgStatus rg_histogram_parse(const char *text, struct RgHistogram **out);

/**
 * The shipped table of 3-sphere degeneracies for `5 ≤ K ≤ 9`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum RgStatus rg_histogram_table1(struct RgHistogram **out);

/**
 * # Safety
 * `h` must be null or a handle not yet freed.
 */
void rg_histogram_free(struct RgHistogram *h);

/**
 * `count(k, n1_minus) / count(k, n1_plus)`.
 *
 * # Safety
 * `h` must be a live handle and `out` a valid pointer.
 */
enum RgStatus rg_histogram_ratio(const struct RgHistogram *h,
                                 uint32_t k,
                                 uint32_t n1_minus,
                                 uint32_t n1_plus,
                                 double *out);

/**
 * Fixed-volume partition function `Z_K` as a complex number.
 *
 * # Safety
 * `h` must be a live handle; `re` and `im` valid pointers.
 */
enum RgStatus rg_partition_fixed_volume(const struct RgHistogram *h,
                                        uint32_t k,
                                        double ell,
                                        enum RgMode ensemble,
                                        double *re,
                                        double *im);

/**
 * Default sampler options for target volume `target` and `steps` steps.
 */
struct RgSamplerOptions rg_sampler_defaults(uint64_t target, uint64_t steps);

/**
 * Runs a uniform-mode chain from `start` and estimates
 * `visits(k, n1_minus) / visits(k, n1_plus)`.
 *
 * # Safety
 * `start` must be a live handle; `opts` and `out` valid pointers.
 */
enum RgStatus rg_sample_ratio(const struct RgTriangulation *start,
                              const struct RgSamplerOptions *opts,
                              uint64_t k,
                              uint64_t n1_minus,
                              uint64_t n1_plus,
                              struct RgRatio *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* REGGE_H */
