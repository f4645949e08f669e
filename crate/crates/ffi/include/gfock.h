#ifndef GFOCK_H
#define GFOCK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GfockPsdMode {
  GFOCK_PSD_MODE_EXACT = 0,
  GFOCK_PSD_MODE_FLOAT = 1,
} GfockPsdMode;

typedef enum GfockSpace {
  GFOCK_SPACE_FOCK = 0,
  GFOCK_SPACE_HP = 1,
  GFOCK_SPACE_FP = 2,
} GfockSpace;

typedef enum GfockStatus {
  GFOCK_STATUS_OK = 0,
  GFOCK_STATUS_NULL_POINTER = 1,
  GFOCK_STATUS_INVALID_ARGUMENT = 2,
  GFOCK_STATUS_OUT_OF_RANGE = 3,
  GFOCK_STATUS_OVERFLOW = 4,
  GFOCK_STATUS_PARSE = 5,
  GFOCK_STATUS_IO = 6,
  GFOCK_STATUS_PANIC = 7,
} GfockStatus;

typedef enum GfockTransformKind {
  GFOCK_TRANSFORM_KIND_B = 0,
  GFOCK_TRANSFORM_KIND_BP = 1,
  GFOCK_TRANSFORM_KIND_SBP = 2,
} GfockTransformKind;

/**
 * Opaque truncated power series.
 */
typedef struct GfockCoeffSeq GfockCoeffSeq;

/**
 * Opaque Gauss-Hermite rule.
 */
typedef struct GfockQuadrature GfockQuadrature;

typedef struct GfockComplex {
  double re;
  double im;
} GfockComplex;

typedef struct GfockKernelValue {
  struct GfockComplex series;
  struct GfockComplex closed;
  double gap;
  size_t terms_used;
  double last_term;
} GfockKernelValue;

typedef struct GfockTransformValue {
  struct GfockComplex value;
  struct GfockComplex direct;
  double route_gap;
  double tail_diag;
  bool tail_unresolved;
} GfockTransformValue;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *gfock_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void gfock_string_free(char *s);

/**
 * Builds a series from `len` coefficients; `im` may be null for real input.
 *
 * # Safety
 * `re` (and `im` if non-null) must point to `len` doubles.
 */
enum GfockStatus gfock_coeffseq_new(const double *re,
                                    const double *im,
                                    size_t len,
                                    struct GfockCoeffSeq **out);

/**
 * # Safety
 * `seq` must be null or a live handle from this library.
 */
void gfock_coeffseq_free(struct GfockCoeffSeq *seq);

/**
 * Truncation degree `N`; the series holds `N + 1` coefficients. Returns 0 for null.
 *
 * # Safety
 * `seq` must be null or a live handle.
 */
size_t gfock_coeffseq_truncation(const struct GfockCoeffSeq *seq);

/**
 * Coefficient of `z^n`; zero beyond the truncation.
 *
 * # Safety
 * `seq` must be a live handle and `out` writable.
 */
enum GfockStatus gfock_coeffseq_get(const struct GfockCoeffSeq *seq,
                                    size_t n,
                                    struct GfockComplex *out);

/**
 * Weight of `z^n` in the given space.
 *
 * # Safety
 * `out` must be writable.
 */
enum GfockStatus gfock_weight(enum GfockSpace space, uint32_t p, size_t n, double *out);

/**
 * `<f, g>` in the given space.
 *
 * # Safety
 * `f`, `g` must be live handles and `out` writable.
 */
enum GfockStatus gfock_inner(enum GfockSpace space,
                             uint32_t p,
                             const struct GfockCoeffSeq *f,
                             const struct GfockCoeffSeq *g,
                             struct GfockComplex *out);

/**
 * `f(z)`.
 *
 * # Safety
 * `f` must be a live handle and `out` writable.
 */
enum GfockStatus gfock_eval(const struct GfockCoeffSeq *f,
                            struct GfockComplex z,
                            struct GfockComplex *out);

/**
 * `K(z, w)` by the series through `terms` and by the closed form.
 *
 * # Safety
 * `out` must be writable.
 */
enum GfockStatus gfock_kernel(enum GfockSpace space,
                              uint32_t p,
                              struct GfockComplex z,
                              struct GfockComplex w,
                              size_t terms,
                              struct GfockKernelValue *out);

/**
 * Coefficients of `K(., w)` through degree `truncation`.
 *
 * # Safety
 * `out` must be writable.
 */
enum GfockStatus gfock_kernel_section(enum GfockSpace space,
                                      uint32_t p,
                                      struct GfockComplex w,
                                      size_t truncation,
                                      struct GfockCoeffSeq **out);

/**
 * Parses an operator expression and applies it to `f` resized to `truncation`.
 *
 * # Safety
 * `expr` must be a nul-terminated string, `f` a live handle, `out` writable.
 */
enum GfockStatus gfock_op_apply(const char *expr_src,
                                const struct GfockCoeffSeq *f,
                                size_t truncation,
                                struct GfockCoeffSeq **out);

/**
 * Gauss-Hermite rule with `nodes` points for integrals over `dx`.
 *
 * # Safety
 * `out` must be writable.
 */
enum GfockStatus gfock_quadrature_new(size_t nodes, struct GfockQuadrature **out);

/**
 * # Safety
 * `q` must be null or a live handle.
 */
void gfock_quadrature_free(struct GfockQuadrature *q);

/**
 * Transform at `z` of the function whose Hermite coefficients are `hermite`.
 *
 * # Safety
 * `hermite` and `quad` must be live handles and `out` writable.
 */
enum GfockStatus gfock_transform(enum GfockTransformKind kind,
                                 uint32_t p,
                                 const struct GfockCoeffSeq *hermite,
                                 struct GfockComplex z,
                                 size_t truncation,
                                 const struct GfockQuadrature *quad,
                                 struct GfockTransformValue *out);

/**
 * `S(n, k)` as a decimal string.
 *
 * # Safety
 * `out` must be writable; free the result with [`gfock_string_free`].
 */
enum GfockStatus gfock_stirling2(size_t n, size_t k, char **out);

/**
 * Hankel certificate of `seq` (`hp:P`, `fp:P`, `factorial` or `hausdorff`)
 * for orders `0..=n_max`, as JSON.
 *
 * # Safety
 * `seq` must be a nul-terminated string and `out` writable; free the result
 * with [`gfock_string_free`].
 */
enum GfockStatus gfock_moments_certificate(const char *seq,
                                           size_t n_max,
                                           enum GfockPsdMode mode,
                                           char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GFOCK_H */
