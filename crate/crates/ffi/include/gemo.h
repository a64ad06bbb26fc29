#ifndef GEMO_H
#define GEMO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GemoBuiltin {
  GEMO_BUILTIN_ZERO = 0,
  /**
   * μ = (αx)²; the parameter is α.
   */
  GEMO_BUILTIN_QUADRATIC = 1,
  /**
   * 1 + μ = exp(−γx); the parameter is γ.
   */
  GEMO_BUILTIN_EXPONENTIAL = 2,
} GemoBuiltin;

typedef enum GemoStatus {
  GEMO_STATUS_OK = 0,
  /**
   * A null pointer, bad UTF-8 or an out-of-range index.
   */
  GEMO_STATUS_INVALID_ARGUMENT = 1,
  /**
   * Rejected input: configuration, expression or parameter values.
   */
  GEMO_STATUS_INPUT = 2,
  /**
   * The computation itself failed.
   */
  GEMO_STATUS_FAILURE = 3,
  /**
   * A bug; the library caught a panic.
   */
  GEMO_STATUS_PANIC = 4,
} GemoStatus;

typedef struct GemoDeformation GemoDeformation;

typedef struct GemoMap GemoMap;

typedef struct GemoSpectrum GemoSpectrum;

/**
 * μ and its first two derivatives at one point.
 */
typedef struct GemoTriple {
  double mu;
  double mu1;
  double mu2;
} GemoTriple;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failing call on this thread; empty if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *gemo_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *gemo_version(void);

/**
 * One of the built-in deformations on its default domain.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum GemoStatus gemo_deformation_builtin(enum GemoBuiltin kind,
                                         double parameter,
                                         struct GemoDeformation **out);

/**
 * μ(x) from an expression in `x` on `[lo, hi]` (either end may be
 * infinite). `names`/`values` bind `count` named parameters.
 *
 * # Safety
 * `expr` and each of the `count` entries of `names` must be NUL-terminated
 * strings; `values` must hold `count` doubles; `out` must be writable.
 */
enum GemoStatus gemo_deformation_from_expr(const char *expr,
                                           const char *const *names,
                                           const double *values,
                                           size_t count,
                                           double lo,
                                           double hi,
                                           struct GemoDeformation **out);

/**
 * # Safety
 * `d` must be null or a handle from this library, not yet freed.
 */
void gemo_deformation_free(struct GemoDeformation *d);

/**
 * μ, μ′ and μ″ at `x`.
 *
 * # Safety
 * `d` must be a live handle and `out` writable.
 */
enum GemoStatus gemo_deformation_eval(const struct GemoDeformation *d,
                                      double x,
                                      struct GemoTriple *out);

/**
 * The map `z(x) = ∫ dx/(1 + μ)` for a copy of `d`, with `z(0) = 0` when 0
 * is in the domain.
 *
 * # Safety
 * `d` must be a live handle and `out` writable.
 */
enum GemoStatus gemo_map_new(const struct GemoDeformation *d, struct GemoMap **out);

/**
 * # Safety
 * `m` must be null or a handle from this library, not yet freed.
 */
void gemo_map_free(struct GemoMap *m);

/**
 * # Safety
 * `m` must be a live handle and `z` writable.
 */
enum GemoStatus gemo_map_forward(const struct GemoMap *m, double x, double *z);

/**
 * # Safety
 * `m` must be a live handle and `x` writable.
 */
enum GemoStatus gemo_map_inverse(const struct GemoMap *m, double z, double *x);

/**
 * Image of the domain under the map; ends may be infinite.
 *
 * # Safety
 * `m` must be a live handle; `lo` and `hi` writable.
 */
enum GemoStatus gemo_map_image(const struct GemoMap *m, double *lo, double *hi);

/**
 * Solves the problem described by config text (same format as the CLI
 * config files). Nothing is written to disk.
 *
 * # Safety
 * `config` must be a NUL-terminated string and `out` writable.
 */
enum GemoStatus gemo_solve(const char *config, struct GemoSpectrum **out);

/**
 * # Safety
 * `s` must be null or a handle from this library, not yet freed.
 */
void gemo_spectrum_free(struct GemoSpectrum *s);

/**
 * Number of solves in the result: 1, or 2 for `space = both` (x first).
 *
 * # Safety
 * `s` must be a live handle.
 */
size_t gemo_spectrum_solves(const struct GemoSpectrum *s);

/**
 * Copies up to `capacity` eigenvalues of solve `index` into `buffer` and
 * stores how many there are in `count`. Pass a null buffer to query the
 * count alone.
 *
 * # Safety
 * `s` must be a live handle, `buffer` null or valid for `capacity`
 * doubles, and `count` writable.
 */
enum GemoStatus gemo_spectrum_eigenvalues(const struct GemoSpectrum *s,
                                          size_t index,
                                          double *buffer,
                                          size_t capacity,
                                          size_t *count);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GEMO_H */
