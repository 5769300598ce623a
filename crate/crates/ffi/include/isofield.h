/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef ISOFIELD_H
#define ISOFIELD_H

#include <stddef.h>
#include <stdint.h>

// Normalization of a vector spectral pair.
#define ISOFIELD_NORMALIZATION_YAGLOM 0

#define ISOFIELD_NORMALIZATION_BARYCENTRIC 1

// Result code of every fallible call.
typedef enum IsofieldStatus {
  ISOFIELD_STATUS_OK = 0,
  // A required pointer argument was null.
  ISOFIELD_STATUS_NULL_POINTER = 1,
  // Arguments or configuration rejected before computation.
  ISOFIELD_STATUS_INVALID_INPUT = 2,
  // A numerical guard tripped, such as a covariance that is not positive semidefinite.
  ISOFIELD_STATUS_NUMERICAL = 3,
  ISOFIELD_STATUS_IO = 4,
  // The output buffer is shorter than the result.
  ISOFIELD_STATUS_BUFFER_TOO_SMALL = 5,
  // An internal panic was caught.
  ISOFIELD_STATUS_PANIC = 6,
} IsofieldStatus;

// Realizations of a field at a list of points.
typedef struct IsofieldRealization IsofieldRealization;

// Angular power spectra of (Theta, E, B, V).
typedef struct IsofieldSpectrum IsofieldSpectrum;

// Pair of spectral measures defining an isotropic vector field.
typedef struct IsofieldVectorPair IsofieldVectorPair;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Version string of the library, statically allocated.
const char *isofield_version(void);

// Copies the last error message of the calling thread into `buf` (truncated and
// nul-terminated) and returns the buffer size needed for the full message, or 0 when
// the last call succeeded.
//
// # Safety
// `buf` must be null or valid for writes of `len` bytes.
size_t isofield_last_error(char *buf, size_t len);

// Spin-weighted spherical harmonic `sY_{ell,m}(theta, phi)`.
//
// # Safety
// `re` and `im` must be valid for writes.
enum IsofieldStatus isofield_spin_harmonic(int64_t spin,
                                           size_t ell,
                                           int64_t m,
                                           double theta,
                                           double phi,
                                           double *re,
                                           double *im);

// Real-basis coupling coefficient `g^{m[m1,m2]}_{l[l1,l2]}`; zero outside the selection rules.
//
// # Safety
// `out` must be valid for writes.
enum IsofieldStatus isofield_godunov_gordienko(size_t l,
                                               int64_t m,
                                               size_t l1,
                                               int64_t m1,
                                               size_t l2,
                                               int64_t m2,
                                               double *out);

// Correlation at distance `r` of an isotropic scalar field in `R^dimension` whose spectral
// measure has `n` atoms.
//
// # Safety
// `lambdas` and `masses` must point to `n` values; `out` must be valid for writes.
enum IsofieldStatus isofield_scalar_corr(const double *lambdas,
                                         const double *masses,
                                         size_t n,
                                         size_t dimension,
                                         double r,
                                         double *out);

// Creates a vector spectral pair from two atomic measures.
//
// # Safety
// The array arguments must hold `n1` and `n2` values; `out` must be valid for writes.
enum IsofieldStatus isofield_vector_pair_new(const double *lambdas1,
                                             const double *masses1,
                                             size_t n1,
                                             const double *lambdas2,
                                             const double *masses2,
                                             size_t n2,
                                             uint32_t normalization,
                                             struct IsofieldVectorPair **out);

// # Safety
// `pair` must be null or a handle from [`isofield_vector_pair_new`] not yet freed.
void isofield_vector_pair_free(struct IsofieldVectorPair *pair);

// Two-point correlation tensor `B_ij(sep)` written row-major into `out[9]`.
//
// # Safety
// `pair` must be a live handle, `sep` must hold 3 values and `out` 9.
enum IsofieldStatus isofield_vector_corr(const struct IsofieldVectorPair *pair,
                                         const double *sep,
                                         double *out);

// Runs a simulation plan given as JSON; `seed` replaces the plan's master seed.
//
// # Safety
// `plan_json` must be a nul-terminated string and `out` valid for writes.
enum IsofieldStatus isofield_simulate_json(const char *plan_json,
                                           uint64_t seed,
                                           struct IsofieldRealization **out);

// # Safety
// `real` must be null or a handle from [`isofield_simulate_json`] not yet freed.
void isofield_realization_free(struct IsofieldRealization *real);

// Numbers of realizations, points and components per point.
//
// # Safety
// `real` must be a live handle; the output pointers must be valid for writes.
enum IsofieldStatus isofield_realization_shape(const struct IsofieldRealization *real,
                                               size_t *realizations,
                                               size_t *points,
                                               size_t *components);

// Copies all values, ordered by realization, then point, then component.
//
// # Safety
// `real` must be a live handle and `out` valid for writes of `len` values.
enum IsofieldStatus isofield_realization_values(const struct IsofieldRealization *real,
                                                double *out,
                                                size_t len);

// Parses an angular power spectrum file given as JSON.
//
// # Safety
// `json` must be a nul-terminated string and `out` valid for writes.
enum IsofieldStatus isofield_spectrum_from_json(const char *json, struct IsofieldSpectrum **out);

// # Safety
// `spec` must be null or a handle from [`isofield_spectrum_from_json`] not yet freed.
void isofield_spectrum_free(struct IsofieldSpectrum *spec);

// Number of nodes of the Gauss-Legendre grid with `rings` rings and `2 rings - 1` longitudes.
size_t isofield_gl_grid_size(size_t rings);

// Writes `(theta, phi)` of every grid node into `out`, `2 * isofield_gl_grid_size(rings)` values.
//
// # Safety
// `out` must be valid for writes of `len` values.
enum IsofieldStatus isofield_gl_grid(size_t rings, double *out, size_t len);

// Draws one realization of the (Theta, Q, U, V) maps on the Gauss-Legendre grid with
// `rings` rings, truncated at `ell_max`. Writes 4 values per node in grid order into `out`.
// The result depends only on `(spectrum, ell_max, seed, realization)`.
//
// # Safety
// `spec` must be a live handle and `out` valid for writes of `len` values.
enum IsofieldStatus isofield_cmb_map(const struct IsofieldSpectrum *spec,
                                     size_t ell_max,
                                     size_t rings,
                                     uint64_t seed,
                                     uint64_t realization,
                                     double *out,
                                     size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ISOFIELD_H */
