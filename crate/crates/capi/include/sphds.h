/* C interface of the sphds spherical data engine. */

#ifndef SPHDS_H
#define SPHDS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Ordering scheme selector.
 */
typedef enum SphdsOrdering {
  SphdsOrdering_Ring = 0,
  SphdsOrdering_Nested = 1,
} SphdsOrdering;

/**
 * Extreme-side selector for `sphds_extrema` and the asymmetry ratio.
 */
typedef enum SphdsSide {
  SphdsSide_Smallest = 0,
  SphdsSide_Largest = 1,
} SphdsSide;

/**
 * Result codes returned by every fallible entry point.
 */
typedef enum SphdsStatus {
  SphdsStatus_Ok = 0,
  SphdsStatus_NullPointer = 1,
  SphdsStatus_InvalidArgument = 2,
  SphdsStatus_InvalidResolution = 3,
  SphdsStatus_OutOfRange = 4,
  SphdsStatus_WrongOrdering = 5,
  SphdsStatus_EmptyData = 6,
  SphdsStatus_DuplicatePixel = 7,
  SphdsStatus_ParseError = 8,
  SphdsStatus_IoError = 9,
  SphdsStatus_Panic = 10,
} SphdsStatus;

/**
 * Opaque dataset handle.
 */
typedef struct SphdsDataset SphdsDataset;

/**
 * Opaque window handle.
 */
typedef struct SphdsWindow SphdsWindow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *sphds_last_error_message(void);

/**
 * Total pixel count `12 * nside^2`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SphdsStatus sphds_npix(uint64_t nside, uint64_t *out);

/**
 * Ring count `4 * nside - 1`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SphdsStatus sphds_nrings(uint64_t nside, uint64_t *out);

/**
 * Solid angle of one pixel in steradians.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SphdsStatus sphds_pixel_area(uint64_t nside, double *out);

/**
 * Ring-scheme pixel containing the point `(theta, phi)`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SphdsStatus sphds_ang2pix_ring(uint64_t nside, double theta, double phi, uint64_t *out);

/**
 * Center of ring-scheme pixel `pix`.
 *
 * # Safety
 * `theta` and `phi` must be valid for writes.
 */
enum SphdsStatus sphds_pix2ang_ring(uint64_t nside, uint64_t pix, double *theta, double *phi);

/**
 * Nested index of the ring-scheme pixel `pix`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SphdsStatus sphds_ring2nest(uint64_t nside, uint64_t pix, uint64_t *out);

/**
 * Ring index of the nested-scheme pixel `pix`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SphdsStatus sphds_nest2ring(uint64_t nside, uint64_t pix, uint64_t *out);

/**
 * The four children of nested pixel `pix` at the next level; `out` must
 * hold 4 values.
 *
 * # Safety
 * `out` must be valid for writes of 4 values.
 */
enum SphdsStatus sphds_children(uint64_t nside, uint64_t pix, uint64_t *out);

/**
 * Parent of nested pixel `pix` at the previous level.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SphdsStatus sphds_parent(uint64_t nside, uint64_t pix, uint64_t *out);

/**
 * Edge and corner neighbors of nested pixel `pix`; `out` must hold 8
 * values, `count` receives how many were written (6..=8).
 *
 * # Safety
 * `out` must hold 8 writable values; `count` must be valid for writes.
 */
enum SphdsStatus sphds_neighbors(uint64_t nside, uint64_t pix, uint64_t *out, uintptr_t *count);

/**
 * Loads a `sphds v1` dataset file into a new handle.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum SphdsStatus sphds_dataset_load(const char *path, struct SphdsDataset **out);

/**
 * Writes the dataset to a `sphds v1` file.
 *
 * # Safety
 * `ds` must be a live dataset handle; `path` must be a NUL-terminated string.
 */
enum SphdsStatus sphds_dataset_save(const struct SphdsDataset *ds, const char *path);

/**
 * Releases a dataset handle. Null is a no-op.
 *
 * # Safety
 * `ds` must be null or a pointer returned by this library that has not
 * been freed already.
 */
void sphds_dataset_free(struct SphdsDataset *ds);

/**
 * Number of rows.
 *
 * # Safety
 * `ds` must be a live dataset handle; `out` must be valid for writes.
 */
enum SphdsStatus sphds_dataset_len(const struct SphdsDataset *ds, uintptr_t *out);

/**
 * Grid nside of the dataset.
 *
 * # Safety
 * `ds` must be a live dataset handle; `out` must be valid for writes.
 */
enum SphdsStatus sphds_dataset_nside(const struct SphdsDataset *ds, uint64_t *out);

/**
 * Ordering scheme of the dataset.
 *
 * # Safety
 * `ds` must be a live dataset handle; `out` must be valid for writes.
 */
enum SphdsStatus sphds_dataset_ordering(const struct SphdsDataset *ds, enum SphdsOrdering *out);

/**
 * Builds a dataset from parallel coordinate/value arrays (radians), the
 * programmatic counterpart of the CLI `convert`. Duplicate pixels keep
 * the first occurrence when `keep_first` is true and fail otherwise.
 *
 * # Safety
 * The input arrays must hold `len` readable values each; `column` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum SphdsStatus sphds_dataset_from_points(const double *thetas,
                                           const double *phis,
                                           const double *values,
                                           uintptr_t len,
                                           uint64_t nside,
                                           enum SphdsOrdering ordering,
                                           bool keep_first,
                                           const char *column,
                                           struct SphdsDataset **out);

/**
 * Creates a disc window.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SphdsStatus sphds_window_disc(double theta,
                                   double phi,
                                   double radius,
                                   struct SphdsWindow **out);

/**
 * Creates a convex polygon window from parallel vertex arrays.
 *
 * # Safety
 * `thetas` and `phis` must hold `len` readable values each; `out` must be valid for writes.
 */
enum SphdsStatus sphds_window_polygon(const double *thetas,
                                      const double *phis,
                                      uintptr_t len,
                                      struct SphdsWindow **out);

/**
 * Releases a window handle. Null is a no-op.
 *
 * # Safety
 * `w` must be null or a pointer returned by this library that has not
 * been freed already.
 */
void sphds_window_free(struct SphdsWindow *w);

/**
 * Boundary-inclusive window membership of a point.
 *
 * # Safety
 * `w` must be a live window handle; `out` must be valid for writes.
 */
enum SphdsStatus sphds_window_contains(const struct SphdsWindow *w,
                                       double theta,
                                       double phi,
                                       bool *out);

/**
 * Mean of a column.
 *
 * # Safety
 * `ds` must be a live dataset handle; `column` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum SphdsStatus sphds_mean(const struct SphdsDataset *ds,
                            const char *column,
                            double *out);

/**
 * Exceedance probability above `alpha`; `window` may be null for the
 * whole sphere.
 *
 * # Safety
 * `ds` must be a live dataset handle and `window` null or a live window handle; `column` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum SphdsStatus sphds_exprob(const struct SphdsDataset *ds,
                              const struct SphdsWindow *window,
                              const char *column,
                              double alpha,
                              double *out);

/**
 * Histogram entropy; `bins == 0` selects the Sturges rule. `window` may
 * be null.
 *
 * # Safety
 * Same contract as `sphds_exprob`.
 */
enum SphdsStatus sphds_entropy(const struct SphdsDataset *ds,
                               const struct SphdsWindow *window,
                               const char *column,
                               uintptr_t bins,
                               double *out);

/**
 * Excursion-set area (steradians) of `{column >= level}`.
 *
 * # Safety
 * `ds` must be a live dataset handle; `column` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum SphdsStatus sphds_fmf(const struct SphdsDataset *ds,
                           double level,
                           const char *column,
                           double *out);

/**
 * Minimum pairwise geodesic distance between the dataset's pixel centers.
 *
 * # Safety
 * `ds` must be a live dataset handle; `out` must be valid for writes.
 */
enum SphdsStatus sphds_min_dist(const struct SphdsDataset *ds, double *out);

/**
 * Windowed mean over overall mean of a column.
 *
 * # Safety
 * `ds` and `window` must be live handles; `column` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum SphdsStatus sphds_asymmetry_mean(const struct SphdsDataset *ds,
                                      const struct SphdsWindow *window,
                                      const char *column,
                                      double *out);

/**
 * Mean of the `n` windowed extremes over the overall mean.
 *
 * # Safety
 * Same contract as `sphds_asymmetry_mean`.
 */
enum SphdsStatus sphds_asymmetry_extrema(const struct SphdsDataset *ds,
                                         const struct SphdsWindow *window,
                                         uintptr_t n,
                                         enum SphdsSide side,
                                         const char *column,
                                         double *out);

/**
 * The `n` most extreme rows; the four output arrays must each hold `n`
 * entries. `window` may be null.
 *
 * # Safety
 * `ds` must be a live dataset handle and `window` null or live; the four output arrays must each hold `n` writable values.
 */
enum SphdsStatus sphds_extrema(const struct SphdsDataset *ds,
                               const struct SphdsWindow *window,
                               uintptr_t n,
                               enum SphdsSide side,
                               const char *column,
                               uint64_t *out_pix,
                               double *out_theta,
                               double *out_phi,
                               double *out_value);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SPHDS_H */
