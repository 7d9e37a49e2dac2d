/* C interface to the isodirac library: discrete Dirac operators and Kasteleyn matrices on flat surfaces with cone singularities. */

#pragma once

/* Generated with cbindgen:0.26.0 */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Edge weight choice for matrix-valued calls.
 */
typedef enum IsodiracNu {
  ISODIRAC_NU_DUAL = 0,
  ISODIRAC_NU_UNIT = 1,
} IsodiracNu;

/*
 Status codes mirroring the library's error variants.
 */
typedef enum IsodiracStatus {
  ISODIRAC_STATUS_OK = 0,
  ISODIRAC_STATUS_NULL_POINTER = 1,
  ISODIRAC_STATUS_INVALID_UTF8 = 2,
  ISODIRAC_STATUS_INVALID_INPUT = 3,
  ISODIRAC_STATUS_NON_BIPARTITE = 4,
  ISODIRAC_STATUS_WHITE_ANGLE_SUM = 5,
  ISODIRAC_STATUS_EULER_MISMATCH = 6,
  ISODIRAC_STATUS_NON_POSITIVE_ANGLE = 7,
  ISODIRAC_STATUS_DISCONNECTED = 8,
  ISODIRAC_STATUS_ODD_VERTEX_COUNT = 9,
  ISODIRAC_STATUS_CONDITIONS_VIOLATED = 10,
  ISODIRAC_STATUS_TOO_LARGE = 11,
  ISODIRAC_STATUS_ANGLE_OUT_OF_RANGE = 12,
  ISODIRAC_STATUS_CONSTRUCTION_INVALID = 13,
  ISODIRAC_STATUS_BUFFER_TOO_SMALL = 14,
  ISODIRAC_STATUS_INTERNAL_ERROR = 15,
} IsodiracStatus;

/*
 Opaque handle to a validated surface.
 */
typedef struct IsodiracSurface IsodiracSurface;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the most recent error on this thread, or NULL. The string is
 owned by the library and valid until the next failing call; do not free.
 */
const char *isodirac_last_error_message(void);

/*
 Parse a surface from its JSON description.

 # Safety
 `json` must be a valid NUL-terminated string; `out` must be a valid
 pointer to receive the handle.
 */
enum IsodiracStatus isodirac_surface_from_json(const char *json, struct IsodiracSurface **out);

/*
 rows × cols hexagons on a flat torus.

 # Safety
 `out` must be a valid pointer to receive the handle.
 */
enum IsodiracStatus isodirac_build_honeycomb(size_t rows,
                                             size_t cols,
                                             struct IsodiracSurface **out);

/*
 m rows of n rhombi on a torus; `shear` may be NULL or hold one angle per
 row.

 # Safety
 `shear` must be NULL or point to `shear_len` doubles; `out` must be a
 valid pointer to receive the handle.
 */
enum IsodiracStatus isodirac_build_rhombi_torus(size_t m,
                                                size_t n,
                                                size_t shift,
                                                const double *shear,
                                                size_t shear_len,
                                                struct IsodiracSurface **out);

/*
 Square lattice on the genus-2 staircase octagon at refinement `n`.

 # Safety
 `out` must be a valid pointer to receive the handle.
 */
enum IsodiracStatus isodirac_build_genus2(size_t n, struct IsodiracSurface **out);

/*
 Release a surface handle. NULL is ignored.

 # Safety
 `s` must be a handle from this library, not yet freed.
 */
void isodirac_surface_free(struct IsodiracSurface *s);

/*
 Serialize a surface to JSON. Free the result with
 [`isodirac_string_free`]; returns NULL on error.

 # Safety
 `s` must be a live handle from this library.
 */
char *isodirac_surface_to_json(const struct IsodiracSurface *s);

/*
 Release a string returned by this library. NULL is ignored.

 # Safety
 `text` must originate from this library and not have been freed.
 */
void isodirac_string_free(char *text);

/*
 Vertex, edge, face, and genus counts.

 # Safety
 All pointers must be valid; `s` must be a live handle.
 */
enum IsodiracStatus isodirac_surface_counts(const struct IsodiracSurface *s,
                                            uint64_t *vertices,
                                            uint64_t *edges,
                                            uint64_t *faces,
                                            uint64_t *genus);

/*
 Kasteleyn conditions (i) and (ii).

 # Safety
 All pointers must be valid; `s` must be a live handle.
 */
enum IsodiracStatus isodirac_check_conditions(const struct IsodiracSurface *s,
                                              bool *condition_i,
                                              bool *condition_ii);

/*
 Number of perfect matchings, by exhaustive enumeration. Graphs with more
 than 60 vertices are refused.

 # Safety
 All pointers must be valid; `s` must be a live handle.
 */
enum IsodiracStatus isodirac_matching_count(const struct IsodiracSurface *s, uint64_t *out);

/*
 Partition function three ways: brute-force enumeration and the two
 determinant sums (intersection-form and Arf-weighted signs). Graphs with
 more than 60 vertices are refused (the brute-force side).

 # Safety
 All pointers must be valid; `s` must be a live handle.
 */
enum IsodiracStatus isodirac_partition_functions(const struct IsodiracSurface *s,
                                                 enum IsodiracNu nu,
                                                 double *z_brute,
                                                 double *z_pfd,
                                                 double *z_pfarf);

/*
 Number of spin sectors, 2^{2g}.

 # Safety
 All pointers must be valid; `s` must be a live handle.
 */
enum IsodiracStatus isodirac_sector_count(const struct IsodiracSurface *s, size_t *out);

/*
 Dirac determinants of all 2^{2g} sectors. `det_re`, `det_im`, and `arf`
 must hold `len` entries with `len` at least the sector count; `arf[k]`
 receives 0/1, or -1 when Arf invariants are undefined for the surface.

 # Safety
 The three buffers must be valid for `len` writes; `s` must be a live
 handle.
 */
enum IsodiracStatus isodirac_sector_determinants(const struct IsodiracSurface *s,
                                                 enum IsodiracNu nu,
                                                 double *det_re,
                                                 double *det_im,
                                                 int32_t *arf,
                                                 size_t len);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus
