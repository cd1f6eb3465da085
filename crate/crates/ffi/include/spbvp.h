#ifndef SPBVP_H
#define SPBVP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SpbvpStatus {
  SPBVP_STATUS_OK = 0,
  SPBVP_STATUS_NULL_POINTER = 1,
  SPBVP_STATUS_INVALID_ARGUMENT = 2,
  SPBVP_STATUS_MESH = 3,
  SPBVP_STATUS_PROBLEM = 4,
  SPBVP_STATUS_SOLVE = 5,
  SPBVP_STATUS_STUDY = 6,
  SPBVP_STATUS_BUFFER_TOO_SMALL = 7,
  SPBVP_STATUS_PANIC = 8,
} SpbvpStatus;

typedef enum SpbvpMeshFamily {
  SPBVP_MESH_FAMILY_UNIFORM = 0,
  SPBVP_MESH_FAMILY_SHISHKIN = 1,
  SPBVP_MESH_FAMILY_BAKHVALOV_SHISHKIN = 2,
  SPBVP_MESH_FAMILY_BAKHVALOV_TYPE = 3,
  SPBVP_MESH_FAMILY_SYSTEM_SHISHKIN = 4,
} SpbvpMeshFamily;

typedef enum SpbvpSide {
  SPBVP_SIDE_LEFT = 0,
  SPBVP_SIDE_RIGHT = 1,
  SPBVP_SIDE_BOTH = 2,
} SpbvpSide;

typedef enum SpbvpScheme {
  SPBVP_SCHEME_SIMPLE_UPWIND = 0,
  SPBVP_SCHEME_MIDPOINT_UPWIND = 1,
  SPBVP_SCHEME_CENTRAL = 2,
  SPBVP_SCHEME_IAS = 3,
  SPBVP_SCHEME_GALERKIN_FEM = 4,
} SpbvpScheme;

/**
 * Opaque mesh handle.
 */
typedef struct SpbvpMesh SpbvpMesh;

/**
 * Opaque problem handle.
 */
typedef struct SpbvpProblem SpbvpProblem;

/**
 * Opaque convergence report handle.
 */
typedef struct SpbvpReport SpbvpReport;

/**
 * Opaque nodal solution handle.
 */
typedef struct SpbvpSolution SpbvpSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer is
 * valid until the next `spbvp_*` call on the same thread.
 */
const char *spbvp_last_error_message(void);

void spbvp_clear_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *spbvp_version(void);

/**
 * Single-layer mesh of a fixed-N family. `SystemShishkin` is not accepted
 * here; use [`spbvp_mesh_for_problem`].
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum SpbvpStatus spbvp_mesh_layer(enum SpbvpMeshFamily family,
                                  double eps,
                                  double gamma,
                                  double mu,
                                  enum SpbvpSide side,
                                  size_t n,
                                  struct SpbvpMesh **out);

/**
 * Mesh of `family` adapted to the layers of `problem`.
 *
 * # Safety
 * `problem` must be a live handle; `out` must be valid for one write.
 */
enum SpbvpStatus spbvp_mesh_for_problem(const struct SpbvpProblem *problem,
                                        enum SpbvpMeshFamily family,
                                        size_t n,
                                        double mu,
                                        struct SpbvpMesh **out);

/**
 * Mesh from explicit nodes `0 = x_0 < … < x_N = 1`.
 *
 * # Safety
 * `points` must point to `len` readable doubles; `out` must be valid.
 */
enum SpbvpStatus spbvp_mesh_from_points(const double *points, size_t len, struct SpbvpMesh **out);

/**
 * Number of nodes (N + 1); 0 for a null handle.
 *
 * # Safety
 * `mesh` must be null or a live handle.
 */
size_t spbvp_mesh_point_count(const struct SpbvpMesh *mesh);

/**
 * Copies the nodes into `buf`, which must hold at least
 * [`spbvp_mesh_point_count`] values.
 *
 * # Safety
 * `mesh` must be a live handle; `buf` must be writable for `cap` doubles.
 */
enum SpbvpStatus spbvp_mesh_copy_points(const struct SpbvpMesh *mesh, double *buf, size_t cap);

/**
 * # Safety
 * `mesh` must be null or a handle not yet freed.
 */
void spbvp_mesh_free(struct SpbvpMesh *mesh);

/**
 * Built-in problem by name (`scalar-cd`, `strongly-coupled`,
 * `reaction-diffusion`, `weakly-coupled-cd`). `m = 0` keeps the default
 * system size.
 *
 * # Safety
 * `name` must be a NUL-terminated string, `eps` readable for `n_eps`
 * doubles and `out` valid for one write.
 */
enum SpbvpStatus spbvp_problem_builtin(const char *name,
                                       const double *eps,
                                       size_t n_eps,
                                       size_t m,
                                       struct SpbvpProblem **out);

/**
 * Problem from a JSON definition, built-in or custom.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` valid for one write.
 */
enum SpbvpStatus spbvp_problem_from_json(const char *json, struct SpbvpProblem **out);

/**
 * Number of components M; 0 for a null handle.
 *
 * # Safety
 * `problem` must be null or a live handle.
 */
size_t spbvp_problem_components(const struct SpbvpProblem *problem);

/**
 * # Safety
 * `problem` must be null or a handle not yet freed.
 */
void spbvp_problem_free(struct SpbvpProblem *problem);

/**
 * Assembles `scheme` for `problem` on `mesh` and solves.
 *
 * # Safety
 * `problem` and `mesh` must be live handles; `out` valid for one write.
 */
enum SpbvpStatus spbvp_solve(const struct SpbvpProblem *problem,
                             const struct SpbvpMesh *mesh,
                             enum SpbvpScheme scheme,
                             struct SpbvpSolution **out);

/**
 * Number of mesh nodes of the solution; 0 for a null handle.
 *
 * # Safety
 * `solution` must be null or a live handle.
 */
size_t spbvp_solution_node_count(const struct SpbvpSolution *solution);

/**
 * Number of components per node; 0 for a null handle.
 *
 * # Safety
 * `solution` must be null or a live handle.
 */
size_t spbvp_solution_components(const struct SpbvpSolution *solution);

/**
 * Copies the node-major values `u[i*M + k]` into `buf`.
 *
 * # Safety
 * `solution` must be a live handle; `buf` writable for `cap` doubles.
 */
enum SpbvpStatus spbvp_solution_copy_values(const struct SpbvpSolution *solution,
                                            double *buf,
                                            size_t cap);

/**
 * # Safety
 * `solution` must be null or a handle not yet freed.
 */
void spbvp_solution_free(struct SpbvpSolution *solution);

/**
 * Runs a convergence study from a JSON config. Cells that fail are
 * recorded in the report, see [`spbvp_report_failures`].
 *
 * # Safety
 * `config_json` must be a NUL-terminated string; `out` valid for one write.
 */
enum SpbvpStatus spbvp_study_run(const char *config_json, struct SpbvpReport **out);

/**
 * Number of failed (N, ε) cells; 0 for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
size_t spbvp_report_failures(const struct SpbvpReport *report);

/**
 * Report as CSV. Free the result with [`spbvp_string_free`]. NULL for a
 * null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
char *spbvp_report_to_csv(const struct SpbvpReport *report);

/**
 * Report as JSON. Free the result with [`spbvp_string_free`].
 *
 * # Safety
 * `report` must be null or a live handle.
 */
char *spbvp_report_to_json(const struct SpbvpReport *report);

/**
 * # Safety
 * `report` must be null or a handle not yet freed.
 */
void spbvp_report_free(struct SpbvpReport *report);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be null or a string from `spbvp_report_to_*` not yet freed.
 */
void spbvp_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPBVP_H */
