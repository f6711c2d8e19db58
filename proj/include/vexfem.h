/* C interface to the vexfem solver library.
 *
 * All entry points go through an opaque context that stores the last error
 * message. Functions return vexfem_status; on VEXFEM_ERROR the message can be
 * retrieved with vexfem_last_error. Run artifacts (CSV tables, checkpoints)
 * are written to the output directory named in the configuration.
 */
#ifndef VEXFEM_H
#define VEXFEM_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  VEXFEM_OK = 0,
  VEXFEM_ERROR = 1,        /* invalid input or configuration */
  VEXFEM_NO_CONVERGENCE = 2 /* iteration budget exhausted */
} vexfem_status;

typedef struct vexfem_context vexfem_context;

const char* vexfem_version(void);

vexfem_context* vexfem_context_create(void);
void vexfem_context_destroy(vexfem_context* ctx);

/* Last error message for this context; empty string if none. */
const char* vexfem_last_error(const vexfem_context* ctx);

/* Loads configuration from a file, replacing the current one. */
vexfem_status vexfem_config_load(vexfem_context* ctx, const char* path);
/* Parses configuration from a string, replacing the current one. */
vexfem_status vexfem_config_parse(vexfem_context* ctx, const char* text);
/* Sets one key, e.g. "solver.outer_tol", on the current configuration. */
vexfem_status vexfem_config_set(vexfem_context* ctx, const char* key,
                                const char* value);

/* Runs a command: "solve", "mms", "sweep-k", "certify-laws" or "infsup".
 * Scalar results become metrics queryable below. */
vexfem_status vexfem_run(vexfem_context* ctx, const char* command);

/* Number of metrics produced by the last run. */
size_t vexfem_metric_count(const vexfem_context* ctx);
/* Metric name by index; NULL if out of range. */
const char* vexfem_metric_name(const vexfem_context* ctx, size_t i);
/* Looks up a metric by name; returns VEXFEM_ERROR if absent. */
vexfem_status vexfem_metric_get(const vexfem_context* ctx, const char* name,
                                double* value);

#ifdef __cplusplus
}
#endif

#endif /* VEXFEM_H */
