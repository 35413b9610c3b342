#ifndef COISO_COISO_H
#define COISO_COISO_H

/* C interface to libcoiso. Handles are opaque; every call returns a status.
 * A command call succeeds (COISO_OK) whenever it produced a report; the
 * verdict lives in the report's exit code:
 *   0 every verdict passed, 1 some verdict failed, 2 input error. */

#include <stddef.h>
#include <stdint.h>

#if defined(COISO_BUILDING_LIBRARY)
#define COISO_API __attribute__((visibility("default")))
#else
#define COISO_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum coiso_status {
  COISO_OK = 0,
  COISO_INVALID_ARGUMENT = 1,
  COISO_PARSE_ERROR = 2,
  COISO_OUT_OF_MEMORY = 3,
  COISO_INTERNAL_ERROR = 4
} coiso_status;

typedef struct coiso_problem coiso_problem;
typedef struct coiso_report coiso_report;

typedef struct coiso_options {
  int timing;        /* nonzero: add "timing_ms" (reports stop being reproducible) */
  int steps;         /* moser-verify RK4 steps */
  double tolerance;  /* moser-verify error tolerance */
  const char* box;   /* moser-verify sample box, exact decimal or p/q; NULL = 1/10 */
  int samples;
  uint64_t seed;
} coiso_options;

COISO_API void coiso_options_init(coiso_options* opts);

/* Copies the chart-file text. Does not parse it; see coiso_problem_validate. */
COISO_API coiso_status coiso_problem_new(const char* text, coiso_problem** out);
/* COISO_PARSE_ERROR with coiso_last_error() set when the file is malformed. */
COISO_API coiso_status coiso_problem_validate(const coiso_problem* problem);
COISO_API void coiso_problem_free(coiso_problem* problem);

COISO_API coiso_status coiso_check(const coiso_problem* p, const coiso_options* opts, coiso_report** out);
COISO_API coiso_status coiso_thicken(const coiso_problem* p, const coiso_options* opts, coiso_report** out);
COISO_API coiso_status coiso_nijenhuis(const coiso_problem* p, const coiso_options* opts, coiso_report** out);
COISO_API coiso_status coiso_reeb(const coiso_problem* p, const coiso_options* opts, coiso_report** out);
COISO_API coiso_status coiso_moser_verify(const coiso_problem* p1, const coiso_problem* p2,
                                          const coiso_options* opts, coiso_report** out);

/* Pretty-printed JSON, owned by the report. */
COISO_API const char* coiso_report_json(const coiso_report* r);
/* Emitted chart file (thicken), or "" for other commands. */
COISO_API const char* coiso_report_artifact(const coiso_report* r);
COISO_API int coiso_report_exit_code(const coiso_report* r);
COISO_API void coiso_report_free(coiso_report* r);

/* Caps worker threads for grid loops; 0 restores the default. */
COISO_API void coiso_set_threads(int n);

/* Message of the last failed call on this thread, or "". */
COISO_API const char* coiso_last_error(void);
COISO_API const char* coiso_version(void);

#ifdef __cplusplus
}
#endif

#endif
