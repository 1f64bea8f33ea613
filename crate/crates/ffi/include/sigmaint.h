#ifndef SIGMAINT_H
#define SIGMAINT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes. Values 0 to 4 coincide with the command-line exit codes.
 */
typedef enum SigmaintStatus {
  SIGMAINT_STATUS_OK = 0,
  SIGMAINT_STATUS_INTERNAL = 1,
  SIGMAINT_STATUS_HYPOTHESIS_FAILED = 2,
  SIGMAINT_STATUS_PARSE = 3,
  SIGMAINT_STATUS_ORACLE_FAILED = 4,
  SIGMAINT_STATUS_NULL_POINTER = 5,
  SIGMAINT_STATUS_INVALID_UTF8 = 6,
  SIGMAINT_STATUS_INVALID_ARGUMENT = 7,
  SIGMAINT_STATUS_NO_VALUE = 8,
  SIGMAINT_STATUS_PANIC = 9,
} SigmaintStatus;

/*
 A parsed problem file together with run overrides.
 */
typedef struct SigmaintProblem SigmaintProblem;

/*
 The outcome of a run; `json` is the same document the CLI prints.
 */
typedef struct SigmaintReport SigmaintReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Last error message on this thread, or NULL. Valid until the next call
 into this library from the same thread.
 */
const char *sigmaint_last_error(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *sigmaint_version(void);

/*
 Parses a TOML problem description.

 # Safety
 `toml` must be a NUL-terminated string and `out` a valid pointer. On
 success `*out` owns a handle to release with [`sigmaint_problem_free`].
 */
enum SigmaintStatus sigmaint_problem_parse(const char *toml, struct SigmaintProblem **out);

/*
 Overrides the seed of the functional and of the Newton starts.

 # Safety
 `problem` must be a live handle from [`sigmaint_problem_parse`].
 */
enum SigmaintStatus sigmaint_problem_set_seed(struct SigmaintProblem *problem, uint64_t seed);

/*
 Overrides the mode, named as on the command line (`intersect-mod2`,
 `crosscap-sum`, `oracle`, ...).

 # Safety
 `problem` must be a live handle and `mode` a NUL-terminated string.
 */
enum SigmaintStatus sigmaint_problem_set_mode(struct SigmaintProblem *problem, const char *mode);

/*
 # Safety
 `problem` must be NULL or a live handle; it is invalid afterwards.
 */
void sigmaint_problem_free(struct SigmaintProblem *problem);

/*
 Runs a problem. The return value mirrors the CLI exit code. `*out`
 receives a report whenever one exists, including for failed hypotheses
 and oracle failures, and must be released with [`sigmaint_report_free`].

 # Safety
 `problem` must be a live handle and `out` a valid pointer.
 */
enum SigmaintStatus sigmaint_run(const struct SigmaintProblem *problem,
                                 struct SigmaintReport **out);

/*
 The reported value, or `SIGMAINT_STATUS_NO_VALUE` when the mode produces
 none (verification) or the run failed.

 # Safety
 `report` must be a live handle and `value` a valid pointer.
 */
enum SigmaintStatus sigmaint_report_value(const struct SigmaintReport *report, int64_t *value);

/*
 The report's status as a result code.

 # Safety
 `report` must be NULL or a live handle.
 */
enum SigmaintStatus sigmaint_report_status(const struct SigmaintReport *report);

/*
 The JSON report, borrowed from the handle.

 # Safety
 `report` must be NULL or a live handle; the string dies with it.
 */
const char *sigmaint_report_json(const struct SigmaintReport *report);

/*
 # Safety
 `report` must be NULL or a live handle; it is invalid afterwards.
 */
void sigmaint_report_free(struct SigmaintReport *report);

/*
 Exact sign (-1, 0, 1) of the determinant of a row-major `n x n` integer
 matrix.

 # Safety
 `entries` must point to `n * n` readable values (it may be NULL when
 `n == 0`) and `sign` must be a valid pointer.
 */
enum SigmaintStatus sigmaint_det_sign(const int64_t *entries, uintptr_t n, int8_t *sign);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SIGMAINT_H */
