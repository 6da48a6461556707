/*===- fmr.h - Failure mode reasoning C API -------------------------------===*
 *
 * Part of the fmr project, under the Apache License v2.0.
 * SPDX-License-Identifier: Apache-2.0
 *
 *===----------------------------------------------------------------------===*
 *
 * C interface to the failure mode reasoning library. All state lives
 * behind opaque handles; every function that can fail returns fmr_status
 * and leaves a human-readable message retrievable with fmr_last_error()
 * (thread local). Strings returned by accessors stay owned by their handle
 * and are valid until it is freed.
 *
 * Typical use:
 *
 *   fmr_catalog *cat; fmr_program *prog; fmr_result *res;
 *   fmr_catalog_create(&cat);
 *   fmr_program_parse(cat, program_text, &prog);
 *   fmr_analysis_options opts; fmr_analysis_options_init(&opts);
 *   fmr_analyze(cat, prog, "o", 'f', &opts, NULL, NULL, &res);
 *   puts(fmr_result_text(res));
 *   fmr_result_free(res); fmr_program_free(prog); fmr_catalog_free(cat);
 *
 *===----------------------------------------------------------------------===*/

#ifndef FMR_FMR_H
#define FMR_FMR_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct fmr_catalog fmr_catalog;
typedef struct fmr_program fmr_program;
typedef struct fmr_result fmr_result;

typedef enum fmr_status {
  FMR_OK = 0,
  FMR_ERR_PARSE = 1,       /* malformed program/table/data text */
  FMR_ERR_INVALID_ARG = 2, /* null handle, bad mode letter, bad option */
  FMR_ERR_ANALYSIS = 3,    /* analysis or verification could not run */
  FMR_ERR_DATA = 4,        /* failure data missing or inconsistent */
  FMR_ERR_INTERNAL = 5
} fmr_status;

/* Library version string, e.g. "0.1.0". */
const char *fmr_version(void);

/* Message of the calling thread's most recent failure; empty if none. */
const char *fmr_last_error(void);

/* ---- catalog ---------------------------------------------------------- */

/* Creates a catalog holding the built-in block kinds. */
fmr_status fmr_catalog_create(fmr_catalog **out);

/* Adds user-defined kinds from an `fmb v1` table document. */
fmr_status fmr_catalog_load_fmb(fmr_catalog *catalog, const char *table_text);

void fmr_catalog_free(fmr_catalog *catalog);

/* ---- program ---------------------------------------------------------- */

/* Parses and validates an `fmrprog v1` document against the catalog. */
fmr_status fmr_program_parse(const fmr_catalog *catalog,
                             const char *program_text, fmr_program **out);

void fmr_program_free(fmr_program *program);

/* ---- analysis --------------------------------------------------------- */

typedef struct fmr_analysis_options {
  int practical;         /* 1: drop uncertain table rows (default) */
  int prune_match;       /* 1: do not track match-mode literals (default) */
  int include_uncertain; /* 1: use uncertain rows (theoretical only) */
  int with_provenance;   /* 1: record per-scenario derivations */
} fmr_analysis_options;

/* Fills *opts with the defaults described above. */
void fmr_analysis_options_init(fmr_analysis_options *opts);

/*
 * Backward analysis of one target: the output variable `target_var`
 * failing with mode `target_mode` (one of 'l','m','h' for reals,
 * 'f','m','t' for booleans). When `failure_data_json` is non-NULL the
 * result additionally carries the aggregated shortlist probability;
 * `aggregate_method` is "inclusion-exclusion"/"exact" (default when NULL)
 * or "rare-event"/"rare".
 */
fmr_status fmr_analyze(const fmr_catalog *catalog, const fmr_program *program,
                       const char *target_var, char target_mode,
                       const fmr_analysis_options *opts,
                       const char *failure_data_json,
                       const char *aggregate_method, fmr_result **out);

/*
 * Verifies block mode tables against exhaustive simulation on a witness
 * grid. `kind` selects one block kind, or NULL for every kind with
 * concrete semantics. `grid_delta` is the sample spacing around
 * comparator thresholds (pass 0 for the default 0.5); `threshold` is the
 * comparator constant used during verification (tables are independent of
 * it; 1.0 is a fine choice). The result "passes" when every checked kind
 * is sound, complete, and matches its observations row for row.
 */
fmr_status fmr_verify_fmb(const fmr_catalog *catalog, const char *kind,
                          double grid_delta, double threshold,
                          fmr_result **out);

/* ---- results ---------------------------------------------------------- */

/* JSON rendering (stable key order). Owned by the result. */
const char *fmr_result_json(const fmr_result *result);

/* Human-readable rendering. Owned by the result. */
const char *fmr_result_text(const fmr_result *result);

/* 1 if the result satisfies its command's success condition (analysis:
 * always; verification: all kinds conform), else 0. */
int fmr_result_passed(const fmr_result *result);

void fmr_result_free(fmr_result *result);

#ifdef __cplusplus
}
#endif

#endif /* FMR_FMR_H */
