#ifndef ARCHLINT_H
#define ARCHLINT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ArchlintStatus {
  ARCHLINT_STATUS_OK = 0,
  ARCHLINT_STATUS_NULL_ARGUMENT = 1,
  ARCHLINT_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed or ill-formed architecture description, plan or setting.
   */
  ARCHLINT_STATUS_PARSE_ERROR = 3,
  ARCHLINT_STATUS_IO_ERROR = 4,
  /**
   * A refactoring plan stopped at a failing step.
   */
  ARCHLINT_STATUS_PLAN_FAILED = 5,
  ARCHLINT_STATUS_PANIC = 6,
} ArchlintStatus;

/**
 * Annotations scanned from source trees.
 */
typedef struct ArchlintCode ArchlintCode;

/**
 * A parsed architecture description.
 */
typedef struct ArchlintModel ArchlintModel;

/**
 * Findings of a check or smell run.
 */
typedef struct ArchlintReport ArchlintReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next archlint call on this thread.
 */
const char *archlint_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *archlint_version(void);

/**
 * # Safety
 * `s` must come from an archlint `char **` out-parameter and not be freed yet.
 */
void archlint_string_free(char *s);

/**
 * Parses and validates an architecture description.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum ArchlintStatus archlint_model_parse(const char *text, struct ArchlintModel **out);

/**
 * Writes the canonical text form of `model` to `*out`.
 *
 * # Safety
 * `model` must be a live handle; `out` must be writable.
 */
enum ArchlintStatus archlint_model_serialize(const struct ArchlintModel *model, char **out);

/**
 * Number of components in `model`, 0 for NULL.
 *
 * # Safety
 * `model` must be NULL or a live handle.
 */
size_t archlint_model_component_count(const struct ArchlintModel *model);

/**
 * # Safety
 * `model` must be NULL or a handle not yet freed.
 */
void archlint_model_free(struct ArchlintModel *model);

/**
 * Scans `root_count` source roots with default settings, or with the
 * `key = value` lines in `settings` when it is not NULL.
 *
 * # Safety
 * `roots` must point to `root_count` NUL-terminated strings; `settings`
 * must be NULL or NUL-terminated; `out` must be writable.
 */
enum ArchlintStatus archlint_code_scan(const char *const *roots,
                                       size_t root_count,
                                       const char *settings,
                                       struct ArchlintCode **out);

/**
 * Number of annotation instances in `code`, 0 for NULL.
 *
 * # Safety
 * `code` must be NULL or a live handle.
 */
size_t archlint_code_instance_count(const struct ArchlintCode *code);

/**
 * Writes the extraction dump (JSON) of `code` to `*out`.
 *
 * # Safety
 * `code` must be a live handle; `out` must be writable.
 */
enum ArchlintStatus archlint_code_to_json(const struct ArchlintCode *code, char **out);

/**
 * # Safety
 * `code` must be NULL or a handle not yet freed.
 */
void archlint_code_free(struct ArchlintCode *code);

/**
 * Runs the conformance checks.
 *
 * # Safety
 * `model` and `code` must be live handles; `out` must be writable.
 */
enum ArchlintStatus archlint_check(const struct ArchlintModel *model,
                                   const struct ArchlintCode *code,
                                   struct ArchlintReport **out);

/**
 * Runs every smell with default thresholds.
 *
 * # Safety
 * `model` and `code` must be live handles; `out` must be writable.
 */
enum ArchlintStatus archlint_smells(const struct ArchlintModel *model,
                                    const struct ArchlintCode *code,
                                    struct ArchlintReport **out);

/**
 * Total findings in `report`, 0 for NULL.
 *
 * # Safety
 * `report` must be NULL or a live handle.
 */
size_t archlint_report_finding_count(const struct ArchlintReport *report);

/**
 * Findings of ERROR severity in `report`, 0 for NULL.
 *
 * # Safety
 * `report` must be NULL or a live handle.
 */
size_t archlint_report_error_count(const struct ArchlintReport *report);

/**
 * Writes the JSON rendering of `report` to `*out`.
 *
 * # Safety
 * `report` must be a live handle; `out` must be writable.
 */
enum ArchlintStatus archlint_report_to_json(const struct ArchlintReport *report, char **out);

/**
 * # Safety
 * `report` must be NULL or a handle not yet freed.
 */
void archlint_report_free(struct ArchlintReport *report);

/**
 * Applies the plan in `plan_text` to `model`. On success `*out_model`
 * receives the new model and `*out_impact` the impact report as JSON;
 * `model` itself is never changed. `code` may be NULL, in which case
 * the impact report lists no annotations.
 *
 * # Safety
 * `model` must be a live handle, `code` NULL or a live handle,
 * `plan_text` NUL-terminated, and both out-pointers writable.
 */
enum ArchlintStatus archlint_refactor(const struct ArchlintModel *model,
                                      const char *plan_text,
                                      const struct ArchlintCode *code,
                                      struct ArchlintModel **out_model,
                                      char **out_impact);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ARCHLINT_H */
